//! Small exact integer linear algebra: kernels, echelon forms, determinants,
//! Smith invariants, rational inverses, and short-vector enumeration in
//! positive-definite integral lattices.
//!
//! Matrices here are tiny (at most a dozen rows), so everything is dense and
//! intermediate values are carried in `i128`. Any overflow panics.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

fn to_i64(v: i128) -> i64 {
    i64::try_from(v).expect("integer overflow narrowing i128 to i64")
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a*x + b*y = g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// A ℤ-basis of `{x ∈ ℤ^ncols : row·x = 0 for every row}`.
///
/// Unimodular column operations bring `rows` to column echelon form while the
/// same operations are applied to an identity block; the identity columns
/// sitting under zero columns of the echelon form are the kernel basis. The
/// result is saturated (primitive) because the transform is unimodular.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let m = rows.len();
    for r in rows {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    // cols[j] = (A-part of column j, identity part of column j)
    let mut a: Vec<Vec<i128>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j] as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|j| (0..ncols).map(|i| i128::from(i == j)).collect())
        .collect();

    let mut pivot = 0usize;
    for row in 0..m {
        if pivot == ncols {
            break;
        }
        // Fold every column j > pivot into the pivot column by gcd steps.
        for j in (pivot + 1)..ncols {
            let x = a[pivot][row];
            let y = a[j][row];
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            // [col_p, col_j] <- [s*col_p + t*col_j, -yg*col_p + xg*col_j]; det = 1
            for k in 0..m {
                let (cp, cj) = (a[pivot][k], a[j][k]);
                a[pivot][k] = s * cp + t * cj;
                a[j][k] = -yg * cp + xg * cj;
            }
            for k in 0..ncols {
                let (cp, cj) = (u[pivot][k], u[j][k]);
                u[pivot][k] = s * cp + t * cj;
                u[j][k] = -yg * cp + xg * cj;
            }
        }
        if a[pivot][row] != 0 {
            pivot += 1;
        }
    }
    let mut kernel: Vec<Vec<i64>> = u[pivot..]
        .iter()
        .map(|c| c.iter().map(|&v| to_i64(v)).collect())
        .collect();
    size_reduce(&mut kernel);
    kernel
}

/// A ℤ-basis of `span_ℚ(rows) ∩ ℤ^ncols`, the saturation of the row lattice.
///
/// Runs the same column elimination as [`integer_kernel`] but tracks the
/// inverse transform `U⁻¹`. If `A·U = [E | 0]` with `E` of full rank `d`,
/// the first `d` rows of the unimodular `U⁻¹` span the rational row space of
/// `A` and form a ℤ-basis of its intersection with `ℤ^ncols`.
pub fn saturate(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let m = rows.len();
    for r in rows {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    let mut a: Vec<Vec<i128>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j] as i128).collect())
        .collect();
    let mut inv: Vec<Vec<i128>> = (0..ncols)
        .map(|j| (0..ncols).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut pivot = 0usize;
    for row in 0..m {
        if pivot == ncols {
            break;
        }
        for j in (pivot + 1)..ncols {
            let x = a[pivot][row];
            let y = a[j][row];
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            for k in 0..m {
                let (cp, cj) = (a[pivot][k], a[j][k]);
                a[pivot][k] = s * cp + t * cj;
                a[j][k] = -yg * cp + xg * cj;
            }
            // inverse of the column step, applied to the rows of U⁻¹
            for k in 0..ncols {
                let (rp, rj) = (inv[pivot][k], inv[j][k]);
                inv[pivot][k] = xg * rp + yg * rj;
                inv[j][k] = -t * rp + s * rj;
            }
        }
        if a[pivot][row] != 0 {
            pivot += 1;
        }
    }
    let mut basis: Vec<Vec<i64>> = inv[..pivot]
        .iter()
        .map(|r| r.iter().map(|&v| to_i64(v)).collect())
        .collect();
    size_reduce(&mut basis);
    basis
}

/// Greedy pairwise reduction in the Euclidean norm. Keeps the lattice and
/// shrinks coefficients, which keeps downstream rationals small.
fn size_reduce(basis: &mut [Vec<i64>]) {
    let dot = |a: &[i64], b: &[i64]| -> i128 { a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum() };
    let mut changed = true;
    let mut rounds = 0;
    while changed && rounds < 64 {
        changed = false;
        rounds += 1;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let bb = dot(&basis[j], &basis[j]);
                if bb == 0 {
                    continue;
                }
                let ab = dot(&basis[i], &basis[j]);
                // nearest integer to ab/bb
                let q = (2 * ab + bb).div_euclid(2 * bb);
                if q != 0 {
                    let bj = basis[j].clone();
                    let cand: Vec<i64> = basis[i]
                        .iter()
                        .zip(&bj)
                        .map(|(&x, &y)| to_i64(x as i128 - q * y as i128))
                        .collect();
                    if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Rank over ℚ.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    ncols - integer_kernel(rows, ncols).len()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of a non-square matrix");
            r.iter().map(|&v| v as i128).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Smith normal form invariant factors `d_1 | d_2 | …` of a square or
/// rectangular integer matrix (zeros omitted).
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // choose smallest nonzero |entry| in the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the remaining block by p
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t into the pivot slot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(to_i64(a[t][t].abs()));
        t += 1;
    }
    out
}

/// Inverse of a square integer matrix over ℚ, or `None` if singular.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = r.iter().map(|&v| Rational::from_integer(v)).collect();
            row.extend((0..n).map(|_| Rational::zero()));
            row
        })
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[n + i] = Rational::one();
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Leading principal minors all positive.
pub fn is_positive_definite(gram: &[Vec<i64>]) -> bool {
    (1..=gram.len()).all(|k| {
        let minor: Vec<Vec<i64>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor) > 0
    })
}

fn quad(gram: &[Vec<i64>], x: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in gram.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let mut s = 0i128;
        for (j, &g) in row.iter().enumerate() {
            s += g as i128 * x[j] as i128;
        }
        acc += x[i] as i128 * s;
    }
    acc
}

/// LLL reduction (δ = 3/4) of the lattice with positive-definite Gram matrix
/// `gram`. Returns a unimodular matrix whose rows are the reduced basis in the
/// original coordinates. Floating point is used only to drive the choice of
/// integer operations; the transform itself is exact.
fn lll_transform(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    let mut b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let ip = |u: &[i64], v: &[i64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += u[i] as f64 * gram[i][j] as f64 * v[j] as f64;
            }
        }
        s
    };
    let gso = |b: &[Vec<i64>]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bstar: Vec<f64> = vec![0.0; n];
        // Gram–Schmidt via the Gram matrix of the current basis
        let g: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| ip(&b[i], &b[j])).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                let mut s = g[i][j];
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                }
                mu[i][j] = s / bstar[j];
            }
            let mut s = g[i][i];
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bstar[k];
            }
            bstar[i] = s;
        }
        (mu, bstar)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&b);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, bstar) = gso(&b);
        if bstar[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// All nonzero `x ∈ ℤ^n` with `xᵀ·gram·x == norm` (exact), for a
/// positive-definite integral Gram matrix. Fincke–Pohst enumeration over an
/// LLL-reduced basis; floating bounds carry slack and every candidate is
/// re-checked in exact arithmetic.
pub fn vectors_of_norm(gram: &[Vec<i64>], norm: i64) -> Vec<Vec<i64>> {
    let n = gram.len();
    if n == 0 || norm <= 0 {
        return vec![];
    }
    let t = lll_transform(gram);
    // reduced Gram G' = T G Tᵀ
    let g: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = 0i128;
                    for a in 0..n {
                        for c in 0..n {
                            s += t[i][a] as i128 * gram[a][c] as i128 * t[j][c] as i128;
                        }
                    }
                    to_i64(s)
                })
                .collect()
        })
        .collect();
    // Cholesky-style decomposition q_ii, q_ij
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = norm as f64 + 1e-6 * (1.0 + norm as f64);
    let mut found = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(i: usize, n: usize, q: &[Vec<f64>], remaining: f64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let mut center = 0.0;
        for j in i + 1..n {
            center -= q[i][j] * x[j] as f64;
        }
        let radius = (remaining.max(0.0) / q[i][i]).sqrt() + 1e-9;
        let lo = (center - radius).ceil() as i64;
        let hi = (center + radius).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - center;
            let rem = remaining - q[i][i] * d * d;
            if rem < -1e-7 {
                continue;
            }
            if i == 0 {
                out.push(x.clone());
            } else {
                rec(i - 1, n, q, rem, x, out);
            }
        }
        x[i] = 0;
    }
    rec(n - 1, n, &q, bound, &mut x, &mut found);
    let mut result: Vec<Vec<i64>> = found
        .into_iter()
        .filter(|y| y.iter().any(|&v| v != 0) && quad(&g, y) == norm as i128)
        .map(|y| {
            // back to original coordinates: x = yᵀ T
            (0..n)
                .map(|c| to_i64((0..n).map(|r| y[r] as i128 * t[r][c] as i128).sum()))
                .collect()
        })
        .collect();
    result.sort();
    result.dedup();
    result
}

/// Solves `m · x = rhs` over ℚ for square nonsingular `m`.
pub fn solve_rational(inverse: &[Vec<Rational>], rhs: &[Rational]) -> Vec<Rational> {
    inverse
        .iter()
        .map(|row| row.iter().zip(rhs).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// True when every entry of the rational vector is an integer.
pub fn all_integral(v: &[Rational]) -> bool {
    v.iter().all(|r| r.is_integer())
}

#[allow(dead_code)]
pub(crate) fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero)
}
