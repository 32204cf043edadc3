//! Chevalley basis of the simply-laced Lie algebra attached to a root datum.
//!
//! Basis order: `h_1, …, h_r`, then `x_α` for the roots in the datum's
//! (lexicographic) order. Structure constants `N_{α,β}` are fixed by the
//! extraspecial-pair rule: positive roots are totally ordered by their
//! simple-root coordinate vectors, every extraspecial pair gets `N = +1`, and
//! all other constants follow from the standard identities.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, SurfaceKind};
use crate::roots::RootDatum;

/// Sparse vector: `(index, coefficient)` pairs with strictly increasing
/// indices and no zero coefficients.
pub type SparseVec = Vec<(usize, i64)>;

/// Accumulates `coeff · v` into a map-backed sum.
fn accumulate(acc: &mut BTreeMap<usize, i64>, coeff: i64, v: &[(usize, i64)]) {
    for &(i, c) in v {
        *acc.entry(i).or_insert(0) += coeff * c;
    }
}

fn finish(acc: BTreeMap<usize, i64>) -> SparseVec {
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    datum: RootDatum,
    dim: usize,
    /// `[b_i, b_j]` at `i * dim + j`.
    table: Vec<SparseVec>,
    /// Index of `−α` for every root `α`.
    negative: Vec<usize>,
    /// `N_{α,β}` for root pairs with `α + β` a root, else 0; row-major.
    structure: Vec<i64>,
    /// Root index of `α + β`, if it is a root.
    sums: Vec<Option<usize>>,
}

/// A failed check on a basis triple or pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub detail: String,
}

impl ChevalleyAlgebra {
    /// Builds the algebra and verifies antisymmetry, the Serre relations and
    /// the Jacobi identity on every basis triple. Even for E8 the sweep takes
    /// a fraction of a second, since most basis brackets vanish.
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        Self::from_datum(RootDatum::new(kind)?)
    }

    pub fn from_datum(datum: RootDatum) -> Result<Self> {
        let r = datum.rank();
        let m = datum.roots().len();
        let dim = r + m;

        let negative: Vec<usize> = datum
            .roots()
            .iter()
            .map(|a| datum.root_index(&-a).expect("root set is closed under negation"))
            .collect();
        let mut sums = vec![None; m * m];
        for i in 0..m {
            for j in 0..m {
                sums[i * m + j] = datum.root_index(&(&datum.roots()[i] + &datum.roots()[j]));
            }
        }

        let structure = extraspecial_constants(&datum, &negative, &sums)?;

        let mut table = vec![SparseVec::new(); dim * dim];
        for i in 0..r {
            for k in 0..m {
                // [h_i, x_α] = ⟨α, α_i⟩ x_α with ⟨α, α_i⟩ = −(α·α_i)
                let c = -datum.lattice().ip(&datum.roots()[k], &datum.simple()[i]);
                if c != 0 {
                    table[i * dim + r + k] = vec![(r + k, c)];
                    table[(r + k) * dim + i] = vec![(r + k, -c)];
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                let entry = if negative[a] == b {
                    // [x_α, x_{−α}] = h_α
                    datum
                        .coords(a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect()
                } else if let Some(s) = sums[a * m + b] {
                    vec![(r + s, structure[a * m + b])]
                } else {
                    SparseVec::new()
                };
                table[(r + a) * dim + r + b] = entry;
            }
        }

        let alg = ChevalleyAlgebra {
            datum,
            dim,
            table,
            negative,
            structure,
            sums,
        };
        if let Some(v) = alg.relation_violations().into_iter().next() {
            return Err(Error::Consistency(format!(
                "relation check failed on {:?}: {}",
                v.indices, v.detail
            )));
        }
        if let Some(v) = alg.jacobi_violations_exhaustive(1).into_iter().next() {
            return Err(Error::Consistency(format!(
                "Jacobi identity fails on basis triple {:?}: {}",
                v.indices, v.detail
            )));
        }
        Ok(alg)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn kind(&self) -> SurfaceKind {
        self.datum.kind()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn root_count(&self) -> usize {
        self.datum.roots().len()
    }

    /// Basis index of `x_α` for root index `k`.
    pub fn root_basis(&self, k: usize) -> usize {
        self.rank() + k
    }

    /// Root index of a basis element, if it is some `x_α`.
    pub fn basis_root(&self, b: usize) -> Option<usize> {
        (b >= self.rank() && b < self.dim).then(|| b - self.rank())
    }

    pub fn root_of(&self, b: usize) -> Option<&DivisorClass> {
        self.basis_root(b).map(|k| &self.datum.roots()[k])
    }

    pub fn negative(&self, k: usize) -> usize {
        self.negative[k]
    }

    /// Root index of `α + β`, if it is a root.
    pub fn root_sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums[a * self.root_count() + b]
    }

    /// `N_{α,β}` (zero unless `α + β` is a root).
    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        self.structure[a * self.root_count() + b]
    }

    /// Labels `h_1, …` and `x[coeffs]` in basis order.
    pub fn basis_labels(&self) -> Vec<String> {
        (0..self.rank())
            .map(|i| format!("h_{}", i + 1))
            .chain(self.datum.roots().iter().map(|a| format!("x{a}")))
            .collect()
    }

    /// Bracket of two basis elements.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i * self.dim + j]
    }

    fn check_vec(&self, v: &[(usize, i64)]) -> Result<()> {
        if let Some(&(i, _)) = v.iter().find(|(i, _)| *i >= self.dim) {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.dim,
            });
        }
        Ok(())
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Result<SparseVec> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for &(i, a) in x {
            for &(j, b) in y {
                accumulate(&mut acc, a * b, self.basis_bracket(i, j));
            }
        }
        finish(acc)
    }

    /// `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]` for basis elements.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for &(t, coeff) in self.basis_bracket(b, c) {
                accumulate(&mut acc, coeff, self.basis_bracket(a, t));
            }
        }
        finish(acc)
    }

    /// Jacobi sweep over all basis triples; stops after `limit` violations.
    pub fn jacobi_violations_exhaustive(&self, limit: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in j..self.dim {
                    let v = self.jacobiator(i, j, k);
                    if !v.is_empty() {
                        out.push(Violation {
                            indices: vec![i, j, k],
                            detail: format!("jacobiator {v:?}"),
                        });
                        if out.len() >= limit {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    /// Jacobi check on `count` basis triples drawn from a seeded generator.
    pub fn jacobi_violations_sampled(&self, count: usize, seed: u64, limit: usize) -> Vec<Violation> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..count {
            let (i, j, k) = (
                rng.gen_range(0..self.dim),
                rng.gen_range(0..self.dim),
                rng.gen_range(0..self.dim),
            );
            let v = self.jacobiator(i, j, k);
            if !v.is_empty() {
                out.push(Violation {
                    indices: vec![i, j, k],
                    detail: format!("jacobiator {v:?}"),
                });
                if out.len() >= limit {
                    break;
                }
            }
        }
        out
    }

    /// Checks antisymmetry and relations (a)–(d) on every table entry:
    ///
    /// * (a) `[h_i, h_j] = 0`
    /// * (b) `[h_i, x_α] = ⟨α, α_i⟩ x_α`
    /// * (c) `[x_α, x_{−α}] = h_α`, an integral combination of the `h_i`
    /// * (d) `[x_α, x_β] = ±(r+1) x_{α+β}` when `α+β` is a root, where `r` is
    ///   the largest integer with `β − rα` a root, and `0` when `α+β` is
    ///   neither a root nor zero.
    pub fn relation_violations(&self) -> Vec<Violation> {
        let r = self.rank();
        let m = self.root_count();
        let lat = self.datum.lattice();
        let mut out = Vec::new();
        let mut fail = |indices: Vec<usize>, detail: String| out.push(Violation { indices, detail });

        for i in 0..self.dim {
            for j in 0..self.dim {
                let forward = self.basis_bracket(i, j);
                let backward: SparseVec = self.basis_bracket(j, i).iter().map(|&(t, c)| (t, -c)).collect();
                if forward != backward.as_slice() {
                    fail(vec![i, j], "antisymmetry".into());
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                if !self.basis_bracket(i, j).is_empty() {
                    fail(vec![i, j], "(a) [h_i, h_j] != 0".into());
                }
            }
            for k in 0..m {
                let c = -lat.ip(&self.datum.roots()[k], &self.datum.simple()[i]);
                let expect: SparseVec = if c == 0 { vec![] } else { vec![(r + k, c)] };
                if self.basis_bracket(i, r + k) != expect.as_slice() {
                    fail(vec![i, r + k], "(b) Cartan action".into());
                }
            }
        }
        for a in 0..m {
            let alpha = &self.datum.roots()[a];
            for b in 0..m {
                let beta = &self.datum.roots()[b];
                let entry = self.basis_bracket(r + a, r + b);
                if self.negative[a] == b {
                    let mut h = DivisorClass::zero(lat.rank());
                    let ok = entry.iter().all(|&(t, c)| {
                        if t < r {
                            h = h.add_scaled(c, &self.datum.simple()[t]);
                            true
                        } else {
                            false
                        }
                    });
                    if !ok || &h != alpha {
                        fail(vec![r + a, r + b], "(c) [x_α, x_−α] != h_α".into());
                    }
                } else if let Some(s) = self.root_sum(a, b) {
                    let mut rr = 0;
                    while self.datum.root_index(&beta.add_scaled(-(rr + 1), alpha)).is_some() {
                        rr += 1;
                    }
                    let ok = entry.len() == 1 && entry[0].0 == r + s && entry[0].1.abs() == rr + 1;
                    if !ok {
                        fail(vec![r + a, r + b], format!("(d) expected ±{} x_(α+β)", rr + 1));
                    }
                } else if !entry.is_empty() {
                    fail(vec![r + a, r + b], "(d) bracket should vanish".into());
                }
            }
        }
        out
    }

    /// One JSON object per nonzero bracket entry, in basis order:
    /// `{"i": i, "j": j, "out": [[index, coeff], …]}`.
    pub fn export_json_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let entry = self.basis_bracket(i, j);
                if entry.is_empty() {
                    continue;
                }
                let out: Vec<[i64; 2]> = entry.iter().map(|&(t, c)| [t as i64, c]).collect();
                lines.push(serde_json::json!({"i": i, "j": j, "out": out}).to_string());
            }
        }
        lines
    }
}

/// Structure constants by the extraspecial-pair algorithm.
///
/// A pair `(α, β)` of positive roots is special if `α ≺ β` and `α + β` is a
/// root; it is extraspecial if `α` is minimal among special pairs with the
/// same sum. Sums are processed in increasing order. For a special pair that
/// is not extraspecial, with `(ε, γ)` extraspecial for the same sum `ξ`, the
/// four-root identity gives (simply laced, `N_{ε,γ} = 1`)
/// `N_{α,β} = N_{β,−ε} N_{α,−γ} + N_{−ε,α} N_{β,−γ}`,
/// whose right-hand side only involves sums smaller than `ξ`.
fn extraspecial_constants(datum: &RootDatum, negative: &[usize], sums: &[Option<usize>]) -> Result<Vec<i64>> {
    let m = datum.roots().len();
    let positive: Vec<usize> = (0..m).filter(|&i| datum.is_positive(i)).collect();
    // ≺ on positive roots: lexicographic on simple-root coordinates
    let mut order = positive.clone();
    order.sort_by(|&a, &b| datum.coords(a).cmp(datum.coords(b)));
    let mut rank_of = vec![usize::MAX; m];
    for (pos, &i) in order.iter().enumerate() {
        rank_of[i] = pos;
    }

    let mut special: Vec<Option<i64>> = vec![None; m * m];
    for &xi in &order {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &a in &order {
            for &b in &order {
                if rank_of[a] < rank_of[b] && sums[a * m + b] == Some(xi) {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        pairs.sort_by_key(|&(a, _)| rank_of[a]);
        let (eps, gam) = pairs[0];
        special[eps * m + gam] = Some(1);
        for &(a, b) in &pairs[1..] {
            let lookup = |x: usize, y: usize| general_constant(x, y, datum, negative, sums, &rank_of, &special);
            let v = lookup(b, negative[eps])? * lookup(a, negative[gam])?
                + lookup(negative[eps], a)? * lookup(b, negative[gam])?;
            if v.abs() != 1 {
                return Err(Error::Consistency(format!(
                    "structure constant N({a},{b}) = {v} is not ±1"
                )));
            }
            special[a * m + b] = Some(v);
        }
    }

    let mut full = vec![0i64; m * m];
    for a in 0..m {
        for b in 0..m {
            if sums[a * m + b].is_some() {
                full[a * m + b] = general_constant(a, b, datum, negative, sums, &rank_of, &special)?;
            }
        }
    }
    Ok(full)
}

/// `N_{ξ,η}` for arbitrary roots, reduced to a special pair by
/// `N(ξ,η) = −N(η,ξ)`, `N(−ξ,−η) = −N(ξ,η)` and the cyclic rule
/// `N(ξ,η) = N(η,ζ) = N(ζ,ξ)` when `ξ + η + ζ = 0`.
fn general_constant(
    x: usize,
    y: usize,
    datum: &RootDatum,
    negative: &[usize],
    sums: &[Option<usize>],
    rank_of: &[usize],
    special: &[Option<i64>],
) -> Result<i64> {
    let m = negative.len();
    let Some(s) = sums[x * m + y] else {
        return Ok(0);
    };
    let px = datum.is_positive(x);
    let py = datum.is_positive(y);
    let missing = || Error::Consistency(format!("structure constant for ({x},{y}) requested out of order"));
    if px && py {
        return if rank_of[x] < rank_of[y] {
            special[x * m + y].ok_or_else(missing)
        } else {
            special[y * m + x].map(|v| -v).ok_or_else(missing)
        };
    }
    if !px && !py {
        return general_constant(negative[x], negative[y], datum, negative, sums, rank_of, special).map(|v| -v);
    }
    let z = negative[s];
    if datum.is_positive(z) == py {
        general_constant(y, z, datum, negative, sums, rank_of, special)
    } else {
        general_constant(z, x, datum, negative, sums, rank_of, special)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2() {
        let alg = ChevalleyAlgebra::new(SurfaceKind::z(2).unwrap()).unwrap();
        assert_eq!(alg.dim(), 3);
        // roots sorted: −α = (.., −1, 1) before α = (.., 1, −1)
        let lat = alg.datum().lattice();
        let alpha = &lat.l(1) - &lat.l(2);
        let a = alg.root_basis(alg.datum().root_index(&alpha).unwrap());
        let na = alg.root_basis(alg.datum().root_index(&-&alpha).unwrap());
        assert_eq!(alg.basis_bracket(a, na), &[(0, 1)]);
        assert_eq!(alg.basis_bracket(0, a), &[(a, 2)]);
        assert_eq!(alg.basis_bracket(0, na), &[(na, -2)]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(ChevalleyAlgebra::new(SurfaceKind::d(3).unwrap()).unwrap().dim(), 15);
        assert_eq!(ChevalleyAlgebra::new(SurfaceKind::e(6).unwrap()).unwrap().dim(), 78);
    }

    #[test]
    fn a2_bracket_has_unit_coefficient() {
        let alg = ChevalleyAlgebra::new(SurfaceKind::z(3).unwrap()).unwrap();
        let lat = alg.datum().lattice();
        let idx = |x: DivisorClass| alg.root_basis(alg.datum().root_index(&x).unwrap());
        let a = idx(&lat.l(1) - &lat.l(2));
        let b = idx(&lat.l(2) - &lat.l(3));
        let c = idx(&lat.l(1) - &lat.l(3));
        let out = alg.bracket(&[(a, 1)], &[(b, 1)]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, c);
        assert_eq!(out[0].1.abs(), 1);
        // α + β = 2(l_1 − l_2) … is not a root
        assert!(alg.bracket(&[(a, 1)], &[(a, 1)]).unwrap().is_empty());
    }

    #[test]
    fn bracket_rejects_bad_index() {
        let alg = ChevalleyAlgebra::new(SurfaceKind::z(2).unwrap()).unwrap();
        assert_eq!(
            alg.bracket(&[(7, 1)], &[(0, 1)]),
            Err(Error::IndexOutOfRange { index: 7, size: 3 })
        );
    }

    #[test]
    fn export_lines_parse() {
        let alg = ChevalleyAlgebra::new(SurfaceKind::z(2).unwrap()).unwrap();
        let lines = alg.export_json_lines();
        // [h,x], [h,x'], [x,h], [x',h], [x,x'], [x',x]
        assert_eq!(lines.len(), 6);
        for line in lines {
            let v: serde_json::Value = serde_json::from_str(&line).unwrap();
            assert!(v["out"].is_array());
        }
    }
}
