//! Roots, exceptional classes, rulings and spinor weights of the Picard
//! lattices, together with the root datum built from the standard simple
//! roots.
//!
//! Every enumerator reduces the defining quadratic conditions to "integer
//! vectors `c` with prescribed `Σc` and `Σc²`", which is a finite search once
//! the remaining coefficients are pinned down. The bounds are derived next to
//! each enumerator.

pub mod dynkin;
pub mod weyl;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::{self, Rational};
use crate::picard::{DivisorClass, Family, PicardLattice, SurfaceKind};

pub use dynkin::{classify, weyl_group_order, DynkinComponent, DynkinType};
pub use weyl::{
    enumerate_exceptional_systems, highest_root, reflect, weyl_orbit, weyl_orbit_with_cap, ExceptionalSystem,
    HighestRoot, DEFAULT_ORBIT_CAP,
};

/// All integer vectors of length `len` with `Σc = sum` and `Σc² = sq`,
/// in lexicographic order.
///
/// Pruning: with `r` coordinates left, a remaining sum `s` and square sum `q`
/// are jointly feasible only if `q ≥ 0`, `s² ≤ r·q` (Cauchy–Schwarz) and
/// `q ≡ s (mod 2)` (since `c² ≡ c`).
pub fn vectors_with_sum_and_square(len: usize, sum: i64, sq: i64) -> Vec<Vec<i64>> {
    fn feasible(r: i64, s: i64, q: i64) -> bool {
        if r == 0 {
            return s == 0 && q == 0;
        }
        q >= 0 && s * s <= r * q && (q - s).rem_euclid(2) == 0
    }
    fn go(pos: usize, len: usize, s: i64, q: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let left = (len - pos) as i64;
        if !feasible(left, s, q) {
            return;
        }
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let bound = (q as f64).sqrt() as i64 + 1;
        for c in -bound..=bound {
            if c * c > q {
                continue;
            }
            cur.push(c);
            go(pos + 1, len, s - c, q - c * c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, sum, sq, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Classes with `x² = t` and `x·K = k` on `X_n`, writing `x = a h + Σ c_i l_i`.
///
/// Then `Σc = −3a − k` and `Σc² = a² − t`, and Cauchy–Schwarz gives
/// `(3a + k)² ≤ n (a² − t)`, i.e. `(9 − n)a² + 6ka + k² + nt ≤ 0`. For `n ≤ 8`
/// the leading coefficient is at least 1, so `a² ≤ 6|k||a| + n|t|` and
/// `|a| ≤ 6|k| + n|t| + 1`; every `a` in that window is tested.
fn enumerate_x(kind: SurfaceKind, t: i64, k: i64) -> Vec<DivisorClass> {
    let n = kind.n() as i64;
    debug_assert!(n <= 8);
    let bound = 6 * k.abs() + n * t.abs() + 1;
    let mut out = Vec::new();
    for a in -bound..=bound {
        if (9 - n) * a * a + 6 * k * a + k * k + n * t > 0 {
            continue;
        }
        for c in vectors_with_sum_and_square(kind.n(), -3 * a - k, a * a - t) {
            let mut v = Vec::with_capacity(kind.n() + 1);
            v.push(a);
            v.extend(c);
            out.push(DivisorClass::new(v));
        }
    }
    out.sort();
    out
}

/// Classes with `x² = t`, `x·K = k`, `x·f = a` on `Y_n`/`Z_n`, writing
/// `x = a s + b f + Σ c_i l_i` (note `x·f` is the `s`-coefficient).
///
/// With `S = Σc` we get `b = (−a − k − S)/2` and
/// `Σc² = −a² + 2ab − t = q₀ − aS` where `q₀ = −2a² − ak − t`.
/// Cauchy–Schwarz `S² ≤ n(q₀ − aS)` then bounds `|S| ≤ n|a| + n|q₀| + 1`.
/// If `fix_s` is set the extra condition `x·s = b − a = 0` is imposed.
fn enumerate_y(kind: SurfaceKind, t: i64, k: i64, a: i64, fix_s: bool) -> Vec<DivisorClass> {
    let n = kind.n() as i64;
    let q0 = -2 * a * a - a * k - t;
    let bound = n * a.abs() + n * q0.abs() + 1;
    let mut out = Vec::new();
    for s in -bound..=bound {
        let twice_b = -a - k - s;
        if twice_b.rem_euclid(2) != 0 {
            continue;
        }
        let b = twice_b / 2;
        if fix_s && b != a {
            continue;
        }
        let q = q0 - a * s;
        if q < 0 || s * s > n * q {
            continue;
        }
        for c in vectors_with_sum_and_square(kind.n(), s, q) {
            let mut v = Vec::with_capacity(kind.n() + 2);
            v.push(a);
            v.push(b);
            v.extend(c);
            out.push(DivisorClass::new(v));
        }
    }
    out.sort();
    out
}

fn enumerate_conditions(kind: SurfaceKind, t: i64, k: i64) -> Vec<DivisorClass> {
    match kind.family() {
        Family::En => enumerate_x(kind, t, k),
        Family::Dn => enumerate_y(kind, t, k, 0, false),
        Family::An => enumerate_y(kind, t, k, 0, true),
    }
}

/// The root set: `x² = −2`, `x·K = 0`, plus `x·f = 0` (Dn) and `x·f = x·s = 0`
/// (An). Sorted lexicographically.
pub fn enumerate_roots(kind: SurfaceKind) -> Vec<DivisorClass> {
    enumerate_conditions(kind, -2, 0)
}

/// The exceptional classes `I_n`: `x² = x·K = −1` with the same extra
/// conditions as the roots.
pub fn enumerate_exceptional(kind: SurfaceKind) -> Vec<DivisorClass> {
    enumerate_conditions(kind, -1, -1)
}

/// Rulings `R² = 0`, `R·K = −2` on `X_n`.
pub fn enumerate_rulings(kind: SurfaceKind) -> Result<Vec<DivisorClass>> {
    if kind.family() != Family::En {
        return Err(Error::WrongFamily {
            op: "enumerate_rulings",
            expected: "En",
            found: kind.to_string(),
        });
    }
    Ok(enumerate_x(kind, 0, -2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpinorSign {
    Plus,
    Minus,
}

impl SpinorSign {
    pub fn symbol(self) -> &'static str {
        match self {
            SpinorSign::Plus => "+",
            SpinorSign::Minus => "-",
        }
    }
}

/// Spinor weights on `Y_n`: `S² = S·K = −1, S·f = 1` for `+`, and
/// `T² = −2, T·K = 0, T·f = 1` for `−`.
pub fn enumerate_spinor_weights(kind: SurfaceKind, sign: SpinorSign) -> Result<Vec<DivisorClass>> {
    if kind.family() != Family::Dn {
        return Err(Error::WrongFamily {
            op: "enumerate_spinor_weights",
            expected: "Dn",
            found: kind.to_string(),
        });
    }
    Ok(match sign {
        SpinorSign::Plus => enumerate_y(kind, -1, -1, 1, false),
        SpinorSign::Minus => enumerate_y(kind, -2, 0, 1, false),
    })
}

/// The standard simple roots `α_1, …, α_r`, in their conventional order.
///
/// * `E_n`: `l_1−l_2, l_2−l_3, h−l_1−l_2−l_3, l_3−l_4, …, l_{n−1}−l_n`
/// * `D_n`: `f−l_1−l_2, l_1−l_2, l_2−l_3, …, l_{n−1}−l_n`
/// * `A_{n−1}` on `Z_n`: `l_1−l_2, …, l_{n−1}−l_n`
pub fn simple_roots(kind: SurfaceKind) -> Vec<DivisorClass> {
    let lat = PicardLattice::new(kind);
    let n = kind.n();
    let diff = |i: usize| &lat.l(i) - &lat.l(i + 1);
    match kind.family() {
        Family::En => {
            let mut out = vec![diff(1), diff(2)];
            out.push(&(&(&lat.h() - &lat.l(1)) - &lat.l(2)) - &lat.l(3));
            out.extend((3..n).map(diff));
            out
        }
        Family::Dn => {
            let mut out = vec![&(&lat.f() - &lat.l(1)) - &lat.l(2)];
            out.extend((1..n).map(diff));
            out
        }
        Family::An => (1..n).map(diff).collect(),
    }
}

/// Simple roots, all roots, Cartan matrix and Dynkin label for a kind, plus
/// the lookup tables the algebra and moduli code share.
#[derive(Clone, Debug)]
pub struct RootDatum {
    kind: SurfaceKind,
    lattice: PicardLattice,
    simple: Vec<DivisorClass>,
    roots: Vec<DivisorClass>,
    cartan: Vec<Vec<i64>>,
    label: String,
    index: HashMap<DivisorClass, usize>,
    coords: Vec<Vec<i64>>,
    inverse_cartan: Vec<Vec<Rational>>,
}

impl RootDatum {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let lattice = PicardLattice::new(kind);
        let simple = simple_roots(kind);
        let roots = enumerate_roots(kind);
        let cartan: Vec<Vec<i64>> = simple
            .iter()
            .map(|a| simple.iter().map(|b| -lattice.ip(a, b)).collect())
            .collect();
        let label = classify(&roots, &lattice)?.to_string();
        let inverse_cartan = intmat::rational_inverse(&cartan)
            .ok_or_else(|| Error::Consistency(format!("Cartan matrix of {kind} is singular")))?;
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut datum = RootDatum {
            kind,
            lattice,
            simple,
            roots,
            cartan,
            label,
            index,
            coords: Vec::new(),
            inverse_cartan,
        };
        let coords = datum
            .roots
            .iter()
            .map(|r| datum.simple_coordinates(r))
            .collect::<Result<Vec<_>>>()?;
        datum.coords = coords;
        Ok(datum)
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn simple(&self) -> &[DivisorClass] {
        &self.simple
    }

    pub fn roots(&self) -> &[DivisorClass] {
        &self.roots
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Position of a root in [`RootDatum::roots`].
    pub fn root_index(&self, x: &DivisorClass) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Coordinates of the `i`-th root in the simple-root basis.
    pub fn coords(&self, i: usize) -> &[i64] {
        &self.coords[i]
    }

    /// A root is positive when its simple-root coordinates are nonnegative.
    pub fn is_positive(&self, i: usize) -> bool {
        self.coords[i].iter().all(|&c| c >= 0)
    }

    pub fn height(&self, i: usize) -> i64 {
        self.coords[i].iter().sum()
    }

    /// Coordinates of a class of `K^⊥ ∩ span(roots)` in the simple-root basis,
    /// obtained from `x·α_i` through the inverse Cartan matrix. Fails if `x`
    /// is not an integral combination of the simple roots.
    pub fn simple_coordinates(&self, x: &DivisorClass) -> Result<Vec<i64>> {
        self.lattice.check_len(x)?;
        let rhs: Vec<Rational> = self
            .simple
            .iter()
            .map(|a| Rational::from_integer(-self.lattice.ip(x, a)))
            .collect();
        let sol = intmat::solve_rational(&self.inverse_cartan, &rhs);
        if !intmat::all_integral(&sol) {
            return Err(Error::Malformed(format!(
                "{} is not in the root lattice",
                self.lattice.format_class(x)
            )));
        }
        let coords: Vec<i64> = sol.iter().map(|q| *q.numer()).collect();
        let mut back = DivisorClass::zero(self.lattice.rank());
        for (a, &c) in self.simple.iter().zip(&coords) {
            back = back.add_scaled(c, a);
        }
        if &back != x {
            return Err(Error::Malformed(format!(
                "{} is not in the root lattice",
                self.lattice.format_class(x)
            )));
        }
        Ok(coords)
    }

    /// Class with the given simple-root coordinates.
    pub fn from_coordinates(&self, coords: &[i64]) -> DivisorClass {
        let mut v = DivisorClass::zero(self.lattice.rank());
        for (a, &c) in self.simple.iter().zip(coords) {
            v = v.add_scaled(c, a);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds() -> Vec<SurfaceKind> {
        let mut out: Vec<SurfaceKind> = (4..=8).map(|n| SurfaceKind::e(n).unwrap()).collect();
        out.extend((3..=8).map(|n| SurfaceKind::d(n).unwrap()));
        out.extend((2..=8).map(|n| SurfaceKind::z(n).unwrap()));
        out
    }

    #[test]
    fn fixed_sum_square_small() {
        // c ∈ ℤ³ with Σc = 0, Σc² = 2: permutations of (1,−1,0).
        assert_eq!(vectors_with_sum_and_square(3, 0, 2).len(), 6);
        assert_eq!(vectors_with_sum_and_square(0, 0, 0), vec![Vec::<i64>::new()]);
        assert!(vectors_with_sum_and_square(2, 1, 0).is_empty());
    }

    #[test]
    fn closed_form_root_counts() {
        for kind in kinds() {
            let n = kind.n();
            let expected = match kind.family() {
                Family::En => [20, 40, 72, 126, 240][n - 4],
                Family::Dn => 2 * n * (n - 1),
                Family::An => n * (n - 1),
            };
            assert_eq!(enumerate_roots(kind).len(), expected, "{kind}");
        }
    }

    #[test]
    fn roots_satisfy_conditions() {
        for kind in kinds() {
            let lat = PicardLattice::new(kind);
            let roots = enumerate_roots(kind);
            for r in &roots {
                assert_eq!(lat.square(r), -2);
                assert_eq!(lat.degree_k(r), 0);
                if kind.family() != Family::En {
                    assert_eq!(lat.ip(r, &lat.f()), 0);
                }
                if kind.family() == Family::An {
                    assert_eq!(lat.ip(r, &lat.s()), 0);
                }
                assert!(roots.binary_search(&-r).is_ok());
            }
            assert!(roots.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exceptional_counts() {
        let counts: Vec<usize> = (4..=8)
            .map(|n| enumerate_exceptional(SurfaceKind::e(n).unwrap()).len())
            .collect();
        assert_eq!(counts, [10, 16, 27, 56, 240]);
        let d5 = SurfaceKind::d(5).unwrap();
        let lat = PicardLattice::new(d5);
        let mut expected: Vec<DivisorClass> = (1..=5).flat_map(|i| [lat.l(i), &lat.f() - &lat.l(i)]).collect();
        expected.sort();
        assert_eq!(enumerate_exceptional(d5), expected);
        let z4 = SurfaceKind::z(4).unwrap();
        assert_eq!(enumerate_exceptional(z4).len(), 4);
    }

    #[test]
    fn ruling_counts() {
        let counts: Vec<usize> = (4..=8)
            .map(|n| enumerate_rulings(SurfaceKind::e(n).unwrap()).unwrap().len())
            .collect();
        assert_eq!(counts, [5, 10, 27, 126, 2160]);
        assert!(enumerate_rulings(SurfaceKind::d(4).unwrap()).is_err());
    }

    #[test]
    fn spinor_shapes() {
        for n in 3..=8 {
            let kind = SurfaceKind::d(n).unwrap();
            for sign in [SpinorSign::Plus, SpinorSign::Minus] {
                let ws = enumerate_spinor_weights(kind, sign).unwrap();
                assert_eq!(ws.len(), 1 << (n - 1));
                for w in &ws {
                    let c = &w.coeffs()[2..];
                    assert_eq!(w[0], 1);
                    assert!(c.iter().all(|&x| x == 0 || x == -1));
                    let size = c.iter().filter(|&&x| x == -1).count() as i64;
                    match sign {
                        SpinorSign::Plus => {
                            assert_eq!(size % 2, 0);
                            assert_eq!(w[1], size / 2);
                        }
                        SpinorSign::Minus => {
                            assert_eq!(size % 2, 1);
                            assert_eq!(w[1], (size - 1) / 2);
                        }
                    }
                }
            }
        }
        assert!(enumerate_spinor_weights(SurfaceKind::e(6).unwrap(), SpinorSign::Plus).is_err());
    }

    #[test]
    fn simple_roots_match_conventions() {
        let e6 = SurfaceKind::e(6).unwrap();
        let lat = PicardLattice::new(e6);
        let text: Vec<String> = simple_roots(e6).iter().map(|r| lat.format_class(r)).collect();
        assert_eq!(
            text,
            ["l_1-l_2", "l_2-l_3", "h-l_1-l_2-l_3", "l_3-l_4", "l_4-l_5", "l_5-l_6"]
        );
        let d3 = SurfaceKind::d(3).unwrap();
        let lat = PicardLattice::new(d3);
        let text: Vec<String> = simple_roots(d3).iter().map(|r| lat.format_class(r)).collect();
        assert_eq!(text, ["f-l_1-l_2", "l_1-l_2", "l_2-l_3"]);
        let z2 = SurfaceKind::z(2).unwrap();
        let lat = PicardLattice::new(z2);
        let text: Vec<String> = simple_roots(z2).iter().map(|r| lat.format_class(r)).collect();
        assert_eq!(text, ["l_1-l_2"]);
    }

    #[test]
    fn datum_coordinates_round_trip() {
        for kind in kinds() {
            let datum = RootDatum::new(kind).unwrap();
            assert_eq!(datum.label(), kind.expected_label(), "{kind}");
            for (i, r) in datum.roots().iter().enumerate() {
                let c = datum.coords(i);
                assert!(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
                assert_eq!(&datum.from_coordinates(c), r);
            }
            let positives = (0..datum.roots().len()).filter(|&i| datum.is_positive(i)).count();
            assert_eq!(2 * positives, datum.roots().len());
            for i in 0..datum.rank() {
                assert_eq!(datum.cartan()[i][i], 2);
            }
        }
    }

    #[test]
    fn coordinates_reject_non_root_lattice_classes() {
        let datum = RootDatum::new(SurfaceKind::e(6).unwrap()).unwrap();
        let lat = datum.lattice();
        assert!(datum.simple_coordinates(&lat.l(1)).is_err());
        assert!(datum.simple_coordinates(lat.canonical()).is_err());
    }
}
