//! Homomorphisms from the root lattice to the torus, and the explicit linear
//! systems relating them to tuples of blown-up points.
//!
//! A point configuration `(x_1, …, x_n)` determines the homomorphism
//! `g(Σ a_i l_i + c·h + c'·s + c''·f) = Σ a_i x_i`; the classes `h`, `s`, `f`
//! are sent to `0`. On the simple roots this is the square integer system
//!
//! * `E_n`: `x_1−x_2, x_2−x_3, −x_1−x_2−x_3, x_3−x_4, …` with determinant `±3`,
//! * `D_n`: `−x_1−x_2, x_1−x_2, …, x_{n−1}−x_n` with determinant `±2`,
//! * `A_{n−1}`: `x_1−x_2, …, x_{n−1}−x_n` together with `Σ x_i = 0`, with
//!   determinant `±n`.
//!
//! Inverting it over ℚ recovers the points up to a common torsion translate.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, Rational};
use crate::picard::{DivisorClass, Family, PicardLattice, SurfaceKind};
use crate::roots::{classify, weyl_group_order, ExceptionalSystem, RootDatum};
use crate::torus::{torsion_points, Coord, TorusPoint};

/// Default bound on the Weyl group order for an exact orbit search.
pub const DEFAULT_ORBIT_CAP: u64 = 1_000_000;

/// A homomorphism `Λ → Σ`, given by its values `p_i = g(α_i)` on the simple
/// roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomToTorus {
    kind: SurfaceKind,
    values: Vec<TorusPoint>,
}

impl HomToTorus {
    pub fn new(kind: SurfaceKind, values: Vec<TorusPoint>) -> Result<Self> {
        if values.len() != kind.root_rank() {
            return Err(Error::LengthMismatch {
                expected: kind.root_rank(),
                found: values.len(),
            });
        }
        Ok(HomToTorus { kind, values })
    }

    pub fn zero(kind: SurfaceKind) -> Self {
        HomToTorus {
            kind,
            values: vec![TorusPoint::zero(); kind.root_rank()],
        }
    }

    /// Values drawn uniformly from the `d`-torsion, `d` uniform in
    /// `1..=max_denominator`, independently per simple root.
    pub fn random<R: Rng + ?Sized>(kind: SurfaceKind, rng: &mut R, max_denominator: i64) -> Self {
        let values = (0..kind.root_rank())
            .map(|_| random_point(rng, max_denominator))
            .collect();
        HomToTorus { kind, values }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn values(&self) -> &[TorusPoint] {
        &self.values
    }

    /// `g(Σ c_i α_i) = Σ c_i p_i`.
    pub fn evaluate(&self, coords: &[i64]) -> TorusPoint {
        coords
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, p)| p.smul(c))
            .sum()
    }
}

impl fmt::Display for HomToTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|p| p.to_string()).collect();
        write!(f, "{}: [{}]", self.kind, parts.join(", "))
    }
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, max_denominator: i64) -> TorusPoint {
    let d = rng.gen_range(1..=max_denominator.max(1));
    TorusPoint::from_fractions(rng.gen_range(0..d), d, rng.gen_range(0..d), d)
}

/// Points `x_1, …, x_n` on the torus; on `Z_n` they sum to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointConfig {
    kind: SurfaceKind,
    points: Vec<TorusPoint>,
}

impl PointConfig {
    pub fn new(kind: SurfaceKind, points: Vec<TorusPoint>) -> Result<Self> {
        if points.len() != kind.n() {
            return Err(Error::LengthMismatch {
                expected: kind.n(),
                found: points.len(),
            });
        }
        if kind.family() == Family::An {
            let total: TorusPoint = points.iter().copied().sum();
            if !total.is_zero() {
                return Err(Error::SumNotZero(total.to_string()));
            }
        }
        Ok(PointConfig { kind, points })
    }

    /// Random points; on `Z_n` the last point is chosen to make the sum vanish.
    pub fn random<R: Rng + ?Sized>(kind: SurfaceKind, rng: &mut R, max_denominator: i64) -> Self {
        let mut points: Vec<TorusPoint> = (0..kind.n()).map(|_| random_point(rng, max_denominator)).collect();
        if kind.family() == Family::An {
            let head: TorusPoint = points[..kind.n() - 1].iter().copied().sum();
            *points.last_mut().unwrap() = -head;
        }
        PointConfig { kind, points }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn has_coincident_points(&self) -> bool {
        let distinct: HashSet<&TorusPoint> = self.points.iter().collect();
        distinct.len() < self.points.len()
    }
}

/// Orbit comparison outcome. `InvariantEqual` only says the root-value
/// multisets agree; the group was too large to search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitVerdict {
    Equal,
    Distinct,
    InvariantEqual,
}

impl OrbitVerdict {
    pub fn is_equal(self) -> bool {
        !matches!(self, OrbitVerdict::Distinct)
    }

    pub fn is_proven(self) -> bool {
        !matches!(self, OrbitVerdict::InvariantEqual)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitVerdict::Equal => "equal",
            OrbitVerdict::Distinct => "distinct",
            OrbitVerdict::InvariantEqual => "invariant-equal",
        }
    }
}

/// Size and shape of the solution ambiguity of the backward system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub determinant: i128,
    pub smith_invariants: Vec<i64>,
    /// Solutions of `M t ≡ 0 (mod ℤⁿ)` for a single real coordinate.
    pub coordinate_kernel_size: usize,
    /// Every such solution has all entries equal.
    pub diagonal: bool,
    /// Configurations over a fixed homomorphism on the 2-torus.
    pub torus_kernel_size: usize,
}

/// The root datum of a kind together with its coefficient matrix and
/// rational inverse. Building one is the expensive part; every operation in
/// this module has a free-function form that builds it on the fly.
#[derive(Clone, Debug)]
pub struct TorelliSystem {
    datum: RootDatum,
    matrix: Vec<Vec<i64>>,
    inverse: Vec<Vec<Rational>>,
    weyl_order: u128,
}

impl TorelliSystem {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let datum = RootDatum::new(kind)?;
        let lat = datum.lattice();
        let n = kind.n();
        let position: Vec<usize> = (1..=n)
            .map(|j| lat.l(j).coeffs().iter().position(|&c| c == 1).unwrap())
            .collect();
        let mut matrix: Vec<Vec<i64>> = datum
            .simple()
            .iter()
            .map(|a| position.iter().map(|&p| a[p]).collect())
            .collect();
        if kind.family() == Family::An {
            matrix.push(vec![1; n]);
        }
        let inverse = intmat::rational_inverse(&matrix)
            .ok_or_else(|| Error::Consistency(format!("coefficient matrix of {kind} is singular")))?;
        let weyl_order = weyl_group_order(&classify(datum.roots(), lat)?);
        Ok(TorelliSystem {
            datum,
            matrix,
            inverse,
            weyl_order,
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.datum.kind()
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn lattice(&self) -> &PicardLattice {
        self.datum.lattice()
    }

    /// Rows are the `l`-coefficients of the simple roots (and the all-ones
    /// row on `Z_n`).
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn weyl_order(&self) -> u128 {
        self.weyl_order
    }

    fn check_kind(&self, kind: SurfaceKind) -> Result<()> {
        if kind != self.kind() {
            return Err(Error::Malformed(format!(
                "expected data for {}, got {kind}",
                self.kind()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, cfg: &PointConfig) -> Result<HomToTorus> {
        self.check_kind(cfg.kind)?;
        let values = self.matrix[..self.datum.rank()]
            .iter()
            .map(|row| row.iter().zip(&cfg.points).map(|(&c, x)| x.smul(c)).sum())
            .collect();
        HomToTorus::new(self.kind(), values)
    }

    /// The solution `M⁻¹ p̃ + (t, …, t)` where `p̃` lifts each value to its
    /// canonical representative in `[0, 1)²` and `t` is the torsion branch.
    pub fn backward(&self, hom: &HomToTorus, choice: TorusPoint) -> Result<PointConfig> {
        self.check_kind(hom.kind)?;
        let d = self.kind().torsion_order();
        if !choice.is_torsion(d) {
            return Err(Error::InvalidTorsion(choice.to_string(), d));
        }
        let n = self.kind().n();
        let mut rhs_x: Vec<Rational> = hom.values.iter().map(|p| p.x()).collect();
        let mut rhs_y: Vec<Rational> = hom.values.iter().map(|p| p.y()).collect();
        rhs_x.resize(n, Coord::zero());
        rhs_y.resize(n, Coord::zero());
        let xs = intmat::solve_rational(&self.inverse, &rhs_x);
        let ys = intmat::solve_rational(&self.inverse, &rhs_y);
        let points = xs
            .into_iter()
            .zip(ys)
            .map(|(x, y)| TorusPoint::new(x, y) + choice)
            .collect();
        PointConfig::new(self.kind(), points)
    }

    /// Values of `g` on every root, in root order.
    pub fn root_values(&self, hom: &HomToTorus) -> Vec<TorusPoint> {
        (0..self.datum.roots().len())
            .map(|i| hom.evaluate(self.datum.coords(i)))
            .collect()
    }

    /// `(true, [])` when `g(α) ≠ 0` for every root, otherwise `false` with
    /// the roots on which `g` vanishes.
    pub fn general_position(&self, hom: &HomToTorus) -> Result<(bool, Vec<DivisorClass>)> {
        self.check_kind(hom.kind)?;
        let vanishing: Vec<DivisorClass> = self
            .root_values(hom)
            .into_iter()
            .zip(self.datum.roots())
            .filter(|(v, _)| v.is_zero())
            .map(|(_, r)| r.clone())
            .collect();
        Ok((vanishing.is_empty(), vanishing))
    }

    /// The sorted multiset `{g(α) : α ∈ R}`.
    pub fn invariant(&self, hom: &HomToTorus) -> Result<Vec<TorusPoint>> {
        self.check_kind(hom.kind)?;
        let mut values = self.root_values(hom);
        values.sort();
        Ok(values)
    }

    /// `g ∘ s_i` for the simple reflection `s_i` (0-based): since
    /// `s_i(α_j) = α_j − A_ij α_i`, the new values are `p_j − A_ij p_i`.
    pub fn reflect(&self, hom: &HomToTorus, i: usize) -> Result<HomToTorus> {
        self.check_kind(hom.kind)?;
        let r = self.datum.rank();
        if i >= r {
            return Err(Error::IndexOutOfRange { index: i, size: r });
        }
        Ok(HomToTorus {
            kind: hom.kind,
            values: reflect_values(self.datum.cartan(), &hom.values, i),
        })
    }

    /// Decides whether `h2 = h1 ∘ w` for some Weyl group element. The search
    /// runs when `|W| ≤ cap`; otherwise the invariant decides, and equality
    /// there is reported as [`OrbitVerdict::InvariantEqual`] if `fallback`
    /// is allowed, or as [`Error::CapExceeded`] if not.
    pub fn orbit_equal(&self, h1: &HomToTorus, h2: &HomToTorus, cap: u64, fallback: bool) -> Result<OrbitVerdict> {
        self.check_kind(h1.kind)?;
        self.check_kind(h2.kind)?;
        if self.invariant(h1)? != self.invariant(h2)? {
            return Ok(OrbitVerdict::Distinct);
        }
        if self.weyl_order > cap as u128 {
            if fallback {
                return Ok(OrbitVerdict::InvariantEqual);
            }
            return Err(Error::CapExceeded {
                what: format!("Weyl group of {} (order {})", self.kind(), self.weyl_order),
                cap,
            });
        }
        let cartan = self.datum.cartan();
        let mut seen: HashSet<Vec<TorusPoint>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(h1.values.clone());
        queue.push_back(h1.values.clone());
        while let Some(v) = queue.pop_front() {
            if v == h2.values {
                return Ok(OrbitVerdict::Equal);
            }
            for i in 0..self.datum.rank() {
                let w = reflect_values(cartan, &v, i);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        Ok(OrbitVerdict::Distinct)
    }

    /// Determinant, Smith invariants and the torsion kernel of the system.
    pub fn kernel(&self) -> KernelReport {
        let n = self.matrix.len();
        let determinant = intmat::determinant(&self.matrix);
        let smith_invariants = intmat::smith_invariants(&self.matrix);
        // M⁻¹ℤⁿ / ℤⁿ is generated by the columns of M⁻¹ modulo 1.
        let reduce = |v: Vec<Rational>| -> Vec<Rational> { v.into_iter().map(|c| c - c.floor()).collect() };
        let generators: Vec<Vec<Rational>> = (0..n)
            .map(|j| reduce(self.inverse.iter().map(|row| row[j]).collect()))
            .collect();
        let zero = vec![Rational::zero(); n];
        let mut kernel: HashSet<Vec<Rational>> = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(v) = queue.pop_front() {
            for g in &generators {
                let w = reduce(v.iter().zip(g).map(|(a, b)| a + b).collect());
                if kernel.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let diagonal = kernel.iter().all(|v| v.iter().all(|c| *c == v[0]));
        KernelReport {
            determinant,
            smith_invariants,
            coordinate_kernel_size: kernel.len(),
            diagonal,
            torus_kernel_size: kernel.len() * kernel.len(),
        }
    }
}

fn reflect_values(cartan: &[Vec<i64>], values: &[TorusPoint], i: usize) -> Vec<TorusPoint> {
    let pi = values[i];
    values
        .iter()
        .enumerate()
        .map(|(j, &pj)| match cartan[i][j] {
            0 => pj,
            a => pj - pi.smul(a),
        })
        .collect()
}

pub fn phi_forward(cfg: &PointConfig) -> Result<HomToTorus> {
    TorelliSystem::new(cfg.kind)?.forward(cfg)
}

pub fn phi_backward(kind: SurfaceKind, hom: &HomToTorus, choice: TorusPoint) -> Result<PointConfig> {
    TorelliSystem::new(kind)?.backward(hom, choice)
}

/// All configurations over `hom`, one per torsion branch, in branch order.
pub fn backward_solutions(kind: SurfaceKind, hom: &HomToTorus) -> Result<Vec<PointConfig>> {
    let system = TorelliSystem::new(kind)?;
    torsion_points(kind.torsion_order() as i64)?
        .into_iter()
        .map(|t| system.backward(hom, t))
        .collect()
}

pub fn is_general_position(hom: &HomToTorus) -> Result<(bool, Vec<DivisorClass>)> {
    TorelliSystem::new(hom.kind)?.general_position(hom)
}

pub fn moduli_invariant(hom: &HomToTorus) -> Result<Vec<TorusPoint>> {
    TorelliSystem::new(hom.kind)?.invariant(hom)
}

/// Orbit comparison with the default cap and invariant fallback.
pub fn orbit_equal(h1: &HomToTorus, h2: &HomToTorus) -> Result<OrbitVerdict> {
    if h1.kind != h2.kind {
        return Err(Error::Malformed(format!("cannot compare {} with {}", h1.kind, h2.kind)));
    }
    TorelliSystem::new(h1.kind)?.orbit_equal(h1, h2, DEFAULT_ORBIT_CAP, true)
}

/// Whether `(e_1, …, e_n)` blows down successively to `ℙ²` (on `X_n`) or to
/// `𝔽_1` (on `Y_n`, `Z_n`).
///
/// Contracting `e_n, …, e_1` in turn, each must have square `−1`, canonical
/// degree `−1` against the current canonical class and be orthogonal to the
/// members not yet contracted; after contracting `e` the canonical class is
/// `K − e`. What is left is the orthogonal complement of the tuple, which
/// must be `⟨1⟩` with `K² = 9`, or an odd unimodular plane with `K² = 8`.
///
/// Tuples of the wrong length are malformed input. Tuples breaking the
/// exceptional-system conditions, parity included, are rejected.
pub fn configuration_check(kind: SurfaceKind, members: &[DivisorClass]) -> Result<bool> {
    match ExceptionalSystem::validate(kind, members) {
        Ok(()) => {}
        Err(Error::Consistency(_)) => return Ok(false),
        Err(e) => return Err(e),
    }
    let lat = PicardLattice::new(kind);
    let mut canonical = lat.canonical().clone();
    for k in (0..members.len()).rev() {
        let e = &members[k];
        if lat.square(e) != -1 || lat.ip(e, &canonical) != -1 {
            return Ok(false);
        }
        if members[..k].iter().any(|g| lat.ip(e, g) != 0) {
            return Ok(false);
        }
        canonical = &canonical - e;
    }
    let rest = crate::picard::orthogonal_complement(&lat, members)?;
    let gram = rest.gram();
    let k2 = lat.square(&canonical);
    if members.iter().any(|e| lat.ip(e, &canonical) != 0) {
        return Ok(false);
    }
    Ok(match kind.family() {
        Family::En => rest.rank() == 1 && gram[0][0] == 1 && k2 == 9,
        Family::Dn | Family::An => {
            rest.rank() == 2
                && intmat::determinant(gram) == -1
                && (gram[0][0] % 2 != 0 || gram[1][1] % 2 != 0)
                && k2 == 8
        }
    })
}
