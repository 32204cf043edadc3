//! Picard lattices of the three surface families.
//!
//! * `En`: `X_n`, the blow-up of ℙ² in `n` points, basis `h, l_1, …, l_n`.
//! * `Dn`: `Y_n`, the blow-up of 𝔽₁ in `n` points, basis `s, f, l_1, …, l_n`.
//! * `An`: `Z_n`, the same surface as `Y_n` but with the section `s` also held
//!   fixed. The parameter is the `n` of `Z_n`; the root system is `A_{n-1}`.
//!
//! All coefficient vectors are written in the fixed basis order above.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat;
use crate::roots::dynkin::{classify, DynkinType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    En,
    Dn,
    An,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::En => "En",
            Family::Dn => "Dn",
            Family::An => "An",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Deserialize)]
struct RawKind {
    family: Family,
    n: usize,
}

/// A surface family together with its blow-up count.
///
/// For `An` the stored `n` is the index of the surface `Z_n`; the associated
/// root system is `A_{n-1}` of rank `n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawKind")]
pub struct SurfaceKind {
    family: Family,
    n: usize,
}

impl TryFrom<RawKind> for SurfaceKind {
    type Error = Error;
    fn try_from(raw: RawKind) -> Result<Self> {
        SurfaceKind::new(raw.family, raw.n)
    }
}

impl SurfaceKind {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let ok = match family {
            Family::En => (4..=8).contains(&n),
            Family::Dn => n >= 3,
            Family::An => n >= 2,
        };
        if !ok {
            let bound = match family {
                Family::En => "4 <= n <= 8",
                Family::Dn => "n >= 3",
                Family::An => "n >= 2 (Z_n carries A_{n-1})",
            };
            return Err(Error::InvalidKind(format!("{family} with n = {n} violates {bound}")));
        }
        Ok(SurfaceKind { family, n })
    }

    pub fn e(n: usize) -> Result<Self> {
        Self::new(Family::En, n)
    }

    pub fn d(n: usize) -> Result<Self> {
        Self::new(Family::Dn, n)
    }

    /// The surface `Z_n`, whose root system is `A_{n-1}`.
    pub fn z(n: usize) -> Result<Self> {
        Self::new(Family::An, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Number of blown-up points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the Picard lattice.
    pub fn picard_rank(&self) -> usize {
        match self.family {
            Family::En => self.n + 1,
            Family::Dn | Family::An => self.n + 2,
        }
    }

    /// Rank of the root system.
    pub fn root_rank(&self) -> usize {
        match self.family {
            Family::En | Family::Dn => self.n,
            Family::An => self.n - 1,
        }
    }

    /// Order of the torsion that must be fixed to invert the Torelli system:
    /// 3 for `E_n`, 2 for `D_n`, `n` for `Z_n`.
    pub fn torsion_order(&self) -> u64 {
        match self.family {
            Family::En => 3,
            Family::Dn => 2,
            Family::An => self.n as u64,
        }
    }

    /// Dynkin label the lemmas predict for this kind (`E_4 = A_4`, `E_5 = D_5`,
    /// `D_3 = A_3`).
    pub fn expected_label(&self) -> String {
        match (self.family, self.n) {
            (Family::En, 4) => "A4".into(),
            (Family::En, 5) => "D5".into(),
            (Family::En, n) => format!("E{n}"),
            (Family::Dn, 3) => "A3".into(),
            (Family::Dn, n) => format!("D{n}"),
            (Family::An, n) => format!("A{}", n - 1),
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::En => write!(f, "E{} (X_{})", self.n, self.n),
            Family::Dn => write!(f, "D{} (Y_{})", self.n, self.n),
            Family::An => write!(f, "A{} (Z_{})", self.n - 1, self.n),
        }
    }
}

/// Integer coefficient vector in a fixed Picard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass(self.0.iter().map(|&c| c * k).collect())
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: i64, other: &DivisorClass) -> Self {
        assert_eq!(self.len(), other.len(), "divisor class length mismatch");
        DivisorClass(self.0.iter().zip(&other.0).map(|(&a, &b)| a + k * b).collect())
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

impl Index<usize> for DivisorClass {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.add_scaled(1, rhs)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.add_scaled(-1, rhs)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The Picard lattice of a surface kind: basis labels, Gram matrix of the
/// intersection form, and the canonical class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    kind: SurfaceKind,
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
    // nonzero Gram entries, for fast pairing
    entries: Vec<(usize, usize, i64)>,
}

impl PicardLattice {
    pub fn new(kind: SurfaceKind) -> Self {
        let n = kind.n();
        let rank = kind.picard_rank();
        let mut gram = vec![vec![0i64; rank]; rank];
        let mut canonical = vec![0i64; rank];
        let labels: Vec<String>;
        match kind.family() {
            Family::En => {
                labels = std::iter::once("h".to_string())
                    .chain((1..=n).map(|i| format!("l_{i}")))
                    .collect();
                gram[0][0] = 1;
                for i in 1..rank {
                    gram[i][i] = -1;
                }
                canonical[0] = -3;
                canonical[1..].fill(1);
            }
            Family::Dn | Family::An => {
                labels = ["s".to_string(), "f".to_string()]
                    .into_iter()
                    .chain((1..=n).map(|i| format!("l_{i}")))
                    .collect();
                gram[0][0] = -1;
                gram[0][1] = 1;
                gram[1][0] = 1;
                for i in 2..rank {
                    gram[i][i] = -1;
                }
                // K = -(2s + 3f - Σ l_i)
                canonical[0] = -2;
                canonical[1] = -3;
                canonical[2..].fill(1);
            }
        }
        let entries = gram
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &g)| g != 0)
                    .map(move |(j, &g)| (i, j, g))
            })
            .collect();
        PicardLattice {
            kind,
            labels,
            gram,
            canonical: DivisorClass(canonical),
            entries,
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    /// The `i`-th basis vector (0-based, in label order).
    pub fn basis_vector(&self, i: usize) -> DivisorClass {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        DivisorClass(v)
    }

    /// Exceptional class `l_i`, 1-based.
    pub fn l(&self, i: usize) -> DivisorClass {
        assert!(i >= 1 && i <= self.kind.n(), "l_{i} out of range");
        let offset = match self.kind.family() {
            Family::En => 0,
            _ => 1,
        };
        self.basis_vector(offset + i)
    }

    /// Line class `h` of `X_n`. Panics on the ruled families.
    pub fn h(&self) -> DivisorClass {
        assert_eq!(self.kind.family(), Family::En, "h exists only on X_n");
        self.basis_vector(0)
    }

    /// Section class `s`. Panics on `X_n`.
    pub fn s(&self) -> DivisorClass {
        assert_ne!(self.kind.family(), Family::En, "s exists only on Y_n / Z_n");
        self.basis_vector(0)
    }

    /// Fibre class `f`. Panics on `X_n`.
    pub fn f(&self) -> DivisorClass {
        assert_ne!(self.kind.family(), Family::En, "f exists only on Y_n / Z_n");
        self.basis_vector(1)
    }

    /// Builds a class from `(label, coefficient)` terms, e.g.
    /// `[("h", 1), ("l_1", -1)]`.
    pub fn class(&self, terms: &[(&str, i64)]) -> Result<DivisorClass> {
        let mut v = vec![0; self.rank()];
        for (label, c) in terms {
            let i = self
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Malformed(format!("unknown basis label `{label}`")))?;
            v[i] += c;
        }
        Ok(DivisorClass(v))
    }

    pub fn check_len(&self, x: &DivisorClass) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Intersection number `aᵀ·G·b`.
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.ip(a, b))
    }

    /// Intersection number without length validation; panics on mismatch.
    #[inline]
    pub fn ip(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        assert!(a.len() == self.rank() && b.len() == self.rank(), "length mismatch");
        self.entries.iter().map(|&(i, j, g)| a.0[i] * g * b.0[j]).sum()
    }

    pub fn square(&self, a: &DivisorClass) -> i64 {
        self.ip(a, a)
    }

    /// `x · K`
    pub fn degree_k(&self, a: &DivisorClass) -> i64 {
        self.ip(a, &self.canonical)
    }

    /// Human-readable form such as `h-l_1-l_2-l_3`.
    pub fn format_class(&self, x: &DivisorClass) -> String {
        let mut out = String::new();
        for (c, label) in x.0.iter().zip(&self.labels) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{label}"));
            } else {
                out.push_str(&format!("{sign}{mag}{label}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": {"family": self.kind.family().name(), "n": self.kind.n()},
            "labels": self.labels,
            "gram": self.gram,
            "canonical": self.canonical,
        })
    }

    /// Parses the JSON form written by [`PicardLattice::to_json`], rejecting
    /// documents whose data disagree with the kind.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            kind: SurfaceKind,
            labels: Vec<String>,
            gram: Vec<Vec<i64>>,
            canonical: DivisorClass,
        }
        let doc: Doc = serde_json::from_value(value.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        let lattice = PicardLattice::new(doc.kind);
        if doc.labels != lattice.labels || doc.gram != lattice.gram || doc.canonical != lattice.canonical {
            return Err(Error::Malformed(format!(
                "lattice data do not match the standard lattice of {}",
                doc.kind
            )));
        }
        Ok(lattice)
    }
}

/// A primitive sublattice, held as a ℤ-basis inside an ambient Picard lattice.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: PicardLattice,
    basis: Vec<DivisorClass>,
    gram: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn new(ambient: &PicardLattice, basis: Vec<DivisorClass>) -> Result<Self> {
        for b in &basis {
            ambient.check_len(b)?;
        }
        let gram = basis
            .iter()
            .map(|a| basis.iter().map(|b| ambient.ip(a, b)).collect())
            .collect();
        Ok(Sublattice {
            ambient: ambient.clone(),
            basis,
            gram,
        })
    }

    pub fn ambient(&self) -> &PicardLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &[DivisorClass] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Lattice vector with the given coordinates in this basis.
    pub fn vector(&self, coords: &[i64]) -> DivisorClass {
        let mut v = DivisorClass::zero(self.ambient.rank());
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                v = v.add_scaled(c, b);
            }
        }
        v
    }

    pub fn is_negative_definite(&self) -> bool {
        let neg: Vec<Vec<i64>> = self.gram.iter().map(|r| r.iter().map(|&g| -g).collect()).collect();
        intmat::is_positive_definite(&neg)
    }

    /// All vectors of square `-2`, i.e. the roots of the sublattice, or
    /// `None` when the lattice is not negative definite (the set is then
    /// empty or infinite).
    pub fn minus_two_vectors(&self) -> Option<Vec<DivisorClass>> {
        if !self.is_negative_definite() {
            return None;
        }
        let neg: Vec<Vec<i64>> = self.gram.iter().map(|r| r.iter().map(|&g| -g).collect()).collect();
        let mut out: Vec<DivisorClass> = intmat::vectors_of_norm(&neg, 2)
            .iter()
            .map(|y| self.vector(y))
            .collect();
        out.sort();
        Some(out)
    }
}

/// Basis of `{x : x·c = 0 for all c in classes}` computed by an integer
/// kernel; the result is primitive.
pub fn orthogonal_complement(lattice: &PicardLattice, classes: &[DivisorClass]) -> Result<Sublattice> {
    for c in classes {
        lattice.check_len(c)?;
    }
    let rows: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| {
            (0..lattice.rank())
                .map(|j| lattice.ip(c, &lattice.basis_vector(j)))
                .collect()
        })
        .collect();
    let basis = intmat::integer_kernel(&rows, lattice.rank())
        .into_iter()
        .map(DivisorClass)
        .collect();
    Sublattice::new(lattice, basis)
}

/// Outcome of the root-lattice test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLatticeClass {
    /// The (-2)-vectors span the lattice; their Dynkin components.
    Root(DynkinType),
    /// Not spanned by (-2)-vectors, or not negative definite.
    NotRoot { minus_two_vectors: usize, rank: usize },
}

impl RootLatticeClass {
    pub fn is_root(&self) -> bool {
        matches!(self, RootLatticeClass::Root(_))
    }
}

impl fmt::Display for RootLatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLatticeClass::Root(t) => write!(f, "{t}"),
            RootLatticeClass::NotRoot { .. } => f.write_str("not a root lattice"),
        }
    }
}

/// Decides whether a sublattice is a root lattice: it must be negative
/// definite and its (-2)-vectors must span it over ℤ.
pub fn is_root_lattice(sub: &Sublattice) -> Result<RootLatticeClass> {
    if sub.rank() == 0 {
        return Ok(RootLatticeClass::Root(DynkinType::trivial()));
    }
    if !sub.is_negative_definite() {
        return Ok(RootLatticeClass::NotRoot {
            minus_two_vectors: 0,
            rank: sub.rank(),
        });
    }
    let neg: Vec<Vec<i64>> = sub.gram.iter().map(|r| r.iter().map(|&g| -g).collect()).collect();
    let coords = intmat::vectors_of_norm(&neg, 2);
    let spans = coords.len() >= sub.rank() && {
        let inv = intmat::smith_invariants(&coords);
        inv.len() == sub.rank() && inv.iter().all(|&d| d == 1)
    };
    if !spans {
        return Ok(RootLatticeClass::NotRoot {
            minus_two_vectors: coords.len(),
            rank: sub.rank(),
        });
    }
    let roots: Vec<DivisorClass> = coords.iter().map(|y| sub.vector(y)).collect();
    Ok(RootLatticeClass::Root(classify(&roots, &sub.ambient)?))
}
