//! Weight modules of the Chevalley algebras.
//!
//! Each module has a basis `e_j` indexed by a weight list. The Cartan
//! elements act diagonally, `h_i e_w = −(α_i·w) e_w`, the same sign rule as
//! `[h_i, x_α] = −(α·α_i) x_α` in the algebra. A root `γ` moves `e_w` to a
//! multiple of `e_{w+γ}`.
//!
//! Raising operators are the `x_γ` with `γ` a nonnegative combination of the
//! `−α_i`; the highest weight vector is killed by all of them.
//!
//! Three constructions are used:
//!
//! * minuscule weight sets (a single Weyl orbit with one-dimensional weight
//!   spaces), where the signs are induced from the highest weight through
//!   the algebra's own structure constants;
//! * the padded sets of `E_8` lines and `E_7` rulings, identified with the
//!   adjoint module after a twist by `−K`;
//! * the 3875-dimensional module of `E_8` rulings, cut out of the symmetric
//!   square of the adjoint module (see [`crate::chevalley::symmetric`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::algebra::{ChevalleyAlgebra, SparseVec, Violation};
use crate::chevalley::symmetric;
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, Family, SurfaceKind};
use crate::roots::{enumerate_exceptional, enumerate_rulings, enumerate_spinor_weights, SpinorSign};

/// Number of random `(X, Y, e_w)` checks of the module relation run while
/// building a module.
const BUILD_RELATION_SAMPLES: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModuleKind {
    /// Exceptional classes `I_n` on `X_n`.
    Lines,
    /// Rulings `Ru_n` on `X_n`.
    Rulings,
    /// `I_n = {l_i, f − l_i}` on `Y_n`.
    Standard,
    SpinorPlus,
    SpinorMinus,
    /// `k`-fold sums of distinct `l_i` on `Z_n`.
    Wedge(usize),
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Lines => f.write_str("lines"),
            ModuleKind::Rulings => f.write_str("rulings"),
            ModuleKind::Standard => f.write_str("standard"),
            ModuleKind::SpinorPlus => f.write_str("spinor+"),
            ModuleKind::SpinorMinus => f.write_str("spinor-"),
            ModuleKind::Wedge(k) => write!(f, "wedge{k}"),
        }
    }
}

/// How the action table was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Construction {
    Minuscule,
    Adjoint,
    SymmetricSquare,
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    algebra: Arc<ChevalleyAlgebra>,
    which: ModuleKind,
    weights: Vec<DivisorClass>,
    highest: usize,
    twist: Option<DivisorClass>,
    construction: Construction,
    /// `x_α e_j` at `k * dim + j` for root index `k`.
    action: Vec<SparseVec>,
}

/// Builds the algebra of `kind` and the requested module over it.
pub fn build_module(kind: SurfaceKind, which: ModuleKind) -> Result<WeightModule> {
    build_module_with(Arc::new(ChevalleyAlgebra::new(kind)?), which)
}

/// Builds a module over an existing algebra.
pub fn build_module_with(algebra: Arc<ChevalleyAlgebra>, which: ModuleKind) -> Result<WeightModule> {
    let kind = algebra.kind();
    let lat = algebra.datum().lattice().clone();
    let need = |family: Family, name: &'static str| -> Result<()> {
        if kind.family() == family {
            Ok(())
        } else {
            Err(Error::WrongFamily {
                op: "build_module",
                expected: name,
                found: format!("{kind} for the {which} module"),
            })
        }
    };
    let n = kind.n();
    let module = match which {
        ModuleKind::Lines => {
            need(Family::En, "En")?;
            let weights = enumerate_exceptional(kind);
            if n == 8 {
                adjoint_padded(algebra, which, weights, -lat.canonical(), Some(lat.l(8)))?
            } else {
                minuscule(algebra, which, weights, Some(lat.l(n)))?
            }
        }
        ModuleKind::Rulings => {
            need(Family::En, "En")?;
            let top = &lat.h() - &lat.l(1);
            let weights = enumerate_rulings(kind)?;
            match n {
                8 => symmetric::rulings_e8(algebra, weights, top)?,
                7 => adjoint_padded(algebra, which, weights, -lat.canonical(), Some(top))?,
                _ => minuscule(algebra, which, weights, Some(top))?,
            }
        }
        ModuleKind::Standard => {
            need(Family::Dn, "Dn")?;
            minuscule(algebra, which, enumerate_exceptional(kind), Some(lat.l(n)))?
        }
        ModuleKind::SpinorPlus | ModuleKind::SpinorMinus => {
            need(Family::Dn, "Dn")?;
            let sign = if which == ModuleKind::SpinorPlus {
                SpinorSign::Plus
            } else {
                SpinorSign::Minus
            };
            minuscule(algebra, which, enumerate_spinor_weights(kind, sign)?, None)?
        }
        ModuleKind::Wedge(k) => {
            need(Family::An, "An")?;
            if k == 0 || k >= n {
                return Err(Error::Malformed(format!(
                    "wedge power {k} of the standard module of {kind} must lie in 1..={}",
                    n - 1
                )));
            }
            minuscule(algebra, which, wedge_weights(kind, k), None)?
        }
    };
    let violations = module.relation_violations_sampled(BUILD_RELATION_SAMPLES, 0xade, 1);
    if let Some(v) = violations.into_iter().next() {
        return Err(Error::Consistency(format!(
            "module relation fails for {}: {:?} {}",
            module.which, v.indices, v.detail
        )));
    }
    Ok(module)
}

/// Weights `l_{i_1} + ⋯ + l_{i_k}` for `i_1 < ⋯ < i_k`, sorted.
pub fn wedge_weights(kind: SurfaceKind, k: usize) -> Vec<DivisorClass> {
    let n = kind.n();
    let rank = kind.picard_rank();
    let offset = rank - n;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut v = vec![0; rank];
        for i in 0..n {
            if mask >> i & 1 == 1 {
                v[offset + i] = 1;
            }
        }
        out.push(DivisorClass::new(v));
    }
    out.sort();
    out
}

impl WeightModule {
    pub(crate) fn from_parts(
        algebra: Arc<ChevalleyAlgebra>,
        which: ModuleKind,
        weights: Vec<DivisorClass>,
        highest: usize,
        twist: Option<DivisorClass>,
        construction: Construction,
        action: Vec<SparseVec>,
    ) -> Self {
        WeightModule {
            algebra,
            which,
            weights,
            highest,
            twist,
            construction,
            action,
        }
    }

    pub fn algebra(&self) -> &ChevalleyAlgebra {
        &self.algebra
    }

    pub fn which(&self) -> ModuleKind {
        self.which
    }

    pub fn kind(&self) -> SurfaceKind {
        self.algebra.kind()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Weight of every basis vector, repeated for multiplicities.
    pub fn weights(&self) -> &[DivisorClass] {
        &self.weights
    }

    pub fn highest_index(&self) -> usize {
        self.highest
    }

    pub fn highest_weight(&self) -> &DivisorClass {
        &self.weights[self.highest]
    }

    /// Line-bundle twist carried for duality bookkeeping. Weights of a padded
    /// or symmetric-square module are adjoint-type weights shifted by it.
    pub fn twist(&self) -> Option<&DivisorClass> {
        self.twist.as_ref()
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// `x_α e_j` for root index `k` (in the algebra's root order).
    pub fn act(&self, k: usize, j: usize) -> Result<&[(usize, i64)]> {
        let m = self.algebra.root_count();
        if k >= m {
            return Err(Error::IndexOutOfRange { index: k, size: m });
        }
        if j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                size: self.dim(),
            });
        }
        Ok(&self.action[k * self.dim() + j])
    }

    /// `x_α e_j` for a root given as a class.
    pub fn act_class(&self, alpha: &DivisorClass, j: usize) -> Result<&[(usize, i64)]> {
        let k = self
            .algebra
            .datum()
            .root_index(alpha)
            .ok_or_else(|| Error::NotARoot(self.algebra.datum().lattice().format_class(alpha)))?;
        self.act(k, j)
    }

    /// Scalar by which `h_i` acts on `e_j`.
    pub fn cartan_eigenvalue(&self, i: usize, j: usize) -> i64 {
        let datum = self.algebra.datum();
        -datum.lattice().ip(&datum.simple()[i], &self.weights[j])
    }

    /// Action of an algebra basis element on a module vector.
    pub fn apply(&self, b: usize, v: &[(usize, i64)]) -> SparseVec {
        let r = self.algebra.rank();
        let mut acc: HashMap<usize, i64> = HashMap::new();
        if b < r {
            for &(j, c) in v {
                *acc.entry(j).or_insert(0) += c * self.cartan_eigenvalue(b, j);
            }
        } else {
            let k = b - r;
            for &(j, c) in v {
                for &(t, d) in &self.action[k * self.dim() + j] {
                    *acc.entry(t).or_insert(0) += c * d;
                }
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort();
        out
    }

    /// Applies an algebra element (sparse in the algebra basis).
    pub fn apply_element(&self, x: &[(usize, i64)], v: &[(usize, i64)]) -> SparseVec {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(b, c) in x {
            for (t, d) in self.apply(b, v) {
                *acc.entry(t).or_insert(0) += c * d;
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort();
        out
    }

    /// `ρ([X,Y]) e_j − ρ(X)ρ(Y) e_j + ρ(Y)ρ(X) e_j` for basis elements.
    pub fn relation_defect(&self, x: usize, y: usize, j: usize) -> SparseVec {
        let e = vec![(j, 1)];
        let lhs = self.apply_element(self.algebra.basis_bracket(x, y), &e);
        let xy = self.apply(x, &self.apply(y, &e));
        let yx = self.apply(y, &self.apply(x, &e));
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (t, c) in lhs {
            *acc.entry(t).or_insert(0) += c;
        }
        for (t, c) in xy {
            *acc.entry(t).or_insert(0) -= c;
        }
        for (t, c) in yx {
            *acc.entry(t).or_insert(0) += c;
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort();
        out
    }

    /// Module relation on `count` random `(X, Y, e_j)` from a seeded generator.
    pub fn relation_violations_sampled(&self, count: usize, seed: u64, limit: usize) -> Vec<Violation> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.algebra.dim();
        let mut out = Vec::new();
        for _ in 0..count {
            let (x, y, j) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..self.dim()));
            let defect = self.relation_defect(x, y, j);
            if !defect.is_empty() {
                out.push(Violation {
                    indices: vec![x, y, j],
                    detail: format!("defect {defect:?}"),
                });
                if out.len() >= limit {
                    break;
                }
            }
        }
        out
    }

    /// Module relation on every `(X, Y, e_j)` with `X < Y`.
    pub fn relation_violations_exhaustive(&self, limit: usize) -> Vec<Violation> {
        let d = self.algebra.dim();
        let mut out = Vec::new();
        for x in 0..d {
            for y in (x + 1)..d {
                for j in 0..self.dim() {
                    let defect = self.relation_defect(x, y, j);
                    if !defect.is_empty() {
                        out.push(Violation {
                            indices: vec![x, y, j],
                            detail: format!("defect {defect:?}"),
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

    /// Root indices of the raising operators: roots with nonpositive
    /// simple-root coordinates.
    pub fn raising_roots(&self) -> Vec<usize> {
        let datum = self.algebra.datum();
        (0..datum.roots().len()).filter(|&k| !datum.is_positive(k)).collect()
    }

    /// Raising roots that fail to kill the highest weight vector.
    pub fn highest_weight_failures(&self) -> Vec<usize> {
        let top = vec![(self.highest, 1)];
        self.raising_roots()
            .into_iter()
            .filter(|&k| !self.apply(self.algebra.root_basis(k), &top).is_empty())
            .collect()
    }

    /// True when every basis vector has the weight recorded for it, i.e.
    /// `x_α e_w` only involves vectors of weight `w + α`.
    pub fn weights_are_consistent(&self) -> bool {
        let datum = self.algebra.datum();
        (0..datum.roots().len()).all(|k| {
            (0..self.dim()).all(|j| {
                let target = &self.weights[j] + &datum.roots()[k];
                self.action[k * self.dim() + j]
                    .iter()
                    .all(|&(t, _)| self.weights[t] == target)
            })
        })
    }
}

/// Sign-consistent action on a minuscule weight set.
///
/// A BFS tree from the top weight defines `e_w = x_β e_p` for the parent `p`
/// and the smallest simple root `β` reaching `w`. For a raising root `γ`,
/// `x_γ e_w = x_β (x_γ e_p) + [x_γ, x_β] e_p`, and for a lowering root the
/// coefficient follows from `h_γ = [x_γ, x_{−γ}]` acting on `e_w`:
/// `c(γ, w) · c(−γ, w+γ) = γ·w`. Both recursions only visit weights closer
/// to the top, so they terminate.
fn minuscule(
    algebra: Arc<ChevalleyAlgebra>,
    which: ModuleKind,
    weights: Vec<DivisorClass>,
    top: Option<DivisorClass>,
) -> Result<WeightModule> {
    let datum = algebra.datum();
    let lat = datum.lattice();
    let index: HashMap<DivisorClass, usize> = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    if index.len() != weights.len() {
        return Err(Error::Consistency("minuscule weight set has repeated weights".into()));
    }
    let simple_idx: Vec<usize> = datum
        .simple()
        .iter()
        .map(|a| datum.root_index(a).expect("simple roots are roots"))
        .collect();

    // The top weight is the one no raising simple root moves.
    let maximal: Vec<usize> = (0..weights.len())
        .filter(|&j| {
            simple_idx
                .iter()
                .all(|&k| !index.contains_key(&(&weights[j] - &datum.roots()[k])))
        })
        .collect();
    if maximal.len() != 1 {
        return Err(Error::Consistency(format!(
            "{which}: expected one maximal weight, found {}",
            maximal.len()
        )));
    }
    let top_idx = maximal[0];
    if let Some(t) = &top {
        if &weights[top_idx] != t {
            return Err(Error::Consistency(format!(
                "{which}: maximal weight is {}, expected {}",
                lat.format_class(&weights[top_idx]),
                lat.format_class(t)
            )));
        }
    }

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; weights.len()];
    let mut seen = vec![false; weights.len()];
    seen[top_idx] = true;
    let mut queue = std::collections::VecDeque::from([top_idx]);
    while let Some(p) = queue.pop_front() {
        for &k in &simple_idx {
            if let Some(&c) = index.get(&(&weights[p] + &datum.roots()[k])) {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some((p, k));
                    queue.push_back(c);
                }
            }
        }
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        return Err(Error::Consistency(format!(
            "{which}: weight {} is not reachable from the top",
            lat.format_class(&weights[lost])
        )));
    }

    let mut solver = Minuscule {
        algebra: &algebra,
        weights: &weights,
        index: &index,
        parent: &parent,
        top: top_idx,
        memo: HashMap::new(),
    };
    let m = datum.roots().len();
    let dim = weights.len();
    let mut action = vec![SparseVec::new(); m * dim];
    for k in 0..m {
        for j in 0..dim {
            let Some(&t) = index.get(&(&weights[j] + &datum.roots()[k])) else {
                continue;
            };
            let c = solver.coeff(k, j)?;
            if c.abs() != 1 {
                return Err(Error::Consistency(format!(
                    "{which}: x_α e_w has coefficient {c} for α = {}, w = {}",
                    lat.format_class(&datum.roots()[k]),
                    lat.format_class(&weights[j])
                )));
            }
            action[k * dim + j] = vec![(t, c)];
        }
    }
    Ok(WeightModule::from_parts(
        algebra.clone(),
        which,
        weights,
        top_idx,
        None,
        Construction::Minuscule,
        action,
    ))
}

struct Minuscule<'a> {
    algebra: &'a ChevalleyAlgebra,
    weights: &'a [DivisorClass],
    index: &'a HashMap<DivisorClass, usize>,
    parent: &'a [Option<(usize, usize)>],
    top: usize,
    memo: HashMap<(usize, usize), i64>,
}

impl Minuscule<'_> {
    fn target(&self, k: usize, j: usize) -> Option<usize> {
        self.index
            .get(&(&self.weights[j] + &self.algebra.datum().roots()[k]))
            .copied()
    }

    /// Coefficient `c` in `x_γ e_w = c e_{w+γ}` (0 if `w + γ` is not a weight).
    fn coeff(&mut self, g: usize, w: usize) -> Result<i64> {
        if let Some(&c) = self.memo.get(&(g, w)) {
            return Ok(c);
        }
        let Some(target) = self.target(g, w) else {
            return Ok(0);
        };
        let datum = self.algebra.datum();
        let lat = datum.lattice();
        let c = if datum.is_positive(g) {
            let back = self.coeff(self.algebra.negative(g), target)?;
            lat.ip(&datum.roots()[g], &self.weights[w]) * back
        } else {
            let Some((p, beta)) = self.parent[w] else {
                debug_assert_eq!(w, self.top);
                return Err(Error::Consistency("a raising root moves the top weight".into()));
            };
            let mut total = 0;
            let up = self.coeff(g, p)?;
            if up != 0 {
                let q = self.target(g, p).expect("nonzero coefficient has a target");
                total += up * self.coeff(beta, q)?;
            }
            let r = self.algebra.rank();
            let bracket = self
                .algebra
                .basis_bracket(self.algebra.root_basis(g), self.algebra.root_basis(beta))
                .to_vec();
            for (b, co) in bracket {
                if b < r {
                    total += co * -lat.ip(&datum.simple()[b], &self.weights[p]);
                } else {
                    total += co * self.coeff(b - r, p)?;
                }
            }
            total
        };
        self.memo.insert((g, w), c);
        Ok(c)
    }
}

/// Padded module identified with the adjoint module: the weight set maps to
/// the roots via `w ↦ w − twist`, and `r` extra copies of `twist` stand for
/// the Cartan elements.
fn adjoint_padded(
    algebra: Arc<ChevalleyAlgebra>,
    which: ModuleKind,
    classes: Vec<DivisorClass>,
    twist: DivisorClass,
    top: Option<DivisorClass>,
) -> Result<WeightModule> {
    let datum = algebra.datum();
    let r = algebra.rank();
    let m = datum.roots().len();
    if classes.len() != m {
        return Err(Error::Consistency(format!(
            "{which}: {} classes cannot pair with {m} roots",
            classes.len()
        )));
    }
    // module index of each algebra basis element
    let mut to_module = vec![usize::MAX; algebra.dim()];
    for (j, w) in classes.iter().enumerate() {
        let root = w - &twist;
        let k = datum.root_index(&root).ok_or_else(|| {
            Error::Consistency(format!(
                "{which}: {} minus the twist is not a root",
                datum.lattice().format_class(w)
            ))
        })?;
        to_module[algebra.root_basis(k)] = j;
    }
    for i in 0..r {
        to_module[i] = m + i;
    }
    let mut from_module = vec![0usize; m + r];
    for (b, &j) in to_module.iter().enumerate() {
        from_module[j] = b;
    }
    let mut weights = classes;
    weights.extend(std::iter::repeat_n(twist.clone(), r));
    let dim = weights.len();
    let mut action = vec![SparseVec::new(); m * dim];
    for k in 0..m {
        for j in 0..dim {
            let mut out: SparseVec = algebra
                .basis_bracket(algebra.root_basis(k), from_module[j])
                .iter()
                .map(|&(b, c)| (to_module[b], c))
                .collect();
            out.sort();
            action[k * dim + j] = out;
        }
    }
    let highest = match &top {
        Some(t) => weights
            .iter()
            .position(|w| w == t)
            .ok_or_else(|| Error::Consistency(format!("{which}: designated top is not a weight")))?,
        None => 0,
    };
    Ok(WeightModule::from_parts(
        algebra.clone(),
        which,
        weights,
        highest,
        Some(twist),
        Construction::Adjoint,
        action,
    ))
}
