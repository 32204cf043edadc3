//! The 3875-dimensional `E_8` module with highest weight `(·, h − l_1)`.
//!
//! Rulings of `X_8` come in 2160 classes, and `R ↦ R + 2K` identifies them
//! with the vectors of square `−4` in the root lattice. These are the extremal
//! weights of the irreducible summand of `Sym²(𝔢_8)` generated by a vector of
//! weight `h − l_1 + 2K`. That summand is built explicitly:
//!
//! 1. the weight-`(h − l_1 + 2K)` space of `Sym²(𝔢_8)` is 7-dimensional, and
//!    the common kernel of the raising simple operators there is a line;
//! 2. applying lowering simple operators level by level generates every
//!    weight space of the submodule;
//! 3. each weight space is saturated against the monomial lattice, so the
//!    integral action on `Sym²` restricts to an integral action on a ℤ-basis.
//!
//! The module weights are the adjoint-type weights shifted by `−2K`: the 2160
//! rulings, each root minus `2K` seven times, and `−2K` with multiplicity 35.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::chevalley::algebra::{ChevalleyAlgebra, SparseVec};
use crate::chevalley::module::{Construction, ModuleKind, WeightModule};
use crate::error::{Error, Result};
use crate::intmat;
use crate::picard::DivisorClass;

type Q = Ratio<i128>;

/// One weight space of the submodule, in local monomial coordinates.
struct Space {
    weight: DivisorClass,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// Inverse of the pivot minor `P[t][c] = basis[t][pivots[c]]`.
    inverse: Vec<Vec<Q>>,
}

struct Ambient<'a> {
    alg: &'a ChevalleyAlgebra,
    /// Monomials `b_a b_b` (`a ≤ b`, id `a * dim + b`) grouped by weight.
    by_weight: HashMap<DivisorClass, Vec<usize>>,
    /// Position of a monomial inside its weight group.
    local: Vec<usize>,
}

impl<'a> Ambient<'a> {
    fn new(alg: &'a ChevalleyAlgebra) -> Self {
        let dim = alg.dim();
        let zero = DivisorClass::zero(alg.datum().lattice().rank());
        // adjoint weight of each algebra basis element
        let wt: Vec<DivisorClass> = (0..dim)
            .map(|b| alg.root_of(b).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        let mut by_weight: HashMap<DivisorClass, Vec<usize>> = HashMap::new();
        let mut local = vec![usize::MAX; dim * dim];
        for a in 0..dim {
            for b in a..dim {
                let w = &wt[a] + &wt[b];
                let group = by_weight.entry(w).or_default();
                local[a * dim + b] = group.len();
                group.push(a * dim + b);
            }
        }
        Ambient { alg, by_weight, local }
    }

    fn mono(&self, a: usize, b: usize) -> usize {
        let dim = self.alg.dim();
        if a <= b {
            a * dim + b
        } else {
            b * dim + a
        }
    }

    /// `x_γ` on a vector given in the local coordinates of `weight`; the
    /// result is in local coordinates of `weight + γ` (empty if that weight
    /// carries no monomials and the image vanishes).
    fn apply(&self, k: usize, weight: &DivisorClass, v: &[i64]) -> Result<(DivisorClass, Vec<i64>)> {
        let dim = self.alg.dim();
        let xg = self.alg.root_basis(k);
        let monos = &self.by_weight[weight];
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (pos, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let id = monos[pos];
            let (a, b) = (id / dim, id % dim);
            for &(t, d) in self.alg.basis_bracket(xg, a) {
                *acc.entry(self.mono(t, b)).or_insert(0) += c * d;
            }
            for &(t, d) in self.alg.basis_bracket(xg, b) {
                *acc.entry(self.mono(a, t)).or_insert(0) += c * d;
            }
        }
        let target = weight + &self.alg.datum().roots()[k];
        let Some(group) = self.by_weight.get(&target) else {
            if acc.values().any(|&c| c != 0) {
                return Err(Error::Consistency("image has a weight with no monomials".into()));
            }
            return Ok((target, Vec::new()));
        };
        let mut out = vec![0i64; group.len()];
        for (id, c) in acc {
            out[self.local[id]] += c;
        }
        Ok((target, out))
    }
}

fn to_q(v: i64) -> Q {
    Q::from_integer(v as i128)
}

/// Pivot columns of a full-rank row set and the inverse of the pivot minor.
fn pivots_and_inverse(basis: &[Vec<i64>]) -> Result<(Vec<usize>, Vec<Vec<Q>>)> {
    let d = basis.len();
    let n = basis.first().map_or(0, |b| b.len());
    let mut work: Vec<Vec<Q>> = basis.iter().map(|r| r.iter().map(|&x| to_q(x)).collect()).collect();
    let mut pivots = Vec::with_capacity(d);
    let mut row = 0;
    for col in 0..n {
        if row == d {
            break;
        }
        let Some(p) = (row..d).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(row, p);
        let lead = work[row][col];
        for i in 0..d {
            if i != row && !work[i][col].is_zero() {
                let f = work[i][col] / lead;
                for c in col..n {
                    let delta = f * work[row][c];
                    work[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != d {
        return Err(Error::Consistency("weight-space basis is not independent".into()));
    }
    // invert P by Gauss–Jordan
    let mut m: Vec<Vec<Q>> = (0..d)
        .map(|t| {
            let mut r: Vec<Q> = pivots.iter().map(|&c| to_q(basis[t][c])).collect();
            r.extend((0..d).map(|j| if j == t { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let p = (col..d)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::Consistency("singular pivot minor".into()))?;
        m.swap(col, p);
        let lead = m[col][col];
        for c in 0..2 * d {
            m[col][c] /= lead;
        }
        for i in 0..d {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                for c in 0..2 * d {
                    let delta = f * m[col][c];
                    m[i][c] -= delta;
                }
            }
        }
    }
    let inverse = m.into_iter().map(|r| r[d..].to_vec()).collect();
    Ok((pivots, inverse))
}

impl Space {
    fn new(weight: DivisorClass, basis: Vec<Vec<i64>>) -> Result<Self> {
        let (pivots, inverse) = pivots_and_inverse(&basis)?;
        Ok(Space {
            weight,
            basis,
            pivots,
            inverse,
        })
    }

    /// Integer coordinates of `v` in the basis; fails if `v` is outside the
    /// lattice spanned by the basis.
    fn coordinates(&self, v: &[i64]) -> Result<Vec<i64>> {
        let d = self.basis.len();
        let mut coords = Vec::with_capacity(d);
        for c in 0..d {
            let mut s = Q::zero();
            for (t, &p) in self.pivots.iter().enumerate() {
                if v[p] != 0 {
                    s += to_q(v[p]) * self.inverse[t][c];
                }
            }
            if !s.is_integer() {
                return Err(Error::Consistency(
                    "non-integral coordinates in a saturated basis".into(),
                ));
            }
            coords.push(i64::try_from(s.to_integer()).map_err(|_| Error::Consistency("coordinate overflow".into()))?);
        }
        let mut back = vec![0i64; v.len()];
        for (t, &c) in coords.iter().enumerate() {
            if c != 0 {
                for (x, &b) in back.iter_mut().zip(&self.basis[t]) {
                    *x += c * b;
                }
            }
        }
        if back != v {
            return Err(Error::Consistency("vector leaves the submodule".into()));
        }
        Ok(coords)
    }
}

/// Builds the rulings module of `E_8` inside `Sym²` of the adjoint module.
pub(crate) fn rulings_e8(
    algebra: Arc<ChevalleyAlgebra>,
    rulings: Vec<DivisorClass>,
    top: DivisorClass,
) -> Result<WeightModule> {
    let alg = algebra.as_ref();
    let datum = alg.datum();
    let lat = datum.lattice();
    let twist = lat.canonical().scale(-2);
    let ambient = Ambient::new(alg);
    let simple: Vec<usize> = datum
        .simple()
        .iter()
        .map(|a| datum.root_index(a).expect("simple roots are roots"))
        .collect();
    let lowering = simple.clone();
    let raising: Vec<usize> = simple.iter().map(|&k| alg.negative(k)).collect();

    // highest weight line
    let mu0 = &top - &twist;
    let n0 = ambient
        .by_weight
        .get(&mu0)
        .map(|g| g.len())
        .ok_or_else(|| Error::Consistency("top weight has no monomials".into()))?;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &k in &raising {
        let mut images: Vec<Vec<i64>> = Vec::new();
        for pos in 0..n0 {
            let mut e = vec![0i64; n0];
            e[pos] = 1;
            images.push(ambient.apply(k, &mu0, &e)?.1);
        }
        let width = images.first().map_or(0, |v| v.len());
        for t in 0..width {
            rows.push(images.iter().map(|img| img[t]).collect());
        }
    }
    let top_line = intmat::integer_kernel(&rows, n0);
    if top_line.len() != 1 {
        return Err(Error::Consistency(format!(
            "raising operators have a {}-dimensional kernel on the top weight space",
            top_line.len()
        )));
    }

    let mut spaces: Vec<Space> = vec![Space::new(mu0.clone(), top_line)?];
    let mut space_of: HashMap<DivisorClass, usize> = HashMap::from([(mu0, 0)]);
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let mut spans: BTreeMap<DivisorClass, Vec<Vec<i64>>> = BTreeMap::new();
        for &s in &level {
            for &k in &lowering {
                for b in &spaces[s].basis {
                    let (target, img) = ambient.apply(k, &spaces[s].weight, b)?;
                    if img.iter().any(|&c| c != 0) {
                        spans.entry(target).or_default().push(img);
                    }
                }
            }
        }
        let mut next = Vec::new();
        for (weight, rows) in spans {
            if space_of.contains_key(&weight) {
                return Err(Error::Consistency("weight reached on two different levels".into()));
            }
            let width = rows[0].len();
            let basis = intmat::saturate(&rows, width);
            space_of.insert(weight.clone(), spaces.len());
            next.push(spaces.len());
            spaces.push(Space::new(weight, basis)?);
        }
        level = next;
    }

    // module basis ordered by module weight
    let mut order: Vec<usize> = (0..spaces.len()).collect();
    order.sort_by(|&a, &b| spaces[a].weight.cmp(&spaces[b].weight));
    let mut offset = vec![0usize; spaces.len()];
    let mut weights = Vec::new();
    for &s in &order {
        offset[s] = weights.len();
        let w = &spaces[s].weight + &twist;
        weights.extend(std::iter::repeat_n(w, spaces[s].basis.len()));
    }
    let dim = weights.len();
    if dim != 3875 {
        return Err(Error::Consistency(format!("rulings module of E8 has dimension {dim}")));
    }
    let mut singles: Vec<DivisorClass> = order
        .iter()
        .filter(|&&s| spaces[s].basis.len() == 1)
        .map(|&s| &spaces[s].weight + &twist)
        .collect();
    singles.sort();
    let mut expected = rulings;
    expected.sort();
    if singles != expected {
        return Err(Error::Consistency(
            "one-dimensional weight spaces differ from the rulings".into(),
        ));
    }

    let m = datum.roots().len();
    let mut action = vec![SparseVec::new(); m * dim];
    for s in 0..spaces.len() {
        for (t, b) in spaces[s].basis.iter().enumerate() {
            let j = offset[s] + t;
            for k in 0..m {
                let (target, img) = ambient.apply(k, &spaces[s].weight, b)?;
                if img.iter().all(|&c| c == 0) {
                    continue;
                }
                let ts = *space_of
                    .get(&target)
                    .ok_or_else(|| Error::Consistency("action leaves the submodule".into()))?;
                let coords = spaces[ts].coordinates(&img)?;
                action[k * dim + j] = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(u, &c)| (offset[ts] + u, c))
                    .collect();
            }
        }
    }
    let highest = offset[0];
    Ok(WeightModule::from_parts(
        algebra.clone(),
        ModuleKind::Rulings,
        weights,
        highest,
        Some(twist),
        Construction::SymmetricSquare,
        action,
    ))
}
