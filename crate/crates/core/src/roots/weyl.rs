//! Reflections, Weyl orbits, exceptional systems and the highest root.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, Family, PicardLattice, SurfaceKind};
use crate::roots::{dynkin, enumerate_exceptional, simple_roots, RootDatum};

/// Default bound on the size of a Weyl orbit before BFS gives up.
pub const DEFAULT_ORBIT_CAP: u64 = 10_000_000;

/// Reflection in a (−2)-class: `s_α(x) = x + (x·α) α`.
pub fn reflect(lattice: &PicardLattice, alpha: &DivisorClass, x: &DivisorClass) -> Result<DivisorClass> {
    lattice.check_len(alpha)?;
    lattice.check_len(x)?;
    if lattice.square(alpha) != -2 {
        return Err(Error::NotARoot(lattice.format_class(alpha)));
    }
    Ok(x.add_scaled(lattice.ip(x, alpha), alpha))
}

/// Orbit of `seed` under the Weyl group generated by the simple reflections,
/// sorted lexicographically.
pub fn weyl_orbit(seed: &DivisorClass, kind: SurfaceKind) -> Result<Vec<DivisorClass>> {
    weyl_orbit_with_cap(seed, kind, DEFAULT_ORBIT_CAP)
}

pub fn weyl_orbit_with_cap(seed: &DivisorClass, kind: SurfaceKind, cap: u64) -> Result<Vec<DivisorClass>> {
    let lattice = PicardLattice::new(kind);
    lattice.check_len(seed)?;
    let simple = simple_roots(kind);
    let mut seen: HashSet<DivisorClass> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed.clone());
    while let Some(x) = queue.pop_front() {
        for a in &simple {
            let k = lattice.ip(&x, a);
            if k == 0 {
                continue;
            }
            let y = x.add_scaled(k, a);
            if !seen.contains(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: format!("Weyl orbit of {}", lattice.format_class(seed)),
                        cap,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<DivisorClass> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// An ordered tuple `(e_1, …, e_n)` of pairwise orthogonal exceptional
/// classes, with the parity condition `Σ e_i·s ≡ 0 (mod 2)` on `Y_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ExceptionalSystem {
    members: Vec<DivisorClass>,
}

impl ExceptionalSystem {
    /// Validates the invariants and wraps the tuple.
    pub fn new(kind: SurfaceKind, members: Vec<DivisorClass>) -> Result<Self> {
        Self::validate(kind, &members)?;
        Ok(ExceptionalSystem { members })
    }

    /// Checks length, the exceptional conditions, orthogonality and parity.
    /// Length problems are reported as malformed input; violations of the
    /// conditions as [`Error::Consistency`].
    pub fn validate(kind: SurfaceKind, members: &[DivisorClass]) -> Result<()> {
        let lat = PicardLattice::new(kind);
        if members.len() != kind.n() {
            return Err(Error::Malformed(format!(
                "an exceptional system of {kind} has {} members, got {}",
                kind.n(),
                members.len()
            )));
        }
        for e in members {
            lat.check_len(e)?;
        }
        let bad = |msg: String| Err(Error::Consistency(msg));
        for (i, e) in members.iter().enumerate() {
            if lat.square(e) != -1 || lat.degree_k(e) != -1 {
                return bad(format!("e_{} = {} is not exceptional", i + 1, lat.format_class(e)));
            }
            if kind.family() != Family::En && lat.ip(e, &lat.f()) != 0 {
                return bad(format!("e_{} meets the fibre class", i + 1));
            }
            if kind.family() == Family::An && lat.ip(e, &lat.s()) != 0 {
                return bad(format!("e_{} meets the section", i + 1));
            }
            for (j, g) in members.iter().enumerate().skip(i + 1) {
                if lat.ip(e, g) != 0 {
                    return bad(format!("e_{} and e_{} are not orthogonal", i + 1, j + 1));
                }
            }
        }
        if kind.family() == Family::Dn {
            let s = lat.s();
            let total: i64 = members.iter().map(|e| lat.ip(e, &s)).sum();
            if total.rem_euclid(2) != 0 {
                return bad(format!("parity violated: Σ e_i·s = {total} is odd"));
            }
        }
        Ok(())
    }

    pub fn members(&self) -> &[DivisorClass] {
        &self.members
    }

    pub fn into_members(self) -> Vec<DivisorClass> {
        self.members
    }
}

/// All exceptional systems of a kind, in lexicographic order. Refuses to run
/// when the Weyl group order exceeds `cap`.
pub fn enumerate_exceptional_systems(kind: SurfaceKind, cap: u64) -> Result<Vec<ExceptionalSystem>> {
    let lat = PicardLattice::new(kind);
    let expected = dynkin::weyl_group_order(&dynkin::classify(&crate::roots::enumerate_roots(kind), &lat)?);
    if expected > cap as u128 {
        return Err(Error::CapExceeded {
            what: format!("exceptional systems of {kind} ({expected})"),
            cap,
        });
    }
    let lines = enumerate_exceptional(kind);
    let m = lines.len();
    let ortho: Vec<Vec<bool>> = lines
        .iter()
        .map(|a| lines.iter().map(|b| lat.ip(a, b) == 0).collect())
        .collect();
    let s_deg: Vec<i64> = match kind.family() {
        Family::Dn => lines.iter().map(|e| lat.ip(e, &lat.s())).collect(),
        _ => vec![0; m],
    };

    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(kind.n());
    fn go(n: usize, ortho: &[Vec<bool>], s_deg: &[i64], stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n {
            let parity: i64 = stack.iter().map(|&i| s_deg[i]).sum();
            if parity.rem_euclid(2) == 0 {
                out.push(stack.clone());
            }
            return;
        }
        for c in 0..ortho.len() {
            if stack.iter().all(|&i| ortho[i][c]) {
                stack.push(c);
                go(n, ortho, s_deg, stack, out);
                stack.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(kind.n(), &ortho, &s_deg, &mut stack, &mut raw);
    for tuple in raw {
        out.push(ExceptionalSystem {
            members: tuple.into_iter().map(|i| lines[i].clone()).collect(),
        });
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighestRoot {
    pub root: DivisorClass,
    /// Coefficients in the simple-root basis.
    pub coefficients: Vec<i64>,
    /// Weights `(1, s_1, …, s_r)` of the weighted projective space.
    pub weights: Vec<i64>,
}

/// The unique root of maximal height with respect to the standard simple
/// roots.
pub fn highest_root(kind: SurfaceKind) -> Result<HighestRoot> {
    let datum = RootDatum::new(kind)?;
    let best = (0..datum.roots().len())
        .map(|i| datum.height(i))
        .max()
        .ok_or_else(|| Error::Consistency("empty root system".into()))?;
    let tops: Vec<usize> = (0..datum.roots().len()).filter(|&i| datum.height(i) == best).collect();
    if tops.len() != 1 {
        return Err(Error::Consistency(format!(
            "{} roots share the maximal height {best}",
            tops.len()
        )));
    }
    let coefficients = datum.coords(tops[0]).to_vec();
    let mut weights = vec![1];
    weights.extend(&coefficients);
    Ok(HighestRoot {
        root: datum.roots()[tops[0]].clone(),
        coefficients,
        weights,
    })
}
