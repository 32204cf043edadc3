//! Dynkin classification of simply-laced root systems by the shape of their
//! Coxeter graph.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DynkinComponent {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinComponent {
    pub fn rank(self) -> usize {
        match self {
            DynkinComponent::A(k) | DynkinComponent::D(k) | DynkinComponent::E(k) => k,
        }
    }

    pub fn positive_roots(self) -> usize {
        match self {
            DynkinComponent::A(k) => k * (k + 1) / 2,
            DynkinComponent::D(k) => k * (k - 1),
            DynkinComponent::E(6) => 36,
            DynkinComponent::E(7) => 63,
            DynkinComponent::E(8) => 120,
            DynkinComponent::E(k) => panic!("no exceptional type E{k}"),
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(self) -> u128 {
        let factorial = |k: usize| (1..=k as u128).product::<u128>();
        match self {
            DynkinComponent::A(k) => factorial(k + 1),
            DynkinComponent::D(k) => (1u128 << (k - 1)) * factorial(k),
            DynkinComponent::E(6) => 51_840,
            DynkinComponent::E(7) => 2_903_040,
            DynkinComponent::E(8) => 696_729_600,
            DynkinComponent::E(k) => panic!("no exceptional type E{k}"),
        }
    }
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinComponent::A(k) => write!(f, "A{k}"),
            DynkinComponent::D(k) => write!(f, "D{k}"),
            DynkinComponent::E(k) => write!(f, "E{k}"),
        }
    }
}

/// A multiset of irreducible components, kept sorted. The empty type is the
/// trivial root system and prints as `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct DynkinType(Vec<DynkinComponent>);

impl DynkinType {
    pub fn new(mut components: Vec<DynkinComponent>) -> Self {
        components.sort();
        DynkinType(components)
    }

    pub fn trivial() -> Self {
        DynkinType(Vec::new())
    }

    pub fn components(&self) -> &[DynkinComponent] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.rank()).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Product of the component Weyl group orders.
pub fn weyl_group_order(t: &DynkinType) -> u128 {
    t.components().iter().map(|c| c.weyl_order()).product()
}

/// Classifies a finite set of (−2)-vectors as a simply-laced root system.
///
/// Positive roots are those whose first nonzero coefficient is positive, a
/// lexicographic order that is compatible with addition. The simple roots are
/// the positive roots that are not sums of two positive roots. The set must be
/// closed under negation and under its own reflections, and the positive-root
/// count must match the recognised components.
pub fn classify(vectors: &[DivisorClass], lattice: &PicardLattice) -> Result<DynkinType> {
    if vectors.is_empty() {
        return Ok(DynkinType::trivial());
    }
    for v in vectors {
        lattice.check_len(v)?;
        if lattice.square(v) != -2 {
            return Err(Error::Classification(format!(
                "{} has square {}, not -2",
                lattice.format_class(v),
                lattice.square(v)
            )));
        }
    }
    let set: HashSet<&DivisorClass> = vectors.iter().collect();
    for a in vectors {
        for b in vectors {
            let k = lattice.ip(a, b);
            let image = b.add_scaled(k, a);
            if !set.contains(&image) {
                return Err(Error::Classification(format!(
                    "not closed under reflection: s({}) applied to {}",
                    lattice.format_class(a),
                    lattice.format_class(b)
                )));
            }
        }
    }

    let is_positive = |v: &DivisorClass| v.coeffs().iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
    let mut positive: Vec<&DivisorClass> = set.iter().copied().filter(|v| is_positive(v)).collect();
    positive.sort();
    positive.dedup();
    let pos_set: HashSet<&DivisorClass> = positive.iter().copied().collect();
    let simple: Vec<&DivisorClass> = positive
        .iter()
        .copied()
        .filter(|a| !positive.iter().any(|b| *b != *a && pos_set.contains(&(*a - *b))))
        .collect();

    let r = simple.len();
    let mut adj = vec![Vec::new(); r];
    for i in 0..r {
        for j in (i + 1)..r {
            match lattice.ip(simple[i], simple[j]) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                other => {
                    return Err(Error::Classification(format!(
                        "simple roots {} and {} pair to {other}",
                        lattice.format_class(simple[i]),
                        lattice.format_class(simple[j])
                    )))
                }
            }
        }
    }

    let mut seen = vec![false; r];
    let mut components = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut nodes = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < nodes.len() {
            let u = nodes[head];
            head += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    nodes.push(v);
                }
            }
        }
        components.push(component_shape(&nodes, &adj)?);
    }

    let expected: usize = components.iter().map(|c| c.positive_roots()).sum();
    if expected != positive.len() {
        return Err(Error::Classification(format!(
            "{} positive roots, but the simple roots span a system with {expected}",
            positive.len()
        )));
    }
    Ok(DynkinType::new(components))
}

fn component_shape(nodes: &[usize], adj: &[Vec<usize>]) -> Result<DynkinComponent> {
    let k = nodes.len();
    let edges: usize = nodes.iter().map(|&u| adj[u].len()).sum::<usize>() / 2;
    if edges != k - 1 {
        return Err(Error::Classification("Coxeter graph contains a cycle".into()));
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&u| adj[u].len() >= 3).collect();
    match branch.as_slice() {
        [] => Ok(DynkinComponent::A(k)),
        [centre] if adj[*centre].len() == 3 => {
            let mut arms: Vec<usize> = adj[*centre]
                .iter()
                .map(|&first| arm_length(*centre, first, adj))
                .collect::<Result<_>>()?;
            arms.sort();
            match arms.as_slice() {
                [1, 1, m] => Ok(DynkinComponent::D(m + 3)),
                [1, 2, 2] => Ok(DynkinComponent::E(6)),
                [1, 2, 3] => Ok(DynkinComponent::E(7)),
                [1, 2, 4] => Ok(DynkinComponent::E(8)),
                other => Err(Error::Classification(format!(
                    "fork with arms {other:?} is not of finite type"
                ))),
            }
        }
        _ => Err(Error::Classification(
            "Coxeter graph has more than one branch node".into(),
        )),
    }
}

fn arm_length(centre: usize, first: usize, adj: &[Vec<usize>]) -> Result<usize> {
    let (mut prev, mut cur, mut len) = (centre, first, 1);
    loop {
        let next: Vec<usize> = adj[cur].iter().copied().filter(|&v| v != prev).collect();
        match next.as_slice() {
            [] => return Ok(len),
            [v] => {
                prev = cur;
                cur = *v;
                len += 1;
            }
            _ => return Err(Error::Classification("arm branches again".into())),
        }
    }
}
