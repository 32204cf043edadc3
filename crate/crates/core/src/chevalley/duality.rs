//! Weight-level duality statements between the representation weight sets.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, Family, PicardLattice, SurfaceKind};
use crate::roots::{enumerate_exceptional, enumerate_roots, enumerate_rulings, enumerate_spinor_weights, SpinorSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DualityPair {
    /// `l ↦ l + K` from `I_n` onto the roots (the `E_8` adjoint statement).
    LinesToRoots,
    /// `R ↦ −(R + K)` from `Ru_n` onto `I_n` (`E_6`).
    RulingsToLines,
    /// `R ↦ R + K` from `Ru_n` onto the roots (`E_7`).
    RulingsToRoots,
    /// `S ↦ −S + (m−3)f − K` and `T ↦ −T + (m−4)f − K` for `n = 2m`, and
    /// `S ↦ −S + (m−4)f − K` from `S⁺` onto `S⁻` for `n = 2m − 1`.
    SpinorTwist,
    /// Clifford incidences `S⁺ ⊗ W* → S⁻` and `S⁻ ⊗ W → S⁺`.
    Clifford,
}

impl fmt::Display for DualityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualityPair::LinesToRoots => "lines-roots",
            DualityPair::RulingsToLines => "rulings-lines",
            DualityPair::RulingsToRoots => "rulings-roots",
            DualityPair::SpinorTwist => "spinor-twist",
            DualityPair::Clifford => "clifford",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapCheck {
    pub map: String,
    pub domain: usize,
    pub codomain: usize,
    pub pass: bool,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub pair: String,
    pub kind: SurfaceKind,
    pub pass: bool,
    pub checks: Vec<MapCheck>,
}

const MAX_COUNTEREXAMPLES: usize = 8;

/// Checks that `map` sends `domain` bijectively onto `codomain`.
fn bijection(
    lat: &PicardLattice,
    name: String,
    domain: &[DivisorClass],
    codomain: &[DivisorClass],
    map: impl Fn(&DivisorClass) -> DivisorClass,
) -> MapCheck {
    let target: HashSet<&DivisorClass> = codomain.iter().collect();
    let mut images = HashSet::new();
    let mut bad = Vec::new();
    for x in domain {
        let y = map(x);
        if !target.contains(&y) {
            bad.push(format!(
                "{} ↦ {} is outside the codomain",
                lat.format_class(x),
                lat.format_class(&y)
            ));
        } else if !images.insert(y.clone()) {
            bad.push(format!(
                "{} ↦ {} is hit twice",
                lat.format_class(x),
                lat.format_class(&y)
            ));
        }
    }
    if bad.is_empty() && images.len() != codomain.len() {
        bad.push(format!("image has {} of {} elements", images.len(), codomain.len()));
    }
    let pass = bad.is_empty();
    bad.truncate(MAX_COUNTEREXAMPLES);
    MapCheck {
        map: name,
        domain: domain.len(),
        codomain: codomain.len(),
        pass,
        counterexamples: bad,
    }
}

/// Verifies one of the duality statements on weight sets.
pub fn check_duality(kind: SurfaceKind, pair: DualityPair) -> Result<DualityReport> {
    let lat = PicardLattice::new(kind);
    let k = lat.canonical().clone();
    let family_error = |expected: &'static str| Error::WrongFamily {
        op: "check_duality",
        expected,
        found: kind.to_string(),
    };
    let checks = match pair {
        DualityPair::LinesToRoots => {
            if kind.family() != Family::En {
                return Err(family_error("En"));
            }
            vec![bijection(
                &lat,
                "l ↦ l + K".into(),
                &enumerate_exceptional(kind),
                &enumerate_roots(kind),
                |l| l + &k,
            )]
        }
        DualityPair::RulingsToLines => {
            if kind.family() != Family::En {
                return Err(family_error("En"));
            }
            vec![bijection(
                &lat,
                "R ↦ −(R + K)".into(),
                &enumerate_rulings(kind)?,
                &enumerate_exceptional(kind),
                |r| -(r + &k),
            )]
        }
        DualityPair::RulingsToRoots => {
            if kind.family() != Family::En {
                return Err(family_error("En"));
            }
            vec![bijection(
                &lat,
                "R ↦ R + K".into(),
                &enumerate_rulings(kind)?,
                &enumerate_roots(kind),
                |r| r + &k,
            )]
        }
        DualityPair::SpinorTwist => {
            if kind.family() != Family::Dn {
                return Err(family_error("Dn"));
            }
            let plus = enumerate_spinor_weights(kind, SpinorSign::Plus)?;
            let minus = enumerate_spinor_weights(kind, SpinorSign::Minus)?;
            let n = kind.n() as i64;
            let twist = |shift: i64| lat.f().scale(shift).add_scaled(-1, &k);
            if n % 2 == 0 {
                let m = n / 2;
                let t_plus = twist(m - 3);
                let t_minus = twist(m - 4);
                vec![
                    bijection(
                        &lat,
                        format!("S ↦ −S + ({})f − K on S⁺", m - 3),
                        &plus,
                        &plus,
                        |s| &t_plus - s,
                    ),
                    bijection(
                        &lat,
                        format!("T ↦ −T + ({})f − K on S⁻", m - 4),
                        &minus,
                        &minus,
                        |t| &t_minus - t,
                    ),
                ]
            } else {
                let m = (n + 1) / 2;
                let t = twist(m - 4);
                vec![bijection(
                    &lat,
                    format!("S ↦ −S + ({})f − K from S⁺ to S⁻", m - 4),
                    &plus,
                    &minus,
                    |s| &t - s,
                )]
            }
        }
        DualityPair::Clifford => {
            if kind.family() != Family::Dn {
                return Err(family_error("Dn"));
            }
            vec![clifford(&lat, kind)?]
        }
    };
    Ok(DualityReport {
        pair: pair.to_string(),
        kind,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// `S − w ∈ S⁻` exactly when `S·w = 0`, and `T + w ∈ S⁺` exactly when
/// `T·w = 1`; every spinor weight is incident to exactly `n` standard weights.
fn clifford(lat: &PicardLattice, kind: SurfaceKind) -> Result<MapCheck> {
    let plus = enumerate_spinor_weights(kind, SpinorSign::Plus)?;
    let minus = enumerate_spinor_weights(kind, SpinorSign::Minus)?;
    let standard = enumerate_exceptional(kind);
    let plus_set: HashSet<&DivisorClass> = plus.iter().collect();
    let minus_set: HashSet<&DivisorClass> = minus.iter().collect();
    let n = kind.n();
    let mut bad = Vec::new();
    for (spinors, sign, pairing, partner) in [(&plus, -1i64, 0i64, &minus_set), (&minus, 1, 1, &plus_set)] {
        for s in spinors.iter() {
            let mut hits = 0;
            for w in &standard {
                let image = s.add_scaled(sign, w);
                let inside = partner.contains(&image);
                if inside != (lat.ip(s, w) == pairing) {
                    bad.push(format!(
                        "{} and {}: incidence disagrees with the pairing",
                        lat.format_class(s),
                        lat.format_class(w)
                    ));
                }
                hits += usize::from(inside);
            }
            if hits != n {
                bad.push(format!(
                    "{} meets {hits} standard weights, not {n}",
                    lat.format_class(s)
                ));
            }
        }
    }
    let pass = bad.is_empty();
    bad.truncate(MAX_COUNTEREXAMPLES);
    Ok(MapCheck {
        map: "S − w ∈ S⁻, T + w ∈ S⁺".into(),
        domain: plus.len() + minus.len(),
        codomain: standard.len(),
        pass,
        counterexamples: bad,
    })
}

/// Unordered pairs `{w, w'}` of standard weights with `w + w' = f`, listed
/// with the smaller class first.
pub fn quadratic_form_pairs(kind: SurfaceKind) -> Result<Vec<(DivisorClass, DivisorClass)>> {
    if kind.family() != Family::Dn {
        return Err(Error::WrongFamily {
            op: "quadratic_form_pairs",
            expected: "Dn",
            found: kind.to_string(),
        });
    }
    let lat = PicardLattice::new(kind);
    let f = lat.f();
    let weights = enumerate_exceptional(kind);
    let mut out = Vec::new();
    for (i, a) in weights.iter().enumerate() {
        for b in &weights[i + 1..] {
            if (a + b) == f {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        assert!(
            check_duality(SurfaceKind::e(8).unwrap(), DualityPair::LinesToRoots)
                .unwrap()
                .pass
        );
        assert!(
            check_duality(SurfaceKind::e(6).unwrap(), DualityPair::RulingsToLines)
                .unwrap()
                .pass
        );
        assert!(
            check_duality(SurfaceKind::e(7).unwrap(), DualityPair::RulingsToRoots)
                .unwrap()
                .pass
        );
        assert!(
            check_duality(SurfaceKind::d(4).unwrap(), DualityPair::SpinorTwist)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn wrong_n_is_a_failed_report() {
        let report = check_duality(SurfaceKind::e(7).unwrap(), DualityPair::LinesToRoots).unwrap();
        assert!(!report.pass);
        assert!(!report.checks[0].counterexamples.is_empty());
    }

    #[test]
    fn wrong_family_is_an_error() {
        assert!(check_duality(SurfaceKind::d(4).unwrap(), DualityPair::LinesToRoots).is_err());
        assert!(check_duality(SurfaceKind::e(6).unwrap(), DualityPair::Clifford).is_err());
        assert!(quadratic_form_pairs(SurfaceKind::e(6).unwrap()).is_err());
    }

    #[test]
    fn q3_pairs() {
        let kind = SurfaceKind::d(3).unwrap();
        let lat = PicardLattice::new(kind);
        let mut got = quadratic_form_pairs(kind).unwrap();
        got.sort();
        let mut expected: Vec<_> = (1..=3)
            .map(|i| {
                let (a, b) = (lat.l(i), &lat.f() - &lat.l(i));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        expected.sort();
        assert_eq!(got, expected);
    }
}
