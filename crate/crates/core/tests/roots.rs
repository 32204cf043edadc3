use std::collections::HashSet;

use ade_core::roots::{
    classify, enumerate_exceptional, enumerate_exceptional_systems, enumerate_roots, enumerate_rulings,
    enumerate_spinor_weights, highest_root, reflect, simple_roots, weyl_group_order, weyl_orbit, DynkinComponent,
    DynkinType, ExceptionalSystem, RootDatum, SpinorSign,
};
use ade_core::{DivisorClass, Error, Family, PicardLattice, SurfaceKind};
use proptest::prelude::*;

fn kinds() -> Vec<SurfaceKind> {
    let mut out: Vec<SurfaceKind> = (4..=8).map(|n| SurfaceKind::e(n).unwrap()).collect();
    out.extend((3..=8).map(|n| SurfaceKind::d(n).unwrap()));
    out.extend((2..=8).map(|n| SurfaceKind::z(n).unwrap()));
    out
}

/// `|R|` from the Dynkin type: `n(n+1)` for `A_n`, `2n(n−1)` for `D_n`, and
/// 72, 126, 240 for `E_6`, `E_7`, `E_8`.
fn expected_root_count(kind: SurfaceKind) -> usize {
    let n = kind.n();
    match (kind.family(), n) {
        (Family::En, 4) => 20,
        (Family::En, 5) => 40,
        (Family::En, 6) => 72,
        (Family::En, 7) => 126,
        (Family::En, 8) => 240,
        (Family::Dn, 3) => 12,
        (Family::Dn, _) => 2 * n * (n - 1),
        (Family::An, _) => n * (n - 1),
        _ => unreachable!(),
    }
}

#[test]
fn root_counts_match_dynkin_types() {
    for kind in kinds() {
        assert_eq!(enumerate_roots(kind).len(), expected_root_count(kind), "{kind}");
    }
}

#[test]
fn enumerations_are_sorted_and_satisfy_their_conditions() {
    for kind in kinds() {
        let lat = PicardLattice::new(kind);
        let roots = enumerate_roots(kind);
        assert!(roots.windows(2).all(|w| w[0] < w[1]), "{kind}");
        assert!(roots.iter().all(|r| lat.square(r) == -2 && lat.degree_k(r) == 0));
        let lines = enumerate_exceptional(kind);
        assert!(lines.windows(2).all(|w| w[0] < w[1]), "{kind}");
        assert!(lines.iter().all(|l| lat.square(l) == -1 && lat.degree_k(l) == -1));
        if kind.family() != Family::En {
            let f = lat.f();
            assert!(roots.iter().chain(&lines).all(|x| lat.ip(x, &f) == 0));
        }
    }
}

/// Standard weights on `Y_n` are `l_i` and `f − l_i`; on `Z_n` only `l_i`.
#[test]
fn standard_weights() {
    for n in 3..=8 {
        let kind = SurfaceKind::d(n).unwrap();
        let lat = PicardLattice::new(kind);
        let mut expected: Vec<DivisorClass> = (1..=n).flat_map(|i| [lat.l(i), &lat.f() - &lat.l(i)]).collect();
        expected.sort();
        assert_eq!(enumerate_exceptional(kind), expected);
    }
    for n in 2..=8 {
        let kind = SurfaceKind::z(n).unwrap();
        let lat = PicardLattice::new(kind);
        let mut expected: Vec<DivisorClass> = (1..=n).map(|i| lat.l(i)).collect();
        expected.sort();
        assert_eq!(enumerate_exceptional(kind), expected);
    }
}

#[test]
fn rulings_need_en() {
    assert!(matches!(
        enumerate_rulings(SurfaceKind::d(5).unwrap()),
        Err(Error::WrongFamily { .. })
    ));
    assert!(enumerate_spinor_weights(SurfaceKind::e(6).unwrap(), SpinorSign::Plus).is_err());
}

#[test]
fn spinor_weight_counts() {
    for n in 3..=8 {
        let kind = SurfaceKind::d(n).unwrap();
        let lat = PicardLattice::new(kind);
        let plus = enumerate_spinor_weights(kind, SpinorSign::Plus).unwrap();
        let minus = enumerate_spinor_weights(kind, SpinorSign::Minus).unwrap();
        assert_eq!(plus.len(), 1 << (n - 1));
        assert_eq!(minus.len(), 1 << (n - 1));
        let f = lat.f();
        assert!(plus
            .iter()
            .all(|s| lat.square(s) == -1 && lat.degree_k(s) == -1 && lat.ip(s, &f) == 1));
        assert!(minus
            .iter()
            .all(|t| lat.square(t) == -2 && lat.degree_k(t) == 0 && lat.ip(t, &f) == 1));
    }
}

#[test]
fn simple_roots_form_the_expected_cartan_matrix() {
    for kind in kinds() {
        let datum = RootDatum::new(kind).unwrap();
        assert_eq!(datum.simple(), simple_roots(kind).as_slice());
        let t = classify(datum.roots(), datum.lattice()).unwrap();
        assert_eq!(t.to_string(), kind.expected_label());
        // Cartan matrix: 2 on the diagonal, off-diagonal entries 0 or −1.
        let c = datum.cartan();
        for (i, row) in c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(v, 2);
                } else {
                    assert!(v == 0 || v == -1);
                }
            }
        }
        // Every root is an integer combination with coefficients of one sign.
        for i in 0..datum.roots().len() {
            let k = datum.coords(i);
            assert!(k.iter().all(|&x| x >= 0) || k.iter().all(|&x| x <= 0));
            assert_eq!(&datum.from_coordinates(k), &datum.roots()[i]);
        }
    }
}

#[test]
fn highest_roots() {
    for kind in kinds() {
        let hr = highest_root(kind).unwrap();
        let datum = RootDatum::new(kind).unwrap();
        let max_height = (0..datum.roots().len()).map(|i| datum.height(i)).max().unwrap();
        assert_eq!(hr.coefficients.iter().sum::<i64>(), max_height, "{kind}");
    }
}

#[test]
fn weyl_orders_and_orbits() {
    assert_eq!(
        weyl_group_order(&DynkinType::new(vec![DynkinComponent::E(8)])),
        696_729_600
    );
    assert_eq!(weyl_group_order(&DynkinType::new(vec![DynkinComponent::D(4)])), 192);
    for kind in [
        SurfaceKind::e(6).unwrap(),
        SurfaceKind::d(5).unwrap(),
        SurfaceKind::z(5).unwrap(),
    ] {
        let lat = PicardLattice::new(kind);
        let lines = enumerate_exceptional(kind);
        assert_eq!(weyl_orbit(&lines[0], kind).unwrap(), lines, "{kind}");
        let roots = enumerate_roots(kind);
        assert_eq!(weyl_orbit(&roots[0], kind).unwrap(), roots, "{kind}");
        assert!(reflect(&lat, &lines[0], &roots[0]).is_err());
    }
}

#[test]
fn exceptional_system_counts() {
    for (kind, expected) in [
        (SurfaceKind::z(3).unwrap(), 6u128),
        (SurfaceKind::e(4).unwrap(), 120),
        (SurfaceKind::e(5).unwrap(), 1920),
        (SurfaceKind::d(5).unwrap(), 1920),
    ] {
        let systems = enumerate_exceptional_systems(kind, 1_000_000).unwrap();
        assert_eq!(systems.len() as u128, expected, "{kind}");
        let set: HashSet<&ExceptionalSystem> = systems.iter().collect();
        assert_eq!(set.len(), systems.len());
    }
    assert!(matches!(
        enumerate_exceptional_systems(SurfaceKind::e(7).unwrap(), 1_000_000),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn system_validation() {
    let kind = SurfaceKind::d(3).unwrap();
    let lat = PicardLattice::new(kind);
    let good = vec![lat.l(1), lat.l(2), lat.l(3)];
    assert!(ExceptionalSystem::new(kind, good.clone()).is_ok());
    assert!(matches!(
        ExceptionalSystem::new(kind, good[..2].to_vec()),
        Err(Error::Malformed(_))
    ));
    let odd = vec![&lat.f() - &lat.l(1), lat.l(2), lat.l(3)];
    assert!(matches!(ExceptionalSystem::new(kind, odd), Err(Error::Consistency(_))));
    let even = vec![&lat.f() - &lat.l(1), &lat.f() - &lat.l(2), lat.l(3)];
    assert!(ExceptionalSystem::new(kind, even).is_ok());
}

fn kind_root_pair() -> impl Strategy<Value = (SurfaceKind, usize, usize)> {
    prop::sample::select(kinds()).prop_flat_map(|k| {
        let m = expected_root_count(k);
        (Just(k), 0..m, 0..m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// A reflection in a root permutes the roots and the exceptional
    /// classes, and preserves the pairing and the canonical class.
    #[test]
    fn reflections_permute_roots_and_lines((kind, a, b) in kind_root_pair()) {
        let lat = PicardLattice::new(kind);
        let roots = enumerate_roots(kind);
        let alpha = &roots[a];
        let x = &roots[b];
        let rx = reflect(&lat, alpha, x).unwrap();
        prop_assert!(roots.binary_search(&rx).is_ok());
        prop_assert_eq!(reflect(&lat, alpha, &rx).unwrap(), x.clone());
        prop_assert_eq!(reflect(&lat, alpha, lat.canonical()).unwrap(), lat.canonical().clone());
        let lines = enumerate_exceptional(kind);
        let mut image: Vec<DivisorClass> = lines.iter().map(|l| reflect(&lat, alpha, l).unwrap()).collect();
        image.sort();
        prop_assert_eq!(image, lines.clone());
        for l in lines.iter().take(6) {
            let rl = reflect(&lat, alpha, l).unwrap();
            prop_assert_eq!(lat.ip(&rl, &rx), lat.ip(l, x));
        }
    }
}
