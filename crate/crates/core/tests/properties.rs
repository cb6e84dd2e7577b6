use proptest::prelude::*;
use sympn_core::centralizer::weyl_of_centralizer;
use sympn_core::normalizer::{base_lift, mono_mul, weyl_image, MonomialMatrix, UnitCoef};
use sympn_core::stubborn::{commutant_dimension, GroupSpec};
use sympn_core::torus::{DyadicAngle, TorusPoint, TorusSubgroup};
use sympn_core::weyl::{act, SignedPerm, WeylSubgroup};

fn signed_perm(n: usize) -> impl Strategy<Value = SignedPerm> {
    (
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        proptest::collection::vec(any::<bool>(), n),
    )
        .prop_map(|(p, s)| SignedPerm::from_parts(&p, &s).unwrap())
}

fn angle(level: u32) -> impl Strategy<Value = DyadicAngle> {
    (0i64..1 << level).prop_map(move |a| DyadicAngle::new(a, level).unwrap())
}

fn torus_point(n: usize, level: u32) -> impl Strategy<Value = TorusPoint> {
    proptest::collection::vec(angle(level), n).prop_map(TorusPoint::new)
}

fn unit(level: u32) -> impl Strategy<Value = UnitCoef> {
    (angle(level), any::<bool>()).prop_map(|(a, j)| if j { UnitCoef::zeta_j(a) } else { UnitCoef::zeta(a) })
}

fn lipschitz_unit() -> impl Strategy<Value = UnitCoef> {
    prop::sample::select(UnitCoef::q8())
}

fn monomial(n: usize, units: impl Strategy<Value = UnitCoef>) -> impl Strategy<Value = MonomialMatrix> {
    (
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        proptest::collection::vec(units, n),
    )
        .prop_map(|(p, c)| MonomialMatrix::from_parts(&p, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_a_left_action(
        (a, b, t) in (1usize..=5).prop_flat_map(|n| (signed_perm(n), signed_perm(n), torus_point(n, 4)))
    ) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(act(&ab, &t).unwrap(), act(&a, &act(&b, &t).unwrap()).unwrap());
        prop_assert_eq!(act(&SignedPerm::identity(a.rank()), &t).unwrap(), t.clone());
        prop_assert_eq!(a.compose(&a.inverse()).unwrap(), SignedPerm::identity(a.rank()));
    }

    #[test]
    fn signed_perm_text_round_trip(w in (1usize..=6).prop_flat_map(signed_perm)) {
        let text = w.to_string();
        prop_assert_eq!(text.parse::<SignedPerm>().unwrap(), w);
    }

    #[test]
    fn weyl_image_is_a_homomorphism(
        (a, b) in (1usize..=4).prop_flat_map(|n| (monomial(n, unit(3)), monomial(n, unit(3))))
    ) {
        let ab = mono_mul(&a, &b).unwrap();
        prop_assert_eq!(weyl_image(&ab), weyl_image(&a).compose(&weyl_image(&b)).unwrap());
        prop_assert_eq!(weyl_image(&a.inverse()), weyl_image(&a).inverse());
    }

    #[test]
    fn base_lift_maps_back(w in (1usize..=5).prop_flat_map(signed_perm)) {
        prop_assert_eq!(weyl_image(&base_lift(&w)), w);
    }

    /// Conjugating a torus element by a normalizer element acts through the
    /// Weyl group.
    #[test]
    fn conjugation_acts_through_weyl(
        (x, t) in (1usize..=4).prop_flat_map(|n| (monomial(n, unit(3)), torus_point(n, 3)))
    ) {
        let conj = mono_mul(&mono_mul(&x, &MonomialMatrix::torus(&t)).unwrap(), &x.inverse()).unwrap();
        let moved = act(&weyl_image(&x), &t).unwrap();
        prop_assert_eq!(conj, MonomialMatrix::torus(&moved));
    }

    #[test]
    fn monomial_text_round_trip(m in (1usize..=4).prop_flat_map(|n| monomial(n, unit(4)))) {
        let text = m.to_string();
        prop_assert_eq!(text.parse::<MonomialMatrix>().unwrap(), m);
    }

    /// Adding matrices to a set can only shrink its commutant.
    #[test]
    fn commutant_is_antitone(
        (s, extra) in (1usize..=3).prop_flat_map(|n| (
            proptest::collection::vec(monomial(n, lipschitz_unit()), 0..3),
            monomial(n, lipschitz_unit()),
        ))
    ) {
        let n = extra.rank();
        let small = commutant_dimension(n, &s).unwrap();
        let mut bigger = s.clone();
        bigger.push(extra);
        let large = commutant_dimension(n, &bigger).unwrap();
        prop_assert!(large <= small);
        // The real scalars always commute.
        prop_assert!(large >= 1);
    }

    /// Larger torus subgroups have smaller centralizer Weyl groups.
    #[test]
    fn centralizer_is_antitone(
        (a, b) in (1usize..=3).prop_flat_map(|n| (
            proptest::collection::vec(torus_point(n, 2), 0..2),
            torus_point(n, 2),
        ))
    ) {
        let n = b.rank();
        let w = WeylSubgroup::full(n);
        let small = TorusSubgroup::generated(n, a.clone()).unwrap();
        let mut gens = a;
        gens.push(b);
        let large = TorusSubgroup::generated(n, gens).unwrap();
        let w_small = weyl_of_centralizer(&w, &small).unwrap();
        let w_large = weyl_of_centralizer(&w, &large).unwrap();
        prop_assert!(w_large.is_subgroup_of(&w_small));
    }

    #[test]
    fn group_spec_round_trip(k in 0u32..4, m in 2u32..5, r in 0u32..3, pick in 0usize..5) {
        let spec = match pick {
            0 => GroupSpec::Gamma(k),
            1 => GroupSpec::GammaBar(k, m),
            2 => GroupSpec::E(k),
            3 => GroupSpec::Wreath(Box::new(GroupSpec::Gamma(k)), r),
            _ => GroupSpec::Product(vec![GroupSpec::E(k), GroupSpec::GammaBar(r, m)]),
        };
        let text = spec.to_string();
        prop_assert_eq!(text.parse::<GroupSpec>().unwrap(), spec);
    }
}
