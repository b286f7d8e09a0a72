use proptest::prelude::*;
use scva_core::rational::{int, rat};
use scva_core::structures::names::{NU, T_TOP};
use scva_core::structures::{
    n1_from_n2, n2_structure, polarized_fermion_conformal, twist, untwist, verify, verify_n1, Twist,
};
use scva_core::vertex::nth_product;
use scva_core::{Sector, SpaceSpec, State};

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    /// The vacuum coefficient of `nu_(3) nu` is `c/2`; it must follow
    /// `-(6 lambda^2 - 6 lambda + 1) dim T` for every lambda.
    #[test]
    fn lambda_family_central_charge(p in -6i64..=6, q in 1i64..=5, dim in 1usize..=2) {
        let space = SpaceSpec::polarized(dim, Sector::NS).unwrap();
        let lambda = rat(p, q);
        let st = polarized_fermion_conformal(&space, &lambda).unwrap();
        let nu = st.get(NU).unwrap();
        let top = nth_product(&space, nu, nu, 3);
        let c = -(int(6) * &lambda * &lambda - int(6) * &lambda + int(1)) * int(2 * dim as i64);
        prop_assert_eq!(top, State::vacuum().scale(&(&c / int(2))));
        prop_assert_eq!(&st.claimed_c, &c);
        let report = verify(&st).unwrap();
        prop_assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn n1_from_n2_any_parameter(p in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5]), q in 1i64..=4) {
        let space = SpaceSpec::polarized(1, Sector::NS).unwrap();
        let st = n1_from_n2(&n2_structure(&space).unwrap(), &rat(p, q)).unwrap();
        let report = verify_n1(&st).unwrap();
        prop_assert!(report.passed(), "{}", report.to_text());
    }
}

#[test]
fn twist_round_trips() {
    for sector in [Sector::NS, Sector::R] {
        for dim in 1..=3 {
            let space = SpaceSpec::polarized(dim, sector).unwrap();
            let n2 = n2_structure(&space).unwrap();
            for which in [Twist::A, Twist::B] {
                let top = twist(&n2, which).unwrap();
                let back = untwist(&top, which).unwrap();
                assert_eq!(back.vectors, n2.vectors, "{which:?} {space}");
                assert_eq!(back.claimed_c, n2.claimed_c);
                assert_eq!(twist(&back, which).unwrap().get(T_TOP).unwrap(), top.get(T_TOP).unwrap());
            }
        }
    }
}
