use aea_core::{
    aea, bit_length, contract_bits, euclid_gcd, gcd_aea_with, replay, AeaConfig, Algorithm,
    GcdConfig, LimbBase,
};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn big(words: &[u64]) -> BigUint {
    BigUint::new(
        words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn algorithms_agree(x in any::<u128>(), y in any::<u128>()) {
        let (u, v) = (BigUint::from(x), BigUint::from(y));
        let g = euclid_gcd(&u, &v).g;
        for alg in Algorithm::ALL {
            prop_assert_eq!(&alg.run(&u, &v).g, &g);
        }
    }

    #[test]
    fn bezout_on_multiword_inputs(a in proptest::collection::vec(any::<u64>(), 1..40),
                                  b in proptest::collection::vec(any::<u64>(), 1..40)) {
        let (u, v) = (big(&a), big(&b));
        let out = gcd_aea_with(&u, &v, &GcdConfig { bezout: true, ..GcdConfig::default() }).unwrap();
        prop_assert_eq!(&out.g, &euclid_gcd(&u, &v).g);
        let (x, y) = out.bezout.unwrap();
        prop_assert_eq!(x * BigInt::from(u) + y * BigInt::from(v), BigInt::from(out.g));
    }

    #[test]
    fn half_gcd_over_bases(a in proptest::collection::vec(any::<u64>(), 10..40),
                           b in proptest::collection::vec(any::<u64>(), 5..40),
                           width in prop_oneof![Just((true, 16u32)), Just((true, 32)), Just((true, 64)),
                                                Just((false, 4)), Just((false, 9))]) {
        let base = if width.0 { LimbBase::binary(width.1) } else { LimbBase::decimal(width.1) }.unwrap();
        let (mut u, mut v) = (big(&a), big(&b));
        if u < v {
            std::mem::swap(&mut u, &mut v);
        }
        prop_assume!(v > BigUint::from(2u32) && bit_length(&u) >= 8 * base.limb_bits());
        let r = aea(&u, &v, &AeaConfig::new(base)).unwrap();
        let want = (BigInt::from(r.reduced.0.clone()), BigInt::from(r.reduced.1.clone()));
        prop_assert_eq!(r.matrix.apply_unsigned(&u, &v), want);
        prop_assert!(r.matrix.has_unit_det());
        prop_assert_eq!(replay(&r.trace), r.matrix.clone());
        prop_assert!(bit_length(&r.reduced.1) <= contract_bits(bit_length(&u), base.limb_bits()));
    }
}
