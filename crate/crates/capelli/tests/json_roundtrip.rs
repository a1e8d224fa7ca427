use capelli::json::{
    decode_matrices, decode_substitution, encode_matrices, encode_substitution, format_rational,
    parse_file, parse_rational,
};
use capelli_core::rng::seeded;
use capelli_core::{Matrix, PrimeField, Rationals, Substitution};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_print_and_parse(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn prime_files_round_trip(p in prop::sample::select(vec![2u64, 3, 7, 101, 2147483647]), n in 1usize..4, count in 1usize..4, seed: u64) {
        let f = PrimeField::new(p).unwrap();
        let mut rng = seeded(seed, 0);
        let mats: Vec<_> = (0..count).map(|_| Matrix::random(&f, n, &mut rng).unwrap()).collect();
        let file = parse_file(&encode_matrices(&f, n, &mats).to_string()).unwrap();
        prop_assert_eq!(decode_matrices(&f, &file).unwrap(), mats);
    }

    #[test]
    fn rational_substitutions_round_trip(n in 1usize..4, a in 1usize..4, b in 0usize..3, seed: u64) {
        let mut rng = seeded(seed, 1);
        let mut draw = || {
            let m = Matrix::random_small(&Rationals, n, 5, &mut rng).unwrap();
            // Divide by a small constant so fractional entries show up.
            m.scale(&BigRational::new(BigInt::from(1), BigInt::from(3)))
        };
        let xs: Vec<_> = (0..a).map(|_| draw()).collect();
        let ys: Vec<_> = (0..b).map(|_| draw()).collect();
        let subst = Substitution::new(xs, ys);
        let file = parse_file(&encode_substitution(&subst).to_string()).unwrap();
        let back = decode_substitution(&Rationals, &file).unwrap();
        prop_assert_eq!(back.xs, subst.xs);
        prop_assert_eq!(back.ys, subst.ys);
    }
}
