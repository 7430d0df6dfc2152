//! The three coefficient routes against independent oracles.

use algcoeff::arith::{BigIndex, PrimeField};
use algcoeff::diagonal::coeff_via_diagonal;
use algcoeff::instance::random_equation;
use algcoeff::mahler::{coeff_via_mahler, MahlerPipeline};
use algcoeff::oracle::{catalan_mod_p, expand_newton};
use algcoeff::partialpow::{coeff_via_diagonal_fast, linear_rep_fast};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalan(p: u64) -> algcoeff::arith::BiPoly {
    let f = PrimeField::new(p).unwrap();
    algcoeff::arith::BiPoly::from_terms(f, &[(0, 1, 1), (1, 0, -1), (0, 2, -1)])
}

#[test]
fn catalan_large_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u64, 3, 5, 7, 13] {
        let e = catalan(p);
        let f = e.field();
        for _ in 0..4 {
            let n = BigIndex::from_limbs((0..2).map(|_| rand::Rng::gen(&mut rng)).collect());
            let want = catalan_mod_p(&n, f);
            assert_eq!(coeff_via_diagonal(&e, &n).unwrap(), want, "diagonal p={p}");
            assert_eq!(coeff_via_diagonal_fast(&e, &n).unwrap(), want, "fast p={p}");
            assert_eq!(coeff_via_mahler(&e, &n).unwrap(), want, "mahler p={p}");
        }
    }
}

#[test]
fn decimal_powers_of_ten() {
    let e = catalan(101);
    let lr = linear_rep_fast(&e).unwrap();
    for k in [10, 100, 1000] {
        let n = BigIndex::parse(&format!("10^{k}")).unwrap();
        assert_eq!(lr.coeff(&n).unwrap(), catalan_mod_p(&n, e.field()), "10^{k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn routes_agree_with_newton(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        d in 1usize..=3,
        h in 0usize..=2,
        seed in any::<u64>(),
    ) {
        let f = PrimeField::new(p).unwrap();
        let e = random_equation(&mut ChaCha8Rng::seed_from_u64(seed), f, d, h);
        let m = 300;
        let newton = expand_newton(&e, m + 1).unwrap();
        let want: Vec<u64> = (0..=m).map(|k| newton.coeff(k)).collect();
        let fast = linear_rep_fast(&e).unwrap();
        prop_assert_eq!(&fast.coeffs_upto(m as u64).unwrap(), &want);
        for n in [0u64, 1, 17, 256, 300] {
            let idx = BigIndex::from(n);
            prop_assert_eq!(coeff_via_diagonal(&e, &idx).unwrap().value(), want[n as usize]);
        }
        if d >= 2 && p <= 5 {
            let pl = MahlerPipeline::new(&e).unwrap();
            prop_assert_eq!(&pl.coeffs_upto(m as u64).unwrap(), &want);
        }
    }

    #[test]
    fn large_indices_agree_across_routes(seed in any::<u64>(), r in 0u64..7, hi in 0u64..1_000_000) {
        let f = PrimeField::new(7).unwrap();
        let e = random_equation(&mut ChaCha8Rng::seed_from_u64(seed), f, 2, 1);
        let n = BigIndex::from(7 * hi + r);
        let fast = coeff_via_diagonal_fast(&e, &n).unwrap();
        prop_assert_eq!(fast, coeff_via_diagonal(&e, &n).unwrap());
        prop_assert_eq!(fast, coeff_via_mahler(&e, &n).unwrap());
    }
}
