//! Property tests for the exact arithmetic layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use spets::exactnum::valuation::powmod;
use spets::exactnum::{cyc_l_valuation, l_valuation_split, laurent_eval, lift_root_of_unity, CycNum, LPoly};

fn cyc(m: u32, coeffs: &[i64]) -> CycNum {
    coeffs
        .iter()
        .enumerate()
        .fold(CycNum::zero(), |acc, (k, &c)| &acc + &(&CycNum::zeta(m, k as i64) * &CycNum::from_int(c)))
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 12])
}

prop_compose! {
    fn element()(m in conductor(), c in prop::collection::vec(-6i64..6, 1..6)) -> CycNum {
        cyc(m, &c)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn inverse(a in element()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in prop::collection::vec(-5i64..5, 1..5), r in prop::collection::vec(-5i64..5, 1..5), q in 2i64..30) {
        let f = LPoly::from_ints(-1, &p);
        let g = LPoly::from_ints(0, &r);
        let qq = BigRational::from_integer(BigInt::from(q));
        let ev = |x: &LPoly| laurent_eval(x, &qq, None).unwrap();
        prop_assert_eq!(ev(&(&f * &g)), &ev(&f) * &ev(&g));
        prop_assert_eq!(ev(&(&f + &g)), &ev(&f) + &ev(&g));
    }

    #[test]
    fn valuation_recomposes(n in 1i64..100_000, d in 1i64..100_000, l in prop::sample::select(vec![3u64, 5, 7, 11])) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        let s = l_valuation_split(&r, l).unwrap();
        let lb = BigRational::from_integer(BigInt::from(l));
        let back = if s.v >= 0 { &s.l_prime_part * num_traits::pow(lb, s.v as usize) } else { &s.l_prime_part / num_traits::pow(lb, (-s.v) as usize) };
        prop_assert_eq!(back, r);
        prop_assert_eq!(spets::exactnum::v_l_rational(&s.l_prime_part, l), 0);
    }

    #[test]
    fn teichmuller_order(l in prop::sample::select(vec![7u64, 13, 19, 31, 37]), a in 1u32..4) {
        for e in (1..l).filter(|e| (l - 1) % e == 0) {
            let u = lift_root_of_unity(l, a, e).unwrap();
            prop_assert_eq!(powmod(u.value, e, u.modulus), 1);
            for f in (1..e).filter(|f| e % f == 0) {
                prop_assert_ne!(powmod(u.value, f, u.modulus), 1);
            }
        }
    }
}

#[test]
fn cyclotomic_valuation_depends_on_the_embedding() {
    // 2 - ζ₃ and 2 - ζ₃⁻¹ have norm 7; exactly one of them is divisible by
    // the prime above 7 picked out by the Teichmüller embedding ζ₃ ↦ 2.
    let x = &CycNum::from_int(2) - &CycNum::zeta(3, 1);
    let y = x.conj();
    let vx = cyc_l_valuation(&x, 7).unwrap();
    let vy = cyc_l_valuation(&y, 7).unwrap();
    let mut vs = [vx, vy];
    vs.sort_unstable();
    assert_eq!(vs, [0, 1]);
    assert_eq!(cyc_l_valuation(&(&x * &y), 7).unwrap(), 1);
}
