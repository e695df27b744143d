use gmk_core::iwasawa::{
    build_un, build_wn_prime, eval_full_char, eval_univ_char, plan, weight_map_k, AlgebraicChar, CharValue,
    UnivChar, WeightChar,
};
use gmk_core::padic::{padic_exp, Cyclo, Padic, Unram};
use gmk_core::{Coeff, IwasawaSeries, PadicModule, WeightPoint};
use proptest::prelude::*;

const PREC: u32 = 8;

fn principal_unit(p: u32, a: i64, cap: u32) -> Padic {
    Padic::from_int(p, 1 + a * p as i64, cap)
}

#[test]
fn classical_specialization_recovers_powers() {
    for (p, n) in [(3u32, 1u32), (5, 1), (3, 2)] {
        let uc = UnivChar::new(p, n, PREC).unwrap();
        let cap = uc.plan().cap;
        for a in [1i64, 2, 7, 13] {
            let beta = principal_unit(p, a, cap);
            let s = uc.eval(&beta).unwrap();
            for k in 0..=10 {
                let got = s.specialize(&WeightPoint::classical(p, k, cap).unwrap()).unwrap();
                let diff = got - &beta.pow(k as u64);
                assert!(diff.is_zero() && diff.prec() >= 6, "p={p} n={n} a={a} k={k}: {diff}");
            }
        }
    }
}

#[test]
fn finite_order_specialization_is_a_root_of_unity() {
    let (p, n) = (3u32, 2u32);
    let uc = UnivChar::new(p, n, PREC).unwrap();
    let cap = uc.plan().cap;
    let pt = WeightPoint::root_of_unity(p, 1, 1, cap).unwrap();
    for alpha in 0..9 {
        let beta = padic_exp(&Padic::from_int(p, alpha * p as i64, cap)).unwrap();
        let got = uc.eval(&beta).unwrap().specialize(&pt).unwrap();
        assert!((got - &Cyclo::xi_pow(p, 1, alpha, cap)).is_zero(), "alpha={alpha}");
    }
}

#[test]
fn exactly_one_indicator_fires() {
    for (p, n) in [(3u32, 2u32), (5, 2), (3, 3)] {
        let uc = UnivChar::new(p, n, 4).unwrap();
        let cap = uc.plan().cap;
        for a in 0..40 {
            let ind = uc.indicators(&principal_unit(p, a, cap)).unwrap();
            assert_eq!(ind.iter().filter(|&&b| b).count(), 1, "p={p} n={n} a={a}");
        }
    }
}

#[test]
fn membership_certificates() {
    for (p, n) in [(3u32, 1u32), (3, 2), (5, 2), (7, 1)] {
        let pl = plan(p, n, PREC);
        build_un(p, n, pl.trunc, pl.cap).unwrap().certify_membership(2 - n as i64).unwrap();
        build_wn_prime(p, n, pl.trunc, pl.cap).unwrap().certify_membership(1 - n as i64).unwrap();
    }
}

#[test]
fn universal_character_is_multiplicative() {
    let (p, n) = (5u32, 1u32);
    let uc = UnivChar::new(p, n, PREC).unwrap();
    let cap = uc.plan().cap;
    let (a, b) = (principal_unit(p, 3, cap), principal_unit(p, 11, cap));
    let lhs = uc.eval(&(a.clone() * &b)).unwrap();
    let rhs = uc.eval(&a).unwrap() * &uc.eval(&b).unwrap();
    // compare at several classical points rather than coefficientwise
    for k in [0, 1, 4, 9] {
        let pt = WeightPoint::classical(p, k, cap).unwrap();
        assert!((lhs.specialize(&pt).unwrap() - &rhs.specialize(&pt).unwrap()).is_zero(), "k={k}");
    }
}

#[test]
fn point_outside_the_disk_is_rejected() {
    let uc = UnivChar::new(3, 1, 4).unwrap();
    let s = uc.eval(&principal_unit(3, 1, uc.plan().cap)).unwrap();
    let bad = WeightPoint::from_padic(Padic::one(3, 10));
    assert!(s.specialize(&bad).is_err());
}

#[test]
fn eval_rejects_beta_outside_principal_units() {
    assert!(eval_univ_char(3, 1, &Padic::from_int(3, 2, 10), 4).is_err());
    assert!(eval_univ_char(3, 1, &Padic::from_int(3, 3, 10), 4).is_err());
}

#[test]
fn full_character_classical_value() {
    // β ↦ β^2 at β = 4 is 16
    let v = eval_full_char(&WeightChar::power(3, 2), &Padic::from_int(3, 4, PREC), PREC).unwrap();
    let want = Padic::from_int(3, 16, PREC);
    assert!(v.approx_eq(&CharValue::Padic(want)));
}

#[test]
fn full_character_splits_through_teichmuller() {
    // β^k = ω(β)^k <β>^k, for β not congruent to 1
    for k in [-3i64, 0, 1, 5] {
        let beta = Padic::from_int(5, 7, PREC);
        let got = eval_full_char(&WeightChar::power(5, k), &beta, PREC).unwrap();
        let want = if k >= 0 { beta.pow(k as u64) } else { beta.inv().unwrap().pow(k.unsigned_abs()) };
        assert!(got.approx_eq(&CharValue::Padic(want)), "k={k}");
    }
}

#[test]
fn weight_map_on_classical_characters() {
    // r = t, ν = t^4: t ↦ t^(-2) t^4 = t^2
    let k = weight_map_k(&WeightChar::power(3, 1), &WeightChar::power(3, 4), PREC).unwrap();
    for b in [2i64, 4, 5, 7] {
        let beta = Padic::from_int(3, b, PREC);
        let got = eval_full_char(&k, &beta, PREC).unwrap();
        assert!(got.approx_eq(&CharValue::Padic(beta.pow(2))), "b={b}");
    }
    let triv = weight_map_k(&WeightChar::power(3, 0), &WeightChar::power(3, 0), PREC).unwrap();
    let one = eval_full_char(&triv, &Padic::from_int(3, 5, PREC), PREC).unwrap();
    assert!(one.approx_eq(&CharValue::Padic(Padic::one(3, PREC))));
}

#[test]
fn algebraic_character_uses_frobenius() {
    let x = Unram::quadratic(3, 1, 0, Padic::from_int(3, 1, PREC), Padic::from_int(3, 1, PREC)).unwrap();
    let chi = AlgebraicChar::new(vec![1, 1]);
    let v = chi.eval(&x).unwrap().unwrap();
    assert!((v - &x.embed(&x.norm().unwrap())).is_zero());
    assert_eq!(AlgebraicChar::weight_map(&AlgebraicChar::new(vec![1, 0]), 4).exps, vec![2, 4]);
}

#[test]
fn weight_char_json_has_kind_tag() {
    let w = WeightChar::universal(5, 2);
    let v = serde_json::to_value(&w).unwrap();
    assert_eq!(v["kind"], "universal");
    let back: WeightChar = serde_json::from_value(v).unwrap();
    assert_eq!(back, w);
}

fn series(p: u32, coeffs: &[i64]) -> IwasawaSeries {
    IwasawaSeries::new(p, 1, coeffs.iter().map(|&c| Padic::from_int(p, c, 16)).collect(), i64::MAX).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specialization_is_a_ring_map(
        a in prop::collection::vec(-50i64..50, 1..6),
        b in prop::collection::vec(-50i64..50, 1..6),
        k in 0i64..8,
    ) {
        let p = 3;
        let (x, y) = (series(p, &a), series(p, &b));
        let pt = WeightPoint::classical(p, k, 16).unwrap();
        let sx = x.specialize(&pt).unwrap();
        let sy = y.specialize(&pt).unwrap();
        prop_assert!(((x.clone() * &y).specialize(&pt).unwrap() - &(sx.clone() * &sy)).is_zero());
        prop_assert!(((x + &y).specialize(&pt).unwrap() - &(sx + &sy)).is_zero());
    }

    #[test]
    fn series_json_round_trip(a in prop::collection::vec(-50i64..50, 1..6)) {
        let x = series(5, &a);
        let s = serde_json::to_string(&x).unwrap();
        let y: IwasawaSeries = serde_json::from_str(&s).unwrap();
        prop_assert!(x.approx_eq(&y));
    }
}
