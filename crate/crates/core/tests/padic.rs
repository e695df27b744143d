use gmk_core::padic::{
    binomial, factorial_valuation, gauss_sum, padic_exp, padic_log1p, teichmuller, Cyclo, Padic, Unram,
};
use gmk_core::{Coeff, DirichletChar, PadicModule};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

const CAP: u32 = 12;

fn modulus(p: u32, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// The residue of an integral element modulo `p^k`.
fn residue(x: &Padic, k: u32) -> BigInt {
    x.residue().unwrap().mod_floor(&modulus(x.prime(), k))
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5), Just(7)]
}

proptest! {
    #[test]
    fn ring_ops_agree_with_integers_mod_pk(p in prime(), a in -100_000i64..100_000, b in -100_000i64..100_000) {
        let (x, y) = (Padic::from_int(p, a, CAP), Padic::from_int(p, b, CAP));
        let k = 6;
        let m = modulus(p, k);
        prop_assert_eq!(residue(&(x.clone() + &y), k), BigInt::from(a + b).mod_floor(&m));
        prop_assert_eq!(residue(&(x.clone() - &y), k), BigInt::from(a - b).mod_floor(&m));
        prop_assert_eq!(residue(&(x.clone() * &y), k), (BigInt::from(a) * b).mod_floor(&m));
    }

    #[test]
    fn unit_inverse(p in prime(), a in 1i64..100_000) {
        prop_assume!(a % p as i64 != 0);
        let x = Padic::from_int(p, a, CAP);
        let one = x.clone() * &x.inv().unwrap();
        prop_assert!((one - &Padic::one(p, CAP)).is_zero());
    }

    #[test]
    fn valuation_is_additive(p in prime(), a in 1i64..50_000, b in 1i64..50_000) {
        let (x, y) = (Padic::from_int(p, a, CAP), Padic::from_int(p, b, CAP));
        prop_assert_eq!((x.clone() * &y).val(), x.val() + y.val());
    }

    #[test]
    fn precision_is_absolute(p in prime(), a in 1i64..1000, e in -4i64..4) {
        // x p^e keeps relative precision; adding an exact integer caps the
        // absolute precision at that of x p^e
        let x = Padic::from_int(p, a, CAP).mul_p_power(p, e);
        prop_assert_eq!(x.rel_prec(), CAP as i64);
        let s = x.clone() + &Padic::from_int(p, 1, 40);
        prop_assert!(s.prec() <= x.prec());
    }

    #[test]
    fn json_round_trip(p in prime(), a in -100_000i64..100_000, e in -3i64..3) {
        let x = Padic::from_int(p, a, CAP).mul_p_power(p, e);
        let s = serde_json::to_string(&x).unwrap();
        let y: Padic = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn exp_log_inverse(p in prime(), a in 1i64..10_000) {
        let x = Padic::from_int(p, a * p as i64, CAP);
        let back = padic_log1p(&(padic_exp(&x).unwrap() - &Padic::one(p, CAP))).unwrap();
        prop_assert!((back - &x).is_zero());
    }

    #[test]
    fn factorial_valuation_matches_legendre(p in prime(), h in 0u64..400) {
        // Legendre: v(h!) = (h - s_p(h)) / (p - 1)
        let mut digits = 0u64;
        let mut t = h;
        while t > 0 {
            digits += t % p as u64;
            t /= p as u64;
        }
        prop_assert_eq!(factorial_valuation(h, p), (h - digits) / (p as u64 - 1));
    }
}

#[test]
fn exact_zero_round_trips_with_null_precision() {
    let z = Padic::zero(5, CAP);
    let v: serde_json::Value = serde_json::to_value(&z).unwrap();
    assert!(v["val"].is_null() && v["prec"].is_null());
    let back: Padic = serde_json::from_value(v).unwrap();
    assert!(back.is_exact_zero());
}

#[test]
fn unit_digits_are_decimal_strings() {
    let x = Padic::from_int(3, 16, 8);
    let v: serde_json::Value = serde_json::to_value(&x).unwrap();
    assert_eq!(v, serde_json::json!({"p": 3, "val": 0, "unit": "16", "prec": 8}));
}

#[test]
fn nonzero_elements_invert_and_zero_does_not() {
    assert!(Padic::from_int(3, 9, CAP).inv().is_ok());
    assert!(Padic::from_int(3, 0, CAP).inv().is_err());
}

#[test]
fn rejects_even_and_composite_primes() {
    assert!(Padic::new(2, 0, BigInt::from(1), 5).is_err());
    assert!(Padic::new(9, 0, BigInt::from(1), 5).is_err());
}

#[test]
fn teichmuller_is_a_root_of_unity() {
    for p in [3u32, 5, 7] {
        for a in 1..p as i64 {
            let w = teichmuller(p, a, CAP).unwrap();
            assert!((w.pow(p as u64 - 1) - &Padic::one(p, CAP)).is_zero());
            assert_eq!(residue(&w, 1), BigInt::from(a));
        }
    }
}

#[test]
fn binomial_small_table() {
    assert_eq!(binomial(6, 2), BigInt::from(15));
    assert_eq!(binomial(10, 0), BigInt::from(1));
    assert_eq!(binomial(3, 5), BigInt::zero());
}

#[test]
fn xi_has_order_p_to_the_level() {
    for (p, level) in [(3u32, 1u32), (3, 2), (5, 1)] {
        let order = (p as i64).pow(level);
        let xi = Cyclo::xi(p, level, CAP);
        let one = xi.one_like();
        assert!((xi.pow(order as u64) - &one).is_zero());
        assert!(!(xi.pow((order / p as i64) as u64) - &one).is_zero());
    }
}

#[test]
fn gauss_sum_norm() {
    // |g_χ|^2 = p^n for primitive χ: g_χ g_{χ^{-1}} = χ(-1) p^n
    for (p, level) in [(3u32, 1u32), (5, 1), (3, 2)] {
        let xi = Cyclo::xi(p, level, CAP);
        for chi in DirichletChar::all(p, level, CAP).unwrap().into_iter().filter(|c| c.is_primitive()) {
            let g = gauss_sum(&chi, &xi).unwrap();
            let h = gauss_sum(&chi.inverse(), &xi).unwrap();
            let sign = chi.value(-1).unwrap();
            let want = sign.scale(&Padic::from_int(p, (p as i64).pow(level), CAP));
            assert!((g * &h - &want).is_zero(), "p={p} level={level} chi={:?}", chi.params());
        }
    }
}

#[test]
fn unramified_frobenius_and_norm() {
    // x^2 + 1 is irreducible mod 3; Frobenius sends the generator to its conjugate
    let x = Unram::generator(3, 1, 0, CAP).unwrap();
    let fx = x.frobenius().unwrap();
    assert!((fx.clone() + &x).is_zero());
    assert!((x.norm().unwrap() - &Padic::one(3, CAP)).is_zero());
    assert!(Unram::generator(5, 1, 0, CAP).is_err(), "x^2 + 1 splits mod 5");
}
