use gmk_core::iwasawa::AlgebraicChar;
use gmk_core::triple::{
    correction_coeffs, delta_eval, euler_e, euler_e1, slot_character, triple_t, verify_theta_m_identity,
    DeltaKernelSpec, EigenScalar, PrimeSlot, TripleEigenData, TripleWeights,
};
use gmk_core::{Basis, Coeff, Error, NearlyForm, Padic, Unram, WeightChar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const CAP: u32 = 12;

fn constant(p: u32, k: i64, a: i64) -> NearlyForm<Padic> {
    NearlyForm::from_terms(WeightChar::power(p, k), 0, 1, Basis::W, 30, [(0, 0, Padic::from_int(p, a, CAP))]).unwrap()
}

fn form(p: u32, k: i64, terms: &[(u64, i64)]) -> NearlyForm<Padic> {
    NearlyForm::from_terms(
        WeightChar::power(p, k),
        0,
        1,
        Basis::V,
        40,
        terms.iter().map(|&(nu, a)| (0, nu, Padic::from_int(p, a, CAP))),
    )
    .unwrap()
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn product_of_constants() {
    // m = 0, so t = binom(M - 2, k1 - 1) s1 s2 = 2 s1 s2
    let w = TripleWeights::unbalanced(2, 2, 4).unwrap();
    let t = triple_t(&w, &constant(3, 2, 1), &constant(3, 2, 1)).unwrap();
    assert_eq!(t.classical_weight(), Some(4));
    assert!((t.coeff(0, 0).unwrap().clone() - &Padic::from_int(3, 2, CAP)).is_zero());
}

#[test]
fn weights_are_validated() {
    assert!(matches!(TripleWeights::new(1, 2, 2), Err(Error::InvalidWeights(_))));
    assert!(matches!(TripleWeights::unbalanced(2, 2, 2), Err(Error::InvalidWeights(_))));
    assert!(matches!(TripleWeights::unbalanced(0, 2, 4), Err(Error::InvalidWeights(_))));
    let w = TripleWeights::unbalanced(2, 2, 6).unwrap();
    assert!(triple_t(&w, &constant(3, 4, 1), &constant(3, 2, 1)).is_err());
}

#[test]
fn correction_coefficients_match_direct_sums() {
    for (k1, k2, k3) in [(2, 2, 6), (2, 4, 10), (3, 3, 12), (4, 2, 12), (1, 1, 6)] {
        let w = TripleWeights::unbalanced(k1, k2, k3).unwrap();
        let (m, big_m) = ((k3 - k1 - k2) / 2, (k1 + k2 + k3) / 2);
        let norm = binom(k3 - 2, m + k2 - 1);
        let want: Vec<BigRational> = (0..m)
            .map(|i| {
                let s: BigInt = (0..=i).map(|j| binom(m, j) * binom(big_m - 2, k1 + j - 1)).sum();
                let sign = if (i + m + 1) % 2 == 0 { 1 } else { -1 };
                BigRational::new(s * sign, norm.clone())
            })
            .collect();
        assert_eq!(correction_coeffs(&w).unwrap(), want, "{k1},{k2},{k3}");
    }
    // (2,2,6): m = 1, a_0 = binom(3,1)/binom(4,2)
    let w = TripleWeights::unbalanced(2, 2, 6).unwrap();
    assert_eq!(correction_coeffs(&w).unwrap(), vec![BigRational::new(1.into(), 2.into())]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corrected_representative_identity(
        a in prop::collection::vec((1u64..25, -200i64..200), 1..5),
        b in prop::collection::vec((1u64..25, -200i64..200), 1..5),
        k1 in 1i64..5,
        k2 in 1i64..5,
        m in 0i64..4,
    ) {
        let w = TripleWeights::unbalanced(k1, k2, k1 + k2 + 2 * m).unwrap();
        let r = verify_theta_m_identity(&w, &form(5, k1, &a), &form(5, k2, &b)).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}

fn base(p: u32, a: i64) -> EigenScalar {
    EigenScalar::Base(Padic::from_int(p, a, CAP))
}

fn data(p: u32, w: TripleWeights, e: [i64; 6]) -> TripleEigenData {
    TripleEigenData {
        p,
        weights: w,
        alpha_x: base(p, e[0]),
        beta_x: base(p, e[1]),
        alpha_y: base(p, e[2]),
        beta_y: base(p, e[3]),
        alpha_z: base(p, e[4]),
        beta_z: base(p, e[5]),
    }
}

/// `Π (1 - c p^e)` over the rationals.
fn rational_product(p: u32, cs: &[i64], e: i64) -> BigRational {
    let pe = if e >= 0 {
        BigRational::from_integer(BigInt::from(p).pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(p).pow((-e) as u32))
    };
    cs.iter().fold(BigRational::one(), |acc, &c| acc * (BigRational::one() - BigRational::from_integer(c.into()) * &pe))
}

fn assert_matches(got: &Unram, want: &BigRational, p: u32) {
    let got = got.to_base().expect("rational eigenvalues stay in Q_p");
    let d = got - &Padic::from_rational(p, want, CAP);
    assert!(d.is_zero(), "{d}");
}

#[test]
fn euler_factors_at_the_distinguished_prime() {
    let p = 5;
    let w = TripleWeights::new(2, 2, 2).unwrap();
    let [ax, bx, ay, by, az, bz] = [1, 5, 2, 3, 1, 7];
    let d = data(p, w, [ax, bx, ay, by, az, bz]);
    let e = euler_e(&PrimeSlot::Distinguished, &d).unwrap();
    let want = rational_product(p, &[ax * ay * bz, ax * by * bz, bx * ay * bz, bx * by * bz], 1 - 3);
    assert_matches(&e.value, &want, p);
    assert!(!e.exceptional);
    let e1 = euler_e1(&PrimeSlot::Distinguished, &d).unwrap();
    let want = rational_product(p, &[bz * bz], -2) * rational_product(p, &[bz * bz], -1);
    assert_matches(&e1.value, &want, p);
}

#[test]
fn euler_factors_at_another_prime() {
    let p = 7;
    let w = TripleWeights::new(2, 2, 2).unwrap();
    let [ax, bx, ay, by, az, bz] = [3, 1, 2, 4, 1, 2];
    let d = data(p, w, [ax, bx, ay, by, az, bz]);
    let slot = PrimeSlot::Other { weights: vec![[2, 2, 2], [2, 2, 2]] };
    let e = euler_e(&slot, &d).unwrap();
    let want = rational_product(p, &[bx * by * az, ax * by * bz, bx * ay * bz, bx * by * bz], -10);
    assert_matches(&e.value, &want, p);
    let e1 = euler_e1(&slot, &d).unwrap();
    let want = rational_product(p, &[bz * bz], -8) * rational_product(p, &[bz * bz], -6);
    assert_matches(&e1.value, &want, p);
}

#[test]
fn vanishing_factor_is_exceptional() {
    // α_x α_y β_z = p^(m0 - 1)
    let d = data(5, TripleWeights::new(2, 2, 2).unwrap(), [1, 1, 1, 2, 1, 25]);
    let e = euler_e(&PrimeSlot::Distinguished, &d).unwrap();
    assert!(e.exceptional);
    assert!(e.value.is_zero());
}

#[test]
fn odd_weights_at_another_prime_are_rejected() {
    let d = data(5, TripleWeights::new(2, 2, 2).unwrap(), [1, 1, 1, 1, 1, 1]);
    assert!(euler_e(&PrimeSlot::Other { weights: vec![[2, 2, 1]] }, &d).is_err());
}

#[test]
fn eigen_data_json_round_trip() {
    let x = Unram::quadratic(3, 1, 0, Padic::from_int(3, 2, CAP), Padic::from_int(3, 1, CAP)).unwrap();
    let mut d = data(3, TripleWeights::new(2, 2, 4).unwrap(), [1, 2, 4, 5, 7, 8]);
    d.beta_z = EigenScalar::Ext(x);
    let back: TripleEigenData = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(back, d);
}

fn chars(r: [i64; 3]) -> [AlgebraicChar; 3] {
    r.map(|e| AlgebraicChar::new(vec![e]))
}

fn u(p: u32, a: i64) -> Unram {
    Unram::base(&Padic::from_int(p, a, CAP))
}

#[test]
fn delta_on_the_rational_component_is_one() {
    let spec = DeltaKernelSpec::new(5, [AlgebraicChar::new(vec![]), AlgebraicChar::new(vec![]), AlgebraicChar::new(vec![])], [1, 2, 3]).unwrap();
    let x = u(5, 3);
    let v = delta_eval(&spec, [(&x, &x), (&x, &x), (&x, &x)]).unwrap();
    assert!((v - &u(5, 1)).is_zero());
}

#[test]
fn delta_vanishes_off_the_units() {
    let spec = DeltaKernelSpec::new(5, chars([1, 0, 2]), [0, 1, 0]).unwrap();
    let (a, b) = (u(5, 1), u(5, 2));
    // slots 1 and 2 equal, so x3 y2 - x2 y3 = 0
    let v = delta_eval(&spec, [(&a, &b), (&b, &a), (&b, &a)]).unwrap();
    assert!(v.is_zero());
}

#[test]
fn delta_scales_by_the_slot_character() {
    let p = 7;
    let spec = DeltaKernelSpec::new(p, chars([1, -1, 2]), [1, -2, 0]).unwrap();
    let pairs = [(u(p, 1), u(p, 3)), (u(p, 2), u(p, 1)), (u(p, 5), u(p, 4))];
    let base_val = delta_eval(&spec, [(&pairs[0].0, &pairs[0].1), (&pairs[1].0, &pairs[1].1), (&pairs[2].0, &pairs[2].1)]).unwrap();
    assert!(!base_val.is_zero());
    let t = u(p, 3);
    for slot in 0..3 {
        let mut scaled = pairs.clone();
        scaled[slot] = (scaled[slot].0.clone() * &t, scaled[slot].1.clone() * &t);
        let got = delta_eval(&spec, [(&scaled[0].0, &scaled[0].1), (&scaled[1].0, &scaled[1].1), (&scaled[2].0, &scaled[2].1)]).unwrap();
        let factor = slot_character(&spec, slot).eval(&t).unwrap().unwrap();
        assert!((got - &(factor * &base_val)).is_zero(), "slot {slot}");
    }
}
