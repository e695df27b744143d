use gmk_core::qexp::{Basis, DirichletChar, NearlyForm, QExpansion};
use gmk_core::{Cyclo, Error, Padic, WeightChar};
use proptest::prelude::*;

const CAP: u32 = 12;
const WINDOW: u64 = 40;

type Terms = Vec<(u32, u64, i64)>;

fn form(p: u32, k: i64, basis: Basis, terms: &[(u32, u64, i64)]) -> NearlyForm<Padic> {
    let mut f = NearlyForm::new(WeightChar::power(p, k), 0, 1, basis, WINDOW).unwrap();
    for &(m, nu, a) in terms {
        f.add_term(m, nu, Padic::from_int(p, a, CAP)).unwrap();
    }
    f
}

fn terms(max_m: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec((0..=max_m, 0..20u64, -500i64..500), 0..6)
}

fn basis() -> impl Strategy<Value = Basis> {
    prop_oneof![Just(Basis::V), Just(Basis::W)]
}

#[test]
fn depletion_kills_p_divisible_exponents() {
    let f = form(3, 2, Basis::V, &[(0, 3, 1)]);
    assert!(f.deplete().grid().is_empty());
    let g = form(3, 2, Basis::V, &[(0, 3, 1), (0, 4, 5)]);
    assert_eq!(g.deplete().grid().keys().copied().collect::<Vec<_>>(), vec![(0, 4)]);
}

#[test]
fn derivation_is_diagonal() {
    let f = form(5, 4, Basis::W, &[(0, 7, 2), (1, 3, 1)]);
    let d = f.derive();
    assert!((d.coeff(0, 7).unwrap().clone() - &Padic::from_int(5, 14, CAP)).is_zero());
    assert!((d.coeff(1, 3).unwrap().clone() - &Padic::from_int(5, 3, CAP)).is_zero());
}

#[test]
fn v_overflow_is_an_error() {
    let f = QExpansion::monomial(3, 10, 4, Padic::one(3, CAP)).unwrap();
    assert!(matches!(f.v_op(), Err(Error::WindowOverflow { .. })));
}

#[test]
fn nabla_on_a_weight_two_constant() {
    // ∇(B_{2,0}) in W: ∂ kills ν = 0, the raising term is (2 - 0) B_{4,1}
    let f = form(3, 2, Basis::W, &[(0, 0, 1)]);
    let g = f.nabla().unwrap();
    assert_eq!(g.classical_weight(), Some(4));
    assert!((g.coeff(1, 0).unwrap().clone() - &Padic::from_int(3, 2, CAP)).is_zero());
    assert!(g.coeff(0, 0).is_none_or(|c| c.is_zero()));
}

#[test]
fn geometric_basis_carries_p_to_the_2n() {
    let f = form(3, 2, Basis::V, &[(0, 0, 1)]);
    let g = f.nabla().unwrap();
    assert!((g.coeff(1, 0).unwrap().clone() - &Padic::from_int(3, 2 * 9, CAP)).is_zero());
}

#[test]
fn twist_by_a_primitive_character() {
    for (p, n) in [(3u32, 1u32), (3, 2), (5, 1)] {
        let xi = Cyclo::xi(p, n, CAP);
        let f = QExpansion::from_terms(p, WINDOW, (0..WINDOW).map(|nu| (nu, Padic::from_int(p, nu as i64 + 1, CAP)))).unwrap();
        for chi in DirichletChar::all(p, n, CAP).unwrap().into_iter().filter(|c| c.is_primitive()) {
            let direct = f.theta_direct(&chi);
            assert!(f.theta_avg(&chi, &xi).unwrap().approx_eq(&direct));
            assert!(direct.u_op().is_zero());
        }
    }
}

#[test]
fn universal_weight_form_round_trips() {
    let f: NearlyForm<Padic> = NearlyForm::new(WeightChar::universal(3, 1), 2, 1, Basis::V, WINDOW).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let g: NearlyForm<Padic> = serde_json::from_str(&s).unwrap();
    assert_eq!(f, g);
}

#[test]
fn duplicate_grid_entries_are_rejected() {
    let s = r#"{"weight":{"p":3,"kind":"classical","k":2},"basis":"V","n":1,"window":10,
        "grid":[{"m":0,"nu":1,"coeff":{"p":3,"val":0,"unit":"1","prec":5}},
                {"m":0,"nu":1,"coeff":{"p":3,"val":0,"unit":"2","prec":5}}]}"#;
    assert!(serde_json::from_str::<NearlyForm<Padic>>(s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn u_after_v_is_identity(t in prop::collection::vec((0..12u64, -500i64..500), 0..6)) {
        let f = QExpansion::from_terms(3, WINDOW, t.iter().map(|&(nu, a)| (nu, Padic::from_int(3, a, CAP)))).unwrap();
        prop_assert!(f.v_op().unwrap().u_op().approx_eq(&f));
    }

    #[test]
    fn depletion_is_an_idempotent_into_ker_u(t in terms(2), k in 0i64..8) {
        let f = form(5, k, Basis::V, &t);
        let d = f.deplete();
        prop_assert!(d.u_op().is_zero());
        prop_assert!(d.deplete().approx_eq(&d));
    }

    #[test]
    fn closed_form_power_matches_composition(t in terms(2), k in 0i64..8, b in basis(), s in 0u32..5) {
        let f = form(3, k, b, &t);
        prop_assert!(f.nabla_pow(s).unwrap().approx_eq(&f.nabla_compose(s).unwrap()));
    }

    #[test]
    fn basis_conversion_commutes_with_operators(t in terms(3), k in 0i64..8) {
        let f = form(3, k, Basis::V, &t);
        let w = f.to_basis(Basis::W);
        prop_assert!(f.nabla().unwrap().to_basis(Basis::W).approx_eq(&w.nabla().unwrap()));
        prop_assert!(f.derive().to_basis(Basis::W).approx_eq(&w.derive()));
        prop_assert!(f.deplete().to_basis(Basis::W).approx_eq(&w.deplete()));
        prop_assert!(f.u_op().to_basis(Basis::W).approx_eq(&w.u_op()));
        prop_assert!(w.to_basis(Basis::V).approx_eq(&f));
    }

    #[test]
    fn nabla_satisfies_leibniz(a in terms(1), b in terms(1), k1 in 0i64..5, k2 in 0i64..5, bs in basis()) {
        let f = form(3, k1, bs, &a);
        let g = form(3, k2, bs, &b);
        let lhs = f.mul(&g).unwrap().nabla().unwrap();
        let rhs = f.nabla().unwrap().mul(&g).unwrap().add(&f.mul(&g.nabla().unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn raising_component_is_w_minus_m(m in 0u32..5, nu in 0u64..20, a in -500i64..500, k in 0i64..10) {
        let f = form(5, k, Basis::W, &[(m, nu, a)]);
        let got = f.nabla().unwrap().coeff(m + 1, nu).cloned().unwrap_or_else(|| Padic::zero(5, CAP));
        prop_assert!((got - &Padic::from_int(5, a * (k - m as i64), CAP)).is_zero());
    }

    #[test]
    fn form_json_round_trip(t in terms(3), k in -4i64..8, b in basis()) {
        let f = form(7, k, b, &t);
        let g: NearlyForm<Padic> = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(f, g);
    }
}
