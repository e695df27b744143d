use num_bigint::BigInt;
use rand::Rng;

use crate::config::RunConfig;
use crate::error::Result;
use crate::gm::{
    binom_lemma_lhs, binom_lemma_numeric, binom_lemma_rhs, closed_form_check, nabla_univ_terms, pdiviter_certificate,
    MonomialSample, UnivExponent,
};
use crate::iwasawa::{IwasawaSeries, UnivChar, WeightChar};
use crate::padic::Padic;
use crate::qexp::{Basis, NearlyForm};
use crate::report::CaseResult;
use crate::ring::Coeff;

use super::{fail_case, random_form, random_padic, random_prime_to_p, random_unit, rng_for};

/// Symbolic coefficientwise equality up to this index.
const SYMBOLIC_MAX: u32 = 6;

/// The closed form of `∇^s` against `s` one-step applications, `s <= 5`.
pub fn gm_step_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let cap = cfg.prec + 4;
    let mut rng = rng_for(cfg, "gm-step");
    let mut out = Vec::new();
    for case in 0..cfg.cases {
        let k = rng.gen_range(0..=8);
        let basis = if rng.gen_bool(0.5) { Basis::V } else { Basis::W };
        let f = random_form(&mut rng, p, n, k, basis, 2, cfg.window, 6, cfg.prec, cap)?;
        for s in 0..=5 {
            let closed = f.nabla_pow(s)?;
            let composed = f.nabla_compose(s)?;
            let desc = format!("closed-form p={p} n={n} case={case:03} s={s} k={k} basis={basis:?}");
            out.push(CaseResult::new(desc, closed.approx_eq(&composed)));
        }
    }
    Ok(out)
}

/// The filtration-raising part of `∇` on `a (1+q)^ν B_{k,m}` is `c (w - m) a`,
/// for classical weights and for the universal weight.
pub fn graded_piece_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let cap = cfg.prec + 4;
    let mut rng = rng_for(cfg, "graded-piece");
    let mut out = Vec::new();
    for case in 0..cfg.cases {
        let k = rng.gen_range(0..=10);
        let m = rng.gen_range(0..=4u32);
        let nu = rng.gen_range(0..cfg.window);
        let a = random_padic(&mut rng, p, cfg.prec, cap);
        for basis in [Basis::V, Basis::W] {
            let f = NearlyForm::from_terms(WeightChar::power(p, k), 0, n, basis, cfg.window, [(m, nu, a.clone())])?;
            let g = f.nabla()?;
            let got = g.coeff(m + 1, nu).cloned().unwrap_or_else(|| a.zero_like());
            let c = match basis {
                Basis::V => 2 * n as i64,
                Basis::W => 0,
            };
            let want = a.mul_int(k - m as i64).mul_p_power(p, c);
            let desc = format!("graded classical p={p} n={n} case={case:03} k={k} m={m} basis={basis:?}");
            out.push(CaseResult::new(desc, (got - &want).is_zero()));
        }
    }
    // universal weight: coefficients in the Iwasawa algebra
    let uc = cfg.univ_char()?;
    let pl = uc.plan();
    let w = uc.w_prime().clone();
    for case in 0..cfg.cases.min(5) {
        let m = rng.gen_range(0..=4u32);
        let shift = rng.gen_range(-3..=3i64);
        let nu = rng.gen_range(0..cfg.window);
        let a = IwasawaSeries::constant(p, n, pl.trunc, &random_padic(&mut rng, p, cfg.prec, pl.cap));
        let f = NearlyForm::from_terms(WeightChar::universal(p, n), shift, n, Basis::V, cfg.window, [(m, nu, a.clone())])?;
        let g = f.nabla()?;
        let got = g.coeff(m + 1, nu).cloned().unwrap_or_else(|| a.zero_like());
        let want = ((w.clone() + &w.from_int_like(shift - m as i64)) * &a).mul_p_power(p, 2 * n as i64);
        let desc = format!("graded universal p={p} n={n} case={case:03} shift={shift} m={m}");
        out.push(CaseResult::new(desc, (got - &want).is_zero()));
    }
    Ok(out)
}

/// The truncated universal iterate against the two candidate closed forms.
pub fn closed_form_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let mut rng = rng_for(cfg, "gm-closed-form");
    let mut out = Vec::new();
    let cases = if n >= 2 { cfg.cases.min(4) } else { cfg.cases };
    for case in 0..cases {
        let class = rng.gen_range(0..p as i64 - 1);
        let s = cfg.universal_exponent(class)?;
        let cap = s.plan().cap;
        let k = rng.gen_range(2..=8);
        let m = rng.gen_range(0..=2u32);
        let nu = random_prime_to_p(&mut rng, p, cfg.window);
        let a = random_unit(&mut rng, p, cfg.prec, cap);
        let f = NearlyForm::from_terms(WeightChar::power(p, k), 0, n, Basis::V, cfg.window, [(m, nu, a)])?;
        let desc = format!("p={p} n={n} case={case:03} class={class} k={k} m={m} nu={nu}");
        match closed_form_check(&f, &s, cfg.prec) {
            Ok(r) => out.push(
                CaseResult::new(desc, r.with_nu_factor).precision(Some(r.compared_to)).detail(format!(
                    "with nu^-i factor: {}; without: {}",
                    if r.with_nu_factor { "match" } else { "mismatch" },
                    if r.without_nu_factor { "match" } else { "mismatch" }
                )),
            ),
            Err(e) => out.push(fail_case(desc, e)),
        }
    }
    Ok(out)
}

/// Both sides of the binomial identity: symbolically for small `i`, and at
/// random integer points for every `i <= i_max`.
pub fn binom_lemma_cases(cfg: &RunConfig) -> Vec<CaseResult> {
    let i_max = cfg.i_max.unwrap_or(SYMBOLIC_MAX);
    let mut rng = rng_for(cfg, "binom-lemma");
    let mut out = Vec::new();
    for i in 0..=i_max {
        let mut pass = true;
        let mut detail = Vec::new();
        if i <= SYMBOLIC_MAX {
            let (l, r) = (binom_lemma_lhs(i), binom_lemma_rhs(i));
            if l != r {
                pass = false;
                detail.push(format!("symbolic difference {}", l - r));
            } else {
                detail.push(format!("symbolic: {} terms", l.terms().len()));
            }
        }
        let mut bad = 0usize;
        for _ in 0..cfg.subs {
            let a = BigInt::from(rng.gen_range(-50i64..=50));
            let b = BigInt::from(rng.gen_range(-50i64..=50));
            let m = rng.gen_range(-50i64..=50);
            let (l, r) = binom_lemma_numeric(i, &a, &b, m);
            if l != r {
                bad += 1;
            }
        }
        if bad > 0 {
            pass = false;
        }
        detail.push(format!("{} random substitutions, {bad} mismatches", cfg.subs));
        out.push(CaseResult::new(format!("i={i:02}"), pass).detail(detail.join("; ")));
    }
    out
}

/// Divisibility of the terms `A_i` on random ordinary monomials.
pub fn pdiviter_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let i_max = cfg.i_max.unwrap_or(8);
    let mut rng = rng_for(cfg, "pdiviter");
    let class = rng.gen_range(0..p as i64 - 1);
    let s = UnivExponent::universal_from(UnivChar::configured(p, n, cfg.prec.max(i_max), cfg.trunc, cfg.terms)?, class)?;
    let cap = s.plan().cap;
    let samples: Vec<MonomialSample> = (0..cfg.cases.clamp(1, 4))
        .map(|_| MonomialSample {
            a: random_unit(&mut rng, p, cfg.prec, cap),
            nu: random_prime_to_p(&mut rng, p, cfg.window),
            k: rng.gen_range(2..=8),
            m: 0,
        })
        .collect();
    let report = pdiviter_certificate(&s, i_max, &samples)?;
    Ok(report
        .entries
        .into_iter()
        .map(|e| {
            CaseResult::new(format!("p={p} n={n} class={class} i={:02} {}", e.i, e.sample), e.pass)
                .measured(e.measured)
                .detail(format!(
                    "bound {}; v(A)={} v(1-B)={} binomial slack {}",
                    e.bound, e.v_a, e.v_one_minus_b, e.binom_slack
                ))
        })
        .collect())
}

/// Digits required of the specialized universal iterate.
const GMESP_DIGITS: i64 = 4;

/// The universal iterate specialized at `m` against `∇^m` of the depleted
/// input.
pub fn gmesp_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let mut rng = rng_for(cfg, "gmesp");
    let ms: Vec<i64> = match cfg.m {
        Some(m) => vec![m],
        None => (0..=3).collect(),
    };
    let classes: std::collections::BTreeSet<i64> = ms.iter().map(|m| m.rem_euclid(p as i64 - 1)).collect();
    let exps = classes
        .iter()
        .map(|&c| cfg.universal_exponent(c).map(|s| (c, s)))
        .collect::<Result<std::collections::BTreeMap<_, _>>>()?;
    let cases = if n >= 2 { cfg.cases.min(3) } else { cfg.cases };
    let mut out = Vec::new();
    for case in 0..cases {
        let k = rng.gen_range(2..=8);
        let f = random_form(&mut rng, p, n, k, Basis::V, 2, cfg.window, 6, cfg.prec, cfg.prec + 4)?;
        for (&class, s) in &exps {
            let it = nabla_univ_terms(&f, s, cfg.iterate_terms())?;
            for &m in ms.iter().filter(|m| m.rem_euclid(p as i64 - 1) == class) {
                let desc = format!("p={p} n={n} case={case:03} m={m} k={k}");
                let want = f.deplete().nabla_pow(m as u32)?;
                let got = it.value.specialize(&s.classical_point(m)?)?.collapse();
                let mut pass = true;
                let mut digits = i64::MAX;
                let keys: std::collections::BTreeSet<_> = want.grid().keys().chain(got.keys()).copied().collect();
                for key in keys {
                    let zero = Padic::zero(p, cfg.prec);
                    let a = want.coeff(key.0, key.1).unwrap_or(&zero);
                    let b = got.get(&key).unwrap_or(&zero);
                    let d = b.clone() - a;
                    digits = digits.min(d.prec());
                    if !d.is_zero() {
                        pass = false;
                    }
                }
                let pass = pass && digits >= GMESP_DIGITS;
                out.push(CaseResult::new(desc, pass).precision(Some(digits)));
            }
        }
    }
    Ok(out)
}
