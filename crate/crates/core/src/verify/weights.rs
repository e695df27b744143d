use num_integer::Integer;

use crate::config::RunConfig;
use crate::error::Result;
use crate::iwasawa::{IwasawaSeries, WeightPoint};
use crate::padic::{factorial_valuation, padic_exp, Cyclo, Padic};
use crate::report::CaseResult;
use crate::ring::{Coeff, PadicModule};

use super::{fail_case, random_principal_unit, rng_for};

/// Digits required of the universal character specialization.
const UNIV_DIGITS: i64 = 6;

/// `eval_univ_char(β)` at `T = exp(kp) - 1` against `β^k` for `k <= 10`.
pub fn univ_char_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let mut rng = rng_for(cfg, "univ-char");
    let uc = cfg.univ_char()?;
    let cap = uc.plan().cap;
    let need = UNIV_DIGITS.min(cfg.prec as i64);
    let points = (0..=10).map(|k| WeightPoint::classical(p, k, cap)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for b in 0..cfg.cases {
        let beta = random_principal_unit(&mut rng, p, cfg.prec + 4, cap);
        let series = uc.eval(&beta)?;
        for (k, pt) in points.iter().enumerate() {
            let desc = format!("p={p} n={n} k={k:02} beta#{b:03}");
            let got = series.specialize(pt)?;
            let want = beta.pow(k as u64);
            let diff = got.clone() - &want;
            let digits = diff.prec().min(want.prec());
            let pass = diff.is_zero() && digits >= need;
            out.push(CaseResult::new(desc, pass).precision(Some(digits)).measured(Some(diff.val().min(digits))));
        }
    }
    Ok(out)
}

/// `eval_univ_char(exp(αp))` at `T = ξ - 1`, `ξ` of order `p^(n-1)`, against `ξ^α`.
pub fn finite_order_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let uc = cfg.univ_char()?;
    let cap = uc.plan().cap;
    let level = n - 1;
    let pt = WeightPoint::root_of_unity(p, level, 1, cap)?;
    let mut out = Vec::new();
    for alpha in 0..(p as i64).pow(2) {
        let desc = format!("p={p} n={n} alpha={alpha:03}");
        let beta = padic_exp(&Padic::from_int(p, alpha * p as i64, cap))?;
        let case = uc.eval(&beta).and_then(|s| s.specialize(&pt));
        match case {
            Ok(got) => {
                let want = Cyclo::xi_pow(p, level, alpha, cap);
                let diff = got - &want;
                let digits = diff.abs_prec().unwrap_or(i64::MAX);
                out.push(CaseResult::new(desc, diff.is_zero()).precision(Some(digits)));
            }
            Err(e) => out.push(fail_case(desc, e)),
        }
    }
    Ok(out)
}

/// `v(h!) <= h/(p-1)` for `h <= 200`.
pub fn factorial_cases(cfg: &RunConfig) -> Vec<CaseResult> {
    let p = cfg.p;
    (0..=200u64)
        .map(|h| {
            let v = factorial_valuation(h, p);
            CaseResult::new(format!("factorial h={h:03}"), v * (p as u64 - 1) <= h).measured(Some(v as i64))
        })
        .collect()
}

/// Gauss norm over the stored degrees, `min_d v(c_d) + floor(d / p^(n-1))`.
pub fn stored_norm(s: &IwasawaSeries) -> Option<i64> {
    let block = s.block_size();
    s.floors().iter().enumerate().filter_map(|(d, f)| f.map(|v| v + (d / block) as i64)).min()
}

fn stated_bound(p: u32, n: u32, i: i64) -> String {
    let (pm, nn) = (p as i64, n as i64);
    let num = -i * (nn * (pm - 1) - pm);
    let den = pm - 1;
    let g = num.gcd(&den);
    match den / g {
        1 => format!("bound {}", num / g),
        d => format!("bound {}/{d}", num / g),
    }
}

/// The norm of `binom(w'_n, i)` for `i <= 30` against both the stated bound
/// `-i (n - p/(p-1))` and the bound `-i(n-1) - v(i!)`.
pub fn binom_valuation_cases(cfg: &RunConfig) -> Result<Vec<CaseResult>> {
    let (p, n) = (cfg.p, cfg.n);
    let uc = cfg.univ_char()?;
    let w = uc.w_prime().clone();
    let mut falling = w.one_like();
    let mut fact = num_bigint::BigInt::from(1);
    let mut out = Vec::new();
    let pm = p as i64;
    let nn = n as i64;
    for i in 0..=30i64 {
        if i > 0 {
            falling = falling * &(w.clone() - &w.from_int_like(i - 1));
            fact *= i;
        }
        let b = falling.div_int(&fact)?;
        let norm = stored_norm(&b);
        let Some(v) = norm else {
            out.push(CaseResult::new(format!("binom stated i={i:02}"), true));
            continue;
        };
        // v >= -i (n - p/(p-1))  <=>  v (p-1) >= -i (n (p-1) - p)
        let stated = v * (pm - 1) >= -i * (nn * (pm - 1) - pm);
        let corrected_bound = -i * (nn - 1) - factorial_valuation(i as u64, p) as i64;
        out.push(
            CaseResult::new(format!("binom stated i={i:02}"), stated)
                .measured(Some(v))
                .detail(stated_bound(p, n, i)),
        );
        out.push(
            CaseResult::new(format!("binom corrected i={i:02}"), v >= corrected_bound)
                .measured(Some(v))
                .detail(format!("bound {corrected_bound}")),
        );
    }
    Ok(out)
}
