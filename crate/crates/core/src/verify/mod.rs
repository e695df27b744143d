//! Seeded verification suites. Every suite returns a [`VerifyReport`] whose
//! cases are sorted by descriptor, so a fixed seed gives identical output.

mod gm;
mod triple;
mod twist;
mod weights;

pub use gm::{binom_lemma_cases, closed_form_cases, gm_step_cases, gmesp_cases, graded_piece_cases, pdiviter_cases};
pub use triple::{delta_cases, euler_cases, theta_m_cases};
pub use twist::theta_chi_cases;
pub use weights::{binom_valuation_cases, factorial_cases, finite_order_cases, univ_char_cases};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::iwasawa::WeightChar;
use crate::padic::{Padic, Unram};
use crate::qexp::{Basis, NearlyForm, QExpansion};
use crate::report::{CaseResult, VerifyReport};

pub const SUITES: [&str; 11] = [
    "univ-char",
    "valuation-bounds",
    "theta-chi",
    "gm-step",
    "gm-closed-form",
    "binom-lemma",
    "pdiviter",
    "gmesp",
    "theta-m",
    "delta-homogeneity",
    "euler",
];

/// Run one named suite.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let cases = match name {
        "univ-char" => {
            let mut c = univ_char_cases(cfg)?;
            if cfg.n >= 2 {
                c.extend(finite_order_cases(cfg)?);
            }
            c
        }
        "valuation-bounds" => {
            let mut c = factorial_cases(cfg);
            c.extend(binom_valuation_cases(cfg)?);
            c
        }
        "theta-chi" => theta_chi_cases(cfg)?,
        "gm-step" => {
            let mut c = gm_step_cases(cfg)?;
            c.extend(graded_piece_cases(cfg)?);
            c
        }
        "gm-closed-form" => closed_form_cases(cfg)?,
        "binom-lemma" => binom_lemma_cases(cfg),
        "pdiviter" => pdiviter_cases(cfg)?,
        "gmesp" => gmesp_cases(cfg)?,
        "theta-m" => theta_m_cases(cfg)?,
        "delta-homogeneity" => delta_cases(cfg)?,
        "euler" => euler_cases(cfg)?,
        other => return Err(Error::Invalid(format!("unknown suite {other}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(VerifyReport::new(name, cfg, cases))
}

/// A generator seeded from the config and the suite name.
pub fn rng_for(cfg: &RunConfig, suite: &str) -> ChaCha8Rng {
    let salt = suite.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt)
}

fn random_below(rng: &mut ChaCha8Rng, p: u32, digits: u32) -> BigInt {
    let mut acc = BigInt::from(0);
    for _ in 0..digits {
        acc = acc * p + rng.gen_range(0..p);
    }
    acc
}

/// A random element of `Z_p` known to `digits` digits.
pub fn random_padic(rng: &mut ChaCha8Rng, p: u32, digits: u32, cap: u32) -> Padic {
    Padic::from_bigint(p, &random_below(rng, p, digits), cap)
}

/// A random unit of `Z_p`.
pub fn random_unit(rng: &mut ChaCha8Rng, p: u32, digits: u32, cap: u32) -> Padic {
    let r = random_below(rng, p, digits.saturating_sub(1)) * p + rng.gen_range(1..p);
    Padic::from_bigint(p, &r, cap)
}

/// A random element of `1 + pZ_p`.
pub fn random_principal_unit(rng: &mut ChaCha8Rng, p: u32, digits: u32, cap: u32) -> Padic {
    let r = BigInt::from(1) + random_below(rng, p, digits) * p;
    Padic::from_bigint(p, &r, cap)
}

/// A random integer prime to `p` in `1..bound`.
pub fn random_prime_to_p(rng: &mut ChaCha8Rng, p: u32, bound: u64) -> u64 {
    loop {
        let x = rng.gen_range(1..bound.max(2));
        if x % p as u64 != 0 {
            return x;
        }
    }
}

/// A random q-expansion with about `terms` nonzero coefficients.
pub fn random_qexp(rng: &mut ChaCha8Rng, p: u32, window: u64, terms: usize, digits: u32, cap: u32) -> QExpansion<Padic> {
    let mut f = QExpansion::new(p, window);
    for _ in 0..terms {
        let nu = rng.gen_range(0..window);
        f.add_term(nu, random_padic(rng, p, digits, cap)).expect("inside the window");
    }
    f
}

/// A random form of classical weight `k` with filtration degree at most
/// `max_m`.
#[allow(clippy::too_many_arguments)]
pub fn random_form(
    rng: &mut ChaCha8Rng,
    p: u32,
    n: u32,
    k: i64,
    basis: Basis,
    max_m: u32,
    window: u64,
    terms: usize,
    digits: u32,
    cap: u32,
) -> Result<NearlyForm<Padic>> {
    let mut f = NearlyForm::new(WeightChar::power(p, k), 0, n, basis, window)?;
    for _ in 0..terms {
        let m = rng.gen_range(0..=max_m);
        let nu = rng.gen_range(0..window);
        f.add_term(m, nu, random_padic(rng, p, digits, cap))?;
    }
    Ok(f)
}

/// Coefficients `(c0, c1)` of a monic quadratic irreducible modulo `p`.
pub fn irreducible_quadratic(p: u32) -> (i64, i64) {
    let pm = p as i64;
    for c1 in 0..pm {
        for c0 in 1..pm {
            if (0..pm).all(|r| (r * r + c1 * r + c0).rem_euclid(pm) != 0) {
                return (c0, c1);
            }
        }
    }
    unreachable!("irreducible quadratics exist modulo every prime")
}

/// A random unit of the quadratic unramified ring `(c0, c1)`.
pub fn random_quadratic_unit(rng: &mut ChaCha8Rng, p: u32, poly: (i64, i64), digits: u32, cap: u32) -> Unram {
    loop {
        let a = random_padic(rng, p, digits, cap);
        let b = random_padic(rng, p, digits, cap);
        let u = Unram::quadratic(p, poly.0, poly.1, a, b).expect("irreducible");
        if u.is_unit() {
            return u;
        }
    }
}


fn fail_case(descriptor: String, e: Error) -> CaseResult {
    CaseResult::new(descriptor, false).detail(e.to_string())
}
