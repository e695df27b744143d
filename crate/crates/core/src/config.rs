use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gm::{iterate_terms, UnivExponent};
use crate::iwasawa::UnivChar;
use crate::padic::check_prime;

/// Precision used when neither a flag nor the environment names one.
pub const FALLBACK_PREC: u32 = 8;

/// Environment variable that overrides the default precision.
pub const PREC_ENV: &str = "GMK_DEFAULT_PREC";

/// Parameters shared by computations and verification suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub n: u32,
    /// Target p-adic digits.
    pub prec: u32,
    pub seed: u64,
    /// Override for the T-degree truncation of Iwasawa series.
    pub trunc: Option<usize>,
    /// Override for the series cutoff of the universal iterate.
    pub terms: Option<u32>,
    /// Exponent window for random q-expansions.
    pub window: u64,
    /// Random cases per suite.
    pub cases: usize,
    /// Largest series index for the binomial lemma and divisibility suites.
    pub i_max: Option<u32>,
    /// Restrict exponent suites to one integer `m`.
    pub m: Option<i64>,
    /// Random substitutions per index in the binomial lemma suite.
    pub subs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            n: 1,
            prec: FALLBACK_PREC,
            seed: 20240601,
            trunc: None,
            terms: None,
            window: 30,
            cases: 20,
            i_max: None,
            m: None,
            subs: 10_000,
        }
    }
}

impl RunConfig {
    /// The default precision, honouring the environment override.
    pub fn default_prec() -> Result<u32> {
        match std::env::var(PREC_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u32>()
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::Invalid(format!("{PREC_ENV}={v} is not a positive integer"))),
            Err(_) => Ok(FALLBACK_PREC),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.p)?;
        if self.n == 0 || self.prec == 0 || self.window == 0 {
            return Err(Error::Invalid("level, precision and window must be positive".into()));
        }
        if let Some(0) = self.trunc {
            return Err(Error::Invalid("truncation must be positive".into()));
        }
        if let Some(t) = self.terms {
            let need = min_terms(self.p, self.prec);
            if t < need {
                return Err(Error::Invalid(format!("series cutoff {t} is below {need} for {} digits", self.prec)));
            }
        }
        Ok(())
    }

    /// The universal character with this config's plan overrides.
    pub fn univ_char(&self) -> Result<UnivChar> {
        UnivChar::configured(self.p, self.n, self.prec, self.trunc, self.terms)
    }

    /// The universal exponent on the component `ω^class`.
    pub fn universal_exponent(&self, class: i64) -> Result<UnivExponent> {
        UnivExponent::universal_from(self.univ_char()?, class)
    }

    /// Cutoff `I` of the universal iterate.
    pub fn iterate_terms(&self) -> u32 {
        self.terms.unwrap_or_else(|| iterate_terms(self.p, self.prec))
    }
}

/// `⌈digits (p-1)/p⌉`, the smallest cutoff accepted for the universal iterate.
pub fn min_terms(p: u32, digits: u32) -> u32 {
    let num = digits as u64 * (p as u64 - 1);
    num.div_ceil(p as u64) as u32
}
