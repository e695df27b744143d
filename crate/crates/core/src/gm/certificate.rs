use serde::{Deserialize, Serialize};

use super::{a_i_term, UnivExponent};
use crate::error::{Error, Result};
use crate::iwasawa::{IwasawaSeries, WeightChar};
use crate::padic::{binom_general, Padic, INF};
use crate::qexp::{Basis, NearlyForm};
use crate::ring::{Coeff, PadicModule};

/// An ordinary monomial `a (1+q)^ν V_{k,m}` with `p ∤ ν`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialSample {
    pub a: Padic,
    pub nu: u64,
    pub k: i64,
    #[serde(default)]
    pub m: u32,
}

impl MonomialSample {
    pub fn to_form(&self, n: u32) -> Result<NearlyForm<Padic>> {
        let p = self.a.prime();
        if self.nu.is_multiple_of(p as u64) {
            return Err(Error::Invalid(format!("exponent {} is divisible by {p}", self.nu)));
        }
        NearlyForm::from_terms(WeightChar::power(p, self.k), 0, n, Basis::V, self.nu + 1, [(self.m, self.nu, self.a.clone())])
    }

    pub fn describe(&self) -> String {
        format!("a={} nu={} k={} m={}", self.a, self.nu, self.k, self.m)
    }
}

/// Measurements for one sample and one `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub sample: String,
    pub i: u32,
    /// `v(p^{2n} / ν)`, required `>= 2n`.
    pub v_a: i64,
    /// `v(1 - ν/γ_0)` for the representative `γ_0 ≡ ν`, required `>= n`.
    pub v_one_minus_b: i64,
    /// `min_{j<=k<=i} (norm(k! binom(M+k, j)) + n j)` with `M = w_n - m - 1`,
    /// required `>= 0`.
    pub binom_slack: i64,
    /// Gauss norm of the collapsed `A_i` on the sample (`None` when it vanishes exactly).
    pub measured: Option<i64>,
    /// `⌈i p/(p-1)⌉ - 1`.
    pub bound: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdiviterReport {
    pub p: u32,
    pub n: u32,
    pub entries: Vec<CertificateEntry>,
    pub violations: usize,
}

/// `⌈i p/(p-1)⌉ - 1`.
pub fn pdiviter_bound(p: u32, i: u32) -> i64 {
    let num = i as i64 * p as i64;
    let den = p as i64 - 1;
    (num + den - 1) / den - 1
}

fn binom_slack(s: &UnivExponent, m: u32, i: u32) -> Result<i64> {
    let n = s.level();
    let like: &IwasawaSeries = s.w_prime();
    let w = like.universal_weight(n)?;
    let mut worst = INF;
    let mut fact = num_bigint::BigInt::from(1);
    for k in 0..=i {
        if k > 0 {
            fact *= k;
        }
        let x = w.clone() + &like.from_int_like(k as i64 - m as i64 - 1);
        for j in 0..=k {
            let b = binom_general(&x, j)?;
            let scaled = b * &like.from_bigint_like(&fact);
            if let Some(v) = scaled.val_floor() {
                worst = worst.min(v + (n * j) as i64);
            }
        }
    }
    Ok(worst)
}

/// Measure `A_i` for `i <= i_max` on each sample and compare against the
/// divisibility bound, together with the three ingredient bounds.
pub fn pdiviter_certificate(s: &UnivExponent, i_max: u32, samples: &[MonomialSample]) -> Result<PdiviterReport> {
    let p = s.prime();
    let n = s.level();
    let cap = s.plan().cap;
    let modulus = (p as u64).pow(n);
    let mut entries = Vec::new();
    for sample in samples {
        let f = sample.to_form(n)?;
        let nu = Padic::from_int(p, sample.nu as i64, cap);
        let v_a = Padic::one(p, cap).mul_p_power(p, 2 * n as i64).checked_div(&nu)?.val();
        let entry = s
            .table()
            .iter()
            .find(|e| e.residue == sample.nu % modulus)
            .ok_or_else(|| Error::NotUnit(format!("{} mod {p}", sample.nu)))?;
        let one = Padic::one(p, cap);
        let diff = one - &nu.checked_div(&entry.gamma)?;
        let v_one_minus_b = if diff.is_exact_zero() { INF } else { diff.val() };
        for i in 0..=i_max {
            let measured = a_i_term(&f, s, i)?.collapsed_val_floor();
            let bound = pdiviter_bound(p, i);
            let binom_slack = binom_slack(s, sample.m, i)?;
            let pass = v_a >= 2 * n as i64
                && v_one_minus_b >= n as i64
                && binom_slack >= 0
                && measured.is_none_or(|v| v >= bound);
            entries.push(CertificateEntry {
                sample: sample.describe(),
                i,
                v_a,
                v_one_minus_b,
                binom_slack,
                measured,
                bound,
                pass,
            });
        }
    }
    let violations = entries.iter().filter(|e| !e.pass).count();
    Ok(PdiviterReport { p, n, entries, violations })
}
