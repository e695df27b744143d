//! The triple-product operator, its de Rham correction and the Euler factors
//! of the interpolation formula.

mod delta;
mod euler;

pub use delta::{delta_eval, slot_character, DeltaKernelSpec};
pub use euler::{euler_e, euler_e1, linear_factor, m0, m_vector, EigenScalar, EulerValue, PrimeSlot, TripleEigenData};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::binomial;
use crate::qexp::NearlyForm;
use crate::ring::Coeff;

/// Weights `(k1, k2, k3)` at the distinguished embedding together with the
/// `ν_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWeights {
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
    #[serde(default)]
    pub nu1: i64,
    #[serde(default)]
    pub nu2: i64,
    #[serde(default)]
    pub nu3: i64,
}

impl TripleWeights {
    /// Any triple with even sum.
    pub fn new(k1: i64, k2: i64, k3: i64) -> Result<Self> {
        let w = TripleWeights { k1, k2, k3, nu1: 0, nu2: 0, nu3: 0 };
        w.check_parity()?;
        Ok(w)
    }

    /// A triple with even sum and `k3 >= k1 + k2`.
    pub fn unbalanced(k1: i64, k2: i64, k3: i64) -> Result<Self> {
        let w = Self::new(k1, k2, k3)?;
        w.check_unbalanced()?;
        Ok(w)
    }

    pub fn with_nus(mut self, nu1: i64, nu2: i64, nu3: i64) -> Self {
        self.nu1 = nu1;
        self.nu2 = nu2;
        self.nu3 = nu3;
        self
    }

    pub fn check_parity(&self) -> Result<()> {
        if (self.k1 + self.k2 + self.k3).rem_euclid(2) != 0 {
            return Err(Error::InvalidWeights(format!("{} + {} + {} is odd", self.k1, self.k2, self.k3)));
        }
        Ok(())
    }

    pub fn check_unbalanced(&self) -> Result<()> {
        self.check_parity()?;
        if self.k1 < 1 || self.k2 < 1 {
            return Err(Error::InvalidWeights("k1 and k2 must be positive".into()));
        }
        if self.k3 < self.k1 + self.k2 {
            return Err(Error::InvalidWeights(format!(
                "k3 = {} is below k1 + k2 = {}",
                self.k3,
                self.k1 + self.k2
            )));
        }
        Ok(())
    }

    /// `(k3 - k1 - k2) / 2`.
    pub fn m(&self) -> i64 {
        (self.k3 - self.k1 - self.k2) / 2
    }

    /// `(k1 + k2 + k3) / 2`.
    pub fn big_m(&self) -> i64 {
        (self.k1 + self.k2 + self.k3) / 2
    }

    /// `binom(k3 - 2, m + k2 - 1)`.
    pub fn normalizer(&self) -> BigInt {
        binomial(self.k3 - 2, self.m() + self.k2 - 1)
    }
}

fn check_input<C: Coeff>(f: &NearlyForm<C>, k: i64, which: &str) -> Result<()> {
    if f.classical_weight() != Some(k) {
        return Err(Error::InvalidWeights(format!("{which} must have weight {k}")));
    }
    if f.filtration_degree().unwrap_or(0) > 0 {
        return Err(Error::Invalid(format!("{which} must have filtration degree 0")));
    }
    Ok(())
}

/// `Σ_{j<=m} (-1)^j binom(m,j) binom(M-2, k1+j-1) ∇^j(s1) ∇^(m-j)(s2)`.
pub fn triple_t<C: Coeff>(w: &TripleWeights, s1: &NearlyForm<C>, s2: &NearlyForm<C>) -> Result<NearlyForm<C>> {
    w.check_unbalanced()?;
    check_input(s1, w.k1, "s1")?;
    check_input(s2, w.k2, "s2")?;
    let m = w.m() as u32;
    let mut acc: Option<NearlyForm<C>> = None;
    for j in 0..=m {
        let c = binomial(m as i64, j as i64) * binomial(w.big_m() - 2, w.k1 + j as i64 - 1);
        let c = if j % 2 == 1 { -c } else { c };
        let term = s1.nabla_pow(j)?.mul(&s2.nabla_pow(m - j)?)?;
        let term = match term.grid().values().next() {
            Some(like) => term.scale(&like.from_bigint_like(&c)),
            None => term,
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("at least the j = 0 term"))
}

/// `a_i = (-1)^(i+m+1) binom(k3-2, m+k2-1)^(-1) Σ_{j<=i} binom(m,j) binom(M-2, k1+j-1)`
/// for `i < m`.
pub fn correction_coeffs(w: &TripleWeights) -> Result<Vec<BigRational>> {
    w.check_unbalanced()?;
    let m = w.m();
    if m < 1 {
        return Err(Error::Invalid("the correction needs m >= 1".into()));
    }
    let b = w.normalizer();
    if b.is_zero() {
        return Err(Error::Degenerate(format!("binom({}, {}) vanishes", w.k3 - 2, m + w.k2 - 1)));
    }
    let mut partial = BigInt::zero();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        partial += binomial(m, i) * binomial(w.big_m() - 2, w.k1 + i - 1);
        let sign = if (i + m + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        out.push(BigRational::new(sign * &partial, b.clone()));
    }
    Ok(out)
}

/// Outcome of checking the corrected representative identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub weights: TripleWeights,
    /// Grid entries of the residual that are not zero within precision.
    pub nonzero_residual_terms: usize,
    pub residual_terms: usize,
    pub pass: bool,
}

/// Check `∇^m(s1) s2 = (-1)^m binom(k3-2, m+k2-1)^(-1) t(s1,s2) + ∇(Σ_{i<m} a_i ∇^i(s1) ∇^(m-1-i)(s2))`.
pub fn verify_theta_m_identity<C: Coeff>(w: &TripleWeights, s1: &NearlyForm<C>, s2: &NearlyForm<C>) -> Result<ThetaReport> {
    let t = triple_t(w, s1, s2)?;
    let m = w.m() as u32;
    let lhs = s1.nabla_pow(m)?.mul(s2)?;
    let Some(like) = lhs.grid().values().chain(t.grid().values()).next().cloned() else {
        return Ok(ThetaReport { weights: *w, nonzero_residual_terms: 0, residual_terms: 0, pass: true });
    };
    let b = w.normalizer();
    if b.is_zero() {
        return Err(Error::Degenerate("vanishing normalizer".into()));
    }
    let sign = if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut rhs = t.scale(&like.from_rational_like(&BigRational::new(sign, b)));
    if m >= 1 {
        let a = correction_coeffs(w)?;
        let mut inner: Option<NearlyForm<C>> = None;
        for (i, ai) in a.iter().enumerate() {
            let i = i as u32;
            let term = s1.nabla_pow(i)?.mul(&s2.nabla_pow(m - 1 - i)?)?.scale(&like.from_rational_like(ai));
            inner = Some(match inner {
                None => term,
                Some(x) => x.add(&term)?,
            });
        }
        rhs = rhs.add(&inner.expect("m >= 1").nabla()?)?;
    }
    let residual = lhs.sub(&rhs)?;
    let nonzero = residual.grid().values().filter(|c| !c.is_zero()).count();
    Ok(ThetaReport {
        weights: *w,
        nonzero_residual_terms: nonzero,
        residual_terms: residual.grid().len(),
        pass: nonzero == 0,
    })
}
