use serde::{Deserialize, Serialize};

use super::{IwasawaSeries, UnivChar};
use crate::error::{Error, Result};
use crate::padic::{check_prime, padic_log1p, teichmuller, Cyclo, Padic, Unram};
use crate::ring::{Coeff, PadicModule};

/// A character of `(Z/pZ)^×` stored as its value table at `1..p-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitePart {
    p: u32,
    values: Vec<Padic>,
}

impl FinitePart {
    pub fn trivial(p: u32, cap: u32) -> Self {
        FinitePart { p, values: vec![Padic::one(p, cap); p as usize - 1] }
    }

    /// `a ↦ ω(a)^e`.
    pub fn teichmuller_power(p: u32, e: i64, cap: u32) -> Result<Self> {
        let m = p as i64 - 1;
        let e = e.rem_euclid(m) as u64;
        let values = (1..p as i64)
            .map(|a| Ok(teichmuller(p, a, cap)?.pow(e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinitePart { p, values })
    }

    pub fn from_table(p: u32, values: Vec<Padic>) -> Result<Self> {
        let f = FinitePart { p, values };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.p)?;
        if self.values.len() != self.p as usize - 1 {
            return Err(Error::Invalid(format!("finite part needs {} values", self.p - 1)));
        }
        for a in 1..self.p as u64 {
            for b in 1..self.p as u64 {
                let ab = (a * b) % self.p as u64;
                let lhs = self.at(ab);
                let rhs = self.at(a).clone() * self.at(b);
                if !lhs.approx_eq(&rhs) {
                    return Err(Error::Invalid(format!("finite part is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, residue: u64) -> &Padic {
        &self.values[residue as usize - 1]
    }

    fn inverse_square(&self) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|v| (v.clone() * v).inv())
            .collect::<Result<Vec<_>>>()?;
        Ok(FinitePart { p: self.p, values })
    }

    fn mul(&self, other: &Self) -> Self {
        FinitePart {
            p: self.p,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() * b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `<β> ↦ <β>^k`.
    Classical { k: i64 },
    /// Through `(1+pZ_p)/(1+p^(level+1)Z_p)`: `exp(p) ↦ ξ^xi_power` with `ξ` a
    /// primitive `p^level`-th root of unity.
    FiniteOrder { level: u32, xi_power: i64 },
    /// The universal character of level `n`.
    Universal { n: u32 },
}

/// A character of `Z_p^×`, split as a finite part on `(Z/pZ)^×` and an
/// analytic part on `1 + pZ_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightChar {
    pub p: u32,
    #[serde(flatten)]
    pub kind: WeightKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_part: Option<FinitePart>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharValue {
    Padic(Padic),
    Cyclo(Cyclo),
    Series(IwasawaSeries),
}

impl CharValue {
    pub fn approx_eq(&self, other: &CharValue) -> bool {
        match (self, other) {
            (CharValue::Padic(a), CharValue::Padic(b)) => a.approx_eq(b),
            (CharValue::Cyclo(a), CharValue::Cyclo(b)) => (a.clone() - b).is_zero(),
            (CharValue::Series(a), CharValue::Series(b)) => a.approx_eq(b),
            _ => false,
        }
    }

    pub fn mul(&self, other: &CharValue) -> Result<CharValue> {
        Ok(match (self, other) {
            (CharValue::Padic(a), CharValue::Padic(b)) => CharValue::Padic(a.clone() * b),
            (CharValue::Cyclo(a), CharValue::Cyclo(b)) => CharValue::Cyclo(a.clone() * b),
            (CharValue::Series(a), CharValue::Series(b)) => CharValue::Series(a.clone() * b),
            _ => return Err(Error::Invalid("character values in different rings".into())),
        })
    }
}

impl WeightChar {
    /// `β ↦ β^k`: analytic part `<β>^k` and finite part `ω^k`.
    pub fn power(p: u32, k: i64) -> Self {
        WeightChar { p, kind: WeightKind::Classical { k }, finite_part: None }
    }

    pub fn universal(p: u32, n: u32) -> Self {
        WeightChar { p, kind: WeightKind::Universal { n }, finite_part: None }
    }

    pub fn finite_order(p: u32, level: u32, xi_power: i64) -> Self {
        WeightChar { p, kind: WeightKind::FiniteOrder { level, xi_power }, finite_part: None }
    }

    pub fn with_finite_part(mut self, f: FinitePart) -> Self {
        self.finite_part = Some(f);
        self
    }

    /// The stored finite part, or the default: `ω^k` for classical `k`,
    /// trivial otherwise.
    pub fn finite_part(&self, cap: u32) -> Result<FinitePart> {
        if let Some(f) = &self.finite_part {
            return Ok(f.clone());
        }
        match self.kind {
            WeightKind::Classical { k } => FinitePart::teichmuller_power(self.p, k, cap),
            _ => Ok(FinitePart::trivial(self.p, cap)),
        }
    }
}

/// Evaluate a weight character at a unit `beta`.
pub fn eval_full_char(chi: &WeightChar, beta: &Padic, prec: u32) -> Result<CharValue> {
    let p = chi.p;
    check_prime(p)?;
    if beta.prime() != p {
        return Err(Error::PrimeMismatch(p, beta.prime()));
    }
    if !beta.is_unit() {
        return Err(Error::NotUnit(beta.to_string()));
    }
    let cap = prec.max(1);
    let s = beta.residue_mod(1)?;
    let omega = teichmuller(p, s as i64, beta.rel_prec().min(cap as i64 + 4) as u32)?;
    let angle = beta.checked_div(&omega)?;
    let fin = chi.finite_part(cap)?.at(s).clone();
    match chi.kind {
        WeightKind::Classical { k } => {
            let a = if k >= 0 { angle.pow(k as u64) } else { angle.inv()?.pow(k.unsigned_abs()) };
            Ok(CharValue::Padic(a * &fin))
        }
        WeightKind::FiniteOrder { level, xi_power } => {
            let alpha = padic_log1p(&(angle.clone() - &angle.one_like()))?.mul_p_power(p, -1);
            let modulus = (p as i64).pow(level);
            let a = if level == 0 { 0 } else { alpha.residue_mod(level)? as i64 };
            let v = Cyclo::xi_pow(p, level, xi_power * a % modulus.max(1), cap);
            Ok(CharValue::Cyclo(v.scale(&fin)))
        }
        WeightKind::Universal { n } => {
            let u = UnivChar::new(p, n, cap)?;
            Ok(CharValue::Series(u.eval(&angle)?.scale(&fin)))
        }
    }
}

/// `t ↦ r(t)^(-2) ν(N(t))` over `F = Q`, where `N` is the identity.
pub fn weight_map_k(r: &WeightChar, nu: &WeightChar, cap: u32) -> Result<WeightChar> {
    if r.p != nu.p {
        return Err(Error::PrimeMismatch(r.p, nu.p));
    }
    match (&r.kind, &nu.kind) {
        (WeightKind::Classical { k: rk }, WeightKind::Classical { k: nk }) => {
            let fin = r.finite_part(cap)?.inverse_square()?.mul(&nu.finite_part(cap)?);
            Ok(WeightChar { p: r.p, kind: WeightKind::Classical { k: nk - 2 * rk }, finite_part: Some(fin) })
        }
        _ => Err(Error::Unsupported(
            "the weight map is implemented for classical characters".into(),
        )),
    }
}

/// An algebraic character `x ↦ Π_τ τ(x)^(e_τ)` of the units of `O ⊗ Z_p`
/// for an unramified component of degree `f <= 2`; `τ_1 = Frobenius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicChar {
    pub exps: Vec<i64>,
}

impl AlgebraicChar {
    pub fn new(exps: Vec<i64>) -> Self {
        AlgebraicChar { exps }
    }

    pub fn trivial(f: usize) -> Self {
        AlgebraicChar { exps: vec![0; f] }
    }

    /// `t ↦ t^(-2r) N(t)^ν`, i.e. exponents `ν - 2 r_τ`.
    pub fn weight_map(r: &AlgebraicChar, nu: i64) -> AlgebraicChar {
        AlgebraicChar { exps: r.exps.iter().map(|&e| nu - 2 * e).collect() }
    }

    pub fn mul(&self, other: &AlgebraicChar) -> AlgebraicChar {
        AlgebraicChar { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Evaluate at `x`; `None` when `x` is not a unit and some exponent is
    /// negative.
    pub fn eval(&self, x: &Unram) -> Result<Option<Unram>> {
        if self.exps.len() != x.degree() {
            return Err(Error::LevelMismatch(format!(
                "{} exponents for a degree {} component",
                self.exps.len(),
                x.degree()
            )));
        }
        let mut conj = x.clone();
        let mut acc = x.one_like();
        let unit = x.is_unit();
        for (t, &e) in self.exps.iter().enumerate() {
            if t > 0 {
                conj = conj.frobenius()?;
            }
            if e >= 0 {
                acc = acc * &conj.pow(e as u64);
            } else {
                if !unit {
                    return Ok(None);
                }
                acc = acc * &conj.inv()?.pow(e.unsigned_abs());
            }
        }
        Ok(Some(acc))
    }
}
