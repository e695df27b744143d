use serde::{Deserialize, Serialize};

use super::TripleWeights;
use crate::error::{Error, Result};
use crate::padic::{Padic, Unram};
use crate::ring::{Coeff, PadicModule};

/// A Hecke eigenvalue, either in `Q_p` or in an unramified quadratic
/// extension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenScalar {
    Base(Padic),
    Ext(Unram),
}

impl EigenScalar {
    pub fn to_unram(&self) -> Unram {
        match self {
            EigenScalar::Base(x) => Unram::base(x),
            EigenScalar::Ext(x) => x.clone(),
        }
    }
}

/// Which prime above `p` an Euler factor is taken at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeSlot {
    /// The prime of the distinguished embedding; weights come from the
    /// triple itself.
    Distinguished,
    /// Another unramified prime with one weight triple per embedding above it.
    Other { weights: Vec<[i64; 3]> },
}

/// Eigenvalues of the three forms at one prime, with the weight data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleEigenData {
    pub p: u32,
    pub weights: TripleWeights,
    pub alpha_x: EigenScalar,
    pub beta_x: EigenScalar,
    pub alpha_y: EigenScalar,
    pub beta_y: EigenScalar,
    pub alpha_z: EigenScalar,
    pub beta_z: EigenScalar,
}

/// A product of linear factors together with the factors themselves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerValue {
    pub value: Unram,
    pub factors: Vec<Unram>,
    /// Some factor vanishes within precision.
    pub exceptional: bool,
}

impl EulerValue {
    fn from_factors(factors: Vec<Unram>) -> Result<Self> {
        let mut value = factors[0].one_like();
        for f in &factors {
            value = value * f;
        }
        let exceptional = factors.iter().any(|f| f.is_zero());
        // negative powers of p lower the absolute precision; only a product
        // with no determined digit and no vanishing factor is unusable
        if !exceptional && value.is_zero() {
            return Err(Error::PrecisionExhausted("Euler factor product".into()));
        }
        Ok(EulerValue { value, factors, exceptional })
    }

    /// Recompute the product from the factors.
    pub fn recompute(&self) -> Unram {
        self.factors.iter().fold(self.value.one_like(), |acc, f| acc * f)
    }
}

/// `(k1 + k2 + k3) / 2` at the distinguished embedding.
pub fn m0(w: &TripleWeights) -> Result<i64> {
    w.check_parity()?;
    Ok(w.big_m())
}

/// `m_τ = (k1τ + k2τ + k3τ)/2` for every embedding above the prime.
pub fn m_vector(weights: &[[i64; 3]]) -> Result<Vec<i64>> {
    weights
        .iter()
        .map(|k| {
            let s = k[0] + k[1] + k[2];
            if s % 2 != 0 {
                Err(Error::InvalidWeights(format!("{k:?} has odd sum")))
            } else {
                Ok(s / 2)
            }
        })
        .collect()
}

/// All six eigenvalues in one common ring, ordered
/// `α_x, β_x, α_y, β_y, α_z, β_z`.
fn lift_all(d: &TripleEigenData) -> Result<Vec<Unram>> {
    d.weights.check_parity()?;
    let all = [&d.alpha_x, &d.beta_x, &d.alpha_y, &d.beta_y, &d.alpha_z, &d.beta_z];
    let template = all.iter().find_map(|x| match x {
        EigenScalar::Ext(u) => Some(u.clone()),
        EigenScalar::Base(_) => None,
    });
    let mut out = Vec::with_capacity(6);
    for x in all {
        let u = match (x, &template) {
            (EigenScalar::Base(c), Some(t)) => t.embed(c),
            (EigenScalar::Ext(u), Some(t)) if u.poly() != t.poly() => {
                return Err(Error::Invalid("eigenvalues live in different extensions".into()))
            }
            _ => x.to_unram(),
        };
        if u.prime() != d.p {
            return Err(Error::PrimeMismatch(d.p, u.prime()));
        }
        out.push(u);
    }
    Ok(out)
}

fn one_minus(prod: Unram, e: i64) -> Unram {
    let one = prod.one_like();
    one - &prod.mul_p_power(prod.prime(), e)
}

/// The four-factor Euler factor at `slot`.
pub fn euler_e(slot: &PrimeSlot, d: &TripleEigenData) -> Result<EulerValue> {
    let v = lift_all(d)?;
    let (ax, bx, ay, by, az, bz) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
    let triple = |a: &Unram, b: &Unram, c: &Unram| a.clone() * b * c;
    let (products, e) = match slot {
        PrimeSlot::Distinguished => (
            [triple(ax, ay, bz), triple(ax, by, bz), triple(bx, ay, bz), triple(bx, by, bz)],
            1 - m0(&d.weights)?,
        ),
        PrimeSlot::Other { weights } => (
            [triple(bx, by, az), triple(ax, by, bz), triple(bx, ay, bz), triple(bx, by, bz)],
            -m_vector(weights)?.iter().map(|m| m + 2).sum::<i64>(),
        ),
    };
    EulerValue::from_factors(products.into_iter().map(|x| one_minus(x, e)).collect())
}

/// The two-factor Euler factor of the third form at `slot`.
pub fn euler_e1(slot: &PrimeSlot, d: &TripleEigenData) -> Result<EulerValue> {
    let bz = lift_all(d)?.swap_remove(5);
    let sq = bz.clone() * &bz;
    let (e1, e2) = match slot {
        PrimeSlot::Distinguished => (-d.weights.k3, 1 - d.weights.k3),
        PrimeSlot::Other { weights } => (
            -weights.iter().map(|k| k[2] + 2).sum::<i64>(),
            -weights.iter().map(|k| k[2] + 1).sum::<i64>(),
        ),
    };
    EulerValue::from_factors(vec![one_minus(sq.clone(), e1), one_minus(sq, e2)])
}

/// `1 - c p^e` as a plain p-adic number, for checks against direct
/// substitution.
pub fn linear_factor(c: &Padic, e: i64) -> Padic {
    c.one_like() - &c.mul_p_power(c.prime(), e)
}
