use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::AlgebraicChar;
use crate::padic::{Padic, Unram};
use crate::ring::Coeff;

/// Three pairs `(r_i, ν_i)` on the component away from the distinguished
/// embedding. The degree of that component is the length of the exponent
/// vectors (0 for the rational case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaKernelSpec {
    pub p: u32,
    pub r: [AlgebraicChar; 3],
    pub nu: [i64; 3],
}

impl DeltaKernelSpec {
    pub fn new(p: u32, r: [AlgebraicChar; 3], nu: [i64; 3]) -> Result<Self> {
        let f = r[0].exps.len();
        if f > 2 || r.iter().any(|c| c.exps.len() != f) {
            return Err(Error::Invalid("components of degree at most 2 with matching exponent vectors".into()));
        }
        Ok(DeltaKernelSpec { p, r, nu })
    }

    pub fn degree(&self) -> usize {
        self.r[0].exps.len()
    }

    fn norm_power(&self, nu: i64) -> AlgebraicChar {
        AlgebraicChar::new(vec![nu; self.degree()])
    }

    fn neg(c: &AlgebraicChar) -> AlgebraicChar {
        AlgebraicChar::new(c.exps.iter().map(|e| -e).collect())
    }

    /// `m_1 = r_1 - r_3 - r_2 + ν_2 N`.
    pub fn m1(&self) -> AlgebraicChar {
        self.r[0].mul(&Self::neg(&self.r[2])).mul(&Self::neg(&self.r[1])).mul(&self.norm_power(self.nu[1]))
    }

    /// `m_2 = r_2 - r_1 - r_3 + ν_1 N`.
    pub fn m2(&self) -> AlgebraicChar {
        self.r[1].mul(&Self::neg(&self.r[0])).mul(&Self::neg(&self.r[2])).mul(&self.norm_power(self.nu[0]))
    }

    /// `m_3 = r_3 - r_1 - r_2`.
    pub fn m3(&self) -> AlgebraicChar {
        self.r[2].mul(&Self::neg(&self.r[0])).mul(&Self::neg(&self.r[1]))
    }
}

/// The character by which scaling slot `slot` (0-based) multiplies `Δ`.
pub fn slot_character(spec: &DeltaKernelSpec, slot: usize) -> AlgebraicChar {
    match slot {
        0 => spec.m2().mul(&spec.m3()),
        1 => spec.m1().mul(&spec.m3()),
        _ => spec.m1().mul(&spec.m2()),
    }
}

/// `m_1(x3 y2 - x2 y3) m_2(x3 y1 - x1 y3) m_3(x1 y2 - x2 y1)`, extended by
/// zero as soon as one determinant is not a unit.
pub fn delta_eval(spec: &DeltaKernelSpec, v: [(&Unram, &Unram); 3]) -> Result<Unram> {
    let [(x1, y1), (x2, y2), (x3, y3)] = v;
    if spec.degree() == 0 {
        return Ok(Unram::base(&Padic::one(spec.p, x1.coeffs()[0].cap())));
    }
    for x in [x1, y1, x2, y2, x3, y3] {
        if x.prime() != spec.p {
            return Err(Error::PrimeMismatch(spec.p, x.prime()));
        }
        if x.degree() != spec.degree() {
            return Err(Error::LevelMismatch("pair entries of the wrong degree".into()));
        }
    }
    let det = |a: &Unram, b: &Unram, c: &Unram, d: &Unram| a.clone() * b - &(c.clone() * d);
    let args = [
        (spec.m1(), det(x3, y2, x2, y3)),
        (spec.m2(), det(x3, y1, x1, y3)),
        (spec.m3(), det(x1, y2, x2, y1)),
    ];
    let mut acc = x1.one_like();
    for (chi, d) in &args {
        if !d.is_unit() {
            return Ok(x1.zero_like());
        }
        match chi.eval(d)? {
            Some(val) => acc = acc * &val,
            None => return Ok(x1.zero_like()),
        }
    }
    Ok(acc)
}
