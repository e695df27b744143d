use super::IwasawaSeries;
use crate::error::{Error, Result};
use crate::padic::{padic_exp, u64_valuation, Cyclo, Padic, INF};
use crate::ring::{Coeff, PadicModule};

/// A value for `T` together with a certified lower bound `num/den` for its
/// valuation (`None` when the value is exactly zero).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPoint<R> {
    value: R,
    val: Option<(i64, i64)>,
}

impl<R: PadicModule> WeightPoint<R> {
    pub fn value(&self) -> &R {
        &self.value
    }

    pub fn valuation(&self) -> Option<(i64, i64)> {
        self.val
    }

    /// Whether the point lies in the disk of level `n`:
    /// `p^(n-1) v(T) >= 1`.
    pub fn in_disk(&self, p: u32, n: u32) -> bool {
        match self.val {
            None => true,
            Some((num, den)) => (p as i64).pow(n - 1) * num >= den,
        }
    }
}

impl WeightPoint<Padic> {
    pub fn from_padic(t: Padic) -> Self {
        let val = if t.is_exact_zero() {
            None
        } else {
            Some((t.val(), 1))
        };
        WeightPoint { value: t, val }
    }

    /// `T = exp(kp) - 1`, the point of the character `β ↦ β^k`.
    pub fn classical(p: u32, k: i64, cap: u32) -> Result<Self> {
        if k == 0 {
            return Ok(WeightPoint { value: Padic::zero(p, cap), val: None });
        }
        let e = padic_exp(&Padic::from_int(p, k * p as i64, cap))?;
        let t = e - &Padic::one(p, cap);
        let v = 1 + u64_valuation(k.unsigned_abs(), p) as i64;
        debug_assert_eq!(t.val(), v);
        Ok(WeightPoint { value: t, val: Some((v, 1)) })
    }
}

impl WeightPoint<Cyclo> {
    /// `T = ξ^a - 1` with `ξ` a primitive `p^level`-th root of unity.
    pub fn root_of_unity(p: u32, level: u32, a: i64, cap: u32) -> Result<Self> {
        let order = (p as i64).pow(level);
        let a = a.rem_euclid(order.max(1));
        let t = Cyclo::xi_pow(p, level, a, cap) - &Cyclo::from_padic(level, &Padic::one(p, cap));
        if a == 0 {
            return Ok(WeightPoint { value: t.zero_like(), val: None });
        }
        let e = u64_valuation(a as u64, p);
        // ξ^a has exact order p^(level - e)
        let den = (p as i64 - 1) * (p as i64).pow(level - e - 1);
        Ok(WeightPoint { value: t, val: Some((1, den)) })
    }
}

impl IwasawaSeries {
    /// Substitute a point; also returns the certified truncation bound.
    pub fn specialize_with_bound<R: PadicModule>(&self, pt: &WeightPoint<R>) -> Result<(R, i64)> {
        if pt.value.prime() != self.prime() {
            return Err(Error::PrimeMismatch(self.prime(), pt.value.prime()));
        }
        if !pt.in_disk(self.prime(), self.level()) {
            return Err(Error::OutsideDisk(format!(
                "v(T) = {:?} with level {}",
                pt.val,
                self.level()
            )));
        }
        let t = &pt.value;
        let Some((num, den)) = pt.val else {
            return Ok((t.embed(&self.coeffs()[0]), INF));
        };
        let mut acc = t.zero_like();
        let mut power = t.one_like();
        for (d, c) in self.coeffs().iter().enumerate() {
            if d > 0 {
                power = power * t;
            }
            if c.is_exact_zero() {
                continue;
            }
            acc = acc + &power.scale(c);
        }
        let bound = if self.tail() == INF {
            INF
        } else {
            // d v(T) - floor(d/P) >= (D+1)(v(T) - 1/P) for every d > D
            let block = self.block_size() as i64;
            let d1 = self.trunc() as i64 + 1;
            let gain = (d1 * (num * block - den)).div_euclid(den * block);
            self.tail() + gain
        };
        let out = if bound == INF { acc } else { acc.cap_prec(bound) };
        Ok((out, bound))
    }

    pub fn specialize<R: PadicModule>(&self, pt: &WeightPoint<R>) -> Result<R> {
        Ok(self.specialize_with_bound(pt)?.0)
    }
}
