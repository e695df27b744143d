//! Serre–Tate q-expansions in the monomial basis `(1+q)^ν` and nearly
//! overconvergent forms built on them.

mod dirichlet;
mod form;

pub use dirichlet::{primitive_root, DirichletChar};
pub use form::{Basis, NearlyForm};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{gauss_sum, Cyclo, Padic};
use crate::ring::{Coeff, PadicModule};

/// `Σ_ν a_ν (1+q)^ν` with every exponent below `window`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpansion<C> {
    p: u32,
    window: u64,
    terms: BTreeMap<u64, C>,
}

impl<C: Coeff> QExpansion<C> {
    pub fn new(p: u32, window: u64) -> Self {
        QExpansion { p, window, terms: BTreeMap::new() }
    }

    pub fn from_terms(p: u32, window: u64, terms: impl IntoIterator<Item = (u64, C)>) -> Result<Self> {
        let mut f = Self::new(p, window);
        for (nu, c) in terms {
            f.add_term(nu, c)?;
        }
        Ok(f)
    }

    pub fn monomial(p: u32, window: u64, nu: u64, c: C) -> Result<Self> {
        Self::from_terms(p, window, [(nu, c)])
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn terms(&self) -> &BTreeMap<u64, C> {
        &self.terms
    }

    pub fn coeff(&self, nu: u64) -> Option<&C> {
        self.terms.get(&nu)
    }

    pub fn add_term(&mut self, nu: u64, c: C) -> Result<()> {
        if nu >= self.window {
            return Err(Error::WindowOverflow { exponent: nu, window: self.window });
        }
        let v = match self.terms.remove(&nu) {
            Some(old) => old + &c,
            None => c,
        };
        self.terms.insert(nu, v);
        Ok(())
    }

    /// Zero within precision.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.clone().sub(other).is_zero()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QExpansion<D> {
        QExpansion { p: self.p, window: self.window, terms: self.terms.iter().map(|(&nu, c)| (nu, f(c))).collect() }
    }

    fn map_terms(&self, f: impl Fn(u64, &C) -> Option<(u64, C)>) -> Self {
        QExpansion { p: self.p, window: self.window, terms: self.terms.iter().filter_map(|(&nu, c)| f(nu, c)).collect() }
    }

    pub fn add(mut self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "q-expansions over different primes");
        self.window = self.window.max(other.window);
        for (&nu, c) in &other.terms {
            self.add_term(nu, c.clone()).expect("window already widened");
        }
        self
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|nu, c| Some((nu, -c.clone())))
    }

    pub fn sub(self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_terms(|nu, c| Some((nu, c.clone() * s)))
    }

    /// `∂ = (1+q) d/dq`: `a_ν ↦ ν a_ν`.
    pub fn derive(&self) -> Self {
        self.map_terms(|nu, c| {
            if nu == 0 {
                None
            } else {
                Some((nu, c.clone() * &c.from_int_like(nu as i64)))
            }
        })
    }

    /// `a_ν ↦ a_{pν}` at exponent `ν`.
    pub fn u_op(&self) -> Self {
        let p = self.p as u64;
        self.map_terms(|nu, c| if nu % p == 0 { Some((nu / p, c.clone())) } else { None })
    }

    /// `(1+q)^ν ↦ (1+q)^(pν)`.
    pub fn v_op(&self) -> Result<Self> {
        let p = self.p as u64;
        let mut out = Self::new(self.p, self.window);
        for (&nu, c) in &self.terms {
            out.add_term(nu * p, c.clone())?;
        }
        Ok(out)
    }

    /// `1 - V∘U`: keeps the exponents prime to `p`.
    pub fn deplete(&self) -> Self {
        let p = self.p as u64;
        self.map_terms(|nu, c| if nu % p != 0 { Some((nu, c.clone())) } else { None })
    }

    /// Keep `a_ν` exactly when `ν ≡ gamma (mod modulus)`.
    pub fn project_residue(&self, gamma: u64, modulus: u64) -> Self {
        self.map_terms(|nu, c| if nu % modulus == gamma % modulus { Some((nu, c.clone())) } else { None })
    }

    /// Product; the window grows to hold every exponent sum.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "q-expansions over different primes");
        let mut out = Self::new(self.p, self.window + other.window - 1);
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                out.add_term(a + b, x.clone() * y).expect("window holds every sum");
            }
        }
        out
    }
}

impl QExpansion<Padic> {
    /// `a_ν ↦ χ(ν) a_ν`.
    pub fn theta_direct(&self, chi: &DirichletChar) -> QExpansion<Cyclo> {
        QExpansion {
            p: self.p,
            window: self.window,
            terms: self
                .terms
                .iter()
                .filter_map(|(&nu, c)| chi.value(nu as i64).map(|v| (nu, v.scale(c))))
                .collect(),
        }
    }

    /// `t_j^*`: `f(q) ↦ f(ξ^j (1+q) - 1)`, i.e. `a_ν ↦ ξ^(jν) a_ν`.
    pub fn substitute(&self, xi: &Cyclo, j: i64) -> QExpansion<Cyclo> {
        let order = (self.p as i64).pow(xi.level());
        let xj = xi.pow(j.rem_euclid(order) as u64);
        QExpansion {
            p: self.p,
            window: self.window,
            terms: self.terms.iter().map(|(&nu, c)| (nu, xj.pow(nu % order as u64).scale(c))).collect(),
        }
    }

    /// `g_{χ^-1}^{-1} Σ_j χ(j)^{-1} t_j^* f`, summed over units `j` modulo `p^level`.
    pub fn theta_avg(&self, chi: &DirichletChar, xi: &Cyclo) -> Result<QExpansion<Cyclo>> {
        if xi.level() != chi.level() || xi.prime() != chi.prime() {
            return Err(Error::LevelMismatch("ξ and χ have different levels".into()));
        }
        let inv = chi.inverse();
        let g = gauss_sum(&inv, xi)?;
        let g_inv = g.inv().map_err(|_| Error::Degenerate("the Gauss sum vanishes; χ is not primitive".into()))?;
        let order = chi.modulus() as i64;
        let mut acc = QExpansion::new(self.p, self.window);
        for j in 1..order {
            if j % self.p as i64 == 0 {
                continue;
            }
            let w = inv.value(j).expect("unit");
            let twisted = self.substitute(xi, j);
            acc = acc.add(&twisted.scale(&w));
        }
        Ok(acc.scale(&g_inv))
    }
}
