use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DirichletChar, QExpansion};
use crate::error::{Error, Result};
use crate::iwasawa::{WeightChar, WeightKind};
use crate::padic::{check_prime, Cyclo, Padic};
use crate::ring::Coeff;

/// `V`: the geometric basis `V_{k,m}`; `W`: the normalized basis
/// `W_{k,m} = p^(2nm) V_{k,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    V,
    W,
}

/// `Σ_{m,ν} a_{m,ν} (1+q)^ν B_{k,m}` with `B` the chosen basis.
#[derive(Clone, Debug, PartialEq)]
pub struct NearlyForm<C> {
    p: u32,
    n: u32,
    weight: WeightChar,
    shift: i64,
    basis: Basis,
    window: u64,
    grid: BTreeMap<(u32, u64), C>,
}

impl<C: Coeff> NearlyForm<C> {
    /// An empty form. Classical weights carry their `k`; universal weights
    /// carry `k_n + shift`.
    pub fn new(weight: WeightChar, shift: i64, n: u32, basis: Basis, window: u64) -> Result<Self> {
        check_prime(weight.p)?;
        if n == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        if weight.finite_part.is_some() {
            return Err(Error::Unsupported("weight tags use the default finite part".into()));
        }
        match weight.kind {
            WeightKind::Classical { .. } if shift != 0 => {
                return Err(Error::Invalid("fold the shift into a classical weight".into()))
            }
            WeightKind::FiniteOrder { .. } => {
                return Err(Error::Unsupported("forms of finite-order weight".into()))
            }
            WeightKind::Universal { n: wn } if wn != n => {
                return Err(Error::LevelMismatch(format!("universal weight of level {wn} on a level {n} form")))
            }
            _ => {}
        }
        Ok(NearlyForm { p: weight.p, n, weight, shift, basis, window, grid: BTreeMap::new() })
    }

    pub fn classical(p: u32, k: i64, n: u32, basis: Basis, window: u64) -> Result<Self> {
        Self::new(WeightChar::power(p, k), 0, n, basis, window)
    }

    pub fn from_terms(
        weight: WeightChar,
        shift: i64,
        n: u32,
        basis: Basis,
        window: u64,
        terms: impl IntoIterator<Item = (u32, u64, C)>,
    ) -> Result<Self> {
        let mut f = Self::new(weight, shift, n, basis, window)?;
        for (m, nu, c) in terms {
            f.add_term(m, nu, c)?;
        }
        Ok(f)
    }

    pub(crate) fn empty_like(&self) -> Self {
        NearlyForm { grid: BTreeMap::new(), ..self.clone() }
    }

    pub(crate) fn with_grid<D: Coeff>(&self, grid: BTreeMap<(u32, u64), D>) -> NearlyForm<D> {
        NearlyForm {
            p: self.p,
            n: self.n,
            weight: self.weight.clone(),
            shift: self.shift,
            basis: self.basis,
            window: self.window,
            grid,
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn weight(&self) -> &WeightChar {
        &self.weight
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The classical weight `k`, if any.
    pub fn classical_weight(&self) -> Option<i64> {
        match self.weight.kind {
            WeightKind::Classical { k } => Some(k),
            _ => None,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn grid(&self) -> &BTreeMap<(u32, u64), C> {
        &self.grid
    }

    pub fn coeff(&self, m: u32, nu: u64) -> Option<&C> {
        self.grid.get(&(m, nu))
    }

    /// Highest `m` present.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.grid.keys().map(|&(m, _)| m).max()
    }

    pub fn add_term(&mut self, m: u32, nu: u64, c: C) -> Result<()> {
        if nu >= self.window {
            return Err(Error::WindowOverflow { exponent: nu, window: self.window });
        }
        let v = match self.grid.remove(&(m, nu)) {
            Some(old) => old + &c,
            None => c,
        };
        self.grid.insert((m, nu), v);
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.n != other.n || self.basis != other.basis {
            return Err(Error::LevelMismatch("forms of different level or basis".into()));
        }
        if self.weight != other.weight || self.shift != other.shift {
            return Err(Error::Invalid("forms of different weight".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.window = out.window.max(other.window);
        for (&(m, nu), c) in &other.grid {
            out.add_term(m, nu, c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.with_grid(self.grid.iter().map(|(&k, c)| (k, -c.clone())).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.with_grid(self.grid.iter().map(|(&k, c)| (k, c.clone() * s)).collect())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NearlyForm<D> {
        self.with_grid(self.grid.iter().map(|(&k, c)| (k, f(c))).collect())
    }

    /// Zero within precision.
    pub fn is_zero(&self) -> bool {
        self.grid.values().all(|c| c.is_zero())
    }

    /// The difference vanishes within precision; shapes must agree.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// The coefficient function of `B_{k,m}`.
    pub fn component(&self, m: u32) -> QExpansion<C> {
        let mut q = QExpansion::new(self.p, self.window);
        for (&(mm, nu), c) in &self.grid {
            if mm == m {
                q.add_term(nu, c.clone()).expect("same window");
            }
        }
        q
    }

    fn per_component(&self, f: impl Fn(&QExpansion<C>) -> Result<QExpansion<C>>) -> Result<Self> {
        let mut out = self.empty_like();
        let ms: Vec<u32> = {
            let mut v: Vec<u32> = self.grid.keys().map(|&(m, _)| m).collect();
            v.dedup();
            v
        };
        for m in ms {
            let q = f(&self.component(m))?;
            out.window = out.window.max(q.window());
            for (&nu, c) in q.terms() {
                out.add_term(m, nu, c.clone())?;
            }
        }
        Ok(out)
    }

    pub fn derive(&self) -> Self {
        self.per_component(|q| Ok(q.derive())).expect("∂ keeps exponents")
    }

    pub fn u_op(&self) -> Self {
        self.per_component(|q| Ok(q.u_op())).expect("U lowers exponents")
    }

    pub fn v_op(&self) -> Result<Self> {
        self.per_component(|q| q.v_op())
    }

    pub fn deplete(&self) -> Self {
        self.per_component(|q| Ok(q.deplete())).expect("depletion keeps exponents")
    }

    pub fn project_residue(&self, gamma: u64, modulus: u64) -> Self {
        self.per_component(|q| Ok(q.project_residue(gamma, modulus))).expect("projection keeps exponents")
    }

    /// `w` as an element of the coefficient ring, for a form whose grid
    /// holds `like`.
    pub fn weight_value(&self, like: &C) -> Result<C> {
        match self.weight.kind {
            WeightKind::Classical { k } => Ok(like.from_int_like(k)),
            WeightKind::Universal { n } => Ok(like.universal_weight(n)? + &like.from_int_like(self.shift)),
            WeightKind::FiniteOrder { .. } => Err(Error::Unsupported("forms of finite-order weight".into())),
        }
    }

    /// The weight tag after raising the weight by `2s`.
    fn raised(&self, s: u32) -> Self {
        let mut out = self.empty_like();
        match &mut out.weight.kind {
            WeightKind::Classical { k } => *k += 2 * s as i64,
            _ => out.shift += 2 * s as i64,
        }
        out
    }

    /// `p^(2n)` in the geometric basis, `1` in the normalized one.
    fn step_factor(&self, like: &C) -> C {
        match self.basis {
            Basis::V => like.one_like().mul_p_power(self.p, 2 * self.n as i64),
            Basis::W => like.one_like(),
        }
    }

    /// One step of the Gauss–Manin connection:
    /// `a(1+q)^ν B_{k,m} ↦ ν a(1+q)^ν B_{k+2,m} + c (w - m) a(1+q)^ν B_{k+2,m+1}`
    /// with `c = p^(2n)` in the geometric basis and `c = 1` in the normalized one.
    pub fn nabla(&self) -> Result<Self> {
        let mut out = self.raised(1);
        let Some(like) = self.grid.values().next() else {
            return Ok(out);
        };
        let w = self.weight_value(like)?;
        let c = self.step_factor(like);
        for (&(m, nu), a) in &self.grid {
            if nu != 0 {
                out.add_term(m, nu, a.clone() * &a.from_int_like(nu as i64))?;
            }
            let lift = (w.clone() - &a.from_int_like(m as i64)) * &c * a;
            out.add_term(m + 1, nu, lift)?;
        }
        Ok(out)
    }

    /// `∇^s` as an `s`-fold composition of [`NearlyForm::nabla`].
    pub fn nabla_compose(&self, s: u32) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..s {
            f = f.nabla()?;
        }
        Ok(f)
    }

    /// `∇^s` by the closed form
    /// `Σ_i c^i binom(s,i) binom(w+s-m-1,i) i! ∂^(s-i) f B_{k+2s,m+i}`.
    pub fn nabla_pow(&self, s: u32) -> Result<Self> {
        let mut out = self.raised(s);
        let Some(like) = self.grid.values().next() else {
            return Ok(out);
        };
        let w = self.weight_value(like)?;
        let c = self.step_factor(like);
        for (&(m, nu), a) in &self.grid {
            let x = w.clone() + &like.from_int_like(s as i64 - m as i64 - 1);
            // binom(s,i) * (x)_i, with (x)_i the falling factorial
            let mut falling = like.one_like();
            let mut ci = like.one_like();
            let mut binom_s = 1i64;
            let nu_c = like.from_int_like(nu as i64);
            for i in 0..=s {
                let e = s - i;
                let dpart = if e == 0 {
                    Some(a.clone())
                } else if nu == 0 {
                    None
                } else {
                    let mut t = a.clone();
                    for _ in 0..e {
                        t = t * &nu_c;
                    }
                    Some(t)
                };
                if let Some(d) = dpart {
                    let coef = falling.clone() * &ci * &like.from_int_like(binom_s);
                    out.add_term(m + i, nu, coef * &d)?;
                }
                falling = falling * &(x.clone() - &like.from_int_like(i as i64));
                ci = ci * &c;
                binom_s = binom_s * (s - i) as i64 / (i as i64 + 1);
            }
        }
        Ok(out)
    }

    /// Rescale to the requested basis.
    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let sign = if basis == Basis::W { -1 } else { 1 };
        let mut out = self.empty_like();
        out.basis = basis;
        for (&(m, nu), c) in &self.grid {
            let e = sign * 2 * self.n as i64 * m as i64;
            out.grid.insert((m, nu), c.mul_p_power(self.p, e));
        }
        out
    }

    /// Product: exponents, filtration indices and weights add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.n != other.n || self.basis != other.basis {
            return Err(Error::LevelMismatch("forms of different level or basis".into()));
        }
        let (weight, shift) = match (&self.weight.kind, &other.weight.kind) {
            (WeightKind::Classical { k: a }, WeightKind::Classical { k: b }) => (WeightChar::power(self.p, a + b), 0),
            (WeightKind::Universal { .. }, WeightKind::Classical { k }) => (self.weight.clone(), self.shift + k),
            (WeightKind::Classical { k }, WeightKind::Universal { .. }) => (other.weight.clone(), other.shift + k),
            _ => return Err(Error::Unsupported("product of two universal weights".into())),
        };
        let mut out = NearlyForm::new(weight, shift, self.n, self.basis, self.window + other.window - 1)?;
        for (&(m1, a), x) in &self.grid {
            for (&(m2, b), y) in &other.grid {
                out.add_term(m1 + m2, a + b, x.clone() * y)?;
            }
        }
        Ok(out)
    }
}

impl NearlyForm<Padic> {
    pub fn theta_direct(&self, chi: &DirichletChar) -> NearlyForm<Cyclo> {
        let mut grid = BTreeMap::new();
        for (&(m, nu), c) in &self.grid {
            if let Some(v) = chi.value(nu as i64) {
                grid.insert((m, nu), crate::ring::PadicModule::scale(&v, c));
            }
        }
        self.with_grid(grid)
    }

    pub fn theta_avg(&self, chi: &DirichletChar, xi: &Cyclo) -> Result<NearlyForm<Cyclo>> {
        let mut grid = BTreeMap::new();
        let ms: std::collections::BTreeSet<u32> = self.grid.keys().map(|&(m, _)| m).collect();
        for m in ms {
            let q = self.component(m).theta_avg(chi, xi)?;
            for (&nu, c) in q.terms() {
                grid.insert((m, nu), c.clone());
            }
        }
        Ok(self.with_grid(grid))
    }
}

#[derive(Serialize, Deserialize)]
struct GridEntry<C> {
    m: u32,
    nu: u64,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
struct FormJson<C> {
    weight: WeightChar,
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    shift: i64,
    basis: Basis,
    n: u32,
    window: u64,
    grid: Vec<GridEntry<C>>,
}

fn is_zero_i64(x: &i64) -> bool {
    *x == 0
}

impl<C: Coeff + Serialize> Serialize for NearlyForm<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            weight: self.weight.clone(),
            shift: self.shift,
            basis: self.basis,
            n: self.n,
            window: self.window,
            grid: self.grid.iter().map(|(&(m, nu), c)| GridEntry { m, nu, coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff + DeserializeOwned> Deserialize<'de> for NearlyForm<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FormJson::<C>::deserialize(d)?;
        let mut f = NearlyForm::new(j.weight, j.shift, j.n, j.basis, j.window).map_err(D::Error::custom)?;
        for e in j.grid {
            if f.grid.contains_key(&(e.m, e.nu)) {
                return Err(D::Error::custom(format!("duplicate grid entry ({}, {})", e.m, e.nu)));
            }
            f.add_term(e.m, e.nu, e.coeff).map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}
