//! Constructible functions on a fixed complex, stored by value on each open
//! simplex, with the link operator and euler integration.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::polyops::Polynomial;
use crate::simplicial::{Complex, Simplex, Subdivision};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfunError {
    #[error("functions live on different complexes")]
    MismatchedComplex,
    #[error("{got} values for a complex with {expected} simplices")]
    ValueCount { expected: usize, got: usize },
    #[error("function is not integer-valued (value {value} on {simplex:?})")]
    NotInteger { simplex: Simplex, value: Dyadic },
    #[error("polynomial value {0} is not a dyadic rational")]
    NotDyadic(String),
    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Simplex),
}

pub type Result<T> = std::result::Result<T, ConfunError>;

const PAR_THRESHOLD: usize = 4096;

/// A function constant on each open simplex of `complex`.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    complex: Arc<Complex>,
    values: Vec<Dyadic>,
}

impl PartialEq for ConstructibleFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.complex, &other.complex) || *self.complex == *other.complex)
            && self.values == other.values
    }
}

impl ConstructibleFunction {
    pub fn new(complex: Arc<Complex>, values: Vec<Dyadic>) -> Result<Self> {
        if values.len() != complex.len() {
            return Err(ConfunError::ValueCount {
                expected: complex.len(),
                got: values.len(),
            });
        }
        Ok(ConstructibleFunction { complex, values })
    }

    pub fn from_fn(complex: Arc<Complex>, f: impl Fn(usize) -> Dyadic) -> Self {
        let values = (0..complex.len()).map(f).collect();
        ConstructibleFunction { complex, values }
    }

    pub fn constant(complex: Arc<Complex>, c: Dyadic) -> Self {
        let values = vec![c; complex.len()];
        ConstructibleFunction { complex, values }
    }

    pub fn zero(complex: Arc<Complex>) -> Self {
        Self::constant(complex, Dyadic::zero())
    }

    /// Indicator of the whole space.
    pub fn one(complex: Arc<Complex>) -> Self {
        Self::constant(complex, Dyadic::one())
    }

    /// Indicator of the closed subcomplex generated by `generators`.
    pub fn indicator(complex: Arc<Complex>, generators: &[Simplex]) -> Result<Self> {
        let mut values = vec![Dyadic::zero(); complex.len()];
        for g in generators {
            if !complex.contains(g) {
                return Err(ConfunError::NotInComplex(g.clone()));
            }
            for f in g.faces() {
                values[complex.index_of(&f).expect("closed")] = Dyadic::one();
            }
        }
        Ok(ConstructibleFunction { complex, values })
    }

    /// Indicator of a single open simplex.
    pub fn open_indicator(complex: Arc<Complex>, i: usize) -> Self {
        let mut values = vec![Dyadic::zero(); complex.len()];
        values[i] = Dyadic::one();
        ConstructibleFunction { complex, values }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Dyadic {
        &self.values[i]
    }

    pub fn value_at(&self, s: &Simplex) -> Option<&Dyadic> {
        self.complex.index_of(s).map(|i| &self.values[i])
    }

    pub fn set(&mut self, i: usize, v: Dyadic) {
        self.values[i] = v;
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.complex, &other.complex) || *self.complex == *other.complex {
            Ok(())
        } else {
            Err(ConfunError::MismatchedComplex)
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Dyadic, &Dyadic) -> Dyadic) -> Result<Self> {
        self.same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(ConstructibleFunction {
            complex: self.complex.clone(),
            values,
        })
    }

    pub fn map(&self, f: impl Fn(&Dyadic) -> Dyadic) -> Self {
        ConstructibleFunction {
            complex: self.complex.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Dyadic) -> Self {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    /// Λφ(σ) = φ(σ)(1 + (−1)^{dim σ − 1}) + Σ_{τ ⊋ σ} (−1)^{dim τ − 1} φ(τ).
    pub fn link_op(&self) -> Self {
        let k = &*self.complex;
        let one = |i: usize| {
            let mut acc = if k.simplex_dim(i) % 2 == 1 {
                self.values[i].twice()
            } else {
                Dyadic::zero()
            };
            for &t in k.cofaces(i) {
                let t = t as usize;
                if self.values[t].is_zero() {
                    continue;
                }
                if k.simplex_dim(t) % 2 == 1 {
                    acc += &self.values[t];
                } else {
                    acc -= &self.values[t];
                }
            }
            acc
        };
        let values = crate::par::map(k.len(), PAR_THRESHOLD, one);
        ConstructibleFunction {
            complex: self.complex.clone(),
            values,
        }
    }

    /// Λφ by integrating φ over a triangulated link of each open simplex.
    /// Slow; the closed form [`Self::link_op`] is what everything else uses.
    pub fn link_op_geometric(&self) -> Self {
        let k = &*self.complex;
        let values = (0..k.len())
            .map(|i| {
                let gl = k.geometric_link(k.simplex(i)).expect("simplex of k");
                let mut acc = Dyadic::zero();
                for (j, &c) in gl.carrier.iter().enumerate() {
                    if gl.complex.simplex_dim(j).is_multiple_of(2) {
                        acc += &self.values[c];
                    } else {
                        acc -= &self.values[c];
                    }
                }
                acc
            })
            .collect();
        ConstructibleFunction {
            complex: self.complex.clone(),
            values,
        }
    }

    /// Λ̃ = ½Λ.
    pub fn half_link(&self) -> Self {
        let mut l = self.link_op();
        for v in &mut l.values {
            *v = v.halve();
        }
        l
    }

    /// Ω̃ = I − ½Λ.
    pub fn co_half_link(&self) -> Self {
        let l = self.link_op();
        let values = self
            .values
            .iter()
            .zip(&l.values)
            .map(|(v, lv)| v - &lv.halve())
            .collect();
        ConstructibleFunction {
            complex: self.complex.clone(),
            values,
        }
    }

    /// Ω̃φ on one simplex, without computing Λ everywhere.
    pub fn co_half_link_at(&self, i: usize) -> Dyadic {
        let k = &*self.complex;
        let mut acc = if k.simplex_dim(i) % 2 == 1 {
            self.values[i].twice()
        } else {
            Dyadic::zero()
        };
        for &t in k.cofaces(i) {
            let t = t as usize;
            if k.simplex_dim(t) % 2 == 1 {
                acc += &self.values[t];
            } else {
                acc -= &self.values[t];
            }
        }
        &self.values[i] - &acc.halve()
    }

    /// ∫φ dχ = Σ_σ (−1)^{dim σ} φ(σ).
    pub fn euler_integral(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (i, v) in self.values.iter().enumerate() {
            if self.complex.simplex_dim(i).is_multiple_of(2) {
                acc += v;
            } else {
                acc -= v;
            }
        }
        acc
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(Dyadic::is_integer)
    }

    pub fn is_even_valued(&self) -> bool {
        self.values.iter().all(Dyadic::is_even)
    }

    fn require_integer(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_integer()) {
            None => Ok(()),
            Some(i) => Err(ConfunError::NotInteger {
                simplex: self.complex.simplex(i).clone(),
                value: self.values[i].clone(),
            }),
        }
    }

    /// Λφ even at every simplex.
    pub fn is_euler(&self) -> Result<bool> {
        self.require_integer()?;
        Ok(self.link_op().is_even_valued())
    }

    /// Simplices where the function is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }

    /// Largest dimension of a simplex in the support; `-1` if empty.
    pub fn support_dim(&self) -> i32 {
        (0..self.values.len())
            .rev()
            .find(|&i| !self.values[i].is_zero())
            .map(|i| self.complex.simplex_dim(i) as i32)
            .unwrap_or(-1)
    }

    /// dim supp(φ mod 2^k) < k for every k.
    pub fn in_ideal_i(&self) -> Result<bool> {
        self.require_integer()?;
        let top = self.complex.dim().max(0) as u32 + 1;
        for k in 1..=top {
            let m = BigInt::one() << k;
            let bad = self.values.iter().enumerate().any(|(i, v)| {
                self.complex.simplex_dim(i) as u32 >= k
                    && !(v.numerator() % &m).is_zero()
            });
            if bad {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// φ = 2ψ with ψ ∈ I.
    pub fn in_2i(&self) -> Result<bool> {
        self.require_integer()?;
        if !self.is_even_valued() {
            return Ok(false);
        }
        self.map(Dyadic::halve).in_ideal_i()
    }

    /// Zero on every simplex of dimension above `k`.
    pub fn restrict_to_skeleton(&self, k: usize) -> Self {
        ConstructibleFunction::from_fn(self.complex.clone(), |i| {
            if self.complex.simplex_dim(i) <= k {
                self.values[i].clone()
            } else {
                Dyadic::zero()
            }
        })
    }

    /// Pointwise P(φ). Requires integer values unless P has integer coefficients.
    pub fn apply_polynomial(&self, p: &Polynomial) -> Result<Self> {
        if !p.has_integer_coefficients() {
            self.require_integer()?;
        }
        // functions take few distinct values; evaluate each once
        let mut seen: HashMap<&Dyadic, Dyadic> = HashMap::new();
        let mut values = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let pv = match seen.get(v) {
                Some(pv) => pv.clone(),
                None => {
                    let pv = p
                        .eval_dyadic(v)
                        .ok_or_else(|| ConfunError::NotDyadic(p.to_string()))?;
                    seen.insert(v, pv.clone());
                    pv
                }
            };
            values.push(pv);
        }
        Ok(ConstructibleFunction {
            complex: self.complex.clone(),
            values,
        })
    }

    /// φ ∘ carrier on a subdivision.
    pub fn pullback(&self, sd: &Subdivision) -> Self {
        let complex = Arc::new(sd.complex.clone());
        let values = sd.carrier.iter().map(|&c| self.values[c].clone()).collect();
        ConstructibleFunction { complex, values }
    }

    /// Values on an arbitrary complex through a simplex → simplex map.
    pub fn pull_through(&self, target: Arc<Complex>, carrier: &[usize]) -> Self {
        let values = carrier.iter().map(|&c| self.values[c].clone()).collect();
        ConstructibleFunction {
            complex: target,
            values,
        }
    }

    /// φ − ψ is integer-valued and divisible by 2^k everywhere.
    pub fn congruent_mod(&self, other: &Self, k: u32) -> Result<bool> {
        let d = self.sub(other)?;
        d.require_integer()?;
        let m = BigInt::one() << k;
        Ok(d.values.iter().all(|v| (v.numerator() % &m).is_zero()))
    }
}
