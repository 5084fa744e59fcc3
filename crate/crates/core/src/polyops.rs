//! Polynomial operators on integer-valued functions: the binomial basis
//! `f_p(t) = t(t-1)…(t-p+1)/p!`, membership in the ring 𝒫 of operators that
//! preserve completely-euler functions, and reduction modulo 8.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("malformed coefficient `{0}`")]
    Malformed(String),
    #[error("polynomial is not integer-valued on the integers (n_{index} = {value})")]
    NotIntegerValued { index: String, value: String },
    #[error("polynomial is not in the operator ring 𝒫")]
    NotInP,
    #[error("function is not integer-valued")]
    NotInteger,
    #[error("congruence {0} failed")]
    Congruence(&'static str),
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, PolyError>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Univariate polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Polynomial::new(c.iter().map(|&x| rat(x)).collect())
    }

    /// Parses `"c0,c1/2,…"`.
    pub fn parse_coefficients(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|c| {
                let c = c.trim();
                c.parse::<BigRational>()
                    .map_err(|_| PolyError::Malformed(c.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(coeffs))
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Polynomial::from_ints(&[0, 1])
    }

    /// Binomial basis polynomial `f_p`.
    pub fn binomial(p: usize) -> Self {
        let mut acc = Polynomial::from_ints(&[1]);
        for j in 0..p {
            acc = acc.mul(&Polynomial::from_ints(&[-(j as i64), 1]));
        }
        let fact: BigInt = (1..=p as i64).map(BigInt::from).product();
        acc.scale(&BigRational::new(BigInt::one(), fact))
    }

    /// t² − t.
    pub fn x2() -> Self {
        Polynomial::from_ints(&[0, -1, 1])
    }

    /// t³ − t.
    pub fn x3() -> Self {
        Polynomial::from_ints(&[0, -1, 0, 1])
    }

    /// ½t(t−1)(t−2)(t−3).
    pub fn p4() -> Self {
        Polynomial::binomial(4).scale(&rat(12))
    }

    /// ½t(t−1)(t−2)(t−3)(t−4).
    pub fn p5() -> Self {
        Polynomial::binomial(5).scale(&rat(60))
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_int(&self, t: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(t.clone()))
    }

    /// P(t) as a dyadic, or `None` if the value has an odd denominator.
    pub fn eval_dyadic(&self, t: &Dyadic) -> Option<Dyadic> {
        let tr = BigRational::new(t.numerator().clone(), BigInt::one() << t.exponent());
        rational_to_dyadic(&self.eval(&tr))
    }

    /// P(t + 1).
    pub fn translate(&self) -> Self {
        let mut acc = Polynomial::zero();
        let shift = Polynomial::from_ints(&[1, 1]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    /// ΔP(t) = P(t+1) − P(t).
    pub fn forward_difference(&self) -> Self {
        self.translate().sub(self)
    }
}

pub fn rational_to_dyadic(r: &BigRational) -> Option<Dyadic> {
    let den = r.denom();
    let tz = den.trailing_zeros().unwrap_or(0);
    if *den != (BigInt::one() << tz) {
        return None;
    }
    Some(Dyadic::new(r.numer().clone(), tz as u32))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{self}]")
    }
}

/// Coordinates `n_p` of `P = Σ n_p f_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialDecomposition {
    pub coeffs: Vec<BigInt>,
}

impl BinomialDecomposition {
    pub fn reconstruct(&self) -> Polynomial {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Polynomial::zero(), |acc, (p, n)| {
                acc.add(&Polynomial::binomial(p).scale(&BigRational::from_integer(n.clone())))
            })
    }
}

/// Rational values Δ^p P(0) for p = 0..=deg, from the difference table of P(0..=deg).
fn difference_coords(p: &Polynomial) -> Vec<BigRational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let mut row: Vec<BigRational> = (0..=deg as i64).map(|t| p.eval(&rat(t))).collect();
    let mut out = Vec::with_capacity(deg + 1);
    while !row.is_empty() {
        out.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

pub fn binomial_decompose(p: &Polynomial) -> Result<BinomialDecomposition> {
    let coords = difference_coords(p);
    let mut coeffs = Vec::with_capacity(coords.len());
    for (i, c) in coords.into_iter().enumerate() {
        if !c.is_integer() {
            return Err(PolyError::NotIntegerValued {
                index: i.to_string(),
                value: c.to_string(),
            });
        }
        coeffs.push(c.to_integer());
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(BinomialDecomposition { coeffs })
}

/// Each n_p is an integer divisible by 2^⌊p/2⌋.
pub fn in_script_p(p: &Polynomial) -> bool {
    match binomial_decompose(p) {
        Ok(d) => d
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, n)| (n % (BigInt::one() << (i / 2))).is_zero()),
        Err(_) => false,
    }
}

/// P ∈ 𝒫 ⇔ P integer-valued, ΔP ∈ 𝒫 and ½Δ²P ∈ 𝒫; constants must be integers.
pub fn in_script_p_recursive(p: &Polynomial) -> bool {
    let mut memo = HashMap::new();
    recursive_member(p, &mut memo)
}

fn recursive_member(p: &Polynomial, memo: &mut HashMap<Polynomial, bool>) -> bool {
    if let Some(&b) = memo.get(p) {
        return b;
    }
    let ans = match p.degree() {
        None => true,
        Some(0) => p.coeffs[0].is_integer(),
        Some(d) => {
            let integer_valued = (0..=d as i64).all(|t| p.eval(&rat(t)).is_integer());
            integer_valued && {
                let dp = p.forward_difference();
                recursive_member(&dp, memo) && {
                    let half = dp.forward_difference().scale(&BigRational::new(1.into(), 2.into()));
                    recursive_member(&half, memo)
                }
            }
        }
    };
    memo.insert(p.clone(), ans);
    ans
}

/// Sparse polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPolynomial {
    pub fn new(nvars: usize) -> Self {
        MultiPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with_term(mut self, exps: Vec<u32>, c: BigRational) -> Result<Self> {
        if exps.len() != self.nvars {
            return Err(PolyError::Arity {
                expected: self.nvars,
                got: exps.len(),
            });
        }
        let e = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *e += c;
        self.terms.retain(|_, v| !v.is_zero());
        Ok(self)
    }

    /// ∏ P_i(t_i).
    pub fn product_of(factors: &[Polynomial]) -> Self {
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        terms.insert(vec![0; factors.len()], BigRational::one());
        for (i, f) in factors.iter().enumerate() {
            let mut next = BTreeMap::new();
            for (e, c) in &terms {
                for (k, fc) in f.coeffs.iter().enumerate() {
                    if fc.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[i] = k as u32;
                    *next.entry(e2).or_insert_with(BigRational::zero) += c * fc;
                }
            }
            terms = next;
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPolynomial {
            nvars: factors.len(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut terms: BTreeMap<Vec<u32>, BigRational> =
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        terms.retain(|_, v| !v.is_zero());
        MultiPolynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.nvars];
        for e in self.terms.keys() {
            for (i, x) in e.iter().enumerate() {
                d[i] = d[i].max(*x as usize);
            }
        }
        d
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (k, x)| acc * num_traits::pow(x.clone(), *k as usize))
            })
            .sum()
    }
}

/// n_p for each exponent vector p, by finite differences along every axis on
/// the grid ∏ {0..=deg_i}.
pub fn binomial_decompose_multi(p: &MultiPolynomial) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    let degs = p.degrees();
    let dims: Vec<usize> = degs.iter().map(|d| d + 1).collect();
    let total: usize = dims.iter().product();
    let unravel = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            out[i] = idx % dims[i];
            idx /= dims[i];
        }
        out
    };
    let mut grid: Vec<BigRational> = (0..total)
        .map(|i| {
            let pt: Vec<BigRational> = unravel(i).iter().map(|&x| rat(x as i64)).collect();
            p.eval(&pt)
        })
        .collect();
    let mut stride = 1usize;
    for axis in (0..dims.len()).rev() {
        let n = dims[axis];
        for base in 0..total {
            if !(base / stride).is_multiple_of(n) {
                continue;
            }
            // in-place forward differences along this axis: Δ^k at position k
            let mut col: Vec<BigRational> = (0..n).map(|k| grid[base + k * stride].clone()).collect();
            for k in 0..n {
                grid[base + k * stride] = col[0].clone();
                col = col.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
        }
        stride *= n;
    }
    let mut out = BTreeMap::new();
    for (i, v) in grid.into_iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let e: Vec<u32> = unravel(i).into_iter().map(|x| x as u32).collect();
        if !v.is_integer() {
            return Err(PolyError::NotIntegerValued {
                index: format!("{e:?}"),
                value: v.to_string(),
            });
        }
        out.insert(e, v.to_integer());
    }
    Ok(out)
}

/// 2^{⌊p₁/2⌋+…+⌊p_s/2⌋} divides every n_p.
pub fn in_script_p_multi(p: &MultiPolynomial) -> bool {
    match binomial_decompose_multi(p) {
        Ok(d) => d.iter().all(|(e, n)| {
            let k: u32 = e.iter().map(|x| x / 2).sum();
            (n % (BigInt::one() << k)).is_zero()
        }),
        Err(_) => false,
    }
}

/// Generators of 𝒫 modulo 𝒫 ∩ 8𝒜, in order: 1, t, t²−t, t³−t, P₄, P₅.
pub fn mod8_generators() -> [Polynomial; 6] {
    [
        Polynomial::from_ints(&[1]),
        Polynomial::t(),
        Polynomial::x2(),
        Polynomial::x3(),
        Polynomial::p4(),
        Polynomial::p5(),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod8Reduction {
    /// Coefficients over [`mod8_generators`], in canonical ranges
    /// (`0..8`, `0..8`, `0..4`, `0..4`, `0..2`, `0..2`).
    pub coords: [i64; 6],
    /// `P − Σ coords[i]·g_i`, which lies in 8𝒜.
    pub residual: Polynomial,
}

pub fn mod8_reduce(p: &Polynomial) -> Result<Mod8Reduction> {
    if !in_script_p(p) {
        return Err(PolyError::NotInP);
    }
    let d = binomial_decompose(p)?;
    let n = |i: usize| -> BigInt { d.coeffs.get(i).cloned().unwrap_or_default() };
    let m = |x: BigInt, k: i64| -> i64 { x.mod_floor(&BigInt::from(k)).to_i64().unwrap() };
    // generator images in the f-basis are triangular:
    // 1 = f0, t = f1, t²−t = 2f2, t³−t = 6f3 + 6f2, P₄ = 12f4, P₅ = 60f5
    let c5 = m(n(5) / 4, 2);
    let c4 = m(n(4) / 4, 2);
    let c3 = m(n(3) / 2 * 3, 4);
    let c2 = m((n(2) - BigInt::from(6 * c3)) / 2, 4);
    let c1 = m(n(1), 8);
    let c0 = m(n(0), 8);
    let coords = [c0, c1, c2, c3, c4, c5];
    let residual = mod8_generators()
        .iter()
        .zip(coords)
        .fold(p.clone(), |acc, (g, c)| acc.sub(&g.scale(&rat(c))));
    debug_assert!(binomial_decompose(&residual)
        .map(|r| r.coeffs.iter().all(|x: &BigInt| x.is_multiple_of(&BigInt::from(8))))
        .unwrap_or(false));
    Ok(Mod8Reduction { coords, residual })
}

/// True when every n_p of the polynomial is divisible by 8.
pub fn in_8a(p: &Polynomial) -> bool {
    binomial_decompose(p)
        .map(|d| d.coeffs.iter().all(|x: &BigInt| x.is_multiple_of(&BigInt::from(8))))
        .unwrap_or(false)
}

/// φ, φ₂ = φ²−φ, φ₃ = φ³−φ, φ₄ = ½φ(φ−1)(φ−2)(φ−3), φ₅ = φ₄(φ−4).
#[derive(Clone, Debug)]
pub struct StandardOperators {
    pub phi: ConstructibleFunction,
    pub phi2: ConstructibleFunction,
    pub phi3: ConstructibleFunction,
    pub phi4: ConstructibleFunction,
    pub phi5: ConstructibleFunction,
}

pub fn standard_operators(phi: &ConstructibleFunction) -> Result<StandardOperators> {
    if !phi.is_integer_valued() {
        return Err(PolyError::NotInteger);
    }
    let ap = |p: &Polynomial| phi.apply_polynomial(p).map_err(|_| PolyError::NotInteger);
    let ops = StandardOperators {
        phi: phi.clone(),
        phi2: ap(&Polynomial::x2())?,
        phi3: ap(&Polynomial::x3())?,
        phi4: ap(&Polynomial::p4())?,
        phi5: ap(&Polynomial::p5())?,
    };
    let div = |f: &ConstructibleFunction, k: u32| {
        f.values().iter().all(|v| {
            v.mod_pow2(k).map(|r| r.is_zero()).unwrap_or(false)
        })
    };
    if !div(&ops.phi2, 1) || !div(&ops.phi3, 1) {
        return Err(PolyError::Congruence("φ₂ ≡ φ₃ ≡ 0 (mod 2)"));
    }
    if !div(&ops.phi4, 2) || !div(&ops.phi5, 2) {
        return Err(PolyError::Congruence("φ₄ ≡ φ₅ ≡ 0 (mod 4)"));
    }
    Ok(ops)
}

/// Parities of (½P₂(t), ½P₃(t), ¼P₄(t), ¼P₅(t)): the contribution of one
/// attached disc with value `t` to (β, γ, δ/2, ε/2) at a point of its rim.
pub fn disc_parities(t: i64) -> [u8; 4] {
    let tt = BigInt::from(t);
    let v = |p: Polynomial, k: i64| -> u8 {
        let x = p.eval_int(&tt) / rat(k);
        debug_assert!(x.is_integer());
        (x.to_integer().mod_floor(&BigInt::from(2))).to_u8().unwrap()
    };
    [
        v(Polynomial::x2(), 2),
        v(Polynomial::x3(), 2),
        v(Polynomial::p4(), 4),
        v(Polynomial::p5(), 4),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse_coefficients(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(binomial_decompose(&p("0,0,1")).unwrap().coeffs, ints(&[0, 1, 2]));
        assert_eq!(
            binomial_decompose(&Polynomial::p4()).unwrap().coeffs,
            ints(&[0, 0, 0, 0, 12])
        );
        assert!(binomial_decompose(&p("0,1/2")).is_err());
        assert!(binomial_decompose(&p("0,1/3")).is_err());
        let half = p("0,0,-1/2,0,1/2");
        let d = binomial_decompose(&half).unwrap();
        assert_eq!(d.coeffs, ints(&[0, 0, 6, 18, 12]));
        assert_eq!(d.reconstruct(), half);
    }

    #[test]
    fn membership_examples() {
        let half = p("0,0,-1/2,0,1/2");
        assert!(in_script_p(&half) && in_script_p_recursive(&half));
        let f2 = Polynomial::binomial(2);
        assert!(!in_script_p(&f2) && !in_script_p_recursive(&f2));
        assert!(in_script_p(&Polynomial::x3()) && in_script_p_recursive(&Polynomial::x3()));
        assert!(in_script_p(&p("3,-7,2,5,0,1")));
        assert!(!in_script_p(&p("0,1/2")));
        assert!(in_script_p(&Polynomial::zero()) && in_script_p_recursive(&Polynomial::zero()));
    }

    #[test]
    fn multivariate() {
        let t1t2 = MultiPolynomial::product_of(&[Polynomial::t(), Polynomial::t()]);
        assert!(in_script_p_multi(&t1t2));
        let f22 = MultiPolynomial::product_of(&[Polynomial::binomial(2), Polynomial::binomial(2)]);
        let d = binomial_decompose_multi(&f22).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&vec![2, 2]], BigInt::from(1));
        assert!(!in_script_p_multi(&f22));
        assert!(in_script_p_multi(&f22.scale(&rat(4))));
        assert!(!in_script_p_multi(&f22.scale(&rat(2))));
    }

    #[test]
    fn mod8() {
        let half = p("0,0,-1/2,0,1/2");
        let r = mod8_reduce(&half).unwrap();
        assert_eq!(r.coords, [0, 0, 2, 3, 1, 0]);
        assert!(in_8a(&r.residual));
        assert_eq!(mod8_reduce(&Polynomial::t()).unwrap().coords, [0, 1, 0, 0, 0, 0]);
        let e = Polynomial::binomial(5).scale(&rat(8));
        let r = mod8_reduce(&e).unwrap();
        assert_eq!(r.coords, [0; 6]);
        assert!(!r.residual.is_zero() && in_8a(&r.residual));
        assert_eq!(mod8_reduce(&Polynomial::binomial(2)), Err(PolyError::NotInP));
        // ½(t⁴−t²) = P₄ + 3t(t−1)²
        let t = Polynomial::t();
        let tm1 = Polynomial::from_ints(&[-1, 1]);
        let rhs = Polynomial::p4().add(&t.mul(&tm1).mul(&tm1).scale(&rat(3)));
        assert_eq!(half, rhs);
    }

    #[test]
    fn disc_table() {
        let want = [[0, 0, 0, 0], [1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]];
        for t in 1..=5 {
            assert_eq!(disc_parities(t), want[t as usize - 1], "t = {t}");
        }
    }

    #[test]
    fn translation_and_difference() {
        let q = p("1,2,3");
        assert_eq!(q.translate(), p("6,8,3"));
        assert_eq!(q.forward_difference(), p("5,6"));
    }
}
