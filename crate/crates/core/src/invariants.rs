//! Local obstructions for a link `L` of dimension ≤ 3: euler conditions, the
//! four depth-2 integrals, and the mod-2 characteristic numbers
//! `a(m,n) = Σ_p Φ(m,n)(p)` indexed by bitmasks.
//!
//! Bit order of a mask (little-endian by bit index):
//!
//! | bits  | quantity at a vertex |
//! |-------|----------------------|
//! | 0–2   | φ, β, γ |
//! | 3–6   | Ω̃ of φβ, φγ, βγ, φβγ |
//! | 7–10  | Ω̃ of β₂, γ₂, β₃, γ₃ |
//! | 11–28 | Ω̃ of φβ₂, φγ₂, βφ₂, βγ₂, γφ₂, γβ₂, φβ₃, φγ₃, βφ₃, βγ₃, γφ₃, γβ₃, φβγ₂, φγβ₂, βγφ₂, φβγ₃, φγβ₃, βγφ₃ |
//! | 29–42 | Ω̃ of φδ, βδ, γδ, φε, βε, γε, φβδ, φγδ, βγδ, φβε, φγε, βγε, φβγδ, φβγε |
//!
//! Here φ = Ω̃1_L, β = Λ̃φ₂, γ = Λ̃φ₃, δ = Λ̃φ₄, ε = Λ̃φ₅ and x₂ = x² − x,
//! x₃ = x³ − x. The base theory uses bits 0–28, the extended theory all 43.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::polyops::{standard_operators, Polynomial};
use crate::simplicial::Complex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("dimension {0} exceeds {1}")]
    Dimension(i32, i32),
    #[error("malformed index `{0}`: expected base:<hex>, extended:<hex> or chi")]
    MalformedIndex(String),
    #[error("mask {mask:#x} has bits outside the {mode} range")]
    MaskRange { mode: Mode, mask: u64 },
    #[error("mask {0:#x} selects no Ω̃ factor")]
    NoNBit(u64),
    #[error("base quantities are not integer-valued: {0}")]
    NotIntegral(String),
    #[error("euler conditions fail; depth-2 numbers are undefined")]
    NotEuler,
}

pub type Result<T> = std::result::Result<T, InvariantError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Base,
    Extended,
}

impl Mode {
    pub fn bits(self) -> u32 {
        match self {
            Mode::Base => 29,
            Mode::Extended => 43,
        }
    }

    pub fn full_mask(self) -> u64 {
        (1u64 << self.bits()) - 1
    }

    pub fn tag(self) -> &'static str {
        match self {
            Mode::Base => "base",
            Mode::Extended => "extended",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mode {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Mode::Base),
            "extended" => Ok(Mode::Extended),
            _ => Err(InvariantError::MalformedIndex(s.to_string())),
        }
    }
}

/// Bits 0–2 select the plain factors φ, β, γ.
pub const M_BITS: u64 = 0b111;

/// Base function appearing in a product term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Phi = 0,
    Beta = 1,
    Gamma = 2,
    Delta = 3,
    Epsilon = 4,
}

/// `(function, k)` means x for k = 1, x² − x for k = 2, x³ − x for k = 3.
pub type Term = (Base, u8);

use Base::{Beta as B, Delta as D, Epsilon as E, Gamma as G, Phi as F};

/// The 40 functions ψ whose Ω̃ occupy bits 3–42, in bit order.
pub const S_PRIME: [&[Term]; 40] = [
    &[(F, 1), (B, 1)],
    &[(F, 1), (G, 1)],
    &[(B, 1), (G, 1)],
    &[(F, 1), (B, 1), (G, 1)],
    &[(B, 2)],
    &[(G, 2)],
    &[(B, 3)],
    &[(G, 3)],
    &[(F, 1), (B, 2)],
    &[(F, 1), (G, 2)],
    &[(B, 1), (F, 2)],
    &[(B, 1), (G, 2)],
    &[(G, 1), (F, 2)],
    &[(G, 1), (B, 2)],
    &[(F, 1), (B, 3)],
    &[(F, 1), (G, 3)],
    &[(B, 1), (F, 3)],
    &[(B, 1), (G, 3)],
    &[(G, 1), (F, 3)],
    &[(G, 1), (B, 3)],
    &[(F, 1), (B, 1), (G, 2)],
    &[(F, 1), (G, 1), (B, 2)],
    &[(B, 1), (G, 1), (F, 2)],
    &[(F, 1), (B, 1), (G, 3)],
    &[(F, 1), (G, 1), (B, 3)],
    &[(B, 1), (G, 1), (F, 3)],
    &[(F, 1), (D, 1)],
    &[(B, 1), (D, 1)],
    &[(G, 1), (D, 1)],
    &[(F, 1), (E, 1)],
    &[(B, 1), (E, 1)],
    &[(G, 1), (E, 1)],
    &[(F, 1), (B, 1), (D, 1)],
    &[(F, 1), (G, 1), (D, 1)],
    &[(B, 1), (G, 1), (D, 1)],
    &[(F, 1), (B, 1), (E, 1)],
    &[(F, 1), (G, 1), (E, 1)],
    &[(B, 1), (G, 1), (E, 1)],
    &[(F, 1), (B, 1), (G, 1), (D, 1)],
    &[(F, 1), (B, 1), (G, 1), (E, 1)],
];

/// Sizes of the families S₂, S₃, S₄, S₅ inside [`S_PRIME`].
pub const FAMILY_SIZES: [usize; 4] = [4, 4, 18, 14];

/// Display names of the 43 quantities.
pub fn quantity_name(bit: u32) -> String {
    const SYM: [&str; 5] = ["φ", "β", "γ", "δ", "ε"];
    const SUB: [&str; 4] = ["", "", "₂", "₃"];
    if bit < 3 {
        return SYM[bit as usize].to_string();
    }
    let body: String = S_PRIME[bit as usize - 3]
        .iter()
        .map(|(b, k)| format!("{}{}", SYM[*b as usize], SUB[*k as usize]))
        .collect();
    format!("Ω̃({body})")
}

/// A characteristic number: the parity of Σ_p over vertices of the product of
/// the quantities selected by `mask`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex {
    mode: Mode,
    mask: u64,
}

impl CharIndex {
    pub fn new(mode: Mode, mask: u64) -> Result<Self> {
        if mask & !mode.full_mask() != 0 {
            return Err(InvariantError::MaskRange { mode, mask });
        }
        if mask & !M_BITS == 0 {
            return Err(InvariantError::NoNBit(mask));
        }
        Ok(CharIndex { mode, mask })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn m_part(&self) -> u64 {
        self.mask & M_BITS
    }

    pub fn n_part(&self) -> u64 {
        self.mask & !M_BITS
    }

    /// False for a single Ω̃ factor with no plain factor: those either repeat
    /// a depth-2 integral or are automatically even.
    pub fn is_novel(&self) -> bool {
        !(self.m_part() == 0 && self.n_part().count_ones() == 1)
    }

    /// One of the four depth-2 integrals.
    pub fn is_depth_two(&self) -> bool {
        self.m_part() == 0 && self.n_part().count_ones() == 1 && self.mask < 1 << 7
    }

    /// Always even: a single Ω̃ψ with ψ even-valued sums to ∫ψ.
    pub fn is_trivial(&self) -> bool {
        !self.is_novel() && !self.is_depth_two()
    }

    /// Single-factor index of one of the four depth-2 integrals ∫φβ, ∫φγ,
    /// ∫βγ, ∫φβγ (`which` in 0..4).
    pub fn depth_two(mode: Mode, which: usize) -> CharIndex {
        CharIndex {
            mode,
            mask: 1 << (3 + which),
        }
    }

    pub fn factor_names(&self) -> Vec<String> {
        (0..43)
            .filter(|b| self.mask >> b & 1 == 1)
            .map(quantity_name)
            .collect()
    }
}

impl Serialize for CharIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for CharIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.mode, self.mask)
    }
}

impl FromStr for CharIndex {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self> {
        let (m, hex) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| InvariantError::MalformedIndex(s.to_string()))?;
        let mode: Mode = m.parse().map_err(|_| InvariantError::MalformedIndex(s.to_string()))?;
        let hex = hex.trim_start_matches("0x");
        let mask = u64::from_str_radix(hex, 16)
            .map_err(|_| InvariantError::MalformedIndex(s.to_string()))?;
        CharIndex::new(mode, mask)
    }
}

/// Either a characteristic number or the euler characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    Chi,
    Index(CharIndex),
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Chi => f.write_str("chi"),
            Invariant::Index(i) => i.fmt(f),
        }
    }
}

impl FromStr for Invariant {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "chi" {
            Ok(Invariant::Chi)
        } else {
            s.parse().map(Invariant::Index)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCounts {
    pub s_prime: usize,
    pub family_sizes: [usize; 4],
    /// Indices with some Ω̃ factor, minus the single-factor ones.
    pub novel: u64,
    /// `novel` plus χ and the four depth-2 integrals.
    pub total: u64,
}

pub fn generator_counts(mode: Mode) -> GeneratorCounts {
    let s_prime = (mode.bits() - 3) as usize;
    let all_n = (1u64 << s_prime) - 1;
    let novel = (1u64 << 3) * all_n - s_prime as u64;
    let family_sizes = match mode {
        Mode::Base => [FAMILY_SIZES[0], FAMILY_SIZES[1], FAMILY_SIZES[2], 0],
        Mode::Extended => FAMILY_SIZES,
    };
    GeneratorCounts {
        s_prime,
        family_sizes,
        novel,
        total: novel + 5,
    }
}

/// φ, β, γ, δ, ε on a link, the 43 vertex quantities and their odd masks.
#[derive(Clone, Debug)]
pub struct BaseProfile {
    pub complex: Arc<Complex>,
    pub phi: ConstructibleFunction,
    pub beta: ConstructibleFunction,
    pub gamma: ConstructibleFunction,
    pub delta: ConstructibleFunction,
    pub epsilon: ConstructibleFunction,
    /// Λ̃φ vanishes identically.
    pub half_link_phi_zero: bool,
    /// Λ̃(φ²) = Λ̃(φ₂) and Λ̃(φ³) = Λ̃(φ₃).
    pub beta_forms_agree: bool,
    /// Per-vertex values of the 43 quantities.
    pub quantities: Vec<Vec<Dyadic>>,
}

fn functions_integral(fs: &[&ConstructibleFunction]) -> bool {
    fs.iter().all(|f| f.is_integer_valued())
}

impl BaseProfile {
    pub fn new(complex: Arc<Complex>) -> Result<Self> {
        if complex.dim() > 3 {
            return Err(InvariantError::Dimension(complex.dim(), 3));
        }
        let one = ConstructibleFunction::one(complex.clone());
        let phi = one.co_half_link();
        let sq = |p: &Polynomial| phi.apply_polynomial(p).expect("integer coefficients");
        let (phi2, phi3, phi4, phi5) = if phi.is_integer_valued() {
            let ops = standard_operators(&phi).expect("φ is integer-valued");
            (ops.phi2, ops.phi3, ops.phi4, ops.phi5)
        } else {
            // half-integer φ: only the integer-coefficient forms are meaningful
            let p4 = phi.map(|v| {
                Polynomial::p4().eval_dyadic(v).expect("dyadic input gives dyadic output")
            });
            let p5 = phi.map(|v| Polynomial::p5().eval_dyadic(v).expect("dyadic"));
            (sq(&Polynomial::x2()), sq(&Polynomial::x3()), p4, p5)
        };
        let beta = phi2.half_link();
        let gamma = phi3.half_link();
        let delta = phi4.half_link();
        let epsilon = phi5.half_link();
        let half_link_phi_zero = phi.half_link().values().iter().all(Dyadic::is_zero);
        let beta_sq = sq(&Polynomial::from_ints(&[0, 0, 1])).half_link();
        let gamma_cu = sq(&Polynomial::from_ints(&[0, 0, 0, 1])).half_link();
        let beta_forms_agree = beta_sq == beta && gamma_cu == gamma;
        let quantities = vertex_quantities(&complex, [&phi, &beta, &gamma, &delta, &epsilon]);
        Ok(BaseProfile {
            complex,
            phi,
            beta,
            gamma,
            delta,
            epsilon,
            half_link_phi_zero,
            beta_forms_agree,
            quantities,
        })
    }

    /// φ, β, γ, δ, ε are integer-valued.
    pub fn base_integral(&self) -> bool {
        functions_integral(&[&self.phi, &self.beta, &self.gamma, &self.delta, &self.epsilon])
    }

    /// All 43 vertex quantities are integers.
    pub fn quantities_integral(&self) -> bool {
        self.quantities.iter().all(|q| q.iter().all(Dyadic::is_integer))
    }

    /// Odd-bit mask per vertex, restricted to the mode's bits.
    pub fn odd_masks(&self, mode: Mode) -> Result<Vec<u64>> {
        if !self.quantities_integral() {
            return Err(InvariantError::NotIntegral(
                "some Ω̃ψ is not an integer at a vertex".into(),
            ));
        }
        Ok(masks_from_quantities(&self.quantities, mode))
    }
}

/// The 43 vertex quantities of arbitrary (φ, β, γ, δ, ε).
pub fn vertex_quantities(complex: &Complex, f: [&ConstructibleFunction; 5]) -> Vec<Vec<Dyadic>> {
    let one_vertex = |p: usize| -> Vec<Dyadic> {
        let vals = |i: usize| -> [Dyadic; 5] { std::array::from_fn(|k| f[k].value(i).clone()) };
        let at_p = vals(p);
        let mut out: Vec<Dyadic> = Vec::with_capacity(43);
        out.extend(at_p[..3].iter().cloned());
        let psi_p = psi_values(&at_p);
        let mut acc: Vec<Dyadic> = vec![Dyadic::zero(); 40];
        for &t in complex.cofaces(p) {
            let t = t as usize;
            let v = vals(t);
            if v[1..].iter().all(Dyadic::is_zero) {
                continue;
            }
            let psi = psi_values(&v);
            let even = complex.simplex_dim(t).is_multiple_of(2);
            for (a, x) in acc.iter_mut().zip(&psi) {
                if even {
                    *a += x;
                } else {
                    *a -= x;
                }
            }
        }
        // Ω̃ψ(p) = ψ(p) + ½ Σ_{τ ⊋ p} (−1)^{dim τ} ψ(τ)
        out.extend(psi_p.iter().zip(&acc).map(|(x, a)| x + &a.halve()));
        out
    };
    crate::par::map(complex.n_vertices(), 256, one_vertex)
}

fn psi_values(v: &[Dyadic; 5]) -> Vec<Dyadic> {
    let pw = |x: &Dyadic, k: u8| -> Dyadic {
        match k {
            1 => x.clone(),
            2 => &(x * x) - x,
            _ => &(&(x * x) * x) - x,
        }
    };
    S_PRIME
        .iter()
        .map(|terms| {
            let mut acc = Dyadic::one();
            for &(b, k) in terms.iter() {
                let f = pw(&v[b as usize], k);
                if f.is_zero() {
                    return Dyadic::zero();
                }
                acc = &acc * &f;
            }
            acc
        })
        .collect()
}

pub fn masks_from_quantities(q: &[Vec<Dyadic>], mode: Mode) -> Vec<u64> {
    q.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| v.is_odd())
                .fold(0u64, |m, (i, _)| m | 1 << i)
                & mode.full_mask()
        })
        .collect()
}

/// Masks that occur an odd number of times and carry at least one Ω̃ bit,
/// sorted. `a(S)` is the parity of the number of these masks containing `S`.
pub fn reduce_masks(masks: &[u64]) -> Vec<u64> {
    let mut count: HashMap<u64, u32> = HashMap::new();
    for &m in masks {
        if m & !M_BITS != 0 {
            *count.entry(m).or_default() += 1;
        }
    }
    let mut out: Vec<u64> = count
        .into_iter()
        .filter(|(_, c)| c % 2 == 1)
        .map(|(m, _)| m)
        .collect();
    out.sort_unstable();
    out
}

/// a(idx) from the reduced mask set.
pub fn char_number_from_masks(masks: &[u64], mask: u64) -> bool {
    masks.iter().filter(|&&m| m & mask == mask).count() % 2 == 1
}

/// Number of masks `S` (with at least one Ω̃ bit) of odd parity, and their
/// explicit list when it does not exceed `cap`.
pub fn nonzero_masks(masks: &[u64], cap: u64) -> (u64, Option<Vec<u64>>) {
    let mut memo = HashMap::new();
    let union = masks.iter().fold(0u64, |a, m| a | m);
    let all = count_odd(masks, union, &mut memo);
    // subtract subsets of the plain bits alone, which are not indices
    let plain: u64 = (0..8u64)
        .filter(|s| s & union == *s && char_number_from_masks(masks, *s))
        .count() as u64;
    let total = all - plain;
    if total > cap {
        return (total, None);
    }
    let mut out = Vec::with_capacity(total as usize);
    enumerate_odd(masks, union, 0, &mut out);
    out.retain(|s| s & !M_BITS != 0);
    out.sort_unstable();
    debug_assert_eq!(out.len() as u64, total);
    (total, Some(out))
}

fn cancel_pairs(family: &mut Vec<u64>) {
    family.sort_unstable();
    let mut out: Vec<u64> = Vec::with_capacity(family.len());
    for &m in family.iter() {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    *family = out;
}

/// #{S ⊆ free : parity #{M ∈ family : S ⊆ M} odd}, where `family` already
/// agrees on the bits outside `free`.
fn count_odd(family: &[u64], free: u64, memo: &mut HashMap<(Vec<u64>, u64), u64>) -> u64 {
    let mut fam: Vec<u64> = family.iter().map(|m| m & free).collect();
    cancel_pairs(&mut fam);
    match fam.len() {
        0 => return 0,
        1 => return 1u64 << fam[0].count_ones(),
        _ => {}
    }
    let union = fam.iter().fold(0u64, |a, m| a | m);
    let free = free & union;
    let key = (fam.clone(), free);
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    // a bit in every mask never changes parity: it doubles the count
    let common = fam.iter().fold(free, |a, m| a & m);
    let c = if common != 0 {
        let b = common.trailing_zeros();
        2 * count_odd(&fam, free & !(1 << b), memo)
    } else {
        let b = free.trailing_zeros();
        let bit = 1u64 << b;
        let without = count_odd(&fam, free & !bit, memo);
        let with: Vec<u64> = fam.iter().copied().filter(|m| m & bit != 0).collect();
        without + count_odd(&with, free & !bit, memo)
    };
    memo.insert(key, c);
    c
}

fn enumerate_odd(family: &[u64], free: u64, chosen: u64, out: &mut Vec<u64>) {
    let mut fam: Vec<u64> = family.iter().map(|m| m & free).collect();
    cancel_pairs(&mut fam);
    match fam.len() {
        0 => return,
        1 => {
            let m = fam[0];
            let mut sub = m;
            loop {
                out.push(chosen | sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
            return;
        }
        _ => {}
    }
    let union = fam.iter().fold(0u64, |a, m| a | m);
    let free = free & union;
    let b = free.trailing_zeros();
    let bit = 1u64 << b;
    enumerate_odd(&fam, free & !bit, chosen, out);
    let with: Vec<u64> = fam.iter().copied().filter(|m| m & bit != 0).collect();
    enumerate_odd(&with, free & !bit, chosen | bit, out);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerConditions {
    pub one: bool,
    pub phi_beta: bool,
    pub phi_gamma: bool,
    pub beta_gamma: bool,
    pub phi_beta_gamma: bool,
}

impl EulerConditions {
    pub fn all(&self) -> bool {
        self.one && self.phi_beta && self.phi_gamma && self.beta_gamma && self.phi_beta_gamma
    }

    pub fn as_array(&self) -> [bool; 5] {
        [
            self.one,
            self.phi_beta,
            self.phi_gamma,
            self.beta_gamma,
            self.phi_beta_gamma,
        ]
    }
}

/// The four products φβ, φγ, βγ, φβγ.
pub fn depth_two_products(p: &BaseProfile) -> [ConstructibleFunction; 4] {
    let m = |a: &ConstructibleFunction, b: &ConstructibleFunction| a.mul(b).expect("same complex");
    let fb = m(&p.phi, &p.beta);
    let fg = m(&p.phi, &p.gamma);
    let bg = m(&p.beta, &p.gamma);
    let fbg = m(&fb, &p.gamma);
    [fb, fg, bg, fbg]
}

fn is_euler_or_false(f: &ConstructibleFunction) -> bool {
    f.is_euler().unwrap_or(false)
}

/// L euler, and φβ, φγ, βγ, φβγ euler. A non-integer function is not euler.
pub fn euler_conditions(p: &BaseProfile) -> EulerConditions {
    let one = ConstructibleFunction::one(p.complex.clone());
    let [fb, fg, bg, fbg] = depth_two_products(p);
    EulerConditions {
        one: is_euler_or_false(&one),
        phi_beta: is_euler_or_false(&fb),
        phi_gamma: is_euler_or_false(&fg),
        beta_gamma: is_euler_or_false(&bg),
        phi_beta_gamma: is_euler_or_false(&fbg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DepthTwo {
    pub chi_odd: bool,
    /// Parities of ∫φβ, ∫φγ, ∫βγ, ∫φβγ.
    pub integrals_odd: [bool; 4],
    /// Parity of ∫φ dχ, equal to that of χ.
    pub phi_integral_odd: bool,
}

pub fn ak_numbers(p: &BaseProfile) -> Result<DepthTwo> {
    if !euler_conditions(p).all() {
        return Err(InvariantError::NotEuler);
    }
    let products = depth_two_products(p);
    let odd = |f: &ConstructibleFunction| f.euler_integral().is_odd();
    Ok(DepthTwo {
        chi_odd: p.complex.euler_characteristic() % 2 != 0,
        integrals_odd: std::array::from_fn(|i| odd(&products[i])),
        phi_integral_odd: odd(&p.phi),
    })
}

pub fn char_number(p: &BaseProfile, idx: CharIndex) -> Result<bool> {
    let masks = p.odd_masks(idx.mode())?;
    Ok(masks.iter().filter(|&&m| m & idx.mask() == idx.mask()).count() % 2 == 1)
}

/// a(idx) as ∫Φ dχ with Φ assembled from whole functions.
pub fn char_number_by_integration(p: &BaseProfile, idx: CharIndex) -> Result<bool> {
    if !p.base_integral() {
        return Err(InvariantError::NotIntegral("φ, β, γ, δ, ε".into()));
    }
    let fs = [&p.phi, &p.beta, &p.gamma, &p.delta, &p.epsilon];
    let mut prod = ConstructibleFunction::one(p.complex.clone());
    for (b, f) in fs.iter().take(3).enumerate() {
        if idx.mask() >> b & 1 == 1 {
            prod = prod.mul(f).expect("same complex");
        }
    }
    for (j, terms) in S_PRIME.iter().enumerate() {
        if idx.mask() >> (j + 3) & 1 == 0 {
            continue;
        }
        let mut psi = ConstructibleFunction::one(p.complex.clone());
        for &(b, k) in terms.iter() {
            let f = fs[b as usize];
            let g = match k {
                1 => f.clone(),
                2 => f.apply_polynomial(&Polynomial::x2()).expect("integer"),
                _ => f.apply_polynomial(&Polynomial::x3()).expect("integer"),
            };
            psi = psi.mul(&g).expect("same complex");
        }
        prod = prod.mul(&psi.co_half_link()).expect("same complex");
    }
    let total = prod.euler_integral();
    total
        .to_integer()
        .map(|n| n.bit(0))
        .ok_or_else(|| InvariantError::NotIntegral(format!("∫Φ = {total}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonzeroSet {
    pub mode: Mode,
    /// Distinct per-vertex odd masks of odd multiplicity; a(S) is the parity of
    /// how many contain S.
    pub masks: Vec<u64>,
    pub count: u64,
    pub novel_count: u64,
    pub cap: u64,
    /// Every nonzero index, when `count ≤ cap`.
    pub indices: Option<Vec<CharIndex>>,
}

pub const DEFAULT_CAP: u64 = 1 << 20;

pub fn nonzero_char_numbers(p: &BaseProfile, mode: Mode, cap: u64) -> Result<NonzeroSet> {
    let masks = reduce_masks(&p.odd_masks(mode)?);
    Ok(nonzero_from_masks(masks, mode, cap))
}

pub fn nonzero_from_masks(masks: Vec<u64>, mode: Mode, cap: u64) -> NonzeroSet {
    let (count, list) = nonzero_masks(&masks, cap);
    // single-factor masks with no plain bit are the non-novel indices
    let non_novel = (3..mode.bits())
        .filter(|b| char_number_from_masks(&masks, 1 << b))
        .count() as u64;
    let indices = list.map(|l| {
        l.into_iter()
            .map(|m| CharIndex::new(mode, m).expect("nonzero list holds valid masks"))
            .collect()
    });
    NonzeroSet {
        mode,
        masks,
        count,
        novel_count: count - non_novel,
        cap,
        indices,
    }
}

/// Complete battery for a link of dimension ≤ 3.
#[derive(Clone, Debug, Serialize)]
pub struct LinkReport {
    pub mode: Mode,
    pub dim: i32,
    pub n_vertices: usize,
    pub n_simplices: usize,
    pub euler_characteristic: i64,
    pub euler: EulerConditions,
    pub half_link_phi_zero: bool,
    pub base_integral: bool,
    pub depth_two: Option<DepthTwo>,
    pub nonzero: Option<NonzeroSet>,
    pub passes: bool,
}

pub fn link_report(complex: Arc<Complex>, mode: Mode, cap: u64) -> Result<LinkReport> {
    let p = BaseProfile::new(complex.clone())?;
    Ok(link_report_from_profile(&p, mode, cap))
}

pub fn link_report_from_profile(p: &BaseProfile, mode: Mode, cap: u64) -> LinkReport {
    let euler = euler_conditions(p);
    let depth_two = ak_numbers(p).ok();
    let nonzero = if euler.all() {
        nonzero_char_numbers(p, mode, cap).ok()
    } else {
        None
    };
    let passes = euler.all()
        && depth_two.is_some_and(|d| !d.chi_odd && !d.integrals_odd.iter().any(|x| *x))
        && nonzero.as_ref().is_some_and(|n| n.count == 0);
    LinkReport {
        mode,
        dim: p.complex.dim(),
        n_vertices: p.complex.n_vertices(),
        n_simplices: p.complex.len(),
        euler_characteristic: p.complex.euler_characteristic(),
        euler,
        half_link_phi_zero: p.half_link_phi_zero,
        base_integral: p.base_integral(),
        depth_two,
        nonzero,
        passes,
    }
}

/// Verdict of one point class (open simplex) of a 4-dimensional space.
#[derive(Clone, Debug, Serialize)]
pub struct PointVerdict {
    pub simplex: Vec<u32>,
    pub base: LinkReport,
    pub extended_passes: bool,
    pub extended_nonzero_count: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceReport {
    pub dim: i32,
    /// Verdicts of X itself treated as a link (dim ≤ 3).
    pub direct: Option<EulerConditions>,
    /// Failing points of a 4-dimensional space.
    pub failures: Vec<PointVerdict>,
    pub points_checked: usize,
    pub passes: bool,
}

pub fn check_space(x: &Complex, cap: u64) -> Result<SpaceReport> {
    let d = x.dim();
    if d > 4 {
        return Err(InvariantError::Dimension(d, 4));
    }
    if d <= 3 {
        let p = BaseProfile::new(Arc::new(x.clone()))?;
        let e = euler_conditions(&p);
        return Ok(SpaceReport {
            dim: d,
            direct: Some(e),
            failures: Vec::new(),
            points_checked: 0,
            passes: e.all(),
        });
    }
    let verdicts: Vec<PointVerdict> = crate::par::map(x.len(), 2, |i| point_verdict(x, i, cap))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let points_checked = verdicts.len();
    let failures: Vec<PointVerdict> = verdicts
        .into_iter()
        .filter(|v| !v.base.passes || !v.extended_passes)
        .collect();
    Ok(SpaceReport {
        dim: d,
        direct: None,
        passes: failures.is_empty(),
        failures,
        points_checked,
    })
}

fn point_verdict(x: &Complex, i: usize, cap: u64) -> Result<PointVerdict> {
    let s = x.simplex(i);
    let link = x.geometric_link(s).expect("simplex of x");
    let p = BaseProfile::new(Arc::new(link.complex))?;
    let base = link_report_from_profile(&p, Mode::Base, cap);
    let ext = link_report_from_profile(&p, Mode::Extended, cap);
    Ok(PointVerdict {
        simplex: s.vertices().to_vec(),
        extended_passes: ext.passes,
        extended_nonzero_count: ext.nonzero.map(|n| n.count),
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{build_complex, disjoint_union, wedge};

    fn sphere(d: u32) -> Complex {
        let n = d + 2;
        let ms: Vec<Vec<u32>> = (0..n)
            .map(|skip| (0..n).filter(|&v| v != skip).collect())
            .collect();
        build_complex(&ms).unwrap()
    }

    #[test]
    fn counts() {
        let b = generator_counts(Mode::Base);
        assert_eq!((b.s_prime, b.novel, b.total), (26, (1 << 29) - 34, (1 << 29) - 29));
        let e = generator_counts(Mode::Extended);
        assert_eq!((e.s_prime, e.novel, e.total), (40, (1 << 43) - 48, (1 << 43) - 43));
        assert_eq!(FAMILY_SIZES, [4, 4, 18, 14]);
    }

    #[test]
    fn names() {
        assert_eq!(quantity_name(0), "φ");
        assert_eq!(quantity_name(3), "Ω̃(φβ)");
        assert_eq!(quantity_name(7), "Ω̃(β₂)");
        assert_eq!(quantity_name(13), "Ω̃(βφ₂)");
        assert_eq!(quantity_name(42), "Ω̃(φβγε)");
    }

    #[test]
    fn index_parsing() {
        let i: CharIndex = "base:82".parse().unwrap();
        assert_eq!(i.mask(), 0x82);
        assert_eq!(i.to_string(), "base:82");
        assert!("base:3".parse::<CharIndex>().is_err());
        assert!("base:40000000".parse::<CharIndex>().is_err());
        assert!("extended:40000000000".parse::<CharIndex>().is_ok());
        assert!("nope".parse::<CharIndex>().is_err());
        assert_eq!("chi".parse::<Invariant>().unwrap(), Invariant::Chi);
        assert!(!CharIndex::new(Mode::Base, 1 << 8).unwrap().is_novel());
        assert!(CharIndex::new(Mode::Base, 1 << 8 | 1).unwrap().is_novel());
    }

    #[test]
    fn wedge_of_spheres() {
        let s3 = sphere(3);
        let w = Arc::new(wedge(&s3, 0, &s3, 0).unwrap().complex);
        let p = BaseProfile::new(w.clone()).unwrap();
        for f in [&p.beta, &p.gamma, &p.delta, &p.epsilon] {
            assert!(f.values().iter().all(Dyadic::is_zero));
        }
        assert_eq!(p.quantities[0][0], Dyadic::from(-1));
        assert!(p.quantities.iter().skip(1).all(|q| q.iter().all(Dyadic::is_zero)));
        let e = euler_conditions(&p);
        assert!(e.all());
        let d2 = ak_numbers(&p).unwrap();
        assert!(d2.chi_odd && d2.integrals_odd == [false; 4]);
        let r = link_report(w, Mode::Extended, DEFAULT_CAP).unwrap();
        assert_eq!(r.nonzero.unwrap().count, 0);
        assert!(!r.passes);
    }

    #[test]
    fn sphere_passes() {
        let r = link_report(Arc::new(sphere(3)), Mode::Extended, DEFAULT_CAP).unwrap();
        assert!(r.passes);
        let p = BaseProfile::new(Arc::new(sphere(3))).unwrap();
        assert!(p.phi.values().iter().all(Dyadic::is_zero));
    }

    #[test]
    fn interval_is_not_euler() {
        let e = Arc::new(build_complex(&[vec![0, 1]]).unwrap());
        let p = BaseProfile::new(e).unwrap();
        assert!(!euler_conditions(&p).one);
        assert!(ak_numbers(&p).is_err());
    }

    #[test]
    fn surfaces_pass_euler_conditions() {
        let s2 = Arc::new(sphere(2));
        let p = BaseProfile::new(s2).unwrap();
        assert!(euler_conditions(&p).all());
    }

    #[test]
    fn doubling_kills_everything() {
        let s3 = sphere(3);
        let w = wedge(&s3, 0, &s3, 0).unwrap().complex;
        let dd = Arc::new(disjoint_union(&w, &w).complex);
        let d2 = ak_numbers(&BaseProfile::new(dd).unwrap()).unwrap();
        assert!(!d2.chi_odd);
    }

    fn brute_nonzero(masks: &[u64], bits: u32) -> Vec<u64> {
        (0..1u64 << bits)
            .filter(|s| s & !M_BITS != 0 && char_number_from_masks(masks, *s))
            .collect()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cases: Vec<Vec<u64>> = vec![
            vec![],
            vec![0b1000],
            vec![0b1111_1111],
            vec![0b1011_0110, 0b0111_1001, 0b1100_1010],
            vec![0b1111_0000, 0b1111_0001, 0b0001_1111, 0b1010_1010, 0b0101_0101],
        ];
        for masks in cases {
            let reduced = reduce_masks(&masks);
            let (count, list) = nonzero_masks(&reduced, 1 << 20);
            let want = brute_nonzero(&reduced, 8);
            assert_eq!(count, want.len() as u64, "{masks:?}");
            assert_eq!(list.unwrap(), want);
        }
    }

    #[test]
    fn huge_single_mask_is_counted_not_listed() {
        let m = Mode::Extended.full_mask();
        let (count, list) = nonzero_masks(&[m], 1 << 20);
        assert_eq!(count, (1u64 << 43) - 8);
        assert!(list.is_none());
    }
}
