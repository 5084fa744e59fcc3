//! Decorated curves: 1-dimensional strata carrying (α, β, γ, δ, ε), built by
//! wedging elementary blocks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::invariants::{nonzero_masks, reduce_masks, Base, CharIndex, Term, S_PRIME};
use crate::simplicial::{build_complex, Complex};

use super::{Result, WitnessError};

pub const V_COUNT: usize = 45;

const V1: [&[Term]; 3] = [&[(Base::Phi, 1)], &[(Base::Beta, 1)], &[(Base::Gamma, 1)]];
const V3: [&[Term]; 6] = [
    &[(Base::Phi, 2)],
    &[(Base::Beta, 2)],
    &[(Base::Gamma, 2)],
    &[(Base::Phi, 3)],
    &[(Base::Beta, 3)],
    &[(Base::Gamma, 3)],
];

/// One of the 45 vertex expressions, numbered in their linear order:
/// V₁ = 0..3, V₂ = 3..7, V₃ = 7..13, V₄ = 13..31, V₅ = 31..45.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VExpr(u8);

impl VExpr {
    pub fn new(i: usize) -> Option<VExpr> {
        (i < V_COUNT).then_some(VExpr(i as u8))
    }

    pub fn all() -> impl Iterator<Item = VExpr> {
        (0..V_COUNT as u8).map(VExpr)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Factors of the product; V₁ expressions are read directly, all others
    /// through Ω̃.
    pub fn terms(self) -> &'static [Term] {
        let i = self.index();
        match i {
            0..=2 => V1[i],
            3..=6 => S_PRIME[i - 3],
            7..=12 => V3[i - 7],
            _ => S_PRIME[i - 5],
        }
    }

    /// 1 through 5.
    pub fn family(self) -> usize {
        match self.index() {
            0..=2 => 1,
            3..=6 => 2,
            7..=12 => 3,
            13..=30 => 4,
            _ => 5,
        }
    }

    /// Position among the 43 profile bits; α₂ and α₃ have none.
    pub fn bit(self) -> Option<u32> {
        let i = self.index() as u32;
        match i {
            0..=6 => Some(i),
            7 | 10 => None,
            8 | 9 => Some(i - 1),
            11 | 12 => Some(i - 2),
            _ => Some(i - 2),
        }
    }

    pub fn from_bit(bit: u32) -> Option<VExpr> {
        let i = match bit {
            0..=6 => bit,
            7 | 8 => bit + 1,
            9..=42 => bit + 2,
            _ => return None,
        };
        VExpr::new(i as usize)
    }

    pub fn name(self) -> String {
        const SYM: [&str; 5] = ["α", "β", "γ", "δ", "ε"];
        const SUB: [&str; 4] = ["", "", "₂", "₃"];
        let body: String = self
            .terms()
            .iter()
            .map(|(b, k)| format!("{}{}", SYM[*b as usize], SUB[*k as usize]))
            .collect();
        if self.family() == 1 {
            body
        } else {
            format!("Ω̃({body})")
        }
    }
}

impl fmt::Display for VExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Profile mask (43 bits) to a set of expressions (45 bits).
pub fn mask_to_vset(mask: u64) -> u64 {
    (0..43)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| 1u64 << VExpr::from_bit(b).expect("bit below 43").index())
        .fold(0, |a, x| a | x)
}

/// Expression set to profile mask; α₂ and α₃ are dropped.
pub fn vset_to_mask(set: u64) -> u64 {
    VExpr::all()
        .filter(|v| set >> v.index() & 1 == 1)
        .filter_map(|v| v.bit())
        .fold(0, |a, b| a | 1 << b)
}

/// Elementary block tags. `A`, `B`, `C` are the one-function blocks for β,
/// β₂ and β₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    A,
    B,
    C,
    Expr(VExpr),
}

impl BlockKind {
    /// The expression the block makes nonzero.
    pub fn designated(self) -> VExpr {
        match self {
            BlockKind::A => VExpr(1),
            BlockKind::B => VExpr(8),
            BlockKind::C => VExpr(11),
            BlockKind::Expr(v) => v,
        }
    }

    /// The 45 blocks, one per expression.
    pub fn all() -> Vec<BlockKind> {
        VExpr::all().map(BlockKind::Expr).collect()
    }

    pub fn name(self) -> String {
        match self {
            BlockKind::A => "A".into(),
            BlockKind::B => "B".into(),
            BlockKind::C => "C".into(),
            BlockKind::Expr(v) => {
                let n = v.name();
                let inner = n.strip_prefix("Ω̃(").and_then(|s| s.strip_suffix(')'));
                format!("({})", inner.unwrap_or(&n))
            }
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for BlockKind {
    type Err = WitnessError;

    /// `A`, `B`, `C`, or a block name such as `(αβ₂)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "A" => return Ok(BlockKind::A),
            "B" => return Ok(BlockKind::B),
            "C" => return Ok(BlockKind::C),
            _ => {}
        }
        BlockKind::all()
            .into_iter()
            .find(|k| k.name() == t)
            .ok_or_else(|| WitnessError::UnknownBlock(s.to_string()))
    }
}

impl Serialize for BlockKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// A 1-stratum: an arc between two points (a loop when they agree) with
/// constant values of (α, β, γ, δ, ε).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveArc {
    pub ends: [u32; 2],
    pub values: [i64; 5],
}

/// Arc values of a block; point values follow from Ω̃ = 0.
fn block_arcs(v: VExpr) -> (u32, Vec<CurveArc>) {
    let terms = v.terms();
    let lin: Vec<usize> = terms
        .iter()
        .filter(|t| t.1 == 1 && (t.0 as usize) < 3)
        .map(|t| t.0 as usize)
        .collect();
    let power = terms.iter().find(|t| t.1 > 1).map(|t| (t.0 as usize, t.1));
    let extra = terms.iter().find(|t| (t.0 as usize) >= 3).map(|t| t.0 as usize);
    let val = |pairs: &[(usize, i64)]| {
        let mut a = [0i64; 5];
        for &(i, x) in pairs {
            a[i] = x;
        }
        a
    };
    let ones: Vec<(usize, i64)> = lin.iter().map(|&i| (i, 1)).collect();
    let between = |vals: Vec<[i64; 5]>| {
        let arcs = vals
            .into_iter()
            .map(|values| CurveArc { ends: [0, 1], values })
            .collect();
        (2, arcs)
    };
    match (power, extra) {
        (None, None) if lin.len() == 1 => between(vec![val(&ones); 2]),
        (None, None) => {
            // petals x, y(, z) and one petal carrying all of them
            let mut petals: Vec<[i64; 5]> = lin.iter().map(|&i| val(&[(i, 1)])).collect();
            petals.push(val(&ones));
            let arcs = petals
                .into_iter()
                .map(|values| CurveArc { ends: [0, 0], values })
                .collect();
            (1, arcs)
        }
        (Some((z, k)), None) => {
            let (a, b) = if k == 2 { (1, -1) } else { (2, 0) };
            let with = |x: i64| {
                let mut p = ones.clone();
                p.push((z, x));
                val(&p)
            };
            between(vec![with(a), with(b)])
        }
        (None, Some(d)) => {
            let mut mid = ones.clone();
            mid.push((d, 2));
            between(vec![val(&[(d, 2)]), val(&mid), val(&ones), [0; 5]])
        }
        (Some(_), Some(_)) => unreachable!("no expression mixes a power with δ or ε"),
    }
}

/// Decorated 1-dimensional set: points `0..n_points`, arcs between them, and
/// a distinguished point. Point values are determined by Ω̃ = 0, i.e. half
/// the sum over arc ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedCurve {
    n_points: u32,
    arcs: Vec<CurveArc>,
    base: u32,
    blocks: BTreeMap<BlockKind, usize>,
}

pub fn elementary_block(kind: BlockKind) -> DecoratedCurve {
    let (n_points, arcs) = block_arcs(kind.designated());
    DecoratedCurve {
        n_points,
        arcs,
        base: 0,
        blocks: BTreeMap::from([(kind, 1)]),
    }
}

/// Wedge at the two distinguished points.
pub fn wedge_decorated(a: &DecoratedCurve, b: &DecoratedCurve) -> DecoratedCurve {
    a.wedge_at(a.base, b)
}

fn rem4(x: i64) -> i64 {
    x.rem_euclid(4)
}

/// Every expression's product, reduced mod 4, at one set of values.
fn products_mod4(v: &[i64; 5]) -> [i64; V_COUNT] {
    let x: [i64; 5] = std::array::from_fn(|i| rem4(v[i]));
    let pw = |b: usize, k: u8| match k {
        1 => x[b],
        2 => rem4(x[b] * x[b] - x[b]),
        _ => rem4(x[b] * x[b] * x[b] - x[b]),
    };
    std::array::from_fn(|i| {
        VExpr(i as u8)
            .terms()
            .iter()
            .fold(1, |acc, &(b, k)| rem4(acc * pw(b as usize, k)))
    })
}

impl DecoratedCurve {
    pub fn point() -> Self {
        DecoratedCurve {
            n_points: 1,
            arcs: Vec::new(),
            base: 0,
            blocks: BTreeMap::new(),
        }
    }

    /// Assemble from raw data; checked by [`DecoratedCurve::check`].
    pub fn from_arcs(n_points: u32, arcs: Vec<CurveArc>, base: u32) -> Result<Self> {
        let c = DecoratedCurve {
            n_points,
            arcs,
            base,
            blocks: BTreeMap::new(),
        };
        c.check()?;
        Ok(c)
    }

    pub fn n_points(&self) -> u32 {
        self.n_points
    }

    pub fn arcs(&self) -> &[CurveArc] {
        &self.arcs
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Blocks used, with multiplicities.
    pub fn blocks(&self) -> &BTreeMap<BlockKind, usize> {
        &self.blocks
    }

    /// Σ over arc ends at each point (loops count twice).
    fn end_sums(&self) -> Vec<[i64; 5]> {
        let mut s = vec![[0i64; 5]; self.n_points as usize];
        for a in &self.arcs {
            for &e in &a.ends {
                for (x, v) in s[e as usize].iter_mut().zip(a.values) {
                    *x += v;
                }
            }
        }
        s
    }

    /// (α, β, γ, δ, ε) at each point.
    pub fn point_values(&self) -> Result<Vec<[i64; 5]>> {
        self.end_sums()
            .into_iter()
            .enumerate()
            .map(|(p, s)| {
                if s.iter().any(|x| x % 2 != 0) {
                    return Err(WitnessError::Curve(format!("point {p}: half-sum not integral")));
                }
                Ok(s.map(|x| x / 2))
            })
            .collect()
    }

    /// The invariants: integral point values with δ, ε even everywhere, and
    /// 1, αβ, αγ, βγ, αβγ euler at every point.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(WitnessError::Curve(m));
        if self.base >= self.n_points {
            return bad(format!("base {} is not a point", self.base));
        }
        let mut deg = vec![0u32; self.n_points as usize];
        let mut prod = vec![[0i64; 4]; self.n_points as usize];
        for (i, a) in self.arcs.iter().enumerate() {
            if a.ends.iter().any(|&e| e >= self.n_points) {
                return bad(format!("arc {i} ends outside the curve"));
            }
            if a.values[3] % 2 != 0 || a.values[4] % 2 != 0 {
                return bad(format!("arc {i}: δ or ε odd"));
            }
            let [x, y, z, _, _] = a.values;
            for &e in &a.ends {
                deg[e as usize] += 1;
                let p = &mut prod[e as usize];
                p[0] += x * y;
                p[1] += x * z;
                p[2] += y * z;
                p[3] += x * y * z;
            }
        }
        let pv = self.point_values()?;
        for p in 0..self.n_points as usize {
            if !deg[p].is_multiple_of(2) || prod[p].iter().any(|s| s % 2 != 0) {
                return bad(format!("point {p} is not euler"));
            }
            if pv[p][3] % 2 != 0 || pv[p][4] % 2 != 0 {
                return bad(format!("point {p}: δ or ε odd"));
            }
        }
        Ok(())
    }

    /// Set of odd expressions (bit i = expression i) at every point.
    pub fn odd_exprs(&self) -> Result<Vec<u64>> {
        let pv = self.point_values()?;
        let n = self.n_points as usize;
        let mut acc = vec![[0i64; V_COUNT]; n];
        for a in &self.arcs {
            let psi = products_mod4(&a.values);
            for &e in &a.ends {
                for (s, x) in acc[e as usize].iter_mut().zip(psi.iter()) {
                    *s = rem4(*s + x);
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            let at = products_mod4(&pv[p]);
            let mut set = 0u64;
            for i in 0..V_COUNT {
                let odd = if i < 3 {
                    pv[p][i] % 2 != 0
                } else {
                    // 2·Ω̃ψ(p) = 2ψ(p) − Σ_ends ψ
                    let twice = rem4(2 * at[i] - acc[p][i]);
                    if twice % 2 != 0 {
                        return Err(WitnessError::Curve(format!(
                            "point {p}: {} not integral",
                            VExpr(i as u8)
                        )));
                    }
                    twice == 2
                };
                if odd {
                    set |= 1 << i;
                }
            }
            out.push(set);
        }
        Ok(out)
    }

    /// Profile masks (43 bits) of the points.
    pub fn masks(&self) -> Result<Vec<u64>> {
        Ok(self.odd_exprs()?.into_iter().map(vset_to_mask).collect())
    }

    /// Every profile mask S with Σ_p Φ_S(p) odd.
    pub fn nonzero(&self, cap: u64) -> Result<Vec<u64>> {
        let masks = reduce_masks(&self.masks()?);
        let (count, list) = nonzero_masks(&masks, cap);
        list.ok_or_else(|| {
            WitnessError::Construction(format!("{count} nonzero sums exceed the cap {cap}"))
        })
    }

    /// Identify `other`'s base with point `p`; `other`'s remaining points are
    /// appended in order.
    pub fn wedge_at(&self, p: u32, other: &DecoratedCurve) -> DecoratedCurve {
        let n = self.n_points;
        let map = |q: u32| match q.cmp(&other.base) {
            std::cmp::Ordering::Equal => p,
            std::cmp::Ordering::Less => n + q,
            std::cmp::Ordering::Greater => n + q - 1,
        };
        let mut arcs = self.arcs.clone();
        arcs.extend(other.arcs.iter().map(|a| CurveArc {
            ends: a.ends.map(map),
            values: a.values,
        }));
        DecoratedCurve {
            n_points: n + other.n_points - 1,
            arcs,
            base: self.base,
            blocks: merge_blocks(&self.blocks, &other.blocks),
        }
    }

    pub fn disjoint_union(&self, other: &DecoratedCurve) -> DecoratedCurve {
        let n = self.n_points;
        let mut arcs = self.arcs.clone();
        arcs.extend(other.arcs.iter().map(|a| CurveArc {
            ends: a.ends.map(|q| q + n),
            values: a.values,
        }));
        DecoratedCurve {
            n_points: n + other.n_points,
            arcs,
            base: self.base,
            blocks: merge_blocks(&self.blocks, &other.blocks),
        }
    }

    /// Simplicial vertex paths of the arcs, from `ends[0]` to `ends[1]`, and
    /// the total vertex count. Points keep their ids; the first arc between
    /// two points is a single edge, later ones get a midpoint, loops get two
    /// extra vertices.
    pub fn chains(&self) -> (u32, Vec<Vec<u32>>) {
        let mut next = self.n_points;
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        let chains = self
            .arcs
            .iter()
            .map(|a| {
                let [p, q] = a.ends;
                if p == q {
                    next += 2;
                    vec![p, next - 2, next - 1, p]
                } else if seen.insert((p.min(q), p.max(q))) {
                    vec![p, q]
                } else {
                    next += 1;
                    vec![p, next - 1, q]
                }
            })
            .collect();
        (next, chains)
    }

    /// The curve as a simplicial complex with its five functions.
    pub fn realize(&self) -> Result<RealizedCurve> {
        let pv = self.point_values()?;
        let (n, chains) = self.chains();
        let mut vals: HashMap<Vec<u32>, [i64; 5]> = HashMap::new();
        for (p, v) in pv.iter().enumerate() {
            vals.insert(vec![p as u32], *v);
        }
        for (a, chain) in self.arcs.iter().zip(&chains) {
            for w in chain.windows(2) {
                vals.insert(vec![w[0].min(w[1]), w[0].max(w[1])], a.values);
            }
            for &x in &chain[1..chain.len() - 1] {
                vals.insert(vec![x], a.values);
            }
        }
        debug_assert_eq!(vals.keys().filter(|k| k.len() == 1).count(), n as usize);
        let gens: Vec<Vec<u32>> = vals.keys().cloned().collect();
        let complex = Arc::new(build_complex(&gens)?);
        let functions = std::array::from_fn(|k| {
            ConstructibleFunction::from_fn(complex.clone(), |i| {
                Dyadic::from(vals[complex.simplex(i).vertices()][k])
            })
        });
        Ok(RealizedCurve {
            complex,
            functions,
            chains,
        })
    }
}

fn merge_blocks(
    a: &BTreeMap<BlockKind, usize>,
    b: &BTreeMap<BlockKind, usize>,
) -> BTreeMap<BlockKind, usize> {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_default() += c;
    }
    out
}

pub struct RealizedCurve {
    pub complex: Arc<Complex>,
    /// α, β, γ, δ, ε.
    pub functions: [ConstructibleFunction; 5],
    pub chains: Vec<Vec<u32>>,
}

const NONZERO_CAP: u64 = 1 << 20;

/// Builds the curves of the wedge construction, memoized by expression set.
#[derive(Default)]
pub struct L1Builder {
    memo: HashMap<u64, DecoratedCurve>,
}

impl L1Builder {
    pub fn new() -> Self {
        L1Builder::default()
    }

    /// A curve whose base carries exactly the odd expressions in `set` (bit
    /// i = expression i); other points carry at most one, never from V₂.
    pub fn build(&mut self, set: u64) -> Result<DecoratedCurve> {
        if set == 0 {
            return Ok(DecoratedCurve::point());
        }
        if let Some(c) = self.memo.get(&set) {
            return Ok(c.clone());
        }
        let u = 63 - set.leading_zeros();
        let ubit = 1u64 << u;
        let mut cur = elementary_block(BlockKind::Expr(VExpr(u as u8)));
        for p in 0..cur.n_points {
            let other = cur.odd_exprs()?[p as usize] & !ubit;
            if other >= ubit {
                return Err(WitnessError::Construction(format!(
                    "block {} has a later nonzero expression",
                    VExpr(u as u8)
                )));
            }
            if other != 0 {
                let sub = self.build(other)?;
                cur = cur.wedge_at(p, &sub);
            }
            cur = correct_v2(cur, p, ubit)?;
        }
        let rest = set & !ubit;
        if rest != 0 {
            let sub = self.build(rest)?;
            cur = cur.wedge_at(cur.base, &sub);
            let base = cur.base;
            cur = correct_v2(cur, base, set)?;
        }
        self.memo.insert(set, cur.clone());
        Ok(cur)
    }

    /// A curve whose only odd sum Σ_p Φ(p) is the one of `mask` (43-bit
    /// profile numbering).
    pub fn build_for_index(&mut self, mask: u64) -> Result<DecoratedCurve> {
        let mut cur = self.build(mask_to_vset(mask))?;
        for _ in 0..100_000 {
            let nz = cur.nonzero(NONZERO_CAP)?;
            if !nz.contains(&mask) {
                return Err(WitnessError::Construction(format!(
                    "index {mask:#x} lost during cancellation"
                )));
            }
            // largest remaining divisor first: its copy only adds smaller ones
            let Some(&w) = nz
                .iter()
                .filter(|&&m| m != mask)
                .max_by_key(|&&m| (m.count_ones(), m))
            else {
                return Ok(cur);
            };
            let sub = self.build(mask_to_vset(w))?;
            cur = cur.disjoint_union(&sub);
        }
        Err(WitnessError::Construction("divisor cancellation did not terminate".into()))
    }
}

/// Wedge V₂ blocks at `p` until its odd set equals `target`.
fn correct_v2(mut cur: DecoratedCurve, p: u32, target: u64) -> Result<DecoratedCurve> {
    for _ in 0..64 {
        let diff = cur.odd_exprs()?[p as usize] ^ target;
        if diff == 0 {
            return Ok(cur);
        }
        let w = VExpr((63 - diff.leading_zeros()) as u8);
        if w.family() != 2 {
            return Err(WitnessError::Construction(format!(
                "expression {w} leaked at a wedge point"
            )));
        }
        cur = cur.wedge_at(p, &elementary_block(BlockKind::Expr(w)));
    }
    Err(WitnessError::Construction("V₂ correction did not terminate".into()))
}

pub fn build_l1(set: &[VExpr]) -> Result<DecoratedCurve> {
    let bits = set.iter().fold(0u64, |a, v| a | 1 << v.index());
    L1Builder::new().build(bits)
}

pub fn build_l1_for_index(idx: CharIndex) -> Result<DecoratedCurve> {
    L1Builder::new().build_for_index(idx.mask())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(c: &DecoratedCurve, p: usize) -> [bool; 3] {
        let s = c.odd_exprs().unwrap()[p];
        [s >> 1 & 1 == 1, s >> 8 & 1 == 1, s >> 11 & 1 == 1]
    }

    #[test]
    fn numbering_round_trips() {
        for b in 0..43 {
            assert_eq!(VExpr::from_bit(b).unwrap().bit(), Some(b));
        }
        assert_eq!(VExpr(7).bit(), None);
        assert_eq!(VExpr(10).bit(), None);
        assert_eq!(VExpr(8).name(), "Ω̃(β₂)");
        assert_eq!(VExpr(31).name(), "Ω̃(αδ)");
        assert_eq!(mask_to_vset(0x82), 1 << 1 | 1 << 8);
        assert_eq!(vset_to_mask(mask_to_vset(0x7ff_ffff_ffff)), 0x7ff_ffff_ffff);
    }

    #[test]
    fn one_function_blocks() {
        let a = elementary_block(BlockKind::A);
        let b = elementary_block(BlockKind::B);
        let c = elementary_block(BlockKind::C);
        for p in 0..2 {
            assert_eq!(triple(&a, p), [true, false, false]);
            assert_eq!(triple(&b, p), [false, true, false]);
            assert_eq!(triple(&c, p), [true, true, true]);
        }
        let ab = wedge_decorated(&a, &b);
        assert_eq!(triple(&ab, 0), [true, true, false]);
    }

    #[test]
    fn blocks_satisfy_ordering_and_invariants() {
        for kind in BlockKind::all() {
            let b = elementary_block(kind);
            b.check().unwrap();
            let v = kind.designated().index();
            for s in b.odd_exprs().unwrap() {
                assert!(s >> v & 1 == 1, "{kind}");
                assert_eq!(s >> (v + 1), 0, "{kind}");
            }
        }
        assert_eq!(
            "(αβγ₂)".parse::<BlockKind>().unwrap(),
            BlockKind::Expr(VExpr(25))
        );
        assert!("(x)".parse::<BlockKind>().is_err());
    }

    #[test]
    fn realization_matches_point_values() {
        for kind in BlockKind::all() {
            let b = elementary_block(kind);
            let r = b.realize().unwrap();
            for f in &r.functions {
                assert!(f.co_half_link().values().iter().all(Dyadic::is_zero), "{kind}");
            }
        }
    }

    #[test]
    fn cross_term_of_alpha_and_beta() {
        let a = elementary_block(BlockKind::Expr(VExpr(0)));
        let b = elementary_block(BlockKind::Expr(VExpr(1)));
        let w = wedge_decorated(&a, &b);
        assert!(w.odd_exprs().unwrap()[0] >> 3 & 1 == 1);
    }

    #[test]
    fn build_sets_exactly_the_base() {
        let mut b = L1Builder::new();
        for set in [1u64 << 1, 1 << 1 | 1 << 8, 1 << 31, 1 << 44 | 1 << 2, 1 << 20 | 1 << 5] {
            let c = b.build(set).unwrap();
            c.check().unwrap();
            let odd = c.odd_exprs().unwrap();
            assert_eq!(odd[c.base() as usize], set);
            for (p, s) in odd.iter().enumerate() {
                if p as u32 != c.base() {
                    assert!(s.count_ones() <= 1 && s & 0b111_1000 == 0, "{set:#x} {p} {s:#x}");
                }
            }
        }
        assert_eq!(b.build(1 << 1).unwrap().blocks().len(), 1);
    }
}
