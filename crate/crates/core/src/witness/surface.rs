//! From a decorated curve to a surface carrying φ with Λ̃φ = 0: discs along
//! parity cycles, bubbles for the residues mod 4, and vertex values.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::simplicial::{build_complex, Complex};

use super::curve::DecoratedCurve;
use super::{Result, WitnessError};

/// (α, β, γ, δ, ε) on a 1-stratum bounding 2-strata with values `faces`,
/// forced by Λ̃φ = 0: α = ½Σl, β = α² − ½Σl², γ = α³ − ½Σl³,
/// δ = P₄(α) − ½ΣP₄(l), ε = P₅(α) − ½ΣP₅(l).
pub fn stratum_values(faces: &[i64]) -> [i64; 5] {
    let p4 = |t: i128| t * (t - 1) * (t - 2) * (t - 3) / 2;
    let p5 = |t: i128| t * (t - 1) * (t - 2) * (t - 3) * (t - 4) / 2;
    let fs: [fn(i128) -> i128; 2] = [p4, p5];
    let sum: i128 = faces.iter().map(|&l| l as i128).sum();
    assert!(sum % 2 == 0, "face values must have an even sum");
    let a = sum / 2;
    let half = |f: &dyn Fn(i128) -> i128| {
        let s: i128 = faces.iter().map(|&l| f(l as i128)).sum();
        assert!(s % 2 == 0);
        f(a) - s / 2
    };
    let out = [
        a,
        half(&|t| t * t),
        half(&|t| t * t * t),
        half(&fs[0]),
        half(&fs[1]),
    ];
    out.map(|x| i64::try_from(x).expect("stratum value fits in i64"))
}

/// Parities of (α, β, γ, δ/2, ε/2).
fn parity_vector(v: &[i64; 5]) -> [bool; 5] {
    [
        v[0] % 2 != 0,
        v[1] % 2 != 0,
        v[2] % 2 != 0,
        v[3].rem_euclid(4) == 2,
        v[4].rem_euclid(4) == 2,
    ]
}

fn multisets(max_len: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == max_len {
        out.push(prefix.clone());
        return;
    }
    let start = prefix.last().copied().unwrap_or(lo);
    for l in start..=hi {
        prefix.push(l);
        multisets(max_len, lo, hi, prefix, out);
        prefix.pop();
    }
}

/// Smallest multiset of disc values in 1..=5 (fewest discs, then
/// lexicographic) realizing the parity vector (α, β, γ, δ/2, ε/2).
pub fn disc_group(target: [bool; 5]) -> Option<Vec<i64>> {
    static TABLE: OnceLock<HashMap<[bool; 5], Vec<i64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = HashMap::new();
        for len in 1..=6 {
            let mut all = Vec::new();
            multisets(len, 1, 5, &mut Vec::new(), &mut all);
            for m in all {
                if m.iter().sum::<i64>() % 2 != 0 {
                    continue;
                }
                t.entry(parity_vector(&stratum_values(&m))).or_insert(m);
            }
        }
        t
    });
    table.get(&target).cloned()
}

/// Bubble counts (n₁, n₂, n₃) of B₁, B₂, B₃, fewest first, bringing the
/// values of `faces` to `target` mod 4 in all five coordinates.
pub fn bubble_counts(faces: &[i64], target: &[i64; 5]) -> Option<[usize; 3]> {
    let mut cands: Vec<[usize; 3]> = (0..8)
        .flat_map(|a| (0..8).flat_map(move |b| (0..8).map(move |c| [a, b, c])))
        .collect();
    cands.sort_by_key(|c| (c.iter().sum::<usize>(), *c));
    cands.into_iter().find(|n| {
        let v = stratum_values(&with_bubbles(faces, *n));
        (0..5).all(|k| (v[k] - target[k]).rem_euclid(4) == 0)
    })
}

/// `faces` plus two faces of value l for each bubble B_l.
pub fn with_bubbles(faces: &[i64], n: [usize; 3]) -> Vec<i64> {
    let mut f = faces.to_vec();
    for (i, &c) in n.iter().enumerate() {
        f.extend(std::iter::repeat_n(i as i64 + 1, 2 * c));
    }
    f
}

/// A 1-stratum of the surface: the simplicial path of a curve arc, the
/// arc's values, and the 2-strata values around it.
#[derive(Clone, Debug, Serialize)]
pub struct ArcStratum {
    pub chain: Vec<u32>,
    pub target: [i64; 5],
    pub faces: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SurfaceStats {
    pub discs: usize,
    /// Disc value → number of discs.
    pub disc_values: BTreeMap<i64, usize>,
    /// Bubble value → number of bubbles (one per simplicial edge).
    pub bubbles: BTreeMap<i64, usize>,
    pub parity_sphere: bool,
}

/// A 2-complex with integer φ on every simplex, together with the curve
/// strata it was built around.
#[derive(Clone, Debug)]
pub struct DecoratedSurface {
    n_vertices: u32,
    phi: BTreeMap<Vec<u32>, i64>,
    point_alpha: Vec<i64>,
    strata: Vec<ArcStratum>,
    apexes: Vec<u32>,
    stats: SurfaceStats,
}

impl DecoratedSurface {
    pub fn n_vertices(&self) -> u32 {
        self.n_vertices
    }

    /// Every simplex with its value, sorted.
    pub fn simplices(&self) -> &BTreeMap<Vec<u32>, i64> {
        &self.phi
    }

    pub fn strata(&self) -> &[ArcStratum] {
        &self.strata
    }

    /// Number of curve points; they are vertices `0..n`.
    pub fn n_points(&self) -> usize {
        self.point_alpha.len()
    }

    pub fn stats(&self) -> &SurfaceStats {
        &self.stats
    }

    /// ∫φ dχ.
    pub fn integral(&self) -> i64 {
        self.phi
            .iter()
            .map(|(s, v)| if s.len() % 2 == 1 { *v } else { -*v })
            .sum()
    }

    pub fn to_function(&self) -> Result<ConstructibleFunction> {
        let gens: Vec<Vec<u32>> = self.phi.keys().cloned().collect();
        let k = Arc::new(build_complex(&gens)?);
        Ok(ConstructibleFunction::from_fn(k.clone(), |i| {
            Dyadic::from(self.phi[k.simplex(i).vertices()])
        }))
    }

    pub fn complex(&self) -> Result<Complex> {
        let gens: Vec<Vec<u32>> = self.phi.keys().cloned().collect();
        Ok(build_complex(&gens)?)
    }

    fn fresh(&mut self) -> u32 {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    fn put(&mut self, mut s: Vec<u32>, v: i64) {
        s.sort_unstable();
        self.phi.insert(s, v);
    }

    /// Cone over the closed path `cycle` with a fresh apex, all valued `l`.
    fn add_disc(&mut self, cycle: &[u32], l: i64) {
        let apex = self.fresh();
        self.apexes.push(apex);
        self.put(vec![apex], l);
        for (i, &v) in cycle.iter().enumerate() {
            let w = cycle[(i + 1) % cycle.len()];
            self.put(vec![v, apex], l);
            self.put(vec![v, w, apex], l);
        }
        self.stats.discs += 1;
        *self.stats.disc_values.entry(l).or_default() += 1;
    }

    /// ∂[u, v, a, b] with fresh a, b, all new simplices valued `l`.
    fn add_bubble(&mut self, u: u32, v: u32, l: i64) {
        let a = self.fresh();
        let b = self.fresh();
        for s in [
            vec![a],
            vec![b],
            vec![u, a],
            vec![u, b],
            vec![v, a],
            vec![v, b],
            vec![a, b],
            vec![u, v, a],
            vec![u, v, b],
            vec![u, a, b],
            vec![v, a, b],
        ] {
            self.put(s, l);
        }
        *self.stats.bubbles.entry(l).or_default() += 1;
    }

    /// Set φ on the edges and interior vertices of a stratum to its α.
    fn refresh_stratum(&mut self, i: usize) {
        let alpha = stratum_values(&self.strata[i].faces)[0];
        let chain = self.strata[i].chain.clone();
        for w in chain.windows(2) {
            self.put(vec![w[0], w[1]], alpha);
        }
        for &x in &chain[1..chain.len() - 1] {
            self.put(vec![x], alpha);
        }
    }
}

/// Attach discs along the mod-2 level cycles of the curve: one cycle family
/// per nonzero class of (α, β, γ) mod 2, then δ/2 and ε/2.
pub fn fill_cycles(curve: &DecoratedCurve) -> Result<DecoratedSurface> {
    curve.check()?;
    let pv = curve.point_values()?;
    let (n, chains) = curve.chains();
    let mut y = DecoratedSurface {
        n_vertices: n,
        phi: BTreeMap::new(),
        point_alpha: pv.iter().map(|v| v[0]).collect(),
        strata: curve
            .arcs()
            .iter()
            .zip(chains)
            .map(|(a, chain)| ArcStratum {
                chain,
                target: a.values,
                faces: Vec::new(),
            })
            .collect(),
        apexes: Vec::new(),
        stats: SurfaceStats::default(),
    };
    for (p, v) in pv.iter().enumerate() {
        y.put(vec![p as u32], v[0]);
    }
    let mut families: Vec<([bool; 5], Vec<usize>)> = Vec::new();
    for class in 1..8u8 {
        let key = [class & 1 != 0, class & 2 != 0, class & 4 != 0, false, false];
        let arcs: Vec<usize> = (0..y.strata.len())
            .filter(|&i| {
                let p = parity_vector(&y.strata[i].target);
                p[..3] == key[..3]
            })
            .collect();
        families.push((key, arcs));
    }
    for k in [3, 4] {
        let mut key = [false; 5];
        key[k] = true;
        let arcs = (0..y.strata.len())
            .filter(|&i| parity_vector(&y.strata[i].target)[k])
            .collect();
        families.push((key, arcs));
    }
    for (key, arcs) in families {
        if arcs.is_empty() {
            continue;
        }
        let group = disc_group(key)
            .ok_or_else(|| WitnessError::Construction(format!("no disc values for {key:?}")))?;
        let ends: Vec<[u32; 2]> = arcs.iter().map(|&i| curve.arcs()[i].ends).collect();
        for cycle in simple_cycles(&ends, curve.n_points())? {
            let mut path: Vec<u32> = Vec::new();
            for &(j, forward) in &cycle {
                let chain = &y.strata[arcs[j]].chain;
                let mut seg: Vec<u32> = chain.clone();
                if !forward {
                    seg.reverse();
                }
                seg.pop();
                path.extend(seg);
            }
            for &l in &group {
                y.add_disc(&path, l);
            }
            for &(j, _) in &cycle {
                y.strata[arcs[j]].faces.extend(&group);
            }
        }
    }
    for i in 0..y.strata.len() {
        let got = parity_vector(&stratum_values(&y.strata[i].faces));
        if got != parity_vector(&y.strata[i].target) {
            return Err(WitnessError::Construction(format!("stratum {i}: parity {got:?}")));
        }
        y.refresh_stratum(i);
    }
    Ok(y)
}

/// Split an even-degree multigraph (edges given by their ends) into simple
/// cycles; each cycle lists `(edge, traversed forward)`.
fn simple_cycles(ends: &[[u32; 2]], n_points: u32) -> Result<Vec<Vec<(usize, bool)>>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_points as usize];
    for (i, e) in ends.iter().enumerate() {
        adj[e[0] as usize].push(i);
        if e[1] != e[0] {
            adj[e[1] as usize].push(i);
        }
    }
    let mut used = vec![false; ends.len()];
    let mut cursor = vec![0usize; n_points as usize];
    let mut cycles = Vec::new();
    for first in 0..ends.len() {
        if used[first] {
            continue;
        }
        let mut pts: Vec<u32> = vec![ends[first][0]];
        let mut via: Vec<(usize, bool)> = Vec::new();
        let mut pending = Some(first);
        loop {
            let cur = *pts.last().expect("nonempty path");
            let e = match pending.take() {
                Some(e) => e,
                None => {
                    let list = &adj[cur as usize];
                    let c = &mut cursor[cur as usize];
                    while *c < list.len() && used[list[*c]] {
                        *c += 1;
                    }
                    if *c == list.len() {
                        return Err(WitnessError::Construction(format!(
                            "point {cur} has odd degree in a level set"
                        )));
                    }
                    list[*c]
                }
            };
            used[e] = true;
            let forward = ends[e][0] == cur;
            let next = if forward { ends[e][1] } else { ends[e][0] };
            via.push((e, forward));
            if let Some(k) = pts.iter().position(|&q| q == next) {
                cycles.push(via.split_off(k));
                pts.truncate(k + 1);
                if via.is_empty() {
                    break;
                }
            } else {
                pts.push(next);
            }
        }
    }
    Ok(cycles)
}

/// Wedge bubbles on every edge of each stratum so its (α, β, γ) match the
/// curve's values mod 4, set φ = α on the curve points, and wedge a sphere
/// with φ = 1 if ∫φ dχ is odd.
pub fn adjust_mod4(y: &DecoratedSurface) -> Result<DecoratedSurface> {
    let mut y = y.clone();
    for i in 0..y.strata.len() {
        let s = &y.strata[i];
        let have = stratum_values(&s.faces);
        if parity_vector(&have) != parity_vector(&s.target) {
            return Err(WitnessError::Construction(format!(
                "stratum {i}: values {have:?} disagree mod 2 with {:?}",
                s.target
            )));
        }
        let n = bubble_counts(&s.faces, &s.target).ok_or_else(|| {
            WitnessError::Construction(format!("stratum {i}: no bubble recipe"))
        })?;
        let chain = s.chain.clone();
        for w in chain.windows(2) {
            for (k, &c) in n.iter().enumerate() {
                for _ in 0..c {
                    y.add_bubble(w[0], w[1], k as i64 + 1);
                }
            }
        }
        y.strata[i].faces = with_bubbles(&y.strata[i].faces, n);
        y.refresh_stratum(i);
    }
    for p in 0..y.point_alpha.len() {
        let a = y.point_alpha[p];
        y.put(vec![p as u32], a);
    }
    if y.integral() % 2 != 0 {
        let v = y
            .apexes
            .first()
            .copied()
            .or_else(|| (y.point_alpha.len() as u32..y.n_vertices).last())
            .unwrap_or(0);
        let a = y.fresh();
        let b = y.fresh();
        let c = y.fresh();
        let tet = [v, a, b, c];
        for mask in 1u32..15 {
            let s: Vec<u32> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| tet[i]).collect();
            if s != [v] {
                y.put(s, 1);
            }
        }
        y.stats.parity_sphere = true;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::curve::{elementary_block, BlockKind};

    #[test]
    fn disc_groups_from_the_text() {
        assert_eq!(disc_group([true, false, false, false, false]), Some(vec![1, 1]));
        assert_eq!(disc_group([true, true, true, false, false]), Some(vec![2]));
        assert_eq!(disc_group([false, false, false, true, false]), Some(vec![4]));
        let beta = disc_group([false, true, false, false, false]).unwrap();
        assert_eq!(parity_vector(&stratum_values(&beta)), [false, true, false, false, false]);
        for c in 1..32u8 {
            let key: [bool; 5] = std::array::from_fn(|i| c >> i & 1 == 1);
            assert!(disc_group(key).is_some(), "{key:?}");
        }
    }

    #[test]
    fn bubble_recipes() {
        let m4 = |v: [i64; 5]| [v[0].rem_euclid(4), v[1].rem_euclid(4), v[2].rem_euclid(4)];
        assert_eq!(stratum_values(&with_bubbles(&[], [1, 0, 1])), [4, 6, 36, 12, 0]);
        assert_eq!(m4(stratum_values(&with_bubbles(&[], [3, 1, 1]))), [0, 0, 2]);
        assert_eq!(m4(stratum_values(&with_bubbles(&[], [4, 1, 0]))), [2, 0, 0]);
    }

    #[test]
    fn simple_cycles_cover_every_edge_once() {
        let ends = [[0, 1], [1, 2], [2, 0], [0, 0], [1, 3], [3, 1], [0, 1], [1, 0]];
        let cycles = simple_cycles(&ends, 4).unwrap();
        let mut seen: Vec<usize> = cycles.iter().flatten().map(|c| c.0).collect();
        seen.sort();
        assert_eq!(seen, (0..ends.len()).collect::<Vec<_>>());
        assert!(simple_cycles(&[[0, 1]], 2).is_err());
    }

    #[test]
    fn surfaces_of_blocks_have_vanishing_half_link() {
        for kind in BlockKind::all() {
            let c = elementary_block(kind);
            let y = adjust_mod4(&fill_cycles(&c).unwrap()).unwrap();
            let f = y.to_function().unwrap();
            assert!(f.half_link().values().iter().all(Dyadic::is_zero), "{kind}");
            assert_eq!(y.integral() % 2, 0);
            for s in y.strata() {
                let v = stratum_values(&s.faces);
                for (x, t) in v.iter().zip(s.target) {
                    assert_eq!((x - t).rem_euclid(4), 0, "{kind}");
                }
            }
        }
    }
}
