//! Finite abstract simplicial complexes.
//!
//! Simplices are stored sorted by dimension and then lexicographically, so the
//! `v`-th simplex of a complex is always the vertex `[v]`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rustc_hash::{FxHashMap, FxHashSet};
use std::fmt;

use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<Vertex>),
    #[error("no simplices given")]
    EmptyInput,
    #[error("empty simplex")]
    EmptySimplex,
    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<Vertex>),
    #[error("vertex identifiers must be dense: {0} is unused")]
    MissingVertex(Vertex),
    #[error("identification collapses simplex {0:?}; subdivide first")]
    DegenerateGlue(Vec<Vertex>),
    #[error("vertex map has {got} entries, complex has {expected} vertices")]
    MapLength { expected: usize, got: usize },
    #[error("{0} is not a vertex of the complex")]
    NotAVertex(Vertex),
    #[error("product of an empty complex")]
    EmptyFactor,
    #[error("{got} labels for {expected} vertices")]
    LabelCount { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, SimplicialError>;

/// A nonempty strictly increasing list of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the input; rejects repeats and the empty list.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(SimplicialError::EmptySimplex);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimplicialError::RepeatedVertex(vertices));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// Vertex union (a join of disjoint simplices).
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |bits| {
            Simplex(
                (0..n)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }

    /// Codimension-one faces.
    pub fn boundary(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| *v)
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite, downward-closed set of simplices on the vertices `0..n`.
#[derive(Clone)]
pub struct Complex {
    n_vertices: usize,
    labels: Option<Vec<String>>,
    simplices: Vec<Simplex>,
    dim_start: Vec<usize>,
    index: FxHashMap<Simplex, usize>,
    coface_start: Vec<usize>,
    cofaces: Vec<u32>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("f_vector", &self.f_vector())
            .finish()
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.simplices == other.simplices
    }
}

impl Eq for Complex {}

/// Downward-closed build from maximal simplices.
pub fn build_complex(maximal: &[Vec<Vertex>]) -> Result<Complex> {
    if maximal.is_empty() {
        return Err(SimplicialError::EmptyInput);
    }
    let sims = maximal
        .iter()
        .map(|s| Simplex::new(s.clone()))
        .collect::<Result<Vec<_>>>()?;
    Complex::from_simplices(sims)
}

impl Complex {
    pub fn empty() -> Self {
        Complex::from_closed(Vec::new())
    }

    /// Downward closure of arbitrary simplices; vertex ids must be dense.
    pub fn from_simplices(generators: Vec<Simplex>) -> Result<Complex> {
        let mut all: FxHashSet<Simplex> = FxHashSet::default();
        let mut gens = generators;
        gens.sort_unstable_by_key(|g| std::cmp::Reverse(g.0.len()));
        for g in gens {
            if all.contains(&g) {
                continue;
            }
            for f in g.faces() {
                all.insert(f);
            }
        }
        let all: Vec<Simplex> = all.into_iter().collect();
        let n = all.iter().filter(|s| s.0.len() == 1).count();
        let max_v = all.iter().filter_map(|s| s.0.last().copied()).max();
        if let Some(m) = max_v {
            if m as usize + 1 != n {
                let used: HashSet<Vertex> = all.iter().filter(|s| s.0.len() == 1).map(|s| s.0[0]).collect();
                let missing = (0..=m).find(|v| !used.contains(v)).unwrap_or(m);
                return Err(SimplicialError::MissingVertex(missing));
            }
        }
        Ok(Complex::from_closed(all))
    }

    /// Callers guarantee the set is closed and dense.
    fn from_closed(mut simplices: Vec<Simplex>) -> Complex {
        simplices.sort_unstable_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let top = simplices.last().map(|s| s.0.len()).unwrap_or(0);
        let mut dim_start = vec![0usize; top + 1];
        let mut k = 0;
        for (i, s) in simplices.iter().enumerate() {
            while k < s.0.len() {
                dim_start[k] = i;
                k += 1;
            }
        }
        while k <= top {
            dim_start[k] = simplices.len();
            k += 1;
        }
        let index: FxHashMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        // (face, coface) pairs, bucketed by face
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (t, s) in simplices.iter().enumerate() {
            if s.0.len() > 1 {
                for f in s.faces() {
                    if f.0.len() < s.0.len() {
                        pairs.push((index[&f] as u32, t as u32));
                    }
                }
            }
        }
        let mut coface_start = vec![0usize; simplices.len() + 1];
        for &(f, _) in &pairs {
            coface_start[f as usize + 1] += 1;
        }
        for i in 0..simplices.len() {
            coface_start[i + 1] += coface_start[i];
        }
        let mut fill = coface_start.clone();
        let mut cofaces = vec![0u32; pairs.len()];
        for (f, t) in pairs {
            cofaces[fill[f as usize]] = t;
            fill[f as usize] += 1;
        }
        let n_vertices = dim_start.get(1).copied().unwrap_or(0);
        Complex {
            n_vertices,
            labels: None,
            simplices,
            dim_start,
            index,
            coface_start,
            cofaces,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Complex> {
        if labels.len() != self.n_vertices {
            return Err(SimplicialError::LabelCount {
                expected: self.n_vertices,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Maximal simplex dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i32 {
        self.simplices.last().map(|s| s.dim() as i32).unwrap_or(-1)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].0.len() - 1
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn index_of_vertices(&self, vs: &[Vertex]) -> Option<usize> {
        let s = Simplex::new(vs.to_vec()).ok()?;
        self.index_of(&s)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Index range of the `k`-simplices.
    pub fn dim_range(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.dim_start.len() {
            return self.simplices.len()..self.simplices.len();
        }
        self.dim_start[k]..self.dim_start[k + 1]
    }

    /// Number of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim_start.len().saturating_sub(1))
            .map(|k| self.dim_range(k).len())
            .collect()
    }

    /// All proper cofaces of simplex `i`, as indices.
    pub fn cofaces(&self, i: usize) -> &[u32] {
        &self.cofaces[self.coface_start[i]..self.coface_start[i + 1]]
    }

    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        (0..self.len())
            .filter(|&i| self.cofaces(i).is_empty())
            .map(|i| &self.simplices[i])
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, n)| if k % 2 == 0 { *n as i64 } else { -(*n as i64) })
            .sum()
    }

    /// Largest dimension of a simplex containing vertex `v`.
    pub fn local_dim(&self, v: Vertex) -> usize {
        self.cofaces(v as usize)
            .iter()
            .map(|&t| self.simplex_dim(t as usize))
            .max()
            .unwrap_or(0)
    }

    pub fn skeleton(&self, k: usize) -> Complex {
        let keep: Vec<Simplex> = self
            .simplices
            .iter()
            .filter(|s| s.dim() <= k)
            .cloned()
            .collect();
        Complex::from_closed(keep)
    }

    /// Lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}, relabelled densely. The second
    /// component maps link vertices back to vertices of `self`.
    pub fn combinatorial_link(&self, sigma: &Simplex) -> Result<(Complex, Vec<Vertex>)> {
        let si = self
            .index_of(sigma)
            .ok_or_else(|| SimplicialError::NotInComplex(sigma.0.clone()))?;
        let mut faces: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        let mut verts: BTreeSet<Vertex> = BTreeSet::new();
        for &t in self.cofaces(si) {
            let rest: Vec<Vertex> = self.simplices[t as usize]
                .0
                .iter()
                .copied()
                .filter(|v| !sigma.contains(*v))
                .collect();
            verts.extend(rest.iter().copied());
            faces.insert(rest);
        }
        let back: Vec<Vertex> = verts.into_iter().collect();
        let fwd: HashMap<Vertex, Vertex> = back
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as Vertex))
            .collect();
        let sims: Vec<Simplex> = faces
            .into_iter()
            .map(|f| Simplex(f.iter().map(|v| fwd[v]).collect()))
            .collect();
        Ok((Complex::from_closed(sims), back))
    }

    /// Triangulated link of a point in the open simplex σ: the join of
    /// S^{dim σ - 1} (boundary of a cross-polytope) with Lk(σ).
    pub fn geometric_link(&self, sigma: &Simplex) -> Result<GeometricLink> {
        let (lk, back) = self.combinatorial_link(sigma)?;
        let k = sigma.dim();
        let nl = lk.n_vertices() as Vertex;
        let sigma_idx = self.index_of(sigma).expect("checked above");
        let mut gens: Vec<Simplex> = Vec::new();
        let sphere_max: Vec<Vec<Vertex>> = (0..(1u32 << k))
            .map(|signs| {
                (0..k as u32)
                    .map(|i| nl + 2 * i + (signs >> i & 1))
                    .collect()
            })
            .collect();
        let link_max: Vec<&Simplex> = lk.maximal_simplices();
        if k == 0 {
            gens.extend(link_max.into_iter().cloned());
        } else if link_max.is_empty() {
            gens.extend(sphere_max.into_iter().map(Simplex::from_sorted));
        } else {
            for l in &link_max {
                for s in &sphere_max {
                    let mut v = l.0.clone();
                    v.extend_from_slice(s);
                    gens.push(Simplex::from_sorted(v));
                }
            }
        }
        let complex = Complex::from_simplices(gens).expect("join is dense");
        let carrier = complex
            .simplices
            .iter()
            .map(|s| {
                let rho: Vec<Vertex> = s
                    .0
                    .iter()
                    .filter(|&&v| v < nl)
                    .map(|&v| back[v as usize])
                    .collect();
                if rho.is_empty() {
                    sigma_idx
                } else {
                    let mut u = rho;
                    u.extend_from_slice(&sigma.0);
                    u.sort_unstable();
                    self.index_of(&Simplex(u)).expect("link face joins σ")
                }
            })
            .collect();
        Ok(GeometricLink { complex, carrier })
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter of
    /// simplex `i` of `self`; the carrier of a chain is its top element.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let mut gens = Vec::new();
        for s in self.maximal_simplices() {
            let mut perm: Vec<Vertex> = s.0.clone();
            permutations(&mut perm, 0, &mut |p| {
                let chain: Vec<Vertex> = (1..=p.len())
                    .map(|j| {
                        let mut f = p[..j].to_vec();
                        f.sort_unstable();
                        self.index[&Simplex(f)] as Vertex
                    })
                    .collect();
                gens.push(Simplex::from_sorted(chain));
            });
        }
        let complex = Complex::from_simplices(gens).expect("barycenters are dense");
        let carrier = complex
            .simplices
            .iter()
            .map(|s| *s.0.last().unwrap() as usize)
            .collect();
        Subdivision { complex, carrier }
    }

    /// Apply a vertex map to every maximal simplex; the result uses the image
    /// ids compacted to `0..m` in increasing order.
    pub fn glue(&self, map: &[Vertex]) -> Result<Mapped> {
        if map.len() != self.n_vertices {
            return Err(SimplicialError::MapLength {
                expected: self.n_vertices,
                got: map.len(),
            });
        }
        let mut targets: Vec<Vertex> = map.to_vec();
        targets.sort_unstable();
        targets.dedup();
        let rank: HashMap<Vertex, Vertex> = targets
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as Vertex))
            .collect();
        let vmap: Vec<Vertex> = map.iter().map(|v| rank[v]).collect();
        let mut gens = Vec::new();
        for s in self.maximal_simplices() {
            let mut img: Vec<Vertex> = s.0.iter().map(|&v| vmap[v as usize]).collect();
            img.sort_unstable();
            if img.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::DegenerateGlue(s.0.clone()));
            }
            gens.push(Simplex(img));
        }
        // a collapsing face would make some maximal coface collapse as well
        let complex = Complex::from_simplices(gens)?;
        Ok(Mapped {
            complex,
            vertex_maps: vec![vmap],
        })
    }
}

fn permutations(v: &mut Vec<Vertex>, k: usize, out: &mut impl FnMut(&[Vertex])) {
    if k == v.len() {
        out(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// A link together with, for each of its simplices, the index of the simplex
/// of the ambient complex containing the corresponding points.
#[derive(Debug, Clone)]
pub struct GeometricLink {
    pub complex: Complex,
    pub carrier: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: Complex,
    /// New simplex index → old simplex index.
    pub carrier: Vec<usize>,
}

/// A constructed complex together with the vertex maps of its inputs.
#[derive(Debug, Clone)]
pub struct Mapped {
    pub complex: Complex,
    pub vertex_maps: Vec<Vec<Vertex>>,
}

fn shifted<'a>(k: &'a Complex, map: &[Vertex]) -> impl Iterator<Item = Simplex> + 'a {
    let map = map.to_vec();
    k.maximal_simplices().into_iter().map(move |s| {
        let mut v: Vec<Vertex> = s.0.iter().map(|&x| map[x as usize]).collect();
        v.sort_unstable();
        Simplex(v)
    })
}

pub fn disjoint_union(a: &Complex, b: &Complex) -> Mapped {
    let na = a.n_vertices() as Vertex;
    let ma: Vec<Vertex> = (0..na).collect();
    let mb: Vec<Vertex> = (0..b.n_vertices() as Vertex).map(|v| v + na).collect();
    let gens: Vec<Simplex> = shifted(a, &ma).chain(shifted(b, &mb)).collect();
    Mapped {
        complex: Complex::from_simplices(gens).expect("dense"),
        vertex_maps: vec![ma, mb],
    }
}

/// Identify vertex `pa` of `a` with vertex `pb` of `b`.
pub fn wedge(a: &Complex, pa: Vertex, b: &Complex, pb: Vertex) -> Result<Mapped> {
    if pa as usize >= a.n_vertices() {
        return Err(SimplicialError::NotAVertex(pa));
    }
    if pb as usize >= b.n_vertices() {
        return Err(SimplicialError::NotAVertex(pb));
    }
    let na = a.n_vertices() as Vertex;
    let ma: Vec<Vertex> = (0..na).collect();
    let mb: Vec<Vertex> = (0..b.n_vertices() as Vertex)
        .map(|v| match v.cmp(&pb) {
            std::cmp::Ordering::Equal => pa,
            std::cmp::Ordering::Less => na + v,
            std::cmp::Ordering::Greater => na + v - 1,
        })
        .collect();
    let gens: Vec<Simplex> = shifted(a, &ma).chain(shifted(b, &mb)).collect();
    Ok(Mapped {
        complex: Complex::from_simplices(gens)?,
        vertex_maps: vec![ma, mb],
    })
}

/// Cone with apex `n` (the new last vertex).
pub fn cone(k: &Complex) -> Complex {
    let apex = k.n_vertices() as Vertex;
    let mut gens: Vec<Simplex> = k
        .maximal_simplices()
        .into_iter()
        .map(|s| {
            let mut v = s.0.clone();
            v.push(apex);
            Simplex(v)
        })
        .collect();
    gens.push(Simplex::vertex(apex));
    Complex::from_simplices(gens).expect("dense")
}

/// Suspension with poles `n` and `n + 1`.
pub fn suspension(k: &Complex) -> Complex {
    let n = k.n_vertices() as Vertex;
    let mut gens = vec![Simplex::vertex(n), Simplex::vertex(n + 1)];
    for s in k.maximal_simplices() {
        for pole in [n, n + 1] {
            let mut v = s.0.clone();
            v.push(pole);
            gens.push(Simplex(v));
        }
    }
    Complex::from_simplices(gens).expect("dense")
}

/// Staircase triangulation of |A| × |B|; vertex `(a, b)` gets id `a·n_B + b`.
pub fn product(a: &Complex, b: &Complex) -> Result<Complex> {
    if a.is_empty() || b.is_empty() {
        return Err(SimplicialError::EmptyFactor);
    }
    let nb = b.n_vertices() as Vertex;
    let mut gens = Vec::new();
    for s in a.maximal_simplices() {
        for t in b.maximal_simplices() {
            let p = s.0.len() - 1;
            let q = t.0.len() - 1;
            // lattice paths: choose which of the p+q steps advance in A
            for steps in 0u64..(1u64 << (p + q)) {
                if steps.count_ones() as usize != p {
                    continue;
                }
                let (mut i, mut j) = (0usize, 0usize);
                let mut v = vec![s.0[0] * nb + t.0[0]];
                for k in 0..p + q {
                    if steps >> k & 1 == 1 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    v.push(s.0[i] * nb + t.0[j]);
                }
                v.sort_unstable();
                gens.push(Simplex(v));
            }
        }
    }
    Complex::from_simplices(gens)
}

/// `K` pulled back along the first factor of `K × I`: the vertex projection of
/// a product complex built by [`product`].
pub fn product_projection(nb: usize, v: Vertex) -> (Vertex, Vertex) {
    (v / nb as Vertex, v % nb as Vertex)
}
