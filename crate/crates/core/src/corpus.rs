//! Seeded random complexes, functions and polynomials, plus a few named
//! spaces. Used by `selftest` and the property suites.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::polyops::Polynomial;
use crate::simplicial::{build_complex, product, product_projection, wedge, Complex, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random complex with at most `max_simplices` simplices and dimension at
/// most `max_dim`. Vertices `0..n` all appear.
pub fn random_complex(rng: &mut impl Rng, max_simplices: usize, max_dim: usize) -> Complex {
    let max_n = max_simplices.clamp(1, 10);
    let n = rng.gen_range(1..=max_n);
    let mut all: BTreeSet<Vec<Vertex>> = (0..n as Vertex).map(|v| vec![v]).collect();
    for _ in 0..4 * n {
        let size = rng.gen_range(2..=max_dim + 1).min(n);
        if size < 2 {
            break;
        }
        let mut s: Vec<Vertex> = sample(rng, n, size).into_iter().map(|v| v as Vertex).collect();
        s.sort_unstable();
        let new: Vec<Vec<Vertex>> = (1u32..1 << size)
            .map(|bits| {
                (0..size)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect()
            })
            .filter(|f: &Vec<Vertex>| !all.contains(f))
            .collect();
        if all.len() + new.len() > max_simplices {
            continue;
        }
        all.extend(new);
    }
    let gens: Vec<Vec<Vertex>> = all.into_iter().collect();
    build_complex(&gens).expect("dense by construction")
}

/// Values n/2^e with |n| ≤ 8 and e ≤ `max_exp`.
pub fn random_function(
    rng: &mut impl Rng,
    complex: Arc<Complex>,
    max_exp: u32,
) -> ConstructibleFunction {
    let n = complex.len();
    let values = (0..n)
        .map(|_| Dyadic::new(rng.gen_range(-8i64..=8), rng.gen_range(0..=max_exp)))
        .collect();
    ConstructibleFunction::new(complex, values).expect("one value per simplex")
}

pub fn random_integer_function(rng: &mut impl Rng, complex: Arc<Complex>) -> ConstructibleFunction {
    random_function(rng, complex, 0)
}

/// Degree ≤ `max_degree`, coefficients n/d with |n| ≤ 8 and d a power of
/// two ≤ `max_den`.
pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize, max_den: u32) -> Polynomial {
    let deg = rng.gen_range(0..=max_degree);
    let max_e = max_den.max(1).ilog2();
    let coeffs = (0..=deg)
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.gen_range(-8i64..=8)),
                BigInt::from(1u32 << rng.gen_range(0..=max_e)),
            )
        })
        .collect();
    Polynomial::new(coeffs)
}

/// ∂Δ^{d+1}, a triangulated d-sphere.
pub fn sphere(d: usize) -> Complex {
    let n = d as Vertex + 2;
    let gens: Vec<Vec<Vertex>> = (0..n)
        .map(|skip| (0..n).filter(|&v| v != skip).collect())
        .collect();
    build_complex(&gens).expect("sphere")
}

/// A path with `len` edges.
pub fn path(len: usize) -> Complex {
    let gens: Vec<Vec<Vertex>> = (0..len as Vertex).map(|i| vec![i, i + 1]).collect();
    build_complex(&gens).expect("path")
}

/// The 7-vertex torus.
pub fn torus() -> Complex {
    let gens: Vec<Vec<Vertex>> = (0..7)
        .flat_map(|i| {
            [
                vec![i, (i + 1) % 7, (i + 3) % 7],
                vec![i, (i + 2) % 7, (i + 3) % 7],
            ]
        })
        .collect();
    build_complex(&gens).expect("torus")
}

/// The 6-vertex real projective plane.
pub fn projective_plane() -> Complex {
    let gens = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    let gens: Vec<Vec<Vertex>> = gens.iter().map(|s| s.to_vec()).collect();
    build_complex(&gens).expect("projective plane")
}

/// Named spaces with small triangulations.
pub fn named_spaces() -> Vec<(&'static str, Complex)> {
    let point = build_complex(&[vec![0]]).expect("point");
    let s1 = sphere(1);
    let eight = wedge(&s1, 0, &s1, 0).expect("vertex").complex;
    let s2 = sphere(2);
    let s3 = sphere(3);
    let pinched = wedge(&s2, 0, &s2, 0).expect("vertex").complex;
    vec![
        ("point", point),
        ("interval", path(1)),
        ("circle", s1),
        ("figure eight", eight),
        ("sphere2", s2),
        ("torus", torus()),
        ("projective plane", projective_plane()),
        ("two spheres at a point", pinched),
        ("sphere3", s3),
    ]
}

/// X = K × I with I a path of two edges, W = K × {middle vertex} ⊂ X, and
/// for every simplex of W the simplex of K under it.
pub struct Slice {
    pub x: Arc<Complex>,
    /// Index in X of each simplex of the slice, paired with the index in K
    /// of its projection.
    pub slice: Vec<(usize, usize)>,
    /// Projection of every simplex of X to its open simplex in K.
    pub to_k: Vec<usize>,
}

pub fn slice_of_product(k: &Complex) -> Slice {
    let interval = path(2);
    let nb = interval.n_vertices();
    let x = product(k, &interval).expect("product of finite complexes");
    let mut slice = Vec::new();
    let mut to_k = Vec::with_capacity(x.len());
    for (i, s) in x.simplices().iter().enumerate() {
        let (mut a, b): (Vec<Vertex>, Vec<Vertex>) =
            s.vertices().iter().map(|&v| product_projection(nb, v)).unzip();
        a.sort_unstable();
        a.dedup();
        let ki = k.index_of_vertices(&a).expect("projection is a simplex");
        to_k.push(ki);
        if b.iter().all(|&v| v == 1) {
            slice.push((i, ki));
        }
    }
    Slice {
        x: Arc::new(x),
        slice,
        to_k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_complexes_respect_bounds() {
        let mut r = rng(7);
        for _ in 0..50 {
            let k = random_complex(&mut r, 60, 3);
            assert!(k.len() <= 60);
            assert!(k.dim() <= 3);
        }
    }

    #[test]
    fn named_spaces_have_expected_chi() {
        let chi: Vec<i64> = named_spaces().iter().map(|(_, k)| k.euler_characteristic()).collect();
        assert_eq!(chi, vec![1, 1, 0, -1, 2, 0, 1, 3, 0]);
    }

    #[test]
    fn slice_is_a_copy_of_k() {
        let k = sphere(1);
        let s = slice_of_product(&k);
        assert_eq!(s.slice.len(), k.len());
        assert_eq!(s.x.euler_characteristic(), 0);
    }
}
