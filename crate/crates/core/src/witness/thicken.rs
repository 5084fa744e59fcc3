//! Raising a surface (Y, φ) with Λ̃φ = 0 to an euler 3-complex Ỹ ⊇ Y with
//! Ω̃1 ≡ φ mod 8, 4, 2 on the open 2-, 1-, 0-simplices of Y.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::simplicial::{build_complex, Complex};

use super::surface::DecoratedSurface;
use super::{Result, WitnessError};

/// One simplex Δ of Y: the multiplicity m of its attachment and the output
/// simplices making up the open Δ.
#[derive(Clone, Debug, Serialize)]
pub struct ThickStratum {
    pub simplex: Vec<u32>,
    pub phi: i64,
    pub m: u32,
    pub cells: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct Thickened {
    pub complex: Arc<Complex>,
    pub strata: Vec<ThickStratum>,
    /// ∫φ dχ over Y.
    pub integral: i64,
}

impl Thickened {
    /// Histogram "dim:m" → count.
    pub fn multiplicities(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for s in &self.strata {
            *h.entry(format!("{}:{}", s.simplex.len() - 1, s.m)).or_default() += 1;
        }
        h
    }
}

/// m for a simplex of dimension `d` carrying `phi`: the least positive
/// solution of m ≡ 1 − φ (mod 2), m ≡ φ (mod 4), m ≡ 1 − φ (mod 8).
pub fn multiplicity(d: usize, phi: i64) -> u32 {
    let (r, modulus) = match d {
        0 => (1 - phi, 2),
        1 => (phi, 4),
        _ => (1 - phi, 8),
    };
    match r.rem_euclid(modulus) {
        0 => modulus as u32,
        m => m as u32,
    }
}

/// Attach to every vertex a wedge of m circles, to every edge m − 1 further
/// arcs between its ends (a suspension of m points), and to every triangle
/// the join of a wedge of m circles with its boundary, the wedge point being
/// the center of a stellar subdivision of the triangle.
pub fn thicken(y: &DecoratedSurface) -> Result<Thickened> {
    let mut next = y.n_vertices();
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut strata = Vec::with_capacity(y.simplices().len());
    for (s, &phi) in y.simplices() {
        if s.len() > 3 {
            return Err(WitnessError::Construction("surface of dimension > 2".into()));
        }
        let m = multiplicity(s.len() - 1, phi);
        let cells = match s.len() {
            1 => {
                let v = s[0];
                gens.push(vec![v]);
                for _ in 0..m {
                    let (a, b) = (fresh(), fresh());
                    gens.extend([vec![v, a], vec![a, b], vec![v, b]]);
                }
                vec![s.clone()]
            }
            2 => {
                gens.push(s.clone());
                for _ in 1..m {
                    let w = fresh();
                    gens.extend([vec![s[0], w], vec![w, s[1]]]);
                }
                vec![s.clone()]
            }
            _ => {
                let c = fresh();
                let rim = [[s[0], s[1]], [s[1], s[2]], [s[0], s[2]]];
                for _ in 0..m {
                    let (a, b) = (fresh(), fresh());
                    for r in [[c, a], [a, b], [c, b]] {
                        for e in rim {
                            gens.push(vec![r[0], r[1], e[0], e[1]]);
                        }
                    }
                }
                let mut cells = vec![vec![c]];
                for &v in s {
                    cells.push(vec![v, c]);
                }
                for e in rim {
                    cells.push(vec![e[0], e[1], c]);
                }
                cells
            }
        };
        strata.push(ThickStratum {
            simplex: s.clone(),
            phi,
            m,
            cells,
        });
    }
    let complex = Arc::new(build_complex(&gens)?);
    Ok(Thickened {
        complex,
        strata,
        integral: y.integral(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThickeningReport {
    pub euler: bool,
    /// Ω̃1 ≡ φ mod 8 / 4 / 2 on the open 2-, 1-, 0-simplices of Y.
    pub congruences: bool,
    /// Ω̃1 vanishes off Y.
    pub support_in_y: bool,
    /// χ(Ỹ) ≡ ∫φ dχ (mod 2).
    pub chi_matches_integral: bool,
    pub failures: Vec<String>,
}

impl ThickeningReport {
    pub fn passes(&self) -> bool {
        self.euler && self.congruences && self.support_in_y && self.chi_matches_integral
    }
}

pub fn check_thickening(t: &Thickened) -> Result<ThickeningReport> {
    let k = &t.complex;
    let one = ConstructibleFunction::one(k.clone());
    let euler = one.is_euler().expect("integer valued");
    let omega = one.co_half_link();
    let mut failures = Vec::new();
    let mut in_y = vec![false; k.len()];
    for s in &t.strata {
        let modulus = 1i64 << s.simplex.len();
        for c in &s.cells {
            let mut c = c.clone();
            c.sort_unstable();
            let i = k.index_of_vertices(&c).ok_or_else(|| {
                WitnessError::Construction(format!("cell {c:?} missing from thickening"))
            })?;
            in_y[i] = true;
            let ok = (omega.value(i) - &Dyadic::from(s.phi))
                .mod_pow2(modulus.trailing_zeros())
                .is_ok_and(|r| r == 0.into());
            if !ok && failures.len() < 16 {
                failures.push(format!(
                    "Ω̃1 = {} on {c:?}, φ = {} (mod {modulus})",
                    omega.value(i),
                    s.phi
                ));
            }
        }
    }
    let congruences = failures.is_empty();
    let stray = (0..k.len()).find(|&i| !in_y[i] && !omega.value(i).is_zero());
    if let Some(i) = stray {
        failures.push(format!("Ω̃1 = {} off Y at {:?}", omega.value(i), k.simplex(i)));
    }
    let chi_matches_integral = (k.euler_characteristic() - t.integral) % 2 == 0;
    Ok(ThickeningReport {
        euler,
        congruences,
        support_in_y: stray.is_none(),
        chi_matches_integral,
        failures,
    })
}
