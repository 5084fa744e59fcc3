//! Independence witnesses.
//!
//! For a chosen characteristic number the pipeline wedges elementary blocks
//! into a decorated curve, fills it with discs and bubbles into a surface
//! carrying φ with Λ̃φ = 0, and thickens the surface into a compact 3-complex
//! whose only odd invariant is the chosen one. Every output is re-checked by
//! [`crate::invariants`] before it is returned.

mod curve;
mod surface;
mod thicken;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::invariants::{
    ak_numbers, euler_conditions, nonzero_char_numbers, BaseProfile, CharIndex, Invariant,
    InvariantError, Mode, DEFAULT_CAP,
};
use crate::simplicial::{build_complex, wedge, Complex, SimplicialError};

pub use curve::{
    build_l1, build_l1_for_index, elementary_block, mask_to_vset, vset_to_mask, wedge_decorated,
    BlockKind, CurveArc, DecoratedCurve, L1Builder, RealizedCurve, VExpr, V_COUNT,
};
pub use surface::{
    adjust_mod4, bubble_counts, disc_group, fill_cycles, stratum_values, with_bubbles,
    ArcStratum, DecoratedSurface, SurfaceStats,
};
pub use thicken::{check_thickening, multiplicity, thicken, ThickStratum, Thickened, ThickeningReport};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("unknown block kind `{0}`")]
    UnknownBlock(String),
    #[error("decorated curve invariant violated: {0}")]
    Curve(String),
    #[error("index {0} is even on every space; there is nothing to witness")]
    TrivialIndex(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

pub type Result<T> = std::result::Result<T, WitnessError>;

/// Intermediate objects of one run.
pub struct Pipeline {
    pub curve: DecoratedCurve,
    pub filled: DecoratedSurface,
    pub surface: DecoratedSurface,
    pub thickened: Thickened,
}

/// Curve, surfaces and thickening for a characteristic number.
pub fn pipeline(idx: CharIndex) -> Result<Pipeline> {
    let curve = build_l1_for_index(idx)?;
    let filled = fill_cycles(&curve)?;
    let surface = adjust_mod4(&filled)?;
    let thickened = thicken(&surface)?;
    Ok(Pipeline {
        curve,
        filled,
        surface,
        thickened,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub euler_characteristic: i64,
    pub euler: bool,
    /// Nonzero indices in extended numbering, as "extended:<hex>".
    pub nonzero: Vec<String>,
    pub ak_integrals_odd: [bool; 4],
}

/// How a witness was made.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub target: String,
    pub stages: Vec<String>,
    /// Block name → multiplicity.
    pub blocks: BTreeMap<String, usize>,
    pub curve_points: u32,
    pub curve_arcs: usize,
    pub surface: Option<SurfaceStats>,
    /// "dim:m" → number of simplices of Y thickened with multiplicity m.
    pub thickening: BTreeMap<String, usize>,
    pub f_vector: Vec<usize>,
    pub verification: Verification,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub target: Invariant,
    pub complex: Arc<Complex>,
    pub provenance: Provenance,
}

/// ∂Δ⁴ ∨ ∂Δ⁴.
pub fn s3_wedge_s3() -> Complex {
    let s3: Vec<Vec<u32>> = (0..5)
        .map(|skip| (0..5).filter(|&v| v != skip).collect())
        .collect();
    let s = build_complex(&s3).expect("sphere");
    wedge(&s, 0, &s, 0).expect("vertex 0").complex
}

pub fn generate_witness(target: Invariant) -> Result<Witness> {
    match target {
        Invariant::Chi => {
            let complex = Arc::new(s3_wedge_s3());
            let verification = verify(&complex, target)?;
            let provenance = Provenance {
                target: "chi".into(),
                stages: vec!["wedge of two boundaries of the 4-simplex".into()],
                blocks: BTreeMap::new(),
                curve_points: 0,
                curve_arcs: 0,
                surface: None,
                thickening: BTreeMap::new(),
                f_vector: complex.f_vector(),
                verification,
            };
            Ok(Witness {
                target,
                complex,
                provenance,
            })
        }
        Invariant::Index(idx) => {
            if idx.is_trivial() {
                return Err(WitnessError::TrivialIndex(idx.to_string()));
            }
            let run = pipeline(idx)?;
            let report = check_thickening(&run.thickened)?;
            if !report.passes() {
                return Err(WitnessError::Verification(format!(
                    "thickening: {}",
                    report.failures.join("; ")
                )));
            }
            let complex = run.thickened.complex.clone();
            let verification = verify(&complex, target)?;
            let provenance = Provenance {
                target: idx.to_string(),
                stages: vec![
                    "wedge elementary blocks".into(),
                    "cancel divisor sums by disjoint union".into(),
                    "fill parity cycles with discs".into(),
                    "bubbles for residues mod 4".into(),
                    "thicken".into(),
                ],
                blocks: run
                    .curve
                    .blocks()
                    .iter()
                    .map(|(k, c)| (k.name(), *c))
                    .collect(),
                curve_points: run.curve.n_points(),
                curve_arcs: run.curve.arcs().len(),
                surface: Some(run.surface.stats().clone()),
                thickening: run.thickened.multiplicities(),
                f_vector: complex.f_vector(),
                verification,
            };
            Ok(Witness {
                target,
                complex,
                provenance,
            })
        }
    }
}

/// Recompute the complete battery of `complex` and demand that exactly the
/// target invariant is odd.
pub fn verify(complex: &Arc<Complex>, target: Invariant) -> Result<Verification> {
    let fail = |m: String| Err(WitnessError::Verification(m));
    if complex.dim() != 3 {
        return fail(format!("dimension {}", complex.dim()));
    }
    let p = BaseProfile::new(complex.clone())?;
    if !p.half_link_phi_zero {
        return fail("Λ̃φ ≠ 0".into());
    }
    let e = euler_conditions(&p);
    if !e.all() {
        return fail(format!("euler conditions {:?}", e.as_array()));
    }
    for (name, f) in [("δ", &p.delta), ("ε", &p.epsilon)] {
        if !f.co_half_link().values().iter().all(Dyadic::is_zero) {
            return fail(format!("Ω̃{name} ≠ 0"));
        }
    }
    let ak = ak_numbers(&p)?;
    let nz = nonzero_char_numbers(&p, Mode::Extended, DEFAULT_CAP)?;
    let Some(list) = nz.indices else {
        return fail(format!("{} nonzero characteristic numbers", nz.count));
    };
    let masks: Vec<u64> = list.iter().map(|i| i.mask()).collect();
    match target {
        Invariant::Chi => {
            if !ak.chi_odd || ak.integrals_odd.iter().any(|x| *x) || !masks.is_empty() {
                return fail("χ witness has other odd invariants".into());
            }
        }
        Invariant::Index(idx) => {
            if ak.chi_odd {
                return fail("χ is odd".into());
            }
            if masks != [idx.mask()] {
                return fail(format!("nonzero set {masks:x?}, wanted {:#x}", idx.mask()));
            }
            for (i, &odd) in ak.integrals_odd.iter().enumerate() {
                if odd != (idx.mask() == 1 << (3 + i)) {
                    return fail(format!("depth-two integral {i} disagrees"));
                }
            }
        }
    }
    Ok(Verification {
        euler_characteristic: complex.euler_characteristic(),
        euler: true,
        nonzero: list
            .iter()
            .map(|i| CharIndex::new(Mode::Extended, i.mask()).expect("valid").to_string())
            .collect(),
        ak_integrals_odd: ak.integrals_odd,
    })
}
