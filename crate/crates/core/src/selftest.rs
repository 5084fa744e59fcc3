//! Property suites run on seeded corpora. Each suite counts its cases and
//! records the first few failures verbatim.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::confun::ConstructibleFunction;
use crate::corpus::{self, named_spaces, random_complex, random_function, slice_of_product};
use crate::dyadic::Dyadic;
use crate::invariants::{
    ak_numbers, euler_conditions, generator_counts, link_report, BaseProfile, CharIndex,
    Invariant, Mode, DEFAULT_CAP,
};
use crate::polyops::{binomial_decompose, in_script_p, in_script_p_recursive};
use crate::simplicial::Complex;
use crate::witness::{
    elementary_block, fill_cycles, generate_witness, stratum_values, BlockKind, L1Builder,
};

const MAX_FAILURES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < MAX_FAILURES {
            self.failures.push(what());
        }
    }

    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub size: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub passes: bool,
}

/// Run every suite on `size` random complexes (and proportionally many
/// polynomials and witnesses).
pub fn run(size: usize, seed: u64) -> SelftestReport {
    let suites = vec![
        operator_identities(size, seed),
        geometric_link(size.div_ceil(2), seed + 1),
        support(size, seed + 2),
        slice(size.div_ceil(4), seed + 3),
        subdivision(size.div_ceil(4), seed + 4),
        polynomial_ring(20 * size, seed + 5),
        named(),
        counting(),
        curves(),
        witnesses(size.div_ceil(10)),
    ];
    let passes = suites.iter().all(Suite::passes);
    SelftestReport {
        size,
        seed,
        suites,
        passes,
    }
}

fn all_zero(f: &ConstructibleFunction) -> bool {
    f.values().iter().all(Dyadic::is_zero)
}

fn sample(rng: &mut impl Rng, max_simplices: usize, max_dim: usize) -> (Arc<Complex>, ConstructibleFunction) {
    let k = Arc::new(random_complex(rng, max_simplices, max_dim));
    let phi = random_function(rng, k.clone(), 3);
    (k, phi)
}

pub fn operator_identities(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("operator identities");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let (_, phi) = sample(&mut rng, 300, 4);
        let l = phi.link_op();
        let h = phi.half_link();
        let o = phi.co_half_link();
        let checks = [
            ("ΛΛ = 2Λ", l.link_op() == l.scale(&Dyadic::from(2))),
            ("Λ̃ + Ω̃ = I", h.add(&o).unwrap() == phi),
            ("Λ̃Λ̃ = Λ̃", h.half_link() == h),
            ("Ω̃Ω̃ = Ω̃", o.co_half_link() == o),
            ("Λ̃Ω̃ = 0", all_zero(&o.half_link())),
            ("Ω̃Λ̃ = 0", all_zero(&h.co_half_link())),
            ("∫Λ̃φ = 0", h.euler_integral().is_zero()),
            ("∫Ω̃φ = ∫φ", o.euler_integral() == phi.euler_integral()),
        ];
        for (name, ok) in checks {
            s.case(ok, || format!("case {case}: {name}"));
        }
    }
    s
}

pub fn geometric_link(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("closed form against geometric link");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let (_, phi) = sample(&mut rng, 120, 3);
        s.case(phi.link_op() == phi.link_op_geometric(), || format!("case {case}"));
    }
    s
}

/// dim supp φ ≤ 2l ⇒ dim supp Λ̃φ ≤ 2l − 1; dim supp φ ≤ 2l + 1 ⇒
/// dim supp Ω̃φ ≤ 2l.
pub fn support(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("support");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let (k, phi) = sample(&mut rng, 300, 4);
        let top = rng.gen_range(0..=k.dim().max(0) as usize);
        let phi = phi.restrict_to_skeleton(top);
        let d = phi.support_dim();
        let even = if d % 2 == 0 { d } else { d + 1 };
        let odd = if d % 2 == 1 { d } else { d + 1 };
        let h = phi.half_link().support_dim();
        let o = phi.co_half_link().support_dim();
        s.case(h < even, || format!("case {case}: dim supp φ = {d}, dim supp Λ̃φ = {h}"));
        s.case(o < odd, || format!("case {case}: dim supp φ = {d}, dim supp Ω̃φ = {o}"));
    }
    s
}

/// On X = K × I with W = K × {½}: (Λ̃φ)|W = Ω̃(φ|W), (Ω̃φ)|W = Λ̃(φ|W).
pub fn slice(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("slice");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let (k, phi_k) = sample(&mut rng, 40, 2);
        let sl = slice_of_product(&k);
        let phi_x = ConstructibleFunction::from_fn(sl.x.clone(), |i| phi_k.value(sl.to_k[i]).clone());
        let (hx, ox) = (phi_x.half_link(), phi_x.co_half_link());
        let (hk, ok) = (phi_k.half_link(), phi_k.co_half_link());
        let good = sl
            .slice
            .iter()
            .all(|&(xi, ki)| hx.value(xi) == ok.value(ki) && ox.value(xi) == hk.value(ki));
        s.case(good, || format!("case {case}"));
    }
    s
}

/// χ, Λ through the carrier, and the euler verdicts survive one barycentric
/// subdivision.
pub fn subdivision(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("subdivision");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let (k, phi) = sample(&mut rng, 40, 3);
        let sd = k.barycentric_subdivision();
        let fine = Arc::new(sd.complex.clone());
        s.case(fine.euler_characteristic() == k.euler_characteristic(), || {
            format!("case {case}: χ")
        });
        let pulled = phi.pull_through(fine.clone(), &sd.carrier);
        let lhs = pulled.link_op();
        let rhs = phi.link_op().pull_through(fine.clone(), &sd.carrier);
        s.case(lhs == rhs, || format!("case {case}: Λ"));
        let a = BaseProfile::new(k.clone()).map(|p| euler_conditions(&p).as_array());
        let b = BaseProfile::new(fine).map(|p| euler_conditions(&p).as_array());
        s.case(a.ok() == b.ok(), || format!("case {case}: euler conditions"));
    }
    s
}

pub fn polynomial_ring(n: usize, seed: u64) -> Suite {
    let mut s = Suite::new("polynomial ring");
    let mut rng = corpus::rng(seed);
    for case in 0..n {
        let p = corpus::random_polynomial(&mut rng, 8, 8);
        s.case(in_script_p(&p) == in_script_p_recursive(&p), || format!("case {case}: {p}"));
        let back = binomial_decompose(&p).map(|d| d.reconstruct() == p);
        s.case(back.unwrap_or(true), || format!("case {case}: decomposition of {p}"));
    }
    s
}

/// Closed manifolds pass everything; S³ ∨ S³ has odd χ and nothing else.
pub fn named() -> Suite {
    let mut s = Suite::new("named spaces");
    for (name, k) in named_spaces() {
        let Ok(r) = link_report(Arc::new(k), Mode::Extended, DEFAULT_CAP) else {
            s.case(false, || format!("{name}: report failed"));
            continue;
        };
        // an endpoint of an interval has a one-point link
        s.case(r.euler.one == (name != "interval"), || format!("{name}: euler {}", r.euler.one));
        if matches!(name, "circle" | "sphere2" | "torus" | "sphere3") {
            s.case(r.passes, || format!("{name}: should pass"));
        }
    }
    let w = crate::witness::s3_wedge_s3();
    let ok = BaseProfile::new(Arc::new(w)).and_then(|p| ak_numbers(&p)).map(|d| {
        d.chi_odd && !d.integrals_odd.iter().any(|x| *x)
    });
    s.case(ok.unwrap_or(false), || "S³ ∨ S³".into());
    s
}

pub fn counting() -> Suite {
    let mut s = Suite::new("counting");
    let b = generator_counts(Mode::Base);
    let e = generator_counts(Mode::Extended);
    s.case(b.total == (1 << 29) - 29, || format!("base total {}", b.total));
    s.case(e.total == (1 << 43) - 43, || format!("extended total {}", e.total));
    s.case(e.family_sizes == [4, 4, 18, 14], || format!("families {:?}", e.family_sizes));
    s
}

/// Elementary blocks satisfy their invariants and the ordering property;
/// built curves have even vertex sums outside V₂; filled strata match the
/// disc recipe.
pub fn curves() -> Suite {
    let mut s = Suite::new("decorated curves");
    for kind in BlockKind::all() {
        let b = elementary_block(kind);
        s.case(b.check().is_ok(), || format!("{kind}: invariants"));
        let v = kind.designated().index();
        let ordered = b
            .odd_exprs()
            .map(|e| e.iter().all(|x| x >> v & 1 == 1 && x >> (v + 1) == 0))
            .unwrap_or(false);
        s.case(ordered, || format!("{kind}: ordering"));
    }
    let mut builder = L1Builder::new();
    for set in [1u64 << 1, 1 << 8, 1 << 3 | 1 << 20, 1 << 31] {
        let Ok(c) = builder.build(set) else {
            s.case(false, || format!("build {set:#x}"));
            continue;
        };
        let sums_even = c.odd_exprs().map(|e| {
            let total = e.iter().fold(0u64, |a, x| a ^ x);
            total & 0b1111000 == total
        });
        s.case(sums_even.unwrap_or(false), || format!("build {set:#x}: vertex sums"));
        let filled = fill_cycles(&c);
        let strata_ok = filled.is_ok_and(|f| {
            f.strata()
                .iter()
                .all(|st| {
                    let v = stratum_values(&st.faces);
                    // α, β, γ mod 2; δ, ε mod 4
                    (0..5).all(|i| (v[i] - st.target[i]) % if i < 3 { 2 } else { 4 } == 0)
                })
        });
        s.case(strata_ok, || format!("build {set:#x}: strata"));
    }
    s
}

/// End to end on a few cheap indices.
pub fn witnesses(n: usize) -> Suite {
    const CHEAP: [u64; 8] = [0x8, 0x81, 0x10, 0x102, 0x20, 0x8004, 0x40, 0x1001];
    let mut s = Suite::new("witnesses");
    s.case(generate_witness(Invariant::Chi).is_ok(), || "chi".into());
    for &m in CHEAP.iter().take(n.clamp(1, CHEAP.len())) {
        let idx = CharIndex::new(Mode::Extended, m).expect("valid");
        let r = generate_witness(Invariant::Index(idx));
        s.case(r.is_ok(), || format!("{idx}: {}", r.err().map(|e| e.to_string()).unwrap_or_default()));
    }
    s
}

#[cfg(test)]
mod tests {
    #[test]
    fn small_run_passes() {
        let r = super::run(6, 11);
        for s in &r.suites {
            assert!(s.passes(), "{}: {:?}", s.name, s.failures);
            assert!(s.cases > 0, "{}", s.name);
        }
    }
}
