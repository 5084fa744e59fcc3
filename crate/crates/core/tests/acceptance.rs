//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails. Every comparison is exact; the only tolerances
//! are the wall-clock limits printed next to each timed criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use confun::corpus::{self, random_complex, random_function, random_integer_function, random_polynomial};
use confun::invariants::{
    ak_numbers, char_number, euler_conditions, generator_counts, nonzero_char_numbers, BaseProfile,
    CharIndex, Invariant, Mode, DEFAULT_CAP, FAMILY_SIZES, S_PRIME,
};
use confun::polyops::{disc_parities, in_8a, in_script_p, in_script_p_recursive, mod8_reduce};
use confun::simplicial::{product, product_projection};
use confun::witness::{
    check_thickening, elementary_block, generate_witness, pipeline, BlockKind, VExpr,
};
use confun::{build_complex, ConstructibleFunction, Dyadic, Polynomial};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn is_zero(f: &ConstructibleFunction) -> bool {
    f.values().iter().all(Dyadic::is_zero)
}

/// The random corpus shared by criteria 1 and 3: complexes with at most 300
/// simplices and dimension at most 4, four dyadic functions on each.
fn corpus_functions(count: usize) -> Vec<ConstructibleFunction> {
    let mut rng = corpus::rng(0xacce);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = Arc::new(random_complex(&mut rng, 300, 4));
        for _ in 0..4 {
            out.push(random_function(&mut rng, k.clone(), 3));
        }
    }
    out
}

const CORPUS: usize = 520;

fn operator_identities() -> Outcome {
    let fs = corpus_functions(CORPUS);
    let t = Instant::now();
    let two = Dyadic::from(2);
    let mut bad = 0;
    for phi in &fs {
        let l = phi.link_op();
        let h = phi.half_link();
        let o = phi.co_half_link();
        let ok = l.link_op() == l.scale(&two)
            && h.add(&o).unwrap() == *phi
            && h.half_link() == h
            && o.co_half_link() == o
            && is_zero(&o.half_link())
            && is_zero(&h.co_half_link())
            && h.euler_integral().is_zero()
            && o.euler_integral() == phi.euler_integral();
        bad += usize::from(!ok);
    }
    let secs = t.elapsed().as_secs_f64();
    let max = fs.iter().map(|f| f.complex().len()).max().unwrap_or(0);
    outcome(
        bad == 0 && secs < 10.0,
        format!("{} functions (≤ {max} simplices), {bad} violations, {secs:.2} s (limit 10 s)", fs.len()),
    )
}

/// All chains (sorted by inclusion, possibly empty) among `elems`.
fn chains(elems: &[usize], sets: &[&[u32]]) -> Vec<Vec<usize>> {
    fn grow(last: Option<usize>, elems: &[usize], sets: &[&[u32]], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for &e in elems {
            if last.is_none_or(|l| proper_face(sets[l], sets[e])) {
                cur.push(e);
                grow(Some(e), elems, sets, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(None, elems, sets, &mut Vec::new(), &mut out);
    out
}

fn proper_face(a: &[u32], b: &[u32]) -> bool {
    a.len() < b.len() && a.iter().all(|v| b.contains(v))
}

/// Λφ(σ) as the euler integral of φ over the link of the barycenter of σ in
/// the barycentric subdivision. That link is the complex of chains of
/// simplices comparable with σ, σ itself excluded; the open cell of a chain c
/// has dimension |c| − 1 and lies in the open simplex max(c ∪ {σ}).
fn barycentric_link(phi: &ConstructibleFunction) -> Vec<Dyadic> {
    let k = phi.complex();
    let sets: Vec<&[u32]> = k.simplices().iter().map(|s| s.vertices()).collect();
    let n = sets.len();
    (0..n)
        .map(|s| {
            let below: Vec<usize> = (0..n).filter(|&j| proper_face(sets[j], sets[s])).collect();
            let above: Vec<usize> = (0..n).filter(|&j| proper_face(sets[s], sets[j])).collect();
            let (down, up) = (chains(&below, &sets), chains(&above, &sets));
            let mut acc = Dyadic::zero();
            for d in &down {
                for u in &up {
                    let len = d.len() + u.len();
                    if len == 0 {
                        continue;
                    }
                    let top = u.last().copied().unwrap_or(s);
                    if len % 2 == 1 {
                        acc += phi.value(top);
                    } else {
                        acc -= phi.value(top);
                    }
                }
            }
            acc
        })
        .collect()
}

fn link_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = corpus::rng(0x0a1e);
    let mut bad = 0;
    let mut simplices = 0;
    for _ in 0..100 {
        let k = Arc::new(random_complex(&mut rng, 200, 4));
        simplices += k.len();
        let phi = random_function(&mut rng, k, 2);
        if phi.link_op().values() != barycentric_link(&phi).as_slice() {
            bad += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        bad == 0 && secs < 60.0,
        format!("100 complexes ({simplices} simplices), {bad} mismatches, {secs:.2} s (limit 60 s)"),
    )
}

fn support_and_slice() -> Outcome {
    let mut support_bad = 0;
    let mut support_cases = 0;
    for phi in corpus_functions(CORPUS) {
        for top in 0..=phi.complex().dim().max(0) as usize {
            let psi = phi.restrict_to_skeleton(top);
            let d = psi.support_dim();
            // dim supp ψ ≤ 2l ⇒ dim supp Λ̃ψ ≤ 2l − 1; ≤ 2l + 1 ⇒ dim supp Ω̃ψ ≤ 2l
            let even = d + d.rem_euclid(2);
            let odd = d + 1 - d.rem_euclid(2);
            let (h, o) = (psi.half_link().support_dim(), psi.co_half_link().support_dim());
            // the empty support has dimension −1 and both images vanish
            let ok = if d < 0 { h < 0 && o < 0 } else { h < even && o < odd };
            support_cases += 1;
            support_bad += usize::from(!ok);
        }
    }

    let mut rng = corpus::rng(0x511c);
    let interval = build_complex(&[vec![0, 1], vec![1, 2]]).unwrap();
    let mut slice_bad = 0;
    for _ in 0..20 {
        let k = Arc::new(random_complex(&mut rng, 60, 3));
        let phi_k = random_function(&mut rng, k.clone(), 2);
        let x = Arc::new(product(&k, &interval).unwrap());
        let mut to_k = Vec::with_capacity(x.len());
        let mut slice = Vec::new();
        for (i, s) in x.simplices().iter().enumerate() {
            let proj: BTreeSet<u32> = s.vertices().iter().map(|&v| product_projection(3, v).0).collect();
            let on_w = s.vertices().iter().all(|&v| product_projection(3, v).1 == 1);
            let ki = k.index_of_vertices(&proj.into_iter().collect::<Vec<_>>()).unwrap();
            to_k.push(ki);
            if on_w {
                slice.push((i, ki));
            }
        }
        let phi_x = ConstructibleFunction::from_fn(x.clone(), |i| phi_k.value(to_k[i]).clone());
        let (hx, ox) = (phi_x.half_link(), phi_x.co_half_link());
        let (hk, ok) = (phi_k.half_link(), phi_k.co_half_link());
        let good = slice.len() == k.len()
            && slice.iter().all(|&(xi, ki)| hx.value(xi) == ok.value(ki) && ox.value(xi) == hk.value(ki));
        slice_bad += usize::from(!good);
    }
    outcome(
        support_bad == 0 && slice_bad == 0,
        format!(
            "support: {support_cases} skeleton cases, {support_bad} violations; slice: 20 products, {slice_bad} violations"
        ),
    )
}

fn counting() -> Outcome {
    // families recomputed from the shape of each product
    let mut fam = [0usize; 4];
    for terms in S_PRIME {
        let has_de = terms.iter().any(|t| t.0 as usize >= 3);
        let has_power = terms.iter().any(|t| t.1 > 1);
        let idx = match (has_de, has_power, terms.len()) {
            (true, _, _) => 3,
            (false, true, 1) => 1,
            (false, true, _) => 2,
            (false, false, _) => 0,
        };
        fam[idx] += 1;
    }
    let base = generator_counts(Mode::Base);
    let ext = generator_counts(Mode::Extended);
    let p = |e: u32| 1u64 << e;
    let ok = fam == [4, 4, 18, 14]
        && FAMILY_SIZES == fam
        && base.novel == p(3) * (p(26) - 1) - 26
        && base.novel == p(29) - 34
        && ext.novel == p(3) * (p(40) - 1) - 40
        && ext.novel == p(43) - 48
        && base.total == p(29) - 29
        && ext.total == p(43) - 43;
    outcome(
        ok,
        format!(
            "|S₄| = {}, |S₅| = {}, depth-3 {} / {}, totals {} / {}",
            fam[2], fam[3], base.novel, ext.novel, base.total, ext.total
        ),
    )
}

fn sphere3_wedge() -> Outcome {
    let s3 = |off: u32| -> Vec<Vec<u32>> {
        (0..5)
            .map(|skip| (0..5).filter(|&v| v != skip).map(|v| if v == 0 { 0 } else { v + off }).collect())
            .collect()
    };
    let mut gens = s3(0);
    gens.extend(s3(4));
    let k = Arc::new(build_complex(&gens).unwrap());
    let p = BaseProfile::new(k.clone()).unwrap();
    let chi = k.euler_characteristic();
    let ak = ak_numbers(&p).unwrap();
    let vanish = [&p.beta, &p.gamma, &p.delta, &p.epsilon].iter().all(|f| is_zero(f));
    let nz = nonzero_char_numbers(&p, Mode::Extended, DEFAULT_CAP).unwrap();
    let ok = chi.rem_euclid(2) == 1 && !ak.integrals_odd.contains(&true) && vanish && nz.count == 0;
    outcome(
        ok,
        format!(
            "χ = {chi}, AK integrals odd {:?}, β = γ = δ = ε = 0: {vanish}, {} nonzero numbers",
            ak.integrals_odd, nz.count
        ),
    )
}

fn parity(d: &Dyadic) -> i64 {
    d.to_integer().map(|n| i64::from(n.bit(0))).unwrap_or(-1)
}

/// Ω̃ of every expression at point 0 of a realized block, computed from the
/// five functions on the simplicial curve.
fn block_values(kind: BlockKind) -> Vec<Dyadic> {
    let r = elementary_block(kind).realize().unwrap();
    let p = r.complex.index_of_vertices(&[0]).unwrap();
    let power = |f: &ConstructibleFunction, k: u8| match k {
        1 => f.clone(),
        2 => f.mul(f).unwrap().sub(f).unwrap(),
        _ => f.mul(f).unwrap().mul(f).unwrap().sub(f).unwrap(),
    };
    VExpr::all()
        .map(|v| {
            let mut prod = ConstructibleFunction::one(r.complex.clone());
            for &(b, k) in v.terms() {
                prod = prod.mul(&power(&r.functions[b as usize], k)).unwrap();
            }
            if v.family() == 1 {
                prod.value(p).clone()
            } else {
                prod.co_half_link_at(p)
            }
        })
        .collect()
}

fn block_table() -> Outcome {
    let want = [(BlockKind::A, [1, 0, 0]), (BlockKind::B, [0, 1, 0]), (BlockKind::C, [1, 1, 1])];
    let mut lines = Vec::new();
    let mut ok = true;
    for (kind, triple) in want {
        let v = block_values(kind);
        // (β, Ω̃β₂, Ω̃β₃) sit at positions 1, 8, 11 of the expression order
        let got = [parity(&v[1]), parity(&v[8]), parity(&v[11])];
        ok &= got == triple;
        lines.push(format!("{kind} → {got:?}"));
    }
    for name in ["(αδ)", "(αβδ)", "(αβγδ)"] {
        let kind: BlockKind = name.parse().unwrap();
        let d = kind.designated().index();
        let v = block_values(kind);
        let later_zero = v[d + 1..].iter().all(Dyadic::is_zero);
        ok &= d >= 31 && parity(&v[d]) == 1 && later_zero;
        lines.push(format!("{name}: {} = {}, later zero {later_zero}", kind.designated(), v[d]));
    }
    outcome(ok, lines.join("; "))
}

/// (α, β, γ) on the common edge of wedged bubbles, each bubble being the
/// boundary of a tetrahedron with φ = l on its four triangles and Λ̃φ = 0.
fn bubble_values(ls: &[i64]) -> [i64; 3] {
    let mut gens = Vec::new();
    let mut tri_values = Vec::new();
    for (i, &l) in ls.iter().enumerate() {
        let (a, b) = (2 + 2 * i as u32, 3 + 2 * i as u32);
        for t in [[0, 1, a], [0, 1, b], [0, a, b], [1, a, b]] {
            gens.push(t.to_vec());
            tri_values.push((t, l));
        }
    }
    let k = Arc::new(build_complex(&gens).unwrap());
    let mut top = ConstructibleFunction::zero(k.clone());
    for (t, l) in tri_values {
        top.set(k.index_of_vertices(&t).unwrap(), Dyadic::from(l));
    }
    // Ω̃ keeps the triangle values and makes Λ̃φ vanish
    let phi = top.co_half_link();
    assert!(is_zero(&phi.half_link()));
    let e = k.index_of_vertices(&[0, 1]).unwrap();
    let int = |d: &Dyadic| d.to_integer().and_then(|n| i64::try_from(n).ok()).unwrap();
    let sq = phi.mul(&phi).unwrap();
    let cu = sq.mul(&phi).unwrap();
    [int(phi.value(e)), int(sq.half_link().value(e)), int(cu.half_link().value(e))]
}

fn bubble_recipes() -> Outcome {
    let recipes: [(&str, Vec<i64>, [i64; 3]); 3] = [
        ("B₁∨B₃", vec![1, 3], [0, 2, 0]),
        ("(∨₃B₁)∨B₂∨B₃", vec![1, 1, 1, 2, 3], [0, 0, 2]),
        ("(∨₄B₁)∨B₂", vec![1, 1, 1, 1, 2], [2, 0, 0]),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, ls, want) in recipes {
        let v = bubble_values(&ls);
        let m4 = v.map(|x| x.rem_euclid(4));
        ok &= m4 == want;
        lines.push(format!("{name} → {v:?} ≡ {m4:?}"));
    }
    outcome(ok, lines.join("; "))
}

fn parity_table() -> Outcome {
    let table: [[u8; 4]; 5] = [[0, 0, 0, 0], [1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]];
    let mut ok = true;
    for t in 1..=5i64 {
        let p4 = t * (t - 1) * (t - 2) * (t - 3) / 2;
        let direct = [(t * t - t) / 2, (t * t * t - t) / 2, p4 / 4, p4 * (t - 4) / 4].map(|x| x.rem_euclid(2) as u8);
        let row = table[t as usize - 1];
        ok &= direct == row && disc_parities(t) == row;
    }
    outcome(ok, "t = 1..5 against the table and direct evaluation".into())
}

/// Indices of the regression set, with a label for the family each came from.
fn regression_set() -> Vec<(&'static str, CharIndex)> {
    let mut out = Vec::new();
    for w in 0..4 {
        out.push(("depth two", CharIndex::depth_two(Mode::Base, w)));
    }
    for b in 3..29 {
        out.push(("base", CharIndex::new(Mode::Base, 1 << b | 1).unwrap()));
    }
    let mut rng = corpus::rng(0x1de9);
    let mut seen: BTreeSet<u64> = out.iter().map(|(_, i)| i.mask()).collect();
    let mut with_de = 0;
    while out.len() < 30 + 12 {
        let m = rng.gen_range(0..8u64);
        let force_de = with_de < 4;
        let mut n = 1u64 << if force_de { rng.gen_range(29..43) } else { rng.gen_range(3..43) };
        if rng.gen_bool(0.5) {
            n |= 1 << rng.gen_range(3..29);
        }
        let Ok(idx) = CharIndex::new(Mode::Extended, m | n) else { continue };
        if idx.is_trivial() || !seen.insert(idx.mask()) {
            continue;
        }
        with_de += usize::from(n >> 29 != 0);
        out.push(("extended", idx));
    }
    out
}

fn as_extended(idx: CharIndex) -> CharIndex {
    CharIndex::new(Mode::Extended, idx.mask()).unwrap()
}

fn independence() -> Outcome {
    let set = regression_set();
    let t = Instant::now();
    let mut failures = Vec::new();
    for &(_, idx) in &set {
        let ok = generate_witness(Invariant::Index(idx)).ok().and_then(|w| {
            let p = BaseProfile::new(w.complex.clone()).ok()?;
            let nz = nonzero_char_numbers(&p, Mode::Extended, DEFAULT_CAP).ok()?;
            let only = nz.indices? == [as_extended(idx)];
            let rest = euler_conditions(&p).all() && w.complex.euler_characteristic() % 2 == 0;
            Some(only && rest)
        });
        if ok != Some(true) {
            failures.push(idx.to_string());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let count = |tag| set.iter().filter(|(l, _)| *l == tag).count();
    let de = set.iter().filter(|(l, i)| *l == "extended" && i.mask() >> 29 != 0).count();
    outcome(
        failures.is_empty() && secs < 600.0 && de >= 3,
        format!(
            "{} indices ({} depth two, {} base, {} extended of which {de} with δ/ε), failures {failures:?}, {secs:.1} s (limit 600 s)",
            set.len(),
            count("depth two"),
            count("base"),
            count("extended"),
        ),
    )
}

/// Witnesses with small complexes, used by criteria 10 and 12.
const SMALL: [u64; 20] = [
    0x20000001, 0x81, 0x10, 0x84, 0x101, 0x8, 0x104, 0x82, 0x80000001, 0x100000001, 0x102, 0x20,
    0x400000001, 0x40000001, 0x11, 0x14, 0x12, 0x9, 0x8001, 0x200000001,
];

fn thickening() -> Outcome {
    let mut failures = Vec::new();
    let mut cells = 0;
    for &mask in &SMALL {
        let idx = CharIndex::new(Mode::Extended, mask).unwrap();
        let ok = pipeline(idx).ok().and_then(|p| {
            cells += p.thickened.complex.len();
            let r = check_thickening(&p.thickened).ok()?;
            let euler = ConstructibleFunction::one(p.thickened.complex.clone()).is_euler().ok()?;
            Some(r.euler && r.congruences && r.support_in_y && euler)
        });
        if ok != Some(true) {
            failures.push(idx.to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} surfaces thickened ({cells} simplices), failures {failures:?}", SMALL.len()),
    )
}

fn polynomial_ring() -> Outcome {
    let mut rng = corpus::rng(0x9017);
    let mut disagree = 0;
    let mut members = 0;
    for _ in 0..10_000 {
        let p = random_polynomial(&mut rng, 8, 8);
        let fast = in_script_p(&p);
        disagree += usize::from(fast != in_script_p_recursive(&p));
        members += usize::from(fast);
    }
    let half = Polynomial::parse_coefficients("0,0,-1/2,0,1/2").unwrap();
    let f2 = Polynomial::parse_coefficients("0,-1/2,1/2").unwrap();
    let t = Polynomial::t();
    let tm1 = Polynomial::from_ints(&[-1, 1]);
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    // ½(t⁴ − t²) = P₄ + 3t(t − 1)²
    let identity = half == Polynomial::p4().add(&t.mul(&tm1).mul(&tm1).scale(&r(3)));
    // and modulo 8𝒜 it is 2(t² − t) + 3(t³ − t) + P₄, the remainder being −8(t² − t)
    let reduced = mod8_reduce(&half).unwrap();
    let combo = Polynomial::x2().scale(&r(2)).add(&Polynomial::x3().scale(&r(3))).add(&Polynomial::p4());
    let remainder = half.sub(&combo);
    let mod8 = reduced.coords == [0, 0, 2, 3, 1, 0]
        && remainder == Polynomial::x2().scale(&r(-8))
        && reduced.residual == remainder
        && in_8a(&remainder);
    let ok = disagree == 0 && in_script_p(&half) && !in_script_p(&f2) && identity && mod8;
    outcome(
        ok,
        format!(
            "10000 polynomials ({members} in 𝒫), {disagree} disagreements; ½(t⁴−t²) ∈ 𝒫: {}, f₂ ∈ 𝒫: {}, identity {identity}, mod 8 {mod8}",
            in_script_p(&half),
            in_script_p(&f2)
        ),
    )
}

fn sample_indices(rng: &mut impl Rng, p: &BaseProfile, target: Option<CharIndex>) -> Vec<CharIndex> {
    let vertex_masks: Vec<u64> = p.odd_masks(Mode::Extended).unwrap().into_iter().filter(|m| m >> 3 != 0).collect();
    let mut out: Vec<CharIndex> = target.into_iter().collect();
    while out.len() < 100 {
        let mask = if out.len().is_multiple_of(2) && !vertex_masks.is_empty() {
            // a random sub-mask of some vertex's odd set, so many samples can be odd
            let m = vertex_masks[rng.gen_range(0..vertex_masks.len())];
            m & rng.gen::<u64>()
        } else {
            rng.gen_range(0..8u64) | 1 << rng.gen_range(3..43) | (rng.gen::<u64>() & rng.gen::<u64>() & Mode::Extended.full_mask())
        };
        if let Ok(i) = CharIndex::new(Mode::Extended, mask) {
            out.push(i);
        }
    }
    out
}

fn subdivision_invariance() -> Outcome {
    let mut targets = vec![Invariant::Chi];
    targets.extend(SMALL[..19].iter().map(|&m| Invariant::Index(CharIndex::new(Mode::Extended, m).unwrap())));
    let mut rng = corpus::rng(0x5d);
    let mut failures = Vec::new();
    let mut odd_samples = 0;
    for target in targets {
        let w = generate_witness(target).unwrap();
        let k = w.complex.clone();
        let sd = k.barycentric_subdivision();
        let fine = Arc::new(sd.complex.clone());
        let pc = BaseProfile::new(k.clone()).unwrap();
        let pf = BaseProfile::new(fine.clone()).unwrap();
        let psi = random_integer_function(&mut rng, k.clone());
        let link_ok = psi.pull_through(fine.clone(), &sd.carrier).link_op()
            == psi.link_op().pull_through(fine.clone(), &sd.carrier);
        let chi_ok = fine.euler_characteristic() == k.euler_characteristic();
        let euler_ok = euler_conditions(&pc).as_array() == euler_conditions(&pf).as_array();
        let ak_ok = ak_numbers(&pc).ok() == ak_numbers(&pf).ok();
        let idx = match target {
            Invariant::Index(i) => Some(i),
            Invariant::Chi => None,
        };
        let samples = sample_indices(&mut rng, &pc, idx);
        let mut numbers_ok = true;
        for i in samples {
            let a = char_number(&pc, i).unwrap();
            numbers_ok &= a == char_number(&pf, i).unwrap();
            odd_samples += usize::from(a);
        }
        if !(link_ok && chi_ok && euler_ok && ak_ok && numbers_ok) {
            failures.push(format!(
                "{target}: χ {chi_ok}, Λ {link_ok}, euler {euler_ok}, AK {ak_ok}, a(m,n) {numbers_ok}"
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 witnesses, 100 sampled a(m,n) each ({odd_samples} odd), failures {failures:?}"),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("operator identities", operator_identities),
        ("Λ against the barycentric link", link_oracle),
        ("support and slice properties", support_and_slice),
        ("counting identities", counting),
        ("S³ ∨ S³", sphere3_wedge),
        ("block table", block_table),
        ("bubble recipes", bubble_recipes),
        ("disc parity table", parity_table),
        ("sampled independence", independence),
        ("thickening", thickening),
        ("polynomial ring", polynomial_ring),
        ("subdivision invariance", subdivision_invariance),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} {:>2} {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            n + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
