use std::sync::Arc;

use proptest::prelude::*;

use confun::invariants::{
    masks_from_quantities, nonzero_from_masks, reduce_masks, vertex_quantities, BaseProfile, Mode,
};
use confun::polyops::{in_8a, in_script_p, in_script_p_recursive, mod8_reduce, Polynomial};
use confun::simplicial::{cone, disjoint_union, product, suspension, wedge};
use confun::witness::{elementary_block, generate_witness, wedge_decorated, BlockKind};
use confun::{build_complex, Complex, ConstructibleFunction, Dyadic};

fn complex_strategy(max_n: u32, max_size: usize) -> impl Strategy<Value = Complex> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=max_size), 0..7).prop_map(move |sets| {
            let mut gens: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
            gens.extend(sets.into_iter().map(|s| s.into_iter().collect()));
            build_complex(&gens).unwrap()
        })
    })
}

fn with_function(max_exp: u32) -> impl Strategy<Value = ConstructibleFunction> {
    complex_strategy(7, 5).prop_flat_map(move |k| {
        let k = Arc::new(k);
        prop::collection::vec((-8i64..=8, 0..=max_exp), k.len()).prop_map(move |vals| {
            let values = vals.into_iter().map(|(n, e)| Dyadic::new(n, e)).collect();
            ConstructibleFunction::new(k.clone(), values).unwrap()
        })
    })
}

/// An element of I: 2^{dim σ} divides the value on σ.
fn ideal_element(k: &Arc<Complex>, raw: &[i64]) -> ConstructibleFunction {
    ConstructibleFunction::from_fn(k.clone(), |i| Dyadic::from(raw[i % raw.len()]).shl(k.simplex_dim(i) as u32))
}

fn zero(f: &ConstructibleFunction) -> bool {
    f.values().iter().all(Dyadic::is_zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn link_identities(phi in with_function(3)) {
        let l = phi.link_op();
        prop_assert_eq!(l.link_op(), l.scale(&Dyadic::from(2)));
        let h = phi.half_link();
        let o = phi.co_half_link();
        prop_assert_eq!(h.add(&o).unwrap(), phi.clone());
        prop_assert_eq!(h.half_link(), h.clone());
        prop_assert_eq!(o.co_half_link(), o.clone());
        prop_assert!(zero(&h.co_half_link()) && zero(&o.half_link()));
        prop_assert!(l.euler_integral().is_zero());
        prop_assert_eq!(o.euler_integral(), phi.euler_integral());
    }

    #[test]
    fn closed_form_matches_geometric_link(phi in with_function(2)) {
        prop_assert_eq!(phi.link_op(), phi.link_op_geometric());
    }

    #[test]
    fn subdivision_preserves_link(phi in with_function(2)) {
        let k = phi.complex().clone();
        let sd = k.barycentric_subdivision();
        let fine = Arc::new(sd.complex.clone());
        prop_assert_eq!(fine.euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(
            phi.pull_through(fine.clone(), &sd.carrier).link_op(),
            phi.link_op().pull_through(fine, &sd.carrier)
        );
    }

    #[test]
    fn euler_characteristic_of_constructions(a in complex_strategy(5, 3), b in complex_strategy(5, 3)) {
        let (xa, xb) = (a.euler_characteristic(), b.euler_characteristic());
        prop_assert_eq!(disjoint_union(&a, &b).complex.euler_characteristic(), xa + xb);
        prop_assert_eq!(wedge(&a, 0, &b, 0).unwrap().complex.euler_characteristic(), xa + xb - 1);
        prop_assert_eq!(product(&a, &b).unwrap().euler_characteristic(), xa * xb);
        prop_assert_eq!(suspension(&a).euler_characteristic(), 2 - xa);
        prop_assert_eq!(cone(&a).euler_characteristic(), 1);
    }

    #[test]
    fn ideal_is_stable(k in complex_strategy(7, 5), raw in prop::collection::vec(-5i64..=5, 1..20)) {
        let k = Arc::new(k);
        let phi = ideal_element(&k, &raw);
        prop_assert!(phi.in_ideal_i().unwrap());
        prop_assert!(phi.half_link().in_ideal_i().unwrap());
        prop_assert!(phi.scale(&Dyadic::from(2)).in_2i().unwrap());
    }

    #[test]
    fn script_p_membership_agrees(
        coeffs in prop::collection::vec((-8i64..=8, 0u32..=3), 0..=9)
    ) {
        let p = Polynomial::new(
            coeffs
                .into_iter()
                .map(|(n, e)| num_rational::BigRational::new(n.into(), (1i64 << e).into()))
                .collect(),
        );
        let fast = in_script_p(&p);
        prop_assert_eq!(fast, in_script_p_recursive(&p));
        if fast {
            prop_assert!(in_8a(&mod8_reduce(&p).unwrap().residual));
        }
    }

    #[test]
    fn wedges_of_blocks_keep_invariants(i in 0usize..48, j in 0usize..48) {
        let kinds = BlockKind::all();
        let a = elementary_block(kinds[i % kinds.len()]);
        let b = elementary_block(kinds[j % kinds.len()]);
        let w = wedge_decorated(&a, &b);
        prop_assert!(w.check().is_ok());
        prop_assert_eq!(w.n_points(), a.n_points() + b.n_points() - 1);
    }
}

/// The characteristic numbers depend on φ, β, γ, δ, ε only modulo 2I.
#[test]
fn invariants_depend_on_classes_mod_2i() {
    let w = generate_witness("base:82".parse().unwrap()).unwrap();
    let p = BaseProfile::new(w.complex.clone()).unwrap();
    let base = [&p.phi, &p.beta, &p.gamma, &p.delta, &p.epsilon];
    let before = nonzero_from_masks(
        reduce_masks(&masks_from_quantities(&vertex_quantities(&w.complex, base), Mode::Extended)),
        Mode::Extended,
        1 << 20,
    );
    let k = &w.complex;
    for seed in 0..4i64 {
        let raw: Vec<i64> = (0..13).map(|i| (i * 7 + seed * 3) % 5 - 2).collect();
        let perturbed: Vec<ConstructibleFunction> = base
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let shift: Vec<i64> = raw.iter().map(|r| r + j as i64).collect();
                f.add(&ideal_element(k, &shift).scale(&Dyadic::from(2))).unwrap()
            })
            .collect();
        let q = vertex_quantities(k, std::array::from_fn(|i| &perturbed[i]));
        let after = nonzero_from_masks(
            reduce_masks(&masks_from_quantities(&q, Mode::Extended)),
            Mode::Extended,
            1 << 20,
        );
        assert_eq!(after.indices, before.indices, "seed {seed}");
    }
}
