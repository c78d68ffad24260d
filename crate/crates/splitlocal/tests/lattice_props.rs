mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use splitlocal::coeffs::{Mono, MonoCtx, Session};
use splitlocal::lattice_series::{
    expand, partial_sum, region_split, sum_bundles, sum_lattice, Affine, CellTermSpec, Family, LatticeTerm, MPoly,
    Region,
};

fn form(dims: usize) -> impl Strategy<Value = Affine> {
    (prop::collection::vec(-2i64..=2, dims), -3i64..=3).prop_map(|(a, b)| Affine::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn region_split_partitions(
        abs in prop::collection::vec(form(3), 0..3),
        thr in prop::collection::vec((form(3), -2i64..=2), 0..2),
        floor in prop::collection::vec(-3i64..=0, 3),
        pts in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 100),
    ) {
        let base = Region::whole(3).ge(0, floor[0]).ge(1, floor[1]).le(2, -floor[2]);
        let cells = region_split(&base, &abs, &thr);
        for x in &pts {
            let hits = cells.iter().filter(|c| c.contains(x)).count();
            prop_assert_eq!(hits, usize::from(base.contains(x)), "point {:?}", x);
        }
    }
}

/// t^{x₀ + 2x₁}·(κ₀)^{x₀}(κ₁)^{x₁}·P(x) on the orthant: convergent for |t| < 1.
fn orthant_term(s: &std::sync::Arc<Session>, k0: i64, k1: i64, deg: u32) -> LatticeTerm {
    let ctx = MonoCtx::of(s);
    let mut term = LatticeTerm::unit(s, 2);
    term.kappa = vec![Mono::zeta(ctx, k0), Mono::zeta(ctx, k1).mul(&Mono::u(ctx, 1))];
    term.texp = Affine::new(vec![1, 2], 0);
    term.poly = MPoly::var(2, 0).pow(deg);
    term
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sums_are_additive_over_disjoint_unions(
        k0 in 0i64..6, k1 in 0i64..6, deg in 0u32..3,
        cut in form(2), k in -2i64..=3,
    ) {
        let s = Session::new(3, 6).unwrap();
        let term = orthant_term(&s, k0, k1, deg);
        let base = Region::whole(2).ge(0, 0).ge(1, 0);
        let whole = sum_lattice(&s, &[CellTermSpec { region: base.clone(), term: term.clone() }]).unwrap();
        let parts: Vec<_> = [base.clone().form_ge(&cut, k), base.form_le(&cut, k - 1)]
            .into_iter()
            .filter(|r| r.maybe_feasible())
            .map(|region| CellTermSpec { region, term: term.clone() })
            .collect();
        let split = sum_lattice(&s, &parts).unwrap();
        prop_assert!(whole.equals(&split));
        let individually = parts
            .iter()
            .map(|c| sum_lattice(&s, std::slice::from_ref(c)).unwrap())
            .fold(splitlocal::coeffs::RatFunc::zero(&s), |a, b| a.add(&b));
        prop_assert!(whole.equals(&individually));
    }

    /// The closed form of an |f|-weighted sum against the partial sums over
    /// growing windows.
    #[test]
    fn closed_forms_match_truncations(a in prop::collection::vec(-2i64..=2, 2), b in -2i64..=2, z in 0i64..6) {
        prop_assume!(a.iter().any(|&x| x != 0));
        let s = Session::new(5, 6).unwrap();
        let ctx = MonoCtx::of(&s);
        let f = Affine::new(a, b);
        let base = Region::whole(2).ge(0, 0).ge(1, 0);
        let mut seed = LatticeTerm::unit(&s, 2);
        seed.texp = Affine::new(vec![1, 1], 0);
        seed.kappa = vec![Mono::zeta(ctx, z), Mono::one(ctx)];
        let bundles = expand(&base, &[Family::abs_weight(&s, &f, 1)], &seed);
        let closed = sum_bundles(&s, &bundles).unwrap().to_ratfunc();
        for &t0 in &[0.3, 0.5] {
            let exact = closed.eval_complex(Complex64::new(t0, 0.0)).unwrap();
            let err = |r: i64| (partial_sum(&bundles, r, Complex64::new(t0, 0.0)) - exact).norm();
            // tail of Σ over x₀ + x₁ > R of (R+1)·t^{x₀+x₁}·t^{|f|} is below (R+2)²·t^R
            for r in [10i64, 20, 40] {
                let bound = ((r + 2) * (r + 2)) as f64 * t0.powi(r as i32) / (1.0 - t0).powi(2);
                prop_assert!(err(r) <= bound.max(1e-12), "t0 = {}, R = {}: {} > {}", t0, r, err(r), bound);
            }
            prop_assert!(err(40) <= 1e-9);
        }
    }
}
