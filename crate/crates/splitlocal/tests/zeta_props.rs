mod common;

use common::{build_schwartz, schwartz_spec};
use num_complex::Complex64;
use proptest::prelude::*;
use splitlocal::coeffs::{CoeffElement, Mono, Order};
use splitlocal::lfactors::{euler_factor, lfactor_bc_pi2, vanish_order_t, LFactorSpec};
use splitlocal::padic_geometry::PadicParams;
use splitlocal::repcoeff::SphericalModel;
use splitlocal::schwartz::SchwartzFn;
use splitlocal::zeta::{
    doubled_iv, local_period, local_period_factored, truncated_gl1, truncated_gl2, unramified_identity, zeta_gl1,
    zeta_gl2, NumericSummand, SPoint,
};

fn qs() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 9])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unramified_identity_holds(q in qs(), n in 1u32..=12, c in 0i64..12, a in 0i64..12) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let model = SphericalModel::new(&p).unwrap();
        for m in [1, 2] {
            let (z, l) = unramified_identity(&p, &model, m).unwrap();
            prop_assert!(z.equals(&l), "m = {}", m);
        }
    }

    /// Numeric oracle for the closed forms: partial sums computed straight
    /// from the cell summand.
    #[test]
    fn closed_forms_agree_with_partial_sums(
        q in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..=8, c in 0i64..8, a in 0i64..8,
        s1 in schwartz_spec(1, false), s2 in schwartz_spec(2, false),
    ) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let (phi1, phi2) = (build_schwartz(s, 1, &s1), build_schwartz(s, 2, &s2));
        let t0 = 0.3;
        let t = Complex64::new(t0, 0.0);
        let z1 = zeta_gl1(&p, &phi1, SPoint::Shift(0)).unwrap().closed_form.eval_complex(t).unwrap();
        let ns1 = NumericSummand::new(&p, &phi1, &model, 0);
        prop_assert!((truncated_gl1(&ns1, SPoint::Shift(0), t0, 60) - z1).norm() < 1e-9 * (1.0 + z1.norm()));
        let z2 = zeta_gl2(&p, &phi2, &model, SPoint::Shift(0)).unwrap().closed_form.eval_complex(t).unwrap();
        let ns2 = NumericSummand::new(&p, &phi2, &model, 60);
        prop_assert!((truncated_gl2(&ns2, SPoint::Shift(0), t0, 60) - z2).norm() < 1e-9 * (1.0 + z2.norm()));
    }

    /// Z(kφ) = |k|²·Z(φ): the integrals are sesquilinear in the data.
    #[test]
    fn zeta_is_sesquilinear(q in qs(), n in 1u32..=12, c in 0i64..12, spec in schwartz_spec(1, false), kp in 1i64..5, kz in 0i64..12) {
        let p = PadicParams::new(q, n, c, 0).unwrap();
        let s = p.session();
        let phi = build_schwartz(s, 1, &spec);
        let k = CoeffElement::from_int(s, kp).mul_zeta(kz);
        let base = zeta_gl1(&p, &phi, SPoint::Shift(0)).unwrap().closed_form;
        let scaled = zeta_gl1(&p, &phi.scale(&k), SPoint::Shift(0)).unwrap().closed_form;
        prop_assert!(scaled.equals(&base.scale(&(&k * &k.conj()))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn doubled_integral_factorises(
        q in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..=8, c in 0i64..8, a in 0i64..8,
        s1 in schwartz_spec(1, false), s2 in schwartz_spec(2, false),
    ) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let (phi1, phi2) = (build_schwartz(s, 1, &s1), build_schwartz(s, 2, &s2));
        let iv = doubled_iv(&p, &phi2.tensor(&phi1), &model).unwrap().closed_form;
        let z2 = zeta_gl2(&p, &phi2, &model, SPoint::Shift(-1)).unwrap().closed_form;
        let z1 = zeta_gl1(&p, &phi1, SPoint::Value(0)).unwrap().closed_form;
        prop_assert!(iv.equals(&z2.mul(&z1)));
    }

    #[test]
    fn unramified_period_is_one(q in qs(), n in 1u32..=12, c in 0i64..12, a in 0i64..12) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let ac = p.alpha().mul(&p.c());
        let half = vec![ac.clone(), ac.inv()];
        let three = vec![Mono::one(p.ctx()); 2];
        let v = local_period(&p, &SchwartzFn::unit_lattice(3, s), &model, &half, &three).unwrap();
        prop_assert!(v.is_one(), "{}", v);
        let w = local_period_factored(&p, &SchwartzFn::unit_lattice(2, s), &SchwartzFn::unit_lattice(1, s), &model, &half).unwrap();
        prop_assert!(w.is_one());
    }
}

proptest! {
    /// ζ(2s) has a simple pole at s = 0 and L_E(s, ·) one pole per Satake
    /// parameter equal to 1: {1, 1, c, c⁻¹} gives 2 or 4.
    #[test]
    fn vanishing_order_counts_trivial_parameters(n in 1u32..=12, c in 0i64..12, q in qs()) {
        let p = PadicParams::new(q, n, c, 0).unwrap();
        let expect = if p.c().is_one() { 3 } else { 1 };
        prop_assert_eq!(vanish_order_t(&p), expect);
        let poles = if p.c().is_one() { 4 } else { 2 };
        prop_assert_eq!(lfactor_bc_pi2(&p).order_at_one(), Order::Finite(-poles));
    }

    /// An Euler factor has a pole at t = 1 only when a Satake parameter
    /// equals q^{shift}, i.e. only for shift 0 and a trivial parameter.
    #[test]
    fn euler_poles_avoid_one(n in 1u32..=12, zs in prop::collection::vec(0i64..12, 1..4), shift in 0i64..4, tp in 1i64..3) {
        let p = PadicParams::new(3, n, 0, 0).unwrap();
        let s = p.session();
        let ctx = p.ctx();
        let sat: Vec<Mono> = zs.iter().map(|&z| Mono::zeta(ctx, z)).collect();
        let trivial = sat.iter().filter(|m| m.is_one()).count() as i64;
        let spec = LFactorSpec::new(sat, shift, tp);
        let at_one = spec.denominator(s).eval(&CoeffElement::one(s)).unwrap();
        prop_assert_eq!(at_one.is_zero(), shift == 0 && trivial > 0);
        let expect = if shift == 0 { -trivial } else { 0 };
        prop_assert_eq!(euler_factor(&spec, s).order_at_one(), Order::Finite(expect));
    }
}
