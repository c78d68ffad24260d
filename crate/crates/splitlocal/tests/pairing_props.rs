mod common;

use common::{build_schwartz, schwartz_spec, session, SESSIONS};
use proptest::prelude::*;
use splitlocal::coeffs::{CoeffElement, Session};
use splitlocal::padic_geometry::{cell_measure, delta_exponent, CellIndex, PadicParams};
use splitlocal::repcoeff::{macdonald_dm, weil_coeff, weil_coeff_asym, SphericalModel};
use splitlocal::schwartz::{locality_threshold, sb_scale_pair, sb_scale_pair_coords, Coord};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// ∫φ(ϖ^e x)ψ̄(x)dx = q^{Σe}·conj ∫ψ(ϖ^{−e}x)φ̄(x)dx (substitute x ↦ ϖ^{−e}x).
    #[test]
    fn pairing_conjugate_symmetry(
        i in 0..SESSIONS.len(),
        phi in schwartz_spec(3, false),
        psi in schwartz_spec(3, false),
        e in prop::collection::vec(-4i64..=4, 3),
    ) {
        let s = session(i);
        let (phi, psi) = (build_schwartz(&s, 3, &phi), build_schwartz(&s, 3, &psi));
        let lhs = sb_scale_pair(&phi, &psi, &e, &[]).unwrap();
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        let qe = CoeffElement::from_int(&s, s.q() as i64).pow(e.iter().sum()).unwrap();
        let rhs = &sb_scale_pair(&psi, &phi, &neg, &[]).unwrap().conj() * &qe;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_positivity(i in 0..SESSIONS.len(), spec in schwartz_spec(3, true)) {
        let s = session(i);
        let spec: Vec<_> = spec.into_iter().map(|(b, (p, d, z))| (b, (p.abs().max(1), d, z))).collect();
        let phi = build_schwartz(&s, 3, &spec);
        let v = sb_scale_pair(&phi, &phi, &[0, 0, 0], &[]).unwrap();
        prop_assert!(v.as_rational().is_some());
        prop_assert!(v.embed().re > 0.0);
    }

    /// Beyond the locality threshold the scaled pairing equals its zeroed form
    /// exactly, for a window of six steps on either side.
    #[test]
    fn pairing_stabilises(
        i in 0..SESSIONS.len(),
        spec in schwartz_spec(3, false),
        a in -3i64..=3, b in -3i64..=3,
    ) {
        let s = session(i);
        let phi = build_schwartz(&s, 3, &spec);
        let l1 = locality_threshold(&phi);
        for l in l1..l1 + 6 {
            let plain = sb_scale_pair(&phi, &phi, &[a, b, l], &[]).unwrap();
            prop_assert_eq!(&plain, &sb_scale_pair(&phi, &phi, &[a, b, l], &[2]).unwrap(), "l = {}", l);
            let down = sb_scale_pair(&phi, &phi, &[a, b, -l], &[]).unwrap();
            let zeroed = sb_scale_pair_coords(&phi, &phi, &[Coord::Scaled(a), Coord::Scaled(b), Coord::RightZero(-l)]).unwrap();
            prop_assert_eq!(down, zeroed, "l = {}", -l);
        }
    }

    /// Cauchy–Schwarz for the unitary action, and ω(g⁻¹) = ω(g)* for real φ.
    #[test]
    fn weil_unitarity_and_involution(
        n in 1u32..=12, c in 0i64..12,
        q in prop::sample::select(vec![2u64, 3, 5, 9]),
        spec in schwartz_spec(3, true),
        e in prop::collection::vec(-5i64..=5, 3),
    ) {
        let p = PadicParams::new(q, n, c, 0).unwrap();
        let phi = build_schwartz(p.session(), 3, &spec);
        prop_assume!(!sb_scale_pair(&phi, &phi, &[0, 0, 0], &[]).unwrap().is_zero());
        let w0 = weil_coeff(&p, &phi, &[0, 0, 0]).unwrap().embed();
        let w = weil_coeff(&p, &phi, &e).unwrap();
        prop_assert!(w.embed().norm() <= w0.re + 1e-10 * (1.0 + w0.re));
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        prop_assert_eq!(weil_coeff(&p, &phi, &neg).unwrap(), w.conj());
    }

    /// ⟨ω(g)φ, ω(g)φ⟩ = ⟨φ, φ⟩ with ω(g)φ = (cu)^{Σe}φ(ϖ^e·) realised by moving
    /// the box levels.
    #[test]
    fn weil_action_is_isometric(
        i in 0..SESSIONS.len(),
        spec in schwartz_spec(3, false),
        e in prop::collection::vec(-3i64..=3, 3),
    ) {
        let s = session(i);
        let phi = build_schwartz(&s, 3, &spec);
        // φ(ϖ^e x) ∈ box at level k  ⟺  x ∈ box at level k − e
        let moved: Vec<_> = spec
            .iter()
            .map(|(b, coef)| (b.iter().zip(&e).map(|(&(ball, k), ek)| (ball, k - ek)).collect(), *coef))
            .collect();
        let phi_e = build_schwartz(&s, 3, &moved);
        let sum: i64 = e.iter().sum();
        // |cu|^{2Σe} = q^{−Σe}
        let scale = CoeffElement::from_int(&s, s.q() as i64).pow(-sum).unwrap();
        let lhs = &sb_scale_pair(&phi_e, &phi_e, &[0, 0, 0], &[]).unwrap() * &scale;
        prop_assert_eq!(lhs, sb_scale_pair(&phi, &phi, &[0, 0, 0], &[]).unwrap());
        // and the moved function is the scaled one
        prop_assert_eq!(
            sb_scale_pair(&phi_e, &phi, &[0, 0, 0], &[]).unwrap(),
            sb_scale_pair(&phi, &phi, &e, &[]).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn asymptotic_coefficient_is_exact(
        n in 1u32..=8, c in 0i64..8, a in 0i64..8,
        q in prop::sample::select(vec![2u64, 3, 5]),
        spec in schwartz_spec(3, false),
    ) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let phi = build_schwartz(p.session(), 3, &spec);
        let l1 = locality_threshold(&phi);
        for l in (l1..=l1 + 5).flat_map(|l| [l, -l]) {
            for nn in -5..=5 {
                for m in 0..=5 {
                    let direct = weil_coeff(&p, &phi, &[nn + m, nn, l]).unwrap();
                    prop_assert_eq!(weil_coeff_asym(&p, &phi, nn, m, l).unwrap(), direct, "(n, m, l) = ({}, {}, {})", nn, m, l);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The Hecke operator of the double coset of diag(ϖ, 1) acts on the
    /// spherical function by the Satake eigenvalue: with d_m the value on
    /// diag(ϖ^m, 1) and the unitary normalisation,
    /// d_{m+1} = u(β + β⁻¹)·d_m − u²·d_{m−1} (m ≥ 1) and d_1 = u(β + β⁻¹)/(1 + 1/q).
    #[test]
    fn spherical_function_recursion(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
        n in 1u32..=12, c in 0i64..12, beta in prop::option::of(0i64..12),
    ) {
        let p = PadicParams::with_beta(q, n, c, 0, beta).unwrap();
        let s = p.session();
        let u = CoeffElement::u(s);
        let b = p.beta().to_k(s);
        let trace = &u * &(&b + &b.inv().unwrap());
        let d: Vec<_> = (0..10).map(|m| macdonald_dm(&p, m).unwrap()).collect();
        prop_assert!(d[0].is_one());
        let norm = CoeffElement::from_frac(s, q as i64, q as i64 + 1);
        prop_assert_eq!(&d[1], &(&trace * &norm));
        for m in 1..9 {
            prop_assert_eq!(&d[m + 1], &(&(&trace * &d[m]) - &(&(&u * &u) * &d[m - 1])), "m = {}", m);
        }
    }

    /// |d_m| ≤ (m + 1)·q^{−m/2}·max(|A|, |Ā|, 1) for unimodular β.
    #[test]
    fn spherical_function_is_tempered(
        q in prop::sample::select(vec![2u64, 3, 5, 7]),
        n in 1u32..=12, c in 0i64..12,
    ) {
        let p = PadicParams::new(q, n, c, 0).unwrap();
        let model = SphericalModel::new(&p).unwrap();
        let a = model.c1.embed().norm().max(model.c2.embed().norm()).max(1.0);
        for m in 0..40u64 {
            let dm = model.dm(&p, m).embed().norm();
            let bound = (m + 1) as f64 * (q as f64).powf(-(m as f64) / 2.0) * a;
            prop_assert!(dm <= bound * (1.0 + 1e-10), "m = {}: {} > {}", m, dm, bound);
        }
    }

    #[test]
    fn cell_measure_follows_the_modulus(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]), n in -5i64..=5, n2 in -5i64..=5, m in 1i64..8, m2 in 1i64..8) {
        let s = Session::new(q, 1).unwrap();
        let mu = |n, m| cell_measure(&CellIndex::gl2(n, m).unwrap(), &s);
        prop_assert_eq!(mu(n, m), mu(n2, m));
        let ratio = &mu(n, m) * &mu(n2, m2).inv().unwrap();
        prop_assert_eq!(ratio, CoeffElement::from_int(&s, q as i64).pow(m - m2).unwrap());
    }

    /// Σ|a_i + b_i| ≤ Σ|a_i| + Σ|b_i|, with equality exactly when no coordinate
    /// changes sign.
    #[test]
    fn height_is_submultiplicative(a in prop::collection::vec(-6i64..=6, 2), b in prop::collection::vec(-6i64..=6, 2)) {
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (lhs, rhs) = (delta_exponent(&ab), delta_exponent(&a) + delta_exponent(&b));
        prop_assert!(lhs <= rhs);
        prop_assert_eq!(lhs == rhs, a.iter().zip(&b).all(|(x, y)| x * y >= 0));
    }
}

#[test]
fn height_is_not_multiplicative() {
    // g = diag(ϖ, 1), l = ϖ⁻¹·Id
    let g = [1, 0];
    let l = [-1, -1];
    let gl = [g[0] + l[0], g[1] + l[1]];
    assert_eq!(delta_exponent(&gl), 1);
    assert_eq!(delta_exponent(&g) + delta_exponent(&l), 3);
}

#[test]
fn gl1_cells_have_unit_volume() {
    let s = Session::new(5, 1).unwrap();
    for l in -4..=4 {
        assert!(cell_measure(&CellIndex::gl1(l), &s).is_one());
    }
    assert!(cell_measure(&CellIndex::gl2(3, 0).unwrap(), &s).is_one());
    assert!(CellIndex::gl2(0, -1).is_err());
}
