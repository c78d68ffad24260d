mod common;

use common::{build_schwartz, schwartz_spec};
use proptest::prelude::*;
use splitlocal::coeffs::CoeffElement;
use splitlocal::lemma_verify::{assemble_full, assemble_pieces, verify_lemma, VerifyOptions};
use splitlocal::padic_geometry::PadicParams;
use splitlocal::repcoeff::SphericalModel;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn pieces_sum_to_the_whole(
        q in prop::sample::select(vec![2u64, 3]), n in 1u32..=6, c in 0i64..6, a in 0i64..6,
        spec in schwartz_spec(3, false),
    ) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let model = SphericalModel::new(&p).unwrap();
        let phi = build_schwartz(p.session(), 3, &spec);
        let [a1, a2, a3] = assemble_pieces(&p, &phi, &model).unwrap();
        let full = assemble_full(&p, &phi, &model).unwrap().to_ratfunc();
        prop_assert!(a1.add(&a2).add(&a3).equals(&full));
    }

    /// Verdicts only see orders at t = 1, which a nonzero rescaling of φ
    /// cannot move; larger thresholds move the piece boundaries but neither
    /// the verdicts nor the total.
    #[test]
    fn verdicts_are_robust(
        q in prop::sample::select(vec![2u64, 3]), n in 1u32..=6, c in 0i64..6, a in 0i64..6,
        spec in schwartz_spec(3, false), k in 1i64..4, z in 0i64..6, bump in 1i64..3,
    ) {
        let p = PadicParams::new(q, n, c, a).unwrap();
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let phi = build_schwartz(s, 3, &spec);
        let base = verify_lemma(&p, &phi, &model, VerifyOptions::default()).unwrap();
        let scaled = phi.scale(&CoeffElement::from_int(s, k).mul_zeta(z));
        let other = verify_lemma(&p, &scaled, &model, VerifyOptions::default()).unwrap();
        let orders = |r: &splitlocal::lemma_verify::LemmaReport| r.pieces.iter().map(|c| c.order).collect::<Vec<_>>();
        prop_assert_eq!(orders(&base), orders(&other));
        prop_assert_eq!(base.overall, other.overall);
        let wider = verify_lemma(
            &p,
            &phi,
            &model,
            VerifyOptions { l1_override: Some(base.l1_eff + bump), sum_identity: true, ..VerifyOptions::default() },
        )
        .unwrap();
        prop_assert_eq!(wider.overall, base.overall);
        prop_assert_eq!(wider.piece_sum_identity, Some(true));
        let total = |r: &splitlocal::lemma_verify::LemmaReport| {
            r.pieces.iter().fold(splitlocal::coeffs::RatFunc::zero(s), |acc, c| acc.add(&c.closed_form))
        };
        prop_assert!(total(&base).equals(&total(&wider)));
    }
}

#[test]
fn reports_are_reproducible() {
    let p = PadicParams::new(3, 4, 1, 1).unwrap();
    let s = p.session();
    let model = SphericalModel::new(&p).unwrap();
    let phi = build_schwartz(s, 3, &[(vec![(true, 0), (false, -1), (true, 1)], (2, 1, 1)), (vec![(true, 0); 3], (1, 1, 0))]);
    let a = format!("{:?}", verify_lemma(&p, &phi, &model, VerifyOptions::default()).unwrap());
    let b = format!("{:?}", verify_lemma(&p, &phi, &model, VerifyOptions::default()).unwrap());
    assert_eq!(a, b);
}
