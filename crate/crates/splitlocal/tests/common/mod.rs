#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use splitlocal::coeffs::{CoeffElement, Session};
use splitlocal::schwartz::{BoxSet, SchwartzFn};

/// (q, N) pairs covering unfolded u, folded u (q square or √q ∈ ℚ(ζ_N)) and
/// the degenerate N = 1, 2 cases.
pub const SESSIONS: &[(u64, u32)] = &[(2, 1), (3, 2), (5, 4), (2, 8), (3, 12), (5, 5), (9, 3), (7, 7), (4, 6)];

pub fn session(i: usize) -> Arc<Session> {
    let (q, n) = SESSIONS[i % SESSIONS.len()];
    Session::new(q, n).unwrap()
}

/// Raw description of a field element: Σ (p/d)·ζ^z·u^j.
pub type ElemSpec = Vec<(i64, i64, i64, bool)>;

pub fn elem_spec() -> impl Strategy<Value = ElemSpec> {
    prop::collection::vec((-6i64..=6, 1i64..=5, 0i64..24, any::<bool>()), 1..5)
}

pub fn build(s: &Arc<Session>, spec: &ElemSpec) -> CoeffElement {
    spec.iter().fold(CoeffElement::zero(s), |acc, &(p, d, z, j)| {
        let mut x = CoeffElement::from_frac(s, p, d).mul_zeta(z);
        if j {
            x = x.mul_u();
        }
        &acc + &x
    })
}

/// One box term of a Schwartz function: (ball?, level) per coordinate and a
/// coefficient p/d·ζ^z.
pub type BoxSpec = (Vec<(bool, i64)>, (i64, i64, i64));

pub fn schwartz_spec(dim: usize, real: bool) -> impl Strategy<Value = Vec<BoxSpec>> {
    let z = if real { 0i64..1 } else { 0i64..12 };
    prop::collection::vec(
        (prop::collection::vec((any::<bool>(), -2i64..=2), dim), (-4i64..=4, 1i64..=3, z)),
        1..4,
    )
}

pub fn build_schwartz(s: &Arc<Session>, dim: usize, spec: &[BoxSpec]) -> SchwartzFn {
    let mut phi = SchwartzFn::zero(dim);
    for (boxes, (p, d, z)) in spec {
        let boxes = boxes.iter().map(|&(ball, k)| if ball { BoxSet::ball(k) } else { BoxSet::shell(k) }).collect();
        phi = phi.plus(boxes, CoeffElement::from_frac(s, *p, *d).mul_zeta(*z)).unwrap();
    }
    phi
}
