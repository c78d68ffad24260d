//! Exact coefficient arithmetic: the field K, monomial scalars, Laurent
//! polynomials and rational functions in t = q^{-s}.

mod field;
mod mono;
mod poly;
mod ratfunc;

pub use field::{k_arith, CoeffElement, KOp, Session};
pub(crate) use field::{big_ratio_f64, prime_power};
pub use mono::{Mono, MonoCtx};
pub use poly::LPoly;
pub use ratfunc::{rf_eval, Annulus, EvalMode, EvalValue, Order, RatFunc};

/// f = (1−t)^k·g with g(1) ≠ 0: returns k (or ∞ for f = 0).
pub fn rf_order_at_one(f: &RatFunc) -> Order {
    f.order_at_one()
}

/// g(1) in f = (1−t)^k·g.
pub fn rf_lead_at_one(f: &RatFunc) -> crate::Result<CoeffElement> {
    f.lead_at_one()
}

pub fn rf_normalize(f: &RatFunc) -> crate::Result<RatFunc> {
    f.normalize()
}
