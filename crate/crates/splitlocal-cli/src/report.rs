//! JSON report documents.  Field order is fixed by the struct definitions and
//! maps are BTreeMaps, so equal inputs serialise to equal bytes.

use serde::Serialize;
use splitlocal::coeffs::{Annulus, CoeffElement, LPoly, RatFunc};
use splitlocal::lemma_verify::{ClaimRecord, LemmaReport};

pub const SCHEMA: &str = "splitlocal-report/1";

#[derive(Serialize)]
pub struct Document<C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: C,
    pub result: R,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// nothing was claimed (plain evaluation)
    Info,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Serialize)]
pub struct Value {
    pub exact: String,
    /// real and imaginary part of the complex embedding
    pub approx: [f64; 2],
}

impl From<&CoeffElement> for Value {
    fn from(x: &CoeffElement) -> Self {
        let z = x.embed();
        Value { exact: x.to_string(), approx: [z.re, z.im] }
    }
}

#[derive(Serialize)]
pub struct Poly {
    /// exponent of t attached to coeffs[0]
    pub low: i64,
    pub coeffs: Vec<String>,
}

impl From<&LPoly> for Poly {
    fn from(p: &LPoly) -> Self {
        Poly { low: if p.is_zero() { 0 } else { p.low() }, coeffs: p.coeffs().iter().map(|c| c.to_string()).collect() }
    }
}

#[derive(Serialize)]
pub struct Rational {
    pub numerator: Poly,
    pub denominator: Poly,
    /// lo < |t| < hi, as strings so that infinity survives JSON
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annulus: Option<[String; 2]>,
    pub order_at_one: String,
}

fn annulus(a: Annulus) -> [String; 2] {
    [a.lo.to_string(), a.hi.to_string()]
}

impl From<&RatFunc> for Rational {
    fn from(f: &RatFunc) -> Self {
        Rational {
            numerator: f.num().into(),
            denominator: f.den().into(),
            annulus: f.annulus().map(annulus),
            order_at_one: f.order_at_one().to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct Claim {
    pub id: String,
    pub region: String,
    pub claim: String,
    pub order_at_one: String,
    pub verdict: Verdict,
    pub closed_form: Rational,
}

impl From<&ClaimRecord> for Claim {
    fn from(r: &ClaimRecord) -> Self {
        Claim {
            id: r.id.clone(),
            region: r.region.clone(),
            claim: r.claim.label(),
            order_at_one: r.order.to_string(),
            verdict: Verdict::from_bool(r.verdict),
            closed_form: (&r.closed_form).into(),
        }
    }
}

#[derive(Serialize)]
pub struct Lemma {
    pub l1: i64,
    pub l1_eff: i64,
    pub t_value: i64,
    pub degenerate_branch: bool,
    pub pieces: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subpieces: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub auxiliary: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub negative_control: Vec<Claim>,
    pub negative_control_fails: Option<bool>,
    pub piece_sum_identity: Option<bool>,
    pub overall: Verdict,
}

impl From<&LemmaReport> for Lemma {
    fn from(r: &LemmaReport) -> Self {
        let conv = |v: &[ClaimRecord]| v.iter().map(Claim::from).collect::<Vec<_>>();
        Lemma {
            l1: r.l1,
            l1_eff: r.l1_eff,
            t_value: r.t_value,
            degenerate_branch: r.degenerate_branch,
            pieces: conv(&r.pieces),
            subpieces: conv(&r.subpieces),
            auxiliary: conv(&r.auxiliary),
            negative_control_fails: (!r.negative_control.is_empty()).then_some(r.negative_control_fails),
            negative_control: conv(&r.negative_control),
            piece_sum_identity: r.piece_sum_identity,
            overall: Verdict::from_bool(r.overall),
        }
    }
}
