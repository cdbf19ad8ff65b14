//! Distances along a rank-one geodesic from a scissors translation of small
//! displacement.
//!
//! With `T` shifting `a` by `δ ≈ 1/q`, the points `a(t₁ + kδ)` are reached
//! from `a(t₁)` by powers of `T`. The smallest `k` with
//! `(a(t₂), a(t₁ + kδ)) ∈ Int V` brackets `Δ = |t₂ − t₁|` in
//! `[(k − 1)δ + 1, kδ + 1)`.

use crate::model_spaces::{Geodesic, Point};
use crate::oracle::{Floor, OracleSession, Verdict, WitnessSource};
use crate::sequences::{make_rsequence, rank_classify, RankOptions, RankVerdict};

use super::scissors::{displacement_composed, find_scissors_with_displacement, RankOneError};

#[derive(Clone, Copy, Debug)]
pub struct RankOneOptions {
    pub tol: f64,
    /// Height bound for the scissors search.
    pub offset: f64,
    /// Certify rank one through the oracle before reconstructing.
    pub check_rank: bool,
    pub rank: RankOptions,
}

impl Default for RankOneOptions {
    fn default() -> Self {
        RankOneOptions { tol: 1e-6, offset: 0.5, check_rank: true, rank: RankOptions { window: 2, ..RankOptions::default() } }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RankOneEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Certified `⌊Δ⌋`.
    pub floor: u64,
    /// Shift of the translation used.
    pub shift: f64,
    pub steps: i64,
    /// The bracket collapsed on an oracle refusal at unit distance.
    pub collapsed: bool,
}

pub fn reconstruct_rankone(
    session: &mut OracleSession,
    a: &Geodesic,
    t1: f64,
    t2: f64,
    opts: RankOneOptions,
    w: &mut dyn WitnessSource,
) -> Result<RankOneEstimate, RankOneError> {
    let space = session.space().clone();
    if t1 == t2 {
        return Ok(RankOneEstimate { value: 0.0, lower: 0.0, upper: 0.0, floor: 0, shift: 0.0, steps: 0, collapsed: false });
    }
    // work in s = t − mid on a copy centered at the origin
    let mid = 0.5 * (t1 + t2);
    let a = a.centered_at(mid).ok_or(RankOneError::Unsupported)?;
    let (t1, t2) = (t1 - mid, t2 - mid);
    let x0 = a.at(t1)?;
    let y = a.at(t2)?;
    if opts.check_rank {
        let s = make_rsequence(&a, space.num_f(0.0)).map_err(|_| RankOneError::RankPrecondition("incomplete"))?;
        match rank_classify(session, &s, opts.rank, w) {
            RankVerdict::RankOne => {}
            v => return Err(RankOneError::RankPrecondition(v.label())),
        }
    }
    let q = (2.0 / opts.tol).ceil();
    // T shifts all of a, so the scissors can sit at the well-conditioned origin
    let sc = find_scissors_with_displacement(&space, &a, &a.at(0.0)?, 1.0 / q, opts.offset)?;
    let delta = displacement_composed(&space, &sc)?;
    if !(delta > 0.0) {
        return Err(RankOneError::Invalid("non-positive displacement"));
    }
    let dir = (t2 - t1).signum();
    let n = match session.certified_floor(&x0, &y, u32::MAX as u64, w) {
        Floor::Value(v) => v,
        f => return Err(RankOneError::Oracle(format!("floor {:?}", f))),
    };
    // Tᵏ(x₀) as a k-fold shift of a
    let at = |k: i64| -> Result<Point, RankOneError> { Ok(a.at(t1 + dir * k as f64 * delta)?) };
    let mut probe = |k: i64| -> Result<Verdict, RankOneError> { Ok(session.interior(&y, &at(k)?, 1, w)) };
    let mut lo = ((n as f64 - 1.0) / delta).floor() as i64 - 1;
    let mut hi = (n as f64 / delta).ceil() as i64 + 1;
    let collapse = |k: i64| RankOneEstimate {
        value: k as f64 * delta + 1.0,
        lower: k as f64 * delta + 1.0,
        upper: k as f64 * delta + 1.0,
        floor: n,
        shift: delta,
        steps: k,
        collapsed: true,
    };
    match (probe(lo)?, probe(hi)?) {
        (Verdict::False, Verdict::True) => {}
        (Verdict::Indeterminate, _) => return Ok(collapse(lo)),
        (_, Verdict::Indeterminate) => return Ok(collapse(hi)),
        (a, b) => return Err(RankOneError::Oracle(format!("bracket ends ({:?}, {:?})", a, b))),
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(mid)? {
            Verdict::True => hi = mid,
            Verdict::False => lo = mid,
            Verdict::Indeterminate => return Ok(collapse(mid)),
        }
    }
    let k = hi as f64;
    Ok(RankOneEstimate {
        value: (k - 0.5) * delta + 1.0,
        lower: (k - 1.0) * delta + 1.0,
        upper: k * delta + 1.0,
        floor: n,
        shift: delta,
        steps: hi,
        collapsed: false,
    })
}
