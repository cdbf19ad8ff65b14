//! r-sequences, parallel equivalence and rank classification.

use thiserror::Error;

use crate::exact::Rational;
use crate::flatstrip::strip::FlatChart;
use crate::model_spaces::{Domain, Geodesic, ModelSpace, Point};
use crate::oracle::{Floor, OracleSession, Verdict, WitnessSource};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("carrier geodesic is not complete")]
    NotComplete,
}

/// `z ↦ c(t₀ + z)` on a complete unit-speed geodesic.
#[derive(Clone, Debug)]
pub struct RSequence {
    carrier: Geodesic,
    phase: Scalar,
}

pub fn make_rsequence(c: &Geodesic, t0: Scalar) -> Result<RSequence, SequenceError> {
    if !matches!(c.domain(), Domain::Complete) {
        return Err(SequenceError::NotComplete);
    }
    Ok(RSequence { carrier: c.clone(), phase: t0 })
}

impl RSequence {
    pub fn carrier(&self) -> &Geodesic {
        &self.carrier
    }

    pub fn phase(&self) -> &Scalar {
        &self.phase
    }

    pub fn param(&self, z: i64) -> Scalar {
        &self.phase + &self.phase.lift(Rational::from_int(z))
    }

    pub fn at(&self, z: i64) -> Point {
        self.carrier.eval_unchecked(&self.param(z))
    }

    /// Points `x₋ₘ, …, xₘ`.
    pub fn window(&self, m: i64) -> Vec<Point> {
        (-m..=m).map(|z| self.at(z)).collect()
    }

    /// `z ↦ x_{z+k}`.
    pub fn shifted(&self, k: i64) -> RSequence {
        RSequence { carrier: self.carrier.clone(), phase: self.param(k) }
    }
}

/// Every pair of the window at index distance `k` certified in `∂(kV)`.
pub fn verify_rsequence(session: &mut OracleSession, points: &[Point], w: &mut dyn WitnessSource) -> Verdict {
    let mut out = Verdict::True;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out = out.and(session.boundary(&points[i], &points[j], (j - i) as u32, w));
            if out == Verdict::False {
                return out;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "value")]
pub enum ParallelVerdict {
    Equivalent(u32),
    NotEquivalent,
    Inconclusive(u32),
}

/// Smallest `k ≤ k_max` with `(x, y) ∈ kV`, by bisection.
fn closed_level(s: &mut OracleSession, x: &Point, y: &Point, k_max: u32, w: &mut dyn WitnessSource) -> Option<u32> {
    if s.closed(x, y, k_max, w) != Verdict::True {
        return None;
    }
    let (mut lo, mut hi) = (0u32, k_max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match s.closed(x, y, mid, w) {
            Verdict::True => hi = mid,
            Verdict::False => lo = mid,
            Verdict::Indeterminate => return Some(hi),
        }
    }
    Some(hi)
}

const FLOOR_CAP: u64 = 1024;

/// Least distance from the carrier for a rank-one search candidate.
const CARRIER_MARGIN: f64 = 0.25;

/// Bounded separation over the window, then a growth test under doubling of
/// the window: convexity of `t ↦ d(c₁(t), c₂(t))` makes growth between
/// `±window` and `±2·window` a certificate of divergence.
pub fn parallel_equivalent(
    session: &mut OracleSession,
    s1: &RSequence,
    s2: &RSequence,
    k_max: u32,
    window: u32,
    w: &mut dyn WitnessSource,
) -> ParallelVerdict {
    let m = window as i64;
    let mut k = Some(1u32);
    for z in -m..=m {
        match closed_level(session, &s1.at(z), &s2.at(z), k_max, w) {
            Some(l) => k = k.map(|k| k.max(l)),
            None => {
                k = None;
                break;
            }
        }
    }
    let mut grows = false;
    let mut unknown = false;
    for sign in [-1i64, 1] {
        let near = session.certified_floor(&s1.at(sign * m), &s2.at(sign * m), FLOOR_CAP, w);
        let far = session.certified_floor(&s1.at(2 * sign * m), &s2.at(2 * sign * m), FLOOR_CAP, w);
        match (near, far) {
            (Floor::Value(a), Floor::Value(b)) => grows |= b > a,
            (Floor::Value(_), Floor::AtLeast(_)) => grows = true,
            _ => unknown = true,
        }
    }
    if grows {
        ParallelVerdict::NotEquivalent
    } else if let (Some(k), false) = (k, unknown) {
        ParallelVerdict::Equivalent(k)
    } else {
        ParallelVerdict::Inconclusive(window)
    }
}

#[derive(Clone, Debug)]
pub enum RankVerdict {
    RankOne,
    /// With the certified parallel r-sequence at unit distance.
    HigherRank(RSequence),
    Inconclusive,
}

impl RankVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            RankVerdict::RankOne => "rank_one",
            RankVerdict::HigherRank(_) => "higher_rank",
            RankVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RankOptions {
    pub k_max: u32,
    pub window: u32,
    pub candidates: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { k_max: 16, window: 64, candidates: 16 }
    }
}

fn distinct_from_shifts(space: &ModelSpace, s: &RSequence, y0: &Point) -> bool {
    space.dist_f(y0, &s.at(1)) >= 1e-6 && space.dist_f(y0, &s.at(-1)) >= 1e-6 && space.dist_f(y0, &s.at(0)) >= 1e-6
}

/// Higher rank is certified by a parallel r-sequence at exact unit distance;
/// rank one needs the model's word that no strip exists plus a failed search
/// among asymptotic candidates through `S(x₀, 1)`.
pub fn rank_classify(
    session: &mut OracleSession,
    s: &RSequence,
    opts: RankOptions,
    w: &mut dyn WitnessSource,
) -> RankVerdict {
    let space = session.space().clone();
    let x0 = s.at(0);
    if space.bounds_flat_strip(s.carrier()) {
        let one = s.phase().lift(Rational::one());
        for side in [1i8, -1] {
            let Ok(chart) = FlatChart::for_geodesic(&space, s.carrier(), side) else { break };
            let par = chart.parallel(&space, &one);
            let Ok(cand) = make_rsequence(&par, s.phase().clone()) else { continue };
            let y0 = cand.at(0);
            if !distinct_from_shifts(&space, s, &y0) {
                continue;
            }
            if session.boundary(&x0, &y0, 1, w) != Verdict::True {
                continue;
            }
            if let ParallelVerdict::Equivalent(_) = parallel_equivalent(session, s, &cand, opts.k_max, opts.window, w) {
                return RankVerdict::HigherRank(cand);
            }
        }
        return RankVerdict::Inconclusive;
    }
    let Some(xi) = s.carrier().end_plus() else { return RankVerdict::Inconclusive };
    let angles: Vec<f64> = (0..opts.candidates)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / opts.candidates as f64)
        .collect();
    let one = s.phase().lift(Rational::one());
    let mut tested = 0;
    for y0 in space.sphere_points(&x0, &one, &angles) {
        // candidates hugging the carrier cannot separate within a short window
        match space.project(&y0, s.carrier()) {
            Ok((_, foot)) if space.dist_f(&y0, &foot) >= CARRIER_MARGIN => {}
            _ => continue,
        }
        let Ok(ray) = space.geodesic_to_ideal(&y0, &xi) else { continue };
        let line = ray.complete();
        // align Busemann levels with s
        let Ok(b) = space.busemann(&xi, &x0, &y0) else { continue };
        let Ok(cand) = make_rsequence(&line, b) else { continue };
        tested += 1;
        if parallel_equivalent(session, s, &cand, opts.k_max, opts.window, w) != ParallelVerdict::NotEquivalent {
            return RankVerdict::Inconclusive;
        }
    }
    if tested == 0 {
        RankVerdict::Inconclusive
    } else {
        RankVerdict::RankOne
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::NumericMode;
    use crate::oracle::GeodesicWitnesses;

    #[test]
    fn axis_sequence() {
        let sp = ModelSpace::euclidean(NumericMode::ExactRational);
        let c = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
        let s = make_rsequence(&c, Scalar::ratio(1, 2)).unwrap();
        assert!(sp.same_point(&s.at(2), &Point::xy_q(5, 0, 2)));
        let mut o = OracleSession::new(sp.clone());
        let mut w = GeodesicWitnesses::new(3);
        assert_eq!(verify_rsequence(&mut o, &s.window(2), &mut w), Verdict::True);
        let bad = [Point::xy_q(0, 0, 1), Point::xy_q(1, 0, 1), Point::xy_q(3, 0, 2)];
        assert_eq!(verify_rsequence(&mut o, &bad, &mut w), Verdict::False);
    }

    #[test]
    fn segment_not_a_carrier() {
        let sp = ModelSpace::euclidean(NumericMode::ExactRational);
        let c = sp.segment(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
        assert_eq!(make_rsequence(&c, Scalar::int(0)).unwrap_err(), SequenceError::NotComplete);
    }
}
