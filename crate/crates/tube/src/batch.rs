//! Seeded batches of reconstruction cases with ground truth.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{Rational, Surd};
use crate::flatstrip::reconstruct_flat;
use crate::model_spaces::{Geodesic, ModelSpace, Point};
use crate::oracle::{GeodesicWitnesses, OracleSession, WitnessSource};
use crate::rankone::{
    displacement_formula, displacement_record, find_scissors, reconstruct_rankone, DisplacementRecord, Neighborhood,
    RankOneOptions, Scissors,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug, serde::Serialize)]
pub struct CaseRecord {
    pub geodesic: String,
    pub t1: String,
    pub t2: String,
    pub value: Option<f64>,
    pub truth: f64,
    /// `|value − truth|`, absent when the case failed.
    pub error: Option<f64>,
    /// Exact reconstruction, when certified exactly.
    pub exact: Option<String>,
    /// Exact ground truth when `t₂ − t₁` is rational.
    pub truth_exact: Option<String>,
    /// Certified `⌊Δ⌋`, where the method reports one.
    pub floor: Option<u64>,
    pub oracle_calls: u64,
    /// Milliseconds; only filled when timing is requested, to keep reports
    /// reproducible byte for byte.
    pub wall_ms: Option<f64>,
    pub failure: Option<String>,
}

impl CaseRecord {
    /// Recompute `error` from `value` and `truth`.
    pub fn recomputed_error(&self) -> Option<f64> {
        self.value.map(|v| (v - self.truth).abs())
    }

    /// Rational inputs must come back exact and equal to the truth.
    pub fn exact_ok(&self) -> bool {
        match &self.truth_exact {
            Some(t) => self.exact.as_ref() == Some(t),
            None => true,
        }
    }
}

fn elapsed(start: Instant, timed: bool) -> Option<f64> {
    timed.then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// `n` random parameter pairs on random geodesics of a flat-hosting space.
/// Even cases use rational offsets, odd ones `√k + m`.
pub fn flat_cases(sp: &ModelSpace, n: usize, seed: u64, tol: f64, timed: bool) -> Vec<CaseRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let i = out.len();
        let (a, b) = (sp.random_point(&mut rng, 3.0), sp.random_point(&mut rng, 3.0));
        let Ok(c) = sp.geodesic_through(&a, &b) else { continue };
        let c = c.complete();
        let t1 = Scalar::ratio(rng.gen_range(-400..400), 100);
        let t2 = if i % 2 == 0 {
            Scalar::ratio(rng.gen_range(-400..400), rng.gen_range(1..7))
        } else {
            let s = Surd::sqrt_rational(&Rational::from_int(rng.gen_range(2..30))).expect("small radicand");
            &Scalar::Exact(s) + &Scalar::int(rng.gen_range(-3..3))
        };
        let delta = &t2 - &t1;
        let truth = delta.to_f64().abs();
        let truth_exact = delta.as_rational().filter(|_| sp.is_exact()).map(|q| q.abs().to_string());
        let before = session.counts().total;
        let start = Instant::now();
        let r = reconstruct_flat(&mut session, &c, &t1, &t2, tol, &mut w);
        let mut rec = CaseRecord {
            geodesic: c.describe(),
            t1: t1.to_string(),
            t2: t2.to_string(),
            value: None,
            truth,
            error: None,
            exact: None,
            truth_exact,
            floor: None,
            oracle_calls: session.counts().total - before,
            wall_ms: elapsed(start, timed),
            failure: None,
        };
        match r {
            Ok(e) => {
                rec.value = Some(e.value);
                rec.exact = e.exact;
                rec.error = rec.recomputed_error();
            }
            Err(e) => rec.failure = Some(e.to_string()),
        }
        out.push(rec);
    }
    out
}

/// `n` random pairs on random hyperbolic geodesics with `|t₂ − t₁| ∈ (0, 10]`.
pub fn rankone_cases(sp: &ModelSpace, n: usize, seed: u64, opts: RankOneOptions, timed: bool) -> Vec<CaseRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = (sp.random_point(&mut rng, 1.5), sp.random_point(&mut rng, 1.5));
        let Ok(c) = sp.geodesic_through(&a, &b) else { continue };
        let c = c.complete();
        let t1: f64 = rng.gen_range(-1.0..1.0);
        let delta = 10.0 * (1.0 - rng.gen::<f64>());
        let t2 = if rng.gen_bool(0.5) { t1 + delta } else { t1 - delta };
        let truth = (t2 - t1).abs();
        let before = session.counts().total;
        let start = Instant::now();
        let r = reconstruct_rankone(&mut session, &c, t1, t2, opts, &mut w);
        let mut rec = CaseRecord {
            geodesic: c.describe(),
            t1: format!("{t1}"),
            t2: format!("{t2}"),
            value: None,
            truth,
            error: None,
            exact: None,
            truth_exact: None,
            floor: None,
            oracle_calls: session.counts().total - before,
            wall_ms: elapsed(start, timed),
            failure: None,
        };
        match r {
            Ok(e) => {
                rec.value = Some(e.value);
                rec.floor = Some(e.floor);
                rec.error = rec.recomputed_error();
            }
            Err(e) => rec.failure = Some(e.to_string()),
        }
        out.push(rec);
    }
    out
}

/// A random hyperbolic geodesic, reparametrized so that `a(0)` is the
/// origin, with a scissors over it.
pub fn centered_scissors<R: Rng>(sp: &ModelSpace, rng: &mut R) -> Result<(Geodesic, Scissors), String> {
    let origin = Point::Hyper([1.0, 0.0, 0.0]);
    loop {
        let (p, q) = (sp.random_point(rng, 2.0), sp.random_point(rng, 2.0));
        let Ok(a) = sp.geodesic_through(&p, &q) else { continue };
        let a = a.complete();
        let (tc, _) = sp.project(&origin, &a).map_err(|e| e.to_string())?;
        let a = a.centered_at(tc.to_f64()).ok_or("not hyperbolic")?;
        let nb = Neighborhood { ideal_radius: 1.0, offset: 0.1 };
        let s = find_scissors(sp, &a, &a.at(0.0).map_err(|e| e.to_string())?, nb, rng.gen())
            .map_err(|e| e.to_string())?;
        return Ok((a, s));
    }
}

/// Displacement triple at `n` iterations with the orbit `x₀ … Tⁿx₀`
/// centered on `a(0)`.
pub fn centered_record(
    session: &mut OracleSession,
    a: &Geodesic,
    s: &Scissors,
    n: u64,
    w: &mut dyn WitnessSource,
) -> Result<DisplacementRecord, String> {
    let d = displacement_formula(session.space(), s).map_err(|e| e.to_string())?;
    let x0 = a.at(-0.5 * n as f64 * d).map_err(|e| e.to_string())?;
    displacement_record(session, s, &x0, n, w).map_err(|e| e.to_string())
}

/// Displacement triples for `count` random hyperbolic scissors at `n`
/// iterations.
pub fn displacement_cases(sp: &ModelSpace, count: usize, n: u64, seed: u64) -> Vec<Result<DisplacementRecord, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut session = OracleSession::new(sp.clone());
    let mut w = GeodesicWitnesses::new(1);
    (0..count)
        .map(|_| {
            let (a, s) = centered_scissors(sp, &mut rng)?;
            centered_record(&mut session, &a, &s, n, &mut w)
        })
        .collect()
}

/// Largest error over the successful cases, and the number of failures.
pub fn summarize(cases: &[CaseRecord]) -> (f64, usize) {
    let worst = cases.iter().filter_map(|c| c.error).fold(0.0, f64::max);
    (worst, cases.iter().filter(|c| c.failure.is_some()).count())
}
