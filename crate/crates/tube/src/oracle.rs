//! The unit-distance oracle and the relations built on top of it.
//!
//! Every verdict goes through `unit_query`. Candidate points (chains,
//! midpoints, perturbations) come from a [`WitnessSource`], which may use
//! full knowledge of the model; the verdict itself only depends on the
//! answers of the oracle about those candidates.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::Rational;
use crate::model_spaces::{GeometryError, Length, ModelSpace, Point};
use crate::scalar::Scalar;
use crate::sequences::RSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Le,
    Gt,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("distance {0} lies inside the refusal band around 1")]
    BoundaryAmbiguous(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Three-valued outcome of a relation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Indeterminate,
        }
    }

    pub fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Indeterminate => Verdict::Indeterminate,
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// `nV`: `d ≤ n`
    Closed,
    /// `∂(nV)`: `d = n`
    Boundary,
    /// `Int(nV)`: `d < n`
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogLevel {
    /// Keep every query.
    Full,
    /// Keep counters only.
    Counts,
}

#[derive(Clone, Debug)]
pub struct QueryRecord {
    pub x: Point,
    pub y: Point,
    pub answer: Option<Answer>,
    pub tag: &'static str,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct QueryCounts {
    pub total: u64,
    pub le: u64,
    pub gt: u64,
    pub refused: u64,
}

/// Proposal channel: candidate points for existential quantifiers.
pub trait WitnessSource {
    /// `n + 1` points from `x` to `y` meant to have unit consecutive gaps.
    fn chain(&mut self, space: &ModelSpace, x: &Point, y: &Point, n: u32) -> Vec<Point>;

    /// Points near `z` used to test uniqueness of a witness.
    fn perturbations(&mut self, space: &ModelSpace, z: &Point) -> Vec<Point>;

    /// Alternative last-step witnesses for `(x, y)` at level `n`; nonempty
    /// only when the proposal side sees slack, i.e. `d(x, y) < n`.
    fn slack(&mut self, space: &ModelSpace, x: &Point, y: &Point, n: u32) -> Vec<Point>;
}

/// Witnesses on geodesics, with a perturbation grid of radius `eta`.
pub struct GeodesicWitnesses {
    rng: ChaCha8Rng,
    pub eta: Rational,
    pub directions: usize,
    pub random: usize,
}

impl GeodesicWitnesses {
    pub fn new(seed: u64) -> Self {
        GeodesicWitnesses { rng: ChaCha8Rng::seed_from_u64(seed), eta: Rational::new(1, 1000), directions: 16, random: 8 }
    }
}

impl WitnessSource for GeodesicWitnesses {
    fn chain(&mut self, space: &ModelSpace, x: &Point, y: &Point, n: u32) -> Vec<Point> {
        (0..=n)
            .map(|i| {
                if i == 0 {
                    x.clone()
                } else if i == n {
                    y.clone()
                } else {
                    space
                        .interpolate(x, y, &Rational::new(i as i64, n as i64))
                        .unwrap_or_else(|_| x.clone())
                }
            })
            .collect()
    }

    fn perturbations(&mut self, space: &ModelSpace, z: &Point) -> Vec<Point> {
        let mut angles: Vec<f64> = (0..self.directions)
            .map(|k| 2.0 * PI * k as f64 / self.directions as f64)
            .collect();
        for _ in 0..self.random {
            angles.push(self.rng.gen_range(-PI..PI));
        }
        let r = if z.is_exact() { Scalar::rational(self.eta.clone()) } else { Scalar::Float(self.eta.to_f64()) };
        space.sphere_points(z, &r, &angles)
    }

    fn slack(&mut self, space: &ModelSpace, x: &Point, y: &Point, n: u32) -> Vec<Point> {
        let Ok(len) = space.distance(x, y) else { return Vec::new() };
        if n < 2 || len.is_zero() {
            return Vec::new();
        }
        let nn = n as i64;
        let base = Rational::new(nn - 1, nn);
        // a rational lower bound for n − d, exact whenever the distance is
        let gap: Option<Rational> = match &len {
            Length::Squared(s) => s.as_rational().map(|s| {
                let n2 = Rational::from_int(nn * nn);
                &(&n2 - &s) / &Rational::from_int(2 * nn)
            }),
            Length::Direct(d) => d.as_rational().map(|d| &Rational::from_int(nn) - &d),
        };
        let lambdas: Vec<Rational> = match gap {
            Some(g) => {
                if g.signum() <= 0 {
                    return Vec::new();
                }
                let k = &g / &Rational::from_int(2 * nn * nn);
                vec![&base - &k, &base + &(&k * &Rational::from_int(nn - 1))]
            }
            None => {
                let d = len.to_f64();
                let nf = n as f64;
                if d >= nf {
                    return Vec::new();
                }
                let k = (nf - d) / (2.0 * nf * d);
                [base.to_f64() - k, base.to_f64() + (nf - 1.0) * k]
                    .iter()
                    .filter_map(|&l| Rational::from_f64(l))
                    .filter(|l| *l != base)
                    .collect()
            }
        };
        lambdas.iter().filter_map(|l| space.interpolate(x, y, l).ok()).collect()
    }
}

/// Result of certifying `⌊d(x, y)⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Floor {
    Value(u64),
    /// Distance exceeds the cap.
    AtLeast(u64),
    Indeterminate,
}

impl Floor {
    pub fn value(self) -> Option<u64> {
        match self {
            Floor::Value(v) => Some(v),
            _ => None,
        }
    }
}

pub struct OracleSession {
    space: ModelSpace,
    band: f64,
    level: LogLevel,
    log: Vec<QueryRecord>,
    witness_log: Vec<Point>,
    counts: QueryCounts,
    tag: &'static str,
}

impl OracleSession {
    /// Band 0 in exact mode and `1e-9` in float mode.
    pub fn new(space: ModelSpace) -> Self {
        let band = if space.is_exact() { 0.0 } else { 1e-9 };
        Self::with_band(space, band)
    }

    pub fn with_band(space: ModelSpace, band: f64) -> Self {
        OracleSession {
            space,
            band,
            level: LogLevel::Counts,
            log: Vec::new(),
            witness_log: Vec::new(),
            counts: QueryCounts::default(),
            tag: "unit",
        }
    }

    pub fn with_log_level(mut self, level: LogLevel) -> Self {
        self.level = level;
        self
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn query_log(&self) -> &[QueryRecord] {
        &self.log
    }

    pub fn witness_log(&self) -> &[Point] {
        &self.witness_log
    }

    fn tagged<T>(&mut self, tag: &'static str, f: impl FnOnce(&mut Self) -> T) -> T {
        let old = std::mem::replace(&mut self.tag, tag);
        let out = f(self);
        self.tag = old;
        out
    }

    fn note_witness(&mut self, z: &Point) {
        if self.level == LogLevel::Full {
            self.witness_log.push(z.clone());
        }
    }

    /// Is `d(x, y) ≤ 1`?
    pub fn unit_query(&mut self, x: &Point, y: &Point) -> Result<Answer, OracleError> {
        let filtered = if self.space.is_exact() && self.band == 0.0 { self.space.unit_filter(x, y) } else { None };
        let len = match filtered {
            Some(_) => None,
            None => Some(self.space.distance(x, y)?),
        };
        self.counts.total += 1;
        let ans = if let Some(o) = filtered {
            Ok(if o == Ordering::Greater { Answer::Gt } else { Answer::Le })
        } else if let Some(len) = len.as_ref().filter(|l| l.is_exact() && self.band == 0.0) {
            Ok(match len.cmp_int(1) {
                Ordering::Greater => Answer::Gt,
                _ => Answer::Le,
            })
        } else {
            let len = len.expect("unfiltered");
            let d = len.to_f64();
            if (d - 1.0).abs() < self.band.max(if len.is_exact() { 0.0 } else { 1e-15 }) {
                Err(OracleError::BoundaryAmbiguous(d))
            } else if d <= 1.0 {
                Ok(Answer::Le)
            } else {
                Ok(Answer::Gt)
            }
        };
        match &ans {
            Ok(Answer::Le) => self.counts.le += 1,
            Ok(Answer::Gt) => self.counts.gt += 1,
            Err(_) => self.counts.refused += 1,
        }
        if self.level == LogLevel::Full {
            self.log.push(QueryRecord { x: x.clone(), y: y.clone(), answer: ans.clone().ok(), tag: self.tag });
        }
        ans
    }

    fn q(&mut self, x: &Point, y: &Point) -> Verdict {
        match self.unit_query(x, y) {
            Ok(Answer::Le) => Verdict::True,
            Ok(Answer::Gt) => Verdict::False,
            Err(_) => Verdict::Indeterminate,
        }
    }

    /// Checks every step of a chain; `True` only if all steps are unit-bounded.
    fn chain_verdict(&mut self, chain: &[Point]) -> (Verdict, bool) {
        let mut all_gt = true;
        let mut refused = false;
        let mut all_le = true;
        for w in chain.windows(2) {
            match self.q(&w[0], &w[1]) {
                Verdict::True => all_gt = false,
                Verdict::False => all_le = false,
                Verdict::Indeterminate => {
                    refused = true;
                    all_le = false;
                    all_gt = false;
                }
            }
            if !all_le && !all_gt {
                break;
            }
        }
        let v = if all_le {
            Verdict::True
        } else if all_gt && !refused {
            Verdict::False
        } else {
            Verdict::Indeterminate
        };
        (v, refused)
    }

    /// `(x, y) ∈ nV`. An `n`-step chain with unit-bounded steps proves it;
    /// failure of every step of the geodesic chain rejects it.
    pub fn closed(&mut self, x: &Point, y: &Point, n: u32, w: &mut dyn WitnessSource) -> Verdict {
        if n == 0 {
            return Verdict::from_bool(self.space.same_point(x, y));
        }
        if n == 1 {
            return self.tagged("closed", |s| s.q(x, y));
        }
        let chain = w.chain(&self.space, x, y, n);
        self.tagged("closed", |s| s.chain_verdict(&chain).0)
    }

    /// `(x, y) ∈ ∂(nV)`: a witness exists and no second one is found.
    pub fn boundary(&mut self, x: &Point, y: &Point, n: u32, w: &mut dyn WitnessSource) -> Verdict {
        if n == 0 {
            return Verdict::from_bool(self.space.same_point(x, y));
        }
        if n == 1 {
            // d(x, y) = 1 iff y is the unique midpoint of (x, y') with y' twice as far
            let far = match self.space.interpolate(x, y, &Rational::from_int(2)) {
                Ok(p) => p,
                Err(_) => return Verdict::Indeterminate,
            };
            if self.space.same_point(x, y) {
                return self.tagged("boundary", |s| s.q(x, y)).and(Verdict::False);
            }
            return self.boundary_with(x, &far, 2, y, w);
        }
        let c = self.closed(x, y, n, w);
        if c != Verdict::True {
            return c;
        }
        let z = w.chain(&self.space, x, y, n)[n as usize - 1].clone();
        self.boundary_with(x, y, n, &z, w)
    }

    /// Boundary check at level `n ≥ 2` with a proposed last-step witness `z`.
    pub fn boundary_with(
        &mut self,
        x: &Point,
        y: &Point,
        n: u32,
        z: &Point,
        w: &mut dyn WitnessSource,
    ) -> Verdict {
        debug_assert!(n >= 2);
        self.note_witness(z);
        let first = self.tagged("witness", |s| s.q(z, y));
        if first != Verdict::True {
            return first;
        }
        let rest = self.closed(x, z, n - 1, w);
        if rest != Verdict::True {
            return rest;
        }
        let mut cands = w.slack(&self.space, x, y, n);
        cands.extend(w.perturbations(&self.space, z));
        let mut refused = false;
        for cand in cands {
            let a = self.tagged("probe", |s| s.q(&cand, y));
            match a {
                Verdict::False => continue,
                Verdict::Indeterminate => {
                    refused = true;
                    continue;
                }
                Verdict::True => {}
            }
            let b = self.tagged("probe", |s| s.closed(x, &cand, n - 1, w));
            match b {
                Verdict::True => {
                    self.note_witness(&cand);
                    return Verdict::False;
                }
                Verdict::Indeterminate => refused = true,
                Verdict::False => {}
            }
        }
        if refused {
            Verdict::Indeterminate
        } else {
            Verdict::True
        }
    }

    /// `(x, y) ∈ Int(nV)`.
    pub fn interior(&mut self, x: &Point, y: &Point, n: u32, w: &mut dyn WitnessSource) -> Verdict {
        if n == 0 {
            return Verdict::False;
        }
        let c = self.closed(x, y, n, w);
        if c != Verdict::True {
            return c;
        }
        self.boundary(x, y, n, w).not()
    }

    pub fn relation_member(
        &mut self,
        x: &Point,
        y: &Point,
        kind: RelationKind,
        n: u32,
        w: &mut dyn WitnessSource,
    ) -> Verdict {
        match kind {
            RelationKind::Closed => self.closed(x, y, n, w),
            RelationKind::Boundary => self.boundary(x, y, n, w),
            RelationKind::Interior => self.interior(x, y, n, w),
        }
    }

    /// The unique `z` with `(x, z), (z, y) ∈ V`, for `(x, y) ∈ ∂(2V)`.
    pub fn midpoint_from_tube(
        &mut self,
        x: &Point,
        y: &Point,
        w: &mut dyn WitnessSource,
    ) -> Result<Point, MidpointError> {
        match self.boundary(x, y, 2, w) {
            Verdict::True => Ok(w.chain(&self.space, x, y, 2)[1].clone()),
            Verdict::False => Err(MidpointError::NotOnSphere),
            Verdict::Indeterminate => Err(MidpointError::Indeterminate),
        }
    }

    /// `(center, y) ∈ ∂(nV)`.
    pub fn integer_sphere_member(
        &mut self,
        center: &Point,
        n: u32,
        y: &Point,
        w: &mut dyn WitnessSource,
    ) -> Verdict {
        self.boundary(center, y, n, w)
    }

    /// `⌊d(x, y)⌋` from `nV` and `∂(nV)` answers. A refusal at integer level
    /// counts as equality, i.e. the tie goes to the closed relation.
    pub fn certified_floor(&mut self, x: &Point, y: &Point, cap: u64, w: &mut dyn WitnessSource) -> Floor {
        let mut closed_at = |s: &mut Self, m: u64| -> Option<bool> {
            match s.closed(x, y, m as u32, w) {
                Verdict::True => Some(true),
                Verdict::False => Some(false),
                Verdict::Indeterminate => None,
            }
        };
        // smallest m ≥ 1 with (x, y) ∈ mV
        let mut lo = 0u64;
        let mut hi = 1u64;
        loop {
            match closed_at(self, hi) {
                Some(true) => break,
                Some(false) => {
                    lo = hi;
                    if hi >= cap {
                        return Floor::AtLeast(cap);
                    }
                    hi = (hi * 2).min(cap);
                }
                None => return self.settle_tie(x, y, hi, w),
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            match closed_at(self, mid) {
                Some(true) => hi = mid,
                Some(false) => lo = mid,
                None => return self.settle_tie(x, y, mid, w),
            }
        }
        match self.boundary(x, y, hi as u32, w) {
            Verdict::True | Verdict::Indeterminate => Floor::Value(hi),
            Verdict::False => Floor::Value(hi - 1),
        }
    }

    fn settle_tie(&mut self, x: &Point, y: &Point, m: u64, w: &mut dyn WitnessSource) -> Floor {
        // refusal means d is within the band of m; confirm the neighbours
        let below = m.checked_sub(1).map(|k| self.closed(x, y, k as u32, w));
        let above = self.closed(x, y, m as u32 + 1, w);
        match (below, above) {
            (Some(Verdict::False) | None, Verdict::True) => Floor::Value(m),
            _ => Floor::Indeterminate,
        }
    }

    /// Certify that consecutive points form a segment of an r-sequence:
    /// each triple `(wᵢ, wᵢ₊₁, wᵢ₊₂)` lies in `∂(2V)` with middle witness.
    pub fn certify_segment(&mut self, pts: &[Point], w: &mut dyn WitnessSource) -> Verdict {
        if pts.len() == 2 {
            return self.boundary(&pts[0], &pts[1], 1, w);
        }
        let mut out = Verdict::True;
        for t in pts.windows(3) {
            out = out.and(self.tagged("segment", |s| s.boundary_with(&t[0], &t[2], 2, &t[1], w)));
            if out == Verdict::False {
                break;
            }
        }
        out
    }

    /// Position of `y` relative to the horoball of `s` through `x_k`.
    ///
    /// `y ∈ Int B(x_{k+N}, N)` certifies `β(y) < β(x_k)`. Symmetrically,
    /// `x_k ∈ Int B(y_N, N)` for the unit sequence `y_n` on the ray from `y`
    /// toward `ξ` certifies `β(x_k) < β(y)`; the ray is proposed by the model
    /// and, in exact mode, its unit steps are certified. On the horosphere, `y` is in
    /// neither, while every probe of `S(y, ρ)` lies in the horoball through
    /// `x_{k−1}`.
    pub fn horoball_member(
        &mut self,
        s: &RSequence,
        k: i64,
        y: &Point,
        n_max: u32,
        w: &mut dyn WitnessSource,
    ) -> HoroVerdict {
        let n = n_max.max(1);
        let inside = self.tagged("horoball", |o| o.interior(&s.at(k + n as i64), y, n, w));
        if inside == Verdict::True {
            return HoroVerdict::Inside;
        }
        let ray = s.carrier().end_plus().and_then(|xi| self.space.geodesic_to_ideal(y, &xi).ok());
        let outside = match ray {
            Some(ray) => {
                let pts: Vec<Point> = (0..=n as i64).map(|i| ray.eval(&self.space.num(Rational::from_int(i))).expect("ray")).collect();
                let x = s.at(k);
                let far = pts[n as usize].clone();
                self.tagged("horoball", |o| {
                    let c = o.interior(&far, &x, n, w);
                    // unit steps sit in the refusal band in float mode
                    if c == Verdict::True && o.space.is_exact() { o.certify_segment(&pts, w) } else { c }
                })
            }
            None => Verdict::Indeterminate,
        };
        if outside == Verdict::True {
            return HoroVerdict::Outside;
        }
        if inside == Verdict::Indeterminate || outside == Verdict::Indeterminate {
            return HoroVerdict::Indeterminate;
        }
        let rho = self.space.num(Rational::new(1, 2));
        let angles: Vec<f64> = (0..HORO_PROBES).map(|i| 2.0 * PI * i as f64 / HORO_PROBES as f64).collect();
        let centre = s.at(k - 1 + n as i64);
        let probes = self.space.sphere_points(y, &rho, &angles);
        if probes.is_empty() {
            return HoroVerdict::Indeterminate;
        }
        for z in probes {
            match self.tagged("horoball", |o| o.interior(&centre, &z, n, w)) {
                Verdict::True => {}
                _ => return HoroVerdict::Indeterminate,
            }
        }
        HoroVerdict::OnHorosphere
    }

    /// Query log as CSV: `x,y,answer,tag`, coordinates in the space's chart.
    pub fn query_log_csv(&self) -> String {
        let mut s = String::from("x,y,answer,tag\n");
        for r in &self.log {
            let a = match r.answer {
                Some(Answer::Le) => "le",
                Some(Answer::Gt) => "gt",
                None => "refused",
            };
            let _ = writeln!(s, "\"{}\",\"{}\",{},{}", r.x.describe(), r.y.describe(), a, r.tag);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HoroVerdict {
    Inside,
    OnHorosphere,
    Outside,
    Indeterminate,
}

/// Probes of `S(y, 1/2)` in the horosphere test.
pub const HORO_PROBES: usize = 64;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MidpointError {
    #[error("pair is not at distance exactly 2")]
    NotOnSphere,
    #[error("oracle could not decide the boundary relation")]
    Indeterminate,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::NumericMode;

    fn exact() -> (OracleSession, GeodesicWitnesses) {
        (OracleSession::new(ModelSpace::euclidean(NumericMode::ExactRational)), GeodesicWitnesses::new(1))
    }

    #[test]
    fn unit_queries() {
        let (mut s, _) = exact();
        let o = Point::xy_q(0, 0, 1);
        assert_eq!(s.unit_query(&o, &Point::xy_q(1, 0, 1)), Ok(Answer::Le));
        assert_eq!(s.unit_query(&o, &Point::xy_q(3, 4, 5)), Ok(Answer::Le));
        assert_eq!(s.unit_query(&o, &Point::xy_q(3, 2, 2)), Ok(Answer::Gt));
        assert_eq!(s.counts().total, 3);
    }

    #[test]
    fn float_band_refuses() {
        let mut s = OracleSession::new(ModelSpace::euclidean(NumericMode::FloatWithTolerance));
        let r = s.unit_query(&Point::xy_f(0.0, 0.0), &Point::xy_f(1.0 + 1e-12, 0.0));
        assert!(matches!(r, Err(OracleError::BoundaryAmbiguous(_))));
        assert_eq!(s.counts().refused, 1);
    }

    #[test]
    fn levels_on_axis() {
        let (mut s, mut w) = exact();
        let o = Point::xy_q(0, 0, 1);
        let three = Point::xy_q(3, 0, 1);
        assert_eq!(s.closed(&o, &three, 3, &mut w), Verdict::True);
        assert_eq!(s.boundary(&o, &three, 3, &mut w), Verdict::True);
        assert_eq!(s.interior(&o, &three, 3, &mut w), Verdict::False);
        let half = Point::xy_q(5, 0, 2);
        assert_eq!(s.interior(&o, &half, 3, &mut w), Verdict::True);
        assert_eq!(s.boundary(&o, &half, 3, &mut w), Verdict::False);
        assert_eq!(s.closed(&o, &half, 2, &mut w), Verdict::False);
    }

    #[test]
    fn boundary_detects_tiny_slack() {
        let (mut s, mut w) = exact();
        let o = Point::xy_q(0, 0, 1);
        let y = Point::Plane([Scalar::rational(Rational::parse("2.999999999999999999999999").unwrap()), Scalar::int(0)]);
        assert_eq!(s.boundary(&o, &y, 3, &mut w), Verdict::False);
        assert_eq!(s.boundary(&o, &Point::xy_q(3, 0, 1), 1, &mut w), Verdict::False);
        assert_eq!(s.boundary(&o, &Point::xy_q(3, 4, 5), 1, &mut w), Verdict::True);
    }

    #[test]
    fn midpoint() {
        let (mut s, mut w) = exact();
        let m = s.midpoint_from_tube(&Point::xy_q(0, 0, 1), &Point::xy_q(2, 0, 1), &mut w).unwrap();
        assert!(s.space().same_point(&m, &Point::xy_q(1, 0, 1)));
        assert!(matches!(
            s.midpoint_from_tube(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1), &mut w),
            Err(MidpointError::NotOnSphere)
        ));
    }

    #[test]
    fn floors() {
        let (mut s, mut w) = exact();
        let o = Point::xy_q(0, 0, 1);
        assert_eq!(s.certified_floor(&o, &Point::xy_q(7, 0, 1), 64, &mut w), Floor::Value(7));
        assert_eq!(s.certified_floor(&o, &Point::xy_q(13, 0, 2), 64, &mut w), Floor::Value(6));
        assert_eq!(s.certified_floor(&o, &o, 64, &mut w), Floor::Value(0));
        assert_eq!(s.certified_floor(&o, &Point::xy_q(100, 0, 1), 64, &mut w), Floor::AtLeast(64));
    }
}
