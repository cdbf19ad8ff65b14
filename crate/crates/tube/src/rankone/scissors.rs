//! Scissors `⟨a, b, c, d; x⟩` and the displacement of their translation.
//!
//! `a(−∞) = b(−∞)`, `a(+∞) = c(+∞)`, `c(−∞) = d(−∞)`, `b(+∞) = d(+∞)` and
//! `b ∩ c = {x}`. The translation `T = R_ba ∘ R_db ∘ R_cd ∘ R_ac` shifts `a`
//! by `δT = β_{a−}(x) + β_{a+}(x) + β_{d−}(x) + β_{d+}(x)`, the Busemann
//! functions normalized to vanish on `a` (resp. `d`).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::horo::{transfer, HoroError};
use crate::model_spaces::lorentz as lz;
use crate::model_spaces::{
    DirectionAtPoint, Geodesic, GeometryError, IdealPoint, ModelSpace, Point, SpaceKind, Toward,
};
use crate::oracle::{Floor, OracleSession, WitnessSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankOneError {
    #[error("operation needs the hyperbolic plane")]
    Unsupported,
    #[error("scissors invariant violated: {0}")]
    Invalid(&'static str),
    #[error("center must differ from the base point")]
    Degenerate,
    #[error("search budget exhausted")]
    SearchExhausted,
    #[error("target displacement {target} is not below the discovered bound {delta}")]
    TargetAboveDelta { target: f64, delta: f64 },
    #[error("geodesic is not certified as rank one ({0})")]
    RankPrecondition(&'static str),
    #[error("oracle could not certify: {0}")]
    Oracle(String),
    #[error(transparent)]
    Horo(#[from] HoroError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Intersection residual accepted for the center.
pub const CENTER_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Scissors {
    pub a: Geodesic,
    pub b: Geodesic,
    pub c: Geodesic,
    pub d: Geodesic,
    pub x: Point,
    /// `b = c`, as in the closed and Euclidean configurations.
    pub degenerate: bool,
}

fn ends(g: &Geodesic) -> Result<(IdealPoint, IdealPoint), RankOneError> {
    match (g.end_minus(), g.end_plus()) {
        (Some(m), Some(p)) => Ok((m, p)),
        _ => Err(RankOneError::Invalid("incomplete geodesic")),
    }
}

fn hyper(p: &Point) -> Result<lz::V3, RankOneError> {
    match p {
        Point::Hyper(v) => Ok(*v),
        _ => Err(RankOneError::Unsupported),
    }
}

impl Scissors {
    /// Validates the asymptotic pattern and that `x` lies on `b` and `c`.
    pub fn new(
        space: &ModelSpace,
        a: Geodesic,
        b: Geodesic,
        c: Geodesic,
        d: Geodesic,
        x: Point,
    ) -> Result<Scissors, RankOneError> {
        let (am, ap) = ends(&a)?;
        let (bm, bp) = ends(&b)?;
        let (cm, cp) = ends(&c)?;
        let (dm, dp) = ends(&d)?;
        let same = |u: &IdealPoint, v: &IdealPoint| space.same_ideal(u, v);
        if !(same(&am, &bm) && same(&ap, &cp) && same(&cm, &dm) && same(&bp, &dp)) {
            return Err(RankOneError::Invalid("asymptotic pattern"));
        }
        let on = |g: &Geodesic| g.param_of(&x).is_ok();
        if !on(&b) || !on(&c) {
            return Err(RankOneError::Invalid("center off b or c"));
        }
        let degenerate = same(&bp, &cp) && same(&bm, &cm);
        if !degenerate {
            let db = DirectionAtPoint { base: x.clone(), toward: Toward::Ideal(bp) };
            let dc = DirectionAtPoint { base: x.clone(), toward: Toward::Ideal(cp) };
            let ang = space.angle(&x, &db, &dc)?;
            if !(1e-6..=std::f64::consts::PI - 1e-6).contains(&ang) {
                return Err(RankOneError::Invalid("b and c not transversal"));
            }
        }
        Ok(Scissors { a, b, c, d, x, degenerate })
    }

    /// `a = b = c = d` with center on `a`.
    pub fn closed(space: &ModelSpace, a: &Geodesic, x: &Point) -> Result<Scissors, RankOneError> {
        let a = a.complete();
        Scissors::new(space, a.clone(), a.clone(), a.clone(), a, x.clone())
    }

    /// Hyperbolic scissors with center at Fermi coordinates `(t₀, r)` over
    /// `a`: `b` runs from `a(−∞)` through `x`, `c` from `x` to `a(+∞)`.
    pub fn from_center(space: &ModelSpace, a: &Geodesic, t0: f64, r: f64) -> Result<Scissors, RankOneError> {
        if space.kind() != SpaceKind::HyperbolicPlane {
            return Err(RankOneError::Unsupported);
        }
        if r == 0.0 {
            return Err(RankOneError::Degenerate);
        }
        let a = a.complete();
        let foot = hyper(&a.at(t0)?)?;
        let n = a.hyper_normal().ok_or(RankOneError::Unsupported)?;
        let x = Point::Hyper(lz::comb(r.cosh(), &foot, r.sinh(), &n));
        let (alpha, omega) = ends(&a)?;
        let b = space.geodesic_to_ideal(&x, &alpha)?.complete().reversed();
        let c = space.geodesic_to_ideal(&x, &omega)?.complete();
        Self::close_up(space, a, b, c, x)
    }

    /// Hyperbolic scissors from the free ideal points `b(+∞)` and `c(−∞)`;
    /// the center is recovered as `b ∩ c`.
    pub fn from_ends(space: &ModelSpace, a: &Geodesic, beta: f64, gamma: f64) -> Result<Scissors, RankOneError> {
        if space.kind() != SpaceKind::HyperbolicPlane {
            return Err(RankOneError::Unsupported);
        }
        let a = a.complete();
        let (alpha, omega) = ends(&a)?;
        let anchor = a.at(0.0)?;
        let b = space.geodesic_between_ideals(&IdealPoint::Angle(beta), &alpha, &anchor)?;
        let c = space.geodesic_between_ideals(&omega, &IdealPoint::Angle(gamma), &anchor)?;
        let x = intersect(&b, &c).ok_or(RankOneError::Invalid("b and c do not cross"))?;
        let b = b.shifted(&b.param_of(&x)?);
        let c = c.shifted(&c.param_of(&x)?);
        Self::close_up(space, a, b, c, x)
    }

    fn close_up(space: &ModelSpace, a: Geodesic, b: Geodesic, c: Geodesic, x: Point) -> Result<Scissors, RankOneError> {
        let beta = b.end_plus().ok_or(RankOneError::Invalid("b"))?;
        let gamma = c.end_minus().ok_or(RankOneError::Invalid("c"))?;
        let d = space.geodesic_between_ideals(&beta, &gamma, &x)?;
        let s = Scissors::new(space, a, b, c, d, x)?;
        let back = intersect(&s.b, &s.c).ok_or(RankOneError::Invalid("b and c do not cross"))?;
        if space.dist_f(&back, &s.x) > CENTER_TOL {
            return Err(RankOneError::Invalid("center residual"));
        }
        Ok(s)
    }

    /// `R_ba ∘ R_db ∘ R_cd ∘ R_ac (m)`.
    pub fn translate(&self, space: &ModelSpace, m: &Point) -> Result<Point, RankOneError> {
        self.a.param_of(m)?;
        let (am, ap) = ends(&self.a)?;
        let (cm, _) = ends(&self.c)?;
        let (_, dp) = ends(&self.d)?;
        let p = transfer(space, &self.a, &self.c, &ap, m)?;
        let p = transfer(space, &self.c, &self.d, &cm, &p)?;
        let p = transfer(space, &self.d, &self.b, &dp, &p)?;
        Ok(transfer(space, &self.b, &self.a, &am, &p)?)
    }

    /// `Tⁿ(m)` by iterating the four transfers.
    pub fn iterate(&self, space: &ModelSpace, m: &Point, n: u64) -> Result<Point, RankOneError> {
        let mut p = m.clone();
        for _ in 0..n {
            p = self.translate(space, &p)?;
        }
        Ok(p)
    }

    /// Signed parameter shift of `T` at `m`.
    pub fn shift_at(&self, space: &ModelSpace, m: &Point) -> Result<f64, RankOneError> {
        let t = self.a.param_of(m)?.to_f64();
        let u = self.a.param_of(&self.translate(space, m)?)?.to_f64();
        Ok(u - t)
    }

    /// Unsigned distance from `x` to the base `a`.
    pub fn height(&self, space: &ModelSpace) -> Result<f64, RankOneError> {
        let (_, foot) = space.project(&self.x, &self.a)?;
        Ok(space.dist_f(&foot, &self.x))
    }

    pub fn describe(&self) -> String {
        format!("center {}; d: {}", self.x.describe(), self.d.describe())
    }

    /// Polylines of the four geodesics over `[−len, len]`, as CSV
    /// `geodesic,t,coords…` in the space's chart.
    pub fn polylines_csv(&self, len: f64, samples: usize) -> String {
        let mut s = String::from("geodesic,t,u,v\n");
        let n = samples.max(2);
        for (name, g) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            for i in 0..n {
                let t = -len + 2.0 * len * i as f64 / (n - 1) as f64;
                if let Ok(p) = g.at(t) {
                    let c = p.chart();
                    let _ = writeln!(s, "{},{},{},{}", name, t, c[0], c.get(1).copied().unwrap_or(0.0));
                }
            }
        }
        s
    }
}

/// `b ∩ c` in the hyperboloid, from the normals of the two planes.
pub fn intersect(b: &Geodesic, c: &Geodesic) -> Option<Point> {
    let (nb, nc) = (b.hyper_normal()?, c.hyper_normal()?);
    let w = lz::cross(&nb, &nc);
    if lz::dot(&w, &w) >= 0.0 {
        return None;
    }
    Some(Point::Hyper(lz::to_sheet(&w)))
}

/// `δT` from the Busemann sum. In the hyperbolic plane
/// `β₊ + β₋ = 2 ln cosh r = ln(1 + ⟨x, n⟩²)` for a point at distance `r`.
pub fn displacement_formula(space: &ModelSpace, s: &Scissors) -> Result<f64, RankOneError> {
    if s.degenerate {
        return Ok(0.0);
    }
    if let (Point::Hyper(x), Some(na), Some(nd)) = (&s.x, s.a.hyper_normal(), s.d.hyper_normal()) {
        return Ok(lz::dot(x, &na).powi(2).ln_1p() + lz::dot(x, &nd).powi(2).ln_1p());
    }
    let mut total = 0.0;
    for g in [&s.a, &s.d] {
        let (m, p) = ends(g)?;
        let base = g.at(0.0)?;
        total += space.busemann(&m, &base, &s.x)?.to_f64() + space.busemann(&p, &base, &s.x)?.to_f64();
    }
    Ok(total)
}

/// `δT` as the shift of the composed transfers at the foot of `x`.
pub fn displacement_composed(space: &ModelSpace, s: &Scissors) -> Result<f64, RankOneError> {
    let (_, foot) = space.project(&s.x, &s.a)?;
    s.shift_at(space, &foot)
}

/// `⌊d(x₀, Tⁿ x₀)⌋ / n` with the integer part certified through `nV`.
pub fn displacement_oracle(
    session: &mut OracleSession,
    s: &Scissors,
    x0: &Point,
    n: u64,
    w: &mut dyn WitnessSource,
) -> Result<f64, RankOneError> {
    if n == 0 {
        return Err(RankOneError::Degenerate);
    }
    let space = session.space().clone();
    let tn = s.iterate(&space, x0, n)?;
    match session.certified_floor(x0, &tn, u32::MAX as u64, w) {
        Floor::Value(v) => Ok(v as f64 / n as f64),
        other => Err(RankOneError::Oracle(format!("floor {:?}", other))),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DisplacementRecord {
    pub scissors: String,
    pub height: f64,
    pub delta_formula: f64,
    pub delta_composed: f64,
    pub delta_oracle: f64,
    pub n_used: u64,
}

pub fn displacement_record(
    session: &mut OracleSession,
    s: &Scissors,
    x0: &Point,
    n: u64,
    w: &mut dyn WitnessSource,
) -> Result<DisplacementRecord, RankOneError> {
    let space = session.space().clone();
    Ok(DisplacementRecord {
        scissors: s.describe(),
        height: s.height(&space)?,
        delta_formula: displacement_formula(&space, s)?,
        delta_composed: displacement_composed(&space, s)?,
        delta_oracle: displacement_oracle(session, s, x0, n, w)?,
        n_used: n,
    })
}

/// Requested closeness of the scissors to its base.
#[derive(Clone, Copy, Debug)]
pub struct Neighborhood {
    /// Boundary-angle radius around `a(±∞)` for `b(+∞)` and `c(−∞)`.
    pub ideal_radius: f64,
    /// Bound on `d(x, x₀)`.
    pub offset: f64,
}

fn ideal_angle(p: &IdealPoint) -> Option<f64> {
    match p {
        IdealPoint::Angle(t) => Some(*t),
        _ => None,
    }
}

fn base_param(space: &ModelSpace, a: &Geodesic, x0: &Point) -> Result<f64, RankOneError> {
    if space.kind() != SpaceKind::HyperbolicPlane {
        return Err(RankOneError::Unsupported);
    }
    let t = a.param_of(x0)?.to_f64();
    let along = DirectionAtPoint { base: x0.clone(), toward: Toward::Ideal(a.end_plus().ok_or(RankOneError::Unsupported)?) };
    if !space.has_unique_inverse_direction(x0, &along)? {
        return Err(RankOneError::Invalid("base point on a branch"));
    }
    Ok(t)
}

/// Scissors over `a` near `x₀`, searched with a seeded random stream.
pub fn find_scissors(
    space: &ModelSpace,
    a: &Geodesic,
    x0: &Point,
    nb: Neighborhood,
    seed: u64,
) -> Result<Scissors, RankOneError> {
    if !(nb.offset > 0.0) {
        return Err(RankOneError::Degenerate);
    }
    let t = base_param(space, a, x0)?;
    let (alpha, omega) = ends(a)?;
    let (al, om) = (ideal_angle(&alpha).unwrap_or(0.0), ideal_angle(&omega).unwrap_or(0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scale = nb.offset;
    for _ in 0..256 {
        let dt = rng.gen_range(-0.5..0.5) * scale;
        let r = rng.gen_range(0.1..0.5) * scale * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let Ok(s) = Scissors::from_center(space, a, t + dt, r) else {
            scale *= 0.5;
            continue;
        };
        let off = space.dist_f(&s.x, x0);
        let bp = s.b.end_plus().as_ref().and_then(ideal_angle).unwrap_or(f64::NAN);
        let cm = s.c.end_minus().as_ref().and_then(ideal_angle).unwrap_or(f64::NAN);
        let close = lz::angle_diff(bp, om) <= nb.ideal_radius && lz::angle_diff(cm, al) <= nb.ideal_radius;
        if off > 0.0 && off <= nb.offset && close {
            return Ok(s);
        }
        scale *= 0.75;
    }
    Err(RankOneError::SearchExhausted)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Sweep {
    /// `(height, δ_formula)` over geometrically shrinking scissors.
    pub table: Vec<(f64, f64)>,
    /// Half the largest displacement reached.
    pub delta: f64,
}

/// 32 scissors over `x₀` with heights `offset·2⁻ᵏ`.
pub fn displacement_sweep(space: &ModelSpace, a: &Geodesic, x0: &Point, offset: f64) -> Result<Sweep, RankOneError> {
    let t = base_param(space, a, x0)?;
    let mut table = Vec::new();
    for k in 0..32 {
        let r = offset * 0.5f64.powi(k);
        match Scissors::from_center(space, a, t, r) {
            Ok(s) => table.push((r, displacement_formula(space, &s)?)),
            // too thin to be transversal in floating point
            Err(RankOneError::Invalid(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let delta = table.iter().map(|e| e.1).fold(0.0, f64::max) / 2.0;
    Ok(Sweep { table, delta })
}

/// Scissors centered over `x₀` with `δ_formula = target` within `10⁻¹⁰`,
/// by bisection on the height.
pub fn find_scissors_with_displacement(
    space: &ModelSpace,
    a: &Geodesic,
    x0: &Point,
    target: f64,
    offset: f64,
) -> Result<Scissors, RankOneError> {
    let sweep = displacement_sweep(space, a, x0, offset)?;
    if !(target > 0.0 && target < sweep.delta) {
        return Err(RankOneError::TargetAboveDelta { target, delta: sweep.delta });
    }
    let t = base_param(space, a, x0)?;
    let delta_at = |r: f64| -> Result<(Scissors, f64), RankOneError> {
        let s = Scissors::from_center(space, a, t, r)?;
        let d = displacement_formula(space, &s)?;
        Ok((s, d))
    };
    let (mut lo, mut hi) = (0.0f64, offset);
    let mut best: Option<(Scissors, f64)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (s, d) = match delta_at(mid) {
            Ok(v) => v,
            Err(RankOneError::Invalid(_)) => {
                lo = mid;
                continue;
            }
            Err(e) => return Err(e),
        };
        if (d - target).abs() < best.as_ref().map_or(f64::INFINITY, |b| (b.1 - target).abs()) {
            best = Some((s, d));
        }
        if d < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    match best {
        Some((s, d)) if (d - target).abs() <= 1e-10 => Ok(s),
        _ => Err(RankOneError::SearchExhausted),
    }
}
