//! Shadows `Shadow_y(x₀) = {z : x₀ ∈ [yz]}` and their continuity probes.

use crate::exact::Rational;
use crate::model_spaces::lorentz as lz;
use crate::model_spaces::{GeometryError, ModelSpace, Point, Toward};
use crate::scalar::Scalar;

use super::scissors::{RankOneError, Scissors, displacement_formula};

/// Whether some geodesic from `y` to `z` passes through `x₀`.
pub fn shadow_member(space: &ModelSpace, y: &Toward, x0: &Point, z: &Toward) -> Result<bool, GeometryError> {
    if let Toward::Point(p) = y {
        if space.same_point(p, x0) {
            return Err(GeometryError::SamePoints);
        }
    }
    space.is_between(y, x0, z)
}

/// `S(y, |x₀y| + ρ) ∩ S(x₀, ρ)`: continuations of `[y x₀]` by `ρ` past `x₀`.
/// A single point where geodesics do not branch; one per outgoing branch
/// in a tree.
pub fn spherical_shadow_sample(
    space: &ModelSpace,
    y: &Point,
    x0: &Point,
    rho: &Scalar,
    count: usize,
) -> Result<Vec<Point>, GeometryError> {
    if space.same_point(y, x0) {
        return Err(GeometryError::SamePoints);
    }
    if let (Point::Tree(py), Point::Tree(px)) = (y, x0) {
        let tree = space.tree();
        let back = tree.germ_toward(px, py).into_iter().collect::<Vec<_>>();
        let mut pts: Vec<Point> = tree.sphere(px, rho, &back).into_iter().map(Point::Tree).collect();
        pts.truncate(count.max(1));
        return Ok(pts);
    }
    let g = space.geodesic_through(y, x0)?;
    let t = &g.param_of(x0)? + rho;
    Ok(vec![g.eval(&t)?])
}

/// Point on `S(y, |x₀y|)` at distance `δ` from `x₀`, on either side.
fn rotate_about(space: &ModelSpace, y: &Point, x0: &Point, delta: f64, side: f64) -> Option<Point> {
    match (y, x0) {
        (Point::Plane(a), Point::Plane(b)) => {
            let (ax, ay, bx, by) = (a[0].to_f64(), a[1].to_f64(), b[0].to_f64(), b[1].to_f64());
            let r = (bx - ax).hypot(by - ay);
            let th = side * 2.0 * (delta / (2.0 * r)).asin();
            let (ux, uy) = (bx - ax, by - ay);
            let (c, s) = (th.cos(), th.sin());
            let f = |v: f64| if space.is_exact() { Scalar::rational(Rational::from_f64(v).expect("finite")) } else { Scalar::Float(v) };
            Some(Point::Plane([f(ax + c * ux - s * uy), f(ay + s * ux + c * uy)]))
        }
        (Point::Hyper(a), Point::Hyper(b)) => {
            let r = lz::dist(a, b);
            let u = lz::tangent_toward(a, b);
            let w = lz::unit_space(&lz::cross(a, &u));
            // cosh δ = cosh²r − sinh²r cos θ
            let ct = ((r.cosh().powi(2) - delta.cosh()) / r.sinh().powi(2)).clamp(-1.0, 1.0);
            let th = side * ct.acos();
            let dir = lz::comb(th.cos(), &u, th.sin(), &w);
            Some(Point::Hyper(lz::exp(a, &dir, r)))
        }
        _ => None,
    }
}

/// `ε(δ)`: largest displacement of the spherical shadow when `x₀` moves by
/// `δ` along `S(y, |yx₀|)`.
pub fn shadow_continuity_probe(
    space: &ModelSpace,
    y: &Point,
    x0: &Point,
    rho: f64,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>, GeometryError> {
    let rho_s = space.num(Rational::from_f64(rho).ok_or(GeometryError::InvalidPoint("rho".into()))?);
    let base = spherical_shadow_sample(space, y, x0, &rho_s, 1)?;
    let base = base.first().ok_or(GeometryError::NoGeodesic)?.clone();
    let mut out = Vec::new();
    for &d in deltas {
        let mut eps: f64 = 0.0;
        for side in [-1.0, 1.0] {
            let x1 = rotate_about(space, y, x0, d, side).ok_or(GeometryError::Unsupported)?;
            for p in spherical_shadow_sample(space, y, &x1, &rho_s, 1)? {
                eps = eps.max(space.dist_f(&p, &base));
            }
        }
        out.push((d, eps));
    }
    Ok(out)
}

/// Euclidean closed form of `ε(δ)` for the probe above: similar triangles
/// with apex `y` scale the chord by `(R + ρ)/R`.
pub fn euclidean_shadow_epsilon(r: f64, rho: f64, delta: f64) -> f64 {
    delta * (r + rho) / r
}

/// `|Δδ|(h)`: largest change of `δ_formula` when the free ideal points of
/// the scissors move by `h` in boundary angle.
pub fn displacement_continuity_probe(
    space: &ModelSpace,
    s: &Scissors,
    hs: &[f64],
) -> Result<Vec<(f64, f64)>, RankOneError> {
    let angle = |p: Option<crate::model_spaces::IdealPoint>| match p {
        Some(crate::model_spaces::IdealPoint::Angle(t)) => Ok(t),
        _ => Err(RankOneError::Unsupported),
    };
    let (beta, gamma) = (angle(s.b.end_plus())?, angle(s.c.end_minus())?);
    let d0 = displacement_formula(space, s)?;
    let mut out = Vec::new();
    for &h in hs {
        let mut worst: f64 = 0.0;
        for (db, dg) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, h), (-h, -h), (h, -h), (-h, h)] {
            let p = Scissors::from_ends(space, &s.a, beta + db, gamma + dg)?;
            worst = worst.max((displacement_formula(space, &p)? - d0).abs());
        }
        out.push((h, worst));
    }
    Ok(out)
}

/// Non-increasing second column as the first decreases.
pub fn monotone_to_zero(table: &[(f64, f64)]) -> bool {
    let mut t = table.to_vec();
    t.sort_by(|a, b| b.0.total_cmp(&a.0));
    t.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-15)
}
