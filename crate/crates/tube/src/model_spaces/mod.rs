//! Closed-form model geometries: the Euclidean plane, the hyperbolic plane
//! (hyperboloid model), metric trees with rays, and tree × line.
//!
//! Every other module checks itself against the distances, geodesics and
//! Busemann functions computed here.

pub mod geodesic;
pub mod lorentz;
pub mod tree;

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::exact::{Rational, Surd};
use crate::scalar::Scalar;

pub use geodesic::{Domain, Geodesic};
use geodesic::{div_exact, Repr};
use lorentz::{self as lz, V3};
pub use tree::{Germ, MetricTree, Seg, TreeLine, TreePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point or ideal point does not belong to this space")]
    SpaceMismatch,
    #[error("the two points coincide")]
    SamePoints,
    #[error("parameter {0} outside the geodesic's domain")]
    OutsideDomain(f64),
    #[error("no geodesic connects the given ideal points")]
    NoGeodesic,
    #[error("operation not supported for this space kind")]
    Unsupported,
    #[error("point is off the geodesic by {0}")]
    NotOnGeodesic(f64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid ideal point")]
    InvalidIdeal,
    #[error("bad tree description: {0}")]
    BadTree(String),
    #[error("direction is not based at the given point")]
    NotBased,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    EuclideanPlane,
    HyperbolicPlane,
    MetricTree,
    TreeCrossLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericMode {
    ExactRational,
    FloatWithTolerance,
}

#[derive(Clone, Debug)]
pub enum Point {
    Plane([Scalar; 2]),
    Hyper(V3),
    Tree(TreePoint),
    Product(TreePoint, Scalar),
}

impl Point {
    pub fn xy(x: Scalar, y: Scalar) -> Point {
        Point::Plane([x, y])
    }

    pub fn xy_f(x: f64, y: f64) -> Point {
        Point::Plane([Scalar::Float(x), Scalar::Float(y)])
    }

    /// Exact rational point `(a/d, b/d)`.
    pub fn xy_q(a: i64, b: i64, d: i64) -> Point {
        Point::Plane([Scalar::ratio(a, d), Scalar::ratio(b, d)])
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Point::Plane([x, y]) => x.is_exact() && y.is_exact(),
            Point::Hyper(_) => false,
            Point::Tree(p) => p.offset.is_exact(),
            Point::Product(p, h) => p.offset.is_exact() && h.is_exact(),
        }
    }

    /// Float coordinates in the space's chart: `(x, y)` in the plane, Poincaré
    /// disk coordinates for the hyperboloid, `(segment, offset[, height])` for trees.
    pub fn chart(&self) -> Vec<f64> {
        match self {
            Point::Plane([x, y]) => vec![x.to_f64(), y.to_f64()],
            Point::Hyper(p) => vec![p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0])],
            Point::Tree(p) => vec![seg_code(p.seg), p.offset.to_f64()],
            Point::Product(p, h) => vec![seg_code(p.seg), p.offset.to_f64(), h.to_f64()],
        }
    }

    pub fn describe(&self) -> String {
        let c = self.chart();
        match self {
            Point::Tree(p) | Point::Product(p, _) => {
                let seg = match p.seg {
                    Seg::Edge(i) => format!("e{}", i),
                    Seg::Ray(i) => format!("r{}", i),
                };
                let tail: Vec<String> = c[1..].iter().map(|v| format!("{:.12}", v)).collect();
                format!("({}:{})", seg, tail.join(","))
            }
            _ => {
                let v: Vec<String> = c.iter().map(|v| format!("{:.12}", v)).collect();
                format!("({})", v.join(","))
            }
        }
    }
}

/// Edges as nonnegative codes, rays as negative ones (`-1 - id`).
fn seg_code(s: Seg) -> f64 {
    match s {
        Seg::Edge(i) => i as f64,
        Seg::Ray(i) => -1.0 - i as f64,
    }
}

#[derive(Clone, Debug)]
pub enum IdealPoint {
    /// Unit direction in the plane.
    Direction([Scalar; 2]),
    /// Boundary angle of the hyperbolic plane.
    Angle(f64),
    /// End of the given ray.
    End(usize),
    /// Tree × line: `end = None` is vertical (`slope = ±1`); otherwise
    /// `slope ∈ {−1, 0, 1}` tilts the tree end by 0 or 45 degrees.
    ProductEnd { end: Option<usize>, slope: i8 },
}

impl IdealPoint {
    pub fn angle_dir(theta: f64) -> IdealPoint {
        IdealPoint::Direction([Scalar::Float(theta.cos()), Scalar::Float(theta.sin())])
    }

    pub fn describe(&self) -> String {
        match self {
            IdealPoint::Direction([x, y]) => format!("dir({:.12},{:.12})", x.to_f64(), y.to_f64()),
            IdealPoint::Angle(t) => format!("angle({:.15})", t),
            IdealPoint::End(r) => format!("end(r{})", r),
            IdealPoint::ProductEnd { end, slope } => match end {
                Some(e) => format!("end(r{},{})", e, slope),
                None => format!("vertical({})", slope),
            },
        }
    }
}

/// Relative slack of the float pre-check in `unit_filter`; far above the
/// rounding error of the few operations involved.
const FILTER_EPS: f64 = 1e-9;

/// A distance, kept exact either as its square or directly.
#[derive(Clone, Debug)]
pub enum Length {
    Squared(Scalar),
    Direct(Scalar),
}

impl Length {
    pub fn to_f64(&self) -> f64 {
        match self {
            Length::Squared(s) => s.to_f64().max(0.0).sqrt(),
            Length::Direct(d) => d.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Length::Squared(s) | Length::Direct(s) => s.is_zero(),
        }
    }

    /// Compares with a nonnegative value.
    pub fn cmp_value(&self, r: &Scalar) -> Ordering {
        let o = match self {
            Length::Squared(s) => s.partial_cmp(&(r * r)),
            Length::Direct(d) => d.partial_cmp(r),
        };
        o.unwrap_or(Ordering::Equal)
    }

    pub fn cmp_int(&self, n: i64) -> Ordering {
        self.cmp_value(&Scalar::int(n))
    }

    /// The value, exact when the square root is.
    pub fn value(&self) -> Scalar {
        match self {
            Length::Squared(s) => s.sqrt(),
            Length::Direct(d) => d.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Length::Squared(s) | Length::Direct(s) => s.is_exact(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Toward {
    Point(Point),
    Ideal(IdealPoint),
}

/// Germ of the geodesic from `base` toward a point or an ideal point.
#[derive(Clone, Debug)]
pub struct DirectionAtPoint {
    pub base: Point,
    pub toward: Toward,
}

impl DirectionAtPoint {
    pub fn to_point(base: &Point, q: &Point) -> Self {
        DirectionAtPoint { base: base.clone(), toward: Toward::Point(q.clone()) }
    }

    pub fn to_ideal(base: &Point, xi: &IdealPoint) -> Self {
        DirectionAtPoint { base: base.clone(), toward: Toward::Ideal(xi.clone()) }
    }
}

#[derive(Clone, Debug)]
pub struct ModelSpace {
    kind: SpaceKind,
    mode: NumericMode,
    tree: Option<Arc<MetricTree>>,
}

/// Unit vector `((1−t²)/(1+t²), 2t/(1+t²))` with `t` a dyadic approximation of
/// `tan(θ/2)`; exact and close to angle `θ`.
pub fn rational_direction(theta: f64) -> (Rational, Rational) {
    let th = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if th.abs() > PI - 1e-3 {
        return (Rational::from_int(-1), Rational::zero());
    }
    let t = ((th / 2.0).tan() * 256.0).round() as i64;
    let t = Rational::new(t, 256);
    let t2 = &t * &t;
    let den = &Rational::one() + &t2;
    let c = &(&Rational::one() - &t2) / &den;
    let s = &(&t + &t) / &den;
    (c, s)
}

/// `(c, s)` of a product ideal point.
fn product_dir(end: Option<usize>, slope: i8, exact: bool) -> (Scalar, Scalar) {
    let half_root2 = || {
        if exact {
            Scalar::Exact(Surd::sqrt_rational(&Rational::new(1, 2)).expect("√(1/2)"))
        } else {
            Scalar::Float(std::f64::consts::FRAC_1_SQRT_2)
        }
    };
    let z = Scalar::zero_like(exact);
    let one = z.lift(Rational::one());
    match (end, slope) {
        (None, s) => (z, if s > 0 { one } else { -one }),
        (Some(_), 0) => (one, z),
        (Some(_), s) => {
            let h = half_root2();
            (h.clone(), if s > 0 { h } else { -h })
        }
    }
}

impl ModelSpace {
    pub fn euclidean(mode: NumericMode) -> Self {
        ModelSpace { kind: SpaceKind::EuclideanPlane, mode, tree: None }
    }

    pub fn hyperbolic() -> Self {
        ModelSpace {
            kind: SpaceKind::HyperbolicPlane,
            mode: NumericMode::FloatWithTolerance,
            tree: None,
        }
    }

    pub fn metric_tree(tree: MetricTree, mode: NumericMode) -> Self {
        ModelSpace { kind: SpaceKind::MetricTree, mode, tree: Some(Arc::new(tree)) }
    }

    pub fn tree_cross_line(tree: MetricTree, mode: NumericMode) -> Self {
        ModelSpace { kind: SpaceKind::TreeCrossLine, mode, tree: Some(Arc::new(tree)) }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == NumericMode::ExactRational
    }

    pub fn tree(&self) -> &MetricTree {
        self.tree.as_deref().expect("tree-based space")
    }

    pub fn tree_opt(&self) -> Option<&MetricTree> {
        self.tree.as_deref()
    }

    /// A rational in the space's arithmetic.
    pub fn num(&self, r: Rational) -> Scalar {
        if self.is_exact() {
            Scalar::rational(r)
        } else {
            Scalar::Float(r.to_f64())
        }
    }

    pub fn num_f(&self, x: f64) -> Scalar {
        if self.is_exact() {
            Scalar::rational(Rational::from_f64(x).expect("finite"))
        } else {
            Scalar::Float(x)
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero_like(self.is_exact())
    }

    pub fn check_point(&self, p: &Point) -> Result<(), GeometryError> {
        match (self.kind, p) {
            (SpaceKind::EuclideanPlane, Point::Plane(_)) => Ok(()),
            (SpaceKind::HyperbolicPlane, Point::Hyper(x)) => {
                if (lz::dot(x, x) + 1.0).abs() <= 1e-9 * x[0].abs().max(1.0).powi(2) && x[0] > 0.0 {
                    Ok(())
                } else {
                    Err(GeometryError::InvalidPoint("not on the upper hyperboloid sheet".into()))
                }
            }
            (SpaceKind::MetricTree, Point::Tree(t)) => self.tree().check_point(t),
            (SpaceKind::TreeCrossLine, Point::Product(t, _)) => self.tree().check_point(t),
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    pub fn check_ideal(&self, xi: &IdealPoint) -> Result<(), GeometryError> {
        match (self.kind, xi) {
            (SpaceKind::EuclideanPlane, IdealPoint::Direction([x, y])) => {
                let n = &(x * x) + &(y * y);
                let one = n.lift(Rational::one());
                let ok = if n.is_exact() { n == one } else { (n.to_f64() - 1.0).abs() < 1e-12 };
                if ok {
                    Ok(())
                } else {
                    Err(GeometryError::InvalidIdeal)
                }
            }
            (SpaceKind::HyperbolicPlane, IdealPoint::Angle(t)) if t.is_finite() => Ok(()),
            (SpaceKind::MetricTree, IdealPoint::End(r)) if *r < self.tree().rays().len() => Ok(()),
            (SpaceKind::TreeCrossLine, IdealPoint::ProductEnd { end, slope }) => {
                let ok = match end {
                    None => *slope == 1 || *slope == -1,
                    Some(e) => *e < self.tree().rays().len() && slope.abs() <= 1,
                };
                if ok {
                    Ok(())
                } else {
                    Err(GeometryError::InvalidIdeal)
                }
            }
            _ => Err(GeometryError::InvalidIdeal),
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<Length, GeometryError> {
        match (p, q) {
            (Point::Plane(a), Point::Plane(b)) if self.kind == SpaceKind::EuclideanPlane => {
                let dx = &a[0] - &b[0];
                let dy = &a[1] - &b[1];
                if dx.is_exact() && dy.is_exact() {
                    Ok(Length::Squared(&(&dx * &dx) + &(&dy * &dy)))
                } else {
                    Ok(Length::Direct(Scalar::Float(dx.to_f64().hypot(dy.to_f64()))))
                }
            }
            (Point::Hyper(a), Point::Hyper(b)) if self.kind == SpaceKind::HyperbolicPlane => {
                Ok(Length::Direct(Scalar::Float(lz::dist(a, b))))
            }
            (Point::Tree(a), Point::Tree(b)) if self.kind == SpaceKind::MetricTree => {
                Ok(Length::Direct(self.tree().distance(a, b)))
            }
            (Point::Product(a, h), Point::Product(b, k)) if self.kind == SpaceKind::TreeCrossLine => {
                let l = self.tree().distance(a, b);
                let dh = h - k;
                if l.is_exact() && dh.is_exact() {
                    Ok(Length::Squared(&(&l * &l) + &(&dh * &dh)))
                } else {
                    Ok(Length::Direct(Scalar::Float(l.to_f64().hypot(dh.to_f64()))))
                }
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// `d(p, q)` against 1 decided in floating point when the gap is well
    /// clear of the rounding error; `None` defers to exact arithmetic.
    pub fn unit_filter(&self, p: &Point, q: &Point) -> Option<Ordering> {
        let (d2, mag) = match (p, q) {
            (Point::Plane(a), Point::Plane(b)) => {
                let f = |s: &Scalar| s.to_f64();
                let (dx, dy) = (f(&a[0]) - f(&b[0]), f(&a[1]) - f(&b[1]));
                let mag = a.iter().chain(b.iter()).map(|s| f(s).abs()).sum::<f64>();
                (dx * dx + dy * dy, mag)
            }
            (Point::Product(a, h), Point::Product(b, k)) => {
                let (l, m) = self.tree().distance_f64(a, b);
                let (h, k) = (h.to_f64(), k.to_f64());
                ((h - k) * (h - k) + l * l, m + h.abs() + k.abs())
            }
            (Point::Tree(a), Point::Tree(b)) => {
                let (l, m) = self.tree().distance_f64(a, b);
                (l * l, m)
            }
            _ => return None,
        };
        let slack = FILTER_EPS * (1.0 + mag) * (1.0 + mag);
        if !d2.is_finite() || (d2 - 1.0).abs() <= slack {
            None
        } else {
            Some(d2.partial_cmp(&1.0)?)
        }
    }

    /// Float distance, for reporting and tolerance checks.
    pub fn dist_f(&self, p: &Point, q: &Point) -> f64 {
        self.distance(p, q).map(|l| l.to_f64()).unwrap_or(f64::NAN)
    }

    pub fn same_point(&self, p: &Point, q: &Point) -> bool {
        match self.distance(p, q) {
            Ok(l) if l.is_exact() => l.is_zero(),
            Ok(l) => l.to_f64() <= 1e-12,
            Err(_) => false,
        }
    }

    fn geo(&self, repr: Repr, domain: Domain) -> Geodesic {
        Geodesic { space: self.clone(), repr, domain }
    }

    /// Complete geodesic with `c(0) = p` and `c(d(p,q)) = q`.
    pub fn geodesic_through(&self, p: &Point, q: &Point) -> Result<Geodesic, GeometryError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if self.same_point(p, q) {
            return Err(GeometryError::SamePoints);
        }
        let repr = match (p, q) {
            (Point::Plane(a), Point::Plane(b)) => {
                let d = self.distance(p, q)?.value();
                let u = [div_exact(&(&b[0] - &a[0]), &d), div_exact(&(&b[1] - &a[1]), &d)];
                Repr::Line { p: a.clone(), u }
            }
            (Point::Hyper(a), Point::Hyper(b)) => Repr::Hyper { p: *a, v: lz::tangent_toward(a, b) },
            (Point::Tree(a), Point::Tree(b)) => {
                Repr::Tree(self.tree().line_through(a, b).ok_or(GeometryError::SamePoints)?)
            }
            (Point::Product(a, h), Point::Product(b, k)) => {
                let l = self.tree().distance(a, b);
                let dh = k - h;
                if l.is_zero() {
                    let one = dh.lift(Rational::one());
                    Repr::Product {
                        line: None,
                        foot: a.clone(),
                        h0: h.clone(),
                        c: dh.lift(Rational::zero()),
                        s: if dh.signum() > 0 { one } else { -one },
                    }
                } else {
                    let d = self.distance(p, q)?.value();
                    Repr::Product {
                        line: self.tree().line_through(a, b),
                        foot: a.clone(),
                        h0: h.clone(),
                        c: div_exact(&l, &d),
                        s: div_exact(&dh, &d),
                    }
                }
            }
            _ => return Err(GeometryError::SpaceMismatch),
        };
        Ok(self.geo(repr, Domain::Complete))
    }

    /// The segment `[p, q]` as a geodesic on `[0, d(p,q)]`.
    pub fn segment(&self, p: &Point, q: &Point) -> Result<Geodesic, GeometryError> {
        let g = self.geodesic_through(p, q)?;
        let d = self.distance(p, q)?.value();
        Ok(g.segment(d))
    }

    /// Ray from `p` to `ξ`.
    pub fn geodesic_to_ideal(&self, p: &Point, xi: &IdealPoint) -> Result<Geodesic, GeometryError> {
        self.check_point(p)?;
        self.check_ideal(xi)?;
        let repr = match (p, xi) {
            (Point::Plane(a), IdealPoint::Direction(u)) => Repr::Line { p: a.clone(), u: u.clone() },
            (Point::Hyper(a), IdealPoint::Angle(t)) => {
                Repr::Hyper { p: *a, v: lz::tangent_toward(a, &lz::null_of(*t)) }
            }
            (Point::Tree(a), IdealPoint::End(r)) => Repr::Tree(self.tree().line_to_end(a, *r)),
            (Point::Product(a, h), IdealPoint::ProductEnd { end, slope }) => {
                let (c, s) = product_dir(*end, *slope, self.is_exact());
                Repr::Product {
                    line: end.map(|e| self.tree().line_to_end(a, e)),
                    foot: a.clone(),
                    h0: h.clone(),
                    c,
                    s,
                }
            }
            _ => return Err(GeometryError::SpaceMismatch),
        };
        Ok(self.geo(repr, Domain::Ray))
    }

    /// Complete geodesic with `c(+∞) = ξ`, `c(−∞) = η`, through the point of
    /// the family nearest to `anchor`; `c(0)` is the projection of `anchor`.
    pub fn geodesic_between_ideals(
        &self,
        xi: &IdealPoint,
        eta: &IdealPoint,
        anchor: &Point,
    ) -> Result<Geodesic, GeometryError> {
        self.check_ideal(xi)?;
        self.check_ideal(eta)?;
        self.check_point(anchor)?;
        if self.same_ideal(xi, eta) {
            return Err(GeometryError::NoGeodesic);
        }
        let g = match (xi, eta, anchor) {
            (IdealPoint::Direction(u), IdealPoint::Direction(w), Point::Plane(a)) => {
                let opp = |x: &Scalar, y: &Scalar| {
                    let s = x + y;
                    if s.is_exact() {
                        s.is_zero()
                    } else {
                        s.to_f64().abs() < 1e-12
                    }
                };
                if !(opp(&u[0], &w[0]) && opp(&u[1], &w[1])) {
                    return Err(GeometryError::NoGeodesic);
                }
                self.geo(Repr::Line { p: a.clone(), u: u.clone() }, Domain::Complete)
            }
            (IdealPoint::Angle(a), IdealPoint::Angle(b), Point::Hyper(x)) => {
                let lp = lz::null_of(*a);
                let lm = lz::null_of(*b);
                let k = (-2.0 * lz::dot(&lp, &lm)).sqrt();
                let p0 = lz::scale(1.0 / k, &lz::add(&lp, &lm));
                let v0 = lz::scale(1.0 / k, &lz::sub(&lp, &lm));
                let g = self.geo(Repr::Hyper { p: p0, v: v0 }, Domain::Complete);
                let (t, _) = self.project(&Point::Hyper(*x), &g)?;
                g.shifted(&t)
            }
            (IdealPoint::End(e1), IdealPoint::End(e2), Point::Tree(x)) => {
                let line = self.tree().line_between_ends(*e2, *e1, self.is_exact()).ok_or(GeometryError::NoGeodesic)?;
                let (t, _) = line.project(self.tree(), x);
                self.geo(Repr::Tree(line.shifted(&t)), Domain::Complete)
            }
            (
                IdealPoint::ProductEnd { end: e1, slope: s1 },
                IdealPoint::ProductEnd { end: e2, slope: s2 },
                Point::Product(x, h),
            ) => {
                if *s1 != -*s2 {
                    return Err(GeometryError::NoGeodesic);
                }
                match (e1, e2) {
                    (None, None) => {
                        let (c, s) = product_dir(None, *s1, self.is_exact());
                        self.geo(
                            Repr::Product { line: None, foot: x.clone(), h0: h.clone(), c, s },
                            Domain::Complete,
                        )
                    }
                    (Some(a), Some(b)) => {
                        let line = self
                            .tree()
                            .line_between_ends(*b, *a, self.is_exact())
                            .ok_or(GeometryError::NoGeodesic)?;
                        let (tau, _) = line.project(self.tree(), x);
                        let (c, s) = product_dir(Some(*a), *s1, self.is_exact());
                        // the line through (tau, h) in flat coordinates, anchored there
                        self.geo(
                            Repr::Product {
                                line: Some(line.shifted(&tau)),
                                foot: x.clone(),
                                h0: h.clone(),
                                c,
                                s,
                            },
                            Domain::Complete,
                        )
                    }
                    _ => return Err(GeometryError::NoGeodesic),
                }
            }
            _ => return Err(GeometryError::SpaceMismatch),
        };
        Ok(g)
    }

    pub fn same_ideal(&self, a: &IdealPoint, b: &IdealPoint) -> bool {
        match (a, b) {
            (IdealPoint::Direction(u), IdealPoint::Direction(w)) => {
                let e0 = &u[0] - &w[0];
                let e1 = &u[1] - &w[1];
                if e0.is_exact() && e1.is_exact() {
                    e0.is_zero() && e1.is_zero()
                } else {
                    e0.to_f64().abs() < 1e-12 && e1.to_f64().abs() < 1e-12
                }
            }
            (IdealPoint::Angle(x), IdealPoint::Angle(y)) => lz::angle_diff(*x, *y) < 1e-12,
            (IdealPoint::End(x), IdealPoint::End(y)) => x == y,
            (
                IdealPoint::ProductEnd { end: e1, slope: s1 },
                IdealPoint::ProductEnd { end: e2, slope: s2 },
            ) => e1 == e2 && s1 == s2,
            _ => false,
        }
    }

    /// `β_ξ(x)` normalized by `β_ξ(base) = 0`.
    pub fn busemann(&self, xi: &IdealPoint, base: &Point, x: &Point) -> Result<Scalar, GeometryError> {
        self.check_ideal(xi)?;
        match (xi, base, x) {
            (IdealPoint::Direction(u), Point::Plane(b), Point::Plane(p)) => {
                let d = &(&(&p[0] - &b[0]) * &u[0]) + &(&(&p[1] - &b[1]) * &u[1]);
                Ok(-d)
            }
            (IdealPoint::Angle(t), Point::Hyper(b), Point::Hyper(p)) => {
                let l = lz::null_of(*t);
                Ok(Scalar::Float((-lz::dot(p, &l)).ln() - (-lz::dot(b, &l)).ln()))
            }
            (IdealPoint::End(r), Point::Tree(b), Point::Tree(p)) => Ok(self.tree().busemann(*r, b, p)),
            (IdealPoint::ProductEnd { end, slope }, Point::Product(b, hb), Point::Product(p, hp)) => {
                let (c, s) = product_dir(*end, *slope, self.is_exact());
                let vert = -&(&s * &(hp - hb));
                Ok(match end {
                    Some(e) => &(&c * &self.tree().busemann(*e, b, p)) + &vert,
                    None => vert,
                })
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// Nearest point of the carrier of `c` to `x`, with its parameter.
    pub fn project(&self, x: &Point, c: &Geodesic) -> Result<(Scalar, Point), GeometryError> {
        let t = match (&c.repr, x) {
            (Repr::Line { p, u }, Point::Plane(a)) => {
                &(&(&a[0] - &p[0]) * &u[0]) + &(&(&a[1] - &p[1]) * &u[1])
            }
            (Repr::Hyper { p, v }, Point::Hyper(a)) => {
                let n = lz::unit_space(&lz::cross(p, v));
                let s = lz::dot(a, &n);
                let foot = lz::scale(1.0 / (1.0 + s * s).sqrt(), &lz::sub(a, &lz::scale(s, &n)));
                Scalar::Float(lz::dot(&foot, v).asinh())
            }
            (Repr::Tree(line), Point::Tree(a)) => line.project(self.tree(), a).0,
            (Repr::Product { line, h0, c: cc, s, .. }, Point::Product(a, h)) => match line {
                None => div_exact(&(h - h0), s),
                Some(l) => {
                    let (tau, rho) = l.project(self.tree(), a);
                    let dh = h - h0;
                    let base = &(cc * &tau) + &(s * &dh);
                    let kink = div_exact(&tau, cc);
                    let right = &base - &(cc * &rho);
                    let left = &base + &(cc * &rho);
                    if (cc * &right) > tau {
                        right
                    } else if (cc * &left) < tau {
                        left
                    } else {
                        kink
                    }
                }
            },
            _ => return Err(GeometryError::SpaceMismatch),
        };
        let foot = c.eval_unchecked(&t);
        Ok((t, foot))
    }

    fn unit_tangent_f(&self, x: &Point, d: &DirectionAtPoint) -> Result<Tangent, GeometryError> {
        if !self.same_point(x, &d.base) {
            return Err(GeometryError::NotBased);
        }
        match (x, &d.toward) {
            (Point::Plane(a), Toward::Point(Point::Plane(b))) => {
                let v = [(&b[0] - &a[0]).to_f64(), (&b[1] - &a[1]).to_f64()];
                Ok(Tangent::Flat(v))
            }
            (Point::Plane(_), Toward::Ideal(IdealPoint::Direction(u))) => {
                Ok(Tangent::Flat([u[0].to_f64(), u[1].to_f64()]))
            }
            (Point::Hyper(a), Toward::Point(Point::Hyper(b))) => Ok(Tangent::Hyper(lz::tangent_toward(a, b))),
            (Point::Hyper(a), Toward::Ideal(IdealPoint::Angle(t))) => {
                Ok(Tangent::Hyper(lz::tangent_toward(a, &lz::null_of(*t))))
            }
            (Point::Tree(a), Toward::Point(Point::Tree(b))) => {
                Ok(Tangent::Tree(self.tree().germ_toward(a, b).ok_or(GeometryError::SamePoints)?))
            }
            (Point::Tree(a), Toward::Ideal(IdealPoint::End(r))) => {
                Ok(Tangent::Tree(self.tree().germ_toward_end(a, *r)))
            }
            (Point::Product(a, h), Toward::Point(Point::Product(b, k))) => {
                let l = self.tree().distance(a, b).to_f64();
                let dh = (k - h).to_f64();
                let n = l.hypot(dh);
                if n == 0.0 {
                    return Err(GeometryError::SamePoints);
                }
                let g = self.tree().germ_toward(a, b);
                Ok(Tangent::Product(g, l / n, dh / n))
            }
            (Point::Product(a, _), Toward::Ideal(IdealPoint::ProductEnd { end, slope })) => {
                let (c, s) = product_dir(*end, *slope, false);
                let g = end.map(|e| self.tree().germ_toward_end(a, e));
                Ok(Tangent::Product(g, c.to_f64(), s.to_f64()))
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// Angle at `x` between two directions, in `[0, π]`.
    pub fn angle(&self, x: &Point, u: &DirectionAtPoint, v: &DirectionAtPoint) -> Result<f64, GeometryError> {
        let a = self.unit_tangent_f(x, u)?;
        let b = self.unit_tangent_f(x, v)?;
        Ok(match (a, b) {
            (Tangent::Flat(p), Tangent::Flat(q)) => {
                let cr = p[0] * q[1] - p[1] * q[0];
                let dt = p[0] * q[0] + p[1] * q[1];
                cr.abs().atan2(dt)
            }
            (Tangent::Hyper(p), Tangent::Hyper(q)) => {
                // the tangent plane is Euclidean; use a frame for accuracy
                let w = lz::sub(&p, &q);
                let chord = lz::dot(&w, &w).max(0.0).sqrt();
                2.0 * (0.5 * chord).min(1.0).asin()
            }
            (Tangent::Tree(g), Tangent::Tree(h)) => {
                if g == h {
                    0.0
                } else {
                    PI
                }
            }
            (Tangent::Product(g1, c1, s1), Tangent::Product(g2, c2, s2)) => {
                let same = match (g1, g2) {
                    (Some(a), Some(b)) => {
                        if a == b {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                    _ => 0.0,
                };
                (c1 * c2 * same + s1 * s2).clamp(-1.0, 1.0).acos()
            }
            _ => return Err(GeometryError::SpaceMismatch),
        })
    }

    /// Whether exactly one direction at `x` makes angle π with `u`.
    pub fn has_unique_inverse_direction(&self, x: &Point, u: &DirectionAtPoint) -> Result<bool, GeometryError> {
        let t = self.unit_tangent_f(x, u)?;
        Ok(match (t, x) {
            (Tangent::Tree(_), Point::Tree(p)) => self.tree().germs_of(p).len() == 2,
            (Tangent::Product(g, c, _), Point::Product(p, _)) => {
                g.is_none() || c == 0.0 || self.tree().germs_of(p).len() == 2
            }
            _ => true,
        })
    }

    /// Point at fraction `λ` of the way from `p` to `q`; `λ > 1` continues past `q`.
    pub fn interpolate(&self, p: &Point, q: &Point, lambda: &Rational) -> Result<Point, GeometryError> {
        match (p, q) {
            (Point::Plane(a), Point::Plane(b)) => {
                let l = a[0].lift(lambda.clone());
                let l = if a[0].is_exact() && b[0].is_exact() { l } else { Scalar::Float(lambda.to_f64()) };
                Ok(Point::Plane([
                    &a[0] + &(&l * &(&b[0] - &a[0])),
                    &a[1] + &(&l * &(&b[1] - &a[1])),
                ]))
            }
            (Point::Hyper(a), Point::Hyper(b)) => {
                let d = lz::dist(a, b);
                if d == 0.0 {
                    return Ok(p.clone());
                }
                let v = lz::tangent_toward(a, b);
                Ok(Point::Hyper(lz::exp(a, &v, lambda.to_f64() * d)))
            }
            (Point::Tree(a), Point::Tree(b)) => {
                let d = self.tree().distance(a, b);
                if d.is_zero() {
                    return Ok(p.clone());
                }
                let line = self.tree().line_through(a, b).expect("distinct points");
                Ok(Point::Tree(line.eval(&d.scale(lambda)).expect("complete line")))
            }
            (Point::Product(a, h), Point::Product(b, k)) => {
                let d = self.tree().distance(a, b);
                let tp = if d.is_zero() {
                    a.clone()
                } else {
                    let line = self.tree().line_through(a, b).expect("distinct points");
                    line.eval(&d.scale(lambda)).expect("complete line")
                };
                Ok(Point::Product(tp, h + &(k - h).scale(lambda)))
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// Points at distance `r` from `center` spread over directions: the given
    /// angles in the plane and the hyperbolic plane, every branch in a tree,
    /// every branch times the given tilts in tree × line.
    pub fn sphere_points(&self, center: &Point, r: &Scalar, angles: &[f64]) -> Vec<Point> {
        match center {
            Point::Plane([x, y]) => angles
                .iter()
                .map(|&th| {
                    if x.is_exact() && y.is_exact() && r.is_exact() {
                        let (c, s) = rational_direction(th);
                        Point::Plane([x + &r.scale(&c), y + &r.scale(&s)])
                    } else {
                        let rf = r.to_f64();
                        Point::Plane([
                            Scalar::Float(x.to_f64() + rf * th.cos()),
                            Scalar::Float(y.to_f64() + rf * th.sin()),
                        ])
                    }
                })
                .collect(),
            Point::Hyper(p) => {
                let (e1, e2) = lz::frame(p);
                let rf = r.to_f64();
                angles
                    .iter()
                    .map(|&th| {
                        let v = lz::comb(th.cos(), &e1, th.sin(), &e2);
                        Point::Hyper(lz::exp(p, &v, rf))
                    })
                    .collect()
            }
            Point::Tree(p) => self.tree().sphere(p, r, &[]).into_iter().map(Point::Tree).collect(),
            Point::Product(p, h) => {
                let tree = self.tree();
                let one = r.lift(Rational::one());
                let mut out = vec![
                    Point::Product(p.clone(), h + r),
                    Point::Product(p.clone(), h - r),
                ];
                let germs = tree.germs_of(p);
                for g in germs.iter() {
                    let skip: Vec<Germ> = germs.iter().copied().filter(|x| x != g).collect();
                    for &th in angles {
                        // tilt in (−π/2, π/2)
                        let tilt = 0.5 * ((th + PI).rem_euclid(2.0 * PI) - PI);
                        let (c, s) = if r.is_exact() {
                            let (c, s) = rational_direction(tilt);
                            (r.scale(&c), r.scale(&s))
                        } else {
                            let rf = r.to_f64();
                            (Scalar::Float(rf * tilt.cos()), Scalar::Float(rf * tilt.sin()))
                        };
                        if c.signum() <= 0 {
                            continue;
                        }
                        let _ = &one;
                        for tp in tree.sphere(p, &c, &skip) {
                            out.push(Point::Product(tp, h + &s));
                        }
                    }
                }
                out
            }
        }
    }

    /// Largest `d(x,y) − d(x̄,ȳ)` over sampled pairs of side points of the
    /// triangle and their Euclidean comparison points.
    pub fn comparison_check(&self, tri: (&Point, &Point, &Point), samples: usize) -> Result<f64, GeometryError> {
        let (p, q, r) = tri;
        let a = self.dist_f(q, r);
        let b = self.dist_f(p, r);
        let c = self.dist_f(p, q);
        let cx = if c > 0.0 { (b * b + c * c - a * a) / (2.0 * c) } else { 0.0 };
        let cy = (b * b - cx * cx).max(0.0).sqrt();
        let bar = [[0.0, 0.0], [c, 0.0], [cx, cy]];
        let pts = [p, q, r];
        let sides = [(0usize, 1usize), (1, 2), (2, 0)];
        let n = samples.max(1) as i64;
        let mut worst = f64::NEG_INFINITY;
        for (i, &(s0, s1)) in sides.iter().enumerate() {
            for &(t0, t1) in sides.iter().skip(i) {
                for k in 0..=n {
                    for m in 0..=n {
                        let l1 = Rational::new(k, n);
                        let l2 = Rational::new(m, n);
                        let x = self.interpolate(pts[s0], pts[s1], &l1)?;
                        let y = self.interpolate(pts[t0], pts[t1], &l2)?;
                        let (lf1, lf2) = (l1.to_f64(), l2.to_f64());
                        let xb = [
                            bar[s0][0] + lf1 * (bar[s1][0] - bar[s0][0]),
                            bar[s0][1] + lf1 * (bar[s1][1] - bar[s0][1]),
                        ];
                        let yb = [
                            bar[t0][0] + lf2 * (bar[t1][0] - bar[t0][0]),
                            bar[t0][1] + lf2 * (bar[t1][1] - bar[t0][1]),
                        ];
                        let v = self.dist_f(&x, &y) - (xb[0] - yb[0]).hypot(xb[1] - yb[1]);
                        worst = worst.max(v);
                    }
                }
            }
        }
        Ok(worst)
    }

    pub fn tits_distance(&self, xi: &IdealPoint, eta: &IdealPoint) -> Result<f64, GeometryError> {
        self.check_ideal(xi)?;
        self.check_ideal(eta)?;
        match (self.kind, xi, eta) {
            (SpaceKind::EuclideanPlane, IdealPoint::Direction(u), IdealPoint::Direction(w)) => {
                let (u0, u1, w0, w1) = (u[0].to_f64(), u[1].to_f64(), w[0].to_f64(), w[1].to_f64());
                Ok((u0 * w1 - u1 * w0).abs().atan2(u0 * w0 + u1 * w1))
            }
            (SpaceKind::HyperbolicPlane, _, _) => {
                Ok(if self.same_ideal(xi, eta) { 0.0 } else { f64::INFINITY })
            }
            _ => Err(GeometryError::Unsupported),
        }
    }

    /// Whether `c` bounds a flat strip (ground truth).
    pub fn bounds_flat_strip(&self, c: &Geodesic) -> bool {
        match self.kind {
            SpaceKind::EuclideanPlane | SpaceKind::TreeCrossLine => {
                matches!(c.domain, Domain::Complete)
            }
            SpaceKind::HyperbolicPlane | SpaceKind::MetricTree => false,
        }
    }

    /// Exact test whether `x0` lies on a geodesic from `a` to `b` (points or
    /// ideal points) strictly between them.
    pub fn is_between(&self, a: &Toward, x0: &Point, b: &Toward) -> Result<bool, GeometryError> {
        let is_x0 = |t: &Toward| matches!(t, Toward::Point(p) if self.same_point(p, x0));
        if is_x0(a) || is_x0(b) {
            return Ok(false);
        }
        match x0 {
            Point::Plane(x) if self.is_exact() || x[0].is_exact() => {
                let vec = |t: &Toward| -> [Scalar; 2] {
                    match t {
                        Toward::Point(Point::Plane(q)) => [&q[0] - &x[0], &q[1] - &x[1]],
                        Toward::Ideal(IdealPoint::Direction(u)) => u.clone(),
                        _ => [Scalar::Float(f64::NAN), Scalar::Float(f64::NAN)],
                    }
                };
                let (u, w) = (vec(a), vec(b));
                let cross = &(&u[0] * &w[1]) - &(&u[1] * &w[0]);
                let dot = &(&u[0] * &w[0]) + &(&u[1] * &w[1]);
                if cross.is_exact() && dot.is_exact() {
                    return Ok(cross.is_zero() && dot.signum() < 0);
                }
                let n = (u[0].to_f64().hypot(u[1].to_f64())) * (w[0].to_f64().hypot(w[1].to_f64()));
                Ok(cross.to_f64().abs() <= 1e-12 * n && dot.to_f64() < 0.0)
            }
            Point::Tree(_) => {
                let da = DirectionAtPoint { base: x0.clone(), toward: a.clone() };
                let db = DirectionAtPoint { base: x0.clone(), toward: b.clone() };
                Ok(self.angle(x0, &da, &db)? == PI)
            }
            Point::Product(p, h) if self.is_exact() => {
                let tree = self.tree();
                let comp = |t: &Toward| -> Option<(Option<Germ>, Scalar, Scalar)> {
                    match t {
                        Toward::Point(Point::Product(q, k)) => {
                            Some((tree.germ_toward(p, q), tree.distance(p, q), k - h))
                        }
                        Toward::Ideal(IdealPoint::ProductEnd { end, slope }) => {
                            let (c, s) = product_dir(*end, *slope, true);
                            Some((end.map(|e| tree.germ_toward_end(p, e)), c, s))
                        }
                        _ => None,
                    }
                };
                let (Some((g1, l1, d1)), Some((g2, l2, d2))) = (comp(a), comp(b)) else {
                    return Err(GeometryError::SpaceMismatch);
                };
                let slopes_match = (&(&l1 * &d2) + &(&l2 * &d1)).is_zero();
                if l1.is_zero() && l2.is_zero() {
                    return Ok(d1.signum() * d2.signum() < 0);
                }
                Ok(slopes_match && !l1.is_zero() && !l2.is_zero() && g1 != g2)
            }
            _ => {
                let da = DirectionAtPoint { base: x0.clone(), toward: a.clone() };
                let db = DirectionAtPoint { base: x0.clone(), toward: b.clone() };
                Ok(self.angle(x0, &da, &db)? > PI - 1e-9)
            }
        }
    }

    /// Random point with coordinates of moderate size (exact spaces get
    /// dyadic rationals).
    pub fn random_point<R: Rng>(&self, rng: &mut R, scale: f64) -> Point {
        let q = |rng: &mut R, s: f64| -> Scalar {
            let v = rng.gen_range(-s..s);
            if self.is_exact() {
                Scalar::rational(Rational::new((v * 4096.0).round() as i64, 4096))
            } else {
                Scalar::Float(v)
            }
        };
        match self.kind {
            SpaceKind::EuclideanPlane => Point::Plane([q(rng, scale), q(rng, scale)]),
            SpaceKind::HyperbolicPlane => {
                let r = rng.gen_range(0.0..scale);
                let phi = rng.gen_range(0.0..2.0 * PI);
                Point::Hyper(lz::polar(r, phi))
            }
            SpaceKind::MetricTree => Point::Tree(self.random_tree_point(rng, scale)),
            SpaceKind::TreeCrossLine => {
                let t = self.random_tree_point(rng, scale);
                Point::Product(t, q(rng, scale))
            }
        }
    }

    fn random_tree_point<R: Rng>(&self, rng: &mut R, scale: f64) -> TreePoint {
        let tree = self.tree();
        let ne = tree.edges().len();
        let nr = tree.rays().len();
        let k = rng.gen_range(0..ne + nr);
        let frac = rng.gen_range(0..=4096i64);
        if k < ne {
            let len = &tree.edges()[k].length;
            let off = len * &Rational::new(frac, 4096);
            TreePoint { seg: Seg::Edge(k), offset: self.num(off) }
        } else {
            let off = Rational::new((frac as f64 * scale).round() as i64, 4096);
            TreePoint { seg: Seg::Ray(k - ne), offset: self.num(off) }
        }
    }
}

enum Tangent {
    Flat([f64; 2]),
    Hyper(V3),
    Tree(Germ),
    Product(Option<Germ>, f64, f64),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> ModelSpace {
        ModelSpace::euclidean(NumericMode::ExactRational)
    }

    #[test]
    fn pythagoras_exact() {
        let d = e().distance(&Point::xy_q(0, 0, 1), &Point::xy_q(3, 4, 1)).unwrap();
        assert_eq!(d.value(), Scalar::int(5));
    }

    #[test]
    fn rational_directions_are_unit() {
        for k in 0..64 {
            let (c, s) = rational_direction(k as f64 * 0.1);
            assert_eq!(&(&c * &c) + &(&s * &s), Rational::one());
        }
    }

    #[test]
    fn euclid_geodesic_exact_with_surd_direction() {
        let s = e();
        let p = Point::xy_q(0, 0, 1);
        let q = Point::xy_q(1, 1, 1);
        let g = s.geodesic_through(&p, &q).unwrap();
        let d = s.distance(&p, &q).unwrap().value();
        assert!(d.is_exact());
        let back = g.eval(&d).unwrap();
        assert!(s.same_point(&back, &q));
        assert_eq!(g.param_of(&q).unwrap(), d);
    }

    #[test]
    fn product_projection_off_flat() {
        let t = MetricTree::parse("vertex o\nvertex a\nedge o a 2\nray o\nray a\nray o\n").unwrap();
        let s = ModelSpace::tree_cross_line(t, NumericMode::FloatWithTolerance);
        let p = Point::Product(TreePoint { seg: Seg::Ray(0), offset: Scalar::Float(1.0) }, Scalar::Float(0.0));
        let q = Point::Product(TreePoint { seg: Seg::Ray(1), offset: Scalar::Float(1.0) }, Scalar::Float(4.0));
        let g = s.geodesic_through(&p, &q).unwrap();
        let x = Point::Product(TreePoint { seg: Seg::Ray(2), offset: Scalar::Float(0.7) }, Scalar::Float(1.3));
        let (t, foot) = s.project(&x, &g).unwrap();
        let d0 = s.dist_f(&x, &foot);
        for k in -200..200 {
            let y = g.eval(&Scalar::Float(t.to_f64() + k as f64 * 1e-3)).unwrap();
            assert!(s.dist_f(&x, &y) >= d0 - 1e-12);
        }
    }
}
