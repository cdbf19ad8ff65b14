//! Unit-speed geodesics in the model spaces.

use crate::exact::Rational;
use crate::scalar::Scalar;

use super::lorentz::{self as lz, V3};
use super::tree::{TreeLine, TreePoint};
use super::{GeometryError, IdealPoint, ModelSpace, Point};

#[derive(Clone, Debug)]
pub enum Domain {
    Complete,
    /// `[0, ∞)`
    Ray,
    /// `[0, L]`
    Segment(Scalar),
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    Line { p: [Scalar; 2], u: [Scalar; 2] },
    Hyper { p: V3, v: V3 },
    Tree(TreeLine),
    /// `t ↦ (line(c t), h0 + s t)`, or `(foot, h0 + s t)` when `line` is absent.
    Product { line: Option<TreeLine>, foot: TreePoint, h0: Scalar, c: Scalar, s: Scalar },
}

#[derive(Clone, Debug)]
pub struct Geodesic {
    pub(crate) space: ModelSpace,
    pub(crate) repr: Repr,
    pub(crate) domain: Domain,
}

/// `a / b` kept exact when `b` or `b²` is rational.
pub(crate) fn div_exact(a: &Scalar, b: &Scalar) -> Scalar {
    if b.as_rational().is_some() {
        return a / b;
    }
    let b2 = b * b;
    if b2.as_rational().is_some() {
        return &(a * b) / &b2;
    }
    Scalar::Float(a.to_f64() / b.to_f64())
}

impl Geodesic {
    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn in_domain(&self, t: &Scalar) -> bool {
        match &self.domain {
            Domain::Complete => true,
            Domain::Ray => t.signum() >= 0,
            Domain::Segment(l) => t.signum() >= 0 && t <= l,
        }
    }

    pub fn eval(&self, t: &Scalar) -> Result<Point, GeometryError> {
        if !self.in_domain(t) {
            return Err(GeometryError::OutsideDomain(t.to_f64()));
        }
        Ok(self.eval_unchecked(t))
    }

    /// Evaluation at a float parameter.
    pub fn at(&self, t: f64) -> Result<Point, GeometryError> {
        let t = if self.space.is_exact() {
            Scalar::rational(Rational::from_f64(t).ok_or(GeometryError::OutsideDomain(t))?)
        } else {
            Scalar::Float(t)
        };
        self.eval(&t)
    }

    pub(crate) fn eval_unchecked(&self, t: &Scalar) -> Point {
        match &self.repr {
            Repr::Line { p, u } => Point::Plane([&p[0] + &(&u[0] * t), &p[1] + &(&u[1] * t)]),
            Repr::Hyper { p, v } => Point::Hyper(lz::exp(p, v, t.to_f64())),
            Repr::Tree(line) => Point::Tree(line.eval(t).expect("complete tree line")),
            Repr::Product { line, foot, h0, c, s } => {
                let tp = match line {
                    Some(l) => l.eval(&(c * t)).expect("complete tree line"),
                    None => foot.clone(),
                };
                Point::Product(tp, h0 + &(s * t))
            }
        }
    }

    /// Same carrier with the full parameter range.
    pub fn complete(&self) -> Geodesic {
        Geodesic { domain: Domain::Complete, ..self.clone() }
    }

    /// Restriction to `[0, L]`.
    pub fn segment(&self, len: Scalar) -> Geodesic {
        Geodesic { domain: Domain::Segment(len), ..self.clone() }
    }

    /// Complete geodesic `t ↦ c(t + s)`.
    pub fn shifted(&self, s: &Scalar) -> Geodesic {
        let repr = match &self.repr {
            Repr::Line { p, u } => Repr::Line {
                p: [&p[0] + &(&u[0] * s), &p[1] + &(&u[1] * s)],
                u: u.clone(),
            },
            Repr::Hyper { p, v } => {
                let t = s.to_f64();
                Repr::Hyper { p: lz::exp(p, v, t), v: lz::comb(t.sinh(), p, t.cosh(), v) }
            }
            Repr::Tree(line) => Repr::Tree(line.shifted(s)),
            Repr::Product { line, foot, h0, c, s: sv } => Repr::Product {
                line: line.as_ref().map(|l| l.shifted(&(c * s))),
                foot: foot.clone(),
                h0: h0 + &(sv * s),
                c: c.clone(),
                s: sv.clone(),
            },
        };
        Geodesic { space: self.space.clone(), repr, domain: Domain::Complete }
    }

    /// Complete geodesic `t ↦ c(−t)`.
    pub fn reversed(&self) -> Geodesic {
        let repr = match &self.repr {
            Repr::Line { p, u } => Repr::Line { p: p.clone(), u: [-&u[0], -&u[1]] },
            Repr::Hyper { p, v } => Repr::Hyper { p: *p, v: lz::scale(-1.0, v) },
            Repr::Tree(line) => Repr::Tree(line.reversed()),
            Repr::Product { line, foot, h0, c, s } => Repr::Product {
                line: line.as_ref().map(|l| l.reversed()),
                foot: foot.clone(),
                h0: h0.clone(),
                c: c.clone(),
                s: -s,
            },
        };
        Geodesic { space: self.space.clone(), repr, domain: Domain::Complete }
    }

    fn end(&self, plus: bool) -> Option<IdealPoint> {
        match &self.domain {
            Domain::Segment(_) => return None,
            Domain::Ray if !plus => return None,
            _ => {}
        }
        let sg = if plus { 1 } else { -1 };
        match &self.repr {
            Repr::Line { u, .. } => {
                Some(IdealPoint::Direction(if plus { u.clone() } else { [-&u[0], -&u[1]] }))
            }
            Repr::Hyper { p, v } => {
                let l = lz::add(p, &lz::scale(sg as f64, v));
                Some(IdealPoint::Angle(lz::angle_of(&l)))
            }
            Repr::Tree(line) => {
                (if plus { line.end_plus() } else { line.end_minus() }).map(IdealPoint::End)
            }
            Repr::Product { line, c, s, .. } => {
                let slope = sg * s.signum();
                match line {
                    None => Some(IdealPoint::ProductEnd { end: None, slope: slope as i8 }),
                    Some(l) => {
                        if s.signum() != 0 && (c * c) != (s * s) {
                            return None;
                        }
                        let e = if plus { l.end_plus() } else { l.end_minus() };
                        e.map(|e| IdealPoint::ProductEnd { end: Some(e), slope: slope as i8 })
                    }
                }
            }
        }
    }

    /// `c(+∞)` when the domain is unbounded above and the end is representable.
    pub fn end_plus(&self) -> Option<IdealPoint> {
        self.end(true)
    }

    /// `c(−∞)` for complete geodesics.
    pub fn end_minus(&self) -> Option<IdealPoint> {
        self.end(false)
    }

    /// Parameter of a point of the carrier (ignoring the domain).
    pub fn param_of(&self, m: &Point) -> Result<Scalar, GeometryError> {
        let t = match (&self.repr, m) {
            (Repr::Line { p, u }, Point::Plane(x)) => {
                &(&(&x[0] - &p[0]) * &u[0]) + &(&(&x[1] - &p[1]) * &u[1])
            }
            (Repr::Hyper { v, .. }, Point::Hyper(x)) => Scalar::Float(lz::dot(x, v).asinh()),
            (Repr::Tree(line), Point::Tree(x)) => line
                .param_of(self.space.tree(), x)
                .ok_or(GeometryError::NotOnGeodesic(1.0))?,
            (Repr::Product { line, c, s, h0, .. }, Point::Product(x, h)) => match line {
                Some(l) => {
                    let tau = l
                        .param_of(self.space.tree(), x)
                        .ok_or(GeometryError::NotOnGeodesic(1.0))?;
                    div_exact(&tau, c)
                }
                None => div_exact(&(h - h0), s),
            },
            _ => return Err(GeometryError::SpaceMismatch),
        };
        let back = self.eval_unchecked(&t);
        let miss = self.space.distance(&back, m)?;
        let tol = if self.space.is_exact() && back.is_exact() && m.is_exact() { 0.0 } else { 1e-9 };
        let off = miss.to_f64();
        if (tol == 0.0 && !miss.is_zero()) || off > tol {
            return Err(GeometryError::NotOnGeodesic(off));
        }
        Ok(t)
    }

    /// Short text descriptor for reports.
    pub fn describe(&self) -> String {
        let a = self.eval_unchecked(&Scalar::zero_like(self.space.is_exact()));
        let dir = match (self.end_minus(), self.end_plus()) {
            (Some(m), Some(p)) => format!("{} -> {}", m.describe(), p.describe()),
            (_, Some(p)) => format!("ray -> {}", p.describe()),
            _ => "segment".to_string(),
        };
        format!("{} through {}", dir, a.describe())
    }

    /// Congruent copy `s ↦ c(at + s)` moved so that `s = 0` is exactly the
    /// hyperboloid origin. Float distances lose about `e^{2R}·ε` at radius
    /// `R`, so long computations are done near the origin.
    pub fn centered_at(&self, at: f64) -> Option<Geodesic> {
        let Repr::Hyper { p, v } = &self.repr else { return None };
        let m = lz::boost_to_origin(&lz::exp(p, v, at));
        let w = lz::apply(&m, &lz::comb(at.sinh(), p, at.cosh(), v));
        let v = lz::unit_space(&[0.0, w[1], w[2]]);
        let repr = Repr::Hyper { p: [1.0, 0.0, 0.0], v };
        Some(Geodesic { space: self.space.clone(), repr, domain: Domain::Complete })
    }

    /// Anchor and unit tangent in the hyperboloid.
    pub fn hyper_data(&self) -> Option<(V3, V3)> {
        match &self.repr {
            Repr::Hyper { p, v } => Some((*p, *v)),
            _ => None,
        }
    }

    /// Spacelike unit normal of the carrier plane in the hyperboloid model.
    pub fn hyper_normal(&self) -> Option<V3> {
        self.hyper_data().map(|(p, v)| lz::unit_space(&lz::cross(&p, &v)))
    }
}
