//! Flat strips around geodesics, their Euclidean charts, and horizontal sections.

use thiserror::Error;

use crate::model_spaces::geodesic::Repr;
use crate::model_spaces::{
    Domain, Geodesic, GeometryError, IdealPoint, ModelSpace, Point, SpaceKind, Toward, TreeLine,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StripError {
    #[error("geodesic does not bound a flat strip in this space")]
    NoStrip,
    #[error("geodesics are not parallel inside a common flat")]
    NotParallel,
    #[error("point is not in the parallel set of the geodesic")]
    NotInParallelSet,
    #[error("strip too narrow: tape width exceeds strip width")]
    TooNarrow,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Isometric chart `(u, t) ↦ point` of a flat containing a geodesic `c`, with
/// `c(t) = chart(0, t)`.
#[derive(Clone, Debug)]
pub enum FlatChart {
    Plane { o: [Scalar; 2], e: [Scalar; 2], n: [Scalar; 2] },
    /// Flat `L × ℝ` in tree × line with coordinates `(τ, h)`; `e = (ec, es)`
    /// is the direction of `c`, `n` the normal.
    Product { line: TreeLine, tau0: Scalar, h0: Scalar, e: [Scalar; 2], n: [Scalar; 2] },
}

impl FlatChart {
    /// Chart of a flat through `c`, with the normal on the given side.
    pub fn for_geodesic(space: &ModelSpace, c: &Geodesic, side: i8) -> Result<FlatChart, StripError> {
        Self::for_geodesic_via(space, c, side, None)
    }

    /// As [`FlatChart::for_geodesic`]; a vertical line in tree × line lies in
    /// many flats, and `via` picks one containing that point.
    pub fn for_geodesic_via(
        space: &ModelSpace,
        c: &Geodesic,
        side: i8,
        via: Option<&Point>,
    ) -> Result<FlatChart, StripError> {
        if !matches!(c.domain(), Domain::Complete) {
            return Err(StripError::NoStrip);
        }
        let sg = |x: &Scalar| if side < 0 { -x } else { x.clone() };
        match &c.repr {
            Repr::Line { p, u } => Ok(FlatChart::Plane {
                o: p.clone(),
                e: u.clone(),
                n: [sg(&-&u[1]), sg(&u[0])],
            }),
            Repr::Product { line, foot, h0, c: ec, s } => {
                let tree = space.tree();
                let (line, tau0) = match line {
                    Some(l) => (l.clone(), ec.lift(crate::exact::Rational::zero())),
                    None => {
                        let through = match via {
                            Some(Point::Product(q, _)) => tree.line_through(foot, q),
                            _ => None,
                        };
                        (through.unwrap_or_else(|| tree.line_to_end(foot, 0)), s.lift(crate::exact::Rational::zero()))
                    }
                };
                Ok(FlatChart::Product {
                    line,
                    tau0,
                    h0: h0.clone(),
                    e: [ec.clone(), s.clone()],
                    n: [sg(&-s), sg(ec)],
                })
            }
            _ => Err(StripError::NoStrip),
        }
    }

    pub fn point(&self, u: &Scalar, t: &Scalar) -> Point {
        match self {
            FlatChart::Plane { o, e, n } => Point::Plane([
                &(&o[0] + &(&e[0] * t)) + &(&n[0] * u),
                &(&o[1] + &(&e[1] * t)) + &(&n[1] * u),
            ]),
            FlatChart::Product { line, tau0, h0, e, n } => {
                let tau = &(tau0 + &(&e[0] * t)) + &(&n[0] * u);
                let h = &(h0 + &(&e[1] * t)) + &(&n[1] * u);
                Point::Product(line.eval(&tau).expect("complete line"), h)
            }
        }
    }

    /// The geodesic `t ↦ chart(u, t)`.
    pub fn parallel(&self, space: &ModelSpace, u: &Scalar) -> Geodesic {
        let repr = match self {
            FlatChart::Plane { e, .. } => {
                let Point::Plane(p) = self.point(u, &u.lift(crate::exact::Rational::zero())) else { unreachable!() };
                Repr::Line { p, u: e.clone() }
            }
            FlatChart::Product { line, tau0, h0, e, n } => {
                let tau = tau0 + &(&n[0] * u);
                let foot = line.eval(&tau).expect("complete line");
                let h = h0 + &(&n[1] * u);
                if e[0].is_zero() {
                    Repr::Product { line: None, foot, h0: h, c: e[0].clone(), s: e[1].clone() }
                } else {
                    Repr::Product { line: Some(line.shifted(&tau)), foot, h0: h, c: e[0].clone(), s: e[1].clone() }
                }
            }
        };
        Geodesic { space: space.clone(), repr, domain: Domain::Complete }
    }

    /// Chart coordinates `(u, t)` of a point of the flat.
    pub fn coords(&self, space: &ModelSpace, p: &Point) -> Option<(Scalar, Scalar)> {
        match (self, p) {
            (FlatChart::Plane { o, e, n }, Point::Plane(x)) => {
                let d = [&x[0] - &o[0], &x[1] - &o[1]];
                let t = &(&d[0] * &e[0]) + &(&d[1] * &e[1]);
                let u = &(&d[0] * &n[0]) + &(&d[1] * &n[1]);
                Some((u, t))
            }
            (FlatChart::Product { line, tau0, h0, e, n }, Point::Product(tp, h)) => {
                let tau = line.param_of(space.tree(), tp)?;
                let a = &tau - tau0;
                let b = h - h0;
                let t = &(&a * &e[0]) + &(&b * &e[1]);
                let u = &(&a * &n[0]) + &(&b * &n[1]);
                Some((u, t))
            }
            _ => None,
        }
    }
}

/// A flat strip `[0, w] × ℝ` bounded below by `lower`; `width = None` means
/// a half-plane.
#[derive(Clone, Debug)]
pub struct FlatStrip {
    pub space: ModelSpace,
    pub chart: FlatChart,
    pub width: Option<Scalar>,
    pub lower: Geodesic,
}

impl FlatStrip {
    /// Largest strip on the positive side of `c` (unbounded in every shipped flat-hosting space).
    pub fn maximal(space: &ModelSpace, c: &Geodesic) -> Result<FlatStrip, StripError> {
        if !space.bounds_flat_strip(c) {
            return Err(StripError::NoStrip);
        }
        let chart = FlatChart::for_geodesic(space, c, 1)?;
        Ok(FlatStrip { space: space.clone(), chart, width: None, lower: c.complete() })
    }

    /// The strip of width `w` on the positive side of `c`.
    pub fn of_width(space: &ModelSpace, c: &Geodesic, w: Scalar) -> Result<FlatStrip, StripError> {
        let mut s = Self::maximal(space, c)?;
        s.width = Some(w);
        Ok(s)
    }

    /// Strip spanned by two parallel geodesics of one flat.
    pub fn between(space: &ModelSpace, c: &Geodesic, c2: &Geodesic) -> Result<FlatStrip, StripError> {
        if !space.bounds_flat_strip(c) {
            return Err(StripError::NoStrip);
        }
        let zero = space.zero();
        let one = zero.lift(crate::exact::Rational::one());
        let p0 = c2.eval_unchecked(&zero);
        let p1 = c2.eval_unchecked(&one);
        for side in [1i8, -1] {
            let chart = FlatChart::for_geodesic_via(space, c, side, Some(&p0))?;
            let (Some((u0, t0)), Some((u1, t1))) = (chart.coords(space, &p0), chart.coords(space, &p1)) else {
                continue;
            };
            let same_u = if u0.is_exact() { u0 == u1 } else { (u0.to_f64() - u1.to_f64()).abs() < 1e-9 };
            let dt = &t1 - &t0;
            let unit = if dt.is_exact() { dt == one } else { (dt.to_f64() - 1.0).abs() < 1e-9 };
            if !same_u || !unit {
                return Err(StripError::NotParallel);
            }
            if u0.signum() > 0 {
                return Ok(FlatStrip { space: space.clone(), chart, width: Some(u0), lower: c.complete() });
            }
            if u0.is_zero() {
                return Err(StripError::NotParallel);
            }
        }
        Err(StripError::NotParallel)
    }

    pub fn width_f64(&self) -> f64 {
        self.width.as_ref().map_or(f64::INFINITY, |w| w.to_f64())
    }

    pub fn upper(&self) -> Option<Geodesic> {
        self.width.as_ref().map(|w| self.chart.parallel(&self.space, w))
    }

    pub fn point(&self, u: &Scalar, t: &Scalar) -> Point {
        self.chart.point(u, t)
    }
}

/// Section label of a point in the parallel set of `c`: Busemann values for
/// `c(−∞)` and `c(+∞)`, normalized at `c(0)`.
#[derive(Clone, Debug)]
pub struct SectionLabel {
    pub beta_minus: Scalar,
    pub beta_plus: Scalar,
}

impl SectionLabel {
    pub fn same_section(&self, o: &SectionLabel) -> bool {
        let d = &self.beta_plus - &o.beta_plus;
        if d.is_exact() {
            d.is_zero()
        } else {
            d.to_f64().abs() < 1e-9
        }
    }
}

fn ends(c: &Geodesic) -> Result<(IdealPoint, IdealPoint), StripError> {
    match (c.end_minus(), c.end_plus()) {
        (Some(m), Some(p)) => Ok((m, p)),
        _ => Err(StripError::NoStrip),
    }
}

/// Horizontal sections `C′ × {t}` of the parallel set `C = C′ × ℝ` of `c`
/// are the level sets of `β₊`; probes off `C` are rejected.
pub fn parallel_set_sections(
    space: &ModelSpace,
    c: &Geodesic,
    probes: &[Point],
) -> Vec<Result<SectionLabel, StripError>> {
    let (em, ep) = match ends(c) {
        Ok(e) => e,
        Err(e) => return probes.iter().map(|_| Err(e.clone())).collect(),
    };
    let base = c.eval_unchecked(&space.zero());
    probes
        .iter()
        .map(|y| {
            let on_c = space.same_point(y, &base) || c.param_of(y).is_ok();
            if !on_c && !space.is_between(&Toward::Ideal(em.clone()), y, &Toward::Ideal(ep.clone()))? {
                return Err(StripError::NotInParallelSet);
            }
            Ok(SectionLabel {
                beta_minus: space.busemann(&em, &base, y)?,
                beta_plus: space.busemann(&ep, &base, y)?,
            })
        })
        .collect()
}

/// Whether the section of `x` lies strictly below that of `y` (toward `c(−∞)`).
pub fn section_below(space: &ModelSpace, c: &Geodesic, x: &Point, y: &Point) -> Result<bool, StripError> {
    let l = parallel_set_sections(space, c, &[x.clone(), y.clone()]);
    let mut it = l.into_iter();
    let a = it.next().expect("two labels")?;
    let b = it.next().expect("two labels")?;
    let d = &a.beta_plus - &b.beta_plus;
    Ok(if d.is_exact() { d.signum() > 0 } else { d.to_f64() > 1e-12 })
}

/// Whether the space kind hosts flats at all.
pub fn hosts_flats(space: &ModelSpace) -> bool {
    matches!(space.kind(), SpaceKind::EuclideanPlane | SpaceKind::TreeCrossLine)
}
