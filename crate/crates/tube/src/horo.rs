//! Busemann-level transfer between asymptotic geodesics.
//!
//! For geodesics `c₁, c₂` sharing an ideal endpoint `ξ`, the transfer
//! `R(c₁(t)) = c₂(t)` is taken after both are parametrized so that
//! `β_ξ(c₁(t)) = β_ξ(c₂(t))`. It maps points to points of equal Busemann
//! level, so it does not depend on the Busemann basepoint.

use thiserror::Error;

use crate::model_spaces::{Geodesic, GeometryError, IdealPoint, ModelSpace, Point};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HoroError {
    #[error("geodesics are not asymptotic at the given ideal point")]
    NotAsymptotic,
    #[error("chain link {0} is broken")]
    BrokenLink(usize),
    #[error("chain needs at least one geodesic")]
    Empty,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which end of a geodesic an ideal point is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

/// The side of `c` at which `xi` sits, if any.
pub fn side_of(space: &ModelSpace, c: &Geodesic, xi: &IdealPoint) -> Option<Side> {
    if c.end_plus().is_some_and(|e| space.same_ideal(&e, xi)) {
        Some(Side::Plus)
    } else if c.end_minus().is_some_and(|e| space.same_ideal(&e, xi)) {
        Some(Side::Minus)
    } else {
        None
    }
}

/// `β_ξ(c(t)) = β_ξ(c(0)) ∓ t` for `ξ = c(±∞)`; solves for `t` at level `b`.
fn param_at_level(space: &ModelSpace, c: &Geodesic, xi: &IdealPoint, base: &Point, b: &Scalar) -> Result<Scalar, HoroError> {
    let side = side_of(space, c, xi).ok_or(HoroError::NotAsymptotic)?;
    let c0 = c.eval(&space.zero())?;
    let b0 = space.busemann(xi, base, &c0)?;
    Ok(match side {
        Side::Plus => &b0 - b,
        Side::Minus => b - &b0,
    })
}

/// Reparametrize `c₂` so that `β_ξ(c₁(t)) = β_ξ(c₂(t))` for all `t`; the
/// orientation of `c₂` is matched to `c₁` at `ξ`.
pub fn normalize_pair(
    space: &ModelSpace,
    c1: &Geodesic,
    c2: &Geodesic,
    xi: &IdealPoint,
) -> Result<(Geodesic, Geodesic), HoroError> {
    let s1 = side_of(space, c1, xi).ok_or(HoroError::NotAsymptotic)?;
    let s2 = side_of(space, c2, xi).ok_or(HoroError::NotAsymptotic)?;
    let c2 = if s1 == s2 { c2.complete() } else { c2.reversed() };
    let base = c1.eval(&space.zero())?;
    let shift = param_at_level(space, &c2, xi, &base, &space.zero())?;
    Ok((c1.clone(), c2.shifted(&shift)))
}

/// `R_{c₁c₂}(m)`: the point of `c₂` on the horosphere about `ξ` through `m`.
pub fn transfer(space: &ModelSpace, c1: &Geodesic, c2: &Geodesic, xi: &IdealPoint, m: &Point) -> Result<Point, HoroError> {
    side_of(space, c1, xi).ok_or(HoroError::NotAsymptotic)?;
    c1.param_of(m)?;
    let b = space.busemann(xi, m, m)?;
    let t = param_at_level(space, c2, xi, m, &b)?;
    Ok(c2.complete().eval(&t)?)
}

/// A sequence `a₀, …, a_n` with `a_k` and `a_{k+1}` sharing an ideal point.
#[derive(Clone, Debug)]
pub struct AsymptoticChain {
    links: Vec<Geodesic>,
    shared: Vec<(IdealPoint, Side)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ChainSummary {
    pub geodesics: Vec<String>,
    /// Side of `a_k` at which link `k` is attached.
    pub sides: Vec<Side>,
}

/// Sampled asymptoticity: distances between normalized geodesics are
/// non-increasing toward the shared end.
fn sampled_asymptotic(space: &ModelSpace, c1: &Geodesic, c2: &Geodesic, xi: &IdealPoint) -> Result<bool, HoroError> {
    let side = side_of(space, c1, xi).ok_or(HoroError::NotAsymptotic)?;
    let (a, b) = normalize_pair(space, c1, c2, xi)?;
    let mut prev = f64::INFINITY;
    for k in 0..6 {
        // hyperboloid coordinates grow like eᵗ, so stay near the anchor
        let t = space.num(crate::exact::Rational::from_int(side.sign() * k));
        let d = space.dist_f(&a.eval(&t)?, &b.eval(&t)?);
        if d > prev + 1e-6 {
            return Ok(false);
        }
        prev = d;
    }
    Ok(true)
}

impl AsymptoticChain {
    /// Links are attached at `sides[k]` of `geodesics[k]`; each is checked
    /// to share that ideal point with the next geodesic.
    pub fn new(space: &ModelSpace, geodesics: Vec<Geodesic>, sides: &[Side]) -> Result<Self, HoroError> {
        if geodesics.is_empty() {
            return Err(HoroError::Empty);
        }
        if sides.len() + 1 != geodesics.len() {
            return Err(HoroError::BrokenLink(sides.len().min(geodesics.len())));
        }
        let mut shared = Vec::new();
        for (k, side) in sides.iter().enumerate() {
            let xi = match side {
                Side::Plus => geodesics[k].end_plus(),
                Side::Minus => geodesics[k].end_minus(),
            }
            .ok_or(HoroError::BrokenLink(k))?;
            if side_of(space, &geodesics[k + 1], &xi).is_none()
                || !sampled_asymptotic(space, &geodesics[k], &geodesics[k + 1], &xi)?
            {
                return Err(HoroError::BrokenLink(k));
            }
            shared.push((xi, *side));
        }
        Ok(AsymptoticChain { links: geodesics, shared })
    }

    pub fn len(&self) -> usize {
        self.shared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shared.is_empty()
    }

    pub fn first(&self) -> &Geodesic {
        &self.links[0]
    }

    pub fn last(&self) -> &Geodesic {
        self.links.last().expect("nonempty")
    }

    pub fn geodesics(&self) -> &[Geodesic] {
        &self.links
    }

    pub fn ideal(&self, k: usize) -> &IdealPoint {
        &self.shared[k].0
    }

    pub fn summary(&self) -> ChainSummary {
        ChainSummary {
            geodesics: self.links.iter().map(|g| g.describe()).collect(),
            sides: self.shared.iter().map(|s| s.1).collect(),
        }
    }

    /// The chain traversed backwards.
    pub fn reversed(&self, space: &ModelSpace) -> Result<Self, HoroError> {
        let links: Vec<Geodesic> = self.links.iter().rev().cloned().collect();
        let mut sides = Vec::new();
        for (k, (xi, _)) in self.shared.iter().enumerate().rev() {
            sides.push(side_of(space, &self.links[k + 1], xi).ok_or(HoroError::BrokenLink(k))?);
        }
        AsymptoticChain::new(space, links, &sides)
    }
}

/// Composition of the transfers along the chain.
pub fn chain_transfer(space: &ModelSpace, chain: &AsymptoticChain, m: &Point) -> Result<Point, HoroError> {
    let mut p = m.clone();
    for (k, (xi, _)) in chain.shared.iter().enumerate() {
        p = transfer(space, &chain.links[k], &chain.links[k + 1], xi, &p).map_err(|e| match e {
            HoroError::NotAsymptotic => HoroError::BrokenLink(k),
            e => e,
        })?;
    }
    Ok(p)
}

/// The chain `a, a₁, a′` with `a₁` the geodesic from `a(−∞)` to `a′(+∞)`
/// through the projection of `x₀`.
pub fn bridge_chain(space: &ModelSpace, a: &Geodesic, a2: &Geodesic, x0: &Point) -> Result<AsymptoticChain, HoroError> {
    let (Some(am), Some(bp)) = (a.end_minus(), a2.end_plus()) else {
        return Err(HoroError::NotAsymptotic);
    };
    let a1 = space.geodesic_between_ideals(&bp, &am, x0)?;
    AsymptoticChain::new(space, vec![a.complete(), a1, a2.complete()], &[Side::Minus, Side::Plus])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_spaces::NumericMode;

    #[test]
    fn euclidean_transfer() {
        let sp = ModelSpace::euclidean(NumericMode::ExactRational);
        let c1 = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
        let c2 = sp.geodesic_through(&Point::xy_q(5, 1, 1), &Point::xy_q(7, 1, 1)).unwrap();
        let xi = c1.end_plus().unwrap();
        let img = transfer(&sp, &c1, &c2, &xi, &Point::xy_q(3, 0, 1)).unwrap();
        assert!(sp.same_point(&img, &Point::xy_q(3, 1, 1)));
        let id = transfer(&sp, &c1, &c1, &xi, &Point::xy_q(3, 0, 1)).unwrap();
        assert!(sp.same_point(&id, &Point::xy_q(3, 0, 1)));
        let (_, n2) = normalize_pair(&sp, &c1, &c2, &xi).unwrap();
        assert!(sp.same_point(&n2.eval(&Scalar::int(0)).unwrap(), &Point::xy_q(0, 1, 1)));
    }

    #[test]
    fn not_asymptotic() {
        let sp = ModelSpace::euclidean(NumericMode::ExactRational);
        let c1 = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(1, 0, 1)).unwrap();
        let c2 = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(0, 1, 1)).unwrap();
        let xi = c1.end_plus().unwrap();
        assert_eq!(normalize_pair(&sp, &c1, &c2, &xi).unwrap_err(), HoroError::NotAsymptotic);
    }
}
