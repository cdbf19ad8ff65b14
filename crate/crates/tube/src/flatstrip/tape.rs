//! p-tapes: 4p r-sequences in a flat strip whose incidences subdivide the base.
//!
//! Layout in the strip chart `(u, t)`, with `L = (2p − 1)/p` and
//! `h = √(4p − 1)/(2p)`:
//!
//! ```text
//! x(i, j, z) = chart(i·h, φ + (j − 1 + i/2)·L + z)
//! ```
//!
//! Consecutive levels `i → i + 1` differ by `(h, ±L/2)`, a unit step, and the
//! outer sequences are `3h = s(p)` apart.

use thiserror::Error;

use crate::exact::{Rational, Surd};
use crate::oracle::{OracleSession, Verdict, WitnessSource};
use crate::scalar::Scalar;
use crate::sequences::RSequence;
use crate::model_spaces::Point;

use super::strip::{FlatStrip, StripError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TapeError {
    #[error("tape order {p} is not a multiple of the denominator {n}")]
    NotMultiple { p: u32, n: u64 },
    #[error(transparent)]
    Strip(#[from] StripError),
}

/// `s(p) = 3√(4p−1)/(2p)`.
pub fn tape_width(p: u32) -> f64 {
    let p = p as f64;
    3.0 * (4.0 * p - 1.0).sqrt() / (2.0 * p)
}

pub fn tape_width_exact(p: u32) -> Scalar {
    let h = level_height(p);
    h.scale(&Rational::from_int(3))
}

/// `h = √(4p−1)/(2p)`, the distance between consecutive levels.
fn level_height(p: u32) -> Scalar {
    let p = p as i64;
    Scalar::Exact(Surd::sqrt_rational(&Rational::new(4 * p - 1, 4 * p * p)).expect("small radicand"))
}

/// Smallest `P ≥ 0` with `s(p) ≤ w` for every `p > P`; `None` is an unbounded strip.
pub fn min_tape_order(width: Option<&Scalar>) -> u32 {
    let Some(w) = width else { return 0 };
    let wf = w.to_f64();
    if wf <= 0.0 {
        return u32::MAX;
    }
    // s(p) ≤ w  ⟺  4w²p² − 36p + 9 ≥ 0; take the larger root as a first guess
    let disc = (9.0 - wf * wf).max(0.0);
    let root = (9.0 + 3.0 * disc.sqrt()) / (2.0 * wf * wf);
    let mut big_p = if wf >= 3.0 { 0 } else { (root.ceil() as i64 - 1).max(0) as u32 };
    let fits = |p: u32| -> bool {
        let s = tape_width_exact(p);
        if w.is_exact() {
            s <= *w
        } else {
            tape_width(p) <= wf
        }
    };
    while !fits(big_p + 1) {
        big_p += 1;
    }
    while big_p > 0 && fits(big_p) {
        big_p -= 1;
    }
    big_p
}

/// Multi-index of a tape point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct TapeIndex {
    pub i: u8,
    pub j: u32,
    pub z: i64,
}

#[derive(Clone, Debug)]
pub struct Tape {
    pub p: u32,
    strip: FlatStrip,
    phi: Scalar,
    h: Scalar,
    l: Rational,
}

impl Tape {
    pub fn strip(&self) -> &FlatStrip {
        &self.strip
    }

    /// `(2p − 1)/p`
    pub fn step(&self) -> &Rational {
        &self.l
    }

    pub fn level_height(&self) -> &Scalar {
        &self.h
    }

    /// Bring `j` into `1..=p`, using `x(i, j + p, z) = x(i, j, z + 2p − 1)`.
    pub fn normalize(&self, i: u8, j: i64, z: i64) -> TapeIndex {
        let p = self.p as i64;
        let (q, r) = ((j - 1).div_euclid(p), (j - 1).rem_euclid(p));
        TapeIndex { i, j: (r + 1) as u32, z: z + q * (2 * p - 1) }
    }

    /// Chart coordinates `(u, t)` of `x(i, j, z)`.
    pub fn coords(&self, ix: TapeIndex) -> (Scalar, Scalar) {
        let u = self.h.scale(&Rational::from_int(ix.i as i64));
        let k = &Rational::new(2 * (ix.j as i64 - 1) + ix.i as i64, 2) * &self.l;
        let t = &self.phi + &self.phi.lift(&k + &Rational::from_int(ix.z));
        (u, t)
    }

    pub fn point(&self, ix: TapeIndex) -> Point {
        let (u, t) = self.coords(ix);
        self.strip.point(&u, &t)
    }

    /// Parameter on the base geodesic of `x(0, j, z)`.
    pub fn base_param(&self, j: u32, z: i64) -> Scalar {
        self.coords(TapeIndex { i: 0, j, z }).1
    }

    /// The `2p` defining relations, each a 4-point segment of an r-sequence.
    pub fn relations(&self) -> Vec<[TapeIndex; 4]> {
        let p = self.p as i64;
        let mut out = Vec::with_capacity(2 * self.p as usize);
        for j in 1..=p {
            out.push([0u8, 1, 2, 3].map(|i| self.normalize(i, j, 0)));
        }
        for j in 1..=p {
            out.push([0u8, 1, 2, 3].map(|i| self.normalize(i, j + 1 - i as i64, 0)));
        }
        out
    }

    /// Certify every defining relation through the oracle.
    pub fn certify(&self, s: &mut OracleSession, w: &mut dyn WitnessSource) -> Verdict {
        let mut out = Verdict::True;
        for rel in self.relations() {
            let pts: Vec<Point> = rel.iter().map(|&ix| self.point(ix)).collect();
            out = out.and(s.certify_segment(&pts, w));
            if out == Verdict::False {
                break;
            }
        }
        out
    }

    /// Certify `x(i, j, a), …, x(i, j, b)` as a segment of an r-sequence.
    pub fn certify_run(&self, s: &mut OracleSession, i: u8, j: u32, a: i64, b: i64, w: &mut dyn WitnessSource) -> Verdict {
        let (lo, hi) = (a.min(b), a.max(b));
        if lo == hi {
            return Verdict::True;
        }
        let pts: Vec<Point> = (lo..=hi).map(|z| self.point(TapeIndex { i, j, z })).collect();
        s.certify_segment(&pts, w)
    }

    /// The base-level sequence `z ↦ x(0, j, z₀ + z)` as an r-sequence on the base carrier.
    pub fn base_sequence(&self, j: u32, z0: i64) -> RSequence {
        crate::sequences::make_rsequence(&self.strip.lower, self.base_param(j, z0)).expect("complete base")
    }

    /// Index of the base point at parameter offset `q` from `x(0, 1, 0)`:
    /// `q′ = ⌊q − 1/n⌋`, `m′ = n·{q − 1/n}`, `j = p + 1 − k(m′ + 1)`,
    /// `z′ = q′ + 1 − 2p + 2k(m′ + 1)` for `p = kn`.
    pub fn rational_index(&self, q: &Rational) -> Result<TapeIndex, TapeError> {
        let n = q.denom();
        let n64: u64 = n.try_into().map_err(|_| TapeError::NotMultiple { p: self.p, n: u64::MAX })?;
        if !(self.p as u64).is_multiple_of(n64) {
            return Err(TapeError::NotMultiple { p: self.p, n: n64 });
        }
        let n = n64 as i64;
        let k = self.p as i64 / n;
        let p = self.p as i64;
        let shifted = q - &Rational::new(1, n);
        let qp = shifted.floor_i64().expect("moderate rational");
        let frac = &shifted - &Rational::from_int(qp);
        let mp = (&frac * &Rational::from_int(n)).floor_i64().expect("integer numerator");
        let j = p + 1 - k * (mp + 1);
        let z = qp + 1 - 2 * p + 2 * k * (mp + 1);
        Ok(TapeIndex { i: 0, j: j as u32, z })
    }

    /// The tape point at base offset `q`, i.e. `c(φ + q)`.
    pub fn rational_point(&self, q: &Rational) -> Result<(Point, TapeIndex), TapeError> {
        let ix = self.rational_index(q)?;
        Ok((self.point(ix), ix))
    }

    /// Plot rows `i,j,z,u,t` for the `4p` sequences over `z ∈ [−m, m]`, in
    /// strip-chart coordinates.
    pub fn csv(&self, m: i64) -> String {
        let mut out = String::from("i,j,z,u,t\n");
        for r in self.rows(m) {
            out.push_str(&format!("{},{},{},{},{}\n", r.i, r.j, r.z, r.u, r.t));
        }
        out
    }

    /// Strip coordinates of every sequence point with `|z| ≤ m`.
    pub fn rows(&self, m: i64) -> Vec<TapeRow> {
        let mut out = Vec::with_capacity(4 * self.p as usize * (2 * m as usize + 1));
        for i in 0..4u8 {
            for j in 1..=self.p {
                for z in -m..=m {
                    let (u, t) = self.coords(TapeIndex { i, j, z });
                    out.push(TapeRow { i, j, z, u: u.to_f64(), t: t.to_f64() });
                }
            }
        }
        out
    }

    /// Index `(j, z)` of the base sequence through offset `b/p`, `0 ≤ b < p`.
    pub fn residue_index(&self, b: i64) -> TapeIndex {
        let p = self.p as i64;
        let j = 1 + (p - b.rem_euclid(p)) % p;
        // b/p − (j − 1)(2p − 1)/p is an integer
        let z = (b - (j - 1) * (2 * p - 1)) / p;
        TapeIndex { i: 0, j: j as u32, z }
    }
}

/// A tape point in strip coordinates: `u` across, `t` along the base.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TapeRow {
    pub i: u8,
    pub j: u32,
    pub z: i64,
    pub u: f64,
    pub t: f64,
}

/// Tape of order `p` on `base` (which must run along the strip's lower
/// boundary in its orientation).
pub fn build_tape(strip: &FlatStrip, base: &RSequence, p: u32) -> Result<Tape, TapeError> {
    if p == 0 {
        return Err(StripError::TooNarrow.into());
    }
    if let Some(w) = &strip.width {
        let s = tape_width_exact(p);
        let fits = if w.is_exact() { s <= *w } else { tape_width(p) <= w.to_f64() };
        if !fits {
            return Err(StripError::TooNarrow.into());
        }
    }
    let sp = &strip.space;
    let (u0, t0) = strip.chart.coords(sp, &base.at(0)).ok_or(StripError::NotParallel)?;
    let (u1, t1) = strip.chart.coords(sp, &base.at(1)).ok_or(StripError::NotParallel)?;
    let one = t0.lift(Rational::one());
    let on_base = if u0.is_exact() && u1.is_exact() {
        u0.is_zero() && u1.is_zero() && (&t1 - &t0) == one
    } else {
        u0.to_f64().abs() < 1e-9 && u1.to_f64().abs() < 1e-9 && ((&t1 - &t0).to_f64() - 1.0).abs() < 1e-9
    };
    if !on_base {
        return Err(StripError::NotParallel.into());
    }
    let h = if sp.is_exact() { level_height(p) } else { Scalar::Float(level_height(p).to_f64()) };
    Ok(Tape { p, strip: strip.clone(), phi: t0, h, l: Rational::new(2 * p as i64 - 1, p as i64) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert!((tape_width(1) - 2.598076).abs() < 1e-6);
        assert!((tape_width(2) - 1.984313).abs() < 1e-6);
        assert!((tape_width(100) - 0.299625).abs() < 1e-6);
        assert_eq!(tape_width_exact(1).to_f64(), tape_width(1));
    }

    #[test]
    fn min_orders() {
        assert_eq!(min_tape_order(Some(&Scalar::int(3))), 0);
        assert_eq!(min_tape_order(Some(&Scalar::int(1))), 8);
        let w = Scalar::rational(Rational::parse("2.598076").unwrap());
        assert_eq!(min_tape_order(Some(&w)), 1);
        assert_eq!(min_tape_order(Some(&tape_width_exact(1))), 0);
        assert_eq!(min_tape_order(None), 0);
    }
}
