//! Distances along a geodesic bounding a flat strip, recovered from tapes.
//!
//! Rational offsets with small denominators come from a single tape. Other
//! offsets are bracketed between multiples of `1/M`, `M = p₁⋯p_L` a product
//! of pairwise coprime tape orders: a tape of order `p₁` on the base
//! sequence reaches every offset `b/p₁`; its base-level sequences carry
//! tapes of order `p₂`, and so on, so by the Chinese remainder theorem
//! every multiple of `1/M` is a tape point after `L` levels. The bracket
//! `K/M < Δ < (K+1)/M` is certified by `Int V` against the points at
//! `K/M + 1` and `(K+1)/M − 1`.

use num_integer::Integer;
use thiserror::Error;

use crate::exact::Rational;
use crate::model_spaces::{Geodesic, Point};
use crate::oracle::{OracleSession, Verdict, WitnessSource};
use crate::scalar::Scalar;
use crate::sequences::{make_rsequence, rank_classify, RankOptions, RankVerdict};

use super::strip::{FlatStrip, StripError};
use super::tape::{build_tape, min_tape_order, Tape, TapeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlatError {
    #[error("base sequence is not certified as higher rank ({0})")]
    RankPrecondition(&'static str),
    #[error("oracle refused or failed to certify: {0}")]
    Certification(String),
    #[error("tolerance needs more than {0} tape levels")]
    Budget(usize),
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error(transparent)]
    Strip(#[from] StripError),
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FlatEstimate {
    pub value: f64,
    /// Exact value when the distance was certified exactly.
    pub exact: Option<String>,
    pub lower: String,
    pub upper: String,
    pub orders: Vec<u32>,
    pub tapes_certified: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct FlatOptions {
    pub tol: f64,
    /// Denominators up to this go through a single tape.
    pub small_denominator: u64,
    pub max_levels: usize,
    pub rank: RankOptions,
}

impl Default for FlatOptions {
    fn default() -> Self {
        FlatOptions { tol: 1e-6, small_denominator: 64, max_levels: 64, rank: RankOptions::default() }
    }
}

/// Reconstruction context for one geodesic: strip, rank certificate, and
/// the pairwise coprime ladder of tape orders.
pub struct FlatReconstruction {
    pub c: Geodesic,
    pub strip: FlatStrip,
    pub min_order: u32,
    pub opts: FlatOptions,
    pub ladder: Vec<u32>,
}

/// The midpoint of a bracket of width `1/M` is within `1/(2M)`, so
/// `M ≥ 1/(2·tol)` suffices.
fn ladder(min_order: u32, tol: f64, max_levels: usize) -> Result<Vec<u32>, FlatError> {
    let need = 0.5 / tol;
    let mut out: Vec<u32> = Vec::new();
    let mut m = 1.0f64;
    let mut p = (min_order + 1).max(2);
    while m < need {
        if out.iter().all(|&q| p.gcd(&q) == 1) {
            out.push(p);
            m *= p as f64;
            if out.len() > max_levels {
                return Err(FlatError::Budget(max_levels));
            }
        }
        p += 1;
    }
    Ok(out)
}

/// Pairwise coprime orders whose product is a multiple of `n`: each prime
/// power of `n`, raised until it exceeds `min_order`.
fn denominator_ladder(n: u64, min_order: u32, max_levels: usize) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    let mut rest = n;
    let mut q = 2u64;
    while rest > 1 {
        if q * q > rest {
            q = rest;
        }
        if rest.is_multiple_of(q) {
            let mut pp = 1u64;
            while rest.is_multiple_of(q) {
                rest /= q;
                pp *= q;
            }
            while pp <= min_order as u64 {
                pp *= q;
            }
            out.push(u32::try_from(pp).ok()?);
        }
        q += 1;
    }
    let m: u128 = out.iter().map(|&p| p as u128).product();
    let total: u64 = out.iter().map(|&p| p as u64).sum();
    (out.len() <= max_levels && m < 1 << 60 && total <= 4096).then_some(out)
}

/// Tapes already certified in one reconstruction, keyed by base phase and
/// order; the two bracket walks share their first level.
#[derive(Default)]
struct TapeCache(std::collections::HashSet<(String, u32)>);

impl TapeCache {
    fn certify(
        &mut self,
        ctx: &FlatReconstruction,
        s: &mut OracleSession,
        tape: &Tape,
        w: &mut dyn WitnessSource,
    ) -> Result<(), FlatError> {
        let key = (tape.base_param(1, 0).to_string(), tape.p);
        if self.0.contains(&key) {
            return Ok(());
        }
        let v = tape.certify(s, w);
        ctx.certify(s, v, "tape relations")?;
        self.0.insert(key);
        Ok(())
    }

    fn count(&self) -> usize {
        self.0.len()
    }
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

impl FlatReconstruction {
    /// Checks the rank precondition on `c` through the oracle.
    pub fn new(
        session: &mut OracleSession,
        c: &Geodesic,
        opts: FlatOptions,
        w: &mut dyn WitnessSource,
    ) -> Result<Self, FlatError> {
        let space = session.space().clone();
        let strip = FlatStrip::maximal(&space, c)?;
        let base = make_rsequence(c, space.zero()).map_err(|_| FlatError::RankPrecondition("incomplete"))?;
        match rank_classify(session, &base, opts.rank, w) {
            RankVerdict::HigherRank(_) => {}
            other => return Err(FlatError::RankPrecondition(other.label())),
        }
        let min_order = min_tape_order(strip.width.as_ref());
        let ladder = ladder(min_order, opts.tol, opts.max_levels)?;
        Ok(FlatReconstruction { c: c.complete(), strip, min_order, opts, ladder })
    }

    fn certify(&self, s: &mut OracleSession, v: Verdict, what: &str) -> Result<(), FlatError> {
        let _ = s;
        if v == Verdict::True {
            Ok(())
        } else {
            Err(FlatError::Certification(format!("{} ({:?})", what, v)))
        }
    }

    /// Tape point at `c(t₁ + r)` for rational `r` with denominator dividing
    /// the ladder product, walking down the ladder. Certifies every tape used
    /// and every run of a base sequence that links consecutive levels.
    fn ladder_point(
        &self,
        s: &mut OracleSession,
        ladder: &[u32],
        t1: &Scalar,
        a: i128,
        w: &mut dyn WitnessSource,
        tapes: &mut TapeCache,
    ) -> Result<Point, FlatError> {
        let m: i128 = ladder.iter().map(|&p| p as i128).product();
        let mut base = make_rsequence(&self.c, t1.clone()).expect("complete");
        let mut rest = a;
        let levels = ladder.len();
        let mut final_pt = None;
        let mut carried = 0i64;
        for (lvl, &p) in ladder.iter().enumerate() {
            let pi = p as i128;
            let mp = m / pi;
            let b = (a.rem_euclid(m) * inverse_mod(mp % pi, pi)).rem_euclid(pi) as i64;
            rest -= b as i128 * mp;
            let tape = build_tape(&self.strip, &base, p)?;
            tapes.certify(self, s, &tape, w)?;
            let ix = tape.residue_index(b);
            // next tape needs base indices 0..=2p'−1; the last level needs the target
            let span = if lvl + 1 < levels {
                2 * ladder[lvl + 1] as i64 - 1
            } else {
                debug_assert_eq!(rest.rem_euclid(m), 0);
                carried = (rest / m) as i64;
                carried
            };
            let (lo, hi) = (0.min(ix.z).min(ix.z + span.min(0)), 0.max(ix.z + span.max(0)));
            let v = tape.certify_run(s, 0, ix.j, lo, hi, w);
            self.certify(s, v, "base sequence run")?;
            base = tape.base_sequence(ix.j, ix.z);
            if lvl + 1 == levels {
                final_pt = Some(base.at(carried));
            }
        }
        Ok(final_pt.expect("nonempty ladder"))
    }

    /// `Int V(y, x)` as a certified boolean; refusals are errors.
    fn int_v(&self, s: &mut OracleSession, y: &Point, x: &Point, w: &mut dyn WitnessSource) -> Verdict {
        s.interior(y, x, 1, w)
    }

    /// Exact value through a single tape of order `kn > P`.
    fn small_rational(
        &self,
        s: &mut OracleSession,
        t1: &Scalar,
        q: &Rational,
        y: &Point,
        w: &mut dyn WitnessSource,
    ) -> Result<(Tape, bool), FlatError> {
        let n: u64 = q.denom().try_into().unwrap_or(u64::MAX);
        let k = (self.min_order as u64 / n) + 1;
        let p = (k * n) as u32;
        let base = make_rsequence(&self.c, t1.clone()).expect("complete");
        let tape = build_tape(&self.strip, &base, p)?;
        let v = tape.certify(s, w);
        self.certify(s, v, "tape relations")?;
        let mut ok = true;
        for off in [1i64, -1] {
            let target = q + &Rational::from_int(off);
            let (pt, ix) = tape.rational_point(&target)?;
            let v = tape.certify_run(s, 0, ix.j, 0, ix.z, w);
            self.certify(s, v, "base sequence run")?;
            ok &= s.boundary(y, &pt, 1, w) == Verdict::True;
        }
        Ok((tape, ok))
    }

    /// `d(c(t₁), c(t₂))` from oracle certificates.
    pub fn distance(
        &self,
        s: &mut OracleSession,
        t1: &Scalar,
        t2: &Scalar,
        w: &mut dyn WitnessSource,
    ) -> Result<FlatEstimate, FlatError> {
        let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let delta = t2 - t1;
        if delta.is_zero() {
            return Ok(FlatEstimate {
                value: 0.0,
                exact: Some("0".into()),
                lower: "0".into(),
                upper: "0".into(),
                orders: Vec::new(),
                tapes_certified: 0,
            });
        }
        let y = self.c.eval_unchecked(t2);
        if let Some(q) = delta.as_rational() {
            let n: u64 = q.denom().try_into().unwrap_or(u64::MAX);
            if n <= self.opts.small_denominator {
                let (tape, ok) = self.small_rational(s, t1, &q, &y, w)?;
                if ok {
                    return Ok(exact_estimate(&q, vec![tape.p], 1));
                }
            }
            if let Some(lad) = denominator_ladder(n, self.min_order, self.opts.max_levels) {
                let m: i128 = lad.iter().map(|&p| p as i128).product();
                let k = i128::try_from(&q.numer() * (m / n as i128)).map_err(|_| FlatError::Budget(self.opts.max_levels))?;
                let mut tapes = TapeCache::default();
                if self.exact_multiple(s, &lad, t1, k, &y, w, &mut tapes)? {
                    return Ok(exact_estimate(&q, lad, tapes.count()));
                }
            }
        }
        let m: i128 = self.ladder.iter().map(|&p| p as i128).product();
        let k: i128 = match &delta {
            Scalar::Exact(_) => {
                let f = delta.scale(&Rational::from_bigints(m.into(), 1.into())).floor();
                i128::try_from(f).map_err(|_| FlatError::Budget(self.opts.max_levels))?
            }
            Scalar::Float(d) => (d * m as f64).floor() as i128,
        };
        let mut tapes = TapeCache::default();
        let upper_pt = self.ladder_point(s, &self.ladder, t1, k + m, w, &mut tapes)?;
        let lower_pt = self.ladder_point(s, &self.ladder, t1, k + 1 - m, w, &mut tapes)?;
        let lo = Rational::from_bigints(k.into(), m.into());
        let hi = Rational::from_bigints((k + 1).into(), m.into());
        let above = self.int_v(s, &y, &upper_pt, w);
        let below = self.int_v(s, &y, &lower_pt, w);
        match (above, below) {
            (Verdict::True, Verdict::True) => {
                let mid = &(&lo + &hi) / &Rational::from_int(2);
                Ok(FlatEstimate {
                    value: mid.to_f64(),
                    exact: None,
                    lower: lo.to_string(),
                    upper: hi.to_string(),
                    orders: self.ladder.clone(),
                    tapes_certified: tapes.count(),
                })
            }
            // float input landing on a multiple of 1/M
            (Verdict::False, Verdict::True) if self.exact_multiple(s, &self.ladder, t1, k, &y, w, &mut tapes)? => {
                Ok(exact_estimate(&lo, self.ladder.clone(), tapes.count()))
            }
            (a, b) => Err(FlatError::Certification(format!("bracket ({:?}, {:?})", a, b))),
        }
    }

    /// `Δ = K/M`: the ladder points at `K/M ± 1` are both in `∂V(y, ·)`.
    #[allow(clippy::too_many_arguments)]
    fn exact_multiple(
        &self,
        s: &mut OracleSession,
        ladder: &[u32],
        t1: &Scalar,
        k: i128,
        y: &Point,
        w: &mut dyn WitnessSource,
        tapes: &mut TapeCache,
    ) -> Result<bool, FlatError> {
        let m: i128 = ladder.iter().map(|&p| p as i128).product();
        for a in [k + m, k - m] {
            let pt = self.ladder_point(s, ladder, t1, a, w, tapes)?;
            if s.boundary(y, &pt, 1, w) != Verdict::True {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn exact_estimate(q: &Rational, orders: Vec<u32>, tapes: usize) -> FlatEstimate {
    FlatEstimate {
        value: q.to_f64(),
        exact: Some(q.to_string()),
        lower: q.to_string(),
        upper: q.to_string(),
        orders,
        tapes_certified: tapes,
    }
}

/// One-shot wrapper: checks the rank precondition and reconstructs.
pub fn reconstruct_flat(
    session: &mut OracleSession,
    c: &Geodesic,
    t1: &Scalar,
    t2: &Scalar,
    tol: f64,
    w: &mut dyn WitnessSource,
) -> Result<FlatEstimate, FlatError> {
    let ctx = FlatReconstruction::new(session, c, FlatOptions { tol, ..FlatOptions::default() }, w)?;
    ctx.distance(session, t1, t2, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        assert_eq!(ladder(0, 1e-6, 64).unwrap(), vec![2, 3, 5, 7, 11, 13, 17]);
        assert_eq!(ladder(8, 1e-3, 64).unwrap(), vec![9, 10, 11]);
        assert_eq!(denominator_ladder(300, 0, 64).unwrap(), vec![4, 3, 25]);
        assert_eq!(denominator_ladder(300, 8, 64).unwrap(), vec![16, 9, 25]);
        assert_eq!(inverse_mod(3, 7), 5);
    }
}
