//! Exact arithmetic: rationals and finite sums of square roots.
//!
//! `Rational` keeps an `i128` fast path and falls back to big integers on
//! overflow. `Surd` is a sum `Σ c_k √s_k` with rational `c_k` and distinct
//! squarefree `s_k`, closed under ring operations and division by rationals.
//! Its sign is decided exactly by eliminating one prime at a time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

type Small = Ratio<i128>;

#[derive(Clone, Debug)]
enum Repr {
    Small(Small),
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn big_of(r: &Small) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn shrink(b: BigRational) -> Rational {
    match (b.numer().to_i128(), b.denom().to_i128()) {
        (Some(n), Some(d)) if n.unsigned_abs() < (1u128 << 120) && d < (1i128 << 120) => {
            Rational(Repr::Small(Small::new_raw(n, d)))
        }
        _ => Rational(Repr::Big(b)),
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(Small::zero()))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Small::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(Small::from_integer(n as i128)))
    }

    /// `n / d`; panics on a zero denominator.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational(Repr::Small(Small::new(n as i128, d as i128)))
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        shrink(BigRational::new(n, d))
    }

    /// The exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(shrink)
    }

    /// Parses `p`, `p/q` or a plain decimal such as `-1.25`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(Self::from_bigints(n, d));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let neg = ip.starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
            let mut n: BigInt = digits.parse().ok()?;
            if neg {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), fp.len());
            return Some(Self::from_bigints(n, d));
        }
        let n: BigInt = s.parse().ok()?;
        Some(Self::from_bigints(n, BigInt::one()))
    }

    fn big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => big_of(r),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(b) => {
                if b.is_zero() {
                    0
                } else if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => Rational(Repr::Small(r.recip())),
            Repr::Big(b) => shrink(b.recip()),
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(r.floor().to_integer()),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    pub fn floor_i64(&self) -> Option<i64> {
        self.floor().to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                if n.unsigned_abs() < (1u128 << 53) && d < (1i128 << 53) {
                    n as f64 / d as f64
                } else {
                    big_of(r).to_f64().unwrap_or(f64::NAN)
                }
            }
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Rational::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

/// Both parts in `i64`, so products fit in `i128` without overflow checks.
fn narrow(x: &Small) -> Option<(i64, i64)> {
    Some((i64::try_from(*x.numer()).ok()?, i64::try_from(*x.denom()).ok()?))
}

fn gcd64(a: i64, b: i64) -> i64 {
    (a.unsigned_abs().gcd(&b.unsigned_abs())) as i64
}

// Cross-reduced product and sum (Knuth 4.5.1): the results are already in
// lowest terms, so no i128 gcd is needed.
fn mul_narrow(a: (i64, i64), b: (i64, i64)) -> Small {
    if a.0 == 0 || b.0 == 0 {
        return Small::zero();
    }
    let (g1, g2) = (gcd64(a.0, b.1), gcd64(b.0, a.1));
    let n = (a.0 / g1) as i128 * (b.0 / g2) as i128;
    let d = (a.1 / g2) as i128 * (b.1 / g1) as i128;
    Small::new_raw(n, d)
}

fn add_narrow(a: (i64, i64), b: (i64, i64), negate_b: bool) -> Small {
    let bn = if negate_b { -(b.0 as i128) } else { b.0 as i128 };
    let g = gcd64(a.1, b.1);
    if g == 1 {
        let n = a.0 as i128 * b.1 as i128 + bn * a.1 as i128;
        return if n == 0 { Small::zero() } else { Small::new_raw(n, a.1 as i128 * b.1 as i128) };
    }
    let t = a.0 as i128 * (b.1 / g) as i128 + bn * (a.1 / g) as i128;
    if t == 0 {
        return Small::zero();
    }
    let g2 = gcd64(t.rem_euclid(g as i128) as i64, g);
    Small::new_raw(t / g2 as i128, (a.1 / g) as i128 * (b.1 / g2) as i128)
}

macro_rules! small_or_big {
    ($a:expr, $b:expr, $checked:ident, $op:tt) => {
        match (&$a.0, &$b.0) {
            (Repr::Small(x), Repr::Small(y)) => match x.$checked(y) {
                Some(r) => Rational(Repr::Small(r)),
                None => shrink(big_of(x) $op big_of(y)),
            },
            _ => shrink($a.big() $op $b.big()),
        }
    };
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, o: &Rational) -> Rational {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &o.0) {
            if let (Some(a), Some(b)) = (narrow(x), narrow(y)) {
                return Rational(Repr::Small(add_narrow(a, b, false)));
            }
        }
        small_or_big!(self, o, checked_add, +)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, o: &Rational) -> Rational {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &o.0) {
            if let (Some(a), Some(b)) = (narrow(x), narrow(y)) {
                return Rational(Repr::Small(add_narrow(a, b, true)));
            }
        }
        small_or_big!(self, o, checked_sub, -)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, o: &Rational) -> Rational {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &o.0) {
            if let (Some(a), Some(b)) = (narrow(x), narrow(y)) {
                return Rational(Repr::Small(mul_narrow(a, b)));
            }
        }
        small_or_big!(self, o, checked_mul, *)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, o: &Rational) -> Rational {
        assert!(!o.is_zero(), "division by zero");
        small_or_big!(self, o, checked_div, /)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(r) => Rational(Repr::Small(-r)),
            Repr::Big(b) => Rational(Repr::Big(-b)),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t { (&self).$m(o) }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { self.$m(&o) }
        }
    )*};
}
forward_owned!(Rational, Add add, Sub sub, Mul mul, Div div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialEq for Rational {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rational {
    fn cmp(&self, o: &Self) -> Ordering {
        match (&self.0, &o.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&o.big()),
        }
    }
}

impl std::hash::Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.numer().hash(h);
        self.denom().hash(h);
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => write!(f, "{}", r),
            Repr::Big(b) => write!(f, "{}", b),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

// ---------------------------------------------------------------------------

/// Smallest prime factor by trial division.
fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Splits `n = a² · b` with `b` squarefree. Gives up (None) on inputs whose
/// cube root exceeds the trial-division bound.
fn square_split(n: u64) -> Option<(u64, u64)> {
    if n == 0 {
        return Some((0, 1));
    }
    let mut m = n;
    let mut sq = 1u64;
    let mut free = 1u64;
    let mut d = 2u64;
    while d.saturating_mul(d).saturating_mul(d) <= m {
        if d > 3_000_000 {
            return None;
        }
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            for _ in 0..e / 2 {
                sq = sq.checked_mul(d)?;
            }
            if e % 2 == 1 {
                free = free.checked_mul(d)?;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // What is left has at most two prime factors.
    let r = (m as f64).sqrt().round() as u64;
    let r = (r.saturating_sub(2)..=r + 2).find(|k| u64::checked_mul(*k, *k) == Some(m));
    match r {
        Some(k) if m > 1 => sq = sq.checked_mul(k)?,
        _ => free = free.checked_mul(m)?,
    }
    Some((sq, free))
}

/// `Σ c_k √s_k` with rational coefficients and squarefree radicands.
#[derive(Clone, Debug, Default)]
pub struct Surd {
    // Sorted by radicand, no zero coefficients; radicand 1 is the rational part.
    terms: SmallVec<[(u64, Rational); 2]>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = SmallVec::new();
        if !r.is_zero() {
            terms.push((1, r));
        }
        Surd { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Surd::from_rational(Rational::from_int(n))
    }

    /// `c · √s` for a nonnegative integer `s`.
    pub fn root_term(c: Rational, s: u64) -> Option<Self> {
        let (a, b) = square_split(s)?;
        let c = &c * &Rational::from_int(i64::try_from(a).ok()?);
        let mut terms = SmallVec::new();
        if !c.is_zero() && s != 0 {
            terms.push((b, c));
        }
        Some(Surd { terms })
    }

    /// Exact square root of a nonnegative rational, when the radicand is
    /// small enough to factor.
    pub fn sqrt_rational(r: &Rational) -> Option<Self> {
        if r.signum() < 0 {
            return None;
        }
        if r.is_zero() {
            return Some(Surd::zero());
        }
        // √(n/d) = √(n d) / d
        let n = r.numer().to_u64()?;
        let d = r.denom().to_u64()?;
        let nd = n.checked_mul(d)?;
        Surd::root_term(Rational::from_bigints(BigInt::one(), BigInt::from(d)), nd)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(u64, Rational)] {
        &self.terms
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, c)| c.to_f64() * (*s as f64).sqrt())
            .sum()
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        if k.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(s, c)| (*s, c * k)).collect(),
        }
    }

    fn merge(a: &Surd, b: &Surd, negate_b: bool) -> Surd {
        let mut out: SmallVec<[(u64, Rational); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&a.terms, &b.terms);
        let nb = |c: &Rational| if negate_b { -c } else { c.clone() };
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i].clone());
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, nb(&y[j].1)));
                j += 1;
            } else {
                let c = if negate_b { &x[i].1 - &y[j].1 } else { &x[i].1 + &y[j].1 };
                if !c.is_zero() {
                    out.push((x[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Surd { terms: out }
    }

    fn product(a: &Surd, b: &Surd) -> Surd {
        let mut acc: SmallVec<[(u64, Rational); 2]> = SmallVec::new();
        for (s, c) in &a.terms {
            for (t, e) in &b.terms {
                let g = s.gcd(t);
                let rad = (s / g).checked_mul(t / g).expect("radicand overflow");
                let coef = &(c * e) * &Rational::from_int(g as i64);
                acc.push((rad, coef));
            }
        }
        acc.sort_by_key(|t| t.0);
        let mut out: SmallVec<[(u64, Rational); 2]> = SmallVec::new();
        for (r, c) in acc {
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 = &last.1 + &c,
                _ => out.push((r, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Surd { terms: out }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.terms.as_slice() {
            [] => 0,
            [(_, c)] => c.signum(),
            _ => {
                // Quick float decision when clearly separated from zero.
                let approx = self.to_f64();
                let mag: f64 = self
                    .terms
                    .iter()
                    .map(|(s, c)| c.to_f64().abs() * (*s as f64).sqrt())
                    .sum();
                if approx.abs() > 1e-9 * mag {
                    return if approx > 0.0 { 1 } else { -1 };
                }
                self.exact_signum()
            }
        }
    }

    fn exact_signum(&self) -> i32 {
        let big = match self.terms.iter().map(|t| t.0).filter(|s| *s > 1).max() {
            None => return self.as_rational().map_or(0, |r| r.signum()),
            Some(s) => s,
        };
        let p = smallest_prime_factor(big);
        let mut u = Surd::zero();
        let mut v = Surd::zero();
        for (s, c) in &self.terms {
            if s % p == 0 {
                v.terms.push((s / p, c.clone()));
            } else {
                u.terms.push((*s, c.clone()));
            }
        }
        v.terms.sort_by_key(|t| t.0);
        // self = u + v √p, with p absent from every radicand of u and v.
        let su = u.signum();
        let sv = v.signum();
        if su == 0 {
            return sv;
        }
        if sv == 0 || su == sv {
            return su;
        }
        let pr = Rational::from_int(p as i64);
        let d = &(&u * &u) - &(&v * &v).scale(&pr);
        su * d.signum()
    }

    pub fn cmp_surd(&self, o: &Surd) -> Ordering {
        match (self - o).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor();
        }
        let guess = self.to_f64().floor();
        let mut k = BigInt::from(guess as i64);
        loop {
            let kk = Surd::from_rational(Rational::from_bigints(k.clone(), BigInt::one()));
            if self.cmp_surd(&kk) == Ordering::Less {
                k -= 1;
                continue;
            }
            let k1 = Surd::from_rational(Rational::from_bigints(&k + 1, BigInt::one()));
            if self.cmp_surd(&k1) != Ordering::Less {
                k += 1;
                continue;
            }
            return k;
        }
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd::merge(self, o, false)
    }
}
impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd::merge(self, o, true)
    }
}
impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        Surd::product(self, o)
    }
}
impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&Rational::from_int(-1))
    }
}
forward_owned!(Surd, Add add, Sub sub, Mul mul);

impl PartialEq for Surd {
    fn eq(&self, o: &Self) -> bool {
        // Canonical form makes structural equality exact.
        self.terms.len() == o.terms.len()
            && self
                .terms
                .iter()
                .zip(o.terms.iter())
                .all(|(a, b)| a.0 == b.0 && a.1 == b.1)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *s == 1 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})√{}", c, s)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_overflow_falls_back() {
        let big = q(i64::MAX, 3);
        let p = &(&big * &big) * &big;
        let back = &(&p / &big) / &big;
        assert_eq!(back, big);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Rational::parse("3/4").unwrap(), q(3, 4));
        assert_eq!(Rational::parse("-1.25").unwrap(), q(-5, 4));
        assert_eq!(Rational::parse("7").unwrap(), q(7, 1));
        assert!(Rational::parse("1/0").is_none());
        assert!(Rational::parse("x").is_none());
    }

    #[test]
    fn square_split_cases() {
        assert_eq!(square_split(12), Some((2, 3)));
        assert_eq!(square_split(49), Some((7, 1)));
        assert_eq!(square_split(35), Some((1, 35)));
        assert_eq!(square_split(1_000_003 * 1_000_003), Some((1_000_003, 1)));
    }

    #[test]
    fn sqrt_products() {
        let r2 = Surd::sqrt_rational(&q(2, 1)).unwrap();
        let r3 = Surd::sqrt_rational(&q(3, 1)).unwrap();
        assert_eq!(&r2 * &r2, Surd::from_int(2));
        let r6 = &r2 * &r3;
        assert_eq!(&r6 * &r6, Surd::from_int(6));
        let h = Surd::sqrt_rational(&q(35, 36)).unwrap();
        assert_eq!(&h * &h, Surd::from_rational(q(35, 36)));
    }

    #[test]
    fn exact_sign_near_cancellation() {
        // 1 + √2 + √3 - √(... ) style: (√2 + √3)² = 5 + 2√6
        let r2 = Surd::sqrt_rational(&q(2, 1)).unwrap();
        let r3 = Surd::sqrt_rational(&q(3, 1)).unwrap();
        let r6 = Surd::sqrt_rational(&q(6, 1)).unwrap();
        let s = &r2 + &r3;
        let sq = &s * &s;
        let target = &Surd::from_int(5) + &r6.scale(&q(2, 1));
        assert_eq!((&sq - &target).signum(), 0);
        // 99/70 is a convergent of √2 from above
        assert_eq!((&r2 - &Surd::from_rational(q(99, 70))).signum(), -1);
        assert_eq!((&r2 - &Surd::from_rational(q(140, 99))).signum(), 1);
        // √2 + √3 vs √10 − tiny: 3.146 vs 3.162
        let r10 = Surd::sqrt_rational(&q(10, 1)).unwrap();
        assert_eq!((&s - &r10).signum(), -1);
    }

    #[test]
    fn sign_matches_float_on_random_mixes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut s = Surd::zero();
            for rad in [1u64, 2, 3, 5, 6] {
                let c = q(rng.gen_range(-50..50), rng.gen_range(1..20));
                s = &s + &Surd::root_term(c, rad).unwrap();
            }
            let f = s.to_f64();
            if f.abs() > 1e-9 {
                assert_eq!(s.signum(), if f > 0.0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn floor_of_surd() {
        let r2 = Surd::sqrt_rational(&q(2, 1)).unwrap();
        assert_eq!(r2.floor(), BigInt::from(1));
        assert_eq!((-&r2).floor(), BigInt::from(-2));
        assert_eq!(r2.scale(&q(1_000_000, 1)).floor(), BigInt::from(1_414_213));
    }
}
