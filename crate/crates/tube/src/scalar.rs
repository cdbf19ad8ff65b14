//! Coordinates that are either exact surds or plain floats.
//!
//! Mixing the two degrades to float. Exact values only appear when a space
//! runs in exact mode, so a float leaking into an exact computation shows up
//! as `is_exact() == false` rather than as a silent rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::exact::{Rational, Surd};

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Surd),
    Float(f64),
}

impl Scalar {
    pub fn zero_like(exact: bool) -> Scalar {
        if exact {
            Scalar::Exact(Surd::zero())
        } else {
            Scalar::Float(0.0)
        }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Exact(Surd::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Exact(Surd::from_rational(Rational::new(n, d)))
    }

    pub fn rational(r: Rational) -> Scalar {
        Scalar::Exact(Surd::from_rational(r))
    }

    pub fn float(x: f64) -> Scalar {
        Scalar::Float(x)
    }

    /// `n` in the same arithmetic as `self`.
    pub fn lift(&self, r: Rational) -> Scalar {
        match self {
            Scalar::Exact(_) => Scalar::rational(r),
            Scalar::Float(_) => Scalar::Float(r.to_f64()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Exact(s) => s.as_rational(),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(s) => s.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Exact(s) => s.signum(),
            Scalar::Float(x) => {
                if *x > 0.0 {
                    1
                } else if *x < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, k: &Rational) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(s.scale(k)),
            Scalar::Float(x) => Scalar::Float(x * k.to_f64()),
        }
    }

    /// Square root, exact when the argument is a factorable rational.
    pub fn sqrt(&self) -> Scalar {
        if let Scalar::Exact(s) = self {
            if let Some(r) = s.as_rational() {
                if let Some(root) = Surd::sqrt_rational(&r) {
                    return Scalar::Exact(root);
                }
            }
        }
        Scalar::Float(self.to_f64().max(0.0).sqrt())
    }

    pub fn floor(&self) -> num_bigint::BigInt {
        match self {
            Scalar::Exact(s) => s.floor(),
            Scalar::Float(x) => num_bigint::BigInt::from(x.floor() as i64),
        }
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op o.to_f64()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self) $op (&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self) $op o }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self $op (&o) }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Exact only when the divisor is rational.
    fn div(self, o: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Some(r)) = (self, o.as_rational()) {
            return Scalar::Exact(a.scale(&r.recip()));
        }
        Scalar::Float(self.to_f64() / o.to_f64())
    }
}
impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        &self / &o
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(-s),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp_surd(b)),
            _ => self.to_f64().partial_cmp(&o.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) => write!(f, "{}", s),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}
