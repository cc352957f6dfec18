use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// An exact element `a + b√2` of the field ℚ(√2).
///
/// Both coefficients are arbitrary-precision rationals kept in lowest terms
/// with a positive denominator, so derived equality and hashing are
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadRat {
    a: BigRational,
    b: BigRational,
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        // `Ratio` normalizes on construction; nothing else to enforce.
        QuadRat { a, b }
    }

    pub fn from_integers(a: i64, b: i64) -> Self {
        QuadRat::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn from_fractions(a: (i64, i64), b: (i64, i64)) -> Self {
        QuadRat::new(BigRational::new(a.0.into(), a.1.into()), BigRational::new(b.0.into(), b.1.into()))
    }

    pub fn integer(n: i64) -> Self {
        QuadRat::from_integers(n, 0)
    }

    pub fn sqrt2() -> Self {
        QuadRat::from_integers(0, 1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a − b√2`.
    pub fn conjugate(&self) -> Self {
        QuadRat::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`, which is zero only for zero.
    pub fn norm(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        &self.a * &self.a - two * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(QuadRat::new(c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, rhs: &QuadRat) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    /// Exact sign of `a + b√2`.
    ///
    /// When `a` and `b` disagree in sign the result is decided by comparing
    /// `a²` with `2b²`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                let two = BigRational::from_integer(BigInt::from(2));
                let a2 = &self.a * &self.a;
                let b2 = two * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    // a² = 2b² has no nonzero rational solution
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        b.mul_add(std::f64::consts::SQRT_2, a)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for QuadRat {
    /// Writes `a/b+c/d√2` (or `a/b-c/d√2` when the √2 coefficient is negative).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}√2", fmt_ratio(&self.a), sep, fmt_ratio(&self.b.abs()))
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::Parse(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl FromStr for QuadRat {
    type Err = AlgebraError;

    /// Accepts `a/b+c/d√2`, `a/b-c/d√2`, `sqrt2` in place of `√2`, bare
    /// rationals (`3/4`, `-2`), and bare multiples of the root (`√2`, `-1/2sqrt2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_suffix("√2").or_else(|| t.strip_suffix("sqrt2"));
        let Some(body) = body else {
            return Ok(QuadRat::new(parse_ratio(&t)?, BigRational::zero()));
        };
        let body = body.strip_suffix('*').unwrap_or(body);

        // Split point: a sign that is not leading and does not follow another sign or '/'.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'/'));
        let (rational, coeff) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let coeff = coeff.strip_prefix('+').unwrap_or(coeff);
        let b = match coeff {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            c if c.starts_with(['+', '-']) && c[1..].starts_with(['+', '-']) => return Err(bad()),
            c => parse_ratio(c)?,
        };
        Ok(QuadRat::new(parse_ratio(rational)?, b))
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        let two = BigRational::from_integer(BigInt::from(2));
        QuadRat::new(&self.a * &rhs.a + two * &self.b * &rhs.b, &self.a * &rhs.b + &self.b * &rhs.a)
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat::new(-self.a, -self.b)
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadRat {
            type Output = QuadRat;
            fn $m(self, rhs: QuadRat) -> QuadRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn qr_add(x: &QuadRat, y: &QuadRat) -> QuadRat {
    x + y
}

pub fn qr_mul(x: &QuadRat, y: &QuadRat) -> QuadRat {
    x * y
}

pub fn qr_inv(x: &QuadRat) -> Result<QuadRat, AlgebraError> {
    x.inv()
}

pub fn to_float(x: &QuadRat) -> f64 {
    x.to_f64()
}
