use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact rational scalar. Canonical form (reduced, positive denominator) is
/// maintained by `num`.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction p/q.
pub fn ratq(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse "p/q" or "p". Returns None on malformed input or zero denominator.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Canonical "p/q" rendering ("p" when the denominator is 1).
pub fn rat_to_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact i64 extraction for rationals known to be small integers.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !r.denom().is_one() {
        return None;
    }
    i64::try_from(r.numer().clone()).ok()
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for out-of-range bigints.
        let n = r.numer();
        let d = r.denom();
        let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as u64;
        let n = n >> shift;
        let d = d >> shift;
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}

/// Coefficient ring for series and polynomial arithmetic. Everything is
/// immutable and by-value; implementors are plain data.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Embedding of Q.
    fn from_rat(r: &Rat) -> Self;

    /// Multiplicative inverse when the element is a unit of the ring.
    fn try_inv(&self) -> Option<Self>;

    /// Scalar action of Q.
    fn scale(&self, r: &Rat) -> Self {
        self.clone() * Self::from_rat(r)
    }
}

impl Coeff for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
}

/// gcd of two big integers (nonnegative result).
pub fn bigint_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    num::Integer::gcd(a, b).abs()
}
