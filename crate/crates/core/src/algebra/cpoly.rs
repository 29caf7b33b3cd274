use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::coeff::{rat_to_str, Coeff, Rat};

/// Laurent polynomial in the formal constant c = 1/(pi*i), with exact
/// rational coefficients. c is transcendental, so no relations are imposed;
/// negative powers are allowed. Units are exactly the nonzero monomials.
///
/// This ring carries every transcendental constant of the theory exactly:
/// alpha = 6c, pi*i/6 = 1/(6c), pi*i/3 = 1/(3c), and the D_q-image of z,
/// which is c/2. Values in practice are single monomials, so terms live in
/// a short vector sorted by power.
#[derive(Clone, PartialEq, Eq)]
pub struct CPoly {
    /// (power of c, coefficient), ascending powers, no zero coefficients.
    terms: Vec<(i32, Rat)>,
}

impl CPoly {
    pub fn new() -> Self {
        CPoly { terms: Vec::new() }
    }

    /// r * c^k
    pub fn monomial(r: Rat, k: i32) -> Self {
        if r.is_zero() {
            CPoly::new()
        } else {
            CPoly {
                terms: vec![(k, r)],
            }
        }
    }

    pub fn constant(r: Rat) -> Self {
        Self::monomial(r, 0)
    }

    /// c^1
    pub fn c() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn coeff(&self, k: i32) -> Rat {
        match self.terms.binary_search_by_key(&k, |(p, _)| *p) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i32, &Rat)> {
        self.terms.iter().map(|(p, r)| (p, r))
    }

    /// Some((k, r)) when the value is exactly r*c^k with r != 0.
    pub fn as_monomial(&self) -> Option<(i32, Rat)> {
        if self.terms.len() == 1 {
            Some((self.terms[0].0, self.terms[0].1.clone()))
        } else {
            None
        }
    }

    /// Some(r) when the value is the rational constant r (c-free).
    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        match self.as_monomial() {
            Some((0, r)) => Some(r),
            _ => None,
        }
    }

    /// Multiply by c^k.
    pub fn shift(&self, k: i32) -> Self {
        CPoly {
            terms: self.terms.iter().map(|(p, r)| (p + k, r.clone())).collect(),
        }
    }
}

impl Default for CPoly {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rat_to_str(r))?,
                1 => write!(f, "{}*c", rat_to_str(r))?,
                _ => write!(f, "{}*c^{}", rat_to_str(r), k)?,
            }
        }
        Ok(())
    }
}

impl Add for CPoly {
    type Output = CPoly;
    fn add(self, rhs: CPoly) -> CPoly {
        if self.terms.is_empty() {
            return rhs;
        }
        if rhs.terms.is_empty() {
            return self;
        }
        // merge two sorted term lists
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut a = self.terms.into_iter().peekable();
        let mut b = rhs.terms.into_iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((pa, _)), Some((pb, _))) => {
                    if pa < pb {
                        out.push(a.next().unwrap());
                    } else if pb < pa {
                        out.push(b.next().unwrap());
                    } else {
                        let (p, ra) = a.next().unwrap();
                        let (_, rb) = b.next().unwrap();
                        let s = ra + rb;
                        if !s.is_zero() {
                            out.push((p, s));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (None, None) => break,
            }
        }
        CPoly { terms: out }
    }
}

impl Sub for CPoly {
    type Output = CPoly;
    fn sub(self, rhs: CPoly) -> CPoly {
        self + (-rhs)
    }
}

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly {
            terms: self.terms.into_iter().map(|(k, r)| (k, -r)).collect(),
        }
    }
}

impl Mul for CPoly {
    type Output = CPoly;
    fn mul(self, rhs: CPoly) -> CPoly {
        // the common case is monomial * monomial
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (pa, ra) = &self.terms[0];
            let (pb, rb) = &rhs.terms[0];
            return CPoly::monomial(ra * rb, pa + pb);
        }
        let mut acc = CPoly::new();
        for (pa, ra) in &self.terms {
            let summand = CPoly {
                terms: rhs
                    .terms
                    .iter()
                    .map(|(pb, rb)| (pa + pb, ra * rb))
                    .collect(),
            };
            acc = acc + summand;
        }
        acc
    }
}

impl Zero for CPoly {
    fn zero() -> Self {
        CPoly::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for CPoly {
    fn one() -> Self {
        CPoly::constant(Rat::one())
    }
}

impl Coeff for CPoly {
    fn from_rat(r: &Rat) -> Self {
        CPoly::constant(r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        let (k, r) = self.as_monomial()?;
        Some(CPoly::monomial(r.recip(), -k))
    }

    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return CPoly::new();
        }
        CPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{rat, ratq};

    #[test]
    fn monomials_are_units() {
        let a = CPoly::monomial(ratq(3, 4), 2);
        let inv = a.try_inv().unwrap();
        assert_eq!(a * inv, CPoly::one());
    }

    #[test]
    fn sums_are_not_units() {
        let a = CPoly::constant(rat(1)) + CPoly::c();
        assert!(a.try_inv().is_none());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = CPoly::monomial(rat(5), 3);
        let b = CPoly::monomial(rat(-5), 3);
        assert!((a + b).is_zero());
    }

    #[test]
    fn mixed_products() {
        let a = CPoly::constant(rat(2)) + CPoly::monomial(rat(3), 1);
        let b = CPoly::monomial(rat(1), -1) + CPoly::constant(rat(1));
        let p = a * b;
        // (2 + 3c)(c^{-1} + 1) = 2c^{-1} + 5 + 3c
        assert_eq!(p.coeff(-1), rat(2));
        assert_eq!(p.coeff(0), rat(5));
        assert_eq!(p.coeff(1), rat(3));
    }
}
