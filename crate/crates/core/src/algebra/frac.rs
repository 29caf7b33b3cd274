use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::coeff::{Coeff, Rat};
use super::mpoly::{MPoly, VarSet};

/// Fraction of sparse multivariate polynomials. The denominator is nonzero;
/// normalization divides out the rational content and the common monomial
/// factor of numerator and denominator (full polynomial gcd is out of scope).
/// Equality is decided by cross-multiplication, so the partial normalization
/// is only a size control, never a correctness requirement.
#[derive(Clone)]
pub struct Frac {
    num: MPoly,
    den: MPoly,
}

impl Frac {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = Frac { num, den };
        f.normalize();
        f
    }

    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::constant_in(p.vars(), Rat::one());
        Frac { num: p, den: one }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn as_rat(&self) -> Option<Rat> {
        let n = self.num.as_rat()?;
        let d = self.den.as_rat()?;
        Some(n / d)
    }

    /// Some(p) when the denominator is a nonzero rational, with it divided out.
    pub fn as_poly(&self) -> Option<MPoly> {
        let d = self.den.as_rat()?;
        Some(self.num.scale_rat(&d.recip()))
    }

    pub fn eval(&self, values: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(values) / d)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::constant_in(self.den.vars(), Rat::one());
            return;
        }
        // Monomial content.
        let mn = self.num.monomial_content();
        let md = self.den.monomial_content();
        if self.num.vars() == self.den.vars() {
            let common: Vec<u16> = mn.iter().zip(md.iter()).map(|(&a, &b)| a.min(b)).collect();
            if common.iter().any(|&e| e > 0) {
                self.num = self.num.div_monomial(&common);
                self.den = self.den.div_monomial(&common);
            }
        }
        // When the denominator is univariate, cancel its gcd with the
        // numerator's univariate content. This keeps the rational-function
        // arithmetic of the Frobenius recursions polynomial-sized; full
        // multivariate gcd stays out of scope.
        if self.num.vars() == self.den.vars() {
            if let Ok(Some(v)) = self.den.single_variable() {
                if let Some(dp) = self.den.as_univariate(v) {
                    let np = self.num.univariate_content_gcd(v);
                    let g = super::mpoly::poly_gcd(&dp, &np);
                    if g.len() > 1 {
                        if let (Some(n2), Some(d2)) = (
                            self.num.div_exact_univariate(v, &g),
                            self.den.div_exact_univariate(v, &g),
                        ) {
                            self.num = n2;
                            self.den = d2;
                        }
                    }
                }
            }
        }
        // Rational content of the denominator, sign-normalized.
        let c = self.den.content();
        if !c.is_one() {
            let inv = c.recip();
            self.num = self.num.scale_rat(&inv);
            self.den = self.den.scale_rat(&inv);
        }
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_rat().map(|r| r.is_one()).unwrap_or(false) {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        Frac::new(
            self.num.clone() * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        self + (-rhs)
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        Frac::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Zero for Frac {
    fn zero() -> Self {
        Frac::from_poly(MPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Frac {
    fn one() -> Self {
        Frac::from_poly(MPoly::one())
    }
}

impl Coeff for Frac {
    fn from_rat(r: &Rat) -> Self {
        Frac::from_poly(MPoly::from_rat(r))
    }

    fn try_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Frac::new(self.den.clone(), self.num.clone()))
        }
    }

    fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Frac::zero();
        }
        Frac {
            num: self.num.scale_rat(r),
            den: self.den.clone(),
        }
    }
}

/// Convenience: the variable `name` as a fraction.
pub fn frac_var(vars: &VarSet, name: &str) -> Frac {
    Frac::from_poly(MPoly::var(vars, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::rat;

    #[test]
    fn inverse_roundtrip() {
        let vars = VarSet::new(["t"]);
        let t = frac_var(&vars, "t");
        let p = t.clone() * t.clone() + Frac::from_rat(&rat(1));
        let q = t.clone() - Frac::from_rat(&rat(3));
        let f = p.clone() * q.try_inv().unwrap();
        let g = f.clone() * f.try_inv().unwrap();
        assert_eq!(g, Frac::one());
    }

    #[test]
    fn cross_multiplication_equality() {
        let vars = VarSet::new(["t"]);
        let t = frac_var(&vars, "t");
        // (t^2 - 1)/(t - 1) == (t + 1)/1
        let num = t.clone() * t.clone() - Frac::one();
        let den = t.clone() - Frac::one();
        let f = num * den.try_inv().unwrap();
        let g = t + Frac::one();
        assert_eq!(f, g);
    }
}
