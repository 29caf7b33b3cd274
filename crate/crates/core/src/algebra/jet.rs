use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::coeff::{Coeff, Rat};

/// Order-2 jet v0 + v1*eps + v2*eps^2 (mod eps^3) over a coefficient field.
///
/// Running the Frobenius recursion over jets at alpha = kappa + eps computes
/// the coefficient functions c_n(alpha) together with their first two exact
/// derivatives at kappa: the quantities the solution-structure theorems need
/// (values, d/d-alpha, and half the second derivative are the three slots).
#[derive(Clone, Debug, PartialEq)]
pub struct Jet3<F>(pub [F; 3]);

impl<F: Coeff> Jet3<F> {
    pub fn constant(v: F) -> Self {
        Jet3([v, F::zero(), F::zero()])
    }

    /// kappa + eps: the evaluation point with unit derivative part.
    pub fn variable(v: F) -> Self {
        Jet3([v, F::one(), F::zero()])
    }

    pub fn value(&self) -> &F {
        &self.0[0]
    }

    /// d/d-alpha at the base point.
    pub fn d1(&self) -> F {
        self.0[1].clone()
    }

    /// d^2/d-alpha^2 at the base point (the stored slot is half of it).
    pub fn d2(&self) -> F {
        self.0[2].clone() + self.0[2].clone()
    }
}

impl<F: Coeff> Add for Jet3<F> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = r.0;
        Jet3([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<F: Coeff> Sub for Jet3<F> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = r.0;
        Jet3([a0 - b0, a1 - b1, a2 - b2])
    }
}

impl<F: Coeff> Neg for Jet3<F> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2] = self.0;
        Jet3([-a0, -a1, -a2])
    }
}

impl<F: Coeff> Mul for Jet3<F> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = r.0;
        Jet3([
            a0.clone() * b0.clone(),
            a0.clone() * b1.clone() + a1.clone() * b0.clone(),
            a0 * b2 + a1 * b1 + a2 * b0,
        ])
    }
}

impl<F: Coeff> Zero for Jet3<F> {
    fn zero() -> Self {
        Jet3::constant(F::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }
}

impl<F: Coeff> One for Jet3<F> {
    fn one() -> Self {
        Jet3::constant(F::one())
    }
}

impl<F: Coeff> Coeff for Jet3<F> {
    fn from_rat(r: &Rat) -> Self {
        Jet3::constant(F::from_rat(r))
    }

    /// Invertible exactly when the value part is; the jet inverse is the
    /// truncated geometric series.
    fn try_inv(&self) -> Option<Self> {
        let inv0 = self.0[0].try_inv()?;
        let t1 = -(inv0.clone() * self.0[1].clone() * inv0.clone());
        let t2 = inv0.clone()
            * (self.0[1].clone() * inv0.clone() * self.0[1].clone()
                - self.0[2].clone())
            * inv0.clone();
        Some(Jet3([inv0, t1, t2]))
    }

    fn scale(&self, r: &Rat) -> Self {
        Jet3([
            self.0[0].scale(r),
            self.0[1].scale(r),
            self.0[2].scale(r),
        ])
    }
}

pub type RatJet = Jet3<Rat>;
