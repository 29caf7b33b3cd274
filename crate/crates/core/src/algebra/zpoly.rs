use num::{One, Zero};

use super::coeff::{ratq, Rat};
use super::cpoly::CPoly;
use crate::CSeries;

/// Polynomial in the formal variable Z (standing for z on the upper half
/// plane) with q-series coefficients over Q[c, 1/c]. Under D_q = q d/dq the
/// variable differentiates to the constant c/2, since dz/d(2 pi i z) spends
/// one factor of 1/(2 pi i) = c/2.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoly {
    /// coeffs[k] multiplies Z^k.
    pub coeffs: Vec<CSeries>,
}

impl ZPoly {
    pub fn from_series(s: CSeries) -> Self {
        ZPoly { coeffs: vec![s] }
    }

    pub fn new(coeffs: Vec<CSeries>) -> Self {
        assert!(!coeffs.is_empty());
        ZPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest Z-power with a coefficient that is nonzero through validity.
    pub fn z_order(&self) -> Option<usize> {
        (0..self.coeffs.len()).rev().find(|&k| !self.coeffs[k].is_zero_through_valid())
    }

    /// The Z-free part, erroring if any positive Z-power survives.
    pub fn expect_series(&self) -> crate::Result<CSeries> {
        if let Some(k) = self.z_order() {
            if k > 0 {
                return Err(crate::Error::Invalid(format!(
                    "expression retains a Z^{k} term: {:?}",
                    self.coeffs[k]
                )));
            }
        }
        Ok(self.coeffs[0].clone())
    }

    pub fn add(&self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = rhs.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        ZPoly { coeffs: out }
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|s| s.neg()).collect(),
        }
    }

    pub fn sub(&self, rhs: &ZPoly) -> ZPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out: Vec<Option<CSeries>> = vec![None; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let p = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => acc.add(&p),
                    None => p,
                });
            }
        }
        ZPoly {
            coeffs: out.into_iter().map(Option::unwrap).collect(),
        }
    }

    pub fn mul_series(&self, s: &CSeries) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|a| a.mul(s)).collect(),
        }
    }

    /// D_q, with D_q Z = c/2.
    pub fn dq(&self) -> ZPoly {
        let half_c = CPoly::monomial(ratq(1, 2), 1);
        let mut out: Vec<CSeries> = self.coeffs.iter().map(|s| s.dq()).collect();
        for k in 1..self.coeffs.len() {
            // k Z^{k-1} (c/2) * coeff_k
            let term = self.coeffs[k]
                .scale(&half_c)
                .scale_rat(&Rat::from_integer((k as i64).into()));
            out[k - 1] = out[k - 1].add(&term);
        }
        ZPoly { coeffs: out }
    }

    pub fn is_zero_through_valid(&self) -> bool {
        self.coeffs.iter().all(|s| s.is_zero_through_valid())
    }
}

/// 3x3 determinant over ZPoly entries.
pub fn det3(m: &[[ZPoly; 3]; 3]) -> ZPoly {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    let t0 = m[0][0].mul(&minor(1, 2, 1, 2));
    let t1 = m[0][1].mul(&minor(1, 2, 0, 2));
    let t2 = m[0][2].mul(&minor(1, 2, 0, 1));
    t0.sub(&t1).add(&t2)
}

/// Z-degree-0 embedding of a rational series.
pub fn zpoly_of_rat_series(s: &crate::RatSeries) -> ZPoly {
    ZPoly::from_series(s.map(|r| CPoly::constant(r.clone())))
}

impl Zero for ZPoly {
    fn zero() -> Self {
        ZPoly::from_series(CSeries::zero_through(1, 0))
    }
    fn is_zero(&self) -> bool {
        self.is_zero_through_valid()
    }
}

impl std::ops::Add for ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: ZPoly) -> ZPoly {
        ZPoly::add(&self, &rhs)
    }
}

impl One for ZPoly {
    fn one() -> Self {
        ZPoly::from_series(CSeries::one_through(1, 0))
    }
}

impl std::ops::Mul for ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: ZPoly) -> ZPoly {
        ZPoly::mul(&self, &rhs)
    }
}
