use num::{One, Zero};

use super::coeff::{Coeff, Rat};
use crate::{Error, Result};

/// Truncated series in q^{1/N} over an exact coefficient ring.
///
/// Stored terms sit on the grid (start + i)/N for i = 0..len; `valid` is the
/// numerator (over N) of the last exponent whose coefficient is provably
/// correct, so `len == valid - start + 1`. Exponents below `start` are exact
/// zeros; exponents above `valid` are unknown. Binary operations propagate
/// the minimum validity and unify exponent denominators by lcm.
#[derive(Clone, PartialEq)]
pub struct QSeries<R> {
    den: u32,
    start: i64,
    valid: i64,
    coeffs: Vec<R>,
}

impl<R: Coeff> QSeries<R> {
    /// Series with the given coefficients at exponents (start+i)/den.
    pub fn new(den: u32, start: i64, coeffs: Vec<R>) -> Self {
        assert!(den > 0);
        assert!(!coeffs.is_empty(), "series must carry at least one term");
        let valid = start + coeffs.len() as i64 - 1;
        QSeries {
            den,
            start,
            valid,
            coeffs,
        }
    }

    /// The zero series, known through exponent valid/den.
    pub fn zero_through(den: u32, valid: i64) -> Self {
        let start = valid.min(0);
        let len = (valid - start + 1) as usize;
        QSeries {
            den,
            start,
            valid,
            coeffs: vec![R::zero(); len],
        }
    }

    /// The constant 1, known through exponent valid/den.
    pub fn one_through(den: u32, valid: i64) -> Self {
        assert!(valid >= 0);
        let mut coeffs = vec![R::zero(); valid as usize + 1];
        coeffs[0] = R::one();
        QSeries {
            den,
            start: 0,
            valid,
            coeffs,
        }
    }

    /// c * q^{start/den}, known through valid/den.
    pub fn monomial(den: u32, start: i64, c: R, valid: i64) -> Self {
        assert!(valid >= start);
        let mut coeffs = vec![R::zero(); (valid - start + 1) as usize];
        coeffs[0] = c;
        QSeries {
            den,
            start,
            valid,
            coeffs,
        }
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    /// Numerator (over den) of the first stored exponent.
    pub fn start_num(&self) -> i64 {
        self.start
    }

    /// Numerator (over den) of the last provably correct exponent.
    pub fn valid_num(&self) -> i64 {
        self.valid
    }

    /// Validity as an exact exponent.
    pub fn valid_exp(&self) -> Rat {
        Rat::new(self.valid.into(), (self.den as i64).into())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Exponent of the i-th stored coefficient.
    pub fn exp_at(&self, i: usize) -> Rat {
        Rat::new(
            (self.start + i as i64).into(),
            (self.den as i64).into(),
        )
    }

    /// Coefficient at exponent num/den-grid position (numerator over den()).
    /// Exponents below the stored range are exact zeros; asking beyond the
    /// validity is a programming error.
    pub fn coeff_num(&self, num: i64) -> R {
        assert!(
            num <= self.valid,
            "coefficient at {}/{} requested beyond validity {}/{}",
            num,
            self.den,
            self.valid,
            self.den
        );
        if num < self.start {
            R::zero()
        } else {
            self.coeffs[(num - self.start) as usize].clone()
        }
    }

    /// Coefficient at an arbitrary exact exponent (zero off the grid).
    pub fn coeff_at(&self, e: &Rat) -> R {
        let scaled = e * Rat::from_integer((self.den as i64).into());
        if !scaled.denom().is_one() {
            return R::zero();
        }
        let num = i64::try_from(scaled.numer().clone()).expect("exponent overflow");
        self.coeff_num(num)
    }

    /// Coefficient at an integer exponent.
    pub fn coeff_int(&self, n: i64) -> R {
        self.coeff_num(n * self.den as i64)
    }

    /// First exponent with a nonzero coefficient, None when the series is
    /// zero through its validity.
    pub fn ord(&self) -> Option<Rat> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.exp_at(i))
    }

    pub fn is_zero_through_valid(&self) -> bool {
        self.ord().is_none()
    }

    /// Re-grid to a denominator that `den` divides. Exact: intermediate
    /// coefficients are genuine zeros.
    pub fn with_den(&self, new_den: u32) -> Self {
        assert!(new_den % self.den == 0);
        let k = (new_den / self.den) as i64;
        if k == 1 {
            return self.clone();
        }
        let start = self.start * k;
        let valid = self.valid * k;
        let mut coeffs = vec![R::zero(); (valid - start + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        QSeries {
            den: new_den,
            start,
            valid,
            coeffs,
        }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.den == b.den {
            (a.clone(), b.clone())
        } else {
            let l = num::integer::lcm(a.den, b.den);
            (a.with_den(l), b.with_den(l))
        }
    }

    /// Drop leading exact zeros (never changes the mathematical value).
    pub fn trimmed(&self) -> Self {
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        match first {
            None | Some(0) => self.clone(),
            Some(i) => QSeries {
                den: self.den,
                start: self.start + i as i64,
                valid: self.valid,
                coeffs: self.coeffs[i..].to_vec(),
            },
        }
    }

    /// Restrict the validity (and storage) to exponent new_valid/den.
    pub fn truncate_num(&self, new_valid: i64) -> Self {
        assert!(new_valid <= self.valid, "cannot extend validity by fiat");
        if new_valid < self.start {
            return QSeries::zero_through(self.den, new_valid);
        }
        QSeries {
            den: self.den,
            start: self.start,
            valid: new_valid,
            coeffs: self.coeffs[..(new_valid - self.start + 1) as usize].to_vec(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            den: self.den,
            start: self.start,
            valid: self.valid,
            coeffs: self.coeffs.iter().map(|c| c.clone().neg()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unify(self, rhs);
        let valid = a.valid.min(b.valid);
        let start = a.start.min(b.start).min(valid);
        let mut coeffs = vec![R::zero(); (valid - start + 1) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let n = start + i as i64;
            let mut v = R::zero();
            if n >= a.start && n <= a.valid {
                v = v + a.coeffs[(n - a.start) as usize].clone();
            }
            if n >= b.start && n <= b.valid {
                v = v + b.coeffs[(n - b.start) as usize].clone();
            }
            *c = v;
        }
        QSeries {
            den: a.den,
            start,
            valid,
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Product; validity = min(va + s0b, vb + s0a) where s0 is the other
    /// factor's leading stored exponent.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unify(self, rhs);
        let start = a.start + b.start;
        let valid = (a.valid + b.start).min(b.valid + a.start);
        let len = (valid - start + 1).max(0) as usize;
        assert!(len > 0, "product has no known coefficients");
        let mut coeffs = vec![R::zero(); len];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let max_j = (valid - start) as usize;
            for (j, cb) in b.coeffs.iter().enumerate() {
                let k = i + j;
                if k > max_j {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                coeffs[k] = coeffs[k].clone() + ca.clone() * cb.clone();
            }
        }
        QSeries {
            den: a.den,
            start,
            valid,
            coeffs,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        QSeries {
            den: self.den,
            start: self.start,
            valid: self.valid,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        QSeries {
            den: self.den,
            start: self.start,
            valid: self.valid,
            coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect(),
        }
    }

    /// Multiply by q^{shift/den}.
    pub fn shift_num(&self, shift: i64) -> Self {
        QSeries {
            den: self.den,
            start: self.start + shift,
            valid: self.valid + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplicative inverse. The leading stored coefficient (after
    /// trimming exact zeros) must be a unit of the coefficient ring.
    pub fn inv(&self) -> Result<Self> {
        let a = self.trimmed();
        if a.coeffs.is_empty() || a.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleLeading);
        }
        let lead_inv = a.coeffs[0].try_inv().ok_or(Error::NonInvertibleLeading)?;
        let n = a.coeffs.len();
        let mut out = vec![R::zero(); n];
        out[0] = lead_inv.clone();
        for k in 1..n {
            let mut acc = R::zero();
            for j in 1..=k {
                if a.coeffs[j].is_zero() || out[k - j].is_zero() {
                    continue;
                }
                acc = acc + a.coeffs[j].clone() * out[k - j].clone();
            }
            out[k] = (acc.neg()) * lead_inv.clone();
        }
        // validity: a = q^{s}(unit + u), u known to (valid - s) relative
        // terms, so the inverse is known to the same relative order.
        Ok(QSeries {
            den: a.den,
            start: -a.start,
            valid: a.valid - 2 * a.start,
            coeffs: out,
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// q d/dq: each term c q^s becomes c s q^s.
    pub fn dq(&self) -> Self {
        let den = Rat::from_integer((self.den as i64).into());
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = Rat::from_integer((self.start + i as i64).into()) / den.clone();
                c.scale(&e)
            })
            .collect();
        QSeries {
            den: self.den,
            start: self.start,
            valid: self.valid,
            coeffs,
        }
    }

    /// Formal power with a rational exponent via the binomial series.
    /// Requires leading coefficient exactly 1 after trimming.
    pub fn pow_rat(&self, r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Ok(QSeries::one_through(self.den, (self.valid - self.start).max(0)));
        }
        let a = self.trimmed();
        if a.coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if !a.coeffs[0].is_one() {
            return Err(Error::NonUnitLeading(format!("{:?}", a.coeffs[0])));
        }
        // New leading exponent r * start/den must land on a q^{1/N'} grid.
        let e0 = Rat::new(a.start.into(), (a.den as i64).into()) * r;
        let new_den = num::integer::lcm(
            a.den as i64,
            i64::try_from(e0.denom().clone()).map_err(|_| Error::EmptySeries)?,
        ) as u32;
        let a = a.with_den(new_den);
        let rel_order = (a.valid - a.start) as usize;
        // u = a / q^{start} - 1 has positive relative exponents.
        let mut u = a.coeffs.clone();
        u[0] = R::zero();
        // result = sum_k binom(r, k) u^k, accumulated on the relative grid.
        let mut acc = vec![R::zero(); rel_order + 1];
        acc[0] = R::one();
        let mut upow = vec![R::zero(); rel_order + 1];
        upow[0] = R::one();
        let mut binom = Rat::one();
        let u_ord = u.iter().position(|c| !c.is_zero());
        if let Some(u_ord) = u_ord {
            let mut k: i64 = 0;
            loop {
                k += 1;
                if (k as usize) * u_ord > rel_order {
                    break;
                }
                binom = binom * (r - super::coeff::rat(k - 1)) / super::coeff::rat(k);
                // upow *= u (truncated)
                let mut next = vec![R::zero(); rel_order + 1];
                for (i, ci) in upow.iter().enumerate() {
                    if ci.is_zero() {
                        continue;
                    }
                    for (j, cj) in u.iter().enumerate() {
                        if i + j > rel_order {
                            break;
                        }
                        if cj.is_zero() {
                            continue;
                        }
                        next[i + j] = next[i + j].clone() + ci.clone() * cj.clone();
                    }
                }
                upow = next;
                if binom.is_zero() {
                    break;
                }
                for (dst, src) in acc.iter_mut().zip(upow.iter()) {
                    if !src.is_zero() {
                        *dst = dst.clone() + src.scale(&binom);
                    }
                }
            }
        }
        let e0_num = i64::try_from((e0 * super::coeff::rat(new_den as i64)).numer().clone())
            .map_err(|_| Error::EmptySeries)?;
        Ok(QSeries {
            den: new_den,
            start: e0_num,
            valid: e0_num + rel_order as i64,
            coeffs: acc,
        })
    }

    /// Integer power by repeated multiplication (n >= 0).
    pub fn pow_int(&self, n: u32) -> Self {
        let rel = (self.valid - self.start).max(0);
        let mut acc = QSeries::one_through(self.den, rel);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Map coefficients into another ring.
    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> QSeries<S> {
        QSeries {
            den: self.den,
            start: self.start,
            valid: self.valid,
            coeffs: self.coeffs.iter().map(|c| f(c)).collect(),
        }
    }

    /// Equality of the known parts; requires a nonempty overlap of validity.
    pub fn eq_to_validity(&self, rhs: &Self) -> bool {
        let (a, b) = Self::unify(self, rhs);
        let valid = a.valid.min(b.valid);
        let start = a.start.min(b.start);
        if valid < start {
            panic!("comparing series with no overlapping validity");
        }
        for n in start..=valid {
            let ca = if n >= a.start {
                a.coeffs[(n - a.start) as usize].clone()
            } else {
                R::zero()
            };
            let cb = if n >= b.start {
                b.coeffs[(n - b.start) as usize].clone()
            } else {
                R::zero()
            };
            if ca != cb {
                return false;
            }
        }
        true
    }

    /// First exponent where the two known parts differ.
    pub fn first_mismatch(&self, rhs: &Self) -> Option<Rat> {
        let (a, b) = Self::unify(self, rhs);
        let valid = a.valid.min(b.valid);
        let start = a.start.min(b.start);
        for n in start..=valid {
            let ca = if n >= a.start && n <= a.valid {
                a.coeffs[(n - a.start) as usize].clone()
            } else {
                R::zero()
            };
            let cb = if n >= b.start && n <= b.valid {
                b.coeffs[(n - b.start) as usize].clone()
            } else {
                R::zero()
            };
            if ca != cb {
                return Some(Rat::new(n.into(), (a.den as i64).into()));
            }
        }
        None
    }
}

impl<R: Coeff> std::fmt::Debug for QSeries<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut printed = 0;
        write!(f, "[N={}] ", self.den)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if printed > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})q^({})", c, self.exp_at(i))?;
            printed += 1;
            if printed > 12 {
                write!(f, " + ...")?;
                break;
            }
        }
        if printed == 0 {
            write!(f, "0")?;
        }
        write!(f, " (valid {}/{})", self.valid, self.den)
    }
}
