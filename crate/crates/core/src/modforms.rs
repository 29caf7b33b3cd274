//! q-expansions of the classical forms on SL(2,Z), the Ramanujan derivative
//! system, Serre derivatives, graded monomial bases, membership solving, and
//! factorization of holomorphic forms into E4^a E6^b Delta^d P(j).

use std::collections::HashMap;
use std::sync::Mutex;

use num::{BigInt, One, Signed, Zero};

use crate::algebra::coeff::{rat, Rat};
use crate::{Error, RatSeries, Result};

/// The classical generators carried by this module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ClassicalForm {
    E2,
    E4,
    E6,
    Delta,
    /// 1728 * Delta
    Delta0,
    /// E4^3 / Delta, with a simple pole at the cusp
    J,
    /// eta^m, on the q^{1/24} grid
    EtaPow(i32),
}

impl ClassicalForm {
    pub fn weight(&self) -> Option<i64> {
        match self {
            ClassicalForm::E2 => Some(2),
            ClassicalForm::E4 => Some(4),
            ClassicalForm::E6 => Some(6),
            ClassicalForm::Delta | ClassicalForm::Delta0 => Some(12),
            ClassicalForm::J => Some(0),
            ClassicalForm::EtaPow(m) => Some(*m as i64 / 2).filter(|_| m % 2 == 0),
        }
    }

    pub fn parse(name: &str) -> Option<ClassicalForm> {
        match name {
            "E2" => Some(ClassicalForm::E2),
            "E4" => Some(ClassicalForm::E4),
            "E6" => Some(ClassicalForm::E6),
            "Delta" => Some(ClassicalForm::Delta),
            "Delta0" => Some(ClassicalForm::Delta0),
            "J" | "j" => Some(ClassicalForm::J),
            _ => name
                .strip_prefix("Eta^")
                .and_then(|m| m.parse().ok())
                .map(ClassicalForm::EtaPow),
        }
    }
}

fn sigma(n: u64, k: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// Eisenstein series 1 + scale * sum sigma_k(n) q^n.
fn eisenstein(scale: i64, k: u32, order: i64) -> RatSeries {
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(Rat::one());
    for n in 1..=order as u64 {
        coeffs.push(Rat::from_integer(BigInt::from(scale) * sigma(n, k)));
    }
    RatSeries::new(1, 0, coeffs)
}

fn euler_product(order: i64) -> RatSeries {
    // prod (1 - q^n); pentagonal-number recurrence on the dense product.
    let len = order as usize + 1;
    let mut coeffs = vec![Rat::zero(); len];
    coeffs[0] = Rat::one();
    for n in 1..len {
        // multiply by (1 - q^n) in place, descending.
        for i in (n..len).rev() {
            let v = &coeffs[i] - &coeffs[i - n];
            coeffs[i] = v;
        }
    }
    RatSeries::new(1, 0, coeffs)
}

static CACHE: Mutex<Option<HashMap<(ClassicalForm, i64), RatSeries>>> = Mutex::new(None);

/// Exact expansion of a classical form, valid through q^order.
pub fn expand(form: ClassicalForm, order: i64) -> RatSeries {
    assert!(order >= 0);
    {
        let guard = CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(s) = map.get(&(form, order)) {
                return s.clone();
            }
        }
    }
    let s = match form {
        ClassicalForm::E2 => eisenstein(-24, 1, order),
        ClassicalForm::E4 => eisenstein(240, 3, order),
        ClassicalForm::E6 => eisenstein(-504, 5, order),
        ClassicalForm::Delta => {
            let e4 = expand(ClassicalForm::E4, order).pow_int(3);
            let e6 = expand(ClassicalForm::E6, order).pow_int(2);
            e4.sub(&e6).scale_rat(&Rat::new(1.into(), 1728.into()))
        }
        ClassicalForm::Delta0 => expand(ClassicalForm::Delta, order).scale_rat(&rat(1728)),
        ClassicalForm::J => {
            // E4^3/Delta starts at q^{-1}; extend the inputs so the result
            // is valid through q^order.
            let e4 = expand(ClassicalForm::E4, order + 2).pow_int(3);
            let delta = expand(ClassicalForm::Delta, order + 2);
            e4.div(&delta).unwrap().truncate_num(order)
        }
        ClassicalForm::EtaPow(m) => {
            let p = euler_product(order);
            let m64 = m as i64;
            let pm = if m >= 0 {
                p.pow_int(m as u32)
            } else {
                p.inv().unwrap().pow_int((-m64) as u32).truncate_num(order)
            };
            // exponent shift by m/24 on the q^{1/24} grid
            pm.with_den(24).shift_num(m64)
        }
    };
    let mut guard = CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((form, order), s.clone());
    s
}

/// Serre derivative of a weight-k expansion: D_q f - (k/12) E2 f, which is
/// again modular of weight k+2 on modular inputs.
pub fn serre_derivative(f: &RatSeries, k: i64) -> RatSeries {
    let order = f.valid_num().div_euclid(f.den() as i64) + 1;
    let e2 = expand(ClassicalForm::E2, order.max(1)).with_den(f.den());
    f.dq().sub(&e2.mul(f).scale_rat(&Rat::new(k.into(), 12.into())))
}

/// Dimension of M_k(SL(2,Z)).
pub fn dim_modular(weight: i64) -> usize {
    if weight < 0 || weight % 2 != 0 {
        return 0;
    }
    let k = weight;
    let d = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
    d.max(0) as usize
}

/// Exponents (a on E4, b on E6) fixed by the weight for the monomial basis.
fn ab_for_weight(weight: i64) -> Option<(u32, u32)> {
    if weight < 0 || weight % 2 != 0 {
        return None;
    }
    for b in 0..=1u32 {
        let rem = weight - 6 * b as i64;
        if rem >= 0 && rem % 4 == 0 {
            // choose a minimal: a = rem/4 mod 3 keeps a in {0,1,2}
            let a = ((rem / 4) % 3) as u32;
            let left = rem - 4 * a as i64;
            if left % 12 == 0 && left >= 0 {
                return Some((a, b));
            }
        }
    }
    None
}

/// Echelonized basis of M_weight by leading q-order 0, 1, 2, ...; the
/// monomials E4^a E6^b Delta^d j^e reassembled as holomorphic products.
/// Empty for odd or negative weight.
pub fn basis(weight: i64, order: i64) -> Vec<RatSeries> {
    let dim = dim_modular(weight);
    if dim == 0 {
        return Vec::new();
    }
    let (a, b) = ab_for_weight(weight).expect("even nonnegative weight");
    let dmax = (weight - 4 * a as i64 - 6 * b as i64) / 12;
    let e4 = expand(ClassicalForm::E4, order);
    let e6 = expand(ClassicalForm::E6, order);
    let delta = expand(ClassicalForm::Delta, order);
    let head = e4.pow_int(a).mul(&e6.pow_int(b));
    let mut out = Vec::with_capacity(dim);
    // leading order d: E4^a E6^b Delta^d (E4^3)^{dmax-d}
    for d in 0..dim as i64 {
        let tail = delta.pow_int(d as u32).mul(&e4.pow_int(3 * (dmax - d) as u32));
        out.push(head.mul(&tail).truncate_num(order));
    }
    out
}

/// Failure data for membership: the first mismatching exponent.
#[derive(Debug, Clone)]
pub struct MembershipFailure {
    pub first_mismatch: Rat,
}

/// Exact coordinates of f in the echelon basis of M_weight, or the first
/// mismatching coefficient. With `denominator` = Some((g, wg)), tests
/// f * g in M_{weight + wg} instead (poles allowed where g vanishes).
///
/// Requires validity comfortably beyond the space dimension; the check is
/// performed on every known coefficient, which certifies equality since a
/// holomorphic form of weight w is pinned by its first dim M_w coefficients.
pub fn membership(
    f: &RatSeries,
    weight: i64,
    denominator: Option<(&RatSeries, i64)>,
) -> std::result::Result<Vec<Rat>, MembershipFailure> {
    let (g, w) = match denominator {
        Some((den, dw)) => (f.mul(den), weight + dw),
        None => (f.clone(), weight),
    };
    let dim = dim_modular(w);
    let order = g.valid_num() / g.den() as i64;
    let bas = basis(w, order.max(dim as i64 + 1));
    // forward-substitute on leading orders 0..dim-1
    let mut residual = g.clone();
    let mut coords = Vec::with_capacity(dim);
    for (d, b) in bas.iter().enumerate() {
        let c = residual.coeff_int(d as i64);
        coords.push(c.clone());
        if !c.is_zero() {
            residual = residual.sub(&b.scale_rat(&c));
        }
    }
    match residual.ord() {
        None => Ok(coords),
        Some(e) => Err(MembershipFailure { first_mismatch: e }),
    }
}

/// Holomorphic factorization f = E4^a E6^b Delta^d P(j) with a in {0,1,2},
/// b in {0,1}, deg P <= d, and 4a + 6b + 12d = weight.
#[derive(Debug, Clone)]
pub struct FormFactorization {
    pub a: u32,
    pub b: u32,
    pub d: i64,
    /// Coefficients of P(j), ascending; P absorbs the overall scale.
    pub p: Vec<Rat>,
}

impl FormFactorization {
    pub fn weight(&self) -> i64 {
        4 * self.a as i64 + 6 * self.b as i64 + 12 * self.d
    }

    pub fn p_degree(&self) -> usize {
        self.p
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Reassemble the q-expansion through q^order.
    pub fn series(&self, order: i64) -> RatSeries {
        let e4 = expand(ClassicalForm::E4, order);
        let e6 = expand(ClassicalForm::E6, order);
        let delta = expand(ClassicalForm::Delta, order);
        let head = e4.pow_int(self.a).mul(&e6.pow_int(self.b));
        // Delta^d P(j) = sum p_k Delta^{d-k} (E4^3)^k, holomorphic.
        let mut acc = RatSeries::zero_through(1, order);
        for (k, c) in self.p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = delta
                .pow_int((self.d - k as i64) as u32)
                .mul(&e4.pow_int(3 * k as u32));
            acc = acc.add(&term.scale_rat(c));
        }
        head.mul(&acc).truncate_num(order)
    }

    /// Zero order at the elliptic point i (w.r.t. the local coordinate z).
    /// j - 1728 = E6^2/Delta doubles the multiplicity of P at 1728.
    pub fn ord_i(&self) -> i64 {
        self.b as i64 + 2 * root_multiplicity(&self.p, &rat(1728)) as i64
    }

    /// Zero order at rho; j has a triple zero there.
    pub fn ord_rho(&self) -> i64 {
        self.a as i64 + 3 * root_multiplicity(&self.p, &Rat::zero()) as i64
    }

    /// Vanishing order at the cusp.
    pub fn ord_infinity(&self) -> i64 {
        self.d - self.p_degree() as i64
    }
}

fn root_multiplicity(p: &[Rat], at: &Rat) -> usize {
    let mut p: Vec<Rat> = p.to_vec();
    let mut m = 0;
    loop {
        while p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        if p.is_empty() {
            return m; // zero polynomial: treat as multiplicity found so far
        }
        // evaluate and synthetic-divide by (x - at)
        let mut acc = Rat::zero();
        let mut q = Vec::with_capacity(p.len().saturating_sub(1));
        for c in p.iter().rev() {
            acc = acc * at + c;
            q.push(acc.clone());
        }
        let rem = q.pop().unwrap_or_else(Rat::zero);
        if !rem.is_zero() {
            return m;
        }
        q.reverse();
        p = q;
        m += 1;
        if p.is_empty() {
            return m;
        }
    }
}

/// Factor a holomorphic-form q-expansion of the given weight.
pub fn factor_form(f: &RatSeries, weight: i64) -> Result<FormFactorization> {
    let Some((a, b)) = ab_for_weight(weight) else {
        return Err(Error::NotHolomorphicForm(format!(
            "no holomorphic forms of weight {weight}"
        )));
    };
    let d = (weight - 4 * a as i64 - 6 * b as i64) / 12;
    if d < 0 {
        return Err(Error::NotHolomorphicForm(format!(
            "weight {weight} leaves a negative Delta exponent"
        )));
    }
    let order = f.valid_num() / f.den() as i64;
    if order < d + 1 {
        return Err(Error::InsufficientOrder {
            needed: rat(d + 1),
        });
    }
    let e4 = expand(ClassicalForm::E4, order);
    let e6 = expand(ClassicalForm::E6, order);
    let g = f
        .div(&e4.pow_int(a).mul(&e6.pow_int(b)))
        .map_err(|_| Error::NotHolomorphicForm("division by E4^a E6^b failed".into()))?;
    // g should equal Delta^d P(j) = sum p_k Delta^{d-k} E4^{3k}; solve by
    // descending leading order (the k-th monomial has leading order d - k).
    let delta = expand(ClassicalForm::Delta, order);
    let mut residual = g.clone();
    let mut p = vec![Rat::zero(); d as usize + 1];
    // The monomial Delta^{d-k} E4^{3k} = Delta^d j^k has leading q-order d-k,
    // so the coefficients p_k are read off at q^{d-k}, k descending.
    for k in (0..=d).rev() {
        let c = residual.coeff_int(d - k);
        p[k as usize] = c.clone();
        if !c.is_zero() {
            let term = delta.pow_int((d - k) as u32).mul(&e4.pow_int(3 * k as u32));
            residual = residual.sub(&term.scale_rat(&c));
        }
    }
    if let Some(e) = residual.ord() {
        return Err(Error::NotHolomorphicForm(format!(
            "residual after factorization is nonzero at q^{e}"
        )));
    }
    Ok(FormFactorization { a, b, d, p })
}

/// Rational roots of a polynomial with rational coefficients (ascending),
/// with multiplicity, plus the content-free non-rational cofactor.
pub fn rational_roots(p: &[Rat]) -> (Vec<(Rat, usize)>, Vec<Rat>) {
    let mut p: Vec<Rat> = p.to_vec();
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.len() <= 1 {
        return (Vec::new(), p);
    }
    // clear denominators
    let mut den = BigInt::one();
    for c in &p {
        den = &den * c.denom() / crate::algebra::coeff::bigint_gcd(&den, c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rat::from_integer(den.clone())).numer().clone()).collect();
    let mut roots = Vec::new();
    let mut cur = p.clone();
    // strip powers of x
    let mut x_mult = 0usize;
    while cur.first().map(|c| c.is_zero()).unwrap_or(false) {
        cur.remove(0);
        x_mult += 1;
    }
    if x_mult > 0 {
        roots.push((Rat::zero(), x_mult));
    }
    let candidates = divisor_candidates(&ints);
    for cand in candidates {
        let mut mult = 0usize;
        loop {
            // synthetic division check
            let mut acc = Rat::zero();
            let mut q = Vec::with_capacity(cur.len().saturating_sub(1));
            for c in cur.iter().rev() {
                acc = acc * &cand + c;
                q.push(acc.clone());
            }
            let rem = q.pop().unwrap_or_else(Rat::zero);
            if rem.is_zero() && cur.len() > 1 {
                q.reverse();
                cur = q;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            roots.push((cand.clone(), mult));
        }
    }
    (roots, cur)
}

/// Candidate rational roots p/q from small divisors of the constant and
/// leading integer coefficients. Trial division is capped, so huge
/// coefficients degrade gracefully to "no candidates found".
fn divisor_candidates(ints: &[BigInt]) -> Vec<Rat> {
    let first_nz = ints.iter().position(|c| !c.is_zero());
    let Some(i0) = first_nz else { return Vec::new() };
    let a0 = ints[i0].abs();
    let top = ints.last().unwrap().abs();
    let div0 = small_divisors(&a0, 200_000);
    let divt = small_divisors(&top, 200_000);
    let mut out = Vec::new();
    for p in &div0 {
        for q in &divt {
            for sign in [1i64, -1] {
                let r = Rat::new(p * BigInt::from(sign), q.clone());
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn small_divisors(n: &BigInt, cap: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= cap {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        if (&m % &db).is_zero() {
            let mut e = 0;
            while (&m % &db).is_zero() {
                m /= &db;
                e += 1;
            }
            primes.push((db, e));
        }
        if m.is_one() {
            break;
        }
        d += 1;
    }
    if !m.is_one() {
        primes.push((m.clone(), 1));
    }
    for (p, e) in primes {
        let cur = out.clone();
        let mut pe = BigInt::one();
        for _ in 0..e {
            pe = &pe * &p;
            for c in &cur {
                out.push(c * &pe);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::ratq;

    #[test]
    fn printed_expansions() {
        let e6 = expand(ClassicalForm::E6, 3);
        assert_eq!(e6.coeff_int(1), rat(-504));
        let delta = expand(ClassicalForm::Delta, 4);
        assert_eq!(delta.coeff_int(1), rat(1));
        assert_eq!(delta.coeff_int(2), rat(-24));
        assert_eq!(delta.coeff_int(3), rat(252));
        assert_eq!(delta.coeff_int(4), rat(-1472));
        let e4 = expand(ClassicalForm::E4, 2);
        assert_eq!(e4.coeff_int(2), rat(2160)); // 240 * sigma_3(2)
    }

    #[test]
    fn serre_derivatives() {
        let n = 40;
        let e4 = expand(ClassicalForm::E4, n);
        let e6 = expand(ClassicalForm::E6, n);
        let delta = expand(ClassicalForm::Delta, n);
        // d4 E4 = -E6/3
        assert!(serre_derivative(&e4, 4).eq_to_validity(&e6.scale_rat(&ratq(-1, 3))));
        // d6 E6 = -E4^2/2
        assert!(serre_derivative(&e6, 6)
            .eq_to_validity(&e4.pow_int(2).scale_rat(&ratq(-1, 2)).truncate_num(n)));
        // d12 Delta = 0
        assert!(serre_derivative(&delta, 12).is_zero_through_valid());
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(basis(0, 10).len(), 1);
        assert!(basis(2, 10).is_empty());
        let b24 = basis(24, 10);
        assert_eq!(b24.len(), 3);
        for (d, f) in b24.iter().enumerate() {
            assert_eq!(f.ord().unwrap(), rat(d as i64));
        }
        // classical dimension formula through weight 60
        for k in (0..=60).step_by(2) {
            let expect = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
            assert_eq!(basis(k, expect + 5).len() as i64, expect, "weight {k}");
        }
    }

    #[test]
    fn membership_examples() {
        let n = 20;
        let e4sq = expand(ClassicalForm::E4, n).pow_int(2);
        let coords = membership(&e4sq, 8, None).unwrap();
        assert_eq!(coords, vec![rat(1)]);
        // E2 is quasimodular, not modular
        let e2 = expand(ClassicalForm::E2, n);
        assert!(membership(&e2, 2, None).is_err());
        // Delta0^2/E6^3 certified against the denominator E6^3
        let d0 = expand(ClassicalForm::Delta0, n);
        let e6 = expand(ClassicalForm::E6, n);
        let f = d0.pow_int(2).div(&e6.pow_int(3)).unwrap();
        let den = e6.pow_int(3);
        assert!(membership(&f, 6, Some((&den, 18))).is_ok());
    }

    #[test]
    fn factor_form_examples() {
        let n = 24;
        let delta = expand(ClassicalForm::Delta, n);
        let f = factor_form(&delta, 12).unwrap();
        assert_eq!((f.a, f.b, f.d), (0, 0, 1));
        assert_eq!(f.p_degree(), 0);

        // E4^3 = Delta * j
        let e4cubed = expand(ClassicalForm::E4, n).pow_int(3);
        let f = factor_form(&e4cubed, 12).unwrap();
        assert_eq!((f.a, f.b, f.d), (0, 0, 1));
        assert_eq!(f.p_degree(), 1);
        assert!(f.p[0].is_zero());
        assert_eq!(f.p[1], rat(1));
        assert!(f.series(n).eq_to_validity(&e4cubed));
    }

    #[test]
    fn factorization_orders() {
        // E4^6 E6^3 Delta^3: order 3 at i (from E6^3), 6 at rho (E4^6).
        let n = 30;
        let w = expand(ClassicalForm::E4, n)
            .pow_int(6)
            .mul(&expand(ClassicalForm::E6, n).pow_int(3))
            .mul(&expand(ClassicalForm::Delta, n).pow_int(3))
            .truncate_num(n);
        let f = factor_form(&w, 78).unwrap();
        // E4^6 E6^3 Delta^3 = E6 * Delta^6 * j^2 (j - 1728)
        assert_eq!((f.a, f.b, f.d), (0, 1, 6));
        assert_eq!(f.ord_i(), 3);
        assert_eq!(f.ord_rho(), 6);
        assert_eq!(f.ord_infinity(), 3);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 2)^2 (x + 1/3) x
        let p = vec![
            // x(x-2)^2(x+1/3) = x^4 - 11/3 x^3 + 8/3 x^2 + 4/3 x
            rat(0),
            ratq(4, 3),
            ratq(8, 3),
            ratq(-11, 3),
            rat(1),
        ];
        let (roots, rest) = rational_roots(&p);
        assert_eq!(rest.len(), 1);
        assert!(roots.contains(&(rat(2), 2)));
        assert!(roots.contains(&(ratq(-1, 3), 1)));
        assert!(roots.contains(&(rat(0), 1)));
    }
}
