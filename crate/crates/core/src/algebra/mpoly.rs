use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};

use super::coeff::{bigint_gcd, rat_to_str, Coeff, Rat};

/// Declared variable list for a polynomial ring context. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        VarSet(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn empty() -> Self {
        VarSet(Arc::new(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

/// Sparse multivariate polynomial over Q with a fixed variable list.
/// Exponent vectors are stored dense per term, keyed in lexicographic order.
///
/// A polynomial whose variable list is empty acts as a scalar and promotes to
/// any ring it meets in a binary operation.
#[derive(Clone)]
pub struct MPoly {
    vars: VarSet,
    terms: BTreeMap<Vec<u16>, Rat>,
}

impl MPoly {
    pub fn zero_in(vars: &VarSet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_in(vars: &VarSet, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(vec![0; vars.len()], r);
        }
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &VarSet, name: &str) -> Self {
        let idx = vars
            .index_of(name)
            .unwrap_or_else(|| panic!("variable {name} not declared in {:?}", vars.names()));
        let mut exp = vec![0u16; vars.len()];
        exp[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Rat::one());
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn monomial_in(vars: &VarSet, exp: Vec<u16>, r: Rat) -> Self {
        assert_eq!(exp.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(exp, r);
        }
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (exp, r) = self.terms.iter().next().unwrap();
            if exp.iter().all(|&e| e == 0) {
                return Some(r.clone());
            }
        }
        None
    }

    /// Promote a scalar (empty-vars) polynomial into the given ring.
    pub fn promoted_to(&self, vars: &VarSet) -> MPoly {
        if &self.vars == vars {
            return self.clone();
        }
        assert!(
            self.vars.is_empty(),
            "mixing polynomial rings {:?} and {:?}",
            self.vars.names(),
            vars.names()
        );
        match self.as_rat() {
            Some(r) => MPoly::constant_in(vars, r),
            None => unreachable!("empty-vars polynomial is always constant"),
        }
    }

    fn unify(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if a.vars == b.vars {
            (a.clone(), b.clone())
        } else if a.vars.is_empty() {
            (a.promoted_to(&b.vars), b.clone())
        } else {
            (a.clone(), b.promoted_to(&a.vars))
        }
    }

    /// Total degree restricted to the given variable indices (all when None).
    pub fn degree_in(&self, subset: Option<&[usize]>) -> Option<u32> {
        self.terms
            .keys()
            .map(|exp| match subset {
                Some(ix) => ix.iter().map(|&i| exp[i] as u32).sum(),
                None => exp.iter().map(|&e| e as u32).sum(),
            })
            .max()
    }

    /// Sum of the terms of highest degree in the given variable subset.
    pub fn leading_form(&self, subset: Option<&[usize]>) -> MPoly {
        let Some(d) = self.degree_in(subset) else {
            return MPoly::zero_in(&self.vars);
        };
        let terms = self
            .terms
            .iter()
            .filter(|(exp, _)| {
                let deg: u32 = match subset {
                    Some(ix) => ix.iter().map(|&i| exp[i] as u32).sum(),
                    None => exp.iter().map(|&e| e as u32).sum(),
                };
                deg == d
            })
            .map(|(e, r)| (e.clone(), r.clone()))
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Exact evaluation at a full assignment of the variables.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Rat::zero();
        for (exp, r) in &self.terms {
            let mut term = r.clone();
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= &values[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Partial derivative with respect to the named variable.
    pub fn diff(&self, name: &str) -> MPoly {
        let idx = self.vars.index_of(name).expect("unknown variable");
        let mut terms = BTreeMap::new();
        for (exp, r) in &self.terms {
            if exp[idx] == 0 {
                continue;
            }
            let mut e = exp.clone();
            let p = e[idx];
            e[idx] = p - 1;
            let v = r * Rat::from_integer(p.into());
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += v;
        }
        terms.retain(|_, r: &mut Rat| !r.is_zero());
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Rational content (gcd of numerators over lcm of denominators), with
    /// the sign of the lexicographically-leading term. Zero for the zero
    /// polynomial.
    pub fn content(&self) -> Rat {
        if self.terms.is_empty() {
            return Rat::zero();
        }
        let mut num = num::BigInt::zero();
        let mut den = num::BigInt::one();
        for r in self.terms.values() {
            num = bigint_gcd(&num, r.numer());
            den = &den * r.denom() / bigint_gcd(&den, r.denom());
        }
        let mut c = Rat::new(num, den);
        let lead = self.terms.iter().next_back().unwrap().1;
        if lead.is_negative() {
            c = -c;
        }
        c
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Vec<u16> {
        let mut min: Option<Vec<u16>> = None;
        for exp in self.terms.keys() {
            match &mut min {
                None => min = Some(exp.clone()),
                Some(m) => {
                    for (mi, &e) in m.iter_mut().zip(exp.iter()) {
                        *mi = (*mi).min(e);
                    }
                }
            }
        }
        min.unwrap_or_else(|| vec![0; self.vars.len()])
    }

    /// Divide out the exact monomial q^exp (panics if not divisible).
    pub fn div_monomial(&self, exp: &[u16]) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, r)| {
                let e2: Vec<u16> = e
                    .iter()
                    .zip(exp.iter())
                    .map(|(&a, &b)| {
                        assert!(a >= b, "not divisible by the monomial");
                        a - b
                    })
                    .collect();
                (e2, r.clone())
            })
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> MPoly {
        if r.is_zero() {
            return MPoly::zero_in(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * r))
                .collect(),
        }
    }

    /// The single variable this polynomial actually uses, if any. Returns
    /// Ok(None) for constants, Err(()) when two or more variables appear.
    pub fn single_variable(&self) -> std::result::Result<Option<usize>, ()> {
        let mut seen = None;
        for exp in self.terms.keys() {
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    match seen {
                        None => seen = Some(i),
                        Some(j) if j == i => {}
                        Some(_) => return Err(()),
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Dense coefficients in the given variable when no other variable
    /// appears.
    pub fn as_univariate(&self, var: usize) -> Option<Vec<Rat>> {
        let mut out = Vec::new();
        for (exp, r) in &self.terms {
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 && i != var {
                    return None;
                }
            }
            let d = exp[var] as usize;
            if out.len() <= d {
                out.resize(d + 1, Rat::zero());
            }
            out[d] = r.clone();
        }
        if out.is_empty() {
            out.push(Rat::zero());
        }
        Some(out)
    }

    /// View as a polynomial in `var` whose coefficients are grouped by the
    /// remaining exponents: (other-exponents with var zeroed) -> dense
    /// univariate coefficients.
    fn grouped_by(&self, var: usize) -> std::collections::BTreeMap<Vec<u16>, Vec<Rat>> {
        let mut groups: std::collections::BTreeMap<Vec<u16>, Vec<Rat>> = Default::default();
        for (exp, r) in &self.terms {
            let d = exp[var] as usize;
            let mut key = exp.clone();
            key[var] = 0;
            let slot = groups.entry(key).or_default();
            if slot.len() <= d {
                slot.resize(d + 1, Rat::zero());
            }
            slot[d] = r.clone();
        }
        groups
    }

    /// Exact division by a univariate polynomial in `var` (monic up to the
    /// stored leading coefficient); None if any group leaves a remainder.
    pub fn div_exact_univariate(&self, var: usize, g: &[Rat]) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (key, poly) in self.grouped_by(var) {
            let (quot, rem) = poly_divmod(&poly, g);
            if rem.iter().any(|c| !c.is_zero()) {
                return None;
            }
            for (d, c) in quot.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut exp = key.clone();
                exp[var] = d as u16;
                terms.insert(exp, c);
            }
        }
        Some(MPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// gcd over Q[var] of all the grouped coefficient polynomials, monic.
    pub fn univariate_content_gcd(&self, var: usize) -> Vec<Rat> {
        let mut g: Vec<Rat> = Vec::new();
        for (_, poly) in self.grouped_by(var) {
            g = poly_gcd(&g, &poly);
            if g.len() == 1 {
                break; // gcd is 1
            }
        }
        g
    }
}

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

/// (quotient, remainder) of dense univariate division over Q.
pub fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r: Vec<Rat> = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![Rat::zero()], r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        q[dr - db] = f.clone();
        for i in 0..=db {
            let v = &r[dr - db + i] - &(&b[i] * &f);
            r[dr - db + i] = v;
        }
        poly_trim(&mut r);
    }
    (q, r)
}

/// Monic gcd over Q[x]; the zero polynomial is the gcd identity.
pub fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = r;
        poly_trim(&mut b);
    }
    if let Some(lead) = a.last().cloned() {
        if !lead.is_one() {
            for c in &mut a {
                *c = &*c / &lead;
            }
        }
    }
    if a.is_empty() {
        a.push(Rat::zero());
    }
    a
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = MPoly::unify(self, other);
        a.terms == b.terms
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, r) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rat_to_str(r))?;
            for (i, &e) in exp.iter().enumerate() {
                if e == 1 {
                    write!(f, "*{}", self.vars.names()[i])?;
                } else if e > 1 {
                    write!(f, "*{}^{}", self.vars.names()[i], e)?;
                }
            }
        }
        Ok(())
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        let (a, b) = MPoly::unify(&self, &rhs);
        let mut terms = a.terms;
        for (e, r) in b.terms {
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += r;
        }
        terms.retain(|_, r| !r.is_zero());
        MPoly {
            vars: a.vars,
            terms,
        }
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(e, r)| (e, -r)).collect(),
        }
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        let (a, b) = MPoly::unify(&self, &rhs);
        let mut terms: BTreeMap<Vec<u16>, Rat> = BTreeMap::new();
        for (ea, ra) in &a.terms {
            for (eb, rb) in &b.terms {
                let e: Vec<u16> = ea.iter().zip(eb.iter()).map(|(&x, &y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ra * rb;
            }
        }
        terms.retain(|_, r| !r.is_zero());
        MPoly {
            vars: a.vars,
            terms,
        }
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::zero_in(&VarSet::empty())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::constant_in(&VarSet::empty(), Rat::one())
    }
}

impl Coeff for MPoly {
    fn from_rat(r: &Rat) -> Self {
        MPoly::constant_in(&VarSet::empty(), r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        // Units of a polynomial ring over a field are the nonzero constants.
        let r = self.as_rat()?;
        if r.is_zero() {
            None
        } else {
            Some(MPoly::constant_in(&self.vars, r.recip()))
        }
    }

    fn scale(&self, r: &Rat) -> Self {
        self.scale_rat(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::rat;

    #[test]
    fn ring_arithmetic() {
        let vars = VarSet::new(["B", "C"]);
        let b = MPoly::var(&vars, "B");
        let c = MPoly::var(&vars, "C");
        let p = (b.clone() + c.clone()) * (b.clone() - c.clone());
        let q = b.clone() * b - c.clone() * c;
        assert_eq!(p, q);
    }

    #[test]
    fn scalar_promotion() {
        let vars = VarSet::new(["t"]);
        let t = MPoly::var(&vars, "t");
        let two = MPoly::from_rat(&rat(2));
        let p = t.clone() * two;
        assert_eq!(p, MPoly::monomial_in(&vars, vec![1], rat(2)));
    }

    #[test]
    fn degree_and_leading_form() {
        let vars = VarSet::new(["t", "r", "s"]);
        let t = MPoly::var(&vars, "t");
        let r = MPoly::var(&vars, "r");
        let s = MPoly::var(&vars, "s");
        // t^3 r^2 + s: degree 2 in {r, s}
        let p = t.clone() * t.clone() * t.clone() * r.clone() * r.clone() + s.clone();
        assert_eq!(p.degree_in(Some(&[1, 2])), Some(2));
        let lf = p.leading_form(Some(&[1, 2]));
        assert_eq!(lf, t.clone() * t.clone() * t * r.clone() * r);
    }

    #[test]
    fn evaluation() {
        let vars = VarSet::new(["x", "y"]);
        let x = MPoly::var(&vars, "x");
        let y = MPoly::var(&vars, "y");
        let p = x.clone() * x + y.scale_rat(&rat(3));
        assert_eq!(p.eval(&[rat(2), rat(5)]), rat(19));
    }
}
