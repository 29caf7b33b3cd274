//! Exact Taylor expansion of meromorphic modular forms at a point of the
//! upper half plane, in the local variable u, with coefficients in Q[B, C]
//! where B and C stand for the values of E4 and E6 at the point. The engine
//! is a Serre-derivative recursion validated against known low-order
//! coefficients; specializations at i (C = 0), rho (B = 0), and generic
//! points (B = C = t, exploiting the weighted scaling freedom) feed the
//! Frobenius machinery.

use num::{One, Zero};

use crate::algebra::coeff::{rat, ratq, Rat};
use crate::algebra::frac::Frac;
use crate::algebra::mpoly::{MPoly, VarSet};
use crate::{Error, FracSeries, Result};

/// Point class for local expansions. Elliptic points fix one of B, C to
/// zero; generic points carry t = E4^3/E6^2 as a symbol or a rational.
#[derive(Clone, Debug, PartialEq)]
pub enum PointClass {
    EllipticI,
    EllipticRho,
    /// variable index of the point's t-symbol in the working ring
    GenericSym(usize),
    GenericVal(Rat),
}

impl PointClass {
    /// Stabilizer order e.
    pub fn stabilizer(&self) -> u32 {
        match self {
            PointClass::EllipticI => 2,
            PointClass::EllipticRho => 3,
            _ => 1,
        }
    }
}

/// Ring context for expansions: a variable list containing B and C (and any
/// number of inert symbols such as t's and ansatz parameters).
#[derive(Clone, Debug)]
pub struct SerreRing {
    pub vars: VarSet,
    b: usize,
    c: usize,
}

impl SerreRing {
    pub fn new(vars: VarSet) -> Self {
        let b = vars.index_of("B").expect("ring must declare B");
        let c = vars.index_of("C").expect("ring must declare C");
        SerreRing { vars, b, c }
    }

    pub fn b_var(&self) -> MPoly {
        MPoly::var(&self.vars, "B")
    }

    pub fn c_var(&self) -> MPoly {
        MPoly::var(&self.vars, "C")
    }

    /// The graded derivation with D(B) = -C/3, D(C) = -B^2/2 and every
    /// other variable inert; on weight-k homogeneous elements this is the
    /// Serre derivative.
    pub fn derive(&self, p: &MPoly) -> MPoly {
        let mut acc = MPoly::zero_in(&self.vars);
        for (exp, r) in p.terms() {
            let i = exp[self.b];
            let j = exp[self.c];
            if i > 0 {
                let mut e = exp.clone();
                e[self.b] = i - 1;
                e[self.c] = j + 1;
                acc = acc + MPoly::monomial_in(&self.vars, e, r * ratq(-(i as i64), 3));
            }
            if j > 0 {
                let mut e = exp.clone();
                e[self.b] = i + 2;
                e[self.c] = j - 1;
                acc = acc + MPoly::monomial_in(&self.vars, e, r * ratq(-(j as i64), 2));
            }
        }
        acc
    }

    /// Modular weight of a homogeneous polynomial in B (weight 4) and C
    /// (weight 6); other variables are weight 0.
    pub fn weight_of(&self, p: &MPoly) -> Result<i64> {
        let mut w: Option<i64> = None;
        for (exp, _) in p.terms() {
            let tw = 4 * exp[self.b] as i64 + 6 * exp[self.c] as i64;
            match w {
                None => w = Some(tw),
                Some(prev) if prev == tw => {}
                Some(prev) => {
                    return Err(Error::Invalid(format!(
                        "expression mixes weights {prev} and {tw}"
                    )))
                }
            }
        }
        Ok(w.unwrap_or(0))
    }
}

/// Exact local expansion: coefficient of u^n is coeffs[n] in Q[B, C, ...].
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub weight: i64,
    pub coeffs: Vec<MPoly>,
}

impl LocalExpansion {
    /// Weighted homogeneity: the u^n coefficient has weight k + 2n under
    /// B -> l^4 B, C -> l^6 C.
    pub fn is_weighted_homogeneous(&self, ring: &SerreRing) -> bool {
        self.coeffs.iter().enumerate().all(|(n, c)| {
            c.is_zero()
                || ring
                    .weight_of(c)
                    .map(|w| w == self.weight + 2 * n as i64)
                    .unwrap_or(false)
        })
    }
}

/// Expand a homogeneous polynomial expression in E4, E6 (written in B, C)
/// around a point: f_0 = f, f_1 = df, f_{n+1} = df_n - n(n+k-1)(B/144)
/// f_{n-1}; the u^n coefficient is f_n / n!.
pub fn taylor_expand(ring: &SerreRing, expr: &MPoly, order: usize) -> Result<LocalExpansion> {
    let k = ring.weight_of(expr)?;
    let b144 = ring.b_var().scale_rat(&ratq(1, 144));
    let mut fs: Vec<MPoly> = Vec::with_capacity(order + 1);
    fs.push(expr.clone());
    if order >= 1 {
        fs.push(ring.derive(expr));
    }
    for n in 1..order {
        let n_i = n as i64;
        let corr = (b144.clone() * fs[n - 1].clone())
            .scale_rat(&rat(n_i * (n_i + k - 1)));
        fs.push(ring.derive(&fs[n]) - corr);
    }
    let mut factorial = Rat::one();
    let coeffs = fs
        .into_iter()
        .enumerate()
        .map(|(n, f)| {
            if n > 0 {
                factorial *= rat(n as i64);
            }
            f.scale_rat(&factorial.clone().recip())
        })
        .collect();
    Ok(LocalExpansion { weight: k, coeffs })
}

/// Substitute the point's (B, C) values, turning an expansion into a
/// u-series over the fraction field of the remaining symbols.
pub fn specialize(
    ring: &SerreRing,
    exp: &LocalExpansion,
    point: &PointClass,
) -> Result<FracSeries> {
    let (b_val, c_val) = point_values(ring, point);
    let coeffs: Vec<Frac> = exp
        .coeffs
        .iter()
        .map(|p| Frac::from_poly(subst_bc(ring, p, &b_val, &c_val)))
        .collect();
    if coeffs.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(FracSeries::new(1, 0, coeffs))
}

fn point_values(ring: &SerreRing, point: &PointClass) -> (MPoly, MPoly) {
    match point {
        PointClass::EllipticI => (
            MPoly::constant_in(&ring.vars, Rat::one()),
            MPoly::zero_in(&ring.vars),
        ),
        PointClass::EllipticRho => (
            MPoly::zero_in(&ring.vars),
            MPoly::constant_in(&ring.vars, Rat::one()),
        ),
        PointClass::GenericSym(idx) => {
            let t = MPoly::monomial_in(
                &ring.vars,
                {
                    let mut e = vec![0u16; ring.vars.len()];
                    e[*idx] = 1;
                    e
                },
                Rat::one(),
            );
            (t.clone(), t)
        }
        PointClass::GenericVal(t) => (
            MPoly::constant_in(&ring.vars, t.clone()),
            MPoly::constant_in(&ring.vars, t.clone()),
        ),
    }
}

fn subst_bc(ring: &SerreRing, p: &MPoly, b_val: &MPoly, c_val: &MPoly) -> MPoly {
    let mut acc = MPoly::zero_in(&ring.vars);
    for (exp, r) in p.terms() {
        let mut term = MPoly::constant_in(&ring.vars, r.clone());
        for (i, &e) in exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if i == ring.b_index() {
                b_val.clone()
            } else if i == ring.c_index() {
                c_val.clone()
            } else {
                let mut ee = vec![0u16; ring.vars.len()];
                ee[i] = e;
                term = term * MPoly::monomial_in(&ring.vars, ee, Rat::one());
                continue;
            };
            for _ in 0..e {
                term = term * base.clone();
            }
        }
        acc = acc + term;
    }
    acc
}

impl SerreRing {
    pub fn b_index(&self) -> usize {
        self.b
    }
    pub fn c_index(&self) -> usize {
        self.c
    }
}

/// One generic singular point of the (Q, R) ansatz with its parameters;
/// coefficients are rational functions of the declared symbols so the same
/// shape serves numeric closed forms and symbolic existence systems.
#[derive(Clone, Debug)]
pub struct AnsatzPoint {
    pub t: PointClass,
    pub r2: Frac,
    pub r1: Frac,
    pub s3: Frac,
    pub s2: Frac,
    pub s1: Frac,
}

/// The general (Q, R) ansatz: meromorphic modular forms of weight 4 and 6
/// with Fuchsian-bounded poles at i, rho, and the listed generic points.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub ring: SerreRing,
    pub r_inf: Frac,
    pub s_inf: Frac,
    pub r_i2: Frac,
    pub s_i3: Frac,
    pub s_i1: Frac,
    pub r_rho2: Frac,
    pub s_rho3: Frac,
    pub points: Vec<AnsatzPoint>,
}

/// Which place a local expansion is centered at.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    I,
    Rho,
    /// index into Ansatz::points
    Generic(usize),
}

impl Ansatz {
    fn delta0_expr(&self) -> MPoly {
        let b = self.ring.b_var();
        let c = self.ring.c_var();
        b.clone() * b.clone() * b - c.clone() * c
    }

    fn f_expr(&self, point: &AnsatzPoint) -> MPoly {
        let b = self.ring.b_var();
        let c = self.ring.c_var();
        let t = match &point.t {
            PointClass::GenericSym(idx) => {
                let mut e = vec![0u16; self.ring.vars.len()];
                e[*idx] = 1;
                MPoly::monomial_in(&self.ring.vars, e, Rat::one())
            }
            PointClass::GenericVal(v) => MPoly::constant_in(&self.ring.vars, v.clone()),
            _ => unreachable!("generic points only"),
        };
        b.clone() * b.clone() * b - t * c.clone() * c
    }

    /// Generator list (coefficient, numerator, denominator, label) for the
    /// weight-4 side.
    fn q_generators(&self) -> Vec<(Frac, MPoly, MPoly, String)> {
        let b = self.ring.b_var();
        let c = self.ring.c_var();
        let one = MPoly::constant_in(&self.ring.vars, Rat::one());
        let d0 = self.delta0_expr();
        let mut v = vec![
            (self.r_inf.clone(), b.clone(), one.clone(), "E4".to_string()),
            (
                self.r_i2.clone(),
                b.clone() * d0.clone(),
                c.clone() * c.clone(),
                "E4*Delta0/E6^2".to_string(),
            ),
            (
                self.r_rho2.clone(),
                d0.clone(),
                b.clone() * b.clone(),
                "Delta0/E4^2".to_string(),
            ),
        ];
        for (j, p) in self.points.iter().enumerate() {
            let fj = self.f_expr(p);
            v.push((
                p.r2.clone(),
                b.clone() * d0.clone() * d0.clone(),
                fj.clone() * fj.clone(),
                format!("E4*Delta0^2/F_{j}^2"),
            ));
            v.push((
                p.r1.clone(),
                b.clone() * d0.clone(),
                fj.clone(),
                format!("E4*Delta0/F_{j}"),
            ));
        }
        v
    }

    /// Generator list for the weight-6 side.
    fn r_generators(&self) -> Vec<(Frac, MPoly, MPoly, String)> {
        let b = self.ring.b_var();
        let c = self.ring.c_var();
        let one = MPoly::constant_in(&self.ring.vars, Rat::one());
        let d0 = self.delta0_expr();
        let mut v = vec![
            (self.s_inf.clone(), c.clone(), one.clone(), "E6".to_string()),
            (
                self.s_i3.clone(),
                d0.clone() * d0.clone(),
                c.clone() * c.clone() * c.clone(),
                "Delta0^2/E6^3".to_string(),
            ),
            (
                self.s_i1.clone(),
                d0.clone(),
                c.clone(),
                "Delta0/E6".to_string(),
            ),
            (
                self.s_rho3.clone(),
                c.clone() * d0.clone(),
                b.clone() * b.clone() * b.clone(),
                "E6*Delta0/E4^3".to_string(),
            ),
        ];
        for (j, p) in self.points.iter().enumerate() {
            let fj = self.f_expr(p);
            for (k, s) in [(3usize, &p.s3), (2, &p.s2), (1, &p.s1)] {
                let mut num = c.clone();
                let mut den = one.clone();
                for _ in 0..k {
                    num = num * d0.clone();
                    den = den * fj.clone();
                }
                v.push((s.clone(), num, den, format!("E6*Delta0^{k}/F_{j}^{k}")));
            }
        }
        v
    }

    fn point_class(&self, place: &Place) -> PointClass {
        match place {
            Place::I => PointClass::EllipticI,
            Place::Rho => PointClass::EllipticRho,
            Place::Generic(j) => self.points[*j].t.clone(),
        }
    }
}

fn expand_ratio(
    ring: &SerreRing,
    num: &MPoly,
    den: &MPoly,
    point: &PointClass,
    order: usize,
    fuchs_bound: i64,
    label: &str,
    place_label: &str,
) -> Result<FracSeries> {
    // expand generously so the quotient is valid through x^order
    let pad = order + 8;
    let num_exp = taylor_expand(ring, num, pad)?;
    let den_exp = taylor_expand(ring, den, pad)?;
    let ns = specialize(ring, &num_exp, point)?;
    let ds = specialize(ring, &den_exp, point)?;
    if ds.is_zero_through_valid() {
        return Err(Error::Invalid(format!(
            "denominator of {label} vanishes identically at {place_label}"
        )));
    }
    let ratio = ns.div(&ds)?;
    if let Some(e) = ratio.ord() {
        if e < Rat::from_integer((-fuchs_bound).into()) {
            return Err(Error::NotFuchsian {
                place: place_label.to_string(),
                order: -crate::algebra::coeff::rat_to_i64(&e).unwrap_or(i64::MIN),
                generator: label.to_string(),
            });
        }
    }
    Ok(ratio.truncate_num(order as i64))
}

/// Local Laurent data of the ansatz at a place: the series Q~(x) from
/// x^{-2} and the combined series (1/2) Q~'(x) + R~(x) from x^{-3}, with
/// coefficients linear in the ansatz parameters.
pub fn local_ode_data(
    ansatz: &Ansatz,
    place: &Place,
    order: usize,
) -> Result<(FracSeries, FracSeries)> {
    let ring = &ansatz.ring;
    let point = ansatz.point_class(place);
    let place_label = match place {
        Place::I => "i".to_string(),
        Place::Rho => "rho".to_string(),
        Place::Generic(j) => format!("z_{j}"),
    };
    let zero_q = FracSeries::zero_through(1, order as i64);
    let mut q_tilde = zero_q.clone();
    for (coeff, num, den, label) in ansatz.q_generators() {
        if coeff.is_zero() {
            continue;
        }
        let ratio = expand_ratio(ring, &num, &den, &point, order, 2, &label, &place_label)?;
        q_tilde = q_tilde.add(&ratio.scale(&coeff));
    }
    let mut r_tilde = zero_q;
    for (coeff, num, den, label) in ansatz.r_generators() {
        if coeff.is_zero() {
            continue;
        }
        let ratio = expand_ratio(ring, &num, &den, &point, order, 3, &label, &place_label)?;
        r_tilde = r_tilde.add(&ratio.scale(&coeff));
    }
    // b = (1/2) dQ~/dx + R~
    let dq_dx = q_tilde.dq().shift_num(-1);
    let b = dq_dx.scale_rat(&ratq(1, 2)).add(&r_tilde);
    Ok((q_tilde, b))
}

/// Parity filter at an elliptic point of order e: the u^n coefficient of a
/// weight-k expansion vanishes unless k + 2n = 0 mod 2e.
pub fn parity_filter_check(ring: &SerreRing, exp: &LocalExpansion, point: &PointClass) -> bool {
    let e = point.stabilizer() as i64;
    if e == 1 {
        return true;
    }
    let (b_val, c_val) = point_values(ring, point);
    exp.coeffs.iter().enumerate().all(|(n, c)| {
        let kk = exp.weight + 2 * n as i64;
        if kk.rem_euclid(2 * e) == 0 {
            true
        } else {
            subst_bc(ring, c, &b_val, &c_val).is_zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc_ring() -> SerreRing {
        SerreRing::new(VarSet::new(["B", "C"]))
    }

    #[test]
    fn e4_printed_coefficients() {
        let ring = bc_ring();
        let e4 = taylor_expand(&ring, &ring.b_var(), 4).unwrap();
        let b = ring.b_var();
        let c = ring.c_var();
        assert_eq!(e4.coeffs[0], b.clone());
        assert_eq!(e4.coeffs[1], c.clone().scale_rat(&ratq(-1, 3)));
        assert_eq!(e4.coeffs[2], (b.clone() * b.clone()).scale_rat(&ratq(5, 72)));
        assert_eq!(
            e4.coeffs[3],
            (b.clone() * c.clone()).scale_rat(&ratq(-5, 432))
        );
        // and the u^4 coefficient used at i: 5 B^3 / 6912 + (C^2 term)
        let at_i = specialize(&ring, &e4, &PointClass::EllipticI).unwrap();
        assert_eq!(at_i.coeff_int(4).as_rat().unwrap(), ratq(5, 6912));
        assert!(e4.is_weighted_homogeneous(&ring));
    }

    #[test]
    fn e6_printed_coefficients() {
        let ring = bc_ring();
        let e6 = taylor_expand(&ring, &ring.c_var(), 5).unwrap();
        let b = ring.b_var();
        let c = ring.c_var();
        assert_eq!(e6.coeffs[0], c.clone());
        assert_eq!(e6.coeffs[1], (b.clone() * b.clone()).scale_rat(&ratq(-1, 2)));
        assert_eq!(e6.coeffs[2], (b.clone() * c.clone()).scale_rat(&ratq(7, 48)));
        // at i: odd-only with -B^2/2, -7B^3/432, -7B^4/17280 at u, u^3, u^5
        let at_i = specialize(&ring, &e6, &PointClass::EllipticI).unwrap();
        assert!(at_i.coeff_int(0).is_zero());
        assert_eq!(at_i.coeff_int(1).as_rat().unwrap(), ratq(-1, 2));
        assert!(at_i.coeff_int(2).is_zero());
        assert_eq!(at_i.coeff_int(3).as_rat().unwrap(), ratq(-7, 432));
        assert!(at_i.coeff_int(4).is_zero());
        assert_eq!(at_i.coeff_int(5).as_rat().unwrap(), ratq(-7, 17280));
    }

    #[test]
    fn multiplicativity() {
        let ring = bc_ring();
        let e4 = taylor_expand(&ring, &ring.b_var(), 10).unwrap();
        let e6 = taylor_expand(&ring, &ring.c_var(), 10).unwrap();
        let prod = taylor_expand(&ring, &(ring.b_var() * ring.c_var()), 10).unwrap();
        // compare as series with rational-function coefficients at a generic
        // symbolic point specialization-free: multiply the raw expansions.
        for n in 0..=10usize {
            let mut conv = MPoly::zero_in(&ring.vars);
            for m in 0..=n {
                conv = conv + e4.coeffs[m].clone() * e6.coeffs[n - m].clone();
            }
            assert_eq!(conv, prod.coeffs[n], "u^{n}");
        }
    }

    #[test]
    fn delta_identity() {
        // 1728 taylor(Delta) = taylor(E4)^3 - taylor(E6)^2, via linearity of
        // the expansion in the defining polynomial.
        let ring = bc_ring();
        let b = ring.b_var();
        let c = ring.c_var();
        let delta0 = b.clone() * b.clone() * b.clone() - c.clone() * c.clone();
        let lhs = taylor_expand(&ring, &delta0, 8).unwrap();
        let e4 = taylor_expand(&ring, &b, 8).unwrap();
        let e6 = taylor_expand(&ring, &c, 8).unwrap();
        for n in 0..=8usize {
            let mut cube = MPoly::zero_in(&ring.vars);
            for m1 in 0..=n {
                for m2 in 0..=(n - m1) {
                    cube = cube
                        + e4.coeffs[m1].clone()
                            * e4.coeffs[m2].clone()
                            * e4.coeffs[n - m1 - m2].clone();
                }
            }
            let mut sq = MPoly::zero_in(&ring.vars);
            for m in 0..=n {
                sq = sq + e6.coeffs[m].clone() * e6.coeffs[n - m].clone();
            }
            assert_eq!(cube - sq, lhs.coeffs[n], "u^{n}");
        }
    }

    #[test]
    fn parity_filters() {
        let ring = bc_ring();
        let e4 = taylor_expand(&ring, &ring.b_var(), 9).unwrap();
        assert!(parity_filter_check(&ring, &e4, &PointClass::EllipticI));
        assert!(parity_filter_check(&ring, &e4, &PointClass::EllipticRho));
        let e6 = taylor_expand(&ring, &ring.c_var(), 9).unwrap();
        assert!(parity_filter_check(&ring, &e6, &PointClass::EllipticI));
        assert!(parity_filter_check(&ring, &e6, &PointClass::EllipticRho));
    }
}
