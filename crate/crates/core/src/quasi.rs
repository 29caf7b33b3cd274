//! Quasimodular forms of depth <= 2 on SL(2,Z): the (f0, f1, f2)
//! representation, the associated h-vector and its Wronskian, extremal
//! forms by exact linear algebra, and cusp exponents from vanishing orders.

use num::Zero;

use crate::algebra::coeff::{rat, ratq, Rat};
use crate::algebra::cpoly::CPoly;
use crate::algebra::linalg;
use crate::algebra::zpoly::ZPoly;
use crate::frobenius::LocalExponents;
use crate::modforms::{self, ClassicalForm};
use crate::{CSeries, Error, RatSeries, Result};

/// f = f0 + f1 E2 + f2 E2^2 with f_j in M_{k-2j}.
#[derive(Clone, Debug)]
pub struct QuasiForm {
    pub weight: i64,
    pub f0: RatSeries,
    pub f1: RatSeries,
    pub f2: RatSeries,
}

impl QuasiForm {
    pub fn depth(&self) -> u8 {
        if !self.f2.is_zero_through_valid() {
            2
        } else if !self.f1.is_zero_through_valid() {
            1
        } else if !self.f0.is_zero_through_valid() {
            0
        } else {
            0
        }
    }

    /// The q-expansion of f itself.
    pub fn series(&self) -> RatSeries {
        let order = self.order();
        let e2 = modforms::expand(ClassicalForm::E2, order);
        self.f0
            .add(&self.f1.mul(&e2))
            .add(&self.f2.mul(&e2.mul(&e2)))
    }

    /// g = f1 + 2 f2 E2, the derivative-direction component.
    pub fn g_series(&self) -> RatSeries {
        let order = self.order();
        let e2 = modforms::expand(ClassicalForm::E2, order);
        self.f1.add(&self.f2.scale_rat(&rat(2)).mul(&e2))
    }

    fn order(&self) -> i64 {
        self.f0
            .valid_num()
            .min(self.f1.valid_num())
            .min(self.f2.valid_num())
    }

    /// Divide all three components by a common modular factor; the MODE
    /// built from the quotient is the same.
    pub fn div_common(&self, m: &RatSeries, m_weight: i64) -> Result<QuasiForm> {
        Ok(QuasiForm {
            weight: self.weight - m_weight,
            f0: self.f0.div(m)?,
            f1: self.f1.div(m)?,
            f2: self.f2.div(m)?,
        })
    }
}

/// The triple (h1, h2, h3) = (z^2 f + a z g + a^2 f2, 2 z f + a g, f) with
/// a = alpha = 6c, as polynomials in the formal variable Z.
pub fn h_vector(f: &QuasiForm) -> [ZPoly; 3] {
    let alpha = CPoly::monomial(rat(6), 1);
    let alpha2 = CPoly::monomial(rat(36), 2);
    let fs = f.series().map(|r| CPoly::constant(r.clone()));
    let gs = f.g_series().map(|r| CPoly::constant(r.clone()));
    let f2s = f.f2.map(|r| CPoly::constant(r.clone()));
    let h1 = ZPoly::new(vec![
        f2s.scale(&alpha2),
        gs.scale(&alpha),
        fs.clone(),
    ]);
    let h2 = ZPoly::new(vec![gs.scale(&alpha), fs.scale(&CPoly::constant(rat(2)))]);
    let h3 = ZPoly::new(vec![fs]);
    [h1, h2, h3]
}

/// Wronskian of the h-vector in the D_q convention. The Z-terms cancel
/// identically and the c-dependence is a single c^3 monomial, leaving a
/// modular form of weight 3k with rational coefficients.
#[derive(Clone, Debug)]
pub struct Wronskian {
    /// always 3 for a depth <= 2 seed
    pub c_power: i32,
    /// the rational series (the paper-level nonzero scale is kept inside)
    pub series: RatSeries,
}

pub fn wronskian(f: &QuasiForm) -> Result<Wronskian> {
    if f.depth() < 1 {
        return Err(Error::DegenerateDepth(f.depth()));
    }
    let [h1, h2, h3] = h_vector(f);
    let w = wronskian_of(&[h1, h2, h3])?;
    Ok(w)
}

/// Wronskian det(h, D_q h, D_q^2 h) of three Z-polynomials; asserts literal
/// Z-cancellation and extracts the single c-power.
pub fn wronskian_of(h: &[ZPoly; 3]) -> Result<Wronskian> {
    let rows: Vec<[ZPoly; 3]> = h
        .iter()
        .map(|hi| {
            let d1 = hi.dq();
            let d2 = d1.dq();
            [hi.clone(), d1, d2]
        })
        .collect();
    let m = [rows[0].clone(), rows[1].clone(), rows[2].clone()];
    let det = crate::algebra::zpoly::det3(&m);
    let series = det.expect_series()?;
    extract_c_monomial(&series)
}

/// Split a series over Q[c,1/c] whose coefficients all share one c-power
/// into that monomial and a rational series.
pub fn extract_c_monomial(s: &CSeries) -> Result<Wronskian> {
    let mut power: Option<i32> = None;
    for c in s.coeffs() {
        for (k, _) in c.iter() {
            match power {
                None => power = Some(*k),
                Some(p) if p == *k => {}
                Some(p) => {
                    return Err(Error::Invalid(format!(
                        "mixed c-powers c^{p} and c^{k} in a supposed monomial multiple"
                    )))
                }
            }
        }
    }
    let p = power.unwrap_or(0);
    let series = s.map(|c| c.coeff(p));
    Ok(Wronskian {
        c_power: p,
        series,
    })
}

/// Normalized extremal quasimodular form of even weight k >= 6 and depth
/// <= 2: vanishing order at the cusp equal to dim - 1 = floor(k/4), leading
/// coefficient 1. The kernel dimension is checked to certify uniqueness.
pub fn extremal(k: i64, order: i64) -> Result<QuasiForm> {
    if k < 6 || k % 2 != 0 {
        return Err(Error::Invalid(format!(
            "extremal seeds need even weight k >= 6, got {k}"
        )));
    }
    let r = k / 4; // required vanishing order = dim - 1
    let work = order.max(r + 8);
    let b0 = modforms::basis(k, work);
    let b1 = modforms::basis(k - 2, work);
    let b2 = modforms::basis(k - 4, work);
    let e2 = modforms::expand(ClassicalForm::E2, work);
    let e2sq = e2.mul(&e2);
    let mut columns: Vec<RatSeries> = Vec::new();
    columns.extend(b0.iter().cloned());
    columns.extend(b1.iter().map(|s| s.mul(&e2).truncate_num(work)));
    columns.extend(b2.iter().map(|s| s.mul(&e2sq).truncate_num(work)));
    let dim_total = columns.len();
    // coefficients of q^0..q^{r-1} must vanish
    let rows: Vec<Vec<Rat>> = (0..r)
        .map(|n| columns.iter().map(|s| s.coeff_int(n)).collect())
        .collect();
    let kernel = linalg::kernel(rows);
    if kernel.len() != 1 {
        return Err(Error::ExtremalKernel(kernel.len()));
    }
    let coords = &kernel[0];
    let assemble = |basis: &[RatSeries], offset: usize| -> RatSeries {
        let mut acc = RatSeries::zero_through(1, work);
        for (i, b) in basis.iter().enumerate() {
            let c = &coords[offset + i];
            if !c.is_zero() {
                acc = acc.add(&b.scale_rat(c));
            }
        }
        acc
    };
    let f0 = assemble(&b0, 0);
    let f1 = assemble(&b1, b0.len());
    let f2 = assemble(&b2, b0.len() + b1.len());
    let _ = dim_total;
    let mut f = QuasiForm {
        weight: k,
        f0,
        f1,
        f2,
    };
    // normalize the leading coefficient (at q^r) to 1
    let lead = f.series().coeff_int(r);
    if lead.is_zero() {
        return Err(Error::Invalid(format!(
            "extremal candidate of weight {k} vanishes beyond order {r}"
        )));
    }
    let s = lead.recip();
    f.f0 = f.f0.scale_rat(&s);
    f.f1 = f.f1.scale_rat(&s);
    f.f2 = f.f2.scale_rat(&s);
    Ok(f)
}

/// Cusp exponents from the vanishing orders of f, g = f1 + 2 f2 E2, and
/// h = f2 (None = the component vanishes identically). Case split follows
/// the location of the minimum order m.
pub fn cusp_exponents_from_orders(
    ord_f: Option<i64>,
    ord_g: Option<i64>,
    ord_h: Option<i64>,
) -> Result<LocalExponents> {
    let f = ord_f.ok_or_else(|| Error::Invalid("f vanishes identically".into()))?;
    let third = |n: i64| ratq(n, 3);
    match (ord_g, ord_h) {
        _ if ord_g.map(|g| f <= g).unwrap_or(true)
            && ord_h.map(|h| f <= h).unwrap_or(true) =>
        {
            // ord f minimal: all exponents vanish
            LocalExponents::new([rat(0), rat(0), rat(0)])
        }
        (Some(g), h) if h.map(|h| g <= h).unwrap_or(true) && g < f => {
            // ord g = m < ord f
            LocalExponents::new([third(g - f), third(g - f), third(2 * (f - g))])
        }
        (g, Some(h)) if g.map(|g| h < g).unwrap_or(true) && h < f => {
            match g {
                Some(g) if g < f => {
                    // ord h < ord g < ord f
                    let w = f + g + h;
                    LocalExponents::new([
                        &third(3 * h) - &third(w),
                        &third(3 * g) - &third(w),
                        &third(3 * f) - &third(w),
                    ])
                }
                _ => {
                    // ord h < ord f <= ord g
                    LocalExponents::new([
                        third(2 * (h - f)),
                        third(f - h),
                        third(f - h),
                    ])
                }
            }
        }
        _ => Err(Error::Invalid(
            "vanishing orders do not match any cusp-exponent case".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremal_small_weights() {
        // k = 6: dim = 2, ord = 1; depth is 1 because M_2 = 0.
        let f6 = extremal(6, 20).unwrap();
        assert_eq!(f6.series().ord().unwrap(), rat(1));
        assert_eq!(f6.series().coeff_int(1), rat(1));
        assert_eq!(f6.depth(), 1);
        // k = 12: ord = 3 and ord_infty(f1 + 2 f2 E2) = 0.
        let f12 = extremal(12, 24).unwrap();
        assert_eq!(f12.series().ord().unwrap(), rat(3));
        assert_eq!(f12.g_series().ord().unwrap(), rat(0));
        assert_eq!(f12.depth(), 2);
    }

    #[test]
    fn wronskian_z_terms_cancel() {
        let f = extremal(8, 24).unwrap();
        let w = wronskian(&f).unwrap();
        assert_eq!(w.c_power, 3);
        assert!(!w.series.is_zero_through_valid());
    }

    #[test]
    fn wronskian_closed_forms() {
        // k = 0 mod 4: W ~ Delta^{k/4}; k = 2 mod 4: W ~ Delta^{(k-2)/4} E6.
        for k in [6i64, 8, 10, 12, 14, 16] {
            let f = extremal(k, 46).unwrap();
            let w = wronskian(&f).unwrap();
            let fact = modforms::factor_form(&w.series, 3 * k).unwrap();
            if k % 4 == 0 {
                assert_eq!(fact.ord_i(), 0, "k={k}");
                assert_eq!(fact.ord_rho(), 0, "k={k}");
                assert_eq!(fact.ord_infinity(), k / 4, "k={k}");
            } else {
                assert_eq!(fact.ord_i(), 1, "k={k}");
                assert_eq!(fact.ord_rho(), 0, "k={k}");
                assert_eq!(fact.ord_infinity(), (k - 2) / 4, "k={k}");
            }
            assert_eq!(fact.p_degree(), 0, "k={k}: pure product expected");
        }
    }

    #[test]
    fn wronskian_is_modular() {
        let f = extremal(10, 30).unwrap();
        let w = wronskian(&f).unwrap();
        assert!(modforms::membership(&w.series, 30, None).is_ok());
    }

    #[test]
    fn cusp_exponent_cases() {
        // (i) ord f minimal
        let e = cusp_exponents_from_orders(Some(0), Some(0), Some(1)).unwrap();
        assert_eq!(e.as_array(), [rat(0), rat(0), rat(0)]);
        // (ii) ord g = 0 < ord f = 3 (extremal weight-12 pattern)
        let e = cusp_exponents_from_orders(Some(3), Some(0), Some(0)).unwrap();
        assert_eq!(e.as_array(), [rat(-1), rat(-1), rat(2)]);
        // (iv) ord h < ord g < ord f
        let e = cusp_exponents_from_orders(Some(5), Some(3), Some(1)).unwrap();
        assert_eq!(e.as_array(), [rat(-2), rat(0), rat(2)]);
        // h = 0 is fine when g achieves the minimum
        let e = cusp_exponents_from_orders(Some(1), Some(0), None).unwrap();
        assert_eq!(
            e.as_array(),
            [ratq(-1, 3), ratq(-1, 3), ratq(2, 3)]
        );
    }
}
