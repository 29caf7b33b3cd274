//! SU(3) Toda solutions from triples of modular forms: the triple
//! Wronskian, the resulting MODE, numeric evaluation of the two-parameter
//! family U_1, U_2 on grids in the upper half plane, finite-difference PDE
//! residuals, and plane-coordinate plot data under w = E4^3/(E4^3 - E6^2).

use num::complex::Complex64;
use num::{One, Zero};

use crate::algebra::coeff::{rat_to_f64, Rat};
use crate::algebra::linalg;
use crate::modforms::{self, ClassicalForm};
use crate::{Error, RatSeries, Result};

/// Three linearly independent modular forms of one weight, as expansions.
#[derive(Clone, Debug)]
pub struct TripleSeed {
    pub weight: i64,
    pub forms: [RatSeries; 3],
}

impl TripleSeed {
    pub fn new(weight: i64, forms: [RatSeries; 3]) -> Result<Self> {
        // rank of the coefficient matrix over a window certifies independence
        let order = forms.iter().map(|f| f.valid_num()).min().unwrap_or(0);
        let rows: Vec<Vec<Rat>> = forms
            .iter()
            .map(|f| (0..=order.min(24)).map(|n| f.coeff_int(n)).collect())
            .collect();
        if linalg::rank(rows) != 3 {
            return Err(Error::DependentInputs);
        }
        Ok(TripleSeed { weight, forms })
    }

    /// The weight-24 basis (E4^6, E4^3 Delta, Delta^2).
    pub fn weight24(order: i64) -> Self {
        let e4 = modforms::expand(ClassicalForm::E4, order);
        let delta = modforms::expand(ClassicalForm::Delta, order);
        TripleSeed {
            weight: 24,
            forms: [
                e4.pow_int(6).truncate_num(order),
                e4.pow_int(3).mul(&delta).truncate_num(order),
                delta.pow_int(2).truncate_num(order),
            ],
        }
    }
}

/// Wronskian det(f, D_q f, D_q^2 f) of the triple: a holomorphic form of
/// weight 3(k+2) (the z-convention Wronskian is (2 pi i)^3 times this).
pub fn triple_wronskian(seed: &TripleSeed) -> Result<RatSeries> {
    let d: Vec<[RatSeries; 3]> = seed
        .forms
        .iter()
        .map(|f| {
            let d1 = f.dq();
            let d2 = d1.dq();
            [f.clone(), d1, d2]
        })
        .collect();
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        d[r1][c1].mul(&d[r2][c2]).sub(&d[r1][c2].mul(&d[r2][c1]))
    };
    let w = d[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&d[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&d[0][2].mul(&minor(1, 2, 0, 1)));
    if w.is_zero_through_valid() {
        return Err(Error::DependentInputs);
    }
    Ok(w)
}

/// Horner evaluation of a rational series at q = e^{2 pi i tau}, with a
/// crude geometric tail bound from the last stored coefficient block.
pub fn eval_series(s: &RatSeries, tau: Complex64, tol: f64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::Invalid("evaluation needs Im tau > 0".into()));
    }
    let den = s.den() as f64;
    // w = q^{1/N}
    let w = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau / den).exp();
    let wn = w.norm();
    let coeffs: Vec<f64> = s.coeffs().iter().map(rat_to_f64).collect();
    let mut acc = Complex64::zero();
    for c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc *= w.powi(s.start_num() as i32);
    // tail estimate: largest recent coefficient times the geometric tail
    let tail_coeff = coeffs
        .iter()
        .rev()
        .take(8)
        .fold(0.0f64, |m, c| m.max(c.abs()))
        .max(1.0);
    let bound = tail_coeff * wn.powi((s.valid_num() + 1) as i32) / (1.0 - wn).max(1e-12);
    if bound > tol {
        return Err(Error::TailBound { bound, tol });
    }
    Ok(acc)
}

/// Evaluated Toda data on a rectangular grid.
#[derive(Clone, Debug)]
pub struct TodaField {
    pub lambda: f64,
    pub mu: f64,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    /// None at masked nodes (within the margin of the singular set)
    pub u1: Vec<Option<f64>>,
    pub u2: Vec<Option<f64>>,
    /// excluded singular points in the window (x, y)
    pub excluded: Vec<(f64, f64)>,
    pub margin: f64,
}

impl TodaField {
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn node(&self, ix: usize, iy: usize) -> (f64, f64) {
        let hx = if self.nx > 1 {
            (self.x1 - self.x0) / (self.nx - 1) as f64
        } else {
            0.0
        };
        let hy = if self.ny > 1 {
            (self.y1 - self.y0) / (self.ny - 1) as f64
        } else {
            0.0
        };
        (self.x0 + hx * ix as f64, self.y0 + hy * iy as f64)
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    /// little-u combinations u1 = 2U1 - U2, u2 = 2U2 - U1 at a node.
    pub fn little_u(&self, i: usize) -> Option<(f64, f64)> {
        match (self.u1[i], self.u2[i]) {
            (Some(a), Some(b)) => Some((2.0 * a - b, 2.0 * b - a)),
            _ => None,
        }
    }
}

/// Numeric evaluator for a seed: holds the series needed for U1, U2.
pub struct TodaEvaluator {
    forms: [RatSeries; 3],
    pair_wronskians: [RatSeries; 3],
    w: RatSeries,
    /// singular points of the mode inside a window, as (x, y) candidates
    singulars: Vec<(f64, f64)>,
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

impl TodaEvaluator {
    pub fn new(seed: &TripleSeed) -> Result<Self> {
        let w = triple_wronskian(seed)?;
        let dq: Vec<RatSeries> = seed.forms.iter().map(|f| f.dq()).collect();
        // W(y_i, y_j) numerators: D_q f_i * f_j - D_q f_j * f_i, ordered
        // (1,2), (2,3), (3,1).
        let pw = |i: usize, j: usize| {
            dq[i].mul(&seed.forms[j]).sub(&dq[j].mul(&seed.forms[i]))
        };
        let pair_wronskians = [pw(0, 1), pw(1, 2), pw(2, 0)];
        let w_weight = 3 * (seed.weight + 2);
        let inventory = crate::mode::singular_inventory(&w.trimmed(), w_weight)?;
        let mut singulars = Vec::new();
        // SL(2,Z)-translates of i and rho with small denominators; generic
        // points are caught by the |W| guard at evaluation time.
        let reps: Vec<(f64, f64, i64)> = vec![
            (0.0, 1.0, inventory.ord_i),
            (-0.5, 3.0f64.sqrt() / 2.0, inventory.ord_rho),
        ];
        for (px, py, ord) in reps {
            if ord <= 0 {
                continue;
            }
            for (gx, gy) in sl2z_orbit_points(px, py) {
                singulars.push((gx, gy));
            }
        }
        Ok(TodaEvaluator {
            forms: seed.forms.clone(),
            pair_wronskians,
            w,
            singulars,
        })
    }

    /// |y_j|^2 and |W(y_i, y_j)|^2 with the z-convention normalization:
    /// y_j = f_j / W_z^{1/3}, W_z = (2 pi i)^3 W_q.
    fn moduli(&self, tau: Complex64, tol: f64) -> Result<([f64; 3], [f64; 3])> {
        let wv = eval_series(&self.w, tau, tol)?;
        let w_abs = wv.norm();
        if w_abs < 1e-300 {
            return Err(Error::SingularGridPoint(format!("{tau}")));
        }
        let w23 = w_abs.powf(2.0 / 3.0) * TWO_PI.powi(2);
        let w43 = w_abs.powf(4.0 / 3.0) * TWO_PI.powi(4);
        let mut ys = [0.0; 3];
        for (k, f) in self.forms.iter().enumerate() {
            let v = eval_series(f, tau, tol)?;
            ys[k] = v.norm_sqr() / w23;
        }
        let mut pws = [0.0; 3];
        for (k, p) in self.pair_wronskians.iter().enumerate() {
            let v = eval_series(p, tau, tol)? * Complex64::new(0.0, TWO_PI);
            pws[k] = v.norm_sqr() / w43;
        }
        Ok((ys, pws))
    }

    /// U1, U2 at a point for the given parameters.
    pub fn u_values(&self, tau: Complex64, lambda: f64, mu: f64, tol: f64) -> Result<(f64, f64)> {
        let (ys, pws) = self.moduli(tau, tol)?;
        let e1 = 0.25
            * (lambda * lambda / mu * ys[0] + mu * mu / lambda * ys[1] + ys[2] / (lambda * mu));
        let e2 = 0.25
            * (lambda * mu * pws[0]
                + mu / (lambda * lambda) * pws[1]
                + lambda / (mu * mu) * pws[2]);
        Ok((-e1.ln(), -e2.ln()))
    }

    pub fn singular_points(&self) -> &[(f64, f64)] {
        &self.singulars
    }
}

fn sl2z_orbit_points(px: f64, py: f64) -> Vec<(f64, f64)> {
    // gamma = (a b; c d) over a small search box, images of p = px + i py.
    let p = Complex64::new(px, py);
    let mut out = Vec::new();
    for c in -3i64..=3 {
        for d in -3i64..=3 {
            // need gcd(c,d)=1 solutions (a,b): extended euclid; then shift
            // by T^n to move into a wide x-range.
            if c == 0 && d == 0 {
                continue;
            }
            let g = gcd64(c.abs(), d.abs());
            if g != 1 {
                continue;
            }
            let (a, b) = bezout(c, d);
            // gamma p with gamma = (a -b; c d)? solve a*d - b*c = 1
            let denom = Complex64::new(c as f64, 0.0) * p + Complex64::new(d as f64, 0.0);
            if denom.norm() < 1e-12 {
                continue;
            }
            let base = (Complex64::new(a as f64, 0.0) * p + Complex64::new(b as f64, 0.0)) / denom;
            for n in -3i64..=3 {
                out.push((base.re + n as f64, base.im));
            }
        }
    }
    out
}

fn gcd64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

/// (a, b) with a*d - b*c = 1.
fn bezout(c: i64, d: i64) -> (i64, i64) {
    // extended euclid on (d, c)
    let (mut r0, mut r1) = (d, c);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    // r0 = gcd = s0*d + t0*c = 1 (or -1)
    if r0 == 1 {
        (s0, -t0)
    } else {
        (-s0, t0)
    }
}

/// Evaluate U1, U2 on a grid, masking nodes within `margin` of the singular
/// set.
#[allow(clippy::too_many_arguments)]
pub fn toda_fields(
    seed: &TripleSeed,
    lambda: f64,
    mu: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    n: usize,
    margin: f64,
    tol: f64,
) -> Result<TodaField> {
    if lambda <= 0.0 || mu <= 0.0 {
        return Err(Error::Invalid("lambda and mu must be positive".into()));
    }
    let ev = TodaEvaluator::new(seed)?;
    let mut field = TodaField {
        lambda,
        mu,
        x0,
        x1,
        y0,
        y1,
        nx: n,
        ny: n,
        u1: vec![None; n * n],
        u2: vec![None; n * n],
        excluded: Vec::new(),
        margin,
    };
    let mut excluded: Vec<(f64, f64)> = ev
        .singular_points()
        .iter()
        .copied()
        .filter(|(px, py)| {
            *px >= x0 - margin && *px <= x1 + margin && *py >= y0 - margin && *py <= y1 + margin
        })
        .collect();
    excluded.sort_by(|a, b| a.partial_cmp(b).unwrap());
    excluded.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    field.excluded = excluded;
    for iy in 0..n {
        for ix in 0..n {
            let (x, y) = field.node(ix, iy);
            let masked = field
                .excluded
                .iter()
                .any(|(px, py)| ((x - px).powi(2) + (y - py).powi(2)).sqrt() < margin);
            if masked {
                continue;
            }
            let tau = Complex64::new(x, y);
            let (u1, u2) = ev.u_values(tau, lambda, mu, tol)?;
            let i = field.idx(ix, iy);
            field.u1[i] = Some(u1);
            field.u2[i] = Some(u2);
        }
    }
    Ok(field)
}

/// PDE residuals with the 5-point Laplacian: max over interior unmasked
/// nodes of |lap U1 + e^{2U1 - U2}| and |lap U2 + e^{2U2 - U1}|.
pub fn pde_residuals(field: &TodaField) -> (f64, f64) {
    let n = field.nx;
    let h = field.h();
    let mut r1_max = 0.0f64;
    let mut r2_max = 0.0f64;
    let get = |v: &Vec<Option<f64>>, ix: usize, iy: usize| v[iy * n + ix];
    for iy in 1..field.ny - 1 {
        for ix in 1..n - 1 {
            let stencil = |v: &Vec<Option<f64>>| -> Option<f64> {
                let c = get(v, ix, iy)?;
                let l = get(v, ix - 1, iy)?;
                let r = get(v, ix + 1, iy)?;
                let u = get(v, ix, iy + 1)?;
                let d = get(v, ix, iy - 1)?;
                Some((l + r + u + d - 4.0 * c) / (h * h))
            };
            let (Some(lap1), Some(lap2)) = (stencil(&field.u1), stencil(&field.u2)) else {
                continue;
            };
            let i = field.idx(ix, iy);
            let (Some(u1), Some(u2)) = (field.u1[i], field.u2[i]) else {
                continue;
            };
            let r1 = (lap1 + (2.0 * u1 - u2).exp()).abs();
            let r2 = (lap2 + (2.0 * u2 - u1).exp()).abs();
            r1_max = r1_max.max(r1);
            r2_max = r2_max.max(r2);
        }
    }
    (r1_max, r2_max)
}

/// Automorphy spot check: U1(-1/z) - U1(z) - 4 ln|z| at the given points.
pub fn automorphy_deltas(
    seed: &TripleSeed,
    lambda: f64,
    mu: f64,
    samples: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<f64>> {
    let ev = TodaEvaluator::new(seed)?;
    let mut out = Vec::new();
    for &(x, y) in samples {
        let z = Complex64::new(x, y);
        let sz = -Complex64::one() / z;
        let (u1, _) = ev.u_values(z, lambda, mu, tol)?;
        let (u1s, _) = ev.u_values(sz, lambda, mu, tol)?;
        out.push(u1s - u1 - 4.0 * z.norm().ln());
    }
    Ok(out)
}

/// Plane-coordinate samples (w, v1, v2) under w = E4^3/Delta0 together with
/// the singular-coefficient bookkeeping of the transformed system.
#[derive(Clone, Debug)]
pub struct PlaneSample {
    pub w: Complex64,
    pub v1: f64,
    pub v2: f64,
}

pub fn plane_transform(
    seed: &TripleSeed,
    field: &TodaField,
    tol: f64,
) -> Result<Vec<PlaneSample>> {
    let order = seed.forms[0].valid_num();
    let e4 = modforms::expand(ClassicalForm::E4, order);
    let e6 = modforms::expand(ClassicalForm::E6, order);
    let d0 = modforms::expand(ClassicalForm::Delta0, order);
    let mut out = Vec::new();
    for iy in 0..field.ny {
        for ix in 0..field.nx {
            let i = field.idx(ix, iy);
            let (Some((u1, u2)), _) = (field.little_u(i), ()) else {
                continue;
            };
            let (x, y) = field.node(ix, iy);
            let tau = Complex64::new(x, y);
            let e4v = eval_series(&e4, tau, tol)?;
            let e6v = eval_series(&e6, tau, tol)?;
            let d0v = eval_series(&d0, tau, tol)?;
            if d0v.norm() < 1e-250 {
                continue;
            }
            let wv = e4v.powi(3) / d0v;
            // w'(z) = -2 pi i E4^2 E6 / Delta0
            let wp = -Complex64::new(0.0, TWO_PI) * e4v.powi(2) * e6v / d0v;
            if wp.norm() < 1e-12 {
                return Err(Error::SingularGridPoint(format!(
                    "critical point of w at {tau}"
                )));
            }
            let corr = 2.0 * wp.norm().ln();
            out.push(PlaneSample {
                w: wv,
                v1: u1 - corr,
                v2: u2 - corr,
            });
        }
    }
    Ok(out)
}

/// CSV rows (x, y, U1, U2, u1, u2) for emission; residual columns are
/// appended by the caller if desired.
pub fn field_rows(field: &TodaField) -> Vec<(f64, f64, f64, f64, f64, f64)> {
    let mut rows = Vec::new();
    for iy in 0..field.ny {
        for ix in 0..field.nx {
            let i = field.idx(ix, iy);
            if let (Some(a), Some(b)) = (field.u1[i], field.u2[i]) {
                let (x, y) = field.node(ix, iy);
                rows.push((x, y, a, b, 2.0 * a - b, 2.0 * b - a));
            }
        }
    }
    rows
}
