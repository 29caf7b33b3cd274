//! Construction of the normalized third-order MODE
//! D_q^3 y + Q D_q y + (1/2 D_q Q + R) y = 0 from solution data, and
//! extraction of its invariants: the (Q, R) expansions, the singularity
//! inventory, closed forms over the E4/E6/Delta0/F_t generators, and local
//! exponents with apparentness classification everywhere.

use num::Zero;

use crate::algebra::coeff::{rat, rat_to_i64, ratq, Coeff, Rat};
use crate::algebra::cpoly::CPoly;
use crate::algebra::frac::Frac;
use crate::algebra::linalg::{self, Solve};
use crate::algebra::mpoly::VarSet;
use crate::algebra::zpoly::ZPoly;
use crate::frobenius::{self, Apparentness, LaurentData, LocalExponents, PointKind};
use crate::modforms::{self, ClassicalForm};
use crate::taylor::{self, Ansatz, AnsatzPoint, Place, SerreRing};
use crate::{CSeries, Error, RatSeries, Result};

/// Where the singular points of a mode sit, as zero orders of the seed
/// Wronskian, plus the j-polynomial cofactor for generic points.
#[derive(Clone, Debug)]
pub struct SingularInventory {
    pub ord_i: i64,
    pub ord_rho: i64,
    pub ord_infinity: i64,
    /// (t-value, zero order of W there) for rational generic points
    pub generic: Vec<(Rat, i64)>,
    /// the full j-polynomial P from the factorization of W
    pub p_poly: Vec<Rat>,
    /// non-rational cofactor of P, reported symbolically when present
    pub unresolved: Option<Vec<Rat>>,
}

/// Exact values of the (Q, R) ansatz parameters; the closed form of a mode.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzValues {
    pub r_inf: Rat,
    pub s_inf: Rat,
    pub r_i2: Rat,
    pub s_i3: Rat,
    pub s_i1: Rat,
    pub r_rho2: Rat,
    pub s_rho3: Rat,
    pub points: Vec<PointValues>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointValues {
    pub t: Rat,
    pub r2: Rat,
    pub r1: Rat,
    pub s3: Rat,
    pub s2: Rat,
    pub s1: Rat,
}

impl AnsatzValues {
    pub fn trivial() -> Self {
        AnsatzValues {
            r_inf: Rat::zero(),
            s_inf: Rat::zero(),
            r_i2: Rat::zero(),
            s_i3: Rat::zero(),
            s_i1: Rat::zero(),
            r_rho2: Rat::zero(),
            s_rho3: Rat::zero(),
            points: Vec::new(),
        }
    }

    /// q-expansion of Q through q^order.
    pub fn q_series(&self, order: i64) -> RatSeries {
        let g = Generators::new(order);
        let mut acc = g.e4.scale_rat(&self.r_inf);
        if !self.r_i2.is_zero() {
            acc = acc.add(&g.e4d0_e6sq().scale_rat(&self.r_i2));
        }
        if !self.r_rho2.is_zero() {
            acc = acc.add(&g.d0_e4sq().scale_rat(&self.r_rho2));
        }
        for p in &self.points {
            if !p.r2.is_zero() {
                acc = acc.add(&g.e4d0sq_fsq(&p.t).scale_rat(&p.r2));
            }
            if !p.r1.is_zero() {
                acc = acc.add(&g.e4d0_f(&p.t).scale_rat(&p.r1));
            }
        }
        acc.truncate_num(order)
    }

    /// q-expansion of R through q^order.
    pub fn r_series(&self, order: i64) -> RatSeries {
        let g = Generators::new(order);
        let mut acc = g.e6.scale_rat(&self.s_inf);
        if !self.s_i3.is_zero() {
            acc = acc.add(&g.d0sq_e6cb().scale_rat(&self.s_i3));
        }
        if !self.s_i1.is_zero() {
            acc = acc.add(&g.d0_e6().scale_rat(&self.s_i1));
        }
        if !self.s_rho3.is_zero() {
            acc = acc.add(&g.e6d0_e4cb().scale_rat(&self.s_rho3));
        }
        for p in &self.points {
            for (k, s) in [(3u32, &p.s3), (2, &p.s2), (1, &p.s1)] {
                if !s.is_zero() {
                    acc = acc.add(&g.e6d0k_fk(&p.t, k).scale_rat(s));
                }
            }
        }
        acc.truncate_num(order)
    }

    /// Symbolic ansatz over the minimal ring (B, C, nothing free).
    pub fn to_ansatz(&self) -> Ansatz {
        let ring = SerreRing::new(VarSet::new(["B", "C"]));
        let cnst = |r: &Rat| Frac::from_rat(r);
        Ansatz {
            ring,
            r_inf: cnst(&self.r_inf),
            s_inf: cnst(&self.s_inf),
            r_i2: cnst(&self.r_i2),
            s_i3: cnst(&self.s_i3),
            s_i1: cnst(&self.s_i1),
            r_rho2: cnst(&self.r_rho2),
            s_rho3: cnst(&self.s_rho3),
            points: self
                .points
                .iter()
                .map(|p| AnsatzPoint {
                    t: taylor::PointClass::GenericVal(p.t.clone()),
                    r2: cnst(&p.r2),
                    r1: cnst(&p.r1),
                    s3: cnst(&p.s3),
                    s2: cnst(&p.s2),
                    s1: cnst(&p.s1),
                })
                .collect(),
        }
    }
}

/// q-expansions of the ansatz generators.
struct Generators {
    order: i64,
    e4: RatSeries,
    e6: RatSeries,
    d0: RatSeries,
}

impl Generators {
    fn new(order: i64) -> Self {
        let pad = order + 8;
        Generators {
            order: pad,
            e4: modforms::expand(ClassicalForm::E4, pad),
            e6: modforms::expand(ClassicalForm::E6, pad),
            d0: modforms::expand(ClassicalForm::Delta0, pad),
        }
    }

    fn f_t(&self, t: &Rat) -> RatSeries {
        self.e4.pow_int(3).sub(&self.e6.pow_int(2).scale_rat(t))
    }

    fn e4d0_e6sq(&self) -> RatSeries {
        self.e4
            .mul(&self.d0)
            .div(&self.e6.pow_int(2))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn d0_e4sq(&self) -> RatSeries {
        self.d0
            .div(&self.e4.pow_int(2))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn e4d0sq_fsq(&self, t: &Rat) -> RatSeries {
        self.e4
            .mul(&self.d0.pow_int(2))
            .div(&self.f_t(t).pow_int(2))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn e4d0_f(&self, t: &Rat) -> RatSeries {
        self.e4
            .mul(&self.d0)
            .div(&self.f_t(t))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn d0sq_e6cb(&self) -> RatSeries {
        self.d0
            .pow_int(2)
            .div(&self.e6.pow_int(3))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn d0_e6(&self) -> RatSeries {
        self.d0
            .div(&self.e6)
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn e6d0_e4cb(&self) -> RatSeries {
        self.e6
            .mul(&self.d0)
            .div(&self.e4.pow_int(3))
            .unwrap()
            .truncate_num(self.order - 4)
    }

    fn e6d0k_fk(&self, t: &Rat, k: u32) -> RatSeries {
        self.e6
            .mul(&self.d0.pow_int(k))
            .div(&self.f_t(t).pow_int(k))
            .unwrap()
            .truncate_num(self.order - 4)
    }
}

/// How the mode was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    QuasiSeed { weight: i64 },
    TripleSeed { weight: i64 },
    Ansatz,
}

/// The normalized MODE with its invariants.
#[derive(Clone, Debug)]
pub struct ModeData {
    pub q: RatSeries,
    pub r: RatSeries,
    /// seed Wronskian (rational part, D_q convention) and its weight
    pub w: RatSeries,
    pub w_weight: i64,
    pub cusp_exponents: LocalExponents,
    pub inventory: SingularInventory,
    pub ansatz: Option<AnsatzValues>,
    pub provenance: Provenance,
}

/// Monic third-order annihilator of three independent Z-polynomial
/// solutions, reduced to the normal form without second derivative; returns
/// (Q, R) over Q[c, 1/c] together with the Wronskian determinant.
pub fn annihilator(sols: &[ZPoly; 3]) -> Result<(CSeries, CSeries, CSeries)> {
    let rows: Vec<[ZPoly; 4]> = sols
        .iter()
        .map(|h| {
            let d1 = h.dq();
            let d2 = d1.dq();
            let d3 = d2.dq();
            [h.clone(), d1, d2, d3]
        })
        .collect();
    // 2x2 minors of the bottom two rows, shared across the determinants.
    let mut minors: Vec<Vec<Option<ZPoly>>> = vec![vec![None; 4]; 4];
    for c1 in 0..4 {
        for c2 in (c1 + 1)..4 {
            minors[c1][c2] = Some(
                rows[1][c1]
                    .mul(&rows[2][c2])
                    .sub(&rows[1][c2].mul(&rows[2][c1])),
            );
        }
    }
    let pick = |c0: usize, c1: usize, c2: usize| -> Result<CSeries> {
        let det = rows[0][c0]
            .mul(minors[c1][c2].as_ref().unwrap())
            .sub(&rows[0][c1].mul(minors[c0][c2].as_ref().unwrap()))
            .add(&rows[0][c2].mul(minors[c0][c1].as_ref().unwrap()));
        det.expect_series()
    };
    let w = pick(0, 1, 2)?;
    if w.is_zero_through_valid() {
        return Err(Error::DependentInputs);
    }
    // Abel: D_q W = -p2 W, so the (0,1,3)-determinant is just D_q W.
    let w3 = w.dq();
    let w2 = pick(0, 2, 3)?;
    let w1 = pick(1, 2, 3)?;
    let w_inv = w.inv()?;
    let p2 = w3.mul(&w_inv).neg();
    let p1 = w2.mul(&w_inv);
    let p0 = w1.mul(&w_inv).neg();
    // The inputs must satisfy the monic equation before any reduction.
    for (i, row) in rows.iter().enumerate() {
        let res = row[3]
            .add(&row[2].mul_series(&p2))
            .add(&row[1].mul_series(&p1))
            .add(&row[0].mul_series(&p0));
        if !res.is_zero_through_valid() {
            return Err(Error::Invalid(format!(
                "input {} is not annihilated by its own Wronskian operator",
                i + 1
            )));
        }
    }
    // Normal form: with u = -p2/3 the substitution y -> W^{1/3} y removes
    // the second derivative, leaving
    //   Q = 3 u' - 3 u^2 + p1,  Q3 = u'' - 2 u^3 + p1 u + p0,
    // and R = Q3 - (1/2) D_q Q.
    let u = p2.scale_rat(&ratq(-1, 3));
    let usq = u.mul(&u);
    let q = u
        .dq()
        .scale_rat(&rat(3))
        .sub(&usq.scale_rat(&rat(3)))
        .add(&p1);
    let q3 = u
        .dq()
        .dq()
        .sub(&usq.mul(&u).scale_rat(&rat(2)))
        .add(&p1.mul(&u))
        .add(&p0);
    let r = q3.sub(&q.dq().scale_rat(&ratq(1, 2)));
    Ok((q, r, w))
}

/// Apply D_q^3 + Q D_q + (1/2 D_q Q + R) to a Z-polynomial.
pub fn apply_mode_operator(q: &RatSeries, r: &RatSeries, y: &ZPoly) -> ZPoly {
    let qc = q.map(|v| CPoly::constant(v.clone()));
    let b = q
        .dq()
        .scale_rat(&ratq(1, 2))
        .add(r)
        .map(|v| CPoly::constant(v.clone()));
    let d1 = y.dq();
    let d3 = d1.dq().dq();
    d3.add(&d1.mul_series(&qc)).add(&y.mul_series(&b))
}

/// Solutions of the normalized equation: h_j times the unit-normalized
/// W^{-1/3} (the discarded cube-root scalar is invisible to a linear
/// equation). Exact on the q^{1/3} grid.
fn normalized_solutions(h: &[ZPoly; 3], w: &CSeries) -> Result<[ZPoly; 3]> {
    let wt = w.trimmed();
    if wt.coeffs().is_empty() || wt.coeffs()[0].is_zero() {
        return Err(Error::DependentInputs);
    }
    let lead = wt.coeffs()[0]
        .try_inv()
        .ok_or(Error::NonInvertibleLeading)?;
    let unit = wt.scale(&lead);
    let w_cbrt_inv = unit.pow_rat(&ratq(-1, 3))?;
    Ok([
        h[0].mul_series(&w_cbrt_inv),
        h[1].mul_series(&w_cbrt_inv),
        h[2].mul_series(&w_cbrt_inv),
    ])
}

fn c_free(s: &CSeries) -> Result<RatSeries> {
    let mut out = Vec::with_capacity(s.coeffs().len());
    for c in s.coeffs() {
        match c.as_rat() {
            Some(r) => out.push(r),
            None => {
                return Err(Error::Invalid(format!(
                    "coefficient {:?} retains powers of c",
                    c
                )))
            }
        }
    }
    Ok(RatSeries::new(s.den(), s.start_num(), out))
}

/// Build the MODE from a depth <= 2 quasimodular seed.
pub fn mode_from_quasi(f: &crate::quasi::QuasiForm) -> Result<ModeData> {
    let h = crate::quasi::h_vector(f);
    let (qc, rc, w_full) = annihilator(&h)?;
    // c-cancellation: Q and R of a quasi-seeded mode are rational.
    let q = c_free(&qc)?.trimmed();
    let r = c_free(&rc)?.trimmed();
    let wr = crate::quasi::extract_c_monomial(&w_full)?;
    let w_weight = 3 * f.weight;
    let inventory = singular_inventory(&wr.series, w_weight)?;
    let ord = |s: &RatSeries| s.ord().map(|e| rat_to_i64(&e).unwrap());
    let cusp_exponents = crate::quasi::cusp_exponents_from_orders(
        ord(&f.series()),
        ord(&f.g_series()),
        ord(&f.f2),
    )?;
    let ansatz = fit_ansatz(&q, &r, &inventory).ok();
    // Annihilation oracle on the actual seed solutions h_j W^{-1/3}.
    for yi in &normalized_solutions(&h, &w_full)? {
        let res = apply_mode_operator(&q, &r, yi);
        if !res.is_zero_through_valid() {
            return Err(Error::Invalid(
                "constructed equation fails to annihilate its seed".into(),
            ));
        }
    }
    Ok(ModeData {
        q,
        r,
        w: wr.series,
        w_weight,
        cusp_exponents,
        inventory,
        ansatz,
        provenance: Provenance::QuasiSeed { weight: f.weight },
    })
}

/// Build the MODE from three independent modular forms of one weight.
pub fn mode_from_triple(seed: &crate::toda::TripleSeed) -> Result<ModeData> {
    let h: [ZPoly; 3] = [
        crate::algebra::zpoly::zpoly_of_rat_series(&seed.forms[0]),
        crate::algebra::zpoly::zpoly_of_rat_series(&seed.forms[1]),
        crate::algebra::zpoly::zpoly_of_rat_series(&seed.forms[2]),
    ];
    let (qc, rc, wc) = annihilator(&h)?;
    let q = c_free(&qc)?.trimmed();
    let r = c_free(&rc)?.trimmed();
    let w = c_free(&wc)?.trimmed();
    let w_weight = 3 * (seed.weight + 2);
    let inventory = singular_inventory(&w, w_weight)?;
    let data = frobenius::cusp_data(&q, &r)?;
    let ind = frobenius::indicial(&data);
    let cusp_exponents = ind.exponents?;
    let ansatz = fit_ansatz(&q, &r, &inventory).ok();
    for yi in &normalized_solutions(&h, &wc)? {
        let res = apply_mode_operator(&q, &r, yi);
        if !res.is_zero_through_valid() {
            return Err(Error::Invalid(
                "constructed equation fails to annihilate its seed".into(),
            ));
        }
    }
    Ok(ModeData {
        q,
        r,
        w,
        w_weight,
        cusp_exponents,
        inventory,
        ansatz,
        provenance: Provenance::TripleSeed {
            weight: seed.weight,
        },
    })
}

/// Zero orders of the seed Wronskian at i, rho, infinity, and generic
/// points; generic t-values are roots of its j-polynomial cofactor moved
/// through t = j/(j - 1728).
pub fn singular_inventory(w: &RatSeries, w_weight: i64) -> Result<SingularInventory> {
    let fact = modforms::factor_form(w, w_weight)?;
    let (roots, rest) = modforms::rational_roots(&fact.p);
    let mut generic = Vec::new();
    for (j0, mult) in roots {
        if j0.is_zero() || j0 == rat(1728) {
            continue; // folded into the elliptic orders below
        }
        let t = &j0 / (&j0 - rat(1728));
        generic.push((t, mult as i64));
    }
    let unresolved = if rest.len() > 1 { Some(rest) } else { None };
    Ok(SingularInventory {
        ord_i: fact.ord_i(),
        ord_rho: fact.ord_rho(),
        ord_infinity: fact.ord_infinity(),
        generic,
        p_poly: fact.p.clone(),
        unresolved,
    })
}

/// Fit (Q, R) to the generator ansatz dictated by the inventory; the fit is
/// verified on every known coefficient, so success is a certificate.
pub fn fit_ansatz(
    q: &RatSeries,
    r: &RatSeries,
    inv: &SingularInventory,
) -> Result<AnsatzValues> {
    let order = q.valid_num().min(r.valid_num());
    let g = Generators::new(order);
    // Q-side columns.
    let mut q_cols: Vec<RatSeries> = vec![g.e4.truncate_num(order)];
    let mut q_names: Vec<&str> = vec!["r_inf"];
    if inv.ord_i > 0 {
        q_cols.push(g.e4d0_e6sq().truncate_num(order));
        q_names.push("r_i2");
    }
    if inv.ord_rho > 0 {
        q_cols.push(g.d0_e4sq().truncate_num(order));
        q_names.push("r_rho2");
    }
    for (t, _) in &inv.generic {
        q_cols.push(g.e4d0sq_fsq(t).truncate_num(order));
        q_names.push("r2");
        q_cols.push(g.e4d0_f(t).truncate_num(order));
        q_names.push("r1");
    }
    let q_sol = fit_columns(q, &q_cols)?;
    // R-side columns.
    let mut r_cols: Vec<RatSeries> = vec![g.e6.truncate_num(order)];
    let mut r_names: Vec<&str> = vec!["s_inf"];
    if inv.ord_i > 0 {
        r_cols.push(g.d0sq_e6cb().truncate_num(order));
        r_names.push("s_i3");
        r_cols.push(g.d0_e6().truncate_num(order));
        r_names.push("s_i1");
    }
    if inv.ord_rho > 0 {
        r_cols.push(g.e6d0_e4cb().truncate_num(order));
        r_names.push("s_rho3");
    }
    for (t, _) in &inv.generic {
        for k in [3u32, 2, 1] {
            r_cols.push(g.e6d0k_fk(t, k).truncate_num(order));
            r_names.push("s_k");
        }
    }
    let r_sol = fit_columns(r, &r_cols)?;
    // Distribute the solutions back into named slots.
    let mut vals = AnsatzValues::trivial();
    for (name, v) in q_names.iter().zip(q_sol.iter()) {
        match *name {
            "r_inf" => vals.r_inf = v.clone(),
            "r_i2" => vals.r_i2 = v.clone(),
            "r_rho2" => vals.r_rho2 = v.clone(),
            _ => {}
        }
    }
    for (name, v) in r_names.iter().zip(r_sol.iter()) {
        match *name {
            "s_inf" => vals.s_inf = v.clone(),
            "s_i3" => vals.s_i3 = v.clone(),
            "s_i1" => vals.s_i1 = v.clone(),
            "s_rho3" => vals.s_rho3 = v.clone(),
            _ => {}
        }
    }
    // Generic-point parameters, in declaration order after the named ones.
    let mut qoff = 1 + (inv.ord_i > 0) as usize + (inv.ord_rho > 0) as usize;
    let mut roff = 1 + 2 * ((inv.ord_i > 0) as usize) + (inv.ord_rho > 0) as usize;
    for (t, _) in &inv.generic {
        vals.points.push(PointValues {
            t: t.clone(),
            r2: q_sol[qoff].clone(),
            r1: q_sol[qoff + 1].clone(),
            s3: r_sol[roff].clone(),
            s2: r_sol[roff + 1].clone(),
            s1: r_sol[roff + 2].clone(),
        });
        qoff += 2;
        roff += 3;
    }
    Ok(vals)
}

fn fit_columns(target: &RatSeries, cols: &[RatSeries]) -> Result<Vec<Rat>> {
    let order = target.valid_num().min(
        cols.iter()
            .map(|c| c.valid_num())
            .min()
            .unwrap_or(target.valid_num()),
    );
    let nrows = (cols.len() as i64 + 10).min(order + 1);
    let rows: Vec<Vec<Rat>> = (0..nrows)
        .map(|n| cols.iter().map(|c| c.coeff_int(n)).collect())
        .collect();
    let rhs: Vec<Rat> = (0..nrows).map(|n| target.coeff_int(n)).collect();
    let sol = match linalg::solve(rows, rhs) {
        Solve::Unique(x) => x,
        Solve::Inconsistent(_) => {
            return Err(Error::Invalid(
                "expansion is outside the generator span".into(),
            ))
        }
        Solve::Underdetermined(d) => {
            return Err(Error::Invalid(format!(
                "generator fit underdetermined by {d} dimensions"
            )))
        }
    };
    // verify on the full known range
    let mut acc = RatSeries::zero_through(1, order);
    for (c, col) in sol.iter().zip(cols.iter()) {
        if !c.is_zero() {
            acc = acc.add(&col.scale_rat(c));
        }
    }
    if let Some(e) = acc.first_mismatch(&target.truncate_num(order)) {
        return Err(Error::NotModular(e));
    }
    Ok(sol)
}

/// A labeled place on the modular curve.
#[derive(Clone, Debug, PartialEq)]
pub enum PlaceId {
    Infinity,
    EllipticI,
    EllipticRho,
    Generic(Rat),
}

/// Exponents and classification at one place.
#[derive(Clone, Debug)]
pub struct PlaceReport {
    pub place: PlaceId,
    pub exponents: LocalExponents,
    /// None when the point is not classified (e.g. nonsingular, or symbolic)
    pub classification: Option<Apparentness>,
}

/// Laurent data of the mode at an interior place, from its closed form.
pub fn interior_data(mode: &ModeData, place: &Place, order: usize) -> Result<LaurentData<Rat>> {
    let vals = mode
        .ansatz
        .as_ref()
        .ok_or_else(|| Error::Invalid("mode carries no closed form".into()))?;
    let ansatz = vals.to_ansatz();
    let (a, b) = taylor::local_ode_data(&ansatz, place, order)?;
    let to_rat = |s: &crate::FracSeries, from: i64| -> Result<Vec<Rat>> {
        let mut out = Vec::new();
        for n in from..=s.valid_num() {
            let f = s.coeff_num(n);
            out.push(f.as_rat().ok_or_else(|| {
                Error::Invalid("interior data retains symbolic coefficients".into())
            })?);
        }
        Ok(out)
    };
    Ok(LaurentData::new(
        PointKind::Interior,
        to_rat(&a, -2)?,
        to_rat(&b, -3)?,
    ))
}

/// Local exponents at every place of the inventory (and the cusp), with
/// apparentness classification wherever the data is rational.
pub fn exponents_everywhere(mode: &ModeData) -> Result<Vec<PlaceReport>> {
    let mut out = Vec::new();
    // cusp
    let data = frobenius::cusp_data(&mode.q, &mode.r)?;
    let st = frobenius::classify(&data)?;
    out.push(PlaceReport {
        place: PlaceId::Infinity,
        exponents: st.exponents.clone(),
        classification: Some(st.tag),
    });
    let places: Vec<(PlaceId, Place, i64)> = {
        let mut v = Vec::new();
        if mode.inventory.ord_i > 0 {
            v.push((PlaceId::EllipticI, Place::I, mode.inventory.ord_i));
        }
        if mode.inventory.ord_rho > 0 {
            v.push((PlaceId::EllipticRho, Place::Rho, mode.inventory.ord_rho));
        }
        for (idx, (t, ord)) in mode.inventory.generic.iter().enumerate() {
            v.push((PlaceId::Generic(t.clone()), Place::Generic(idx), *ord));
        }
        v
    };
    for (pid, place, _ord) in places {
        let order = 40usize;
        let data = interior_data(mode, &place, order)?;
        let st = frobenius::classify(&data)?;
        out.push(PlaceReport {
            place: pid,
            exponents: st.exponents.clone(),
            classification: Some(st.tag),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::zpoly::ZPoly;

    fn one_series(order: i64) -> CSeries {
        CSeries::one_through(1, order)
    }

    #[test]
    fn log_powers_are_annihilated_by_dq_cubed() {
        // inputs (1, Z, Z^2): Q = R = 0.
        let n = 12;
        let one = one_series(n);
        let zero = CSeries::zero_through(1, n);
        let sols = [
            ZPoly::new(vec![one.clone()]),
            ZPoly::new(vec![zero.clone(), one.clone()]),
            ZPoly::new(vec![zero.clone(), zero.clone(), one.clone()]),
        ];
        let (q, r, _w) = annihilator(&sols).unwrap();
        assert!(q.is_zero_through_valid());
        assert!(r.is_zero_through_valid());
    }

    #[test]
    fn dependent_inputs_rejected() {
        let n = 8;
        let one = one_series(n);
        let sols = [
            ZPoly::new(vec![one.clone()]),
            ZPoly::new(vec![one.clone()]),
            ZPoly::new(vec![CSeries::zero_through(1, n), one.clone()]),
        ];
        assert!(matches!(annihilator(&sols), Err(Error::DependentInputs)));
    }

    #[test]
    fn extremal_mode_closed_forms_k0_mod4() {
        // k = 0 mod 4: Q = -(k^2/48) E4, R = -(k^3/864) E6.
        for k in [8i64, 12, 16] {
            let f = crate::quasi::extremal(k, 52).unwrap();
            let mode = mode_from_quasi(&f).unwrap();
            let order = mode.q.valid_num().min(30);
            let e4 = modforms::expand(ClassicalForm::E4, order);
            let e6 = modforms::expand(ClassicalForm::E6, order);
            let qe = e4.scale_rat(&Rat::new((-k * k).into(), 48.into()));
            let re = e6.scale_rat(&Rat::new((-k * k * k).into(), 864.into()));
            assert!(mode.q.eq_to_validity(&qe), "Q at k={k}");
            assert!(mode.r.eq_to_validity(&re), "R at k={k}");
            // closed-form fit sees the same values
            let a = mode.ansatz.as_ref().unwrap();
            assert_eq!(a.r_inf, Rat::new((-k * k).into(), 48.into()));
            assert_eq!(a.s_inf, Rat::new((-k * k * k).into(), 864.into()));
        }
    }

    #[test]
    fn common_delta_factor_is_invisible() {
        // dividing (f0, f1, f2) by a planted common Delta leaves (Q, R)
        // unchanged: plant the factor by multiplying instead.
        let f = crate::quasi::extremal(8, 56).unwrap();
        let delta = modforms::expand(ClassicalForm::Delta, 56);
        let g = crate::quasi::QuasiForm {
            weight: f.weight + 12,
            f0: f.f0.mul(&delta),
            f1: f.f1.mul(&delta),
            f2: f.f2.mul(&delta),
        };
        let m1 = mode_from_quasi(&f).unwrap();
        let m2 = mode_from_quasi(&g).unwrap();
        assert!(m1.q.eq_to_validity(&m2.q));
        assert!(m1.r.eq_to_validity(&m2.r));
    }
}
