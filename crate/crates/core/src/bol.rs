//! Bol representation data for SL(2,Z) MODEs: the multiplier F(z) and the
//! weight parameter ell, the irreducibility criterion from the exponents at
//! i, the closed-form matrices with their eigenvalue cross-checks, and the
//! quasimodular recovery of F times the distinguished solution.

use num::{One, Zero};

use crate::algebra::coeff::{rat, rat_to_i64, ratq, Rat};
use crate::algebra::cpoly::CPoly;
use crate::algebra::linalg::{self, Solve};
use crate::frobenius::{self, CuspStructure, LocalExponents};
use crate::mode::ModeData;
use crate::modforms::{self, ClassicalForm};
use crate::{CSeries, Error, RatSeries, Result};

/// Reducibility tag of the representation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BolTag {
    Irreducible,
    Trivial,
}

/// Decide the tag from the exponents at i: the representation is
/// irreducible exactly when {3 kappa_i} = {0, 0, 1} mod 2; the only other
/// case allowed by the exponent sum is {1, 1, 1}, which is trivial.
pub fn classify_bol(kappa_i: &LocalExponents) -> Result<BolTag> {
    let mut parities = Vec::new();
    for k in kappa_i.as_array() {
        let three_k = &k * rat(3);
        let v = rat_to_i64(&three_k).ok_or_else(|| {
            Error::BadExponents(format!("3*kappa_i = {three_k} is not an integer"))
        })?;
        parities.push(v.rem_euclid(2));
    }
    parities.sort();
    match parities.as_slice() {
        [0, 0, 1] => Ok(BolTag::Irreducible),
        [1, 1, 1] => Ok(BolTag::Trivial),
        other => Err(Error::BadExponents(format!(
            "parities {other:?} at i are impossible when the exponents sum to 3"
        ))),
    }
}

/// Twelfth root of unity as an exponent modulo 12 (zeta = e^{2 pi i/12}).
pub type Root12 = u8;

fn root12(n: i64) -> Root12 {
    n.rem_euclid(12) as u8
}

/// The representation data: ell, tag, the canonical matrices, and the
/// eigenvalue multisets (as exponents of e^{2 pi i/12}).
#[derive(Clone, Debug)]
pub struct BolData {
    pub ell: i64,
    pub tag: BolTag,
    pub s_hat: [[Rat; 3]; 3],
    pub r_hat: [[Rat; 3]; 3],
    pub t_hat: [[Rat; 3]; 3],
    pub s_eigenvalues: [Root12; 3],
    pub r_eigenvalues: [Root12; 3],
}

fn mat_mul(a: &[[Rat; 3]; 3], b: &[[Rat; 3]; 3]) -> [[Rat; 3]; 3] {
    let mut out: [[Rat; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Rat::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += &a[i][k] * &bk[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_identity() -> [[Rat; 3]; 3] {
    let mut m: [[Rat; 3]; 3] = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn mat_det(a: &[[Rat; 3]; 3]) -> Rat {
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

/// Eigenvalues per the exponent lemma: for R-hat they are
/// e^{-pi i (ell + 2 kappa)/3} and for S-hat i^{-ell - 2 kappa}, with kappa
/// running over the exponent differences at rho resp. i.
pub fn lemma_eigenvalues(
    ell: i64,
    kappa_rho: &LocalExponents,
    kappa_i: &LocalExponents,
) -> Result<([Root12; 3], [Root12; 3])> {
    let diffs = |e: &LocalExponents| -> Vec<Rat> {
        vec![
            Rat::zero(),
            &e.k2 - &e.k1,
            &e.k3 - &e.k1,
        ]
    };
    let mut r_eigs = Vec::new();
    for k in diffs(kappa_rho) {
        // e^{-pi i (ell + 2k)/3} = zeta12^{-2(ell + 2k)}
        let two_k = rat_to_i64(&(&k * rat(2)))
            .ok_or_else(|| Error::BadExponents("rho differences must be integers".into()))?;
        r_eigs.push(root12(-2 * (ell + two_k)));
    }
    let mut s_eigs = Vec::new();
    for k in diffs(kappa_i) {
        // i^{-ell-2k} = zeta12^{3(-ell-2k)}
        let two_k = rat_to_i64(&(&k * rat(2)))
            .ok_or_else(|| Error::BadExponents("i differences must be integers".into()))?;
        s_eigs.push(root12(3 * (-ell - two_k)));
    }
    r_eigs.sort_unstable();
    s_eigs.sort_unstable();
    Ok((
        [s_eigs[0], s_eigs[1], s_eigs[2]],
        [r_eigs[0], r_eigs[1], r_eigs[2]],
    ))
}

/// The canonical matrices with lambda = 2, cross-checked against the
/// eigenvalue lemma; for the trivial tag all three are the identity.
pub fn canonical_matrices(
    tag: BolTag,
    ell: i64,
    kappa_rho: &LocalExponents,
    kappa_i: &LocalExponents,
) -> Result<BolData> {
    let (s_hat, r_hat) = match tag {
        BolTag::Irreducible => {
            let m = |rows: [[i64; 3]; 3]| -> [[Rat; 3]; 3] {
                rows.map(|r| r.map(rat))
            };
            (
                m([[0, 0, 1], [2, -1, 2], [1, 0, 0]]),
                m([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
            )
        }
        BolTag::Trivial => (mat_identity(), mat_identity()),
    };
    let t_hat = mat_mul(&s_hat, &r_hat);
    // Group relations and determinants.
    let id = mat_identity();
    if mat_mul(&s_hat, &s_hat) != id {
        return Err(Error::EigenvalueMismatch("S^2 != I".into()));
    }
    let r2 = mat_mul(&r_hat, &r_hat);
    if mat_mul(&r2, &r_hat) != id {
        return Err(Error::EigenvalueMismatch("R^3 != I".into()));
    }
    for (name, m) in [("S", &s_hat), ("R", &r_hat), ("T", &t_hat)] {
        if mat_det(m) != Rat::one() {
            return Err(Error::EigenvalueMismatch(format!("det {name} != 1")));
        }
    }
    let (s_eigenvalues, r_eigenvalues) = lemma_eigenvalues(ell, kappa_rho, kappa_i)?;
    // Spectra of the canonical matrices: S-hat has {1, -1, -1} in the
    // irreducible case, R-hat is the 3-cycle with {1, w, w^2}.
    let (s_expected, r_expected): ([Root12; 3], [Root12; 3]) = match tag {
        BolTag::Irreducible => ([0, 6, 6], [0, 4, 8]),
        BolTag::Trivial => ([0, 0, 0], [0, 0, 0]),
    };
    if s_eigenvalues != s_expected {
        return Err(Error::EigenvalueMismatch(format!(
            "lemma spectrum {s_eigenvalues:?} for S differs from the matrix spectrum {s_expected:?}"
        )));
    }
    if r_eigenvalues != r_expected {
        return Err(Error::EigenvalueMismatch(format!(
            "lemma spectrum {r_eigenvalues:?} for R differs from the matrix spectrum {r_expected:?}"
        )));
    }
    Ok(BolData {
        ell,
        tag,
        s_hat,
        r_hat,
        t_hat,
        s_eigenvalues,
        r_eigenvalues,
    })
}

/// The multiplier F = Delta^{-k_inf} E4^{-k_rho} E6^{-k_i} prod F_j^{-k_j}
/// as a unit-normalized expansion, the discarded scale as (base, exponent)
/// pairs, and ell.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub series: RatSeries,
    /// product over (rational base, rational exponent) of discarded scales
    pub scale: Vec<(Rat, Rat)>,
    pub ell: i64,
}

pub fn multiplier_f(
    kappa1_inf: &Rat,
    kappa1_rho: &Rat,
    kappa1_i: &Rat,
    generic: &[(Rat, Rat)], // (t_j, kappa1_j)
    order: i64,
) -> Result<Multiplier> {
    if !kappa1_rho.denom().is_one() {
        return Err(Error::NonIntegralRho(kappa1_rho.clone()));
    }
    let ell_rat = rat(-2)
        - rat(12) * kappa1_inf
        - rat(4) * kappa1_rho
        - rat(6) * kappa1_i
        - generic
            .iter()
            .fold(Rat::zero(), |acc, (_, k)| acc + rat(12) * k);
    let ell = rat_to_i64(&ell_rat)
        .ok_or_else(|| Error::BadExponents(format!("ell = {ell_rat} is not an integer")))?;
    if ell % 2 != 0 {
        return Err(Error::BadExponents(format!("ell = {ell} is odd")));
    }
    let delta = modforms::expand(ClassicalForm::Delta, order);
    let e4 = modforms::expand(ClassicalForm::E4, order);
    let e6 = modforms::expand(ClassicalForm::E6, order);
    let mut f = delta.pow_rat(&-kappa1_inf.clone())?;
    f = f.mul(&e4.pow_rat(&-kappa1_rho.clone())?);
    f = f.mul(&e6.pow_rat(&-kappa1_i.clone())?);
    let mut scale = Vec::new();
    for (t, k) in generic {
        let fj = e4.pow_int(3).sub(&e6.pow_int(2).scale_rat(t));
        // unit-normalize: F_j = (1 - t)(1 + ...) at the cusp
        let lead = fj.coeff_int(0);
        if lead.is_zero() {
            return Err(Error::Invalid(format!("t = {t} degenerates F_t")));
        }
        scale.push((lead.clone(), -k.clone()));
        let unit = fj.scale_rat(&lead.recip());
        f = f.mul(&unit.pow_rat(&-k.clone())?);
    }
    Ok(Multiplier {
        series: f,
        scale,
        ell,
    })
}

/// Recovered quasimodular data: m0, m1, m2 with certified weights
/// ell + 2, ell, ell - 2 (over Q[c], carrying c^0, c^1, c^2), and the
/// correction coefficients (nu, mu) that pinned the cusp basis.
#[derive(Clone, Debug)]
pub struct Recovered {
    pub m0: CSeries,
    pub m1: CSeries,
    pub m2: CSeries,
    pub nu: Rat,
    pub mu: Rat,
}

impl Recovered {
    /// Rational parts: m2 = c^2 m2_rat, m1 = c m1_rat, m0 = m0_rat.
    pub fn rational_parts(&self) -> (RatSeries, RatSeries, RatSeries) {
        (
            self.m0.map(|c| c.coeff(0)),
            self.m1.map(|c| c.coeff(1)),
            self.m2.map(|c| c.coeff(2)),
        )
    }
}

/// Recover the quasimodular form F y_+ = m0 + (1/(6c)) m1 E2 +
/// (1/(6c))^2 m2 E2^2 from the cusp basis, solving the exact linear system
/// in the basis-ambiguity corrections (nu, mu) and membership coordinates.
pub fn recover_quasimodular(mode: &ModeData, f: &Multiplier) -> Result<Recovered> {
    let ell = f.ell;
    let (st, cusp) = frobenius::cusp_basis(&mode.q, &mode.r)?;
    let CuspStructure::MaximallyUnipotent {
        y_plus,
        eta1,
        eta2,
        eta3,
    } = cusp
    else {
        return Err(Error::CertificationFailed(
            "mode is not maximally unipotent at the cusp".into(),
        ));
    };
    let _st = st;
    // Rational carriers: eta1 = (c/2) e1, eta2 = (c/2)^2 e0, eta3 = (c/2) e3.
    let e1 = eta1.map(|c| c.coeff(1)).scale_rat(&rat(2));
    let e0 = eta2.map(|c| c.coeff(2)).scale_rat(&rat(4));
    let e3 = eta3.map(|c| c.coeff(1)).scale_rat(&rat(2));
    let fs = &f.series;
    // Corrections: with nu = (c/2) nb and mu = (c/2)^2 mb,
    //   M2 = F (e0 + nb e3 + mb y+)/4      in M_{ell-2}
    //   M1 = M1s - M2 E2 / 3               in M_{ell},  M1s = F (e1 + nb y+)/2
    //   M0 = F y+ + M2 E2^2/36 - M1s E2/6  in M_{ell+2}
    // all linear in (nb, mb) and the membership coordinates.
    let f_e0 = fs.mul(&e0).scale_rat(&ratq(1, 4));
    let f_e3 = fs.mul(&e3).scale_rat(&ratq(1, 4));
    let f_yp = fs.mul(&y_plus);
    let f_e1 = fs.mul(&e1).scale_rat(&ratq(1, 2));
    for s in [&f_e0, &f_e3, &f_yp, &f_e1] {
        if integerize(s).is_none() {
            return Err(Error::CertificationFailed(
                "fractional exponents survive in F times the cusp data".into(),
            ));
        }
    }
    let f_e0 = integerize(&f_e0).unwrap();
    let f_e3 = integerize(&f_e3).unwrap();
    let f_yp = integerize(&f_yp).unwrap();
    let f_e1 = integerize(&f_e1).unwrap();
    let order = f_e0
        .valid_num()
        .min(f_e3.valid_num())
        .min(f_yp.valid_num())
        .min(f_e1.valid_num())
        - 2;
    if order < 4 {
        return Err(Error::InsufficientOrder { needed: rat(8) });
    }
    let e2 = modforms::expand(ClassicalForm::E2, order + 2);
    let e2sq = e2.mul(&e2);
    // Unknowns: nb, mb, then coordinates of M2, M1, M0 in their bases.
    let b2 = modforms::basis(ell - 2, order);
    let b1 = modforms::basis(ell, order);
    let b0 = modforms::basis(ell + 2, order);
    let nunk = 2 + b2.len() + b1.len() + b0.len();
    let lo = low_exp(&[&f_e0, &f_e3, &f_yp, &f_e1]).min(0);
    let rows_per = (order - lo + 1) as usize;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(3 * rows_per);
    let mut rhs: Vec<Rat> = Vec::with_capacity(3 * rows_per);
    let zero_row = vec![Rat::zero(); nunk];
    // (C2): F e0/4 + nb F e3/4 + mb F y+/4 - sum u_d B2_d = 0
    for n in lo..=order {
        let mut row = zero_row.clone();
        row[0] = f_e3.coeff_checked(n);
        row[1] = f_yp.coeff_checked(n) * ratq(1, 4);
        for (d, b) in b2.iter().enumerate() {
            row[2 + d] = -b.coeff_checked(n);
        }
        rows.push(row);
        rhs.push(-f_e0.coeff_checked(n));
    }
    // (C1): F e1/2 + nb F y+/2 - M2 E2/3 - sum v B1 = 0, with
    // M2 = sum u_d B2_d substituted: -(1/3) sum u_d (B2_d E2).
    let b2e2: Vec<RatSeries> = b2.iter().map(|b| b.mul(&e2)).collect();
    for n in lo..=order {
        let mut row = zero_row.clone();
        row[0] = f_yp.coeff_checked(n) * ratq(1, 2);
        for (d, be) in b2e2.iter().enumerate() {
            row[2 + d] = -be.coeff_checked(n) * ratq(1, 3);
        }
        for (d, b) in b1.iter().enumerate() {
            row[2 + b2.len() + d] = -b.coeff_checked(n);
        }
        rows.push(row);
        rhs.push(-f_e1.coeff_checked(n));
    }
    // (C0): F y+ + M2 E2^2/36 - M1s E2/6 - sum w B0 = 0 where
    // M1s = F e1/2 + nb F y+/2.
    let b2e2sq: Vec<RatSeries> = b2.iter().map(|b| b.mul(&e2sq)).collect();
    let f_e1_e2 = f_e1.mul(&e2);
    let f_yp_e2 = f_yp.mul(&e2);
    for n in lo..=order {
        let mut row = zero_row.clone();
        row[0] = -f_yp_e2.coeff_checked(n) * ratq(1, 12);
        for (d, be) in b2e2sq.iter().enumerate() {
            row[2 + d] = be.coeff_checked(n) * ratq(1, 36);
        }
        for (d, b) in b0.iter().enumerate() {
            row[2 + b2.len() + b1.len() + d] = -b.coeff_checked(n);
        }
        rows.push(row);
        rhs.push(-f_yp.coeff_checked(n) + f_e1_e2.coeff_checked(n) * ratq(1, 6));
    }
    let sol = match linalg::solve(rows, rhs) {
        Solve::Unique(x) => x,
        Solve::Inconsistent(_) => {
            return Err(Error::CertificationFailed(
                "modularity certification failed: the correction system is inconsistent".into(),
            ))
        }
        Solve::Underdetermined(d) => return Err(Error::AmbiguousRecovery(d)),
    };
    let nb = sol[0].clone();
    let mb = sol[1].clone();
    // Assemble the certified series.
    let m2_rat = f_e0
        .add(&f_e3.scale_rat(&nb))
        .add(&f_yp.scale_rat(&(&mb * ratq(1, 4))));
    let m1s = f_e1.add(&f_yp.scale_rat(&(&nb * ratq(1, 2))));
    let m1_rat = m1s.sub(&m2_rat.mul(&e2).scale_rat(&ratq(1, 3)));
    let m0_rat = f_yp
        .add(&m2_rat.mul(&e2sq).scale_rat(&ratq(1, 36)))
        .sub(&m1s.mul(&e2).scale_rat(&ratq(1, 6)));
    // Certificate: reassembling with E2 reproduces F y+ exactly.
    let recon = m0_rat
        .add(&m1_rat.mul(&e2).scale_rat(&ratq(1, 6)))
        .add(&m2_rat.mul(&e2sq).scale_rat(&ratq(1, 36)));
    if !recon.eq_to_validity(&f_yp.truncate_num(recon.valid_num().min(f_yp.valid_num()))) {
        return Err(Error::CertificationFailed(
            "reassembly does not reproduce F y_+".into(),
        ));
    }
    Ok(Recovered {
        m0: m0_rat.map(|r| CPoly::constant(r.clone())),
        m1: m1_rat.map(|r| CPoly::monomial(r.clone(), 1)),
        m2: m2_rat.map(|r| CPoly::monomial(r.clone(), 2)),
        nu: nb,
        mu: mb,
    })
}

/// For the trivial tag: certify F y in M_ell for the three log-free cusp
/// solutions; returns the membership coordinates.
pub fn certify_trivial(mode: &ModeData, f: &Multiplier) -> Result<Vec<Vec<Rat>>> {
    let (_, cusp) = frobenius::cusp_basis(&mode.q, &mode.r)?;
    let CuspStructure::LogFree { sols } = cusp else {
        return Err(Error::CertificationFailed(
            "mode is not apparent at the cusp".into(),
        ));
    };
    let mut out = Vec::new();
    for y in &sols {
        let fy = f.series.mul(y);
        let fy = integerize(&fy).ok_or_else(|| {
            Error::CertificationFailed("F y has fractional exponents".into())
        })?;
        let coords = modforms::membership(&fy, f.ell, None)
            .map_err(|e| Error::NotModular(e.first_mismatch))?;
        out.push(coords);
    }
    Ok(out)
}

/// Drop exact-zero off-grid coefficients so the series lives on integer
/// exponents; None if a nonzero fractional-exponent coefficient exists.
fn integerize(s: &RatSeries) -> Option<RatSeries> {
    let den = s.den() as i64;
    if den == 1 {
        return Some(s.clone());
    }
    let mut coeffs = Vec::new();
    let mut start = None;
    for (i, c) in s.coeffs().iter().enumerate() {
        let num = s.start_num() + i as i64;
        if num.rem_euclid(den) == 0 {
            if start.is_none() {
                start = Some(num / den);
            }
            coeffs.push(c.clone());
        } else if !c.is_zero() {
            return None;
        }
    }
    let start = start?;
    Some(RatSeries::new(1, start, coeffs))
}

trait CoeffChecked {
    fn coeff_checked(&self, n: i64) -> Rat;
}

impl CoeffChecked for RatSeries {
    fn coeff_checked(&self, n: i64) -> Rat {
        let num = n * self.den() as i64;
        if num > self.valid_num() {
            Rat::zero()
        } else {
            self.coeff_num(num)
        }
    }
}

fn low_exp(series: &[&RatSeries]) -> i64 {
    series
        .iter()
        .filter_map(|s| s.ord())
        .filter_map(|e| rat_to_i64(&e.floor()))
        .min()
        .unwrap_or(0)
}
