//! Frobenius analysis at a regular singular point with integer exponent
//! differences: indicial equations, the R_n(alpha) recursion, the nine-way
//! solution-structure classification, and explicit local bases with log
//! terms. The same engine serves interior points (derivative d/dx) and the
//! cusp (derivative q d/dq); only the indicial cubic differs.

use num::{One, Signed, Zero};

use crate::algebra::coeff::{rat, Coeff, Rat};
use crate::algebra::cpoly::CPoly;
use crate::algebra::jet::Jet3;
use crate::{CSeries, Error, QSeries, RatSeries, Result};

/// Which derivative the local equation is written in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PointKind {
    /// d^3/dx^3 y + A(x) y' + B(x) y, indicial s(s-1)(s-2) + a_{-2} s + b_{-3}.
    Interior,
    /// (q d/dq)^3 y + A(q) (q d/dq) y + B(q) y, indicial s^3 + a_{-2} s + b_{-3}.
    Cusp,
}

/// Laurent data of the local equation: `a[i]` is the coefficient of
/// x^{i-2} in A and `b[i]` the coefficient of x^{i-3} in B (for the cusp,
/// equivalently the plain q-expansions of A and B).
#[derive(Clone, Debug)]
pub struct LaurentData<F> {
    pub kind: PointKind,
    pub a: Vec<F>,
    pub b: Vec<F>,
}

impl<F: Coeff> LaurentData<F> {
    pub fn new(kind: PointKind, a: Vec<F>, b: Vec<F>) -> Self {
        assert!(!a.is_empty() && !b.is_empty());
        LaurentData { kind, a, b }
    }

    /// Largest n for which the recursion tail is fully determined.
    pub fn n_max(&self) -> usize {
        self.a.len().min(self.b.len()) - 1
    }

    pub fn a_coeff(&self, n: i64) -> F {
        let i = n + 2;
        if i < 0 || i as usize >= self.a.len() {
            F::zero()
        } else {
            self.a[i as usize].clone()
        }
    }

    pub fn b_coeff(&self, n: i64) -> F {
        let i = n + 3;
        if i < 0 || i as usize >= self.b.len() {
            F::zero()
        } else {
            self.b[i as usize].clone()
        }
    }

    /// Indicial cubic, ascending coefficients [c0, c1, c2, c3].
    pub fn indicial_cubic(&self) -> [F; 4] {
        let a2 = self.a[0].clone();
        let b3 = self.b[0].clone();
        match self.kind {
            PointKind::Interior => [
                b3,
                F::from_rat(&rat(2)) + a2,
                F::from_rat(&rat(-3)),
                F::one(),
            ],
            PointKind::Cusp => [b3, a2, F::zero(), F::one()],
        }
    }

    pub fn map<G: Coeff>(&self, f: impl Fn(&F) -> G) -> LaurentData<G> {
        LaurentData {
            kind: self.kind,
            a: self.a.iter().map(&f).collect(),
            b: self.b.iter().map(&f).collect(),
        }
    }
}

pub fn eval_cubic<F: Coeff>(c: &[F; 4], s: &F) -> F {
    let mut acc = c[3].clone();
    for i in (0..3).rev() {
        acc = acc * s.clone() + c[i].clone();
    }
    acc
}

fn cubic_d1(c: &[Rat; 4], s: &Rat) -> Rat {
    // 3 c3 s^2 + 2 c2 s + c1
    &c[3] * rat(3) * s * s + &c[2] * rat(2) * s + &c[1]
}

fn cubic_d2(c: &[Rat; 4], s: &Rat) -> Rat {
    &c[3] * rat(6) * s + &c[2] * rat(2)
}

/// Ordered local exponents with integer differences.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalExponents {
    pub k1: Rat,
    pub k2: Rat,
    pub k3: Rat,
}

impl LocalExponents {
    pub fn new(mut ks: [Rat; 3]) -> Result<Self> {
        ks.sort();
        let [k1, k2, k3] = ks;
        let d1 = &k2 - &k1;
        let d2 = &k3 - &k2;
        if !d1.denom().is_one() || !d2.denom().is_one() {
            return Err(Error::UnsupportedExponents(format!(
                "exponent differences {d1}, {d2} are not integers"
            )));
        }
        Ok(LocalExponents { k1, k2, k3 })
    }

    /// kappa_2 - kappa_1 (always a nonnegative integer here).
    pub fn diff1(&self) -> i64 {
        crate::algebra::coeff::rat_to_i64(&(&self.k2 - &self.k1)).unwrap()
    }

    /// kappa_3 - kappa_2.
    pub fn diff2(&self) -> i64 {
        crate::algebra::coeff::rat_to_i64(&(&self.k3 - &self.k2)).unwrap()
    }

    pub fn sum(&self) -> Rat {
        &self.k1 + &self.k2 + &self.k3
    }

    pub fn as_array(&self) -> [Rat; 3] {
        [self.k1.clone(), self.k2.clone(), self.k3.clone()]
    }

    /// Common denominator of the exponents (the q^{1/N} grid they live on).
    pub fn grid_den(&self) -> u32 {
        let l = num::integer::lcm(
            i64::try_from(self.k1.denom().clone()).unwrap(),
            i64::try_from(self.k3.denom().clone()).unwrap(),
        );
        l as u32
    }
}

/// Indicial polynomial and its root multiset when supported.
#[derive(Debug)]
pub struct Indicial {
    pub cubic: [Rat; 4],
    pub exponents: Result<LocalExponents>,
}

/// Roots of the indicial cubic; only configurations with all roots in
/// (1/3)Z and integer differences are supported (the standing assumptions).
pub fn indicial(data: &LaurentData<Rat>) -> Indicial {
    let cubic = data.indicial_cubic();
    let exponents = indicial_roots(&cubic);
    Indicial { cubic, exponents }
}

fn indicial_roots(cubic: &[Rat; 4]) -> Result<LocalExponents> {
    let vec: Vec<Rat> = cubic.to_vec();
    let (roots, rest) = crate::modforms::rational_roots(&vec);
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    if total < 3 || rest.len() > 1 {
        return Err(Error::UnsupportedExponents(
            "indicial roots are not all rational".into(),
        ));
    }
    let mut flat = Vec::new();
    for (r, m) in roots {
        if crate::algebra::coeff::rat_to_i64(&(&r * rat(3))).is_none() {
            return Err(Error::UnsupportedExponents(format!(
                "root {r} is not in (1/3)Z"
            )));
        }
        for _ in 0..m {
            flat.push(r.clone());
        }
    }
    LocalExponents::new([flat[0].clone(), flat[1].clone(), flat[2].clone()])
}

/// One run of the Frobenius recursion at a fixed exponent.
#[derive(Clone, Debug)]
pub struct FrobeniusRun<F> {
    /// c_0..c_{n_max}; resonance slots hold the chosen values.
    pub c: Vec<F>,
    /// (n', R_{n'}) for each resonance index, in increasing n'.
    pub obstructions: Vec<(usize, F)>,
}

/// Solve f(alpha+n) c_n = -sum_{k<n} [(alpha+k) a_{n-k-2} + b_{n-k-3}] c_k.
/// Where f(alpha+n) is not invertible the obstruction value (the tail sum)
/// is recorded and the slot is filled from `choices` (default 0). Passing a
/// jet alpha = kappa + eps computes exact alpha-derivatives alongside.
pub fn run_recursion<F: Coeff>(
    data: &LaurentData<F>,
    alpha: &F,
    choices: &[F],
    n_max: usize,
) -> Result<FrobeniusRun<F>> {
    if n_max > data.n_max() {
        return Err(Error::RecursionCap(n_max, data.n_max()));
    }
    let cubic = data.indicial_cubic();
    let mut c: Vec<F> = vec![F::one()];
    let mut obstructions = Vec::new();
    let mut choice_iter = choices.iter();
    for n in 1..=n_max {
        let mut tail = F::zero();
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let ak = data.a[n - k].clone();
            let bk = data.b[n - k].clone();
            if ak.is_zero() && bk.is_zero() {
                continue;
            }
            let factor = (alpha.clone() + F::from_rat(&rat(k as i64))) * ak + bk;
            tail = tail + factor * ck.clone();
        }
        let fan = eval_cubic(&cubic, &(alpha.clone() + F::from_rat(&rat(n as i64))));
        match fan.try_inv() {
            Some(inv) => c.push(-(tail * inv)),
            None => {
                obstructions.push((n, tail));
                c.push(choice_iter.next().cloned().unwrap_or_else(F::zero));
            }
        }
    }
    Ok(FrobeniusRun { c, obstructions })
}

/// Polynomial of degree <= 2 in the formal logarithm (ln x at interior
/// points, ln q at the cusp) with series coefficients.
#[derive(Clone, PartialEq)]
pub struct LogSeries<R> {
    /// parts[k] multiplies Lambda^k.
    pub parts: Vec<QSeries<R>>,
}

impl<R: Coeff> std::fmt::Debug for LogSeries<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, p) in self.parts.iter().enumerate().rev() {
            writeln!(f, "L^{k}: {:?}", p)?;
        }
        Ok(())
    }
}

impl<R: Coeff> LogSeries<R> {
    pub fn plain(s: QSeries<R>) -> Self {
        LogSeries { parts: vec![s] }
    }

    pub fn new(parts: Vec<QSeries<R>>) -> Self {
        assert!(!parts.is_empty() && parts.len() <= 3);
        LogSeries { parts }
    }

    pub fn log_degree(&self) -> usize {
        (0..self.parts.len())
            .rev()
            .find(|&k| !self.parts[k].is_zero_through_valid())
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.parts.len().max(rhs.parts.len());
        let mut parts = Vec::with_capacity(n);
        for k in 0..n {
            parts.push(match (self.parts.get(k), rhs.parts.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        LogSeries { parts }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|s| s.scale_rat(r)).collect(),
        }
    }

    pub fn mul_series(&self, s: &QSeries<R>) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.mul(s)).collect(),
        }
    }

    pub fn is_zero_through_valid(&self) -> bool {
        self.parts.iter().all(|s| s.is_zero_through_valid())
    }
}

/// Interior derivative d/dx with d(Lambda)/dx = 1/x, or cusp derivative
/// q d/dq with (q d/dq) Lambda = 1.
fn log_derivative(kind: PointKind, y: &LogSeries<Rat>) -> LogSeries<Rat> {
    let deriv = |s: &RatSeries| -> RatSeries {
        match kind {
            PointKind::Interior => s.dq().shift_num(-(s.den() as i64)),
            PointKind::Cusp => s.dq(),
        }
    };
    let lower = |s: &RatSeries| -> RatSeries {
        match kind {
            PointKind::Interior => s.shift_num(-(s.den() as i64)),
            PointKind::Cusp => s.clone(),
        }
    };
    let mut parts: Vec<RatSeries> = y.parts.iter().map(deriv).collect();
    for k in 1..y.parts.len() {
        let t = lower(&y.parts[k]).scale_rat(&rat(k as i64));
        parts[k - 1] = parts[k - 1].add(&t);
    }
    LogSeries { parts }
}

/// Apply the local operator to a candidate solution; the oracle for every
/// basis the classification produces.
pub fn apply_operator(data: &LaurentData<Rat>, y: &LogSeries<Rat>) -> LogSeries<Rat> {
    let (a_series, b_series) = match data.kind {
        PointKind::Interior => (
            RatSeries::new(1, -2, data.a.clone()),
            RatSeries::new(1, -3, data.b.clone()),
        ),
        PointKind::Cusp => (
            RatSeries::new(1, 0, data.a.clone()),
            RatSeries::new(1, 0, data.b.clone()),
        ),
    };
    let d1 = log_derivative(data.kind, y);
    let d2 = log_derivative(data.kind, &d1);
    let d3 = log_derivative(data.kind, &d2);
    d3.add(&d1.mul_series(&a_series))
        .add(&y.mul_series(&b_series))
}

/// Apparent / not apparent / completely not apparent at the point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Apparentness {
    Apparent,
    NotApparent,
    CompletelyNotApparent,
}

/// Obstruction value that decided (part of) a classification.
#[derive(Clone, Debug)]
pub struct ObstructionWitness {
    /// resonance index n'
    pub at: usize,
    /// the exponent the run started from
    pub alpha: Rat,
    pub value: Rat,
}

/// Classification outcome: exponents, tag, an explicit basis (ordered with
/// the log-free kappa_3 solution first), and the R-values that decided it.
#[derive(Clone, Debug)]
pub struct LocalStructure {
    pub exponents: LocalExponents,
    pub tag: Apparentness,
    pub basis: [LogSeries<Rat>; 3],
    pub witness: Vec<ObstructionWitness>,
}

/// x^{kappa} sum c_n x^n laid out on the q^{1/den} grid (the intermediate
/// grid positions are exact zeros).
fn series_from_values(kappa: &Rat, c: &[Rat], den: u32) -> RatSeries {
    let scaled = kappa * rat(den as i64);
    assert!(scaled.denom().is_one(), "exponent off the chosen grid");
    let start = i64::try_from(scaled.numer().clone()).unwrap();
    let len = (c.len() - 1) * den as usize + 1;
    let mut coeffs = vec![Rat::zero(); len];
    for (n, v) in c.iter().enumerate() {
        coeffs[n * den as usize] = v.clone();
    }
    RatSeries::new(den, start, coeffs)
}

struct JetRun {
    val: Vec<Rat>,
    d1: Vec<Rat>,
    d2: Vec<Rat>,
    obstructions: Vec<(usize, Jet3<Rat>)>,
}

fn jet_run(data: &LaurentData<Rat>, kappa: &Rat, n_max: usize) -> Result<JetRun> {
    let jdata = data.map(|r| Jet3::constant(r.clone()));
    let alpha = Jet3::variable(kappa.clone());
    let run = run_recursion(&jdata, &alpha, &[], n_max)?;
    Ok(JetRun {
        val: run.c.iter().map(|j| j.value().clone()).collect(),
        d1: run.c.iter().map(|j| j.d1()).collect(),
        d2: run.c.iter().map(|j| j.d2()).collect(),
        obstructions: run.obstructions,
    })
}

/// Classify the singular point and assemble the local basis, per the
/// solution-structure theorems for third-order equations.
pub fn classify(data: &LaurentData<Rat>) -> Result<LocalStructure> {
    let ind = indicial(data);
    let exponents = ind.exponents?;
    classify_with_exponents(data, exponents)
}

pub fn classify_with_exponents(
    data: &LaurentData<Rat>,
    exponents: LocalExponents,
) -> Result<LocalStructure> {
    let cubic = &data.indicial_cubic();
    let m1 = exponents.diff1() as usize;
    let m2 = exponents.diff2() as usize;
    let n_max = data.n_max();
    if n_max < m1 + m2 + 1 {
        return Err(Error::InsufficientOrder {
            needed: rat((m1 + m2 + 1) as i64),
        });
    }
    let den = exponents.grid_den();
    let k1 = exponents.k1.clone();
    let k2 = exponents.k2.clone();
    let k3 = exponents.k3.clone();
    let f1 = |s: &Rat| cubic_d1(cubic, s);
    let f2 = |s: &Rat| cubic_d2(cubic, s);

    let r3 = jet_run(data, &k3, n_max)?;
    assert!(r3.obstructions.is_empty(), "top exponent cannot resonate");
    let y_plus = series_from_values(&k3, &r3.val, den);
    let y_plus_d = series_from_values(&k3, &r3.d1, den);
    let y_plus_dd = series_from_values(&k3, &r3.d2, den);
    let sol3 = LogSeries::plain(y_plus.clone());
    let mut witness = Vec::new();

    let structure = if m1 == 0 && m2 == 0 {
        // Triple exponent: y, dy/d-alpha, d2y/d-alpha2 are the basis.
        let second = LogSeries::new(vec![y_plus_d.clone(), y_plus.clone()]);
        let third = LogSeries::new(vec![
            y_plus_dd.clone(),
            y_plus_d.scale_rat(&rat(2)),
            y_plus.clone(),
        ]);
        LocalStructure {
            exponents,
            tag: Apparentness::CompletelyNotApparent,
            basis: [sol3, second, third],
            witness,
        }
    } else if m1 > 0 && m2 == 0 {
        // kappa_1 < kappa_2 = kappa_3.
        let second = LogSeries::new(vec![y_plus_d.clone(), y_plus.clone()]);
        let r1 = jet_run(data, &k1, n_max)?;
        let rm1 = r1.obstructions[0].1.value().clone();
        witness.push(ObstructionWitness {
            at: m1,
            alpha: k1.clone(),
            value: rm1.clone(),
        });
        let y1 = series_from_values(&k1, &r1.val, den);
        if rm1.is_zero() {
            LocalStructure {
                exponents,
                tag: Apparentness::NotApparent,
                basis: [sol3, second, LogSeries::plain(y1)],
                witness,
            }
        } else {
            let coef = f2(&k3) / &rm1;
            let third = LogSeries::new(vec![
                y_plus_dd.sub(&y1.scale_rat(&coef)),
                y_plus_d.scale_rat(&rat(2)),
                y_plus.clone(),
            ]);
            LocalStructure {
                exponents,
                tag: Apparentness::CompletelyNotApparent,
                basis: [sol3, second, third],
                witness,
            }
        }
    } else if m1 == 0 && m2 > 0 {
        // kappa_1 = kappa_2 < kappa_3.
        let r2 = jet_run(data, &k2, n_max)?;
        let (at, ref obs) = r2.obstructions[0];
        assert_eq!(at, m2);
        let rm2 = obs.value().clone();
        let rm2p = obs.d1();
        witness.push(ObstructionWitness {
            at: m2,
            alpha: k2.clone(),
            value: rm2.clone(),
        });
        let y2 = series_from_values(&k2, &r2.val, den);
        let y2_d = series_from_values(&k2, &r2.d1, den);
        if rm2.is_zero() {
            let second = LogSeries::plain(y2.clone());
            let coef = rm2p / f1(&k3);
            let third = LogSeries::new(vec![
                y2_d.sub(&y_plus_d.scale_rat(&coef)),
                y2.sub(&y_plus.scale_rat(&coef)),
            ]);
            LocalStructure {
                exponents,
                tag: Apparentness::NotApparent,
                basis: [sol3, second, third],
                witness,
            }
        } else {
            let c1 = f1(&k3) / &rm2;
            let second = LogSeries::new(vec![y_plus_d.sub(&y2.scale_rat(&c1)), y_plus.clone()]);
            let c2 = (f2(&k3) * &rm2 - f1(&k3) * rat(2) * &rm2p) / (&rm2 * &rm2);
            let third = LogSeries::new(vec![
                y_plus_dd
                    .sub(&y2_d.scale_rat(&(rat(2) * &c1)))
                    .sub(&y2.scale_rat(&c2)),
                y_plus_d.scale_rat(&rat(2)).sub(&y2.scale_rat(&(rat(2) * &c1))),
                y_plus.clone(),
            ]);
            LocalStructure {
                exponents,
                tag: Apparentness::CompletelyNotApparent,
                basis: [sol3, second, third],
                witness,
            }
        }
    } else {
        // kappa_1 < kappa_2 < kappa_3.
        let r2 = jet_run(data, &k2, n_max)?;
        let (at2, ref obs2) = r2.obstructions[0];
        assert_eq!(at2, m2);
        let rm2 = obs2.value().clone();
        let rm2p = obs2.d1();
        let r1 = jet_run(data, &k1, n_max)?;
        let rm1 = r1.obstructions[0].1.value().clone();
        let rm12 = r1.obstructions[1].1.value().clone();
        witness.push(ObstructionWitness {
            at: m2,
            alpha: k2.clone(),
            value: rm2.clone(),
        });
        witness.push(ObstructionWitness {
            at: m1,
            alpha: k1.clone(),
            value: rm1.clone(),
        });
        witness.push(ObstructionWitness {
            at: m1 + m2,
            alpha: k1.clone(),
            value: rm12.clone(),
        });
        let y2 = series_from_values(&k2, &r2.val, den);
        let y2_d = series_from_values(&k2, &r2.d1, den);
        let y1 = series_from_values(&k1, &r1.val, den);
        if rm2.is_zero() {
            let second = LogSeries::plain(y2.clone());
            if rm1.is_zero() && rm12.is_zero() {
                LocalStructure {
                    exponents,
                    tag: Apparentness::Apparent,
                    basis: [sol3, second, LogSeries::plain(y1)],
                    witness,
                }
            } else if rm1.is_zero() {
                let coef = f1(&k3) / &rm12;
                let third = LogSeries::new(vec![
                    y_plus_d.sub(&y1.scale_rat(&coef)),
                    y_plus.clone(),
                ]);
                LocalStructure {
                    exponents,
                    tag: Apparentness::NotApparent,
                    basis: [sol3, second, third],
                    witness,
                }
            } else {
                let ca = f1(&k2) / &rm1;
                let cb = (&rm1 * &rm2p - f1(&k2) * &rm12) / (f1(&k3) * &rm1);
                let third = LogSeries::new(vec![
                    y2_d.sub(&y1.scale_rat(&ca)).sub(&y_plus_d.scale_rat(&cb)),
                    y2.sub(&y_plus.scale_rat(&cb)),
                ]);
                LocalStructure {
                    exponents,
                    tag: Apparentness::NotApparent,
                    basis: [sol3, second, third],
                    witness,
                }
            }
        } else {
            let c1 = f1(&k3) / &rm2;
            let second = LogSeries::new(vec![y_plus_d.sub(&y2.scale_rat(&c1)), y_plus.clone()]);
            if rm1.is_zero() && rm12.is_zero() {
                LocalStructure {
                    exponents,
                    tag: Apparentness::NotApparent,
                    basis: [sol3, second, LogSeries::plain(y1)],
                    witness,
                }
            } else if rm1.is_zero() {
                let third = LogSeries::plain(y1.sub(&y2.scale_rat(&(&rm12 / &rm2))));
                LocalStructure {
                    exponents,
                    tag: Apparentness::NotApparent,
                    basis: [sol3, second, third],
                    witness,
                }
            } else {
                let big_c1 = f1(&k3) * rat(2) * f1(&k2) / (&rm2 * &rm1);
                let big_c2 = (f2(&k3) - f1(&k3) * rat(2) * &rm2p / &rm2
                    + f1(&k3) * rat(2) * f1(&k2) * &rm12 / (&rm2 * &rm1))
                    / &rm2;
                let third = LogSeries::new(vec![
                    y_plus_dd
                        .sub(&y2_d.scale_rat(&(rat(2) * f1(&k3) / &rm2)))
                        .add(&y1.scale_rat(&big_c1))
                        .sub(&y2.scale_rat(&big_c2)),
                    y_plus_d
                        .scale_rat(&rat(2))
                        .sub(&y2.scale_rat(&(rat(2) * f1(&k3) / &rm2))),
                    y_plus.clone(),
                ]);
                LocalStructure {
                    exponents,
                    tag: Apparentness::CompletelyNotApparent,
                    basis: [sol3, second, third],
                    witness,
                }
            }
        }
    };
    Ok(structure)
}

/// Cusp structure extracted from a classification, normalized for the
/// passage from ln q to z = (c/2) ln q.
#[derive(Clone, Debug)]
pub enum CuspStructure {
    /// Maximally unipotent: y_- = z^2 y_+ + z eta1 + eta2, y_perp =
    /// z y_+ + eta3, with the etas carrying their c-powers.
    MaximallyUnipotent {
        y_plus: RatSeries,
        eta1: CSeries,
        eta2: CSeries,
        eta3: CSeries,
    },
    /// A single-log point: returned without z^2-normalization.
    SingleLog,
    /// Apparent at the cusp: three log-free solutions, ascending exponent.
    LogFree { sols: [RatSeries; 3] },
}

/// Build the cusp Laurent data of D_q^3 y + Q D_q y + (1/2 D_q Q + R) y
/// from the q-expansions of Q and R (both holomorphic at the cusp).
pub fn cusp_data(q: &RatSeries, r: &RatSeries) -> Result<LaurentData<Rat>> {
    let b_series = q.dq().scale_rat(&crate::algebra::coeff::ratq(1, 2)).add(r);
    let take = |s: &RatSeries| -> Result<Vec<Rat>> {
        if s.den() != 1 {
            return Err(Error::Invalid(
                "cusp data needs integer-exponent expansions".into(),
            ));
        }
        if s.trimmed().ord().map(|e| e.is_negative()).unwrap_or(false) {
            return Err(Error::NotFuchsian {
                place: "infinity".into(),
                order: -s.trimmed().start_num(),
                generator: "Q/R expansion".into(),
            });
        }
        Ok((0..=s.valid_num()).map(|n| s.coeff_num(n)).collect())
    };
    Ok(LaurentData::new(PointKind::Cusp, take(q)?, take(&b_series)?))
}

/// Classify the cusp and, when it is maximally unipotent, rewrite the
/// Lambda-basis in the z-variable: y_- = (c/2)^2 (Lambda^2 y_+ + ...), so
/// eta1 = (c/2) E1 and eta2 = (c/2)^2 E0 pick up the recorded c-powers.
pub fn cusp_basis(q: &RatSeries, r: &RatSeries) -> Result<(LocalStructure, CuspStructure)> {
    let data = cusp_data(q, r)?;
    let st = classify(&data)?;
    let cs = match st.tag {
        Apparentness::Apparent => {
            let sols = [
                st.basis[2].parts[0].clone(),
                st.basis[1].parts[0].clone(),
                st.basis[0].parts[0].clone(),
            ];
            CuspStructure::LogFree { sols }
        }
        Apparentness::NotApparent => CuspStructure::SingleLog,
        Apparentness::CompletelyNotApparent => {
            let y_plus = st.basis[0].parts[0].clone();
            // the Lambda^2 element is the last basis entry in every branch
            let y_minus = &st.basis[2];
            assert_eq!(y_minus.parts.len(), 3);
            assert!(y_minus.parts[2].eq_to_validity(&y_plus));
            // the single-Lambda element
            let y_perp = &st.basis[1];
            assert!(y_perp.parts[1].eq_to_validity(&y_plus));
            let half_c = |p: i32| CPoly::monomial(crate::algebra::coeff::ratq(1, 1 << p), p);
            let eta1 = y_minus.parts[1].map(|v| CPoly::constant(v.clone())).scale(&half_c(1));
            let eta2 = y_minus.parts[0].map(|v| CPoly::constant(v.clone())).scale(&half_c(2));
            let eta3 = y_perp.parts[0].map(|v| CPoly::constant(v.clone())).scale(&half_c(1));
            CuspStructure::MaximallyUnipotent {
                y_plus,
                eta1,
                eta2,
                eta3,
            }
        }
    };
    Ok((st, cs))
}
