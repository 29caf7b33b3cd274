//! Apparentness polynomial systems for prescribed exponent data: fix the
//! indicial-determined ansatz parameters, then compute the obstruction
//! polynomials P_i and P_{z_j,k1,k2} in the remaining 3m+1 parameters, with
//! degree reports and exact candidate verification.

use num::{One, Zero};

use crate::algebra::coeff::{rat, rat_to_i64, Coeff, Rat};
use crate::algebra::frac::Frac;
use crate::algebra::mpoly::{MPoly, VarSet};
use crate::frobenius::{self, LocalExponents, PointKind};
use crate::taylor::{Ansatz, AnsatzPoint, Place, PointClass, SerreRing};
use crate::{Error, Result};

/// t-value of a generic singular point: exact rational or kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub enum TValue {
    Rational(Rat),
    Symbolic,
}

/// Prescribed exponent data at infinity, i, rho, and m generic points.
#[derive(Clone, Debug)]
pub struct ExponentSpec {
    pub infinity: LocalExponents,
    pub i: LocalExponents,
    pub rho: LocalExponents,
    pub points: Vec<(TValue, LocalExponents)>,
}

/// Congruence flags recorded at validation.
#[derive(Clone, Copy, Debug)]
pub struct SpecFlags {
    /// {3 kappa_i} = {0,0,1} mod 2
    pub i_parity_irreducible: bool,
    /// {kappa_rho} = {0,1,2} mod 3
    pub rho_difference: bool,
}

impl ExponentSpec {
    /// Check sums, integrality, orderings, and the degenerate t-values;
    /// returns which of the standing congruences hold.
    pub fn validate(&self) -> Result<SpecFlags> {
        let close = |e: &LocalExponents, sum: i64, what: &str| -> Result<()> {
            if e.sum() != rat(sum) {
                return Err(Error::BadExponents(format!(
                    "exponent sum at {what} must be {sum}, found {}",
                    e.sum()
                )));
            }
            Ok(())
        };
        close(&self.infinity, 0, "infinity")?;
        close(&self.i, 3, "i")?;
        close(&self.rho, 3, "rho")?;
        for (j, (_, e)) in self.points.iter().enumerate() {
            close(e, 3, &format!("z_{j}"))?;
            if e.diff1() == 0 || e.diff2() == 0 {
                return Err(Error::BadExponents(format!(
                    "exponents at z_{j} must be strictly increasing for apparentness"
                )));
            }
        }
        if self.i.diff1() == 0 || self.i.diff2() == 0 {
            return Err(Error::BadExponents(
                "exponents at i must be strictly increasing".into(),
            ));
        }
        if self.rho.diff1() == 0 || self.rho.diff2() == 0 {
            return Err(Error::BadExponents(
                "exponents at rho must be strictly increasing".into(),
            ));
        }
        for k in self.rho.as_array() {
            if !k.denom().is_one() {
                return Err(Error::NonIntegralRho(k));
            }
        }
        let mut seen = Vec::new();
        for (t, _) in &self.points {
            if let TValue::Rational(t) = t {
                if t.is_zero() || t == &rat(1) {
                    return Err(Error::BadExponents(format!(
                        "t = {t} collides with an elliptic point"
                    )));
                }
                if seen.contains(t) {
                    return Err(Error::BadExponents(format!("duplicate t = {t}")));
                }
                seen.push(t.clone());
            }
        }
        // congruence flags
        let mut i_par: Vec<i64> = self
            .i
            .as_array()
            .iter()
            .map(|k| rat_to_i64(&(k * rat(3))).map(|v| v.rem_euclid(2)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::BadExponents("3 kappa_i must be integers".into()))?;
        i_par.sort_unstable();
        let i_parity_irreducible = i_par == [0, 0, 1];
        let mut rho_res: Vec<i64> = self
            .rho
            .as_array()
            .iter()
            .map(|k| rat_to_i64(k).unwrap().rem_euclid(3))
            .collect();
        rho_res.sort_unstable();
        let rho_difference = rho_res == [0, 1, 2];
        Ok(SpecFlags {
            i_parity_irreducible,
            rho_difference,
        })
    }

    pub fn max_difference(&self) -> i64 {
        let d = |e: &LocalExponents| e.diff1() + e.diff2();
        let mut m = d(&self.infinity).max(d(&self.i)).max(d(&self.rho));
        for (_, e) in &self.points {
            m = m.max(d(e));
        }
        m
    }
}

/// Elementary symmetric values of an exponent triple.
fn sym(e: &LocalExponents) -> (Rat, Rat) {
    let [k1, k2, k3] = e.as_array();
    let e2 = &k1 * &k2 + &k1 * &k3 + &k2 * &k3;
    let e3 = &k1 * &k2 * &k3;
    (e2, e3)
}

/// Ansatz with the indicial-determined parameters fixed and the remaining
/// 3m+1 parameters symbolic; also records the free-variable names.
#[derive(Clone, Debug)]
pub struct AnsatzParams {
    pub ansatz: Ansatz,
    /// names of the free variables, in ring order
    pub free: Vec<String>,
    /// names (and indices) of symbolic t's
    pub t_syms: Vec<String>,
}

/// Fix r_inf, s_inf, r_i^(2), s_i^(3), r_rho^(2), s_rho^(3), r_{z_j}^(2),
/// s_{z_j}^(3) from the prescribed exponents; free: s_i^(1) and the
/// (r^(1), s^(2), s^(1)) of each generic point.
pub fn fix_indicial(spec: &ExponentSpec) -> Result<AnsatzParams> {
    spec.validate()?;
    // Build the ring: B, C, t-symbols for symbolic points, free parameters.
    let mut names: Vec<String> = vec!["B".into(), "C".into()];
    let mut t_syms = Vec::new();
    for (j, (t, _)) in spec.points.iter().enumerate() {
        if matches!(t, TValue::Symbolic) {
            let n = format!("t{}", j + 1);
            names.push(n.clone());
            t_syms.push(n);
        }
    }
    let mut free = vec!["s_i1".to_string()];
    names.push("s_i1".into());
    for j in 0..spec.points.len() {
        for base in ["r1", "s2", "s1"] {
            let n = format!("{base}_z{}", j + 1);
            names.push(n.clone());
            free.push(n);
        }
    }
    let vars = VarSet::new(names);
    let ring = SerreRing::new(vars.clone());
    let fvar = |n: &str| Frac::from_poly(MPoly::var(&vars, n));
    let frat = |r: &Rat| Frac::from_rat(r);

    // infinity: x^3 + r_inf x + s_inf = prod (x - kappa)
    let (e2, e3) = sym(&spec.infinity);
    let r_inf = e2;
    let s_inf = -e3;
    // i: x(x-1)(x-2) + 4 r x - 4 r - 8 s3
    let (e2, e3) = sym(&spec.i);
    let r_i2 = (&e2 - rat(2)) / rat(4);
    let s_i3 = (&e3 - (&e2 - rat(2))) / rat(8);
    // rho: x(x-1)(x-2) - 9 r x + 9 r + 27 s3
    let (e2, e3) = sym(&spec.rho);
    let r_rho2 = (rat(2) - &e2) / rat(9);
    let s_rho3 = (-&e3 - rat(9) * &r_rho2) / rat(27);
    // generic: x(x-1)(x-2) + (r/t) x - r/t + s/t^2
    let mut points = Vec::new();
    for (j, (t, e)) in spec.points.iter().enumerate() {
        let (e2, e3) = sym(e);
        let t_frac = match t {
            TValue::Rational(v) => frat(v),
            TValue::Symbolic => fvar(&format!("t{}", j + 1)),
        };
        let r2 = t_frac.clone() * frat(&(&e2 - rat(2)));
        let s3 = t_frac.clone() * t_frac.clone() * frat(&(&e2 - rat(2) - &e3));
        let pc = match t {
            TValue::Rational(v) => PointClass::GenericVal(v.clone()),
            TValue::Symbolic => {
                PointClass::GenericSym(vars.index_of(&format!("t{}", j + 1)).unwrap())
            }
        };
        points.push(AnsatzPoint {
            t: pc,
            r2,
            r1: fvar(&format!("r1_z{}", j + 1)),
            s3,
            s2: fvar(&format!("s2_z{}", j + 1)),
            s1: fvar(&format!("s1_z{}", j + 1)),
        });
    }
    let ansatz = Ansatz {
        ring,
        r_inf: frat(&r_inf),
        s_inf: frat(&s_inf),
        r_i2: frat(&r_i2),
        s_i3: frat(&s_i3),
        s_i1: fvar("s_i1"),
        r_rho2: frat(&r_rho2),
        s_rho3: frat(&s_rho3),
        points,
    };
    Ok(AnsatzParams {
        ansatz,
        free,
        t_syms,
    })
}

/// One obstruction polynomial P_{place,(k1,k2)}.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub place: Place,
    pub pair: (u8, u8),
    /// numerator polynomial of the obstruction (denominators are nonzero
    /// rationals, t-powers, and (t-1)/(t_j - t_l)-factors)
    pub poly: MPoly,
    pub identically_zero: bool,
}

/// The full apparentness system.
#[derive(Clone, Debug)]
pub struct ObstructionSystem {
    pub params: AnsatzParams,
    pub entries: Vec<Obstruction>,
}

/// Compute the obstruction polynomials at i, rho, and every generic point.
/// `cap` bounds the exponent differences (recursion depth).
pub fn obstruction_polynomials(
    spec: &ExponentSpec,
    params: &AnsatzParams,
    cap: usize,
) -> Result<ObstructionSystem> {
    let maxdiff = spec.max_difference() as usize;
    if maxdiff > cap {
        return Err(Error::RecursionCap(maxdiff, cap));
    }
    let mut entries = Vec::new();
    let places: Vec<(Place, LocalExponents)> = {
        let mut v = vec![(Place::I, spec.i.clone()), (Place::Rho, spec.rho.clone())];
        for (j, (_, e)) in spec.points.iter().enumerate() {
            v.push((Place::Generic(j), e.clone()));
        }
        v
    };
    for (place, exps) in places {
        let m1 = exps.diff1() as usize;
        let m2 = exps.diff2() as usize;
        let order = m1 + m2 + 2;
        let (a, b) = crate::taylor::local_ode_data(&params.ansatz, &place, order)?;
        let data = laurent_from_series(&a, &b, m1 + m2)?;
        // alpha = kappa_2: obstruction at n' = m2 -> pair (2,3)
        let run2 = frobenius::run_recursion(
            &data,
            &Frac::from_rat(&exps.k2),
            &[],
            m2,
        )?;
        let p23 = run2
            .obstructions
            .first()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Frac::zero);
        entries.push(make_entry(&params.ansatz.ring.vars, &place, (2, 3), &p23));
        // alpha = kappa_1: obstructions at m1 and m1+m2 -> (1,2), (1,3)
        let run1 = frobenius::run_recursion(
            &data,
            &Frac::from_rat(&exps.k1),
            &[],
            m1 + m2,
        )?;
        let p12 = run1
            .obstructions
            .first()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Frac::zero);
        let p13 = run1
            .obstructions
            .get(1)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Frac::zero);
        entries.push(make_entry(&params.ansatz.ring.vars, &place, (1, 2), &p12));
        entries.push(make_entry(&params.ansatz.ring.vars, &place, (1, 3), &p13));
    }
    Ok(ObstructionSystem {
        params: params.clone(),
        entries,
    })
}

fn laurent_from_series(
    a: &crate::FracSeries,
    b: &crate::FracSeries,
    span: usize,
) -> Result<frobenius::LaurentData<Frac>> {
    let take = |s: &crate::FracSeries, from: i64| -> Result<Vec<Frac>> {
        let upto = from + span as i64 + 1;
        if upto > s.valid_num() {
            return Err(Error::InsufficientOrder { needed: rat(upto) });
        }
        Ok((from..=upto).map(|n| s.coeff_num(n)).collect())
    };
    Ok(frobenius::LaurentData::new(
        PointKind::Interior,
        take(a, -2)?,
        take(b, -3)?,
    ))
}

fn make_entry(vars: &VarSet, place: &Place, pair: (u8, u8), value: &Frac) -> Obstruction {
    let poly = value.num().promoted_to(vars);
    let identically_zero = poly.is_zero();
    Obstruction {
        place: place.clone(),
        pair,
        poly: normalize_content(&poly),
        identically_zero,
    }
}

fn normalize_content(p: &MPoly) -> MPoly {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.scale_rat(&c.recip())
}

/// Degree data for one obstruction.
#[derive(Clone, Debug)]
pub struct DegreeLine {
    pub place: Place,
    pub pair: (u8, u8),
    pub degree: Option<u32>,
    pub expected: Option<i64>,
    /// leading form in the free parameters
    pub leading: MPoly,
}

/// Total degrees in the free parameters, with the expected values from the
/// prescribed exponent differences (generic points: d12 = k2 - k1,
/// d23 = k3 - k2, d13 = k3 - k1 - 1; at i: half the even difference).
pub fn degree_report(spec: &ExponentSpec, sys: &ObstructionSystem) -> Vec<DegreeLine> {
    let free_idx: Vec<usize> = sys
        .params
        .free
        .iter()
        .map(|n| sys.params.ansatz.ring.vars.index_of(n).unwrap())
        .collect();
    let mut out = Vec::new();
    for e in &sys.entries {
        let expected = match &e.place {
            Place::I => {
                let exps = &spec.i;
                let d = match e.pair {
                    (1, 2) => exps.diff1(),
                    (2, 3) => exps.diff2(),
                    _ => exps.diff1() + exps.diff2(),
                };
                if d % 2 == 0 && !e.identically_zero {
                    Some(d / 2)
                } else {
                    None
                }
            }
            Place::Rho => None,
            Place::Generic(j) => {
                let exps = &spec.points[*j].1;
                Some(match e.pair {
                    (1, 2) => exps.diff1(),
                    (2, 3) => exps.diff2(),
                    _ => exps.diff1() + exps.diff2() - 1,
                })
            }
        };
        out.push(DegreeLine {
            place: e.place.clone(),
            pair: e.pair,
            degree: e.poly.degree_in(Some(&free_idx)),
            expected,
            leading: e.poly.leading_form(Some(&free_idx)),
        });
    }
    out
}

/// Evaluate every obstruction at a full rational assignment of the free
/// symbols (and symbolic t's); true iff all vanish.
pub fn verify_candidate(
    sys: &ObstructionSystem,
    assignment: &[(String, Rat)],
) -> Result<(bool, Vec<Rat>)> {
    let vars = &sys.params.ansatz.ring.vars;
    let mut values = vec![Rat::zero(); vars.len()];
    // B, C never survive in the obstructions; give them harmless values.
    for (name, v) in assignment {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown symbol {name}")))?;
        values[idx] = v.clone();
    }
    for name in sys.params.free.iter().chain(sys.params.t_syms.iter()) {
        if !assignment.iter().any(|(n, _)| n == name) {
            return Err(Error::Invalid(format!("assignment misses {name}")));
        }
    }
    let mut residuals = Vec::new();
    let mut ok = true;
    for e in &sys.entries {
        let r = e.poly.eval(&values);
        if !r.is_zero() {
            ok = false;
        }
        residuals.push(r);
    }
    Ok((ok, residuals))
}

/// Rational roots of a univariate instance (a system whose entries involve
/// a single free parameter): the only solving this module performs.
pub fn univariate_roots(sys: &ObstructionSystem) -> Result<Vec<Rat>> {
    let vars = &sys.params.ansatz.ring.vars;
    let free_idx: Vec<usize> = sys
        .params
        .free
        .iter()
        .map(|n| vars.index_of(n).unwrap())
        .collect();
    if free_idx.len() != 1 {
        return Err(Error::Invalid(format!(
            "system has {} free parameters; only univariate instances are solved",
            free_idx.len()
        )));
    }
    let idx = free_idx[0];
    // collect the nonzero entries as univariate polynomials
    let mut candidates: Option<Vec<Rat>> = None;
    for e in &sys.entries {
        if e.identically_zero {
            continue;
        }
        let mut uni = vec![Rat::zero(); 1];
        for (exp, r) in e.poly.terms() {
            for (i, &p) in exp.iter().enumerate() {
                if p > 0 && i != idx {
                    return Err(Error::Invalid(
                        "obstruction involves symbols beyond the free parameter".into(),
                    ));
                }
            }
            let d = exp[idx] as usize;
            if uni.len() <= d {
                uni.resize(d + 1, Rat::zero());
            }
            uni[d] = &uni[d] + r;
        }
        let (roots, _) = crate::modforms::rational_roots(&uni);
        let rs: Vec<Rat> = roots.into_iter().map(|(r, _)| r).collect();
        candidates = Some(match candidates {
            None => rs,
            Some(prev) => prev.into_iter().filter(|r| rs.contains(r)).collect(),
        });
    }
    Ok(candidates.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::ratq;

    fn exps(a: [Rat; 3]) -> LocalExponents {
        LocalExponents::new(a).unwrap()
    }

    /// Spec of the extremal mode for k = 2 mod 4 (no generic points).
    fn extremal_spec(k: i64) -> ExponentSpec {
        let r = (k - 2) / 4;
        ExponentSpec {
            infinity: exps([ratq(-r, 3), ratq(-r, 3), ratq(2 * r, 3)]),
            i: exps([ratq(-1, 3), ratq(2, 3), ratq(8, 3)]),
            rho: exps([rat(0), rat(1), rat(2)]),
            points: Vec::new(),
        }
    }

    #[test]
    fn fix_indicial_matches_known_values() {
        let spec = extremal_spec(10);
        let p = fix_indicial(&spec).unwrap();
        assert_eq!(p.ansatz.r_i2.as_rat().unwrap(), ratq(-1, 3));
        assert_eq!(p.ansatz.s_i3.as_rat().unwrap(), ratq(5, 54));
        assert_eq!(p.ansatz.r_inf.as_rat().unwrap(), ratq(-4, 3));
        // kappa_inf = {-1,-1,2}: r_inf = -3, s_inf = -2
        let spec2 = ExponentSpec {
            infinity: exps([rat(-1), rat(-1), rat(2)]),
            i: exps([ratq(-1, 3), ratq(2, 3), ratq(8, 3)]),
            rho: exps([rat(0), rat(1), rat(2)]),
            points: Vec::new(),
        };
        let p2 = fix_indicial(&spec2).unwrap();
        assert_eq!(p2.ansatz.r_inf.as_rat().unwrap(), rat(-3));
        assert_eq!(p2.ansatz.s_inf.as_rat().unwrap(), rat(-2));
    }

    #[test]
    fn extremal_obstruction_root() {
        // P_i is linear with root s_i1 = (12 - (k-2)^2)/144.
        for k in [6i64, 10, 14] {
            let spec = extremal_spec(k);
            let params = fix_indicial(&spec).unwrap();
            let sys = obstruction_polynomials(&spec, &params, 30).unwrap();
            let roots = univariate_roots(&sys).unwrap();
            let expect = ratq(12 - (k - 2) * (k - 2), 144);
            assert_eq!(roots, vec![expect.clone()], "k = {k}");
            // verify_candidate agrees, and fails off the root
            let (ok, _) = verify_candidate(&sys, &[("s_i1".into(), expect.clone())]).unwrap();
            assert!(ok);
            let (bad, res) =
                verify_candidate(&sys, &[("s_i1".into(), &expect + rat(1))]).unwrap();
            assert!(!bad);
            assert!(res.iter().any(|r| !r.is_zero()));
        }
    }

    #[test]
    fn rho_constraints_vanish_under_difference_assumption() {
        let spec = extremal_spec(10);
        let params = fix_indicial(&spec).unwrap();
        let sys = obstruction_polynomials(&spec, &params, 30).unwrap();
        for e in &sys.entries {
            if e.place == Place::Rho {
                assert!(e.identically_zero, "rho pair {:?}", e.pair);
            }
        }
        // at i, exactly one pair survives
        let nonzero_i: Vec<_> = sys
            .entries
            .iter()
            .filter(|e| e.place == Place::I && !e.identically_zero)
            .collect();
        assert_eq!(nonzero_i.len(), 1);
        assert_eq!(nonzero_i[0].pair, (2, 3));
    }
}
