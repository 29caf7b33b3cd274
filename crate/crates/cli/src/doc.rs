//! JSON documents: series, exponent specs, triple seeds, and polynomial
//! systems. All rationals travel as "p/q" strings so round trips are
//! lossless.

use std::collections::BTreeMap;

use num::Zero;
use serde::{Deserialize, Serialize};

use modeforge::algebra::coeff::{rat_from_str, rat_to_str, Rat};
use modeforge::algebra::cpoly::CPoly;
use modeforge::existence::{ExponentSpec, TValue};
use modeforge::frobenius::LocalExponents;
use modeforge::modforms::ClassicalForm;
use modeforge::{CSeries, QSeries, RatSeries};

/// A truncated series: exponents are numerators over `denom`; `order` is
/// the numerator of the last valid exponent.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesDocument {
    pub denom: u32,
    /// [exponent numerator, coefficient]
    pub terms: Vec<(i64, CoeffDocument)>,
    pub order: i64,
}

/// "p/q" for rationals, a {power: "p/q"} map for Laurent polynomials in c.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum CoeffDocument {
    Rational(String),
    CPowers(BTreeMap<String, String>),
}

impl SeriesDocument {
    pub fn from_rat_series(s: &RatSeries) -> Self {
        let terms = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                (
                    s.start_num() + i as i64,
                    CoeffDocument::Rational(rat_to_str(c)),
                )
            })
            .collect();
        SeriesDocument {
            denom: s.den(),
            terms,
            order: s.valid_num(),
        }
    }

    pub fn from_c_series(s: &CSeries) -> Self {
        let terms = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let map: BTreeMap<String, String> = c
                    .iter()
                    .map(|(k, r)| (k.to_string(), rat_to_str(r)))
                    .collect();
                (s.start_num() + i as i64, CoeffDocument::CPowers(map))
            })
            .collect();
        SeriesDocument {
            denom: s.den(),
            terms,
            order: s.valid_num(),
        }
    }

    pub fn to_rat_series(&self) -> Result<RatSeries, String> {
        if self.denom == 0 {
            return Err("denom must be positive".into());
        }
        let start = self
            .terms
            .iter()
            .map(|(e, _)| *e)
            .min()
            .unwrap_or(0)
            .min(self.order);
        let len = (self.order - start + 1).max(1) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (e, c) in &self.terms {
            if *e > self.order {
                return Err(format!("term at {e} beyond the stated order"));
            }
            let CoeffDocument::Rational(s) = c else {
                return Err("expected rational coefficients".into());
            };
            coeffs[(*e - start) as usize] =
                rat_from_str(s).ok_or_else(|| format!("bad rational {s:?}"))?;
        }
        Ok(QSeries::new(self.denom, start, coeffs))
    }
}

/// Exponent triples as "p/q" strings; `t: null` keeps the point symbolic.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SpecDocument {
    pub infinity: [String; 3],
    pub i: [String; 3],
    pub rho: [String; 3],
    #[serde(default)]
    pub points: Vec<SpecPoint>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SpecPoint {
    pub t: Option<String>,
    pub kappa: [String; 3],
}

fn triple(raw: &[String; 3]) -> Result<LocalExponents, String> {
    let mut ks = Vec::new();
    for s in raw {
        ks.push(rat_from_str(s).ok_or_else(|| format!("bad rational {s:?}"))?);
    }
    LocalExponents::new([ks[0].clone(), ks[1].clone(), ks[2].clone()])
        .map_err(|e| e.to_string())
}

impl SpecDocument {
    pub fn to_spec(&self) -> Result<ExponentSpec, String> {
        let mut points = Vec::new();
        for p in &self.points {
            let t = match &p.t {
                Some(s) => TValue::Rational(
                    rat_from_str(s).ok_or_else(|| format!("bad rational {s:?}"))?,
                ),
                None => TValue::Symbolic,
            };
            points.push((t, triple(&p.kappa)?));
        }
        Ok(ExponentSpec {
            infinity: triple(&self.infinity)?,
            i: triple(&self.i)?,
            rho: triple(&self.rho)?,
            points,
        })
    }

    pub fn from_spec(spec: &ExponentSpec) -> Self {
        let pack = |e: &LocalExponents| -> [String; 3] {
            let [a, b, c] = e.as_array();
            [rat_to_str(&a), rat_to_str(&b), rat_to_str(&c)]
        };
        SpecDocument {
            infinity: pack(&spec.infinity),
            i: pack(&spec.i),
            rho: pack(&spec.rho),
            points: spec
                .points
                .iter()
                .map(|(t, e)| SpecPoint {
                    t: match t {
                        TValue::Rational(v) => Some(rat_to_str(v)),
                        TValue::Symbolic => None,
                    },
                    kappa: pack(e),
                })
                .collect(),
        }
    }
}

/// A triple seed: weight plus three forms, each a product of classical
/// generators raised to nonnegative powers.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TripleDocument {
    pub weight: i64,
    pub forms: [Vec<(String, u32)>; 3],
}

impl TripleDocument {
    pub fn weight24() -> Self {
        TripleDocument {
            weight: 24,
            forms: [
                vec![("E4".into(), 6)],
                vec![("E4".into(), 3), ("Delta".into(), 1)],
                vec![("Delta".into(), 2)],
            ],
        }
    }

    pub fn to_seed(&self, order: i64) -> Result<modeforge::toda::TripleSeed, String> {
        let mut series = Vec::new();
        for form in &self.forms {
            let mut acc = RatSeries::one_through(1, order);
            let mut weight = 0i64;
            for (name, pow) in form {
                let f = ClassicalForm::parse(name)
                    .ok_or_else(|| format!("unknown form {name:?}"))?;
                weight += f
                    .weight()
                    .ok_or_else(|| format!("{name} has no pure weight"))?
                    * *pow as i64;
                acc = acc
                    .mul(&modeforge::modforms::expand(f, order).pow_int(*pow))
                    .truncate_num(order);
            }
            if weight != self.weight {
                return Err(format!(
                    "form {form:?} has weight {weight}, expected {}",
                    self.weight
                ));
            }
            series.push(acc);
        }
        modeforge::toda::TripleSeed::new(
            self.weight,
            [series[0].clone(), series[1].clone(), series[2].clone()],
        )
        .map_err(|e| e.to_string())
    }
}

/// Sparse polynomial emission for existence systems.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolyDocument {
    pub place: String,
    pub pair: (u8, u8),
    /// [[exponent vector], "p/q"]
    pub terms: Vec<(Vec<u16>, String)>,
    pub identically_zero: bool,
    pub degree: Option<u32>,
    pub expected_degree: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SystemDocument {
    pub variables: Vec<String>,
    pub free: Vec<String>,
    pub polynomials: Vec<PolyDocument>,
}

/// Plain-text rendering: "q - 24q^2 + 252q^3 - 1472q^4".
pub fn render_series(s: &RatSeries) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = s.start_num() + i as i64;
        let neg = c < &Rat::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let power = render_power(e, s.den());
        if power.is_empty() {
            out.push_str(&rat_to_str(&mag));
        } else if mag == Rat::from_integer(1.into()) {
            out.push_str(&power);
        } else {
            out.push_str(&format!("{}{}", rat_to_str(&mag), power));
        }
    }
    if first {
        out.push('0');
    }
    out
}

fn render_power(num: i64, den: u32) -> String {
    if num == 0 {
        return String::new();
    }
    if den == 1 {
        if num == 1 {
            "q".into()
        } else {
            format!("q^{num}")
        }
    } else {
        let g = num::integer::gcd(num.unsigned_abs(), den as u64) as i64;
        let n = num / g;
        let d = den as i64 / g;
        if d == 1 {
            if n == 1 {
                "q".into()
            } else {
                format!("q^{n}")
            }
        } else {
            format!("q^({n}/{d})")
        }
    }
}

/// Rendering over Q[c]: coefficients printed as bracketed c-polynomials.
pub fn render_c_series(s: &CSeries) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = s.start_num() + i as i64;
        if !first {
            out.push_str(" + ");
        }
        first = false;
        let power = render_power(e, s.den());
        out.push_str(&format!("[{}]{}", render_cpoly(c), power));
    }
    if first {
        out.push('0');
    }
    out
}

fn render_cpoly(c: &CPoly) -> String {
    let mut parts = Vec::new();
    for (k, r) in c.iter() {
        let base = rat_to_str(r);
        parts.push(match k {
            0 => base,
            1 => format!("{base}*c"),
            _ => format!("{base}*c^{k}"),
        });
    }
    parts.join(" + ")
}
