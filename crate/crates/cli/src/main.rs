//! Batch front end: exact expansions, MODE construction with oracle
//! checks, apparentness polynomial systems, and Toda grid evaluation.

mod doc;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::Zero;

use doc::{render_c_series, render_series, SeriesDocument, SpecDocument, SystemDocument, TripleDocument};
use modeforge::algebra::coeff::{rat, rat_from_str, rat_to_str, ratq, Rat};
use modeforge::existence;
use modeforge::frobenius::Apparentness;
use modeforge::modforms::ClassicalForm;
use modeforge::taylor::Place;

#[derive(Parser)]
#[command(name = "modeforge", version, about = "exact modular ODE toolkit")]
struct Cli {
    /// Working q-order (default: MODEFORGE_ORDER or 64)
    #[arg(long, global = true)]
    order: Option<i64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact q-expansion of a classical form
    Expand(ExpandArgs),
    /// Build a MODE from a seed and report its invariants
    Mode(ModeArgs),
    /// Emit or verify the apparentness polynomial system of a spec
    Existence(ExistenceArgs),
    /// Evaluate the SU(3) Toda fields of a triple seed on a grid
    Toda(TodaArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// E2, E4, E6, Delta, Delta0, J, or Eta^m
    form: String,
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ModeArgs {
    /// even weight >= 6 of an extremal quasimodular seed
    #[arg(long)]
    from_extremal: Option<i64>,
    /// JSON triple document
    #[arg(long)]
    from_triple: Option<PathBuf>,
    /// run the closed-form and consistency oracles; FAIL exits 1
    #[arg(long)]
    check: bool,
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ExistenceArgs {
    /// JSON exponent spec
    #[arg(long)]
    spec: PathBuf,
    /// print the polynomial system as JSON
    #[arg(long)]
    emit_system: bool,
    /// verify "name=p/q,name=p/q" against the system
    #[arg(long)]
    verify: Option<String>,
    /// recursion-depth cap on exponent differences
    #[arg(long, default_value_t = 30)]
    cap: usize,
}

#[derive(Args)]
struct TodaArgs {
    /// "weight24" or a path to a JSON triple document
    #[arg(long, default_value = "weight24")]
    seed: String,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// x0,x1,y0,y1,n
    #[arg(long, default_value = "-0.3,0.3,0.9,1.5,41")]
    grid: String,
    /// margin kept clear of the singular set
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    /// write CSV rows here
    #[arg(long)]
    out: Option<PathBuf>,
    /// also emit plane-coordinate samples (w, v1, v2)
    #[arg(long)]
    plane: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let order = cli
        .order
        .or_else(|| {
            std::env::var("MODEFORGE_ORDER")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(64);
    if order < 0 {
        eprintln!("error: order must be nonnegative");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Expand(a) => cmd_expand(a, order),
        Command::Mode(a) => cmd_mode(a, order),
        Command::Existence(a) => cmd_existence(a),
        Command::Toda(a) => cmd_toda(a, order),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_expand(a: ExpandArgs, order: i64) -> Result<bool, String> {
    let form = ClassicalForm::parse(&a.form).ok_or_else(|| format!("unknown form {:?}", a.form))?;
    let s = modeforge::modforms::expand(form, order);
    match a.format.as_str() {
        "text" => println!("{}", render_series(&s)),
        "json" => println!(
            "{}",
            serde_json::to_string(&SeriesDocument::from_rat_series(&s)).unwrap()
        ),
        other => return Err(format!("unknown format {other:?}")),
    }
    Ok(true)
}

fn check_line(name: &str, ok: bool, failures: &mut u32) {
    if ok {
        println!("check {name}: PASS");
    } else {
        println!("check {name}: FAIL");
        *failures += 1;
    }
}

fn cmd_mode(a: ModeArgs, order: i64) -> Result<bool, String> {
    let mut failures = 0u32;
    let (mode, seed_kind) = match (&a.from_extremal, &a.from_triple) {
        (Some(k), None) => {
            if *k < 6 || *k % 2 != 0 {
                return Err(format!("extremal seeds need even weight >= 6, got {k}"));
            }
            let f = modeforge::quasi::extremal(*k, order + 2 * (*k / 4) + 10)
                .map_err(|e| e.to_string())?;
            let mode = modeforge::mode::mode_from_quasi(&f).map_err(|e| e.to_string())?;
            (mode, format!("extremal weight {k}"))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            let doc: TripleDocument = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let seed = doc.to_seed(order + 16)?;
            let mode = modeforge::mode::mode_from_triple(&seed).map_err(|e| e.to_string())?;
            (mode, format!("triple of weight {}", doc.weight))
        }
        _ => return Err("give exactly one of --from-extremal or --from-triple".into()),
    };
    println!("seed: {seed_kind}");
    println!("Q = {}", render_series(&mode.q.truncate_num(mode.q.valid_num().min(10))));
    println!("R = {}", render_series(&mode.r.truncate_num(mode.r.valid_num().min(10))));
    if let Some(ansatz) = &mode.ansatz {
        println!("closed form:");
        println!("  r_inf = {}", rat_to_str(&ansatz.r_inf));
        println!("  s_inf = {}", rat_to_str(&ansatz.s_inf));
        if !ansatz.r_i2.is_zero() || !ansatz.s_i3.is_zero() || !ansatz.s_i1.is_zero() {
            println!(
                "  r_i2 = {}, s_i3 = {}, s_i1 = {}",
                rat_to_str(&ansatz.r_i2),
                rat_to_str(&ansatz.s_i3),
                rat_to_str(&ansatz.s_i1)
            );
        }
        if !ansatz.r_rho2.is_zero() || !ansatz.s_rho3.is_zero() {
            println!(
                "  r_rho2 = {}, s_rho3 = {}",
                rat_to_str(&ansatz.r_rho2),
                rat_to_str(&ansatz.s_rho3)
            );
        }
        for p in &ansatz.points {
            println!(
                "  t = {}: r2 = {}, r1 = {}, s3 = {}, s2 = {}, s1 = {}",
                rat_to_str(&p.t),
                rat_to_str(&p.r2),
                rat_to_str(&p.r1),
                rat_to_str(&p.s3),
                rat_to_str(&p.s2),
                rat_to_str(&p.s1)
            );
        }
    }
    let reports = modeforge::mode::exponents_everywhere(&mode).map_err(|e| e.to_string())?;
    println!("local structure:");
    let mut kappa_i = modeforge::frobenius::LocalExponents::new([rat(0), rat(1), rat(2)]).unwrap();
    let mut kappa_rho = kappa_i.clone();
    for r in &reports {
        let [k1, k2, k3] = r.exponents.as_array();
        println!(
            "  {:?}: exponents ({}, {}, {}), {:?}",
            r.place,
            rat_to_str(&k1),
            rat_to_str(&k2),
            rat_to_str(&k3),
            r.classification
        );
        match r.place {
            modeforge::mode::PlaceId::EllipticI => kappa_i = r.exponents.clone(),
            modeforge::mode::PlaceId::EllipticRho => kappa_rho = r.exponents.clone(),
            _ => {}
        }
    }
    // Bol data
    let k_i = ratq(-mode.inventory.ord_i, 3);
    let k_rho = ratq(-mode.inventory.ord_rho, 3);
    let generic: Vec<(Rat, Rat)> = mode
        .inventory
        .generic
        .iter()
        .map(|(t, ord)| (t.clone(), ratq(-ord, 3)))
        .collect();
    let mult = modeforge::bol::multiplier_f(
        &mode.cusp_exponents.k1,
        &k_rho,
        &k_i,
        &generic,
        order.max(40),
    )
    .map_err(|e| e.to_string())?;
    let tag = modeforge::bol::classify_bol(&kappa_i).map_err(|e| e.to_string())?;
    println!("bol: ell = {}, tag = {:?}", mult.ell, tag);
    let bol = modeforge::bol::canonical_matrices(tag, mult.ell, &kappa_rho, &kappa_i)
        .map_err(|e| e.to_string())?;
    for (name, m) in [("S", &bol.s_hat), ("R", &bol.r_hat), ("T", &bol.t_hat)] {
        let rows: Vec<String> = m
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(rat_to_str).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        println!("  {name} = {}", rows.join(" "));
    }
    match tag {
        modeforge::bol::BolTag::Irreducible => {
            match modeforge::bol::recover_quasimodular(&mode, &mult) {
                Ok(rec) => {
                    println!(
                        "recovered m2 = {}",
                        render_c_series(&rec.m2.truncate_num(rec.m2.start_num().max(0) + 5 * rec.m2.den() as i64))
                    );
                    if a.check {
                        check_line("quasimodular recovery certified", true, &mut failures);
                    }
                }
                Err(e) => {
                    if a.check {
                        println!("recovery: {e}");
                        check_line("quasimodular recovery certified", false, &mut failures);
                    }
                }
            }
        }
        modeforge::bol::BolTag::Trivial => {
            let certs = modeforge::bol::certify_trivial(&mode, &mult);
            if a.check {
                check_line("12 divides ell", mult.ell % 12 == 0, &mut failures);
                check_line(
                    "F y modular of weight ell for the cusp basis",
                    certs.is_ok(),
                    &mut failures,
                );
            }
        }
    }
    if a.check {
        if let Some(k) = a.from_extremal {
            // closed-form oracle from the extremal theorem
            let cmp_order = mode.q.valid_num().min(mode.r.valid_num()).min(40);
            let (qe, re) = extremal_closed_forms(k, cmp_order);
            check_line(
                "Q matches the extremal closed form",
                mode.q.truncate_num(cmp_order).eq_to_validity(&qe),
                &mut failures,
            );
            check_line(
                "R matches the extremal closed form",
                mode.r.truncate_num(cmp_order).eq_to_validity(&re),
                &mut failures,
            );
        }
        // generic oracles
        let cusp_ok = reports
            .first()
            .map(|r| match mode.provenance {
                modeforge::mode::Provenance::QuasiSeed { .. } => {
                    r.classification == Some(Apparentness::CompletelyNotApparent)
                }
                _ => r.classification == Some(Apparentness::Apparent),
            })
            .unwrap_or(false);
        check_line("cusp structure matches the seed type", cusp_ok, &mut failures);
        let interior_ok = reports
            .iter()
            .skip(1)
            .all(|r| r.classification == Some(Apparentness::Apparent));
        check_line("interior points apparent", interior_ok, &mut failures);
        if failures == 0 {
            println!("PASS");
        } else {
            println!("FAIL ({failures} checks)");
        }
    }
    Ok(failures == 0)
}

fn extremal_closed_forms(k: i64, order: i64) -> (modeforge::RatSeries, modeforge::RatSeries) {
    use modeforge::mode::AnsatzValues;
    let mut v = AnsatzValues::trivial();
    if k % 4 == 0 {
        v.r_inf = ratq(-k * k, 48);
        v.s_inf = ratq(-k * k * k, 864);
    } else {
        let km2 = k - 2;
        v.r_inf = ratq(-km2 * km2, 48);
        v.s_inf = ratq(-km2 * km2 * km2, 864);
        v.r_i2 = ratq(-1, 3);
        v.s_i3 = ratq(5, 54);
        v.s_i1 = ratq(12 - km2 * km2, 144);
    }
    (v.q_series(order), v.r_series(order))
}

fn cmd_existence(a: ExistenceArgs) -> Result<bool, String> {
    let text = std::fs::read_to_string(&a.spec).map_err(|e| e.to_string())?;
    let doc: SpecDocument = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let spec = doc.to_spec()?;
    let flags = spec.validate().map_err(|e| e.to_string())?;
    println!(
        "spec valid; i-parity irreducible: {}, rho difference assumption: {}",
        flags.i_parity_irreducible, flags.rho_difference
    );
    let params = existence::fix_indicial(&spec).map_err(|e| e.to_string())?;
    let sys =
        existence::obstruction_polynomials(&spec, &params, a.cap).map_err(|e| e.to_string())?;
    let report = existence::degree_report(&spec, &sys);
    let place_name = |p: &Place| match p {
        Place::I => "i".to_string(),
        Place::Rho => "rho".to_string(),
        Place::Generic(j) => format!("z_{}", j + 1),
    };
    if a.emit_system {
        let vars = params.ansatz.ring.vars.names().to_vec();
        let polys = sys
            .entries
            .iter()
            .zip(report.iter())
            .map(|(e, line)| doc::PolyDocument {
                place: place_name(&e.place),
                pair: e.pair,
                terms: e
                    .poly
                    .terms()
                    .map(|(exp, r)| (exp.clone(), rat_to_str(r)))
                    .collect(),
                identically_zero: e.identically_zero,
                degree: line.degree,
                expected_degree: line.expected,
            })
            .collect();
        let out = SystemDocument {
            variables: vars,
            free: params.free.clone(),
            polynomials: polys,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Ok(true);
    }
    let mut any = false;
    for line in &report {
        if sys
            .entries
            .iter()
            .find(|e| e.place == line.place && e.pair == line.pair)
            .map(|e| e.identically_zero)
            .unwrap_or(true)
        {
            println!(
                "P_{{{},{:?}}}: identically zero",
                place_name(&line.place),
                line.pair
            );
        } else {
            any = true;
            println!(
                "P_{{{},{:?}}}: degree {:?} (expected {:?})",
                place_name(&line.place),
                line.pair,
                line.degree,
                line.expected
            );
        }
    }
    if !any {
        println!("no constraints");
    }
    if let Some(assign) = &a.verify {
        let mut pairs = Vec::new();
        for part in assign.split(',') {
            let (name, val) = part
                .split_once('=')
                .ok_or_else(|| format!("bad assignment {part:?}"))?;
            pairs.push((
                name.trim().to_string(),
                rat_from_str(val).ok_or_else(|| format!("bad rational {val:?}"))?,
            ));
        }
        let (ok, residuals) =
            existence::verify_candidate(&sys, &pairs).map_err(|e| e.to_string())?;
        let shown: Vec<String> = residuals.iter().map(rat_to_str).collect();
        println!("residuals: [{}]", shown.join(", "));
        println!("{}", if ok { "PASS" } else { "FAIL" });
        return Ok(ok);
    } else if sys.params.free.len() == 1 {
        let roots = existence::univariate_roots(&sys).map_err(|e| e.to_string())?;
        let shown: Vec<String> = roots.iter().map(rat_to_str).collect();
        println!("{} roots: [{}]", sys.params.free[0], shown.join(", "));
    }
    Ok(true)
}

fn cmd_toda(a: TodaArgs, order: i64) -> Result<bool, String> {
    if a.lambda <= 0.0 || a.mu <= 0.0 {
        return Err("lambda and mu must be positive".into());
    }
    let parts: Vec<f64> = a
        .grid
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if parts.len() != 5 {
        return Err("grid must be x0,x1,y0,y1,n".into());
    }
    let n = parts[4] as usize;
    if n < 3 {
        return Err("grid needs at least 3 nodes per side".into());
    }
    let seed = if a.seed == "weight24" {
        TripleDocument::weight24().to_seed(order)?
    } else {
        let text = std::fs::read_to_string(&a.seed).map_err(|e| e.to_string())?;
        let doc: TripleDocument = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        doc.to_seed(order)?
    };
    let field = modeforge::toda::toda_fields(
        &seed, a.lambda, a.mu, parts[0], parts[1], parts[2], parts[3], n, a.margin, 1e-9,
    )
    .map_err(|e| e.to_string())?;
    let (r1, r2) = modeforge::toda::pde_residuals(&field);
    let samples = [
        (0.13, 1.21),
        (-0.07, 1.05),
        (0.22, 1.40),
        (0.01, 0.93),
        (-0.28, 1.33),
    ];
    let deltas = modeforge::toda::automorphy_deltas(&seed, a.lambda, a.mu, &samples, 1e-9)
        .map_err(|e| e.to_string())?;
    let max_delta = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    println!("grid {}x{} h = {:.6}", n, n, field.h());
    println!("max |lap U1 + exp(2U1-U2)| = {r1:.6e}");
    println!("max |lap U2 + exp(2U2-U1)| = {r2:.6e}");
    println!("max automorphy delta = {max_delta:.6e}");
    if let Some(path) = &a.out {
        let mut file = std::fs::File::create(path).map_err(|e| e.to_string())?;
        writeln!(file, "x,y,U1,U2,u1,u2").map_err(|e| e.to_string())?;
        for (x, y, u1, u2, l1, l2) in modeforge::toda::field_rows(&field) {
            writeln!(file, "{x},{y},{u1},{u2},{l1},{l2}").map_err(|e| e.to_string())?;
        }
        println!("wrote {}", path.display());
    }
    if a.plane {
        let samples =
            modeforge::toda::plane_transform(&seed, &field, 1e-9).map_err(|e| e.to_string())?;
        println!("plane samples: {}", samples.len());
        for s in samples.iter().take(3) {
            println!("  w = {:.4}+{:.4}i  v1 = {:.4}  v2 = {:.4}", s.w.re, s.w.im, s.v1, s.v2);
        }
    }
    Ok(true)
}
