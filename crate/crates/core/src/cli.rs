//! Command-line front end: argument parsing, report assembly and exit codes.
//!
//! Every report is one JSON object (or a CSV table) that echoes the configuration it was
//! produced with. Nothing time- or host-dependent is written, so reruns are byte-identical.

use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::airy_borel::{borel_transform, hypergeometric_oracle};
use crate::airy_wkb::{closed_form_coefficients, riccati_recurrence, s_exponent, split_odd_even, wkb_coefficient_stream};
use crate::branches::{solve_cubic_x, borel_branch_identities, trace_real, BranchLabel, SqrtRule, TrackOptions};
use crate::error::{Error, ErrorClass};
use crate::pearcey::{check_closedness, check_primitives, pearcey_recursion, pearcey_verify};
use crate::resummation::{
    classify_stokes, default_voros_grid, laplace_sum, verify_airy_link, voros_grid, VorosRow,
};
use crate::weyl::verify_operator_identities;
use crate::Sign;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

/// Thresholds used by the verification commands.
pub const VOROS_PLUS_TOL: f64 = 1e-6;
pub const VOROS_MINUS_TOL: f64 = 1e-8;
pub const AIRY_LINK_TOL: f64 = 1e-6;
pub const PEARCEY_ANNIHILATION_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "exwkb", version, about = "Exact WKB analysis of the Airy equation and the Pearcey system")]
pub struct Cli {
    /// Numerical tolerance for quadratures and reference values.
    #[arg(long, global = true, env = "EXWKB_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Formal WKB data.
    #[command(subcommand)]
    Wkb(WkbCmd),
    /// Branches of the cubic and of g.
    #[command(subcommand)]
    Branches(BranchesCmd),
    /// Borel sums.
    #[command(subcommand)]
    Resum(ResumCmd),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Pearcey system.
    #[command(subcommand)]
    Pearcey(PearceyCmd),
    /// Weyl algebra identities.
    #[command(subcommand)]
    Weyl(WeylCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SignArg {
    #[arg(long, default_value = "+", allow_hyphen_values = true, value_parser = parse_sign)]
    pub sign: Sign,
}

#[derive(Subcommand, Debug)]
pub enum WkbCmd {
    /// Table of the Riccati terms `S_j = c_j x^e`.
    Series {
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[command(flatten)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// `c_n` from the Riccati route and from the closed form, side by side.
    Coeffs {
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[command(flatten)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Borel coefficients against the Gauss series of 2F1(1/6, 5/6; 1/2).
    Borel {
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[command(flatten)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum BranchesCmd {
    /// Continues one branch along the real segment `[from, to]`.
    Trace {
        #[arg(long, default_value_t = 0.01)]
        from: f64,
        #[arg(long, default_value_t = 0.99)]
        to: f64,
        /// `X1`..`X3` or `g1`..`g3`, optionally `@0`, `@0.5`, `@1`.
        #[arg(long, default_value = "X1")]
        label: String,
        #[arg(long, default_value_t = 98)]
        samples: usize,
        /// `x` used for the g family.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true, value_parser = parse_complex)]
        x: Complex64,
        #[arg(long)]
        csv: bool,
    },
    /// Termwise comparison of Borel transforms with branch differences.
    Verify {
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ResumCmd {
    /// Laplace integral of the Borel transform along the horizontal ray.
    Laplace {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        x: Complex64,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
        #[command(flatten)]
        sign: SignArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Connection formula across the Stokes line `arg x = 0`.
    Voros {
        /// Only `default` is defined.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Borel sums against Ai and Bi from the power-series reference.
    AiryLink {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        x: Complex64,
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
    },
    /// Every suite, with a pass flag per check.
    All {
        /// Smaller orders, point counts and grids.
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum PearceyCmd {
    /// WKB terms `S_k`, `T_k` as elements of the cubic extension.
    Recursion {
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Symbolic identities and seeded numeric checks.
    Verify {
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 20)]
        annihilation_points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeylCmd {
    /// Operator identities in normal form.
    Verify {
        #[arg(long)]
        json: bool,
    },
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse()
}

/// `RE,IM` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(s)?, 0.0),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// What a command produced.
#[derive(Debug)]
pub enum Report {
    Json(Value),
    Csv { header: Vec<String>, rows: Vec<Vec<String>> },
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Precondition => EXIT_PRECONDITION,
        ErrorClass::Verification => EXIT_VERIFICATION,
        ErrorClass::Numeric => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((report, passed)) => match render(&report) {
            Ok(stdout) => Outcome {
                code: if passed { EXIT_OK } else { EXIT_VERIFICATION },
                stdout,
                stderr: if passed { String::new() } else { "verification failed\n".into() },
            },
            Err(e) => Outcome { code: EXIT_NUMERIC, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Serializes a report; CSV follows RFC 4180 quoting.
pub fn render(report: &Report) -> Result<String, String> {
    match report {
        Report::Json(v) => serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| e.to_string()),
        Report::Csv { header, rows } => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).map_err(|e| e.to_string())?;
            for r in rows {
                w.write_record(r).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn check_tol(tol: f64) -> crate::Result<()> {
    if tol > 0.0 && tol < 1e-2 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance {tol} must lie in (0, 1e-2)")))
    }
}

fn check_eta(eta: f64) -> crate::Result<()> {
    if eta.is_finite() && eta > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("eta = {eta} must be positive")))
    }
}

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Runs a parsed command; the flag is `false` when a requested verification failed.
pub fn execute(cli: &Cli) -> crate::Result<(Report, bool)> {
    let tol = cli.tol;
    check_tol(tol)?;
    match &cli.command {
        Command::Wkb(c) => wkb(c),
        Command::Branches(c) => branches(c),
        Command::Resum(ResumCmd::Laplace { x, eta, sign }) => resum_laplace(*x, *eta, sign.sign, tol),
        Command::Verify(c) => verify(c, tol),
        Command::Pearcey(c) => pearcey(c),
        Command::Weyl(WeylCmd::Verify { .. }) => {
            let r = verify_operator_identities();
            let passed = r.passed();
            Ok((Report::Json(json!({ "config": { "command": "weyl verify", "version": version() }, "passed": passed, "report": r })), passed))
        }
    }
}

fn table(format: Format, config: Value, header: &[&str], rows: Vec<Vec<String>>, extra: Value) -> Report {
    match format {
        Format::Csv => Report::Csv { header: header.iter().map(|s| s.to_string()).collect(), rows },
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.into_iter().map(Value::String)).collect()))
                .collect();
            let mut obj = json!({ "config": config, "rows": rows });
            if let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) {
                o.extend(e);
            }
            Report::Json(obj)
        }
    }
}

fn wkb(c: &WkbCmd) -> crate::Result<(Report, bool)> {
    match c {
        WkbCmd::Series { order, sign, format } => {
            let r = riccati_recurrence(*order, sign.sign);
            let rows = (-1..=*order as i64)
                .map(|j| {
                    vec![
                        j.to_string(),
                        r.coefficient(j).to_string(),
                        s_exponent(j).to_string(),
                        if j.rem_euclid(2) == 1 { "odd" } else { "even" }.to_string(),
                    ]
                })
                .collect();
            let config = json!({ "command": "wkb series", "order": order, "sign": sign.sign, "version": version() });
            Ok((table(*format, config, &["j", "coefficient", "x_exponent", "parity"], rows, json!({})), true))
        }
        WkbCmd::Coeffs { order, sign, format } => {
            let stream = wkb_coefficient_stream(*order, sign.sign)?;
            let closed = closed_form_coefficients(*order, sign.sign);
            let mut all = true;
            let rows = stream
                .coeffs
                .iter()
                .zip(&closed)
                .enumerate()
                .map(|(n, (a, b))| {
                    all &= a == b;
                    vec![n.to_string(), a.to_string(), b.to_string(), (a == b).to_string()]
                })
                .collect();
            let config = json!({ "command": "wkb coeffs", "order": order, "sign": sign.sign, "version": version() });
            Ok((table(*format, config, &["n", "riccati", "closed_form", "agree"], rows, json!({ "passed": all })), all))
        }
        WkbCmd::Borel { order, sign, format } => {
            let b = borel_transform(&wkb_coefficient_stream(*order, sign.sign)?);
            let h = hypergeometric_oracle(sign.sign, order + 1);
            let mut all = true;
            let rows = h
                .iter()
                .enumerate()
                .map(|(n, hn)| {
                    let bn = b.coefficient(n);
                    all &= &bn == hn;
                    vec![n.to_string(), format!("{}", crate::series::Exponent::halves(2 * n as i64 - 1)), bn.to_string(), hn.to_string(), (&bn == hn).to_string()]
                })
                .collect();
            let config = json!({ "command": "wkb borel", "order": order, "sign": sign.sign, "version": version() });
            let extra = json!({
                "passed": all,
                "variable": b.terms.variable(),
                "prefactor": if b.prefactor.imaginary_unit { "i sqrt(3) / (2 sqrt(pi) x)" } else { "sqrt(3) / (2 sqrt(pi) x)" },
                "series": b.terms.to_json(),
            });
            Ok((table(*format, config, &["n", "exponent", "borel", "gauss", "agree"], rows, extra), all))
        }
    }
}

fn branches(c: &BranchesCmd) -> crate::Result<(Report, bool)> {
    match c {
        BranchesCmd::Trace { from, to, label, samples, x, csv } => {
            let label: BranchLabel = label.parse().map_err(Error::Precondition)?;
            if *samples == 0 {
                return Err(Error::Precondition("--samples must be positive".into()));
            }
            let path = trace_real(label, Complex64::new(*from, 0.0), Complex64::new(*to, 0.0), *samples, *x, &TrackOptions::default())?;
            let rows: Vec<Vec<String>> = path.iter().map(|v| vec![v.s.re.to_string(), v.value.re.to_string(), v.value.im.to_string()]).collect();
            let config = json!({
                "command": "branches trace", "label": label.to_string(), "from": from, "to": to,
                "samples": samples, "x": cx(*x), "version": version(),
            });
            let format = if *csv { Format::Csv } else { Format::Json };
            Ok((table(format, config, &["s", "re", "im"], rows, json!({})), true))
        }
        BranchesCmd::Verify { order } => {
            let r = borel_branch_identities(*order)?;
            let passed = r.passed();
            Ok((Report::Json(json!({ "config": { "command": "branches verify", "order": order, "version": version() }, "passed": passed, "report": r })), passed))
        }
    }
}

fn resum_laplace(x: Complex64, eta: f64, sign: Sign, tol: f64) -> crate::Result<(Report, bool)> {
    check_eta(eta)?;
    let ctx = classify_stokes(x)?;
    let sum = laplace_sum(sign, &ctx, eta, tol)?;
    let config = json!({ "command": "resum laplace", "x": cx(x), "eta": eta, "sign": sign, "tol": tol, "version": version() });
    Ok((Report::Json(json!({ "config": config, "region": ctx.region, "result": sum })), true))
}

fn voros_summary(rows: &[VorosRow]) -> (f64, f64, bool) {
    let plus = rows.iter().map(|r| r.plus_residual()).fold(0.0, f64::max);
    let minus = rows.iter().map(|r| r.residual_minus).fold(0.0, f64::max);
    (plus, minus, plus < VOROS_PLUS_TOL && minus < VOROS_MINUS_TOL)
}

fn verify(c: &VerifyCmd, tol: f64) -> crate::Result<(Report, bool)> {
    match c {
        VerifyCmd::Voros { grid, csv, .. } => {
            if grid != "default" {
                return Err(Error::Precondition(format!("unknown grid `{grid}`")));
            }
            let rows = voros_grid(&default_voros_grid(), tol)?;
            let (plus, minus, passed) = voros_summary(&rows);
            if *csv {
                let f = |v: f64| v.to_string();
                let rows = rows
                    .iter()
                    .map(|r| {
                        vec![
                            f(r.x.re), f(r.x.im), f(r.eta),
                            f(r.residual_discontinuity),
                            r.residual_tilted_ray.map(f).unwrap_or_default(),
                            f(r.residual_minus), f(r.error_estimate),
                        ]
                    })
                    .collect();
                let header = ["x_re", "x_im", "eta", "residual_discontinuity", "residual_tilted_ray", "residual_minus", "error_estimate"];
                return Ok((Report::Csv { header: header.iter().map(|s| s.to_string()).collect(), rows }, passed));
            }
            let config = json!({
                "command": "verify voros", "grid": grid, "tol": tol,
                "thresholds": { "plus": VOROS_PLUS_TOL, "minus": VOROS_MINUS_TOL }, "version": version(),
            });
            Ok((Report::Json(json!({
                "config": config, "passed": passed, "max_plus_residual": plus, "max_minus_residual": minus, "rows": rows,
            })), passed))
        }
        VerifyCmd::AiryLink { x, eta } => {
            check_eta(*eta)?;
            let r = verify_airy_link(*x, *eta, tol)?;
            let passed = r.max_residual() < AIRY_LINK_TOL;
            let config = json!({ "command": "verify airy-link", "x": cx(*x), "eta": eta, "tol": tol, "threshold": AIRY_LINK_TOL, "version": version() });
            Ok((Report::Json(json!({ "config": config, "passed": passed, "report": r })), passed))
        }
        VerifyCmd::All { fast } => verify_all(*fast, tol),
    }
}

fn verify_all(fast: bool, tol: f64) -> crate::Result<(Report, bool)> {
    let mut checks: Vec<Value> = Vec::new();
    let mut push = |name: &str, passed: bool, detail: Value| checks.push(json!({ "name": name, "passed": passed, "detail": detail }));

    let order = 20;
    let coeffs = [Sign::Plus, Sign::Minus].iter().all(|&s| {
        wkb_coefficient_stream(order, s).map(|w| w.coeffs == closed_form_coefficients(order, s)).unwrap_or(false)
    });
    push("wkb coefficients, two derivations", coeffs, json!({ "order": order }));

    let borel = [Sign::Plus, Sign::Minus].iter().all(|&s| {
        wkb_coefficient_stream(order, s)
            .map(|w| {
                let b = borel_transform(&w);
                hypergeometric_oracle(s, order + 1).iter().enumerate().all(|(n, h)| &b.coefficient(n) == h)
            })
            .unwrap_or(false)
    });
    push("borel coefficients, Gauss series", borel, json!({ "order": order }));

    let split = split_odd_even(&riccati_recurrence(4, Sign::Plus)).is_ok();
    push("odd/even split", split, json!({ "order": 4 }));

    let t43 = borel_branch_identities(6)?;
    push("borel transform as branch differences", t43.passed(), json!({ "order": 6, "first_mismatch": t43.first_mismatch }));

    let r3 = 3f64.sqrt() / 4.0;
    let mut worst: f64 = 0.0;
    for (s, want) in [(0.0, [r3, 0.0, -r3]), (1.0, [r3, 0.0, -r3]), (0.5, [0.5, -0.25, -0.25])] {
        let got = solve_cubic_x(Complex64::new(s, 0.0), SqrtRule::Principal)?;
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).norm());
        }
    }
    push("cubic root sets at anchors", worst < 1e-12, json!({ "max_error": worst }));

    let etas: &[f64] = if fast { &[5.0] } else { &[5.0, 10.0] };
    let x = Complex64::from_polar(1.0, -PI / 6.0);
    let mut link: f64 = 0.0;
    for &eta in etas {
        link = link.max(verify_airy_link(x, eta, tol)?.max_residual());
    }
    push("borel sums against Ai, Bi", link < AIRY_LINK_TOL, json!({ "x": cx(x), "eta": etas, "max_residual": link }));

    let grid = default_voros_grid();
    let grid: Vec<_> = if fast { grid.into_iter().step_by(10).collect() } else { grid };
    let rows = voros_grid(&grid, tol)?;
    let (plus, minus, voros_ok) = voros_summary(&rows);
    push("connection formula", voros_ok, json!({ "points": grid.len(), "max_plus_residual": plus, "max_minus_residual": minus }));

    let (p_order, p_points, p_ann) = if fast { (4, 30, 5) } else { (8, 100, 20) };
    let p = pearcey_verify(p_order, p_points, p_ann, 42)?;
    push("pearcey suite", p.passed(PEARCEY_ANNIHILATION_TOL), serde_json::to_value(&p).expect("report serializes"));

    let w = verify_operator_identities();
    push("weyl identities", w.passed(), json!({ "identities": w.identities.len() }));

    let passed = checks.iter().all(|c| c["passed"] == Value::Bool(true));
    let config = json!({ "command": "verify all", "fast": fast, "tol": tol, "version": version() });
    Ok((Report::Json(json!({ "config": config, "passed": passed, "checks": checks })), passed))
}

fn pearcey(c: &PearceyCmd) -> crate::Result<(Report, bool)> {
    match c {
        PearceyCmd::Recursion { order, .. } => {
            let w = pearcey_recursion(*order)?;
            let closed = check_closedness(&w);
            let prim = check_primitives(&w)?;
            let passed = closed.passed() && prim.passed();
            let terms: Vec<Value> = (-1..=w.order())
                .map(|k| {
                    json!({
                        "k": k,
                        "s": w.s_k(k).to_string(),
                        "t": w.t_k(k).to_string(),
                        "disc_power_s": w.s_k(k).disc_power(),
                        "disc_power_t": w.t_k(k).disc_power(),
                    })
                })
                .collect();
            let config = json!({ "command": "pearcey recursion", "order": order, "version": version() });
            Ok((Report::Json(json!({ "config": config, "passed": passed, "closedness": closed, "primitives": prim, "terms": terms })), passed))
        }
        PearceyCmd::Verify { order, points, annihilation_points, seed, .. } => {
            if *points == 0 {
                return Err(Error::Precondition("--points must be positive".into()));
            }
            let r = pearcey_verify(*order, *points, *annihilation_points, *seed)?;
            let passed = r.passed(PEARCEY_ANNIHILATION_TOL);
            let config = json!({
                "command": "pearcey verify", "order": order, "points": points,
                "annihilation_points": annihilation_points, "seed": seed,
                "annihilation_threshold": PEARCEY_ANNIHILATION_TOL, "version": version(),
            });
            Ok((Report::Json(json!({ "config": config, "passed": passed, "report": r })), passed))
        }
    }
}
