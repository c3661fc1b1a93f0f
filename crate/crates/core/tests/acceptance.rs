//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the lines are
//! always printed; the process fails if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use exact_wkb::airy_borel::{borel_transform, hypergeometric_oracle};
use exact_wkb::airy_wkb::{closed_form_coefficients, integrate_s_odd, riccati_recurrence, split_odd_even, wkb_coefficient_stream};
use exact_wkb::branches::{
    branch_series, continue_branch, g_system_residuals, solve_cubic_x, borel_branch_identities, Anchor, BranchLabel,
    BranchValue, SqrtRule, TrackOptions,
};
use exact_wkb::pearcey::{self, pearcey_verify, sample_points};
use exact_wkb::resummation::{self, default_voros_grid, verify_airy_link, voros_grid};
use exact_wkb::series::{EtaExpansion, ExactScalar, Exponent};
use exact_wkb::weyl::verify_operator_identities;
use exact_wkb::Sign;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Rational coefficient of `eta^{-k} x^{h/2}` in an expansion.
fn coeff(a: &EtaExpansion, k: i64, h: i64) -> ExactScalar {
    a.coeff(k).coeff(Exponent::halves(h))
}

fn criterion1() -> Outcome {
    let r = riccati_recurrence(4, Sign::Plus);
    let (odd, even) = split_odd_even(&r).map_err(e)?;
    let prim = integrate_s_odd(&odd).map_err(e)?;
    let want = [
        ("S_odd eta^1 x^1/2", coeff(&odd, -1, 1), ExactScalar::one()),
        ("S_odd eta^-1 x^-5/2", coeff(&odd, 1, -5), ExactScalar::ratio(-5, 32)),
        ("S_odd eta^-3 x^-11/2", coeff(&odd, 3, -11), ExactScalar::ratio(-1105, 2048)),
        ("S_even eta^0 x^-1", coeff(&even, 0, -2), ExactScalar::ratio(-1, 4)),
        ("S_even eta^-2 x^-4", coeff(&even, 2, -8), ExactScalar::ratio(-15, 64)),
        ("int S_odd eta^1 x^3/2", coeff(&prim, -1, 3), ExactScalar::ratio(2, 3)),
        ("int S_odd eta^-1 x^-3/2", coeff(&prim, 1, -3), ExactScalar::ratio(5, 48)),
        ("int S_odd eta^-3 x^-9/2", coeff(&prim, 3, -9), ExactScalar::ratio(1105, 9216)),
    ];
    for (name, got, expected) in &want {
        ensure(got == expected, || format!("{name}: got {got}, expected {expected}"))?;
    }
    // the odd and even parts carry nothing else
    ensure(odd.terms().len() == 3 && even.terms().len() == 3, || "unexpected extra terms".into())?;
    Ok(format!("{} displayed coefficients exact", want.len()))
}

fn criterion2() -> Outcome {
    for sign in [Sign::Plus, Sign::Minus] {
        let stream = wkb_coefficient_stream(20, sign).map_err(e)?;
        let closed = closed_form_coefficients(20, sign);
        ensure(stream.coeffs.len() == 21, || "stream length".into())?;
        for (n, (a, b)) in stream.coeffs.iter().zip(&closed).enumerate() {
            ensure(a == b, || format!("sign {sign}, n = {n}: {a} vs {b}"))?;
        }
    }
    Ok("c_n equal for n <= 20, both signs".into())
}

fn criterion3() -> Outcome {
    for sign in [Sign::Plus, Sign::Minus] {
        let b = borel_transform(&wkb_coefficient_stream(20, sign).map_err(e)?);
        let h = hypergeometric_oracle(sign, 21);
        for (n, hn) in h.iter().enumerate() {
            let bn = b.coefficient(n);
            ensure(&bn == hn, || format!("sign {sign}, n = {n}: {bn} vs {hn}"))?;
        }
    }
    Ok("b_n equal to Gauss coefficients for n <= 20, both signs".into())
}

fn criterion4() -> Outcome {
    let r = borel_branch_identities(6).map_err(e)?;
    ensure(r.plus_at_zero && r.minus_at_one && r.minus_form && r.g_sum_zero == [true, true], || {
        format!("mismatch: {:?}", r.first_mismatch)
    })?;
    Ok("both identities exact through order 6".into())
}

fn criterion5() -> Outcome {
    let r3 = 3f64.sqrt() / 4.0;
    let mut worst: f64 = 0.0;
    for (s, want) in [(0.0, [r3, 0.0, -r3]), (1.0, [r3, 0.0, -r3]), (0.5, [0.5, -0.25, -0.25])] {
        let got = solve_cubic_x(c(s, 0.0), SqrtRule::Principal).map_err(e)?;
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).norm());
        }
    }
    ensure(worst < 1e-12, || format!("root sets off by {worst:e}"))?;

    let opts = TrackOptions::default();
    let leading = [r3, 0.0, -r3];
    let mut series_gap: f64 = 0.0;
    for j in 1..=3 {
        let start = BranchValue::new(BranchLabel::x(j, Anchor::Zero), c(0.01, 0.0), c(1.0, 0.0), &opts).map_err(e)?;
        let end = continue_branch(&start, &[c(0.99, 0.0)], &opts).map_err(e)?;
        let series = branch_series(BranchLabel::x(j, Anchor::One), 8).map_err(e)?;
        let predicted = series.eval_at_sqrt(c(0.1, 0.0));
        series_gap = series_gap.max((end.value - predicted).norm());
        ensure((end.value - leading[j - 1]).norm() < 0.2, || format!("X{j} did not land near its leading constant"))?;
    }
    ensure(series_gap < 1e-6, || format!("continued values differ from the s = 1 series by {series_gap:e}"))?;
    Ok(format!("root sets within {worst:.1e}, continuation within {series_gap:.1e} of the s = 1 series"))
}

fn criterion6() -> Outcome {
    let x = Complex64::from_polar(1.0, -PI / 6.0);
    let mut worst: f64 = 0.0;
    for eta in [5.0, 10.0] {
        let r = verify_airy_link(x, eta, 1e-12).map_err(e)?;
        worst = worst.max(r.ai_residual).max(r.bi_residual);
    }
    ensure(worst < 1e-6, || format!("Ai/Bi relative residual {worst:e}"))?;
    Ok(format!("max Ai/Bi relative residual {worst:.2e}"))
}

fn criterion7() -> Outcome {
    let grid = default_voros_grid();
    ensure(grid.len() == 30, || "grid must hold 10 x-values times 3 eta".into())?;
    let rows = voros_grid(&grid, 1e-11).map_err(e)?;
    let mut plus: f64 = 0.0;
    let mut minus: f64 = 0.0;
    for r in &rows {
        ensure(r.residual_tilted_ray.is_some(), || format!("no tilted-ray route at x = {}", r.x))?;
        plus = plus.max(r.plus_residual());
        minus = minus.max(r.residual_minus);
    }
    ensure(plus < 1e-6, || format!("Psi_+ residual {plus:e}"))?;
    ensure(minus < 1e-8, || format!("Psi_- residual {minus:e}"))?;
    Ok(format!("30 points, max Psi_+ residual {plus:.2e} (both routes), max Psi_- residual {minus:.2e}"))
}

fn criterion8() -> Outcome {
    let r = pearcey_verify(8, 100, 20, 42).map_err(e)?;
    ensure(r.closedness.passed(), || format!("closedness fails at k = {:?}", r.closedness.first_failure))?;
    ensure(r.primitives.passed(), || format!("primitive identity fails at k = {:?}", r.primitives.first_failure))?;
    ensure(r.closedness.checked.iter().any(|(k, _)| *k == 8), || "closedness not checked up to k = 8".into())?;
    ensure(r.max_quartic_residual < 1e-12, || format!("quartic residual {:e}", r.max_quartic_residual))?;
    ensure(r.max_root_sum < 1e-12, || format!("root sum {:e}", r.max_root_sum))?;
    let ann = r.max_annihilation.iter().copied().fold(0.0, f64::max);
    ensure(ann < 1e-8, || format!("annihilation residual {ann:e}"))?;
    Ok(format!(
        "exact to k = 8; quartic {:.1e}, root sum {:.1e}, annihilation {ann:.1e}",
        r.max_quartic_residual, r.max_root_sum
    ))
}

fn criterion9() -> Outcome {
    let r = verify_operator_identities();
    for id in &r.identities {
        ensure(id.holds, || format!("{}: {}", id.name, id.difference.clone().unwrap_or_default()))?;
    }
    ensure(r.identities.len() >= 4, || "missing identities".into())?;
    Ok(format!("{} identities reduce to the zero normal form", r.identities.len()))
}

fn criterion10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut prop: f64 = 0.0;
    let mut n = 0;
    while n < 50 {
        let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let y = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if (9.0 * y * y - 4.0 * x * x * x).norm() < 1e-2 {
            continue;
        }
        for r in g_system_residuals(x, y).map_err(e)? {
            prop = prop.max(r.wave).max(r.euler);
        }
        n += 1;
    }
    ensure(prop < 1e-8, || format!("g-system residual {prop:e}"))?;

    let mut airy: f64 = 0.0;
    for (x, eta) in [(Complex64::from_polar(1.0, -PI / 4.0), 6.0), (Complex64::from_polar(0.9, PI / 3.0), 8.0)] {
        for sign in [Sign::Plus, Sign::Minus] {
            for lambda in [0.8, 1.25] {
                airy = airy.max(resummation::homogeneity_defect(sign, x, eta, lambda, 1e-13).map_err(e)?);
            }
        }
    }
    ensure(airy < 1e-10, || format!("Airy homogeneity defect {airy:e}"))?;

    let mut pg: f64 = 0.0;
    for p in sample_points(20, 7) {
        for lambda in [0.8, 1.25, 2.0] {
            pg = pg.max(pearcey::homogeneity_defect(p[0], p[1], p[2], lambda).map_err(e)?);
        }
    }
    ensure(pg < 1e-10, || format!("Pearcey homogeneity defect {pg:e}"))?;

    let commands: [&[&str]; 4] = [
        &["exwkb", "pearcey", "verify", "--points", "40", "--annihilation-points", "8", "--seed", "42", "--json"],
        &["exwkb", "verify", "voros", "--grid", "default", "--json"],
        &["exwkb", "branches", "trace", "--label", "g2", "--x", "0.7,-0.2", "--csv"],
        &["exwkb", "wkb", "borel", "--sign", "-", "--order", "12"],
    ];
    for args in commands {
        let a = exact_wkb::cli::run(args.iter().copied());
        let b = exact_wkb::cli::run(args.iter().copied());
        ensure(a.code == 0, || format!("`{}` exited with {}: {}", args.join(" "), a.code, a.stderr))?;
        ensure(a.stdout == b.stdout, || format!("`{}` is not reproducible", args.join(" ")))?;
    }
    Ok(format!("system residual {prop:.1e}, homogeneity {:.1e}/{pg:.1e}, reports byte-identical", airy))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 exact coefficient reproduction", criterion1, Some(Duration::from_secs(1))),
        ("2 double derivation of c_n", criterion2, Some(Duration::from_secs(5))),
        ("3 Borel coefficients vs 2F1", criterion3, None),
        ("4 Borel transforms as branch differences", criterion4, Some(Duration::from_secs(10))),
        ("5 cubic branch facts", criterion5, None),
        ("6 Borel sums vs Ai and Bi", criterion6, Some(Duration::from_secs(30))),
        ("7 connection formula on the grid", criterion7, Some(Duration::from_secs(120))),
        ("8 Pearcey suite", criterion8, Some(Duration::from_secs(120))),
        ("9 Weyl operator identities", criterion9, Some(Duration::from_secs(1))),
        ("10 property suites and determinism", criterion10, None),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(msg), Some(b)) if elapsed > b => Err(format!("{msg}, but took {elapsed:.2?} (budget {b:?})")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
