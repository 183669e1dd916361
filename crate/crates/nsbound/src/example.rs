//! Built-in 2x3 example over `C[Z^2]`, with every exact intermediate value checked.

use std::io::Write;

use nsbound_core::{analyze, gram_spectrum, universal_constant, AlphaLower, AnalyzeOptions, TorusPoint};

use crate::input::parse_input;
use crate::report::alpha_text;
use crate::text::{format_coefficient, format_poly, parse_poly};

/// The example matrix file shipped with the crate.
pub const EXAMPLE_MATRIX: &str = include_str!("../data/example.mat");

/// `192·√2/√47`, the bound coefficient for the example.
pub fn expected_coefficient() -> f64 {
    192.0 * 2f64.sqrt() / 47f64.sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub computed: String,
    pub expected: String,
    pub ok: bool,
}

fn check(name: &'static str, computed: impl ToString, expected: impl ToString, ok: bool) -> Check {
    Check { name, computed: computed.to_string(), expected: expected.to_string(), ok }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

/// Every check, in report order. An `Err` means the pipeline itself failed.
pub fn example_checks() -> Result<Vec<Check>, String> {
    let a = parse_input(EXAMPLE_MATRIX).map_err(|e| e.to_string())?;
    let r = analyze(&a, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    let p = parse_poly("z1^3*z2 + 2*z1*z2^2 - 16", Some(2)).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    out.push(check("shape (rows x cols, d)", format!("{}x{}, d={}", a.rows(), a.cols(), a.dim()), "2x3, d=2", (a.rows(), a.cols(), a.dim()) == (2, 3, 2)));
    out.push(check("||A||_1", a.l1_norm(), 18, a.l1_norm() == 18.0));
    out.push(check("k", r.params.k, 2, r.params.k == 2));
    out.push(check("minor rows, columns", format!("{:?}, {:?}", r.minor.row_set, r.minor.col_set), "[0, 1], [0, 1]", r.minor.row_set == [0, 1] && r.minor.col_set == [0, 1]));
    out.push(check("p = det(B)", format_poly(&r.minor.det), "2*z1*z2^2 + z1^3*z2 - 16", r.minor.det == p));
    let p1 = r.profile.tower.get(1).map(format_poly).unwrap_or_default();
    out.push(check("p_1", &p1, "2*z1", p1 == "2*z1"));
    out.push(check("widths (w_0, w_1)", format!("{:?}", r.profile.widths), "[2, 0]", r.profile.widths == [2, 0]));
    out.push(check("wd(p)", r.profile.wd, 2, r.profile.wd == 2));
    let lead = format_coefficient(&r.profile.lead);
    out.push(check("lead(p)", &lead, 2, lead == "2"));
    out.push(check("||B||_1", r.params.b_l1, 18, r.params.b_l1 == 18.0));
    out.push(check("f_zero = m - k", r.f_zero(), 1, r.f_zero() == 1));
    let alpha_ok = matches!(r.alpha_lower, AlphaLower::Finite { denominator: 4, .. });
    out.push(check("alpha lower bound", alpha_text(&r.alpha_lower), "1/4", alpha_ok));
    out.push(check("bound exponent", r.exponent.unwrap_or(f64::NAN), 0.25, r.exponent == Some(0.25)));
    let coef = r.coefficient.unwrap_or(f64::NAN);
    let want = expected_coefficient();
    out.push(check("bound coefficient", coef, format!("192*sqrt(2)/sqrt(47) = {want}"), rel_close(coef, want, 1e-12)));
    let cross = coef * coef * 47.0 / (192.0 * 192.0 * 2.0);
    out.push(check("coefficient^2*47/(192^2*2)", cross, 1, (cross - 1.0).abs() <= 1e-12));
    let c = universal_constant();
    out.push(check("C = 8*sqrt(3)/sqrt(47)", c, "C^2*47 = 192", rel_close(c * c * 47.0, 192.0, 1e-12)));
    let b = a.submatrix(&r.minor.row_set, &r.minor.col_set).map_err(|e| e.to_string())?;
    let spectrum = gram_spectrum(&b, &TorusPoint::new(vec![0.0, 0.0])).map_err(|e| e.to_string())?;
    let (lo, hi) = (spectrum.eigenvalues[0], spectrum.eigenvalues[1]);
    let disc = 38925f64.sqrt();
    let (want_lo, want_hi) = ((199.0 - disc) / 2.0, (199.0 + disc) / 2.0);
    out.push(check("Gram of B(1,1): trace", lo + hi, 199, rel_close(lo + hi, 199.0, 1e-12)));
    out.push(check("Gram of B(1,1): det", lo * hi, 169, rel_close(lo * hi, 169.0, 1e-9)));
    out.push(check(
        "Gram of B(1,1): eigenvalues",
        format!("{lo}, {hi}"),
        format!("(199 -+ sqrt(38925))/2 = {want_lo}, {want_hi}"),
        rel_close(lo, want_lo, 1e-10) && rel_close(hi, want_hi, 1e-10),
    ));
    Ok(out)
}

/// Prints the checks side by side; exit 0 iff all pass.
pub fn run_example(out: &mut dyn Write) -> i32 {
    let checks = match example_checks() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(out, "example pipeline failed: {e}");
            return crate::cli::exit::FAILED;
        }
    };
    let mut text = String::from("A = [[z1^3, -1, 1], [2*z1*z2^2 - 16, z2, z1*z2]]\n");
    for c in &checks {
        text.push_str(&format!(
            "{:<30} {:<44} expected {:<40} {}\n",
            c.name,
            c.computed,
            c.expected,
            if c.ok { "ok" } else { "MISMATCH" }
        ));
    }
    let failed = checks.iter().filter(|c| !c.ok).count();
    text.push_str(&format!("{} checks, {failed} mismatches\n", checks.len()));
    let _ = out.write_all(text.as_bytes());
    if failed == 0 {
        crate::cli::exit::OK
    } else {
        crate::cli::exit::FAILED
    }
}
