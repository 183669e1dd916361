//! Human-readable analysis reports.

use std::fmt::Write as _;

use nsbound_core::{AlphaLower, BoundReport, PolyMatrix};

use crate::text::{format_coefficient, format_poly};

fn index_set(ix: &[usize]) -> String {
    let parts: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn alpha_text(a: &AlphaLower) -> String {
    match a {
        AlphaLower::Finite { denominator: 1, .. } => "1".into(),
        AlphaLower::Finite { denominator, .. } => format!("1/{denominator}"),
        AlphaLower::InfiniteType => "infinite-type".into(),
    }
}

/// One-line summary such as `k=2 wd=2 lead=2 ||B||_1=18 bound=39.60…*λ^0.25 alpha≥0.25`.
pub fn summary_line(r: &BoundReport) -> String {
    let head = format!(
        "k={} wd={} lead={} ||B||_1={}",
        r.params.k,
        r.profile.wd,
        format_coefficient(&r.profile.lead),
        r.params.b_l1
    );
    match (r.coefficient, r.exponent) {
        (Some(c), Some(e)) => format!("{head} bound={c}*λ^{e} alpha≥{}", r.alpha_lower.value()),
        _ => format!(
            "{head} bound=step at {}; alpha: infinite-type",
            r.step_threshold().expect("step case has a threshold")
        ),
    }
}

/// Full multi-line report of every quantity on the way to the bound.
pub fn analysis_text(a: &PolyMatrix, r: &BoundReport) -> String {
    let mut s = String::new();
    let vars: Vec<String> = r.ordering().iter().map(|v| format!("z{}", v + 1)).collect();
    let w = |s: &mut String, k: &str, v: String| writeln!(s, "{k:<18}{v}").expect("string write");
    w(&mut s, "matrix", format!("{}x{} over C[Z^{}]", a.rows(), a.cols(), a.dim()));
    w(&mut s, "||A||_1", a.l1_norm().to_string());
    w(&mut s, "k", r.params.k.to_string());
    w(&mut s, "rows I", index_set(&r.minor.row_set));
    w(&mut s, "columns J", index_set(&r.minor.col_set));
    w(&mut s, "det(B)", format_poly(&r.minor.det));
    w(&mut s, "ordering", format!("({}), eliminated last to first", vars.join(", ")));
    let tw = r.profile.tower_widths();
    for (i, p) in r.profile.tower.iter().enumerate() {
        let width = r.profile.widths.get(i).map_or("-".to_string(), u64::to_string);
        w(&mut s, &format!("p_{i}"), format!("{}    w={width} wd={}", format_poly(p), tw[i]));
    }
    w(&mut s, "wd", r.profile.wd.to_string());
    w(&mut s, "lead", format_coefficient(&r.profile.lead));
    w(&mut s, "|lead|", r.params.lead_abs.to_string());
    w(&mut s, "||B||_1", r.params.b_l1.to_string());
    w(&mut s, "f_zero", format!("{} (= {} - {})", r.f_zero(), r.domain_dim, r.params.k));
    match (r.coefficient, r.exponent) {
        (Some(c), Some(e)) => {
            w(&mut s, "bound coefficient", c.to_string());
            w(&mut s, "bound exponent", format!("{e} (= 1/{})", r.profile.scaled_width()));
        }
        _ => {
            let t = r.step_threshold().expect("step case has a threshold");
            w(&mut s, "bound", format!("step: 0 below λ = {t}, {} at and above", r.params.k));
        }
    }
    w(&mut s, "alpha_lower", alpha_text(&r.alpha_lower));
    writeln!(s, "{}", summary_line(r)).expect("string write");
    s
}
