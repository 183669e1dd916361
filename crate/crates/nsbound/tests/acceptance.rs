//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is always printed. The
//! process fails if any criterion fails, except those listed in
//! `KNOWN_UNATTAINABLE`, which still print FAIL with the reason.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nsbound::example::{example_checks, expected_coefficient, EXAMPLE_MATRIX};
use nsbound::{format_poly, parse_input, parse_poly};
use nsbound_core::bound::ns_lower_bound;
use nsbound_core::density::linear_spaced;
use nsbound_core::{
    alpha_fit, analyze, determinant_reduction_check, log_spaced, matrix_density, product_inequality_check,
    scalar_density, universal_constant, AlphaLower, AnalyzeOptions, Exponent, GaussianRational, HermitianMatrix,
    LaurentPoly, PolyMatrix, TorusGrid,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose stated thresholds cannot hold for a correct implementation.
const KNOWN_UNATTAINABLE: &[(usize, &str)] = &[(
    2,
    "the interval [2.0212934, 2.0212936] excludes 8*sqrt(3)/sqrt(47) = 2.0211646105596..., \
     which is pinned by C^2*47 = 192",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn z_minus(a: GaussianRational) -> LaurentPoly {
    &LaurentPoly::var(1, 0) - &LaurentPoly::constant(1, a)
}

fn power(p: &LaurentPoly, r: u32) -> LaurentPoly {
    (0..r).fold(LaurentPoly::one(p.dim()), |acc, _| &acc * p)
}

fn random_poly(
    r: &mut ChaCha8Rng,
    dim: usize,
    max_terms: usize,
    exp: i64,
    coeff: &mut dyn FnMut(&mut ChaCha8Rng) -> GaussianRational,
) -> LaurentPoly {
    let n = r.gen_range(0..=max_terms);
    let terms: Vec<(Exponent, GaussianRational)> = (0..n)
        .map(|_| (Exponent::new((0..dim).map(|_| r.gen_range(-exp..=exp)).collect()), coeff(r)))
        .collect();
    LaurentPoly::from_terms(dim, terms).unwrap()
}

fn small_gaussian(r: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let (a, b) = (r.gen_range(-3i64..=3), r.gen_range(-3i64..=3));
        if a != 0 || b != 0 {
            return GaussianRational::from_ratios(a, 1, b, 1);
        }
    }
}

fn unit_choice(r: &mut ChaCha8Rng) -> GaussianRational {
    let choices = [(1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1)];
    let (a, b) = choices[r.gen_range(0..choices.len())];
    GaussianRational::from_ratios(a, 1, b, 1)
}

fn random_matrix(r: &mut ChaCha8Rng, k: usize, dim: usize, max_terms: usize) -> PolyMatrix {
    let rows = (0..k).map(|_| (0..k).map(|_| random_poly(r, dim, max_terms, 2, &mut small_gaussian)).collect()).collect();
    PolyMatrix::from_rows(rows).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let checks = example_checks().expect("example pipeline runs");
    let mut out = Vec::new();
    let code = nsbound::cli::run(["nsbound", "example"], &mut out, &mut std::io::sink());
    let elapsed = t.elapsed();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
    let text = String::from_utf8(out).unwrap();
    let pass = failed.is_empty() && code == 0 && text.contains("0 mismatches") && within(elapsed, 1.0);
    outcome(pass, format!("{} exact checks, failed {failed:?}, exit {code}, {:.3} s", checks.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let c = universal_constant();
    let squared = ((c * c * 47.0) / 192.0 - 1.0).abs() <= 1e-12;
    let interval = (2.0212934..=2.0212936).contains(&c);
    outcome(squared && interval, format!("C = {c:.12}, C^2*47 = 192: {squared}, C in [2.0212934, 2.0212936]: {interval}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let n = 1_000_000;
    let grid = TorusGrid::midpoint(1, n).unwrap();
    let lambdas = linear_spaced(0.02, 3.5, 64).unwrap();
    let c = universal_constant();
    let mut worst_oracle = 0.0f64;
    let mut worst_line = f64::NEG_INFINITY;
    for (num, den) in [(1, 2), (1, 1), (2, 1)] {
        let a = num as f64 / den as f64;
        let curve = scalar_density(&z_minus(GaussianRational::from_ratios(num, den, 0, 1)), &lambdas, &grid).unwrap();
        for (&l, &f) in lambdas.iter().zip(&curve.estimates) {
            let exact = (((1.0 + a * a - l * l) / (2.0 * a)).clamp(-1.0, 1.0)).acos() / PI;
            worst_oracle = worst_oracle.max((f - exact).abs());
            worst_line = worst_line.max(f - (c * l + 4.0 / n as f64));
        }
    }
    let elapsed = t.elapsed();
    let pass = worst_oracle <= 2e-3 && worst_line <= 0.0 && within(elapsed, 30.0);
    outcome(pass, format!("max |F - oracle| = {worst_oracle:.2e}, max F - (C*λ + 4/N) = {worst_line:.3}, {:.1} s", elapsed.as_secs_f64()))
}

fn criterion_4() -> Outcome {
    let p = parse_poly("5*z1^2*z2^-1", None).unwrap();
    let five = 5.0f64;
    let lambdas = [1e-3, 1.0, 4.999_999_999, five.next_down(), five, five.next_up(), 7.0, 1e3];
    let grids = [
        TorusGrid::midpoint(2, 3).unwrap(),
        TorusGrid::midpoint(2, 64).unwrap(),
        TorusGrid::midpoint(2, 1001).unwrap(),
        TorusGrid::lattice(2, 4099, 11).unwrap(),
    ];
    let mut bad = Vec::new();
    for g in &grids {
        let curve = scalar_density(&p, &lambdas, g).unwrap();
        for (&l, &f) in lambdas.iter().zip(&curve.estimates) {
            let want = if l < 5.0 { 0.0 } else { 1.0 };
            if f != want {
                bad.push((g.len(), l, f));
            }
        }
    }
    let report = analyze(&PolyMatrix::scalar(p), &AnalyzeOptions::default()).unwrap();
    let step = report.is_step && report.step_threshold() == Some(5.0) && report.alpha_lower == AlphaLower::InfiniteType;
    outcome(bad.is_empty() && step, format!("{} grids x {} λ, mismatches {bad:?}, step report {step}", grids.len(), lambdas.len()))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let lambdas = log_spaced(1e-3, 1e2, 40).unwrap();
    let mut mismatches = 0;
    for _ in 0..100 {
        let dim = r.gen_range(1..=2);
        let p = loop {
            let p = random_poly(&mut r, dim, 4, 3, &mut small_gaussian);
            if !p.is_zero() {
                break p;
            }
        };
        let c = loop {
            let (a, b, c, d) = (r.gen_range(-9..=9), r.gen_range(1..=5), r.gen_range(-9..=9), r.gen_range(1..=5));
            if a != 0 || c != 0 {
                break GaussianRational::from_ratios(a, b, c, d);
            }
        };
        let grid = TorusGrid::midpoint(dim, if dim == 1 { 4096 } else { 64 }).unwrap();
        let c_abs = c.to_complex64().norm();
        let scaled: Vec<f64> = lambdas.iter().map(|l| l / c_abs).collect();
        let f_cp = scalar_density(&p.scale(&c), &lambdas, &grid).unwrap();
        let f_p = scalar_density(&p, &scaled, &grid).unwrap();
        if f_cp.counts != f_p.counts {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 pairs, {mismatches} with differing sample counts"))
}

fn nonzero(r: &mut ChaCha8Rng, dim: usize, max_terms: usize, exp: i64) -> LaurentPoly {
    loop {
        let p = random_poly(r, dim, max_terms, exp, &mut small_gaussian);
        if !p.is_zero() {
            return p;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let grid = TorusGrid::midpoint(1, 100_000).unwrap();
    let lambdas = log_spaced(1e-4, 10.0, 64).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for _ in 0..50 {
        let q1 = nonzero(&mut r, 1, 3, 3);
        let q2 = nonzero(&mut r, 1, 3, 3);
        let rep = product_inequality_check(&q1, &q2, 0.5, &lambdas, &grid, 4.0).unwrap();
        worst = worst.max(rep.max_violation);
        if !rep.is_consistent() {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("50 pairs, worst excess {worst:.2e} vs eps_quad {:.1e}", grid.tolerance(4.0)))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let grid = TorusGrid::midpoint(1, 100_000).unwrap();
    let lambdas = log_spaced(1e-4, 10.0, 64).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    let mut done = 0;
    while done < 20 {
        let rows = (0..2).map(|_| (0..2).map(|_| random_poly(&mut r, 1, 2, 2, &mut unit_choice)).collect()).collect();
        let b = PolyMatrix::from_rows(rows).unwrap();
        if b.determinant().unwrap().is_zero() {
            continue;
        }
        let rep = determinant_reduction_check(&b, &lambdas, &grid, 4.0).unwrap();
        worst = worst.max(rep.max_violation);
        failures += usize::from(!rep.is_consistent());
        done += 1;
    }
    outcome(failures == 0, format!("20 matrices, worst excess {worst:.2e} vs eps_quad {:.1e}", grid.tolerance(4.0)))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let grid = TorusGrid::midpoint(1, 1_000_000).unwrap();
    let lambdas = log_spaced(1e-5, 1e-2, 64).unwrap();
    let base = z_minus(GaussianRational::from_integer(1));
    let mut parts = Vec::new();
    let mut pass = true;
    for rr in 1u32..=3 {
        let p = power(&base, rr);
        let curve = scalar_density(&p, &lambdas, &grid).unwrap();
        let fit = alpha_fit(&curve, (1e-5, 1e-2)).unwrap();
        let target = 1.0 / rr as f64;
        let lower = ns_lower_bound(1, rr as u64);
        let report = analyze(&PolyMatrix::scalar(p), &AnalyzeOptions::default()).unwrap();
        let exact = lower == AlphaLower::Finite { value: target, denominator: rr as u64 } && report.alpha_lower == lower;
        let ok = (fit.alpha_hat - target).abs() <= 0.05 && fit.r_squared >= 0.99 && exact;
        pass &= ok;
        parts.push(format!("r={rr}: slope {:.4} r^2 {:.5}", fit.alpha_hat, fit.r_squared));
    }
    let elapsed = t.elapsed();
    pass &= within(elapsed, 60.0);
    outcome(pass, format!("{}, {:.1} s", parts.join("; "), elapsed.as_secs_f64()))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let a = parse_input(EXAMPLE_MATRIX).unwrap();
    let n = 1500;
    let grid = TorusGrid::midpoint(2, n).unwrap();
    let eps = grid.tolerance(4.0);
    let lambdas = log_spaced(1e-4, 1.0, 64).unwrap();
    let curve = matrix_density(&a, 2, &lambdas, &grid).unwrap();
    let coef = expected_coefficient();
    let worst = lambdas
        .iter()
        .zip(curve.excess())
        .map(|(l, e)| e - coef * l.powf(0.25))
        .fold(f64::NEG_INFINITY, f64::max);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("example.mat");
    std::fs::write(&file, EXAMPLE_MATRIX).unwrap();
    let file = file.to_str().unwrap();
    let args = ["nsbound", "verify", file, "--grid", "1500", "--lambda-min", "1e-4", "--lambda-max", "1", "--points", "64"];
    let code = nsbound::cli::run(args, &mut std::io::sink(), &mut std::io::sink());
    let elapsed = t.elapsed();
    let pass = worst <= eps && code == 0 && within(elapsed, 300.0);
    outcome(pass, format!("max (F - 1 - bound) = {worst:.3} vs eps_quad {eps:.2e}, verify exit {code}, {:.1} s", elapsed.as_secs_f64()))
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut bareiss_bad = 0;
    for _ in 0..200 {
        let a = random_matrix(&mut r, 4, 2, 2);
        if a.determinant_bareiss().unwrap() != a.determinant_cofactor() {
            bareiss_bad += 1;
        }
    }
    let mut mult_bad = 0;
    for _ in 0..100 {
        let a = random_matrix(&mut r, 3, 2, 2);
        let b = random_matrix(&mut r, 3, 2, 2);
        let ab = a.try_mul(&b).unwrap();
        if ab.determinant().unwrap() != &a.determinant().unwrap() * &b.determinant().unwrap() {
            mult_bad += 1;
        }
    }
    outcome(bareiss_bad == 0 && mult_bad == 0, format!("Bareiss != cofactor: {bareiss_bad}/200, det(AB) != det A det B: {mult_bad}/100"))
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let mut worst_trace = 0.0f64;
    let mut worst_closed = 0.0f64;
    let mut twos = 0;
    for _ in 0..500 {
        let m = r.gen_range(1..=6);
        let g: Vec<Complex64> =
            (0..m * m).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let mut h = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                h[i * m + j] = (0..m).map(|k| g[i * m + k] * g[j * m + k].conj()).sum();
            }
        }
        let h = HermitianMatrix::from_row_major(m, h);
        let ev = h.eigenvalues().unwrap().eigenvalues;
        let trace = h.trace();
        worst_trace = worst_trace.max((ev.iter().sum::<f64>() - trace).abs() / trace);
        if m == 2 {
            twos += 1;
            let (a, d, b) = (h.get(0, 0).re, h.get(1, 1).re, h.get(0, 1).norm_sqr());
            let disc = ((a - d) * (a - d) + 4.0 * b).sqrt();
            let want = [(a + d - disc) / 2.0, (a + d + disc) / 2.0];
            for (x, y) in ev.iter().zip(want) {
                worst_closed = worst_closed.max((x - y).abs() / trace.max(1.0));
            }
        }
    }
    let pass = worst_trace <= 1e-10 && worst_closed <= 1e-10;
    outcome(pass, format!("500 matrices, worst trace error {worst_trace:.1e}, worst 2x2 closed-form error {worst_closed:.1e} ({twos} cases)"))
}

fn criterion_12() -> Outcome {
    let mut r = rng(12);
    let mut bad = 0;
    for _ in 0..1000 {
        let dim = r.gen_range(1..=3);
        let p = random_poly(&mut r, dim, 10, 9, &mut |r: &mut ChaCha8Rng| {
            GaussianRational::from_ratios(
                r.gen_range(-10_000..=10_000),
                r.gen_range(1..=10_000),
                r.gen_range(-10_000..=10_000),
                r.gen_range(1..=10_000),
            )
        });
        if parse_poly(&format_poly(&p), Some(dim)).ok().as_ref() != Some(&p) {
            bad += 1;
        }
    }
    let a = parse_input(EXAMPLE_MATRIX).unwrap();
    let rep = analyze(&a, &AnalyzeOptions::default()).unwrap();
    let example_ok = rep.params.k == 2
        && format_poly(&rep.minor.det) == "2*z1*z2^2 + z1^3*z2 - 16"
        && format_poly(&rep.profile.tower[1]) == "2*z1"
        && rep.profile.wd == 2
        && rep.profile.lead == GaussianRational::from_integer(2)
        && a.l1_norm() == 18.0
        && rep.params.b_l1 == 18.0
        && rep.alpha_lower == AlphaLower::Finite { value: 0.25, denominator: 4 }
        && ((rep.coefficient.unwrap() - expected_coefficient()) / expected_coefficient()).abs() <= 1e-12;
    outcome(bad == 0 && example_ok, format!("{bad}/1000 round-trip failures, example file analysis matches: {example_ok}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("worked 2x3 example, exact values", criterion_1),
        ("universal constant", criterion_2),
        ("linear factor densities vs arc-measure oracle", criterion_3),
        ("width-zero step case", criterion_4),
        ("scaling identity, exact counts", criterion_5),
        ("product inequality", criterion_6),
        ("determinant reduction inequality", criterion_7),
        ("exponent attained by (z-1)^r", criterion_8),
        ("bound dominates density on the 2x3 example", criterion_9),
        ("determinant oracles", criterion_10),
        ("Hermitian eigensolver", criterion_11),
        ("parser round trip and example file", criterion_12),
    ];
    let mut unexpected = Vec::new();
    let mut known = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict}  {name} ({:.2} s): {}", t.elapsed().as_secs_f64(), result.detail);
        if !result.pass {
            match KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => {
                    println!("             known unattainable: {why}");
                    known.push(id);
                }
                None => unexpected.push(id),
            }
        }
    }
    let passed = criteria.len() - unexpected.len() - known.len();
    println!("acceptance: {passed}/{} passed, known unattainable {known:?}, unexpected failures {unexpected:?}", criteria.len());
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
