//! CSV output of density curves: `lambda,f_hat,f_zero,bound,margin`.

use std::io::Write;

use nsbound_core::DensityCurve;

pub const HEADER: [&str; 5] = ["lambda", "f_hat", "f_zero", "bound", "margin"];

/// 17 significant digits, enough to round-trip any double.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per `λ`; `margin = bound − (f_hat − f_zero)`.
pub fn write_curve<W: Write>(out: W, curve: &DensityCurve, bound: impl Fn(f64) -> f64) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (&l, &f) in curve.lambdas.iter().zip(&curve.estimates) {
        let b = bound(l);
        let margin = b - (f - curve.f_zero as f64);
        w.write_record([float(l), float(f), curve.f_zero.to_string(), float(b), float(margin)])?;
    }
    w.flush()?;
    Ok(())
}
