//! Brute-force spectral density estimation over the torus.
//!
//! For a matrix `A` over `C[Z^d]` acting on `L²(Z^d)^m`, the spectral density
//! is `F(λ) = ∫_{T^d} #{i : σ_i(A(z)) ≤ λ} dμ(z)`, with `σ_i` the singular
//! values of the evaluated matrix. Each grid node is evaluated once, the
//! samples are sorted, and every `λ` is resolved by binary search.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bound::rescale_lambda;
use crate::error::{DensityError, MatrixError};
use crate::jacobi::{clamp_small_negatives, jacobi_in_place, HermitianMatrix, HermitianSpectrum};
use crate::matrix::PolyMatrix;
use crate::poly::{LaurentPoly, NumericPoly};
use crate::torus::{TorusGrid, TorusPoint};

/// Estimated spectral density on a `λ` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurve {
    pub lambdas: Vec<f64>,
    /// `F̂(λ)`, one per entry of `lambdas`.
    pub estimates: Vec<f64>,
    /// Raw sample counts behind each estimate: `estimate = count / samples`.
    pub counts: Vec<u64>,
    /// `F(0) = m − k`, set from the minor rank rather than estimated.
    pub f_zero: usize,
    /// Number of quadrature nodes.
    pub samples: usize,
    pub subject: String,
}

impl DensityCurve {
    /// `F̂(λ) − F(0)` per grid point.
    pub fn excess(&self) -> impl Iterator<Item = f64> + '_ {
        self.estimates.iter().map(move |f| f - self.f_zero as f64)
    }
}

/// `count` log-spaced values from `min` to `max` inclusive.
pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Vec<f64>, DensityError> {
    if !(min > 0.0 && max >= min && count >= 2) {
        return Err(DensityError::InvalidParameter("log spacing needs 0 < min <= max and count >= 2"));
    }
    let (a, b) = (libm::log(min), libm::log(max));
    let mut out: Vec<f64> =
        (0..count).map(|i| libm::exp(a + (b - a) * i as f64 / (count - 1) as f64)).collect();
    out[0] = min;
    out[count - 1] = max;
    Ok(out)
}

/// `count` evenly spaced values from `min` to `max` inclusive.
pub fn linear_spaced(min: f64, max: f64, count: usize) -> Result<Vec<f64>, DensityError> {
    if !(min >= 0.0 && max >= min && count >= 2) {
        return Err(DensityError::InvalidParameter("linear spacing needs 0 <= min <= max and count >= 2"));
    }
    Ok((0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect())
}

fn check_lambdas(lambdas: &[f64]) -> Result<(), DensityError> {
    if lambdas.is_empty() {
        return Err(DensityError::EmptyLambdas);
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) || lambdas.iter().any(|l| l.is_nan()) {
        return Err(DensityError::UnsortedLambdas);
    }
    Ok(())
}

fn check_grid(grid: &TorusGrid, dim: usize) -> Result<(), DensityError> {
    if grid.dim() != dim {
        return Err(DensityError::DimensionMismatch { expected: dim, found: grid.dim() });
    }
    Ok(())
}

/// Evaluates `per_point` samples at every grid node into a flat buffer.
fn sample_grid<S, I, F>(grid: &TorusGrid, per_point: usize, init: I, f: F) -> Result<Vec<f64>, DensityError>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[f64], &mut [f64]) -> Result<(), DensityError> + Sync + Send,
{
    let mut out = vec![0.0f64; grid.len() * per_point];
    let dim = grid.dim();
    let body = |(state, angles): &mut (S, Vec<f64>), (i, chunk): (usize, &mut [f64])| {
        grid.fill_angles(i, angles);
        f(state, angles, chunk)
    };
    let init = || (init(), vec![0.0; dim]);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_chunks_mut(per_point).enumerate().try_for_each_init(init, body)?;
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut state = init();
        out.chunks_mut(per_point).enumerate().try_for_each(|x| body(&mut state, x))?;
    }
    Ok(out)
}

fn sort_samples(v: &mut [f64]) {
    #[cfg(feature = "parallel")]
    {
        use rayon::slice::ParallelSliceMut;
        v.par_sort_unstable_by(f64::total_cmp);
    }
    #[cfg(not(feature = "parallel"))]
    v.sort_unstable_by(f64::total_cmp);
}

/// Number of sorted samples `≤ λ` for each `λ`.
fn counts_at(sorted: &[f64], lambdas: &[f64]) -> Vec<u64> {
    lambdas.iter().map(|&l| sorted.partition_point(|&x| x <= l) as u64).collect()
}

fn curve_from_samples(
    mut samples: Vec<f64>,
    nodes: usize,
    lambdas: &[f64],
    f_zero: usize,
    subject: String,
) -> DensityCurve {
    sort_samples(&mut samples);
    let counts = counts_at(&samples, lambdas);
    let estimates = counts.iter().map(|&c| c as f64 / nodes as f64).collect();
    DensityCurve { lambdas: lambdas.to_vec(), estimates, counts, f_zero, samples: nodes, subject }
}

/// `F̂_p(λ)`: the fraction of nodes with `|p(z)| ≤ λ`.
pub fn scalar_density(p: &LaurentPoly, lambdas: &[f64], grid: &TorusGrid) -> Result<DensityCurve, DensityError> {
    if p.is_zero() {
        return Err(DensityError::ZeroPolynomial);
    }
    check_lambdas(lambdas)?;
    check_grid(grid, p.dim())?;
    let num = NumericPoly::new(p);
    let samples = sample_grid(grid, 1, || (), |_, angles, out| {
        out[0] = num.modulus_at(angles);
        Ok(())
    })?;
    Ok(curve_from_samples(samples, grid.len(), lambdas, 0, alloc::format!("{p:?}")))
}

/// Numeric copy of a matrix plus scratch space for one Gram solve.
struct GramEvaluator {
    rows: usize,
    cols: usize,
    entries: Vec<NumericPoly>,
    /// Set when every column holds at most one non-zero entry, in distinct rows.
    /// The Gram matrix is then diagonal and the singular values are entry moduli.
    separated: Option<Vec<Option<usize>>>,
}

fn separated_columns(a: &PolyMatrix) -> Option<Vec<Option<usize>>> {
    let mut used_rows = vec![false; a.rows()];
    (0..a.cols())
        .map(|j| {
            let mut nz = (0..a.rows()).filter(|&i| !a.get(i, j).is_zero());
            match (nz.next(), nz.next()) {
                (None, _) => Some(None),
                (Some(i), None) if !used_rows[i] => {
                    used_rows[i] = true;
                    Some(Some(i * a.cols() + j))
                }
                _ => None,
            }
        })
        .collect()
}

struct GramScratch {
    values: Vec<Complex64>,
    gram: Vec<Complex64>,
}

impl GramEvaluator {
    fn new(a: &PolyMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            entries: a.entries().iter().map(NumericPoly::new).collect(),
            separated: separated_columns(a),
        }
    }

    fn scratch(&self) -> GramScratch {
        GramScratch {
            values: vec![Complex64::new(0.0, 0.0); self.rows * self.cols],
            gram: vec![Complex64::new(0.0, 0.0); self.cols * self.cols],
        }
    }

    /// Fills `scratch.gram` with `A(z)*·A(z)`.
    fn fill_gram(&self, s: &mut GramScratch, angles: &[f64]) {
        let (m, n) = (self.rows, self.cols);
        for (v, e) in s.values.iter_mut().zip(&self.entries) {
            *v = e.eval(angles);
        }
        for i in 0..n {
            let mut d = 0.0;
            for r in 0..m {
                let a = s.values[r * n + i];
                d += a.re * a.re + a.im * a.im;
            }
            s.gram[i * n + i] = Complex64::new(d, 0.0);
            for j in i + 1..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..m {
                    acc += s.values[r * n + i].conj() * s.values[r * n + j];
                }
                s.gram[i * n + j] = acc;
                s.gram[j * n + i] = acc.conj();
            }
        }
    }

    /// Sorted eigenvalues of `A(z)*·A(z)` into `out`.
    fn eigenvalues(&self, s: &mut GramScratch, angles: &[f64], out: &mut [f64]) -> Result<(), DensityError> {
        self.fill_gram(s, angles);
        jacobi_in_place(self.cols, &mut s.gram, out)?;
        clamp_small_negatives(out);
        Ok(())
    }

    /// Sorted singular values of `A(z)`, computed as `sqrt` of the Gram eigenvalues.
    fn singular_values(&self, s: &mut GramScratch, angles: &[f64], out: &mut [f64]) -> Result<(), DensityError> {
        if let Some(sep) = &self.separated {
            for (v, e) in out.iter_mut().zip(sep) {
                *v = e.map_or(0.0, |idx| self.entries[idx].modulus_at(angles));
            }
            out.sort_unstable_by(f64::total_cmp);
            return Ok(());
        }
        self.eigenvalues(s, angles, out)?;
        for v in out.iter_mut() {
            *v = libm::sqrt(v.max(0.0));
        }
        Ok(())
    }
}

/// Eigenvalues of the Gram matrix `A(z)*·A(z)` (size `cols`), ascending.
pub fn gram_spectrum(a: &PolyMatrix, point: &TorusPoint) -> Result<HermitianSpectrum, DensityError> {
    check_grid_dim(a.dim(), point.dim())?;
    let ev = GramEvaluator::new(a);
    let mut s = ev.scratch();
    let mut out = vec![0.0; a.cols()];
    ev.eigenvalues(&mut s, point.angles(), &mut out)?;
    Ok(HermitianSpectrum { eigenvalues: out })
}

/// The Gram matrix `A(z)*·A(z)` itself.
pub fn gram_matrix(a: &PolyMatrix, point: &TorusPoint) -> Result<HermitianMatrix, DensityError> {
    check_grid_dim(a.dim(), point.dim())?;
    let ev = GramEvaluator::new(a);
    let mut s = ev.scratch();
    ev.fill_gram(&mut s, point.angles());
    Ok(HermitianMatrix::from_row_major(a.cols(), s.gram))
}

fn check_grid_dim(expected: usize, found: usize) -> Result<(), DensityError> {
    if expected != found {
        return Err(DensityError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `F̂_A(λ)`: average over nodes of the number of singular values `≤ λ`.
///
/// `k` is the maximal non-vanishing minor size; `F(0)` is recorded as `cols − k`.
pub fn matrix_density(
    a: &PolyMatrix,
    k: usize,
    lambdas: &[f64],
    grid: &TorusGrid,
) -> Result<DensityCurve, DensityError> {
    check_lambdas(lambdas)?;
    check_grid(grid, a.dim())?;
    let m = a.domain_dim();
    if k == 0 || k > m.min(a.rows()) {
        return Err(DensityError::InvalidParameter("minor size k must lie in 1..=min(rows, cols)"));
    }
    let ev = GramEvaluator::new(a);
    let samples = sample_grid(grid, m, || ev.scratch(), |s, angles, out| ev.singular_values(s, angles, out))?;
    Ok(curve_from_samples(samples, grid.len(), lambdas, m - k, alloc::format!("{}x{} matrix", a.rows(), a.cols())))
}

/// `max_z σ_max(A(z))` over the grid: a lower estimate of the operator norm.
pub fn op_norm_estimate(a: &PolyMatrix, grid: &TorusGrid) -> Result<f64, DensityError> {
    check_grid(grid, a.dim())?;
    let ev = GramEvaluator::new(a);
    let cols = a.cols();
    let samples = sample_grid(
        grid,
        1,
        || (ev.scratch(), vec![0.0; cols]),
        |(s, buf), angles, out| {
            ev.singular_values(s, angles, buf)?;
            out[0] = buf[cols - 1];
            Ok(())
        },
    )?;
    Ok(samples.into_iter().fold(0.0, f64::max))
}

/// Largest excess of a left-hand density over a right-hand bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationReport {
    /// `max_λ (lhs(λ) − rhs(λ))`; negative when the inequality holds with room.
    pub max_violation: f64,
    pub worst_lambda: f64,
    pub tolerance: f64,
}

impl ViolationReport {
    pub fn is_consistent(&self) -> bool {
        self.max_violation <= self.tolerance
    }

    fn from_sides(lambdas: &[f64], lhs: &[f64], rhs: &[f64], tolerance: f64) -> Self {
        let (worst_lambda, max_violation) = lambdas
            .iter()
            .zip(lhs.iter().zip(rhs))
            .map(|(&l, (a, b))| (l, a - b))
            .fold((lambdas[0], f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        Self { max_violation, worst_lambda, tolerance }
    }
}

/// Checks `F_{q1·q2}(λ) ≤ F_{q1}(λ^{1−s}) + F_{q2}(λ^s)` on one grid.
pub fn product_inequality_check(
    q1: &LaurentPoly,
    q2: &LaurentPoly,
    s: f64,
    lambdas: &[f64],
    grid: &TorusGrid,
    boundary_constant: f64,
) -> Result<ViolationReport, DensityError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(DensityError::InvalidParameter("s must lie in (0, 1)"));
    }
    if q1.dim() != q2.dim() {
        return Err(DensityError::DimensionMismatch { expected: q1.dim(), found: q2.dim() });
    }
    check_lambdas(lambdas)?;
    let prod = q1 * q2;
    let lhs = scalar_density(&prod, lambdas, grid)?;
    let l1: Vec<f64> = lambdas.iter().map(|&l| libm::pow(l, 1.0 - s)).collect();
    let l2: Vec<f64> = lambdas.iter().map(|&l| libm::pow(l, s)).collect();
    let f1 = scalar_density(q1, &l1, grid)?;
    let f2 = scalar_density(q2, &l2, grid)?;
    let rhs: Vec<f64> = f1.estimates.iter().zip(&f2.estimates).map(|(a, b)| a + b).collect();
    Ok(ViolationReport::from_sides(lambdas, &lhs.estimates, &rhs, grid.tolerance(boundary_constant)))
}

/// Checks `F_B(λ) ≤ k · F_{det B}((k²‖B‖₁)^{k−1} λ)` for a square `B`.
pub fn determinant_reduction_check(
    b: &PolyMatrix,
    lambdas: &[f64],
    grid: &TorusGrid,
    boundary_constant: f64,
) -> Result<ViolationReport, DensityError> {
    let det = b.determinant()?;
    if det.is_zero() {
        return Err(MatrixError::Singular.into());
    }
    let k = b.rows();
    let lhs = matrix_density(b, k, lambdas, grid)?;
    let scaled: Vec<f64> = lambdas.iter().map(|&l| rescale_lambda(k, b.l1_norm(), l)).collect();
    let fp = scalar_density(&det, &scaled, grid)?;
    let rhs: Vec<f64> = fp.estimates.iter().map(|f| k as f64 * f).collect();
    Ok(ViolationReport::from_sides(lambdas, &lhs.estimates, &rhs, grid.tolerance(boundary_constant)))
}

/// Least-squares power law fit of `F̂(λ) − F(0)` against `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaFit {
    pub alpha_hat: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub window: (f64, f64),
}

/// Minimum usable points for a slope fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Slope of `log(F̂(λ) − F(0))` against `log λ` over `λ ∈ [lo, hi]`.
pub fn alpha_fit(curve: &DensityCurve, window: (f64, f64)) -> Result<AlphaFit, DensityError> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = curve
        .lambdas
        .iter()
        .zip(curve.excess())
        .filter(|&(&l, e)| l >= lo && l <= hi && l > 0.0 && e > 0.0)
        .map(|(&l, e)| (libm::log(l), libm::log(e)))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(DensityError::InsufficientPoints { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(DensityError::InsufficientPoints { usable: 1 });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(AlphaFit { alpha_hat: slope, r_squared, points_used: pts.len(), window })
}

/// Lowest two-decade window `[λ_s, 100·λ_s]` holding at least five points above `F(0)`.
pub fn default_alpha_window(curve: &DensityCurve) -> Option<(f64, f64)> {
    let usable: Vec<f64> = curve
        .lambdas
        .iter()
        .zip(curve.excess())
        .filter(|&(&l, e)| e > 0.0 && l > 0.0)
        .map(|(&l, _)| l)
        .collect();
    usable.iter().find_map(|&start| {
        let hi = start * 100.0;
        let inside = usable.iter().filter(|&&l| l >= start && l <= hi).count();
        (inside >= MIN_FIT_POINTS).then_some((start, hi))
    })
}
