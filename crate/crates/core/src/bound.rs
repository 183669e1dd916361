//! Explicit spectral density bounds and Novikov-Shubin lower bounds.
//!
//! For a non-zero matrix `A` with a maximal non-vanishing `k×k` minor
//! `p = det B` of width `wd(p) ≥ 1`:
//!
//! ```text
//! F(λ) − F(0) ≤ C · k · d · wd(p) · ( k^{2k−2} · ‖B‖₁^{k−1} · λ / |lead(p)| )^{1/(d·wd(p))}
//! ```
//!
//! with `C = 8√3/√47`, and `α ≥ 1/(d·wd(p))`. Width zero gives a step.

use alloc::vec::Vec;
use core::cmp::Ordering;

use itertools::Itertools;

use crate::error::{BoundError, PolyError};
use crate::matrix::{MinorCertificate, PolyMatrix, DEFAULT_SEARCH_CAP};
use crate::poly::LaurentPoly;
use crate::width::{identity_order, width_profile, WidthProfile};

/// `C = 8·√3/√47`.
pub fn universal_constant() -> f64 {
    8.0 * libm::sqrt(3.0) / libm::sqrt(47.0)
}

/// Largest dimension for which all `d!` orderings are tried.
pub const MAX_EXHAUSTIVE_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundParameters {
    pub k: usize,
    pub d: usize,
    pub wd: u64,
    pub lead_abs: f64,
    pub b_l1: f64,
}

impl BoundParameters {
    pub fn new(k: usize, d: usize, wd: u64, lead_abs: f64, b_l1: f64) -> Result<Self, BoundError> {
        if k == 0 {
            return Err(BoundError::InvalidParameter("k must be at least 1"));
        }
        if d == 0 {
            return Err(BoundError::InvalidParameter("d must be at least 1"));
        }
        if !(lead_abs > 0.0 && lead_abs.is_finite()) {
            return Err(BoundError::InvalidParameter("|lead| must be positive and finite"));
        }
        if !(b_l1 >= 0.0 && b_l1.is_finite()) {
            return Err(BoundError::InvalidParameter("||B||_1 must be non-negative and finite"));
        }
        Ok(Self { k, d, wd, lead_abs, b_l1 })
    }

    /// `1/(d·wd)`, or `None` in the step case.
    pub fn exponent(&self) -> Option<f64> {
        (self.wd > 0).then(|| 1.0 / (self.d as f64 * self.wd as f64))
    }

    /// The factor in front of `λ^{1/(d·wd)}`.
    pub fn coefficient(&self) -> Option<f64> {
        let e = self.exponent()?;
        let k = self.k as f64;
        let inner = libm::pow(k, 2.0 * k - 2.0) * libm::pow(self.b_l1, k - 1.0) / self.lead_abs;
        Some(universal_constant() * k * self.d as f64 * self.wd as f64 * libm::pow(inner, e))
    }
}

/// Right-hand side of the matrix density bound at `λ`.
pub fn matrix_bound(params: &BoundParameters, lambda: f64) -> Result<f64, BoundError> {
    if params.wd == 0 {
        return Err(BoundError::ZeroWidth);
    }
    let k = params.k as f64;
    let ratio = libm::pow(k, 2.0 * k - 2.0) * libm::pow(params.b_l1, k - 1.0) * lambda / params.lead_abs;
    let e = 1.0 / (params.d as f64 * params.wd as f64);
    Ok(universal_constant() * k * params.d as f64 * params.wd as f64 * libm::pow(ratio, e))
}

/// Width-zero case: the density jumps from 0 to 1 at `|lead|`.
pub fn step_bound(lead_abs: f64, lambda: f64) -> f64 {
    if lambda < lead_abs {
        0.0
    } else {
        1.0
    }
}

/// Scalar (`1×1`) bound `C · d · wd · (λ/|lead|)^{1/(d·wd)}`.
pub fn scalar_bound(d: usize, wd: u64, lead_abs: f64, lambda: f64) -> Result<f64, BoundError> {
    if wd == 0 {
        return Err(BoundError::ZeroWidth);
    }
    let dw = d as f64 * wd as f64;
    Ok(universal_constant() * dw * libm::pow(lambda / lead_abs, 1.0 / dw))
}

/// `(k²·‖B‖₁)^{k−1} · λ`: the argument at which the minor's density is read.
pub fn rescale_lambda(k: usize, b_l1: f64, lambda: f64) -> f64 {
    let k_f = k as f64;
    libm::pow(k_f * k_f * b_l1, k_f - 1.0) * lambda
}

/// Lower bound for the Novikov-Shubin invariant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaLower {
    /// `1/(d·wd)`; `denominator = d·wd`.
    Finite { value: f64, denominator: u64 },
    /// Width zero: the invariant is `∞` or `∞⁺`.
    InfiniteType,
}

impl AlphaLower {
    pub fn value(&self) -> f64 {
        match self {
            AlphaLower::Finite { value, .. } => *value,
            AlphaLower::InfiniteType => f64::INFINITY,
        }
    }
}

pub fn ns_lower_bound(d: usize, wd: u64) -> AlphaLower {
    if wd == 0 {
        AlphaLower::InfiniteType
    } else {
        let denominator = d as u64 * wd;
        AlphaLower::Finite { value: 1.0 / denominator as f64, denominator }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrderingMode {
    /// Identity ordering only.
    #[default]
    Fixed,
    /// All `d!` orderings, keeping the smallest width.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MinorMode {
    /// First non-vanishing maximal minor in lexicographic index order.
    #[default]
    First,
    /// Every maximal minor, keeping the one with the strongest bound.
    Best,
}

/// Width profile for the requested ordering strategy.
///
/// Exhaustive mode minimizes `wd`, then maximizes `|lead|`, then takes the
/// lexicographically smallest permutation.
pub fn best_ordering(p: &LaurentPoly, mode: OrderingMode) -> Result<WidthProfile, BoundError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let d = p.dim();
    match mode {
        OrderingMode::Fixed => Ok(width_profile(p, &identity_order(d))?),
        OrderingMode::Exhaustive => {
            if d > MAX_EXHAUSTIVE_DIM {
                return Err(BoundError::ExhaustiveTooLarge { dim: d });
            }
            let mut best: Option<WidthProfile> = None;
            for order in (0..d).permutations(d) {
                let prof = width_profile(p, &order)?;
                let better = match &best {
                    None => true,
                    Some(b) => match prof.wd.cmp(&b.wd) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => prof.lead.norm_sqr() > b.lead.norm_sqr(),
                    },
                };
                if better {
                    best = Some(prof);
                }
            }
            Ok(best.expect("at least one ordering"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub ordering: OrderingMode,
    pub minor: MinorMode,
    pub search_cap: u128,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { ordering: OrderingMode::Fixed, minor: MinorMode::First, search_cap: DEFAULT_SEARCH_CAP }
    }
}

/// Everything computed on the way from a matrix to its density bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub params: BoundParameters,
    pub minor: MinorCertificate,
    pub profile: WidthProfile,
    pub coefficient: Option<f64>,
    pub exponent: Option<f64>,
    pub alpha_lower: AlphaLower,
    pub is_step: bool,
    /// Domain rank `m` of the operator; `F(0) = m − k`.
    pub domain_dim: usize,
    pub options: AnalyzeOptions,
}

impl BoundReport {
    pub fn ordering(&self) -> &[usize] {
        &self.profile.order
    }

    pub fn f_zero(&self) -> usize {
        self.domain_dim - self.params.k
    }

    /// Step case: `λ` at which `k·F_p((k²‖B‖₁)^{k−1}λ)` jumps to `k`.
    pub fn step_threshold(&self) -> Option<f64> {
        self.is_step.then(|| {
            let scale = rescale_lambda(self.params.k, self.params.b_l1, 1.0);
            self.params.lead_abs / scale
        })
    }

    /// Raw bound on `F(λ) − F(0)`.
    pub fn bound_at(&self, lambda: f64) -> f64 {
        let p = &self.params;
        if self.is_step {
            p.k as f64 * step_bound(p.lead_abs, rescale_lambda(p.k, p.b_l1, lambda))
        } else {
            matrix_bound(p, lambda).expect("width is positive")
        }
    }

    /// The bound clipped at `k`, the largest possible value of `F(λ) − F(0)`.
    pub fn display_bound_at(&self, lambda: f64) -> f64 {
        self.bound_at(lambda).min(self.params.k as f64)
    }

    /// Strength ordering: larger α lower bound wins, then the smaller bound.
    fn beats(&self, other: &BoundReport) -> bool {
        match (self.is_step, other.is_step) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => self.step_threshold() > other.step_threshold(),
            (false, false) => match self.profile.wd.cmp(&other.profile.wd) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => self.coefficient < other.coefficient,
            },
        }
    }
}

fn report_for(
    a: &PolyMatrix,
    minor: MinorCertificate,
    profile: WidthProfile,
    options: AnalyzeOptions,
) -> Result<BoundReport, BoundError> {
    let params = BoundParameters::new(minor.size(), a.dim(), profile.wd, profile.lead_abs(), minor.b_l1)?;
    Ok(BoundReport {
        coefficient: params.coefficient(),
        exponent: params.exponent(),
        alpha_lower: ns_lower_bound(params.d, params.wd),
        is_step: params.wd == 0,
        domain_dim: a.domain_dim(),
        params,
        minor,
        profile,
        options,
    })
}

/// Full pipeline: maximal minor, width profile and bound constants.
pub fn analyze(a: &PolyMatrix, options: &AnalyzeOptions) -> Result<BoundReport, BoundError> {
    if a.dim() == 0 {
        return Err(BoundError::InvalidParameter("matrix entries need at least one variable"));
    }
    let minors: Vec<MinorCertificate> = match options.minor {
        MinorMode::First => alloc::vec![a.max_nonvanishing_minor(options.search_cap)?],
        MinorMode::Best => a.all_max_nonvanishing_minors(options.search_cap)?,
    };
    let mut best: Option<BoundReport> = None;
    for minor in minors {
        let profile = best_ordering(&minor.det, options.ordering)?;
        let report = report_for(a, minor, profile, *options)?;
        if best.as_ref().is_none_or(|b| report.beats(b)) {
            best = Some(report);
        }
    }
    Ok(best.expect("at least one minor"))
}
