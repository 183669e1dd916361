//! Width and leading coefficient of a Laurent polynomial.
//!
//! Writing `p = Σ_{n⁻ ≤ n ≤ n⁺} q_n · z_v^n` with respect to one variable
//! gives the width `n⁺ − n⁻` and the top coefficient `q⁺ = q_{n⁺}`. Repeating
//! on `q⁺` until a constant remains produces the tower `p_0, …, p_d`, whose
//! maximal width is `wd(p)` and whose final constant is `lead(p)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::PolyError;
use crate::gaussian::GaussianRational;
use crate::poly::{check_permutation, LaurentPoly};

/// Expansion of a polynomial in powers of one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecomposition {
    pub n_minus: i64,
    pub n_plus: i64,
    /// Coefficients in the remaining `d − 1` variables, keyed by power.
    pub coeffs: BTreeMap<i64, LaurentPoly>,
}

impl VarDecomposition {
    pub fn width(&self) -> u64 {
        (self.n_plus - self.n_minus) as u64
    }

    /// The top coefficient `q⁺`.
    pub fn q_plus(&self) -> &LaurentPoly {
        &self.coeffs[&self.n_plus]
    }
}

/// Collects `p` by powers of variable `var` (0-based).
pub fn q_plus_decompose(p: &LaurentPoly, var: usize) -> Result<VarDecomposition, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if var >= p.dim() {
        return Err(PolyError::VariableOutOfRange { var, dim: p.dim() });
    }
    let coeffs = p.collect_by_var(var);
    let n_minus = *coeffs.keys().next().expect("non-zero polynomial");
    let n_plus = *coeffs.keys().next_back().expect("non-zero polynomial");
    Ok(VarDecomposition { n_minus, n_plus, coeffs })
}

/// The tower `p_0, …, p_d` for one variable ordering, with its widths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthProfile {
    /// 0-based permutation; the last listed variable is eliminated first.
    pub order: Vec<usize>,
    /// `tower[i]` has dimension `d − i`, in variables `order[0..d−i]`.
    pub tower: Vec<LaurentPoly>,
    /// `widths[i] = w(p_i)` for `i = 0..d−1`.
    pub widths: Vec<u64>,
    pub wd: u64,
    pub lead: GaussianRational,
}

impl WidthProfile {
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Width of each tower entry, `wd(p_i) = max_{j ≥ i} w_j`.
    pub fn tower_widths(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0..=self.widths.len())
            .map(|i| self.widths[i..].iter().copied().max().unwrap_or(0))
            .collect();
        if out.is_empty() {
            out.push(0);
        }
        out
    }

    pub fn lead_abs(&self) -> f64 {
        self.lead.modulus_lower()
    }

    /// `d · wd(p)`: the reciprocal of the exponent in the density bound.
    pub fn scaled_width(&self) -> u64 {
        self.dim() as u64 * self.wd
    }
}

/// Runs the `q⁺` recursion, eliminating `order[d−1]` first, then `order[d−2]`, and so on.
pub fn width_profile(p: &LaurentPoly, order: &[usize]) -> Result<WidthProfile, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    check_permutation(order, p.dim())?;
    let mut current = p.permute_vars(order)?;
    let mut tower = Vec::with_capacity(p.dim() + 1);
    let mut widths = Vec::with_capacity(p.dim());
    while current.dim() > 0 {
        let dec = q_plus_decompose(&current, current.dim() - 1)?;
        widths.push(dec.width());
        let next = dec.q_plus().clone();
        tower.push(current);
        current = next;
    }
    let lead = current.as_constant().expect("dimension-zero polynomial is constant");
    tower.push(current);
    let wd = widths.iter().copied().max().unwrap_or(0);
    Ok(WidthProfile { order: order.to_vec(), tower, widths, wd, lead })
}

pub fn identity_order(dim: usize) -> Vec<usize> {
    (0..dim).collect()
}

/// Coefficient of the lexicographically largest exponent.
pub fn lead_lex(p: &LaurentPoly) -> Result<GaussianRational, PolyError> {
    p.leading_term().map(|(_, c)| c.clone()).ok_or(PolyError::ZeroPolynomial)
}
