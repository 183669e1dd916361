//! Sparse multivariate Laurent polynomials over the Gaussian rationals.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::gaussian::{rational_to_f64, GaussianRational};
use crate::torus::TorusPoint;

/// Multi-index `(n_1, …, n_d)` of a monomial `z_1^{n_1}·…·z_d^{n_d}`.
///
/// Ordered lexicographically with the *last* coordinate most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .rev()
            .zip(other.0.iter().rev())
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `C[z_1^{±1}, …, z_d^{±1}]` with Gaussian-rational coefficients.
///
/// Terms live in a sorted map keyed by [`Exponent`], so iteration is in
/// ascending lexicographic order and the leading term is the last entry. No
/// stored coefficient is zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::monomial(Exponent::zero(dim), c)
    }

    pub fn monomial(exp: Exponent, c: GaussianRational) -> Self {
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { dim, terms }
    }

    /// The variable `z_{var+1}` (0-based `var`) in dimension `dim`.
    pub fn var(dim: usize, var: usize) -> Self {
        assert!(var < dim, "variable index out of range");
        let mut e = vec![0; dim];
        e[var] = 1;
        Self::monomial(Exponent(e), GaussianRational::one())
    }

    /// Collects `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, GaussianRational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(PolyError::DimensionMismatch { left: dim, right: e.dim() });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &GaussianRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> GaussianRational {
        self.terms.get(e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Lexicographically maximal term.
    pub fn leading_term(&self) -> Option<(&Exponent, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// The constant value when this polynomial is `c·z^0` or zero.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.0.iter().all(|&n| n == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Exponent, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), PolyError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by the monomial `z^e`.
    pub fn shift(&self, e: &Exponent) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, a)| (k.add(e), a.clone())).collect(),
        }
    }

    /// The involution `Σ a_g·g ↦ Σ conj(a_g)·g⁻¹`.
    pub fn star(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.neg(), a.conj())).collect(),
        }
    }

    /// `‖p‖₁ = Σ |a_g|`, returned as a double that is never below the true value.
    ///
    /// Exact whenever every coefficient modulus is exactly representable;
    /// otherwise the double sum is rounded up by one ulp.
    pub fn l1_norm(&self) -> f64 {
        let mut exact = BigRational::zero();
        let mut inexact_terms: Vec<f64> = Vec::new();
        for c in self.terms.values() {
            if c.is_real() {
                exact += c.re().abs();
                continue;
            }
            let m = c.modulus();
            match BigRational::from_float(m.value) {
                Some(r) if m.exact => exact += r,
                _ => inexact_terms.push(m.value),
            }
        }
        // Sorted so the result does not depend on term order.
        inexact_terms.sort_unstable_by(f64::total_cmp);
        let inexact = !inexact_terms.is_empty();
        let float: f64 = inexact_terms.iter().sum();
        let e = rational_to_f64(&exact);
        let e_exact = BigRational::from_float(e).is_some_and(|r| r == exact);
        let total = e + float;
        if inexact || !e_exact {
            total.next_up()
        } else {
            total
        }
    }

    /// Value at a torus point, `Σ a_n·exp(i·⟨n, φ⟩)`, in double precision.
    pub fn eval(&self, point: &TorusPoint) -> Complex64 {
        assert_eq!(point.dim(), self.dim, "torus point dimension mismatch");
        NumericPoly::new(self).eval(point.angles())
    }

    /// Re-embeds into a larger ambient dimension, new variables absent.
    pub fn embed(&self, dim: usize) -> Result<Self, PolyError> {
        if dim < self.dim {
            return Err(PolyError::DimensionMismatch { left: dim, right: self.dim });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = e.0.clone();
                v.resize(dim, 0);
                (Exponent(v), c.clone())
            })
            .collect();
        Ok(Self { dim, terms })
    }

    /// Renames variables so that new variable `j` is old variable `order[j]`.
    ///
    /// `order` must be a permutation of `0..dim`.
    pub fn permute_vars(&self, order: &[usize]) -> Result<Self, PolyError> {
        check_permutation(order, self.dim)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (Exponent(order.iter().map(|&j| e.0[j]).collect()), c.clone()))
            .collect();
        Ok(Self { dim: self.dim, terms })
    }

    /// Exact quotient `self / divisor`, failing when the division leaves a remainder.
    ///
    /// Divides leading terms in the lexicographic group order. Quotient
    /// exponents of an exact division lie in the box spanned by the two
    /// Newton polytopes, which bounds the loop.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_dim(divisor)?;
        let (lead_e, lead_c) = divisor.leading_term().ok_or(PolyError::ZeroPolynomial)?;
        if self.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        if divisor.is_monomial() {
            let inv = lead_c.inv().expect("non-zero coefficient");
            return Ok(self.shift(&lead_e.neg()).scale(&inv));
        }
        let (lo_a, hi_a) = self.exponent_box();
        let (lo_b, hi_b) = divisor.exponent_box();
        let lo: Vec<i64> = lo_a.iter().zip(&lo_b).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = hi_a.iter().zip(&hi_b).map(|(a, b)| a - b).collect();
        let inv = lead_c.inv().expect("non-zero coefficient");

        let mut rem = self.clone();
        let mut quot = Self::zero(self.dim);
        while let Some((re, rc)) = rem.leading_term() {
            let qe = re.sub(lead_e);
            if qe.0.iter().zip(lo.iter().zip(&hi)).any(|(q, (l, h))| q < l || q > h) {
                return Err(PolyError::NotDivisible);
            }
            let qc = rc * &inv;
            let step = divisor.shift(&qe).scale(&qc);
            rem = rem.try_sub(&step)?;
            quot.add_term(qe, &qc);
        }
        Ok(quot)
    }

    /// Per-coordinate minimum and maximum exponent. Zero polynomial gives empty boxes.
    pub fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for e in self.terms.keys() {
            for (j, &n) in e.0.iter().enumerate() {
                lo[j] = lo[j].min(n);
                hi[j] = hi[j].max(n);
            }
        }
        (lo, hi)
    }

    /// Splits off variable `var` (0-based): returns `(exponent of z_var, coefficient in d−1 variables)`.
    pub(crate) fn collect_by_var(&self, var: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let n = e.0[var];
            let rest: Vec<i64> = e
                .0
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != var)
                .map(|(_, &v)| v)
                .collect();
            out.entry(n)
                .or_insert_with(|| LaurentPoly::zero(self.dim - 1))
                .add_term(Exponent(rest), c);
        }
        out
    }
}

pub(crate) fn check_permutation(order: &[usize], dim: usize) -> Result<(), PolyError> {
    let mut seen = vec![false; dim];
    if order.len() != dim {
        return Err(PolyError::BadOrdering);
    }
    for &j in order {
        if j >= dim || seen[j] {
            return Err(PolyError::BadOrdering);
        }
        seen[j] = true;
    }
    Ok(())
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[d={}]", self.dim);
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}", c)?;
            for (j, n) in e.0.iter().enumerate() {
                if *n != 0 {
                    write!(f, "*z{}^{}", j + 1, n)?;
                }
            }
        }
        write!(f, " [d={}]", self.dim)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on dimension mismatch; use [`LaurentPoly::try_add`] to handle it.
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// Double-precision copy of a polynomial for repeated evaluation on the torus.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    dim: usize,
    coeffs: Vec<Complex64>,
    exps: Vec<f64>,
    monomial_modulus: Option<f64>,
}

impl NumericPoly {
    pub fn new(p: &LaurentPoly) -> Self {
        let coeffs: Vec<Complex64> = p.terms.values().map(GaussianRational::to_complex64).collect();
        let exps = p.terms.keys().flat_map(|e| e.0.iter().map(|&n| n as f64)).collect();
        let monomial_modulus = (coeffs.len() == 1).then(|| modulus(coeffs[0]));
        Self { dim: p.dim, coeffs, exps, monomial_modulus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, angles: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, c) in self.coeffs.iter().enumerate() {
            let e = &self.exps[t * self.dim..(t + 1) * self.dim];
            let theta: f64 = e.iter().zip(angles).map(|(n, phi)| n * phi).sum();
            let (s, co) = libm::sincos(theta);
            acc += c * Complex64::new(co, s);
        }
        acc
    }

    /// `|p(z)|`. Monomials return the coefficient modulus, since `|z| = 1` on the torus.
    pub fn modulus_at(&self, angles: &[f64]) -> f64 {
        match self.monomial_modulus {
            Some(m) => m,
            None => modulus(self.eval(angles)),
        }
    }
}

/// `sqrt(re² + im²)`, the one modulus formula shared by every density path.
#[inline]
pub fn modulus(z: Complex64) -> f64 {
    libm::sqrt(z.re * z.re + z.im * z.im)
}
