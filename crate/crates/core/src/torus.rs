//! Points and quadrature grids on the d-torus `T^d`, parametrized by angles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::DensityError;

/// Default boundary constant in the quadrature tolerance `c·d/N`.
pub const DEFAULT_BOUNDARY_CONSTANT: f64 = 4.0;

/// `(z_1, …, z_d)` with `z_j = exp(i·φ_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    angles: Vec<f64>,
}

impl TorusPoint {
    pub fn new(angles: Vec<f64>) -> Self {
        Self { angles }
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    /// Product midpoint rule with `per_dim` points along each axis.
    Midpoint { per_dim: usize },
    /// Shifted rank-1 lattice `frac(i·g/M + Δ)`.
    Lattice { points: usize, generator: Vec<u64>, shift: Vec<f64> },
}

/// An equal-weight quadrature rule for the Haar measure on `T^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    scheme: Scheme,
    len: usize,
}

impl TorusGrid {
    pub fn midpoint(dim: usize, per_dim: usize) -> Result<Self, DensityError> {
        if dim == 0 {
            return Err(DensityError::InvalidParameter("torus dimension must be at least 1"));
        }
        if per_dim == 0 {
            return Err(DensityError::InvalidParameter("grid needs at least one point per axis"));
        }
        let len = (0..dim)
            .try_fold(1usize, |acc, _| acc.checked_mul(per_dim))
            .ok_or(DensityError::InvalidParameter("grid size overflows"))?;
        Ok(Self { dim, scheme: Scheme::Midpoint { per_dim }, len })
    }

    /// Rank-1 lattice with `points` nodes and a random shift drawn from `seed`.
    ///
    /// The generator follows the additive recurrence on the root of
    /// `x^{d+1} = x + 1`, nudged so every coordinate is coprime to `points`.
    pub fn lattice(dim: usize, points: usize, seed: u64) -> Result<Self, DensityError> {
        if dim == 0 || points == 0 {
            return Err(DensityError::InvalidParameter("lattice needs d ≥ 1 and at least one point"));
        }
        let mut x = 2.0f64;
        for _ in 0..64 {
            x = libm::pow(1.0 + x, 1.0 / (dim as f64 + 1.0));
        }
        let m = points as u64;
        let generator = (0..dim)
            .map(|j| {
                let alpha = libm::pow(1.0 / x, j as f64 + 1.0);
                let alpha = alpha - libm::floor(alpha);
                let mut g = (libm::round(alpha * m as f64) as u64) % m.max(1);
                if m > 1 {
                    g = g.max(1);
                    while g.gcd(&m) != 1 {
                        g = (g + 1) % m;
                    }
                }
                g
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.gen::<f64>()).collect();
        Ok(Self { dim, scheme: Scheme::Lattice { points, generator, shift }, len: points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Effective resolution per axis: `N` for midpoint, `M^{1/d}` for lattices.
    pub fn resolution(&self) -> f64 {
        match &self.scheme {
            Scheme::Midpoint { per_dim } => *per_dim as f64,
            Scheme::Lattice { points, .. } => libm::pow(*points as f64, 1.0 / self.dim as f64),
        }
    }

    /// Declared quadrature tolerance `c·d/N` for indicator integrals.
    pub fn tolerance(&self, boundary_constant: f64) -> f64 {
        boundary_constant * self.dim as f64 / self.resolution()
    }

    /// Writes the angles of node `index` into `out`.
    pub fn fill_angles(&self, index: usize, out: &mut [f64]) {
        debug_assert!(index < self.len && out.len() == self.dim);
        match &self.scheme {
            Scheme::Midpoint { per_dim } => {
                let mut rest = index;
                let h = TAU / *per_dim as f64;
                for a in out.iter_mut() {
                    let i = rest % per_dim;
                    rest /= per_dim;
                    *a = (i as f64 + 0.5) * h;
                }
            }
            Scheme::Lattice { points, generator, shift } => {
                let m = *points as u64;
                for ((a, g), s) in out.iter_mut().zip(generator).zip(shift) {
                    let r = ((index as u128 * *g as u128) % m as u128) as f64 / m as f64 + s;
                    *a = TAU * (r - libm::floor(r));
                }
            }
        }
    }

    pub fn point(&self, index: usize) -> TorusPoint {
        let mut angles = vec![0.0; self.dim];
        self.fill_angles(index, &mut angles);
        TorusPoint::new(angles)
    }
}
