//! Truncated Hilbert space states and the homogeneous/affine coordinate charts.
//!
//! A `StateVector` is a raw point of the (truncated) Hilbert space; a
//! `PhysicalState` is its ray representative with the normalization
//! |z|² = 2ħ and the phase fixed so that z⁰ is real and non-negative.
//! The affine chart wⁿ = zⁿ/z⁰ exists only where z⁰ ≠ 0.

use nalgebra::{DVector, DVectorView};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance below which |z|² is treated as exactly zero.
pub const ZERO_NORM_TOL: f64 = 1e-30;

/// A raw complex coordinate vector zⁿ on the truncated basis, carrying ħ.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dim: usize,
    z: DVector<Complex64>,
    hbar: f64,
}

impl StateVector {
    pub fn new(z: DVector<Complex64>, hbar: f64) -> Result<Self> {
        let dim = z.len();
        if dim < 2 {
            return Err(Error::DimensionMismatch(dim, 2));
        }
        if !(hbar > 0.0) {
            return Err(Error::ZeroVector);
        }
        if z.norm_squared() <= ZERO_NORM_TOL {
            return Err(Error::ZeroVector);
        }
        Ok(Self { dim, z, hbar })
    }

    pub fn from_components(z: &[Complex64], hbar: f64) -> Result<Self> {
        Self::new(DVector::from_column_slice(z), hbar)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn z(&self) -> &DVector<Complex64> {
        &self.z
    }

    /// |z|² = Σ z̄ⁿ zⁿ.
    pub fn norm_squared(&self) -> f64 {
        self.z.norm_squared()
    }
}

/// A ray representative: |z|² = 2ħ, z⁰ real and ≥ 0 (or, when z⁰ = 0, the
/// phase fixed on the lowest-index nonzero component and no affine chart).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    dim: usize,
    z_fixed: DVector<Complex64>,
    w: Option<DVector<Complex64>>,
    hbar: f64,
}

impl PhysicalState {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn z_fixed(&self) -> &DVector<Complex64> {
        &self.z_fixed
    }

    pub fn chart_valid(&self) -> bool {
        self.w.is_some()
    }

    /// Affine coordinates wⁿ = zⁿ/z⁰, n = 1..d−1.
    pub fn affine(&self) -> Result<&DVector<Complex64>> {
        self.w.as_ref().ok_or(Error::ChartUndefined)
    }

    /// The representative as a plain `StateVector`.
    pub fn as_state_vector(&self) -> StateVector {
        StateVector {
            dim: self.dim,
            z: self.z_fixed.clone(),
            hbar: self.hbar,
        }
    }
}

/// Phase-fix and normalize a ray: scale by e^{−iθ}/|z| with θ the phase of
/// the pivot component, then by √(2ħ). The pivot is z⁰ when nonzero,
/// otherwise the lowest-index nonzero component (the chart is then flagged
/// undefined rather than switching to another affine patch).
pub fn normalize_ray(s: &StateVector) -> Result<PhysicalState> {
    let norm = s.z.norm();
    if norm * norm <= ZERO_NORM_TOL {
        return Err(Error::ZeroVector);
    }
    // Pivot: first component whose modulus is not negligible relative to |z|.
    let pivot_tol = norm * 1e-14;
    let pivot = s
        .z
        .iter()
        .position(|c| c.norm() > pivot_tol)
        .ok_or(Error::ZeroVector)?;
    let phase = s.z[pivot] / Complex64::new(s.z[pivot].norm(), 0.0);
    let scale = Complex64::new((2.0 * s.hbar).sqrt() / norm, 0.0) / phase;
    let mut z_fixed = &s.z * scale;
    // Clean the pivot's imaginary part, which is zero up to rounding.
    z_fixed[pivot] = Complex64::new(z_fixed[pivot].re, 0.0);

    let w = if pivot == 0 {
        let z0 = z_fixed[0];
        Some(DVector::from_fn(s.dim - 1, |n, _| z_fixed[n + 1] / z0))
    } else {
        None
    };
    Ok(PhysicalState {
        dim: s.dim,
        z_fixed,
        w,
        hbar: s.hbar,
    })
}

/// wⁿ = zⁿ/z⁰ of the phase-fixed representative.
pub fn to_affine(p: &PhysicalState) -> Result<DVector<Complex64>> {
    p.affine().cloned()
}

/// Ray equality: a = λ·b for some nonzero λ, tested via the Cauchy-Schwarz
/// saturation |⟨a|b⟩|² = |a|²|b|² at relative tolerance 1e-10.
pub fn ray_equal(a: &StateVector, b: &StateVector) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(ray_overlap(&a.z, &b.z) >= 1.0 - 1e-10)
}

/// |⟨a|b⟩|² / (|a|²|b|²), the squared fidelity between the rays.
pub fn ray_overlap(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    let inner: Complex64 = a.dotc(b);
    inner.norm_sqr() / (a.norm_squared() * b.norm_squared())
}

/// Extended affine coordinate vector (1, w¹, …, w^{d−1}); the affine sums
/// in the symmetry-data formulas run over this with w⁰ = 1.
pub fn extended_affine(w: DVectorView<Complex64>) -> DVector<Complex64> {
    let mut v = DVector::zeros(w.len() + 1);
    v[0] = Complex64::new(1.0, 0.0);
    for (i, c) in w.iter().enumerate() {
        v[i + 1] = *c;
    }
    v
}
