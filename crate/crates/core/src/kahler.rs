//! Function representations H_β and f_β, the three metric charts, and the
//! Kähler star products in homogeneous and affine coordinates.
//!
//! The star products here take precomputed gradient data (symmetry-data
//! triplets) and contract with the chart's inverse metric, so the same
//! code path that verifies the scalar product identities also feeds the
//! full triplet product laws.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{PhysicalState, StateVector};
use crate::operators::Observable;
use crate::symdata::{Chart, SymmetryData};

/// H_β = (1/2ħ) Σ z̄ᵐ zⁿ ⟨m|β|n⟩.
pub fn h_function(beta: &Observable, s: &StateVector) -> Result<Complex64> {
    if beta.dim() != s.dim() {
        return Err(Error::DimensionMismatch(beta.dim(), s.dim()));
    }
    let z = s.z();
    let quad = z.dotc(&(beta.matrix() * z));
    Ok(quad / Complex64::new(2.0 * s.hbar(), 0.0))
}

/// f_β = (2ħ/|z|²) H_β, the normalization-independent expectation value.
pub fn f_function(beta: &Observable, s: &StateVector) -> Result<Complex64> {
    let h = h_function(beta, s)?;
    Ok(h * Complex64::new(2.0 * s.hbar() / s.norm_squared(), 0.0))
}

/// Which metric is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Flat Hermitian metric on the Hilbert space: G^{mn̄} = 2δ.
    HilbertFlat,
    /// Fubini-Study metric in homogeneous coordinates (degenerate).
    HomogeneousFs,
    /// Fubini-Study metric in the affine chart (invertible, dim d−1).
    AffineFs,
}

/// Metric/inverse-metric pair of one chart evaluated at a state.
/// Index convention: `g_inv[(m, n)]` = g^{mn̄}, `g[(m, n)]` = g_{mn̄}.
#[derive(Debug, Clone)]
pub struct MetricChart {
    pub kind: MetricKind,
    pub g: DMatrix<Complex64>,
    pub g_inv: DMatrix<Complex64>,
    pub hbar: f64,
}

/// Evaluate the metric of `kind` at the given state.
pub fn metric_chart(kind: MetricKind, s: &StateVector) -> Result<MetricChart> {
    let d = s.dim();
    let hbar = s.hbar();
    match kind {
        MetricKind::HilbertFlat => Ok(MetricChart {
            kind,
            g: DMatrix::identity(d, d) * Complex64::new(0.5, 0.0),
            g_inv: DMatrix::identity(d, d) * Complex64::new(2.0, 0.0),
            hbar,
        }),
        MetricKind::HomogeneousFs => {
            let z = s.z();
            let s2 = s.norm_squared();
            // g̃^{mn̄} = (|z|² δ − zᵐ z̄ⁿ)/ħ ; g̃_{mn̄} = ħ(|z|² δ − z̄_m z_n)/|z|⁴.
            let g_inv = DMatrix::from_fn(d, d, |m, n| {
                let delta = if m == n { s2 } else { 0.0 };
                (Complex64::new(delta, 0.0) - z[m] * z[n].conj()) / hbar
            });
            let g = DMatrix::from_fn(d, d, |m, n| {
                let delta = if m == n { s2 } else { 0.0 };
                (Complex64::new(delta, 0.0) - z[m].conj() * z[n]) * (hbar / (s2 * s2))
            });
            Ok(MetricChart { kind, g, g_inv, hbar })
        }
        MetricKind::AffineFs => Err(Error::ChartUndefined),
    }
}

/// Affine Fubini-Study metric at a chart-valid physical state.
pub fn metric_chart_affine(p: &PhysicalState) -> Result<MetricChart> {
    let w = p.affine()?;
    let hbar = p.hbar();
    let n = w.len();
    let big_n = 1.0 + w.norm_squared();
    // g^{mn̄} = (1+|w|²)(δ + wᵐ w̄ⁿ)/ħ ; g_{mn̄} = ħ((1+|w|²)δ − w̄_m w_n)/(1+|w|²)².
    let g_inv = DMatrix::from_fn(n, n, |m, k| {
        let delta = if m == k { 1.0 } else { 0.0 };
        (Complex64::new(delta, 0.0) + w[m] * w[k].conj()) * (big_n / hbar)
    });
    let g = DMatrix::from_fn(n, n, |m, k| {
        let delta = if m == k { big_n } else { 0.0 };
        (Complex64::new(delta, 0.0) - w[m].conj() * w[k]) * (hbar / (big_n * big_n))
    });
    Ok(MetricChart {
        kind: MetricKind::AffineFs,
        g,
        g_inv,
        hbar,
    })
}

/// H_β ⋆_K H_γ = ħ ∂H_β G^{mn̄} ∂̄H_γ = 2ħ Σ X_{βn} X̄_{γn}; equals H_{βγ}.
pub fn star_k(a: &SymmetryData, b: &SymmetryData) -> Result<Complex64> {
    a.check_compatible(b, Chart::HChart)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..a.x().len() {
        acc += a.x()[n] * b.xbar()[n];
    }
    Ok(acc * Complex64::new(2.0 * a.hbar(), 0.0))
}

/// f_β ⋆_κ f_γ in homogeneous coordinates, via the explicit degenerate
/// inverse-metric contraction: f_β f_γ + ħ ∂f_β g̃^{mn̄} ∂̄f_γ.
pub fn star_kappa_homogeneous(
    a: &SymmetryData,
    b: &SymmetryData,
    metric: &MetricChart,
) -> Result<Complex64> {
    a.check_compatible(b, Chart::HomogeneousFs)?;
    if metric.kind != MetricKind::HomogeneousFs {
        return Err(Error::ChartMismatch {
            expected: "homogeneous FS metric",
            got: metric_name(metric.kind),
        });
    }
    Ok(star_kappa_contract(a, b, metric))
}

fn metric_name(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::HilbertFlat => "Hilbert flat metric",
        MetricKind::HomogeneousFs => "homogeneous FS metric",
        MetricKind::AffineFs => "affine FS metric",
    }
}

// ∂_m f = −i X_m, ∂_n̄ f = i X̄_n, so ħ ∂f_β g^{mn̄} ∂̄f_γ = ħ X_β g^{mn̄} X̄_γ.
fn star_kappa_contract(a: &SymmetryData, b: &SymmetryData, metric: &MetricChart) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..a.x().len() {
        for n in 0..b.xbar().len() {
            acc += a.x()[m] * metric.g_inv[(m, n)] * b.xbar()[n];
        }
    }
    a.f() * b.f() + acc * Complex64::new(metric.hbar, 0.0)
}

/// f_β ⋆_κ f_γ in the affine chart; agrees with the homogeneous result at
/// the same ray.
pub fn star_kappa_affine(
    a: &SymmetryData,
    b: &SymmetryData,
    metric: &MetricChart,
) -> Result<Complex64> {
    a.check_compatible(b, Chart::AffineFs)?;
    if metric.kind != MetricKind::AffineFs {
        return Err(Error::ChartMismatch {
            expected: "affine FS metric",
            got: metric_name(metric.kind),
        });
    }
    Ok(star_kappa_contract(a, b, metric))
}
