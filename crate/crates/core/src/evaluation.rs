//! Physics consequences of the noncommutative value: state reconstruction
//! from first-derivative data, von Neumann moments, and the per-state
//! evaluation map.

use nalgebra::DVector;
#[cfg(test)]
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{normalize_ray, PhysicalState, StateVector};
use crate::kahler::{f_function, metric_chart, metric_chart_affine, MetricKind};
use crate::operators::{eigendecompose, product, Observable};
use crate::symdata::{sd_product_h, symdata_h, symdata_w, symdata_z, Chart, SymmetryData};

/// Condition-number guard for reconstruction.
pub const MAX_CONDITION: f64 = 1e8;
/// Residual gate: derivative data further than this (relative to ‖X‖) from
/// any consistent state is an error, not a warning.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Moment order cap (dynamic-range guard).
pub const MAX_MOMENT_ORDER: usize = 12;
/// Operators with spectral radius above this are pre-scaled before the
/// moment chain and the factor divided back out.
pub const MOMENT_SCALE_THRESHOLD: f64 = 10.0;

/// Outcome of a reconstruction: the recovered ray and the linear-system
/// residual ‖Bᵀz̄ + 2iħX‖.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub state: PhysicalState,
    pub residual: f64,
}

/// Recover the state (up to phase) from X_n = (i/2ħ) Σ_m z̄^m B[m][n] for an
/// invertible β: solve the transpose system for z̄, conjugate, normalize.
pub fn reconstruct_state(
    beta: &Observable,
    x: &DVector<Complex64>,
    hbar: f64,
) -> Result<Reconstruction> {
    if beta.dim() != x.len() {
        return Err(Error::DimensionMismatch(beta.dim(), x.len()));
    }
    let bt = beta.matrix().transpose();
    let svd = bt.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::SingularOperator(cond));
    }
    // X = (i/2ħ) Bᵀ z̄  ⇒  Bᵀ z̄ = −2iħ X
    let rhs = x * Complex64::new(0.0, -2.0 * hbar);
    let zbar = svd
        .solve(&rhs, 0.0)
        .map_err(|_| Error::SingularOperator(cond))?;
    let residual = (&bt * &zbar - &rhs).norm();
    let x_norm = x.norm();
    if residual > RESIDUAL_TOL * x_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::InconsistentData(residual));
    }
    let z = zbar.map(|c| c.conj());
    let state = normalize_ray(&StateVector::new(z, hbar)?)?;
    Ok(Reconstruction { state, residual })
}

/// Reconstruct from a full H-chart triplet and cross-validate: the scalar
/// and antiholomorphic components recomputed at the recovered coordinates
/// must reproduce the supplied data. For an invertible β the linear solve
/// alone is always exactly consistent, so corruption of the data shows up
/// here rather than in the solve residual.
pub fn reconstruct_from_symdata(
    beta: &Observable,
    sd: &SymmetryData,
) -> Result<Reconstruction> {
    if sd.chart() != Chart::HChart {
        return Err(Error::ChartMismatch {
            expected: "H",
            got: sd.chart().name(),
        });
    }
    let hbar = sd.hbar();
    let bt = beta.matrix().transpose();
    let svd = bt.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::SingularOperator(cond));
    }
    let rhs = sd.x() * Complex64::new(0.0, -2.0 * hbar);
    let zbar = svd
        .solve(&rhs, 0.0)
        .map_err(|_| Error::SingularOperator(cond))?;
    let z = zbar.map(|c| c.conj());
    let raw = StateVector::new(z, hbar)?;

    // Cross-checks at the recovered raw coordinates.
    let recomputed = symdata_h(beta, &raw)?;
    let scale = sd.f().norm().max(sd.x().norm()).max(1.0);
    let f_err = (recomputed.f() - sd.f()).norm();
    let xbar_err = (recomputed.xbar() - sd.xbar()).norm();
    let worst = f_err.max(xbar_err);
    if worst > RESIDUAL_TOL * scale {
        return Err(Error::InconsistentData(worst));
    }
    let residual = (&bt * &zbar - &rhs).norm();
    Ok(Reconstruction {
        state: normalize_ray(&raw)?,
        residual,
    })
}

/// Moment report: the exact column f_{β^k} against the spectral column
/// Σ_j p_j λ_j^k from the eigendecomposition.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub exact: Vec<f64>,
    pub spectral: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub order: usize,
    /// Pre-scaling factor applied when the spectral radius exceeded the
    /// threshold (already divided back out of both columns).
    pub scale: f64,
}

/// Von Neumann moments μ_k = f_{β^k}(p) for k = 1..order, cross-checked
/// three ways: repeated matrix products, symmetry-data product chaining,
/// and the spectral decomposition.
pub fn moments(beta: &Observable, p: &PhysicalState, order: usize) -> Result<MomentReport> {
    if !beta.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if order > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge(order, MAX_MOMENT_ORDER));
    }
    let (values, vectors) = eigendecompose(beta)?;
    let radius = values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let scale = if radius > MOMENT_SCALE_THRESHOLD {
        radius
    } else {
        1.0
    };
    let scaled = beta.scale(Complex64::new(1.0 / scale, 0.0));

    let sv = p.as_state_vector();
    let mut exact = Vec::with_capacity(order);
    let mut power = scaled.clone();
    // chain the H-chart product law alongside the matrix products
    let sd_base = symdata_h(&scaled, &sv)?;
    let mut sd_power = sd_base.clone();
    for k in 1..=order {
        let mu = f_function(&power, &sv)?;
        let chained = 2.0 * p.hbar() * sd_power.f() / Complex64::new(sv.norm_squared(), 0.0);
        if (mu - chained).norm() > 1e-8 * mu.norm().max(1.0) {
            return Err(Error::InconsistentData((mu - chained).norm()));
        }
        exact.push(mu.re * scale.powi(k as i32));
        if k < order {
            power = product(&power, &scaled)?;
            sd_power = sd_product_h(&sd_power, &sd_base)?;
        }
    }

    // spectral side: p_j = |<e_j|phi>|^2 / |z|^2
    let dim = beta.dim();
    let z = sv.z();
    let norm2 = sv.norm_squared();
    let mut probabilities = Vec::with_capacity(dim);
    for j in 0..dim {
        let overlap = vectors.column(j).dotc(z);
        probabilities.push(overlap.norm_sqr() / norm2);
    }
    let spectral: Vec<f64> = (1..=order)
        .map(|k| {
            (0..dim)
                .map(|j| probabilities[j] * values[j].powi(k as i32))
                .sum()
        })
        .collect();

    Ok(MomentReport {
        exact,
        spectral,
        probabilities,
        order,
        scale,
    })
}

/// Draw `shots` pseudo-random eigenvalue outcomes from the spectral
/// distribution and return the sampled moment estimates. Demonstration
/// only; seeded by the caller.
pub fn sampled_moments<R: Rng>(
    beta: &Observable,
    p: &PhysicalState,
    order: usize,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let report = moments(beta, p, order)?;
    let (values, _) = eigendecompose(beta)?;
    let mut sums = vec![0.0; order];
    for _ in 0..shots {
        let u: f64 = rng.gen_range(0.0..1.0);
        let mut acc = 0.0;
        let mut outcome = values[values.len() - 1];
        for (j, &pj) in report.probabilities.iter().enumerate() {
            acc += pj;
            if u < acc {
                outcome = values[j];
                break;
            }
        }
        for k in 1..=order {
            sums[k - 1] += outcome.powi(k as i32);
        }
    }
    Ok(sums.into_iter().map(|s| s / shots as f64).collect())
}

/// The evaluation map of a fixed state: every observable to its
/// noncommutative value in the requested chart.
pub fn evaluation_map(
    state: &PhysicalState,
    betas: &[Observable],
    chart: Chart,
) -> Result<Vec<SymmetryData>> {
    let sv = state.as_state_vector();
    betas
        .iter()
        .map(|beta| match chart {
            Chart::HChart => symdata_h(beta, &sv),
            Chart::HomogeneousFs => symdata_z(beta, &sv),
            Chart::AffineFs => symdata_w(beta, state),
        })
        .collect()
}

/// Convenience: the chart's metric at a state, where the chart needs one.
pub fn chart_metric(state: &PhysicalState, chart: Chart) -> Result<Option<crate::kahler::MetricChart>> {
    match chart {
        Chart::HChart => Ok(None),
        Chart::HomogeneousFs => Ok(Some(metric_chart(
            MetricKind::HomogeneousFs,
            &state.as_state_vector(),
        )?)),
        Chart::AffineFs => Ok(Some(metric_chart_affine(state)?)),
    }
}
