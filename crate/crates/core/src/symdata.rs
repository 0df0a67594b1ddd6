//! The noncommutative value itself: symmetry-data triplets (f, X, K) in the
//! three charts, and the product laws that compose two values into the
//! value of the operator product.
//!
//! Index convention (D12): `k[(m, n)]` stores K_{mn̄}. All product formulas
//! are transcribed with this single orientation and locked in by the
//! matrix-product oracle tests.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{extended_affine, PhysicalState, StateVector};
use crate::kahler::{MetricChart, MetricKind};
use crate::operators::Observable;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coordinate chart a symmetry-data triplet lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Hilbert-space H_β representation, flat metric.
    HChart,
    /// Projective f_β representation, homogeneous coordinates zⁿ.
    HomogeneousFs,
    /// Projective f_β representation, affine chart wⁿ (components 1..d−1).
    AffineFs,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::HChart => "H",
            Chart::HomogeneousFs => "z",
            Chart::AffineFs => "w",
        }
    }
}

/// The noncommutative value of an observable at a state: the scalar, the
/// Hamiltonian-vector-field covector components, and the mixed second
/// derivatives, all evaluated at the stored point.
#[derive(Debug, Clone)]
pub struct SymmetryData {
    chart: Chart,
    f: Complex64,
    x: DVector<Complex64>,
    xbar: DVector<Complex64>,
    k: DMatrix<Complex64>,
    /// Coordinates of the evaluation point: z for HChart/HomogeneousFs,
    /// w for AffineFs. Products across different points are rejected.
    point: DVector<Complex64>,
    hbar: f64,
}

impl SymmetryData {
    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn f(&self) -> Complex64 {
        self.f
    }

    pub fn x(&self) -> &DVector<Complex64> {
        &self.x
    }

    pub fn xbar(&self) -> &DVector<Complex64> {
        &self.xbar
    }

    pub fn k(&self) -> &DMatrix<Complex64> {
        &self.k
    }

    pub fn point(&self) -> &DVector<Complex64> {
        &self.point
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Number of covector components carried (d, or d−1 in the affine chart).
    pub fn dim_data(&self) -> usize {
        self.x.len()
    }

    /// Linearity of the value: α·A (componentwise).
    pub fn scaled(&self, alpha: Complex64) -> SymmetryData {
        SymmetryData {
            chart: self.chart,
            f: self.f * alpha,
            x: &self.x * alpha,
            xbar: &self.xbar * alpha,
            k: &self.k * alpha,
            point: self.point.clone(),
            hbar: self.hbar,
        }
    }

    /// Linearity of the value: A + B at the same point.
    pub fn sum(&self, other: &SymmetryData) -> Result<SymmetryData> {
        self.check_compatible(other, self.chart)?;
        Ok(SymmetryData {
            chart: self.chart,
            f: self.f + other.f,
            x: &self.x + &other.x,
            xbar: &self.xbar + &other.xbar,
            k: &self.k + &other.k,
            point: self.point.clone(),
            hbar: self.hbar,
        })
    }

    pub(crate) fn check_compatible(&self, other: &SymmetryData, chart: Chart) -> Result<()> {
        if self.chart != chart {
            return Err(Error::ChartMismatch {
                expected: chart.name(),
                got: self.chart.name(),
            });
        }
        if other.chart != chart {
            return Err(Error::ChartMismatch {
                expected: chart.name(),
                got: other.chart.name(),
            });
        }
        if self.x.len() != other.x.len() {
            return Err(Error::DimensionMismatch(self.x.len(), other.x.len()));
        }
        if self.point != other.point || self.hbar != other.hbar {
            return Err(Error::StateMismatch);
        }
        Ok(())
    }

    /// Copy with every K entry shifted by `eps`. Fault-injection hook for
    /// the conformance sweep: the K-bearing identities must flag it.
    pub fn with_k_perturbation(&self, eps: f64) -> SymmetryData {
        let shift = Complex64::new(eps, 0.0);
        SymmetryData {
            chart: self.chart,
            f: self.f,
            x: self.x.clone(),
            xbar: self.xbar.clone(),
            k: self.k.map(|c| c + shift),
            point: self.point.clone(),
            hbar: self.hbar,
        }
    }

    /// Assemble a triplet from raw components (used by the CLI when reading
    /// symmetry-data files back in).
    pub fn from_parts(
        chart: Chart,
        f: Complex64,
        x: DVector<Complex64>,
        xbar: DVector<Complex64>,
        k: DMatrix<Complex64>,
        point: DVector<Complex64>,
        hbar: f64,
    ) -> Result<Self> {
        let n = x.len();
        if xbar.len() != n || k.nrows() != n || k.ncols() != n {
            return Err(Error::DimensionMismatch(xbar.len(), n));
        }
        Ok(SymmetryData {
            chart,
            f,
            x,
            xbar,
            k,
            point,
            hbar,
        })
    }
}

/// Symmetry data of the H_β representation: X_n = i∂_n H, X̄_n = −i∂_n̄ H,
/// K_{mn̄} = −i∂_m∂_n̄ H = −(i/2ħ)⟨n|β|m⟩ (state-independent).
pub fn symdata_h(beta: &Observable, s: &StateVector) -> Result<SymmetryData> {
    if beta.dim() != s.dim() {
        return Err(Error::DimensionMismatch(beta.dim(), s.dim()));
    }
    let d = s.dim();
    let hbar = s.hbar();
    let z = s.z();
    let b = beta.matrix();
    let half = Complex64::new(2.0 * hbar, 0.0);

    let row = b.ad_mul(z); // row[n] = Σ_m conj(B[m][n]) z[m]; conj gives Σ z̄^m B[m][n]
    let x = DVector::from_fn(d, |n, _| I * row[n].conj() / half);
    let col = b * z;
    let xbar = DVector::from_fn(d, |n, _| -I * col[n] / half);
    let k = DMatrix::from_fn(d, d, |m, n| -I * b[(n, m)] / half);

    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..d {
        for n in 0..d {
            acc += z[m].conj() * z[n] * b[(m, n)];
        }
    }
    Ok(SymmetryData {
        chart: Chart::HChart,
        f: acc / half,
        x,
        xbar,
        k,
        point: z.clone(),
        hbar,
    })
}

// Shared derivative engine for the two projective charts: f_β over extended
// coordinates v with S = |v|², plus its first and mixed second derivatives.
fn projective_triplet(
    b: &DMatrix<Complex64>,
    v: &DVector<Complex64>,
    s2: f64,
) -> (Complex64, DVector<Complex64>, DVector<Complex64>, DMatrix<Complex64>) {
    let d = v.len();
    let s_inv = Complex64::new(1.0 / s2, 0.0);
    let col = b * v; // (Bv)_n
    let row: DVector<Complex64> = {
        let r = b.ad_mul(v);
        DVector::from_fn(d, |n, _| r[n].conj()) // (v†B)_n
    };
    let f = v.dotc(&col) * s_inv;
    let x = DVector::from_fn(d, |n, _| I * s_inv * (row[n] - f * v[n].conj()));
    let xbar = DVector::from_fn(d, |n, _| I * s_inv * (f * v[n] - col[n]));
    let k = DMatrix::from_fn(d, d, |m, n| {
        let delta = if m == n { f } else { Complex64::new(0.0, 0.0) };
        I * s_inv * (delta + I * v[m].conj() * xbar[n] - I * v[n] * x[m] - b[(n, m)])
    });
    (f, x, xbar, k)
}

/// Symmetry data of f_β in homogeneous coordinates (evaluated at the raw
/// |z|², not assumed normalized).
pub fn symdata_z(beta: &Observable, s: &StateVector) -> Result<SymmetryData> {
    if beta.dim() != s.dim() {
        return Err(Error::DimensionMismatch(beta.dim(), s.dim()));
    }
    let (f, x, xbar, k) = projective_triplet(beta.matrix(), s.z(), s.norm_squared());
    Ok(SymmetryData {
        chart: Chart::HomogeneousFs,
        f,
        x,
        xbar,
        k,
        point: s.z().clone(),
        hbar: s.hbar(),
    })
}

/// Symmetry data of f_β in the affine chart. Component indices run 1..d−1;
/// the internal sums include m = 0 with w⁰ = 1.
pub fn symdata_w(beta: &Observable, p: &PhysicalState) -> Result<SymmetryData> {
    if beta.dim() != p.dim() {
        return Err(Error::DimensionMismatch(beta.dim(), p.dim()));
    }
    let w = p.affine()?;
    let v = extended_affine(w.as_view());
    let s2 = v.norm_squared();
    let (f, x, xbar, k) = projective_triplet(beta.matrix(), &v, s2);
    let n = w.len();
    Ok(SymmetryData {
        chart: Chart::AffineFs,
        f,
        x: x.rows(1, n).clone_owned(),
        xbar: xbar.rows(1, n).clone_owned(),
        k: k.view((1, 1), (n, n)).clone_owned(),
        point: w.clone(),
        hbar: p.hbar(),
    })
}

/// Product law in the H chart:
/// H_{βγ} = 2ħ Σ X_{βn} X̄_{γn}, X_{βγ n} = 2iħ Σ X_{βm} K_{γ nm̄},
/// X̄_{βγ n} = 2iħ Σ K_{β mn̄} X̄_{γm}, K_{βγ mn̄} = 2iħ Σ K_{β ln̄} K_{γ ml̄}.
pub fn sd_product_h(a: &SymmetryData, b: &SymmetryData) -> Result<SymmetryData> {
    a.check_compatible(b, Chart::HChart)?;
    let d = a.x.len();
    let two_h = Complex64::new(2.0 * a.hbar, 0.0);
    let two_ih = I * two_h;

    let mut f = Complex64::new(0.0, 0.0);
    for n in 0..d {
        f += a.x[n] * b.xbar[n];
    }
    f *= two_h;

    let x = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            acc += a.x[m] * b.k[(n, m)];
        }
        acc * two_ih
    });
    let xbar = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            acc += a.k[(m, n)] * b.xbar[m];
        }
        acc * two_ih
    });
    let k = DMatrix::from_fn(d, d, |m, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..d {
            acc += a.k[(l, n)] * b.k[(m, l)];
        }
        acc * two_ih
    });
    Ok(SymmetryData {
        chart: Chart::HChart,
        f,
        x,
        xbar,
        k,
        point: a.point.clone(),
        hbar: a.hbar,
    })
}

/// Product law in homogeneous coordinates. The metric-bearing K term uses
/// the lowered FS metric g̃_{mn̄} carried by `metric`.
pub fn sd_product_z(
    a: &SymmetryData,
    b: &SymmetryData,
    metric: &MetricChart,
) -> Result<SymmetryData> {
    a.check_compatible(b, Chart::HomogeneousFs)?;
    if metric.kind != MetricKind::HomogeneousFs {
        return Err(Error::ChartMismatch {
            expected: "z",
            got: "metric of another chart",
        });
    }
    let d = a.x.len();
    let s2 = a.point.norm_squared();
    let cs2 = Complex64::new(s2, 0.0);
    let is2 = I * cs2;

    let mut grad = Complex64::new(0.0, 0.0);
    for n in 0..d {
        grad += a.x[n] * b.xbar[n];
    }

    let f = a.f * b.f + cs2 * grad;
    let x = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            acc += a.x[m] * b.k[(n, m)];
        }
        a.f * b.x[n] + a.x[n] * b.f + is2 * acc
    });
    let xbar = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..d {
            acc += a.k[(m, n)] * b.xbar[m];
        }
        a.f * b.xbar[n] + a.xbar[n] * b.f + is2 * acc
    });
    let metric_coeff = is2 / Complex64::new(a.hbar, 0.0) * grad;
    let k = DMatrix::from_fn(d, d, |m, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..d {
            acc += a.k[(l, n)] * b.k[(m, l)];
        }
        a.f * b.k[(m, n)] + a.k[(m, n)] * b.f + is2 * acc - I * a.xbar[n] * b.x[m]
            + metric_coeff * metric.g[(m, n)]
    });
    Ok(SymmetryData {
        chart: Chart::HomogeneousFs,
        f,
        x,
        xbar,
        k,
        point: a.point.clone(),
        hbar: a.hbar,
    })
}

/// Product law in the affine chart, with explicit g^{mn̄}/g_{mn̄}
/// contractions.
pub fn sd_product_w(
    a: &SymmetryData,
    b: &SymmetryData,
    metric: &MetricChart,
) -> Result<SymmetryData> {
    a.check_compatible(b, Chart::AffineFs)?;
    if metric.kind != MetricKind::AffineFs {
        return Err(Error::ChartMismatch {
            expected: "w",
            got: "metric of another chart",
        });
    }
    let d = a.x.len();
    let ch = Complex64::new(a.hbar, 0.0);
    let ih = I * ch;
    let gi = &metric.g_inv;

    // ħ X_β g^{lm̄} X̄_γ, shared by the f line and the final K term.
    let mut grad = Complex64::new(0.0, 0.0);
    for l in 0..d {
        for m in 0..d {
            grad += a.x[l] * gi[(l, m)] * b.xbar[m];
        }
    }

    let f = a.f * b.f + ch * grad;
    let x = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..d {
            for m in 0..d {
                acc += a.x[l] * gi[(l, m)] * b.k[(n, m)];
            }
        }
        a.f * b.x[n] + a.x[n] * b.f + ih * acc
    });
    let xbar = DVector::from_fn(d, |n, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..d {
            for m in 0..d {
                acc += a.k[(l, n)] * gi[(l, m)] * b.xbar[m];
            }
        }
        a.f * b.xbar[n] + a.xbar[n] * b.f + ih * acc
    });
    let k = DMatrix::from_fn(d, d, |m, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..d {
            for o in 0..d {
                acc += a.k[(l, n)] * gi[(l, o)] * b.k[(m, o)];
            }
        }
        a.f * b.k[(m, n)] + a.k[(m, n)] * b.f + ih * acc - I * a.xbar[n] * b.x[m]
            + I * metric.g[(m, n)] * grad
    });
    Ok(SymmetryData {
        chart: Chart::AffineFs,
        f,
        x,
        xbar,
        k,
        point: a.point.clone(),
        hbar: a.hbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::normalize_ray;
    use crate::kahler::{metric_chart, metric_chart_affine};
    use crate::operators::{identity, ladder, number, product, Observable};
    use crate::sampling::{sample_operator, sample_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_component_err(a: &SymmetryData, b: &SymmetryData) -> f64 {
        let rel = |x: Complex64, y: Complex64| {
            let d = (x - y).norm();
            let s = y.norm();
            if s < 1e-12 {
                d
            } else {
                d / s
            }
        };
        let mut worst = rel(a.f(), b.f());
        for n in 0..a.x().len() {
            worst = worst.max(rel(a.x()[n], b.x()[n]));
            worst = worst.max(rel(a.xbar()[n], b.xbar()[n]));
        }
        for m in 0..a.k().nrows() {
            for n in 0..a.k().ncols() {
                worst = worst.max(rel(a.k()[(m, n)], b.k()[(m, n)]));
            }
        }
        worst
    }

    #[test]
    fn h_chart_identity_components() {
        let hbar = 0.5;
        let s = StateVector::from_components(&[c(0.4, 0.3), c(-1.0, 0.2), c(0.0, 1.1)], hbar)
            .unwrap();
        let sd = symdata_h(&identity(3, hbar), &s).unwrap();
        let half = 2.0 * hbar;
        for n in 0..3 {
            let expect_x = I * s.z()[n].conj() / c(half, 0.0);
            let expect_xb = -I * s.z()[n] / c(half, 0.0);
            assert!((sd.x()[n] - expect_x).norm() < 1e-14);
            assert!((sd.xbar()[n] - expect_xb).norm() < 1e-14);
            assert!((sd.k()[(n, n)] + I / c(half, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn h_chart_diagonal_eigenbasis_form() {
        let hbar = 1.0;
        let d = 4;
        let lambda = [0.7, -1.2, 2.5, 0.1];
        let b = DMatrix::from_fn(d, d, |m, n| {
            if m == n {
                c(lambda[m], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let beta = Observable::new(b, hbar).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sample_state(&mut rng, d, hbar);
        let sd = symdata_h(&beta, &s).unwrap();
        for n in 0..d {
            let expect = I * c(lambda[n] / (2.0 * hbar), 0.0) * s.z()[n].conj();
            assert!((sd.x()[n] - expect).norm() < 1e-14);
            assert!((sd.k()[(n, n)] + I * c(lambda[n] / (2.0 * hbar), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn h_chart_k_is_state_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let hbar = 2.0;
        let d = 5;
        let beta = sample_operator(&mut rng, d, hbar);
        let s1 = sample_state(&mut rng, d, hbar);
        let s2 = sample_state(&mut rng, d, hbar);
        let k1 = symdata_h(&beta, &s1).unwrap();
        let k2 = symdata_h(&beta, &s2).unwrap();
        // exact floating equality: the same arithmetic path runs both times
        assert_eq!(k1.k(), k2.k());
        // K[m][n] = -(i/2 hbar) B[n][m]
        for m in 0..d {
            for n in 0..d {
                let expect = -I * beta.matrix()[(n, m)] / c(2.0 * hbar, 0.0);
                assert_eq!(k1.k()[(m, n)], expect);
            }
        }
    }

    #[test]
    fn z_chart_identity_is_constant_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = sample_state(&mut rng, 4, 1.0);
        let sd = symdata_z(&identity(4, 1.0), &s).unwrap();
        assert!((sd.f() - c(1.0, 0.0)).norm() < 1e-14);
        assert!(sd.x().norm() < 1e-14);
        assert!(sd.xbar().norm() < 1e-14);
        assert!(sd.k().norm() < 1e-14);
    }

    #[test]
    fn z_chart_horizontality() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d = 6;
        let s = sample_state(&mut rng, d, 0.5);
        let beta = sample_operator(&mut rng, d, 0.5);
        let sd = symdata_z(&beta, &s).unwrap();
        let mut acc = c(0.0, 0.0);
        for n in 0..d {
            acc += s.z()[n] * sd.x()[n];
        }
        assert!(acc.norm() < 1e-11 * sd.x().norm().max(1.0));
    }

    #[test]
    fn w_chart_identity_and_origin() {
        let hbar = 1.0;
        let d = 4;
        let mut z = DVector::from_element(d, c(0.0, 0.0));
        z[0] = c(1.0, 0.0);
        let p = normalize_ray(&StateVector::new(z, hbar).unwrap()).unwrap();
        let sd_i = symdata_w(&identity(d, hbar), &p).unwrap();
        assert!(sd_i.x().norm() < 1e-14 && sd_i.k().norm() < 1e-14);

        // at w = 0: X_n = i [Σ_m w̄^m B[m][n] − f w̄_n] / (1+|w|²) = i B[0][n]
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let beta = sample_operator(&mut rng, d, hbar);
        let sd = symdata_w(&beta, &p).unwrap();
        for n in 1..d {
            let expect = I * beta.matrix()[(0, n)];
            assert!((sd.x()[n - 1] - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn covector_pullback_identity() {
        // X^z_n dz^n = X^w_n dw^n with dw^n = (dz^n z0 − z^n dz0)/z0².
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let hbar = 1.0;
        let d = 5;
        let s = sample_state(&mut rng, d, hbar);
        let p = normalize_ray(&s).unwrap();
        let sv = p.as_state_vector();
        let beta = sample_operator(&mut rng, d, hbar);
        let sd_z = symdata_z(&beta, &sv).unwrap();
        let sd_w = symdata_w(&beta, &p).unwrap();
        let z = sv.z();
        let dz = sample_state(&mut rng, d, hbar);
        let dz = dz.z();
        let mut lhs = c(0.0, 0.0);
        for n in 0..d {
            lhs += sd_z.x()[n] * dz[n];
        }
        let z0 = z[0];
        let mut rhs = c(0.0, 0.0);
        for n in 1..d {
            let dw = (dz[n] * z0 - z[n] * dz[0]) / (z0 * z0);
            rhs += sd_w.x()[n - 1] * dw;
        }
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn product_h_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let hbar = 0.5;
        let d = 6;
        let s = sample_state(&mut rng, d, hbar);
        let beta = sample_operator(&mut rng, d, hbar);
        let gamma = sample_operator(&mut rng, d, hbar);
        let got = sd_product_h(
            &symdata_h(&beta, &s).unwrap(),
            &symdata_h(&gamma, &s).unwrap(),
        )
        .unwrap();
        let expect = symdata_h(&product(&beta, &gamma).unwrap(), &s).unwrap();
        assert!(max_component_err(&got, &expect) < 1e-10);

        // ladder pair
        let (a, adag) = ladder(d, hbar).unwrap();
        let got = sd_product_h(&symdata_h(&a, &s).unwrap(), &symdata_h(&adag, &s).unwrap())
            .unwrap();
        let expect = symdata_h(&product(&a, &adag).unwrap(), &s).unwrap();
        assert!(max_component_err(&got, &expect) < 1e-10);

        // identity is idempotent
        let sd_i = symdata_h(&identity(d, hbar), &s).unwrap();
        let got = sd_product_h(&sd_i, &sd_i).unwrap();
        assert!(max_component_err(&got, &sd_i) < 1e-12);
    }

    #[test]
    fn product_z_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let hbar = 1.0;
        let d = 5;
        let s = sample_state(&mut rng, d, hbar);
        let metric = metric_chart(crate::kahler::MetricKind::HomogeneousFs, &s).unwrap();
        let beta = sample_operator(&mut rng, d, hbar);
        let gamma = sample_operator(&mut rng, d, hbar);
        let got = sd_product_z(
            &symdata_z(&beta, &s).unwrap(),
            &symdata_z(&gamma, &s).unwrap(),
            &metric,
        )
        .unwrap();
        let expect = symdata_z(&product(&beta, &gamma).unwrap(), &s).unwrap();
        assert!(max_component_err(&got, &expect) < 1e-10);
    }

    #[test]
    fn product_w_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let hbar = 0.5;
        let d = 5;
        let p = normalize_ray(&sample_state(&mut rng, d, hbar)).unwrap();
        let metric = metric_chart_affine(&p).unwrap();
        let beta = sample_operator(&mut rng, d, hbar);
        let gamma = sample_operator(&mut rng, d, hbar);
        let got = sd_product_w(
            &symdata_w(&beta, &p).unwrap(),
            &symdata_w(&gamma, &p).unwrap(),
            &metric,
        )
        .unwrap();
        let expect = symdata_w(&product(&beta, &gamma).unwrap(), &p).unwrap();
        assert!(max_component_err(&got, &expect) < 1e-10);

        // number operator squared at the |0> ray
        let d2 = 4;
        let mut z = DVector::from_element(d2, c(0.0, 0.0));
        z[0] = c(2.0, 0.0);
        let p0 = normalize_ray(&StateVector::new(z, hbar).unwrap()).unwrap();
        let m0 = metric_chart_affine(&p0).unwrap();
        let nop = number(d2, hbar).unwrap();
        let sd_n = symdata_w(&nop, &p0).unwrap();
        let got = sd_product_w(&sd_n, &sd_n, &m0).unwrap();
        let expect = symdata_w(&product(&nop, &nop).unwrap(), &p0).unwrap();
        assert!(max_component_err(&got, &expect) < 1e-10);
    }

    #[test]
    fn product_rejects_mismatched_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d = 3;
        let s1 = sample_state(&mut rng, d, 1.0);
        let s2 = sample_state(&mut rng, d, 1.0);
        let beta = sample_operator(&mut rng, d, 1.0);
        let a = symdata_h(&beta, &s1).unwrap();
        let b = symdata_h(&beta, &s2).unwrap();
        assert!(matches!(sd_product_h(&a, &b), Err(Error::StateMismatch)));
    }

    #[test]
    fn phase_invariance_of_z_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let d = 4;
        let hbar = 1.0;
        let s = sample_state(&mut rng, d, hbar);
        let beta = sample_operator(&mut rng, d, hbar);
        let theta = 0.9;
        let phase = c(0.0, theta).exp();
        let rotated = StateVector::new(s.z() * phase, hbar).unwrap();
        let sd1 = symdata_z(&beta, &s).unwrap();
        let sd2 = symdata_z(&beta, &rotated).unwrap();
        assert!((sd1.f() - sd2.f()).norm() < 1e-12);
        // f and K invariant, X covariant: X(e^{iθ}z) = e^{−iθ} X(z)
        assert!((sd1.k() - sd2.k()).norm() < 1e-12 * sd1.k().norm().max(1.0));
        for n in 0..d {
            assert!((sd2.x()[n] - sd1.x()[n] / phase).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_beta_gives_real_f_conjugate_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let d = 5;
        let hbar = 0.5;
        let s = sample_state(&mut rng, d, hbar);
        let p = normalize_ray(&s).unwrap();
        let raw = sample_operator(&mut rng, d, hbar);
        let (beta, _) = crate::operators::hermitian_split(&raw);
        for sd in [
            symdata_h(&beta, &s).unwrap(),
            symdata_z(&beta, &s).unwrap(),
            symdata_w(&beta, &p).unwrap(),
        ] {
            assert!(sd.f().im.abs() < 1e-12 * sd.f().norm().max(1.0));
            for n in 0..sd.x().len() {
                assert!((sd.xbar()[n] - sd.x()[n].conj()).norm() < 1e-12);
            }
            // i K is Hermitian for Hermitian beta
            let ik = sd.k() * I;
            assert!((&ik - ik.adjoint()).norm() < 1e-12 * ik.norm().max(1.0));
        }
    }

    #[test]
    fn non_hermitian_closure_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let d = 4;
        let s = sample_state(&mut rng, d, 1.0);
        let beta = sample_operator(&mut rng, d, 1.0);
        let (re, im) = crate::operators::hermitian_split(&beta);
        let whole = symdata_z(&beta, &s).unwrap();
        let parts = symdata_z(&re, &s)
            .unwrap()
            .sum(&symdata_z(&im, &s).unwrap().scaled(I))
            .unwrap();
        assert!(max_component_err(&whole, &parts) < 1e-12);
    }
}
