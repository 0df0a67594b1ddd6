//! Observables as dense complex matrices on the truncated oscillator basis.
//!
//! B[(m, n)] holds ⟨m|β|n⟩. Non-Hermitian operators are first-class;
//! Hermiticity is a queryable property, not an invariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the dimension produced by tensor products.
pub const DEFAULT_MAX_DIM: usize = 64;

pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    b: DMatrix<Complex64>,
    hbar: f64,
}

impl Observable {
    pub fn new(b: DMatrix<Complex64>, hbar: f64) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::DimensionMismatch(b.nrows(), b.ncols()));
        }
        let dim = b.nrows();
        if dim < 2 {
            return Err(Error::DimensionMismatch(dim, 2));
        }
        Ok(Self { dim, b, hbar })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    pub fn adjoint(&self) -> Observable {
        Observable {
            dim: self.dim,
            b: self.b.adjoint(),
            hbar: self.hbar,
        }
    }

    /// B = B† within `HERMITIAN_TOL`, relative to the matrix scale.
    pub fn is_hermitian(&self) -> bool {
        let scale = self.b.norm().max(1.0);
        (&self.b - self.b.adjoint()).norm() <= HERMITIAN_TOL * scale
    }

    pub fn scale(&self, factor: Complex64) -> Observable {
        Observable {
            dim: self.dim,
            b: &self.b * factor,
            hbar: self.hbar,
        }
    }

    pub fn add(&self, other: &Observable) -> Result<Observable> {
        check_same_space(self, other)?;
        Ok(Observable {
            dim: self.dim,
            b: &self.b + &other.b,
            hbar: self.hbar,
        })
    }
}

fn check_same_space(a: &Observable, b: &Observable) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(())
}

pub fn identity(dim: usize, hbar: f64) -> Observable {
    Observable {
        dim,
        b: DMatrix::identity(dim, dim),
        hbar,
    }
}

/// Truncated annihilation/creation pair: a[(n−1, n)] = √n.
pub fn ladder(dim: usize, hbar: f64) -> Result<(Observable, Observable)> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(dim, 2));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((
        Observable { dim, b: a, hbar },
        Observable { dim, b: adag, hbar },
    ))
}

/// Number operator a†a = diag(0, 1, …, d−1).
pub fn number(dim: usize, hbar: f64) -> Result<Observable> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(dim, 2));
    }
    let b = DMatrix::from_fn(dim, dim, |m, n| {
        if m == n {
            Complex64::new(m as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(Observable { dim, b, hbar })
}

/// x = √(ħ/2)(a + a†), p = i√(ħ/2)(a† − a), in m = ω = 1 units.
pub fn position_momentum(dim: usize, hbar: f64) -> Result<(Observable, Observable)> {
    let (a, adag) = ladder(dim, hbar)?;
    let s = Complex64::new((hbar / 2.0).sqrt(), 0.0);
    let x = (a.matrix() + adag.matrix()) * s;
    let p = (adag.matrix() - a.matrix()) * (s * Complex64::new(0.0, 1.0));
    Ok((
        Observable { dim, b: x, hbar },
        Observable { dim, b: p, hbar },
    ))
}

/// Matrix product A·B. This is the oracle every star-product identity is
/// checked against.
pub fn product(a: &Observable, b: &Observable) -> Result<Observable> {
    check_same_space(a, b)?;
    Ok(Observable {
        dim: a.dim,
        b: &a.b * &b.b,
        hbar: a.hbar,
    })
}

pub fn commutator(a: &Observable, b: &Observable) -> Result<Observable> {
    check_same_space(a, b)?;
    Ok(Observable {
        dim: a.dim,
        b: &a.b * &b.b - &b.b * &a.b,
        hbar: a.hbar,
    })
}

pub fn anticommutator(a: &Observable, b: &Observable) -> Result<Observable> {
    check_same_space(a, b)?;
    Ok(Observable {
        dim: a.dim,
        b: &a.b * &b.b + &b.b * &a.b,
        hbar: a.hbar,
    })
}

/// A = Re + i·Im with both parts Hermitian.
pub fn hermitian_split(a: &Observable) -> (Observable, Observable) {
    let adj = a.b.adjoint();
    let re = (&a.b + &adj) * Complex64::new(0.5, 0.0);
    let im = (&a.b - &adj) * Complex64::new(0.0, -0.5);
    (
        Observable {
            dim: a.dim,
            b: re,
            hbar: a.hbar,
        },
        Observable {
            dim: a.dim,
            b: im,
            hbar: a.hbar,
        },
    )
}

/// Kronecker product with row-major index pairing (m₁, m₂) → m₁·d₂ + m₂.
pub fn tensor(a: &Observable, b: &Observable, max_dim: usize) -> Result<Observable> {
    let dim = a.dim * b.dim;
    if dim > max_dim {
        return Err(Error::DimensionTooLarge(dim, max_dim));
    }
    Ok(Observable {
        dim,
        b: a.b.kronecker(&b.b),
        hbar: a.hbar,
    })
}

/// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors
/// orthonormal as matrix columns.
pub fn eigendecompose(a: &Observable) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let eig = a
        .b
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..a.dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values = DVector::from_fn(a.dim, |k, _| eig.eigenvalues[order[k]]);
    let mut vectors = DMatrix::zeros(a.dim, a.dim);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}
