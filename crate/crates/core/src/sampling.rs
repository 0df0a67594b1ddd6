//! Seeded random states and operators for conformance sweeps and tests.
//!
//! Operator entries are i.i.d. complex with real and imaginary parts
//! uniform in [−1, 1]; Hermitian variants via (A + A†)/2.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::hilbert::StateVector;
use crate::operators::{hermitian_split, Observable};

pub fn sample_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Random state vector; re-drawn in the (measure-zero) case of a norm
/// below the zero tolerance.
pub fn sample_state<R: Rng>(rng: &mut R, dim: usize, hbar: f64) -> StateVector {
    loop {
        let z = DVector::from_fn(dim, |_, _| sample_complex(rng));
        if let Ok(s) = StateVector::new(z, hbar) {
            return s;
        }
    }
}

pub fn sample_operator<R: Rng>(rng: &mut R, dim: usize, hbar: f64) -> Observable {
    let b = DMatrix::from_fn(dim, dim, |_, _| sample_complex(rng));
    Observable::new(b, hbar).expect("dim >= 2")
}

pub fn sample_hermitian<R: Rng>(rng: &mut R, dim: usize, hbar: f64) -> Observable {
    let (re, _) = hermitian_split(&sample_operator(rng, dim, hbar));
    re
}

/// Random invertible operator: resampled until the condition number is
/// comfortably inside the reconstruction guard.
pub fn sample_invertible<R: Rng>(rng: &mut R, dim: usize, hbar: f64) -> Observable {
    loop {
        let op = sample_operator(rng, dim, hbar);
        let svd = op.matrix().clone().svd(false, false);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        if min > 0.0 && max / min < 1e6 {
            return op;
        }
    }
}
