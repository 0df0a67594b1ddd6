//! Noncommutative values of quantum observables on truncated Hilbert
//! spaces: symmetry-data triplets (f, X, K), the Kähler star products that
//! make them an algebra isomorphic to the operator algebra, and the
//! physics consequences (state reconstruction, von Neumann moments) — all
//! verifiable against a brute-force matrix oracle.

pub mod conformance;
pub mod error;
pub mod evaluation;
pub mod hilbert;
pub mod io;
pub mod kahler;
pub mod operators;
pub mod sampling;
pub mod symdata;

pub use error::{Error, Result};
pub use hilbert::{normalize_ray, ray_equal, to_affine, PhysicalState, StateVector};
pub use kahler::{f_function, h_function, metric_chart, metric_chart_affine, MetricChart,
    MetricKind};
pub use operators::Observable;
pub use symdata::{sd_product_h, sd_product_w, sd_product_z, symdata_h, symdata_w, symdata_z,
    Chart, SymmetryData};
