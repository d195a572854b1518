//! Finite subgroups of GL2(F_p), their module theory and cohomology, and
//! certificates that Sha of an elliptic curve over Q is p-divisible in H^1.

pub mod bounds;
pub mod certify;
pub mod cohomology;
pub mod elliptic;
pub mod error;
pub mod fp;
pub mod gmodule;
pub mod group;
pub mod matrix;
pub mod selmer_ring;

pub use bounds::{threshold_degree, BoundReport};
pub use certify::{certify_q, Certificate, Verdict};
pub use cohomology::{h1_brute_force, h1_dimension};
pub use elliptic::{CurveQ, ReductionInfo, ReductionKind};
pub use error::{Error, Result};
pub use fp::{FpScalar, PrimeField};
pub use gmodule::GModule;
pub use group::{Gl2, Mat2, MatrixGroup};
pub use matrix::FpMatrix;
