//! Hand-differentiated building blocks: halo-aware GraphSAGE mean layer,
//! normalized GCN propagation, softmax cross-entropy, dropout and Adam.

pub mod loss;
pub mod model;
pub mod optim;
pub mod propagate;
pub mod sage;

use ndarray::NdFloat;
use num_traits::FromPrimitive;

/// Scalar type used throughout the numeric kernels; `f32` for bench mode,
/// `f64` for oracle/test mode.
pub trait Real: NdFloat + FromPrimitive {}
impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("finite f64 converts")
}
