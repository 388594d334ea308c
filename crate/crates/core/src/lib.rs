//! Exact arithmetic for metric Diophantine approximation over `F_k((X^{-1}))`.

pub mod abs;
pub mod boxcount;
pub mod dimension;
pub mod error;
pub mod exponents;
pub mod ff;
pub mod laurent;
pub mod linalg;
pub mod measure;
pub mod poly;
pub mod serde_util;
pub mod stochastic;
pub mod verify;

pub use abs::AbsValue;
pub use error::{Error, Result};
pub use ff::{FieldConfig, FieldElement, FieldSpec};
pub use laurent::{LaurentMatrix, LaurentSeries};
pub use measure::KadicMeasure;
pub use poly::{PolyVector, Polynomial};
