//! Curvature operators of homogeneous metrics on the Wallach flag manifolds
//! W⁶ = SU(3)/T², W¹² = Sp(3)/Sp(1)³ and W²⁴ = F₄/Spin(8), and the moduli
//! of metrics with strongly nonnegative and strongly positive curvature.

// index loops mirror the tensor formulas
#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod division;
pub mod error;
pub mod exterior;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod scan;
pub mod selftest;

pub use division::{AlgebraElement, AlgebraTag};
pub use error::{FlagError, Result};
pub use curvature::{curvature_operator, CurvatureOperator, MetricParams};
pub use forms::{closed_form_blocks, omega0, BlockMatrices, InvariantCoeffs};
pub use lie::{FlagAlgebra, FlagModel, GVector, MVector};
pub use moduli::{classify, Certificate, Classification, Flags, Reason};
