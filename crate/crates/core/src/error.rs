use thiserror::Error;

use crate::division::AlgebraTag;
use crate::lie::FlagModel;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("algebra mismatch: {left:?} vs {right:?}")]
    TagMismatch { left: AlgebraTag, right: AlgebraTag },

    #[error("model mismatch: {left} vs {right}")]
    ModelMismatch { left: FlagModel, right: FlagModel },

    #[error("{what}: expected dimension {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("rank defect while building {what}: expected {expected}, found {found}")]
    RankDefect {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("metric parameters must be positive and non-degenerate: {0}")]
    Domain(String),

    #[error("degenerate plane: X and Y are linearly dependent")]
    DegeneratePlane,

    #[error("{0} is not nested inside {1}")]
    NotNested(FlagModel, FlagModel),

    #[error("{0} has no closed-form block matrices")]
    NoBlocks(FlagModel),

    #[error("p_{r}(s) = {value} < 0, so the metric has negative sectional curvature")]
    NegativeP { r: usize, value: f64 },

    #[error("no strongly positive certificate: {0}")]
    NotStronglyPositive(String),

    #[error("perturbation search exhausted after {steps} halvings (best block minimum {best:e})")]
    BisectionExhausted { steps: usize, best: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FlagError>;
