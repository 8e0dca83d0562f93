use thiserror::Error;

/// Errors from interval, partition, gauge and symbolic-set operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SetError {
    #[error("invalid interval: {detail}")]
    InvalidInterval { detail: String },

    #[error("invalid partition: {detail}")]
    InvalidPartition { detail: String },

    #[error("tag {tag} lies outside cell {cell}")]
    TagOutsideCell { cell: usize, tag: f64 },

    #[error("invalid tolerance: {detail}")]
    InvalidTolerance { detail: String },

    #[error("gauge is not positive at {at}")]
    GaugeNotPositive { at: f64 },

    #[error("gauge undefined at {at}: {detail}")]
    GaugeUndefined { at: f64, detail: String },

    #[error("gauge numerically too fine on [{lo}, {hi}]: bisection depth exhausted")]
    GaugeTooFine { lo: f64, hi: f64 },

    #[error("epsilon sequence leaves (0,1) at index {index}: {value}")]
    EpsilonOutOfRange { index: u32, value: String },

    #[error("not expressible in the set AST: {detail}")]
    Inexpressible { detail: String },

    #[error("malformed set expression: {detail}")]
    MalformedSet { detail: String },

    #[error("derived-set iteration undetermined after {steps} steps; last state {last}")]
    RankUndetermined { steps: u32, last: String },

    #[error("set expression parse error at byte {position}: {detail}")]
    Parse { position: usize, detail: String },
}
