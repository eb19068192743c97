use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph6 parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("graph order {n} exceeds the supported cap of {cap}")]
    UnsupportedSize { n: usize, cap: usize },

    #[error("chordless cycle count exceeded the cap of {cap}")]
    CycleCapExceeded { cap: usize },

    #[error("power iteration did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },

    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),

    #[error("starting graph already contains {k} vertex-disjoint cycles")]
    Infeasible { k: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
