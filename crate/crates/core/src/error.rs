use crate::immersion::{Chart, DiscreteImmersion};

/// Every failure the library reports.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid curvature data: {0}")]
    Validation(String),

    #[error("metric is not positive definite at y = {y:?} (eps = {eps})")]
    NotPositiveDefinite { y: [f64; 3], eps: f64 },

    #[error("eps = {eps} exceeds the admissibility bound {bound}")]
    Inadmissible { eps: f64, bound: f64 },

    #[error("immersion degenerates on the {chart} chart at node ({i}, {j}): det gbar = {det:e}")]
    Degenerate { chart: Chart, i: usize, j: usize, det: f64 },

    #[error("normal orientation is ambiguous: center of mass lies on the tangent plane of the {chart} chart center")]
    OrientationAmbiguous { chart: Chart },

    #[error("stencil margin exhausted: {what} is undefined inside the quadrature support at resolution n = {n}")]
    Margin { what: &'static str, n: usize },

    #[error("degenerate projection: <H, H> = {0:e}")]
    DegenerateProjection(f64),

    #[error("conformality defect {defect:e} exceeds the threshold {threshold:e}")]
    NotConformal { defect: f64, threshold: f64 },

    #[error("gauge normalization failed: {0}")]
    Gauge(String),

    #[error("line search failed at iteration {iter}: residual {residual:e} could not be decreased")]
    LineSearch { iter: usize, residual: f64, snapshot: Box<DiscreteImmersion> },

    #[error("solver iterate degenerated at iteration {iter}: {source}")]
    SolverDegenerate {
        iter: usize,
        #[source]
        source: Box<Error>,
        snapshot: Box<DiscreteImmersion>,
    },

    #[error("least-squares system is rank deficient: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
