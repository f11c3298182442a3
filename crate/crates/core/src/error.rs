use thiserror::Error;

/// Errors surfaced by the numerical operations.
///
/// Variants split into validation failures (bad inputs, out-of-domain
/// parameters) and numerical failures (an iteration or refinement that did
/// not reach its target). The CLI maps the former to exit code 2 and the
/// latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma pole: argument {0} is a non-positive integer")]
    GammaPole(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate lattice basis: Gram determinant {det:.3e} below threshold")]
    DegenerateBasis { det: f64 },

    #[error("lattice sum diverges: effective exponent {s_eff} <= lattice dimension {m}")]
    NonconvergentSum { s_eff: f64, m: usize },

    #[error("lattice sum tolerance {tol:.3e} unreachable within budget (certified {achieved:.3e})")]
    SumTolUnreachable { tol: f64, achieved: f64 },

    #[error("|tau| = {tau:.6} exceeds the admissible bound c0/4 = {limit:.6}")]
    TauTooLarge { tau: f64, limit: f64 },

    #[error("shape leaves the admissible set: sup|phi| = {sup:.6} >= 1")]
    ShapeOutsideDomain { sup: f64 },

    #[error("quadrature did not converge: estimate {estimate:.3e} > tol {tol:.3e} at order {order}")]
    QuadratureNonconvergence { tol: f64, estimate: f64, order: usize },

    #[error("cutoff degree {k} exceeds grid exactness {max_exact} minus margin")]
    CutoffExceedsGrid { k: usize, max_exact: usize },

    #[error("input carries odd-degree content {residual:.3e} above tolerance")]
    OddContent { residual: f64 },

    #[error("Newton did not converge after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("operation requires a rectangular lattice")]
    NotRectangular,

    #[error("invalid harmonic index: N={n}, k={k}, m={m}")]
    InvalidHarmonicIndex { n: usize, k: usize, m: i64 },

    #[error("internal consistency check failed ({what}): residual {residual:.3e}")]
    ConsistencyCheckFailed { what: &'static str, residual: f64 },
}

impl Error {
    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GammaPole(_)
                | Error::InvalidParams(_)
                | Error::DegenerateBasis { .. }
                | Error::NonconvergentSum { .. }
                | Error::TauTooLarge { .. }
                | Error::ShapeOutsideDomain { .. }
                | Error::CutoffExceedsGrid { .. }
                | Error::NotRectangular
                | Error::InvalidHarmonicIndex { .. }
        )
    }
}
