//! Error type shared by all modules.

use alloc::string::String;

use crate::params::SymmetryClass;

/// Convenience alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Parameter point violates a structural invariant (for example `nu1 = 0`).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Gauge element with `Lambda = 0`.
    #[error("gauge element must have nonzero Lambda")]
    SingularGauge,
    /// Variable name not in `x1..xn, t, r, s`.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// Expression text could not be parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse {
        /// Byte offset into the input.
        pos: usize,
        /// What went wrong.
        msg: String,
    },
    /// Vector fields of different spatial dimension were combined.
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch {
        /// Dimension of the left operand.
        left: usize,
        /// Dimension of the right operand.
        right: usize,
    },
    /// Generator does not exist for the given parameter point.
    #[error("generator {generator} is not admissible for class {class}")]
    Inadmissible {
        /// Generator label.
        generator: String,
        /// Class of the parameter point.
        class: SymmetryClass,
    },
    /// Generator coefficients involve data that the expression engine cannot hold.
    #[error("generator {0} has no symbolic representation")]
    NotSymbolic(String),
    /// Vector field outside the reduced form `xi = xi(x, t)`, `tau = tau(t)`.
    #[error("vector field violates the reduced dependence assumption: {0}")]
    NotReduced(String),
    /// Flow parameter hits a singularity of the transformation.
    #[error("singular flow: {0}")]
    SingularFlow(String),
    /// Grid relocation requires data outside the available support.
    #[error("flow leaves the grid support: {0}")]
    OutOfSupport(String),
    /// Grid construction or compatibility problem.
    #[error("grid error: {0}")]
    Grid(String),
    /// Field data is not a valid log-polar field.
    #[error("invalid field: {0}")]
    InvalidField(String),
    /// Residual evaluation needs more time slices.
    #[error("need at least {need} time slices, got {got}")]
    TooFewSlices {
        /// Required count.
        need: usize,
        /// Supplied count.
        got: usize,
    },
    /// Time stepping diverged.
    #[error("blow-up at step {step}: max |r| = {value}")]
    BlowUp {
        /// Step index at which the bound was exceeded.
        step: usize,
        /// Offending sup-norm.
        value: f64,
    },
    /// Linearization requested for a class that has none.
    #[error("class {0} is not linearizable (needs Sym1b or Sym1c)")]
    NotLinearizable(SymmetryClass),
    /// A quantity that must be positive (heat solution, log argument) is not.
    #[error("non-positive value: {0}")]
    NonPositive(String),
    /// Heat solution carries the wrong diffusion coefficient or direction.
    #[error("heat data mismatch: {0}")]
    HeatMismatch(String),
    /// Numerical overflow or non-finite result.
    #[error("numerical overflow: {0}")]
    Overflow(String),
    /// Any other invalid argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
