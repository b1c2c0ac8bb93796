use thiserror::Error;

use crate::exponents::ExtRational;

/// Failures of the exponent calculus and the classifiers built on it.
///
/// Every variant names the criterion whose precondition was violated so
/// that command-line diagnostics can point at the relevant statement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExponentError {
    /// Sobolev lifting at the critical space exponent q = 3.
    #[error(
        "critical exponent q = 3 in {criterion}: the Sobolev embedding W^(1,3) is not into L^inf"
    )]
    CriticalExponent { criterion: &'static str },

    #[error("{name} = {value} is out of range for {criterion}: requires {requirement}")]
    ExponentOutOfRange {
        name: &'static str,
        value: ExtRational,
        requirement: &'static str,
        criterion: &'static str,
    },

    /// Slip boundary conditions need a domain with vanishing first Betti number.
    #[error("curl-to-gradient transfer with slip boundary requires a domain with vanishing first Betti number")]
    TopologyObstruction,

    /// The iteration left the admissible range (time exponent below 1).
    #[error("iteration exhausted: time exponent {time_exp} < 1 after Hoelder step")]
    IterationExhausted { time_exp: ExtRational },

    #[error("hypothesis too weak: scaling level 2/alpha + 3/beta = {level} is not < 1")]
    HypothesisTooWeak { level: ExtRational },
}

impl ExponentError {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: &ExtRational,
        requirement: &'static str,
        criterion: &'static str,
    ) -> Self {
        ExponentError::ExponentOutOfRange {
            name,
            value: value.clone(),
            requirement,
            criterion,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExponentError>;
