use core::fmt;

use crate::ray_optics::RayTransferMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// The cavity has no confined Gaussian mode (negative spot-size radicand).
    UnstableResonator { matrix: RayTransferMatrix },
    /// `A·C = 0`: the spot-size expression is undefined.
    DegenerateCavity { matrix: RayTransferMatrix },
    /// A design search found no evaluable point.
    OptimizationFailed,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidArgument {
            name,
            value,
            reason,
        }
    }

    /// True for the resonator-level failures a sweep records as "unstable".
    pub fn is_unstable(&self) -> bool {
        matches!(
            self,
            Error::UnstableResonator { .. } | Error::DegenerateCavity { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument {
                name,
                value,
                reason,
            } => write!(f, "invalid argument {name} = {value}: {reason}"),
            Error::UnstableResonator { matrix: m } => write!(
                f,
                "unstable resonator: -B·D/(A·C) < 0 for A = {}, B = {}, C = {}, D = {}",
                m.a, m.b, m.c, m.d
            ),
            Error::DegenerateCavity { matrix: m } => write!(
                f,
                "degenerate cavity: A·C = 0 for A = {}, B = {}, C = {}, D = {}",
                m.a, m.b, m.c, m.d
            ),
            Error::OptimizationFailed => f.write_str("optimization failed: no evaluable point"),
        }
    }
}

impl core::error::Error for Error {}
