use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid spec: {field}: {reason}")]
    InvalidSpec { field: String, reason: String },
    #[error("enumeration guard exceeded: n = {n} > {limit}")]
    GuardExceeded { n: usize, limit: usize },
    #[error("perturbation {perturbation} does not apply to a {kind} matroid")]
    IncompatiblePerturbation { perturbation: String, kind: String },
    #[error("superset precondition violated: clean-independent set {set} is dirty-dependent in matroid {slot}")]
    SupersetViolation { slot: u8, set: String },
    #[error("missing bound parameter {0}")]
    MissingParam(&'static str),
    #[error("algorithm {algorithm} cannot run on this instance: {reason}")]
    Incompatible { algorithm: String, reason: String },
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Largest n for exhaustive weighted basis enumeration.
pub const BASIS_GUARD: usize = 20;
/// Largest n for the 2^n intersection subset scans.
pub const INTERSECTION_GUARD: usize = 16;

/// `MATORACLE_GUARD_N`, when set, replaces both enumeration guards.
pub fn guard(default: usize) -> usize {
    std::env::var("MATORACLE_GUARD_N")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
        .min(MAX_GUARD)
}

// Subset scans use 64-bit masks.
const MAX_GUARD: usize = 40;

pub(crate) fn check_guard(n: usize, default: usize) -> Result<()> {
    let limit = guard(default);
    if n > limit {
        Err(Error::GuardExceeded { n, limit })
    } else {
        Ok(())
    }
}
