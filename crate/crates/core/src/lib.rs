//! Matroid basis and intersection algorithms for a free but unreliable
//! dirty oracle paired with a billed clean oracle.

pub mod algorithms;
pub mod certificate;
pub mod error;
pub mod error_metrics;
pub mod ground;
pub mod harness;
pub mod intersection;
pub mod matroid;
pub mod oracle;
pub mod perturb;
pub mod set;

pub use certificate::{verify_certificate, CertificateMode, CertificateReport};
pub use error::{Error, Result};
pub use ground::{GroundSet, Weight};
pub use matroid::{MatroidKind, MatroidSpec};
pub use oracle::{OraclePair, QueryKind, QueryLedger, QueryRecord, Role, Session};
pub use perturb::{make_dirty, Perturbation, PerturbationSpec};
pub use set::ElementSet;
