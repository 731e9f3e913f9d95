//! Finite-window tools for sumsets `B + C` inside sets of integers.
//!
//! Everything works on a bounded window `[1, N]`. Sets are bitsets
//! ([`WindowSet`]), densities are exact rationals, and every construction
//! ends in a certificate that is checked by brute force.

pub mod construct;
pub mod density;
pub mod error;
pub mod exact;
pub mod generate;
pub mod io;
pub mod mixing;
pub mod oracle;
pub mod ramsey;
pub mod transform;
pub mod windowset;

pub use construct::{BcCertificate, CertificateStatus};
pub use error::{Error, Result};
pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use windowset::WindowSet;
