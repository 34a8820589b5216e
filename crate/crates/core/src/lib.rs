//! Exact computational machinery for Kirillov's orbit method on finite
//! p-groups obtained from nilpotent Lie rings through the Lazard correspondence.

pub mod chsolver;
pub mod error;
pub mod freelie;
pub mod harmonic;
pub mod liering;
pub mod oracle;
pub mod orbitmethod;
pub mod padic;
pub mod report;
pub mod scalar;
pub mod spec;

pub use error::{Error, Result};
