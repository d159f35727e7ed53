//! Quasi-triple Hurwitz numbers: exact evaluation by characters, generating
//! series and Bernoulli closed forms, plus polynomiality checks and a
//! brute-force permutation oracle.

pub mod characters;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod frobenius;
pub mod hurwitz;
pub mod oracle;
pub mod partitions;
pub mod polynomiality;
pub mod series;

pub use error::{Error, Result};
pub use exactnum::Rational;
pub use hurwitz::{HurwitzQuery, HurwitzValue, Route};
pub use partitions::Partition;
