//! Divisor class groups, canonical classes and Frobenius pushforward
//! decompositions of toric varieties, plus class-group and quasi-Gorenstein
//! data for diagonal actions of finite abelian group schemes on polynomial
//! rings. All arithmetic is exact.

pub mod error;
pub mod lattice;

pub use error::{Error, Result};
pub mod divisor;
pub mod fan;
pub mod feasibility;
pub mod frobenius;
pub mod graded;
pub mod cli;
pub mod report;
