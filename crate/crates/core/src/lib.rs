//! Safety verification of regular transition systems through regular
//! over-approximations of the reachable configurations.

pub mod automata;
pub mod bforms;
pub mod error;
pub mod ind1;
pub mod interp;
pub mod model;
pub mod oracle;
pub mod verdict;

pub use error::{Budget, Error, Result};
