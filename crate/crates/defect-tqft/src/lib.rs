//! Three-dimensional defect TQFTs as computable objects.
//!
//! The crate covers defect data and the computads they generate, spherical
//! fusion category data with graph evaluation on the 2-sphere, combinatorial
//! stratified bordisms, the trivial and state-sum defect TQFTs, and the Gray
//! categories with duals extracted from them.

pub mod cli;
pub mod computad;
pub mod defect_data;
pub mod error;
pub mod fusion;
pub mod gray;
pub mod report;
pub mod strata;
pub mod tqft_engines;

pub use error::{Error, Result};
pub use report::ValidationReport;
