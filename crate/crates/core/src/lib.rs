pub mod error;
pub mod formula;

pub use error::{Error, Result};
pub use formula::{parse, DepthMetrics, Formula};
pub mod kripke;
pub mod oracle;
pub mod tableau;
pub mod solver;
pub mod modelcheck;
