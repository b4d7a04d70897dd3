//! Unstable modules over the mod 2 Steenrod algebra, the Lambda algebra and
//! its truncated versions `Lambda_k(M)`, and Ext computations over the
//! algebras `Q_k` generated by the lower squares `Sq_0, ..., Sq_{k-1}`.

pub mod error;
pub mod f2linalg;
pub mod steenrod;
pub mod unstable;
pub mod lambda;
pub mod ext;
pub mod cli;

pub use error::{Error, Result};
