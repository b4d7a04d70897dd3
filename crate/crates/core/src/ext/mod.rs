//! `Ext` groups in `U_k` and `U`, computed from the Lambda complexes and,
//! independently, from minimal free resolutions.

mod checks;
mod complex;
mod resolution;
mod table;

pub use checks::{ehp_euler_check, ext_via_lambda, hdim_check, oracle_check, stabilization_check, CheckReport};
pub use complex::CochainComplex;
pub use resolution::{ext_via_resolution, minimal_resolution, Resolution, Stage};
pub use table::{cohomology, ExtTable, Provenance};
