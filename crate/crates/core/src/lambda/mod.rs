//! The Lambda algebra, its quotient complexes `Lambda_k(m)` and the
//! complexes `Lambda_k(M)` computing `Ext` in `U_k`.

mod algebra;
mod complex;
mod space;

pub use algebra::{
    admissible_monomials, d_lambda, d_lambda_element, d_lambda_gen, lambda_normalize, LambdaElement, LambdaMonomial,
};
pub use complex::{chain_basis, lambda_complex_u, lambda_k_complex, LambdaChainBasisElement};
pub use space::{ehp_check, ehp_maps, in_gamma, LambdaKSpace};
