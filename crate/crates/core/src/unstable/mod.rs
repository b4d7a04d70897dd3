//! Unstable modules over the algebras `Q_k` of top squares and over the
//! whole Steenrod algebra, with the functors relating them.

mod free;
mod functors;
mod module;
mod random;
mod validate;

pub use free::{free_basis_words, free_module, sphere, word_label, FreeDescriptor, FreeModule};
pub use functors::{
    desuspend, direct_sum, forget, forget_to, frobenius, image, indecomposables, kernel, lambda_map, loop_functor,
    quotient, submodule, submodule_generated, suspend, tensor, truncate, Submodule,
};
pub use module::{FiniteUModule, Level, ModuleMap};
pub use random::random_module;
pub use validate::validate;
