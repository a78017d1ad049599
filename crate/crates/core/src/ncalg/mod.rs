//! Quantum matrix coordinate algebra O(SL_q(N)) and its Hopf structure.

pub mod algebra;
pub mod haar;
pub mod hopf;
pub mod poly;
pub mod projective;
pub mod rewrite;
pub mod word;

pub use algebra::Algebra;
pub use haar::{haar_n2, haar_word_n2, modular_theta, modular_theta_inv, transpose_n2};
pub use hopf::{Tensor2, Tensor3};
pub use poly::{JsonTerm, NcPoly};
pub use projective::{PhiImage, Projection};
pub use rewrite::{RewriteSystem, Rule, Strategy};
pub use word::{GeneratorIndex, MonomialOrder, Word};
