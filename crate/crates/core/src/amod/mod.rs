//! Modules over the endomorphism algebra and the functor `Hom(T, -)`.

mod category;
mod module;
mod string;
mod suite;

pub use category::{ModuleCategory, ProjectivePresentation};
pub use module::{AModule, ModHom};
pub use string::{find_isomorphism, string_normal_form, Letter, StringAlgebra, StringBasis, Word};
pub use suite::verify_index_suite;
