//! Constructible functions on finite simplicial complexes.
//!
//! The crate computes the link operator Λ, its halves Λ̃ = ½Λ and
//! Ω̃ = I − Λ̃, euler integrals, and the local obstructions (euler conditions
//! and mod-2 characteristic numbers) for a space of dimension at most four to
//! be homeomorphic to a real algebraic set. It also builds, for any chosen
//! characteristic number, a 3-dimensional complex on which exactly that
//! number is nonzero.

pub mod confun;
pub mod corpus;
pub mod dyadic;
pub mod invariants;
pub mod io;
mod par;
pub mod polyops;
pub mod selftest;
pub mod simplicial;
pub mod witness;

pub use confun::ConstructibleFunction;
pub use dyadic::Dyadic;
pub use polyops::Polynomial;
pub use simplicial::{build_complex, Complex, Simplex, Vertex};
