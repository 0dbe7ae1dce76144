//! Exact computations with cluster algebras of geometric type.
//!
//! * [`laurent`]: sparse Laurent polynomials over the integers.
//! * [`seed`]: quivers, seeds, mutation, JSON and DOT forms.
//! * [`builders`]: rank-2, unitriangular, `Γ_ℓ` and Dynkin seeds.
//! * [`explore`]: exchange graphs, finite-type classification, F-polynomials.
//! * [`minors`]: unitriangular minors and the exchange identity oracle.
//! * [`flagvar`]: flag counting over finite fields and Euler characteristics.
//! * [`cli`] and [`serve`]: the command line and the HTTP session service.

pub mod builders;
pub mod cli;
pub mod explore;
pub mod flagvar;
pub mod laurent;
pub mod minors;
pub mod seed;
pub mod serve;

pub use builders::{build_gamma_ell, build_rank2, build_unitriangular_seed, DynkinType, FamilySpec, GammaSpec};
pub use explore::{classify_finite_type, enumerate_exchange_graph, f_polynomials, Limits, TypeVerdict};
pub use laurent::{LaurentPoly, VarId};
pub use seed::{Quiver, Seed, SeedError};
