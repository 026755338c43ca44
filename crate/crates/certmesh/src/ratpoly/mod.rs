//! Sparse multivariate polynomials over ℚ in the fixed variable order
//! (x, y, z), plus the exact kernel the rest of the crate is built on:
//! gcd, content/primitive splits, resultants, square-free decomposition and
//! (partial) factorization into pairwise-coprime square-free factors.
//!
//! Elimination always removes the highest variable first (z, then y), which
//! matches the projection direction of the curve and surface pipelines.

mod factor;
mod gcd;
mod parse;
mod poly;
mod resultant;
mod sqfree;

pub use factor::{FactorHook, FactorList, SuppliedFactors};
pub use gcd::{content_wrt, gcd, gcd_many, split_content};
pub(crate) use gcd::to_int_coeffs as to_int_coeffs_of;
pub use poly::{Mono, Polynomial, Q, Var, Z};
pub use resultant::{discriminant, principal_subresultants, resultant, subresultant_poly};
pub use sqfree::{coprime_refine, square_free_decomposition, square_free_part};
