//! Certified real-root isolation for univariate polynomials and for fibers
//! of plane/space curves over algebraic base points.
//!
//! The three layers:
//! * [`isolate`] — exact Descartes/bisection isolation of the real roots of a
//!   univariate polynomial into rational intervals (or exact rational points);
//! * [`Alg1`] — a real algebraic number as (square-free defining polynomial,
//!   isolating interval), with a *complete* zero test and exact sign
//!   evaluation for arbitrary univariate polynomials at the number;
//! * [`FiberRoots`] — the real roots of `g(α, ·)` for an algebraic base `α`
//!   (or of `f(α, β, ·)` over an algebraic pair), isolated through a
//!   square-free surrogate and certified interval sleeves.
//!
//! Every interval this module returns comes with a certificate discipline:
//! interval endpoints are provably not roots, refinement preserves that, and
//! zero tests are decided symbolically (never by "small enough numerically").

mod alg;
mod fiber;
mod uni;

pub use alg::{separate, Alg1};
pub use fiber::{AlgPoint2, BasePoint, FiberRoots};
pub use uni::{isolate, isolate_in, sign_at_rational};
