//! Computational machinery for quadratic maps between groups.
//!
//! A function `f: G -> H` between groups is *quadratic relative a subgroup B*
//! when its deviation `d_f(a,b) = f(ab)·f(b)⁻¹·f(a)⁻¹` is bilinear, central in
//! the subgroup generated by the image of `f`, and vanishes on `B×G` and `G×B`.
//! This crate makes that calculus executable on finite groups given by
//! multiplication tables:
//!
//! * [`abelian`] — finitely generated abelian groups in invariant-factor form,
//!   Smith/Hermite normal forms, tensor and exterior squares;
//! * [`groups`] — validated finite groups, subgroups, homomorphisms, lower
//!   central series, quotients, abelianization, and a builtin example zoo;
//! * [`quadmaps`] — deviations, quadraticity verdicts with counterexample
//!   witnesses, radicals, bilinear parts, the identity suite, pair composition
//!   and the 2-step-nilpotency characterizations;
//! * [`universal_q`] — the universal quadratic group `Q(G,B)` built from its
//!   explicit central-extension cocycle, its universal property and functor
//!   laws, symbolic evaluation over free groups, and quadratic maps on
//!   presented groups;
//! * [`passi`] — integral group rings, augmentation-ideal filtrations, relative
//!   polynomial maps and the degree-n polynomial groups `P_n(G,B)`;
//! * [`verify`] — the cross-construction theorem battery (the isomorphism
//!   `Q(G,B)^{ab} ≅ P_2(G,B)` and the three exact sequences tying `P_2` to
//!   tensor and exterior squares) with machine-checkable reports.
//!
//! Exhaustive scans run in parallel when the default `parallel` feature is
//! enabled and sequentially otherwise; either way the reported witness is the
//! lexicographically least counterexample.

pub mod error;
pub mod scan;
pub mod matrix;
pub mod abelian;
pub mod groups;
pub mod quadmaps;
pub mod universal_q;
pub mod passi;
pub mod verify;
pub mod report;
pub mod cli;

pub use error::Error;

/// Default ceiling on exhaustive pair/triple scans. Operations refuse (rather
/// than sample) when the scan they would need exceeds the budget.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Default ceiling on materialized group orders for constructions that build
/// a full multiplication table (e.g. `Q(G,B)`).
pub const DEFAULT_ORDER_CAP: u64 = 10_000;

/// Default ceiling on element enumerations of abelian groups.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Default ceiling on polynomial degrees accepted by the CLI. Ideal-power
/// lattices grow with the degree, so higher requests must be opted into.
pub const DEFAULT_DEGREE_CAP: usize = 6;

/// Fixed seed for randomized spot checks so failures reproduce.
pub const DEFAULT_RNG_SEED: u64 = 0x9e3779b97f4a7c15;
