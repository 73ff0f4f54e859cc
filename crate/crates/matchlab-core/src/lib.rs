//! Matchings and local matchings between finite subsets of finitely
//! generated abelian groups, and between subspaces of finite-field
//! extensions.
//!
//! A matching from `A` to `B` (finite subsets of an abelian group, `#A = #B`,
//! `0 ∉ B`) is a bijection `f: A → B` with `a + f(a) ∉ A` for every `a`. The
//! local variant asks, for every qualifying proper subgroup `H` (one with
//! `H ∩ B ≠ ∅` and `a + H ⊆ A` for some `a`), for a bijection from some
//! `A′ ⊆ A` onto `H ∩ B` with the same avoidance property. The linear
//! analogue replaces subsets by `K`-subspaces of an extension field `L/K`,
//! sums by products, and subgroups by intermediate subfields.
//!
//! The crate provides:
//!
//! * [`group`] — canonical f.g. abelian groups, subsets, subgroups, sumsets,
//!   stabilizers, matching/local-matching decisions, Hall violators and
//!   sumset-growth certificates;
//! * [`field`] — arithmetic of `F_p ⊂ F_{p^n}`, canonical echelon-form
//!   subspaces, subfield lattices, product spans, the dimension criterion for
//!   matchable bases, matched-basis construction, primitivity, strong and
//!   local matchings;
//! * [`cert`] — a JSON certificate format plus a standalone verifier that
//!   re-derives every claim from the embedded instance.
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely across parallel workers.

pub mod cert;
pub mod error;
pub mod field;
pub mod group;

pub use error::Error;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
