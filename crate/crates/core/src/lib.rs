//! Exact local invariants of three-dimensional terminal singularity germs
//! along smooth curves, and the surrounding bookkeeping for Mori conic
//! bundles with one non-Gorenstein point.
//!
//! Everything here is exact: residues, vanishing orders and the invariants
//! `w_P`, `(F.C)_P`, `i_P` are integers or reduced fractions, never floats.
//! The crate is organised as
//!
//! - [`weights`]: residue/order calculus for semi-invariant monomials on the
//!   canonical cover, plus bounded enumeration of weight classes;
//! - [`germ`]: the normalized coordinate datum of a germ, its validation
//!   axioms and structural predicates;
//! - [`invariants`]: the invariants `w_P`, `(F.C)_P`, `i_P` (exact or lower
//!   bound) and the global degree/budget constraints along a fiber;
//! - [`classify`]: bounded exhaustive search re-deriving the local case
//!   analysis, with machine-checkable exclusion certificates;
//! - [`duval`]: Du Val types, cyclic quotient resolutions via
//!   Hirzebruch-Jung continued fractions, the involution-quotient table and
//!   topological indices;
//! - [`verify`]: exact cyclotomic arithmetic and symbolic checks of the
//!   built-in equivariant conic-bundle families.

pub mod classify;
pub mod duval;
pub mod frac;
pub mod germ;
pub mod invariants;
pub mod verify;
pub mod weights;

pub use frac::Frac;
pub use germ::{Equation, NormalizedGerm, Series};
pub use weights::{Monomial, Residue};
