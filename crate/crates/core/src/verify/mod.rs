//! Symbolic verification of equivariant conic-bundle families: exact
//! cyclotomic arithmetic, polynomial substitution under finite linear
//! actions, ideal-stability certificates, central-fiber decompositions and
//! fixed-locus checks.
//!
//! Smoothness of the total spaces is not certified here; only membership and
//! eigenspace data at supplied candidates is checked. Fiber analysis is
//! restricted to specializations that split into products of linear forms,
//! which all built-in families satisfy at `u = v = 0`.

pub mod cyclotomic;
pub mod families;
pub mod parse;
pub mod poly;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic, CyclotomicError};
pub use families::{
    action_order_holds, apply_action, builtin_examples, builtin_names, central_fiber_components,
    check_ideal_equivariance, fixed_points_check, Candidate, CandidateOutcome, EigenComponent,
    EquivarianceOutcome, EquivariantFamily, FiberComponent, FiberDecomposition, FixedLocusReport,
    GroupAction, LinearForm, VerifyError,
};
pub use parse::{parse_family, ParseFamilyError};
pub use poly::{MPoly, NVARS, VAR_NAMES};
