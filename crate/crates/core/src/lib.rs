//! Infimum/integral interchange on finite measure spaces.

pub mod decomposable;
pub mod error;
pub mod ext_real;
pub mod functional;
pub mod gallery;
pub mod integrals;
pub mod interchange;
pub mod json;
pub mod lattice;
pub mod measure;
pub mod oracle;
pub mod random;
pub mod scenario;

pub use error::{Error, Result};
pub use ext_real::{Backing, ExtReal, Scalar};
pub use integrals::{choquet, inner_integral, lebesgue_extended, lebesgue_nonneg, outer_integral, Capacity};
pub use lattice::{pointwise_inf, pointwise_sup, FnClass, IntegrabilityTag};
pub use measure::{AtomSet, MeasureSpace};
pub use decomposable::{
    is_decomposable, verify_rw_argmin, verify_rw_interchange, verify_shapiro, Integrand, SelectionSet,
    ShapiroScenario,
};
pub use functional::{Builtin, Domain, Functional, MonotoneMap, Properties};
pub use interchange::{
    check_seq_inf_continuity, giner_gap_check, is_inf_directed, is_phi_inf_directed, verify_interchange,
    verify_interchange_sequence, DirectedVerdict, Family, HoldsVerdict, InterchangeOptions, InterchangeReport,
    SequenceSpec,
};
pub use scenario::Scenario;

/// Crate version echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
