//! Sampling-based checks of the properties the maps are built to have.
//!
//! Checks refute rather than prove: a pass means no sampled point violated
//! the property, and the report records the worst observed value.

mod checks;
mod collision;
mod phi_checks;
mod report;

pub use checks::{
    check_containment, check_expanding, check_injective, check_injective_with, check_symplectic,
    check_symplectic_with, check_volume_preserved, min_singular_value_2x2, LatticeQuotient, ANALYTIC_TOL,
    EXPANDING_TOL, FD_TOL,
};
pub use collision::CollisionIndex;
pub use phi_checks::{
    check_aperiodicity, check_disk_aperiodicity, check_lattice_avoidance, check_phi_properties,
    estimate_double_point_volume, nonzero_lattice_distance, PhiCheckConfig,
};
pub use report::{Verdict, VerificationReport, Witness};
