//! Closed-form stability predicates, contraction spectra and rate bounds, each
//! paired with a companion-matrix oracle.

mod rho;
mod sppam;
mod stability;

pub use rho::{sgdm_rho, sgdm_rho_crossings};
pub use sppam::{
    acceleration_condition, discount_condition, discount_threshold, sppam_contraction,
    sppam_invariant_rhs, tstep_bound, AccelerationCondition, DiscountCondition, SppamContraction,
    TStepBound,
};
pub use stability::{
    gd_stable, gdm_companion, gdm_stable, ppa_stable, ppam_companion, ppam_stable, sgdm_companion,
    Mat2, StabilityVerdict, BOUNDARY_TOL,
};
