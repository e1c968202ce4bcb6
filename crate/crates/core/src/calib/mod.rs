//! Calibrations: the form catalog, comass estimation, calibrated planes
//! and cylinders.

mod catalog;
mod comass;
mod cylinder;
mod frames;

pub use catalog::{
    catalog, catalog_by_name, g2_phi, g2_psi, slag_re, spin7_phi, CatalogEntry, CatalogForm, G2_PHI_TERMS,
};
pub use comass::{ascend, comass_estimate, AscentTrace, ComassReport, GAIN_TOL};
pub use cylinder::{enclosing_radius, enclosing_radius_bound, require_orthonormal_basis, AffineMap, CalibratedCylinder};
pub use frames::{gram_schmidt_bounded, is_calibrated_subspace, wirtinger_check, Frame, WirtingerReport, FRAME_TOL};
