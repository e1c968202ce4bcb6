//! Holomorphic volume form `Ω`, the `SL(n, ℂ)` embedding, phases and the
//! complex-linear squeezing witness.

mod complex_matrix;
mod omega;
mod structure;
mod witness;

pub use complex_matrix::{
    commutator_residual, embed_complex, extract_complex, random_gl_nc, random_sl_nc, ComplexMatrix,
};
pub use omega::{
    complex_det, holomorphic_volume, omega_residuals, phase_verdict, preserves_omega_form, two_phase_implies_full,
    OmegaResiduals, PhaseVerdict,
};
pub use structure::{recover_complex_structure, KERNEL_THRESHOLD};
pub use witness::{real_lagrangian, slag_squeezing_witness, SlagWitness};
