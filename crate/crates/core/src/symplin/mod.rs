//! Symplectic linear algebra on `ℝ²ⁿ` with block ordering
//! `(x₁,…,xₙ, y₁,…,yₙ)`.

mod ellipsoid;
mod structures;
mod williamson;

pub use ellipsoid::{
    k_width_ellipsoid, k_width_from_linear, linear_symplectic_width, symplectic_spectrum,
    symplectic_spectrum_with, Ellipsoid, SymplecticSpectrum,
};
pub use structures::{
    antisymplectic_reflection, classify_map, extend_to_symplectic_basis, omega_pair, random_symplectic,
    random_symplectic_with, standard_j, standard_omega, symplectic_exp, symplectic_residuals, MapClass,
};
pub use williamson::{
    interleave_permutation, interleaved_j, inverse_sqrt_spd, williamson, williamson_with, SkewSolver,
    WilliamsonDecomposition, MAX_CONDITION,
};
