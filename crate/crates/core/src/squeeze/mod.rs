//! Cylinder squeezing searches over matrix groups, non-squeezing sweeps and
//! constructive rigidity witnesses.

mod group;
mod nelder_mead;
mod search;
mod witness;

pub use group::{complex_plane, coordinate_plane, lagrangian_plane, lagrangian_splitting, GroupSpec, MEMBERSHIP_TOL};
pub use nelder_mead::{nelder_mead, Minimum};
pub use search::{
    nonsqueezing_sweep, squeeze_search, RestartRecord, SqueezeResult, SweepReport, PARAM_SPREAD, SIMPLEX_STEP,
    SWEEP_FLOOR,
};
pub use witness::{
    rigidity_witness_symplectic, search_witness_pair, witness_from_pair, SymplecticWitness, WitnessPair,
    RATIO_MARGIN, WITNESS_ATTEMPTS,
};

use crate::error::{Error, Result};

/// `C_k = ((2k)!)^{1/(2k)} / √2`, computed as `((2k)! / 2^k)^{1/(2k)}`.
pub fn barron_constant(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
    let ratio = fact / 2f64.powi(k as i32);
    Ok(ratio.powf(1.0 / (2 * k) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barron_values() {
        assert_eq!(barron_constant(1).unwrap(), 1.0);
        let c2 = 24f64.powf(0.25) / 2f64.sqrt();
        assert!((barron_constant(2).unwrap() - c2).abs() < 1e-12);
        assert!((barron_constant(2).unwrap() - 1.565).abs() < 1e-3);
        for k in 2..=6 {
            assert!(barron_constant(k).unwrap() > 1.0);
        }
        assert!(barron_constant(0).is_err());
    }
}
