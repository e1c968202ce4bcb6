use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{ComplexKForm, MultiIndex};

/// Singular values below this fraction of the largest count as zero.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

/// Complex structure `J′` determined by a decomposable complex `n`-form
/// `Υ` on `ℝ²ⁿ`: `V^{0,1} = ker(v ↦ i_v Υ)` is its `−i` eigenspace and
/// the conjugate space its `+i` eigenspace.
pub fn recover_complex_structure(upsilon: &ComplexKForm<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let dim = upsilon.dim();
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    if upsilon.degree() != n {
        return Err(Error::InvalidDegree { degree: upsilon.degree(), dim });
    }
    let top = upsilon.wedge(&upsilon.conj())?;
    let vol = MultiIndex::new((0..dim).collect(), dim)?;
    let mass = top.coeff_c(&vol).norm();
    if mass <= tol {
        return Err(Error::Precondition(format!("Υ ∧ Ῡ = {mass:e} vanishes")));
    }

    let c = upsilon.contraction_matrix()?;
    let rows = c.nrows().max(dim);
    let mut padded = DMatrix::from_element(rows, dim, Complex64::new(0.0, 0.0));
    padded.view_mut((0, 0), (c.nrows(), dim)).copy_from(&c);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.max();
    let kernel: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] < KERNEL_THRESHOLD * sigma_max).collect();
    if kernel.len() != n {
        return Err(Error::Precondition(format!(
            "kernel of v ↦ i_v Υ has dimension {}, expected {n}",
            kernel.len()
        )));
    }

    let mut basis = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (slot, &i) in kernel.iter().enumerate() {
        for r in 0..dim {
            let v = v_t[(i, r)].conj();
            basis[(r, slot)] = v;
            basis[(r, n + slot)] = v.conj();
        }
    }
    let eig = DMatrix::from_fn(dim, dim, |r, c| match (r == c, r < n) {
        (true, true) => -Complex64::i(),
        (true, false) => Complex64::i(),
        _ => Complex64::new(0.0, 0.0),
    });
    let inverse = basis.clone().try_inverse().ok_or(Error::Singular)?;
    let j = &basis * eig * inverse;
    let imag = j.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
    let real = j.map(|z| z.re);
    let scale = real.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    if imag > tol * scale {
        return Err(Error::Tripwire(format!("recovered J′ has imaginary part {imag:e}")));
    }
    Ok(real)
}
