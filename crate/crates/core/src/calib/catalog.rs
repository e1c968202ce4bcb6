use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{ComplexKForm, FloatForm, KForm};
use crate::scalar::factorial;
use crate::slag::holomorphic_volume;
use crate::symplin::standard_omega;

/// Associative 3-form on `ℝ⁷` (1-based indices, orientation `e¹∧…∧e⁷`):
/// `φ = e¹²³ + e¹⁴⁵ + e¹⁶⁷ + e²⁴⁶ − e²⁵⁷ − e³⁴⁷ − e³⁵⁶`.
pub const G2_PHI_TERMS: [([usize; 3], i8); 7] = [
    ([1, 2, 3], 1),
    ([1, 4, 5], 1),
    ([1, 6, 7], 1),
    ([2, 4, 6], 1),
    ([2, 5, 7], -1),
    ([3, 4, 7], -1),
    ([3, 5, 6], -1),
];

/// Named constant-coefficient calibrations.
#[derive(Clone, Debug, PartialEq)]
pub enum CatalogEntry {
    /// `ω^k / k!` on `ℝ²ⁿ`.
    OmegaPowerNormalized(usize),
    /// `e¹ ∧ … ∧ e^k`.
    WedgeSimple(usize),
    G2Phi,
    G2Psi,
    Spin7Phi,
    /// `Re(e^{iθ} Ω)`.
    SlagRe(f64),
    /// `Ω = dz¹ ∧ … ∧ dzⁿ`, complex-valued.
    SlagComplex,
}

/// A catalog form, real or complex-valued.
#[derive(Clone, Debug, PartialEq)]
pub enum CatalogForm {
    Real(FloatForm),
    Complex(ComplexKForm<f64>),
}

impl CatalogForm {
    pub fn real(&self) -> Option<&FloatForm> {
        match self {
            CatalogForm::Real(f) => Some(f),
            CatalogForm::Complex(_) => None,
        }
    }
}

impl FromStr for CatalogEntry {
    type Err = Error;

    /// Parses `name` or `name(param)`, e.g. `omega_power_normalized(2)` or
    /// `slag_re(1.047)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
                (name.trim(), Some(inner.trim()))
            }
            None => (s, None),
        };
        let int = |p: Option<&str>| -> Result<usize> {
            p.ok_or_else(|| Error::Parse(format!("`{name}` needs an integer parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer parameter in `{s}`")))
        };
        let none = |p: Option<&str>| -> Result<()> {
            match p {
                None => Ok(()),
                Some(_) => Err(Error::Parse(format!("`{name}` takes no parameter"))),
            }
        };
        Ok(match name {
            "omega_power_normalized" => CatalogEntry::OmegaPowerNormalized(int(param)?),
            "wedge_simple" => CatalogEntry::WedgeSimple(int(param)?),
            "g2_phi" => none(param).map(|_| CatalogEntry::G2Phi)?,
            "g2_psi" => none(param).map(|_| CatalogEntry::G2Psi)?,
            "spin7_phi" => none(param).map(|_| CatalogEntry::Spin7Phi)?,
            "slag_re" => {
                let theta = match param {
                    None => 0.0,
                    Some(p) => p.parse().map_err(|_| Error::Parse(format!("bad angle in `{s}`")))?,
                };
                CatalogEntry::SlagRe(theta)
            }
            "slag_complex" => none(param).map(|_| CatalogEntry::SlagComplex)?,
            _ => return Err(Error::UnknownForm(s.to_string())),
        })
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::OmegaPowerNormalized(k) => write!(f, "omega_power_normalized({k})"),
            CatalogEntry::WedgeSimple(k) => write!(f, "wedge_simple({k})"),
            CatalogEntry::G2Phi => write!(f, "g2_phi"),
            CatalogEntry::G2Psi => write!(f, "g2_psi"),
            CatalogEntry::Spin7Phi => write!(f, "spin7_phi"),
            CatalogEntry::SlagRe(theta) => write!(f, "slag_re({theta})"),
            CatalogEntry::SlagComplex => write!(f, "slag_complex"),
        }
    }
}

fn require_dim(entry: &CatalogEntry, dim: usize, want: usize) -> Result<()> {
    if dim != want {
        return Err(Error::Precondition(format!("{entry} lives on ℝ^{want}, not ℝ^{dim}")));
    }
    Ok(())
}

fn require_even(dim: usize) -> Result<usize> {
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    Ok(dim / 2)
}

pub fn g2_phi() -> FloatForm {
    let terms = G2_PHI_TERMS
        .iter()
        .map(|(idx, s)| (idx.iter().map(|i| i - 1).collect(), f64::from(*s)));
    KForm::from_terms(7, 3, terms).expect("valid indices")
}

/// `ψ = ⋆φ`.
pub fn g2_psi() -> FloatForm {
    g2_phi().hodge_star()
}

/// Cayley form `e¹ ∧ φ' + ψ'` on `ℝ⁸`, where `φ'`, `ψ'` are `φ`, `ψ` moved
/// to coordinates `2, …, 8`.
pub fn spin7_phi() -> FloatForm {
    let shift = |form: &FloatForm| {
        let terms = form
            .terms()
            .map(|(idx, c)| (idx.as_slice().iter().map(|i| i + 1).collect(), *c));
        KForm::from_terms(8, form.degree(), terms).expect("valid indices")
    };
    let e1 = KForm::basis(8, &[0]).expect("valid index");
    let head = e1.wedge(&shift(&g2_phi())).expect("same dimension");
    head.try_add(&shift(&g2_psi())).expect("same shape")
}

/// `Re(e^{iθ} Ω) = cos θ · Re Ω − sin θ · Im Ω` on `ℝ²ⁿ`.
pub fn slag_re(n: usize, theta: f64) -> FloatForm {
    let omega = holomorphic_volume(n);
    omega
        .re()
        .scale(theta.cos())
        .try_sub(&omega.im().scale(theta.sin()))
        .expect("same shape")
}

/// Builds a catalog entry on `ℝ^dim`.
pub fn catalog(entry: &CatalogEntry, dim: usize) -> Result<CatalogForm> {
    Ok(match entry {
        CatalogEntry::OmegaPowerNormalized(k) => {
            let n = require_even(dim)?;
            if *k == 0 || *k > n {
                return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={n}")));
            }
            let wk = standard_omega::<f64>(n).power(*k)?;
            CatalogForm::Real(wk.scale(1.0 / factorial::<f64>(*k)))
        }
        CatalogEntry::WedgeSimple(k) => {
            if *k == 0 || *k > dim {
                return Err(Error::InvalidDegree { degree: *k, dim });
            }
            CatalogForm::Real(KForm::basis(dim, &(0..*k).collect::<Vec<_>>())?)
        }
        CatalogEntry::G2Phi => {
            require_dim(entry, dim, 7)?;
            CatalogForm::Real(g2_phi())
        }
        CatalogEntry::G2Psi => {
            require_dim(entry, dim, 7)?;
            CatalogForm::Real(g2_psi())
        }
        CatalogEntry::Spin7Phi => {
            require_dim(entry, dim, 8)?;
            CatalogForm::Real(spin7_phi())
        }
        CatalogEntry::SlagRe(theta) => CatalogForm::Real(slag_re(require_even(dim)?, *theta)),
        CatalogEntry::SlagComplex => CatalogForm::Complex(holomorphic_volume(require_even(dim)?)),
    })
}

/// Parses `name` and builds it on `ℝ^dim`.
pub fn catalog_by_name(name: &str, dim: usize) -> Result<CatalogForm> {
    catalog(&name.parse()?, dim)
}
