//! JSON schema for forms:
//! `{"dim": n, "degree": k, "terms": [{"idx": [i₁,…,i_k], "re": q, "im": q?}]}`
//! with 1-based indices. Exact coefficients are `"p/q"` strings; float
//! coefficients are plain numbers.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::complex::ComplexKForm;
use super::kform::KForm;
use super::multi_index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermDocument {
    pub idx: Vec<usize>,
    pub re: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Value>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FormDocument {
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<TermDocument>,
}

impl FormDocument {
    pub fn from_form<S: Scalar>(form: &KForm<S>) -> Self {
        let terms = form
            .terms()
            .map(|(idx, c)| TermDocument { idx: idx.one_based(), re: c.to_json(), im: None })
            .collect();
        FormDocument { dim: form.dim(), degree: form.degree(), terms }
    }

    pub fn from_complex<S: Scalar>(form: &ComplexKForm<S>) -> Self {
        let terms = form
            .support()
            .into_iter()
            .map(|idx| {
                let (re, im) = form.coeff(&idx);
                TermDocument {
                    idx: idx.one_based(),
                    re: re.to_json(),
                    im: if im.is_zero() { None } else { Some(im.to_json()) },
                }
            })
            .collect();
        FormDocument { dim: form.dim(), degree: form.degree(), terms }
    }

    fn parts<S: Scalar>(&self) -> Result<(KForm<S>, KForm<S>)> {
        if self.degree > self.dim {
            return Err(Error::InvalidDegree { degree: self.degree, dim: self.dim });
        }
        let mut re = KForm::zero(self.dim, self.degree);
        let mut im = KForm::zero(self.dim, self.degree);
        for t in &self.terms {
            if t.idx.len() != self.degree {
                return Err(Error::InvalidDegree { degree: t.idx.len(), dim: self.dim });
            }
            let idx = MultiIndex::from_one_based(&t.idx, self.dim)?;
            re.add_term(idx.as_slice(), S::from_json(&t.re)?)?;
            if let Some(v) = &t.im {
                im.add_term(idx.as_slice(), S::from_json(v)?)?;
            }
        }
        Ok((re, im))
    }

    /// Real form; rejects documents carrying a nonzero imaginary part.
    pub fn to_form<S: Scalar>(&self) -> Result<KForm<S>> {
        let (re, im) = self.parts()?;
        if !im.is_zero() {
            return Err(Error::Parse("real form expected but terms carry \"im\"".into()));
        }
        Ok(re)
    }

    pub fn to_complex<S: Scalar>(&self) -> Result<ComplexKForm<S>> {
        let (re, im) = self.parts()?;
        ComplexKForm::new(re, im)
    }
}

impl<S: Scalar> Serialize for KForm<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        FormDocument::from_form(self).serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for KForm<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FormDocument::deserialize(deserializer)?
            .to_form()
            .map_err(D::Error::custom)
    }
}

impl<S: Scalar> Serialize for ComplexKForm<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        FormDocument::from_complex(self).serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for ComplexKForm<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FormDocument::deserialize(deserializer)?
            .to_complex()
            .map_err(D::Error::custom)
    }
}
