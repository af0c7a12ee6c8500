//! Connections, torsion, curvature, the semi-left-linear tensor product and
//! metrics for calculi built on automorphisms.
//!
//! Tensor products of 1-forms over the algebra are stored as unreduced
//! [`Form`]s: the word `s₁⋯s_n` stands for `θ^{s₁} ⊗ ⋯ ⊗ θ^{s_n}`, with
//! coefficients on the left and `θ^s f = φ_s(f) θ^s` inside every factor.

mod connection;
mod metric;
mod tensor;
mod torsion;

use std::sync::Arc;

use crate::algebra::{AlgebraMorphism, NCPoly};
use crate::calculus::{Calculus, Form, TWord};
use crate::error::{Error, Result};

pub use connection::{Connection, FormTensor, VIndex};
pub use metric::{
    compatibility_grid_search, levi_civita_check, levi_civita_search, metric_compatibility,
    metric_invariance, GridSearch, Metric, ScalingClass,
};
pub use tensor::TensorWord;
pub use torsion::{torsion_free_conditions, LinearEq, TorsionConditions};

/// A calculus with the images `φ_s(θ^a)` of the basis 1-forms, which the
/// tensor constructions of this module need.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub calc: Arc<Calculus>,
    images: Option<Vec<Vec<Form>>>,
    inv_images: Option<Vec<Vec<Form>>>,
}

impl Geometry {
    /// `images[s][a] = φ_s(θ^a)`. Each image must be a unit multiple of a
    /// single basis 1-form so that `φ_s⁻¹` on 1-forms can be read off.
    pub fn new(calc: Arc<Calculus>, images: Option<Vec<Vec<Form>>>) -> Result<Self> {
        let n = calc.spec.n();
        let inv_images = match &images {
            None => None,
            Some(imgs) => {
                if imgs.len() != n || imgs.iter().any(|v| v.len() != n) {
                    return Err(Error::input("θ-images need an n × n table"));
                }
                Some(
                    (0..n)
                        .map(|s| invert_images(&calc, s, &imgs[s]))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };
        Ok(Geometry {
            calc,
            images,
            inv_images,
        })
    }

    pub fn n(&self) -> usize {
        self.calc.spec.n()
    }

    pub fn images(&self) -> Result<&Vec<Vec<Form>>> {
        self.images
            .as_ref()
            .ok_or_else(|| Error::Unsupported("no images of the basis 1-forms are known".into()))
    }

    fn inv_images(&self) -> Result<&Vec<Vec<Form>>> {
        self.inv_images
            .as_ref()
            .ok_or_else(|| Error::Unsupported("no images of the basis 1-forms are known".into()))
    }

    /// Applies `phi`, extended by `imgs` on basis 1-forms, to a tensor of
    /// 1-forms.
    fn map_tensor(&self, phi: &AlgebraMorphism, imgs: &[Form], t: &Form) -> Result<Form> {
        let mut out = Form::zero();
        for (w, f) in t.terms() {
            let mut acc = Form::from_poly(phi.apply(f)?);
            for s in w.dirs() {
                acc = self.calc.mul_raw(&acc, &imgs[s]);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// `φ_s` on a tensor of 1-forms.
    pub fn phi_tensor(&self, s: usize, t: &Form) -> Result<Form> {
        let spec = &self.calc.spec;
        self.map_tensor(&spec.dirs[s].phi, &self.images()?[s], t)
    }

    pub fn phi_inv_tensor(&self, s: usize, t: &Form) -> Result<Form> {
        let spec = &self.calc.spec;
        self.map_tensor(&spec.dirs[s].phi_inv, &self.inv_images()?[s], t)
    }
}

fn invert_images(calc: &Calculus, s: usize, imgs: &[Form]) -> Result<Vec<Form>> {
    let spec = &calc.spec;
    let p = &spec.algebra;
    let n = spec.n();
    let mut out: Vec<Option<Form>> = vec![None; n];
    for (a, img) in imgs.iter().enumerate() {
        let terms: Vec<(&TWord, &NCPoly)> = img.terms().collect();
        let bad = || {
            Error::Unsupported(format!(
                "image of th_{} under the automorphism of `{}` is not a unit multiple of a basis 1-form",
                spec.label(a),
                spec.label(s)
            ))
        };
        let [(w, u)] = terms.as_slice() else {
            return Err(bad());
        };
        if w.len() != 1 {
            return Err(bad());
        }
        let target = w.dirs().next().expect("length one");
        // φ_s(θ^a) = u θ^b  ⇒  φ_s⁻¹(θ^b) = φ_s⁻¹(u)⁻¹ θ^a
        let v = spec.phi_inv(s, u);
        let vi = match v.as_scalar() {
            Some(c) => p.scalar(c.inv()?),
            None => p.unit_inverse(&v).ok_or_else(bad)?,
        };
        if out[target].is_some() {
            return Err(bad());
        }
        out[target] = Some(Form::term(TWord::single(a), vi));
    }
    out.into_iter()
        .map(|f| f.ok_or_else(|| Error::input("θ-images do not permute the basis")))
        .collect()
}

#[cfg(test)]
mod tests;
