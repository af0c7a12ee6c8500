use super::Geometry;
use crate::algebra::NCPoly;
use crate::calculus::{Form, TWord};
use crate::error::Result;

/// `Σ f θ^{s₁} ⊗_L ⋯ ⊗_L θ^{s_n}` with coefficients on the left. By
/// semi-left-linearity a coefficient passes unchanged through `⊗_L`, so the
/// product of two such tensors concatenates words and multiplies
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorWord(pub Form);

impl TensorWord {
    pub fn word(w: TWord, f: NCPoly) -> Self {
        TensorWord(Form::term(w, f))
    }

    /// Reads a 1-form `Σ f_s θ^s` as a one-factor tensor.
    pub fn from_one_form(f: &Form) -> Self {
        TensorWord(f.clone())
    }
}

impl Geometry {
    /// `a ⊗_L b` in the stored convention.
    pub fn tensor_word_product(&self, a: &TensorWord, b: &TensorWord) -> TensorWord {
        let p = &self.calc.spec.algebra;
        let mut out = Form::zero();
        for (u, f) in a.0.terms() {
            for (v, g) in b.0.terms() {
                out = out.add(&Form::term(u.concat(v), p.mul(f, g)));
            }
        }
        TensorWord(out)
    }

    /// `P ⊗_L T` for tensors given over the algebra: with
    /// `θ^s ⊗ Y = θ^s ⊗_L φ_s(Y)` and `θ^s ⊗_L Z = θ^s ⊗ φ_s⁻¹(Z)` the
    /// left factor is peeled one 1-form at a time.
    pub fn tensor_l(&self, left: &Form, right: &Form) -> Result<Form> {
        let p = &self.calc.spec.algebra;
        let mut out = Form::zero();
        for (w, f) in left.terms() {
            let piece = match w.0.split_first() {
                None => right.clone(),
                Some((&s, rest)) => {
                    let s = s as usize;
                    let tail = self.phi_tensor(s, &Form::word(TWord::from_slice(rest)))?;
                    let inner = self.tensor_l(&tail, right)?;
                    self.calc
                        .mul_raw(&Form::theta(s), &self.phi_inv_tensor(s, &inner)?)
                }
            };
            out = out.add(&piece.left_mul(p, f));
        }
        Ok(out)
    }

    /// The same tensor written over the algebra.
    pub fn to_tensor_a(&self, t: &TensorWord) -> Result<Form> {
        let p = &self.calc.spec.algebra;
        let mut out = Form::zero();
        for (w, f) in t.0.terms() {
            let mut acc = Form::from_poly(NCPoly::one());
            for s in w.dirs().rev() {
                acc = self.tensor_l(&Form::theta(s), &acc)?;
            }
            out = out.add(&acc.left_mul(p, f));
        }
        Ok(out)
    }
}
