use std::collections::BTreeMap;

use super::Geometry;
use crate::algebra::NCPoly;
use crate::calculus::{Form, TWord};
use crate::error::{Error, Result};

/// `(s', s, s'')` addressing `V^{s'}_{s,s''}`.
pub type VIndex = (usize, usize, usize);

/// A linear connection `∇ = ϑ ⊗ · − Σ_s θ^s ⊗ 𝒱_s` given by
/// `𝒱_s(θ^{s'}) = Σ_{s''} φ_s⁻¹(V^{s'}_{s,s''}) θ^{s''}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Connection {
    pub v: BTreeMap<VIndex, NCPoly>,
}

impl Connection {
    pub fn zero() -> Self {
        Connection::default()
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(VIndex) -> NCPoly) -> Self {
        let mut v = BTreeMap::new();
        for a in 0..n {
            for s in 0..n {
                for b in 0..n {
                    let c = f((a, s, b));
                    if !c.is_zero() {
                        v.insert((a, s, b), c);
                    }
                }
            }
        }
        Connection { v }
    }

    pub fn get(&self, i: VIndex) -> NCPoly {
        self.v.get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: VIndex, c: NCPoly) {
        if c.is_zero() {
            self.v.remove(&i);
        } else {
            self.v.insert(i, c);
        }
    }
}

/// `Σ_b F_b ⊗ θ^b`: forms tensored with one trailing basis 1-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTensor {
    pub slots: Vec<Form>,
}

impl FormTensor {
    pub fn zero(n: usize) -> Self {
        FormTensor {
            slots: vec![Form::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(Form::is_zero)
    }

    pub fn add(&self, o: &FormTensor) -> FormTensor {
        FormTensor {
            slots: self.slots.iter().zip(&o.slots).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &FormTensor) -> FormTensor {
        FormTensor {
            slots: self.slots.iter().zip(&o.slots).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> FormTensor {
        FormTensor {
            slots: self.slots.iter().map(Form::neg).collect(),
        }
    }
}

impl Geometry {
    fn check_conn(&self, conn: &Connection) -> Result<()> {
        let n = self.n();
        if conn.v.keys().any(|&(a, s, b)| a >= n || s >= n || b >= n) {
            return Err(Error::input("connection index out of range"));
        }
        Ok(())
    }

    /// `𝒱_s(α)` for a 1-form `α`, using `𝒱_s(f E) = φ_s⁻¹(f) 𝒱_s(E)`.
    pub fn transport(&self, conn: &Connection, s: usize, alpha: &Form) -> Result<Form> {
        self.check_conn(conn)?;
        let spec = &self.calc.spec;
        let p = &spec.algebra;
        let mut out = Form::zero();
        for (w, f) in alpha.terms() {
            let [a] = w.0.as_slice() else {
                return Err(Error::input("transport acts on 1-forms"));
            };
            let fi = spec.phi_inv(s, f);
            for b in 0..self.n() {
                let c = spec.phi_inv(s, &conn.get((*a as usize, s, b)));
                out = out.add(&Form::term(TWord::single(b), p.mul(&fi, &c)));
            }
        }
        Ok(out)
    }

    /// `𝒱(α) = Σ_s θ^s ⊗ 𝒱_s(α)` as a tensor of 1-forms.
    pub fn transport_tensor(&self, conn: &Connection, alpha: &Form) -> Result<Form> {
        let mut out = Form::zero();
        for s in 0..self.n() {
            let t = self.transport(conn, s, alpha)?;
            out = out.add(&self.calc.mul_raw(&Form::theta(s), &t));
        }
        Ok(out)
    }

    /// `∇α = ϑ ⊗ α − 𝒱(α)`, with `∇(fθ^{s'})` expanded directly from the
    /// coefficients `V^{s'}_{s,s''}`.
    pub fn nabla(&self, conn: &Connection, alpha: &Form) -> Result<FormTensor> {
        self.check_conn(conn)?;
        let calc = &self.calc;
        let spec = &calc.spec;
        let p = &spec.algebra;
        let n = self.n();
        let vt = calc.vartheta()?;
        let mut out = FormTensor::zero(n);
        for (w, f) in alpha.terms() {
            let [a] = w.0.as_slice() else {
                return Err(Error::input("nabla acts on 1-forms"));
            };
            let a = *a as usize;
            out.slots[a] = out.slots[a].add(&spec.right_mul(&vt, f));
            for s in 0..n {
                for b in 0..n {
                    let c = conn.get((a, s, b));
                    if !c.is_zero() {
                        let t = Form::term(TWord::single(s), p.mul(f, &c));
                        out.slots[b] = out.slots[b].sub(&t);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `∇` on `Σ F_b ⊗ θ^b`:
    /// `∇(ω ⊗ θ^b) = dω ⊗ θ^b + (−1)^r ω ∇θ^b`.
    pub fn nabla_ext(&self, conn: &Connection, t: &FormTensor) -> Result<FormTensor> {
        let calc = &self.calc;
        let n = self.n();
        let basic: Vec<FormTensor> = (0..n)
            .map(|b| self.nabla(conn, &Form::theta(b)))
            .collect::<Result<_>>()?;
        let mut out = FormTensor::zero(n);
        for (b, f) in t.slots.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            out.slots[b] = out.slots[b].add(&calc.d(f)?);
            for r in 0..=f.max_degree() {
                let part = f.part(r);
                if part.is_zero() {
                    continue;
                }
                for (y, g) in basic[b].slots.iter().enumerate() {
                    let prod = calc.wedge(&part, g)?;
                    out.slots[y] = if r % 2 == 1 {
                        out.slots[y].sub(&prod)
                    } else {
                        out.slots[y].add(&prod)
                    };
                }
            }
        }
        Ok(FormTensor {
            slots: out.slots.iter().map(|f| calc.reduce(f)).collect(),
        })
    }

    /// Lifts a 1-form to `Σ F_b ⊗ θ^b` with `F_b` of degree 0.
    pub fn as_form_tensor(&self, alpha: &Form) -> Result<FormTensor> {
        let mut out = FormTensor::zero(self.n());
        for (w, f) in alpha.terms() {
            let [a] = w.0.as_slice() else {
                return Err(Error::input("expected a 1-form"));
            };
            out.slots[*a as usize] = out.slots[*a as usize].add(&Form::from_poly(f.clone()));
        }
        Ok(out)
    }

    /// `ℛ(α) = −∇²α`.
    pub fn curvature(&self, conn: &Connection, alpha: &Form) -> Result<FormTensor> {
        if !self.calc.has_two_forms() {
            return Err(Error::Unsupported(
                "curvature needs the 2-form structure of the calculus".into(),
            ));
        }
        let first = self.nabla(conn, alpha)?;
        Ok(self.nabla_ext(conn, &first)?.neg())
    }

    /// Projection `Σ F_b ⊗ θ^b ↦ Σ F_b θ^b`.
    pub fn project(&self, t: &FormTensor) -> Result<Form> {
        let mut out = Form::zero();
        for (b, f) in t.slots.iter().enumerate() {
            out = out.add(&self.calc.wedge(f, &Form::theta(b))?);
        }
        Ok(out)
    }

    /// Flattens `Σ F_b ⊗ θ^b` with 1-form `F_b` into a tensor of 1-forms.
    pub fn flatten(&self, t: &FormTensor) -> Form {
        let mut out = Form::zero();
        for (b, f) in t.slots.iter().enumerate() {
            out = out.add(&self.calc.mul_raw(f, &Form::theta(b)));
        }
        out
    }

    pub fn fmt_form_tensor(&self, t: &FormTensor) -> String {
        let parts: Vec<String> = t
            .slots
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(b, f)| format!("({}) (x) th_{}", self.calc.fmt(f), self.calc.spec.label(b)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
