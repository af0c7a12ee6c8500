use std::sync::Arc;

use serde::Serialize;

use super::form::{Form, TWord};
use super::group::DirectionSet;
use crate::algebra::{fmt_terms, AlgebraMorphism, NCPoly, Presentation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How the derivation `e_s` along one direction is determined.
#[derive(Clone, Debug)]
pub enum DirKind {
    /// `e_s(f) = λ_s φ_s(f) − f λ_s`; automorphism calculi use `λ_s = 1/t_s`.
    Inner(NCPoly),
    /// A twisted derivation given by its values on the generators.
    Outer(Vec<NCPoly>),
}

#[derive(Clone, Debug)]
pub struct Direction {
    pub label: String,
    pub phi: AlgebraMorphism,
    pub phi_inv: AlgebraMorphism,
    pub kind: DirKind,
    /// `t_s` for scalar inner directions, a nominal weight otherwise
    pub weight: Scalar,
    /// `e_s` on every letter, inverse letters included
    letter_e: Vec<NCPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// every `λ_s` is the scalar `1/t_s`
    Automorphism,
    /// at least one `λ_s` is a non-scalar algebra element
    Twisted,
    /// some direction is an outer derivation; the calculus is not inner
    Mixed,
}

/// Input for one direction of [`CalculusSpec::new`].
pub struct DirectionDef {
    pub label: String,
    pub phi: AlgebraMorphism,
    pub kind: DirKind,
    pub weight: Option<Scalar>,
}

impl DirectionDef {
    /// Automorphism-type direction with weight `t`.
    pub fn weighted(label: &str, phi: AlgebraMorphism, t: Scalar) -> Result<Self> {
        let lambda = NCPoly::scalar(t.inv()?);
        Ok(DirectionDef {
            label: label.into(),
            phi,
            kind: DirKind::Inner(lambda),
            weight: Some(t),
        })
    }

    pub fn twisted(label: &str, phi: AlgebraMorphism, lambda: NCPoly) -> Self {
        DirectionDef {
            label: label.into(),
            phi,
            kind: DirKind::Inner(lambda),
            weight: None,
        }
    }

    pub fn outer(label: &str, phi: AlgebraMorphism, gen_values: Vec<NCPoly>) -> Self {
        DirectionDef {
            label: label.into(),
            phi,
            kind: DirKind::Outer(gen_values),
            weight: None,
        }
    }
}

/// First-order data of a calculus: the algebra, the automorphisms `φ_s` and
/// the twisted derivations `e_s`.
#[derive(Clone, Debug)]
pub struct CalculusSpec {
    pub algebra: Arc<Presentation>,
    pub dirs: Vec<Direction>,
    pub set: DirectionSet,
    pub side_conditions: Vec<String>,
    pub warnings: Vec<String>,
}

impl CalculusSpec {
    pub fn new(
        algebra: Arc<Presentation>,
        defs: Vec<DirectionDef>,
        set: DirectionSet,
        side_conditions: Vec<String>,
    ) -> Result<Self> {
        if defs.len() != set.len() {
            return Err(Error::input("direction set and definitions differ in length"));
        }
        if defs.len() > u8::MAX as usize {
            return Err(Error::input("too many directions"));
        }
        let mut dirs = Vec::new();
        let mut warnings = Vec::new();
        for (def, label) in defs.into_iter().zip(&set.labels) {
            if def.label != *label {
                return Err(Error::input(format!("direction `{}` out of order", def.label)));
            }
            if !def.phi.is_verified() {
                return Err(Error::Unverified);
            }
            let phi_inv = def.phi.inverse_morphism().ok_or_else(|| {
                Error::input(format!("automorphism for `{label}` lacks an inverse"))
            })?;
            let weight = match (&def.kind, def.weight) {
                (_, Some(t)) => {
                    if t.is_zero() {
                        return Err(Error::input(format!("weight of `{label}` is zero")));
                    }
                    t
                }
                (DirKind::Inner(l), None) => match l.as_scalar() {
                    Some(c) if !c.is_zero() => c.inv()?,
                    _ => Scalar::one(),
                },
                (DirKind::Outer(_), None) => Scalar::one(),
            };
            dirs.push(Direction {
                label: label.clone(),
                phi: def.phi,
                phi_inv,
                kind: def.kind,
                weight,
                letter_e: Vec::new(),
            });
        }
        let mut spec = CalculusSpec {
            algebra,
            dirs,
            set,
            side_conditions,
            warnings: Vec::new(),
        };
        for s in 0..spec.dirs.len() {
            spec.dirs[s].letter_e = spec.compute_letter_e(s)?;
        }
        for s in 0..spec.dirs.len() {
            spec.check_derivation(s)?;
        }
        for s in 0..spec.dirs.len() {
            for t in 0..s {
                if spec.dirs[s].phi.same_images(&spec.dirs[t].phi) {
                    let msg = format!(
                        "automorphisms of `{}` and `{}` coincide on all generators",
                        spec.dirs[t].label, spec.dirs[s].label
                    );
                    if spec.mode() == Mode::Automorphism {
                        return Err(Error::input(msg));
                    }
                    warnings.push(msg);
                }
            }
        }
        spec.warnings = warnings;
        Ok(spec)
    }

    fn compute_letter_e(&self, s: usize) -> Result<Vec<NCPoly>> {
        let p = &self.algebra;
        let d = &self.dirs[s];
        let mut out = vec![NCPoly::zero(); p.num_letters()];
        match &d.kind {
            DirKind::Inner(lambda) => {
                for l in 0..p.num_letters() as u16 {
                    let f = p.letter_poly(l);
                    let phf = d.phi.apply(&f)?;
                    out[l as usize] = p.mul(lambda, &phf).sub(&p.mul(&f, lambda));
                }
            }
            DirKind::Outer(vals) => {
                if vals.len() != p.generators().len() {
                    return Err(Error::input(format!(
                        "derivation `{}` needs one value per generator",
                        d.label
                    )));
                }
                for (g, v) in vals.iter().enumerate() {
                    out[p.gen_letter(g) as usize] = p.normalize(v);
                    if let Some(li) = p.gen_inverse_letter(g) {
                        // e(x⁻¹) = −x⁻¹ e(x) φ(x⁻¹)
                        let xi = p.letter_poly(li);
                        let phxi = d.phi.apply(&xi)?;
                        out[li as usize] = p.mul_all([&xi, v, &phxi]).neg();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Outer derivations must respect every rewrite rule.
    fn check_derivation(&self, s: usize) -> Result<()> {
        if matches!(self.dirs[s].kind, DirKind::Inner(_)) {
            return Ok(());
        }
        let p = &self.algebra;
        for rule in p.rules() {
            let lhs = NCPoly::monomial(rule.lhs.clone(), Scalar::one());
            let r = self.e(s, &lhs).sub(&self.e(s, &rule.rhs));
            if !r.is_zero() {
                return Err(Error::RelationViolated {
                    relation: format!("e_{} on {}", self.dirs[s].label, rule.label),
                    residue: p.fmt(&r),
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.dirs.len()
    }

    pub fn label(&self, s: usize) -> &str {
        &self.dirs[s].label
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.set
            .index(label)
            .ok_or_else(|| Error::UnknownSymbol(format!("th_{label}")))
    }

    pub fn mode(&self) -> Mode {
        let mut twisted = false;
        for d in &self.dirs {
            match &d.kind {
                DirKind::Outer(_) => return Mode::Mixed,
                DirKind::Inner(l) if l.as_scalar().is_none() => twisted = true,
                _ => {}
            }
        }
        if twisted {
            Mode::Twisted
        } else {
            Mode::Automorphism
        }
    }

    pub fn is_inner(&self) -> bool {
        self.mode() != Mode::Mixed
    }

    pub fn lambda(&self, s: usize) -> Result<&NCPoly> {
        match &self.dirs[s].kind {
            DirKind::Inner(l) => Ok(l),
            DirKind::Outer(_) => Err(Error::NotInner(format!(
                "direction `{}` is an outer derivation",
                self.dirs[s].label
            ))),
        }
    }

    pub fn phi(&self, s: usize, f: &NCPoly) -> NCPoly {
        self.dirs[s].phi.apply(f).expect("automorphisms are verified")
    }

    pub fn phi_inv(&self, s: usize, f: &NCPoly) -> NCPoly {
        self.dirs[s].phi_inv.apply(f).expect("automorphisms are verified")
    }

    /// `φ_{s₁} ∘ ⋯ ∘ φ_{s_r}` applied to `f`.
    pub fn phi_word(&self, w: &TWord, f: &NCPoly) -> NCPoly {
        let mut g = f.clone();
        for s in w.dirs().rev() {
            g = self.phi(s, &g);
        }
        g
    }

    pub fn phi_inv_word(&self, w: &TWord, f: &NCPoly) -> NCPoly {
        let mut g = f.clone();
        for s in w.dirs() {
            g = self.phi_inv(s, &g);
        }
        g
    }

    /// The twisted derivation `e_s`, extended from letters by
    /// `e(uv) = e(u) φ(v) + u e(v)`.
    pub fn e(&self, s: usize, f: &NCPoly) -> NCPoly {
        let p = &self.algebra;
        let d = &self.dirs[s];
        if let DirKind::Inner(lambda) = &d.kind {
            if let Some(c) = lambda.as_scalar() {
                return p.scale(&self.phi(s, f).sub(f), &c);
            }
            return p.mul(lambda, &self.phi(s, f)).sub(&p.mul(f, lambda));
        }
        let mut acc = NCPoly::zero();
        for (w, c) in f.terms() {
            let ls = w.letters();
            // suffix images φ(l_{i+1} ⋯ l_n), built right to left
            let mut suffix = vec![NCPoly::one(); ls.len() + 1];
            for i in (0..ls.len()).rev() {
                let img = d.phi.apply(&p.letter_poly(ls[i])).expect("verified");
                suffix[i] = p.mul(&img, &suffix[i + 1]);
            }
            let mut prefix = NCPoly::one();
            for i in 0..ls.len() {
                let term = p.mul_all([&prefix, &d.letter_e[ls[i] as usize], &suffix[i + 1]]);
                acc = acc.add(&p.scale(&term, c));
                prefix = p.mul(&prefix, &p.letter_poly(ls[i]));
            }
        }
        acc
    }

    /// `df = Σ_s e_s(f) θ^s`.
    pub fn differential(&self, f: &NCPoly) -> Form {
        let mut out = Form::zero();
        for s in 0..self.n() {
            out.add_term(TWord::single(s), self.e(s, f));
        }
        out
    }

    /// `ϑ = Σ_s λ_s θ^s`.
    pub fn vartheta(&self) -> Result<Form> {
        let mut out = Form::zero();
        for s in 0..self.n() {
            out.add_term(TWord::single(s), self.lambda(s)?.clone());
        }
        Ok(out)
    }

    /// `θ^w f = φ_w(f) θ^w`.
    pub fn move_left(&self, f: &NCPoly, w: &TWord) -> Form {
        Form::term(w.clone(), self.phi_word(w, f))
    }

    /// Right-coefficient expansion `Σ θ^w g_w` of a left-coefficient form.
    pub fn move_right(&self, form: &Form) -> Vec<(TWord, NCPoly)> {
        form.terms()
            .map(|(w, f)| (w.clone(), self.phi_inv_word(w, f)))
            .collect()
    }

    /// `ω · g`; the θ-words are unchanged, so no 2-form reduction is needed.
    pub fn right_mul(&self, form: &Form, g: &NCPoly) -> Form {
        let p = &self.algebra;
        form.map_coeffs(|w, f| p.mul(f, &self.phi_word(w, g)))
    }

    pub fn commutator_with(&self, form: &Form, g: &NCPoly) -> Form {
        form.left_mul(&self.algebra, g).sub(&self.right_mul(form, g))
    }

    /// Condition `α_s φ_s(f) = f α_s` for every generator; returns the first
    /// failing `(direction, generator)`.
    pub fn is_central_one_form(&self, alpha: &Form) -> (bool, Option<(String, String)>) {
        let p = &self.algebra;
        for (w, a) in alpha.terms() {
            let s = w.dirs().next().unwrap_or(0);
            for (gi, g) in p.generators().iter().enumerate() {
                let f = p.letter_poly(p.gen_letter(gi));
                let lhs = p.mul(a, &self.phi(s, &f));
                let rhs = p.mul(&f, a);
                if lhs != rhs {
                    return (false, Some((self.label(s).to_string(), g.name.clone())));
                }
            }
        }
        (true, None)
    }

    /// Constants, judged by `dc = 0` and, for inner calculi, by
    /// `c λ_s = λ_s φ_s(c)`; the two judgements must agree.
    pub fn constants(&self, candidates: &[NCPoly]) -> Result<Vec<NCPoly>> {
        let p = &self.algebra;
        let mut out = Vec::new();
        for c in candidates {
            let by_d = self.differential(c).is_zero();
            if self.is_inner() {
                let mut by_lambda = true;
                for s in 0..self.n() {
                    let l = self.lambda(s)?;
                    if p.mul(c, l) != p.mul(l, &self.phi(s, c)) {
                        by_lambda = false;
                    }
                }
                if by_lambda != by_d {
                    return Err(Error::internal(format!(
                        "constant criteria disagree on {}",
                        p.fmt(c)
                    )));
                }
            }
            if by_d {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    pub fn fmt_word(&self, w: &TWord) -> String {
        w.dirs()
            .map(|s| format!("th_{}", self.label(s)))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text, largest θ-word first; re-parses to an equal form.
    pub fn fmt_form(&self, form: &Form) -> String {
        let p = &self.algebra;
        let mut items = Vec::new();
        for (w, f) in form.terms().rev() {
            for (aw, c) in f.terms().rev() {
                let parts: Vec<String> = [p.word_string(aw), self.fmt_word(w)]
                    .into_iter()
                    .filter(|s| !s.is_empty() && s != "1")
                    .collect();
                let basis = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
                items.push((basis, c.clone()));
            }
        }
        fmt_terms(items)
    }

    pub fn fmt_poly(&self, f: &NCPoly) -> String {
        self.algebra.fmt(f)
    }
}
