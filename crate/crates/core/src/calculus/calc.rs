use std::sync::Arc;

use rand::Rng;

use super::form::{Form, TWord};
use super::spec::CalculusSpec;
use super::twoform::{Reducer, TwoFormStructure};
use crate::algebra::NCPoly;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::scalar::Scalar;

/// A calculus together with its (optional) higher-degree structure.
#[derive(Clone, Debug)]
pub struct Calculus {
    pub spec: Arc<CalculusSpec>,
    pub ts: Option<Arc<TwoFormStructure>>,
    reducer: Option<Arc<Reducer>>,
    dtheta: Option<Vec<Form>>,
}

fn sign(k: usize) -> bool {
    k % 2 == 1
}

impl Calculus {
    /// First-order calculus: products of 1-forms are unavailable.
    pub fn first_order(spec: Arc<CalculusSpec>) -> Self {
        Calculus {
            spec,
            ts: None,
            reducer: None,
            dtheta: None,
        }
    }

    pub fn new(spec: Arc<CalculusSpec>, ts: TwoFormStructure) -> Result<Self> {
        let reducer = Reducer::new(spec.n(), &ts.relations)?;
        // the ideal is spanned by the relations as a left module only if each
        // relation commutes past algebra elements through a single automorphism
        let p = &spec.algebra;
        for rel in &ts.relations {
            let mut first: Option<Vec<NCPoly>> = None;
            for (w, _) in rel.terms() {
                let imgs: Vec<NCPoly> = p
                    .generator_polys()
                    .iter()
                    .map(|g| spec.phi_word(w, g))
                    .collect();
                match &first {
                    None => first = Some(imgs),
                    Some(f) if *f != imgs => {
                        return Err(Error::Unsupported(format!(
                            "relation {} mixes pairs with different automorphisms",
                            spec.fmt_form(rel)
                        )))
                    }
                    _ => {}
                }
            }
        }
        let mut calc = Calculus {
            spec: spec.clone(),
            ts: Some(Arc::new(ts.clone())),
            reducer: Some(Arc::new(reducer)),
            dtheta: None,
        };
        for f in ts.delta.iter().flatten().chain(ts.zeta.iter()) {
            if f.degree().is_some_and(|d| d != 2) {
                return Err(Error::input("Δ(θ^s) and ζ must be 2-forms"));
            }
        }
        let dtheta = match (&ts.dtheta, &ts.delta) {
            (Some(d), _) => d.iter().map(|f| calc.reduce(f)).collect(),
            (None, Some(delta)) if spec.is_inner() => {
                let vt = spec.vartheta()?;
                (0..spec.n())
                    .map(|s| {
                        let th = Form::theta(s);
                        Ok(calc.graded_commutator(&vt, &th)?.sub(&calc.reduce(&delta[s])))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            _ => {
                return Err(Error::input(
                    "a calculus that is not inner needs explicit dθ^s",
                ))
            }
        };
        if dtheta.len() != spec.n() {
            return Err(Error::input("dθ table has the wrong length"));
        }
        calc.dtheta = Some(dtheta);
        Ok(calc)
    }

    pub fn has_two_forms(&self) -> bool {
        self.reducer.is_some()
    }

    fn reducer(&self) -> Result<&Reducer> {
        self.reducer
            .as_deref()
            .ok_or_else(|| Error::Unsupported("this calculus is first-order only".into()))
    }

    /// Normal form of a form: every word of degree ≥ 2 expressed in the
    /// surviving basis.
    pub fn reduce(&self, f: &Form) -> Form {
        let Some(r) = self.reducer.as_deref() else {
            return f.clone();
        };
        let p = &self.spec.algebra;
        let mut out = Form::zero();
        for (w, c) in f.terms() {
            if w.len() < 2 {
                out.add_term(w.clone(), c.clone());
                continue;
            }
            let t = r.table(w.len());
            match t.rules.get(w) {
                None => out.add_term(w.clone(), c.clone()),
                Some(combo) => {
                    for (v, k) in combo {
                        out.add_term(v.clone(), p.scale(c, k));
                    }
                }
            }
        }
        out
    }

    /// Product without reduction.
    pub fn mul_raw(&self, a: &Form, b: &Form) -> Form {
        let p = &self.spec.algebra;
        let mut out = Form::zero();
        for (u, f) in a.terms() {
            for (v, g) in b.terms() {
                let c = p.mul(f, &self.spec.phi_word(u, g));
                out.add_term(u.concat(v), c);
            }
        }
        out
    }

    pub fn wedge(&self, a: &Form, b: &Form) -> Result<Form> {
        let prod = self.mul_raw(a, b);
        if prod.max_degree() >= 2 && self.reducer.is_none() {
            return Err(Error::Unsupported("this calculus is first-order only".into()));
        }
        Ok(self.reduce(&prod))
    }

    pub fn wedge_all<'a>(&self, fs: impl IntoIterator<Item = &'a Form>) -> Result<Form> {
        let mut acc = Form::from_poly(NCPoly::one());
        for f in fs {
            acc = self.wedge(&acc, f)?;
        }
        Ok(acc)
    }

    /// `[ω, η] = ωη − (−1)^{|ω||η|} ηω`, degree by degree.
    pub fn graded_commutator(&self, a: &Form, b: &Form) -> Result<Form> {
        let mut out = Form::zero();
        for ra in 0..=a.max_degree() {
            let pa = a.part(ra);
            if pa.is_zero() {
                continue;
            }
            for rb in 0..=b.max_degree() {
                let pb = b.part(rb);
                if pb.is_zero() {
                    continue;
                }
                let ab = self.wedge(&pa, &pb)?;
                let ba = self.wedge(&pb, &pa)?;
                out = if sign(ra * rb) {
                    out.add(&ab).add(&ba)
                } else {
                    out.add(&ab).sub(&ba)
                };
            }
        }
        Ok(out)
    }

    pub fn dtheta(&self, s: usize) -> Result<&Form> {
        self.dtheta
            .as_ref()
            .map(|d| &d[s])
            .ok_or_else(|| Error::Unsupported("this calculus is first-order only".into()))
    }

    fn apply_derivation(&self, w: &TWord, table: &dyn Fn(usize) -> Form) -> Form {
        let mut out = Form::zero();
        let ds: Vec<usize> = w.dirs().collect();
        for i in 0..ds.len() {
            let pre = Form::word(TWord::from_slice(&w.0[..i]));
            let post = Form::word(TWord::from_slice(&w.0[i + 1..]));
            let mid = table(ds[i]);
            let t = self.mul_raw(&self.mul_raw(&pre, &mid), &post);
            out = if sign(i) { out.sub(&t) } else { out.add(&t) };
        }
        out
    }

    /// Exterior derivative, extended from `df` and `dθ^s` by the graded
    /// Leibniz rule.
    pub fn d(&self, form: &Form) -> Result<Form> {
        let spec = &self.spec;
        if form.max_degree() >= 1 && self.dtheta.is_none() {
            return Err(Error::Unsupported("this calculus is first-order only".into()));
        }
        let mut out = Form::zero();
        for (w, f) in form.terms() {
            out = out.add(&self.mul_raw(&spec.differential(f), &Form::word(w.clone())));
            if !w.is_empty() {
                let dw = self.apply_derivation(w, &|s| self.dtheta.as_ref().unwrap()[s].clone());
                out = out.add(&dw.left_mul(&spec.algebra, f));
            }
        }
        Ok(self.reduce(&out))
    }

    pub fn delta_table(&self) -> Result<&Vec<Form>> {
        self.ts
            .as_ref()
            .and_then(|t| t.delta.as_ref())
            .ok_or_else(|| Error::NotInner("no Δ table for this calculus".into()))
    }

    /// `Δ`: the graded derivation of degree one with `Δ(f) = 0` and the
    /// tabulated values on `θ^s`.
    pub fn delta(&self, form: &Form) -> Result<Form> {
        let table = self.delta_table()?;
        let mut out = Form::zero();
        for (w, f) in form.terms() {
            if w.is_empty() {
                continue;
            }
            let dw = self.apply_derivation(w, &|s| table[s].clone());
            out = out.add(&dw.left_mul(&self.spec.algebra, f));
        }
        Ok(self.reduce(&out))
    }

    pub fn zeta(&self) -> Result<Form> {
        self.ts
            .as_ref()
            .and_then(|t| t.zeta.clone())
            .map(|z| self.reduce(&z))
            .ok_or_else(|| Error::NotInner("no ζ for this calculus".into()))
    }

    pub fn vartheta(&self) -> Result<Form> {
        self.spec.vartheta()
    }

    /// Surviving basis words of degree `n`.
    pub fn basis(&self, n: usize) -> Result<Vec<TWord>> {
        Ok(self.reducer()?.basis(n))
    }

    /// Eliminated degree-2 words with their replacements.
    pub fn pair_rules(&self) -> Result<Vec<(TWord, Form)>> {
        let t = self.reducer()?.degree2_rules();
        let mut v: Vec<(TWord, Form)> = t
            .rules
            .iter()
            .map(|(w, combo)| (w.clone(), Form::from_scalars(combo.iter().cloned())))
            .collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(v)
    }

    /// Reduces a word by rewriting adjacent pairs in random order until no
    /// eliminated pair remains.
    pub fn pair_rewrite<R: Rng>(&self, w: &TWord, rng: &mut R) -> Result<Form> {
        let t = self.reducer()?.degree2_rules();
        let mut cur = Form::word(w.clone());
        loop {
            let sites: Vec<(TWord, usize)> = cur
                .terms()
                .flat_map(|(v, _)| {
                    (0..v.len().saturating_sub(1))
                        .filter(|&i| t.rules.contains_key(&TWord::from_slice(&v.0[i..i + 2])))
                        .map(move |i| (v.clone(), i))
                })
                .collect();
            if sites.is_empty() {
                return Ok(cur);
            }
            let (v, i) = sites[rng.gen_range(0..sites.len())].clone();
            let c = cur.terms.remove(&v).expect("site word present");
            let combo = &t.rules[&TWord::from_slice(&v.0[i..i + 2])];
            for (pw, k) in combo {
                let nw = TWord::from_slice(&v.0[..i])
                    .concat(pw)
                    .concat(&TWord::from_slice(&v.0[i + 2..]));
                cur.add_term(nw, self.spec.algebra.scale(&c, k));
            }
        }
    }

    pub fn parse_form(&self, text: &str) -> Result<Form> {
        self.eval_form(&expr::parse(text)?)
    }

    pub fn eval_form(&self, e: &Expr) -> Result<Form> {
        self.eval_with(e, false)
    }

    /// Parses a form without reducing products of 1-forms and without `d`;
    /// used to read 2-form relations before the structure exists.
    pub fn parse_form_raw(&self, text: &str) -> Result<Form> {
        self.eval_with(&expr::parse(text)?, true)
    }

    fn eval_with(&self, e: &Expr, raw: bool) -> Result<Form> {
        let p = &self.spec.algebra;
        let mul = |a: &Form, b: &Form| {
            if raw {
                Ok(self.mul_raw(a, b))
            } else {
                self.wedge(a, b)
            }
        };
        let ev = |e: &Expr| self.eval_with(e, raw);
        Ok(match e {
            Expr::Int(_) | Expr::Ident(_) => Form::from_poly(p.eval(e)?),
            Expr::Theta(label) => Form::theta(self.spec.index(label)?),
            Expr::D(_) if raw => return Err(Error::input("d is not available here")),
            Expr::D(inner) => self.d(&ev(inner)?)?,
            Expr::Add(a, b) => ev(a)?.add(&ev(b)?),
            Expr::Sub(a, b) => ev(a)?.sub(&ev(b)?),
            Expr::Neg(a) => ev(a)?.neg(),
            Expr::Mul(a, b) => mul(&ev(a)?, &ev(b)?)?,
            Expr::Div(a, b) => {
                let inv = self.unit_inverse_form(&ev(b)?)?;
                mul(&ev(a)?, &inv)?
            }
            Expr::Pow(a, k) => {
                let mut base = ev(a)?;
                if *k < 0 {
                    base = self.unit_inverse_form(&base)?;
                }
                let mut acc = Form::from_poly(NCPoly::one());
                for _ in 0..k.unsigned_abs() {
                    acc = mul(&acc, &base)?;
                }
                acc
            }
        })
    }

    fn unit_inverse_form(&self, f: &Form) -> Result<Form> {
        let p = &self.spec.algebra;
        if f.max_degree() > 0 {
            return Err(Error::input("only algebra elements can be inverted"));
        }
        let g = f.coeff(&TWord::empty());
        let inv = match g.as_scalar() {
            Some(c) => p.scalar(c.inv()?),
            None => p
                .unit_inverse(&g)
                .ok_or_else(|| Error::NotInvertible(p.fmt(&g)))?,
        };
        Ok(Form::from_poly(inv))
    }

    pub fn fmt(&self, f: &Form) -> String {
        self.spec.fmt_form(f)
    }

    pub fn scalar_form(&self, c: Scalar) -> Form {
        Form::from_poly(self.spec.algebra.scalar(c))
    }
}
