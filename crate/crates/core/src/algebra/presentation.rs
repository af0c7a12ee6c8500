use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

use super::ncpoly::{Letter, NCPoly, Word};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::poly::Var;
use crate::scalar::{ParamRelation, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LetterInfo {
    pub gen: usize,
    pub inverse: bool,
}

/// Oriented rewrite rule `lhs -> rhs` with `lhs` above every word of `rhs`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
    pub label: String,
}

/// A finitely presented algebra with a terminating rewrite system.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub(crate) gens: Vec<Generator>,
    pub(crate) letters: Vec<LetterInfo>,
    pub(crate) gen_letters: Vec<(Letter, Option<Letter>)>,
    pub(crate) names: HashMap<String, usize>,
    pub(crate) rules: Vec<Rule>,
    pub(crate) by_first: Vec<Vec<usize>>,
    pub(crate) param_relation: Option<ParamRelation>,
    pub(crate) relation_texts: Vec<(String, String)>,
}

/// Collects generators and relations; orientation happens in [`build`](Self::build).
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    gens: Vec<Generator>,
    relations: Vec<(String, String)>,
    param_relation: Option<(String, String)>,
}

impl PresentationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a generator; declaration order is the precedence order.
    pub fn generator(mut self, name: &str, invertible: bool) -> Self {
        self.gens.push(Generator {
            name: name.to_string(),
            invertible,
        });
        self
    }

    pub fn relation(mut self, lhs: &str, rhs: &str) -> Self {
        self.relations.push((lhs.to_string(), rhs.to_string()));
        self
    }

    /// `b*a = c*a*b`, plus the consequences for inverse letters.
    pub fn q_commute(mut self, a: &str, b: &str, c: &str) -> Self {
        let inv = |n: &str| self.gens.iter().any(|g| g.name == n && g.invertible);
        let (ai, bi) = (inv(a), inv(b));
        self.relations
            .push((format!("{b}*{a}"), format!("({c})*{a}*{b}")));
        if ai {
            self.relations
                .push((format!("{b}*{a}^-1"), format!("({c})^-1*{a}^-1*{b}")));
        }
        if bi {
            self.relations
                .push((format!("{b}^-1*{a}"), format!("({c})^-1*{a}*{b}^-1")));
        }
        if ai && bi {
            self.relations
                .push((format!("{b}^-1*{a}^-1"), format!("({c})*{a}^-1*{b}^-1")));
        }
        self
    }

    /// Imposes a monic polynomial relation `poly = 0` on a parameter.
    pub fn param_relation(mut self, param: &str, poly: &str) -> Self {
        self.param_relation = Some((param.to_string(), poly.to_string()));
        self
    }

    pub fn build(self) -> Result<Presentation> {
        let mut p = Presentation::free(self.gens)?;
        if let Some((v, text)) = &self.param_relation {
            let s = expr::parse_scalar(text)?;
            if !s.denom().is_one() {
                return Err(Error::input("parameter relation must be a polynomial"));
            }
            p.param_relation = Some(ParamRelation::new(Var::new(v), s.numer())?);
        }
        for (lhs, rhs) in &self.relations {
            let l = p.parse(lhs)?;
            let r = p.parse(rhs)?;
            p.add_relation(&l.sub(&r), &format!("{lhs} = {rhs}"))?;
            p.relation_texts.push((lhs.clone(), rhs.clone()));
        }
        Ok(p)
    }
}

impl Presentation {
    /// Free algebra on the generators; only the inverse-pair rules are present.
    pub fn free(gens: Vec<Generator>) -> Result<Presentation> {
        let mut letters = Vec::new();
        let mut gen_letters = Vec::new();
        let mut names = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.name.is_empty()
                || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || g.name.starts_with(|c: char| c.is_ascii_digit())
                || g.name.starts_with("th_")
            {
                return Err(Error::input(format!("invalid generator name `{}`", g.name)));
            }
            if names.insert(g.name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate generator `{}`", g.name)));
            }
            let l = letters.len() as Letter;
            letters.push(LetterInfo { gen: i, inverse: false });
            let inv = if g.invertible {
                letters.push(LetterInfo { gen: i, inverse: true });
                Some(l + 1)
            } else {
                None
            };
            gen_letters.push((l, inv));
        }
        let mut p = Presentation {
            by_first: vec![Vec::new(); letters.len()],
            gens,
            letters,
            gen_letters,
            names,
            rules: Vec::new(),
            param_relation: None,
            relation_texts: Vec::new(),
        };
        for i in 0..p.gens.len() {
            if let (l, Some(li)) = p.gen_letters[i] {
                let name = p.gens[i].name.clone();
                p.push_rule(Word::from_slice(&[l, li]), NCPoly::one(), format!("{name}*{name}^-1 = 1"));
                p.push_rule(Word::from_slice(&[li, l]), NCPoly::one(), format!("{name}^-1*{name} = 1"));
            }
        }
        Ok(p)
    }

    fn push_rule(&mut self, lhs: Word, rhs: NCPoly, label: String) {
        let idx = self.rules.len();
        self.by_first[lhs.letters()[0] as usize].push(idx);
        self.rules.push(Rule { lhs, rhs, label });
    }

    /// Orients `diff = 0` so that its largest word becomes a rule left-hand side.
    pub fn add_relation(&mut self, diff: &NCPoly, label: &str) -> Result<()> {
        let diff = self.normalize(diff);
        let Some((lw, lc)) = diff.leading().map(|(w, c)| (w.clone(), c.clone())) else {
            return Ok(());
        };
        if lw.is_empty() {
            return Err(Error::input(format!("relation `{label}` forces a nonzero scalar to vanish")));
        }
        let inv = lc.inv()?;
        let mut rest = diff.clone();
        rest.terms.remove(&lw);
        let rhs = self.scale(&rest, &(-inv));
        self.push_rule(lw, rhs, label.to_string());
        Ok(())
    }

    /// Adds a rule verbatim, bypassing orientation; used to build deliberately
    /// inconsistent systems for the confluence checker.
    pub fn add_rule_unchecked(&mut self, lhs: Word, rhs: NCPoly, label: &str) -> Result<()> {
        if lhs.is_empty() || rhs.terms().any(|(w, _)| *w >= lhs) {
            return Err(Error::input(format!("rule `{label}` is not order-decreasing")));
        }
        self.push_rule(lhs, rhs, label.to_string());
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn relation_texts(&self) -> &[(String, String)] {
        &self.relation_texts
    }

    pub fn param_relation(&self) -> Option<&ParamRelation> {
        self.param_relation.as_ref()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_info(&self, l: Letter) -> LetterInfo {
        self.letters[l as usize]
    }

    pub fn letter_inverse(&self, l: Letter) -> Option<Letter> {
        let info = self.letters[l as usize];
        let (g, gi) = self.gen_letters[info.gen];
        if info.inverse {
            Some(g)
        } else {
            gi
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    pub fn gen_letter(&self, gen: usize) -> Letter {
        self.gen_letters[gen].0
    }

    pub fn gen_inverse_letter(&self, gen: usize) -> Option<Letter> {
        self.gen_letters[gen].1
    }

    pub fn gen(&self, name: &str) -> Result<NCPoly> {
        let i = self
            .gen_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(self.letter_poly(self.gen_letter(i)))
    }

    pub fn letter_poly(&self, l: Letter) -> NCPoly {
        NCPoly::monomial(Word::letter(l), Scalar::one())
    }

    /// Generators as polynomials, in declaration order.
    pub fn generator_polys(&self) -> Vec<NCPoly> {
        (0..self.gens.len())
            .map(|i| self.letter_poly(self.gen_letter(i)))
            .collect()
    }

    pub fn reduce_scalar(&self, c: &Scalar) -> Scalar {
        match &self.param_relation {
            None => c.clone(),
            Some(rel) => rel.reduce(c).unwrap_or_else(|_| c.clone()),
        }
    }

    pub fn scalar(&self, c: Scalar) -> NCPoly {
        NCPoly::scalar(self.reduce_scalar(&c))
    }

    pub fn scale(&self, p: &NCPoly, c: &Scalar) -> NCPoly {
        let out = p.scale_raw(c);
        if self.param_relation.is_some() {
            out.map_coeffs(|k| self.reduce_scalar(k))
        } else {
            out
        }
    }

    fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        let ls = w.letters();
        for i in 0..ls.len() {
            for &r in &self.by_first[ls[i] as usize] {
                let lhs = self.rules[r].lhs.letters();
                if ls[i..].starts_with(lhs) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    /// Normal form by leftmost rule application, always rewriting the
    /// largest pending word first.
    pub fn normalize(&self, p: &NCPoly) -> NCPoly {
        let mut pending = p.terms.clone();
        let mut out = NCPoly::zero();
        while let Some((w, c)) = pending.pop_last() {
            match self.find_redex(&w) {
                None => {
                    let c = self.reduce_scalar(&c);
                    if !c.is_zero() {
                        out.terms.insert(w, c);
                    }
                }
                Some((i, r)) => {
                    let rule = &self.rules[r];
                    let ls = w.letters();
                    let (pre, post) = (&ls[..i], &ls[i + rule.lhs.len()..]);
                    for (rw, rc) in rule.rhs.terms() {
                        let nw = Word::splice(pre, rw.letters(), post);
                        let nc = &c * rc;
                        add_pending(&mut pending, nw, nc);
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        if a.is_zero() || b.is_zero() {
            return NCPoly::zero();
        }
        if let Some(c) = a.as_scalar() {
            return self.scale(b, &c);
        }
        if let Some(c) = b.as_scalar() {
            return self.scale(a, &c);
        }
        let mut raw = NCPoly::zero();
        for (w1, c1) in a.terms() {
            for (w2, c2) in b.terms() {
                raw.add_term(w1.concat(w2), c1 * c2);
            }
        }
        self.normalize(&raw)
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a NCPoly>) -> NCPoly {
        let mut acc = NCPoly::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn pow(&self, a: &NCPoly, e: i32) -> Result<NCPoly> {
        if e < 0 {
            let inv = self
                .unit_inverse(a)
                .ok_or_else(|| Error::NotInvertible(self.fmt(a)))?;
            return self.pow(&inv, -e);
        }
        let mut acc = NCPoly::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        Ok(acc)
    }

    /// Inverse of a unit: a nonzero scalar times a word in invertible letters.
    pub fn unit_inverse(&self, a: &NCPoly) -> Option<NCPoly> {
        if a.len() != 1 {
            return None;
        }
        let (w, c) = a.leading()?;
        let mut inv = Word::empty();
        for &l in w.letters().iter().rev() {
            inv.0.push(self.letter_inverse(l)?);
        }
        let ci = self.reduce_scalar(&c.inv().ok()?);
        Some(self.normalize(&NCPoly::monomial(inv, ci)))
    }

    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        self.eval(&expr::parse(text)?)
    }

    pub fn eval(&self, e: &Expr) -> Result<NCPoly> {
        Ok(match e {
            Expr::Int(n) => NCPoly::scalar(Scalar::from_rational(n.clone().into())),
            Expr::Ident(name) => match self.gen_index(name) {
                Some(i) => self.letter_poly(self.gen_letter(i)),
                None => self.scalar(Scalar::param(name)),
            },
            Expr::Theta(s) => {
                return Err(Error::input(format!("form th_{s} in algebra context")))
            }
            Expr::D(_) => return Err(Error::input("differential in algebra context")),
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?),
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?),
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?),
            Expr::Div(a, b) => {
                let d = self.eval(b)?;
                let inv = match d.as_scalar() {
                    Some(c) => self.scalar(c.inv()?),
                    None => self
                        .unit_inverse(&d)
                        .ok_or_else(|| Error::NotInvertible(self.fmt(&d)))?,
                };
                self.mul(&self.eval(a)?, &inv)
            }
            Expr::Pow(a, k) => {
                let base = self.eval(a)?;
                if let Some(c) = base.as_scalar() {
                    self.scalar(c.pow(*k)?)
                } else if *k < 0 && self.unit_inverse(&base).is_none() {
                    let name = match &**a {
                        Expr::Ident(n) => n.clone(),
                        _ => self.fmt(&base),
                    };
                    return Err(Error::NotInvertible(name));
                } else {
                    self.pow(&base, *k)?
                }
            }
        })
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let ls = w.letters();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let info = self.letters[ls[i] as usize];
            let name = &self.gens[info.gen].name;
            let k = (j - i) as i64 * if info.inverse { -1 } else { 1 };
            if !out.is_empty() {
                out.push('*');
            }
            if k == 1 {
                out.push_str(name);
            } else {
                let _ = write!(out, "{name}^{k}");
            }
            i = j;
        }
        out
    }

    /// Canonical text, largest word first; re-parses to an equal value.
    pub fn fmt(&self, p: &NCPoly) -> String {
        fmt_terms(p.terms().rev().map(|(w, c)| (self.word_string(w), c.clone())))
    }

    /// Uniformly random words up to `max_len` with small integer
    /// coefficients, brought to normal form.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_len: usize, max_terms: usize) -> NCPoly {
        let mut raw = NCPoly::zero();
        let nterms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..nterms {
            let len = rng.gen_range(0..=max_len);
            let mut w = Word::empty();
            for _ in 0..len {
                w.0.push(rng.gen_range(0..self.letters.len()) as Letter);
            }
            let c = loop {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            raw.add_term(w, Scalar::from_int(c));
        }
        self.normalize(&raw)
    }
}

fn add_pending(pending: &mut std::collections::BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    use std::collections::btree_map::Entry;
    match pending.entry(w) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Formats `coefficient*basis` terms; basis `"1"` denotes the unit.
pub fn fmt_terms(terms: impl IntoIterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (basis, c) in terms {
        let neg = c.numer().len() == 1 && c.numer().leading_coeff() < num_traits::Zero::zero();
        let mag = if neg { -&c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.denom().is_one() && mag.numer().len() > 1 {
            format!("({mag})")
        } else {
            mag.to_string()
        };
        if basis == "1" {
            out.push_str(&coef);
        } else if mag.is_one() {
            out.push_str(&basis);
        } else {
            let _ = write!(out, "{coef}*{basis}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
