use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::algebra::{NCPoly, Presentation};
use crate::scalar::Scalar;

/// A word in basis 1-forms `θ^{s₁} ⋯ θ^{s_r}`, by direction index.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct TWord(pub SmallVec<[u8; 6]>);

impl TWord {
    pub fn empty() -> Self {
        TWord(SmallVec::new())
    }

    pub fn single(s: usize) -> Self {
        TWord::from_slice(&[s as u8])
    }

    pub fn from_slice(s: &[u8]) -> Self {
        TWord(SmallVec::from_slice(s))
    }

    pub fn pair(a: usize, b: usize) -> Self {
        TWord::from_slice(&[a as u8, b as u8])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dirs(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().map(|&s| s as usize)
    }

    pub fn concat(&self, o: &TWord) -> TWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        TWord(v)
    }

    /// All words of length `n` over `k` letters, in increasing order.
    pub fn all(k: usize, n: usize) -> Vec<TWord> {
        let mut out = vec![TWord::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |s| {
                        let mut w = w.clone();
                        w.0.push(s as u8);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for TWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for TWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential form `Σ f_w θ^w` with algebra coefficients on the left.
/// Terms of different degree may coexist.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Form {
    pub(crate) terms: BTreeMap<TWord, NCPoly>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn from_poly(f: NCPoly) -> Self {
        Form::term(TWord::empty(), f)
    }

    pub fn theta(s: usize) -> Self {
        Form::term(TWord::single(s), NCPoly::one())
    }

    pub fn word(w: TWord) -> Self {
        Form::term(w, NCPoly::one())
    }

    pub fn term(w: TWord, f: NCPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(w, f);
        }
        Form { terms }
    }

    /// `Σ c θ^w` with scalar coefficients.
    pub fn from_scalars(items: impl IntoIterator<Item = (TWord, Scalar)>) -> Self {
        let mut out = Form::zero();
        for (w, c) in items {
            out.add_term(w, NCPoly::scalar(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&TWord, &NCPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &TWord) -> NCPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous; zero counts as homogeneous of any degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(TWord::len);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(TWord::len).max().unwrap_or(0)
    }

    pub fn part(&self, r: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == r)
                .map(|(w, f)| (w.clone(), f.clone()))
                .collect(),
        }
    }

    pub(crate) fn add_term(&mut self, w: TWord, f: NCPoly) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&f);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (w, f) in &o.terms {
            out.add_term(w.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (w, f) in &o.terms {
            out.add_term(w.clone(), f.neg());
        }
        out
    }

    pub fn neg(&self) -> Form {
        Form {
            terms: self.terms.iter().map(|(w, f)| (w.clone(), f.neg())).collect(),
        }
    }

    /// `f · ω`.
    pub fn left_mul(&self, p: &Presentation, f: &NCPoly) -> Form {
        let mut out = Form::zero();
        for (w, g) in &self.terms {
            out.add_term(w.clone(), p.mul(f, g));
        }
        out
    }

    pub fn scale(&self, p: &Presentation, c: &Scalar) -> Form {
        let mut out = Form::zero();
        for (w, g) in &self.terms {
            out.add_term(w.clone(), p.scale(g, c));
        }
        out
    }

    /// Whether every coefficient is a scalar multiple of the unit.
    pub fn scalar_coeffs(&self) -> Option<Vec<(TWord, Scalar)>> {
        self.terms
            .iter()
            .map(|(w, f)| f.as_scalar().map(|c| (w.clone(), c)))
            .collect()
    }

    pub fn map_coeffs(&self, mut g: impl FnMut(&TWord, &NCPoly) -> NCPoly) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), g(w, f));
        }
        out
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Form>) -> Form {
        let mut out = Form::zero();
        for f in items {
            out = out.add(f);
        }
        out
    }
}
