use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::scalar::Scalar;

/// Index of a letter in a presentation's precedence order. Invertible
/// generators contribute two letters: the generator and its inverse.
pub type Letter = u16;

/// A word in letters, ordered by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(pub SmallVec<[Letter; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(l: Letter) -> Self {
        let mut s = SmallVec::new();
        s.push(l);
        Word(s)
    }

    pub fn from_slice(s: &[Letter]) -> Self {
        Word(SmallVec::from_slice(s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut s = self.0.clone();
        s.extend_from_slice(&other.0);
        Word(s)
    }

    pub fn splice(prefix: &[Letter], mid: &[Letter], suffix: &[Letter]) -> Word {
        let mut s = SmallVec::with_capacity(prefix.len() + mid.len() + suffix.len());
        s.extend_from_slice(prefix);
        s.extend_from_slice(mid);
        s.extend_from_slice(suffix);
        Word(s)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A noncommutative polynomial: a finite map from words to nonzero scalars.
///
/// Linear operations are available directly; products and normal forms
/// need the presentation (see [`super::Presentation`]).
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct NCPoly {
    pub(crate) terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The scalar value if the polynomial is a multiple of the unit.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (w, c) = self.terms.iter().next().unwrap();
                w.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
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

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    /// Scalar multiple without reduction by parameter relations.
    pub(crate) fn scale_raw(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k * c))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs(
        &self,
        mut f: impl FnMut(&Scalar) -> crate::Result<Scalar>,
    ) -> crate::Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl FromIterator<(Word, Scalar)> for NCPoly {
    fn from_iter<I: IntoIterator<Item = (Word, Scalar)>>(iter: I) -> Self {
        let mut out = NCPoly::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }
}
