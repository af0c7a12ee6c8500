use std::sync::Arc;

use super::ncpoly::NCPoly;
use super::presentation::Presentation;
use crate::error::{Error, Result};

/// An algebra map given by the images of the generators.
///
/// Images of inverse letters are derived from the images of their
/// generators, which must therefore be units.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    images: Vec<NCPoly>,
    verified: bool,
    inverse: Option<Box<AlgebraMorphism>>,
}

impl AlgebraMorphism {
    fn unverified(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        gen_images: Vec<NCPoly>,
    ) -> Result<Self> {
        if gen_images.len() != source.generators().len() {
            return Err(Error::input(format!(
                "expected {} generator images, got {}",
                source.generators().len(),
                gen_images.len()
            )));
        }
        let mut images = vec![NCPoly::zero(); source.num_letters()];
        for (i, img) in gen_images.into_iter().enumerate() {
            let img = target.normalize(&img);
            if let Some(li) = source.gen_inverse_letter(i) {
                let inv = target.unit_inverse(&img).ok_or_else(|| {
                    Error::input(format!(
                        "image `{}` of invertible generator `{}` is not a unit",
                        target.fmt(&img),
                        source.generators()[i].name
                    ))
                })?;
                images[li as usize] = inv;
            }
            images[source.gen_letter(i) as usize] = img;
        }
        Ok(AlgebraMorphism {
            source,
            target,
            images,
            verified: false,
            inverse: None,
        })
    }

    /// Checks every defining relation; fails on the first violated one.
    pub fn verify(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        gen_images: Vec<NCPoly>,
    ) -> Result<Self> {
        let mut m = Self::unverified(source, target, gen_images)?;
        if let Some((relation, residue)) = m.residues().into_iter().next() {
            return Err(Error::RelationViolated {
                relation,
                residue: m.target.fmt(&residue),
            });
        }
        m.verified = true;
        Ok(m)
    }

    /// Parses `generator -> image` pairs; unlisted generators map to themselves
    /// when source and target share the name.
    pub fn from_texts(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: &[(&str, &str)],
    ) -> Result<Self> {
        let mut out = Vec::new();
        for g in source.generators() {
            let img = match images.iter().find(|(n, _)| *n == g.name) {
                Some((_, text)) => target.parse(text)?,
                None => target.gen(&g.name)?,
            };
            out.push(img);
        }
        for (n, _) in images {
            if source.gen_index(n).is_none() {
                return Err(Error::UnknownSymbol(n.to_string()));
            }
        }
        Self::verify(source, target, out)
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let imgs = p.generator_polys();
        let mut m = Self::unverified(p.clone(), p, imgs).expect("identity images are valid");
        m.verified = true;
        m.inverse = Some(Box::new(m.clone()));
        m
    }

    /// Residues `image(lhs) - image(rhs)` of violated rules.
    pub fn residues(&self) -> Vec<(String, NCPoly)> {
        let mut out = Vec::new();
        for rule in self.source.rules() {
            let lhs = NCPoly::monomial(rule.lhs.clone(), crate::Scalar::one());
            let r = self.apply_unchecked(&lhs).sub(&self.apply_unchecked(&rule.rhs));
            if !r.is_zero() {
                out.push((rule.label.clone(), r));
            }
        }
        out
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn gen_image(&self, gen: usize) -> &NCPoly {
        &self.images[self.source.gen_letter(gen) as usize]
    }

    pub fn gen_images(&self) -> Vec<NCPoly> {
        (0..self.source.generators().len())
            .map(|i| self.gen_image(i).clone())
            .collect()
    }

    fn apply_unchecked(&self, f: &NCPoly) -> NCPoly {
        let t = &self.target;
        let mut acc = NCPoly::zero();
        for (w, c) in f.terms() {
            let mut term = t.scalar(c.clone());
            for &l in w.letters() {
                term = t.mul(&term, &self.images[l as usize]);
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn apply(&self, f: &NCPoly) -> Result<NCPoly> {
        if !self.verified {
            return Err(Error::Unverified);
        }
        Ok(self.apply_unchecked(f))
    }

    /// `self ∘ other`; verified whenever both factors are.
    pub fn compose(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        let imgs: Vec<NCPoly> = (0..other.source.generators().len())
            .map(|i| self.apply_unchecked(other.gen_image(i)))
            .collect();
        let mut m = Self::unverified(other.source.clone(), self.target.clone(), imgs)?;
        m.verified = self.verified && other.verified;
        if let (Some(a), Some(b)) = (&self.inverse, &other.inverse) {
            let mut inv = b.compose(a)?;
            inv.inverse = None;
            m.inverse = Some(Box::new(inv));
        }
        Ok(m)
    }

    /// Attaches an inverse after checking both compositions fix every generator.
    pub fn with_inverse(mut self, inv: AlgebraMorphism) -> Result<Self> {
        for (a, b) in [(&self, &inv), (&inv, &self)] {
            for i in 0..b.source.generators().len() {
                let g = b.source.letter_poly(b.source.gen_letter(i));
                if a.apply_unchecked(&b.apply_unchecked(&g)) != g {
                    return Err(Error::input(format!(
                        "supplied inverse does not fix generator `{}`",
                        b.source.generators()[i].name
                    )));
                }
            }
        }
        let mut inv = inv;
        inv.inverse = None;
        self.inverse = Some(Box::new(inv));
        Ok(self)
    }

    pub fn inverse(&self) -> Option<&AlgebraMorphism> {
        self.inverse.as_deref()
    }

    /// The inverse with its own inverse link restored.
    pub fn inverse_morphism(&self) -> Option<AlgebraMorphism> {
        let mut inv = self.inverse.as_deref()?.clone();
        let mut me = self.clone();
        me.inverse = None;
        inv.inverse = Some(Box::new(me));
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.source.generators().len())
            .all(|i| *self.gen_image(i) == self.source.letter_poly(self.source.gen_letter(i)))
    }

    pub fn same_images(&self, other: &AlgebraMorphism) -> bool {
        self.gen_images() == other.gen_images()
    }
}
