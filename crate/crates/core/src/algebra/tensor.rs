use std::collections::BTreeMap;

use super::ncpoly::{Letter, NCPoly, Word};
use super::presentation::{Generator, Presentation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Result of [`tensor_product`]: the combined presentation and, for the
/// second factor, the possibly renamed generator names.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub presentation: Presentation,
    pub renamed: BTreeMap<String, String>,
}

fn remap(p: &NCPoly, offset: Letter) -> NCPoly {
    p.terms()
        .map(|(w, c)| {
            let ls: Vec<Letter> = w.letters().iter().map(|l| l + offset).collect();
            (Word::from_slice(&ls), c.clone())
        })
        .collect()
}

/// `p1 ⊗ p2`: generators of `p2` follow those of `p1` in precedence and
/// commute with them. Clashing names from `p2` get a `_2` suffix.
pub fn tensor_product(p1: &Presentation, p2: &Presentation) -> Result<TensorProduct> {
    let mut gens: Vec<Generator> = p1.generators().to_vec();
    let mut renamed = BTreeMap::new();
    for g in p2.generators() {
        let mut name = g.name.clone();
        while gens.iter().any(|h| h.name == name) {
            name.push_str("_2");
        }
        if name != g.name {
            renamed.insert(g.name.clone(), name.clone());
        }
        gens.push(Generator {
            name,
            invertible: g.invertible,
        });
    }
    let param_relation = match (p1.param_relation(), p2.param_relation()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Unsupported(
                "factors carry different parameter relations".into(),
            ))
        }
        (a, b) => a.or(b).cloned(),
    };
    let mut p = Presentation::free(gens)?;
    p.param_relation = param_relation;
    let offset = p1.num_letters() as Letter;
    for r in p1.rules() {
        if !is_inverse_rule(p1, &r.lhs) {
            p.add_rule_unchecked(r.lhs.clone(), r.rhs.clone(), &r.label)?;
        }
    }
    for r in p2.rules() {
        if !is_inverse_rule(p2, &r.lhs) {
            let lhs = Word::from_slice(
                &r.lhs.letters().iter().map(|l| l + offset).collect::<Vec<_>>(),
            );
            p.add_rule_unchecked(lhs, remap(&r.rhs, offset), &r.label)?;
        }
    }
    for b in 0..p2.num_letters() as Letter {
        for a in 0..offset {
            let lhs = Word::from_slice(&[b + offset, a]);
            let rhs = NCPoly::monomial(Word::from_slice(&[a, b + offset]), Scalar::one());
            let label = format!(
                "{} commutes with {}",
                p.word_string(&Word::letter(b + offset)),
                p.word_string(&Word::letter(a))
            );
            p.add_rule_unchecked(lhs, rhs, &label)?;
        }
    }
    p.relation_texts = p
        .rules()
        .iter()
        .filter(|r| !is_inverse_rule(&p, &r.lhs))
        .map(|r| (p.word_string(&r.lhs), p.fmt(&r.rhs)))
        .collect();
    Ok(TensorProduct {
        presentation: p,
        renamed,
    })
}

fn is_inverse_rule(p: &Presentation, lhs: &Word) -> bool {
    let ls = lhs.letters();
    ls.len() == 2 && p.letter_inverse(ls[0]) == Some(ls[1])
}
