use std::collections::BTreeMap;

use serde::Serialize;

use super::ncpoly::{Letter, NCPoly, Word};
use super::presentation::Presentation;
use crate::linalg;
use crate::scalar::Scalar;

/// Normal words of length at most `max_len`, shortest first.
pub fn normal_words(p: &Presentation, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..p.num_letters() as Letter {
                let nw = w.concat(&Word::letter(l));
                if p.is_normal_word(&nw) {
                    next.push(nw);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub degree_bound: usize,
    pub unknowns: usize,
    pub equations: usize,
    /// nullspace basis; each witness lists `f_s` per derivation
    #[serde(skip)]
    pub witnesses: Vec<Vec<NCPoly>>,
    pub witness_text: Vec<Vec<String>>,
}

impl ProbeReport {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// Bounded search for `f_s` with `Σ_s e_s(m) f_s = 0` for every normal
/// monomial `m` up to the bound, `f_s` ranging over normal words up to the
/// same bound. A nonempty nullspace is reported as witnesses.
pub fn basis_independence_probe(
    p: &Presentation,
    derivations: &[&(dyn Fn(&NCPoly) -> NCPoly + Sync)],
    degree_bound: usize,
) -> ProbeReport {
    let words = normal_words(p, degree_bound);
    let n = derivations.len();
    let unknowns = n * words.len();
    let mut rows: BTreeMap<(usize, Word), Vec<Scalar>> = BTreeMap::new();
    for (mi, m) in words.iter().enumerate() {
        let mpoly = NCPoly::monomial(m.clone(), Scalar::one());
        for (s, e) in derivations.iter().enumerate() {
            let em = e(&mpoly);
            if em.is_zero() {
                continue;
            }
            for (wi, w) in words.iter().enumerate() {
                let prod = p.mul(&em, &NCPoly::monomial(w.clone(), Scalar::one()));
                for (rw, c) in prod.terms() {
                    let row = rows
                        .entry((mi, rw.clone()))
                        .or_insert_with(|| vec![Scalar::zero(); unknowns]);
                    let k = s * words.len() + wi;
                    row[k] = &row[k] + c;
                }
            }
        }
    }
    let matrix: linalg::Matrix = rows.into_values().collect();
    let equations = matrix.len();
    let ns = linalg::nullspace(&matrix, unknowns);
    let witnesses: Vec<Vec<NCPoly>> = ns
        .iter()
        .map(|v| {
            (0..n)
                .map(|s| {
                    words
                        .iter()
                        .enumerate()
                        .map(|(wi, w)| (w.clone(), v[s * words.len() + wi].clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let witness_text = witnesses
        .iter()
        .map(|w| w.iter().map(|f| p.fmt(f)).collect())
        .collect();
    ProbeReport {
        degree_bound,
        unknowns,
        equations,
        witnesses,
        witness_text,
    }
}

/// Whether `Σ_s e_s(m) f_s` vanishes on every normal monomial up to the bound.
pub fn is_dependency(
    p: &Presentation,
    derivations: &[&(dyn Fn(&NCPoly) -> NCPoly + Sync)],
    fs: &[NCPoly],
    degree_bound: usize,
) -> bool {
    normal_words(p, degree_bound).into_iter().all(|m| {
        let mpoly = NCPoly::monomial(m, Scalar::one());
        let mut acc = NCPoly::zero();
        for (e, f) in derivations.iter().zip(fs) {
            acc = acc.add(&p.mul(&e(&mpoly), f));
        }
        acc.is_zero()
    })
}
