use serde::Serialize;

use super::ncpoly::{NCPoly, Word};
use super::presentation::Presentation;
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPairFailure {
    pub rules: (String, String),
    pub word: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub max_overlap_len: usize,
    pub pairs_checked: usize,
    pub failures: Vec<CriticalPairFailure>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Overlap {
    a: usize,
    b: usize,
    word: Word,
    /// position of rule `b`'s left-hand side inside `word`; rule `a` sits at 0
    at: usize,
}

fn overlaps(p: &Presentation, max_len: usize) -> Vec<Overlap> {
    let rules = p.rules();
    let mut out = Vec::new();
    for (a, ra) in rules.iter().enumerate() {
        let la = ra.lhs.letters();
        for (b, rb) in rules.iter().enumerate() {
            let lb = rb.lhs.letters();
            // proper overlaps: a suffix of `la` is a prefix of `lb`
            for k in 1..la.len().min(lb.len()) {
                if la[la.len() - k..] == lb[..k] && la.len() + lb.len() - k <= max_len {
                    out.push(Overlap {
                        a,
                        b,
                        word: Word::splice(la, &lb[k..], &[]),
                        at: la.len() - k,
                    });
                }
            }
            // inclusions: `lb` occurs inside `la`
            if a != b && lb.len() <= la.len() && la.len() <= max_len {
                for at in 0..=la.len() - lb.len() {
                    if la[at..at + lb.len()] == *lb {
                        out.push(Overlap {
                            a,
                            b,
                            word: ra.lhs.clone(),
                            at,
                        });
                    }
                }
            }
        }
    }
    out
}

fn rewrite_at(p: &Presentation, w: &Word, rule: usize, at: usize) -> NCPoly {
    let r = &p.rules()[rule];
    let ls = w.letters();
    let (pre, post) = (&ls[..at], &ls[at + r.lhs.len()..]);
    r.rhs
        .terms()
        .map(|(rw, c)| (Word::splice(pre, rw.letters(), post), c.clone()))
        .collect()
}

/// Resolves every critical pair whose overlap word has length at most
/// `max_overlap_len` and reports the pairs whose two reducts differ.
pub fn check_local_confluence(p: &Presentation, max_overlap_len: usize) -> ConfluenceReport {
    let ovs = overlaps(p, max_overlap_len);
    let results = par::map(&ovs, |o| {
        let left = p.normalize(&rewrite_at(p, &o.word, o.a, 0));
        let right = p.normalize(&rewrite_at(p, &o.word, o.b, o.at));
        (left != right).then(|| CriticalPairFailure {
            rules: (p.rules()[o.a].label.clone(), p.rules()[o.b].label.clone()),
            word: p.word_string(&o.word),
            left: p.fmt(&left),
            right: p.fmt(&right),
        })
    });
    ConfluenceReport {
        max_overlap_len,
        pairs_checked: ovs.len(),
        failures: results.into_iter().flatten().collect(),
    }
}
