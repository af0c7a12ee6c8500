use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Element of a [`Group`]: components for abelian groups, images of
/// `0..n` for permutation groups.
pub type GroupElem = Vec<i64>;

/// The finitely generated groups used to index directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Group {
    /// Product of cyclic factors; modulus 0 stands for ℤ.
    Abelian(Vec<u32>),
    /// Symmetric group on `n` points, composing right to left.
    Permutation(usize),
}

impl Group {
    pub fn identity(&self) -> GroupElem {
        match self {
            Group::Abelian(m) => vec![0; m.len()],
            Group::Permutation(n) => (0..*n as i64).collect(),
        }
    }

    pub fn canonical(&self, a: &[i64]) -> GroupElem {
        match self {
            Group::Abelian(m) => a
                .iter()
                .zip(m)
                .map(|(&x, &k)| if k == 0 { x } else { x.rem_euclid(k as i64) })
                .collect(),
            Group::Permutation(_) => a.to_vec(),
        }
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> GroupElem {
        match self {
            Group::Abelian(_) => {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                self.canonical(&s)
            }
            Group::Permutation(_) => b.iter().map(|&i| a[i as usize]).collect(),
        }
    }

    pub fn inverse(&self, a: &[i64]) -> GroupElem {
        match self {
            Group::Abelian(_) => self.canonical(&a.iter().map(|x| -x).collect::<Vec<_>>()),
            Group::Permutation(n) => {
                let mut out = vec![0; *n];
                for (i, &j) in a.iter().enumerate() {
                    out[j as usize] = i as i64;
                }
                out
            }
        }
    }

    /// All elements, for finite groups.
    pub fn elements(&self) -> Result<Vec<GroupElem>> {
        match self {
            Group::Abelian(m) => {
                if m.contains(&0) {
                    return Err(Error::input("infinite group has no element list"));
                }
                let mut out = vec![vec![]];
                for &k in m {
                    out = out
                        .into_iter()
                        .flat_map(|e: Vec<i64>| {
                            (0..k as i64).map(move |x| {
                                let mut e = e.clone();
                                e.push(x);
                                e
                            })
                        })
                        .collect();
                }
                Ok(out)
            }
            Group::Permutation(n) => {
                let mut out = Vec::new();
                permute(&mut (0..*n as i64).collect(), 0, &mut out);
                out.sort();
                Ok(out)
            }
        }
    }

    pub fn fmt_elem(&self, a: &[i64]) -> String {
        let parts: Vec<String> = a.iter().map(i64::to_string).collect();
        match self {
            Group::Abelian(_) if a.len() == 1 => parts[0].clone(),
            Group::Abelian(_) => format!("({})", parts.join(",")),
            Group::Permutation(_) => format!("[{}]", parts.join(" ")),
        }
    }
}

fn permute(v: &mut Vec<i64>, k: usize, out: &mut Vec<GroupElem>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Classification of an ordered pair of directions by its group product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairClass {
    Biangle,
    Triangle(usize),
    Quadrangle(usize),
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairClass::Biangle => f.write_str("biangle"),
            PairClass::Triangle(s) => write!(f, "triangle({s})"),
            PairClass::Quadrangle(c) => write!(f, "quadrangle#{c}"),
        }
    }
}

/// Labelled directions, optionally realised as elements of a group.
#[derive(Clone, Debug)]
pub struct DirectionSet {
    pub labels: Vec<String>,
    pub group: Option<(Group, Vec<GroupElem>)>,
    classes: Vec<Vec<PairClass>>,
    quadrangle_elems: Vec<GroupElem>,
}

impl DirectionSet {
    /// Directions without group structure; pair classification unavailable.
    pub fn plain(labels: &[&str]) -> Self {
        DirectionSet {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            group: None,
            classes: Vec::new(),
            quadrangle_elems: Vec::new(),
        }
    }

    pub fn from_group(group: Group, dirs: Vec<(String, GroupElem)>) -> Result<Self> {
        let labels: Vec<String> = dirs.iter().map(|(l, _)| l.clone()).collect();
        let elems: Vec<GroupElem> = dirs.iter().map(|(_, e)| group.canonical(e)).collect();
        let e = group.identity();
        for (i, a) in elems.iter().enumerate() {
            if *a == e {
                return Err(Error::input(format!("direction `{}` is the unit element", labels[i])));
            }
            if elems[..i].contains(a) {
                return Err(Error::input(format!("direction `{}` repeats a group element", labels[i])));
            }
        }
        let mut quad: BTreeMap<GroupElem, usize> = BTreeMap::new();
        let mut quadrangle_elems = Vec::new();
        let mut classes = vec![Vec::new(); elems.len()];
        for (i, a) in elems.iter().enumerate() {
            for b in &elems {
                let g = group.mul(a, b);
                let c = if g == e {
                    PairClass::Biangle
                } else if let Some(k) = elems.iter().position(|x| *x == g) {
                    PairClass::Triangle(k)
                } else {
                    let next = quad.len();
                    let id = *quad.entry(g.clone()).or_insert_with(|| {
                        quadrangle_elems.push(g.clone());
                        next
                    });
                    PairClass::Quadrangle(id)
                };
                classes[i].push(c);
            }
        }
        Ok(DirectionSet {
            labels,
            group: Some((group, elems)),
            classes,
            quadrangle_elems,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn classify(&self, s: usize, t: usize) -> Option<PairClass> {
        self.classes.get(s).map(|row| row[t])
    }

    pub fn num_quadrangle_classes(&self) -> usize {
        self.quadrangle_elems.len()
    }

    pub fn quadrangle_elem(&self, class: usize) -> &GroupElem {
        &self.quadrangle_elems[class]
    }

    pub fn is_group_derived(&self) -> bool {
        self.group.is_some()
    }

    /// Index of the direction `s t s⁻¹`, when it lies in the set.
    pub fn conjugate(&self, s: usize, t: usize) -> Option<usize> {
        let (g, elems) = self.group.as_ref()?;
        let c = g.mul(&g.mul(&elems[s], &elems[t]), &g.inverse(&elems[s]));
        elems.iter().position(|x| *x == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_directions_on_integers() {
        let d = DirectionSet::from_group(
            Group::Abelian(vec![0]),
            vec![("1".into(), vec![1]), ("2".into(), vec![2])],
        )
        .unwrap();
        assert_eq!(d.classify(0, 0), Some(PairClass::Triangle(1)));
        assert_eq!(d.classify(0, 1), d.classify(1, 0));
        assert!(matches!(d.classify(1, 1), Some(PairClass::Quadrangle(_))));
        assert_eq!(d.num_quadrangle_classes(), 2);
    }

    #[test]
    fn transpositions_in_s3() {
        let g = Group::Permutation(3);
        assert_eq!(g.elements().unwrap().len(), 6);
        let d = DirectionSet::from_group(
            g,
            vec![
                ("a".into(), vec![1, 0, 2]),
                ("b".into(), vec![0, 2, 1]),
                ("c".into(), vec![2, 1, 0]),
            ],
        )
        .unwrap();
        assert_eq!(d.classify(0, 0), Some(PairClass::Biangle));
        assert_eq!(d.num_quadrangle_classes(), 2);
        for s in 0..3 {
            for t in 0..3 {
                assert!(d.conjugate(s, t).is_some());
            }
        }
    }
}
