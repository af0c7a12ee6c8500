use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::form::{Form, TWord};
use super::group::PairClass;
use super::spec::{CalculusSpec, Mode};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Degree-2 data of a calculus: the relations imposed on products of basis
/// 1-forms, and for inner calculi the maps `Δ` and `ζ`.
#[derive(Clone, Debug, Default)]
pub struct TwoFormStructure {
    /// degree-2 forms declared to vanish
    pub relations: Vec<Form>,
    /// `Δ(θ^s)`, one per direction
    pub delta: Option<Vec<Form>>,
    pub zeta: Option<Form>,
    /// `dθ^s` supplied directly, for calculi that are not inner
    pub dtheta: Option<Vec<Form>>,
}

impl TwoFormStructure {
    /// The structure forced by the group products of the directions:
    /// `ζ = Σ_{ss'=e} θ^sθ^{s'}/(t_s t_{s'})`,
    /// `Δ(θ^s) = Σ_{s's''=s} t_s θ^{s'}θ^{s''}/(t_{s'} t_{s''})`, and one
    /// vanishing relation per product outside `S ∪ {e}`.
    pub fn group_derived(spec: &CalculusSpec) -> Result<Self> {
        let set = &spec.set;
        if !set.is_group_derived() {
            return Err(Error::input(
                "2-form structure can only be derived for group-indexed directions",
            ));
        }
        let n = spec.n();
        let t: Vec<Scalar> = spec.dirs.iter().map(|d| d.weight.clone()).collect();
        let p = &spec.algebra;
        let w = |a: usize, b: usize| p.reduce_scalar(&(&t[a] * &t[b]).inv().expect("weights are nonzero"));
        let mut rels: Vec<Vec<(TWord, Scalar)>> = vec![Vec::new(); set.num_quadrangle_classes()];
        let mut zeta = Vec::new();
        let mut delta: Vec<Vec<(TWord, Scalar)>> = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                match set.classify(a, b).expect("group-derived") {
                    PairClass::Biangle => zeta.push((TWord::pair(a, b), w(a, b))),
                    PairClass::Triangle(s) => {
                        delta[s].push((TWord::pair(a, b), p.reduce_scalar(&(&t[s] * &w(a, b)))))
                    }
                    PairClass::Quadrangle(c) => rels[c].push((TWord::pair(a, b), w(a, b))),
                }
            }
        }
        let scalar_inner = spec.mode() == Mode::Automorphism;
        Ok(TwoFormStructure {
            relations: rels.into_iter().map(Form::from_scalars).collect(),
            delta: scalar_inner.then(|| delta.into_iter().map(Form::from_scalars).collect()),
            zeta: scalar_inner.then(|| Form::from_scalars(zeta)),
            dtheta: None,
        })
    }

    pub fn with_dtheta(mut self, dtheta: Vec<Form>) -> Self {
        self.dtheta = Some(dtheta);
        self
    }
}

/// Linear reduction of θ-words modulo the two-sided ideal generated by the
/// degree-2 relations, computed degree by degree.
#[derive(Debug)]
pub struct Reducer {
    k: usize,
    relations: Vec<Vec<(TWord, Scalar)>>,
    tables: Mutex<BTreeMap<usize, Arc<Table>>>,
}

#[derive(Debug, Default)]
pub struct Table {
    /// eliminated word → combination of kept words
    pub rules: HashMap<TWord, Vec<(TWord, Scalar)>>,
}

impl Reducer {
    pub fn new(k: usize, relations: &[Form]) -> Result<Self> {
        let mut rels = Vec::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            if r.degree() != Some(2) {
                return Err(Error::input("2-form relations must be homogeneous of degree 2"));
            }
            let sc = r.scalar_coeffs().ok_or_else(|| {
                Error::Unsupported("2-form relations with non-scalar coefficients".into())
            })?;
            rels.push(sc);
        }
        Ok(Reducer {
            k,
            relations: rels,
            tables: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn table(&self, n: usize) -> Arc<Table> {
        if let Some(t) = self.tables.lock().expect("reducer lock").get(&n) {
            return t.clone();
        }
        let t = Arc::new(self.build(n));
        self.tables
            .lock()
            .expect("reducer lock")
            .entry(n)
            .or_insert(t)
            .clone()
    }

    fn build(&self, n: usize) -> Table {
        if n < 2 || self.relations.is_empty() {
            return Table::default();
        }
        let words = TWord::all(self.k, n);
        let nw = words.len();
        let index: HashMap<&TWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        // columns run from the largest word down, so pivots eliminate large words
        let col = |w: &TWord| nw - 1 - index[w];
        let mut rows: linalg::Matrix = Vec::new();
        for rel in &self.relations {
            for i in 0..=n - 2 {
                for u in TWord::all(self.k, i) {
                    for v in TWord::all(self.k, n - 2 - i) {
                        let mut row = vec![Scalar::zero(); nw];
                        for (pw, c) in rel {
                            let w = u.concat(pw).concat(&v);
                            let j = col(&w);
                            row[j] = &row[j] + c;
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let pivots = linalg::rref(&mut rows, nw);
        let mut rules = HashMap::new();
        for (r, &pc) in pivots.iter().enumerate() {
            let pw = words[nw - 1 - pc].clone();
            let combo: Vec<(TWord, Scalar)> = (0..nw)
                .filter(|&j| j != pc && !rows[r][j].is_zero())
                .map(|j| (words[nw - 1 - j].clone(), -&rows[r][j]))
                .collect();
            rules.insert(pw, combo);
        }
        Table { rules }
    }

    /// Words of length `n` that survive reduction, in increasing order.
    pub fn basis(&self, n: usize) -> Vec<TWord> {
        let t = self.table(n);
        TWord::all(self.k, n)
            .into_iter()
            .filter(|w| !t.rules.contains_key(w))
            .collect()
    }

    pub fn degree2_rules(&self) -> Arc<Table> {
        self.table(2)
    }
}
