use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Signed;
use serde::Serialize;

use super::connection::{Connection, VIndex};
use super::Geometry;
use crate::algebra::NCPoly;
use crate::calculus::{CalculusSpec, Form, PairClass, TWord};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Σ coeffs[i] · V[i] + constant = 0`, or after normalisation
/// `V[solved] = rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEq {
    pub coeffs: BTreeMap<VIndex, Scalar>,
    pub constant: NCPoly,
    /// the kept 2-form basis word the equation comes from
    pub pair: TWord,
}

impl LinearEq {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// Contradictory: no unknowns but a nonzero constant.
    pub fn is_inconsistent(&self) -> bool {
        self.coeffs.is_empty() && !self.constant.is_zero()
    }

    /// The unknown solved for: the one with the largest lower pair.
    pub fn solved_for(&self) -> Option<VIndex> {
        self.coeffs.keys().max_by_key(|&&(a, s, b)| (s, b, a)).copied()
    }

    /// Residue of the equation at a concrete connection.
    pub fn residue(&self, spec: &CalculusSpec, conn: &Connection) -> NCPoly {
        let p = &spec.algebra;
        let mut acc = self.constant.clone();
        for (i, c) in &self.coeffs {
            acc = acc.add(&p.scale(&conn.get(*i), c));
        }
        acc
    }

    /// `V[s,s',s''] = …` with `s` the upper index.
    pub fn fmt(&self, spec: &CalculusSpec) -> String {
        let name = |(a, s, b): VIndex| {
            format!("V[{},{},{}]", spec.label(a), spec.label(s), spec.label(b))
        };
        let Some(lead) = self.solved_for() else {
            return format!("0 = {}", spec.fmt_poly(&self.constant));
        };
        let c0 = &self.coeffs[&lead];
        let mut rest = String::new();
        for (i, c) in &self.coeffs {
            if *i == lead {
                continue;
            }
            let k = -(c.checked_div(c0).expect("nonzero coefficient"));
            push_term(&mut rest, &k, &name(*i));
        }
        if !self.constant.is_zero() {
            let inv = c0.inv().expect("nonzero coefficient");
            let k = spec.algebra.scale(&self.constant, &-inv);
            let text = spec.fmt_poly(&k);
            if rest.is_empty() {
                rest = text;
            } else if let Some(t) = text.strip_prefix('-') {
                let _ = write!(rest, " - {}", t.trim_start());
            } else if k.len() > 1 {
                let _ = write!(rest, " + ({text})");
            } else {
                let _ = write!(rest, " + {text}");
            }
        }
        if rest.is_empty() {
            rest.push('0');
        }
        format!("{} = {}", name(lead), rest)
    }
}

fn push_term(out: &mut String, k: &Scalar, name: &str) {
    let neg = k.as_rational().is_some_and(|r| r.is_negative());
    let mag = if neg { -k.clone() } else { k.clone() };
    let body = if mag.is_one() {
        name.to_string()
    } else if mag.is_constant() {
        format!("{mag}*{name}")
    } else {
        format!("({mag})*{name}")
    };
    match (out.is_empty(), neg) {
        (true, false) => out.push_str(&body),
        (true, true) => {
            out.push('-');
            out.push_str(&body)
        }
        (false, false) => {
            let _ = write!(out, " + {body}");
        }
        (false, true) => {
            let _ = write!(out, " - {body}");
        }
    }
}

/// Torsion-free conditions on scalar connection coefficients, grouped by
/// the kind of 2-form basis word they come from.
#[derive(Clone, Debug, Default)]
pub struct TorsionConditions {
    pub biangle: Vec<LinearEq>,
    pub triangle: Vec<LinearEq>,
    pub quadrangle: Vec<LinearEq>,
    /// for direction sets without a group structure
    pub unclassified: Vec<LinearEq>,
}

#[derive(Serialize)]
struct ConditionsDoc {
    biangle: Vec<String>,
    triangle: Vec<String>,
    quadrangle: Vec<String>,
    unclassified: Vec<String>,
}

impl TorsionConditions {
    pub fn all(&self) -> impl Iterator<Item = &LinearEq> {
        self.biangle
            .iter()
            .chain(&self.triangle)
            .chain(&self.quadrangle)
            .chain(&self.unclassified)
    }

    pub fn is_consistent(&self) -> bool {
        !self.all().any(LinearEq::is_inconsistent)
    }

    /// Whether a connection with these coefficients satisfies every equation.
    pub fn satisfied_by(&self, spec: &CalculusSpec, conn: &Connection) -> bool {
        self.all().all(|e| e.residue(spec, conn).is_zero())
    }

    pub fn to_text(&self, spec: &CalculusSpec) -> String {
        let mut out = String::new();
        for (name, eqs) in [
            ("biangle", &self.biangle),
            ("triangle", &self.triangle),
            ("quadrangle", &self.quadrangle),
            ("unclassified", &self.unclassified),
        ] {
            if eqs.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{name}:");
            for e in eqs {
                let _ = writeln!(out, "  {}", e.fmt(spec));
            }
        }
        if out.is_empty() {
            out.push_str("no conditions\n");
        }
        out
    }

    pub fn to_json(&self, spec: &CalculusSpec) -> serde_json::Value {
        let f = |v: &Vec<LinearEq>| v.iter().map(|e| e.fmt(spec)).collect();
        serde_json::to_value(ConditionsDoc {
            biangle: f(&self.biangle),
            triangle: f(&self.triangle),
            quadrangle: f(&self.quadrangle),
            unclassified: f(&self.unclassified),
        })
        .expect("serializes")
    }
}

impl Geometry {
    /// `Θ(α) = dα − π∇α`.
    pub fn torsion(&self, conn: &Connection, alpha: &Form) -> Result<Form> {
        let nab = self.nabla(conn, alpha)?;
        let calc = &self.calc;
        Ok(calc.reduce(&calc.d(alpha)?.sub(&self.project(&nab)?)))
    }

    pub fn is_torsion_free(&self, conn: &Connection) -> Result<bool> {
        for s in 0..self.n() {
            if !self.torsion(conn, &Form::theta(s))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Linear conditions on constant `V^{s'}_{s,s''}` for `Θ = 0`. Torsion is
/// left linear, so it suffices to impose `Θ(θ^s) = 0`, which reads
/// `Θ₀(θ^s) + Σ V^s_{s',s''} θ^{s'}θ^{s''} = 0` with `Θ₀` the torsion of
/// the zero connection.
pub fn torsion_free_conditions(geo: &Geometry) -> Result<TorsionConditions> {
    let calc = &geo.calc;
    if !calc.spec.is_inner() {
        return Err(Error::NotInner("torsion conditions need an inner calculus".into()));
    }
    if !calc.has_two_forms() {
        return Err(Error::Unsupported("torsion needs 2-forms".into()));
    }
    let n = geo.n();
    let kept = calc.basis(2)?;
    let zero = Connection::zero();
    let reduced: Vec<Vec<Form>> = (0..n)
        .map(|a| (0..n).map(|b| calc.reduce(&Form::word(TWord::pair(a, b)))).collect())
        .collect();
    let mut out = TorsionConditions::default();
    for s in 0..n {
        let theta0 = geo.torsion(&zero, &Form::theta(s))?;
        for k in &kept {
            let mut coeffs = BTreeMap::new();
            for a in 0..n {
                for b in 0..n {
                    let c = reduced[a][b].coeff(k);
                    if c.is_zero() {
                        continue;
                    }
                    let c = c
                        .as_scalar()
                        .ok_or_else(|| Error::internal("2-form relations have scalar coefficients"))?;
                    coeffs.insert((s, a, b), c);
                }
            }
            let eq = LinearEq {
                coeffs,
                constant: theta0.coeff(k),
                pair: k.clone(),
            };
            if eq.is_trivial() {
                continue;
            }
            let mut d = k.dirs();
            let (a, b) = (d.next().expect("pair"), d.next().expect("pair"));
            match calc.spec.set.classify(a, b) {
                Some(PairClass::Biangle) => out.biangle.push(eq),
                Some(PairClass::Triangle(_)) => out.triangle.push(eq),
                Some(PairClass::Quadrangle(_)) => out.quadrangle.push(eq),
                None => out.unclassified.push(eq),
            }
        }
    }
    Ok(out)
}
