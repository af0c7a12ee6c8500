//! Text formats: calculus files (TOML) and the tabular connection and
//! metric blocks.
//!
//! A calculus file:
//!
//! ```toml
//! [generators]
//! names = ["x", "y"]
//! invertible = ["y"]
//!
//! [params]
//! relation = { param = "q", poly = "q^2 + q + 1" }
//! side_conditions = ["p*q != 1"]
//!
//! [relations]
//! rules = [["x*y", "q*y*x"]]
//!
//! [directions]
//! labels = ["1", "2"]
//! group = { abelian = [0, 0] }
//! elements = { "1" = [1, 0], "2" = [0, 1] }
//!
//! [automorphisms."1"]
//! x = "q*x"
//!
//! [inverses."1"]
//! x = "q^-1*x"
//!
//! [weights]
//! "1" = "1"
//!
//! [two_forms]
//! kind = "group_derived"
//! ```
//!
//! `[twists]` gives `λ_s` for twisted inner directions and `[outer.<label>]`
//! the values of an outer derivation on the generators. A missing
//! automorphism is the identity. `two_forms.kind` is `first_order`,
//! `group_derived` or `explicit` (with `relations`, `delta`, `zeta`).
//! `dtheta` may be given with the last two.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraMorphism, NCPoly, Presentation, PresentationBuilder};
use crate::calculus::{
    Calculus, CalculusSpec, DirKind, DirectionDef, DirectionSet, Form, Group, TwoFormStructure,
};
use crate::error::{Error, Result};
use crate::geometry::{Connection, Metric, VIndex};

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsDoc {
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invertible: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamRelationDoc {
    pub param: String,
    pub poly: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<ParamRelationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub side_conditions: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RelationsDoc {
    #[serde(default)]
    pub rules: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum GroupDoc {
    Abelian(Vec<u32>),
    Permutation(usize),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DirectionsDoc {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum TwoFormKind {
    FirstOrder,
    GroupDerived,
    Explicit,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TwoFormsDoc {
    pub kind: TwoFormKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dtheta: BTreeMap<String, String>,
}

type Table = BTreeMap<String, BTreeMap<String, String>>;

/// Serde image of a calculus file. Presentation-only files stop after
/// `[relations]`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CalculusDoc {
    pub generators: GeneratorsDoc,
    #[serde(default)]
    pub params: ParamsDoc,
    #[serde(default)]
    pub relations: RelationsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<DirectionsDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub automorphisms: Table,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inverses: Table,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twists: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub outer: Table,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_forms: Option<TwoFormsDoc>,
    /// `φ_s(θ^{s'})` for each `s`, in label order
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub images: BTreeMap<String, Vec<String>>,
}

/// A calculus read from a file, with its θ-images when given.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub calc: Arc<Calculus>,
    pub images: Option<Vec<Vec<Form>>>,
}

fn toml_err(e: impl std::fmt::Display) -> Error {
    Error::input(format!("calculus file: {e}"))
}

pub fn parse_doc(text: &str) -> Result<CalculusDoc> {
    toml::from_str(text).map_err(toml_err)
}

pub fn presentation_from_doc(doc: &CalculusDoc) -> Result<Presentation> {
    let mut b = PresentationBuilder::new();
    for name in &doc.generators.names {
        b = b.generator(name, doc.generators.invertible.contains(name));
    }
    for name in &doc.generators.invertible {
        if !doc.generators.names.contains(name) {
            return Err(Error::UnknownSymbol(name.clone()));
        }
    }
    for [lhs, rhs] in &doc.relations.rules {
        b = b.relation(lhs, rhs);
    }
    if let Some(r) = &doc.params.relation {
        b = b.param_relation(&r.param, &r.poly);
    }
    b.build()
}

fn morphism(p: &Arc<Presentation>, images: Option<&BTreeMap<String, String>>) -> Result<AlgebraMorphism> {
    let pairs: Vec<(&str, &str)> = images
        .into_iter()
        .flatten()
        .map(|(g, t)| (g.as_str(), t.as_str()))
        .collect();
    AlgebraMorphism::from_texts(p.clone(), p.clone(), &pairs)
}

fn group_of(doc: &GroupDoc) -> Group {
    match doc {
        GroupDoc::Abelian(m) => Group::Abelian(m.clone()),
        GroupDoc::Permutation(n) => Group::Permutation(*n),
    }
}

fn per_label<'a>(map: &'a BTreeMap<String, String>, labels: &[String], what: &str) -> Result<Vec<&'a str>> {
    for k in map.keys() {
        if !labels.contains(k) {
            return Err(Error::input(format!("{what} for unknown direction `{k}`")));
        }
    }
    labels
        .iter()
        .map(|l| {
            map.get(l)
                .map(String::as_str)
                .ok_or_else(|| Error::input(format!("{what} missing for direction `{l}`")))
        })
        .collect()
}

pub fn spec_from_doc(doc: &CalculusDoc) -> Result<Arc<CalculusSpec>> {
    let p = Arc::new(presentation_from_doc(doc)?);
    let dirs = doc
        .directions
        .as_ref()
        .ok_or_else(|| Error::input("calculus file needs a [directions] section"))?;
    let mut defs = Vec::new();
    for label in &dirs.labels {
        let fwd = morphism(&p, doc.automorphisms.get(label))?;
        let back = morphism(&p, doc.inverses.get(label))?;
        if doc.automorphisms.contains_key(label) && !doc.inverses.contains_key(label) {
            return Err(Error::input(format!("automorphism `{label}` needs [inverses.\"{label}\"]")));
        }
        let phi = fwd.with_inverse(back)?;
        let kinds = [
            doc.weights.contains_key(label),
            doc.twists.contains_key(label),
            doc.outer.contains_key(label),
        ];
        if kinds.iter().filter(|k| **k).count() != 1 {
            return Err(Error::input(format!(
                "direction `{label}` needs exactly one of a weight, a twist or an outer derivation"
            )));
        }
        let def = if let Some(t) = doc.weights.get(label) {
            let t = p
                .parse(t)?
                .as_scalar()
                .ok_or_else(|| Error::input(format!("weight of `{label}` must be a scalar")))?;
            DirectionDef::weighted(label, phi, t)?
        } else if let Some(l) = doc.twists.get(label) {
            DirectionDef::twisted(label, phi, p.parse(l)?)
        } else {
            let vals = &doc.outer[label];
            for g in vals.keys() {
                if p.gen_index(g).is_none() {
                    return Err(Error::UnknownSymbol(g.clone()));
                }
            }
            let gens = p
                .generators()
                .iter()
                .map(|g| vals.get(&g.name).map_or(Ok(NCPoly::zero()), |t| p.parse(t)))
                .collect::<Result<_>>()?;
            DirectionDef::outer(label, phi, gens)
        };
        defs.push(def);
    }
    for section in [&doc.automorphisms, &doc.inverses, &doc.outer] {
        if let Some(k) = section.keys().find(|k| !dirs.labels.contains(k)) {
            return Err(Error::input(format!("entry for unknown direction `{k}`")));
        }
    }
    let set = match &dirs.group {
        None => {
            let labels: Vec<&str> = dirs.labels.iter().map(String::as_str).collect();
            DirectionSet::plain(&labels)
        }
        Some(g) => {
            let elems = dirs
                .labels
                .iter()
                .map(|l| {
                    dirs.elements
                        .get(l)
                        .cloned()
                        .map(|e| (l.clone(), e))
                        .ok_or_else(|| Error::input(format!("group element missing for `{l}`")))
                })
                .collect::<Result<_>>()?;
            DirectionSet::from_group(group_of(g), elems)?
        }
    };
    Ok(Arc::new(CalculusSpec::new(
        p,
        defs,
        set,
        doc.params.side_conditions.clone(),
    )?))
}

pub fn calculus_from_doc(doc: &CalculusDoc) -> Result<Loaded> {
    let spec = spec_from_doc(doc)?;
    let labels = &spec.set.labels;
    let raw = Calculus::first_order(spec.clone());
    let forms = |m: &BTreeMap<String, String>, what: &str| -> Result<Option<Vec<Form>>> {
        if m.is_empty() {
            return Ok(None);
        }
        per_label(m, labels, what)?
            .into_iter()
            .map(|t| raw.parse_form_raw(t))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    };
    let calc = match &doc.two_forms {
        None => raw.clone(),
        Some(tf) => {
            let dtheta = forms(&tf.dtheta, "dtheta")?;
            let ts = match tf.kind {
                TwoFormKind::FirstOrder => {
                    if !tf.relations.is_empty() || !tf.delta.is_empty() || tf.zeta.is_some() || dtheta.is_some() {
                        return Err(Error::input("a first-order calculus takes no 2-form data"));
                    }
                    None
                }
                TwoFormKind::GroupDerived => {
                    if !tf.relations.is_empty() || !tf.delta.is_empty() || tf.zeta.is_some() {
                        return Err(Error::input("group-derived 2-forms take only dtheta"));
                    }
                    Some(TwoFormStructure::group_derived(&spec)?)
                }
                TwoFormKind::Explicit => Some(TwoFormStructure {
                    relations: tf
                        .relations
                        .iter()
                        .map(|t| raw.parse_form_raw(t))
                        .collect::<Result<_>>()?,
                    delta: forms(&tf.delta, "delta")?,
                    zeta: tf.zeta.as_deref().map(|t| raw.parse_form_raw(t)).transpose()?,
                    dtheta: None,
                }),
            };
            match ts {
                None => raw.clone(),
                Some(mut ts) => {
                    if dtheta.is_some() {
                        ts.dtheta = dtheta;
                    }
                    Calculus::new(spec.clone(), ts)?
                }
            }
        }
    };
    let images = if doc.images.is_empty() {
        None
    } else {
        let mut rows = Vec::new();
        for l in labels {
            let row = doc
                .images
                .get(l)
                .ok_or_else(|| Error::input(format!("θ-images missing for `{l}`")))?;
            if row.len() != labels.len() {
                return Err(Error::input(format!("θ-images for `{l}` need {} entries", labels.len())));
            }
            rows.push(row.iter().map(|t| raw.parse_form_raw(t)).collect::<Result<Vec<_>>>()?);
        }
        Some(rows)
    };
    Ok(Loaded {
        calc: Arc::new(calc),
        images,
    })
}

pub fn load_calculus(text: &str) -> Result<Loaded> {
    calculus_from_doc(&parse_doc(text)?)
}

pub fn load_presentation(text: &str) -> Result<Presentation> {
    presentation_from_doc(&parse_doc(text)?)
}

fn gen_table(p: &Presentation, m: &AlgebraMorphism) -> BTreeMap<String, String> {
    p.generators()
        .iter()
        .zip(m.gen_images())
        .filter(|(g, img)| p.gen(&g.name).ok().as_ref() != Some(img))
        .map(|(g, img)| (g.name.clone(), p.fmt(&img)))
        .collect()
}

/// The file form of a calculus. Group-derived 2-form structures are written
/// out explicitly, which loads back to the same calculus.
pub fn calculus_to_doc(calc: &Calculus, images: Option<&Vec<Vec<Form>>>) -> CalculusDoc {
    let spec = &calc.spec;
    let p = &spec.algebra;
    let mut doc = CalculusDoc {
        generators: GeneratorsDoc {
            names: p.generators().iter().map(|g| g.name.clone()).collect(),
            invertible: p
                .generators()
                .iter()
                .filter(|g| g.invertible)
                .map(|g| g.name.clone())
                .collect(),
        },
        params: ParamsDoc {
            relation: p.param_relation().map(|r| ParamRelationDoc {
                param: r.var.name().to_string(),
                poly: r.minpoly().to_string(),
            }),
            side_conditions: spec.side_conditions.clone(),
        },
        relations: RelationsDoc {
            rules: p
                .relation_texts()
                .iter()
                .map(|(a, b)| [a.clone(), b.clone()])
                .collect(),
        },
        ..Default::default()
    };
    let mut dirs = DirectionsDoc {
        labels: spec.set.labels.clone(),
        ..Default::default()
    };
    if let Some((g, elems)) = &spec.set.group {
        dirs.group = Some(match g {
            Group::Abelian(m) => GroupDoc::Abelian(m.clone()),
            Group::Permutation(n) => GroupDoc::Permutation(*n),
        });
        dirs.elements = spec.set.labels.iter().cloned().zip(elems.iter().cloned()).collect();
    }
    doc.directions = Some(dirs);
    for d in &spec.dirs {
        let fwd = gen_table(p, &d.phi);
        if !fwd.is_empty() {
            doc.automorphisms.insert(d.label.clone(), fwd);
            doc.inverses.insert(d.label.clone(), gen_table(p, &d.phi_inv));
        }
        match &d.kind {
            DirKind::Inner(l) => match l.as_scalar() {
                Some(c) if c.inv().is_ok_and(|t| t == d.weight) => {
                    doc.weights.insert(d.label.clone(), d.weight.to_string());
                }
                _ => {
                    doc.twists.insert(d.label.clone(), p.fmt(l));
                }
            },
            DirKind::Outer(vals) => {
                let m = p
                    .generators()
                    .iter()
                    .zip(vals)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(g, v)| (g.name.clone(), p.fmt(v)))
                    .collect();
                doc.outer.insert(d.label.clone(), m);
            }
        }
    }
    let by_label = |v: &[Form]| -> BTreeMap<String, String> {
        spec.set
            .labels
            .iter()
            .cloned()
            .zip(v.iter().map(|f| calc.fmt(f)))
            .collect()
    };
    doc.two_forms = Some(match calc.ts.as_deref() {
        None => TwoFormsDoc {
            kind: TwoFormKind::FirstOrder,
            relations: vec![],
            delta: BTreeMap::new(),
            zeta: None,
            dtheta: BTreeMap::new(),
        },
        Some(ts) => TwoFormsDoc {
            kind: TwoFormKind::Explicit,
            relations: ts.relations.iter().map(|f| calc.fmt(f)).collect(),
            delta: ts.delta.as_deref().map(by_label).unwrap_or_default(),
            zeta: ts.zeta.as_ref().map(|f| calc.fmt(f)),
            dtheta: ts.dtheta.as_deref().map(by_label).unwrap_or_default(),
        },
    });
    if let Some(imgs) = images {
        doc.images = spec
            .set
            .labels
            .iter()
            .cloned()
            .zip(imgs.iter().map(|row| row.iter().map(|f| calc.fmt(f)).collect()))
            .collect();
    }
    doc
}

pub fn calculus_to_toml(calc: &Calculus, images: Option<&Vec<Vec<Form>>>) -> Result<String> {
    toml::to_string(&calculus_to_doc(calc, images)).map_err(|e| Error::internal(e.to_string()))
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Splits `name[a,b,...] = expr` into the bracketed labels and the expression.
fn indexed_line<'a>(line: &'a str, name: &str, arity: usize) -> Result<(Vec<&'a str>, &'a str)> {
    let bad = || Error::input(format!("expected `{name}[{}] = <expr>`, got `{line}`", vec!["..."; arity].join(",")));
    let rest = line.strip_prefix(name).ok_or_else(bad)?.trim_start();
    let rest = rest.strip_prefix('[').ok_or_else(bad)?;
    let (inside, rest) = rest.split_once(']').ok_or_else(bad)?;
    let rhs = rest.trim_start().strip_prefix('=').ok_or_else(bad)?.trim();
    let labels: Vec<&str> = inside.split(',').map(str::trim).collect();
    if labels.len() != arity || rhs.is_empty() {
        return Err(bad());
    }
    Ok((labels, rhs))
}

/// Reads lines `V[s',s,s''] = expr` (upper index first). Unlisted entries
/// are zero; `#` starts a comment.
pub fn parse_connection(spec: &CalculusSpec, text: &str) -> Result<Connection> {
    let mut conn = Connection::zero();
    let mut seen = BTreeMap::new();
    for raw in text.lines() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (l, rhs) = indexed_line(line, "V", 3)?;
        let key: VIndex = (spec.index(l[0])?, spec.index(l[1])?, spec.index(l[2])?);
        if seen.insert(key, ()).is_some() {
            return Err(Error::input(format!("duplicate entry `{line}`")));
        }
        conn.set(key, spec.algebra.parse(rhs)?);
    }
    Ok(conn)
}

/// Reads lines `g[s,s'] = expr`. Unlisted entries are zero. With
/// `symmetric`, an entry given once fills its transpose.
pub fn parse_metric(spec: &CalculusSpec, text: &str, symmetric: bool) -> Result<Metric> {
    let n = spec.n();
    let mut g: Vec<Vec<Option<NCPoly>>> = vec![vec![None; n]; n];
    for raw in text.lines() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (l, rhs) = indexed_line(line, "g", 2)?;
        let (a, b) = (spec.index(l[0])?, spec.index(l[1])?);
        if g[a][b].is_some() {
            return Err(Error::input(format!("duplicate entry `{line}`")));
        }
        g[a][b] = Some(spec.algebra.parse(rhs)?);
    }
    if symmetric {
        for a in 0..n {
            for b in 0..a {
                match (&g[a][b], &g[b][a]) {
                    (Some(x), None) => g[b][a] = Some(x.clone()),
                    (None, Some(y)) => g[a][b] = Some(y.clone()),
                    _ => {}
                }
            }
        }
    }
    let g = g
        .into_iter()
        .map(|row| row.into_iter().map(Option::unwrap_or_default).collect())
        .collect();
    Metric::new(g, symmetric)
}

pub fn connection_to_text(spec: &CalculusSpec, conn: &Connection) -> String {
    let mut out = String::new();
    for (&(a, s, b), v) in &conn.v {
        let _ = writeln!(
            out,
            "V[{},{},{}] = {}",
            spec.label(a),
            spec.label(s),
            spec.label(b),
            spec.fmt_poly(v)
        );
    }
    out
}

pub fn metric_to_text(spec: &CalculusSpec, g: &Metric) -> String {
    let mut out = String::new();
    for (a, row) in g.g.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if !v.is_zero() {
                let _ = writeln!(out, "g[{},{}] = {}", spec.label(a), spec.label(b), spec.fmt_poly(v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
