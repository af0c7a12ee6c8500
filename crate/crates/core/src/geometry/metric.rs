use std::fmt::Write as _;

use serde::Serialize;

use super::connection::Connection;
use super::tensor::TensorWord;
use super::torsion::torsion_free_conditions;
use super::Geometry;
use crate::algebra::NCPoly;
use crate::calculus::{Form, TWord};
use crate::error::{Error, Result};
use crate::par;
use crate::report::Report;
use crate::scalar::Scalar;

/// `g = Σ g[s][s'] θ^s ⊗_L θ^{s'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    pub g: Vec<Vec<NCPoly>>,
    pub symmetric: bool,
}

impl Metric {
    pub fn new(g: Vec<Vec<NCPoly>>, symmetric: bool) -> Result<Self> {
        let n = g.len();
        if g.iter().any(|row| row.len() != n) {
            return Err(Error::input("metric components must form a square table"));
        }
        if symmetric {
            for a in 0..n {
                for b in 0..a {
                    if g[a][b] != g[b][a] {
                        return Err(Error::input(format!(
                            "metric declared symmetric but g[{a},{b}] differs from g[{b},{a}]"
                        )));
                    }
                }
            }
        }
        Ok(Metric { g, symmetric })
    }

    pub fn diagonal(entries: Vec<NCPoly>) -> Self {
        let n = entries.len();
        let mut g = vec![vec![NCPoly::zero(); n]; n];
        for (i, e) in entries.into_iter().enumerate() {
            g[i][i] = e;
        }
        Metric { g, symmetric: true }
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn as_tensor(&self) -> TensorWord {
        let mut f = Form::zero();
        for (a, row) in self.g.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                f = f.add(&Form::term(TWord::pair(a, b), c.clone()));
            }
        }
        TensorWord(f)
    }
}

/// Components of `g` on which every `φ_s` must act by the same factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingClass {
    /// `φ_s(g_{ab}) = factors[s] · g_{ab}`
    pub factors: Vec<Scalar>,
    pub components: Vec<(usize, usize)>,
}

impl ScalingClass {
    pub fn label(&self) -> String {
        let first = &self.factors[0];
        if self.factors.iter().all(|f| f == first) {
            if first.is_one() {
                "fixed".into()
            } else {
                first.to_string()
            }
        } else {
            let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(", "))
        }
    }
}

fn check_size(geo: &Geometry, g: &Metric) -> Result<()> {
    if g.n() != geo.n() {
        return Err(Error::input(format!(
            "metric has {} rows for {} directions",
            g.n(),
            geo.n()
        )));
    }
    Ok(())
}

impl Geometry {
    /// Diagonal scalar θ-images `φ_s(θ^a) = κ_{s,a} θ^a`, if that is their form.
    pub fn diagonal_scalings(&self) -> Result<Option<Vec<Vec<Scalar>>>> {
        let imgs = self.images()?;
        let mut out = Vec::new();
        for (s, row) in imgs.iter().enumerate() {
            let mut ks = Vec::new();
            for (a, img) in row.iter().enumerate() {
                let c = img.coeff(&TWord::single(a));
                let Some(k) = c.as_scalar() else {
                    return Ok(None);
                };
                if img.len() != 1 || k.is_zero() {
                    return Ok(None);
                }
                ks.push(k);
            }
            debug_assert_eq!(s, out.len());
            out.push(ks);
        }
        Ok(Some(out))
    }

    /// Groups metric components by the factor `(κ_{s,a} κ_{s,b})⁻¹` that an
    /// invariant metric requires of `φ_s(g_{ab})`.
    pub fn scaling_classes(&self) -> Result<Option<Vec<ScalingClass>>> {
        let Some(k) = self.diagonal_scalings()? else {
            return Ok(None);
        };
        let n = self.n();
        let mut classes: Vec<ScalingClass> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let factors = k
                    .iter()
                    .map(|ks| (&ks[a] * &ks[b]).inv())
                    .collect::<Result<Vec<_>>>()?;
                match classes.iter_mut().find(|c| c.factors == factors) {
                    Some(c) => c.components.push((a, b)),
                    None => classes.push(ScalingClass {
                        factors,
                        components: vec![(a, b)],
                    }),
                }
            }
        }
        Ok(Some(classes))
    }
}

/// Checks `φ_s(g) = g` on the tensor over the algebra, and where the
/// θ-images are diagonal scalars also component by component.
pub fn metric_invariance(geo: &Geometry, g: &Metric) -> Result<Report> {
    check_size(geo, g)?;
    let spec = &geo.calc.spec;
    let p = &spec.algebra;
    let mut rep = Report::new("metric invariance");
    let ga = geo.to_tensor_a(&g.as_tensor())?;
    let mut tensor_ok = Vec::new();
    for s in 0..geo.n() {
        let img = geo.phi_tensor(s, &ga)?;
        let diff = img.sub(&ga);
        let ok = diff.is_zero();
        tensor_ok.push(ok);
        rep.check(
            format!("phi_{}(g) = g", spec.label(s)),
            ok,
            if ok { String::new() } else { geo.calc.fmt(&diff) },
        );
    }
    if let Some(classes) = geo.scaling_classes()? {
        let mut comp_ok = vec![true; geo.n()];
        for class in &classes {
            for &(a, b) in &class.components {
                let gab = &g.g[a][b];
                for (s, c) in class.factors.iter().enumerate() {
                    let res = spec.phi(s, gab).sub(&p.scale(gab, c));
                    if !res.is_zero() {
                        comp_ok[s] = false;
                        rep.check(
                            format!(
                                "phi_{}(g[{},{}]) = {} g[{},{}]",
                                spec.label(s),
                                spec.label(a),
                                spec.label(b),
                                c,
                                spec.label(a),
                                spec.label(b)
                            ),
                            false,
                            spec.fmt_poly(&res),
                        );
                    }
                }
            }
            let comps: Vec<String> = class
                .components
                .iter()
                .map(|&(a, b)| format!("g[{},{}]", spec.label(a), spec.label(b)))
                .collect();
            rep.note(format!("class {}: {}", class.label(), comps.join(" ")));
        }
        rep.check(
            "component conditions agree with the tensor check",
            comp_ok == tensor_ok,
            "",
        );
    }
    Ok(rep)
}

fn compat_residue(geo: &Geometry, conn: &Connection, g: &Metric, s: usize, s1: usize, s2: usize) -> NCPoly {
    let spec = &geo.calc.spec;
    let p = &spec.algebra;
    let n = geo.n();
    let mut rhs = NCPoly::zero();
    for a in 0..n {
        let va = conn.get((a, s, s1));
        if va.is_zero() {
            continue;
        }
        for b in 0..n {
            let vb = conn.get((b, s, s2));
            if vb.is_zero() || g.g[a][b].is_zero() {
                continue;
            }
            rhs = rhs.add(&p.mul_all([&g.g[a][b], &va, &vb]));
        }
    }
    spec.phi(s, &g.g[s1][s2]).sub(&rhs)
}

/// Component form of `𝒱_s(g) = g` for one direction.
fn compat_direction(geo: &Geometry, conn: &Connection, g: &Metric, s: usize) -> Vec<(usize, usize, NCPoly)> {
    let n = geo.n();
    let mut bad = Vec::new();
    for s1 in 0..n {
        for s2 in 0..n {
            let r = compat_residue(geo, conn, g, s, s1, s2);
            if !r.is_zero() {
                bad.push((s1, s2, r));
            }
        }
    }
    bad
}

impl Geometry {
    /// `𝒱_s(g)` over the algebra, via `𝒱_s(α ⊗_L β) = 𝒱_s(α) ⊗_L 𝒱_s(β)`.
    pub fn transport_metric(&self, conn: &Connection, s: usize, g: &Metric) -> Result<Form> {
        let spec = &self.calc.spec;
        let n = self.n();
        let mut out = Form::zero();
        let vt: Vec<Form> = (0..n)
            .map(|a| self.transport(conn, s, &Form::theta(a)))
            .collect::<Result<_>>()?;
        for a in 0..n {
            for b in 0..n {
                if g.g[a][b].is_zero() {
                    continue;
                }
                let t = self.tensor_l(&vt[a], &vt[b])?;
                out = out.add(&t.left_mul(&spec.algebra, &spec.phi_inv(s, &g.g[a][b])));
            }
        }
        Ok(out)
    }
}

/// `∇g = 0`, checked on components and, where θ-images are known, through
/// `𝒱_s(g) = g` on tensors over the algebra. The two must agree.
pub fn metric_compatibility(geo: &Geometry, conn: &Connection, g: &Metric) -> Result<Report> {
    check_size(geo, g)?;
    let spec = &geo.calc.spec;
    let mut rep = Report::new("metric compatibility");
    let ga = match geo.images() {
        Ok(_) => Some(geo.to_tensor_a(&g.as_tensor())?),
        Err(_) => {
            rep.note("θ-images unknown: only the component equations are checked");
            None
        }
    };
    for s in 0..geo.n() {
        let bad = compat_direction(geo, conn, g, s);
        let detail: Vec<String> = bad
            .iter()
            .map(|&(a, b, ref r)| format!("[{},{}]: {}", spec.label(a), spec.label(b), spec.fmt_poly(r)))
            .collect();
        rep.check(
            format!("components, s = {}", spec.label(s)),
            bad.is_empty(),
            detail.join("; "),
        );
        if let Some(ga) = &ga {
            let diff = geo.transport_metric(conn, s, g)?.sub(ga);
            rep.check(
                format!("V_{}(g) = g", spec.label(s)),
                diff.is_zero(),
                if diff.is_zero() { String::new() } else { geo.calc.fmt(&diff) },
            );
            rep.check(
                format!("paths agree, s = {}", spec.label(s)),
                diff.is_zero() == bad.is_empty(),
                "",
            );
        }
    }
    Ok(rep)
}

/// Torsion-free and compatible with `g`. Says nothing about uniqueness.
pub fn levi_civita_check(geo: &Geometry, conn: &Connection, g: &Metric) -> Result<Report> {
    let spec = &geo.calc.spec;
    let mut rep = Report::new("levi-civita");
    for s in 0..geo.n() {
        let t = geo.torsion(conn, &Form::theta(s))?;
        rep.check_zero(
            format!("torsion of th_{}", spec.label(s)),
            (!t.is_zero()).then(|| geo.calc.fmt(&t)),
        );
    }
    rep.extend(metric_compatibility(geo, conn, g)?);
    Ok(rep)
}

/// Result of an exhaustive scan over a finite grid of scalar values.
#[derive(Clone, Debug)]
pub struct GridSearch {
    pub grid: Vec<Scalar>,
    pub checked: usize,
    /// solutions restricted to one direction, when the conditions decouple
    pub per_direction: Vec<Vec<Connection>>,
    pub solutions: Vec<Connection>,
}

#[derive(Serialize)]
struct GridDoc {
    bounded: bool,
    grid: Vec<String>,
    checked: usize,
    per_direction: Vec<Vec<Vec<String>>>,
    solutions: Vec<Vec<String>>,
}

fn fmt_conn(geo: &Geometry, c: &Connection) -> Vec<String> {
    let spec = &geo.calc.spec;
    c.v.iter()
        .map(|(&(a, s, b), v)| {
            format!(
                "V[{},{},{}] = {}",
                spec.label(a),
                spec.label(s),
                spec.label(b),
                spec.fmt_poly(v)
            )
        })
        .collect()
}

impl GridSearch {
    pub fn found(&self) -> bool {
        !self.solutions.is_empty() || (!self.per_direction.is_empty() && self.per_direction.iter().all(|v| !v.is_empty()))
    }

    pub fn to_text(&self, geo: &Geometry) -> String {
        let mut out = String::new();
        let grid: Vec<String> = self.grid.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "bounded search over {{{}}}: {} candidates checked",
            grid.join(", "),
            self.checked
        );
        if !self.found() {
            out.push_str("no candidate found at this bound\n");
            return out;
        }
        let spec = &geo.calc.spec;
        for (s, sols) in self.per_direction.iter().enumerate() {
            let _ = writeln!(out, "direction {}: {} solutions", spec.label(s), sols.len());
            for c in sols {
                let _ = writeln!(out, "  {}", fmt_conn(geo, c).join(", "));
            }
        }
        for c in &self.solutions {
            let _ = writeln!(out, "solution: {}", fmt_conn(geo, c).join(", "));
        }
        out
    }

    pub fn to_json(&self, geo: &Geometry) -> serde_json::Value {
        serde_json::to_value(GridDoc {
            bounded: true,
            grid: self.grid.iter().map(ToString::to_string).collect(),
            checked: self.checked,
            per_direction: self
                .per_direction
                .iter()
                .map(|v| v.iter().map(|c| fmt_conn(geo, c)).collect())
                .collect(),
            solutions: self.solutions.iter().map(|c| fmt_conn(geo, c)).collect(),
        })
        .expect("serializes")
    }
}

fn decode(mut k: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = k % base;
        k /= base;
    }
    digits
}

/// All scalar `V_s` with entries in `grid` compatible with `g`, direction by
/// direction; compatibility for `s` involves only `V^·_{s,·}`.
pub fn compatibility_grid_search(geo: &Geometry, g: &Metric, grid: &[Scalar]) -> Result<GridSearch> {
    check_size(geo, g)?;
    let n = geo.n();
    let m = n * n;
    let total = grid
        .len()
        .checked_pow(m as u32)
        .filter(|t| *t <= 1 << 22)
        .ok_or_else(|| Error::input("grid search too large"))?;
    let p = &geo.calc.spec.algebra;
    let mut per_direction = Vec::new();
    for s in 0..n {
        let found: Vec<Option<Connection>> = par::map_range(total, |k| {
            let digits = decode(k, grid.len(), m);
            let conn = Connection::from_fn(n, |(a, s2, b)| {
                if s2 == s {
                    p.scalar(grid[digits[a * n + b]].clone())
                } else {
                    NCPoly::zero()
                }
            });
            compat_direction(geo, &conn, g, s).is_empty().then_some(conn)
        });
        per_direction.push(found.into_iter().flatten().collect());
    }
    Ok(GridSearch {
        grid: grid.to_vec(),
        checked: total * n,
        per_direction,
        solutions: Vec::new(),
    })
}

/// Scalar connections with entries in `grid` that are torsion-free and
/// compatible with `g`. The linear torsion conditions prune candidates before
/// the full check.
pub fn levi_civita_search(geo: &Geometry, g: &Metric, grid: &[Scalar]) -> Result<GridSearch> {
    check_size(geo, g)?;
    let n = geo.n();
    let m = n * n * n;
    let total = grid
        .len()
        .checked_pow(m as u32)
        .filter(|t| *t <= 1 << 22)
        .ok_or_else(|| Error::input("grid search too large"))?;
    let conds = torsion_free_conditions(geo)?;
    let spec = &geo.calc.spec;
    let p = &spec.algebra;
    let keys: Vec<(usize, usize, usize)> = (0..m).map(|i| (i / (n * n), (i / n) % n, i % n)).collect();
    let found: Vec<Option<Connection>> = par::map_range(total, |k| {
        let digits = decode(k, grid.len(), m);
        let mut conn = Connection::zero();
        for (i, key) in keys.iter().enumerate() {
            conn.set(*key, p.scalar(grid[digits[i]].clone()));
        }
        if !conds.satisfied_by(spec, &conn) {
            return None;
        }
        let ok = (0..n).all(|s| compat_direction(geo, &conn, g, s).is_empty())
            && geo.is_torsion_free(&conn).unwrap_or(false);
        ok.then_some(conn)
    });
    Ok(GridSearch {
        grid: grid.to_vec(),
        checked: total,
        per_direction: Vec::new(),
        solutions: found.into_iter().flatten().collect(),
    })
}
