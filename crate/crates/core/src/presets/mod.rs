//! Ready-made calculi with their printed formulas attached as fixtures.
//!
//! Every preset is rebuilt on load, so the automorphisms and 2-form
//! structure are verified each time; a failure there is a regression.

mod glpq;
mod lattice;
mod planes;
mod twisted;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraMorphism, NCPoly, Presentation};
use crate::calculus::{
    check_differentiability, solve_theta_in_differentials, Calculus, Form, ThetaSolve,
};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::par;
use crate::report::Report;

pub use glpq::{glpq_alpha, MaurerCartan};
pub use lattice::{shift_calculus, z3_quotient_report};
pub use planes::{quantum_plane, QuantumPlaneParams};

/// An expected identity attached to a preset.
#[derive(Clone, Debug, Serialize)]
pub enum FixtureKind {
    /// two form expressions are equal
    Form { lhs: String, rhs: String },
    /// two algebra expressions are equal
    Poly { lhs: String, rhs: String },
    Delta { dir: String, rhs: String },
    Zeta(String),
    Vartheta(String),
    /// the element is a constant of the calculus
    Constant(String),
    /// whether the 1-form commutes with the whole algebra
    Central { form: String, expected: bool },
    /// `θ^s = Σ_j coeffs[s][j] d(coords[j])` from the preset coordinates
    ThetaSolve { coeffs: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: String,
    pub kind: FixtureKind,
}

impl Fixture {
    pub fn form(lhs: &str, rhs: &str) -> Self {
        Fixture {
            name: format!("{lhs} = {rhs}"),
            kind: FixtureKind::Form {
                lhs: lhs.into(),
                rhs: rhs.into(),
            },
        }
    }

    pub fn poly(lhs: &str, rhs: &str) -> Self {
        Fixture {
            name: format!("{lhs} = {rhs}"),
            kind: FixtureKind::Poly {
                lhs: lhs.into(),
                rhs: rhs.into(),
            },
        }
    }

    pub fn delta(dir: &str, rhs: &str) -> Self {
        Fixture {
            name: format!("Delta(th_{dir}) = {rhs}"),
            kind: FixtureKind::Delta {
                dir: dir.into(),
                rhs: rhs.into(),
            },
        }
    }

    pub fn zeta(rhs: &str) -> Self {
        Fixture {
            name: format!("zeta = {rhs}"),
            kind: FixtureKind::Zeta(rhs.into()),
        }
    }

    pub fn vartheta(rhs: &str) -> Self {
        Fixture {
            name: format!("vartheta = {rhs}"),
            kind: FixtureKind::Vartheta(rhs.into()),
        }
    }

    pub fn constant(f: &str) -> Self {
        Fixture {
            name: format!("{f} is constant"),
            kind: FixtureKind::Constant(f.into()),
        }
    }

    pub fn central(form: &str, expected: bool) -> Self {
        Fixture {
            name: format!("{form} {} central", if expected { "is" } else { "is not" }),
            kind: FixtureKind::Central {
                form: form.into(),
                expected,
            },
        }
    }

    pub fn theta_solve(coeffs: &[&[&str]]) -> Self {
        Fixture {
            name: "theta in terms of coordinate differentials".into(),
            kind: FixtureKind::ThetaSolve {
                coeffs: coeffs
                    .iter()
                    .map(|row| row.iter().map(|s| s.to_string()).collect())
                    .collect(),
            },
        }
    }
}

/// A calculus together with what is known about it.
#[derive(Clone)]
pub struct Preset {
    pub id: &'static str,
    pub summary: &'static str,
    pub calc: Arc<Calculus>,
    /// `images[s][a] = φ_s(θ^a)`, where known
    pub images: Option<Vec<Vec<Form>>>,
    /// whether the first-order calculus is simple for generic parameters
    pub simple: bool,
    pub coords: Option<Vec<NCPoly>>,
    pub fixtures: Vec<Fixture>,
    /// preset-specific checks beyond fixtures
    pub extra: Option<fn(&Preset) -> Result<Report>>,
}

impl std::fmt::Debug for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Preset").field("id", &self.id).finish_non_exhaustive()
    }
}

/// Identifiers and one-line descriptions of every preset.
pub const CATALOG: &[(&str, &str)] = &[
    ("poly_shift_S12", "C[x] with shifts by 1 and 2"),
    ("poly_shift_sym", "C[x] with shifts by -1 and 1"),
    ("quantum_plane_a", "quantum plane, case a with alpha = beta = pq, gamma = 1"),
    ("quantum_plane_b", "quantum plane, case b with gamma = alpha, delta = 1"),
    ("quantum_plane_c", "quantum plane, case c with beta = gamma = 1"),
    ("quantum_torus", "quantum torus with generic scalings"),
    ("heisenberg", "Heisenberg algebra with shifts by a and b"),
    ("h_plane", "h-deformed plane with y invertible, generic r"),
    ("h_plane_r1", "h-deformed plane in the limit r = 1"),
    ("z3_root_of_unity", "Laurent algebra in x, y with a Z3 action by cube roots of unity"),
    ("group_lattice_z3", "functions on Z3 with S = {1, 2}"),
    ("group_lattice_s3", "functions on S3 with S the transpositions"),
    ("twisted_heisenberg_2", "Heisenberg algebra with two inner derivations"),
    ("twisted_heisenberg_3", "Heisenberg algebra with three inner derivations"),
    ("glpq2", "bicovariant first-order calculus on GL_{p,q}(2)"),
    ("tensor_qplane", "lattice calculus on C[u,v] tensored with a quantum plane"),
    ("tensor_hplane", "calculus on C[u,v] tensored with an h-plane"),
];

pub fn ids() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|(id, _)| *id)
}

pub fn load(id: &str) -> Result<Preset> {
    match id {
        "poly_shift_S12" => lattice::poly_shift_s12(),
        "poly_shift_sym" => lattice::poly_shift_sym(),
        "quantum_plane_a" => planes::quantum_plane_a(),
        "quantum_plane_b" => planes::quantum_plane_b(),
        "quantum_plane_c" => planes::quantum_plane_c(),
        "quantum_torus" => planes::quantum_torus(),
        "heisenberg" => planes::heisenberg(),
        "h_plane" => planes::h_plane(),
        "h_plane_r1" => planes::h_plane_r1(),
        "z3_root_of_unity" => lattice::z3_root_of_unity(),
        "group_lattice_z3" => lattice::group_lattice_z3(),
        "group_lattice_s3" => lattice::group_lattice_s3(),
        "twisted_heisenberg_2" => twisted::twisted_heisenberg(2),
        "twisted_heisenberg_3" => twisted::twisted_heisenberg(3),
        "glpq2" => glpq::glpq2(),
        "tensor_qplane" => planes::tensor_qplane(),
        "tensor_hplane" => planes::tensor_hplane(),
        _ => Err(Error::UnknownPreset(id.to_string())),
    }
}

pub(crate) fn auto(
    p: &Arc<Presentation>,
    fwd: &[(&str, &str)],
    back: &[(&str, &str)],
) -> Result<AlgebraMorphism> {
    AlgebraMorphism::from_texts(p.clone(), p.clone(), fwd)?
        .with_inverse(AlgebraMorphism::from_texts(p.clone(), p.clone(), back)?)
}

pub(crate) fn identity_images(n: usize) -> Vec<Vec<Form>> {
    vec![(0..n).map(Form::theta).collect(); n]
}

impl Preset {
    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.calc.clone(), self.images.clone())
    }

    pub fn side_conditions(&self) -> &[String] {
        &self.calc.spec.side_conditions
    }

    fn run_fixture(&self, fx: &Fixture) -> std::result::Result<(), String> {
        let calc = &self.calc;
        let spec = &calc.spec;
        let p = &spec.algebra;
        let err = |e: Error| e.to_string();
        let cmp = |lhs: Form, rhs: Form| {
            let (l, r) = (calc.reduce(&lhs), calc.reduce(&rhs));
            if l == r {
                Ok(())
            } else {
                Err(format!("difference {}", calc.fmt(&l.sub(&r))))
            }
        };
        match &fx.kind {
            FixtureKind::Form { lhs, rhs } => {
                cmp(calc.parse_form(lhs).map_err(err)?, calc.parse_form(rhs).map_err(err)?)
            }
            FixtureKind::Poly { lhs, rhs } => {
                let d = p.parse(lhs).map_err(err)?.sub(&p.parse(rhs).map_err(err)?);
                if d.is_zero() {
                    Ok(())
                } else {
                    Err(format!("difference {}", p.fmt(&d)))
                }
            }
            FixtureKind::Delta { dir, rhs } => {
                let s = spec.index(dir).map_err(err)?;
                cmp(
                    calc.delta(&Form::theta(s)).map_err(err)?,
                    calc.parse_form(rhs).map_err(err)?,
                )
            }
            FixtureKind::Zeta(rhs) => {
                cmp(calc.zeta().map_err(err)?, calc.parse_form(rhs).map_err(err)?)
            }
            FixtureKind::Vartheta(rhs) => {
                cmp(calc.vartheta().map_err(err)?, calc.parse_form(rhs).map_err(err)?)
            }
            FixtureKind::Constant(f) => {
                let g = p.parse(f).map_err(err)?;
                let dg = spec.differential(&g);
                if dg.is_zero() {
                    Ok(())
                } else {
                    Err(format!("d({f}) = {}", calc.fmt(&dg)))
                }
            }
            FixtureKind::Central { form, expected } => {
                let a = calc.parse_form(form).map_err(err)?;
                let (central, witness) = spec.is_central_one_form(&a);
                if central == *expected {
                    Ok(())
                } else {
                    Err(match witness {
                        Some((s, g)) => format!("fails against {g} along th_{s}"),
                        None => "commutes with every generator".into(),
                    })
                }
            }
            FixtureKind::ThetaSolve { coeffs } => {
                let coords = self
                    .coords
                    .as_ref()
                    .ok_or_else(|| "preset has no coordinates".to_string())?;
                let sol = match solve_theta_in_differentials(spec, coords).map_err(err)? {
                    ThetaSolve::Solved(s) => s,
                    ThetaSolve::Singular { column, .. } => {
                        return Err(format!("no invertible pivot in column {column}"))
                    }
                };
                for (s, row) in coeffs.iter().enumerate() {
                    for (j, text) in row.iter().enumerate() {
                        let want = p.parse(text).map_err(err)?;
                        if sol.coeffs[s][j] != want {
                            return Err(format!(
                                "th_{}: coefficient of d({}) is {}, expected {}",
                                spec.label(s),
                                p.fmt(&coords[j]),
                                p.fmt(&sol.coeffs[s][j]),
                                text
                            ));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluates every fixture.
    pub fn run_fixtures(&self) -> Report {
        let mut rep = Report::new(format!("{} fixtures", self.id));
        let results = par::map(&self.fixtures, |fx| self.run_fixture(fx));
        for (fx, r) in self.fixtures.iter().zip(results) {
            match r {
                Ok(()) => rep.check(fx.name.clone(), true, ""),
                Err(e) => rep.check(fx.name.clone(), false, e),
            }
        }
        for w in &self.calc.spec.warnings {
            rep.note(format!("warning: {w}"));
        }
        rep
    }

    /// Differentiability of every `φ_s` with the stored θ-images.
    pub fn differentiability(&self) -> Result<Report> {
        let imgs = self.images.as_ref().ok_or_else(|| {
            Error::Unsupported(format!("{}: images of the basis 1-forms are not known", self.id))
        })?;
        let spec = &self.calc.spec;
        let mut rep = Report::new(format!("{} differentiability", self.id));
        for s in 0..spec.n() {
            let mut r =
                check_differentiability(&self.calc, &spec.dirs[s].phi, &imgs[s], self.simple)?;
            r.title = format!("phi_{}", spec.label(s));
            rep.extend(r);
        }
        Ok(rep)
    }

    /// Fixtures plus preset-specific checks.
    pub fn run(&self) -> Result<Report> {
        let mut rep = self.run_fixtures();
        if let Some(extra) = self.extra {
            rep.extend(extra(self)?);
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests;
