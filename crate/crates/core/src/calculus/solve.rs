use serde::Serialize;

use super::form::Form;
use super::spec::CalculusSpec;
use crate::algebra::NCPoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `θ^s = Σ_j coeffs[s][j] d(coords[j])`.
#[derive(Clone, Debug)]
pub struct ThetaSolution {
    pub coords: Vec<NCPoly>,
    pub coeffs: Vec<Vec<NCPoly>>,
    /// pivots met during elimination, in order
    pub pivots: Vec<NCPoly>,
    /// determinant of `e_s(coords[j])`, available when every pivot is a scalar
    pub det: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub enum ThetaSolve {
    Solved(ThetaSolution),
    /// No invertible pivot in `column`; the matrix `e_s(coords[j])` is returned.
    Singular {
        matrix: Vec<Vec<NCPoly>>,
        column: usize,
    },
}

#[derive(Serialize)]
struct SolvedDoc {
    theta: Vec<(String, String)>,
    det: Option<String>,
}

/// `E[j][s] = e_s(coords[j])`, so that `d coords[j] = Σ_s E[j][s] θ^s`.
pub fn coordinate_matrix(spec: &CalculusSpec, coords: &[NCPoly]) -> Vec<Vec<NCPoly>> {
    coords
        .iter()
        .map(|f| (0..spec.n()).map(|s| spec.e(s, f)).collect())
        .collect()
}

/// Expresses the basis 1-forms through differentials of the given
/// coordinates by Gauss-Jordan elimination with left row operations over the
/// algebra. Pivots must be units; scalar pivots are preferred.
pub fn solve_theta_in_differentials(spec: &CalculusSpec, coords: &[NCPoly]) -> Result<ThetaSolve> {
    let n = spec.n();
    if coords.len() != n {
        return Err(Error::input(format!(
            "{} coordinates given for {n} directions",
            coords.len()
        )));
    }
    let p = &spec.algebra;
    let matrix = coordinate_matrix(spec, coords);
    let mut a = matrix.clone();
    let mut inv: Vec<Vec<NCPoly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { NCPoly::one() } else { NCPoly::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut swaps = 0usize;
    for col in 0..n {
        let scalar_row = (col..n).find(|&r| a[r][col].as_scalar().is_some_and(|c| !c.is_zero()));
        let unit_row = || (col..n).find(|&r| p.unit_inverse(&a[r][col]).is_some());
        let Some(r) = scalar_row.or_else(unit_row) else {
            return Ok(ThetaSolve::Singular { matrix, column: col });
        };
        if r != col {
            a.swap(r, col);
            inv.swap(r, col);
            swaps += 1;
        }
        let piv = a[col][col].clone();
        let pinv = match piv.as_scalar() {
            Some(c) => p.scalar(c.inv()?),
            None => p.unit_inverse(&piv).expect("pivot is a unit"),
        };
        for j in 0..n {
            a[col][j] = p.mul(&pinv, &a[col][j]);
            inv[col][j] = p.mul(&pinv, &inv[col][j]);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let m = a[r][col].clone();
            for j in 0..n {
                let t = p.mul(&m, &a[col][j]);
                a[r][j] = a[r][j].sub(&t);
                let t = p.mul(&m, &inv[col][j]);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
        pivots.push(piv);
    }
    let det = pivots
        .iter()
        .map(NCPoly::as_scalar)
        .collect::<Option<Vec<_>>>()
        .map(|ps| {
            let prod = ps.iter().fold(Scalar::one(), |acc, c| &acc * c);
            if swaps % 2 == 1 {
                -prod
            } else {
                prod
            }
        });
    let sol = ThetaSolution {
        coords: coords.to_vec(),
        coeffs: inv,
        pivots,
        det,
    };
    for s in 0..n {
        if sol.theta_form(spec, s) != Form::theta(s) {
            return Err(Error::internal(format!(
                "substituting the solution for th_{} does not give the basis form",
                spec.label(s)
            )));
        }
    }
    Ok(ThetaSolve::Solved(sol))
}

impl ThetaSolution {
    /// `Σ_j coeffs[s][j] d(coords[j])` expanded in the θ-basis.
    pub fn theta_form(&self, spec: &CalculusSpec, s: usize) -> Form {
        let mut out = Form::zero();
        for (c, f) in self.coeffs[s].iter().zip(&self.coords) {
            out = out.add(&spec.differential(f).left_mul(&spec.algebra, c));
        }
        out
    }

    pub fn fmt_theta(&self, spec: &CalculusSpec, s: usize) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (c, f) in self.coeffs[s].iter().zip(&self.coords) {
            if c.is_zero() {
                continue;
            }
            let df = format!("d({})", spec.fmt_poly(f));
            let cs = spec.fmt_poly(c);
            parts.push(if *c == NCPoly::one() {
                df
            } else if c.len() > 1 {
                format!("({cs})*{df}")
            } else {
                format!("{cs}*{df}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    pub fn to_json(&self, spec: &CalculusSpec) -> serde_json::Value {
        let doc = SolvedDoc {
            theta: (0..spec.n())
                .map(|s| (format!("th_{}", spec.label(s)), self.fmt_theta(spec, s)))
                .collect(),
            det: self.det.as_ref().map(ToString::to_string),
        };
        serde_json::to_value(doc).expect("serializes")
    }
}
