use std::sync::Arc;

use super::{auto, Fixture, Preset};
use crate::algebra::{NCPoly, Presentation, PresentationBuilder};
use crate::calculus::{Calculus, CalculusSpec, DirectionDef, DirectionSet, Form};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;

/// `φ_s(a_{s'}) = α_{s,s'} a_{s'}` with `(a_s) = (a, b, c, d)` and `r = pq`.
pub fn glpq_alpha() -> [[&'static str; 4]; 4] {
    [
        ["r", "1", "r", "1"],
        ["r", "q", "p", "1"],
        ["r", "q", "p", "1"],
        ["r", "r", "1", "1"],
    ]
}

const LAMBDA: [&str; 4] = ["1", "a", "d", "1"];
const GENS: [&str; 4] = ["a", "b", "c", "d"];

fn with_r(t: &str) -> String {
    t.replace('r', "(p*q)")
}

fn glpq_algebra() -> Result<Arc<Presentation>> {
    Ok(Arc::new(
        PresentationBuilder::new()
            .generator("a", false)
            .generator("b", true)
            .generator("c", true)
            .generator("d", false)
            .q_commute("a", "b", "p^-1")
            .q_commute("a", "c", "q^-1")
            .q_commute("b", "c", "p/q")
            .q_commute("b", "d", "q^-1")
            .q_commute("c", "d", "p^-1")
            .relation("a*d", "d*a + (p - q^-1)*b*c")
            .build()?,
    ))
}

/// `θ̃^i f = Σ_j M_f[i][j] θ̃^j` on the generators.
const TABLE: [[[&str; 4]; 4]; 4] = [
    [
        ["r*a", "0", "(r - 1)*b", "0"],
        ["0", "q*a", "0", "p^-1*(r - 1)*b"],
        ["0", "0", "p*a", "0"],
        ["0", "0", "0", "a"],
    ],
    [
        ["b", "(r - 1)*a", "0", "r^-1*(r - 1)^2*b"],
        ["0", "q*b", "0", "0"],
        ["0", "0", "p*b", "q^-1*(r - 1)*a"],
        ["0", "0", "0", "r*b"],
    ],
    [
        ["r*c", "0", "(r - 1)*d", "0"],
        ["0", "q*c", "0", "p^-1*(r - 1)*d"],
        ["0", "0", "p*c", "0"],
        ["0", "0", "0", "c"],
    ],
    [
        ["d", "(r - 1)*c", "0", "r^-1*(r - 1)^2*d"],
        ["0", "q*d", "0", "0"],
        ["0", "0", "p*d", "q^-1*(r - 1)*c"],
        ["0", "0", "0", "r*d"],
    ],
];

/// `d a_s` in the `θ̃` basis, read off from `dT = T θ̃`.
const DIFFERENTIALS: [[&str; 4]; 4] = [
    ["a", "0", "b", "0"],
    ["0", "a", "0", "b"],
    ["c", "0", "d", "0"],
    ["0", "c", "0", "d"],
];

/// `θ^s` in the `θ̃` basis, with `b` and `c` invertible.
const THETAS: [[&str; 4]; 4] = [
    [
        "(r - 1)^-1*c^-1*b^-1*b*c",
        "-(r - 1)^-1*p^-1*c^-1*b^-1*a*c",
        "(r - 1)^-1*c^-1*b^-1*b*d",
        "-(r - 1)^-1*p^-1*c^-1*b^-1*a*d",
    ],
    ["0", "q*(r - 1)^-1*c^-1*b^-1*c", "0", "q*(r - 1)^-1*c^-1*b^-1*d"],
    [
        "0",
        "0",
        "-(p*(r - 1))^-1*c^-1*b^-1*b",
        "(p*(r - 1))^-1*r^-1*c^-1*b^-1*a",
    ],
    ["0", "0", "0", "-(p*(r - 1))^-1*c^-1*b^-1*(a*d - p*b*c)"],
];

type Row = Vec<NCPoly>;
type Matrix = Vec<Row>;

/// The free left module on the Maurer-Cartan forms `θ̃^i`, with the right
/// action given by the commutation table.
pub struct MaurerCartan {
    pub algebra: Arc<Presentation>,
    /// right action of every letter, inverse letters included
    letters: Vec<Matrix>,
}

impl MaurerCartan {
    pub fn new(p: Arc<Presentation>) -> Result<Self> {
        let parse = |t: &str| p.parse(&with_r(t));
        let mut letters = vec![Vec::new(); p.num_letters()];
        for (g, table) in TABLE.iter().enumerate() {
            let m: Matrix = table
                .iter()
                .map(|row| row.iter().map(|t| parse(t)).collect::<Result<Row>>())
                .collect::<Result<_>>()?;
            if let Some(li) = p.gen_inverse_letter(g) {
                letters[li as usize] = upper_inverse(&p, &m)?;
            }
            letters[p.gen_letter(g) as usize] = m;
        }
        Ok(MaurerCartan { algebra: p, letters })
    }

    fn n(&self) -> usize {
        4
    }

    /// `v f` for `v = Σ v_j θ̃^j`.
    pub fn right_mul(&self, v: &[NCPoly], f: &NCPoly) -> Row {
        let p = &self.algebra;
        let mut out = vec![NCPoly::zero(); self.n()];
        for (w, c) in f.terms() {
            let mut acc: Row = v.iter().map(|x| p.scale(x, c)).collect();
            for &l in w.letters() {
                acc = row_times(p, &acc, &self.letters[l as usize]);
            }
            out = add_rows(&out, &acc);
        }
        out
    }

    /// `f v`.
    pub fn left_mul(&self, f: &NCPoly, v: &[NCPoly]) -> Row {
        v.iter().map(|x| self.algebra.mul(f, x)).collect()
    }

    /// `d f` by the Leibniz rule from the differentials of the generators.
    pub fn d(&self, f: &NCPoly) -> Result<Row> {
        let p = &self.algebra;
        let mut dl: Vec<Row> = vec![Vec::new(); p.num_letters()];
        for (g, row) in DIFFERENTIALS.iter().enumerate() {
            let dg: Row = row.iter().map(|t| p.parse(t)).collect::<Result<_>>()?;
            if let Some(li) = p.gen_inverse_letter(g) {
                let inv = p.letter_poly(li);
                let neg = self.left_mul(&inv, &self.right_mul(&dg, &inv));
                dl[li as usize] = neg.iter().map(NCPoly::neg).collect();
            }
            dl[p.gen_letter(g) as usize] = dg;
        }
        let mut out = vec![NCPoly::zero(); self.n()];
        for (w, c) in f.terms() {
            let ls = w.letters();
            for i in 0..ls.len() {
                let left = p.mul_all(ls[..i].iter().map(|&l| p.letter_poly(l)).collect::<Vec<_>>().iter());
                let right = p.mul_all(ls[i + 1..].iter().map(|&l| p.letter_poly(l)).collect::<Vec<_>>().iter());
                let left = p.scale(&left, c);
                let term = self.left_mul(&left, &self.right_mul(&dl[ls[i] as usize], &right));
                out = add_rows(&out, &term);
            }
        }
        Ok(out)
    }

    /// Checks that the table respects every rewrite rule of the algebra and
    /// that `d` does too.
    pub fn consistency(&self) -> Result<Report> {
        let p = &self.algebra;
        let mut rep = Report::new("Maurer-Cartan bimodule");
        for rule in p.rules() {
            let lhs = NCPoly::monomial(rule.lhs.clone(), Scalar::one());
            let mut bad = None;
            for i in 0..self.n() {
                let mut e = vec![NCPoly::zero(); self.n()];
                e[i] = NCPoly::one();
                let diff = sub_rows(&self.right_mul(&e, &lhs), &self.right_mul(&e, &rule.rhs));
                if diff.iter().any(|x| !x.is_zero()) {
                    bad = Some(format!("on tth_{}: {}", i + 1, fmt_row(p, &diff)));
                    break;
                }
            }
            rep.check_zero(format!("right action respects {}", rule.label), bad);
            let dd = sub_rows(&self.d(&lhs)?, &self.d(&rule.rhs)?);
            rep.check_zero(
                format!("d respects {}", rule.label),
                dd.iter().any(|x| !x.is_zero()).then(|| fmt_row(p, &dd)),
            );
        }
        Ok(rep)
    }
}

fn row_times(p: &Presentation, v: &[NCPoly], m: &Matrix) -> Row {
    (0..m.len())
        .map(|k| {
            v.iter()
                .zip(m)
                .fold(NCPoly::zero(), |acc, (x, row)| acc.add(&p.mul(x, &row[k])))
        })
        .collect()
}

fn add_rows(a: &[NCPoly], b: &[NCPoly]) -> Row {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_rows(a: &[NCPoly], b: &[NCPoly]) -> Row {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn fmt_row(p: &Presentation, v: &[NCPoly]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| format!("({}) tth_{}", p.fmt(x), j + 1))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Inverse of an upper triangular matrix whose diagonal entries are units,
/// by back substitution; both one-sided products are checked.
fn upper_inverse(p: &Presentation, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut x = vec![vec![NCPoly::zero(); n]; n];
    for i in (0..n).rev() {
        let inv = p
            .unit_inverse(&m[i][i])
            .ok_or_else(|| Error::NotInvertible(p.fmt(&m[i][i])))?;
        x[i][i] = inv.clone();
        for k in i + 1..n {
            let mut s = NCPoly::zero();
            for j in i + 1..=k {
                s = s.add(&p.mul(&m[i][j], &x[j][k]));
            }
            x[i][k] = p.mul(&inv, &s).neg();
        }
    }
    for (a, b) in [(m, &x), (&x, m)] {
        for i in 0..n {
            let row = row_times(p, &a[i], b);
            for (k, e) in row.iter().enumerate() {
                let want = if i == k { NCPoly::one() } else { NCPoly::zero() };
                if *e != want {
                    return Err(Error::internal("right action matrix is not invertible"));
                }
            }
        }
    }
    Ok(x)
}

pub(super) fn glpq2() -> Result<Preset> {
    let p = glpq_algebra()?;
    let alpha = glpq_alpha();
    let mut defs = Vec::new();
    for s in 0..4 {
        let fwd: Vec<(String, String)> = (0..4)
            .map(|j| (GENS[j].to_string(), with_r(&format!("({})*{}", alpha[s][j], GENS[j]))))
            .collect();
        let back: Vec<(String, String)> = (0..4)
            .map(|j| (GENS[j].to_string(), with_r(&format!("({})^-1*{}", alpha[s][j], GENS[j]))))
            .collect();
        let f: Vec<(&str, &str)> = fwd.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let b: Vec<(&str, &str)> = back.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let phi = auto(&p, &f, &b)?;
        defs.push(DirectionDef::twisted(&(s + 1).to_string(), phi, p.parse(LAMBDA[s])?));
    }
    let side = vec![
        "p*q != 1".to_string(),
        "b and c invertible".to_string(),
        "p and q generic".to_string(),
    ];
    let spec = Arc::new(CalculusSpec::new(
        p.clone(),
        defs,
        DirectionSet::plain(&["1", "2", "3", "4"]),
        side,
    )?);
    let calc = Arc::new(Calculus::first_order(spec));
    let rinv = Scalar::one().checked_div(&(Scalar::param("p") * Scalar::param("q")))?;
    let images = (0..4)
        .map(|_| {
            (0..4)
                .map(|a| {
                    if a == 1 {
                        Form::theta(1).scale(&p, &rinv)
                    } else {
                        Form::theta(a)
                    }
                })
                .collect()
        })
        .collect();
    Ok(Preset {
        id: "glpq2",
        summary: "bicovariant first-order calculus on GL_{p,q}(2)",
        calc,
        images: Some(images),
        simple: true,
        coords: None,
        fixtures: vec![
            Fixture::vartheta("th_1 + a*th_2 + d*th_3 + th_4"),
            Fixture::form("th_1*a", "p*q*a*th_1"),
            Fixture::form("th_2*b", "q*b*th_2"),
            Fixture::form("th_3*c", "p*c*th_3"),
            Fixture::form("th_4*b", "p*q*b*th_4"),
            Fixture::form("th_4*d", "d*th_4"),
        ],
        extra: Some(maurer_cartan_report),
    })
}

/// Relates the preset's `θ^s` to the Maurer-Cartan forms.
fn maurer_cartan_report(pre: &Preset) -> Result<Report> {
    let spec = &pre.calc.spec;
    let p = &spec.algebra;
    let mc = MaurerCartan::new(p.clone())?;
    let mut rep = mc.consistency()?;
    let theta: Vec<Row> = THETAS
        .iter()
        .map(|row| row.iter().map(|t| p.parse(&with_r(t))).collect::<Result<Row>>())
        .collect::<Result<_>>()?;
    let gens = p.generator_polys();
    for (s, th) in theta.iter().enumerate() {
        for (g, f) in gens.iter().enumerate() {
            let lhs = mc.right_mul(th, f);
            let rhs = mc.left_mul(&spec.phi(s, f), th);
            let diff = sub_rows(&lhs, &rhs);
            rep.check_zero(
                format!("th_{} {} = phi_{}({}) th_{}", s + 1, GENS[g], s + 1, GENS[g], s + 1),
                diff.iter().any(|x| !x.is_zero()).then(|| fmt_row(p, &diff)),
            );
        }
    }
    let mut vt = vec![NCPoly::zero(); 4];
    for (s, th) in theta.iter().enumerate() {
        vt = add_rows(&vt, &mc.left_mul(spec.lambda(s)?, th));
    }
    let expect: Row = ["(r - 1)^-1", "0", "0", "(r - 1)^-1*r^-1"]
        .iter()
        .map(|t| p.parse(&with_r(t)))
        .collect::<Result<_>>()?;
    let diff = sub_rows(&vt, &expect);
    rep.check_zero(
        "vartheta = (r - 1)^-1 (tth_1 + r^-1 tth_4)",
        diff.iter().any(|x| !x.is_zero()).then(|| fmt_row(p, &diff)),
    );
    for (g, f) in gens.iter().enumerate() {
        let df = mc.d(f)?;
        let comm = sub_rows(&mc.right_mul(&vt, f), &mc.left_mul(f, &vt));
        let diff = sub_rows(&comm, &df);
        rep.check_zero(
            format!("[vartheta, {0}] = d {0}", GENS[g]),
            diff.iter().any(|x| !x.is_zero()).then(|| fmt_row(p, &diff)),
        );
        let mut via_e = vec![NCPoly::zero(); 4];
        for (s, th) in theta.iter().enumerate() {
            via_e = add_rows(&via_e, &mc.left_mul(&spec.e(s, f), th));
        }
        let diff = sub_rows(&via_e, &df);
        rep.check_zero(
            format!("sum_s e_s({0}) th_s = d {0}", GENS[g]),
            diff.iter().any(|x| !x.is_zero()).then(|| fmt_row(p, &diff)),
        );
    }
    Ok(rep)
}
