use std::sync::Arc;

use super::{auto, identity_images, Fixture, Preset};
use crate::algebra::{NCPoly, PresentationBuilder};
use crate::calculus::{
    Calculus, CalculusSpec, DirectionDef, DirectionSet, Form, Group, TwoFormStructure,
};
use crate::error::Result;
use crate::report::Report;
use crate::scalar::Scalar;

fn group_calculus(spec: CalculusSpec) -> Result<Arc<Calculus>> {
    let spec = Arc::new(spec);
    let ts = TwoFormStructure::group_derived(&spec)?;
    Ok(Arc::new(Calculus::new(spec, ts)?))
}

/// `ℂ[x]` with `φ_s(x) = x + step`, `t_s = 1`, directions in ℤ.
pub fn shift_calculus(dirs: &[(&str, i64)]) -> Result<Arc<Calculus>> {
    let p = Arc::new(PresentationBuilder::new().generator("x", false).build()?);
    let mut defs = Vec::new();
    for &(label, k) in dirs {
        let phi = auto(&p, &[("x", &format!("x + ({k})"))], &[("x", &format!("x - ({k})"))])?;
        defs.push(DirectionDef::weighted(label, phi, Scalar::one())?);
    }
    let set = DirectionSet::from_group(
        Group::Abelian(vec![0]),
        dirs.iter().map(|&(l, k)| (l.to_string(), vec![k])).collect(),
    )?;
    group_calculus(CalculusSpec::new(p, defs, set, vec![])?)
}

fn coords(calc: &Calculus, texts: &[&str]) -> Result<Vec<NCPoly>> {
    texts.iter().map(|t| calc.spec.algebra.parse(t)).collect()
}

pub(super) fn poly_shift_s12() -> Result<Preset> {
    let calc = shift_calculus(&[("1", 1), ("2", 2)])?;
    Ok(Preset {
        id: "poly_shift_S12",
        summary: "C[x] with shifts by 1 and 2",
        coords: Some(coords(&calc, &["x", "x^2"])?),
        images: Some(identity_images(2)),
        simple: true,
        fixtures: vec![
            Fixture::theta_solve(&[&["2 + 2*x", "-1"], &["-1/2 - x", "1/2"]]),
            Fixture::delta("1", "0"),
            Fixture::delta("2", "th_1*th_1"),
            Fixture::zeta("0"),
            Fixture::form("th_2*th_1", "-th_1*th_2"),
            Fixture::form("th_2*th_2", "0"),
            Fixture::form("th_1*x", "(x + 1)*th_1"),
            Fixture::form("d(x)*x", "x*d(x) + th_1 + 4*th_2"),
            Fixture::central("th_1", false),
        ],
        calc,
        extra: None,
    })
}

pub(super) fn poly_shift_sym() -> Result<Preset> {
    let calc = shift_calculus(&[("m1", -1), ("1", 1)])?;
    Ok(Preset {
        id: "poly_shift_sym",
        summary: "C[x] with shifts by -1 and 1",
        coords: Some(coords(&calc, &["x", "x^2"])?),
        images: Some(identity_images(2)),
        simple: true,
        fixtures: vec![
            Fixture::theta_solve(&[&["-x - 1/2", "1/2"], &["-x + 1/2", "1/2"]]),
            Fixture::vartheta("d(x^2) - 2*x*d(x)"),
            Fixture::zeta("th_m1*th_1 + th_1*th_m1"),
            Fixture::form("th_1*th_1", "0"),
            Fixture::form("th_m1*th_m1", "0"),
            Fixture::delta("1", "0"),
        ],
        calc,
        extra: None,
    })
}

pub(super) fn z3_root_of_unity() -> Result<Preset> {
    let p = Arc::new(
        PresentationBuilder::new()
            .generator("x", true)
            .generator("y", true)
            .param_relation("q", "q^2 + q + 1")
            .build()?,
    );
    let phi1 = auto(&p, &[("x", "q*x"), ("y", "q^2*y")], &[("x", "q^2*x"), ("y", "q*y")])?;
    let phi2 = auto(&p, &[("x", "q^2*x"), ("y", "q*y")], &[("x", "q*x"), ("y", "q^2*y")])?;
    let t = p.reduce_scalar(&(Scalar::param("q") - Scalar::one()));
    let defs = vec![
        DirectionDef::weighted("1", phi1, t.clone())?,
        DirectionDef::weighted("2", phi2, t)?,
    ];
    let set = DirectionSet::from_group(
        Group::Abelian(vec![3]),
        vec![("1".into(), vec![1]), ("2".into(), vec![2])],
    )?;
    let calc = group_calculus(CalculusSpec::new(p, defs, set, vec![])?)?;
    Ok(Preset {
        id: "z3_root_of_unity",
        summary: "Laurent algebra in x, y with a Z3 action by cube roots of unity",
        coords: None,
        images: Some(identity_images(2)),
        simple: false,
        fixtures: vec![
            Fixture::constant("x^3"),
            Fixture::constant("y^3"),
            Fixture::constant("x*y"),
            Fixture::constant("y*x"),
            Fixture::form("d(x)", "x*th_1 - q^2*x*th_2"),
            Fixture::form("d(y)", "-q^2*y*th_1 + y*th_2"),
            Fixture::form("th_1", "(x^-1*d(x) + q^2*y^-1*d(y))/(1 - q)"),
            Fixture::form("th_2", "(q^2*x^-1*d(x) + y^-1*d(y))/(1 - q)"),
            Fixture::form("d(x)*x", "-x*d(x) + x^2*y^-1*d(y)"),
            Fixture::form("d(x)*y", "-x*d(y)"),
            Fixture::form("d(y)*x", "-y*d(x)"),
            Fixture::form("d(y)*y", "-y*d(y) + y^2*x^-1*d(x)"),
            Fixture::form("d(x^2)", "x^2*y^-1*d(y)"),
        ],
        calc,
        extra: Some(|_| z3_quotient_report()),
    })
}

/// Ideal-membership certificates in the free algebra on `x, y` showing what
/// the relations `x³ = c1`, `y³ = c2`, `xy = c3`, `yx = c4` force.
pub fn z3_quotient_report() -> Result<Report> {
    let p = PresentationBuilder::new()
        .generator("x", false)
        .generator("y", false)
        .build()?;
    let e = |t: &str| p.parse(t);
    let mut rep = Report::new("quotient by the constants");
    let certs = [
        ("(x^3 - c1)*y - x^2*(x*y - c3)", "c3*x^2 - c1*y"),
        ("(x*y - c3)*x - x*(y*x - c4)", "(c4 - c3)*x"),
        ("(y^3 - c2)*x - y^2*(y*x - c4)", "c4*y^2 - c2*x"),
    ];
    for (lhs, rhs) in certs {
        let r = e(lhs)?.sub(&e(rhs)?);
        rep.check_zero(format!("{lhs} = {rhs}"), (!r.is_zero()).then(|| p.fmt(&r)));
    }
    rep.note("x is a unit, so (c4 - c3)*x in the ideal forces c3 = c4");
    rep.note("the quotient then identifies x^2 with (c1/c3)*y");
    Ok(rep)
}

/// Functions on a finite group as the span of idempotents `e_h`; the last
/// one is eliminated as `1 − Σ others`. `φ_s(e_h) = e_{hs⁻¹}`.
fn group_lattice(
    id: &'static str,
    summary: &'static str,
    group: Group,
    dirs: Vec<(String, Vec<i64>)>,
    fixtures: Vec<Fixture>,
) -> Result<Preset> {
    let elems = group.elements()?;
    let m = elems.len() - 1;
    let mut b = PresentationBuilder::new();
    for i in 0..m {
        b = b.generator(&format!("e{i}"), false);
    }
    for i in 0..m {
        for j in 0..m {
            let rhs = if i == j { format!("e{i}") } else { "0".into() };
            b = b.relation(&format!("e{i}*e{j}"), &rhs);
        }
    }
    let p = Arc::new(b.build()?);
    let name = |k: usize| -> String {
        if k < m {
            format!("e{k}")
        } else {
            let rest: Vec<String> = (0..m).map(|i| format!(" - e{i}")).collect();
            format!("1{}", rest.concat())
        }
    };
    let pos = |g: &Vec<i64>| elems.iter().position(|h| h == g).expect("group element");
    let shift = |s: &[i64]| -> Vec<(String, String)> {
        let si = group.inverse(s);
        (0..m)
            .map(|h| (format!("e{h}"), name(pos(&group.mul(&elems[h], &si)))))
            .collect()
    };
    let mut defs = Vec::new();
    for (label, s) in &dirs {
        let fwd = shift(s);
        let back = shift(&group.inverse(s));
        let f: Vec<(&str, &str)> = fwd.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let bk: Vec<(&str, &str)> = back.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        defs.push(DirectionDef::weighted(label, auto(&p, &f, &bk)?, Scalar::one())?);
    }
    let set = DirectionSet::from_group(group, dirs)?;
    let n = set.len();
    let images = (0..n)
        .map(|s| {
            (0..n)
                .map(|a| set.conjugate(s, a).map(Form::theta).unwrap_or_default())
                .collect()
        })
        .collect();
    let calc = group_calculus(CalculusSpec::new(p, defs, set, vec![])?)?;
    Ok(Preset {
        id,
        summary,
        calc,
        images: Some(images),
        simple: false,
        coords: None,
        fixtures,
        extra: None,
    })
}

pub(super) fn group_lattice_z3() -> Result<Preset> {
    group_lattice(
        "group_lattice_z3",
        "functions on Z3 with S = {1, 2}",
        Group::Abelian(vec![3]),
        vec![("1".into(), vec![1]), ("2".into(), vec![2])],
        vec![
            Fixture::form("d(e0)", "(1 - 2*e0 - e1)*th_1 + (e1 - e0)*th_2"),
            Fixture::form("th_1*e1", "e0*th_1"),
            Fixture::form("th_2*e0", "e1*th_2"),
            Fixture::delta("1", "th_2*th_2"),
            Fixture::delta("2", "th_1*th_1"),
            Fixture::zeta("th_1*th_2 + th_2*th_1"),
        ],
    )
}

pub(super) fn group_lattice_s3() -> Result<Preset> {
    group_lattice(
        "group_lattice_s3",
        "functions on S3 with S the transpositions",
        Group::Permutation(3),
        vec![
            ("a".into(), vec![1, 0, 2]),
            ("b".into(), vec![0, 2, 1]),
            ("c".into(), vec![2, 1, 0]),
        ],
        vec![
            Fixture::form("th_a*e2", "e0*th_a"),
            Fixture::form("th_b*e0", "e1*th_b"),
            Fixture::form("th_a*th_b + th_b*th_c + th_c*th_a", "0"),
            Fixture::form("th_b*th_a + th_c*th_b + th_a*th_c", "0"),
            Fixture::delta("a", "0"),
            Fixture::zeta("th_a*th_a + th_b*th_b + th_c*th_c"),
            Fixture::form("d(e0)", "(e2 - e0)*th_a + (e1 - e0)*th_b + (1 - e0 - e1 - e2 - e3 - e4 - e0)*th_c"),
        ],
    )
}
