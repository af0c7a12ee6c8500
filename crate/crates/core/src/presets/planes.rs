use std::sync::Arc;

use super::{auto, identity_images, Fixture, Preset};
use crate::algebra::{
    tensor_product, AlgebraMorphism, NCPoly, Presentation, PresentationBuilder,
};
use crate::calculus::{
    Calculus, CalculusSpec, DirectionDef, DirectionSet, Form, Group, TwoFormStructure,
};
use crate::error::Result;
use crate::scalar::Scalar;

/// Directions `1 = (1,0)` and `2 = (0,1)` in ℤ².
fn z2_dirs() -> Result<DirectionSet> {
    DirectionSet::from_group(
        Group::Abelian(vec![0, 0]),
        vec![("1".into(), vec![1, 0]), ("2".into(), vec![0, 1])],
    )
}

fn build(spec: CalculusSpec, dtheta_zero: bool) -> Result<Arc<Calculus>> {
    let spec = Arc::new(spec);
    let mut ts = TwoFormStructure::group_derived(&spec)?;
    if dtheta_zero {
        ts = ts.with_dtheta(vec![Form::zero(); spec.n()]);
    }
    Ok(Arc::new(Calculus::new(spec, ts)?))
}

/// Scalings `φ₁: x ↦ α⁻¹x, y ↦ β⁻¹y` and `φ₂: x ↦ γ⁻¹x, y ↦ δ⁻¹y`.
#[derive(Clone, Debug)]
pub struct QuantumPlaneParams {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
    /// whether `x` and `y` are invertible
    pub torus: bool,
}

impl QuantumPlaneParams {
    pub fn new(alpha: &str, beta: &str, gamma: &str, delta: &str) -> Self {
        QuantumPlaneParams {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
            delta: delta.into(),
            torus: false,
        }
    }
}

/// The quantum plane `xy = qyx` with two commuting scaling automorphisms
/// and `t = 1`.
pub fn quantum_plane(k: &QuantumPlaneParams, side_conditions: Vec<String>) -> Result<Arc<Calculus>> {
    let p = Arc::new(
        PresentationBuilder::new()
            .generator("x", k.torus)
            .generator("y", k.torus)
            .q_commute("x", "y", "q^-1")
            .build()?,
    );
    let scale = |a: &str, b: &str| {
        auto(
            &p,
            &[("x", &format!("({a})^-1*x")), ("y", &format!("({b})^-1*y"))],
            &[("x", &format!("({a})*x")), ("y", &format!("({b})*y"))],
        )
    };
    let defs = vec![
        DirectionDef::weighted("1", scale(&k.alpha, &k.beta)?, Scalar::one())?,
        DirectionDef::weighted("2", scale(&k.gamma, &k.delta)?, Scalar::one())?,
    ];
    build(CalculusSpec::new(p, defs, z2_dirs()?, side_conditions)?, false)
}

fn plane_preset(
    id: &'static str,
    summary: &'static str,
    k: QuantumPlaneParams,
    side: &[&str],
    fixtures: Vec<Fixture>,
) -> Result<Preset> {
    let calc = quantum_plane(&k, side.iter().map(|s| s.to_string()).collect())?;
    let coords = ["x", "y"]
        .iter()
        .map(|t| calc.spec.algebra.parse(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Preset {
        id,
        summary,
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: Some(coords),
        fixtures,
        extra: None,
    })
}

/// Relations of case a, with `{x}`, `{y}` standing for the coordinates.
const CASE_A: &[(&str, &str)] = &[
    ("{x}*d({x})", "p*q*d({x})*{x}"),
    ("{y}*d({x})", "p*d({x})*{y}"),
    ("{y}*d({y})", "p*q*d({y})*{y}"),
    ("{x}*d({y})", "q*d({y})*{x} + (p*q - 1)*d({x})*{y}"),
    ("d({x})", "(1 - p*q)*th_1*{x}"),
    ("d({x})*d({x})", "0"),
    ("d({y})*d({y})", "0"),
    ("p*d({x})*d({y})", "-d({y})*d({x})"),
];

fn instantiate(templates: &[(&str, &str)], subs: &[(&str, &str)]) -> Vec<Fixture> {
    let fill = |t: &str| {
        let mut s = t.to_string();
        for (k, v) in subs {
            s = s.replace(k, v);
        }
        s
    };
    templates
        .iter()
        .map(|(l, r)| Fixture::form(&fill(l), &fill(r)))
        .collect()
}

pub(super) fn quantum_plane_a() -> Result<Preset> {
    let mut fx = instantiate(CASE_A, &[("{x}", "x"), ("{y}", "y")]);
    fx.push(Fixture::form("d(th_1 + th_2)", "0"));
    fx.push(Fixture::form("th_1*th_2 + th_2*th_1", "0"));
    plane_preset(
        "quantum_plane_a",
        "quantum plane, case a with alpha = beta = pq, gamma = 1",
        QuantumPlaneParams::new("p*q", "p*q", "1", "p*q"),
        &["p*q != 1", "p != 1"],
        fx,
    )
}

pub(super) fn quantum_plane_b() -> Result<Preset> {
    plane_preset(
        "quantum_plane_b",
        "quantum plane, case b with gamma = alpha, delta = 1",
        QuantumPlaneParams::new("alpha", "beta", "alpha", "1"),
        &["alpha != 1", "beta != 1"],
        vec![
            Fixture::form("y*d(y)", "beta*d(y)*y"),
            Fixture::form("x*d(y)", "q*alpha*d(y)*x"),
            Fixture::form("x*d(x)", "alpha*d(x)*x"),
            Fixture::form("y*d(x)", "q^-1*d(x)*y + (alpha - 1)*d(y)*x"),
        ],
    )
}

pub(super) fn quantum_plane_c() -> Result<Preset> {
    plane_preset(
        "quantum_plane_c",
        "quantum plane, case c with beta = gamma = 1",
        QuantumPlaneParams::new("alpha", "1", "1", "delta"),
        &["alpha != 1", "delta != 1"],
        vec![
            Fixture::form("x*d(x)", "alpha*d(x)*x"),
            Fixture::form("y*d(x)", "q^-1*d(x)*y"),
            Fixture::form("y*d(y)", "delta*d(y)*y"),
            Fixture::form("x*d(y)", "q*d(y)*x"),
        ],
    )
}

pub(super) fn quantum_torus() -> Result<Preset> {
    let mut k = QuantumPlaneParams::new("alpha", "beta", "gamma", "delta");
    k.torus = true;
    let det = "((1 - alpha)*(1 - delta)/(alpha*delta) - (1 - beta)*(1 - gamma)/(beta*gamma))";
    plane_preset(
        "quantum_torus",
        "quantum torus with generic scalings",
        k,
        &[
            "(1 - alpha)*(1 - delta)*beta*gamma != (1 - beta)*(1 - gamma)*alpha*delta",
            "no monomial in alpha, beta, gamma, delta, q equals 1 unless forced",
        ],
        vec![
            Fixture::form("x^-1*d(x)", "(1 - alpha)/alpha*th_1 + (1 - gamma)/gamma*th_2"),
            Fixture::form("y^-1*d(y)", "(1 - beta)/beta*th_1 + (1 - delta)/delta*th_2"),
            Fixture::form(
                "th_1",
                &format!("((1 - delta)/delta*x^-1*d(x) - (1 - gamma)/gamma*y^-1*d(y))/{det}"),
            ),
            Fixture::form(
                "th_2",
                &format!("((1 - alpha)/alpha*y^-1*d(y) - (1 - beta)/beta*x^-1*d(x))/{det}"),
            ),
            Fixture::form("th_1*x", "alpha^-1*x*th_1"),
            Fixture::form("th_1*y", "beta^-1*y*th_1"),
            Fixture::form("th_2*x", "gamma^-1*x*th_2"),
            Fixture::form("th_2*y", "delta^-1*y*th_2"),
        ],
    )
}

pub(super) fn heisenberg() -> Result<Preset> {
    let p = Arc::new(
        PresentationBuilder::new()
            .generator("x", false)
            .generator("y", false)
            .relation("x*y - y*x", "h")
            .build()?,
    );
    let defs = vec![
        DirectionDef::weighted("1", auto(&p, &[("x", "x + a")], &[("x", "x - a")])?, Scalar::param("a"))?,
        DirectionDef::weighted("2", auto(&p, &[("y", "y + b")], &[("y", "y - b")])?, Scalar::param("b"))?,
    ];
    let side = vec!["a != 0".to_string(), "b != 0".to_string()];
    let calc = build(CalculusSpec::new(p.clone(), defs, z2_dirs()?, side)?, false)?;
    Ok(Preset {
        id: "heisenberg",
        summary: "Heisenberg algebra with shifts by a and b",
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: Some(vec![p.gen("x")?, p.gen("y")?]),
        fixtures: vec![
            Fixture::form("d(x)", "th_1"),
            Fixture::form("d(y)", "th_2"),
            Fixture::form("d(x)*x - x*d(x)", "a*d(x)"),
            Fixture::form("d(x)*y - y*d(x)", "0"),
            Fixture::form("d(y)*x - x*d(y)", "0"),
            Fixture::form("d(y)*y - y*d(y)", "b*d(y)"),
            Fixture::form("d(x)*d(y) + d(y)*d(x)", "0"),
        ],
        extra: None,
    })
}

/// `[x, y] = h y²` with `y` invertible; `y` comes first so that `xy` is
/// the leading word of the relation.
fn h_plane_algebra() -> Result<Arc<Presentation>> {
    Ok(Arc::new(
        PresentationBuilder::new()
            .generator("y", true)
            .generator("x", false)
            .relation("x*y", "y*x + h*y^2")
            .relation("x*y^-1", "y^-1*x - h")
            .build()?,
    ))
}

fn shear(p: &Arc<Presentation>, k: &str) -> Result<AlgebraMorphism> {
    auto(p, &[("x", &format!("x + ({k})*y"))], &[("x", &format!("x - ({k})*y"))])
}

pub(super) fn h_plane() -> Result<Preset> {
    let p = h_plane_algebra()?;
    let defs = vec![
        DirectionDef::weighted("1", shear(&p, "p")?, Scalar::one())?,
        DirectionDef::weighted(
            "2",
            auto(&p, &[("x", "r^-1*x"), ("y", "r^-1*y")], &[("x", "r*x"), ("y", "r*y")])?,
            Scalar::one(),
        )?,
    ];
    let side = vec!["r != 1".to_string(), "p != 0".to_string()];
    let calc = build(CalculusSpec::new(p.clone(), defs, z2_dirs()?, side)?, false)?;
    Ok(Preset {
        id: "h_plane",
        summary: "h-deformed plane with y invertible, generic r",
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: Some(vec![p.gen("x")?, p.gen("y")?]),
        fixtures: vec![
            Fixture::form(
                "x*d(x) - d(x)*x",
                "(p - h)*(d(y)*(x + h*y) - d(x)*y) + (r - 1)*d(y)*y^-1*x^2",
            ),
            Fixture::form("y*d(x) - d(x)*y", "-h*d(y)*y + (r - 1)*d(y)*x"),
            Fixture::form("y*d(y) - d(y)*y", "(r - 1)*d(y)*y"),
            Fixture::form("x*d(y) - d(y)*x", "r*h*d(y)*y + (r - 1)*d(y)*x"),
        ],
        extra: None,
    })
}

/// The `r = 1` relations, with `{x}`, `{y}`, `{p}` substituted.
const R1: &[(&str, &str)] = &[
    ("d({x})*d({x})", "({p} - h)*d({x})*d({y})"),
    ("d({y})*d({y})", "0"),
    ("d({x})*d({y}) + d({y})*d({x})", "0"),
    ("{x}*d({x}) - d({x})*{x}", "({p} - h)*(d({y})*({x} + h*{y}) - d({x})*{y})"),
    ("{y}*d({x}) - d({x})*{y}", "-h*d({y})*{y}"),
    ("{y}*d({y}) - d({y})*{y}", "0"),
    ("{x}*d({y}) - d({y})*{x}", "h*d({y})*{y}"),
];

/// `e₂ = lim_{r→1} (φ₂ − id)/(1 − r)` on the generators, with `φ₂` the
/// uniform scaling by `r⁻¹`.
fn euler_limit(p: &Arc<Presentation>) -> Result<Vec<NCPoly>> {
    let one = Scalar::one();
    let r = Scalar::param("r");
    let q = (r.inv()? - one.clone()).checked_div(&(one.clone() - r))?;
    let c = q.substitute_one("r", &one)?;
    Ok(p.generator_polys().iter().map(|g| p.scale(g, &c)).collect())
}

pub(super) fn h_plane_r1() -> Result<Preset> {
    let p = h_plane_algebra()?;
    let id = AlgebraMorphism::identity(p.clone());
    let defs = vec![
        DirectionDef::weighted("1", shear(&p, "p")?, Scalar::one())?,
        DirectionDef::outer("2", id, euler_limit(&p)?),
    ];
    let side = vec!["p != h".to_string()];
    let calc = build(CalculusSpec::new(p.clone(), defs, z2_dirs()?, side)?, true)?;
    let mut fixtures = instantiate(R1, &[("{x}", "x"), ("{y}", "y"), ("{p}", "p")]);
    fixtures.push(Fixture::central("th_2", true));
    fixtures.push(Fixture::form("d(x)", "p*y*th_1 + x*th_2"));
    Ok(Preset {
        id: "h_plane_r1",
        summary: "h-deformed plane in the limit r = 1",
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: Some(vec![p.gen("x")?, p.gen("y")?]),
        fixtures,
        extra: None,
    })
}

fn commutative_uv() -> Result<Presentation> {
    PresentationBuilder::new()
        .generator("u", false)
        .generator("v", false)
        .relation("v*u", "u*v")
        .build()
}

pub(super) fn tensor_qplane() -> Result<Preset> {
    let qp = PresentationBuilder::new()
        .generator("U", false)
        .generator("V", false)
        .relation("U*V", "q*V*U")
        .build()?;
    let p = Arc::new(tensor_product(&commutative_uv()?, &qp)?.presentation);
    let k = "(p*q)";
    let defs = vec![
        DirectionDef::weighted(
            "1",
            auto(
                &p,
                &[("u", &format!("{k}^-1*u")), ("v", &format!("{k}^-1*v"))],
                &[("u", &format!("{k}*u")), ("v", &format!("{k}*v"))],
            )?,
            Scalar::one(),
        )?,
        DirectionDef::weighted(
            "2",
            auto(&p, &[("v", &format!("{k}^-1*v"))], &[("v", &format!("{k}*v"))])?,
            Scalar::one(),
        )?,
    ];
    let calc = build(
        CalculusSpec::new(p.clone(), defs, z2_dirs()?, vec!["p*q != 1".into()])?,
        false,
    )?;
    Ok(Preset {
        id: "tensor_qplane",
        summary: "lattice calculus on C[u,v] tensored with a quantum plane",
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: None,
        fixtures: instantiate(CASE_A, &[("{x}", "(u*U)"), ("{y}", "(v*V)")]),
        extra: None,
    })
}

pub(super) fn tensor_hplane() -> Result<Preset> {
    let hp = PresentationBuilder::new()
        .generator("V", false)
        .generator("U", false)
        .relation("U*V", "V*U + h*V^2")
        .build()?;
    let p = Arc::new(tensor_product(&commutative_uv()?, &hp)?.presentation);
    let id = AlgebraMorphism::identity(p.clone());
    let euler = ["u", "v", "0", "0"]
        .iter()
        .map(|t| p.parse(t))
        .collect::<Result<Vec<_>>>()?;
    let defs = vec![
        DirectionDef::weighted(
            "1",
            auto(&p, &[("u", "u + (h + hp)*v")], &[("u", "u - (h + hp)*v")])?,
            Scalar::one(),
        )?,
        DirectionDef::outer("2", id, euler),
    ];
    let calc = build(
        CalculusSpec::new(p.clone(), defs, z2_dirs()?, vec!["hp != 0".into()])?,
        true,
    )?;
    let mut fixtures = instantiate(
        R1,
        &[("{x}", "(v*U + u*V)"), ("{y}", "(v*V)"), ("{p}", "(h + hp)")],
    );
    fixtures.push(Fixture::central("th_2", true));
    Ok(Preset {
        id: "tensor_hplane",
        summary: "calculus on C[u,v] tensored with an h-plane",
        calc,
        images: Some(identity_images(2)),
        simple: false,
        coords: None,
        fixtures,
        extra: None,
    })
}
