//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::sync::Arc;

use nccalc::algebra::check_local_confluence;
use nccalc::calculus::{
    coordinate_matrix, solve_theta_in_differentials, verify_twisted_two_forms, Calculus,
    CalculusSpec, DirectionDef, DirectionSet, Form, ThetaSolve,
};
use nccalc::geometry::{metric_compatibility, metric_invariance, torsion_free_conditions, Connection, Metric};
use nccalc::linalg::{det, det_cofactor};
use nccalc::presets::{self, glpq_alpha, z3_quotient_report, Preset};
use nccalc::properties;
use nccalc::report::Report;
use nccalc::{AlgebraMorphism, NCPoly, PresentationBuilder, Scalar};

/// Collects failures for one criterion.
#[derive(Default)]
struct Check {
    fails: Vec<String>,
    count: usize,
}

impl Check {
    fn ok(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.count += 1;
        if !passed {
            self.fails.push(format!("{}: {}", name.into(), detail.into()));
        }
    }

    fn form_eq(&mut self, calc: &Calculus, lhs: &Form, rhs: &Form, name: &str) {
        let d = calc.reduce(&lhs.sub(rhs));
        self.ok(name, d.is_zero(), format!("difference {}", calc.fmt(&d)));
    }

    /// `lhs = rhs` for every pair, parsed as forms.
    fn forms(&mut self, calc: &Calculus, pairs: &[(&str, &str)]) {
        for (l, r) in pairs {
            let name = format!("{l} = {r}");
            match (calc.parse_form(l), calc.parse_form(r)) {
                (Ok(a), Ok(b)) => self.form_eq(calc, &a, &b, &name),
                (Err(e), _) | (_, Err(e)) => self.ok(name, false, e.to_string()),
            }
        }
    }

    fn report(&mut self, rep: &Report) {
        for c in &rep.checks {
            self.ok(format!("{}: {}", rep.title, c.name), c.passed, c.detail.clone());
        }
    }
}

type Run = nccalc::Result<Check>;

fn load(id: &str) -> nccalc::Result<Preset> {
    presets::load(id)
}

fn delta_is(ck: &mut Check, calc: &Calculus, dir: &str, rhs: &str) -> nccalc::Result<()> {
    let s = calc.spec.index(dir)?;
    let lhs = calc.delta(&Form::theta(s))?;
    ck.form_eq(calc, &lhs, &calc.parse_form(rhs)?, &format!("Delta(th_{dir}) = {rhs}"));
    Ok(())
}

fn zeta_is(ck: &mut Check, calc: &Calculus, rhs: &str) -> nccalc::Result<()> {
    ck.form_eq(calc, &calc.zeta()?, &calc.parse_form(rhs)?, &format!("zeta = {rhs}"));
    Ok(())
}

fn vartheta_is(ck: &mut Check, calc: &Calculus, rhs: &str) -> nccalc::Result<()> {
    ck.form_eq(calc, &calc.vartheta()?, &calc.parse_form(rhs)?, &format!("vartheta = {rhs}"));
    Ok(())
}

fn fill(t: &str, subs: &[(&str, &str)]) -> String {
    subs.iter().fold(t.to_string(), |s, (k, v)| s.replace(k, v))
}

fn shift_calculus() -> Run {
    let mut ck = Check::default();
    let pre = load("poly_shift_S12")?;
    let c = &pre.calc;
    let x = c.spec.algebra.parse("x")?;
    let x2 = c.spec.algebra.parse("x^2")?;
    let expect = ["2*(1 + x)*d(x) - d(x^2)", "-(1/2 + x)*d(x) + 1/2*d(x^2)"];
    match solve_theta_in_differentials(&c.spec, &[x, x2])? {
        ThetaSolve::Solved(sol) => {
            for (s, e) in expect.iter().enumerate() {
                let name = format!("solved th_{} = {e}", s + 1);
                ck.form_eq(c, &sol.theta_form(&c.spec, s), &c.parse_form(e)?, &name);
            }
        }
        ThetaSolve::Singular { .. } => ck.ok("theta-solve", false, "singular"),
    }
    ck.forms(c, &[("th_1", expect[0]), ("th_2", expect[1])]);
    delta_is(&mut ck, c, "1", "0")?;
    delta_is(&mut ck, c, "2", "th_1*th_1")?;
    ck.forms(c, &[("th_2*th_1", "-th_1*th_2"), ("th_2*th_2", "0")]);
    zeta_is(&mut ck, c, "0")?;

    let pre = load("poly_shift_sym")?;
    let c = &pre.calc;
    vartheta_is(&mut ck, c, "d(x^2) - 2*x*d(x)")?;
    vartheta_is(&mut ck, c, "d(x)*x - x*d(x)")?;
    zeta_is(&mut ck, c, "th_m1*th_1 + th_1*th_m1")?;
    Ok(ck)
}

/// `Σ c_w x^{|w|}` for an element of `ℂ[x]`, as a rational function in a
/// parameter standing for `x`.
fn as_scalar_in_x(f: &NCPoly) -> Scalar {
    let x = Scalar::param("xval");
    f.terms().fold(Scalar::zero(), |acc, (w, c)| {
        acc + c.clone() * x.pow(w.len() as i32).expect("power")
    })
}

fn vandermonde() -> Run {
    let mut ck = Check::default();
    for n in 2..=5usize {
        let p = Arc::new(PresentationBuilder::new().generator("x", false).build()?);
        let labels: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
        let mut defs = Vec::new();
        for l in &labels {
            let fwd = AlgebraMorphism::from_texts(p.clone(), p.clone(), &[("x", &format!("x + {l}"))])?;
            let back = AlgebraMorphism::from_texts(p.clone(), p.clone(), &[("x", &format!("x - {l}"))])?;
            defs.push(DirectionDef::weighted(l, fwd.with_inverse(back)?, Scalar::one())?);
        }
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let spec = CalculusSpec::new(p.clone(), defs, DirectionSet::plain(&refs), vec![])?;
        let coords: Vec<NCPoly> = (1..=n)
            .map(|r| p.parse(&format!("x^{r}")))
            .collect::<nccalc::Result<_>>()?;
        let m: Vec<Vec<Scalar>> = coordinate_matrix(&spec, &coords)
            .iter()
            .map(|row| row.iter().map(as_scalar_in_x).collect())
            .collect();
        let i: Vec<Scalar> = labels.iter().map(|l| Scalar::param(l)).collect();
        let mut expect = i.iter().fold(Scalar::one(), |a, b| a * b.clone());
        for j in 0..n {
            for k in j + 1..n {
                expect = expect * (i[k].clone() - i[j].clone());
            }
        }
        let engine = det(&m)?;
        let oracle = det_cofactor(&m);
        ck.ok(format!("n = {n}: elimination"), engine == expect, format!("{engine} vs {expect}"));
        ck.ok(format!("n = {n}: cofactor"), oracle == expect, format!("{oracle} vs {expect}"));
        ck.ok(format!("n = {n}: free of x"), !engine.params().iter().any(|v| v.name() == "xval"), "");
        // symbolic shifts: M_S is invertible over the parameter field
        let spec = Arc::new(spec);
        let calc = Calculus::first_order(spec.clone());
        match solve_theta_in_differentials(&spec, &coords)? {
            ThetaSolve::Solved(sol) => {
                for s in 0..n {
                    let name = format!("n = {n}: th_{} through d(x^k), symbolic", spec.label(s));
                    ck.form_eq(&calc, &sol.theta_form(&spec, s), &Form::theta(s), &name);
                }
            }
            ThetaSolve::Singular { .. } => ck.ok(format!("n = {n}: symbolic theta-solve"), false, "singular"),
        }
        // the same elimination inverts M_S over the algebra for concrete shifts
        let shifts: Vec<(String, i64)> = [-2, 1, 3, 4, 7][..n].iter().map(|k| (k.to_string(), *k)).collect();
        let dirs: Vec<(&str, i64)> = shifts.iter().map(|(l, k)| (l.as_str(), *k)).collect();
        let calc = presets::shift_calculus(&dirs)?;
        let coords: Vec<NCPoly> = (1..=n)
            .map(|r| calc.spec.algebra.parse(&format!("x^{r}")))
            .collect::<nccalc::Result<_>>()?;
        match solve_theta_in_differentials(&calc.spec, &coords)? {
            ThetaSolve::Solved(sol) => {
                for s in 0..n {
                    let name = format!("n = {n}: th_{} through d(x^k)", calc.spec.label(s));
                    ck.form_eq(&calc, &sol.theta_form(&calc.spec, s), &Form::theta(s), &name);
                }
            }
            ThetaSolve::Singular { .. } => ck.ok(format!("n = {n}: theta-solve"), false, "singular"),
        }
    }
    Ok(ck)
}

fn quantum_planes() -> Run {
    let mut ck = Check::default();
    let sets: [(&str, &[(&str, &str)]); 3] = [
        (
            "quantum_plane_a",
            &[
                ("x*d(x)", "p*q*d(x)*x"),
                ("y*d(x)", "p*d(x)*y"),
                ("y*d(y)", "p*q*d(y)*y"),
                ("x*d(y)", "q*d(y)*x + (p*q - 1)*d(x)*y"),
            ],
        ),
        (
            "quantum_plane_b",
            &[
                ("y*d(y)", "beta*d(y)*y"),
                ("x*d(y)", "q*alpha*d(y)*x"),
                ("x*d(x)", "alpha*d(x)*x"),
                ("y*d(x)", "q^-1*d(x)*y + (alpha - 1)*d(y)*x"),
            ],
        ),
        (
            "quantum_plane_c",
            &[
                ("x*d(x)", "alpha*d(x)*x"),
                ("y*d(x)", "q^-1*d(x)*y"),
                ("y*d(y)", "delta*d(y)*y"),
                ("x*d(y)", "q*d(y)*x"),
            ],
        ),
    ];
    for (id, rels) in sets {
        let pre = load(id)?;
        let c = &pre.calc;
        ck.forms(c, rels);
        ck.forms(c, &[("th_1*th_1", "0"), ("th_2*th_2", "0"), ("th_1*th_2 + th_2*th_1", "0")]);
        let dv = c.d(&c.vartheta()?)?;
        ck.ok(format!("{id}: d(vartheta) = 0"), c.reduce(&dv).is_zero(), c.fmt(&dv));
        let mut rep = pre.differentiability()?;
        rep.title = id.into();
        ck.report(&rep);
    }
    Ok(ck)
}

fn heisenberg() -> Run {
    let mut ck = Check::default();
    let pre = load("heisenberg")?;
    ck.forms(
        &pre.calc,
        &[
            ("d(x)*x - x*d(x)", "a*d(x)"),
            ("d(x)*y - y*d(x)", "0"),
            ("d(y)*x - x*d(y)", "0"),
            ("d(y)*y - y*d(y)", "b*d(y)"),
        ],
    );
    Ok(ck)
}

fn h_plane() -> Run {
    let mut ck = Check::default();
    let pre = load("h_plane")?;
    ck.forms(
        &pre.calc,
        &[
            ("x*d(x) - d(x)*x", "(p - h)*(d(y)*(x + h*y) - d(x)*y) + (r - 1)*d(y)*y^-1*x^2"),
            ("y*d(x) - d(x)*y", "-h*d(y)*y + (r - 1)*d(y)*x"),
            ("y*d(y) - d(y)*y", "(r - 1)*d(y)*y"),
            ("x*d(y) - d(y)*x", "r*h*d(y)*y + (r - 1)*d(y)*x"),
        ],
    );
    let pre = load("h_plane_r1")?;
    let c = &pre.calc;
    ck.forms(
        c,
        &[
            ("d(x)*d(x)", "(p - h)*d(x)*d(y)"),
            ("d(y)*d(y)", "0"),
            ("d(x)*d(y) + d(y)*d(x)", "0"),
        ],
    );
    let (central, _) = c.spec.is_central_one_form(&c.parse_form("th_2")?);
    ck.ok("th_2 central at r = 1", central, "not central");
    let (central, _) = c.spec.is_central_one_form(&c.parse_form("th_1")?);
    ck.ok("th_1 not central", !central, "central");
    Ok(ck)
}

fn z3() -> Run {
    let mut ck = Check::default();
    let pre = load("z3_root_of_unity")?;
    let c = &pre.calc;
    let p = &c.spec.algebra;
    ck.forms(
        c,
        &[
            ("d(x^3)", "0"),
            ("d(y^3)", "0"),
            ("d(x*y)", "0"),
            ("d(y*x)", "0"),
            // c1 c4^-1 dy and c2 c3^-1 dx
            ("d(x^2)", "x^3*x^-1*y^-1*d(y)"),
            ("d(y^2)", "y^3*y^-1*x^-1*d(x)"),
        ],
    );
    let candidates: Vec<NCPoly> = ["x^3", "y^3", "x*y", "y*x", "x", "y", "x^2", "x*y^2"]
        .iter()
        .map(|t| p.parse(t))
        .collect::<nccalc::Result<_>>()?;
    let found: BTreeSet<String> = c.spec.constants(&candidates)?.iter().map(|f| p.fmt(f)).collect();
    let want: BTreeSet<String> = candidates[..4].iter().map(|f| p.fmt(f)).collect();
    ck.ok("constants", found == want, format!("{found:?}"));

    ck.report(&z3_quotient_report()?);
    // The quotient with xy = yx = c. Multiplying x^2 = (c1/c) y by y and
    // y^2 = (c2/c) x by x forces c1 c2 = c^3, so c2 is eliminated. The
    // identities then close into a confluent rewrite system.
    let q = PresentationBuilder::new()
        .generator("x", false)
        .generator("y", false)
        .relation("x*y", "c")
        .relation("y*x", "c")
        .relation("x*x", "c1*c^-1*y")
        .relation("y*y", "c^2*c1^-1*x")
        .build()?;
    let conf = check_local_confluence(&q, 4);
    ck.ok("quotient confluent", conf.failures.is_empty(), format!("{} failures", conf.failures.len()));
    for (l, r) in [("x^3", "c1"), ("y^3", "c^3*c1^-1")] {
        let d = q.parse(l)?.sub(&q.parse(r)?);
        ck.ok(format!("quotient: {l} = {r}"), d.is_zero(), q.fmt(&d));
    }
    Ok(ck)
}

fn twisted_heisenberg() -> Run {
    let mut ck = Check::default();
    let pre = load("twisted_heisenberg_2")?;
    let c = &pre.calc;
    vartheta_is(&mut ck, c, "x*d(y) - y*d(x)")?;
    zeta_is(&mut ck, c, "th_1*th_2")?;
    ck.report(&verify_twisted_two_forms(c.spec.clone(), c.ts.as_deref().cloned().unwrap_or_default())?);

    let pre = load("twisted_heisenberg_3")?;
    let c = &pre.calc;
    delta_is(&mut ck, c, "1", "-th_1*th_3")?;
    delta_is(&mut ck, c, "2", "th_2*th_3")?;
    delta_is(&mut ck, c, "3", "-th_1*th_2 - th_2*th_1")?;
    zeta_is(&mut ck, c, "-th_2*th_1")?;
    ck.report(&verify_twisted_two_forms(c.spec.clone(), c.ts.as_deref().cloned().unwrap_or_default())?);
    Ok(ck)
}

fn glpq() -> Run {
    let mut ck = Check::default();
    let pre = load("glpq2")?;
    let c = &pre.calc;
    let spec = &c.spec;
    let p = &spec.algebra;
    let gens = p.generator_polys();
    for (s, row) in glpq_alpha().iter().enumerate() {
        for (g, a) in row.iter().enumerate() {
            let want = p.mul(&p.parse(&a.replace('r', "(p*q)"))?, &gens[g]);
            let got = spec.phi(s, &gens[g]);
            ck.ok(format!("phi_{}({})", s + 1, p.fmt(&gens[g])), got == want, p.fmt(&got));
            // θ^s f = φ_s(f) θ^s inside the calculus
            let lhs = c.parse_form(&format!("th_{}*{}", s + 1, p.fmt(&gens[g])))?;
            let rhs = Form::theta(s).left_mul(p, &want);
            ck.form_eq(c, &lhs, &rhs, &format!("th_{} {}", s + 1, p.fmt(&gens[g])));
        }
    }
    // the explicit θ^s through Maurer-Cartan forms
    let mut rep = pre.run()?;
    rep.title = "glpq2".into();
    ck.report(&rep);
    let vt = c.parse_form("th_1 + a*th_2 + d*th_3 + th_4")?;
    vartheta_is(&mut ck, c, "th_1 + a*th_2 + d*th_3 + th_4")?;
    for g in &gens {
        let comm = c.reduce(&spec.right_mul(&vt, g).sub(&vt.left_mul(p, g)));
        ck.form_eq(c, &comm, &spec.differential(g), &format!("[vartheta, {}] = d{}", p.fmt(g), p.fmt(g)));
    }
    ck.report(&pre.differentiability()?);
    // φ_s(ϑ) with φ_s(θ²) = r⁻¹ θ² and the other θ fixed
    let images = pre.images.as_ref().expect("glpq2 images");
    let lambdas = ["1", "a", "d", "1"];
    for s in 0..4 {
        let mut img = Form::zero();
        for (a, l) in lambdas.iter().enumerate() {
            img = img.add(&images[s][a].left_mul(p, &spec.phi(s, &p.parse(l)?)));
        }
        ck.form_eq(c, &img, &vt, &format!("phi_{}(vartheta) = vartheta", s + 1));
    }
    Ok(ck)
}

fn torsion() -> Run {
    let mut ck = Check::default();
    let pre = load("quantum_plane_a")?;
    let geo = pre.geometry()?;
    let conds = torsion_free_conditions(&geo)?;
    let got: BTreeSet<String> = conds.all().map(|e| e.fmt(&geo.calc.spec)).collect();
    let want: BTreeSet<String> = ["V[1,2,1] = V[1,1,2] + 1", "V[2,2,1] = V[2,1,2] - 1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ck.ok("torsion-free conditions", got == want, format!("{got:?}"));
    ck.ok("all quadrangle", conds.quadrangle.len() == 2, "");
    Ok(ck)
}

/// Exponent vectors `(i, j, k, l)` of `a^i b^j c^k d^l` up to `bound`, with
/// `φ_s` acting by the scalar `Π_g α_{s,g}^{e_g}`.
fn monomial_scan(bound: u32, alpha: &[[Scalar; 4]; 4], target: &Scalar) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for e0 in 0..=bound {
        for e1 in 0..=bound {
            for e2 in 0..=bound {
                for e3 in 0..=bound {
                    let e = [e0, e1, e2, e3];
                    let fits = alpha.iter().all(|row| {
                        let f = row
                            .iter()
                            .zip(e)
                            .fold(Scalar::one(), |acc, (a, k)| acc * a.pow(k as i32).expect("power"));
                        f == *target
                    });
                    if fits {
                        out.push(e);
                    }
                }
            }
        }
    }
    out.sort_by_key(|e| (e.iter().sum::<u32>(), *e));
    out
}

fn metric() -> Run {
    let mut ck = Check::default();
    let pre = load("glpq2")?;
    let geo = pre.geometry()?;
    let spec = &geo.calc.spec;
    let p = &spec.algebra;
    let (pp, qq) = (Scalar::param("p"), Scalar::param("q"));
    let r = pp.clone() * qq.clone();
    let sc = |t: &str| match t {
        "r" => r.clone(),
        "p" => pp.clone(),
        "q" => qq.clone(),
        _ => Scalar::one(),
    };
    let tab = glpq_alpha();
    let alpha: [[Scalar; 4]; 4] = std::array::from_fn(|s| std::array::from_fn(|g| sc(tab[s][g])));

    // the engine's classes: φ_s(g_{ab}) must equal κ g_{ab} with κ = 1, r, r²
    let classes = geo.scaling_classes()?.expect("diagonal images");
    let mut factors: Vec<Scalar> = Vec::new();
    for cl in &classes {
        let uniform = cl.factors.iter().all(|f| *f == cl.factors[0]);
        ck.ok("class factor independent of s", uniform, "");
        factors.push(cl.factors[0].clone());
    }
    let want = [Scalar::one(), r.clone(), r.clone() * r.clone()];
    ck.ok(
        "three classes: fixed, r, r^2",
        factors.len() == 3 && want.iter().all(|w| factors.contains(w)),
        format!("{factors:?}"),
    );
    for cl in &classes {
        for &(a, b) in &cl.components {
            let k = usize::from(a == 1) + usize::from(b == 1);
            ck.ok(format!("g[{},{}] class", a + 1, b + 1), cl.factors[0] == want[k], "");
        }
    }

    // oracle: monomials in each class within the exponent bound
    let mono = |e: [u32; 4]| -> nccalc::Result<NCPoly> {
        let t: Vec<String> = ["a", "b", "c", "d"]
            .iter()
            .zip(e)
            .filter(|(_, k)| *k > 0)
            .map(|(g, k)| format!("{g}^{k}"))
            .collect();
        p.parse(&if t.is_empty() { "1".to_string() } else { t.join("*") })
    };
    let mut pick = Vec::new();
    for w in &want {
        let found = monomial_scan(2, &alpha, w);
        ck.ok(format!("scan finds class {w}"), !found.is_empty(), "");
        let nonunit = found.iter().find(|e| e.iter().sum::<u32>() > 0).copied().unwrap_or([0; 4]);
        pick.push(mono(nonunit)?);
    }
    let z = NCPoly::zero;
    let g = Metric::new(
        vec![
            vec![pick[0].clone(), pick[1].clone(), z(), z()],
            vec![pick[1].clone(), pick[2].clone(), z(), z()],
            vec![z(), z(), NCPoly::one(), z()],
            vec![z(), z(), z(), pick[0].clone()],
        ],
        true,
    )?;
    ck.report(&metric_invariance(&geo, &g)?);
    let rr = p.scalar(r.clone());
    let conn = Connection::from_fn(4, |(a, _, b)| match (a == b, a) {
        (true, 1) => rr.clone(),
        (true, _) => NCPoly::one(),
        _ => NCPoly::zero(),
    });
    let rep = metric_compatibility(&geo, &conn, &g)?;
    let agree: Vec<_> = rep.checks.iter().filter(|c| c.name.contains("paths agree")).collect();
    ck.ok("both compatibility paths ran", agree.len() == 4, format!("{}", agree.len()));
    ck.report(&rep);
    Ok(ck)
}

fn tensor_presets() -> Run {
    let mut ck = Check::default();
    let pre = load("tensor_qplane")?;
    let c = &pre.calc;
    let rels = [
        ("{x}*d({x})", "p*q*d({x})*{x}"),
        ("{y}*d({x})", "p*d({x})*{y}"),
        ("{y}*d({y})", "p*q*d({y})*{y}"),
        ("{x}*d({y})", "q*d({y})*{x} + (p*q - 1)*d({x})*{y}"),
    ];
    let subs = [("{x}", "(u*U)"), ("{y}", "(v*V)")];
    let owned: Vec<(String, String)> = rels.iter().map(|(l, r)| (fill(l, &subs), fill(r, &subs))).collect();
    let pairs: Vec<(&str, &str)> = owned.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
    ck.forms(c, &pairs);
    ck.forms(
        c,
        &[
            ("u*d(u)", "p*q*d(u)*u"),
            ("v*d(u)", "p*q*d(u)*v"),
            ("u*d(v)", "d(v)*u + (p*q - 1)*d(u)*v"),
            ("v*d(v)", "p*q*d(v)*v"),
            ("(u*U)*(v*V)", "q*(v*V)*(u*U)"),
        ],
    );

    let pre = load("tensor_hplane")?;
    let c = &pre.calc;
    let rels = [
        ("{x}*d({x}) - d({x})*{x}", "hp*(d({y})*({x} + h*{y}) - d({x})*{y})"),
        ("{y}*d({x}) - d({x})*{y}", "-h*d({y})*{y}"),
        ("{y}*d({y}) - d({y})*{y}", "0"),
        ("{x}*d({y}) - d({y})*{x}", "h*d({y})*{y}"),
        ("d({x})*d({x})", "hp*d({x})*d({y})"),
        ("d({y})*d({y})", "0"),
        ("d({x})*d({y}) + d({y})*d({x})", "0"),
    ];
    let subs = [("{x}", "(v*U + u*V)"), ("{y}", "(v*V)")];
    let owned: Vec<(String, String)> = rels.iter().map(|(l, r)| (fill(l, &subs), fill(r, &subs))).collect();
    let pairs: Vec<(&str, &str)> = owned.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
    ck.forms(c, &pairs);
    ck.forms(
        c,
        &[
            ("v*d(v) - d(v)*v", "0"),
            ("v*d(u) - d(u)*v", "0"),
            ("u*d(v) - d(v)*u", "0"),
            ("u*d(u) - d(u)*u", "(h + hp)*(d(v)*u - d(u)*v)"),
        ],
    );
    Ok(ck)
}

fn property_suites() -> Run {
    let mut ck = Check::default();
    let suites = [
        "twisted-leibniz",
        "d-leibniz",
        "d2",
        "zeta-central",
        "delta-squared",
        "move-left",
        "tensor-l-assoc",
    ];
    for id in presets::ids() {
        let pre = load(id)?;
        let mut rep = properties::run_suites(
            &pre.calc,
            pre.images.as_ref(),
            &suites,
            properties::DEFAULT_INSTANCES,
            properties::DEFAULT_SEED,
        )?;
        rep.title = id.into();
        ck.report(&rep);
    }
    Ok(ck)
}

type Criterion = (&'static str, fn() -> Run);

fn main() {
    let criteria: [Criterion; 12] = [
        ("shift calculus on C[x]", shift_calculus),
        ("Vandermonde determinant", vandermonde),
        ("quantum plane cases a, b, c", quantum_planes),
        ("Heisenberg algebra", heisenberg),
        ("h-deformed plane", h_plane),
        ("Z3 action at a cube root of unity", z3),
        ("twisted Heisenberg algebra", twisted_heisenberg),
        ("GL_{p,q}(2)", glpq),
        ("torsion-free conditions", torsion),
        ("invariant metric on GL_{p,q}(2)", metric),
        ("tensor product calculi", tensor_presets),
        ("property suites on every preset", property_suites),
    ];
    // optional criterion numbers on the command line select a subset
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let t = std::time::Instant::now();
        let secs = || t.elapsed().as_secs_f64();
        match f() {
            Ok(ck) if ck.fails.is_empty() => {
                println!("criterion {:>2} PASS  {title} ({} checks, {:.1}s)", i + 1, ck.count, secs())
            }
            Ok(ck) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({}/{} failed)", i + 1, ck.fails.len(), ck.count);
                for m in ck.fails.iter().take(10) {
                    println!("      {m}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} (error: {e})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all selected criteria passed");
}
