use std::fmt::Write as _;
use std::path::PathBuf;

use nccalc::calculus::{
    check_differentiability, solve_theta_in_differentials, verify_inner_identities,
    verify_twisted_two_forms, Form, TWord, ThetaSolve,
};
use nccalc::files;
use nccalc::geometry::{
    compatibility_grid_search, levi_civita_check, levi_civita_search, metric_compatibility,
    metric_invariance, torsion_free_conditions, Connection, Metric,
};
use nccalc::presets::{self, CATALOG};
use nccalc::properties;
use nccalc::report::Report;
use nccalc::{Error, Scalar};
use serde_json::{json, Value};

use crate::session::{read, Session, Source};
use crate::{CliError, Command, Outcome, PresetCmd};

type Res = Result<(Option<Session>, Outcome), CliError>;

pub const SUITES: [&str; 7] = [
    "fixtures",
    "inner",
    "leibniz",
    "d2",
    "differentiability",
    "twisted-2forms",
    "properties",
];

pub fn run(cmd: &Command) -> Res {
    use Command::*;
    match cmd {
        Normalize { src, expr } => with(src, |s| normalize(s, expr)),
        D { src, expr } => with(src, |s| differential(s, expr)),
        Commute { src, expr, word } => with(src, |s| commute(s, expr, word)),
        Relations { src } => with(src, relations),
        TwoForms { src } => with(src, two_forms),
        Verify {
            src,
            suites,
            all_presets,
            instances,
            seed,
        } => verify(src, suites, *all_presets, *instances, *seed),
        ThetaSolve { src, coords } => with(src, |s| theta_solve(s, coords.as_deref())),
        Torsion { src, conn } => with(src, |s| torsion(s, conn)),
        TorsionConditions { src } => with(src, torsion_conditions),
        Curvature { src, conn } => with(src, |s| curvature(s, conn)),
        MetricCheck {
            src,
            metric,
            symmetric,
            conn,
            search,
            bound,
        } => with(src, |s| metric_check(s, metric, *symmetric, conn.as_ref(), *search, *bound)),
        LeviCivita {
            src,
            metric,
            symmetric,
            conn,
            search,
            bound,
        } => with(src, |s| levi_civita(s, metric, *symmetric, conn.as_ref(), *search, *bound)),
        Preset { action } => preset(action),
    }
}

fn with(src: &Source, f: impl FnOnce(&Session) -> Result<Outcome, CliError>) -> Res {
    let s = Session::load(src)?;
    let o = f(&s)?;
    Ok((Some(s), o))
}

fn report(rep: &Report) -> Outcome {
    Outcome {
        text: rep.to_text(),
        data: rep.to_json(),
        passed: rep.passed(),
    }
}

fn normalize(s: &Session, expr: &str) -> Result<Outcome, CliError> {
    let out = match &s.calc {
        Some(c) => c.fmt(&c.parse_form(expr)?),
        None => s.algebra.fmt(&s.algebra.parse(expr)?),
    };
    Ok(Outcome::value(&out, json!({ "input": expr, "normal_form": out })))
}

fn differential(s: &Session, expr: &str) -> Result<Outcome, CliError> {
    let c = s.calc()?;
    let out = c.fmt(&c.d(&c.parse_form(expr)?)?);
    Ok(Outcome::value(&out, json!({ "input": expr, "d": out })))
}

fn parse_word(s: &Session, word: &str) -> Result<TWord, CliError> {
    let spec = &s.calc()?.spec;
    let ds: Vec<u8> = word
        .split(',')
        .map(|l| spec.index(l.trim()).map(|i| i as u8))
        .collect::<nccalc::Result<_>>()?;
    if ds.is_empty() {
        return Err(CliError::Input("empty θ-word".into()));
    }
    Ok(TWord::from_slice(&ds))
}

fn commute(s: &Session, expr: &str, word: &str) -> Result<Outcome, CliError> {
    let c = s.calc()?;
    let spec = &c.spec;
    let f = spec.algebra.parse(expr)?;
    let w = parse_word(s, word)?;
    let moved = c.fmt(&spec.move_left(&f, &w));
    let lhs = format!("{}*({})", spec.fmt_word(&w), spec.fmt_poly(&f));
    Ok(Outcome::value(
        format!("{lhs} = {moved}"),
        json!({ "word": spec.fmt_word(&w), "element": spec.fmt_poly(&f), "result": moved }),
    ))
}

fn relations(s: &Session) -> Result<Outcome, CliError> {
    let c = s.calc()?;
    let spec = &c.spec;
    let p = &spec.algebra;
    let mut text = String::new();
    let mut rows = Vec::new();
    for sd in 0..spec.n() {
        for (g, gen) in p.generator_polys().iter().zip(p.generators()) {
            let th = format!("th_{}", spec.label(sd));
            let rhs = c.fmt(&spec.move_left(g, &TWord::single(sd)));
            let _ = writeln!(text, "{th}*{} = {rhs}", gen.name);
            rows.push(json!({ "lhs": format!("{th}*{}", gen.name), "rhs": rhs }));
        }
    }
    let mut diffs = Vec::new();
    for (g, gen) in p.generator_polys().iter().zip(p.generators()) {
        let dg = c.fmt(&spec.differential(g));
        let _ = writeln!(text, "d({}) = {dg}", gen.name);
        diffs.push(json!({ "generator": gen.name, "d": dg }));
    }
    if spec.is_inner() {
        let vt = c.fmt(&c.vartheta()?);
        let _ = writeln!(text, "vartheta = {vt}");
        return Ok(Outcome::value(text, json!({ "commutation": rows, "differentials": diffs, "vartheta": vt })));
    }
    Ok(Outcome::value(text, json!({ "commutation": rows, "differentials": diffs })))
}

fn two_forms(s: &Session) -> Result<Outcome, CliError> {
    let c = s.calc()?;
    let spec = &c.spec;
    let mut text = String::new();
    let basis: Vec<String> = c.basis(2)?.iter().map(|w| spec.fmt_word(w)).collect();
    let _ = writeln!(text, "basis: {}", basis.join(", "));
    let mut rules = Vec::new();
    for (w, f) in c.pair_rules()? {
        let line = format!("{} = {}", spec.fmt_word(&w), c.fmt(&f));
        let _ = writeln!(text, "{line}");
        rules.push(line);
    }
    let mut data = json!({ "basis": basis, "rules": rules });
    if let Ok(delta) = c.delta_table() {
        let mut v = Vec::new();
        for (sd, f) in delta.iter().enumerate() {
            let line = format!("Delta(th_{}) = {}", spec.label(sd), c.fmt(&c.reduce(f)));
            let _ = writeln!(text, "{line}");
            v.push(line);
        }
        data["delta"] = json!(v);
    }
    if let Ok(z) = c.zeta() {
        let z = c.fmt(&z);
        let _ = writeln!(text, "zeta = {z}");
        data["zeta"] = json!(z);
    }
    let mut v = Vec::new();
    for sd in 0..spec.n() {
        let line = format!("d(th_{}) = {}", spec.label(sd), c.fmt(c.dtheta(sd)?));
        let _ = writeln!(text, "{line}");
        v.push(line);
    }
    data["dtheta"] = json!(v);
    Ok(Outcome::value(text, data))
}

fn na(rep: &mut Report, suite: &str, why: impl std::fmt::Display) {
    rep.note(format!("{suite}: n/a ({why})"));
}

/// Runs one suite, folding "not applicable" into a note.
fn suite(s: &Session, name: &str, instances: usize, seed: u64, rep: &mut Report) -> Result<(), CliError> {
    let c = s.calc()?;
    match name {
        "fixtures" => match &s.preset {
            Some(p) => rep.extend(p.run()?),
            None => na(rep, name, "no fixtures outside presets"),
        },
        "inner" => {
            if c.spec.is_inner() {
                rep.extend(verify_inner_identities(c)?);
            } else {
                na(rep, name, "calculus is not inner");
            }
        }
        "leibniz" | "d2" | "properties" => {
            let names: &[&str] = match name {
                "leibniz" => &["twisted-leibniz", "d-leibniz"],
                "d2" => &["d2"],
                _ => &[],
            };
            rep.extend(properties::run_suites(c, s.images.as_ref(), names, instances, seed)?);
        }
        "differentiability" => match &s.images {
            Some(imgs) => {
                for sd in 0..c.spec.n() {
                    let mut r = check_differentiability(c, &c.spec.dirs[sd].phi, &imgs[sd], s.simple)?;
                    r.title = format!("phi_{}", c.spec.label(sd));
                    rep.extend(r);
                }
            }
            None => na(rep, name, "images of the basis 1-forms are not known"),
        },
        "twisted-2forms" => match c.ts.as_deref() {
            Some(ts) if ts.delta.is_some() && c.spec.is_inner() => {
                rep.extend(verify_twisted_two_forms(c.spec.clone(), ts.clone())?);
            }
            Some(_) => na(rep, name, "no Δ table"),
            None => na(rep, name, "first-order calculus"),
        },
        other => {
            return Err(CliError::Input(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(())
}

fn verify_session(s: &Session, suites: &[String], instances: usize, seed: u64) -> Result<Report, CliError> {
    let names: Vec<&str> = if suites.is_empty() {
        SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut rep = Report::new(format!("verify {}", s.name));
    for n in names {
        suite(s, n, instances, seed, &mut rep)?;
    }
    Ok(rep)
}

fn verify(src: &Source, suites: &[String], all: bool, instances: usize, seed: u64) -> Res {
    if !all {
        return with(src, |s| Ok(report(&verify_session(s, suites, instances, seed)?)));
    }
    let mut text = String::new();
    let mut docs = Vec::new();
    let mut passed = true;
    for id in presets::ids() {
        let mut s = Session::from_preset(presets::load(id)?);
        s.simple |= src.simple;
        let rep = verify_session(&s, suites, instances, seed)?;
        passed &= rep.passed();
        text.push_str(&rep.to_text());
        docs.push(json!({ "preset": id, "report": rep.to_json() }));
    }
    Ok((None, Outcome { text, data: json!(docs), passed }))
}

fn theta_solve(s: &Session, coords: Option<&str>) -> Result<Outcome, CliError> {
    let c = s.calc()?;
    let spec = &c.spec;
    let coords = match coords {
        Some(t) => t
            .split(',')
            .map(|e| spec.algebra.parse(e.trim()))
            .collect::<nccalc::Result<Vec<_>>>()?,
        None => s
            .coords
            .clone()
            .ok_or_else(|| CliError::Input("give --coords".into()))?,
    };
    match solve_theta_in_differentials(spec, &coords)? {
        ThetaSolve::Solved(sol) => {
            let mut text = String::new();
            for sd in 0..spec.n() {
                let _ = writeln!(text, "th_{} = {}", spec.label(sd), sol.fmt_theta(spec, sd));
            }
            if let Some(d) = &sol.det {
                let _ = writeln!(text, "det = {d}");
            }
            Ok(Outcome::value(text, sol.to_json(spec)))
        }
        ThetaSolve::Singular { matrix, column } => {
            let rows: Vec<Vec<String>> = matrix
                .iter()
                .map(|r| r.iter().map(|f| spec.fmt_poly(f)).collect())
                .collect();
            let mut text = format!("no invertible pivot in column {column}; matrix e_s(coord):\n");
            for r in &rows {
                let _ = writeln!(text, "  [{}]", r.join(", "));
            }
            Ok(Outcome {
                text,
                data: json!({ "singular": true, "column": column, "matrix": rows }),
                passed: false,
            })
        }
    }
}

fn load_conn(s: &Session, path: &PathBuf) -> Result<Connection, CliError> {
    Ok(files::parse_connection(&s.calc()?.spec, &read(path)?)?)
}

fn load_metric(s: &Session, path: &PathBuf, symmetric: bool) -> Result<Metric, CliError> {
    Ok(files::parse_metric(&s.calc()?.spec, &read(path)?, symmetric)?)
}

fn torsion(s: &Session, conn: &PathBuf) -> Result<Outcome, CliError> {
    let geo = s.geometry()?;
    let conn = load_conn(s, conn)?;
    let spec = &geo.calc.spec;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut free = true;
    for sd in 0..geo.n() {
        let t = geo.torsion(&conn, &Form::theta(sd))?;
        free &= t.is_zero();
        let v = geo.calc.fmt(&t);
        let _ = writeln!(text, "Theta(th_{}) = {v}", spec.label(sd));
        rows.push(json!({ "direction": spec.label(sd), "torsion": v }));
    }
    let _ = writeln!(text, "torsion-free: {}", if free { "yes" } else { "no" });
    Ok(Outcome::value(text, json!({ "torsion": rows, "torsion_free": free })))
}

fn torsion_conditions(s: &Session) -> Result<Outcome, CliError> {
    let geo = s.geometry()?;
    let conds = torsion_free_conditions(&geo)?;
    let spec = &geo.calc.spec;
    let mut data = conds.to_json(spec);
    data["consistent"] = json!(conds.is_consistent());
    Ok(Outcome::value(conds.to_text(spec), data))
}

fn curvature(s: &Session, conn: &PathBuf) -> Result<Outcome, CliError> {
    let geo = s.geometry()?;
    let conn = load_conn(s, conn)?;
    let spec = &geo.calc.spec;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut flat = true;
    for sd in 0..geo.n() {
        let r = geo.curvature(&conn, &Form::theta(sd))?;
        flat &= r.is_zero();
        let v = geo.fmt_form_tensor(&r);
        let _ = writeln!(text, "R(th_{}) = {v}", spec.label(sd));
        rows.push(json!({ "direction": spec.label(sd), "curvature": v }));
    }
    let _ = writeln!(text, "flat: {}", if flat { "yes" } else { "no" });
    Ok(Outcome::value(text, json!({ "curvature": rows, "flat": flat })))
}

fn grid(bound: i64) -> Result<Vec<Scalar>, CliError> {
    if bound < 0 {
        return Err(CliError::Input("--bound must be non-negative".into()));
    }
    Ok((-bound..=bound).map(Scalar::from_int).collect())
}

fn metric_check(
    s: &Session,
    metric: &PathBuf,
    symmetric: bool,
    conn: Option<&PathBuf>,
    search: bool,
    bound: i64,
) -> Result<Outcome, CliError> {
    let geo = s.geometry()?;
    let g = load_metric(s, metric, symmetric)?;
    let mut rep = Report::new("metric check");
    match metric_invariance(&geo, &g) {
        Ok(r) => rep.extend(r),
        Err(Error::Unsupported(why)) => rep.note(format!("invariance: n/a ({why})")),
        Err(e) => return Err(e.into()),
    }
    if let Some(path) = conn {
        rep.extend(metric_compatibility(&geo, &load_conn(s, path)?, &g)?);
    }
    let mut o = report(&rep);
    if search {
        let res = compatibility_grid_search(&geo, &g, &grid(bound)?)?;
        o.text.push_str(&res.to_text(&geo));
        o.data["search"] = res.to_json(&geo);
    }
    Ok(o)
}

fn levi_civita(
    s: &Session,
    metric: &PathBuf,
    symmetric: bool,
    conn: Option<&PathBuf>,
    search: bool,
    bound: i64,
) -> Result<Outcome, CliError> {
    let geo = s.geometry()?;
    let g = load_metric(s, metric, symmetric)?;
    match (conn, search) {
        (Some(path), _) => Ok(report(&levi_civita_check(&geo, &load_conn(s, path)?, &g)?)),
        (None, true) => {
            let res = levi_civita_search(&geo, &g, &grid(bound)?)?;
            Ok(Outcome::value(res.to_text(&geo), res.to_json(&geo)))
        }
        (None, false) => Err(CliError::Input("give --conn or --search".into())),
    }
}

fn preset(action: &PresetCmd) -> Res {
    match action {
        PresetCmd::List => {
            let mut text = String::new();
            for (id, summary) in CATALOG {
                let _ = writeln!(text, "{id:<22} {summary}");
            }
            let data: Vec<Value> = CATALOG
                .iter()
                .map(|(id, summary)| json!({ "id": id, "summary": summary }))
                .collect();
            Ok((None, Outcome::value(text, json!(data))))
        }
        PresetCmd::Show { id } => {
            let p = presets::load(id)?;
            let toml = files::calculus_to_toml(&p.calc, p.images.as_ref())?;
            let mut text = String::new();
            let _ = writeln!(text, "# {}: {}", p.id, p.summary);
            for c in p.side_conditions() {
                let _ = writeln!(text, "# assumes {c}");
            }
            for f in &p.fixtures {
                let _ = writeln!(text, "# fixture: {}", f.name);
            }
            text.push_str(&toml);
            let data = json!({
                "id": p.id,
                "summary": p.summary,
                "side_conditions": p.side_conditions(),
                "fixtures": p.fixtures.iter().map(|f| f.name.clone()).collect::<Vec<_>>(),
                "file": toml,
            });
            Ok((Some(Session::from_preset(p)), Outcome::value(text, data)))
        }
        PresetCmd::Run { id } => {
            let p = presets::load(id)?;
            let mut rep = p.run()?;
            rep.title = id.to_string();
            if p.images.is_some() {
                rep.extend(p.differentiability()?);
            }
            Ok((Some(Session::from_preset(p)), report(&rep)))
        }
    }
}
