use std::sync::Arc;

use super::calc::Calculus;
use super::form::{Form, TWord};
use super::spec::CalculusSpec;
use super::twoform::TwoFormStructure;
use crate::algebra::{normal_words, AlgebraMorphism, NCPoly, Word};
use crate::error::{Error, Result};
use crate::linalg;
use crate::report::Report;
use crate::scalar::Scalar;

fn residue(calc: &Calculus, lhs: &Form, rhs: &Form) -> Option<String> {
    let r = calc.reduce(&lhs.sub(rhs));
    (!r.is_zero()).then(|| calc.fmt(&r))
}

/// Test forms: every `θ^s`, every `g θ^s` for generators `g`, and the
/// surviving degree-2 words.
fn sample_forms(calc: &Calculus) -> Result<Vec<Form>> {
    let spec = &calc.spec;
    let gens = spec.algebra.generator_polys();
    let mut out = Vec::new();
    for s in 0..spec.n() {
        out.push(Form::theta(s));
        for g in &gens {
            out.push(Form::term(TWord::single(s), g.clone()));
        }
    }
    for w in calc.basis(2)? {
        out.push(Form::word(w));
    }
    Ok(out)
}

/// The identities every calculus that is inner at first order must satisfy:
/// `[ϑ, f] = df`, `ζ = dϑ − ϑ²` central, `Δ(ζ) = 0`, `dζ = [ϑ, ζ]`,
/// `Δ² = −[ζ, ·]` and `d² = 0`.
pub fn verify_inner_identities(calc: &Calculus) -> Result<Report> {
    let spec = &calc.spec;
    let p = &spec.algebra;
    let mut rep = Report::new("inner identities");
    let vt = calc.vartheta()?;
    let gens = p.generator_polys();
    for (g, name) in gens.iter().zip(p.generators()) {
        let lhs = calc.graded_commutator(&vt, &Form::from_poly(g.clone()))?;
        rep.check_zero(
            format!("[vartheta, {}] = d{}", name.name, name.name),
            residue(calc, &lhs, &spec.differential(g)),
        );
    }
    if !calc.has_two_forms() {
        rep.note("first-order calculus: identities of degree 2 not applicable");
        return Ok(rep);
    }
    let zeta = calc.zeta()?;
    let def = calc.d(&vt)?.sub(&calc.wedge(&vt, &vt)?);
    rep.check_zero("zeta = d(vartheta) - vartheta^2", residue(calc, &zeta, &def));
    for (g, name) in gens.iter().zip(p.generators()) {
        rep.check_zero(
            format!("[zeta, {}] = 0", name.name),
            residue(calc, &spec.commutator_with(&zeta, g), &Form::zero()),
        );
    }
    rep.check_zero("Delta(zeta) = 0", residue(calc, &calc.delta(&zeta)?, &Form::zero()));
    rep.check_zero(
        "d(zeta) = [vartheta, zeta]",
        residue(calc, &calc.d(&zeta)?, &calc.graded_commutator(&vt, &zeta)?),
    );
    for w in sample_forms(calc)? {
        let dd = calc.delta(&calc.delta(&w)?)?;
        let zc = calc.graded_commutator(&zeta, &w)?;
        rep.check_zero(
            format!("Delta^2 + [zeta, .] on {}", calc.fmt(&w)),
            residue(calc, &dd.add(&zc), &Form::zero()),
        );
    }
    for (g, name) in gens.iter().zip(p.generators()) {
        let dd = calc.d(&spec.differential(g))?;
        rep.check_zero(format!("d(d{}) = 0", name.name), residue(calc, &dd, &Form::zero()));
    }
    for s in 0..spec.n() {
        let dd = calc.d(calc.dtheta(s)?)?;
        rep.check_zero(
            format!("d(d th_{}) = 0", spec.label(s)),
            residue(calc, &dd, &Form::zero()),
        );
    }
    Ok(rep)
}

/// Validates a proposed 2-form structure for a calculus built from twisted
/// inner derivations: the identity obtained by commuting `f` through
/// `ζ = −Σ λ_s Δ(θ^s) + Σ λ_s φ_s(λ_{s'}) θ^sθ^{s'}` and the condition
/// `f ζ_{s,s'} = ζ_{s,s'} φ_{ss'}(f)` on the coefficients of `ζ`.
pub fn verify_twisted_two_forms(
    spec: Arc<CalculusSpec>,
    candidate: TwoFormStructure,
) -> Result<Report> {
    let mut rep = Report::new("twisted 2-form structure");
    let calc = match Calculus::new(spec.clone(), candidate) {
        Ok(c) => c,
        Err(e) => {
            rep.check("candidate is well formed", false, e.to_string());
            return Ok(rep);
        }
    };
    let p = &spec.algebra;
    let n = spec.n();
    let delta = calc.delta_table()?.clone();
    let lambda: Vec<NCPoly> = (0..n).map(|s| spec.lambda(s).cloned()).collect::<Result<_>>()?;
    // λ_s φ_s(λ_{s'}) for all ordered pairs
    let ll: Vec<Vec<NCPoly>> = (0..n)
        .map(|s| (0..n).map(|t| p.mul(&lambda[s], &spec.phi(s, &lambda[t]))).collect())
        .collect();
    for (g, gen) in p.generator_polys().iter().zip(p.generators()) {
        let mut lhs = Form::zero();
        let mut rhs = Form::zero();
        for s in 0..n {
            for t in 0..n {
                let w = TWord::pair(s, t);
                let c = p.mul(g, &ll[s][t]).sub(&p.mul(&ll[s][t], &spec.phi_word(&w, g)));
                lhs.add_term(w, c);
            }
            let c = p.mul(g, &lambda[s]).sub(&p.mul(&lambda[s], &spec.phi(s, g)));
            rhs = rhs.add(&delta[s].left_mul(p, &c));
        }
        rep.check_zero(
            format!("commutation identity for f = {}", gen.name),
            residue(&calc, &lhs, &rhs),
        );
    }
    let zeta = calc.zeta()?;
    let mut formula = Form::zero();
    for s in 0..n {
        formula = formula.sub(&delta[s].left_mul(p, &lambda[s]));
        for t in 0..n {
            formula.add_term(TWord::pair(s, t), ll[s][t].clone());
        }
    }
    rep.check_zero("zeta from lambda and Delta", residue(&calc, &zeta, &formula));
    let vt = calc.vartheta()?;
    let def = calc.d(&vt)?.sub(&calc.wedge(&vt, &vt)?);
    rep.check_zero("zeta = d(vartheta) - vartheta^2", residue(&calc, &zeta, &def));
    for (w, z) in zeta.terms() {
        for (g, gen) in p.generator_polys().iter().zip(p.generators()) {
            let r = p.mul(g, z).sub(&p.mul(z, &spec.phi_word(w, g)));
            rep.check_zero(
                format!("zeta coefficient of {} against {}", spec.fmt_word(w), gen.name),
                (!r.is_zero()).then(|| p.fmt(&r)),
            );
        }
    }
    for s in 0..n {
        let dd = calc.d(calc.dtheta(s)?)?;
        rep.check_zero(
            format!("d(d th_{}) = 0", spec.label(s)),
            residue(&calc, &dd, &Form::zero()),
        );
    }
    let xi: Vec<String> = calc.basis(2)?.iter().map(|w| spec.fmt_word(w)).collect();
    rep.note(format!("2-form basis: {}", xi.join(", ")));
    Ok(rep)
}

/// Image of a form under an algebra map extended by the given images of the
/// basis 1-forms.
pub fn apply_to_form(
    calc: &Calculus,
    phi: &AlgebraMorphism,
    theta_images: &[Form],
    form: &Form,
) -> Result<Form> {
    let p = &calc.spec.algebra;
    let mut out = Form::zero();
    for (w, f) in form.terms() {
        let imgs: Vec<&Form> = w.dirs().map(|s| &theta_images[s]).collect();
        let prod = calc.wedge_all(imgs)?;
        out = out.add(&prod.left_mul(p, &phi.apply(f)?));
    }
    Ok(calc.reduce(&out))
}

/// Whether `phi` extends to a map of forms sending `θ^s` to
/// `theta_images[s]` and commuting with `d`. When `simple` is set the
/// calculus is taken to have no nonzero central 1-forms, so `φ(ϑ) = ϑ` is
/// required; otherwise the central difference `φ(ϑ) − ϑ` is reported.
pub fn check_differentiability(
    calc: &Calculus,
    phi: &AlgebraMorphism,
    theta_images: &[Form],
    simple: bool,
) -> Result<Report> {
    let spec = &calc.spec;
    let p = &spec.algebra;
    let n = spec.n();
    if theta_images.len() != n {
        return Err(Error::input("one image per basis 1-form is required"));
    }
    if theta_images.iter().any(|f| f.degree().is_some_and(|d| d != 1)) {
        return Err(Error::input("images of basis 1-forms must be 1-forms"));
    }
    let phi_inv = phi
        .inverse_morphism()
        .ok_or_else(|| Error::input("the map needs a verified inverse"))?;
    let mut rep = Report::new("differentiability");
    let gens = p.generator_polys();
    for (g, gen) in gens.iter().zip(p.generators()) {
        let lhs = spec.differential(&phi.apply(g)?);
        let mut rhs = Form::zero();
        for (s, img) in theta_images.iter().enumerate() {
            rhs = rhs.add(&img.left_mul(p, &phi.apply(&spec.e(s, g))?));
        }
        rep.check_zero(
            format!("d phi({0}) = sum phi(e_s {0}) phi(th_s)", gen.name),
            residue(calc, &lhs, &rhs),
        );
    }
    for (s, img) in theta_images.iter().enumerate() {
        for (g, gen) in gens.iter().zip(p.generators()) {
            let moved = phi.apply(&spec.phi(s, &phi_inv.apply(g)?))?;
            let lhs = spec.right_mul(img, g);
            let rhs = img.left_mul(p, &moved);
            rep.check_zero(
                format!("phi(th_{}) {} commutation", spec.label(s), gen.name),
                residue(calc, &lhs, &rhs),
            );
        }
    }
    if spec.is_inner() {
        let vt = calc.vartheta()?;
        let mut img = Form::zero();
        for (s, t) in theta_images.iter().enumerate() {
            img = img.add(&t.left_mul(p, &phi.apply(spec.lambda(s)?)?));
        }
        let corr = img.sub(&vt);
        let (central, witness) = spec.is_central_one_form(&corr);
        let detail = match witness {
            None => String::new(),
            Some((s, g)) => format!("fails against {g} along th_{s}"),
        };
        rep.check("phi(vartheta) - vartheta is central", central, detail);
        if simple {
            rep.check_zero(
                "phi(vartheta) = vartheta",
                (!corr.is_zero()).then(|| spec.fmt_form(&corr)),
            );
        } else if corr.is_zero() {
            rep.note("phi(vartheta) = vartheta");
        } else {
            rep.note(format!("vartheta_phi = {}", spec.fmt_form(&corr)));
        }
    }
    if let Some(ts) = &calc.ts {
        for (i, rel) in ts.relations.iter().enumerate() {
            let img = apply_to_form(calc, phi, theta_images, rel)?;
            rep.check_zero(
                format!("2-form relation #{i} preserved"),
                (!img.is_zero()).then(|| calc.fmt(&img)),
            );
        }
    }
    Ok(rep)
}

/// Basis of the central 1-forms `Σ α_s θ^s` whose coefficients are
/// combinations of normal words of length at most `bound`. An empty result
/// is evidence, not proof, that the first-order calculus is simple.
pub fn central_one_forms(spec: &CalculusSpec, bound: usize) -> Vec<Form> {
    let p = &spec.algebra;
    let words = normal_words(p, bound);
    let n = spec.n();
    let gens = p.generator_polys();
    let nw = words.len();
    let mut out = Vec::new();
    // directions decouple: solve one coefficient at a time
    for s in 0..n {
        let images: Vec<NCPoly> = gens.iter().map(|g| spec.phi(s, g)).collect();
        let mut eqs: std::collections::BTreeMap<(usize, Word), Vec<Scalar>> = Default::default();
        for (j, m) in words.iter().enumerate() {
            let mp = NCPoly::monomial(m.clone(), Scalar::one());
            for (gi, g) in gens.iter().enumerate() {
                let r = p.mul(&mp, &images[gi]).sub(&p.mul(g, &mp));
                for (w, c) in r.terms() {
                    let row = eqs
                        .entry((gi, w.clone()))
                        .or_insert_with(|| vec![Scalar::zero(); nw]);
                    row[j] = &row[j] + c;
                }
            }
        }
        let m: linalg::Matrix = eqs.into_values().collect();
        for v in linalg::nullspace(&m, nw) {
            let coeff: NCPoly = words
                .iter()
                .zip(&v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect();
            out.push(Form::term(TWord::single(s), p.normalize(&coeff)));
        }
    }
    out
}
