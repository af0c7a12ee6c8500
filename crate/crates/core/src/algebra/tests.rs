use std::sync::Arc;

use super::*;
use crate::Scalar;

fn qplane() -> Presentation {
    PresentationBuilder::new()
        .generator("x", false)
        .generator("y", false)
        .relation("x*y", "q*y*x")
        .build()
        .unwrap()
}

fn glpq() -> Presentation {
    PresentationBuilder::new()
        .generator("a", false)
        .generator("b", false)
        .generator("c", false)
        .generator("d", false)
        .relation("a*b", "p*b*a")
        .relation("a*c", "q*c*a")
        .relation("b*c", "(q/p)*c*b")
        .relation("b*d", "q*d*b")
        .relation("c*d", "p*d*c")
        .relation("a*d", "d*a + (p - q^-1)*b*c")
        .build()
        .unwrap()
}

#[test]
fn quantum_plane_orders_x_before_y() {
    let p = qplane();
    assert_eq!(p.parse("y*x").unwrap(), p.parse("q^-1*x*y").unwrap());
    assert_eq!(p.fmt(&p.parse("y*x").unwrap()), "1/q*x*y");
}

#[test]
fn heisenberg_normal_form() {
    let p = PresentationBuilder::new()
        .generator("x", false)
        .generator("y", false)
        .relation("x*y - y*x", "h")
        .build()
        .unwrap();
    assert_eq!(p.parse("y*x").unwrap(), p.parse("x*y - h").unwrap());
}

#[test]
fn gl_da_rule() {
    let p = glpq();
    let lhs = p.parse("d*a").unwrap();
    let rhs = p.parse("a*d - (p - q^-1)*b*c").unwrap();
    assert_eq!(lhs, rhs);
    assert!(check_local_confluence(&p, 3).is_confluent());
}

#[test]
fn gl_with_inverse_letters_is_confluent() {
    let p = PresentationBuilder::new()
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
        .build()
        .unwrap();
    let rep = check_local_confluence(&p, 3);
    assert!(rep.is_confluent(), "{:?}", rep.failures);
    let x = p.parse("b^-1*a*b").unwrap();
    assert_eq!(x, p.parse("p*a").unwrap());
}

#[test]
fn inconsistent_rules_are_reported() {
    let mut p = Presentation::free(vec![
        Generator { name: "x".into(), invertible: false },
        Generator { name: "y".into(), invertible: false },
    ])
    .unwrap();
    let yx = Word::from_slice(&[1, 0]);
    let xy = Word::from_slice(&[0, 1]);
    p.add_rule_unchecked(yx.clone(), NCPoly::monomial(xy.clone(), Scalar::one()), "yx=xy").unwrap();
    p.add_rule_unchecked(yx, NCPoly::monomial(xy, Scalar::from_int(2)), "yx=2xy").unwrap();
    let rep = check_local_confluence(&p, 3);
    assert!(!rep.is_confluent());
}

#[test]
fn scaling_morphism_on_quantum_plane() {
    let p = Arc::new(qplane());
    let phi = AlgebraMorphism::from_texts(p.clone(), p.clone(), &[("x", "alpha^-1*x"), ("y", "beta^-1*y")]).unwrap();
    let f = p.parse("x*y^2").unwrap();
    assert_eq!(phi.apply(&f).unwrap(), p.parse("alpha^-1*beta^-2*x*y^2").unwrap());
}

#[test]
fn gl_scaling_requires_balanced_determinant() {
    let p = Arc::new(glpq());
    let ok = AlgebraMorphism::from_texts(
        p.clone(),
        p.clone(),
        &[("a", "al*a"), ("b", "be*b"), ("c", "ga*c"), ("d", "be*ga/al*d")],
    );
    assert!(ok.is_ok());
    let bad = AlgebraMorphism::from_texts(
        p.clone(),
        p.clone(),
        &[("a", "al*a"), ("b", "be*b"), ("c", "ga*c"), ("d", "de*d")],
    );
    match bad {
        Err(crate::Error::RelationViolated { relation, .. }) => assert!(relation.contains("a*d")),
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn heisenberg_shift_and_composition() {
    let p = Arc::new(
        PresentationBuilder::new()
            .generator("x", false)
            .generator("y", false)
            .relation("x*y - y*x", "h")
            .build()
            .unwrap(),
    );
    let s = AlgebraMorphism::from_texts(p.clone(), p.clone(), &[("x", "x + a")]).unwrap();
    let sinv = AlgebraMorphism::from_texts(p.clone(), p.clone(), &[("x", "x - a")]).unwrap();
    let s = s.with_inverse(sinv).unwrap();
    let s2 = s.compose(&s).unwrap();
    assert!(s2.is_verified());
    assert!(s2.residues().is_empty());
    assert_eq!(s2.apply(&p.gen("x").unwrap()).unwrap(), p.parse("x + 2*a").unwrap());
}

#[test]
fn tensor_factors_commute() {
    let comm = PresentationBuilder::new()
        .generator("u", false)
        .generator("v", false)
        .relation("v*u", "u*v")
        .build()
        .unwrap();
    let t = tensor_product(&comm, &qplane().clone()).unwrap();
    let p = t.presentation;
    assert!(check_local_confluence(&p, 3).is_confluent());
    let x = p.parse("u*x").unwrap();
    let y = p.parse("v*y").unwrap();
    let lhs = p.mul(&x, &y);
    let rhs = p.scale(&p.mul(&y, &x), &Scalar::param("q"));
    assert_eq!(lhs, rhs);
}

#[test]
fn probe_on_nilpotent_line() {
    let p = PresentationBuilder::new()
        .generator("x", false)
        .relation("x^2", "0")
        .build()
        .unwrap();
    let mu = |name: &'static str| {
        move |f: &NCPoly| -> NCPoly {
            // φ(x) = μ x; on the span of {1, x} this is e(f) = (μ - 1) * (x-part)
            f.terms()
                .filter(|(w, _)| w.len() == 1)
                .map(|(w, c)| (w.clone(), c * &(Scalar::param(name) - Scalar::one())))
                .collect()
        }
    };
    let (e1, e2) = (mu("mu1"), mu("mu2"));
    let ds: [&(dyn Fn(&NCPoly) -> NCPoly + Sync); 2] = [&e1, &e2];
    let rep = basis_independence_probe(&p, &ds, 1);
    assert!(rep.found());
    let f1 = NCPoly::one();
    let f2 = p.parse("-(mu1 - 1)/(mu2 - 1)").unwrap();
    assert!(is_dependency(&p, &ds, &[f1, f2], 1));
}
