use super::*;
use crate::algebra::NCPoly;
use crate::calculus::{DirectionSet, Form, TWord};
use crate::presets;
use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn geo(id: &str) -> Geometry {
    presets::load(id).unwrap().geometry().unwrap()
}

fn poly(g: &Geometry, t: &str) -> NCPoly {
    g.calc.spec.algebra.parse(t).unwrap()
}

fn form(g: &Geometry, t: &str) -> Form {
    g.calc.parse_form(t).unwrap()
}

fn random_conn(g: &Geometry, rng: &mut ChaCha8Rng) -> Connection {
    let p = &g.calc.spec.algebra;
    Connection::from_fn(g.n(), |_| p.scalar(Scalar::from_int(rng.gen_range(-3..=3))))
}

fn identity_conn(g: &Geometry) -> Connection {
    Connection::from_fn(g.n(), |(a, _, b)| if a == b { NCPoly::one() } else { NCPoly::zero() })
}

fn product(set: &DirectionSet, a: usize, b: usize) -> Option<usize> {
    let (g, elems) = set.group.as_ref()?;
    let c = g.mul(&elems[a], &elems[b]);
    elems.iter().position(|x| *x == c)
}

#[test]
fn quantum_plane_torsion_conditions() {
    let g = geo("quantum_plane_a");
    let conds = torsion_free_conditions(&g).unwrap();
    let text = conds.to_text(&g.calc.spec);
    assert!(text.contains("V[1,2,1] = V[1,1,2] + 1"), "{text}");
    assert!(text.contains("V[2,2,1] = V[2,1,2] - 1"), "{text}");
    assert_eq!(conds.all().count(), 2);
    assert!(conds.biangle.is_empty() && conds.triangle.is_empty());
    assert!(conds.is_consistent());
}

#[test]
fn identity_transport_is_torsion_free() {
    let g = geo("quantum_plane_a");
    let conn = identity_conn(&g);
    assert!(g.is_torsion_free(&conn).unwrap());
    let conds = torsion_free_conditions(&g).unwrap();
    assert!(conds.satisfied_by(&g.calc.spec, &conn));
    assert!(!conds.satisfied_by(&g.calc.spec, &Connection::zero()));
}

#[test]
fn conditions_match_direct_torsion() {
    let g = geo("quantum_plane_a");
    let conds = torsion_free_conditions(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let conn = random_conn(&g, &mut rng);
        assert_eq!(
            conds.satisfied_by(&g.calc.spec, &conn),
            g.is_torsion_free(&conn).unwrap()
        );
    }
}

/// With `t = 1` and constant coefficients,
/// `Θ(θ^s) = Σ (δ^s_{s'} − δ^s_{s's''} + V^s_{s',s''}) θ^{s'}θ^{s''}`.
#[test]
fn group_lattice_torsion_closed_form() {
    for id in ["group_lattice_z3", "poly_shift_S12", "quantum_plane_a"] {
        let g = geo(id);
        let set = &g.calc.spec.set;
        let n = g.n();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let conn = random_conn(&g, &mut rng);
            for s in 0..n {
                let mut expect = Form::zero();
                for a in 0..n {
                    for b in 0..n {
                        let mut c = conn.get((s, a, b)).as_scalar().unwrap();
                        if a == s {
                            c = c + Scalar::one();
                        }
                        if product(set, a, b) == Some(s) {
                            c = c - Scalar::one();
                        }
                        expect = expect.add(&Form::from_scalars([(TWord::pair(a, b), c)]));
                    }
                }
                let expect = g.calc.reduce(&expect);
                assert_eq!(g.torsion(&conn, &Form::theta(s)).unwrap(), expect, "{id}");
            }
        }
    }
}

#[test]
fn biangle_and_triangle_parts_vanish_at_the_canonical_choice() {
    let g = geo("poly_shift_S12");
    let set = &g.calc.spec.set;
    let p = &g.calc.spec.algebra;
    let conn = Connection::from_fn(g.n(), |(s, a, b)| {
        let mut c = Scalar::zero();
        if product(set, a, b) == Some(s) {
            c = c + Scalar::one();
        }
        if a == s {
            c = c - Scalar::one();
        }
        p.scalar(c)
    });
    let conds = torsion_free_conditions(&g).unwrap();
    assert!(!conds.triangle.is_empty());
    for e in conds.biangle.iter().chain(&conds.triangle) {
        assert!(e.residue(&g.calc.spec, &conn).is_zero(), "{}", e.fmt(&g.calc.spec));
    }
}

#[test]
fn nabla_leibniz() {
    let g = geo("quantum_plane_a");
    let p = &g.calc.spec.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let conn = random_conn(&g, &mut rng);
    for f in ["x", "y^2*x + 3", "x*y - y"] {
        let f = poly(&g, f);
        for a in 0..g.n() {
            let lhs = g.nabla(&conn, &Form::term(TWord::single(a), f.clone())).unwrap();
            let base = g.nabla(&conn, &Form::theta(a)).unwrap();
            let df = g.calc.d(&Form::from_poly(f.clone())).unwrap();
            for b in 0..g.n() {
                let mut rhs = base.slots[b].left_mul(p, &f);
                if b == a {
                    rhs = rhs.add(&df);
                }
                let diff = g.calc.reduce(&lhs.slots[b].sub(&rhs));
                assert!(diff.is_zero(), "{}", g.calc.fmt(&diff));
            }
        }
    }
}

#[test]
fn curvature_of_zero_connection_is_minus_zeta_like() {
    for id in ["quantum_plane_a", "poly_shift_sym", "group_lattice_z3"] {
        let g = geo(id);
        let vt = g.calc.vartheta().unwrap();
        let dvt = g.calc.d(&vt).unwrap();
        let z = g.calc.reduce(&dvt.sub(&g.calc.wedge(&vt, &vt).unwrap()));
        for a in 0..g.n() {
            let r = g.curvature(&Connection::zero(), &Form::theta(a)).unwrap();
            for (b, slot) in r.slots.iter().enumerate() {
                let expect = if a == b { z.neg() } else { Form::zero() };
                assert_eq!(g.calc.reduce(slot), expect, "{id}");
            }
        }
        if id == "quantum_plane_a" {
            assert!(z.is_zero());
        } else {
            assert!(!z.is_zero());
        }
    }
}

#[test]
fn curvature_needs_two_forms() {
    let g = geo("glpq2");
    assert!(matches!(
        g.curvature(&Connection::zero(), &Form::theta(0)),
        Err(crate::error::Error::Unsupported(_))
    ));
}

#[test]
fn tensor_l_is_associative_and_semi_left_linear() {
    let g = geo("quantum_plane_a");
    let p = &g.calc.spec.algebra;
    let a = form(&g, "x*th_1 + y*th_2");
    let b = form(&g, "y^2*th_1");
    let c = form(&g, "x*th_2 + th_1");
    let ab_c = g.tensor_l(&g.tensor_l(&a, &b).unwrap(), &c).unwrap();
    let a_bc = g.tensor_l(&a, &g.tensor_l(&b, &c).unwrap()).unwrap();
    assert_eq!(ab_c, a_bc);

    let (x, y) = (poly(&g, "x"), poly(&g, "y"));
    let t = form(&g, "th_2");
    // θ^s ⊗_L (f T) = f θ^s ⊗_L T
    let lhs = g.tensor_l(&Form::theta(0), &t.left_mul(p, &y)).unwrap();
    let rhs = g.tensor_l(&Form::theta(0), &t).unwrap().left_mul(p, &y);
    assert_eq!(lhs, rhs);
    // but not left linear in general: x θ^1 ⊗_L (y T) ≠ y x θ^1 ⊗_L T
    let xth = Form::term(TWord::single(0), x.clone());
    let lhs = g.tensor_l(&xth, &t.left_mul(p, &y)).unwrap();
    let rhs = g.tensor_l(&xth, &t).unwrap().left_mul(p, &y);
    assert_ne!(lhs, rhs);
}

#[test]
fn tensor_a_round_trip_of_phi() {
    let g = geo("glpq2");
    let t = presets::load("glpq2").unwrap();
    assert!(t.images.is_some());
    let w = TensorWord(
        Form::term(TWord::pair(1, 1), poly(&g, "a"))
            .add(&Form::term(TWord::pair(0, 1), poly(&g, "d*b"))),
    );
    let ta = g.to_tensor_a(&w).unwrap();
    for s in 0..g.n() {
        let back = g.phi_inv_tensor(s, &g.phi_tensor(s, &ta).unwrap()).unwrap();
        assert_eq!(back, ta);
    }
}

fn glpq_metric(g: &Geometry) -> Metric {
    let z = NCPoly::zero;
    let (a, d) = (poly(g, "a"), poly(g, "d"));
    let a2 = poly(g, "a^2");
    Metric::new(
        vec![
            vec![d.clone(), a.clone(), z(), z()],
            vec![a, a2, z(), z()],
            vec![z(), z(), NCPoly::one(), z()],
            vec![z(), z(), z(), d],
        ],
        true,
    )
    .unwrap()
}

#[test]
fn glpq_metric_scaling_classes() {
    let g = geo("glpq2");
    let m = glpq_metric(&g);
    let rep = metric_invariance(&g, &m).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let classes: Vec<&String> = rep.notes.iter().filter(|n| n.starts_with("class")).collect();
    assert_eq!(classes.len(), 3, "{:?}", rep.notes);
    assert!(classes.iter().any(|n| n.contains("g[2,2]") && !n.contains("g[1,2]")));
    assert!(classes.iter().any(|n| n.contains("g[1,2]") && n.contains("g[2,1]")));

    // a central-looking but wrong metric: g_11 = a is not invariant
    let mut bad = m.clone();
    bad.g[0][0] = poly(&g, "a");
    assert!(!metric_invariance(&g, &bad).unwrap().passed());
}

#[test]
fn glpq_compatible_connection() {
    let g = geo("glpq2");
    let m = glpq_metric(&g);
    let p = &g.calc.spec.algebra;
    let r = p.parse("p*q").unwrap();
    let conn = Connection::from_fn(4, |(a, _, b)| match (a == b, a) {
        (true, 1) => r.clone(),
        (true, _) => NCPoly::one(),
        _ => NCPoly::zero(),
    });
    let rep = metric_compatibility(&g, &conn, &m).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let rep = metric_compatibility(&g, &identity_conn(&g), &m).unwrap();
    assert!(!rep.passed());
    assert!(rep.failures().all(|c| !c.name.starts_with("paths agree")));
}

#[test]
fn levi_civita_on_quantum_plane() {
    let g = geo("quantum_plane_a");
    let one = Metric::diagonal(vec![NCPoly::one(), NCPoly::one()]);
    let rep = levi_civita_check(&g, &identity_conn(&g), &one).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let rep = levi_civita_check(&g, &Connection::zero(), &one).unwrap();
    assert!(!rep.passed());

    let xy = Metric::diagonal(vec![poly(&g, "x*y"), NCPoly::one()]);
    assert!(!metric_compatibility(&g, &identity_conn(&g), &xy).unwrap().passed());
}

#[test]
fn grid_searches() {
    let g = geo("quantum_plane_a");
    let one = Metric::diagonal(vec![NCPoly::one(), NCPoly::one()]);
    let grid = [Scalar::from_int(-1), Scalar::zero(), Scalar::one()];
    let res = compatibility_grid_search(&g, &one, &grid).unwrap();
    assert_eq!(res.checked, 81 * 2);
    assert!(res.found());
    let id = identity_conn(&g);
    for (s, sols) in res.per_direction.iter().enumerate() {
        assert!(sols
            .iter()
            .any(|c| c.v.iter().all(|(k, v)| k.1 == s && id.get(*k) == *v)));
    }
    assert!(res.to_text(&g).starts_with("bounded search"));
    assert_eq!(res.to_json(&g)["bounded"], true);

    let res = levi_civita_search(&g, &one, &[Scalar::zero(), Scalar::one()]).unwrap();
    assert_eq!(res.checked, 256);
    assert!(res.solutions.contains(&id));
    for c in &res.solutions {
        assert!(levi_civita_check(&g, c, &one).unwrap().passed());
    }

    let big: Vec<Scalar> = (-20..=20).map(Scalar::from_int).collect();
    assert!(levi_civita_search(&g, &one, &big).is_err());
}

#[test]
fn non_inner_calculus_has_no_torsion_conditions() {
    let g = geo("h_plane_r1");
    assert!(matches!(
        torsion_free_conditions(&g),
        Err(crate::error::Error::NotInner(_))
    ));
}
