use super::*;

fn check(id: &str) {
    let p = load(id).unwrap();
    let rep = p.run().unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    if p.images.is_some() {
        let rep = p.differentiability().unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn shifts() {
    check("poly_shift_S12");
    check("poly_shift_sym");
}

#[test]
fn root_of_unity() {
    check("z3_root_of_unity");
}

#[test]
fn group_lattices() {
    check("group_lattice_z3");
    check("group_lattice_s3");
}

#[test]
fn unknown_id() {
    assert!(matches!(load("nope"), Err(Error::UnknownPreset(_))));
}

#[test]
fn quantum_planes() {
    for id in ["quantum_plane_a", "quantum_plane_b", "quantum_plane_c", "quantum_torus"] {
        check(id);
    }
}

#[test]
fn heisenberg_and_h_planes() {
    for id in ["heisenberg", "h_plane", "h_plane_r1"] {
        check(id);
    }
}

#[test]
fn tensor_presets() {
    check("tensor_qplane");
    check("tensor_hplane");
}

#[test]
fn wrong_fixture_is_reported() {
    let mut p = load("quantum_plane_a").unwrap();
    p.fixtures = vec![
        Fixture::form("x*d(x)", "q*d(x)*x"),
        Fixture::form("d(x)*d(x)", "0"),
        Fixture::constant("x"),
        Fixture::central("th_1", true),
    ];
    let rep = p.run_fixtures();
    let failed: Vec<_> = rep.failures().map(|c| c.name.clone()).collect();
    assert_eq!(failed.len(), 3, "{}", rep.to_text());
    assert!(!failed.contains(&"d(x)*d(x) = 0".to_string()));
}

#[test]
fn every_catalog_entry_loads() {
    for id in ids() {
        let p = load(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(p.id, id);
    }
}

#[test]
fn every_rewrite_system_is_locally_confluent() {
    for id in ids() {
        let p = load(id).unwrap();
        let rep = crate::algebra::check_local_confluence(&p.calc.spec.algebra, 4);
        assert!(rep.is_confluent(), "{id}: {:?}", rep.failures.first());
    }
}

#[test]
fn twisted_heisenberg() {
    check("twisted_heisenberg_2");
    check("twisted_heisenberg_3");
}

#[test]
fn glpq2_and_maurer_cartan() {
    check("glpq2");
}
