use super::*;
use crate::geometry::Geometry;
use crate::presets;

const QPLANE: &str = r#"
[generators]
names = ["x", "y"]

[params]
side_conditions = ["p*q != 1"]

[relations]
rules = [["y*x", "q^-1*x*y"]]

[directions]
labels = ["1", "2"]
group = { abelian = [0, 0] }
elements = { "1" = [1, 0], "2" = [0, 1] }

[automorphisms."1"]
x = "(p*q)^-1*x"
y = "(p*q)^-1*y"

[inverses."1"]
x = "p*q*x"
y = "p*q*y"

[automorphisms."2"]
y = "(p*q)^-1*y"

[inverses."2"]
y = "p*q*y"

[weights]
"1" = "1"
"2" = "1"

[two_forms]
kind = "group_derived"
"#;

#[test]
fn hand_written_quantum_plane() {
    let l = load_calculus(QPLANE).unwrap();
    let c = &l.calc;
    assert!(c.has_two_forms());
    assert_eq!(c.spec.side_conditions, vec!["p*q != 1".to_string()]);
    let lhs = c.parse_form("x*d(x)").unwrap();
    let rhs = c.parse_form("p*q*d(x)*x").unwrap();
    assert_eq!(lhs, rhs);
    let r = c.parse_form("d(x)*d(x)").unwrap();
    assert!(r.is_zero());
}

#[test]
fn presentation_only_file() {
    let p = load_presentation("[generators]\nnames = [\"a\", \"b\"]\n[relations]\nrules = [[\"b*a\", \"q*a*b\"]]\n").unwrap();
    let f = p.parse("b*a*b").unwrap();
    assert_eq!(p.fmt(&f), p.fmt(&p.parse("q*a*b^2").unwrap()));
}

#[test]
fn malformed_files_are_input_errors() {
    let cases = [
        "not toml [",
        "[generators]\nnames = [\"x\"]\nbogus = 1\n",
        "[generators]\nnames = [\"x\"]\n",
        "[generators]\nnames = [\"x\"]\n[directions]\nlabels = [\"1\"]\n",
        "[generators]\nnames = [\"x\"]\n[directions]\nlabels = [\"1\"]\n[weights]\n\"1\" = \"1\"\n[twists]\n\"1\" = \"x\"\n",
        "[generators]\nnames = [\"x\"]\n[directions]\nlabels = [\"1\"]\n[weights]\n\"2\" = \"1\"\n",
        "[generators]\nnames = [\"x\"]\n[directions]\nlabels = [\"1\"]\n[automorphisms.\"1\"]\nx = \"x + 1\"\n[weights]\n\"1\" = \"1\"\n",
    ];
    for text in cases {
        match load_calculus(text) {
            Err(Error::Input(_)) | Err(Error::Parse { .. }) => {}
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    // an automorphism that breaks the relation is caught on load
    let bad = QPLANE.replace("x = \"(p*q)^-1*x\"", "x = \"y\"");
    assert!(matches!(load_calculus(&bad), Err(Error::RelationViolated { .. })));
}

#[test]
fn every_preset_round_trips() {
    for id in presets::ids() {
        let pre = presets::load(id).unwrap();
        let text = calculus_to_toml(&pre.calc, pre.images.as_ref()).unwrap();
        let back = load_calculus(&text).unwrap_or_else(|e| panic!("{id}: {e}\n{text}"));
        assert_eq!(back.calc.has_two_forms(), pre.calc.has_two_forms(), "{id}");
        assert_eq!(back.images.is_some(), pre.images.is_some(), "{id}");
        let again = calculus_to_toml(&back.calc, back.images.as_ref()).unwrap();
        assert_eq!(text, again, "{id}");
        // the preset's own fixtures hold for the reloaded calculus
        let mut copy = pre.clone();
        copy.calc = back.calc.clone();
        copy.images = back.images.clone();
        let rep = copy.run_fixtures();
        assert!(rep.passed(), "{id}: {}", rep.to_text());
    }
}

#[test]
fn connection_and_metric_blocks() {
    let pre = presets::load("quantum_plane_a").unwrap();
    let spec = &pre.calc.spec;
    let text = "# identity transport\nV[1,1,1] = 1\nV[1,2,1] = 1\n\nV[2,1,2] = 1  # comment\nV[2,2,2] = 1\n";
    let conn = parse_connection(spec, text).unwrap();
    let geo: Geometry = pre.geometry().unwrap();
    assert!(geo.is_torsion_free(&conn).unwrap());
    let printed = connection_to_text(spec, &conn);
    assert_eq!(parse_connection(spec, &printed).unwrap(), conn);

    let g = parse_metric(spec, "g[1,2] = x*y\ng[2,2] = 1\n", true).unwrap();
    assert_eq!(g.g[1][0], g.g[0][1]);
    assert!(g.g[0][0].is_zero());
    assert_eq!(parse_metric(spec, &metric_to_text(spec, &g), false).unwrap().g, g.g);

    for bad in ["V[1,2] = 1", "V[1,2,3] = 1", "W[1,1,1] = 1", "V[1,1,1] =", "V[1,1,1] = 1\nV[1,1,1] = 2"] {
        assert!(parse_connection(spec, bad).is_err(), "{bad}");
    }
    assert!(parse_metric(spec, "g[1,2] = x\ng[2,1] = y\n", true).is_err());
}
