use std::sync::Arc;

use super::{identity_images, Fixture, Preset};
use crate::algebra::{AlgebraMorphism, PresentationBuilder};
use crate::calculus::{
    verify_twisted_two_forms, Calculus, CalculusSpec, DirectionDef, DirectionSet, Form, TWord,
    TwoFormStructure,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn pairs(items: &[(usize, usize, i64)]) -> Form {
    Form::from_scalars(
        items
            .iter()
            .map(|&(a, b, c)| (TWord::pair(a, b), Scalar::from_int(c))),
    )
}

/// `xy − yx = 1` with `φ_s = id` and inner derivations `[λ_s, ·]`.
pub(super) fn twisted_heisenberg(n: usize) -> Result<Preset> {
    let p = Arc::new(
        PresentationBuilder::new()
            .generator("x", false)
            .generator("y", false)
            .relation("x*y - y*x", "1")
            .build()?,
    );
    let id = || {
        let i = AlgebraMorphism::identity(p.clone());
        i.clone().with_inverse(i)
    };
    let (lambda, ts, fixtures): (&[&str], TwoFormStructure, Vec<Fixture>) = match n {
        2 => (
            &["-y", "x"],
            TwoFormStructure {
                relations: vec![pairs(&[(0, 0, 1)]), pairs(&[(1, 1, 1)]), pairs(&[(0, 1, 1), (1, 0, 1)])],
                delta: Some(vec![Form::zero(), Form::zero()]),
                zeta: Some(pairs(&[(0, 1, 1)])),
                dtheta: None,
            },
            vec![
                Fixture::vartheta("x*d(y) - y*d(x)"),
                Fixture::form("d(x)", "th_1"),
                Fixture::form("d(y)", "th_2"),
                Fixture::zeta("th_1*th_2"),
                Fixture::form("d(th_1)", "0"),
                Fixture::central("th_1", true),
            ],
        ),
        3 => (
            &["-y", "x", "y*x"],
            TwoFormStructure {
                relations: vec![
                    pairs(&[(0, 0, 1)]),
                    pairs(&[(1, 1, 1)]),
                    pairs(&[(2, 2, 1)]),
                    pairs(&[(2, 0, 1), (0, 2, 1)]),
                    pairs(&[(2, 1, 1), (1, 2, 1)]),
                ],
                delta: Some(vec![
                    pairs(&[(0, 2, -1)]),
                    pairs(&[(1, 2, 1)]),
                    pairs(&[(0, 1, -1), (1, 0, -1)]),
                ]),
                zeta: Some(pairs(&[(1, 0, -1)])),
                dtheta: None,
            },
            vec![
                Fixture::form("d(x)", "th_1 - x*th_3"),
                Fixture::form("d(y)", "th_2 + y*th_3"),
                Fixture::zeta("-th_2*th_1"),
                Fixture::delta("3", "-th_1*th_2 - th_2*th_1"),
            ],
        ),
        _ => return Err(Error::input("twisted Heisenberg presets have 2 or 3 directions")),
    };
    let labels: Vec<String> = (1..=n).map(|s| s.to_string()).collect();
    let defs = labels
        .iter()
        .zip(lambda)
        .map(|(l, t)| Ok(DirectionDef::twisted(l, id()?, p.parse(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let spec = Arc::new(CalculusSpec::new(p, defs, DirectionSet::plain(&refs), vec![])?);
    let calc = Arc::new(Calculus::new(spec, ts)?);
    Ok(Preset {
        id: if n == 2 { "twisted_heisenberg_2" } else { "twisted_heisenberg_3" },
        summary: if n == 2 {
            "Heisenberg algebra with two inner derivations"
        } else {
            "Heisenberg algebra with three inner derivations"
        },
        calc,
        images: Some(identity_images(n)),
        simple: false,
        coords: None,
        fixtures,
        extra: Some(|p| {
            let ts = p.calc.ts.as_deref().cloned().unwrap_or_default();
            verify_twisted_two_forms(p.calc.spec.clone(), ts)
        }),
    })
}
