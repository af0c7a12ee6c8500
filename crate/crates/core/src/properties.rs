//! Randomized property suites. Every instance draws from its own ChaCha
//! stream, so results do not depend on scheduling.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::NCPoly;
use crate::calculus::{Calculus, Form, TWord};
use crate::error::Result;
use crate::geometry::Geometry;
use crate::par;
use crate::report::Report;

pub const SUITES: [&str; 8] = [
    "twisted-leibniz",
    "d-leibniz",
    "d2",
    "zeta-central",
    "delta-squared",
    "move-left",
    "tensor-l-assoc",
    "reduction-order",
];

pub const DEFAULT_INSTANCES: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed;

type Instance<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync + Send + 'a>;

struct Ctx<'a> {
    calc: &'a Calculus,
    geo: Option<Geometry>,
}

impl Ctx<'_> {
    fn elem(&self, rng: &mut ChaCha8Rng) -> NCPoly {
        self.calc.spec.algebra.random_element(rng, 3, 3)
    }

    fn dir(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.calc.spec.n())
    }

    /// `f θ^s g`
    fn one_form(&self, rng: &mut ChaCha8Rng) -> Form {
        let spec = &self.calc.spec;
        let (f, s, g) = (self.elem(rng), self.dir(rng), self.elem(rng));
        spec.right_mul(&Form::term(TWord::single(s), f), &g)
    }

    fn word(&self, rng: &mut ChaCha8Rng, len: usize) -> TWord {
        let n = self.calc.spec.n();
        let ds: Vec<u8> = (0..len).map(|_| rng.gen_range(0..n) as u8).collect();
        TWord::from_slice(&ds)
    }

    fn zero_or(&self, f: &Form) -> Option<String> {
        let r = self.calc.reduce(f);
        (!r.is_zero()).then(|| self.calc.fmt(&r))
    }
}

fn stream_seed(seed: u64, suite: &str) -> u64 {
    // FNV-1a over the suite name, mixed into the user seed
    let mut h: u64 = 0xcbf29ce484222325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ seed
}

fn instance<'a>(ctx: &'a Ctx<'a>, suite: &str) -> std::result::Result<Instance<'a>, String> {
    let calc = ctx.calc;
    let spec = &calc.spec;
    let p = &spec.algebra;
    Ok(match suite {
        "twisted-leibniz" => Box::new(move |rng| {
            let (s, f, g) = (ctx.dir(rng), ctx.elem(rng), ctx.elem(rng));
            let lhs = spec.e(s, &p.mul(&f, &g));
            let rhs = p.mul(&spec.e(s, &f), &spec.phi(s, &g)).add(&p.mul(&f, &spec.e(s, &g)));
            let r = lhs.sub(&rhs);
            Ok((!r.is_zero()).then(|| format!("e_{}: {}", spec.label(s), p.fmt(&r))))
        }),
        "d-leibniz" => Box::new(move |rng| {
            let (f, g) = (ctx.elem(rng), ctx.elem(rng));
            let lhs = spec.differential(&p.mul(&f, &g));
            let rhs = spec
                .right_mul(&spec.differential(&f), &g)
                .add(&spec.differential(&g).left_mul(p, &f));
            Ok(ctx.zero_or(&lhs.sub(&rhs)))
        }),
        "d2" => {
            if !calc.has_two_forms() {
                return Err("first-order calculus".into());
            }
            Box::new(move |rng| {
                let w = if rng.gen_bool(0.5) {
                    Form::from_poly(ctx.elem(rng))
                } else {
                    ctx.one_form(rng)
                };
                Ok(ctx.zero_or(&calc.d(&calc.d(&w)?)?))
            })
        }
        "zeta-central" => {
            let zeta = calc.zeta().map_err(|e| e.to_string())?;
            Box::new(move |rng| {
                let f = ctx.elem(rng);
                Ok(ctx.zero_or(&spec.commutator_with(&zeta, &f)))
            })
        }
        "delta-squared" => {
            let zeta = calc.zeta().map_err(|e| e.to_string())?;
            calc.delta_table().map_err(|e| e.to_string())?;
            Box::new(move |rng| {
                let (f, s, g) = (ctx.elem(rng), ctx.dir(rng), ctx.elem(rng));
                let w = spec.right_mul(&Form::term(TWord::single(s), f.clone()), &g);
                let dd = calc.delta(&calc.delta(&w)?)?;
                if let Some(r) = ctx.zero_or(&dd.add(&calc.graded_commutator(&zeta, &w)?)) {
                    return Ok(Some(format!("Delta^2 + [zeta, .]: {r}")));
                }
                // Δ is a bimodule map
                let bim = spec.right_mul(&calc.delta(&Form::theta(s))?.left_mul(p, &f), &g);
                Ok(ctx
                    .zero_or(&calc.delta(&w)?.sub(&bim))
                    .map(|r| format!("Delta(f th g) = f Delta(th) g: {r}")))
            })
        }
        "move-left" => Box::new(move |rng| {
            let len = rng.gen_range(1..=3);
            let (f, w) = (ctx.elem(rng), ctx.word(rng, len));
            let moved = spec.move_left(&f, &w);
            if moved != calc.mul_raw(&Form::word(w.clone()), &Form::from_poly(f.clone())) {
                return Ok(Some("move_left disagrees with the product".into()));
            }
            let back = spec.move_right(&moved);
            let ok = f.is_zero() && back.is_empty() || back == vec![(w, f)];
            Ok((!ok).then(|| "move_right(move_left(f, w)) != f".to_string()))
        }),
        "tensor-l-assoc" => {
            let geo = ctx.geo.as_ref().ok_or("no θ-images")?;
            Box::new(move |rng| {
                let mut t = Vec::new();
                for _ in 0..3 {
                    let f = Form::term(TWord::single(ctx.dir(rng)), ctx.elem(rng));
                    t.push(f.add(&Form::term(TWord::single(ctx.dir(rng)), ctx.elem(rng))));
                }
                let l = geo.tensor_l(&geo.tensor_l(&t[0], &t[1])?, &t[2])?;
                let r = geo.tensor_l(&t[0], &geo.tensor_l(&t[1], &t[2])?)?;
                let d = l.sub(&r);
                Ok((!d.is_zero()).then(|| calc.fmt(&d)))
            })
        }
        "reduction-order" => {
            if !calc.has_two_forms() {
                return Err("first-order calculus".into());
            }
            Box::new(move |rng| {
                let w = ctx.word(rng, 3);
                let a = calc.pair_rewrite(&w, rng)?;
                let d = a.sub(&calc.reduce(&Form::word(w.clone())));
                Ok((!d.is_zero()).then(|| format!("{}: {}", spec.fmt_word(&w), calc.fmt(&d))))
            })
        }
        other => return Err(format!("unknown suite `{other}`")),
    })
}

/// Runs the named suites (all of [`SUITES`] when `suites` is empty).
/// Suites that need structure the calculus lacks are reported as notes
/// marked "n/a".
pub fn run_suites(
    calc: &Arc<Calculus>,
    images: Option<&Vec<Vec<Form>>>,
    suites: &[&str],
    instances: usize,
    seed: u64,
) -> Result<Report> {
    let geo = match images {
        Some(i) => Some(Geometry::new(calc.clone(), Some(i.clone()))?),
        None => None,
    };
    let ctx = Ctx { calc, geo };
    let names: Vec<&str> = if suites.is_empty() { SUITES.to_vec() } else { suites.to_vec() };
    let mut rep = Report::new("property suites");
    rep.note(format!("seed {seed}, {instances} instances per suite"));
    for name in names {
        if !SUITES.contains(&name) {
            return Err(crate::error::Error::input(format!("unknown suite `{name}`")));
        }
        let run = match instance(&ctx, name) {
            Ok(r) => r,
            Err(why) => {
                rep.note(format!("{name}: n/a ({why})"));
                continue;
            }
        };
        let base = stream_seed(seed, name);
        let results = par::map_range(instances, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base);
            rng.set_stream(i as u64);
            match run(&mut rng) {
                Ok(r) => r,
                Err(e) => Some(format!("error: {e}")),
            }
        });
        let failures: Vec<(usize, String)> = results
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.map(|r| (i, r)))
            .collect();
        let detail = match failures.first() {
            None => String::new(),
            Some((i, r)) => format!("{} failures; first at instance {i}: {r}", failures.len()),
        };
        rep.check(
            format!("{name}: {}/{instances}", instances - failures.len()),
            failures.is_empty(),
            detail,
        );
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn suites_on_a_few_presets() {
        for id in ["quantum_plane_a", "twisted_heisenberg_3", "glpq2", "h_plane_r1"] {
            let pre = presets::load(id).unwrap();
            let rep = run_suites(&pre.calc, pre.images.as_ref(), &[], 20, 1).unwrap();
            assert!(rep.passed(), "{id}: {}", rep.to_text());
        }
    }

    #[test]
    fn not_applicable_is_reported() {
        let pre = presets::load("glpq2").unwrap();
        let rep = run_suites(&pre.calc, pre.images.as_ref(), &[], 5, 1).unwrap();
        for s in ["d2", "zeta-central", "delta-squared", "reduction-order"] {
            assert!(rep.notes.iter().any(|n| n.starts_with(s) && n.contains("n/a")), "{s}");
        }
        let pre = presets::load("h_plane_r1").unwrap();
        let rep = run_suites(&pre.calc, None, &["zeta-central", "tensor-l-assoc"], 5, 1).unwrap();
        assert_eq!(rep.checks.len(), 0);
        assert_eq!(rep.notes.len(), 3);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let pre = presets::load("poly_shift_S12").unwrap();
        let a = run_suites(&pre.calc, pre.images.as_ref(), &[], 10, 7).unwrap();
        let b = run_suites(&pre.calc, pre.images.as_ref(), &[], 10, 7).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(run_suites(&pre.calc, None, &["nope"], 1, 0).is_err());
    }

    /// A calculus with a wrong Δ table must be caught by the Δ² suite.
    #[test]
    fn broken_delta_is_caught() {
        use crate::calculus::TwoFormStructure;
        let pre = presets::load("poly_shift_S12").unwrap();
        let mut ts = TwoFormStructure::clone(pre.calc.ts.as_deref().unwrap());
        let d = ts.delta.as_mut().unwrap();
        d[0] = Form::word(TWord::pair(1, 1)).add(&Form::word(TWord::pair(0, 0)));
        let calc = Arc::new(Calculus::new(pre.calc.spec.clone(), ts).unwrap());
        let rep = run_suites(&calc, None, &["delta-squared", "d2"], 20, 3).unwrap();
        assert!(!rep.passed(), "{}", rep.to_text());
    }
}
