use nccalc::linalg::{det, det_cofactor, rank};
use nccalc::poly::{gcd, Monomial};
use nccalc::presets;
use nccalc::{Poly, Scalar, Var};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small polynomials in `p, q` with integer coefficients.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, i, j)| {
            let m = Monomial::var(Var::new("p"), i).mul(&Monomial::var(Var::new("q"), j));
            acc.add(&Poly::from_int(c).mul(&Poly::term(m, Poly::one().leading_coeff())))
        })
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| Scalar::from_parts(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn gcd_divides_and_is_maximal(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some(), "gcd {:?} misses common factor {:?}", g, c);
        prop_assert_eq!(gcd(&ac, &bc), gcd(&bc, &ac));
    }

    /// Polynomial entries take the fraction-free path, fractions the other.
    #[test]
    fn determinant_paths_agree(entries in prop::collection::vec(scalar(), 9), poly_entries in prop::collection::vec(poly(), 16)) {
        let m: Vec<Vec<Scalar>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        prop_assert_eq!(det(&m).unwrap(), det_cofactor(&m));
        let m: Vec<Vec<Scalar>> = poly_entries
            .chunks(4)
            .map(|r| r.iter().cloned().map(Scalar::from_poly).collect())
            .collect();
        let d = det(&m).unwrap();
        prop_assert_eq!(&d, &det_cofactor(&m));
        prop_assert_eq!(d.is_zero(), rank(&m, 4) < 4);
    }

    #[test]
    fn quantum_plane_product_is_associative(seed in any::<u64>()) {
        let pre = presets::load("quantum_plane_a").unwrap();
        let p = &pre.calc.spec.algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g, h) = (p.random_element(&mut rng, 3, 3), p.random_element(&mut rng, 3, 3), p.random_element(&mut rng, 3, 3));
        prop_assert_eq!(p.mul(&p.mul(&f, &g), &h), p.mul(&f, &p.mul(&g, &h)));
        prop_assert_eq!(p.normalize(&f), f.clone());
        prop_assert_eq!(p.parse(&p.fmt(&f)).unwrap(), f);
    }

    #[test]
    fn d_is_a_derivation_on_the_h_plane(seed in any::<u64>()) {
        let pre = presets::load("h_plane").unwrap();
        let c = &pre.calc;
        let (spec, p) = (&c.spec, &c.spec.algebra);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (p.random_element(&mut rng, 3, 3), p.random_element(&mut rng, 3, 3));
        let lhs = spec.differential(&p.mul(&f, &g));
        let rhs = spec.right_mul(&spec.differential(&f), &g).add(&spec.differential(&g).left_mul(p, &f));
        prop_assert!(c.reduce(&lhs.sub(&rhs)).is_zero());
        // forms print and parse back to themselves
        let text = c.fmt(&lhs);
        prop_assert_eq!(c.parse_form(&text).unwrap(), c.reduce(&lhs));
    }
}
