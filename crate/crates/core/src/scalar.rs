//! Exact rational functions in symbolic parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{gcd, poly_from_coefficients_in, Monomial, Poly, Rational, Var};

/// A rational function `num/den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_poly(Poly::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::from_poly(Poly::constant(r))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(name: &str) -> Self {
        Scalar::from_poly(Poly::var(Var::new(name)))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num/den` and brings it to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        self.num.as_constant().cloned()
    }

    pub fn params(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    fn add_impl(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = self.den.mul(&d1);
        Self::canonical(num, den)
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = other.den.div_exact(&g1).expect("gcd divides");
        let c = other.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Simultaneous substitution of parameters. Fails if the denominator vanishes.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Scalar> {
        let num = eval_poly(&self.num, bindings)?;
        let den = eval_poly(&self.den, bindings)?;
        if den.is_zero() {
            return Err(Error::SingularSubstitution(
                vanishing_factor(&self.den, bindings).to_string(),
            ));
        }
        num.checked_div(&den)
    }

    pub fn substitute_one(&self, v: &str, value: &Scalar) -> Result<Scalar> {
        let mut m = BTreeMap::new();
        m.insert(Var::new(v), value.clone());
        self.substitute(&m)
    }

    /// Denominator with its monomial part split into single parameters.
    pub fn denominator_factors(&self) -> Vec<Poly> {
        split_monomial_factors(&self.den)
    }
}

fn split_monomial_factors(p: &Poly) -> Vec<Poly> {
    if p.is_constant() {
        return Vec::new();
    }
    let m = p.monomial_content();
    let mut out: Vec<Poly> = m.factors().map(|(v, _)| Poly::var(v)).collect();
    let rest = p
        .div_exact(&Poly::term(m, Rational::one()))
        .expect("monomial content divides");
    if !rest.is_constant() {
        out.push(rest);
    }
    out
}

fn vanishing_factor(den: &Poly, bindings: &BTreeMap<Var, Scalar>) -> Poly {
    for f in split_monomial_factors(den) {
        if eval_poly(&f, bindings).map(|s| s.is_zero()).unwrap_or(false) {
            return f;
        }
    }
    den.clone()
}

fn eval_poly(p: &Poly, bindings: &BTreeMap<Var, Scalar>) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_rational(c.clone());
        for (v, e) in m.factors() {
            let f = match bindings.get(&v) {
                Some(s) => s.pow(e as i32)?,
                None => Scalar::from_poly(Poly::term(Monomial::var(v, e), Rational::one())),
            };
            t = &t * &f;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_impl(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_impl(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

fn needs_parens(p: &Poly) -> bool {
    p.len() > 1
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let single_factor = self.den.len() == 1
            && self
                .den
                .leading()
                .is_some_and(|(m, _)| m.factors().count() == 1);
        if single_factor {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// A monic polynomial relation `m(v) = 0` on one parameter, such as
/// `q^2 + q + 1 = 0` for a primitive cube root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRelation {
    pub var: Var,
    /// coefficients of `m` in `v`, constant term first; the last entry is 1
    coeffs: Vec<Scalar>,
}

impl ParamRelation {
    pub fn new(var: Var, minpoly: &Poly) -> Result<Self> {
        let coeffs: Vec<Scalar> = minpoly
            .coefficients_in(var)
            .into_iter()
            .map(Scalar::from_poly)
            .collect();
        if coeffs.len() < 2 {
            return Err(Error::input(format!(
                "relation for `{var}` must have positive degree"
            )));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::input(format!("relation for `{var}` must be monic")));
        }
        Ok(ParamRelation { var, coeffs })
    }

    pub fn minpoly(&self) -> Poly {
        let polys: Vec<Poly> = self.coeffs.iter().map(|c| c.numer().clone()).collect();
        poly_from_coefficients_in(self.var, &polys)
    }

    fn to_upoly(&self, p: &Poly) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = p
            .coefficients_in(self.var)
            .into_iter()
            .map(Scalar::from_poly)
            .collect();
        trim(&mut v);
        v
    }

    fn eval_upoly(&self, u: &[Scalar]) -> Scalar {
        let x = Scalar::param(self.var.name());
        let mut acc = Scalar::zero();
        for c in u.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    fn rem(&self, a: &[Scalar]) -> Vec<Scalar> {
        urem(a, &self.coeffs)
    }

    /// Canonical representative of `s` modulo the relation: degree in `v`
    /// below that of the relation, and no `v` in the denominator.
    pub fn reduce(&self, s: &Scalar) -> Result<Scalar> {
        if !s.params().contains(&self.var) {
            return Ok(s.clone());
        }
        // coefficients free of v may have denominators; collect them as a scalar factor
        let num = self.rem(&self.to_upoly(s.numer()));
        let den_u = self.rem(&self.to_upoly(s.denom()));
        if den_u.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let inv = uinv_mod(&den_u, &self.coeffs)?;
        let prod = self.rem(&umul(&num, &inv));
        Ok(self.eval_upoly(&prod))
    }
}

fn trim(v: &mut Vec<Scalar>) {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
}

fn umul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&mut out);
    out
}

fn usub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_default();
        let y = b.get(k).cloned().unwrap_or_default();
        out.push(&x - &y);
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of univariate division over the field of scalars.
fn udivrem(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut r: Vec<Scalar> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut q = vec![Scalar::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lb_inv;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&c * bj);
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn urem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    udivrem(a, b).1
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn uinv_mod(a: &[Scalar], m: &[Scalar]) -> Result<Vec<Scalar>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<Scalar>, Vec<Scalar>) = (Vec::new(), vec![Scalar::one()]);
    while r1.len() > 1 {
        let (q, r) = udivrem(&r0, &r1);
        let s = usub(&s0, &umul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
    }
    let c = r1[0].inv()?;
    Ok(s1.iter().map(|x| x * &c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Scalar {
        Scalar::param(n)
    }

    #[test]
    fn cancels_common_factor() {
        let q = p("q");
        let num = q.pow(3).unwrap() - Scalar::one();
        let den = &q - &Scalar::one();
        let r = num.checked_div(&den).unwrap();
        assert_eq!(r, q.pow(2).unwrap() + q.clone() + Scalar::one());
        assert!(r.denom().is_one());
    }

    #[test]
    fn inverse_of_weight_cancels() {
        let (a, t) = (p("alpha"), p("t"));
        let x = (Scalar::one() - a.clone()).checked_div(&t).unwrap();
        let y = x.checked_div(&t.inv().unwrap()).unwrap();
        assert_eq!(y, Scalar::one() - a);
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(p("q").checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn substitution_names_vanishing_factor() {
        let s = Scalar::one().checked_div(&(p("r") - Scalar::one())).unwrap();
        let err = s.substitute_one("r", &Scalar::one()).unwrap_err();
        assert!(matches!(err, Error::SingularSubstitution(f) if f.contains('r')));
    }

    #[test]
    fn cube_root_reduction() {
        let q = Var::new("q");
        let m = Poly::var(q).pow(2).add(&Poly::var(q)).add(&Poly::one());
        let rel = ParamRelation::new(q, &m).unwrap();
        let qs = p("q");
        assert_eq!(rel.reduce(&qs.pow(3).unwrap()).unwrap(), Scalar::one());
        let inv = rel.reduce(&qs.inv().unwrap()).unwrap();
        assert_eq!(inv, -qs.clone() - Scalar::one());
        let t = &qs - &Scalar::one();
        let tinv = rel.reduce(&t.inv().unwrap()).unwrap();
        assert_eq!(rel.reduce(&(&tinv * &t)).unwrap(), Scalar::one());
    }
}
