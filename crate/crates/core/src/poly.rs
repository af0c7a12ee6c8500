//! Multivariate polynomials over ℚ in named parameters.
//!
//! Monomials are ordered graded-lexicographically, with parameter names
//! compared alphabetically. The leading term of a polynomial is the largest
//! monomial under that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub type Rational = BigRational;

/// An interned parameter name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(&'static str);

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static NAMES: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(HashSet::new()))
}

impl Var {
    pub fn new(name: &str) -> Var {
        assert!(!name.is_empty(), "parameter names must be non-empty");
        let mut set = interner().lock().expect("parameter interner poisoned");
        if let Some(existing) = set.get(name) {
            return Var(existing);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Var(leaked)
    }

    pub fn name(self) -> &'static str {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A power product of parameters, sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v, exp));
        Monomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in self.0.iter() {
            if j < b.len() && b[j].0 < v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                if b[j].1 > e {
                    return None;
                }
                if e > b[j].1 {
                    out.push((v, e - b[j].1));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes variable `v`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let mut rest = SmallVec::new();
        let mut exp = 0;
        for &(w, e) in self.0.iter() {
            if w == v {
                exp = e;
            } else {
                rest.push((w, e));
            }
        }
        (exp, Monomial(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // `a` carries an earlier variable that `b` lacks
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with rational coefficients; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(c)
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(v, _)| v))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    fn from_coefficients_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::var(v, k as u32);
            for (m, r) in &c.terms {
                out.add_term(m.mul(&xk), r.clone());
            }
        }
        out
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Smallest exponent of every variable across all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m).expect("monomial content divides"), c.clone()))
                .collect(),
        }
    }

    /// Pseudo-remainder of `self` by `b` in the variable `v`.
    fn prem(&self, b: &Poly, v: Var) -> Poly {
        let db = b.degree_in(v);
        let bc = b.coefficients_in(v);
        let lb = bc[db as usize].clone();
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(v);
            if dr < db {
                return r;
            }
            let lr = r.coefficients_in(v)[dr as usize].clone();
            let shift = Monomial::var(v, dr - db);
            r = r.mul(&lb).sub(&b.mul(&lr).mul_term(&shift, &Rational::one()));
        }
    }

    /// Content with respect to `v`: gcd of the coefficients in `v`.
    fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn substitute_var(&self, v: Var, value: &Poly) -> Poly {
        let coeffs = self.coefficients_in(v);
        let mut out = Poly::zero();
        for c in coeffs.iter().rev() {
            out = out.mul(value).add(c);
        }
        out
    }

    /// Integer content of the coefficients (gcd of numerators over lcm of denominators).
    fn rational_content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Rational::new(num, den)
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let mono = Poly::term(mg, Rational::one());
    if a.is_monomial() || b.is_monomial() {
        return mono;
    }
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);
    mono.mul(&gcd_nomono(&a, &b)).monic()
}

fn gcd_nomono(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // one often divides the other; trial division is far cheaper than a PRS
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    if let Some(g) = heu_gcd(&a.primitive_integer().1, &b.primitive_integer().1) {
        return g.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&a.content_in(v), b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &b.content_in(v));
    }
    let v = *va.iter().next().expect("non-constant polynomial has a variable");
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let cont = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one();
            break;
        }
        let rc = r.content_in(v);
        let r = r.div_exact(&rc).expect("content divides");
        // keep the numeric coefficients from growing along the sequence
        let r = r.scale(&r.rational_content().recip());
        p = q;
        q = r;
    }
    let q = if q.is_one() {
        q
    } else {
        let qc = q.content_in(v);
        q.div_exact(&qc).expect("content divides")
    };
    cont.mul(&q).monic()
}

/// Evaluation/interpolation gcd for integer-coefficient polynomials.
///
/// Substitutes a large integer for one variable, recurses, and lifts the
/// result back by its balanced base-ξ digits. A candidate is returned only
/// when it divides both inputs, which for ξ beyond twice the smaller
/// coefficient bound makes it the gcd up to a constant. `None` means the
/// points tried did not certify anything; the caller falls back to a PRS.
fn heu_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    // integer contents split off at every level: over ℚ any constant
    // divides, so the trial divisions only certify primitive candidates
    let (ca, cb) = (a.rational_content(), b.rational_content());
    let content = Rational::from_integer(ca.numer().gcd(cb.numer()));
    let (a, b) = (a.scale(&ca.recip()), b.scale(&cb.recip()));
    let vars: BTreeSet<Var> = a.vars().union(&b.vars()).copied().collect();
    let Some(&v) = vars.iter().next() else {
        return Some(Poly::constant(content));
    };
    let norm = |p: &Poly| p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default();
    let mut xi = norm(&a).min(norm(&b)) * 2u32 + 29u32;
    for _ in 0..6 {
        let at = Poly::constant(Rational::from_integer(xi.clone()));
        let (ea, eb) = (a.substitute_var(v, &at), b.substitute_var(v, &at));
        if let Some(g) = heu_gcd(&ea, &eb) {
            let h = lift(g, v, &xi).primitive_integer().1;
            if !h.is_zero() && a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return Some(h.scale(&content));
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// Inverse of evaluating `v` at `xi`, reading coefficients as balanced digits.
fn lift(mut g: Poly, v: Var, xi: &BigInt) -> Poly {
    let half = xi / 2u32;
    let inv = Rational::new(BigInt::one(), xi.clone());
    let mut out = Poly::zero();
    let mut k = 0;
    while !g.is_zero() {
        let mut digit = Poly::zero();
        for (m, c) in &g.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(m.clone(), Rational::from_integer(r));
        }
        g = g.sub(&digit).scale(&inv);
        out = out.add(&digit.mul_term(&Monomial::var(v, k), &Rational::one()));
        k += 1;
    }
    out
}

impl Poly {
    /// Scales to integer coefficients with positive leading coefficient; for display only.
    pub fn primitive_integer(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::one(), Poly::zero());
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

pub(crate) fn poly_from_coefficients_in(v: Var, coeffs: &[Poly]) -> Poly {
    Poly::from_coefficients_in(v, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Poly {
        Poly::var(Var::new(n))
    }

    #[test]
    fn grlex_orders_by_degree_then_variable() {
        let q = Monomial::var(Var::new("q"), 1);
        let p2 = Monomial::var(Var::new("p"), 2);
        let p = Monomial::var(Var::new("p"), 1);
        assert!(p2 > q);
        assert!(p > q);
        assert!(q > Monomial::one());
    }

    #[test]
    fn gcd_of_cyclotomic_factorisation() {
        let q = v("q");
        let a = q.pow(3).sub(&Poly::one());
        let b = q.sub(&Poly::one());
        assert_eq!(gcd(&a, &b), b);
        let quot = a.div_exact(&b).unwrap();
        assert_eq!(quot, q.pow(2).add(&q).add(&Poly::one()));
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let common = x.mul(&y).sub(&z.scale(&Rational::from_integer(3.into())));
        let a = common.mul(&x.add(&Poly::one()));
        let b = common.mul(&y.sub(&z)).mul(&y);
        assert_eq!(gcd(&a, &b), common.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let (p, q) = (v("p"), v("q"));
        assert!(gcd(&p.add(&q), &p.sub(&q)).is_one());
    }

    #[test]
    fn gcd_keeps_factors_that_evaluate_to_integers() {
        // p + 1 turns into an integer content once p is substituted
        let (p, q) = (v("p"), v("q"));
        let one = Poly::one();
        let f = p.add(&one);
        let a = f.mul(&q.sub(&p).add(&Poly::from_int(2)));
        let b = f.mul(&f).mul(&p.sub(&one)).mul(&q.add(&one));
        assert_eq!(gcd(&a, &b), f);
        let c = p.mul(&p).mul(&q).sub(&Poly::from_int(3).mul(&q)).add(&one);
        assert_eq!(gcd(&a.mul(&c), &b.mul(&c.mul(&c))), f.mul(&c).monic());
    }

    #[test]
    fn div_exact_rejects_non_divisor() {
        let (p, q) = (v("p"), v("q"));
        assert!(p.mul(&q).add(&Poly::one()).div_exact(&p).is_none());
    }
}
