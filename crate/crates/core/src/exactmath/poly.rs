use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{FromPrimitive, Signed};

use super::monomial::{Monomial, TermOrder};
use super::parse::{parse_expr, ExprAlgebra};
use super::rational::primitive_integer_vector;
use super::{Integer, Rational, Ring};
use crate::error::{Error, Result};

/// Ordered list of variable names shared by polynomials that can be combined.
#[derive(Clone, Eq)]
pub struct Universe(Arc<[String]>);

impl Universe {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Universe(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// Names `prefix1 .. prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Universe((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn concat(&self, other: &Universe) -> Universe {
        Universe(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Universe {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Sparse multivariate polynomial: exponent vector to nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<T> {
    vars: Universe,
    terms: BTreeMap<Monomial, T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic on two polynomials over the same universe.
pub fn poly_arith<T: Ring>(a: &MultiPoly<T>, b: &MultiPoly<T>, op: PolyOp) -> Result<MultiPoly<T>> {
    a.check_universe(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl<T: Ring> MultiPoly<T> {
    pub fn zero(vars: &Universe) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Universe) -> Self {
        Self::constant(vars, T::one())
    }

    pub fn constant(vars: &Universe, c: T) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn var(vars: &Universe, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), T::one())
    }

    pub fn monomial(vars: &Universe, m: Monomial, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { vars: vars.clone(), terms }
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, T)>>(vars: &Universe, it: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in it {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn universe(&self) -> &Universe {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, T)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> T {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &T)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0 .0, &b.0 .0))
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_universe(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = x.clone() * c.clone();
                (!y.is_zero()).then(|| (m.clone(), y))
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &T) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, x)| {
                let y = x.clone() * c.clone();
                (!y.is_zero()).then(|| (k.mul(m), y))
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<U: Ring, F: Fn(&T) -> U>(&self, f: F) -> MultiPoly<U> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let u = f(c);
                (!u.is_zero()).then(|| (m.clone(), u))
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Evaluates at a point in any ring the coefficients map into.
    pub fn eval_with<U: Ring, F: Fn(&T) -> U>(&self, point: &[U], conv: F) -> U {
        assert_eq!(point.len(), self.nvars());
        let mut acc = U::zero();
        for (m, c) in &self.terms {
            let mut t = conv(c);
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval(&self, point: &[T]) -> T {
        self.eval_with(point, |c| c.clone())
    }

    /// Replaces variable `i` by `images[i]`; all images share one universe.
    pub fn substitute(&self, images: &[MultiPoly<T>], target: &Universe) -> MultiPoly<T> {
        assert_eq!(images.len(), self.nvars());
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = &t * img;
                }
            }
            out = out + t;
        }
        out
    }

    /// Re-expresses the polynomial in a larger universe; `map[i]` is the
    /// position of variable `i` in `target`.
    pub fn embed(&self, target: &Universe, map: &[usize]) -> MultiPoly<T> {
        let n = target.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, &k) in m.0.iter().enumerate() {
                    e.0[map[i]] += k;
                }
                (e, c.clone())
            })
            .collect::<Vec<_>>();
        MultiPoly::from_terms(target, terms)
    }

    /// Embeds by matching variable names; fails when a used variable is
    /// missing from `target`.
    pub fn embed_by_name(&self, target: &Universe) -> Result<MultiPoly<T>> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(j),
                None if self.degree_in(i) == 0 => map.push(usize::MAX),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "variable {name} not in target universe"
                    )))
                }
            }
        }
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(n);
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e.0[map[i]] += k;
                }
            }
            (e, c.clone())
        });
        Ok(MultiPoly::from_terms(target, terms.collect::<Vec<_>>()))
    }
}

impl<T: Ring + FromPrimitive> MultiPoly<T> {
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[i];
            (e > 0).then(|| {
                let mut k = m.clone();
                k.0[i] -= 1;
                (k, c.clone() * T::from_u32(e).expect("small integer"))
            })
        });
        MultiPoly::from_terms(&self.vars, terms.collect::<Vec<_>>())
    }
}

impl MultiPoly<Rational> {
    /// Integer polynomial obtained by clearing denominators and dividing
    /// by the content, with the degrevlex-leading coefficient positive.
    pub fn to_primitive_z(&self) -> MultiPoly<Integer> {
        let coeffs: Vec<Rational> = self.terms.values().cloned().collect();
        let ints = primitive_integer_vector(&coeffs);
        let mut z = MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.keys().cloned().zip(ints).collect(),
        };
        let negative = z
            .leading_term(&TermOrder::DegRevLex)
            .is_some_and(|(_, c)| c.is_negative());
        if negative {
            z = -z;
        }
        z
    }

    /// [`to_primitive_z`](Self::to_primitive_z) viewed back over the rationals.
    pub fn primitive(&self) -> Self {
        self.to_primitive_z().to_q()
    }
}

impl MultiPoly<Integer> {
    pub fn to_q(&self) -> MultiPoly<Rational> {
        self.map_coeffs(|c| Rational::from_integer(c.clone()))
    }
}

impl MultiPoly<Rational> {
    /// Parses an expanded or parenthesised expression such as
    /// `"-2*c1^2 + 3/4*c2*s1 - 1"` over the given universe.
    pub fn parse(s: &str, vars: &Universe) -> Result<Self> {
        let e = parse_expr(s)?;
        e.eval(&PolyAlgebra(vars))
    }
}

struct PolyAlgebra<'a>(&'a Universe);

impl ExprAlgebra for PolyAlgebra<'_> {
    type Elem = MultiPoly<Rational>;

    fn num(&self, r: &Rational) -> Self::Elem {
        MultiPoly::constant(self.0, r.clone())
    }

    fn var(&self, name: &str) -> Result<Self::Elem> {
        self.0
            .index_of(name)
            .map(|i| MultiPoly::var(self.0, i))
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))
    }

    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        a + b
    }

    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        &a * &b
    }

    fn neg(&self, a: Self::Elem) -> Self::Elem {
        -a
    }
}

impl<T: Ring> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.check_universe(rhs).expect("polynomial universe");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<T: Ring> Add for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(mut self, rhs: MultiPoly<T>) -> MultiPoly<T> {
        self.check_universe(&rhs).expect("polynomial universe");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<T: Ring> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.check_universe(rhs).expect("polynomial universe");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<T: Ring> Sub for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(mut self, rhs: MultiPoly<T>) -> MultiPoly<T> {
        self.check_universe(&rhs).expect("polynomial universe");
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<T: Ring> Mul for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn mul(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        self.check_universe(rhs).expect("polynomial universe");
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Ring> Mul for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn mul(self, rhs: MultiPoly<T>) -> MultiPoly<T> {
        &self * &rhs
    }
}

impl<T: Ring> Neg for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        MultiPoly { vars: self.vars, terms }
    }
}

impl<T: Ring> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        -self.clone()
    }
}

/// Writes `coeff * monomial` in the human-readable style used throughout,
/// e.g. `-3/2*c1^2*s2`. `first` suppresses the leading ` + `.
pub(crate) fn write_term<T: Ring + Signed + fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    c: &T,
    factors: &[(String, u32)],
    first: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let mut wrote = false;
    if !abs.is_one() || factors.is_empty() {
        write!(f, "{abs}")?;
        wrote = true;
    }
    for (name, e) in factors {
        if wrote {
            write!(f, "*")?;
        }
        if *e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
        wrote = true;
    }
    Ok(())
}

pub(crate) fn monomial_factors(names: &[String], m: &Monomial) -> Vec<(String, u32)> {
    names
        .iter()
        .zip(m.0.iter())
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| (n.clone(), e))
        .collect()
}

impl<T: Ring + Signed + fmt::Display> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let order = TermOrder::DegRevLex;
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            write_term(f, c, &monomial_factors(self.vars.names(), m), k == 0)?;
        }
        Ok(())
    }
}

impl<T: Ring + Signed + fmt::Display> fmt::Debug for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn u2() -> Universe {
        Universe::new(&["c1", "c2"])
    }

    fn p(s: &str) -> MultiPoly<Rational> {
        MultiPoly::parse(s, &u2()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("c1 + c2");
        let b = p("c1 - c2");
        assert_eq!(poly_arith(&a, &b, PolyOp::Mul).unwrap(), p("c1^2 - c2^2"));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p("3*c1^2*c2 - 1/2*c2 + 7");
        assert!(poly_arith(&a, &(-&a), PolyOp::Add).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_identity() {
        let a = p("2*c1 - c2");
        let one = MultiPoly::one(&u2());
        assert_eq!(poly_arith(&a, &one, PolyOp::Mul).unwrap(), a);
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let a = p("c1");
        let b = MultiPoly::var(&Universe::new(&["x"]), 0);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn display_roundtrip() {
        let a = p("-3/2*c1^2*c2 + c2 - 4");
        let s = a.to_string();
        assert_eq!(s, "-3/2*c1^2*c2 + c2 - 4");
        assert_eq!(p(&s), a);
    }

    #[test]
    fn derivative_and_substitution() {
        let a = p("c1^3*c2 + 2*c2^2");
        assert_eq!(a.derivative(0), p("3*c1^2*c2"));
        let images = vec![p("c2"), p("c1")];
        assert_eq!(a.substitute(&images, &u2()), p("c2^3*c1 + 2*c1^2"));
        assert_eq!(a.eval(&[rat(2, 1), rat(1, 2)]), rat(9, 2));
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly<Rational>> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..6, 1i64..4), 0..5).prop_map(
            |ts| {
                let vars = Universe::new(&["x", "y", "z"]);
                MultiPoly::from_terms(
                    &vars,
                    ts.into_iter()
                        .map(|((a, b, c), n, d)| (Monomial::from(vec![a, b, c]), rat(n, d))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }
    }
}
