use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    parse_expr, primitive_integer_vector, ExprAlgebra, Monomial, QPoly, Rational, TermOrder,
    Universe,
};

/// Element of the Weyl algebra `D_m`, normally ordered (all `c` to the left
/// of all `d`), with coefficients that may be polynomials in parameters.
///
/// Stored as a polynomial over the universe `c1..cm, d1..dm, params...`;
/// the commutative storage is read as the normally ordered word.
#[derive(Clone, PartialEq)]
pub struct WeylElement {
    m: usize,
    poly: QPoly,
}

/// Universe `c1..cm, d1..dm` followed by the given parameter names.
pub fn weyl_universe<S: AsRef<str>>(m: usize, params: &[S]) -> Universe {
    let mut names: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();
    names.extend((1..=m).map(|i| format!("d{i}")));
    names.extend(params.iter().map(|p| p.as_ref().to_string()));
    Universe::new(&names)
}

fn falling(n: u32, k: u32) -> u64 {
    (0..k).map(|j| (n - j) as u64).product()
}

fn binom(n: u32, k: u32) -> u64 {
    falling(n, k) / falling(k, k)
}

impl WeylElement {
    pub fn zero(u: &Universe, m: usize) -> Self {
        assert!(u.len() >= 2 * m);
        WeylElement { m, poly: QPoly::zero(u) }
    }

    pub fn one(u: &Universe, m: usize) -> Self {
        WeylElement { m, poly: QPoly::one(u) }
    }

    pub fn constant(u: &Universe, m: usize, r: Rational) -> Self {
        WeylElement { m, poly: QPoly::constant(u, r) }
    }

    /// `c_i` (zero-based).
    pub fn c(u: &Universe, m: usize, i: usize) -> Self {
        WeylElement { m, poly: QPoly::var(u, i) }
    }

    /// `d_i` (zero-based).
    pub fn d(u: &Universe, m: usize, i: usize) -> Self {
        WeylElement { m, poly: QPoly::var(u, m + i) }
    }

    /// Parameter number `k` (zero-based, counted after the `2m` Weyl variables).
    pub fn param(u: &Universe, m: usize, k: usize) -> Self {
        WeylElement { m, poly: QPoly::var(u, 2 * m + k) }
    }

    /// Wraps a polynomial whose first `2m` variables are `c` and `d`.
    pub fn from_poly(m: usize, poly: QPoly) -> Self {
        assert!(poly.nvars() >= 2 * m);
        WeylElement { m, poly }
    }

    /// Product of a parameter-and-`c` polynomial (on the left) with `d^e`.
    pub fn coeff_times_d(coeff: &QPoly, m: usize, d_exp: &[u32]) -> Self {
        let mut e = Monomial::one(coeff.nvars());
        for (i, &k) in d_exp.iter().enumerate() {
            e.0[m + i] = k;
        }
        WeylElement { m, poly: coeff.mul_monomial(&e, &Rational::one()) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn universe(&self) -> &Universe {
        self.poly.universe()
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn param_names(&self) -> &[String] {
        &self.universe().names()[2 * self.m..]
    }

    pub fn is_specialized(&self) -> bool {
        self.universe().len() == 2 * self.m
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Raw terms: full exponent vector over the universe and coefficient.
    pub fn raw_terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.poly.terms()
    }

    /// Terms grouped as `(c-exponent, d-exponent) -> coefficient`, the
    /// coefficient being a polynomial in the parameters.
    pub fn grouped(&self) -> BTreeMap<(Vec<u32>, Vec<u32>), QPoly> {
        let pu = Universe::new(self.param_names());
        let mut out: BTreeMap<(Vec<u32>, Vec<u32>), QPoly> = BTreeMap::new();
        for (e, c) in self.poly.terms() {
            let key = (e.0[..self.m].to_vec(), e.0[self.m..2 * self.m].to_vec());
            let pe = Monomial::from_slice(&e.0[2 * self.m..]);
            out.entry(key)
                .or_insert_with(|| QPoly::zero(&pu))
                .add_term(pe, c.clone());
        }
        out
    }

    /// Terms grouped by `d`-exponent with coefficients in `c` and parameters
    /// (the universe of `self` with zero `d`-degrees).
    pub fn by_d(&self) -> BTreeMap<Vec<u32>, QPoly> {
        let u = self.universe();
        let mut out: BTreeMap<Vec<u32>, QPoly> = BTreeMap::new();
        for (e, c) in self.poly.terms() {
            let d = e.0[self.m..2 * self.m].to_vec();
            let mut ce = e.clone();
            for k in self.m..2 * self.m {
                ce.0[k] = 0;
            }
            out.entry(d).or_insert_with(|| QPoly::zero(u)).add_term(ce, c.clone());
        }
        out
    }

    /// Total `d`-degree.
    pub fn order(&self) -> u32 {
        self.poly
            .terms()
            .map(|(e, _)| e.0[self.m..2 * self.m].iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::InvalidInput("Weyl elements over different m".into()));
        }
        self.poly.check_universe(&other.poly)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        WeylElement { m: self.m, poly: self.poly.scale(r) }
    }

    /// Multiplies on the left by a polynomial in `c` and parameters (given
    /// over the same universe with zero `d`-degrees).
    pub fn left_mul_coeff(&self, f: &QPoly) -> Self {
        WeylElement { m: self.m, poly: f * &self.poly }
    }

    /// Rescales to integer coefficients with gcd one and a positive leading
    /// coefficient (degrevlex on the full universe).
    pub fn primitive(&self) -> Self {
        WeylElement { m: self.m, poly: self.poly.primitive() }
    }

    /// Substitutes rational values for all parameters.
    pub fn specialize(&self, values: &[Rational]) -> Self {
        let np = self.param_names().len();
        assert_eq!(values.len(), np, "one value per parameter");
        let u = weyl_universe::<&str>(self.m, &[]);
        let mut out = QPoly::zero(&u);
        for (e, c) in self.poly.terms() {
            let mut v = c.clone();
            for (k, &pw) in e.0[2 * self.m..].iter().enumerate() {
                for _ in 0..pw {
                    v *= &values[k];
                }
            }
            out.add_term(Monomial::from_slice(&e.0[..2 * self.m]), v);
        }
        WeylElement { m: self.m, poly: out }
    }

    /// Re-expresses the element over another universe that contains all
    /// variables it uses (matched by name).
    pub fn embed(&self, u: &Universe) -> Result<Self> {
        Ok(WeylElement { m: self.m, poly: self.poly.embed_by_name(u)? })
    }

    /// Normally ordered product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let m = self.m;
        let u = self.universe().clone();
        let mut out = QPoly::zero(&u);
        for (e1, k1) in self.poly.terms() {
            for (e2, k2) in rhs.poly.terms() {
                let base = k1 * k2;
                // d^beta * c^gamma = sum_k prod_i C(beta_i,k_i) gamma_i^(k_i) c^(gamma-k) d^(beta-k)
                let bounds: Vec<u32> = (0..m).map(|i| e1.0[m + i].min(e2.0[i])).collect();
                let mut k = vec![0u32; m];
                loop {
                    let mut coeff = 1u64;
                    for (i, &ki) in k.iter().enumerate() {
                        coeff *= binom(e1.0[m + i], ki) * falling(e2.0[i], ki);
                    }
                    let mut e = Monomial::one(u.len());
                    for (i, &ki) in k.iter().enumerate() {
                        e.0[i] = e1.0[i] + e2.0[i] - ki;
                        e.0[m + i] = e1.0[m + i] + e2.0[m + i] - ki;
                    }
                    for j in 2 * m..u.len() {
                        e.0[j] = e1.0[j] + e2.0[j];
                    }
                    out.add_term(e, &base * Rational::from_integer(coeff.into()));
                    // advance the multi-index k
                    let mut i = 0;
                    while i < m {
                        if k[i] < bounds[i] {
                            k[i] += 1;
                            break;
                        }
                        k[i] = 0;
                        i += 1;
                    }
                    if i == m {
                        break;
                    }
                }
            }
        }
        WeylElement { m, poly: out }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        Ok(self.mul(rhs))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.universe(), self.m), |acc, _| acc.mul(self))
    }

    /// Parses an expression such as `"c1*d1 - 2*s1 + (c1-c2)*d1*d2"` over the
    /// universe; products are evaluated in the written order.
    pub fn parse(s: &str, u: &Universe, m: usize) -> Result<Self> {
        parse_expr(s)?.eval(&WeylAlgebra { u, m })
    }

    pub fn to_json(&self) -> WeylJson {
        let terms = self
            .grouped()
            .into_iter()
            .rev()
            .map(|((c, d), coeff)| WeylTermJson { c, d, coeff: coeff.to_string() })
            .collect();
        WeylJson { params: self.param_names().to_vec(), terms }
    }

    pub fn from_json(j: &WeylJson, m: usize) -> Result<Self> {
        let u = weyl_universe(m, &j.params);
        let pu = Universe::new(&j.params);
        let mut out = QPoly::zero(&u);
        for t in &j.terms {
            if t.c.len() != m || t.d.len() != m {
                return Err(Error::InvalidInput("exponent vector length differs from m".into()));
            }
            let coeff = QPoly::parse(&t.coeff, &pu)?;
            for (pe, v) in coeff.terms() {
                let mut e = t.c.clone();
                e.extend(&t.d);
                e.extend(pe.0.iter());
                out.add_term(Monomial::from(e), v.clone());
            }
        }
        Ok(WeylElement { m, poly: out })
    }
}

impl std::ops::Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        WeylElement { m: self.m, poly: &self.poly + &rhs.poly }
    }
}

impl std::ops::Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        WeylElement { m: self.m, poly: &self.poly - &rhs.poly }
    }
}

impl std::ops::Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        WeylElement::mul(self, rhs)
    }
}

impl std::ops::Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement { m: self.m, poly: -&self.poly }
    }
}

struct WeylAlgebra<'a> {
    u: &'a Universe,
    m: usize,
}

impl ExprAlgebra for WeylAlgebra<'_> {
    type Elem = WeylElement;

    fn num(&self, r: &Rational) -> WeylElement {
        WeylElement::constant(self.u, self.m, r.clone())
    }

    fn var(&self, name: &str) -> Result<WeylElement> {
        let i = self.u.index_of(name).ok_or_else(|| {
            Error::InvalidInput(format!("unknown variable {name:?} in operator"))
        })?;
        Ok(WeylElement { m: self.m, poly: QPoly::var(self.u, i) })
    }

    fn add(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        &a + &b
    }

    fn mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        a.mul(&b)
    }

    fn neg(&self, a: WeylElement) -> WeylElement {
        -&a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylTermJson {
    pub c: Vec<u32>,
    pub d: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    pub terms: Vec<WeylTermJson>,
}

impl fmt::Display for WeylElement {
    /// Groups terms by `d`-monomial, highest first, e.g.
    /// `(-2*c1+c2)*d1*d2 - s2*d1 + 2*s1*d2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let m = self.m;
        let names = self.universe().names();
        let mut groups: Vec<(Vec<u32>, QPoly)> = self.by_d().into_iter().collect();
        groups.sort_by(|a, b| TermOrder::DegRevLex.cmp(&b.0, &a.0));
        let mut first = true;
        for (d, coeff) in groups {
            let dpart: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let v = &names[m + i];
                    if k == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let dpart = dpart.join("*");
            let mut items: Vec<(bool, String)> = Vec::new();
            if coeff.len() == 1 || dpart.is_empty() {
                let mut ts: Vec<_> = coeff.terms().collect();
                ts.sort_by(|a, b| TermOrder::DegRevLex.cmp(&b.0 .0, &a.0 .0));
                for (e, c) in ts {
                    let neg = c < &Rational::zero();
                    let abs = if neg { -c } else { c.clone() };
                    let s = QPoly::monomial(coeff.universe(), e.clone(), abs).to_string();
                    let s = match (dpart.is_empty(), s.as_str()) {
                        (true, _) => s,
                        (false, "1") => dpart.clone(),
                        (false, _) => format!("{s}*{dpart}"),
                    };
                    items.push((neg, s));
                }
            } else {
                let s = coeff.to_string().replace(' ', "");
                items.push((false, format!("({s})*{dpart}")));
            }
            for (negative, body) in items {
                if first {
                    if negative {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if negative { '-' } else { '+' })?;
                }
                write!(f, "{body}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coefficient vector of `self` (by full exponent) scaled to primitive
/// integers; used for comparisons up to rational scalar.
pub fn proportional(a: &WeylElement, b: &WeylElement) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let key = |w: &WeylElement| {
        let (es, cs): (Vec<Monomial>, Vec<Rational>) =
            w.raw_terms().map(|(e, c)| (e.clone(), c.clone())).unzip();
        (es, primitive_integer_vector(&cs))
    };
    let (ea, ca) = key(a);
    let (eb, cb) = key(b);
    ea == eb && (ca == cb || ca.iter().zip(&cb).all(|(x, y)| *x == -y.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn u1() -> Universe {
        weyl_universe::<&str>(1, &[])
    }

    fn w(s: &str, u: &Universe, m: usize) -> WeylElement {
        WeylElement::parse(s, u, m).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let u = u1();
        assert_eq!(w("d1*c1", &u, 1), w("c1*d1 + 1", &u, 1));
        assert_eq!(w("d1^2*c1", &u, 1), w("c1*d1^2 + 2*d1", &u, 1));
        let u2 = weyl_universe::<&str>(2, &[]);
        assert_eq!(w("d1*c2", &u2, 2), w("c2*d1", &u2, 2));
    }

    #[test]
    fn printer_matches_expected_layout() {
        let u = weyl_universe(2, &["s1", "s2", "nu1"]);
        let p = w("2*s1*d2 - s2*d1 + (-2*c1+c2)*d1*d2", &u, 2);
        assert_eq!(p.to_string(), "(-2*c1+c2)*d1*d2 - s2*d1 + 2*s1*d2");
        assert_eq!(w(&p.to_string(), &u, 2), p);
        let h = w("c1*d1 + c2*d2 - nu1 - s1 - s2", &u, 2);
        assert_eq!(h.to_string(), "c1*d1 + c2*d2 - s1 - s2 - nu1");
        assert_eq!(w("-d1^2 + 3", &u, 2).to_string(), "-d1^2 + 3");
    }

    #[test]
    fn json_roundtrip() {
        let u = weyl_universe(2, &["s1", "s2"]);
        let p = w("(c1 - 3/2*s1)*d1^2*d2 + s2*c2", &u, 2);
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = WeylElement::from_json(&serde_json::from_str(&text).unwrap(), 2).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn specialization_drops_parameters() {
        let u = weyl_universe(1, &["s1"]);
        let p = w("c1*d1 - s1", &u, 1);
        let q = p.specialize(&[rat(5, 1)]);
        assert!(q.is_specialized());
        assert_eq!(q, w("c1*d1 - 5", &u1(), 1));
    }
}
