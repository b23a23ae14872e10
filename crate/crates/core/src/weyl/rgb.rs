//! Left Gröbner bases in the rational Weyl algebra `R_m`.
//!
//! Elements are kept as `d`-monomial -> polynomial in `c` with integer
//! coefficients. Since every nonzero polynomial in `c` is a unit of `R_m`,
//! an element is only meaningful up to such a factor: reduction is
//! fraction-free and every intermediate result is divided by the gcd of
//! its coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Signed};

use super::{Budget, WeylElement};
use crate::exactmath::{
    exact_div, poly_gcd, poly_gcd_many, primitive_integer_vector, Integer, Monomial, QPoly,
    Rational, TermOrder, Universe, ZPoly,
};

/// `d`-exponent ordered by degree-reverse-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DMon(pub Monomial);

impl Ord for DMon {
    fn cmp(&self, other: &Self) -> Ordering {
        TermOrder::DegRevLex.cmp(&self.0 .0, &other.0 .0)
    }
}

impl PartialOrd for DMon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `R_m` with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct RElem {
    terms: BTreeMap<DMon, ZPoly>,
}

fn falling(n: u32, k: u32) -> u64 {
    (0..k).map(|j| (n - j) as u64).product()
}

fn binom(n: u32, k: u32) -> u64 {
    falling(n, k) / falling(k, k)
}

/// All multi-indices `k <= bound` componentwise.
fn box_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

impl RElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&DMon, &ZPoly)> {
        self.terms.iter().next_back()
    }

    pub fn lm(&self) -> &Monomial {
        &self.leading().expect("nonzero").0 .0
    }

    pub fn lc(&self) -> &ZPoly {
        self.leading().expect("nonzero").1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ZPoly)> {
        self.terms.iter().rev().map(|(k, v)| (&k.0, v))
    }

    /// Converts a specialized Weyl element, clearing denominators.
    pub fn from_weyl(w: &WeylElement, cu: &Universe) -> RElem {
        assert!(w.is_specialized(), "R_m conversion needs a specialized element");
        let m = w.m();
        let coeffs: Vec<Rational> = w.raw_terms().map(|(_, c)| c.clone()).collect();
        let ints = primitive_integer_vector(&coeffs);
        let mut terms: BTreeMap<DMon, ZPoly> = BTreeMap::new();
        for ((e, _), z) in w.raw_terms().zip(ints) {
            let d = DMon(Monomial::from_slice(&e.0[m..2 * m]));
            let ce = Monomial::from_slice(&e.0[..m]);
            terms.entry(d).or_insert_with(|| ZPoly::zero(cu)).add_term(ce, z);
        }
        terms.retain(|_, v| !v.is_zero());
        let mut r = RElem { terms };
        r.normalize();
        r
    }

    pub fn to_weyl(&self, u: &Universe, m: usize) -> WeylElement {
        let mut out = QPoly::zero(u);
        for (d, a) in &self.terms {
            for (ce, z) in a.terms() {
                let mut e = ce.0.to_vec();
                e.extend(d.0 .0.iter());
                out.add_term(Monomial::from(e), Rational::from_integer(z.clone()));
            }
        }
        WeylElement::from_poly(m, out)
    }

    /// Divides by the polynomial content and makes the leading coefficient's
    /// degrevlex-leading integer coefficient positive.
    pub fn normalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        if let Some(g) = poly_gcd_many(self.terms.values()) {
            if !(g.is_constant() && g.constant_term().is_one()) {
                for v in self.terms.values_mut() {
                    *v = exact_div(v, &g).unwrap_or_else(|| panic!("gcd {g} does not divide {v}"));
                }
            }
        }
        let neg = self
            .lc()
            .leading_term(&TermOrder::DegRevLex)
            .is_some_and(|(_, c)| c.is_negative());
        if neg {
            for v in self.terms.values_mut() {
                *v = -&*v;
            }
        }
    }

    fn scale(&self, f: &ZPoly) -> RElem {
        if f.is_constant() && f.constant_term().is_one() {
            return self.clone();
        }
        RElem { terms: self.terms.iter().map(|(k, v)| (k.clone(), f * v)).collect() }
    }

    fn sub_assign(&mut self, other: &RElem) {
        for (k, v) in &other.terms {
            match self.terms.remove(k) {
                Some(old) => {
                    let s = &old - v;
                    if !s.is_zero() {
                        self.terms.insert(k.clone(), s);
                    }
                }
                None => {
                    self.terms.insert(k.clone(), -v);
                }
            }
        }
    }

    /// Left multiplication by `d^g`.
    pub fn left_mul_d(&self, g: &Monomial) -> RElem {
        if g.is_one() {
            return self.clone();
        }
        let ks = box_indices(&g.0);
        let mut terms: BTreeMap<DMon, ZPoly> = BTreeMap::new();
        for (b, a) in &self.terms {
            for k in &ks {
                let mut der = a.clone();
                let mut coeff = 1u64;
                for (i, &ki) in k.iter().enumerate() {
                    for _ in 0..ki {
                        der = der.derivative(i);
                    }
                    coeff *= binom(g.0[i], ki);
                }
                if der.is_zero() {
                    continue;
                }
                let e: Vec<u32> =
                    (0..g.len()).map(|i| b.0 .0[i] + g.0[i] - k[i]).collect();
                let key = DMon(Monomial::from(e));
                let t = der.scale(&Integer::from(coeff));
                match terms.remove(&key) {
                    Some(old) => {
                        let s = old + t;
                        if !s.is_zero() {
                            terms.insert(key, s);
                        }
                    }
                    None => {
                        terms.insert(key, t);
                    }
                }
            }
        }
        RElem { terms }
    }
}

/// Reduction state shared by the Gröbner routines.
struct Reducer<'a> {
    budget: &'a Budget,
    steps: u64,
}

impl Reducer<'_> {
    fn tick(&mut self) -> Result<(), String> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(format!("reduction step budget of {} exhausted", self.budget.max_steps));
        }
        Ok(())
    }

    /// `f` reduced at term `d` (coefficient `a`) by `g`.
    fn step(&self, f: &RElem, d: &Monomial, a: &ZPoly, g: &RElem) -> RElem {
        let h = g.left_mul_d(&d.div(g.lm()));
        let b = g.lc();
        let mut out = match exact_div(a, b) {
            Some(q) => {
                let mut f = f.clone();
                f.sub_assign(&h.scale(&q));
                f
            }
            None => {
                let g0 = poly_gcd(a, b);
                let bf = exact_div(b, &g0).expect("gcd divides");
                let af = exact_div(a, &g0).expect("gcd divides");
                let mut f = f.scale(&bf);
                f.sub_assign(&h.scale(&af));
                f
            }
        };
        out.normalize();
        out
    }

    /// Full normal form of `f` modulo `g`.
    fn normal_form(&mut self, f: &RElem, g: &[RElem], tail: bool) -> Result<RElem, String> {
        let mut f = f.clone();
        // Terms strictly above `floor` are irreducible and already final.
        let mut floor: Option<DMon> = None;
        loop {
            let next = match &floor {
                None => f.terms.iter().next_back(),
                Some(fl) => f.terms.range(..fl.clone()).next_back(),
            };
            let Some((d, a)) = next else { return Ok(f) };
            let (d, a) = (d.clone(), a.clone());
            match g.iter().find(|r| r.lm().divides(&d.0)) {
                Some(r) => {
                    self.tick()?;
                    f = self.step(&f, &d.0, &a, r);
                }
                None => {
                    if !tail {
                        return Ok(f);
                    }
                    floor = Some(d);
                }
            }
        }
    }
}

fn lcm_deg(a: &Monomial, b: &Monomial) -> u32 {
    a.lcm(b).degree()
}

/// Reduced left Gröbner basis in `R_m` under degrevlex on `d`.
pub fn rweyl_groebner_elems(
    gens: &[RElem],
    budget: &Budget,
) -> Result<Vec<RElem>, (String, Vec<RElem>)> {
    let mut red = Reducer { budget, steps: 0 };
    let mut basis: Vec<RElem> = Vec::new();
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();

    let add = |h: RElem, basis: &mut Vec<RElem>, pairs: &mut BTreeSet<(u32, usize, usize)>| {
        let j = basis.len();
        for (i, b) in basis.iter().enumerate() {
            pairs.insert((lcm_deg(b.lm(), h.lm()), i, j));
        }
        basis.push(h);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let h = red.normal_form(g, &basis, false).map_err(|e| (e, basis.clone()))?;
        if !h.is_zero() {
            add(h, &mut basis, &mut pairs);
        }
    }

    while let Some(&(deg, i, j)) = pairs.iter().next() {
        pairs.remove(&(deg, i, j));
        if deg > budget.max_degree {
            return Err((
                format!("d-degree {} exceeds the budget of {}", deg, budget.max_degree),
                basis,
            ));
        }
        let l = basis[i].lm().lcm(basis[j].lm());
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        done.insert((i, j));
        if chain {
            continue;
        }
        let s = s_elem(&basis[i], &basis[j]);
        red.tick().map_err(|e| (e, basis.clone()))?;
        let h = red.normal_form(&s, &basis, false).map_err(|e| (e, basis.clone()))?;
        if !h.is_zero() {
            if h.lm().is_one() {
                return Ok(vec![h]);
            }
            add(h, &mut basis, &mut pairs);
        }
    }
    interreduce(basis, &mut red)
}

fn interreduce(basis: Vec<RElem>, red: &mut Reducer) -> Result<Vec<RElem>, (String, Vec<RElem>)> {
    // Minimal basis: drop elements whose leading monomial is divisible by
    // another's (keeping the earlier of equal ones).
    let mut keep: Vec<RElem> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<RElem> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let r = red.normal_form(&keep[i], &others, true).map_err(|e| (e, keep.clone()))?;
        out.push(r);
    }
    out.sort_by_key(|a| DMon(a.lm().clone()));
    Ok(out)
}

/// Full normal form in `R_m`.
pub fn rweyl_normal_form_elems(f: &RElem, g: &[RElem], budget: &Budget) -> Result<RElem, String> {
    let mut red = Reducer { budget, steps: 0 };
    red.normal_form(f, g, true)
}

/// S-element of two basis elements.
fn s_elem(f: &RElem, g: &RElem) -> RElem {
    let l = f.lm().lcm(g.lm());
    let (a, b) = (f.lc(), g.lc());
    let g0 = poly_gcd(a, b);
    let mut s = f.left_mul_d(&l.div(f.lm())).scale(&exact_div(b, &g0).expect("divides"));
    s.sub_assign(&g.left_mul_d(&l.div(g.lm())).scale(&exact_div(a, &g0).expect("divides")));
    s.normalize();
    s
}

/// Whether every S-element of `gb` reduces to zero modulo `gb`.
pub fn spairs_reduce_to_zero(gb: &[RElem], budget: &Budget) -> Result<bool, String> {
    let mut red = Reducer { budget, steps: 0 };
    for i in 0..gb.len() {
        for j in i + 1..gb.len() {
            if !red.normal_form(&s_elem(&gb[i], &gb[j]), gb, false)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d`-monomials not divisible by any leading monomial, or `None` when
/// there are infinitely many.
pub fn standard_monomials(lms: &[Monomial], m: usize) -> Option<Vec<Monomial>> {
    if lms.iter().any(|l| l.is_one()) {
        return Some(Vec::new());
    }
    for i in 0..m {
        let pure = lms.iter().any(|l| l.0[i] > 0 && l.0.iter().enumerate().all(|(j, &e)| j == i || e == 0));
        if !pure {
            return None;
        }
    }
    let mut seen: BTreeSet<DMon> = BTreeSet::new();
    let mut stack = vec![Monomial::one(m)];
    seen.insert(DMon(Monomial::one(m)));
    while let Some(x) = stack.pop() {
        for i in 0..m {
            let mut y = x.clone();
            y.0[i] += 1;
            if lms.iter().any(|l| l.divides(&y)) {
                continue;
            }
            if seen.insert(DMon(y.clone())) {
                stack.push(y);
            }
        }
    }
    Some(seen.into_iter().map(|d| d.0).collect())
}
