//! Left Gröbner bases in the polynomial Weyl algebra `D_m` with rational
//! coefficients, under any order compatible with the Weyl relations.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};

use super::{Budget, WeylElement};
use crate::exactmath::{Monomial, QPoly, Rational, TermOrder, Universe};

/// Terms sorted in decreasing order; exponent vectors have length `2m`
/// (`c` block first, then `d`).
#[derive(Clone, Debug, PartialEq)]
pub struct DElem {
    terms: Vec<(Monomial, Rational)>,
}

fn falling(n: u32, k: u32) -> u64 {
    (0..k).map(|j| (n - j) as u64).product()
}

fn binom(n: u32, k: u32) -> u64 {
    falling(n, k) / falling(k, k)
}

impl DElem {
    pub fn from_weyl(w: &WeylElement, order: &TermOrder) -> DElem {
        assert!(w.is_specialized(), "D_m conversion needs a specialized element");
        let mut terms: Vec<(Monomial, Rational)> =
            w.raw_terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        let mut d = DElem { terms };
        d.make_monic();
        d
    }

    pub fn to_weyl(&self, u: &Universe, m: usize) -> WeylElement {
        WeylElement::from_poly(m, QPoly::from_terms(u, self.terms.iter().cloned()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.recip();
                for t in &mut self.terms {
                    t.1 = &t.1 * &inv;
                }
            }
        }
    }

    /// `self - k * other`, merging sorted term lists.
    fn sub_scaled(&self, k: &Rational, other: &DElem, order: &TermOrder) -> DElem {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => order.cmp(&a.0 .0, &b.0 .0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((other.terms[j].0.clone(), -(k * &other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &self.terms[i].1 - k * &other.terms[j].1;
                    if !v.is_zero() {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        DElem { terms: out }
    }

    /// Left multiplication by the word `c^q_c d^q_d` (`q` of length `2m`).
    fn left_mul_word(&self, q: &Monomial, order: &TermOrder) -> DElem {
        if q.is_one() {
            return self.clone();
        }
        let m = q.len() / 2;
        let mut acc: std::collections::BTreeMap<Monomial, Rational> = Default::default();
        for (e, c) in &self.terms {
            let bounds: Vec<u32> = (0..m).map(|i| q.0[m + i].min(e.0[i])).collect();
            let mut k = vec![0u32; m];
            loop {
                let mut coeff = 1u64;
                let mut x = Monomial::one(2 * m);
                for (i, &ki) in k.iter().enumerate() {
                    coeff *= binom(q.0[m + i], ki) * falling(e.0[i], ki);
                    x.0[i] = q.0[i] + e.0[i] - ki;
                    x.0[m + i] = q.0[m + i] + e.0[m + i] - ki;
                }
                let v = c * Rational::from_integer(coeff.into());
                let slot = acc.entry(x).or_insert_with(Rational::zero);
                *slot += v;
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
        let mut terms: Vec<(Monomial, Rational)> =
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        DElem { terms }
    }
}

struct Engine<'a> {
    order: &'a TermOrder,
    budget: &'a Budget,
    steps: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), String> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(format!("reduction step budget of {} exhausted", self.budget.max_steps));
        }
        Ok(())
    }

    fn normal_form(&mut self, f: &DElem, g: &[DElem], tail: bool) -> Result<DElem, String> {
        let mut f = f.clone();
        let mut done: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((lm, lc)) = f.terms.first().cloned() {
            match g.iter().find(|r| r.lm().divides(&lm)) {
                Some(r) => {
                    self.tick()?;
                    let h = r.left_mul_word(&lm.div(r.lm()), self.order);
                    f = f.sub_scaled(&(lc / &h.terms[0].1), &h, self.order);
                }
                None => {
                    if !tail {
                        break;
                    }
                    done.push(f.terms.remove(0));
                }
            }
        }
        done.extend(f.terms);
        let mut out = DElem { terms: done };
        out.make_monic();
        Ok(out)
    }
}

fn d_degree(e: &Monomial) -> u32 {
    let m = e.len() / 2;
    e.0[m..].iter().sum()
}

/// Reduced left Gröbner basis in `D_m`.
pub fn d_groebner_elems(
    gens: &[DElem],
    order: &TermOrder,
    budget: &Budget,
) -> Result<Vec<DElem>, (String, Vec<DElem>)> {
    let mut eng = Engine { order, budget, steps: 0 };
    let mut basis: Vec<DElem> = Vec::new();
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let add = |h: DElem, basis: &mut Vec<DElem>, pairs: &mut BTreeSet<(u32, usize, usize)>| {
        let j = basis.len();
        for (i, b) in basis.iter().enumerate() {
            pairs.insert((b.lm().lcm(h.lm()).degree(), i, j));
        }
        basis.push(h);
    };
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let h = eng.normal_form(g, &basis, false).map_err(|e| (e, basis.clone()))?;
        if !h.is_zero() {
            add(h, &mut basis, &mut pairs);
        }
    }
    while let Some(&(deg, i, j)) = pairs.iter().next() {
        pairs.remove(&(deg, i, j));
        let l = basis[i].lm().lcm(basis[j].lm());
        if d_degree(&l) > budget.max_degree {
            return Err((
                format!("d-degree {} exceeds the budget of {}", d_degree(&l), budget.max_degree),
                basis,
            ));
        }
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
        let s = s_elem(&basis[i], &basis[j], order);
        eng.tick().map_err(|e| (e, basis.clone()))?;
        let h = eng.normal_form(&s, &basis, false).map_err(|e| (e, basis.clone()))?;
        if !h.is_zero() {
            if h.lm().is_one() {
                return Ok(vec![h]);
            }
            add(h, &mut basis, &mut pairs);
        }
    }
    let mut keep: Vec<DElem> = Vec::new();
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
        let others: Vec<DElem> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        out.push(eng.normal_form(&keep[i], &others, true).map_err(|e| (e, keep.clone()))?);
    }
    out.sort_by(|a, b| order.cmp(&a.lm().0, &b.lm().0));
    Ok(out)
}

fn s_elem(f: &DElem, g: &DElem, order: &TermOrder) -> DElem {
    let l = f.lm().lcm(g.lm());
    let fi = f.left_mul_word(&l.div(f.lm()), order);
    let gj = g.left_mul_word(&l.div(g.lm()), order);
    fi.sub_scaled(&(&fi.terms[0].1 / &gj.terms[0].1), &gj, order)
}

/// Whether every S-element of `gb` reduces to zero modulo `gb`.
pub fn spairs_reduce_to_zero(gb: &[DElem], order: &TermOrder, budget: &Budget) -> Result<bool, String> {
    let mut eng = Engine { order, budget, steps: 0 };
    for i in 0..gb.len() {
        for j in i + 1..gb.len() {
            if !eng.normal_form(&s_elem(&gb[i], &gb[j], order), gb, false)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Full normal form in `D_m`.
pub fn d_normal_form_elems(
    f: &DElem,
    g: &[DElem],
    order: &TermOrder,
    budget: &Budget,
) -> Result<DElem, String> {
    Engine { order, budget, steps: 0 }.normal_form(f, g, true)
}

/// Terms of maximal `d`-degree, read as a commutative polynomial over
/// `c1..cm, xi1..xim`.
pub fn initial_form_01(f: &DElem, cxi: &Universe) -> QPoly {
    let top = f.terms.iter().map(|(e, _)| d_degree(e)).max().unwrap_or(0);
    QPoly::from_terms(
        cxi,
        f.terms.iter().filter(|(e, _)| d_degree(e) == top).cloned(),
    )
}
