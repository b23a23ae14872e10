//! Buchberger's algorithm over the rationals with the product and chain
//! criteria and the normal selection strategy.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};

use crate::exactmath::{Monomial, QPoly, Rational, TermOrder, Universe};

/// Polynomial with terms sorted decreasingly.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct CElem {
    pub(crate) terms: Vec<(Monomial, Rational)>,
}

impl CElem {
    pub(crate) fn from_poly(p: &QPoly, order: &TermOrder) -> CElem {
        let mut terms: Vec<(Monomial, Rational)> =
            p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        let mut c = CElem { terms };
        c.make_monic();
        c
    }

    pub(crate) fn to_poly(&self, u: &Universe) -> QPoly {
        QPoly::from_terms(u, self.terms.iter().cloned())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lm(&self) -> &Monomial {
        &self.terms[0].0
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

    /// `self - k * x^q * other`.
    fn sub_shifted(&self, k: &Rational, q: &Monomial, other: &CElem, order: &TermOrder) -> CElem {
        let shifted = other.terms.iter().map(|(e, c)| (e.mul(q), c));
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = shifted.peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => order.cmp(&x.0 .0, &y.0 .0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match ord {
                Ordering::Greater => out.push(a.next().expect("peeked").clone()),
                Ordering::Less => {
                    let (e, c) = b.next().expect("peeked");
                    out.push((e, -(k * c)));
                }
                Ordering::Equal => {
                    let (e, x) = a.next().expect("peeked");
                    let (_, y) = b.next().expect("peeked");
                    let v = x - k * y;
                    if !v.is_zero() {
                        out.push((e.clone(), v));
                    }
                }
            }
        }
        CElem { terms: out }
    }
}

pub(crate) struct Engine<'a> {
    pub(crate) order: &'a TermOrder,
    pub(crate) max_steps: u64,
    pub(crate) steps: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), String> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(format!("reduction step budget of {} exhausted", self.max_steps));
        }
        Ok(())
    }

    pub(crate) fn normal_form(&mut self, f: &CElem, g: &[CElem], tail: bool) -> Result<CElem, String> {
        let mut f = f.clone();
        let mut done: Vec<(Monomial, Rational)> = Vec::new();
        let mut idx = 0;
        while idx < f.terms.len() {
            let (lm, lc) = f.terms[idx].clone();
            match g.iter().find(|r| r.lm().divides(&lm)) {
                Some(r) => {
                    self.tick()?;
                    let rest = CElem { terms: f.terms.split_off(idx) };
                    let reduced = rest.sub_shifted(&lc, &lm.div(r.lm()), r, self.order);
                    done.append(&mut f.terms);
                    f = reduced;
                    idx = 0;
                }
                None => {
                    if !tail {
                        break;
                    }
                    idx += 1;
                }
            }
        }
        done.append(&mut f.terms);
        let mut out = CElem { terms: done };
        out.make_monic();
        Ok(out)
    }

    pub(crate) fn groebner(&mut self, gens: &[CElem]) -> Result<Vec<CElem>, String> {
        let mut basis: Vec<CElem> = Vec::new();
        let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
        let mut done: HashSet<(usize, usize)> = HashSet::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let h = self.normal_form(g, &basis, false)?;
            if !h.is_zero() {
                push(h, &mut basis, &mut pairs);
            }
        }
        while let Some(&(deg, i, j)) = pairs.iter().next() {
            pairs.remove(&(deg, i, j));
            let (li, lj) = (basis[i].lm().clone(), basis[j].lm().clone());
            let l = li.lcm(&lj);
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lm().divides(&l)
                    && done.contains(&(i.min(k), i.max(k)))
                    && done.contains(&(j.min(k), j.max(k)))
            });
            done.insert((i, j));
            if chain || li.coprime(&lj) {
                continue;
            }
            let s = s_poly(&basis[i], &basis[j], self.order);
            self.tick()?;
            let h = self.normal_form(&s, &basis, false)?;
            if !h.is_zero() {
                if h.lm().is_one() {
                    return Ok(vec![h]);
                }
                push(h, &mut basis, &mut pairs);
            }
        }
        self.interreduce(basis)
    }

    fn interreduce(&mut self, basis: Vec<CElem>) -> Result<Vec<CElem>, String> {
        let mut keep: Vec<CElem> = Vec::new();
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
            let others: Vec<CElem> =
                keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            out.push(self.normal_form(&keep[i], &others, true)?);
        }
        out.sort_by(|a, b| self.order.cmp(&a.lm().0, &b.lm().0));
        Ok(out)
    }
}

fn push(h: CElem, basis: &mut Vec<CElem>, pairs: &mut BTreeSet<(u32, usize, usize)>) {
    let j = basis.len();
    for (i, b) in basis.iter().enumerate() {
        pairs.insert((b.lm().lcm(h.lm()).degree(), i, j));
    }
    basis.push(h);
}

/// S-polynomial of two monic elements.
fn s_poly(f: &CElem, g: &CElem, order: &TermOrder) -> CElem {
    let l = f.lm().lcm(g.lm());
    let q = l.div(f.lm());
    let fi = CElem { terms: f.terms.iter().map(|(e, c)| (e.mul(&q), c.clone())).collect() };
    fi.sub_shifted(&Rational::one(), &l.div(g.lm()), g, order)
}

/// Whether every S-polynomial of `gb` reduces to zero modulo `gb`.
pub(crate) fn spairs_reduce_to_zero(gb: &[CElem], eng: &mut Engine) -> Result<bool, String> {
    for i in 0..gb.len() {
        for j in i + 1..gb.len() {
            let s = s_poly(&gb[i], &gb[j], eng.order);
            if !eng.normal_form(&s, gb, false)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
