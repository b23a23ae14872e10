//! Holonomic rank from degree-truncated Macaulay matrices evaluated at a
//! random point modulo a large prime.
//!
//! `R_m I` is spanned over `ℚ(c)` by the products `∂^α g`. Those of total
//! `d`-degree at most `D` are expanded exactly, their coefficients evaluated
//! at a random `c₀` modulo `p`, and the rows are echelonized under degrevlex.
//! The leading monomials span a monomial ideal contained in the leading
//! ideal of `R_m I`, so its finite staircase bounds the rank from above; the
//! bound is reported once it is stable over consecutive degrees.

use std::collections::{BTreeSet, HashMap};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rgb::standard_monomials;
use super::{Budget, BudgetExhausted, DIdeal, RankResult};
use crate::exactmath::{add_mod, inv_mod, mul_mod, primes, sub_mod, Monomial, Rational, TermOrder};

/// Consecutive degrees with an identical finite staircase needed to stop.
const STABLE_DEGREES: usize = 2;

/// Element of `D_m` modulo `p`: `(c-exponent, d-exponent) -> coefficient`.
type ModElem = HashMap<(Vec<u32>, Vec<u32>), u64>;

/// Sparse row: column indices strictly decreasing, nonzero values.
type Row = Vec<(usize, u64)>;

fn to_mod(r: &Rational, p: u64) -> Option<u64> {
    let pb = num_bigint::BigInt::from(p);
    let reduce = |x: &num_bigint::BigInt| {
        let v = x % &pb;
        let v = if v < num_bigint::BigInt::zero() { v + &pb } else { v };
        v.to_u64().expect("reduced")
    };
    let den = reduce(r.denom());
    (den != 0).then(|| mul_mod(reduce(r.numer()), inv_mod(den, p), p))
}

/// Left multiplication by `∂_k`: `∂_k c^γ ∂^β = c^γ ∂^{β+e_k} + γ_k c^{γ-e_k} ∂^β`.
fn left_d(e: &ModElem, k: usize, p: u64) -> ModElem {
    let mut out = ModElem::with_capacity(2 * e.len());
    for ((c, d), &x) in e {
        let mut d2 = d.clone();
        d2[k] += 1;
        let v = out.entry((c.clone(), d2)).or_insert(0);
        *v = add_mod(*v, x, p);
        if c[k] > 0 {
            let mut c2 = c.clone();
            c2[k] -= 1;
            let v = out.entry((c2, d.clone())).or_insert(0);
            *v = add_mod(*v, mul_mod(x, c[k] as u64, p), p);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Monomials in `m` variables of total degree exactly `deg`.
fn monomials_of_degree(m: usize, deg: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials_of_degree(m - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Column indices increasing with degrevlex, grown one degree at a time.
struct Columns {
    m: usize,
    index: HashMap<Vec<u32>, usize>,
    mons: Vec<Vec<u32>>,
    degree: Option<u32>,
}

impl Columns {
    fn grow_to(&mut self, deg: u32) {
        let start = self.degree.map_or(0, |d| d + 1);
        for d in start..=deg {
            let mut block = monomials_of_degree(self.m, d);
            block.sort_by(|a, b| TermOrder::DegRevLex.cmp(a, b));
            for mon in block {
                self.index.insert(mon.clone(), self.mons.len());
                self.mons.push(mon);
            }
        }
        self.degree = Some(deg);
    }
}

/// Echelon form kept as leading column -> monic row.
struct Echelon {
    p: u64,
    pivots: HashMap<usize, Row>,
}

impl Echelon {
    /// Top-reduces `row`; inserts it when a new leading column survives.
    fn insert(&mut self, mut row: Row) -> bool {
        let p = self.p;
        while let Some(&(lead, x)) = row.first() {
            let Some(piv) = self.pivots.get(&lead) else {
                let inv = inv_mod(x, p);
                for e in &mut row {
                    e.1 = mul_mod(e.1, inv, p);
                }
                self.pivots.insert(lead, row);
                return true;
            };
            row = axpy(&row, piv, sub_mod(0, x, p), p);
        }
        false
    }
}

/// `a + s * b` on sparse rows.
fn axpy(a: &Row, b: &Row, s: u64, p: u64) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 > b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 > a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, mul_mod(b[j].1, s, p)));
            j += 1;
        } else {
            let v = add_mod(a[i].1, mul_mod(b[j].1, s, p), p);
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Holonomic rank of a specialized ideal by evaluated Macaulay matrices.
/// Probabilistic: the evaluation point and prime are drawn from `seed`.
/// The `d`-degree is capped by `budget.max_degree` and the number of rows by
/// `budget.max_steps`.
pub fn holonomic_rank_modular(
    ideal: &DIdeal,
    budget: &Budget,
    seed: u64,
) -> std::result::Result<RankResult, BudgetExhausted> {
    let exhausted = |reason: String| BudgetExhausted { reason, partial: Vec::new() };
    ideal.require_specialized().map_err(|e| exhausted(e.to_string()))?;
    let m = ideal.m;
    let gens: Vec<_> = ideal.gens.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(RankResult { rank: None, standard_monomials: Vec::new(), groebner_basis: Vec::new() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let skip = rng.gen_range(0..16);
    let mut chosen = None;
    for p in primes().skip(skip).take(64) {
        let elems: Option<Vec<ModElem>> = gens
            .iter()
            .map(|g| {
                g.raw_terms()
                    .map(|(e, r)| Some(((e.0[..m].to_vec(), e.0[m..2 * m].to_vec()), to_mod(r, p)?)))
                    .collect()
            })
            .collect();
        if let Some(elems) = elems {
            chosen = Some((p, elems));
            break;
        }
    }
    let (p, elems) = chosen.ok_or_else(|| exhausted("no usable prime".into()))?;
    let point: Vec<u64> = (0..m).map(|_| rng.gen_range(1..p)).collect();
    let orders: Vec<u32> = gens.iter().map(|g| g.order()).collect();
    let max_c: u32 = gens
        .iter()
        .flat_map(|g| g.raw_terms().map(|(e, _)| e.0[..m].iter().copied().max().unwrap_or(0)))
        .max()
        .unwrap_or(0);
    let powers: Vec<Vec<u64>> = point
        .iter()
        .map(|&x| {
            let mut v = vec![1u64];
            for _ in 0..max_c {
                v.push(mul_mod(*v.last().expect("nonempty"), x, p));
            }
            v
        })
        .collect();

    let mut cols = Columns { m, index: HashMap::new(), mons: Vec::new(), degree: None };
    let mut ech = Echelon { p, pivots: HashMap::new() };
    // Products ∂^α g with |α| = current shift, per generator.
    let mut layer: Vec<HashMap<Vec<u32>, ModElem>> =
        elems.into_iter().map(|e| HashMap::from([(vec![0u32; m], e)])).collect();
    let mut rows_used: u64 = 0;
    let mut history: Vec<BTreeSet<Vec<u32>>> = Vec::new();
    let start = *orders.iter().min().expect("nonempty");
    for deg in start..=budget.max_degree {
        cols.grow_to(deg);
        for (gi, ord) in orders.iter().enumerate() {
            if *ord > deg {
                continue;
            }
            let shift = deg - ord;
            if shift > 0 {
                let mut next: HashMap<Vec<u32>, ModElem> = HashMap::new();
                for (alpha, e) in &layer[gi] {
                    // Each α of the next layer is produced once, from its
                    // predecessor with the first nonzero index lowered.
                    let first = alpha.iter().position(|&a| a > 0).unwrap_or(m - 1);
                    for k in 0..=first {
                        let mut beta = alpha.clone();
                        beta[k] += 1;
                        next.insert(beta, left_d(e, k, p));
                    }
                }
                layer[gi] = next;
            }
            for e in layer[gi].values() {
                rows_used += 1;
                if rows_used > budget.max_steps {
                    return Err(exhausted(format!("row budget {} exceeded", budget.max_steps)));
                }
                let mut acc: HashMap<usize, u64> = HashMap::new();
                for ((c, d), &x) in e {
                    let v = c.iter().enumerate().fold(x, |a, (i, &k)| mul_mod(a, powers[i][k as usize], p));
                    if v != 0 {
                        let slot = acc.entry(cols.index[d]).or_insert(0);
                        *slot = add_mod(*slot, v, p);
                    }
                }
                let mut row: Row = acc.into_iter().filter(|(_, v)| *v != 0).collect();
                row.sort_unstable_by_key(|a| std::cmp::Reverse(a.0));
                ech.insert(row);
            }
        }
        let lms: Vec<Monomial> = ech.pivots.keys().map(|&c| Monomial::from_slice(&cols.mons[c])).collect();
        match standard_monomials(&lms, m) {
            Some(std) => {
                let set: BTreeSet<Vec<u32>> = std.iter().map(|x| x.0.to_vec()).collect();
                let top = set.iter().map(|x| x.iter().sum::<u32>()).max().unwrap_or(0);
                history.push(set);
                let n = history.len();
                let stable = n > STABLE_DEGREES
                    && history[n - 1 - STABLE_DEGREES..].windows(2).all(|w| w[0] == w[1]);
                if stable && deg > top {
                    let set = history.pop().expect("nonempty");
                    let mut std: Vec<Vec<u32>> = set.into_iter().collect();
                    std.sort_by(|a, b| TermOrder::DegRevLex.cmp(a, b));
                    return Ok(RankResult {
                        rank: Some(std.len()),
                        standard_monomials: std,
                        groebner_basis: Vec::new(),
                    });
                }
            }
            None => history.clear(),
        }
    }
    Err(exhausted(format!("staircase not stable up to d-degree {}", budget.max_degree)))
}
