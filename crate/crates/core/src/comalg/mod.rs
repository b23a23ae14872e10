//! Commutative ideals over the rationals: Gröbner bases, elimination,
//! saturation, intersection, radical membership and singular loci.

mod groebner;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Monomial, QPoly, TermOrder, Universe};
use crate::weyl::{initial_ideal_01, Budget, BudgetExhausted, DIdeal};

use groebner::{CElem, Engine};

/// Ideal of `Q[universe]` given by generators.
#[derive(Clone, Debug, PartialEq)]
pub struct CommIdeal {
    universe: Universe,
    gens: Vec<QPoly>,
}

#[derive(Serialize, Deserialize)]
struct CommIdealJson {
    vars: Vec<String>,
    gens: Vec<String>,
}

impl CommIdeal {
    pub fn new(universe: &Universe, gens: Vec<QPoly>) -> Result<Self> {
        for g in &gens {
            if g.universe() != universe {
                return Err(Error::UniverseMismatch {
                    left: universe.names().to_vec(),
                    right: g.universe().names().to_vec(),
                });
            }
        }
        Ok(Self::new_unchecked(universe, gens))
    }

    /// Builds the ideal without checking generator universes; zero
    /// generators are dropped.
    pub fn new_unchecked(universe: &Universe, gens: Vec<QPoly>) -> Self {
        CommIdeal { universe: universe.clone(), gens: gens.into_iter().filter(|g| !g.is_zero()).collect() }
    }

    /// Principal ideal.
    pub fn principal(f: &QPoly) -> Self {
        Self::new_unchecked(f.universe(), vec![f.clone()])
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn gens(&self) -> &[QPoly] {
        &self.gens
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CommIdealJson {
            vars: self.universe.names().to_vec(),
            gens: self.gens.iter().map(|g| g.to_string()).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: CommIdealJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let u = Universe::new(&j.vars);
        let gens = j.gens.iter().map(|g| QPoly::parse(g, &u)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new_unchecked(&u, gens))
    }

    /// Reduced Gröbner basis, made primitive over the integers.
    pub fn groebner(&self, order: &TermOrder, budget: &Budget) -> Result<Vec<QPoly>> {
        comm_groebner(self, order, budget)
    }

    pub fn contains(&self, f: &QPoly, budget: &Budget) -> Result<bool> {
        let order = TermOrder::DegRevLex;
        let gb = groebner_elems(self, &order, budget)?;
        let mut eng = Engine { order: &order, max_steps: budget.max_steps, steps: 0 };
        let r = eng
            .normal_form(&CElem::from_poly(f, &order), &gb, false)
            .map_err(|reason| Error::Undetermined { reason })?;
        Ok(r.is_zero())
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        let gb = groebner_elems(self, &TermOrder::DegRevLex, budget)?;
        Ok(gb.len() == 1 && gb[0].lm().is_one())
    }
}

fn groebner_elems(ideal: &CommIdeal, order: &TermOrder, budget: &Budget) -> Result<Vec<CElem>> {
    let gens: Vec<CElem> = ideal.gens.iter().map(|g| CElem::from_poly(g, order)).collect();
    let mut eng = Engine { order, max_steps: budget.max_steps, steps: 0 };
    eng.groebner(&gens).map_err(|reason| Error::Undetermined { reason })
}

/// Reduced Gröbner basis of `ideal`; only the step budget applies.
pub fn comm_groebner(ideal: &CommIdeal, order: &TermOrder, budget: &Budget) -> Result<Vec<QPoly>> {
    Ok(groebner_elems(ideal, order, budget)?
        .iter()
        .map(|g| g.to_poly(&ideal.universe).primitive())
        .collect())
}

/// Full normal form of `f` modulo a Gröbner basis `gb` (monic result).
pub fn reduce(f: &QPoly, gb: &[QPoly], order: &TermOrder, budget: &Budget) -> Result<QPoly> {
    let g: Vec<CElem> = gb.iter().map(|p| CElem::from_poly(p, order)).collect();
    let mut eng = Engine { order, max_steps: budget.max_steps, steps: 0 };
    eng.normal_form(&CElem::from_poly(f, order), &g, true)
        .map(|r| r.to_poly(f.universe()))
        .map_err(|reason| Error::Undetermined { reason })
}

/// Whether every S-polynomial of `gb` reduces to zero.
pub fn is_groebner(gb: &[QPoly], order: &TermOrder, budget: &Budget) -> Result<bool> {
    let g: Vec<CElem> = gb.iter().map(|p| CElem::from_poly(p, order)).collect();
    let mut eng = Engine { order, max_steps: budget.max_steps, steps: 0 };
    groebner::spairs_reduce_to_zero(&g, &mut eng).map_err(|reason| Error::Undetermined { reason })
}

/// Intersection of `ideal` with the subring in the variables not listed in
/// `vars`.
pub fn eliminate(ideal: &CommIdeal, vars: &[usize], budget: &Budget) -> Result<CommIdeal> {
    let n = ideal.universe.len();
    let kept: Vec<usize> = (0..n).filter(|i| !vars.contains(i)).collect();
    // Eliminated variables first, then the kept ones in their original order.
    let mut map = vec![0usize; n];
    for (pos, &i) in vars.iter().chain(&kept).enumerate() {
        map[i] = pos;
    }
    let names = ideal.universe.names();
    let big = Universe::new(
        &vars.iter().chain(&kept).map(|&i| names[i].clone()).collect::<Vec<_>>(),
    );
    let small = Universe::new(&kept.iter().map(|&i| names[i].clone()).collect::<Vec<_>>());
    let k = vars.len();
    let order = TermOrder::elimination(k, n);
    let moved = CommIdeal::new_unchecked(&big, ideal.gens.iter().map(|g| g.embed(&big, &map)).collect());
    let gb = groebner_elems(&moved, &order, budget)?;
    let gens = gb
        .iter()
        .filter(|g| g.terms.iter().all(|(e, _)| e.0[..k].iter().all(|&x| x == 0)))
        .map(|g| {
            let terms = g.terms.iter().map(|(e, c)| (Monomial::from_slice(&e.0[k..]), c.clone()));
            QPoly::from_terms(&small, terms.collect::<Vec<_>>()).primitive()
        })
        .collect();
    Ok(CommIdeal::new_unchecked(&small, gens))
}

/// `ideal` in the universe `[t] ++ universe` together with `1 - t f`.
fn rabinowitsch(ideal: &CommIdeal, f: &QPoly) -> CommIdeal {
    let t = Universe::new(&["_t"]);
    let big = t.concat(&ideal.universe);
    let map: Vec<usize> = (1..=ideal.universe.len()).collect();
    let mut gens: Vec<QPoly> = ideal.gens.iter().map(|g| g.embed(&big, &map)).collect();
    let tf = &QPoly::var(&big, 0) * &f.embed(&big, &map);
    gens.push(&QPoly::one(&big) - &tf);
    CommIdeal::new_unchecked(&big, gens)
}

/// Saturation `ideal : f^infinity`.
pub fn saturate(ideal: &CommIdeal, f: &QPoly, budget: &Budget) -> Result<CommIdeal> {
    ideal_check(ideal, f)?;
    eliminate(&rabinowitsch(ideal, f), &[0], budget)
}

/// Intersection of two ideals over the same universe.
pub fn intersect(a: &CommIdeal, b: &CommIdeal, budget: &Budget) -> Result<CommIdeal> {
    if a.universe != b.universe {
        return Err(Error::UniverseMismatch {
            left: a.universe.names().to_vec(),
            right: b.universe.names().to_vec(),
        });
    }
    let t = Universe::new(&["_t"]);
    let big = t.concat(&a.universe);
    let map: Vec<usize> = (1..=a.universe.len()).collect();
    let tv = QPoly::var(&big, 0);
    let one_minus_t = &QPoly::one(&big) - &tv;
    let mut gens: Vec<QPoly> = a.gens.iter().map(|g| &tv * &g.embed(&big, &map)).collect();
    gens.extend(b.gens.iter().map(|g| &one_minus_t * &g.embed(&big, &map)));
    eliminate(&CommIdeal::new_unchecked(&big, gens), &[0], budget)
}

fn ideal_check(ideal: &CommIdeal, f: &QPoly) -> Result<()> {
    if f.universe() != &ideal.universe {
        return Err(Error::UniverseMismatch {
            left: ideal.universe.names().to_vec(),
            right: f.universe().names().to_vec(),
        });
    }
    Ok(())
}

/// Whether `f` lies in the radical of `ideal`.
pub fn radical_member(f: &QPoly, ideal: &CommIdeal, budget: &Budget) -> Result<bool> {
    ideal_check(ideal, f)?;
    if f.is_zero() {
        return Ok(true);
    }
    rabinowitsch(ideal, f).is_unit(budget)
}

/// Whether two ideals have the same radical.
pub fn radical_equal(a: &CommIdeal, b: &CommIdeal, budget: &Budget) -> Result<bool> {
    for g in &a.gens {
        if !radical_member(g, b, budget)? {
            return Ok(false);
        }
    }
    for g in &b.gens {
        if !radical_member(g, a, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Defining ideal of the singular locus in `Q[c1..cm]`: the closure of the
/// projection of the characteristic variety minus the zero section.
pub fn singular_locus(ideal: &DIdeal, budget: &Budget) -> std::result::Result<CommIdeal, BudgetExhausted> {
    let wrap = |e: Error| BudgetExhausted { reason: e.to_string(), partial: vec![] };
    let m = ideal.m;
    let j = initial_ideal_01(ideal, budget)?;
    let xi: Vec<usize> = (m..2 * m).collect();
    let mut acc: Option<CommIdeal> = None;
    for i in 0..m {
        let xi_i = QPoly::var(j.universe(), m + i);
        let sat = rabinowitsch(&j, &xi_i);
        // Variable 0 is the Rabinowitsch variable, then c, then xi.
        let mut drop = vec![0];
        drop.extend(xi.iter().map(|&k| k + 1));
        let proj = eliminate(&sat, &drop, budget).map_err(wrap)?;
        acc = Some(match acc {
            None => proj,
            Some(prev) => intersect(&prev, &proj, budget).map_err(wrap)?,
        });
    }
    let cu = Universe::indexed("c", m);
    Ok(acc.unwrap_or_else(|| CommIdeal::new_unchecked(&cu, vec![QPoly::one(&cu)])))
}

/// Comparison of a singular locus with candidate hypersurfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorMatch {
    /// The product of all candidates lies in the radical of the locus.
    pub product_in_radical: bool,
    /// Candidate `f` is active when the locus ideal lies in `rad <f>`,
    /// i.e. `V(f)` is contained in the locus.
    pub active: Vec<bool>,
}

/// Matches a locus against candidate factors.
pub fn factor_match(locus: &CommIdeal, candidates: &[QPoly], budget: &Budget) -> Result<FactorMatch> {
    let u = locus.universe();
    let mut product = QPoly::one(u);
    for f in candidates {
        ideal_check(locus, f)?;
        product = &product * f;
    }
    let product_in_radical = radical_member(&product, locus, budget)?;
    let mut active = Vec::with_capacity(candidates.len());
    for f in candidates {
        let principal = CommIdeal::principal(f);
        let mut all = true;
        for g in locus.gens() {
            if !radical_member(g, &principal, budget)? {
                all = false;
                break;
            }
        }
        active.push(all);
    }
    Ok(FactorMatch { product_in_radical, active })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Universe {
        Universe::new(&["x", "y", "z"])
    }

    fn p(s: &str) -> QPoly {
        QPoly::parse(s, &u()).unwrap()
    }

    fn ideal(gens: &[&str]) -> CommIdeal {
        CommIdeal::new(&u(), gens.iter().map(|g| p(g)).collect()).unwrap()
    }

    #[test]
    fn groebner_basis_of_twisted_cubic() {
        let b = Budget::default();
        let i = ideal(&["y - x^2", "z - x^3"]);
        let gb = i.groebner(&TermOrder::Lex, &b).unwrap();
        assert!(is_groebner(&gb, &TermOrder::Lex, &b).unwrap());
        assert!(i.contains(&p("x*z - y^2"), &b).unwrap());
        assert!(!i.contains(&p("x*z"), &b).unwrap());
        let e = eliminate(&i, &[0], &b).unwrap();
        assert_eq!(e.gens().len(), 1);
        let yz = Universe::new(&["y", "z"]);
        assert_eq!(e.gens()[0], QPoly::parse("y^3 - z^2", &yz).unwrap().primitive());
    }

    #[test]
    fn saturation_and_intersection() {
        let b = Budget::default();
        let i = ideal(&["x*y", "x*z"]);
        let s = saturate(&i, &p("x"), &b).unwrap();
        assert!(s.contains(&p("y"), &b).unwrap() && s.contains(&p("z"), &b).unwrap());
        assert!(!s.is_unit(&b).unwrap());
        let s = saturate(&i, &p("y"), &b).unwrap();
        assert!(s.contains(&p("x"), &b).unwrap());
        let k = intersect(&ideal(&["x"]), &ideal(&["y"]), &b).unwrap();
        assert!(k.contains(&p("x*y"), &b).unwrap());
        assert!(!k.contains(&p("x"), &b).unwrap());
    }

    #[test]
    fn radicals() {
        let b = Budget::default();
        let i = ideal(&["x^3", "y^2*z"]);
        assert!(radical_member(&p("x"), &i, &b).unwrap());
        assert!(radical_member(&p("y*z"), &i, &b).unwrap());
        assert!(!radical_member(&p("y"), &i, &b).unwrap());
        assert!(radical_equal(&ideal(&["x^2*y"]), &ideal(&["x*y^3"]), &b).unwrap());
        let fm = factor_match(&ideal(&["x^2*y"]), &[p("x"), p("y"), p("z")], &b).unwrap();
        assert!(fm.product_in_radical);
        assert_eq!(fm.active, vec![true, true, false]);
    }

    #[test]
    fn json_roundtrip() {
        let i = ideal(&["x*y - 1/2", "z^2"]);
        assert_eq!(CommIdeal::from_json(&i.to_json()).unwrap(), i);
    }
}
