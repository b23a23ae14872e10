//! Weyl algebra arithmetic and left Gröbner bases in `D_m` and in the
//! rational Weyl algebra `R_m`.

mod dgb;
mod macaulay;
mod element;
mod rgb;

use std::fmt;

use serde::Serialize;

use crate::comalg::CommIdeal;
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, Rational, TermOrder, Universe};

pub use dgb::{initial_form_01, DElem};
pub use macaulay::holonomic_rank_modular;
pub use element::{proportional, weyl_universe, WeylElement, WeylJson, WeylTermJson};
pub use rgb::{standard_monomials, DMon, RElem};

/// Limits for Gröbner computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    /// Largest total `d`-degree of an S-pair lcm.
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 1_000_000, max_degree: 30 }
    }
}

/// A Gröbner computation hit its budget; carries the basis built so far.
#[derive(Clone, Debug)]
pub struct BudgetExhausted {
    pub reason: String,
    pub partial: Vec<WeylElement>,
}

impl fmt::Display for BudgetExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "undetermined: {} ({} partial generators)", self.reason, self.partial.len())
    }
}

impl std::error::Error for BudgetExhausted {}

impl From<BudgetExhausted> for Error {
    fn from(b: BudgetExhausted) -> Self {
        Error::Undetermined { reason: b.reason }
    }
}

/// Generators of a left ideal, either with symbolic parameters or
/// specialized at rational values.
#[derive(Clone, Debug)]
pub struct DIdeal {
    pub m: usize,
    pub gens: Vec<WeylElement>,
    /// Parameter values, in parameter order, when specialized.
    pub specialization: Option<Vec<(String, Rational)>>,
}

impl DIdeal {
    pub fn new(m: usize, gens: Vec<WeylElement>) -> Result<Self> {
        for w in gens.windows(2) {
            w[0].check_compatible(&w[1])?;
        }
        if gens.iter().any(|g| g.m() != m) {
            return Err(Error::InvalidInput("generator over a different m".into()));
        }
        Ok(DIdeal { m, gens, specialization: None })
    }

    pub fn is_specialized(&self) -> bool {
        self.gens.iter().all(WeylElement::is_specialized)
    }

    fn require_specialized(&self) -> Result<()> {
        if self.is_specialized() {
            Ok(())
        } else {
            Err(Error::InvalidInput("operation needs specialized parameters".into()))
        }
    }

    /// Parameter values as `{"name": "p/q"}` pairs for reports.
    pub fn specialization_json(&self) -> serde_json::Value {
        match &self.specialization {
            None => serde_json::Value::Null,
            Some(v) => serde_json::Value::Object(
                v.iter().map(|(k, r)| (k.clone(), format_rational(r).into())).collect(),
            ),
        }
    }
}

/// Outcome of a holonomic rank computation.
#[derive(Clone, Debug)]
pub struct RankResult {
    /// `None` when the quotient is infinite dimensional.
    pub rank: Option<usize>,
    pub standard_monomials: Vec<Vec<u32>>,
    pub groebner_basis: Vec<WeylElement>,
}

#[derive(Serialize)]
struct RankJson {
    rank: serde_json::Value,
    standard_monomials: Vec<Vec<u32>>,
    groebner_basis: Vec<String>,
}

impl RankResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RankJson {
            rank: match self.rank {
                Some(r) => r.into(),
                None => "infinite".into(),
            },
            standard_monomials: self.standard_monomials.clone(),
            groebner_basis: self.groebner_basis.iter().map(|g| g.to_string()).collect(),
        })
        .expect("serializable")
    }
}

/// Normally ordered product.
pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    a.checked_mul(b)
}

fn c_universe(m: usize) -> Universe {
    Universe::indexed("c", m)
}

fn to_relems(gens: &[WeylElement]) -> Result<Vec<RElem>> {
    let Some(first) = gens.first() else { return Ok(Vec::new()) };
    if gens.iter().any(|g| !g.is_specialized()) {
        return Err(Error::InvalidInput("R_m computations need specialized elements".into()));
    }
    let cu = c_universe(first.m());
    Ok(gens.iter().map(|g| RElem::from_weyl(g, &cu)).collect())
}

fn from_relems(r: &[RElem], m: usize) -> Vec<WeylElement> {
    let u = weyl_universe::<&str>(m, &[]);
    r.iter().map(|x| x.to_weyl(&u, m)).collect()
}

/// Reduced left Gröbner basis of the `R_m`-ideal generated by `gens`, under
/// degrevlex on the `d` variables. Elements are content-stripped.
pub fn rweyl_groebner(
    gens: &[WeylElement],
    budget: &Budget,
) -> std::result::Result<Vec<WeylElement>, BudgetExhausted> {
    let m = gens.first().map_or(0, WeylElement::m);
    let rs = to_relems(gens).map_err(|e| BudgetExhausted { reason: e.to_string(), partial: vec![] })?;
    rgb::rweyl_groebner_elems(&rs, budget)
        .map(|g| from_relems(&g, m))
        .map_err(|(reason, partial)| BudgetExhausted { reason, partial: from_relems(&partial, m) })
}

/// Remainder of `f` modulo `g` in `R_m`, content-stripped.
pub fn rweyl_normal_form(f: &WeylElement, g: &[WeylElement], budget: &Budget) -> Result<WeylElement> {
    let m = f.m();
    let fr = to_relems(std::slice::from_ref(f))?;
    let gr = to_relems(g)?;
    let r = rgb::rweyl_normal_form_elems(&fr[0], &gr, budget)
        .map_err(|reason| Error::Undetermined { reason })?;
    Ok(from_relems(&[r], m).remove(0))
}

/// Whether every S-pair of `gb` reduces to zero in `R_m`.
pub fn rweyl_is_groebner(gb: &[WeylElement], budget: &Budget) -> Result<bool> {
    rgb::spairs_reduce_to_zero(&to_relems(gb)?, budget)
        .map_err(|reason| Error::Undetermined { reason })
}

/// Holonomic rank: the number of standard `d`-monomials of an `R_m` Gröbner
/// basis.
pub fn holonomic_rank(
    ideal: &DIdeal,
    budget: &Budget,
) -> std::result::Result<RankResult, BudgetExhausted> {
    ideal.require_specialized().map_err(|e| BudgetExhausted { reason: e.to_string(), partial: vec![] })?;
    let gb = rweyl_groebner(&ideal.gens, budget)?;
    Ok(rank_from_basis(gb, ideal.m))
}

/// Rank data read off an `R_m` Gröbner basis.
pub fn rank_from_basis(gb: Vec<WeylElement>, m: usize) -> RankResult {
    let cu = c_universe(m);
    let lms: Vec<_> = gb.iter().map(|g| RElem::from_weyl(g, &cu).lm().clone()).collect();
    match standard_monomials(&lms, m) {
        Some(std) => RankResult {
            rank: Some(std.len()),
            standard_monomials: std.into_iter().map(|x| x.0.to_vec()).collect(),
            groebner_basis: gb,
        },
        None => RankResult { rank: None, standard_monomials: Vec::new(), groebner_basis: gb },
    }
}

/// Weight `(0,...,0,1,...,1)` on `(c, d)` refined by degrevlex.
pub fn weight01_order(m: usize) -> TermOrder {
    let mut w = vec![0i64; m];
    w.extend(std::iter::repeat_n(1, m));
    TermOrder::Weight { weights: w, tie: Box::new(TermOrder::DegRevLex) }
}

fn to_delems(gens: &[WeylElement], order: &TermOrder) -> Result<Vec<DElem>> {
    if gens.iter().any(|g| !g.is_specialized()) {
        return Err(Error::InvalidInput("D_m computations need specialized elements".into()));
    }
    Ok(gens.iter().map(|g| DElem::from_weyl(g, order)).collect())
}

fn from_delems(d: &[DElem], m: usize) -> Vec<WeylElement> {
    let u = weyl_universe::<&str>(m, &[]);
    d.iter().map(|x| x.to_weyl(&u, m)).collect()
}

/// Reduced left Gröbner basis in `D_m` (monic, rational coefficients).
pub fn d_groebner(
    gens: &[WeylElement],
    order: &TermOrder,
    budget: &Budget,
) -> std::result::Result<Vec<WeylElement>, BudgetExhausted> {
    let m = gens.first().map_or(0, WeylElement::m);
    let ds = to_delems(gens, order).map_err(|e| BudgetExhausted { reason: e.to_string(), partial: vec![] })?;
    dgb::d_groebner_elems(&ds, order, budget)
        .map(|g| from_delems(&g, m))
        .map_err(|(reason, partial)| BudgetExhausted { reason, partial: from_delems(&partial, m) })
}

/// Remainder of `f` modulo `g` in `D_m`.
pub fn d_normal_form(
    f: &WeylElement,
    g: &[WeylElement],
    order: &TermOrder,
    budget: &Budget,
) -> Result<WeylElement> {
    let fd = to_delems(std::slice::from_ref(f), order)?;
    let gd = to_delems(g, order)?;
    let r = dgb::d_normal_form_elems(&fd[0], &gd, order, budget)
        .map_err(|reason| Error::Undetermined { reason })?;
    Ok(from_delems(&[r], f.m()).remove(0))
}

/// Whether every S-pair of `gb` reduces to zero in `D_m`.
pub fn d_is_groebner(gb: &[WeylElement], order: &TermOrder, budget: &Budget) -> Result<bool> {
    dgb::spairs_reduce_to_zero(&to_delems(gb, order)?, order, budget)
        .map_err(|reason| Error::Undetermined { reason })
}

/// Universe `c1..cm, xi1..xim` of the associated graded ring.
pub fn cxi_universe(m: usize) -> Universe {
    let mut names: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();
    names.extend((1..=m).map(|i| format!("xi{i}")));
    Universe::new(&names)
}

/// The `(0,1)`-initial ideal in `Q[c, xi]`.
pub fn initial_ideal_01(
    ideal: &DIdeal,
    budget: &Budget,
) -> std::result::Result<CommIdeal, BudgetExhausted> {
    ideal.require_specialized().map_err(|e| BudgetExhausted { reason: e.to_string(), partial: vec![] })?;
    let m = ideal.m;
    let order = weight01_order(m);
    let gb = d_groebner(&ideal.gens, &order, budget)?;
    let u = cxi_universe(m);
    let forms = gb
        .iter()
        .map(|g| initial_form_01(&DElem::from_weyl(g, &order), &u).primitive())
        .collect();
    Ok(CommIdeal::new_unchecked(&u, forms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::QPoly;

    fn u(m: usize) -> Universe {
        weyl_universe::<&str>(m, &[])
    }

    fn w(s: &str, m: usize) -> WeylElement {
        WeylElement::parse(s, &u(m), m).unwrap()
    }

    #[test]
    fn trivial_groebner_bases() {
        let b = Budget::default();
        let gb = rweyl_groebner(&[w("d1", 2), w("d2", 2)], &b).unwrap();
        assert_eq!(gb, vec![w("d2", 2), w("d1", 2)]);
        let single = rweyl_groebner(&[w("-2*c1*d1 + 4", 1)], &b).unwrap();
        assert_eq!(single, vec![w("c1*d1 - 2", 1)]);
    }

    #[test]
    fn normal_form_examples() {
        let b = Budget::default();
        let g = vec![w("d1^2", 1)];
        assert_eq!(rweyl_normal_form(&w("d1", 1), &g, &b).unwrap(), w("d1", 1));
        assert!(rweyl_normal_form(&w("d1^2", 1), &g, &b).unwrap().is_zero());
        // d1 (c1 d1 - 5) = c1 d1^2 - 4 d1 and d1 = 5/c1 modulo the generator,
        // so c1 d1^2 reduces to 20/c1, a unit.
        let r = rweyl_normal_form(&w("c1*d1^2", 1), &[w("c1*d1 - 5", 1)], &b).unwrap();
        assert_eq!(r, w("1", 1));
    }

    #[test]
    fn rank_of_euler_operator() {
        let b = Budget::default();
        let i = DIdeal::new(2, vec![w("c1*d1 - 3", 2), w("c2*d2 + 1/2", 2)]).unwrap();
        let r = holonomic_rank(&i, &b).unwrap();
        assert_eq!(r.rank, Some(1));
        let i = DIdeal::new(2, vec![w("c1*d1 + c2*d2 - 3", 2)]).unwrap();
        assert_eq!(holonomic_rank(&i, &b).unwrap().rank, None);
    }

    #[test]
    fn d_groebner_examples() {
        let b = Budget::default();
        let o = weight01_order(1);
        assert_eq!(d_groebner(&[w("c1*d1 - 1", 1)], &o, &b).unwrap(), vec![w("c1*d1 - 1", 1)]);
        // d1 * c1 - c1 * d1 = 1, so the ideal <d1, c1> is the unit ideal.
        assert_eq!(d_groebner(&[w("d1", 1), w("c1", 1)], &o, &b).unwrap(), vec![w("1", 1)]);
        let gb = d_groebner(&[w("d1", 1), w("c1*d1", 1)], &o, &b).unwrap();
        assert_eq!(gb, vec![w("d1", 1)]);
    }

    #[test]
    fn initial_ideals() {
        let b = Budget::default();
        let h = w("c1*d1 + c2*d2 - 7/3", 2);
        let i = DIdeal::new(2, vec![h]).unwrap();
        let j = initial_ideal_01(&i, &b).unwrap();
        assert_eq!(j.gens(), &[QPoly::parse("c1*xi1 + c2*xi2", &cxi_universe(2)).unwrap()]);
    }
}
