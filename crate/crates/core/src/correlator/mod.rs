//! The operator families annihilating the combinatorial correlator and the
//! assembled D-ideal.
//!
//! Operators are built over the universe `c1..cm, d1..dm, s1..sm, nu1..nun`
//! with denominators cleared, and specialized to rationals on request.

mod shift;

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{circuits, nonminimal_dependent_sets, subsets, syzygies_on, Arrangement};
use crate::error::{Error, Result};
use crate::exactmath::{random_rational, Integer, QPoly, Rational, Universe};
use crate::weyl::{proportional, weyl_universe, DIdeal, WeylElement};

pub use shift::{rewrite, shift_identity, ShiftExpr, ShiftTerm};

/// Parameter names `s1..sm, nu1..nun`.
pub fn parameter_names(m: usize, n: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=m).map(|i| format!("s{i}")).collect();
    names.extend((1..=n).map(|j| format!("nu{j}")));
    names
}

/// Universe of the symbolic operators of `arr`.
pub fn operator_universe(arr: &Arrangement) -> Universe {
    weyl_universe(arr.m(), &parameter_names(arr.m(), arr.n()))
}

/// Exponents `s` and `ν`, either symbolic or rational.
#[derive(Clone, Debug, PartialEq)]
pub enum ParameterBlock {
    Symbolic,
    Specialized { s: Vec<Rational>, nu: Vec<Rational> },
}

impl ParameterBlock {
    /// Checked rational values.
    pub fn specialized(s: Vec<Rational>, nu: Vec<Rational>) -> Result<Self> {
        if !is_admissible(&s, &nu) {
            return Err(Error::InvalidInput(
                "parameters must satisfy s_i != 0, nu_j not in {1..n}, all distinct".into(),
            ));
        }
        Ok(ParameterBlock::Specialized { s, nu })
    }

    /// Deterministic admissible values drawn from `seed`.
    pub fn random(m: usize, n: usize, seed: u64) -> Self {
        let v = admissible_values(m, n, seed);
        ParameterBlock::Specialized { s: v[..m].to_vec(), nu: v[m..].to_vec() }
    }

    /// `s` followed by `ν`, when specialized.
    pub fn values(&self) -> Option<Vec<Rational>> {
        match self {
            ParameterBlock::Symbolic => None,
            ParameterBlock::Specialized { s, nu } => Some(s.iter().chain(nu).cloned().collect()),
        }
    }

    fn apply(&self, op: WeylElement) -> WeylElement {
        match self.values() {
            None => op,
            Some(v) => op.specialize(&v),
        }
    }
}

/// `s_i != 0`, `ν_j` outside `{1, ..., n}`, all values pairwise distinct.
pub fn is_admissible(s: &[Rational], nu: &[Rational]) -> bool {
    let n = nu.len() as i64;
    let all: Vec<&Rational> = s.iter().chain(nu).collect();
    s.iter().all(|x| !x.is_zero())
        && nu.iter().all(|x| !(x.is_integer() && (1..=n).contains(&x.to_integer().try_into().unwrap_or(0i64))))
        && all.iter().enumerate().all(|(i, a)| all[..i].iter().all(|b| a != b))
}

/// `m + n` admissible values from a seeded stream; draws violating
/// admissibility are skipped.
pub fn admissible_values(m: usize, n: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<Rational> = (0..m + n).map(|_| random_rational(&mut rng, true)).collect();
        if is_admissible(&v[..m], &v[m..]) {
            return v;
        }
    }
}

/// The four operator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    H,
    L,
    P,
    Q,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which families to include.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Families {
    pub h: bool,
    pub l: bool,
    pub p: bool,
    pub q: bool,
}

impl Families {
    pub const ALL: Families = Families { h: true, l: true, p: true, q: true };
    pub const NONE: Families = Families { h: false, l: false, p: false, q: false };

    pub fn contains(&self, f: Family) -> bool {
        match f {
            Family::H => self.h,
            Family::L => self.l,
            Family::P => self.p,
            Family::Q => self.q,
        }
    }
}

/// A constructed operator with its provenance.
#[derive(Clone, Debug)]
pub struct Operator {
    pub family: Family,
    /// Zero-based column indices the operator was built from.
    pub indices: Vec<usize>,
    pub op: WeylElement,
}

fn s_poly(u: &Universe, m: usize, i: usize) -> QPoly {
    QPoly::var(u, 2 * m + i)
}

fn d_product(m: usize, coeff: &QPoly, idx: &[usize]) -> WeylElement {
    let mut e = vec![0u32; m];
    for &i in idx {
        e[i] += 1;
    }
    WeylElement::coeff_times_d(coeff, m, &e)
}

/// `H = Σ c_i ∂_i - (Σ ν_j + Σ s_i)`.
pub fn homogeneity_op(arr: &Arrangement, p: &ParameterBlock) -> WeylElement {
    let u = operator_universe(arr);
    let (m, n) = (arr.m(), arr.n());
    let mut h = WeylElement::zero(&u, m);
    for i in 0..m {
        h = &h + &WeylElement::c(&u, m, i).mul(&WeylElement::d(&u, m, i));
    }
    for k in 0..m + n {
        h = &h - &WeylElement::param(&u, m, k);
    }
    p.apply(h)
}

/// `L_i` from its closed form, multiplied by `s_i ∏_{j∈S} (ν_j - 1)` where
/// `S` is the support of the `i`-th linear form:
/// `∂_i Σ_{j∈S} a_j (ν_j - 1) ∏_{k∈S∖j} D_k + s_i ∏_S D_k - c_i ∂_i ∏_S D_k`.
pub fn hyperplane_op_direct(arr: &Arrangement, i: usize) -> WeylElement {
    let u = operator_universe(arr);
    let m = arr.m();
    let supp = shift::support(arr, i);
    let prod = |skip: Option<usize>| {
        supp.iter()
            .filter(|&&k| Some(k) != skip)
            .fold(WeylElement::one(&u, m), |acc, &k| acc.mul(&shift::d_form(arr, k, &u)))
    };
    let di = WeylElement::d(&u, m, i);
    let mut out = WeylElement::zero(&u, m);
    for &j in &supp {
        let nu = &QPoly::var(&u, 3 * m + j) - &QPoly::one(&u);
        let coeff = nu.scale(&arr.matrix()[(j, i)]);
        out = &out + &di.mul(&prod(Some(j))).left_mul_coeff(&coeff);
    }
    let full = prod(None);
    out = &out + &full.left_mul_coeff(&s_poly(&u, m, i));
    out = &out - &WeylElement::c(&u, m, i).mul(&di).mul(&full);
    out
}

/// `L_i` derived by rewriting the shift identity of hyperplane `i`
/// (zero-based), denominators cleared.
pub fn hyperplane_op(arr: &Arrangement, i: usize, p: &ParameterBlock) -> Result<WeylElement> {
    if i >= arr.m() {
        return Err(Error::InvalidInput(format!("hyperplane index {i} out of range")));
    }
    let u = operator_universe(arr);
    let (op, _) = rewrite(&shift_identity(arr, i, &u), arr, &u);
    Ok(p.apply(op))
}

/// `Σ_j p_j s_j ∂_{C∖j} - q ∂_C` with `q = Σ_j c_j p_j`, for a kernel vector
/// `p` of the columns `indices`.
pub fn circuit_op(
    arr: &Arrangement,
    indices: &[usize],
    kernel: &[Integer],
    p: &ParameterBlock,
) -> Result<WeylElement> {
    if indices.len() != kernel.len() || kernel.iter().all(Zero::is_zero) {
        return Err(Error::NotInKernel);
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= arr.m()) {
        return Err(Error::InvalidInput(format!("column index {bad} out of range")));
    }
    for r in 0..arr.n() {
        let dot = indices.iter().zip(kernel).fold(Rational::zero(), |acc, (&i, k)| {
            acc + &arr.matrix()[(r, i)] * Rational::from_integer(k.clone())
        });
        if !dot.is_zero() {
            return Err(Error::NotInKernel);
        }
    }
    let u = operator_universe(arr);
    let m = arr.m();
    let mut out = WeylElement::zero(&u, m);
    let mut q = QPoly::zero(&u);
    for (pos, (&i, k)) in indices.iter().zip(kernel).enumerate() {
        let k = Rational::from_integer(k.clone());
        if k.is_zero() {
            continue;
        }
        let rest: Vec<usize> =
            indices.iter().enumerate().filter(|&(j, _)| j != pos).map(|(_, &c)| c).collect();
        out = &out + &d_product(m, &s_poly(&u, m, i).scale(&k), &rest);
        q = &q + &QPoly::var(&u, i).scale(&k);
    }
    out = &out - &d_product(m, &q, indices);
    Ok(p.apply(out))
}

/// `Σ_{j∈T} p_j(c) s_j ∂_{T∖j}` for a syzygy `p` supported on `T`.
fn syzygy_op(arr: &Arrangement, cols: &[usize], vector: &[QPoly], u: &Universe) -> WeylElement {
    let m = arr.m();
    let map: Vec<usize> = (0..m).collect();
    let mut out = WeylElement::zero(u, m);
    for (pos, &j) in cols.iter().enumerate() {
        if vector[j].is_zero() {
            continue;
        }
        let coeff = &vector[j].embed(u, &map) * &s_poly(u, m, j);
        let rest: Vec<usize> =
            cols.iter().enumerate().filter(|&(k, _)| k != pos).map(|(_, &c)| c).collect();
        out = &out + &d_product(m, &coeff, &rest);
    }
    out
}

/// Syzygy operators of the full column set only.
pub fn full_syzygy_ops(arr: &Arrangement, p: &ParameterBlock) -> Vec<WeylElement> {
    let u = operator_universe(arr);
    let all: Vec<usize> = (0..arr.m()).collect();
    syzygies_on(arr, &all)
        .iter()
        .map(|s| p.apply(syzygy_op(arr, &all, &s.vector, &u)))
        .collect()
}

/// Syzygy operators of every column subset of size at least `rank + 2`,
/// by increasing size; an operator equal (up to scalar) to `∂_{T∖S}` times
/// one already kept on a smaller set `S` is dropped, as are duplicates.
pub fn syzygy_ops_indexed(arr: &Arrangement, p: &ParameterBlock) -> Vec<Operator> {
    let u = operator_universe(arr);
    let m = arr.m();
    let mut kept: Vec<Operator> = Vec::new();
    for k in arr.rank() + 2..=m {
        for cols in subsets(m, k) {
            for syz in syzygies_on(arr, &cols) {
                let op = syzygy_op(arr, &cols, &syz.vector, &u);
                let redundant = kept.iter().any(|prev| {
                    let extra: Vec<usize> =
                        cols.iter().copied().filter(|c| !prev.indices.contains(c)).collect();
                    prev.indices.iter().all(|c| cols.contains(c))
                        && proportional(&d_product(m, &QPoly::one(&u), &extra).mul(&prev.op), &op)
                });
                if !redundant {
                    kept.push(Operator { family: Family::Q, indices: cols.clone(), op });
                }
            }
        }
    }
    kept.into_iter().map(|o| Operator { op: p.apply(o.op), ..o }).collect()
}

/// The syzygy family.
pub fn syzygy_ops(arr: &Arrangement, p: &ParameterBlock) -> Vec<WeylElement> {
    syzygy_ops_indexed(arr, p).into_iter().map(|o| o.op).collect()
}

/// All operators of the selected families: `H`, then `L_1..L_m`, then one
/// circuit operator per circuit (and, with `nonminimal`, one per kernel
/// column of each larger dependent set), then the syzygy operators.
pub fn operators(
    arr: &Arrangement,
    p: &ParameterBlock,
    families: Families,
    nonminimal: bool,
) -> Vec<Operator> {
    let mut out = Vec::new();
    if families.h {
        out.push(Operator { family: Family::H, indices: (0..arr.m()).collect(), op: homogeneity_op(arr, p) });
    }
    if families.l {
        for i in 0..arr.m() {
            let op = hyperplane_op(arr, i, p).expect("index in range");
            out.push(Operator { family: Family::L, indices: vec![i], op });
        }
    }
    if families.p {
        for c in circuits(arr) {
            let op = circuit_op(arr, &c.indices, &c.kernel, p).expect("circuit kernel");
            out.push(Operator { family: Family::P, indices: c.indices, op });
        }
        if nonminimal {
            for d in nonminimal_dependent_sets(arr) {
                for col in &d.kernel_columns {
                    let op = circuit_op(arr, &d.indices, col, p).expect("dependent-set kernel");
                    out.push(Operator { family: Family::P, indices: d.indices.clone(), op });
                }
            }
        }
    }
    if families.q {
        out.extend(syzygy_ops_indexed(arr, p));
    }
    out
}

/// The D-ideal generated by the selected families.
pub fn build_ideal(arr: &Arrangement, p: &ParameterBlock, families: Families, nonminimal: bool) -> DIdeal {
    let gens = operators(arr, p, families, nonminimal).into_iter().map(|o| o.op).collect();
    let mut ideal = DIdeal::new(arr.m(), gens).expect("operators share one universe");
    if let ParameterBlock::Specialized { s, nu } = p {
        ideal.specialization = Some(named_values(s, nu));
    }
    ideal
}

fn named_values(s: &[Rational], nu: &[Rational]) -> Vec<(String, Rational)> {
    parameter_names(s.len(), nu.len()).into_iter().zip(s.iter().chain(nu).cloned()).collect()
}

/// Substitutes seeded admissible values for the parameters of a symbolic
/// ideal and strips integer content from every generator.
pub fn specialize(ideal: &DIdeal, seed: u64) -> Result<DIdeal> {
    let Some(first) = ideal.gens.first() else {
        return Ok(ideal.clone());
    };
    if ideal.is_specialized() {
        return Err(Error::InvalidInput("ideal is already specialized".into()));
    }
    let names = first.param_names().to_vec();
    let m = ideal.m;
    let n = names.len().checked_sub(m).ok_or_else(|| Error::InvalidInput("missing s parameters".into()))?;
    let values = admissible_values(m, n, seed);
    let gens = ideal.gens.iter().map(|g| g.specialize(&values).primitive()).collect();
    let mut out = DIdeal::new(m, gens)?;
    out.specialization = Some(names.into_iter().zip(values).collect());
    Ok(out)
}
