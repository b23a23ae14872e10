//! Formal shift expressions in `σ_{s_i}^{-1}` and `σ_{ν_j}^{-1}` and their
//! rewriting into differential operators in `c`.
//!
//! On the correlator, `σ_{s_i}^{-α}` acts as `(-1)^α ∂_i^α / (s_i)_α` with the
//! falling factorial `(s_i)_α = s_i (s_i - 1) ⋯ (s_i - α + 1)`, and
//! `σ_{ν_j}^{-β}` acts as `D_j^β / ((ν_j - 1) ⋯ (ν_j - β))` with
//! `D_j = Σ_k a_j^{(k)} ∂_k`. Rewriting clears the denominators actually
//! incurred.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::exactmath::{QPoly, Rational, Universe};
use crate::weyl::WeylElement;

/// `coeff · ∏ σ_{s_i}^{-s_exp[i]} ∏ σ_{ν_j}^{-nu_exp[j]}`, with `coeff` a
/// polynomial in `c` and the parameters acting by multiplication after the
/// shift.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftTerm {
    pub coeff: QPoly,
    pub s_exp: Vec<u32>,
    pub nu_exp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftExpr {
    pub terms: Vec<ShiftTerm>,
}

/// Support of the `i`-th linear form: the coordinates it involves.
pub(crate) fn support(arr: &Arrangement, i: usize) -> Vec<usize> {
    (0..arr.n()).filter(|&j| !arr.matrix()[(j, i)].is_zero()).collect()
}

/// The shift identity of hyperplane `i` restricted to its support `S`:
/// `∏_S σ_ν^{-1} - Σ_{j∈S} a_j σ_{s_i}^{-1} ∏_{k∈S∖j} σ_ν^{-1}
///  + c_i σ_{s_i}^{-1} ∏_S σ_ν^{-1}`, which annihilates the correlator
/// because `(ℓ_i - c_i)^{s_i} = (ℓ_i - c_i)(ℓ_i - c_i)^{s_i - 1}`.
pub fn shift_identity(arr: &Arrangement, i: usize, u: &Universe) -> ShiftExpr {
    let (m, n) = (arr.m(), arr.n());
    let supp = support(arr, i);
    let nu_all: Vec<u32> = (0..n).map(|j| supp.contains(&j) as u32).collect();
    let mut unit_s = vec![0u32; m];
    unit_s[i] = 1;
    let mut terms = vec![ShiftTerm {
        coeff: QPoly::one(u),
        s_exp: vec![0; m],
        nu_exp: nu_all.clone(),
    }];
    for &j in &supp {
        let mut nu = nu_all.clone();
        nu[j] = 0;
        terms.push(ShiftTerm {
            coeff: QPoly::constant(u, -arr.matrix()[(j, i)].clone()),
            s_exp: unit_s.clone(),
            nu_exp: nu,
        });
    }
    terms.push(ShiftTerm { coeff: QPoly::var(u, i), s_exp: unit_s, nu_exp: nu_all });
    ShiftExpr { terms }
}

/// A linear denominator factor: `s_i - k` or `ν_j - 1 - k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    S(usize, u32),
    Nu(usize, u32),
}

fn factors(t: &ShiftTerm) -> BTreeSet<Factor> {
    let mut out = BTreeSet::new();
    for (i, &a) in t.s_exp.iter().enumerate() {
        out.extend((0..a).map(|k| Factor::S(i, k)));
    }
    for (j, &b) in t.nu_exp.iter().enumerate() {
        out.extend((0..b).map(|k| Factor::Nu(j, k)));
    }
    out
}

fn factor_poly(f: Factor, u: &Universe, m: usize) -> QPoly {
    let (var, shift) = match f {
        Factor::S(i, k) => (2 * m + i, k),
        Factor::Nu(j, k) => (3 * m + j, k + 1),
    };
    &QPoly::var(u, var) - &QPoly::constant(u, Rational::from_integer(shift.into()))
}

/// `D_j = Σ_k a_j^{(k)} ∂_k`.
pub(crate) fn d_form(arr: &Arrangement, j: usize, u: &Universe) -> WeylElement {
    let m = arr.m();
    let mut out = WeylElement::zero(u, m);
    for k in 0..m {
        let a = &arr.matrix()[(j, k)];
        if !a.is_zero() {
            out = &out + &WeylElement::d(u, m, k).scale(a);
        }
    }
    out
}

/// Rewrites a shift expression into a differential operator, multiplied by
/// the product of all denominator factors that occur. Returns the operator
/// and that product.
pub fn rewrite(expr: &ShiftExpr, arr: &Arrangement, u: &Universe) -> (WeylElement, QPoly) {
    let m = arr.m();
    let per_term: Vec<BTreeSet<Factor>> = expr.terms.iter().map(factors).collect();
    let common: BTreeSet<Factor> = per_term.iter().flatten().copied().collect();
    let cleared = common.iter().fold(QPoly::one(u), |acc, &f| &acc * &factor_poly(f, u, m));
    let mut out = WeylElement::zero(u, m);
    for (t, own) in expr.terms.iter().zip(&per_term) {
        let multiplier = common
            .difference(own)
            .fold(QPoly::one(u), |acc, &f| &acc * &factor_poly(f, u, m));
        let sign = if t.s_exp.iter().sum::<u32>() % 2 == 1 { -Rational::one() } else { Rational::one() };
        let mut op = WeylElement::from_poly(m, t.coeff.scale(&sign));
        for (i, &a) in t.s_exp.iter().enumerate() {
            op = op.mul(&WeylElement::d(u, m, i).pow(a));
        }
        for (j, &b) in t.nu_exp.iter().enumerate() {
            op = op.mul(&d_form(arr, j, u).pow(b));
        }
        out = &out + &op.left_mul_coeff(&multiplier);
    }
    (out, cleared)
}
