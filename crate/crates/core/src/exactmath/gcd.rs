//! Greatest common divisors of multivariate integer polynomials.
//!
//! Strategy: strip monomial and integer content, peel off variables that
//! occur in only one argument, try the modular GCD, then the heuristic
//! evaluation/interpolation GCD, and fall back to a recursive primitive pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::ZPoly;

/// Bit budget for the heuristic GCD evaluation point raised to the degree.
const HEU_BIT_LIMIT: u64 = 1 << 20;

/// Nonnegative gcd of all coefficients; zero for the zero polynomial.
pub fn content_z(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Greatest common divisor, normalised so that the lex-largest term has a
/// positive coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let vars = a.universe().clone();
    let n = a.nvars();

    let mono = a
        .terms()
        .chain(b.terms())
        .map(|(m, _)| m.clone())
        .reduce(|x, y| x.gcd(&y))
        .unwrap_or_else(|| Monomial::one(n));
    let a = div_monomial(a, &mono);
    let b = div_monomial(b, &mono);

    let ca = content_z(&a);
    let cb = content_z(&b);
    let cg = ca.gcd(&cb);
    let a = div_int(&a, &ca);
    let b = div_int(&b, &cb);

    let core = if a.is_constant() || b.is_constant() {
        ZPoly::one(&vars)
    } else {
        primitive_gcd(a, b)
    };
    normalize_sign(core.mul_monomial(&mono, &cg))
}

/// gcd of a list; zero for an empty or all-zero list.
pub fn poly_gcd_many<'a, I: IntoIterator<Item = &'a ZPoly>>(polys: I) -> Option<ZPoly> {
    let mut acc: Option<ZPoly> = None;
    for p in polys {
        let g = match &acc {
            None => normalize_sign(p.clone()),
            Some(g) => poly_gcd(g, p),
        };
        let done = g.is_constant() && g.constant_term().abs().is_one();
        acc = Some(g);
        if done {
            break;
        }
    }
    acc
}

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let (lm_b, lc_b) = lex_lead(b);
    let (lm_b, lc_b) = (lm_b.clone(), lc_b.clone());
    let mut r = a.clone();
    let mut q = ZPoly::zero(a.universe());
    while !r.is_zero() {
        let (lm_r, lc_r) = lex_lead(&r);
        if !lm_b.divides(lm_r) {
            return None;
        }
        let (quo, rem) = lc_r.div_rem(&lc_b);
        if !rem.is_zero() {
            return None;
        }
        let m = lm_r.div(&lm_b);
        let t = b.mul_monomial(&m, &quo);
        q.add_term(m, quo);
        r = r - t;
    }
    Some(q)
}

fn lex_lead(p: &ZPoly) -> (&Monomial, &BigInt) {
    p.terms().next_back().expect("nonzero polynomial")
}

fn normalize_sign(p: ZPoly) -> ZPoly {
    let negative = p.terms().next_back().is_some_and(|(_, c)| c.is_negative());
    if negative {
        -p
    } else {
        p
    }
}

fn div_monomial(p: &ZPoly, m: &Monomial) -> ZPoly {
    if m.is_one() {
        return p.clone();
    }
    ZPoly::from_terms(
        p.universe(),
        p.terms().map(|(k, c)| (k.div(m), c.clone())).collect::<Vec<_>>(),
    )
}

fn div_int(p: &ZPoly, c: &BigInt) -> ZPoly {
    if c.is_one() || c.is_zero() {
        return p.clone();
    }
    p.map_coeffs(|x| x / c)
}

fn primitive_part_z(p: &ZPoly) -> ZPoly {
    let c = content_z(p);
    div_int(p, &c)
}

/// gcd of two polynomials with integer content one and no monomial factor.
fn primitive_gcd(a: ZPoly, b: ZPoly) -> ZPoly {
    let vars = a.universe().clone();
    let sa = a.support();
    let sb = b.support();
    // A variable present in only one argument cannot occur in the gcd.
    if let Some(&x) = sa.iter().find(|v| !sb.contains(v)) {
        return gcd_with_coefficients(&a, x, b);
    }
    if let Some(&x) = sb.iter().find(|v| !sa.contains(v)) {
        return gcd_with_coefficients(&b, x, a);
    }
    if sa.is_empty() {
        return ZPoly::one(&vars);
    }
    if let Some(g) = super::modgcd::modular_gcd(&a, &b) {
        return g;
    }
    if let Some(g) = heuristic_gcd(&a, &b) {
        return g;
    }
    prs_gcd(&a, &b)
}

/// gcd(b, coefficients of `a` viewed in `x`).
fn gcd_with_coefficients(a: &ZPoly, x: usize, b: ZPoly) -> ZPoly {
    let mut g = b;
    for c in coefficients_in(a, x) {
        if c.is_zero() {
            continue;
        }
        g = poly_gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Coefficients of `p` as a polynomial in variable `x`, lowest power first.
fn coefficients_in(p: &ZPoly, x: usize) -> Vec<ZPoly> {
    let d = p.degree_in(x) as usize;
    let mut out = vec![ZPoly::zero(p.universe()); d + 1];
    for (m, c) in p.terms() {
        let e = m.0[x] as usize;
        let mut k = m.clone();
        k.0[x] = 0;
        out[e].add_term(k, c.clone());
    }
    out
}

fn max_norm(p: &ZPoly) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// Substitutes the integer `xi` for variable `x`.
fn eval_var(p: &ZPoly, x: usize, xi: &BigInt) -> ZPoly {
    let mut out = ZPoly::zero(p.universe());
    for (m, c) in p.terms() {
        let e = m.0[x];
        let mut k = m.clone();
        k.0[x] = 0;
        out.add_term(k, c * xi.pow(e));
    }
    out
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

/// Char-Geddes-Gonnet heuristic GCD, recursive over variables. Returns
/// `None` when it gives up; a returned value is always verified.
fn heuristic_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let vars = a.universe().clone();
    let sa = a.support();
    let sb = b.support();
    if sa.is_empty() || sb.is_empty() {
        let ca = content_z(a);
        let cb = content_z(b);
        return Some(ZPoly::constant(&vars, ca.gcd(&cb)));
    }
    let x = *sa.iter().rfind(|v| sb.contains(v))?;
    let deg = a.degree_in(x).max(b.degree_in(x)) as u64;
    let norm = max_norm(a).min(max_norm(b));
    let mut xi: BigInt = BigInt::from(2) * norm + 29;
    for _ in 0..6 {
        if xi.bits() * deg.max(1) > HEU_BIT_LIMIT {
            return None;
        }
        let ea = eval_var(a, x, &xi);
        let eb = eval_var(b, x, &xi);
        let gamma = if ea.is_constant() && eb.is_constant() {
            ZPoly::constant(&vars, ea.constant_term().gcd(&eb.constant_term()))
        } else if ea.is_zero() || eb.is_zero() {
            None?
        } else {
            let ca = content_z(&ea);
            let cb = content_z(&eb);
            let g = heuristic_gcd(&div_int(&ea, &ca), &div_int(&eb, &cb))?;
            g.scale(&ca.gcd(&cb))
        };
        let candidate = primitive_part_z(&interpolate(&gamma, x, &xi));
        if !candidate.is_zero()
            && exact_div(a, &candidate).is_some()
            && exact_div(b, &candidate).is_some()
        {
            return Some(normalize_sign(candidate));
        }
        // Growth factor from the original heuristic.
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

fn interpolate(gamma: &ZPoly, x: usize, xi: &BigInt) -> ZPoly {
    let vars = gamma.universe().clone();
    let mut g = gamma.clone();
    let mut out = ZPoly::zero(&vars);
    let mut power = 0u32;
    while !g.is_zero() {
        let digit = g.map_coeffs(|c| symmetric_mod(c, xi));
        let mut shift = Monomial::one(vars.len());
        shift.0[x] = power;
        out = out + digit.mul_monomial(&shift, &BigInt::one());
        g = (g - digit).map_coeffs(|c| c / xi);
        power += 1;
    }
    out
}

/// Recursive primitive PRS in the last shared variable.
fn prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let vars = a.universe().clone();
    let sa = a.support();
    let sb = b.support();
    let Some(&x) = sa.iter().rfind(|v| sb.contains(v)) else {
        return ZPoly::one(&vars);
    };
    let (cont_a, pp_a) = split_content(a, x);
    let (cont_b, pp_b) = split_content(b, x);
    let cont = poly_gcd(&cont_a, &cont_b);

    let (mut r0, mut r1) = if pp_a.degree_in(x) >= pp_b.degree_in(x) {
        (pp_a, pp_b)
    } else {
        (pp_b, pp_a)
    };
    let g = loop {
        if r1.degree_in(x) == 0 {
            break ZPoly::one(&vars);
        }
        let r = pseudo_remainder(&r0, &r1, x);
        if r.is_zero() {
            break r1;
        }
        if r.degree_in(x) == 0 {
            break ZPoly::one(&vars);
        }
        r0 = r1;
        r1 = split_content(&r, x).1;
    };
    normalize_sign(&cont * &split_content(&g, x).1)
}

/// (content in `x` including the integer content, primitive part)
fn split_content(p: &ZPoly, x: usize) -> (ZPoly, ZPoly) {
    let coeffs: Vec<ZPoly> = coefficients_in(p, x).into_iter().filter(|c| !c.is_zero()).collect();
    let cont = poly_gcd_many(coeffs.iter()).unwrap_or_else(|| ZPoly::one(p.universe()));
    let pp = exact_div(p, &cont).expect("content divides");
    (cont, pp)
}

fn pseudo_remainder(a: &ZPoly, b: &ZPoly, x: usize) -> ZPoly {
    let db = b.degree_in(x);
    let lc_b = coefficients_in(b, x).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lc_r = coefficients_in(&r, x).pop().expect("nonzero");
        let mut shift = Monomial::one(a.nvars());
        shift.0[x] = dr - db;
        let t = (&lc_r * b).mul_monomial(&shift, &BigInt::one());
        r = &(&lc_b * &r) - &t;
    }
    r
}
