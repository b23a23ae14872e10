//! Brown's dense modular GCD for multivariate integer polynomials.
//!
//! Images modulo word-sized primes are computed by evaluating the last
//! variable and interpolating, recursively down to univariate Euclid; the
//! images are combined by Chinese remaindering. Every returned value is
//! checked by exact division over the integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::ZPoly;
use super::gcd::exact_div;

/// Sparse polynomial modulo a prime, keyed by exponent vectors in lex order
/// (first variable most significant).
type SP = BTreeMap<Vec<u32>, u64>;

/// Dense univariate polynomial modulo a prime, lowest degree first, no
/// trailing zeros.
type UP = Vec<u64>;
/// Head exponent, coefficients in the last variable, modulus and point count.
type Interpolant = (Vec<u32>, BTreeMap<Vec<u32>, UP>, UP, usize);
/// Head exponent, lifted coefficients and their modulus.
type CrtState = (Vec<u32>, BTreeMap<Vec<u32>, BigInt>, BigInt);

/// Gives up after this many primes without a verified result.
const MAX_PRIMES: usize = 400;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, descending.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

// ---- univariate ----

fn trim(mut a: UP) -> UP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn u_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn u_monic(a: UP, p: u64) -> UP {
    match a.last() {
        None => a,
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

fn u_rem(mut a: UP, b: &[u64], p: u64) -> UP {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let lead = mul_mod(*a.last().expect("nonempty"), inv, p);
        let shift = a.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            a[shift + i] = sub_mod(a[shift + i], mul_mod(lead, c, p), p);
        }
        a = trim(a);
    }
    a
}

fn u_gcd(a: UP, b: UP, p: u64) -> UP {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = u_rem(a, &b, p);
        a = b;
        b = r;
    }
    u_monic(a, p)
}

fn u_mul(a: &[u64], b: &[u64], p: u64) -> UP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(out)
}

/// Exact quotient; the caller guarantees divisibility.
fn u_div(a: &[u64], b: &[u64], p: u64) -> UP {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return Vec::new();
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], inv, p);
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = sub_mod(r[k + i], mul_mod(c, bc, p), p);
        }
    }
    trim(q)
}

// ---- multivariate ----

/// Groups a `k`-variate polynomial by its first `k - 1` exponents, giving a
/// univariate polynomial in the last variable per group.
fn group_last(a: &SP) -> BTreeMap<Vec<u32>, UP> {
    let mut out: BTreeMap<Vec<u32>, UP> = BTreeMap::new();
    for (e, &c) in a {
        let (head, last) = e.split_at(e.len() - 1);
        let u = out.entry(head.to_vec()).or_default();
        let d = last[0] as usize;
        if u.len() <= d {
            u.resize(d + 1, 0);
        }
        u[d] = c;
    }
    out
}

fn ungroup(g: &BTreeMap<Vec<u32>, UP>) -> SP {
    let mut out = SP::new();
    for (head, u) in g {
        for (d, &c) in u.iter().enumerate() {
            if c != 0 {
                let mut e = head.clone();
                e.push(d as u32);
                out.insert(e, c);
            }
        }
    }
    out
}

/// Exact division test in lex order; returns whether `c` divides `a`.
fn divides(c: &SP, a: &SP, p: u64) -> bool {
    let (lm_c, &lc_c) = c.iter().next_back().expect("nonzero divisor");
    let inv = inv_mod(lc_c, p);
    let mut r = a.clone();
    while let Some((lm_r, &lc_r)) = r.iter().next_back() {
        if lm_c.iter().zip(lm_r).any(|(x, y)| x > y) {
            return false;
        }
        let shift: Vec<u32> = lm_r.iter().zip(lm_c).map(|(y, x)| y - x).collect();
        let q = mul_mod(lc_r, inv, p);
        for (e, &v) in c {
            let key: Vec<u32> = e.iter().zip(&shift).map(|(x, s)| x + s).collect();
            let t = mul_mod(q, v, p);
            let entry = r.entry(key).or_insert(0);
            *entry = sub_mod(*entry, t, p);
            if *entry == 0 {
                let k = e.iter().zip(&shift).map(|(x, s)| x + s).collect::<Vec<u32>>();
                r.remove(&k);
            }
        }
    }
    true
}

fn scale_sp(a: &SP, s: u64, p: u64) -> SP {
    a.iter().map(|(e, &c)| (e.clone(), mul_mod(c, s, p))).filter(|(_, c)| *c != 0).collect()
}

/// gcd of two nonzero `k`-variate polynomials modulo `p`, monic in lex
/// order, or `None` if no verified image was found.
fn pgcd(a: &SP, b: &SP, k: usize, p: u64) -> Option<SP> {
    if k == 1 {
        let to_u = |x: &SP| {
            let mut u = vec![0u64; x.keys().map(|e| e[0] as usize).max().unwrap_or(0) + 1];
            for (e, &c) in x {
                u[e[0] as usize] = c;
            }
            trim(u)
        };
        let g = u_gcd(to_u(a), to_u(b), p);
        return Some(g.iter().enumerate().filter(|(_, &c)| c != 0).map(|(d, &c)| (vec![d as u32], c)).collect());
    }
    let mut ga = group_last(a);
    let mut gb = group_last(b);
    let content = |g: &BTreeMap<Vec<u32>, UP>| {
        g.values().fold(Vec::new(), |acc: UP, u| if acc.len() == 1 { acc } else { u_gcd(acc, u.clone(), p) })
    };
    let (ca, cb) = (content(&ga), content(&gb));
    for u in ga.values_mut() {
        *u = u_div(u, &ca, p);
    }
    for u in gb.values_mut() {
        *u = u_div(u, &cb, p);
    }
    let c = u_gcd(ca, cb, p);
    let lc = u_gcd(
        ga.values().next_back().expect("nonzero").clone(),
        gb.values().next_back().expect("nonzero").clone(),
        p,
    );
    // `lc` is monic; the normalizer is the gcd of the leading coefficients.
    let lead_a = ga.values().next_back().expect("nonzero");
    let lead_b = gb.values().next_back().expect("nonzero");
    let g = u_gcd(lead_a.clone(), lead_b.clone(), p);
    debug_assert_eq!(g, lc);
    let deg_a = ga.values().map(|u| u.len() - 1).max().unwrap_or(0);
    let deg_b = gb.values().map(|u| u.len() - 1).max().unwrap_or(0);
    let bound = g.len() - 1 + deg_a.min(deg_b) + 1;
    let a1 = ungroup(&ga);
    let b1 = ungroup(&gb);

    let with_content = |res: BTreeMap<Vec<u32>, UP>| {
        let out: BTreeMap<Vec<u32>, UP> = res.into_iter().map(|(h, u)| (h, u_mul(&u, &c, p))).collect();
        let sp = ungroup(&out);
        let lead = *sp.values().next_back().expect("nonzero");
        Some(scale_sp(&sp, inv_mod(lead, p), p))
    };

    let eval = |g: &BTreeMap<Vec<u32>, UP>, x: u64| -> SP {
        g.iter()
            .map(|(h, u)| (h.clone(), u_eval(u, x, p)))
            .filter(|(_, v)| *v != 0)
            .collect()
    };

    // Interpolant: head -> univariate in the last variable.
    let mut interp: Option<Interpolant> = None;
    for alpha in 1..p.min(1 << 20) {
        let g_alpha = u_eval(&g, alpha, p);
        if g_alpha == 0 {
            continue;
        }
        let (aa, bb) = (eval(&ga, alpha), eval(&gb, alpha));
        let mut img = pgcd(&aa, &bb, k - 1, p)?;
        let (lm, _) = img.iter().next_back().map(|(e, &c)| (e.clone(), c)).expect("nonzero");
        if lm.iter().all(|&x| x == 0) {
            let mut one = BTreeMap::new();
            one.insert(vec![0u32; k - 1], vec![1u64]);
            return with_content(one);
        }
        img = scale_sp(&img, g_alpha, p);
        let reset = match &interp {
            None => true,
            Some((cur, ..)) => lm < *cur,
        };
        if reset {
            let groups: BTreeMap<Vec<u32>, UP> = img.iter().map(|(h, &v)| (h.clone(), vec![v])).collect();
            let q = vec![sub_mod(0, alpha, p), 1];
            interp = Some((lm, groups, q, 1));
        } else {
            let (cur, groups, q, n) = interp.as_mut().expect("set");
            if lm > *cur {
                continue;
            }
            // Newton step: C += (img - C(alpha)) * q / q(alpha).
            let q_alpha_inv = inv_mod(u_eval(q, alpha, p), p);
            let mut changed = false;
            let mut heads: Vec<Vec<u32>> = groups.keys().cloned().collect();
            for h in img.keys() {
                if !groups.contains_key(h) {
                    heads.push(h.clone());
                }
            }
            for h in heads {
                let u = groups.entry(h.clone()).or_default();
                let have = u_eval(u, alpha, p);
                let want = img.get(&h).copied().unwrap_or(0);
                let delta = mul_mod(sub_mod(want, have, p), q_alpha_inv, p);
                if delta != 0 {
                    changed = true;
                    let add: UP = q.iter().map(|&x| mul_mod(x, delta, p)).collect();
                    if u.len() < add.len() {
                        u.resize(add.len(), 0);
                    }
                    for (i, x) in add.into_iter().enumerate() {
                        u[i] = add_mod(u[i], x, p);
                    }
                    *u = trim(std::mem::take(u));
                }
            }
            groups.retain(|_, u| !u.is_empty());
            *q = u_mul(q, &[sub_mod(0, alpha, p), 1], p);
            *n += 1;
            if !changed || *n >= bound {
                let cont = content(groups);
                let prim: BTreeMap<Vec<u32>, UP> =
                    groups.iter().map(|(h, u)| (h.clone(), u_div(u, &cont, p))).collect();
                let cand = ungroup(&prim);
                if divides(&cand, &a1, p) && divides(&cand, &b1, p) {
                    return with_content(prim);
                }
                if *n > bound {
                    interp = None;
                }
            }
        }
    }
    None
}

/// Compressed integer polynomial over the variables in `vars`.
fn compress(a: &ZPoly, vars: &[usize]) -> BTreeMap<Vec<u32>, BigInt> {
    a.terms().map(|(m, c)| (vars.iter().map(|&v| m.0[v]).collect(), c.clone())).collect()
}

fn reduce_mod(a: &BTreeMap<Vec<u32>, BigInt>, p: u64) -> SP {
    let pb = BigInt::from(p);
    a.iter()
        .map(|(e, c)| (e.clone(), c.mod_floor(&pb).to_u64().expect("reduced")))
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// gcd of two integer polynomials with integer content one and no monomial
/// factor, up to sign; `None` when the prime budget runs out.
pub(crate) fn modular_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let universe = a.universe().clone();
    let mut vars: Vec<usize> = a.support();
    for v in b.support() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    if vars.is_empty() {
        return Some(ZPoly::one(&universe));
    }
    let k = vars.len();
    let za = compress(a, &vars);
    let zb = compress(b, &vars);
    let lead = |z: &BTreeMap<Vec<u32>, BigInt>| z.values().next_back().expect("nonzero").clone();
    let gamma = lead(&za).gcd(&lead(&zb));

    let expand = |z: &BTreeMap<Vec<u32>, BigInt>| {
        ZPoly::from_terms(
            &universe,
            z.iter()
                .map(|(e, c)| {
                    let mut m = Monomial::one(universe.len());
                    for (i, &v) in vars.iter().enumerate() {
                        m.0[v] = e[i];
                    }
                    (m, c.clone())
                })
                .collect::<Vec<_>>(),
        )
    };

    let mut current: Option<CrtState> = None;
    let mut previous: Option<BTreeMap<Vec<u32>, BigInt>> = None;
    for p in primes().take(MAX_PRIMES) {
        let pb = BigInt::from(p);
        let g_p = gamma.mod_floor(&pb).to_u64().expect("reduced");
        if g_p == 0 {
            continue;
        }
        let (ap, bp) = (reduce_mod(&za, p), reduce_mod(&zb, p));
        if ap.is_empty() || bp.is_empty() {
            continue;
        }
        let Some(img) = pgcd(&ap, &bp, k, p) else { continue };
        let lm = img.keys().next_back().expect("nonzero").clone();
        if lm.iter().all(|&x| x == 0) {
            return Some(ZPoly::one(&universe));
        }
        let img = scale_sp(&img, g_p, p);
        let restart = match &current {
            None => true,
            Some((cur, ..)) => lm < *cur,
        };
        if restart {
            let vals = img.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect();
            current = Some((lm, vals, pb));
            previous = None;
            continue;
        }
        let (cur, vals, modulus) = current.as_mut().expect("set");
        if lm > *cur {
            continue;
        }
        // Chinese remaindering: x = v + M * ((c - v) * M^{-1} mod p).
        let m_inv = BigInt::from(inv_mod(modulus.mod_floor(&pb).to_u64().expect("reduced"), p));
        let mut keys: Vec<Vec<u32>> = vals.keys().cloned().collect();
        keys.extend(img.keys().filter(|e| !vals.contains_key(*e)).cloned());
        for e in keys {
            let v = vals.get(&e).cloned().unwrap_or_default();
            let c = BigInt::from(img.get(&e).copied().unwrap_or(0));
            let t = ((c - &v) * &m_inv).mod_floor(&pb);
            let x = v + &*modulus * t;
            if x.is_zero() {
                vals.remove(&e);
            } else {
                vals.insert(e, x);
            }
        }
        *modulus *= &pb;
        let half: BigInt = &*modulus >> 1;
        let symmetric: BTreeMap<Vec<u32>, BigInt> = vals
            .iter()
            .map(|(e, x)| (e.clone(), if *x > half { x - &*modulus } else { x.clone() }))
            .collect();
        if previous.as_ref() == Some(&symmetric) {
            let cand = expand(&symmetric);
            let content = symmetric.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let cand = if content.is_one() { cand } else { cand.map_coeffs(|x| x / &content) };
            if exact_div(a, &cand).is_some() && exact_div(b, &cand).is_some() {
                let negative = cand.terms().next_back().is_some_and(|(_, c)| c.is_negative());
                return Some(if negative { -cand } else { cand });
            }
        }
        previous = Some(symmetric);
    }
    None
}
