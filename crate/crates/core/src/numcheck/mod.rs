//! Numerical realization of the correlator over a bounded chamber and
//! finite-difference checks that operators annihilate it.
//!
//! For positive exponents the integrand vanishes on the chamber boundary,
//! so a bounded chamber stands in for a twisted cycle.

mod chamber;
mod quadrature;

use std::collections::HashMap;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::correlator::ParameterBlock;
use crate::error::{Error, Result};
use crate::exactmath::{rat, Rational};
use crate::weyl::WeylElement;

pub use chamber::{choose_seed_point, find_chamber, Boundary, Chamber};
pub use quadrature::{gauss_legendre, unit_rule};

use chamber::{boundaries, to_float};

/// Largest quadrature order tried before giving up.
const MAX_ORDER: usize = 512;

/// Evaluation point, exponents and discretization parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSetting<T> {
    pub c: Vec<T>,
    pub s: Vec<T>,
    pub nu: Vec<T>,
    /// Starting Gauss–Legendre order per direction.
    pub order: usize,
    /// Relative finite-difference step: `h_i = h_rel · (1 + |c_i|)`.
    pub h_rel: T,
    /// Relative change between two orders accepted as converged.
    pub quad_tol: T,
}

impl<T: Float> NumericSetting<T> {
    pub fn new(c: Vec<T>, s: Vec<T>, nu: Vec<T>) -> Self {
        NumericSetting {
            c,
            s,
            nu,
            order: 24,
            h_rel: T::from(1e-3).expect("constant"),
            quad_tol: T::from(1e-11).expect("constant"),
        }
    }

    fn with_c(&self, c: Vec<T>) -> Self {
        NumericSetting { c, ..self.clone() }
    }
}

/// `∏ |ℓ_i(x) - c_i|^{s_i} ∏ |x_j|^{ν_j - 1}`.
fn integrand<T: Float>(walls: &[(Boundary, Vec<T>, T)], setting: &NumericSetting<T>, x: &[T]) -> T {
    walls.iter().fold(T::one(), |acc, (label, w, b)| {
        let g = w.iter().zip(x).fold(-*b, |a, (wi, xi)| a + *wi * *xi).abs();
        let e = match label {
            Boundary::Hyperplane(i) => setting.s[*i],
            Boundary::Axis(j) => setting.nu[*j] - T::one(),
        };
        acc * g.powf(e)
    })
}

/// Fixed-order quadrature: the interval directly, the polygon as a fan of
/// triangles mapped from the unit square (Duffy), both with the sigmoidal
/// rule.
fn quadrature<T: Float>(arr: &Arrangement, setting: &NumericSetting<T>, chamber: &Chamber<T>, order: usize) -> T {
    let walls = boundaries(arr, &setting.c);
    let rule = unit_rule::<T>(order);
    match chamber {
        Chamber::Interval { lo, hi, .. } => {
            let len = *hi - *lo;
            len * rule.iter().fold(T::zero(), |acc, (t, w)| acc + *w * integrand(&walls, setting, &[*lo + *t * len]))
        }
        Chamber::Polygon { vertices, .. } => {
            let a = vertices[0];
            let mut total = T::zero();
            for k in 1..vertices.len() - 1 {
                let (b, c) = (vertices[k], vertices[k + 1]);
                let e1 = [b[0] - a[0], b[1] - a[1]];
                let e2 = [c[0] - b[0], c[1] - b[1]];
                let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
                for (u, wu) in &rule {
                    for (v, wv) in &rule {
                        let x = [a[0] + *u * (e1[0] + *v * e2[0]), a[1] + *u * (e1[1] + *v * e2[1])];
                        total = total + *wu * *wv * *u * jac * integrand(&walls, setting, &x);
                    }
                }
            }
            total
        }
    }
}

/// `∫ ∏ |ℓ_i - c_i|^{s_i} ∏ x_j^{ν_j - 1} dx` over the chamber, raising the
/// quadrature order until two successive orders agree to `quad_tol`.
/// Returns the value and the order used.
pub fn eval_phi_with_order<T: Float>(
    arr: &Arrangement,
    setting: &NumericSetting<T>,
    chamber: &Chamber<T>,
) -> Result<(T, usize)> {
    let mut order = setting.order.max(2);
    let mut prev = quadrature(arr, setting, chamber, order);
    let mut change = T::infinity();
    while order < MAX_ORDER {
        order *= 2;
        let next = quadrature(arr, setting, chamber, order);
        change = ((next - prev) / next).abs();
        if change <= setting.quad_tol {
            return Ok((next, order));
        }
        prev = next;
    }
    Err(Error::NoConvergence(change.to_f64().unwrap_or(f64::NAN)))
}

pub fn eval_phi<T: Float>(arr: &Arrangement, setting: &NumericSetting<T>, chamber: &Chamber<T>) -> Result<T> {
    eval_phi_with_order(arr, setting, chamber).map(|(v, _)| v)
}

/// Central-difference weights for the `k`-th derivative as offsets in
/// units of the step, without the `h^-k` factor.
fn stencil(k: u32) -> &'static [(i32, f64)] {
    match k {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => panic!("derivative order {k} above 3 per variable"),
    }
}

/// Outcome of an annihilation check.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    /// `|op • φ| / Σ |term contributions|`.
    pub relative: f64,
    pub absolute: f64,
    pub scale: f64,
    pub phi: f64,
}

/// Finite-difference evaluator of `φ` and its partials around one point.
/// Values at stencil nodes are cached, so checking several operators at the
/// same point reuses them.
pub struct Stencil<'a, T> {
    arr: &'a Arrangement,
    setting: &'a NumericSetting<T>,
    seed_point: &'a [T],
    signature: Vec<Boundary>,
    order: usize,
    steps: Vec<T>,
    phi: T,
    cache: HashMap<Vec<i32>, T>,
}

impl<'a, T: Float> Stencil<'a, T> {
    pub fn new(arr: &'a Arrangement, setting: &'a NumericSetting<T>, seed_point: &'a [T]) -> Result<Self> {
        let base = find_chamber(arr, &setting.c, seed_point)?;
        let (phi, order) = eval_phi_with_order(arr, setting, &base)?;
        let steps = setting.c.iter().map(|ci| setting.h_rel * (T::one() + ci.abs())).collect();
        Ok(Stencil { arr, setting, seed_point, signature: base.signature(), order, steps, phi, cache: HashMap::new() })
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    fn value_at(&mut self, offsets: &[i32]) -> Result<T> {
        if let Some(v) = self.cache.get(offsets) {
            return Ok(*v);
        }
        let c: Vec<T> = (0..self.arr.m())
            .map(|i| self.setting.c[i] + T::from(offsets[i]).expect("small integer") * self.steps[i])
            .collect();
        let ch = find_chamber(self.arr, &c, self.seed_point)?;
        if ch.signature() != self.signature {
            return Err(Error::Degenerate("chamber changes type inside the stencil; pick another c".into()));
        }
        let v = quadrature(self.arr, &self.setting.with_c(c), &ch, self.order);
        self.cache.insert(offsets.to_vec(), v);
        Ok(v)
    }

    /// Tensor central difference for `∂^β φ` with steps `mult · h`.
    fn difference(&mut self, beta: &[u32], mult: i32) -> Result<T> {
        let m = beta.len();
        let mut total = T::zero();
        let mut idx = vec![0usize; m];
        loop {
            let mut weight = 1.0;
            let mut offsets = vec![0i32; m];
            for i in 0..m {
                let (o, w) = stencil(beta[i])[idx[i]];
                weight *= w;
                offsets[i] = o * mult;
            }
            total = total + T::from(weight).expect("weight") * self.value_at(&offsets)?;
            let mut i = 0;
            while i < m {
                idx[i] += 1;
                if idx[i] < stencil(beta[i]).len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        let denom = (0..m).fold(T::one(), |acc, i| {
            acc * (self.steps[i] * T::from(mult).expect("small")).powi(beta[i] as i32)
        });
        Ok(total / denom)
    }

    /// `∂^β φ` with one Richardson level over steps `h` and `2h`.
    pub fn derivative(&mut self, beta: &[u32]) -> Result<T> {
        if beta.iter().all(|&b| b == 0) {
            return Ok(self.phi);
        }
        let (d1, d2) = (self.difference(beta, 1)?, self.difference(beta, 2)?);
        Ok((T::from(4.0).expect("constant") * d1 - d2) / T::from(3.0).expect("constant"))
    }

    /// Residual of `op • φ` at the centre point.
    pub fn residual(&mut self, op: &WeylElement) -> Result<Residual> {
        if !op.is_specialized() {
            return Err(Error::InvalidInput("operator must be specialized".into()));
        }
        if op.order() > 3 {
            return Err(Error::InvalidInput("finite differences support d-order <= 3".into()));
        }
        let m = self.arr.m();
        let point: Vec<f64> = self
            .setting
            .c
            .iter()
            .map(|x| x.to_f64().expect("finite"))
            .chain(std::iter::repeat_n(0.0, m))
            .collect();
        let mut sum = T::zero();
        let mut scale = T::zero();
        for (beta, coeff) in op.by_d() {
            let k = T::from(coeff.eval_with(&point, to_float::<f64>)).expect("finite");
            let term = k * self.derivative(&beta)?;
            sum = sum + term;
            scale = scale + term.abs();
        }
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let relative = if scale.is_zero() { 0.0 } else { f(sum.abs() / scale) };
        Ok(Residual { relative, absolute: f(sum.abs()), scale: f(scale), phi: f(self.phi) })
    }
}

/// Evaluates `(op • φ)(c)` by central finite differences with one level of
/// Richardson extrapolation (steps `h` and `2h`). The chamber is recomputed
/// from `seed_point` at every stencil node and must keep its combinatorial
/// type.
pub fn check_annihilation<T: Float>(
    op: &WeylElement,
    arr: &Arrangement,
    setting: &NumericSetting<T>,
    seed_point: &[T],
) -> Result<Residual> {
    Stencil::new(arr, setting, seed_point)?.residual(op)
}

/// Exponents for numerical checks: `s_i ∈ [1/2, 5/2]`, `ν_j ∈ [3/2, 7/2]`,
/// drawn from `seed` with denominator 16 and kept admissible.
pub fn random_exponents(m: usize, n: usize, seed: u64) -> ParameterBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(8..=40), 16)).collect();
        let nu: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(24..=56), 16)).collect();
        if let Ok(p) = ParameterBlock::specialized(s, nu) {
            return p;
        }
    }
}

/// Relative perturbation of `c` under which a drawn chamber must keep its
/// combinatorial type; well above the finite-difference stencil width.
const STABILITY_MARGIN: f64 = 0.05;

/// Whether the chamber of `seed` keeps its type when every `c_i` moves by
/// `±STABILITY_MARGIN · (1 + |c_i|)`, all sign patterns.
fn stable_chamber(arr: &Arrangement, c: &[f64], seed: &[f64]) -> bool {
    let Ok(base) = find_chamber(arr, c, seed) else { return false };
    let signature = base.signature();
    let m = c.len();
    (0..1u32 << m).all(|mask| {
        let moved: Vec<f64> = (0..m)
            .map(|i| {
                let sign = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                c[i] + sign * STABILITY_MARGIN * (1.0 + c[i].abs())
            })
            .collect();
        find_chamber(arr, &moved, seed).is_ok_and(|ch| ch.signature() == signature)
    })
}

/// A displacement `c` in `[1, 4]^m` (rational with denominator 64) and a
/// seed point of a bounded chamber, drawn from `seed`. Draws whose chamber
/// is missing or changes type under small perturbations of `c` are
/// redrawn.
pub fn random_point(arr: &Arrangement, seed: u64) -> Result<(Vec<Rational>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let c: Vec<Rational> = (0..arr.m()).map(|_| rat(rng.gen_range(64..=256), 64)).collect();
        let cf: Vec<f64> = c.iter().map(to_float).collect();
        if let Some(p) = choose_seed_point(arr, &cf) {
            if stable_chamber(arr, &cf, &p) {
                return Ok((c, p));
            }
        }
    }
    Err(Error::Unbounded)
}

/// Numeric setting matching a specialized parameter block.
pub fn setting_for(c: &[Rational], p: &ParameterBlock) -> Result<NumericSetting<f64>> {
    let ParameterBlock::Specialized { s, nu } = p else {
        return Err(Error::InvalidInput("numerical checks need specialized parameters".into()));
    };
    if s.iter().any(|x| *x <= Rational::from_integer(0.into()))
        || nu.iter().any(|x| *x <= Rational::from_integer(1.into()))
    {
        return Err(Error::InvalidInput("numerical checks need s > 0 and nu > 1".into()));
    }
    Ok(NumericSetting::new(
        c.iter().map(to_float).collect(),
        s.iter().map(to_float).collect(),
        nu.iter().map(to_float).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::{homogeneity_op, hyperplane_op};

    #[test]
    fn beta_closed_form() {
        // φ(c) = a^{-ν} c^{s+ν} B(ν, s+1) on (0, c/a).
        let arr = Arrangement::from_int_rows(&[&[2]]).unwrap();
        let (s, nu, c) = (1.3, 2.7, 1.9);
        let setting = NumericSetting::new(vec![c], vec![s], vec![nu]);
        let ch = find_chamber(&arr, &setting.c, &[0.3]).unwrap();
        let got = eval_phi(&arr, &setting, &ch).unwrap();
        let want = 2f64.powf(-nu) * c.powf(s + nu) * statrs::function::beta::beta(nu, s + 1.0);
        assert!(((got - want) / want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn homogeneity_scaling() {
        let arr = Arrangement::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let (s, nu) = (vec![0.7, 1.6], vec![2.2, 1.8]);
        let one = NumericSetting::new(vec![1.0, 1.0], s.clone(), nu.clone());
        let two = NumericSetting::new(vec![2.0, 2.0], s, nu);
        let p1 = eval_phi(&arr, &one, &find_chamber(&arr, &one.c, &[0.5, 0.5]).unwrap()).unwrap();
        let p2 = eval_phi(&arr, &two, &find_chamber(&arr, &two.c, &[0.5, 0.5]).unwrap()).unwrap();
        let degree = 0.7 + 1.6 + 2.2 + 1.8;
        assert!((p2 / p1 / 2f64.powf(degree) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn annihilation_on_small_fixtures() {
        let arr = Arrangement::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let p = random_exponents(2, 2, 3);
        let (c, seed) = random_point(&arr, 5).unwrap();
        let setting = setting_for(&c, &p).unwrap();
        let h = homogeneity_op(&arr, &p);
        assert!(check_annihilation(&h, &arr, &setting, &seed).unwrap().relative < 1e-6);
        let l = hyperplane_op(&arr, 0, &p).unwrap();
        assert!(check_annihilation(&l, &arr, &setting, &seed).unwrap().relative < 1e-3);
        // A non-annihilating operator is detected.
        let u = l.universe().clone();
        let d1 = WeylElement::d(&u, 2, 0);
        assert!(check_annihilation(&d1, &arr, &setting, &seed).unwrap().relative > 0.5);
    }
}
