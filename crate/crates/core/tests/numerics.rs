mod common;

use common::*;
use hyperdmod::arrangement::bounded_regions_at;
use hyperdmod::correlator::{homogeneity_op, ParameterBlock};
use hyperdmod::exactmath::{rat, Rational};
use hyperdmod::numcheck::{
    check_annihilation, eval_phi, eval_phi_with_order, find_chamber, Chamber, NumericSetting, Stencil,
};
use hyperdmod::Arrangement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta;

const A: f64 = 2.0;

fn interval() -> Arrangement {
    Arrangement::from_int_rows(&[&[2]]).unwrap()
}

/// `φ(c) = a^{-ν} c^{s+ν} B(ν, s+1)` and its first three derivatives.
fn oracle(s: f64, nu: f64, c: f64) -> [f64; 4] {
    let k = A.powf(-nu) * beta(nu, s + 1.0);
    let e = s + nu;
    [k * c.powf(e), k * e * c.powf(e - 1.0), k * e * (e - 1.0) * c.powf(e - 2.0), {
        k * e * (e - 1.0) * (e - 2.0) * c.powf(e - 3.0)
    }]
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn beta_oracle() {
    let arr = interval();
    for (s, nu, c) in [(1.3, 2.7, 1.9), (0.5, 1.5, 3.0), (2.5, 3.5, 0.7)] {
        let setting = NumericSetting::new(vec![c], vec![s], vec![nu]);
        let ch = find_chamber(&arr, &setting.c, &[c / A / 2.0]).unwrap();
        assert!(rel(eval_phi(&arr, &setting, &ch).unwrap(), oracle(s, nu, c)[0]) < 1e-8);
    }
}

#[test]
fn quadrature_converges_under_order_doubling() {
    let arr = interval();
    let mut setting = NumericSetting::new(vec![1.7], vec![0.6], vec![2.1]);
    let ch = find_chamber(&arr, &setting.c, &[0.4]).unwrap();
    let (v, order) = eval_phi_with_order(&arr, &setting, &ch).unwrap();
    setting.order = 2 * order;
    let w = eval_phi(&arr, &setting, &ch).unwrap();
    assert!(rel(v, w) < 1e-8);
}

#[test]
fn finite_differences_match_analytic_derivatives() {
    let arr = interval();
    let (s, nu, c) = (1.1, 2.3, 1.6);
    let setting = NumericSetting::new(vec![c], vec![s], vec![nu]);
    let seed = [0.4];
    let mut st = Stencil::new(&arr, &setting, &seed).unwrap();
    let want = oracle(s, nu, c);
    assert!(rel(st.derivative(&[1]).unwrap(), want[1]) < 1e-6);
    assert!(rel(st.derivative(&[2]).unwrap(), want[2]) < 1e-6);
    assert!(rel(st.derivative(&[3]).unwrap(), want[3]) < 1e-4);
}

#[test]
fn homogeneity_on_closed_form() {
    let arr = interval();
    let p = ParameterBlock::specialized(vec![rat(11, 10)], vec![rat(23, 10)]).unwrap();
    let h = homogeneity_op(&arr, &p);
    // Analytically H φ = c φ' - (s + ν) φ vanishes identically.
    let [phi, d1, _, _] = oracle(1.1, 2.3, 1.6);
    assert!((1.6 * d1 - 3.4 * phi).abs() / phi < 1e-12);
    let setting = NumericSetting::new(vec![1.6], vec![1.1], vec![2.3]);
    assert!(check_annihilation(&h, &arr, &setting, &[0.4]).unwrap().relative < 1e-8);
}

#[test]
fn scaling_law_on_unit_square() {
    let arr = fixture("axes");
    let (s, nu) = (vec![1.2, 0.8], vec![1.9, 2.6]);
    let at = |c: f64| {
        let st = NumericSetting::new(vec![c, c], s.clone(), nu.clone());
        eval_phi(&arr, &st, &find_chamber(&arr, &st.c, &[0.5, 0.5]).unwrap()).unwrap()
    };
    let degree: f64 = s.iter().chain(&nu).sum();
    assert!(rel(at(2.0), 2f64.powf(degree) * at(1.0)) < 1e-6);
}

#[test]
fn vanishing_exponents_give_monomial_integral() {
    let arr = fixture("axes");
    let (nu1, nu2, c1, c2): (f64, f64, f64, f64) = (1.7, 2.4, 1.3, 0.9);
    let st = NumericSetting::new(vec![c1, c2], vec![1e-6, 1e-6], vec![nu1, nu2]);
    let v = eval_phi(&arr, &st, &find_chamber(&arr, &st.c, &[0.5, 0.5]).unwrap()).unwrap();
    let want = c1.powf(nu1) / nu1 * c2.powf(nu2) / nu2;
    assert!(rel(v, want) < 1e-4);
    // A polygon: the two-site chamber x + y < c1, x < c2, y < c3 with s -> 0.
    let arr = fixture("two_site");
    let st = NumericSetting::new(vec![1.5, 1.0, 1.0], vec![1e-6; 3], vec![1.0 + 1e-12, 1.0 + 1e-12]);
    let ch = find_chamber(&arr, &st.c, &[0.5, 0.5]).unwrap();
    let v = eval_phi(&arr, &st, &ch).unwrap();
    assert!(rel(v, 0.875) < 1e-4, "{v}");
}

/// Bounded regions counted by walking every chamber adjacent to a vertex of
/// the displaced arrangement plus the coordinate axes.
fn brute_force_bounded(arr: &Arrangement, c: &[f64]) -> usize {
    let n = arr.n();
    let mut lines: Vec<([f64; 2], f64)> = (0..arr.m())
        .map(|i| {
            let w = [0, 1].map(|j| if j < n { to_f(&arr.matrix()[(j, i)]) } else { 0.0 });
            (w, c[i])
        })
        .collect();
    lines.push(([1.0, 0.0], 0.0));
    lines.push(([0.0, 1.0], 0.0));
    let mut found: Vec<Vec<bool>> = Vec::new();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let ((wa, ba), (wb, bb)) = (lines[a], lines[b]);
            let det = wa[0] * wb[1] - wa[1] * wb[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (ba * wb[1] - bb * wa[1]) / det;
            let y = (wa[0] * bb - wb[0] * ba) / det;
            for (dx, dy) in [(1.0, 0.37), (-0.37, 1.0), (-1.0, -0.37), (0.37, -1.0)] {
                let p = [x + 1e-6 * dx, y + 1e-6 * dy];
                if let Ok(Chamber::Polygon { .. }) = find_chamber(arr, c, &p) {
                    let sign: Vec<bool> = lines.iter().map(|(w, b)| w[0] * p[0] + w[1] * p[1] > *b).collect();
                    if !found.contains(&sign) {
                        found.push(sign);
                    }
                }
            }
        }
    }
    found.len()
}

fn to_f(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

#[test]
fn bounded_regions_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut fixtures: Vec<Arrangement> =
        ["two_lines", "axes", "two_site", "two_site_b", "three_lines", "five_lines"].map(fixture).to_vec();
    for _ in 0..10 {
        let m = rng.gen_range(2..=5);
        let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        if let Ok(a) = Arrangement::from_int_rows(&r) {
            fixtures.push(a);
        }
    }
    for arr in fixtures {
        let c: Vec<Rational> = (0..arr.m()).map(|_| rat(rng.gen_range(64..=256), 61)).collect();
        let cf: Vec<f64> = c.iter().map(to_f).collect();
        assert_eq!(bounded_regions_at(&arr, &c) as usize, brute_force_bounded(&arr, &cf), "{arr:?} at {cf:?}");
    }
}
