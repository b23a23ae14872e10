//! Gauss–Legendre rules on `[0, 1]` composed with a sigmoidal change of
//! variables that flattens algebraic endpoint singularities.

use num_traits::Float;

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on `P_n` from Chebyshev-like initial guesses.
pub fn gauss_legendre<T: Float>(n: usize) -> Vec<(T, T)> {
    assert!(n > 0, "quadrature order must be positive");
    let nf = c::<T>(n as f64);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x: T = c(guess);
        let mut dp = T::one();
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kf = c::<T>(k as f64);
                let p2 = ((c::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, T::one()) } else { (p1, p0) };
            dp = nf * (x * pn - pn1) / (x * x - T::one());
            let dx = pn / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * c(4.0) {
                break;
            }
        }
        let w = c::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Exponent of the sigmoidal transform.
const SIGMOID_POWER: i32 = 4;

/// `t(u) = u^p / (u^p + (1-u)^p)` and `t'(u)`.
fn sigmoid<T: Float>(u: T) -> (T, T) {
    let p = SIGMOID_POWER;
    let v = T::one() - u;
    let (a, b) = (u.powi(p), v.powi(p));
    let den = a + b;
    let dt = c::<T>(p as f64) * u.powi(p - 1) * v.powi(p - 1) / (den * den);
    (a / den, dt)
}

/// Transformed rule on `[0, 1]`: points and weights.
pub fn unit_rule<T: Float>(n: usize) -> Vec<(T, T)> {
    let half = c::<T>(0.5);
    gauss_legendre::<T>(n)
        .into_iter()
        .map(|(x, w)| {
            let u = half * (x + T::one());
            let (t, dt) = sigmoid(u);
            (t, half * w * dt)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = gauss_legendre::<f64>(5);
        let w: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let x8: f64 = rule.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((x8 - 2.0 / 9.0).abs() < 1e-14);
        let one = gauss_legendre::<f64>(1);
        assert_eq!(one.len(), 1);
        assert!(one[0].0.abs() < 1e-15 && (one[0].1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 sqrt(t) dt = 2/3
        let v: f64 = unit_rule::<f64>(40).iter().map(|(t, w)| w * t.sqrt()).sum();
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "{v}");
    }
}
