//! Bounded chambers of the displaced arrangement together with the
//! coordinate hyperplanes, for `n = 1` and `n = 2`.

use num_traits::Float;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// A boundary hyperplane of a chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Boundary {
    /// `ℓ_i = c_i`, zero-based.
    Hyperplane(usize),
    /// `x_j = 0`, zero-based.
    Axis(usize),
}

/// A bounded region: an interval or a convex polygon.
#[derive(Clone, Debug, PartialEq)]
pub enum Chamber<T> {
    Interval { lo: T, hi: T, walls: [Boundary; 2] },
    /// Counterclockwise vertices; `edges[k]` runs from vertex `k` to `k + 1`.
    Polygon { vertices: Vec<[T; 2]>, edges: Vec<Boundary> },
}

impl<T: Float> Chamber<T> {
    /// Boundary hyperplanes in cyclic order starting from the smallest, for
    /// detecting changes of combinatorial type.
    pub fn signature(&self) -> Vec<Boundary> {
        match self {
            Chamber::Interval { walls, .. } => walls.to_vec(),
            Chamber::Polygon { edges, .. } => {
                let start = (0..edges.len()).min_by_key(|&k| edges[k]).unwrap_or(0);
                edges[start..].iter().chain(&edges[..start]).copied().collect()
            }
        }
    }

    /// Length or area.
    pub fn measure(&self) -> T {
        match self {
            Chamber::Interval { lo, hi, .. } => *hi - *lo,
            Chamber::Polygon { vertices, .. } => {
                let n = vertices.len();
                let twice = (0..n).fold(T::zero(), |acc, k| {
                    let (a, b) = (vertices[k], vertices[(k + 1) % n]);
                    acc + a[0] * b[1] - a[1] * b[0]
                });
                twice / T::from(2.0).expect("constant")
            }
        }
    }
}

pub(crate) fn to_float<T: Float>(r: &Rational) -> T {
    let (n, d) = (r.numer(), r.denom());
    let f = |x: &num_bigint::BigInt| -> f64 { num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN) };
    T::from(f(n) / f(d)).expect("finite rational")
}

/// Affine functions `g(x) = w · x - b` of every boundary hyperplane.
pub(crate) fn boundaries<T: Float>(arr: &Arrangement, c: &[T]) -> Vec<(Boundary, Vec<T>, T)> {
    let (m, n) = (arr.m(), arr.n());
    let mut out = Vec::with_capacity(m + n);
    for (i, ci) in c.iter().enumerate().take(m) {
        let w = (0..n).map(|j| to_float(&arr.matrix()[(j, i)])).collect();
        out.push((Boundary::Hyperplane(i), w, *ci));
    }
    for j in 0..n {
        let mut w = vec![T::zero(); n];
        w[j] = T::one();
        out.push((Boundary::Axis(j), w, T::zero()));
    }
    out
}

fn eval_affine<T: Float>(w: &[T], b: T, x: &[T]) -> T {
    w.iter().zip(x).fold(-b, |acc, (wi, xi)| acc + *wi * *xi)
}

/// The bounded region containing `seed` of `{ℓ_i = c_i} ∪ {x_j = 0}`.
pub fn find_chamber<T: Float>(arr: &Arrangement, c: &[T], seed: &[T]) -> Result<Chamber<T>> {
    let n = arr.n();
    if c.len() != arr.m() || seed.len() != n {
        return Err(Error::InvalidInput("dimension mismatch for c or seed point".into()));
    }
    if n > 2 {
        return Err(Error::InvalidInput("numerical chambers need n <= 2".into()));
    }
    let walls = boundaries(arr, c);
    let scale = c.iter().chain(seed).fold(T::one(), |acc, x| acc.max(x.abs()));
    let tiny = T::from(1e-12).expect("constant") * scale;
    for (_, w, b) in &walls {
        if eval_affine(w, *b, seed).abs() <= tiny {
            return Err(Error::Degenerate("seed point lies on a boundary hyperplane".into()));
        }
    }
    if n == 1 {
        let x0 = seed[0];
        let mut lo: Option<(T, Boundary)> = None;
        let mut hi: Option<(T, Boundary)> = None;
        for (label, w, b) in &walls {
            if w[0].is_zero() {
                continue;
            }
            let root = *b / w[0];
            if root < x0 && lo.is_none_or(|(v, _)| root > v) {
                lo = Some((root, *label));
            }
            if root > x0 && hi.is_none_or(|(v, _)| root < v) {
                hi = Some((root, *label));
            }
        }
        return match (lo, hi) {
            (Some((lo, a)), Some((hi, b))) => Ok(Chamber::Interval { lo, hi, walls: [a, b] }),
            _ => Err(Error::Unbounded),
        };
    }
    // Clip a large box by the half-planes containing the seed.
    let big = scale * T::from(1e4).expect("constant");
    let mut poly: Vec<([T; 2], Option<Boundary>)> = vec![
        ([-big, -big], None),
        ([big, -big], None),
        ([big, big], None),
        ([-big, big], None),
    ];
    for (label, w, b) in &walls {
        let side = eval_affine(w, *b, seed).signum();
        let val = |p: &[T; 2]| side * eval_affine(w, *b, p);
        let mut out = Vec::with_capacity(poly.len() + 1);
        for k in 0..poly.len() {
            let (p, lab) = poly[k];
            let q = poly[(k + 1) % poly.len()].0;
            let (vp, vq) = (val(&p), val(&q));
            let cross = |t: T| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            match (vp >= T::zero(), vq >= T::zero()) {
                (true, true) => out.push((p, lab)),
                (true, false) => {
                    out.push((p, lab));
                    out.push((cross(vp / (vp - vq)), Some(*label)));
                }
                (false, true) => out.push((cross(vp / (vp - vq)), lab)),
                (false, false) => {}
            }
        }
        out.dedup_by(|a, b| a.0 == b.0);
        poly = out;
        if poly.len() < 3 {
            return Err(Error::Degenerate("empty chamber".into()));
        }
    }
    let mut edges = Vec::with_capacity(poly.len());
    for (_, lab) in &poly {
        edges.push(lab.ok_or(Error::Unbounded)?);
    }
    let vertices = poly.into_iter().map(|(p, _)| p).collect();
    Ok(Chamber::Polygon { vertices, edges })
}

/// A seed point inside a bounded chamber of maximal measure, or `None` when
/// no chamber is bounded. Candidates are points next to the vertices of the
/// arrangement (`n = 2`) or midpoints between consecutive roots (`n = 1`).
pub fn choose_seed_point<T: Float>(arr: &Arrangement, c: &[T]) -> Option<Vec<T>> {
    let walls = boundaries(arr, c);
    let half = T::from(0.5).expect("constant");
    let candidates: Vec<Vec<T>> = match arr.n() {
        1 => {
            let mut roots: Vec<T> =
                walls.iter().filter(|(_, w, _)| !w[0].is_zero()).map(|(_, w, b)| *b / w[0]).collect();
            roots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            roots.windows(2).filter(|p| p[1] > p[0]).map(|p| vec![(p[0] + p[1]) * half]).collect()
        }
        2 => {
            let mut pts = Vec::new();
            let scale = c.iter().fold(T::one(), |acc, x| acc.max(x.abs()));
            let eps = scale * T::from(1e-3).expect("constant");
            for a in 0..walls.len() {
                for b in a + 1..walls.len() {
                    let (wa, ba) = (&walls[a].1, walls[a].2);
                    let (wb, bb) = (&walls[b].1, walls[b].2);
                    let det = wa[0] * wb[1] - wa[1] * wb[0];
                    if det.abs() <= T::epsilon() {
                        continue;
                    }
                    let x = (ba * wb[1] - bb * wa[1]) / det;
                    let y = (wa[0] * bb - wb[0] * ba) / det;
                    for (dx, dy) in [(1.0, 0.3), (-0.3, 1.0), (-1.0, -0.3), (0.3, -1.0)] {
                        let dx = T::from(dx).expect("constant") * eps;
                        let dy = T::from(dy).expect("constant") * eps;
                        pts.push(vec![x + dx, y + dy]);
                    }
                }
            }
            pts
        }
        _ => Vec::new(),
    };
    let mut best: Option<(T, Vec<T>)> = None;
    for p in candidates {
        if let Ok(ch) = find_chamber(arr, c, &p) {
            let area = ch.measure().abs();
            if best.as_ref().is_none_or(|(a, _)| area > *a) {
                // Re-seed at the centroid so the point stays interior when c moves.
                let centre = match &ch {
                    Chamber::Interval { lo, hi, .. } => vec![(*lo + *hi) * half],
                    Chamber::Polygon { vertices, .. } => {
                        let k = T::from(vertices.len() as f64).expect("constant");
                        let sx = vertices.iter().fold(T::zero(), |a, v| a + v[0]);
                        let sy = vertices.iter().fold(T::zero(), |a, v| a + v[1]);
                        vec![sx / k, sy / k]
                    }
                };
                best = Some((area, centre));
            }
        }
    }
    best.map(|(_, p)| p)
}
