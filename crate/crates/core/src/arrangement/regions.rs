//! Bounded regions of `{l_i = c_i} u {x_j = 0}` via the intersection poset
//! and Zaslavsky's theorem.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Arrangement;
use crate::exactmath::{random_rational, Matrix, QMatrix, Rational};

/// Counts of one affine arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCount {
    pub bounded: u64,
    pub total: u64,
    /// Number of flats of each dimension, indexed by dimension.
    pub flats_by_dim: Vec<usize>,
}

const DRAWS: u64 = 3;
const SEED_BASE: u64 = 0x5eed_0000;

/// Hyperplanes as rows `[a | b]` of the equations `a . x = b`.
fn affine_rows(arr: &Arrangement, c: &[Rational]) -> Vec<Vec<Rational>> {
    let n = arr.n();
    let mut rows = Vec::with_capacity(arr.m() + n);
    for (i, ci) in c.iter().enumerate() {
        let mut r = arr.column(i);
        r.push(ci.clone());
        rows.push(r);
    }
    for j in 0..n {
        let mut r = vec![Rational::zero(); n + 1];
        r[j] = Rational::one();
        rows.push(r);
    }
    rows
}

fn rank_of(rows: &[Vec<Rational>], idx: &BTreeSet<usize>, width: usize) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let sel: Vec<Vec<Rational>> = idx.iter().map(|&i| rows[i][..width].to_vec()).collect();
    let m: QMatrix = Matrix::from_rows(sel).expect("rectangular");
    m.rank()
}

/// Region counts for the displacement `c` (exact intersection poset).
pub fn regions_at(arr: &Arrangement, c: &[Rational]) -> RegionCount {
    let n = arr.n();
    let rows = affine_rows(arr, c);
    let h = rows.len();
    // Flats keyed by the set of hyperplanes containing them.
    let mut flats: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    flats.insert(BTreeSet::new(), 0);
    let mut level = vec![BTreeSet::new()];
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for f in &level {
            let r = flats[f];
            for k in 0..h {
                if f.contains(&k) {
                    continue;
                }
                let mut s = f.clone();
                s.insert(k);
                let ra = rank_of(&rows, &s, n);
                if ra != rank_of(&rows, &s, n + 1) {
                    continue;
                }
                let closure: BTreeSet<usize> = (0..h)
                    .filter(|&g| {
                        let mut t = s.clone();
                        t.insert(g);
                        rank_of(&rows, &t, n + 1) == ra
                    })
                    .collect();
                if !flats.contains_key(&closure) {
                    debug_assert_eq!(ra, r + 1);
                    flats.insert(closure.clone(), ra);
                    next.insert(closure);
                }
            }
        }
        level = next.into_iter().collect();
    }
    let mut order: Vec<(&BTreeSet<usize>, usize)> = flats.iter().map(|(k, &r)| (k, r)).collect();
    order.sort_by_key(|&(k, r)| (r, k.clone()));
    let mut mu: BTreeMap<&BTreeSet<usize>, i64> = BTreeMap::new();
    for (i, &(f, _)) in order.iter().enumerate() {
        let v = if f.is_empty() {
            1
        } else {
            -order[..i]
                .iter()
                .filter(|(g, _)| g.is_subset(f))
                .map(|(g, _)| mu[g])
                .sum::<i64>()
        };
        mu.insert(f, v);
    }
    let mut flats_by_dim = vec![0; n + 1];
    let (mut chi1, mut total) = (0i64, 0i64);
    for &(f, r) in &order {
        flats_by_dim[n - r] += 1;
        chi1 += mu[f];
        total += mu[f].abs();
    }
    let bounded = if n.is_multiple_of(2) { chi1 } else { -chi1 };
    RegionCount { bounded: bounded as u64, total: total as u64, flats_by_dim }
}

/// Bounded-region count at a specific displacement.
pub fn bounded_regions_at(arr: &Arrangement, c: &[Rational]) -> u64 {
    regions_at(arr, c).bounded
}

/// Bounded-region count for a generic displacement.
///
/// Three seeded random displacements are drawn; a non-generic draw can only
/// merge flats, so the draw with the largest flat counts is used.
pub fn bounded_regions(arr: &Arrangement) -> u64 {
    (0..DRAWS)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED_BASE + k);
            let c: Vec<Rational> = (0..arr.m()).map(|_| random_rational(&mut rng, true)).collect();
            regions_at(arr, &c)
        })
        .max_by(|a, b| a.flats_by_dim.iter().rev().cmp(b.flats_by_dim.iter().rev()))
        .expect("at least one draw")
        .bounded
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn points_on_a_line() {
        // With c = a all three points sit at x = 1.
        let a = Arrangement::from_int_rows(&[&[1, 2, 3]]).unwrap();
        assert_eq!(bounded_regions(&a), 3);
        let r = regions_at(&a, &[rat(1, 1), rat(2, 1), rat(3, 1)]);
        assert_eq!(r.bounded, 1);
        assert_eq!(r.total, 3);
    }

    #[test]
    fn axes_parallel_square() {
        let a = Arrangement::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(bounded_regions(&a), 1);
        let r = regions_at(&a, &[rat(1, 1), rat(1, 1)]);
        assert_eq!((r.bounded, r.total), (1, 9));
    }

    #[test]
    fn known_counts() {
        let two_site = Arrangement::from_int_rows(&[&[1, 1, 0], &[1, 0, 1]]).unwrap();
        assert_eq!(bounded_regions(&two_site), 4);
        let five = Arrangement::from_int_rows(&[&[3, 7, 1, 1, 3], &[5, -3, -2, -1, 1]]).unwrap();
        assert_eq!(bounded_regions(&five), 15);
    }
}
