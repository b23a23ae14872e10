use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub SmallVec<[u32; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(SmallVec::from_vec(v))
    }
}

/// Admissible monomial orders on dense exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermOrder {
    Lex,
    DegRevLex,
    /// Consecutive variable blocks of the given sizes, compared block by
    /// block (first block most significant), degrevlex inside each block.
    Block(Vec<usize>),
    /// Integer weight vector, ties broken by the inner order.
    Weight { weights: Vec<i64>, tie: Box<TermOrder> },
}

impl TermOrder {
    /// Elimination order for the first `k` of `n` variables.
    pub fn elimination(k: usize, n: usize) -> TermOrder {
        TermOrder::Block(vec![k, n - k])
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegRevLex => degrevlex(a, b),
            TermOrder::Block(sizes) => {
                let mut start = 0;
                for &s in sizes {
                    let end = (start + s).min(a.len());
                    let o = degrevlex(&a[start..end], &b[start..end]);
                    if o != Ordering::Equal {
                        return o;
                    }
                    start = end;
                }
                degrevlex(&a[start..], &b[start..])
            }
            TermOrder::Weight { weights, tie } => {
                let wa: i64 = weights.iter().zip(a).map(|(w, &e)| w * e as i64).sum();
                let wb: i64 = weights.iter().zip(b).map(|(w, &e)| w * e as i64).sum();
                wa.cmp(&wb).then_with(|| tie.cmp(a, b))
            }
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_examples() {
        let o = TermOrder::DegRevLex;
        // x^2 > xy > y^2 > xz in degrevlex with x > y > z
        assert_eq!(o.cmp(&[2, 0, 0], &[1, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 1, 0], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2, 0], &[1, 0, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 1], &[1, 0, 0]), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = TermOrder::elimination(1, 3);
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2, 0], &[0, 1, 1]), Ordering::Greater);
    }

    #[test]
    fn weight_order_refines() {
        let o = TermOrder::Weight { weights: vec![0, 1], tie: Box::new(TermOrder::DegRevLex) };
        assert_eq!(o.cmp(&[0, 1], &[5, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 1], &[0, 1]), Ordering::Greater);
    }
}
