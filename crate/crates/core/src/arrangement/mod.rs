//! Central hyperplane arrangements given by a rational coefficient matrix:
//! circuits, degree-zero syzygies, the discriminantal arrangement, bounded
//! region counts and the reciprocal linear space.

mod regions;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    format_rational, kernel_basis, parse_rational, primitive_integer_vector, Integer, Matrix,
    Monomial, QMatrix, QPoly, Rational, Universe,
};

pub use regions::{bounded_regions, bounded_regions_at, regions_at};

/// `n x m` matrix whose column `i` holds the coefficients of the linear
/// form `l_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    a: QMatrix,
}

/// Minimally dependent set of columns with its kernel generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    /// Zero-based, increasing column indices.
    pub indices: Vec<usize>,
    /// Primitive integer kernel vector, aligned with `indices`.
    pub kernel: Vec<Integer>,
}

/// Dependent column set that is not a circuit, with a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependentSet {
    pub indices: Vec<usize>,
    pub kernel_columns: Vec<Vec<Integer>>,
}

/// Polynomial vector `p` in `Q[c]^m` with `A p = 0` and `sum p_i c_i = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Syzygy {
    /// Column subset the syzygy was computed on; entries outside are zero.
    pub support: Vec<usize>,
    pub vector: Vec<QPoly>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<serde_json::Value>>,
}

fn entry_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(
            n.as_i64().expect("checked").into(),
        )),
        other => Err(Error::InvalidInput(format!(
            "matrix entries must be rational strings or integers, got {other}"
        ))),
    }
}

impl Arrangement {
    pub fn new(a: QMatrix) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidInput("arrangement needs n >= 1 and m >= 1".into()));
        }
        for j in 0..a.cols() {
            if a.column(j).iter().all(Zero::is_zero) {
                return Err(Error::ZeroColumn { index: j + 1 });
            }
        }
        Ok(Arrangement { a })
    }

    pub fn load(n: usize, m: usize, entries: Vec<Vec<Rational>>) -> Result<Self> {
        if entries.len() != n || entries.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput(format!("expected a {n}x{m} matrix")));
        }
        Self::new(Matrix::from_rows(entries)?)
    }

    /// Convenience constructor from integer rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::load(n, m, entries)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ArrangementJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("arrangement JSON: {e}")))?;
        let entries = j
            .a
            .iter()
            .map(|row| row.iter().map(entry_from_json).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::load(j.n, j.m, entries)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.n())
            .map(|i| self.a.row(i).iter().map(format_rational).collect())
            .collect();
        serde_json::json!({ "n": self.n(), "m": self.m(), "A": rows })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }

    /// Coefficient vector of `l_i` (zero-based).
    pub fn column(&self, i: usize) -> Vec<Rational> {
        self.a.column(i)
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn restrict(&self, cols: &[usize]) -> QMatrix {
        self.a.select_columns(cols)
    }

    /// Universe `c1..cm` used for every polynomial in the shift variables.
    pub fn c_universe(&self) -> Universe {
        Universe::indexed("c", self.m())
    }
}

/// Subsets of `0..m` of size `k` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

fn integer_column(k: &QMatrix, j: usize) -> Vec<Integer> {
    k.column(j).into_iter().map(|x| x.to_integer()).collect()
}

/// All minimal dependent column sets, by increasing size then
/// lexicographically.
pub fn circuits(arr: &Arrangement) -> Vec<Circuit> {
    let max = (arr.rank() + 1).min(arr.m());
    let mut out = Vec::new();
    for k in 1..=max {
        for s in subsets(arr.m(), k) {
            let sub = arr.restrict(&s);
            if sub.rank() != k - 1 {
                continue;
            }
            let minimal = (0..k).all(|drop| {
                let rest: Vec<usize> =
                    s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &c)| c).collect();
                arr.restrict(&rest).rank() == k - 1
            });
            if minimal {
                let kb = kernel_basis(&sub);
                debug_assert_eq!(kb.cols(), 1);
                out.push(Circuit { indices: s, kernel: integer_column(&kb, 0) });
            }
        }
    }
    out
}

/// Dependent column sets that properly contain a circuit.
pub fn nonminimal_dependent_sets(arr: &Arrangement) -> Vec<DependentSet> {
    let circ = circuits(arr);
    let mut out = Vec::new();
    for k in 2..=arr.m() {
        for s in subsets(arr.m(), k) {
            let sub = arr.restrict(&s);
            if sub.rank() == k || circ.iter().any(|c| c.indices == s) {
                continue;
            }
            let kb = kernel_basis(&sub);
            out.push(DependentSet {
                indices: s,
                kernel_columns: (0..kb.cols()).map(|j| integer_column(&kb, j)).collect(),
            });
        }
    }
    out
}

/// Degree-zero syzygies of the full column set.
pub fn degree0_syzygies(arr: &Arrangement) -> Vec<Vec<QPoly>> {
    let all: Vec<usize> = (0..arr.m()).collect();
    syzygies_on(arr, &all).into_iter().map(|s| s.vector).collect()
}

/// Degree-zero syzygies supported on the column subset `cols`, as vectors of
/// length `m` over `Q[c1..cm]`.
///
/// With `K` a kernel basis of `A_cols`, every syzygy is `K v` where
/// `g . v = 0` for the row `g = c^T K` of linear forms. The forms in `g` are
/// linearly independent, so the Koszul relations generate all solutions.
pub fn syzygies_on(arr: &Arrangement, cols: &[usize]) -> Vec<Syzygy> {
    let u = arr.c_universe();
    let k = kernel_basis(&arr.restrict(cols));
    let d = k.cols();
    let g: Vec<QPoly> = (0..d)
        .map(|j| {
            cols.iter().enumerate().fold(QPoly::zero(&u), |acc, (r, &c)| {
                acc + QPoly::var(&u, c).scale(&k[(r, j)])
            })
        })
        .collect();
    let lift = |v: &[QPoly]| -> Vec<QPoly> {
        let mut p = vec![QPoly::zero(&u); arr.m()];
        for (r, &c) in cols.iter().enumerate() {
            p[c] = (0..d).fold(QPoly::zero(&u), |acc, j| acc + v[j].scale(&k[(r, j)]));
        }
        p
    };
    let mut out = Vec::new();
    // Constant solutions v with g . v = 0: kernel of the coefficient matrix of g.
    let coeff = Matrix::from_columns(
        &(0..d)
            .map(|j| (0..arr.m()).map(|c| g[j].coeff(&Monomial::var(arr.m(), c))).collect())
            .collect::<Vec<Vec<Rational>>>(),
        arr.m(),
    );
    let kc = kernel_basis(&coeff);
    for j in 0..kc.cols() {
        let v: Vec<QPoly> = kc.column(j).into_iter().map(|x| QPoly::constant(&u, x)).collect();
        out.push(lift(&v));
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut v = vec![QPoly::zero(&u); d];
            v[i] = g[j].clone();
            v[j] = -g[i].clone();
            out.push(lift(&v));
        }
    }
    out.into_iter()
        .filter(|p| p.iter().any(|x| !x.is_zero()))
        .map(|p| Syzygy { support: cols.to_vec(), vector: normalize_vector(p) })
        .collect()
}

/// Scales a polynomial vector to integer coefficients with gcd one and the
/// leading coefficient of its first nonzero entry positive.
fn normalize_vector(p: Vec<QPoly>) -> Vec<QPoly> {
    let coeffs: Vec<Rational> = p.iter().flat_map(|x| x.terms().map(|(_, c)| c.clone())).collect();
    let ints = primitive_integer_vector(&coeffs);
    let scale = Rational::from_integer(ints[0].clone()) / &coeffs[0];
    let scaled: Vec<QPoly> = p.iter().map(|x| x.scale(&scale)).collect();
    let first = scaled.iter().find(|x| !x.is_zero()).expect("nonzero vector");
    let lead_negative = first
        .leading_term(&crate::exactmath::TermOrder::DegRevLex)
        .is_some_and(|(_, c)| c.is_negative());
    if lead_negative {
        scaled.into_iter().map(|x| -x).collect()
    } else {
        scaled
    }
}

fn linear_form(coeffs: &[Rational], u: &Universe) -> QPoly {
    coeffs
        .iter()
        .enumerate()
        .fold(QPoly::zero(u), |acc, (i, a)| acc + QPoly::var(u, i).scale(a))
}

/// Maximal minors of `[[I_n, A], [0, -c]]` as primitive linear forms in `c`,
/// deduplicated, in order of first appearance.
pub fn discriminantal(arr: &Arrangement) -> Vec<QPoly> {
    let (n, m) = (arr.n(), arr.m());
    let u = arr.c_universe();
    let top = |col: usize| -> Vec<Rational> {
        if col < n {
            let mut e = vec![Rational::zero(); n];
            e[col] = Rational::one();
            e
        } else {
            arr.column(col - n)
        }
    };
    let mut out: Vec<QPoly> = Vec::new();
    for s in subsets(n + m, n + 1) {
        // Expand along the last row, whose only nonzero entries are -c_j.
        let mut coeffs = vec![Rational::zero(); m];
        for (pos, &col) in s.iter().enumerate() {
            if col < n {
                continue;
            }
            let rest: Vec<Vec<Rational>> =
                s.iter().filter(|&&x| x != col).map(|&x| top(x)).collect();
            let minor = Matrix::from_columns(&rest, n).determinant();
            let sign = if (n + pos) % 2 == 0 { Rational::one() } else { -Rational::one() };
            coeffs[col - n] = -(sign * minor);
        }
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let f = linear_form(&coeffs, &u).primitive();
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Circuit polynomials `f_C = sum_{c in C} K_c prod_{c' in C, c' != c} y_c'`.
pub fn reciprocal_gb(arr: &Arrangement) -> Vec<QPoly> {
    let u = Universe::indexed("y", arr.m());
    circuits(arr)
        .iter()
        .map(|c| {
            let mut f = QPoly::zero(&u);
            for (pos, k) in c.kernel.iter().enumerate() {
                let mut e = Monomial::one(arr.m());
                for (q, &idx) in c.indices.iter().enumerate() {
                    if q != pos {
                        e.0[idx] = 1;
                    }
                }
                f.add_term(e, Rational::from_integer(k.clone()));
            }
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn zero_column_is_rejected_with_index() {
        let e = Arrangement::from_int_rows(&[&[1, 0], &[2, 0]]).unwrap_err();
        assert!(matches!(e, Error::ZeroColumn { index: 2 }));
    }

    #[test]
    fn json_roundtrip() {
        let a = Arrangement::from_json(r#"{"n":2,"m":3,"A":[["1","1/2",0],["1","0","-3"]]}"#)
            .unwrap();
        assert_eq!(a.column(1), vec![rat(1, 2), rat(0, 1)]);
        let back = Arrangement::from_json(&a.to_json().to_string()).unwrap();
        assert_eq!(a, back);
        assert!(Arrangement::from_json(r#"{"n":2,"m":1,"A":[["1"]]}"#).is_err());
    }

    #[test]
    fn circuits_of_small_examples() {
        let two = Arrangement::from_int_rows(&[&[1, 2]]).unwrap();
        assert_eq!(circuits(&two), vec![Circuit { indices: vec![0, 1], kernel: ints(&[2, -1]) }]);
        let three = Arrangement::from_int_rows(&[&[3, 7, 1], &[5, -3, -2]]).unwrap();
        assert_eq!(
            circuits(&three),
            vec![Circuit { indices: vec![0, 1, 2], kernel: ints(&[1, -1, 4]) }]
        );
        let ind = Arrangement::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(circuits(&ind).is_empty());
    }

    #[test]
    fn repeated_columns_form_a_two_circuit() {
        let a = Arrangement::from_int_rows(&[&[1, 2, 0], &[1, 2, 1]]).unwrap();
        let c = circuits(&a);
        assert_eq!(c[0], Circuit { indices: vec![0, 1], kernel: ints(&[2, -1]) });
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn reciprocal_polynomials() {
        let three = Arrangement::from_int_rows(&[&[3, 7, 1], &[5, -3, -2]]).unwrap();
        let u = Universe::indexed("y", 3);
        assert_eq!(
            reciprocal_gb(&three),
            vec![QPoly::parse("y2*y3 - y1*y3 + 4*y1*y2", &u).unwrap()]
        );
        let two = Arrangement::from_int_rows(&[&[1, 2]]).unwrap();
        let u = Universe::indexed("y", 2);
        assert_eq!(reciprocal_gb(&two), vec![QPoly::parse("2*y2 - y1", &u).unwrap()]);
    }
}
