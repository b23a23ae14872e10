use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Shorthand for `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Scale a rational vector to integers with gcd 1 and first nonzero entry
/// positive. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Random rational with numerator uniform in `[1000, 1_000_000]` and
/// denominator uniform in `1..=9`, negated with probability one half when
/// `signed` is set.
pub fn random_rational<R: rand::Rng>(rng: &mut R, signed: bool) -> Rational {
    let p: i64 = rng.gen_range(1_000..=1_000_000);
    let q: i64 = rng.gen_range(1..=9);
    let r = rat(p, q);
    if signed && rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = [rat(-1, 2), rat(1, 4), rat(0, 1)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)]);
        assert_eq!(
            primitive_integer_vector(&[rat(0, 1), rat(0, 1)]),
            vec![BigInt::zero(), BigInt::zero()]
        );
    }
}
