//! Exact integer and rational arithmetic.
//!
//! Occupancies of the larger constructions are products of factorials that
//! overflow 64 bits long before the grids get interesting, so everything that
//! has to be exact goes through [`BigInt`] / [`Rational`].

use std::fmt;

use num_bigint::BigInt as NumBigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type BigInt = NumBigInt;
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("the reciprocal-product sum is exactly zero")]
    ZeroSum,
    #[error("need at least two distinct integers, got {0}")]
    TooFewValues(usize),
    #[error("values must be distinct, {0} repeats")]
    RepeatedValue(i64),
    #[error("2-adic valuation of zero is undefined")]
    ZeroInput,
    #[error("parts sum to {parts} which exceeds the total {total}")]
    PartsExceedTotal { parts: u64, total: u64 },
}

/// An eigenvalue of the form `(alpha + beta * sqrt(delta)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticEigenvalue {
    pub alpha: i64,
    pub beta: i64,
    pub delta: u64,
}

impl QuadraticEigenvalue {
    pub fn new(alpha: i64, beta: i64, delta: u64) -> Self {
        assert!(delta >= 1, "delta must be positive");
        QuadraticEigenvalue { alpha, beta, delta }
    }

    pub fn value(&self) -> f64 {
        (self.alpha as f64 + self.beta as f64 * (self.delta as f64).sqrt()) / 2.0
    }
}

impl fmt::Display for QuadraticEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.alpha, self.beta, self.delta)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n! / (parts[0]! * parts[1]! * ... * (n - sum(parts))!)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt, ArithError> {
    let used: u64 = parts.iter().sum();
    if used > n {
        return Err(ArithError::PartsExceedTotal { parts: used, total: n });
    }
    let mut denom = factorial(n - used);
    for &p in parts {
        denom *= factorial(p);
    }
    Ok(factorial(n) / denom)
}

/// `R = 1 / sum_l (-1)^l / prod_{m != l} (l - m)` over the given integers.
///
/// Admissibility of the set (alternating parity and so on) is the caller's
/// business; this only needs distinct values and a nonzero sum.
pub fn rational_sum_of_reciprocal_products(lambdas: &[i64]) -> Result<Rational, ArithError> {
    if lambdas.len() < 2 {
        return Err(ArithError::TooFewValues(lambdas.len()));
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ArithError::RepeatedValue(w[0]));
    }

    let mut sum = Rational::zero();
    for &l in lambdas {
        let prod = lambdas.iter().filter(|&&m| m != l).fold(BigInt::one(), |acc, &m| acc * BigInt::from(l - m));
        let sign = if l.rem_euclid(2) == 0 { 1 } else { -1 };
        sum += Rational::new(BigInt::from(sign), prod);
    }
    if sum.is_zero() {
        return Err(ArithError::ZeroSum);
    }
    Ok(sum.recip())
}

fn trailing_twos(x: &BigInt) -> i64 {
    x.trailing_zeros().map(|z| z as i64).unwrap_or(0)
}

/// `v` such that `x = 2^v * (odd / odd)`.
pub fn two_adic_valuation(x: &Rational) -> Result<i64, ArithError> {
    if x.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    Ok(trailing_twos(x.numer()) - trailing_twos(x.denom()))
}

/// Integer square root if `x` is a perfect square.
pub fn exact_sqrt_u64(x: u64) -> Option<u64> {
    let r = (x as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&c| c.checked_mul(c) == Some(x))
}

/// Square root of a nonnegative rational if it is itself a rational square.
pub fn exact_sqrt_rational(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Prime factorisation by trial division; fine for the small rule factors.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Serde adapter writing a [`BigInt`] as a decimal string.
pub mod big_string {
    use super::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent route: put everything over the common denominator
    /// prod_{i<j} (l_j - l_i) using plain i128 arithmetic.
    fn oracle_r(ls: &[i64]) -> (i128, i128) {
        let n = ls.len();
        let mut num: i128 = 0;
        let mut den: i128 = 1;
        for i in 0..n {
            let mut p: i128 = 1;
            for j in 0..n {
                if i != j {
                    p *= (ls[i] - ls[j]) as i128;
                }
            }
            let s: i128 = if ls[i].rem_euclid(2) == 0 { 1 } else { -1 };
            // num/den + s/p
            num = num * p + s * den;
            den *= p;
            let g = gcd_i128(num.abs(), den.abs());
            num /= g;
            den /= g;
        }
        // R = den/num, normalised with positive denominator
        let (mut rn, mut rd) = (den, num);
        if rd < 0 {
            rn = -rn;
            rd = -rd;
        }
        (rn, rd)
    }

    fn gcd_i128(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.max(1)
        } else {
            gcd_i128(b, a % b)
        }
    }

    #[test]
    fn helper_r_spot_values() {
        assert_eq!(oracle_r(&[0, 1, 2, 3]), (-3, 4));
        assert_eq!(oracle_r(&[0, 1, 4, 5]), (-15, 4));
        assert_eq!(rational_sum_of_reciprocal_products(&[0, 1, 2, 3]).unwrap(), q(-3, 4));
        assert_eq!(rational_sum_of_reciprocal_products(&[0, 1, 4, 5]).unwrap(), q(-15, 4));
        // two terms: 1/(0-1) + (-1)/(1-0) = -2
        assert_eq!(rational_sum_of_reciprocal_products(&[0, 1]).unwrap(), q(-1, 2));
    }

    #[test]
    fn helper_r_matches_oracle_on_small_sets() {
        for mask in 0u32..(1 << 9) {
            let ls: Vec<i64> = (0..9).filter(|b| mask & (1 << b) != 0).map(|b| b as i64 - 3).collect();
            if ls.len() < 2 {
                continue;
            }
            let (n, d) = oracle_r(&ls);
            match rational_sum_of_reciprocal_products(&ls) {
                Ok(r) => assert_eq!(r, q(n as i64, d as i64), "{ls:?}"),
                Err(ArithError::ZeroSum) => assert_eq!(d, 0, "oracle sum is nonzero for {ls:?}"),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn helper_r_errors() {
        assert_eq!(rational_sum_of_reciprocal_products(&[3]), Err(ArithError::TooFewValues(1)));
        assert_eq!(rational_sum_of_reciprocal_products(&[1, 2, 1]), Err(ArithError::RepeatedValue(1)));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(two_adic_valuation(&q(8, 1)).unwrap(), 3);
        assert_eq!(two_adic_valuation(&q(-3, 4)).unwrap(), -2);
        assert_eq!(two_adic_valuation(&q(6, 10)).unwrap(), 0);
        assert_eq!(two_adic_valuation(&q(0, 1)), Err(ArithError::ZeroInput));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(5, &[1, 1]).unwrap(), BigInt::from(20));
        assert_eq!(multinomial(8, &[0, 0]).unwrap(), BigInt::from(1));
        // 16! / (5! 5! 6!) from the factorial definition
        let direct = factorial(16) / (factorial(5) * factorial(5) * factorial(6));
        assert_eq!(multinomial(16, &[5, 5]).unwrap(), direct);
        assert_eq!(direct, BigInt::from(2_018_016));
        assert!(matches!(multinomial(3, &[2, 2]), Err(ArithError::PartsExceedTotal { .. })));
    }

    #[test]
    fn multinomial_pascal_identity() {
        // M(n; a, b) = M(n-1; a-1, b) + M(n-1; a, b-1) + M(n-1; a, b)
        for n in 1..=16u64 {
            for a in 0..=n {
                for b in 0..=(n - a) {
                    let mut s = BigInt::zero();
                    if a > 0 {
                        s += multinomial(n - 1, &[a - 1, b]).unwrap();
                    }
                    if b > 0 {
                        s += multinomial(n - 1, &[a, b - 1]).unwrap();
                    }
                    if a + b < n {
                        s += multinomial(n - 1, &[a, b]).unwrap();
                    }
                    assert_eq!(multinomial(n, &[a, b]).unwrap(), s, "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn factorial_32_needs_big_ints() {
        assert_eq!(factorial(32).to_string().len(), 36);
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(exact_sqrt_u64(144), Some(12));
        assert_eq!(exact_sqrt_u64(145), None);
        assert_eq!(exact_sqrt_rational(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(exact_sqrt_rational(&q(8, 4)), None);
        assert_eq!(prime_factors(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn quadratic_value() {
        let e = QuadraticEigenvalue::new(0, -2, 2);
        assert!((e.value() + 2f64.sqrt()).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn rational_add_sub_round_trip(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = q(a, b);
            let y = q(c, d);
            proptest::prop_assert_eq!((x.clone() + &y) - &y, x);
        }
    }
}
