//! Rational helpers shared across the engine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Formats as `p/q`, with `q` omitted only by callers that want integers.
pub fn fmt(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short human form: integers without denominator.
pub fn show(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        fmt(x)
    }
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn pow(x: &Q, e: u32) -> Q {
    let mut r = one();
    for _ in 0..e {
        r *= x;
    }
    r
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
