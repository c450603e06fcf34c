//! Oracles shared by the integration tests.
#![allow(dead_code)]

use kdiff::rat::q;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Genus-zero psi integrals from the string and dilaton equations alone.
pub fn psi_oracle(exps: &[u32], memo: &mut HashMap<Vec<u32>, BigRational>) -> BigRational {
    let n = exps.len();
    if n < 3 || exps.iter().sum::<u32>() as usize != n - 3 {
        return BigRational::zero();
    }
    if n == 3 {
        return BigRational::one();
    }
    let mut key = exps.to_vec();
    key.sort();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let v = if let Some(i) = key.iter().position(|&e| e == 0) {
        let mut rest = key.clone();
        rest.remove(i);
        let mut s = BigRational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut r = rest.clone();
                r[j] -= 1;
                s += psi_oracle(&r, memo);
            }
        }
        s
    } else {
        let i = key.iter().position(|&e| e == 1).expect("some exponent is 0 or 1");
        let mut rest = key.clone();
        rest.remove(i);
        q(n as i64 - 4) * psi_oracle(&rest, memo)
    };
    memo.insert(key, v.clone());
    v
}

pub fn monomials(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m| (0..=(n as u32 - 3)).map(move |e| [m.clone(), vec![e]].concat()))
            .collect();
    }
    out.retain(|m| m.iter().sum::<u32>() as usize == n - 3);
    out
}

/// Euler characteristic of M_{0,n}: (-1)^(n-3) (n-3)!.
pub fn chi_m0n(n: usize) -> BigRational {
    let f: num_bigint::BigInt = (1..=(n as i64 - 3)).map(num_bigint::BigInt::from).product();
    let sign = if (n - 3).is_multiple_of(2) { 1 } else { -1 };
    BigRational::from_integer(f * sign)
}
