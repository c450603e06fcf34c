//! Exact arithmetic in the cyclotomic field Q(z_k) and linear algebra over it.
//!
//! Elements are coefficient vectors of length phi(k) in the power basis,
//! reduced modulo the k-th cyclotomic polynomial.

use crate::rat::{one, zero, Q};
use num_traits::{One, Zero};
use parking_lot::Mutex;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// Dense polynomial over Q, lowest degree first, no trailing zeros.
type Poly = Vec<Q>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut r: Poly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(zero) - b.get(i).cloned().unwrap_or_else(zero))
        .collect();
    trim(&mut r);
    r
}

/// Returns (quotient, remainder).
fn poly_divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn cyclotomic_poly(k: u64) -> Poly {
    let mut num: Poly = vec![zero(); k as usize + 1];
    num[0] = -one();
    num[k as usize] = one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            let (quot, rem) = poly_divmod(&num, &cyclotomic_poly(d));
            debug_assert!(rem.is_empty());
            num = quot;
        }
    }
    num
}

/// The field Q(z_k) with a fixed power basis.
#[derive(Debug)]
pub struct CycField {
    k: u64,
    modulus: Poly,
}

/// An element of Q(z_k), reduced, of length `degree()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyc(pub Vec<Q>);

static FIELDS: OnceLock<Mutex<HashMap<u64, Arc<CycField>>>> = OnceLock::new();

impl CycField {
    /// Shared, immutable field instance for order `k`.
    pub fn get(k: u64) -> Arc<CycField> {
        assert!(k >= 1, "cyclotomic order must be positive");
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock();
        guard
            .entry(k)
            .or_insert_with(|| Arc::new(CycField { k, modulus: cyclotomic_poly(k) }))
            .clone()
    }

    pub fn order(&self) -> u64 {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Q] {
        &self.modulus
    }

    pub fn reduce(&self, p: Vec<Q>) -> Cyc {
        let (_, mut r) = poly_divmod(&p, &self.modulus);
        r.resize(self.degree(), zero());
        Cyc(r)
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![zero(); self.degree()])
    }

    pub fn from_rational(&self, x: Q) -> Cyc {
        let mut c = self.zero();
        c.0[0] = x;
        c
    }

    pub fn one(&self) -> Cyc {
        self.from_rational(one())
    }

    /// z_k^j for any integer j.
    pub fn zeta_pow(&self, j: i64) -> Cyc {
        let e = j.rem_euclid(self.k as i64) as usize;
        let mut p = vec![zero(); e + 1];
        p[e] = one();
        self.reduce(p)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut pa = a.0.clone();
        let mut pb = b.0.clone();
        trim(&mut pa);
        trim(&mut pb);
        self.reduce(poly_mul(&pa, &pb))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &Cyc) -> Option<Cyc> {
        let mut r0 = self.modulus.clone();
        let mut r1 = a.0.clone();
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut t0: Poly = Vec::new();
        let mut t1: Poly = vec![one()];
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&quot, &t1));
            r0 = std::mem::replace(&mut r1, rem);
            t0 = std::mem::replace(&mut t1, t2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].clone();
        let scaled: Poly = t0.iter().map(|x| x / &c).collect();
        Some(self.reduce(scaled))
    }
}

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.0.first().is_some_and(|x| x.is_one()) && self.0[1..].iter().all(|x| x.is_zero())
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.0[1..].iter().all(|x| x.is_zero()) {
            Some(self.0[0].clone())
        } else {
            None
        }
    }
}

/// A dense matrix over Q(z_k).
#[derive(Clone, Debug)]
pub struct CyclotomicMatrix {
    field: Arc<CycField>,
    cols: usize,
    rows: Vec<Vec<Cyc>>,
}

impl CyclotomicMatrix {
    pub fn new(field: Arc<CycField>, cols: usize) -> Self {
        CyclotomicMatrix { field, cols, rows: Vec::new() }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Cyc>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<Cyc>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = f.inv(&self.rows[r][c]).expect("nonzero element is invertible");
            let pivot_row: Vec<Cyc> = self.rows[r].iter().map(|x| f.mul(x, &inv)).collect();
            self.rows[r] = pivot_row.clone();
            for i in 0..self.rows.len() {
                if i != r && !self.rows[i][c].is_zero() {
                    let factor = self.rows[i][c].clone();
                    for (j, p) in pivot_row.iter().enumerate() {
                        let t = f.mul(&factor, p);
                        self.rows[i][j] = f.sub(&self.rows[i][j], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Projects the row space onto the columns `first..` after eliminating
    /// the columns `..first`: the returned rows span all relations among the
    /// trailing coordinates implied by the system.
    pub fn eliminate_leading(&self, first: usize) -> Vec<Vec<Cyc>> {
        let mut m = self.clone();
        m.rref();
        m.rows
            .into_iter()
            .filter(|row| row[..first].iter().all(|x| x.is_zero()))
            .map(|row| row[first..].to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    #[test]
    fn cyclotomic_polynomials() {
        let f6 = CycField::get(6);
        assert_eq!(f6.modulus(), &[q(1), q(-1), q(1)]);
        assert_eq!(CycField::get(1).degree(), 1);
        assert_eq!(CycField::get(12).degree(), 4);
    }

    #[test]
    fn zeta_has_order_k() {
        for k in 1..=12u64 {
            let f = CycField::get(k);
            let z = f.zeta_pow(1);
            let mut acc = f.one();
            for j in 1..=k {
                acc = f.mul(&acc, &z);
                assert_eq!(acc.is_one(), j == k, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = CycField::get(7);
        let a = f.add(&f.zeta_pow(1), &f.from_rational(q(3)));
        let b = f.inv(&a).unwrap();
        assert!(f.mul(&a, &b).is_one());
    }
}
