//! Five-pointed strata of k-differentials with the INT condition: boundary
//! inventory, intersection numbers, Chern numbers and the BMY equality.

use crate::cover::GraphCover;
use crate::error::{Error, Result};
use crate::rat::{self, q, qf, Q};
use crate::stratum::StratumSpec;
use crate::taut::{c1_log_horizontal, divisor_class, euler_characteristic, Evaluator, Factor, TautExpression};
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_KMAX: i64 = 120;

/// Weights a_1 <= ... <= a_5 with sum 2k, each below k, gcd(a, k) = 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DmTuple {
    pub k: i64,
    pub a: [i64; 5],
}

pub type Pair = (usize, usize);

impl DmTuple {
    pub fn new(k: i64, mut a: [i64; 5]) -> Result<Self> {
        a.sort();
        if k < 1 || a.iter().any(|&x| x < 1 || x >= k) {
            return Err(Error::Invalid(format!("weights must lie in [1, k-1] for k = {k}")));
        }
        if a.iter().sum::<i64>() != 2 * k {
            return Err(Error::Invalid(format!("weights must sum to 2k = {}", 2 * k)));
        }
        if a.iter().fold(k, |g, &x| g.gcd(&x)) != 1 {
            return Err(Error::Invalid("gcd of weights and k must be 1".into()));
        }
        Ok(DmTuple { k, a })
    }

    /// kappa_ij = k - a_i - a_j, with 1-based indices.
    pub fn kappa(&self, p: Pair) -> i64 {
        self.k - self.a[p.0 - 1] - self.a[p.1 - 1]
    }

    /// The stratum with orders -a_i.
    pub fn spec(&self) -> StratumSpec {
        crate::stratum::validate(self.k, &[self.a.iter().map(|&x| -x).collect()]).expect("valid tuple")
    }

    fn kk(&self, x: i64) -> Q {
        qf(x, self.k * self.k)
    }
}

impl fmt::Display for DmTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.k, self.a.iter().join(","))
    }
}

impl FromStr for DmTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, rest) = s.split_once(':').ok_or_else(|| Error::parse(0, "expected k:a1,...,a5"))?;
        let k: i64 = k.trim().parse().map_err(|_| Error::parse(0, "bad k"))?;
        let mut a = [0i64; 5];
        let mut count = 0;
        let mut pos = s.len() - rest.len();
        for item in rest.split(',') {
            if count == 5 {
                return Err(Error::parse(pos, "expected five weights"));
            }
            a[count] = item.trim().parse().map_err(|_| Error::parse(pos, "bad weight"))?;
            count += 1;
            pos += item.len() + 1;
        }
        if count != 5 {
            return Err(Error::parse(s.len(), "expected five weights"));
        }
        DmTuple::new(k, a)
    }
}

fn pairs() -> Vec<Pair> {
    (1..=5).tuple_combinations().collect()
}

fn disjoint(p: Pair, q: Pair) -> bool {
    p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
}

fn rest(p: Pair) -> Vec<usize> {
    (1..=5).filter(|&i| i != p.0 && i != p.1).collect()
}

/// k / kappa is an integer for every pair with a_i + a_j < k.
pub fn check_int(t: &DmTuple) -> bool {
    pairs().into_iter().map(|p| t.kappa(p)).filter(|&c| c > 0).all(|c| t.k % c == 0)
}

/// All INT tuples with k <= kmax, as sorted multisets.
pub fn scan_int(kmax: i64) -> Vec<DmTuple> {
    let ok = |k: i64, x: i64, y: i64| x + y >= k || k % (k - x - y) == 0;
    let mut out = Vec::new();
    for k in 1..=kmax {
        for a1 in 1..k {
            for a2 in a1..k {
                if !ok(k, a1, a2) {
                    continue;
                }
                for a3 in a2..k {
                    if !ok(k, a1, a3) || !ok(k, a2, a3) {
                        continue;
                    }
                    for a4 in a3..k {
                        let a5 = 2 * k - a1 - a2 - a3 - a4;
                        if a5 < a4 {
                            break;
                        }
                        if a5 >= k {
                            continue;
                        }
                        if let Ok(t) = DmTuple::new(k, [a1, a2, a3, a4, a5]) {
                            if check_int(&t) {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Boundary divisor families of the five-pointed stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorInventory {
    pub gamma: Vec<Pair>,
    pub l: Vec<Pair>,
    pub h: Vec<Pair>,
    pub lambda: Vec<(Pair, Pair)>,
    pub slanted: Vec<(Pair, Pair)>,
    pub kappa: BTreeMap<String, i64>,
}

/// A boundary divisor of the five-pointed stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Divisor {
    Gamma(Pair),
    L(Pair),
    Lambda(Pair, Pair),
    H(Pair),
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisor::Gamma(p) => write!(f, "Gamma{}{}", p.0, p.1),
            Divisor::L(p) => write!(f, "L{}{}", p.0, p.1),
            Divisor::Lambda(p, q) => write!(f, "Lambda{}{}|{}{}", p.0, p.1, q.0, q.1),
            Divisor::H(p) => write!(f, "H{}{}", p.0, p.1),
        }
    }
}

pub fn inventory(t: &DmTuple) -> DivisorInventory {
    let all = pairs();
    let gamma: Vec<Pair> = all.iter().copied().filter(|&p| t.kappa(p) > 0).collect();
    let l: Vec<Pair> = all.iter().copied().filter(|&p| t.kappa(p) < 0).collect();
    let h: Vec<Pair> = all.iter().copied().filter(|&p| t.kappa(p) == 0).collect();
    let lambda = gamma
        .iter()
        .tuple_combinations()
        .filter(|(p, q)| disjoint(**p, **q))
        .map(|(p, q)| (*p, *q))
        .collect();
    let slanted = l
        .iter()
        .cartesian_product(gamma.iter())
        .filter(|(p, q)| disjoint(**p, **q))
        .map(|(p, q)| (*p, *q))
        .collect();
    let kappa = all.iter().map(|&p| (format!("{}{}", p.0, p.1), t.kappa(p))).collect();
    DivisorInventory { gamma, l, h, lambda, slanted, kappa }
}

impl DivisorInventory {
    /// Divisors of the uncontracted space in the order Gamma, L, Lambda, H.
    pub fn upstairs(&self) -> Vec<Divisor> {
        let mut v: Vec<Divisor> = self.gamma.iter().map(|&p| Divisor::Gamma(p)).collect();
        v.extend(self.l.iter().map(|&p| Divisor::L(p)));
        v.extend(self.lambda.iter().map(|&(p, q)| Divisor::Lambda(p, q)));
        v.extend(self.h.iter().map(|&p| Divisor::H(p)));
        v
    }

    /// Divisors surviving the contraction: Gamma then H.
    pub fn downstairs(&self) -> Vec<Divisor> {
        let mut v: Vec<Divisor> = self.gamma.iter().map(|&p| Divisor::Gamma(p)).collect();
        v.extend(self.h.iter().map(|&p| Divisor::H(p)));
        v
    }
}

fn require_int(t: &DmTuple) -> Result<()> {
    if check_int(t) {
        Ok(())
    } else {
        Err(Error::NotInt(t.to_string()))
    }
}

/// Closed-form intersection number of two divisors before contraction.
pub fn upstairs_product(t: &DmTuple, x: Divisor, y: Divisor) -> Q {
    use Divisor::*;
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    let kap = |p| t.kappa(p);
    match (x, y) {
        (Gamma(p), Gamma(q)) if p == q => {
            let r = rest(p);
            let mut s = -t.kk(kap(p) * kap(p));
            for (&a, &b) in r.iter().tuple_combinations() {
                if kap((a, b)) > 0 {
                    s -= t.kk(kap(p) * kap((a, b)));
                }
            }
            s
        }
        (L(p), L(q)) if p == q => -t.kk(kap(p) * kap(p)),
        (Lambda(p, p2), Lambda(q, q2)) if (p, p2) == (q, q2) => -t.kk(kap(p) * kap(p2)),
        (H(p), H(r)) if p == r => q(-1),
        (Gamma(p), L(q)) if disjoint(p, q) => t.kk((kap(p) * kap(q)).abs()),
        (Gamma(p), Lambda(q, q2)) if p == q || p == q2 => t.kk(kap(q) * kap(q2)),
        (Gamma(p), H(q)) if disjoint(p, q) => qf(kap(p), t.k),
        _ => Q::zero(),
    }
}

/// Closed-form intersection number of two divisors after contraction.
pub fn downstairs_product(t: &DmTuple, x: Divisor, y: Divisor) -> Q {
    use Divisor::*;
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    let kap = |p| t.kappa(p);
    match (x, y) {
        (Gamma(p), Gamma(q)) if p == q => {
            let mut s = -t.kk(kap(p) * kap(p));
            for (&a, &b) in rest(p).iter().tuple_combinations() {
                if kap((a, b)) < 0 {
                    s += t.kk(kap(p) * kap(p));
                }
            }
            s
        }
        (H(p), H(r)) if p == r => q(-1),
        (Gamma(p), Gamma(q)) if disjoint(p, q) => t.kk(kap(p) * kap(q)),
        (Gamma(p), Gamma(q)) => {
            let mut idx = vec![p.0, p.1, q.0, q.1];
            idx.sort();
            idx.dedup();
            if idx.iter().map(|&i| t.a[i - 1]).sum::<i64>() < t.k {
                t.kk(kap(p) * kap(q))
            } else {
                Q::zero()
            }
        }
        (Gamma(p), H(q)) if disjoint(p, q) => qf(kap(p), t.k),
        _ => Q::zero(),
    }
}

/// Pullback of a surviving divisor along the contraction, as a combination
/// of uncontracted divisors.
pub fn pullback(t: &DmTuple, inv: &DivisorInventory, x: Divisor) -> Vec<(Divisor, Q)> {
    let mut out = vec![(x, rat::one())];
    if let Divisor::Gamma(p) = x {
        for &l in &inv.l {
            if disjoint(p, l) {
                out.push((Divisor::L(l), qf(t.kappa(p), t.kappa(l).abs())));
            }
        }
        for &(a, b) in &inv.lambda {
            if a == p || b == p {
                out.push((Divisor::Lambda(a, b), rat::one()));
            }
        }
    }
    out
}

pub type Matrix = Vec<Vec<Q>>;

pub fn upstairs_matrix(t: &DmTuple) -> Result<(Vec<Divisor>, Matrix)> {
    require_int(t)?;
    let d = inventory(t).upstairs();
    let m = d.iter().map(|&x| d.iter().map(|&y| upstairs_product(t, x, y)).collect()).collect();
    Ok((d, m))
}

pub fn downstairs_matrix(t: &DmTuple) -> Result<(Vec<Divisor>, Matrix)> {
    require_int(t)?;
    let d = inventory(t).downstairs();
    let m = d.iter().map(|&x| d.iter().map(|&y| downstairs_product(t, x, y)).collect()).collect();
    Ok((d, m))
}

/// Degrees of the points obtained by contracting the L and cherry divisors.
pub fn contraction_degrees(t: &DmTuple) -> Result<BTreeMap<String, Q>> {
    require_int(t)?;
    let inv = inventory(t);
    let mut out = BTreeMap::new();
    for &p in &inv.l {
        out.insert(Divisor::L(p).to_string(), t.kk(t.kappa(p) * t.kappa(p)));
    }
    for &(p, r) in &inv.lambda {
        out.insert(Divisor::Lambda(p, r).to_string(), t.kk(t.kappa(p) * t.kappa(r)));
    }
    Ok(out)
}

/// 1 + sum_Gamma (-kappa/k + kappa^2/k^2) + sum_Lambda kappa kappa'/k^2
/// - sum_L kappa^2/k^2, for any positive weights with sum 2k.
pub fn zero_identity(k: i64, a: [i64; 5]) -> Q {
    let kap = |p: Pair| k - a[p.0 - 1] - a[p.1 - 1];
    let kk = |x: i64| qf(x, k * k);
    let mut s = rat::one();
    let gamma: Vec<Pair> = pairs().into_iter().filter(|&p| kap(p) > 0).collect();
    for &p in &gamma {
        s += -qf(kap(p), k) + kk(kap(p) * kap(p));
    }
    for (&p, &r) in gamma.iter().tuple_combinations() {
        if disjoint(p, r) {
            s += kk(kap(p) * kap(r));
        }
    }
    for p in pairs().into_iter().filter(|&p| kap(p) < 0) {
        s -= kk(kap(p) * kap(p));
    }
    s
}

/// Chern data of the contracted surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernNumbers {
    pub c1: Vec<(Divisor, Q)>,
    pub c1_sq: Q,
    pub c1_sq_from_matrix: Q,
    pub c2: Q,
}

pub fn c1_coefficients(t: &DmTuple) -> Vec<(Divisor, Q)> {
    inventory(t)
        .downstairs()
        .into_iter()
        .map(|x| {
            let c = match x {
                Divisor::Gamma(p) => qf(t.k, 2 * t.kappa(p)) - rat::one(),
                _ => qf(1, 2),
            };
            (x, c)
        })
        .collect()
}

fn quadratic(m: &Matrix, v: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            s += &v[i] * x * &v[j];
        }
    }
    s
}

fn apply(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn chern_numbers(t: &DmTuple) -> Result<ChernNumbers> {
    require_int(t)?;
    let inv = inventory(t);
    let kap = |p| t.kappa(p);
    let sum_g: Q = inv.gamma.iter().map(|&p| qf(kap(p), t.k)).sum();
    let sum_l: Q = inv.l.iter().map(|&p| t.kk(kap(p) * kap(p))).sum();
    let sum_lam: Q = inv.lambda.iter().map(|&(p, r)| t.kk(kap(p) * kap(r))).sum();
    let c1_sq = q(6) - q(3) * &sum_g + q(3) * &sum_l + q(3) * &sum_lam;
    let c2 = q(2) - &sum_g + &sum_l + &sum_lam;
    let c1 = c1_coefficients(t);
    let (_, m) = downstairs_matrix(t)?;
    let v: Vec<Q> = c1.iter().map(|(_, c)| c.clone()).collect();
    let c1_sq_from_matrix = quadratic(&m, &v);
    Ok(ChernNumbers { c1, c1_sq, c1_sq_from_matrix, c2 })
}

/// Outcome of the comparison with the generic evaluator.
#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub matrix_entries: usize,
    pub mismatches: Vec<String>,
    #[serde(serialize_with = "ser_q")]
    pub c1_sq: Q,
    #[serde(serialize_with = "ser_q")]
    pub c2: Q,
    pub passed: bool,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat::fmt(x))
}

/// Identifies the inventory label of a boundary divisor graph.
pub fn classify(t: &DmTuple, cover: &GraphCover) -> Option<Divisor> {
    let g = &cover.base;
    let legs_at = |v: usize| -> Vec<usize> {
        let mut ids: Vec<usize> = g.legs.iter().filter(|l| l.vertex == v).map(|l| l.id as usize).collect();
        ids.sort();
        ids
    };
    let pair = |ids: &[usize]| (ids[0], ids[1]);
    if g.depth() == 0 && g.edges.len() == 1 {
        let ids = legs_at(g.edges[0].top);
        let ids = if ids.len() == 2 { ids } else { legs_at(g.edges[0].bot) };
        return Some(Divisor::H(pair(&ids)));
    }
    if g.depth() != 1 || g.has_horizontal() {
        return None;
    }
    let bottom = g.level_vertices(-1);
    if bottom.len() == 2 {
        let (a, b) = (pair(&legs_at(bottom[0])), pair(&legs_at(bottom[1])));
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        return Some(Divisor::Lambda(a, b));
    }
    let ids = legs_at(bottom[0]);
    match ids.len() {
        2 => Some(Divisor::Gamma(pair(&ids))),
        3 => {
            let top: Vec<usize> = (1..=5).filter(|i| !ids.contains(i)).collect();
            let p = pair(&top);
            (t.kappa(p) < 0).then_some(Divisor::L(p))
        }
        _ => None,
    }
}

/// Recomputes the intersection matrix, the c1 pairings and c2 with the
/// generic evaluator and compares them with the closed forms.
pub fn cross_validate(t: &DmTuple, ev: &Evaluator) -> Result<CrossValidation> {
    require_int(t)?;
    let spec = t.spec();
    let inv = inventory(t);
    let mut covers: BTreeMap<Divisor, GraphCover> = BTreeMap::new();
    for g in ev.graphs(&spec, 1, true)?.iter() {
        for c in ev.covers(g) {
            let d = classify(t, &c).ok_or_else(|| Error::Invalid(format!("unclassified divisor {}", g.encode())))?;
            covers.insert(d, c);
        }
    }
    let up = inv.upstairs();
    let mut mismatches = Vec::new();
    let listed: Vec<Divisor> = covers.keys().copied().collect();
    if listed != up.iter().copied().sorted().collect::<Vec<_>>() {
        mismatches.push("divisor inventory".into());
    }
    let mut entries = 0;
    let mut engine = BTreeMap::new();
    for (i, &x) in up.iter().enumerate() {
        for &y in &up[i..] {
            let (Some(cx), Some(cy)) = (covers.get(&x), covers.get(&y)) else { continue };
            let value = divisor_class(&spec, cx).multiply(ev, &Factor::Divisor(cy.clone()))?.integrate(ev)?;
            entries += 1;
            if value != upstairs_product(t, x, y) {
                mismatches.push(format!("{x}.{y}: engine {} closed form {}", rat::fmt(&value), rat::fmt(&upstairs_product(t, x, y))));
            }
            engine.insert((x, y), value);
        }
    }
    let c1 = c1_log_horizontal(ev, &spec)?;
    let coeffs = c1_coefficients(t);
    let (down, m) = downstairs_matrix(t)?;
    let mut y = Vec::new();
    for &x in &down {
        let mut pulled = TautExpression::zero(&spec);
        for (d, c) in pullback(t, &inv, x) {
            if let Some(cover) = covers.get(&d) {
                pulled.add_scaled(&divisor_class(&spec, cover), &c);
            }
        }
        y.push(c1.multiply_expr(ev, &pulled)?.integrate(ev)?);
    }
    let v: Vec<Q> = coeffs.iter().map(|(_, c)| c.clone()).collect();
    if apply(&m, &v) != y {
        mismatches.push("c1 pairings with surviving divisors".into());
    }
    let c1_sq: Q = v.iter().zip(&y).map(|(a, b)| a * b).sum();
    let mut c2 = euler_characteristic(ev, &spec)?;
    for &p in &inv.gamma {
        if let Some(cover) = covers.get(&Divisor::Gamma(p)) {
            let mut x = ev.prefactor(cover) * rat::q(cover.ell_hat().1);
            for ls in cover.base.level_specs(&spec)? {
                x *= euler_characteristic(ev, &ls)?;
            }
            c2 += x;
        }
    }
    for (&(x, y2), value) in &engine {
        if x == y2 && matches!(x, Divisor::L(_) | Divisor::Lambda(..)) {
            c2 -= value;
        }
    }
    let closed = chern_numbers(t)?;
    if c1_sq != closed.c1_sq {
        mismatches.push(format!("c1^2: engine {} closed form {}", rat::fmt(&c1_sq), rat::fmt(&closed.c1_sq)));
    }
    if c2 != closed.c2 {
        mismatches.push(format!("c2: engine {} closed form {}", rat::fmt(&c2), rat::fmt(&closed.c2)));
    }
    Ok(CrossValidation { matrix_entries: entries, passed: mismatches.is_empty(), mismatches, c1_sq, c2 })
}

/// Full certificate for one tuple.
#[derive(Clone, Debug, Serialize)]
pub struct CertReport {
    pub tuple: String,
    pub k: i64,
    pub weights: [i64; 5],
    pub int: bool,
    pub inventory: Option<DivisorInventory>,
    pub divisors: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub downstairs_divisors: Vec<String>,
    pub downstairs_matrix: Vec<Vec<String>>,
    pub contraction_degrees: BTreeMap<String, String>,
    pub c1: BTreeMap<String, String>,
    pub c1_sq: Option<String>,
    pub c2: Option<String>,
    pub bmy: bool,
    pub positivity: Positivity,
    pub cross_validated: bool,
    pub cross_validation: Option<CrossValidation>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Positivity {
    pub c1_sq_positive: bool,
    pub gamma_positive: bool,
    pub horizontal_zero: bool,
    pub c1_sq_matrix_agrees: bool,
    pub zero_identity: bool,
}

fn fmt_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(rat::fmt).collect()).collect()
}

/// Certificate for a tuple; `ev` enables the comparison with the generic
/// evaluator.
pub fn certify(t: &DmTuple, ev: Option<&Evaluator>) -> Result<CertReport> {
    let int = check_int(t);
    let mut report = CertReport {
        tuple: t.to_string(),
        k: t.k,
        weights: t.a,
        int,
        inventory: None,
        divisors: Vec::new(),
        matrix: Vec::new(),
        downstairs_divisors: Vec::new(),
        downstairs_matrix: Vec::new(),
        contraction_degrees: BTreeMap::new(),
        c1: BTreeMap::new(),
        c1_sq: None,
        c2: None,
        bmy: false,
        positivity: Positivity::default(),
        cross_validated: false,
        cross_validation: None,
    };
    if !int {
        return Ok(report);
    }
    let inv = inventory(t);
    let (up, mu) = upstairs_matrix(t)?;
    let (down, md) = downstairs_matrix(t)?;
    let chern = chern_numbers(t)?;
    let v: Vec<Q> = chern.c1.iter().map(|(_, c)| c.clone()).collect();
    let pairings = apply(&md, &v);
    report.positivity = Positivity {
        c1_sq_positive: chern.c1_sq.is_positive(),
        gamma_positive: down.iter().zip(&pairings).all(|(d, x)| !matches!(d, Divisor::Gamma(_)) || x.is_positive()),
        horizontal_zero: down.iter().zip(&pairings).all(|(d, x)| !matches!(d, Divisor::H(_)) || x.is_zero()),
        c1_sq_matrix_agrees: chern.c1_sq == chern.c1_sq_from_matrix,
        zero_identity: zero_identity(t.k, t.a).is_zero(),
    };
    report.bmy = chern.c1_sq == q(3) * &chern.c2;
    report.divisors = up.iter().map(|d| d.to_string()).collect();
    report.matrix = fmt_matrix(&mu);
    report.downstairs_divisors = down.iter().map(|d| d.to_string()).collect();
    report.downstairs_matrix = fmt_matrix(&md);
    report.contraction_degrees = contraction_degrees(t)?.iter().map(|(k, v)| (k.clone(), rat::fmt(v))).collect();
    report.c1 = chern.c1.iter().map(|(d, c)| (d.to_string(), rat::fmt(c))).collect();
    report.c1_sq = Some(rat::fmt(&chern.c1_sq));
    report.c2 = Some(rat::fmt(&chern.c2));
    report.inventory = Some(inv);
    if let Some(ev) = ev {
        let cv = cross_validate(t, ev)?;
        report.cross_validated = cv.passed;
        report.cross_validation = Some(cv);
    }
    Ok(report)
}

impl CertReport {
    /// INT, BMY equality and all positivity checks.
    pub fn certified(&self) -> bool {
        let p = &self.positivity;
        self.int && self.bmy && p.c1_sq_positive && p.gamma_positive && p.horizontal_zero && p.c1_sq_matrix_agrees
    }
}
