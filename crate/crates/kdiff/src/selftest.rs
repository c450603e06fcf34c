//! Invariant suites run by the `selftest` command.

use crate::bq::{certify, cross_validate, scan_int, zero_identity, DEFAULT_KMAX};
use crate::cache::Store;
use crate::cover::enumerate_covers;
use crate::error::Result;
use crate::rat::{self, q, Q};
use crate::stratum::StratumSpec;
use crate::taut::{euler_characteristic, psi_monomial_integral, Evaluator, Psi};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const SUITES: &[&str] = &["psi", "chi", "covers", "legs", "bq", "cache"];

/// Result of one suite.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Integral of a psi monomial on M_{0,n} by the string and dilaton
/// equations, independent of the closed multinomial form.
pub fn psi_by_string_equation(exps: &[u32]) -> Q {
    let n = exps.len();
    let total: u32 = exps.iter().sum();
    if n < 3 || total as usize != n - 3 {
        return Q::zero();
    }
    if n == 3 {
        return Q::one();
    }
    if let Some(i) = exps.iter().position(|&e| e == 0) {
        let mut rest: Vec<u32> = exps.to_vec();
        rest.remove(i);
        let mut s = Q::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut r = rest.clone();
                r[j] -= 1;
                s += psi_by_string_equation(&r);
            }
        }
        return s;
    }
    if let Some(i) = exps.iter().position(|&e| e == 1) {
        let mut rest = exps.to_vec();
        rest.remove(i);
        return q(n as i64 - 1 - 3) * psi_by_string_equation(&rest);
    }
    Q::zero()
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

pub fn suite_psi() -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for n in 3..=7usize {
        for exps in compositions(n as u32 - 3, n) {
            checks += 1;
            let a = psi_monomial_integral(n, &exps);
            let b = psi_by_string_equation(&exps);
            if a.as_ref() != Ok(&b) {
                failures.push(format!("n={n} {exps:?}: {a:?} vs {}", rat::fmt(&b)));
            }
        }
    }
    SuiteResult { suite: "psi".into(), checks, failures }
}

/// Strata with known Euler characteristics.
pub fn chi_oracles() -> Vec<(&'static str, Q)> {
    let fact = |n: i64| -> Q {
        let f = rat::factorial(n as u64);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Q::from_integer(f * BigInt::from(sign))
    };
    vec![
        ("1;(0,-1,-1)", Q::one()),
        ("1;(1,-1,-1,-1)", fact(1)),
        ("1;(0,0,-1,-1)", fact(1)),
        ("1;(2,-1,-1,-1,-1)", fact(2)),
        ("1;(1,0,-1,-1,-1)", fact(2)),
        ("1;(3,-1,-1,-1,-1,-1)", fact(3)),
        ("1;(2,0,-1,-1,-1,-1)", fact(3)),
        ("1;(1,1,-1,-1,-1,-1)", fact(3)),
        ("2;(-1,-1,-1,-1,0)", q(2)),
        ("3;(-1,-1,-1,-1,-2)", q(2)),
        ("4;(-1,-1,-2,-2,-2)", q(2)),
        ("4;(-1,-1,-1,-2,-3)", q(2)),
    ]
}

pub fn suite_chi(ev: &Evaluator) -> SuiteResult {
    let mut failures = Vec::new();
    let list = chi_oracles();
    for (s, expected) in &list {
        let spec: StratumSpec = s.parse().expect("fixture parses");
        match euler_characteristic(ev, &spec) {
            Ok(v) if &v == expected => {}
            Ok(v) => failures.push(format!("{s}: got {} expected {}", rat::fmt(&v), rat::fmt(expected))),
            Err(e) => failures.push(format!("{s}: {e}")),
        }
    }
    SuiteResult { suite: "chi".into(), checks: list.len(), failures }
}

pub const FIVE_POINT_STRATA: &[&str] = &[
    "1;(2,-1,-1,-1,-1)",
    "2;(-1,-1,-1,-1,0)",
    "2;(0,0,0,-2,-2)",
    "3;(-1,-1,-1,-1,-2)",
    "4;(-1,-1,-2,-2,-2)",
    "4;(-1,-1,-1,-2,-3)",
    "6;(-1,-2,-2,-2,-5)",
];

pub fn suite_covers(ev: &Evaluator) -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    let base: crate::graph::LevelGraph = "2:2|0,-1|1@1:8|(0,1,0),(0,1,0)|g0=1,g1=1".parse().expect("fixture parses");
    let covers = enumerate_covers(&base, Some(&[2, 2]));
    checks += 1;
    if !covers.iter().any(|c| c.s_pi() == rat::qf(1, 2)) {
        failures.push("two-vertex cover with doubled edge: no cover with S = 1/2".into());
    }
    for s in FIVE_POINT_STRATA {
        let spec: StratumSpec = s.parse().expect("fixture parses");
        for depth in 0..=2 {
            let graphs = match ev.graphs(&spec, depth, depth == 1) {
                Ok(g) => g,
                Err(e) => {
                    failures.push(format!("{s}: {e}"));
                    continue;
                }
            };
            for g in graphs.iter() {
                for c in ev.covers(g) {
                    checks += 1;
                    let (lhs, rhs) = c.stabilizer_identity();
                    if lhs != rhs {
                        failures.push(format!("{s} {}: {lhs} != {rhs}", c.encode()));
                    }
                }
            }
        }
    }
    for c in &covers {
        checks += 1;
        let (lhs, rhs) = c.stabilizer_identity();
        if lhs != rhs {
            failures.push(format!("{}: {lhs} != {rhs}", c.encode()));
        }
    }
    SuiteResult { suite: "covers".into(), checks, failures }
}

pub const LEG_STRATA: &[&str] = &[
    "1;(1,-1,-1,-1)",
    "1;(2,-1,-1,-1,-1)",
    "1;(1,0,-1,-1,-1)",
    "2;(-1,-1,-1,-1,0)",
    "3;(-1,-1,-1,-1,-2)",
    "4;(-1,-1,-1,-2,-3)",
    "2;(2,-2,-2,-2)",
    "3;(1,-1,-2,-4)",
];

/// Every zeta/psi monomial evaluated via each leg agrees.
pub fn suite_legs() -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for s in LEG_STRATA {
        let spec: StratumSpec = s.parse().expect("fixture parses");
        let dim = match spec.dimension() {
            Ok(d) => d as u32,
            Err(e) => {
                failures.push(format!("{s}: {e}"));
                continue;
            }
        };
        let ids = spec.leg_ids();
        for a in 1..=dim {
            for psi_leg in std::iter::once(None).chain(ids.iter().map(Some)) {
                let mut psi = Psi::new();
                if let Some(&i) = psi_leg {
                    if a == dim {
                        continue;
                    }
                    psi.insert(i, dim - a);
                } else if a != dim {
                    continue;
                }
                let values: Vec<Result<Q>> = ids.iter().map(|&i| Evaluator::new().eval_via_leg(&spec, a, &psi, i)).collect();
                checks += 1;
                if values.iter().any(|v| v != &values[0]) {
                    failures.push(format!("{s} zeta^{a} {psi:?}: {values:?}"));
                }
            }
        }
    }
    SuiteResult { suite: "legs".into(), checks, failures }
}

pub fn suite_bq(kmax: i64, cross_validate_engine: bool) -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for k in 1..=20i64 {
        for a in five_tuples(k) {
            checks += 1;
            if !zero_identity(k, a).is_zero() {
                failures.push(format!("zero identity fails for {k}:{a:?}"));
            }
        }
    }
    let tuples = scan_int(kmax);
    checks += 1;
    if kmax >= DEFAULT_KMAX && tuples.len() != 27 {
        failures.push(format!("scan found {} tuples", tuples.len()));
    }
    let results: Vec<(String, Vec<String>)> = tuples
        .par_iter()
        .map(|t| {
            let mut f = Vec::new();
            match certify(t, None) {
                Ok(r) if r.certified() => {}
                Ok(r) => f.push(format!("{t}: not certified {:?}", r.positivity)),
                Err(e) => f.push(format!("{t}: {e}")),
            }
            if cross_validate_engine {
                match cross_validate(t, &Evaluator::new()) {
                    Ok(cv) if cv.passed => {}
                    Ok(cv) => f.push(format!("{t}: {:?}", cv.mismatches)),
                    Err(e) => f.push(format!("{t}: {e}")),
                }
            }
            (t.to_string(), f)
        })
        .collect();
    for (_, f) in results {
        checks += 1;
        failures.extend(f);
    }
    SuiteResult { suite: "bq".into(), checks, failures }
}

/// Ordered 5-tuples of positive integers with sum 2k.
pub fn five_tuples(k: i64) -> Vec<[i64; 5]> {
    let mut out = Vec::new();
    let s = 2 * k;
    for a1 in 1..s {
        for a2 in 1..s - a1 {
            for a3 in 1..s - a1 - a2 {
                for a4 in 1..s - a1 - a2 - a3 {
                    out.push([a1, a2, a3, a4, s - a1 - a2 - a3 - a4]);
                }
            }
        }
    }
    out
}

/// Recomputes every cached value and reports keys whose stored value
/// differs.
pub fn suite_cache(store: Option<&dyn Store>) -> SuiteResult {
    let Some(store) = store else {
        return SuiteResult { suite: "cache".into(), checks: 0, failures: Vec::new() };
    };
    let mut failures = Vec::new();
    let entries = store.entries();
    let ev = Evaluator::new();
    for (key, value) in &entries {
        match ev.recompute(key) {
            Ok(v) if &v == value => {}
            Ok(v) => failures.push(format!("cache key {key}: stored {} recomputed {}", rat::fmt(value), rat::fmt(&v))),
            Err(e) => failures.push(format!("cache key {key}: {e}")),
        }
    }
    SuiteResult { suite: "cache".into(), checks: entries.len(), failures }
}

/// Runs the named suites; `None` runs all.
pub fn run(suites: Option<&[String]>, kmax: i64, cross: bool, store: Option<&dyn Store>) -> Vec<SuiteResult> {
    let wanted = |s: &str| suites.is_none_or(|l| l.iter().any(|x| x == s));
    let ev = Evaluator::new();
    let mut out = Vec::new();
    let mut by_name: BTreeMap<&str, Box<dyn Fn() -> SuiteResult + '_>> = BTreeMap::new();
    by_name.insert("psi", Box::new(suite_psi));
    by_name.insert("chi", Box::new(|| suite_chi(&ev)));
    by_name.insert("covers", Box::new(|| suite_covers(&ev)));
    by_name.insert("legs", Box::new(suite_legs));
    by_name.insert("bq", Box::new(move || suite_bq(kmax, cross)));
    by_name.insert("cache", Box::new(move || suite_cache(store)));
    for name in SUITES {
        if wanted(name) {
            out.push(by_name[name]());
        }
    }
    out
}
