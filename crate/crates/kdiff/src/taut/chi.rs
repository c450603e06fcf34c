//! Euler characteristics and the first Chern class of the log cotangent
//! bundle.

use super::expr::{Decoration, TautExpression, Term};
use super::{Evaluator, Psi};
use crate::error::{Error, Result};
use crate::rat::{pow, q, qf, Q};
use crate::stratum::StratumSpec;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// One (L, pi) contribution to the Euler characteristic, before the global
/// sign factor.
#[derive(Clone, Debug, Serialize)]
pub struct EulerTerm {
    pub depth: usize,
    pub graph: String,
    pub cover: String,
    #[serde(serialize_with = "ser_q")]
    pub s_pi: Q,
    pub n_top: i64,
    pub aut: usize,
    pub kappa: i64,
    #[serde(serialize_with = "ser_qs")]
    pub level_integrals: Vec<Q>,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::rat::fmt(x))
}

fn ser_qs<S: serde::Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(crate::rat::fmt))
}

/// All nonzero (L, pi) terms of the Euler characteristic.
pub fn euler_terms(ev: &Evaluator, spec: &StratumSpec) -> Result<Vec<EulerTerm>> {
    let d = spec.dimension()?;
    let mut out = Vec::new();
    for depth in 0..=d as usize {
        for g in ev.graphs(spec, depth, false)?.iter() {
            let dims = g
                .level_dimensions(spec)
                .ok_or_else(|| Error::Invalid("empty level in enumerated graph".into()))?;
            let levels = g.level_specs(spec)?;
            let mut integrals = Vec::with_capacity(levels.len());
            for (ls, &di) in levels.iter().zip(&dims) {
                integrals.push(ev.eval(ls, di as u32, &Psi::new())?);
            }
            let kappa: i64 = (0..g.edges.len()).map(|e| g.kappa(e)).product();
            for cover in ev.covers(g) {
                let s_pi = cover.s_pi();
                let n_top = dims[0] + 1;
                let mut value = &s_pi * q(n_top * kappa) / q(g.aut_order() as i64);
                for x in &integrals {
                    value *= x;
                }
                if value.is_zero() {
                    continue;
                }
                out.push(EulerTerm {
                    depth,
                    graph: g.encode(),
                    cover: cover.encode(),
                    s_pi,
                    n_top,
                    aut: g.aut_order(),
                    kappa,
                    level_integrals: integrals.clone(),
                    value,
                });
            }
        }
    }
    Ok(out)
}

/// Orbifold Euler characteristic of the projectivized stratum.
pub fn euler_characteristic(ev: &Evaluator, spec: &StratumSpec) -> Result<Q> {
    let d = spec.dimension()?;
    let sign = pow(&-qf(1, spec.k()), d as u32);
    let sum: Q = euler_terms(ev, spec)?.into_iter().map(|t| t.value).sum();
    Ok(sign * sum)
}

/// (N/k) zeta + sum (N - N_top) l-hat [D_pi] over vertical divisors, with
/// N the unprojectivized dimension.
pub fn c1_log_cotangent(ev: &Evaluator, spec: &StratumSpec) -> Result<TautExpression> {
    let n = spec.dimension()? + 1;
    let mut out = TautExpression::zeta(spec).scale(&Q::new(BigInt::from(n), BigInt::from(spec.k())));
    for g in ev.graphs(spec, 1, false)?.iter() {
        let top = g.level_spec(spec, 0)?.dimension()? + 1;
        for cover in ev.covers(g) {
            let ell = cover.ell_hat().1;
            out.add_term(Term::boundary(cover, Decoration::default()), q((n - top) * ell));
        }
    }
    Ok(out)
}

/// The log cotangent class with the vertical boundary removed from the log
/// divisor.
pub fn c1_log_horizontal(ev: &Evaluator, spec: &StratumSpec) -> Result<TautExpression> {
    let mut out = c1_log_cotangent(ev, spec)?;
    for g in ev.graphs(spec, 1, false)?.iter() {
        for cover in ev.covers(g) {
            out.add_term(Term::boundary(cover, Decoration::default()), -q(1));
        }
    }
    Ok(out)
}
