//! Formal sums of decorated boundary classes.

use crate::cover::GraphCover;
use crate::graph::LevelGraph;
use crate::rat::{self, Q};
use crate::stratum::{LegId, StratumSpec};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Per-level zeta exponents (level index 0 is the top) and per-leg psi
/// exponents. Half-edge legs use the ids of the graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decoration {
    pub zeta: BTreeMap<usize, u32>,
    pub psi: BTreeMap<LegId, u32>,
}

impl Decoration {
    pub fn degree(&self) -> i64 {
        self.zeta.values().chain(self.psi.values()).map(|&e| e as i64).sum()
    }

    pub fn add_zeta(&mut self, level: usize, e: u32) {
        if e > 0 {
            *self.zeta.entry(level).or_insert(0) += e;
        }
    }

    pub fn add_psi(&mut self, leg: LegId, e: u32) {
        if e > 0 {
            *self.psi.entry(leg).or_insert(0) += e;
        }
    }

    fn key(&self) -> String {
        let z: Vec<String> = self.zeta.iter().map(|(l, e)| format!("{l}^{e}")).collect();
        let p: Vec<String> = self.psi.iter().map(|(l, e)| format!("{l}^{e}")).collect();
        format!("z[{}]p[{}]", z.join(","), p.join(","))
    }
}

/// A decorated boundary class: a cover (None for the whole stratum) with
/// zeta and psi exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub cover: Option<GraphCover>,
    pub deco: Decoration,
}

impl Term {
    pub fn trivial(deco: Decoration) -> Self {
        Term { cover: None, deco }
    }

    pub fn boundary(cover: GraphCover, deco: Decoration) -> Self {
        Term { cover: Some(cover), deco }
    }

    pub fn graph(&self) -> Option<&LevelGraph> {
        self.cover.as_ref().map(|c| &c.base)
    }

    pub fn codim(&self) -> usize {
        self.graph().map_or(0, |g| g.codim())
    }

    pub fn degree(&self) -> i64 {
        self.codim() as i64 + self.deco.degree()
    }

    pub fn key(&self) -> String {
        let g = self.cover.as_ref().map_or(String::new(), |c| c.encode());
        format!("{g}#{}", self.deco.key())
    }
}

/// A finite formal sum of decorated boundary classes on a fixed stratum.
#[derive(Clone, Debug)]
pub struct TautExpression {
    spec: StratumSpec,
    terms: BTreeMap<String, (Term, Q)>,
}

#[derive(Serialize)]
struct TermJson {
    coefficient: String,
    graph: String,
    psi: BTreeMap<String, u32>,
    zeta: BTreeMap<String, u32>,
}

impl TautExpression {
    pub fn zero(spec: &StratumSpec) -> Self {
        TautExpression { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn one(spec: &StratumSpec) -> Self {
        let mut e = Self::zero(spec);
        e.add_term(Term::trivial(Decoration::default()), rat::one());
        e
    }

    pub fn zeta(spec: &StratumSpec) -> Self {
        let mut d = Decoration::default();
        d.add_zeta(0, 1);
        let mut e = Self::zero(spec);
        e.add_term(Term::trivial(d), rat::one());
        e
    }

    pub fn psi(spec: &StratumSpec, leg: LegId) -> Self {
        let mut d = Decoration::default();
        d.add_psi(leg, 1);
        let mut e = Self::zero(spec);
        e.add_term(Term::trivial(d), rat::one());
        e
    }

    pub fn spec(&self) -> &StratumSpec {
        &self.spec
    }

    pub fn add_term(&mut self, term: Term, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let key = term.key();
        let remove = match self.terms.get_mut(&key) {
            Some((_, c)) => {
                *c += coeff;
                c.is_zero()
            }
            None => {
                self.terms.insert(key.clone(), (term, coeff));
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &TautExpression) {
        self.add_scaled(other, &rat::one());
    }

    pub fn add_scaled(&mut self, other: &TautExpression, c: &Q) {
        for (t, x) in other.terms.values() {
            self.add_term(t.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Q) -> TautExpression {
        let mut out = Self::zero(&self.spec);
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.values().map(|(t, c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term degree, or None for the zero expression.
    pub fn degree(&self) -> Option<i64> {
        self.terms.values().map(|(t, _)| t.degree()).max()
    }

    /// JSON list of terms with exact coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<TermJson> = self
            .terms
            .values()
            .map(|(t, c)| TermJson {
                coefficient: rat::fmt(c),
                graph: t.graph().map_or(String::new(), |g| g.encode()),
                psi: t.deco.psi.iter().map(|(l, e)| (l.to_string(), *e)).collect(),
                zeta: t.deco.zeta.iter().map(|(l, e)| (l.to_string(), *e)).collect(),
            })
            .collect();
        serde_json::to_value(list).expect("serializable")
    }
}
