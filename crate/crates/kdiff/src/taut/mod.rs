//! Tautological classes on generalized strata and their integrals.

mod chi;
mod expr;
mod ops;

pub use chi::{c1_log_cotangent, c1_log_horizontal, euler_characteristic, euler_terms, EulerTerm};
pub use expr::{Decoration, TautExpression, Term};
pub use ops::{divisor_class, normal_bundle_c1, residue_rewrite, zeta_rewrite, Factor};

use crate::cache::Store;
use crate::cover::{enumerate_covers, GraphCover};
use crate::enumerate::{enumerate_level_graphs, enumerate_mixed, enumerate_level_graphs_bounded, DEFAULT_BOUND};
use crate::error::{Error, Result};
use crate::graph::LevelGraph;
use crate::rat::{factorial, q, Q};
use crate::stratum::{LegId, StratumSpec};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub type Psi = BTreeMap<LegId, u32>;

const MAX_DEPTH: usize = 200;

type GraphKey = (String, usize, usize);

/// (n-3)! / prod p_i! for a psi monomial of top degree on M_{0,n}.
pub fn psi_monomial_integral(n: usize, exponents: &[u32]) -> Result<Q> {
    let total: i64 = exponents.iter().map(|&p| p as i64).sum();
    if n < 3 || total != n as i64 - 3 {
        return Err(Error::IntegrandDegree { degree: total, dim: n as i64 - 3 });
    }
    let mut den = BigInt::one();
    for &p in exponents {
        den *= factorial(p as u64);
    }
    Ok(Q::new(factorial(n as u64 - 3), den))
}

/// Leg used to trade zeta for psi classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LegChoice {
    /// Smallest leg on the component with the most legs.
    #[default]
    First,
    /// Largest leg on the component with the most legs.
    Last,
}

/// Recursive evaluator of zeta/psi integrals with a memo table.
pub struct Evaluator {
    memo: RwLock<HashMap<String, Q>>,
    graphs: RwLock<HashMap<GraphKey, Arc<Vec<LevelGraph>>>>,
    store: Option<Arc<dyn Store>>,
    leg_choice: LegChoice,
    bound: usize,
    memoize: bool,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator {
            memo: RwLock::new(HashMap::new()),
            graphs: RwLock::new(HashMap::new()),
            store: None,
            leg_choice: LegChoice::First,
            bound: DEFAULT_BOUND,
            memoize: true,
        }
    }

    pub fn with_store(mut self, store: Arc<dyn Store>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn with_leg_choice(mut self, choice: LegChoice) -> Self {
        self.leg_choice = choice;
        self
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Divisor graphs of a spec, cached.
    pub fn graphs(&self, spec: &StratumSpec, depth: usize, horizontal: bool) -> Result<Arc<Vec<LevelGraph>>> {
        let key = (spec.memo_key(), depth, horizontal as usize + 2);
        if let Some(g) = self.graphs.read().get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(if self.bound == DEFAULT_BOUND {
            enumerate_level_graphs(spec, depth, horizontal)?
        } else {
            enumerate_level_graphs_bounded(spec, depth, horizontal, self.bound)?
        });
        self.graphs.write().insert(key, g.clone());
        Ok(g)
    }

    /// Graphs with `depth` passages and `horizontal` horizontal edges, cached.
    pub fn mixed_graphs(&self, spec: &StratumSpec, depth: usize, horizontal: usize) -> Result<Arc<Vec<LevelGraph>>> {
        if horizontal == 0 {
            return self.graphs(spec, depth, false);
        }
        let key = (spec.memo_key(), depth, horizontal + 100);
        if let Some(g) = self.graphs.read().get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(enumerate_mixed(spec, depth, horizontal, self.bound)?);
        self.graphs.write().insert(key, g.clone());
        Ok(g)
    }

    /// Covers of a graph; genus-zero graphs are forests with one cover.
    pub fn covers(&self, graph: &LevelGraph) -> Vec<GraphCover> {
        enumerate_covers(graph, None)
    }

    /// Evaluation prefactor S(pi) prod kappa / (k^L |Aut| l-hat) over the
    /// vertical edges.
    pub fn prefactor(&self, cover: &GraphCover) -> Q {
        let g = &cover.base;
        let kappa: i64 = (0..g.edges.len()).filter(|&e| !g.is_horizontal_edge(e)).map(|e| g.kappa(e)).product();
        let ell: i64 = cover.passage_ells().iter().product();
        let den = BigInt::from(g.k).pow(g.depth() as u32) * BigInt::from(g.aut_order() as i64) * BigInt::from(ell);
        cover.s_pi() * Q::new(BigInt::from(kappa), den)
    }

    pub fn cached_entries(&self) -> Vec<(String, Q)> {
        let mut v: Vec<(String, Q)> = self.memo.read().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort();
        v
    }

    /// Integral of zeta^a prod psi_i^{p_i} over the projectivized spec.
    pub fn eval(&self, spec: &StratumSpec, a: u32, psi: &Psi) -> Result<Q> {
        self.eval_depth(spec, a, psi, 0, None)
    }

    /// As `eval`, trading zeta for psi at the given leg at the first step.
    pub fn eval_via_leg(&self, spec: &StratumSpec, a: u32, psi: &Psi, leg: LegId) -> Result<Q> {
        self.eval_depth(spec, a, psi, 0, Some(leg))
    }

    /// Recomputes the value stored under a memo key without consulting the
    /// memo table or store.
    pub fn recompute(&self, key: &str) -> Result<Q> {
        let (spec, a, psi) = parse_key(key)?;
        let fresh = Evaluator {
            memo: RwLock::new(HashMap::new()),
            graphs: RwLock::new(HashMap::new()),
            store: None,
            leg_choice: self.leg_choice,
            bound: self.bound,
            memoize: true,
        };
        fresh.eval(&spec, a, &psi)
    }

    fn eval_depth(&self, spec: &StratumSpec, a: u32, psi: &Psi, depth: usize, leg: Option<LegId>) -> Result<Q> {
        if depth > MAX_DEPTH {
            return Err(Error::RecursionDepth);
        }
        let dim = match spec.dimension() {
            Ok(d) => d,
            Err(Error::EmptyIntersection) | Err(Error::EmptyStratum(_)) => return Ok(Q::zero()),
            Err(e) => return Err(e),
        };
        let degree = a as i64 + psi.values().map(|&p| p as i64).sum::<i64>();
        if degree != dim {
            return Ok(Q::zero());
        }
        let key = memo_key(spec, a, psi);
        if self.memoize && leg.is_none() {
            if let Some(v) = self.memo.read().get(&key) {
                return Ok(v.clone());
            }
            if let Some(v) = self.store.as_ref().and_then(|s| s.get(&key)) {
                self.memo.write().insert(key, v.clone());
                return Ok(v);
            }
        }
        let value = self.compute(spec, a, psi, depth, leg)?;
        if self.memoize && leg.is_none() {
            if let Some(s) = &self.store {
                s.put(&key, &value);
            }
            self.memo.write().insert(key, value.clone());
        }
        Ok(value)
    }

    fn compute(&self, spec: &StratumSpec, a: u32, psi: &Psi, depth: usize, leg: Option<LegId>) -> Result<Q> {
        let reduced = spec.canonical_form();
        if !reduced.equations().is_empty() {
            return self.resolve_condition(&reduced, a, psi, depth);
        }
        let spec = &reduced;
        if a > 0 {
            let i = leg.unwrap_or_else(|| self.choose_leg(spec));
            return self.trade_zeta(spec, a, psi, i, depth);
        }
        if !spec.is_connected() {
            return Ok(Q::zero());
        }
        let exps: Vec<u32> = spec.leg_ids().iter().map(|id| psi.get(id).copied().unwrap_or(0)).collect();
        psi_monomial_integral(spec.n(), &exps)
    }

    fn choose_leg(&self, spec: &StratumSpec) -> LegId {
        let comp = spec
            .components()
            .iter()
            .rev()
            .max_by_key(|c| c.legs.len())
            .expect("nonempty spec");
        match self.leg_choice {
            LegChoice::First => comp.legs.iter().map(|l| l.id).min().unwrap(),
            LegChoice::Last => comp.legs.iter().map(|l| l.id).max().unwrap(),
        }
    }

    /// Product of level integrals of a boundary term with the given
    /// per-level zeta exponents.
    pub fn split(&self, spec: &StratumSpec, graph: &LevelGraph, zeta: &BTreeMap<usize, u32>, psi: &Psi, depth: usize) -> Result<Q> {
        let levels = graph.levels();
        let mut out = Q::one();
        for (d, &level) in levels.iter().enumerate() {
            let verts = graph.level_vertices(level);
            let a = zeta.get(&d).copied().unwrap_or(0);
            let has_horizontal = graph
                .edges
                .iter()
                .any(|e| graph.vertices[e.top].level == level && graph.vertices[e.bot].level == level);
            let level_psi: Psi = verts
                .iter()
                .flat_map(|&v| graph.vertex_legs(v))
                .filter_map(|l| psi.get(&l.id).map(|&p| (l.id, p)))
                .collect();
            let value = if has_horizontal {
                self.horizontal_level(graph, level, a, &level_psi)?
            } else {
                let ls = graph.level_spec(spec, level)?;
                self.eval_depth(&ls, a, &level_psi, depth + 1, None)?
            };
            if value.is_zero() {
                return Ok(value);
            }
            out *= value;
        }
        Ok(out)
    }

    /// A level joined by horizontal edges into one group integrates as the
    /// product of the vertex psi integrals.
    fn horizontal_level(&self, graph: &LevelGraph, level: i64, a: u32, psi: &Psi) -> Result<Q> {
        let verts = graph.level_vertices(level);
        let mut uf = crate::graph::UnionFind::new(graph.vertices.len());
        for e in &graph.edges {
            if graph.vertices[e.top].level == level && graph.vertices[e.bot].level == level {
                uf.union(e.top, e.bot);
            }
        }
        let root = uf.find(verts[0]);
        if a > 0 || verts.iter().any(|&v| uf.find(v) != root) {
            return Err(Error::Unsupported("zeta or several groups on a level with horizontal edges".into()));
        }
        let mut out = Q::one();
        for &v in &verts {
            let legs = graph.vertex_legs(v);
            let exps: Vec<u32> = legs.iter().map(|l| psi.get(&l.id).copied().unwrap_or(0)).collect();
            let total: u32 = exps.iter().sum();
            if total as usize + 3 != legs.len() {
                return Ok(Q::zero());
            }
            out *= psi_monomial_integral(legs.len(), &exps)?;
        }
        Ok(out)
    }

    fn restrict(psi: &Psi, graph: &LevelGraph, level: i64) -> Psi {
        psi.iter()
            .filter(|(id, _)| graph.leg_level(**id) == Some(level))
            .map(|(id, p)| (*id, *p))
            .collect()
    }

    /// zeta = (m_i + k) psi_i - sum k l-hat [D_pi] over divisors with leg i
    /// on the lower level.
    fn trade_zeta(&self, spec: &StratumSpec, a: u32, psi: &Psi, i: LegId, depth: usize) -> Result<Q> {
        let k = spec.k();
        let m = spec.order(i);
        let mut out = Q::zero();
        if m + k != 0 {
            let mut p = psi.clone();
            *p.entry(i).or_insert(0) += 1;
            out += q(m + k) * self.eval_depth(spec, a - 1, &p, depth + 1, None)?;
        }
        for g in self.graphs(spec, 1, false)?.iter() {
            if g.leg_level(i) != Some(-1) {
                continue;
            }
            for cover in self.covers(g) {
                let coeff = q(k) * q(cover.ell_hat().1) * self.prefactor(&cover);
                let top = self.eval_depth(&g.level_spec(spec, 0)?, a - 1, &Self::restrict(psi, g, 0), depth + 1, None)?;
                if top.is_zero() {
                    continue;
                }
                let bot = self.eval_depth(&g.level_spec(spec, -1)?, 0, &Self::restrict(psi, g, -1), depth + 1, None)?;
                out -= coeff * top * bot;
            }
        }
        Ok(out)
    }

    /// [Q^R] = -(1/k) zeta - sum l-hat [D_pi] in the stratum with one
    /// condition removed.
    fn resolve_condition(&self, spec: &StratumSpec, a: u32, psi: &Psi, depth: usize) -> Result<Q> {
        let idx = spec.equations().len() - 1;
        let dropped = &spec.equations()[idx];
        let relaxed = spec.without_equation(idx);
        let k = spec.k();
        let mut out = -Q::new(BigInt::one(), BigInt::from(k)) * self.eval_depth(&relaxed, a + 1, psi, depth + 1, None)?;
        for g in self.graphs(&relaxed, 1, false)?.iter() {
            let all_below = dropped.terms.keys().all(|id| g.leg_level(*id) == Some(-1));
            let top_unchanged = {
                let with = g.level_spec(spec, 0)?;
                let without = g.level_spec(&relaxed, 0)?;
                with.residue_ranks(with.equations()).1 == without.residue_ranks(without.equations()).1
            };
            if !(all_below || top_unchanged) {
                continue;
            }
            for cover in self.covers(g) {
                let coeff = q(cover.ell_hat().1) * self.prefactor(&cover);
                let top = self.eval_depth(&g.level_spec(&relaxed, 0)?, a, &Self::restrict(psi, g, 0), depth + 1, None)?;
                if top.is_zero() {
                    continue;
                }
                let bot = self.eval_depth(&g.level_spec(&relaxed, -1)?, 0, &Self::restrict(psi, g, -1), depth + 1, None)?;
                out -= coeff * top * bot;
            }
        }
        Ok(out)
    }
}

fn memo_key(spec: &StratumSpec, a: u32, psi: &Psi) -> String {
    let psi: Vec<String> = psi.iter().filter(|(_, p)| **p > 0).map(|(id, p)| format!("{id}^{p}")).collect();
    format!("{}#z{}#{}", spec.canonical_form(), a, psi.join(","))
}

fn parse_key(key: &str) -> Result<(StratumSpec, u32, Psi)> {
    let mut parts = key.rsplitn(3, '#');
    let psi_text = parts.next().unwrap_or("");
    let a_text = parts.next().ok_or_else(|| Error::parse(0, "bad cache key"))?;
    let spec_text = parts.next().ok_or_else(|| Error::parse(0, "bad cache key"))?;
    let spec: StratumSpec = spec_text.parse()?;
    let a: u32 = a_text.trim_start_matches('z').parse().map_err(|_| Error::parse(0, "bad zeta exponent"))?;
    let mut psi = Psi::new();
    for item in psi_text.split(',').filter(|s| !s.is_empty()) {
        let (id, p) = item.split_once('^').ok_or_else(|| Error::parse(0, "bad psi"))?;
        psi.insert(
            id.parse().map_err(|_| Error::parse(0, "bad psi leg"))?,
            p.parse().map_err(|_| Error::parse(0, "bad psi exponent"))?,
        );
    }
    Ok((spec, a, psi))
}
