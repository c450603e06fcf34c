//! Cyclic k-covers of level graphs.

use crate::graph::{Automorphism, LevelGraph, UnionFind};
use crate::rat::{gcd, qf, Q};
use crate::stratum::StratumSpec;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashSet;
use std::fmt;

/// A cover given by fibers and attachment offsets. Preimage `(e, t)` of an
/// edge joins `(top, t + a_e)` and `(bot, t + b_e)`; preimage `(i, t)` of a
/// leg is attached to `(v, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphCover {
    pub base: LevelGraph,
    pub fibers: Vec<i64>,
    pub edge_fibers: Vec<i64>,
    pub top_offsets: Vec<i64>,
    pub bot_offsets: Vec<i64>,
}

/// The cover as an explicit graph with the deck transformation.
#[derive(Clone, Debug)]
pub struct ExplicitCover {
    pub vertices: Vec<(usize, i64)>,
    pub edges: Vec<(usize, usize)>,
    pub tau_vertices: Vec<usize>,
    pub tau_edges: Vec<usize>,
}

fn md(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

impl GraphCover {
    pub fn k(&self) -> i64 {
        self.base.k
    }

    pub fn leg_fiber(&self, leg: usize) -> i64 {
        gcd(self.k(), self.base.legs[leg].order)
    }

    fn leg_mults(&self) -> i64 {
        (0..self.base.legs.len())
            .map(|i| self.leg_fiber(i) / self.fibers[self.base.legs[i].vertex])
            .product()
    }

    fn edge_mults(&self) -> i64 {
        self.base
            .edges
            .iter()
            .enumerate()
            .map(|(e, edge)| (self.edge_fibers[e] / self.fibers[edge.top]) * (self.edge_fibers[e] / self.fibers[edge.bot]))
            .product()
    }

    /// K: product of kappa_e / gcd(kappa_e, k).
    pub fn prong_count(&self) -> i64 {
        (0..self.base.edges.len()).map(|e| self.base.kappa(e) / self.edge_fibers[e]).product()
    }

    /// Per-passage lcm of the abelian enhancements and their product.
    pub fn ell_hat(&self) -> (Vec<i64>, i64) {
        let prongs: Vec<i64> = (0..self.base.edges.len()).map(|e| self.base.kappa(e) / self.edge_fibers[e]).collect();
        self.base.ell_factors_with(&prongs).unwrap_or_else(|_| (Vec::new(), 1))
    }

    /// Per-passage lcm of the prongs of the vertical edges.
    pub fn passage_ells(&self) -> Vec<i64> {
        let g = &self.base;
        (1..=g.depth())
            .map(|i| {
                g.crossing_edges(i)
                    .iter()
                    .filter(|&&e| !g.is_horizontal_edge(e))
                    .fold(1, |acc, &e| crate::rat::lcm(acc, g.kappa(e) / self.edge_fibers[e]))
            })
            .collect()
    }

    pub fn explicit(&self) -> ExplicitCover {
        let mut index = Vec::new();
        let mut vertices = Vec::new();
        for (v, &p) in self.fibers.iter().enumerate() {
            index.push(vertices.len());
            vertices.extend((0..p).map(|q| (v, q)));
        }
        let vid = |v: usize, q: i64| index[v] + md(q, self.fibers[v]) as usize;
        let mut edges = Vec::new();
        let mut eindex = Vec::new();
        for (e, edge) in self.base.edges.iter().enumerate() {
            eindex.push(edges.len());
            for t in 0..self.edge_fibers[e] {
                edges.push((vid(edge.top, t + self.top_offsets[e]), vid(edge.bot, t + self.bot_offsets[e])));
            }
        }
        let tau_vertices = vertices.iter().map(|&(v, q)| vid(v, q + 1)).collect();
        let mut tau_edges = Vec::new();
        for (e, _) in self.base.edges.iter().enumerate() {
            for t in 0..self.edge_fibers[e] {
                tau_edges.push(eindex[e] + md(t + 1, self.edge_fibers[e]) as usize);
            }
        }
        ExplicitCover { vertices, edges, tau_vertices, tau_edges }
    }

    /// Number of connected components of the cover lying over each
    /// connected component of the base, keyed by the smallest base vertex.
    pub fn components_over_base(&self) -> Vec<(usize, usize)> {
        let ex = self.explicit();
        let mut uf = UnionFind::new(ex.vertices.len());
        for &(a, b) in &ex.edges {
            uf.union(a, b);
        }
        let mut base_uf = UnionFind::new(self.base.vertices.len());
        for e in &self.base.edges {
            base_uf.union(e.top, e.bot);
        }
        let mut out: Vec<(usize, HashSet<usize>)> = Vec::new();
        for (i, &(v, _)) in ex.vertices.iter().enumerate() {
            let b = base_uf.find(v);
            let root = uf.find(i);
            match out.iter_mut().find(|(x, _)| *x == b) {
                Some((_, s)) => {
                    s.insert(root);
                }
                None => out.push((b, HashSet::from([root]))),
            }
        }
        out.into_iter().map(|(b, s)| (b, s.len())).collect()
    }

    fn edge_state(&self) -> Vec<i64> {
        self.top_offsets.iter().zip(&self.bot_offsets).flat_map(|(a, b)| [*a, *b]).collect()
    }

    /// Moduli of the state vector: per edge (p_top, p_bot), then per leg p_v.
    fn moduli(&self, with_legs: bool) -> Vec<i64> {
        let mut m: Vec<i64> = self
            .base
            .edges
            .iter()
            .flat_map(|e| [self.fibers[e.top], self.fibers[e.bot]])
            .collect();
        if with_legs {
            m.extend(self.base.legs.iter().map(|l| self.fibers[l.vertex]));
        }
        m
    }

    fn state(&self, with_legs: bool) -> Vec<i64> {
        let mut s = self.edge_state();
        if with_legs {
            s.extend(std::iter::repeat_n(0, self.base.legs.len()));
        }
        s
    }

    fn base_automorphisms(&self) -> Vec<Automorphism> {
        self.base.automorphisms()
    }

    fn apply(&self, gamma: &Automorphism, state: &[i64], lambda: &[i64], mu: &[i64], with_legs: bool) -> Vec<i64> {
        let mut out = state.to_vec();
        for e in 0..self.base.edges.len() {
            let f = gamma.edges[e];
            let target = &self.base.edges[f];
            out[2 * f] = md(state[2 * e] + lambda[target.top] - mu[f], self.fibers[target.top]);
            out[2 * f + 1] = md(state[2 * e + 1] + lambda[target.bot] - mu[f], self.fibers[target.bot]);
        }
        if with_legs {
            let base = 2 * self.base.edges.len();
            for (i, leg) in self.base.legs.iter().enumerate() {
                out[base + i] = md(state[base + i] + lambda[gamma.vertices[leg.vertex]], self.fibers[leg.vertex]);
            }
        }
        out
    }

    fn all_lambdas(&self) -> Vec<Vec<i64>> {
        self.fibers.iter().map(|&p| 0..p).multi_cartesian_product().collect_vec_or_unit()
    }

    fn all_mus(&self) -> Vec<Vec<i64>> {
        self.edge_fibers.iter().map(|&g| 0..g).multi_cartesian_product().collect_vec_or_unit()
    }

    /// Orbit of the cover data under relabelings commuting with tau.
    fn orbit(&self, with_legs: bool) -> HashSet<Vec<i64>> {
        let state = self.state(with_legs);
        let lambdas = self.all_lambdas();
        let mus = self.all_mus();
        let mut out = HashSet::new();
        for gamma in self.base_automorphisms() {
            for l in &lambdas {
                for m in &mus {
                    out.insert(self.apply(&gamma, &state, l, m, with_legs));
                }
            }
        }
        out
    }

    /// |Aut_{H_k}|: automorphisms of the marked cover commuting with tau.
    pub fn aut_commuting(&self) -> usize {
        let state = self.state(true);
        let lambdas = self.all_lambdas();
        let mus = self.all_mus();
        let mut count = 0;
        for gamma in self.base_automorphisms() {
            for l in &lambdas {
                for m in &mus {
                    if self.apply(&gamma, &state, l, m, true) == state {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Counts group elements `x` with `x . cover` isomorphic to the cover.
    fn stabilizer_size(&self, with_legs: bool) -> BigInt {
        let orbit = self.orbit(with_legs);
        let state = self.state(with_legs);
        let moduli = self.moduli(with_legs);
        let mut hits: i64 = 0;
        for shift in moduli.iter().map(|&p| 0..p).multi_cartesian_product().collect_vec_or_unit() {
            let moved: Vec<i64> = state.iter().zip(&shift).zip(&moduli).map(|((s, x), p)| md(s + x, *p)).collect();
            if orbit.contains(&moved) {
                hits += 1;
            }
        }
        let mult = if with_legs { self.edge_mults() * self.leg_mults() } else { self.edge_mults() };
        BigInt::from(hits) * BigInt::from(mult)
    }

    /// |Stab_G| for the full group of level-wise fiber rotations.
    pub fn stab_full(&self) -> BigInt {
        self.stabilizer_size(true)
    }

    /// |Stab_G(H(pi))|: elements fixing the adjacency data of the levels.
    pub fn stab_adjacency(&self) -> BigInt {
        let p: i64 = self.fibers.iter().product();
        BigInt::from(p) * BigInt::from(self.edge_mults()) * BigInt::from(self.leg_mults())
    }

    /// S(pi) = |Stab_{G/G0}| / prod gcd(kappa_e, k)^2.
    pub fn s_pi(&self) -> Q {
        let denom: i64 = self.edge_fibers.iter().map(|g| g * g).product();
        Q::new(self.stabilizer_size(false), BigInt::from(denom))
    }

    /// Both sides of |Aut_H| |Stab_G| = |Aut| prod gcd |Stab_G(H)|.
    pub fn stabilizer_identity(&self) -> (BigInt, BigInt) {
        let lhs = BigInt::from(self.aut_commuting()) * self.stab_full();
        let g: i64 = self.edge_fibers.iter().product();
        let rhs = BigInt::from(self.base.aut_order()) * BigInt::from(g) * self.stab_adjacency();
        (lhs, rhs)
    }

    pub fn encode(&self) -> String {
        format!(
            "{}|{}|{}",
            self.base.encode(),
            self.fibers.iter().join(","),
            self.top_offsets.iter().zip(&self.bot_offsets).map(|(a, b)| format!("{a}:{b}")).join(",")
        )
    }
}

impl fmt::Display for GraphCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

trait CollectOrUnit {
    fn collect_vec_or_unit(self) -> Vec<Vec<i64>>;
}

impl<I: Iterator<Item = Vec<i64>>> CollectOrUnit for I {
    /// The product over an empty family is a single empty tuple.
    fn collect_vec_or_unit(self) -> Vec<Vec<i64>> {
        let v: Vec<Vec<i64>> = self.collect();
        if v.is_empty() {
            vec![Vec::new()]
        } else {
            v
        }
    }
}

pub fn edge_fiber(k: i64, kappa: i64) -> i64 {
    gcd(kappa, k)
}

/// All covers up to tau-equivariant isomorphism, with legs marked only up to
/// fiber rotation. Fiber sizes default to gcd(k, local orders); supplying
/// them skips the genus-zero connectivity check.
pub fn enumerate_covers(base: &LevelGraph, fibers: Option<&[i64]>) -> Vec<GraphCover> {
    let k = base.k;
    let p: Vec<i64> = match fibers {
        Some(f) => f.to_vec(),
        None => (0..base.vertices.len()).map(|v| base.fiber_size(v)).collect(),
    };
    let g: Vec<i64> = (0..base.edges.len()).map(|e| edge_fiber(k, base.kappa(e))).collect();
    let zero = GraphCover {
        base: base.clone(),
        fibers: p.clone(),
        edge_fibers: g.clone(),
        top_offsets: vec![0; base.edges.len()],
        bot_offsets: vec![0; base.edges.len()],
    };
    if fibers.is_none() && base.is_forest() {
        return vec![zero];
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    let ranges: Vec<std::ops::Range<i64>> = base
        .edges
        .iter()
        .map(|e| 0..gcd(p[e.top], p[e.bot]))
        .collect();
    for bots in ranges.into_iter().multi_cartesian_product().collect_vec_or_unit() {
        let cover = GraphCover { bot_offsets: bots, ..zero.clone() };
        let state = cover.edge_state();
        if seen.contains(&state) {
            continue;
        }
        let orbit = cover.orbit(false);
        seen.extend(orbit);
        if fibers.is_none() && !connected_as_expected(&cover) {
            continue;
        }
        out.push(cover);
    }
    out
}

fn connected_as_expected(cover: &GraphCover) -> bool {
    let base = &cover.base;
    let mut uf = UnionFind::new(base.vertices.len());
    for e in &base.edges {
        uf.union(e.top, e.bot);
    }
    cover.components_over_base().iter().all(|&(b, n)| {
        let expected = base
            .legs
            .iter()
            .filter(|l| uf.find(l.vertex) == uf.find(b))
            .fold(base.k, |acc, l| gcd(acc, l.order));
        n as i64 == expected
    })
}

/// Degree of the quotient map from the abelian cover space: prod gcd(m_i,k)/k.
pub fn deg_d(spec: &StratumSpec) -> Q {
    let num: i64 = spec.legs().map(|(_, l)| gcd(l.order, spec.k())).product();
    qf(num, spec.k())
}

/// Degree of the level-wise quotient map of a boundary stratum.
pub fn deg_d_pi(cover: &GraphCover) -> Q {
    let k = cover.k();
    let legs: i64 = cover.base.legs.iter().map(|l| gcd(l.order, k)).product();
    let edges: i64 = cover.edge_fibers.iter().map(|g| g * g).product();
    let levels = cover.base.depth() as u32 + 1;
    Q::new(BigInt::from(legs) * BigInt::from(edges), BigInt::from(k).pow(levels))
}

/// The degree of the quotient map computed level by level.
pub fn deg_d_pi_by_levels(cover: &GraphCover, ambient: &StratumSpec) -> Option<Q> {
    let specs = cover.base.level_specs(ambient).ok()?;
    let mut out = Q::one();
    for s in specs {
        out *= deg_d(&s);
    }
    Some(out)
}
