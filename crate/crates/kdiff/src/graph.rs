//! Enhanced level graphs of genus-zero strata.

use crate::cyclotomic::CyclotomicMatrix;
use crate::error::{Error, Result};
use crate::rat::{gcd, lcm};
use crate::stratum::{Leg, LegId, ResidueEquation, StratumSpec};
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub level: i64,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphLeg {
    pub id: LegId,
    pub order: i64,
    pub vertex: usize,
}

/// An edge oriented from its upper end to its lower end; `top_order` is the
/// order o+ of the k-differential at the upper half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub top: usize,
    pub bot: usize,
    pub top_order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelGraph {
    pub k: i64,
    pub vertices: Vec<Vertex>,
    pub legs: Vec<GraphLeg>,
    pub edges: Vec<Edge>,
}

/// A graph automorphism fixing all legs: images of vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Which end of an edge a half-edge is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Top,
    Bot,
}

pub fn vertex_fiber_size(k: i64, orders: &[i64]) -> i64 {
    orders.iter().fold(k, |g, &m| gcd(g, m))
}

impl LevelGraph {
    /// The one-vertex graph of a connected spec, or one vertex per component.
    pub fn trivial(spec: &StratumSpec) -> Self {
        let vertices = spec.components().iter().map(|_| Vertex { level: 0, genus: 0 }).collect();
        let legs = spec
            .legs()
            .map(|(ci, l)| GraphLeg { id: l.id, order: l.order, vertex: ci })
            .collect();
        LevelGraph { k: spec.k(), vertices, legs, edges: Vec::new() }
    }

    pub fn kappa(&self, e: usize) -> i64 {
        self.edges[e].top_order + self.k
    }

    pub fn bot_order(&self, e: usize) -> i64 {
        -2 * self.k - self.edges[e].top_order
    }

    pub fn is_horizontal_edge(&self, e: usize) -> bool {
        self.kappa(e) == 0
    }

    pub fn has_horizontal(&self) -> bool {
        (0..self.edges.len()).any(|e| self.is_horizontal_edge(e))
    }

    /// Number of level passages.
    pub fn depth(&self) -> usize {
        self.levels().len().saturating_sub(1)
    }

    /// Distinct levels from top to bottom.
    pub fn levels(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.vertices.iter().map(|v| v.level).collect();
        set.into_iter().rev().collect()
    }

    /// Codimension of the boundary stratum.
    pub fn codim(&self) -> usize {
        self.depth() + (0..self.edges.len()).filter(|&e| self.is_horizontal_edge(e)).count()
    }

    pub fn leg_vertex(&self, id: LegId) -> Option<usize> {
        self.legs.iter().find(|l| l.id == id).map(|l| l.vertex)
    }

    pub fn leg_level(&self, id: LegId) -> Option<i64> {
        self.leg_vertex(id).map(|v| self.vertices[v].level)
    }

    /// Ids used for half-edges when a level is read as a stratum.
    pub fn half_edge_id(&self, e: usize, end: End) -> LegId {
        let base = self.legs.iter().map(|l| l.id).max().unwrap_or(0);
        base + 2 * e as LegId + if end == End::Top { 1 } else { 2 }
    }

    pub fn half_edge_of(&self, id: LegId) -> Option<(usize, End)> {
        let base = self.legs.iter().map(|l| l.id).max().unwrap_or(0);
        if id <= base {
            return None;
        }
        let off = (id - base - 1) as usize;
        let e = off / 2;
        (e < self.edges.len()).then_some((e, if off.is_multiple_of(2) { End::Top } else { End::Bot }))
    }

    /// Orders of all legs and half-edges at a vertex.
    pub fn vertex_orders(&self, v: usize) -> Vec<i64> {
        let mut out: Vec<i64> = self.legs.iter().filter(|l| l.vertex == v).map(|l| l.order).collect();
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.top == v {
                out.push(edge.top_order);
            }
            if edge.bot == v {
                out.push(self.bot_order(e));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertex_orders(v).len()
    }

    pub fn fiber_size(&self, v: usize) -> i64 {
        vertex_fiber_size(self.k, &self.vertex_orders(v))
    }

    /// Checks the degree condition, stability, level normalization and edge
    /// orientation.
    pub fn validate(&self) -> Result<()> {
        for v in 0..self.vertices.len() {
            let sum: i64 = self.vertex_orders(v).iter().sum();
            let expected = self.k * (2 * self.vertices[v].genus as i64 - 2);
            if sum != expected {
                return Err(Error::DegreeMismatch { component: v, sum, expected });
            }
            if self.vertices[v].genus == 0 && self.valence(v) < 3 {
                return Err(Error::Unstable { component: v, legs: self.valence(v) });
            }
        }
        if self.vertices.iter().map(|v| v.level).max() != Some(0) {
            return Err(Error::Invalid("top level must be 0".into()));
        }
        let levels = self.levels();
        for (i, l) in levels.iter().enumerate() {
            if *l != -(i as i64) {
                return Err(Error::Invalid("levels must be consecutive".into()));
            }
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let (t, b) = (self.vertices[edge.top].level, self.vertices[edge.bot].level);
            let kappa = self.kappa(e);
            if kappa < 0 || (kappa == 0) != (t == b) || (kappa > 0 && t <= b) {
                return Err(Error::Invalid(format!("edge {e} violates the enhancement condition")));
            }
        }
        Ok(())
    }

    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        self.edges.iter().all(|e| uf.union(e.top, e.bot))
    }

    /// Deterministic text encoding `levels|vertices|legs@vertex:order|edges(v,w,o+)`.
    pub fn encode(&self) -> String {
        let levels = self.depth() + 1;
        let verts = self.vertices.iter().map(|v| v.level.to_string()).join(",");
        let mut legs = self.legs.clone();
        legs.sort();
        let legs = legs.iter().map(|l| format!("{}@{}:{}", l.id, l.vertex, l.order)).join(",");
        let mut edges = self.edges.clone();
        edges.sort();
        let edges = edges.iter().map(|e| format!("({},{},{})", e.top, e.bot, e.top_order)).join(",");
        let genus: Vec<String> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.genus > 0)
            .map(|(i, v)| format!("g{}={}", i, v.genus))
            .collect();
        if genus.is_empty() {
            format!("{levels}|{verts}|{legs}|{edges}")
        } else {
            format!("{levels}|{verts}|{legs}|{edges}|{}", genus.join(","))
        }
    }

    /// Relabels vertices by `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> LevelGraph {
        let mut vertices = self.vertices.clone();
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = self.vertices[old].clone();
        }
        let legs = self
            .legs
            .iter()
            .map(|l| GraphLeg { vertex: perm[l.vertex], ..l.clone() })
            .collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { top: perm[e.top], bot: perm[e.bot], top_order: e.top_order })
            .collect();
        edges.sort();
        LevelGraph { k: self.k, vertices, legs, edges }
    }

    /// Isomorphism-invariant representative: vertex order is canonical,
    /// legs and edges are sorted.
    pub fn canonical(&self) -> LevelGraph {
        let mut best: Option<(String, LevelGraph)> = None;
        if self.is_forest() && self.vertices.iter().all(|v| v.genus == 0) {
            let keys: Vec<_> = (0..self.vertices.len()).map(|v| (-self.vertices[v].level, self.branch_key(v))).collect();
            let mut order: Vec<usize> = (0..self.vertices.len()).collect();
            order.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
            let mut perm = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                perm[old] = new;
            }
            let mut g = self.relabel(&perm);
            g.legs.sort();
            return g;
        }
        let by_level: Vec<Vec<usize>> = self
            .levels()
            .iter()
            .map(|l| (0..self.vertices.len()).filter(|&v| self.vertices[v].level == *l).collect())
            .collect();
        for choice in by_level.iter().map(|vs| vs.iter().copied().permutations(vs.len())).multi_cartesian_product() {
            let order: Vec<usize> = choice.into_iter().flatten().collect();
            let mut perm = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                perm[old] = new;
            }
            let mut g = self.relabel(&perm);
            g.legs.sort();
            let enc = g.encode();
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                best = Some((enc, g));
            }
        }
        best.map(|(_, g)| g).unwrap_or_else(|| self.clone())
    }

    /// For forests: the partition of legs induced by removing a vertex.
    fn branch_key(&self, v: usize) -> Vec<Vec<LegId>> {
        let mut branches: Vec<Vec<LegId>> = self
            .legs
            .iter()
            .filter(|l| l.vertex == v)
            .map(|l| vec![l.id])
            .collect();
        for (e, edge) in self.edges.iter().enumerate() {
            let other = if edge.top == v {
                edge.bot
            } else if edge.bot == v {
                edge.top
            } else {
                continue;
            };
            let mut seen = BTreeSet::from([v]);
            let mut stack = vec![other];
            let mut ids = Vec::new();
            let mut used = BTreeSet::from([e]);
            while let Some(w) = stack.pop() {
                if !seen.insert(w) {
                    continue;
                }
                ids.extend(self.legs.iter().filter(|l| l.vertex == w).map(|l| l.id));
                for (f, fe) in self.edges.iter().enumerate() {
                    if used.contains(&f) {
                        continue;
                    }
                    if fe.top == w || fe.bot == w {
                        used.insert(f);
                        stack.push(if fe.top == w { fe.bot } else { fe.top });
                    }
                }
            }
            ids.sort();
            branches.push(ids);
        }
        branches.sort();
        branches
    }

    /// All automorphisms fixing the legs, preserving levels, orientation and
    /// enhancements.
    pub fn automorphisms(&self) -> Vec<Automorphism> {
        let nv = self.vertices.len();
        let mut out = Vec::new();
        let candidates: Vec<Vec<usize>> = (0..nv)
            .map(|v| {
                let legs: BTreeSet<LegId> = self.legs.iter().filter(|l| l.vertex == v).map(|l| l.id).collect();
                if !legs.is_empty() {
                    return vec![v];
                }
                (0..nv)
                    .filter(|&w| {
                        self.vertices[w] == self.vertices[v]
                            && !self.legs.iter().any(|l| l.vertex == w)
                            && sorted(self.vertex_orders(w)) == sorted(self.vertex_orders(v))
                    })
                    .collect()
            })
            .collect();
        let mut perm = vec![usize::MAX; nv];
        let mut used = vec![false; nv];
        self.extend_vertex_perm(0, &candidates, &mut perm, &mut used, &mut out);
        out
    }

    fn extend_vertex_perm(
        &self,
        v: usize,
        candidates: &[Vec<usize>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Automorphism>,
    ) {
        if v == perm.len() {
            let mut edge_perm = vec![usize::MAX; self.edges.len()];
            let mut edge_used = vec![false; self.edges.len()];
            self.extend_edge_perm(0, perm, &mut edge_perm, &mut edge_used, out);
            return;
        }
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            used[w] = true;
            perm[v] = w;
            self.extend_vertex_perm(v + 1, candidates, perm, used, out);
            used[w] = false;
        }
    }

    fn extend_edge_perm(
        &self,
        e: usize,
        vperm: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Automorphism>,
    ) {
        if e == self.edges.len() {
            out.push(Automorphism { vertices: vperm.to_vec(), edges: perm.clone() });
            return;
        }
        let edge = &self.edges[e];
        for f in 0..self.edges.len() {
            let target = &self.edges[f];
            if used[f]
                || target.top != vperm[edge.top]
                || target.bot != vperm[edge.bot]
                || target.top_order != edge.top_order
            {
                continue;
            }
            used[f] = true;
            perm[e] = f;
            self.extend_edge_perm(e + 1, vperm, perm, used, out);
            used[f] = false;
        }
    }

    pub fn aut_order(&self) -> usize {
        if self.is_forest() {
            1
        } else {
            self.automorphisms().len()
        }
    }

    /// Edges crossing passage `i` (1-based, passage `i` lies just above
    /// level `-i`).
    pub fn crossing_edges(&self, i: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let t = self.vertices[self.edges[e].top].level;
                let b = self.vertices[self.edges[e].bot].level;
                t > -(i as i64) && b <= -(i as i64)
            })
            .collect()
    }

    /// Per-passage lcm of the supplied prong numbers and their product.
    pub fn ell_factors_with(&self, prongs: &[i64]) -> Result<(Vec<i64>, i64)> {
        if self.has_horizontal() {
            return Err(Error::HorizontalEdge);
        }
        let per: Vec<i64> = (1..=self.depth())
            .map(|i| self.crossing_edges(i).iter().fold(1, |acc, &e| lcm(acc, prongs[e])))
            .collect();
        let prod = per.iter().product();
        Ok((per, prod))
    }

    /// Per-passage lcm of the enhancements.
    pub fn ell_factors(&self) -> Result<(Vec<i64>, i64)> {
        let prongs: Vec<i64> = (0..self.edges.len()).map(|e| self.kappa(e)).collect();
        self.ell_factors_with(&prongs)
    }

    /// Keeps the passages in `keep` (1-based) and contracts all others,
    /// including horizontal edges.
    pub fn undegenerate(&self, keep: &BTreeSet<usize>) -> LevelGraph {
        self.undegenerate_with(keep, &BTreeSet::new())
    }

    /// Contracts all horizontal edges.
    pub fn vertical_part(&self) -> LevelGraph {
        let all: BTreeSet<usize> = (1..=self.depth()).collect();
        self.undegenerate(&all).canonical()
    }

    /// Keeps the passages in `keep` and the horizontal edges in
    /// `keep_horizontal`, contracting every other edge.
    pub fn undegenerate_with(&self, keep: &BTreeSet<usize>, keep_horizontal: &BTreeSet<usize>) -> LevelGraph {
        let depth_of = |v: usize| (-self.vertices[v].level) as usize;
        let mut uf = UnionFind::new(self.vertices.len());
        let mut extra_genus = vec![0u32; self.vertices.len()];
        let mut contracted = vec![false; self.edges.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            let (t, b) = (depth_of(edge.top), depth_of(edge.bot));
            let kept = if t == b { keep_horizontal.contains(&e) } else { (t + 1..=b).any(|p| keep.contains(&p)) };
            if !kept {
                contracted[e] = true;
                if !uf.union(edge.top, edge.bot) {
                    extra_genus[edge.top] += 1;
                }
            }
        }
        let mut roots: Vec<usize> = (0..self.vertices.len()).map(|v| uf.find(v)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort();
        reps.dedup();
        for r in roots.iter_mut() {
            *r = reps.binary_search(r).unwrap();
        }
        let new_level = |v: usize| -((1..=depth_of(v)).filter(|p| keep.contains(p)).count() as i64);
        let mut vertices = vec![Vertex { level: 0, genus: 0 }; reps.len()];
        for v in 0..self.vertices.len() {
            vertices[roots[v]].level = new_level(v);
            vertices[roots[v]].genus += self.vertices[v].genus + extra_genus[v];
        }
        let legs = self
            .legs
            .iter()
            .map(|l| GraphLeg { vertex: roots[l.vertex], ..l.clone() })
            .collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| !contracted[*e])
            .map(|(_, e)| Edge { top: roots[e.top], bot: roots[e.bot], top_order: e.top_order })
            .collect();
        LevelGraph { k: self.k, vertices, legs, edges }
    }

    /// Vertices at a level.
    pub fn level_vertices(&self, level: i64) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].level == level).collect()
    }

    /// The legs (with ids) of the stratum at the given vertex.
    pub fn vertex_legs(&self, v: usize) -> Vec<Leg> {
        let mut legs: Vec<Leg> = self
            .legs
            .iter()
            .filter(|l| l.vertex == v)
            .map(|l| Leg { id: l.id, order: l.order })
            .collect();
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.top == v {
                legs.push(Leg { id: self.half_edge_id(e, End::Top), order: edge.top_order });
            }
            if edge.bot == v {
                legs.push(Leg { id: self.half_edge_id(e, End::Bot), order: self.bot_order(e) });
            }
        }
        legs.sort();
        legs
    }

    /// The generalized stratum at a level, with residue conditions induced
    /// from the ambient conditions and the global residue condition.
    pub fn level_spec(&self, ambient: &StratumSpec, level: i64) -> Result<StratumSpec> {
        let verts = self.level_vertices(level);
        let comps: Vec<Vec<Leg>> = verts.iter().map(|&v| self.vertex_legs(v)).collect();
        let bare = StratumSpec::new(self.k, comps.clone(), Vec::new())?;
        let coords = bare.residue_coords();
        let above: Vec<LegId> = ambient
            .residue_coords()
            .into_iter()
            .filter(|id| self.leg_level(*id).is_some_and(|l| l > level))
            .collect();
        let ncols = above.len() + coords.len();
        let field = ambient.field();
        let mut m = CyclotomicMatrix::new(field.clone(), ncols);
        let col_of = |id: LegId, is_above: bool| -> Option<usize> {
            if is_above {
                above.iter().position(|&x| x == id)
            } else {
                coords.iter().position(|&x| x == id).map(|p| p + above.len())
            }
        };
        for eq in ambient.equations() {
            let mut row = vec![field.zero(); ncols];
            let mut any = false;
            for (id, c) in &eq.terms {
                let Some(l) = self.leg_level(*id) else { continue };
                let col = if l > level {
                    col_of(*id, true)
                } else if l == level {
                    col_of(*id, false)
                } else {
                    None
                };
                if let Some(col) = col {
                    row[col] = field.add(&row[col], c);
                    any = true;
                }
            }
            if any {
                m.push_row(row);
            }
        }
        for comp in self.components_above(level) {
            let mut orders: Vec<i64> = Vec::new();
            for &v in &comp {
                orders.extend(self.legs.iter().filter(|l| l.vertex == v).map(|l| l.order));
            }
            for edge in &self.edges {
                if comp.contains(&edge.top) && !comp.contains(&edge.bot) {
                    orders.push(edge.top_order);
                }
            }
            if vertex_fiber_size(self.k, &orders) != self.k {
                continue;
            }
            let mut row = vec![field.zero(); ncols];
            let mut any = false;
            for l in self.legs.iter().filter(|l| comp.contains(&l.vertex)) {
                if let Some(col) = col_of(l.id, true) {
                    row[col] = field.one();
                    any = true;
                }
            }
            for (e, edge) in self.edges.iter().enumerate() {
                if comp.contains(&edge.top) && self.vertices[edge.bot].level == level {
                    if let Some(col) = col_of(self.half_edge_id(e, End::Bot), false) {
                        row[col] = field.neg(&field.one());
                        any = true;
                    }
                }
            }
            if any {
                m.push_row(row);
            }
        }
        let eqs = m
            .eliminate_leading(above.len())
            .into_iter()
            .map(|row| ResidueEquation {
                terms: coords.iter().copied().zip(row).filter(|(_, c)| !c.is_zero()).collect::<BTreeMap<_, _>>(),
            })
            .filter(|e| !e.terms.is_empty())
            .collect();
        StratumSpec::new(self.k, comps, eqs)
    }

    /// Connected components of the subgraph strictly above a level.
    fn components_above(&self, level: i64) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            if self.vertices[e.top].level > level && self.vertices[e.bot].level > level {
                uf.union(e.top, e.bot);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            if self.vertices[v].level > level {
                groups.entry(uf.find(v)).or_default().push(v);
            }
        }
        groups.into_values().collect()
    }

    /// All level strata from top to bottom.
    pub fn level_specs(&self, ambient: &StratumSpec) -> Result<Vec<StratumSpec>> {
        self.levels().into_iter().map(|l| self.level_spec(ambient, l)).collect()
    }

    /// Projectivized dimensions of the level strata, or `None` if a level is
    /// empty.
    pub fn level_dimensions(&self, ambient: &StratumSpec) -> Option<Vec<i64>> {
        let specs = self.level_specs(ambient).ok()?;
        specs.iter().map(|s| s.dimension().ok()).collect()
    }
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort();
    v
}

impl fmt::Display for LevelGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl std::str::FromStr for LevelGraph {
    type Err = Error;

    /// Parses `k:` followed by the graph encoding.
    fn from_str(s: &str) -> Result<Self> {
        let (k, rest) = s.split_once(':').ok_or_else(|| Error::parse(0, "expected 'k:' prefix"))?;
        let k: i64 = k.trim().parse().map_err(|_| Error::parse(0, "bad k"))?;
        let offset = k.to_string().len() + 1;
        let fields: Vec<&str> = rest.split('|').collect();
        if fields.len() < 4 {
            return Err(Error::parse(offset, "expected levels|vertices|legs|edges"));
        }
        let err = |msg: &str| Error::parse(offset, msg.to_string());
        let mut vertices: Vec<Vertex> = if fields[1].trim().is_empty() {
            Vec::new()
        } else {
            fields[1]
                .split(',')
                .map(|x| x.trim().parse().map(|level| Vertex { level, genus: 0 }))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err("bad vertex level"))?
        };
        let mut legs = Vec::new();
        for item in fields[2].split(',').filter(|x| !x.trim().is_empty()) {
            let (id, rest) = item.split_once('@').ok_or_else(|| err("leg must be id@vertex[:order]"))?;
            let (v, order) = rest.split_once(':').ok_or_else(|| err("leg must carry :order"))?;
            legs.push(GraphLeg {
                id: id.trim().parse().map_err(|_| err("bad leg id"))?,
                vertex: v.trim().parse().map_err(|_| err("bad leg vertex"))?,
                order: order.trim().parse().map_err(|_| err("bad leg order"))?,
            });
        }
        let mut edges = Vec::new();
        let body = fields[3].replace(['(', ' '], "");
        for item in body.split(')').filter(|x| !x.trim_matches(',').is_empty()) {
            let nums: Vec<i64> = item
                .trim_matches(',')
                .split(',')
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err("bad edge"))?;
            if nums.len() != 3 {
                return Err(err("edge needs (top,bot,order)"));
            }
            edges.push(Edge { top: nums[0] as usize, bot: nums[1] as usize, top_order: nums[2] });
        }
        if let Some(g) = fields.get(4) {
            for item in g.split(',').filter(|x| !x.is_empty()) {
                let (v, genus) = item.trim_start_matches('g').split_once('=').ok_or_else(|| err("bad genus"))?;
                let v: usize = v.parse().map_err(|_| err("bad genus vertex"))?;
                let vert = vertices.get_mut(v).ok_or_else(|| err("genus vertex out of range"))?;
                vert.genus = genus.parse().map_err(|_| err("bad genus"))?;
            }
        }
        let nv = vertices.len();
        if legs.iter().any(|l| l.vertex >= nv) || edges.iter().any(|e| e.top >= nv || e.bot >= nv) {
            return Err(err("vertex index out of range"));
        }
        let g = LevelGraph { k, vertices, legs, edges };
        g.validate()?;
        Ok(g)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.parent[x] = r;
        r
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
