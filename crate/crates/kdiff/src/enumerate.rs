//! Enumeration of level graphs of genus-zero strata.

use crate::error::{Error, Result};
use crate::graph::{Edge, GraphLeg, LevelGraph, Vertex};
use crate::stratum::{Leg, StratumSpec};
use itertools::Itertools;

pub const DEFAULT_BOUND: usize = 8;

/// A tree on the legs of one component, given by its clusters (leg subsets
/// not containing the smallest leg).
#[derive(Clone, Debug)]
struct ClusterTree {
    clusters: Vec<u32>,
    horizontal: usize,
}

fn cluster_sum(legs: &[Leg], mask: u32) -> i64 {
    legs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l.order).sum()
}

fn laminar(a: u32, b: u32) -> bool {
    a & b == 0 || a & b == a || a & b == b
}

/// Trees on one component with at most `max_horizontal` horizontal edges.
fn component_trees(k: i64, legs: &[Leg], max_horizontal: usize) -> Vec<ClusterTree> {
    let n = legs.len();
    let full: u32 = (1 << n) - 1;
    let candidates: Vec<u32> = (2..full)
        .filter(|&m| m & 1 == 0)
        .filter(|&m| m.count_ones() >= 2 && (full & !m).count_ones() >= 2)
        .filter(|&m| max_horizontal > 0 || cluster_sum(legs, m) != -k)
        .collect();
    let horizontal: Vec<bool> = candidates.iter().map(|&m| cluster_sum(legs, m) == -k).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    struct Ctx<'a> {
        cands: &'a [u32],
        horizontal: &'a [bool],
        max: usize,
    }
    fn rec(ctx: &Ctx<'_>, i: usize, h: usize, chosen: &mut Vec<u32>, out: &mut Vec<ClusterTree>) {
        if i == ctx.cands.len() {
            out.push(ClusterTree { clusters: chosen.clone(), horizontal: h });
            return;
        }
        rec(ctx, i + 1, h, chosen, out);
        let nh = h + ctx.horizontal[i] as usize;
        if nh <= ctx.max && chosen.iter().all(|&c| laminar(c, ctx.cands[i])) {
            chosen.push(ctx.cands[i]);
            rec(ctx, i + 1, nh, chosen, out);
            chosen.pop();
        }
    }
    let ctx = Ctx { cands: &candidates, horizontal: &horizontal, max: max_horizontal };
    rec(&ctx, 0, 0, &mut chosen, &mut out);
    out
}

/// Unleveled forest: vertices, legs and edges with orientation.
struct Forest {
    nv: usize,
    legs: Vec<GraphLeg>,
    edges: Vec<Edge>,
}

fn build_forest(k: i64, spec: &StratumSpec, trees: &[&ClusterTree]) -> Forest {
    let mut legs_out = Vec::new();
    let mut edges = Vec::new();
    let mut nv = 0;
    for (comp, tree) in spec.components().iter().zip(trees) {
        let legs = &comp.legs;
        let full: u32 = (1 << legs.len()) - 1;
        let root = nv;
        let mut nodes = vec![full];
        nodes.extend(tree.clusters.iter().copied());
        nv += nodes.len();
        let parent = |c: u32| -> usize {
            (0..nodes.len())
                .filter(|&j| nodes[j] != c && nodes[j] & c == c)
                .min_by_key(|&j| nodes[j].count_ones())
                .unwrap()
        };
        for (li, leg) in legs.iter().enumerate() {
            let owner = (0..nodes.len())
                .filter(|&j| nodes[j] >> li & 1 == 1)
                .min_by_key(|&j| nodes[j].count_ones())
                .unwrap();
            legs_out.push(GraphLeg { id: leg.id, order: leg.order, vertex: root + owner });
        }
        for (j, &c) in nodes.iter().enumerate().skip(1) {
            let p = root + parent(c);
            let v = root + j;
            let s = cluster_sum(legs, c);
            if s <= -k {
                edges.push(Edge { top: v, bot: p, top_order: -2 * k - s });
            } else {
                edges.push(Edge { top: p, bot: v, top_order: s });
            }
        }
    }
    Forest { nv, legs: legs_out, edges }
}

/// Ordered partitions of the vertices into `levels` nonempty levels
/// compatible with the edge orientations.
fn level_functions(f: &Forest, k: i64, levels: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut assign = vec![i64::MIN; f.nv];
    fn rec(f: &Forest, k: i64, depth: usize, levels: usize, assign: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let remaining: Vec<usize> = (0..f.nv).filter(|&v| assign[v] == i64::MIN).collect();
        if depth == levels {
            if remaining.is_empty() {
                out.push(assign.clone());
            }
            return;
        }
        if remaining.len() < levels - depth {
            return;
        }
        let free: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&v| !f.edges.iter().any(|e| e.bot == v && e.top_order + k > 0 && assign[e.top] == i64::MIN))
            .collect();
        for size in 1..=free.len() {
            for subset in free.iter().copied().combinations(size) {
                let closed = f.edges.iter().all(|e| {
                    e.top_order + k != 0 || subset.contains(&e.top) == subset.contains(&e.bot)
                });
                if !closed {
                    continue;
                }
                if depth + 1 == levels && subset.len() != remaining.len() {
                    continue;
                }
                for &v in &subset {
                    assign[v] = -(depth as i64);
                }
                rec(f, k, depth + 1, levels, assign, out);
                for &v in &subset {
                    assign[v] = i64::MIN;
                }
            }
        }
    }
    rec(f, k, 0, levels, &mut assign, &mut out);
    out
}

/// All combinatorially consistent graphs with `depth` level passages and
/// exactly `horizontal` horizontal edges.
pub fn enumerate_consistent(spec: &StratumSpec, depth: usize, horizontal: usize, bound: usize) -> Result<Vec<LevelGraph>> {
    let n = spec.n();
    if n > bound {
        return Err(Error::BoundExceeded { legs: n, bound });
    }
    let k = spec.k();
    let mut out = Vec::new();
    let per_comp: Vec<Vec<ClusterTree>> =
        spec.components().iter().map(|c| component_trees(k, &c.legs, horizontal)).collect();
    for trees in per_comp.iter().map(|v| v.iter()).multi_cartesian_product() {
        if trees.iter().map(|t| t.horizontal).sum::<usize>() != horizontal {
            continue;
        }
        let f = build_forest(k, spec, &trees);
        for levels in level_functions(&f, k, depth + 1) {
            let g = LevelGraph {
                k,
                vertices: levels.iter().map(|&level| Vertex { level, genus: 0 }).collect(),
                legs: f.legs.clone(),
                edges: f.edges.clone(),
            };
            out.push(g.canonical());
        }
    }
    out.sort_by_key(|g| g.encode());
    Ok(out)
}

/// Level graphs with `depth` passages whose level strata are all nonempty
/// and of the expected dimensions; with `include_horizontal` and depth 1 the
/// one-edge horizontal graphs are appended.
pub fn enumerate_level_graphs(spec: &StratumSpec, depth: usize, include_horizontal: bool) -> Result<Vec<LevelGraph>> {
    enumerate_level_graphs_bounded(spec, depth, include_horizontal, DEFAULT_BOUND)
}

pub fn enumerate_level_graphs_bounded(
    spec: &StratumSpec,
    depth: usize,
    include_horizontal: bool,
    bound: usize,
) -> Result<Vec<LevelGraph>> {
    let dim = spec.dimension()?;
    if depth as i64 > dim {
        if spec.n() > bound {
            return Err(Error::BoundExceeded { legs: spec.n(), bound });
        }
        return Ok(Vec::new());
    }
    let mut out: Vec<LevelGraph> = enumerate_consistent(spec, depth, 0, bound)?
        .into_iter()
        .filter(|g| {
            g.level_dimensions(spec)
                .is_some_and(|d| d.iter().sum::<i64>() == dim - depth as i64)
        })
        .collect();
    if include_horizontal && depth == 1 && spec.equations().is_empty() {
        out.extend(enumerate_consistent(spec, 0, 1, bound)?);
    }
    Ok(out)
}

/// Graphs with `depth` vertical passages and `horizontal` horizontal edges
/// whose vertical part is a nonempty boundary stratum.
pub fn enumerate_mixed(spec: &StratumSpec, depth: usize, horizontal: usize, bound: usize) -> Result<Vec<LevelGraph>> {
    if horizontal == 0 {
        return enumerate_level_graphs_bounded(spec, depth, false, bound);
    }
    let vertical: std::collections::HashSet<String> = enumerate_level_graphs_bounded(spec, depth, false, bound)?
        .iter()
        .map(|g| g.encode())
        .collect();
    Ok(enumerate_consistent(spec, depth, horizontal, bound)?
        .into_iter()
        .filter(|g| vertical.contains(&g.vertical_part().encode()))
        .collect())
}
