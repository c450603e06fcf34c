//! Rewriting rules and products of tautological classes.

use super::expr::{Decoration, TautExpression, Term};
use super::Evaluator;
use crate::cover::GraphCover;
use crate::error::{Error, Result};
use crate::graph::{End, LevelGraph};
use crate::rat::{q, qf, Q};
use crate::stratum::{LegId, StratumSpec};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A factor to multiply an expression with.
#[derive(Clone, Debug)]
pub enum Factor {
    Zeta,
    Psi(LegId),
    Divisor(GraphCover),
}

/// The class of a boundary divisor.
pub fn divisor_class(spec: &StratumSpec, cover: &GraphCover) -> TautExpression {
    let mut e = TautExpression::zero(spec);
    e.add_term(Term::boundary(cover.clone(), Decoration::default()), Q::one());
    e
}

/// zeta = (m_i + k) psi_i - sum k l-hat [D_pi] over two-level graphs with
/// leg i on the lower level.
pub fn zeta_rewrite(ev: &Evaluator, spec: &StratumSpec, leg: LegId) -> Result<TautExpression> {
    let k = spec.k();
    let mut out = TautExpression::psi(spec, leg).scale(&q(spec.order(leg) + k));
    for g in ev.graphs(spec, 1, false)?.iter() {
        if g.leg_level(leg) != Some(-1) {
            continue;
        }
        for cover in ev.covers(g) {
            let ell = cover.ell_hat().1;
            out.add_term(Term::boundary(cover, Decoration::default()), -q(k * ell));
        }
    }
    Ok(out)
}

/// The class of the stratum with equation `idx` imposed, as an expression
/// on the stratum without it. Returns the unit class when dropping the
/// equation does not change the residue space.
pub fn residue_rewrite(ev: &Evaluator, spec: &StratumSpec, idx: usize) -> Result<TautExpression> {
    let relaxed = spec.without_equation(idx);
    if spec.residue_ranks(spec.equations()).1 == relaxed.residue_ranks(relaxed.equations()).1 {
        return Ok(TautExpression::one(&relaxed));
    }
    let dropped = &spec.equations()[idx];
    let k = spec.k();
    let mut out = TautExpression::zeta(&relaxed).scale(&-qf(1, k));
    for g in ev.graphs(&relaxed, 1, false)?.iter() {
        let all_below = dropped.terms.keys().all(|id| g.leg_level(*id) == Some(-1));
        let with = g.level_spec(spec, 0)?;
        let without = g.level_spec(&relaxed, 0)?;
        let top_unchanged = with.residue_ranks(with.equations()).1 == without.residue_ranks(without.equations()).1;
        if !(all_below || top_unchanged) {
            continue;
        }
        for cover in ev.covers(g) {
            let ell = cover.ell_hat().1;
            out.add_term(Term::boundary(cover, Decoration::default()), -q(ell));
        }
    }
    Ok(out)
}

/// First Chern class of the normal bundle of a divisor, as an expression
/// supported on the divisor.
pub fn normal_bundle_c1(ev: &Evaluator, spec: &StratumSpec, cover: &GraphCover) -> Result<TautExpression> {
    let g = &cover.base;
    let mut out = TautExpression::zero(spec);
    if g.depth() == 0 && g.edges.len() == 1 {
        add_horizontal_normal(&mut out, cover, 0, &Decoration::default(), &Q::one());
        return Ok(out);
    }
    if g.depth() != 1 || g.has_horizontal() {
        return Err(Error::Invalid("not a boundary divisor".into()));
    }
    add_vertical_normal(ev, spec, &mut out, cover, 1, &Decoration::default(), &Q::one())?;
    Ok(out)
}

fn add_horizontal_normal(out: &mut TautExpression, cover: &GraphCover, e: usize, deco: &Decoration, c: &Q) {
    for end in [End::Top, End::Bot] {
        let mut d = deco.clone();
        d.add_psi(cover.base.half_edge_id(e, end), 1);
        out.add_term(Term::boundary(cover.clone(), d), -c.clone());
    }
}

/// c1(N) at passage j of a graph:
/// (1/l_j)(-zeta^[j-1]/k - L^[j-1] + zeta^[j]/k).
fn add_vertical_normal(
    ev: &Evaluator,
    spec: &StratumSpec,
    out: &mut TautExpression,
    cover: &GraphCover,
    j: usize,
    deco: &Decoration,
    c: &Q,
) -> Result<()> {
    let k = spec.k();
    let ell = q(cover.passage_ells()[j - 1]);
    let mut upper = deco.clone();
    upper.add_zeta(j - 1, 1);
    out.add_term(Term::boundary(cover.clone(), upper), -c / (&ell * q(k)));
    let mut lower = deco.clone();
    lower.add_zeta(j, 1);
    out.add_term(Term::boundary(cover.clone(), lower), c / (&ell * q(k)));
    for (finer, s) in vertical_degenerations(ev, spec, &cover.base)? {
        if s != j {
            continue;
        }
        let moved = shift_levels(deco, s)?;
        for fc in ev.covers(&finer) {
            let ell_new = q(fc.passage_ells()[s - 1]);
            out.add_term(Term::boundary(fc, moved.clone()), -c * ell_new / &ell);
        }
    }
    Ok(())
}

fn all_horizontal(g: &LevelGraph) -> BTreeSet<usize> {
    (0..g.edges.len()).filter(|&e| g.is_horizontal_edge(e)).collect()
}

fn same(a: &LevelGraph, b: &LevelGraph) -> bool {
    a.canonical().encode() == b.canonical().encode()
}

/// Graphs with one more passage, with the index of the new passage, that
/// undegenerate to `g`.
fn vertical_degenerations(ev: &Evaluator, spec: &StratumSpec, g: &LevelGraph) -> Result<Vec<(LevelGraph, usize)>> {
    let h = all_horizontal(g).len();
    let depth = g.depth() + 1;
    let mut out = Vec::new();
    for finer in ev.mixed_graphs(spec, depth, h)?.iter() {
        let hor = all_horizontal(finer);
        for s in 1..=depth {
            let keep: BTreeSet<usize> = (1..=depth).filter(|&p| p != s).collect();
            if same(&finer.undegenerate_with(&keep, &hor), g) {
                out.push((finer.clone(), s));
            }
        }
    }
    Ok(out)
}

/// Graphs with one more horizontal edge, with that edge, that undegenerate
/// to `g`.
fn horizontal_degenerations(ev: &Evaluator, spec: &StratumSpec, g: &LevelGraph) -> Result<Vec<(LevelGraph, usize)>> {
    let h = all_horizontal(g).len() + 1;
    let depth = g.depth();
    let keep: BTreeSet<usize> = (1..=depth).collect();
    let mut out = Vec::new();
    for finer in ev.mixed_graphs(spec, depth, h)?.iter() {
        let hor = all_horizontal(finer);
        for &e in &hor {
            let mut rest = hor.clone();
            rest.remove(&e);
            if same(&finer.undegenerate_with(&keep, &rest), g) {
                out.push((finer.clone(), e));
            }
        }
    }
    Ok(out)
}

/// Moves decorations to a graph where the level above passage `s` was split.
fn shift_levels(deco: &Decoration, s: usize) -> Result<Decoration> {
    let zeta = deco.zeta.iter().map(|(&l, &e)| (if l < s { l } else { l + 1 }, e)).collect();
    Ok(Decoration { zeta, psi: deco.psi.clone() })
}

fn check_legs_only(spec: &StratumSpec, deco: &Decoration) -> Result<()> {
    if deco.psi.keys().all(|id| spec.leg(*id).is_some()) {
        Ok(())
    } else {
        Err(Error::Unsupported("half-edge psi classes in a product with a divisor".into()))
    }
}

impl TautExpression {
    /// Product with a single factor.
    pub fn multiply(&self, ev: &Evaluator, factor: &Factor) -> Result<TautExpression> {
        let spec = self.spec().clone();
        let dim = spec.dimension()?;
        let mut out = TautExpression::zero(&spec);
        for (term, c) in self.terms() {
            match factor {
                Factor::Zeta => {
                    let mut d = term.deco.clone();
                    d.add_zeta(0, 1);
                    out.add_term(Term { cover: term.cover.clone(), deco: d }, c.clone());
                }
                Factor::Psi(i) => {
                    let mut d = term.deco.clone();
                    d.add_psi(*i, 1);
                    out.add_term(Term { cover: term.cover.clone(), deco: d }, c.clone());
                }
                Factor::Divisor(p) => multiply_divisor(ev, &spec, &mut out, term, c, p)?,
            }
        }
        if let Some(d) = out.degree() {
            if d > dim {
                return Err(Error::DegreeOverflow { degree: d, dim });
            }
        }
        Ok(out)
    }

    /// Product of two expressions on the same stratum whose second factor
    /// consists of undecorated classes of the stratum or of divisors.
    pub fn multiply_expr(&self, ev: &Evaluator, other: &TautExpression) -> Result<TautExpression> {
        let mut out = TautExpression::zero(self.spec());
        for (t, c) in other.terms() {
            let mut part = self.scale(c);
            if let Some(cover) = &t.cover {
                part = part.multiply(ev, &Factor::Divisor(cover.clone()))?;
            }
            for (&l, &e) in &t.deco.zeta {
                if l != 0 && t.cover.is_none() {
                    return Err(Error::Invalid("level zeta on the unit class".into()));
                }
                if t.cover.is_some() {
                    return Err(Error::Unsupported("decorated divisor as a factor".into()));
                }
                for _ in 0..e {
                    part = part.multiply(ev, &Factor::Zeta)?;
                }
            }
            for (&i, &e) in &t.deco.psi {
                if t.cover.is_some() {
                    return Err(Error::Unsupported("decorated divisor as a factor".into()));
                }
                for _ in 0..e {
                    part = part.multiply(ev, &Factor::Psi(i))?;
                }
            }
            out.add(&part);
        }
        Ok(out)
    }

    /// Exact integral of a top-degree expression.
    pub fn integrate(&self, ev: &Evaluator) -> Result<Q> {
        let spec = self.spec().clone();
        let dim = match spec.dimension() {
            Ok(d) => d,
            Err(Error::EmptyIntersection) | Err(Error::EmptyStratum(_)) => return Ok(Q::zero()),
            Err(e) => return Err(e),
        };
        let mut total = Q::zero();
        for (term, c) in self.terms() {
            let degree = term.degree();
            if degree != dim {
                return Err(Error::IntegrandDegree { degree, dim });
            }
            total += c * integrate_term(ev, &spec, term)?;
        }
        Ok(total)
    }
}

fn integrate_term(ev: &Evaluator, spec: &StratumSpec, term: &Term) -> Result<Q> {
    let Some(cover) = &term.cover else {
        if term.deco.zeta.keys().any(|&l| l != 0) {
            return Err(Error::Invalid("level zeta on the unit class".into()));
        }
        let a = term.deco.zeta.get(&0).copied().unwrap_or(0);
        return ev.eval(spec, a, &term.deco.psi);
    };
    let g = &cover.base;
    let top_zeta = term.deco.zeta.get(&0).copied().unwrap_or(0);
    let top_horizontal = g.edges.iter().any(|e| g.vertices[e.top].level == 0 && g.vertices[e.bot].level == 0);
    if top_horizontal && top_zeta > 0 {
        if g.depth() > 0 || term.deco.zeta.len() > 1 {
            return Err(Error::Unsupported("zeta on a horizontal level of a multi-level graph".into()));
        }
        let leg = spec.leg_ids()[0];
        let mut e = zeta_rewrite(ev, spec, leg)?.multiply(ev, &Factor::Divisor(cover.clone()))?;
        for _ in 1..top_zeta {
            e = e.multiply(ev, &Factor::Zeta)?;
        }
        for (&i, &p) in &term.deco.psi {
            for _ in 0..p {
                e = e.multiply(ev, &Factor::Psi(i))?;
            }
        }
        return e.integrate(ev);
    }
    let value = ev.split(spec, g, &term.deco.zeta, &term.deco.psi, 0)?;
    if value.is_zero() {
        return Ok(value);
    }
    Ok(ev.prefactor(cover) * value)
}

fn multiply_divisor(
    ev: &Evaluator,
    spec: &StratumSpec,
    out: &mut TautExpression,
    term: &Term,
    c: &Q,
    p: &GraphCover,
) -> Result<()> {
    let pg = &p.base;
    let Some(cover) = &term.cover else {
        if term.deco.zeta.keys().any(|&l| l != 0) {
            return Err(Error::Invalid("level zeta on the unit class".into()));
        }
        out.add_term(Term::boundary(p.clone(), term.deco.clone()), c.clone());
        return Ok(());
    };
    check_legs_only(spec, &term.deco)?;
    let g = &cover.base;
    let hor = all_horizontal(g);
    let none = BTreeSet::new();
    if pg.depth() == 1 && !pg.has_horizontal() {
        for (finer, s) in vertical_degenerations(ev, spec, g)? {
            let only: BTreeSet<usize> = [s].into_iter().collect();
            if same(&finer.undegenerate_with(&only, &none), pg) {
                let moved = shift_levels(&term.deco, s)?;
                for fc in ev.covers(&finer) {
                    out.add_term(Term::boundary(fc, moved.clone()), c.clone());
                }
            }
        }
        for j in 1..=g.depth() {
            let only: BTreeSet<usize> = [j].into_iter().collect();
            if same(&g.undegenerate_with(&only, &none), pg) {
                add_vertical_normal(ev, spec, out, cover, j, &term.deco, c)?;
            }
        }
        return Ok(());
    }
    if pg.depth() == 0 && pg.edges.len() == 1 {
        for (finer, e) in horizontal_degenerations(ev, spec, g)? {
            let only: BTreeSet<usize> = [e].into_iter().collect();
            if same(&finer.undegenerate_with(&none, &only), pg) {
                for fc in ev.covers(&finer) {
                    out.add_term(Term::boundary(fc, term.deco.clone()), c.clone());
                }
            }
        }
        for &e in &hor {
            let only: BTreeSet<usize> = [e].into_iter().collect();
            if same(&g.undegenerate_with(&none, &only), pg) {
                add_horizontal_normal(out, cover, e, &term.deco, c);
            }
        }
        return Ok(());
    }
    Err(Error::Invalid("factor is not a boundary divisor".into()))
}
