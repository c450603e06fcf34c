//! Generalized genus-zero strata of k-differentials.

use crate::cyclotomic::{Cyc, CycField, CyclotomicMatrix};
use crate::error::{Error, Result};
use crate::rat::{gcd, parse, show, Q};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type LegId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub id: LegId,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub legs: Vec<Leg>,
}

impl Component {
    pub fn min_id(&self) -> LegId {
        self.legs.iter().map(|l| l.id).min().unwrap_or(0)
    }
}

/// A linear relation `sum c_i r_i = 0` among residues, where `r_i` is the
/// residue at the distinguished preimage of leg `i` on the canonical cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueEquation {
    pub terms: BTreeMap<LegId, Cyc>,
}

/// User-facing residue condition: each part lists legs together with the
/// index of the chosen preimage, i.e. a part of a tau-invariant partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ResidueCondition {
    pub parts: Vec<Vec<(LegId, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSpec {
    k: i64,
    components: Vec<Component>,
    equations: Vec<ResidueEquation>,
}

/// Validates a connected or disconnected signature with legs numbered
/// consecutively from 1 in input order.
pub fn validate(k: i64, components: &[Vec<i64>]) -> Result<StratumSpec> {
    let mut next = 1;
    let comps = components
        .iter()
        .map(|c| {
            c.iter()
                .map(|&order| {
                    let leg = Leg { id: next, order };
                    next += 1;
                    leg
                })
                .collect()
        })
        .collect();
    StratumSpec::new(k, comps, Vec::new())
}

impl StratumSpec {
    pub fn new(k: i64, components: Vec<Vec<Leg>>, equations: Vec<ResidueEquation>) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid(format!("k must be positive, got {k}")));
        }
        let mut seen = BTreeSet::new();
        let mut comps = Vec::with_capacity(components.len());
        for (ci, mut legs) in components.into_iter().enumerate() {
            if legs.len() < 3 {
                return Err(Error::Unstable { component: ci, legs: legs.len() });
            }
            let sum: i64 = legs.iter().map(|l| l.order).sum();
            if sum != -2 * k {
                return Err(Error::DegreeMismatch { component: ci, sum, expected: -2 * k });
            }
            for l in &legs {
                if !seen.insert(l.id) {
                    return Err(Error::Invalid(format!("leg {} appears twice", l.id)));
                }
            }
            legs.sort();
            comps.push(Component { legs });
        }
        if comps.is_empty() {
            return Err(Error::Invalid("no components".into()));
        }
        comps.sort_by_key(|c| c.min_id());
        let mut spec = StratumSpec { k, components: comps, equations: Vec::new() };
        let field = spec.field();
        for eq in &equations {
            for (id, c) in &eq.terms {
                if spec.leg(*id).is_none() {
                    return Err(Error::Invalid(format!("residue condition names unknown leg {id}")));
                }
                if c.0.len() != field.degree() {
                    return Err(Error::Invalid("coefficient in wrong field".into()));
                }
            }
        }
        spec.equations = equations
            .into_iter()
            .map(|mut e| {
                e.terms.retain(|id, c| !c.is_zero() && spec.is_residue_coord(*id));
                e
            })
            .filter(|e| !e.terms.is_empty())
            .collect();
        Ok(spec)
    }

    /// Attaches a residue condition given as parts of a partition.
    pub fn with_condition(&self, cond: &ResidueCondition) -> Result<Self> {
        let field = self.field();
        let mut eqs = self.equations.clone();
        for part in &cond.parts {
            let mut terms: BTreeMap<LegId, Cyc> = BTreeMap::new();
            for &(id, j) in part {
                let Some((_, m)) = self.leg(id) else {
                    return Err(Error::Invalid(format!("residue condition names unknown leg {id}")));
                };
                if m >= -self.k {
                    return Err(Error::Invalid(format!(
                        "leg {id} of order {m} has cover order >= -1 and cannot carry a condition"
                    )));
                }
                let c = terms.entry(id).or_insert_with(|| field.zero());
                *c = field.add(c, &field.zeta_pow(j));
            }
            eqs.push(ResidueEquation { terms });
        }
        let comps = self.components.iter().map(|c| c.legs.clone()).collect();
        StratumSpec::new(self.k, comps, eqs)
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn equations(&self) -> &[ResidueEquation] {
        &self.equations
    }

    pub fn field(&self) -> Arc<CycField> {
        CycField::get(self.k as u64)
    }

    pub fn n(&self) -> usize {
        self.components.iter().map(|c| c.legs.len()).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn legs(&self) -> impl Iterator<Item = (usize, &Leg)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.legs.iter().map(move |l| (ci, l)))
    }

    pub fn leg_ids(&self) -> Vec<LegId> {
        let mut v: Vec<LegId> = self.legs().map(|(_, l)| l.id).collect();
        v.sort();
        v
    }

    /// Component index and order of a leg.
    pub fn leg(&self, id: LegId) -> Option<(usize, i64)> {
        self.legs().find(|(_, l)| l.id == id).map(|(c, l)| (c, l.order))
    }

    pub fn order(&self, id: LegId) -> i64 {
        self.leg(id).map(|(_, m)| m).expect("unknown leg")
    }

    /// Number of preimages of a leg on the canonical cover.
    pub fn preimages(&self, id: LegId) -> i64 {
        gcd(self.k, self.order(id))
    }

    /// Order of the abelian differential at each preimage of the leg.
    pub fn cover_order(&self, id: LegId) -> i64 {
        let m = self.order(id);
        let g = gcd(self.k, m);
        (self.k + m) / g - 1
    }

    /// Legs whose preimages can carry a nonzero residue: poles fixed by the
    /// deck transformation, i.e. k divides m and m <= -k.
    pub fn is_residue_coord(&self, id: LegId) -> bool {
        let m = self.order(id);
        m <= -self.k && m % self.k == 0
    }

    pub fn is_simple_cover_pole(&self, id: LegId) -> bool {
        self.order(id) == -self.k
    }

    pub fn component_fiber(&self, ci: usize) -> i64 {
        self.components[ci].legs.iter().fold(self.k, |g, l| gcd(g, l.order))
    }

    /// g0 = gcd(k, m_1, ..., m_n) of a connected spec.
    pub fn power_datum(&self) -> i64 {
        self.legs().fold(self.k, |g, (_, l)| gcd(g, l.order))
    }

    pub fn residue_coords(&self) -> Vec<LegId> {
        self.leg_ids().into_iter().filter(|&id| self.is_residue_coord(id)).collect()
    }

    fn residue_theorem_rows(&self, coords: &[LegId]) -> Vec<Vec<Cyc>> {
        let f = self.field();
        let mut rows = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            if self.component_fiber(ci) != self.k {
                continue;
            }
            let mut row = vec![f.zero(); coords.len()];
            let mut any = false;
            for l in &comp.legs {
                if let Some(pos) = coords.iter().position(|&c| c == l.id) {
                    row[pos] = f.one();
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
        rows
    }

    fn equation_rows(&self, coords: &[LegId], eqs: &[ResidueEquation]) -> Vec<Vec<Cyc>> {
        let f = self.field();
        eqs.iter()
            .map(|e| {
                let mut row = vec![f.zero(); coords.len()];
                for (id, c) in &e.terms {
                    let pos = coords.iter().position(|x| x == id).expect("coordinate");
                    row[pos] = c.clone();
                }
                row
            })
            .collect()
    }

    fn matrix(&self, coords: &[LegId], rt: bool, eqs: &[ResidueEquation]) -> CyclotomicMatrix {
        let mut m = CyclotomicMatrix::new(self.field(), coords.len());
        if rt {
            for r in self.residue_theorem_rows(coords) {
                m.push_row(r);
            }
        }
        for r in self.equation_rows(coords, eqs) {
            m.push_row(r);
        }
        m
    }

    /// Rank of the residue theorem alone and together with the conditions.
    pub fn residue_ranks(&self, eqs: &[ResidueEquation]) -> (usize, usize) {
        let coords = self.residue_coords();
        if coords.is_empty() {
            return (0, 0);
        }
        (self.matrix(&coords, true, &[]).rank(), self.matrix(&coords, true, eqs).rank())
    }

    /// dim R - dim (R cap S) for the attached conditions.
    pub fn residue_rank_drop(&self) -> Result<usize> {
        let coords = self.residue_coords();
        if coords.is_empty() {
            return Ok(0);
        }
        let full = self.matrix(&coords, true, &self.equations);
        let rank_full = full.rank();
        let rank_rt = self.matrix(&coords, true, &[]).rank();
        let f = self.field();
        for (pos, &id) in coords.iter().enumerate() {
            if !self.is_simple_cover_pole(id) {
                continue;
            }
            let mut probe = full.clone();
            let mut row = vec![f.zero(); coords.len()];
            row[pos] = f.one();
            probe.push_row(row);
            if probe.rank() == rank_full {
                return Err(Error::EmptyIntersection);
            }
        }
        Ok(rank_full - rank_rt)
    }

    /// Projectivized dimension.
    pub fn dimension(&self) -> Result<i64> {
        let base: i64 = self.components.iter().map(|c| c.legs.len() as i64 - 2).sum();
        let d = base - self.residue_rank_drop()? as i64 - 1;
        if d < 0 {
            return Err(Error::EmptyStratum(d));
        }
        Ok(d)
    }

    /// Drops conditions that are implied by the residue theorem and the
    /// previously kept conditions.
    pub fn reduced(&self) -> StratumSpec {
        let coords = self.residue_coords();
        let mut kept: Vec<ResidueEquation> = Vec::new();
        let mut rank = if coords.is_empty() { 0 } else { self.matrix(&coords, true, &[]).rank() };
        for e in &self.equations {
            let mut trial = kept.clone();
            trial.push(e.clone());
            let r = self.matrix(&coords, true, &trial).rank();
            if r > rank {
                rank = r;
                kept = trial;
            }
        }
        StratumSpec { k: self.k, components: self.components.clone(), equations: kept }
    }

    /// The same stratum with conditions replaced by a canonical basis of the
    /// residue subspace, so equal subspaces give equal specs.
    pub fn canonical_form(&self) -> StratumSpec {
        if self.equations.is_empty() {
            return self.clone();
        }
        let coords = self.residue_coords();
        let mut m = self.matrix(&coords, true, &self.equations);
        m.rref();
        let candidates: Vec<ResidueEquation> = m
            .rows()
            .iter()
            .map(|row| ResidueEquation {
                terms: coords.iter().copied().zip(row.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect(),
            })
            .collect();
        let base = StratumSpec { k: self.k, components: self.components.clone(), equations: candidates };
        base.reduced()
    }

    pub fn without_equation(&self, idx: usize) -> StratumSpec {
        let mut s = self.clone();
        s.equations.remove(idx);
        s
    }

    pub fn with_equations(&self, eqs: Vec<ResidueEquation>) -> Result<StratumSpec> {
        let comps = self.components.iter().map(|c| c.legs.clone()).collect();
        StratumSpec::new(self.k, comps, eqs)
    }

    /// Canonical row basis of the subspace cut out by the residue theorem
    /// and the conditions, used to identify equal subspaces.
    pub fn condition_key(&self) -> String {
        if self.equations.is_empty() {
            return String::new();
        }
        let coords = self.residue_coords();
        let mut m = self.matrix(&coords, true, &self.equations);
        m.rref();
        let mut out = String::new();
        for row in m.rows() {
            out.push('[');
            for (id, c) in coords.iter().zip(row) {
                if !c.is_zero() {
                    out.push_str(&format!("{id}:{}", cyc_text(c)));
                    out.push(' ');
                }
            }
            out.push(']');
        }
        out
    }

    /// Canonical text form used in caches and reports.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Key identifying the stratum up to equality of its residue subspace.
    pub fn memo_key(&self) -> String {
        let mut s = format!("{};", self.k);
        for c in &self.components {
            s.push('(');
            for l in &c.legs {
                s.push_str(&format!("{}@{},", l.order, l.id));
            }
            s.push(')');
        }
        s.push_str(&self.condition_key());
        s
    }

    fn consecutive(&self) -> bool {
        let mut expected = 1;
        for c in &self.components {
            for l in &c.legs {
                if l.id != expected {
                    return false;
                }
                expected += 1;
            }
        }
        true
    }
}

fn cyc_text(c: &Cyc) -> String {
    let mut coeffs: Vec<String> = c.0.iter().map(show).collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|x| x == "0") {
        coeffs.pop();
    }
    coeffs.join("|")
}

/// Expresses an equation as a part `{leg^j,...}` when every coefficient is a
/// root of unity.
fn equation_as_part(f: &CycField, e: &ResidueEquation) -> Option<Vec<(LegId, i64)>> {
    let mut out = Vec::new();
    for (id, c) in &e.terms {
        let j = (0..f.order() as i64).find(|&j| f.zeta_pow(j) == *c)?;
        out.push((*id, j));
    }
    Some(out)
}

impl fmt::Display for StratumSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain = self.consecutive();
        write!(fm, "{}", self.k)?;
        for (i, c) in self.components.iter().enumerate() {
            let legs: Vec<String> = c
                .legs
                .iter()
                .map(|l| if plain { l.order.to_string() } else { format!("{}@{}", l.order, l.id) })
                .collect();
            if self.components.len() == 1 {
                write!(fm, ";({})", legs.join(","))?;
            } else {
                write!(fm, ";c{}:({})", i + 1, legs.join(","))?;
            }
        }
        if !self.equations.is_empty() {
            let f = self.field();
            let mut parts = Vec::new();
            for e in &self.equations {
                match equation_as_part(&f, e) {
                    Some(p) => parts.push(format!(
                        "{{{}}}",
                        p.iter()
                            .map(|(id, j)| if *j == 0 { id.to_string() } else { format!("{id}^{j}") })
                            .collect::<Vec<_>>()
                            .join(",")
                    )),
                    None => parts.push(format!(
                        "[{}]",
                        e.terms
                            .iter()
                            .map(|(id, c)| format!("{}:{}", id, cyc_text(c)))
                            .collect::<Vec<_>>()
                            .join(",")
                    )),
                }
            }
            write!(fm, ";R:{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(start, "expected integer"))
    }

    fn rational(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || matches!(self.s[self.pos], b'-' | b'/')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(parse)
            .ok_or_else(|| Error::parse(start, "expected rational"))
    }

    fn done(&mut self) -> bool {
        self.peek().is_none()
    }
}

impl std::str::FromStr for StratumSpec {
    type Err = Error;

    /// Parses `k;(m,...);name:(m@id,...);R:{{1,2},{3,4^1}}`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        let k = cur.int()?;
        let mut comps: Vec<Vec<(i64, Option<LegId>)>> = Vec::new();
        let mut cond = ResidueCondition::default();
        let mut general: Vec<Vec<(LegId, Vec<Q>)>> = Vec::new();
        while cur.eat(b';') {
            match cur.peek() {
                Some(b'(') => comps.push(parse_component(&mut cur)?),
                Some(b'R') => {
                    cur.pos += 1;
                    cur.expect(b':')?;
                    cur.expect(b'{')?;
                    if !cur.eat(b'}') {
                        loop {
                            if cur.eat(b'[') {
                                general.push(parse_general(&mut cur)?);
                            } else {
                                cur.expect(b'{')?;
                                cond.parts.push(parse_part(&mut cur)?);
                            }
                            if cur.eat(b'}') {
                                break;
                            }
                            cur.expect(b',')?;
                        }
                    }
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    while cur.peek().is_some_and(|c| c != b':') {
                        cur.pos += 1;
                    }
                    cur.expect(b':')?;
                    comps.push(parse_component(&mut cur)?);
                }
                _ => return Err(Error::parse(cur.pos, "expected component or residue condition")),
            }
        }
        if !cur.done() {
            return Err(Error::parse(cur.pos, "trailing input"));
        }
        if comps.is_empty() {
            return Err(Error::parse(cur.pos, "no components"));
        }
        let explicit = comps.iter().flatten().filter(|(_, id)| id.is_some()).count();
        let total = comps.iter().map(|c| c.len()).sum::<usize>();
        if explicit != 0 && explicit != total {
            return Err(Error::parse(0, "either all or no legs carry @id labels"));
        }
        let mut next = 1;
        let legs = comps
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|(order, id)| {
                        let id = id.unwrap_or_else(|| {
                            let v = next;
                            next += 1;
                            v
                        });
                        Leg { id, order }
                    })
                    .collect()
            })
            .collect();
        let spec = StratumSpec::new(k, legs, Vec::new())?;
        let field = spec.field();
        let mut eqs = Vec::new();
        for g in general {
            let mut terms = BTreeMap::new();
            for (id, coeffs) in g {
                if spec.leg(id).is_none() {
                    return Err(Error::Invalid(format!("residue condition names unknown leg {id}")));
                }
                terms.insert(id, field.reduce(coeffs));
            }
            eqs.push(ResidueEquation { terms });
        }
        let spec = if eqs.is_empty() { spec } else { spec.with_equations(eqs)? };
        if cond.parts.is_empty() {
            Ok(spec)
        } else {
            spec.with_condition(&cond)
        }
    }
}

fn parse_part(cur: &mut Cursor<'_>) -> Result<Vec<(LegId, i64)>> {
    let mut part = Vec::new();
    if cur.eat(b'}') {
        return Ok(part);
    }
    loop {
        let id = cur.int()?;
        let j = if cur.eat(b'^') { cur.int()? } else { 0 };
        if id <= 0 {
            return Err(Error::parse(cur.pos, "leg ids are positive"));
        }
        part.push((id as LegId, j));
        if cur.eat(b'}') {
            return Ok(part);
        }
        cur.expect(b',')?;
    }
}

/// Parses `id:c0|c1|...,id:...]` with coefficients of powers of zeta.
fn parse_general(cur: &mut Cursor<'_>) -> Result<Vec<(LegId, Vec<Q>)>> {
    let mut out = Vec::new();
    if cur.eat(b']') {
        return Ok(out);
    }
    loop {
        let id = cur.int()?;
        if id <= 0 {
            return Err(Error::parse(cur.pos, "leg ids are positive"));
        }
        cur.expect(b':')?;
        let mut coeffs = vec![cur.rational()?];
        while cur.eat(b'|') {
            coeffs.push(cur.rational()?);
        }
        out.push((id as LegId, coeffs));
        if cur.eat(b']') {
            return Ok(out);
        }
        cur.expect(b',')?;
    }
}

fn parse_component(cur: &mut Cursor<'_>) -> Result<Vec<(i64, Option<LegId>)>> {
    cur.expect(b'(')?;
    let mut legs = Vec::new();
    if cur.eat(b')') {
        return Ok(legs);
    }
    loop {
        let m = cur.int()?;
        let id = if cur.eat(b'@') {
            let v = cur.int()?;
            if v <= 0 {
                return Err(Error::parse(cur.pos, "leg ids are positive"));
            }
            Some(v as LegId)
        } else {
            None
        };
        legs.push((m, id));
        if cur.eat(b')') {
            break;
        }
        cur.expect(b',')?;
    }
    Ok(legs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        for s in ["3;(-1,-1,-1,-1,-2)", "1;c1:(0,-1,-1);c2:(1,-1,-2)", "2;c1:(-4,1,-1);c2:(-4,1,-1);R:{{1,4}}"] {
            let spec: StratumSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = "3;(-1,-1,x)".parse::<StratumSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 9, .. }), "{err:?}");
    }
}
