//! Pre-tangles and tangles: materialized orientations, validity checks,
//! exhaustive enumeration, witness-based lazy orientations and (efficient)
//! distinguishers.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph_core::{components, family::LayeredPresentation, Graph, SplitFlow};
use crate::separations::{
    enumerate_separations, leq, make_separation, separation_from_json, OrientedSeparation,
    Separation,
};
use crate::vset::VSet;

/// Vertex set that a lazily oriented tangle pulls every separation toward.
/// Uncuttable anchors may not meet a separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub vertices: VSet,
    pub cuttable: bool,
}

/// Single orientation-query contract shared by materialized pre-tangles and
/// witnesses.
pub trait Orienter {
    /// Separations of order below this bound are oriented. `usize::MAX`
    /// stands for an unbounded witness.
    fn order_bound(&self) -> usize;
    fn orient(&self, g: &Graph, s: &Separation) -> Result<OrientedSeparation>;
    /// When present, the orientation of a separation `(A, B)` is `(A, B)`
    /// exactly when the anchor lies in `B` (and off the separator if
    /// uncuttable).
    fn anchor(&self, g: &Graph) -> Result<Option<Anchor>>;
    /// Serialized form; used for deterministic tie-breaks.
    fn key(&self, g: &Graph) -> String;
}

/// Complete orientation of the separations of order below `order_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreTangle {
    order_bound: usize,
    gid: u64,
    map: BTreeMap<Separation, OrientedSeparation>,
}

/// Tangles are pre-tangles that additionally pass [`check_tangle`].
pub type Tangle = PreTangle;

impl PreTangle {
    /// Collects orientations; completeness and consistency are left to
    /// [`check_pretangle`].
    pub fn new(g: &Graph, order_bound: usize, orientations: Vec<OrientedSeparation>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for o in orientations {
            if o.gid() != g.fingerprint() {
                return Err(Error::AmbientMismatch);
            }
            if o.order() >= order_bound {
                return Err(Error::OutsideDomain { order: o.order(), bound: order_bound });
            }
            let key = o.underlying();
            if let Some(prev) = map.insert(key, o.clone()) {
                if prev != o {
                    return Err(Error::Precondition(
                        "a separation is listed with both orientations".into(),
                    ));
                }
            }
        }
        Ok(PreTangle { order_bound, gid: g.fingerprint(), map })
    }

    /// Orients every separation of order below the orienter's bound.
    pub fn materialize(g: &Graph, o: &dyn Orienter, budget: u64) -> Result<Self> {
        let k = o.order_bound();
        if k == usize::MAX {
            return Err(Error::Precondition("cannot materialize an unbounded orientation".into()));
        }
        let mut out = Vec::new();
        if k > 0 {
            for s in enumerate_separations(g, k - 1, budget)? {
                out.push(o.orient(g, &s)?);
            }
        }
        PreTangle::new(g, k, out)
    }

    pub fn order_bound(&self) -> usize {
        self.order_bound
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, s: &Separation) -> Option<&OrientedSeparation> {
        self.map.get(s)
    }

    /// Oriented members in canonical order of their underlying separations.
    pub fn orientations(&self) -> impl Iterator<Item = &OrientedSeparation> {
        self.map.values()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let items: Vec<Value> = self
            .map
            .iter()
            .map(|(s, o)| {
                let toward = if *o == s.forward() { "b" } else { "a" };
                json!({ "sep": s.to_json(g), "toward": toward })
            })
            .collect();
        json!({ "order_bound": self.order_bound, "orientation": items })
    }

    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        let malformed = |m: &str| Error::Malformed { context: "tangle".into(), message: m.into() };
        let k = v
            .get("order_bound")
            .and_then(Value::as_u64)
            .ok_or_else(|| malformed("expected natural `order_bound`"))? as usize;
        let items = v
            .get("orientation")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed("expected array `orientation`"))?;
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            let sep = separation_from_json(g, item.get("sep").ok_or_else(|| malformed("missing `sep`"))?)?
                .underlying();
            let o = match item.get("toward").and_then(Value::as_str) {
                Some("b") => sep.forward(),
                Some("a") => sep.backward(),
                _ => return Err(malformed("`toward` must be \"a\" or \"b\"")),
            };
            out.push(o);
        }
        PreTangle::new(g, k, out)
    }
}

impl Orienter for PreTangle {
    fn order_bound(&self) -> usize {
        self.order_bound
    }
    fn orient(&self, g: &Graph, s: &Separation) -> Result<OrientedSeparation> {
        if s.gid() != self.gid || g.fingerprint() != self.gid {
            return Err(Error::AmbientMismatch);
        }
        if s.order() >= self.order_bound {
            return Err(Error::OutsideDomain { order: s.order(), bound: self.order_bound });
        }
        self.map.get(s).cloned().ok_or(Error::NotOriented)
    }
    fn anchor(&self, _g: &Graph) -> Result<Option<Anchor>> {
        Ok(None)
    }
    fn key(&self, g: &Graph) -> String {
        self.to_json(g).to_string()
    }
}

/// Outcome of [`check_pretangle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreTangleReport {
    pub missing: Vec<Separation>,
    pub inconsistent: Option<(OrientedSeparation, OrientedSeparation)>,
}

impl PreTangleReport {
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
    }
    pub fn consistent(&self) -> bool {
        self.inconsistent.is_none()
    }
    pub fn valid(&self) -> bool {
        self.complete() && self.consistent()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "complete": self.complete(),
            "consistent": self.consistent(),
            "missing": self.missing.iter().map(|s| s.to_json(g)).collect::<Vec<_>>(),
            "inconsistent_pair": self.inconsistent.as_ref().map(|(x, y)| json!([x.to_json(g), y.to_json(g)])),
            "valid": self.valid(),
        })
    }
}

/// Completeness against all separations of order below the bound, and
/// consistency: no two distinct members `(A,B), (C,D)` with `(B,A) ≤ (C,D)`.
pub fn check_pretangle(g: &Graph, p: &PreTangle, budget: u64) -> Result<PreTangleReport> {
    let missing = if p.order_bound == 0 {
        Vec::new()
    } else {
        enumerate_separations(g, p.order_bound - 1, budget)?
            .into_iter()
            .filter(|s| !p.map.contains_key(s))
            .collect()
    };
    let members: Vec<&OrientedSeparation> = p.map.values().collect();
    let mut inconsistent = None;
    'outer: for x in &members {
        let rx = x.reverse();
        for y in &members {
            if x != y && leq(&rx, y)? {
                inconsistent = Some(((*x).clone(), (*y).clone()));
                break 'outer;
            }
        }
    }
    Ok(PreTangleReport { missing, inconsistent })
}

/// Outcome of [`check_tangle`]: a covering triple, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleReport {
    pub covering_triple: Option<[OrientedSeparation; 3]>,
}

impl TangleReport {
    pub fn valid(&self) -> bool {
        self.covering_triple.is_none()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "valid": self.valid(),
            "covering_triple": self.covering_triple.as_ref().map(|t| t.iter().map(|s| s.to_json(g)).collect::<Vec<_>>()),
        })
    }
}

fn edge_set_within(g: &Graph, a: &VSet) -> VSet {
    VSet::from_indices(g.edges().len(), g.edges_within(a))
}

/// Members not below another member; triples of maximal members cover
/// whenever any triple does, since `G[A]` grows with `A`.
fn maximal_members(p: &PreTangle) -> Result<Vec<&OrientedSeparation>> {
    let members: Vec<&OrientedSeparation> = p.map.values().collect();
    let mut out = Vec::new();
    for (i, x) in members.iter().enumerate() {
        let mut dominated = false;
        for (j, y) in members.iter().enumerate() {
            if i != j && leq(x, y)? && (x != y) {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push(*x);
        }
    }
    Ok(out)
}

fn covering_triple(
    g: &Graph,
    p: &PreTangle,
    covers: impl Fn(&[&VSet; 3], &[&VSet; 3]) -> bool,
) -> Result<Option<[OrientedSeparation; 3]>> {
    let maximal = maximal_members(p)?;
    let edges: Vec<VSet> = maximal.iter().map(|s| edge_set_within(g, s.a())).collect();
    for i in 0..maximal.len() {
        for j in i..maximal.len() {
            for k in j..maximal.len() {
                let vs = [maximal[i].a(), maximal[j].a(), maximal[k].a()];
                let es = [&edges[i], &edges[j], &edges[k]];
                if covers(&vs, &es) {
                    return Ok(Some([maximal[i].clone(), maximal[j].clone(), maximal[k].clone()]));
                }
            }
        }
    }
    Ok(None)
}

fn union3(s: &[&VSet; 3]) -> VSet {
    s[0].union(s[1]).union(s[2])
}

/// Tangle axiom over all triples with repetition: no three members whose
/// small-side induced subgraphs together contain every vertex and edge.
pub fn check_tangle(g: &Graph, p: &PreTangle) -> Result<TangleReport> {
    let triple = covering_triple(g, p, |vs, es| union3(vs).is_full() && union3(es).is_full())?;
    Ok(TangleReport { covering_triple: triple })
}

/// Weaker diagnostic predicate: only vertices must be covered by the
/// three small sides.
pub fn check_tangle_vertices_only(g: &Graph, p: &PreTangle) -> Result<TangleReport> {
    let triple = covering_triple(g, p, |vs, _| union3(vs).is_full())?;
    Ok(TangleReport { covering_triple: triple })
}

struct Candidate {
    sep: OrientedSeparation,
    a: VSet,
    b: VSet,
    edges: VSet,
}

struct Search {
    options: Vec<[Option<Candidate>; 2]>,
    chosen: Vec<(usize, usize)>,
    maximal: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
    results: Vec<Vec<OrientedSeparation>>,
    full_edges: usize,
}

impl Search {
    fn cand(&self, at: (usize, usize)) -> &Candidate {
        self.options[at.0][at.1].as_ref().expect("chosen option exists")
    }

    fn consistent_with_chosen(&self, x: &Candidate) -> bool {
        self.chosen.iter().all(|&at| {
            let y = self.cand(at);
            // Neither (B_x, A_x) ≤ (A_y, B_y) nor (B_y, A_y) ≤ (A_x, B_x).
            let rx_le_y = x.b.is_subset(&y.a) && y.b.is_subset(&x.a);
            let ry_le_x = y.b.is_subset(&x.a) && x.b.is_subset(&y.a);
            !rx_le_y && !ry_le_x
        })
    }

    fn dominated(&self, x: &Candidate) -> bool {
        self.maximal.iter().any(|&at| {
            let y = self.cand(at);
            x.a.is_subset(&y.a) && y.b.is_subset(&x.b)
        })
    }

    fn covers(&self, parts: [&Candidate; 3]) -> bool {
        let mut v = parts[0].a.union(&parts[1].a);
        v.union_with(&parts[2].a);
        if !v.is_full() {
            return false;
        }
        let mut e = parts[0].edges.union(&parts[1].edges);
        e.union_with(&parts[2].edges);
        e.len() == self.full_edges
    }

    fn triple_free(&self, x: &Candidate) -> bool {
        if self.dominated(x) {
            return true;
        }
        if self.covers([x, x, x]) {
            return false;
        }
        for (i, &ai) in self.maximal.iter().enumerate() {
            let y = self.cand(ai);
            if self.covers([x, x, y]) {
                return false;
            }
            for &aj in &self.maximal[i..] {
                if self.covers([x, y, self.cand(aj)]) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, idx: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if idx == self.options.len() {
            let picked = self.chosen.iter().map(|&at| self.cand(at).sep.clone()).collect();
            self.results.push(picked);
            return Ok(());
        }
        for side in 0..2 {
            let Some(x) = self.options[idx][side].as_ref() else { continue };
            if !self.consistent_with_chosen(x) || !self.triple_free(x) {
                continue;
            }
            let saved = self.maximal.clone();
            if !self.dominated(x) {
                let (xa, xb) = (x.a.clone(), x.b.clone());
                let options = &self.options;
                self.maximal.retain(|&at| {
                    let y = options[at.0][at.1].as_ref().expect("chosen option exists");
                    !(y.a.is_subset(&xa) && xb.is_subset(&y.b))
                });
                self.maximal.push((idx, side));
            }
            self.chosen.push((idx, side));
            self.run(idx + 1)?;
            self.chosen.pop();
            self.maximal = saved;
        }
        Ok(())
    }
}

/// All tangles of order `k`, by depth-first extension over the separations
/// of order below `k` (ascending order, then canonical form), pruning on
/// consistency violations and covering triples. `budget` bounds both the
/// separation enumeration and the number of search nodes.
pub fn enumerate_tangles(g: &Graph, k: usize, budget: u64) -> Result<Vec<Tangle>> {
    g.require_connected()?;
    if k == 0 {
        return Ok(vec![PreTangle::new(g, 0, Vec::new())?]);
    }
    let mut seps = enumerate_separations(g, k - 1, budget)?;
    seps.sort_by(|x, y| x.order().cmp(&y.order()).then_with(|| x.cmp(y)));
    let full = g.full_set();
    let options = seps
        .iter()
        .map(|s| {
            let make = |o: OrientedSeparation| {
                // A full small side covers G on its own. A small side of
                // fewer than k vertices excludes the orientation away from
                // it: (A, V) is then forced and G[B] ∪ G[A] = G.
                if o.a() == &full || o.b().len() < k {
                    None
                } else {
                    Some(Candidate {
                        a: o.a().clone(),
                        b: o.b().clone(),
                        edges: edge_set_within(g, o.a()),
                        sep: o,
                    })
                }
            };
            [make(s.forward()), make(s.backward())]
        })
        .collect();
    let mut search = Search {
        options,
        chosen: Vec::new(),
        maximal: Vec::new(),
        nodes: 0,
        budget,
        results: Vec::new(),
        full_edges: g.edges().len(),
    };
    search.run(0)?;
    let mut out = search
        .results
        .into_iter()
        .map(|r| PreTangle::new(g, k, r))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_cached_key(|t| t.key(g));
    Ok(out)
}

/// Lazily evaluated orientation determined by a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangleWitness {
    /// Orients every separation toward the side containing the clique.
    Clique { vertices: Vec<String>, order_bound: usize },
    /// Orients every separation toward the component holding the last
    /// window vertices of a declared ray.
    EndRegion {
        family: Value,
        layer: usize,
        spine: String,
        tail: Vec<String>,
        order_bound: Option<usize>,
    },
}

/// Whether a clique witness is strong enough for the tangle axiom or only
/// for consistency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessGrade {
    Tangle,
    PreTangle,
}

impl TangleWitness {
    /// Clique witness; `vertices` must span a clique of `g` of size at
    /// least `order_bound`.
    pub fn clique<S: AsRef<str>>(g: &Graph, vertices: &[S], order_bound: usize) -> Result<Self> {
        let set = g.vset(vertices)?;
        let idx = set.to_vec();
        for (i, &u) in idx.iter().enumerate() {
            for &v in &idx[i + 1..] {
                if !g.has_edge(u, v) {
                    return Err(Error::Precondition(format!(
                        "witness vertices `{}` and `{}` are not adjacent",
                        g.name(u),
                        g.name(v)
                    )));
                }
            }
        }
        if idx.len() < order_bound || idx.is_empty() {
            return Err(Error::Precondition(format!(
                "clique of size {} cannot orient separations of order up to {}",
                idx.len(),
                order_bound.saturating_sub(1)
            )));
        }
        Ok(TangleWitness::Clique { vertices: g.names_of(&set), order_bound })
    }

    /// End-region witness on layer `m`: the tail is the last two vertices of
    /// ray `spine` present in that layer.
    pub fn end_region(
        p: &LayeredPresentation,
        m: usize,
        spine: &str,
        order_bound: Option<usize>,
    ) -> Result<Self> {
        let g = p.layer(m)?;
        let ray = p
            .rays()
            .iter()
            .find(|r| r.label == spine)
            .ok_or_else(|| Error::Precondition(format!("no declared ray `{spine}`")))?;
        let present: Vec<&String> = ray.vertices.iter().filter(|v| g.index_of(v).is_some()).collect();
        if present.is_empty() {
            return Err(Error::NoDeclaredRays);
        }
        let tail = present[present.len().saturating_sub(2)..].iter().map(|s| s.to_string()).collect();
        Ok(TangleWitness::EndRegion {
            family: p.spec_json(),
            layer: m,
            spine: spine.to_string(),
            tail,
            order_bound,
        })
    }

    pub fn grade(&self) -> WitnessGrade {
        match self {
            TangleWitness::Clique { vertices, order_bound } if vertices.len() + 2 >= 3 * order_bound => {
                WitnessGrade::Tangle
            }
            TangleWitness::Clique { .. } => WitnessGrade::PreTangle,
            TangleWitness::EndRegion { .. } => WitnessGrade::Tangle,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TangleWitness::Clique { vertices, order_bound } => {
                json!({ "kind": "clique", "vertices": vertices, "order_bound": order_bound })
            }
            TangleWitness::EndRegion { family, layer, spine, tail, order_bound } => json!({
                "kind": "end_region",
                "presentation": family,
                "layer": layer,
                "spine": spine,
                "tail": tail,
                "order_bound": order_bound,
            }),
        }
    }

    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        let malformed = |m: &str| Error::Malformed { context: "witness".into(), message: m.into() };
        let names = |key: &str| -> Result<Vec<String>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| malformed(&format!("expected array `{key}`")))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| malformed("names must be strings")))
                .collect()
        };
        match v.get("kind").and_then(Value::as_str) {
            Some("clique") => {
                let k = v
                    .get("order_bound")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| malformed("expected natural `order_bound`"))?;
                TangleWitness::clique(g, &names("vertices")?, k as usize)
            }
            Some("end_region") => {
                let tail = names("tail")?;
                g.vset(&tail)?;
                Ok(TangleWitness::EndRegion {
                    family: v.get("presentation").cloned().unwrap_or(Value::Null),
                    layer: v.get("layer").and_then(Value::as_u64).unwrap_or(0) as usize,
                    spine: v.get("spine").and_then(Value::as_str).unwrap_or_default().to_string(),
                    tail,
                    order_bound: v.get("order_bound").and_then(Value::as_u64).map(|k| k as usize),
                })
            }
            _ => Err(malformed("`kind` must be \"clique\" or \"end_region\"")),
        }
    }
}

impl Orienter for TangleWitness {
    fn order_bound(&self) -> usize {
        match self {
            TangleWitness::Clique { order_bound, .. } => *order_bound,
            TangleWitness::EndRegion { order_bound, .. } => order_bound.unwrap_or(usize::MAX),
        }
    }

    fn orient(&self, g: &Graph, s: &Separation) -> Result<OrientedSeparation> {
        let bound = self.order_bound();
        if s.gid() != g.fingerprint() {
            return Err(Error::AmbientMismatch);
        }
        if s.order() >= bound {
            return Err(Error::OutsideDomain { order: s.order(), bound });
        }
        let (fwd, bwd) = (s.forward(), s.backward());
        match self {
            TangleWitness::Clique { vertices, .. } => {
                let k = g.vset(vertices)?;
                if k.is_subset(fwd.b()) {
                    Ok(fwd)
                } else if k.is_subset(bwd.b()) {
                    Ok(bwd)
                } else {
                    Err(Error::Precondition("witness vertices are split by the separation".into()))
                }
            }
            TangleWitness::EndRegion { tail, .. } => {
                let t = g.vset(tail)?;
                let x = s.separator();
                if let Some(v) = t.intersection(&x).first() {
                    return Err(Error::SpineMeetsSeparator { vertex: g.name(v).to_string() });
                }
                let last = t.iter().last().ok_or(Error::NoDeclaredRays)?;
                let comp = components(g, &x)
                    .into_iter()
                    .find(|c| c.contains(last))
                    .expect("a vertex off the separator lies in some component");
                if comp.is_subset(&fwd.strict_b()) {
                    Ok(fwd)
                } else {
                    Ok(bwd)
                }
            }
        }
    }

    fn anchor(&self, g: &Graph) -> Result<Option<Anchor>> {
        Ok(Some(match self {
            TangleWitness::Clique { vertices, .. } => Anchor { vertices: g.vset(vertices)?, cuttable: true },
            TangleWitness::EndRegion { tail, .. } => Anchor { vertices: g.vset(tail)?, cuttable: false },
        }))
    }

    fn key(&self, _g: &Graph) -> String {
        self.to_json().to_string()
    }
}

/// Either representation behind one type, for documents and the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTangle {
    Materialized(PreTangle),
    Witness(TangleWitness),
}

impl AnyTangle {
    pub fn to_json(&self, g: &Graph) -> Value {
        match self {
            AnyTangle::Materialized(p) => p.to_json(g),
            AnyTangle::Witness(w) => w.to_json(),
        }
    }

    /// Documents with a `kind` field are witnesses; others are materialized.
    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        if v.get("kind").is_some() {
            Ok(AnyTangle::Witness(TangleWitness::from_json(g, v)?))
        } else {
            Ok(AnyTangle::Materialized(PreTangle::from_json(g, v)?))
        }
    }

    pub fn as_orienter(&self) -> &dyn Orienter {
        match self {
            AnyTangle::Materialized(p) => p,
            AnyTangle::Witness(w) => w,
        }
    }
}

impl Orienter for AnyTangle {
    fn order_bound(&self) -> usize {
        self.as_orienter().order_bound()
    }
    fn orient(&self, g: &Graph, s: &Separation) -> Result<OrientedSeparation> {
        self.as_orienter().orient(g, s)
    }
    fn anchor(&self, g: &Graph) -> Result<Option<Anchor>> {
        self.as_orienter().anchor(g)
    }
    fn key(&self, g: &Graph) -> String {
        self.as_orienter().key(g)
    }
}

/// `p` and `q` contain opposite orientations of `s`.
pub fn distinguishes(g: &Graph, s: &Separation, p: &dyn Orienter, q: &dyn Orienter) -> Result<bool> {
    Ok(p.orient(g, s)? != q.orient(g, s)?)
}

/// Minimum-order separation distinguishing `p` and `q`, least in canonical
/// form among those of minimum order; `None` if they are indistinguishable.
pub fn efficient_distinguisher(
    g: &Graph,
    p: &dyn Orienter,
    q: &dyn Orienter,
    budget: u64,
) -> Result<Option<Separation>> {
    Ok(min_order_distinguishers(g, p, q, budget)?.into_iter().next())
}

/// Every separation of minimum order distinguishing `p` and `q`, in
/// canonical order; empty if they are indistinguishable.
pub fn min_order_distinguishers(
    g: &Graph,
    p: &dyn Orienter,
    q: &dyn Orienter,
    budget: u64,
) -> Result<Vec<Separation>> {
    let bound = p.order_bound().min(q.order_bound());
    if bound == 0 {
        return Ok(Vec::new());
    }
    if let (Some(ap), Some(aq)) = (p.anchor(g)?, q.anchor(g)?) {
        return anchored_distinguishers(g, &ap, &aq, bound, budget);
    }
    let max_order = (bound - 1).min(g.n());
    let mut best: Vec<Separation> = Vec::new();
    for s in enumerate_separations(g, max_order, budget)? {
        if best.first().is_some_and(|b| s.order() > b.order()) {
            continue;
        }
        if distinguishes(g, &s, p, q)? {
            if best.first().is_some_and(|b| s.order() < b.order()) {
                best.clear();
            }
            best.push(s);
        }
    }
    best.sort();
    Ok(best)
}

/// Distinguishers of anchored orientations are exactly the separations
/// with `p`'s anchor in `B` and `q`'s anchor in `A`, i.e. vertex cuts
/// between the anchors.
fn anchored_distinguishers(
    g: &Graph,
    ap: &Anchor,
    aq: &Anchor,
    bound: usize,
    budget: u64,
) -> Result<Vec<Separation>> {
    let mut fixed = g.empty_set();
    for a in [ap, aq] {
        if !a.cuttable {
            fixed.union_with(&a.vertices);
        }
    }
    if fixed.intersects(&ap.vertices.intersection(&aq.vertices)) {
        return Ok(Vec::new());
    }
    let flow = SplitFlow::solve(g, &aq.vertices, &ap.vertices, &fixed);
    if flow.value() >= bound || flow.value() > g.n() {
        return Ok(Vec::new());
    }
    let mut out = flow
        .min_cut_separations(budget)?
        .into_iter()
        .map(|(a, b)| make_separation(g, &a, &b).map(|s| s.underlying()))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// A distinguishable pair `(i, j)`, `i < j`, with its efficient distinguisher.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedPair {
    pub i: usize,
    pub j: usize,
    pub order: usize,
    pub separation: Separation,
}

/// All distinguishable pairs, ascending by efficient order, then by index.
pub fn distinguishable_pairs(g: &Graph, tangles: &[&dyn Orienter], budget: u64) -> Result<Vec<DistinguishedPair>> {
    let mut out = Vec::new();
    for i in 0..tangles.len() {
        for j in i + 1..tangles.len() {
            if let Some(s) = efficient_distinguisher(g, tangles[i], tangles[j], budget)? {
                out.push(DistinguishedPair { i, j, order: s.order(), separation: s });
            }
        }
    }
    out.sort_by_key(|d| (d.order, d.i, d.j));
    Ok(out)
}
