//! Window-scale evidence about limits of increasing sequences: relation of
//! a fixed separation to the limit, interlaced sequences with tangle
//! assignments, their construction and thinning, pseudo-tightness and the
//! growth of limit separators. Every verdict is finite-window evidence.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::chains::LayerChain;
use crate::error::{Error, Result};
use crate::graph_core::family::{CliqueChain, LayeredPresentation};
use crate::graph_core::{tight_components, Graph};
use crate::separations::{
    cross_by_corners, is_tight, leq, lt, supremum, NestedSet, OrientedSeparation,
    Separation, SeparationSequence,
};
use crate::tangles::{efficient_distinguisher, Orienter, TangleWitness};
use crate::tree_of_tangles::{exhaustiveness_evidence, Exhaustiveness};
use crate::vset::VSet;

/// Relation of a fixed separation `cd` to the supremum `(A, B)` of a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitRelation {
    /// `cd ≤ (A, B)`.
    Below,
    /// Reverse of `cd` is `≤ (A, B)`.
    ReverseBelow,
    /// `(A, B) ≤ cd`.
    Above,
    Cross,
}

impl LimitRelation {
    pub fn label(self) -> &'static str {
        match self {
            LimitRelation::Below => "cd<=limit",
            LimitRelation::ReverseBelow => "reverse(cd)<=limit",
            LimitRelation::Above => "limit<=cd",
            LimitRelation::Cross => "cross",
        }
    }
}

/// One relation that holds against the supremum, with the least window
/// index from which the matching per-item relation holds for every later
/// item (`None`: window exhausted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEvidence {
    pub relation: LimitRelation,
    pub stable_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitRelationReport {
    pub supremum: OrientedSeparation,
    pub holding: Vec<RelationEvidence>,
}

impl LimitRelationReport {
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "supremum": self.supremum.to_json(g),
            "relations": self.holding.iter().map(|r| json!({
                "relation": r.relation.label(),
                "stable_from": r.stable_from,
                "window_exhausted": r.stable_from.is_none(),
            })).collect::<Vec<_>>(),
            "evidence_only": true,
        })
    }
}

fn stable_from(items: &[OrientedSeparation], holds: impl Fn(&OrientedSeparation) -> Result<bool>) -> Result<Option<usize>> {
    let mut from = None;
    for (i, s) in items.iter().enumerate().rev() {
        if holds(s)? {
            from = Some(i);
        } else {
            break;
        }
    }
    Ok(from)
}

/// Which of `cd ≤ sup`, `reverse(cd) ≤ sup`, `sup ≤ cd` and crossing hold,
/// each with the index from which the per-item relation is stable.
pub fn classify_vs_limit(g: &Graph, seq: &SeparationSequence, cd: &OrientedSeparation) -> Result<LimitRelationReport> {
    let sup = supremum(g, seq)?;
    let items = seq.items();
    let rev = cd.reverse();
    let mut holding = Vec::new();
    if leq(cd, &sup)? {
        holding.push(RelationEvidence { relation: LimitRelation::Below, stable_from: stable_from(items, |s| leq(cd, s))? });
    }
    if leq(&rev, &sup)? {
        holding.push(RelationEvidence {
            relation: LimitRelation::ReverseBelow,
            stable_from: stable_from(items, |s| leq(&rev, s))?,
        });
    }
    if leq(&sup, cd)? {
        holding.push(RelationEvidence { relation: LimitRelation::Above, stable_from: stable_from(items, |s| leq(s, cd))? });
    }
    let c = cd.underlying();
    if cross_by_corners(&sup.underlying(), &c)? {
        holding.push(RelationEvidence {
            relation: LimitRelation::Cross,
            stable_from: stable_from(items, |s| cross_by_corners(&s.underlying(), &c))?,
        });
    }
    Ok(LimitRelationReport { supremum: sup, holding })
}

/// A window `s'_0 < … < s'_{L-1}` with tangles `P_0, …, P_L` given as
/// indices into a pool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacedPair {
    pub sequence: SeparationSequence,
    pub tangles: Vec<usize>,
}

impl InterlacedPair {
    pub fn new(sequence: SeparationSequence, tangles: Vec<usize>) -> Result<Self> {
        if tangles.len() != sequence.len() + 1 {
            return Err(Error::Precondition(format!(
                "{} tangles for a window of {} separations",
                tangles.len(),
                sequence.len()
            )));
        }
        Ok(InterlacedPair { sequence, tangles })
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "sequence": self.sequence.to_json(g), "tangles": self.tangles })
    }

    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        let malformed = |m: &str| Error::Malformed { context: "interlaced pair".into(), message: m.into() };
        let seq = SeparationSequence::from_json(g, v.get("sequence").ok_or_else(|| malformed("missing `sequence`"))?)?;
        let tangles = v
            .get("tangles")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed("expected array `tangles`"))?
            .iter()
            .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| malformed("tangle references are pool indices")))
            .collect::<Result<Vec<_>>>()?;
        InterlacedPair::new(seq, tangles)
    }
}

/// Efficient orders between pool members, computed on demand.
struct Efficiency<'a> {
    g: &'a Graph,
    pool: &'a [&'a dyn Orienter],
    budget: u64,
    cache: HashMap<(usize, usize), Option<usize>>,
}

impl<'a> Efficiency<'a> {
    fn new(g: &'a Graph, pool: &'a [&'a dyn Orienter], budget: u64) -> Self {
        Efficiency { g, pool, budget, cache: HashMap::new() }
    }

    fn order(&mut self, i: usize, j: usize) -> Result<Option<usize>> {
        let key = (i.min(j), i.max(j));
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let v = efficient_distinguisher(self.g, self.pool[key.0], self.pool[key.1], self.budget)?.map(|s| s.order());
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Orientation of `s` in pool member `i`; `None` when `i` does not
    /// orient it.
    fn orient(&self, i: usize, s: &Separation) -> Result<Option<OrientedSeparation>> {
        match self.pool[i].orient(self.g, s) {
            Ok(o) => Ok(Some(o)),
            Err(Error::OutsideDomain { .. } | Error::NotOriented | Error::SpineMeetsSeparator { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn contains(&self, i: usize, s: &OrientedSeparation) -> Result<bool> {
        Ok(self.orient(i, &s.underlying())?.as_ref() == Some(s))
    }

    /// `s` distinguishes `i` and `j` and has their efficient order.
    fn efficiently_distinguishes(&mut self, s: &Separation, i: usize, j: usize) -> Result<bool> {
        let (a, b) = (self.orient(i, s)?, self.orient(j, s)?);
        match (a, b) {
            (Some(x), Some(y)) if x != y => Ok(self.order(i, j)? == Some(s.order())),
            _ => Ok(false),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterlaceFailure {
    /// IM1 fails at `index`: `reverse(s'_i) ∉ P_i` (`upper == false`) or
    /// `s'_i ∉ P_{i+1}` (`upper == true`).
    Orientation { index: usize, upper: bool },
    /// IM2 fails for tangles `i < j` at the minimal-order separation `sep`.
    Efficiency { i: usize, j: usize, sep: Separation },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlaceReport {
    pub im1: Option<InterlaceFailure>,
    pub im2: Option<InterlaceFailure>,
}

impl InterlaceReport {
    pub fn passes(&self) -> bool {
        self.im1.is_none() && self.im2.is_none()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        let w = |f: &Option<InterlaceFailure>| match f {
            None => Value::Null,
            Some(InterlaceFailure::Orientation { index, upper }) => {
                json!({ "index": index, "side": if *upper { "upper" } else { "lower" } })
            }
            Some(InterlaceFailure::Efficiency { i, j, sep }) => json!({ "i": i, "j": j, "sep": sep.to_json(g) }),
        };
        json!({
            "im1": self.im1.is_none(),
            "im1_witness": w(&self.im1),
            "im2": self.im2.is_none(),
            "im2_witness": w(&self.im2),
            "passes": self.passes(),
            "evidence_only": true,
        })
    }
}

/// IM1 pointwise and IM2 over all `i < j` in the window.
pub fn check_interlaced_pair(
    g: &Graph,
    ip: &InterlacedPair,
    pool: &[&dyn Orienter],
    budget: u64,
) -> Result<InterlaceReport> {
    if let Some(&bad) = ip.tangles.iter().find(|&&t| t >= pool.len()) {
        return Err(Error::Precondition(format!("tangle reference {bad} is outside the pool")));
    }
    let mut eff = Efficiency::new(g, pool, budget);
    let items = ip.sequence.items();
    let p = &ip.tangles;
    let mut im1 = None;
    for (i, s) in items.iter().enumerate() {
        if !eff.contains(p[i], &s.reverse())? {
            im1 = Some(InterlaceFailure::Orientation { index: i, upper: false });
            break;
        }
        if !eff.contains(p[i + 1], s)? {
            im1 = Some(InterlaceFailure::Orientation { index: i, upper: true });
            break;
        }
    }
    let mut im2 = None;
    'outer: for i in 0..items.len() {
        for j in i + 1..=items.len() {
            let window = &items[i..j];
            let least = window.iter().map(OrientedSeparation::order).min().expect("non-empty");
            for s in window.iter().filter(|s| s.order() == least) {
                let u = s.underlying();
                if !eff.efficiently_distinguishes(&u, p[i], p[j])? {
                    im2 = Some(InterlaceFailure::Efficiency { i, j, sep: u });
                    break 'outer;
                }
            }
        }
    }
    Ok(InterlaceReport { im1, im2 })
}

/// After thinning: `s'_i` efficiently distinguishes `P_i` from every later
/// `P_j`. Returns the first failing `(i, j)`.
pub fn check_distinguishes_later(
    g: &Graph,
    ip: &InterlacedPair,
    pool: &[&dyn Orienter],
    budget: u64,
) -> Result<Option<(usize, usize)>> {
    let mut eff = Efficiency::new(g, pool, budget);
    for (i, s) in ip.sequence.items().iter().enumerate() {
        let u = s.underlying();
        for j in i + 1..ip.tangles.len() {
            if !eff.efficiently_distinguishes(&u, ip.tangles[i], ip.tangles[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Pool indices `(O, P, Q)`.
pub type Witness = (usize, usize, usize);

fn strong_witnesses(eff: &mut Efficiency, s: &OrientedSeparation, t: &OrientedSeparation) -> Result<Vec<Witness>> {
    let n = eff.pool.len();
    let (su, tu) = (s.underlying(), t.underlying());
    let mut out = Vec::new();
    for p in 0..n {
        if !eff.contains(p, s)? || !eff.contains(p, &t.reverse())? {
            continue;
        }
        let mut os = Vec::new();
        for o in 0..n {
            if eff.contains(o, &s.reverse())? && eff.efficiently_distinguishes(&su, o, p)? {
                os.push(o);
            }
        }
        if os.is_empty() {
            continue;
        }
        for q in 0..n {
            if eff.contains(q, t)? && eff.efficiently_distinguishes(&tu, p, q)? {
                for &o in &os {
                    out.push((o, p, q));
                }
            }
        }
    }
    Ok(out)
}

fn least_witness(g: &Graph, pool: &[&dyn Orienter], ws: Vec<Witness>) -> Option<Witness> {
    let keys: Vec<String> = pool.iter().map(|t| t.key(g)).collect();
    ws.into_iter().min_by(|a, b| {
        (&keys[a.1], &keys[a.0], &keys[a.2]).cmp(&(&keys[b.1], &keys[b.0], &keys[b.2]))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongRelevanceReport {
    pub witness: Option<Witness>,
}

impl StrongRelevanceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "strongly_relevant": self.witness.is_some(),
            "witness": self.witness.map(|(o, p, q)| json!({ "o": o, "p": p, "q": q })),
        })
    }
}

/// Whether `s < t` is strongly relevant: `s` efficiently distinguishes some
/// `O` and `P` with `s ∈ P`, and `t` efficiently distinguishes `P` and some
/// `Q` with `reverse(t) ∈ P`. The least witness by serialized `(P, O, Q)`
/// is returned.
pub fn check_strongly_relevant(
    g: &Graph,
    s: &OrientedSeparation,
    t: &OrientedSeparation,
    pool: &[&dyn Orienter],
    budget: u64,
) -> Result<StrongRelevanceReport> {
    if !lt(s, t)? {
        return Err(Error::Precondition("strong relevance needs s < t".into()));
    }
    let mut eff = Efficiency::new(g, pool, budget);
    let ws = strong_witnesses(&mut eff, s, t)?;
    Ok(StrongRelevanceReport { witness: least_witness(g, pool, ws) })
}

/// Pool pairs `(P, Q)` that `s` efficiently distinguishes with
/// `reverse(s) ∈ P` and `s ∈ Q`, least by serialized form.
fn relevance_witness(g: &Graph, eff: &mut Efficiency, s: &OrientedSeparation) -> Result<Option<(usize, usize)>> {
    let n = eff.pool.len();
    let su = s.underlying();
    let keys: Vec<String> = eff.pool.iter().map(|t| t.key(g)).collect();
    let mut best: Option<(usize, usize)> = None;
    for p in 0..n {
        if !eff.contains(p, &s.reverse())? {
            continue;
        }
        for q in 0..n {
            if eff.contains(q, s)? && eff.efficiently_distinguishes(&su, p, q)? {
                let better = best.is_none_or(|(bp, bq)| (&keys[p], &keys[q]) < (&keys[bp], &keys[bq]));
                if better {
                    best = Some((p, q));
                }
            }
        }
    }
    Ok(best)
}

/// Interlaced sequence containing `seq` as a subsequence, with a tangle
/// assignment from the pool.
///
/// Between consecutive `s_l < s_{l+1}`, with relevance witnesses
/// `(P_l, Q_l)` and `(P_{l+1}, Q_{l+1})`: when `s_l` does not efficiently
/// distinguish `P_l` and `P_{l+1}`, the canonically least member of `n`
/// that does is inserted in its orientation in `P_{l+1}`. Tangles are then
/// assigned from the least strong-relevance witnesses of consecutive pairs.
pub fn construct_interlaced(
    g: &Graph,
    n: &NestedSet,
    seq: &SeparationSequence,
    pool: &[&dyn Orienter],
    budget: u64,
) -> Result<InterlacedPair> {
    let items = seq.items();
    for (i, s) in items.iter().enumerate() {
        if !n.contains(&s.underlying()) {
            return Err(Error::Precondition(format!("item {i} is not a member of the nested set")));
        }
    }
    for w in items.windows(2) {
        if w[0].order() >= w[1].order() {
            return Err(Error::Precondition("item orders must be strictly increasing".into()));
        }
    }
    let mut eff = Efficiency::new(g, pool, budget);
    let mut rel = Vec::with_capacity(items.len());
    for (i, s) in items.iter().enumerate() {
        let w = relevance_witness(g, &mut eff, s)?
            .ok_or_else(|| Error::Precondition(format!("item {i} efficiently distinguishes no pool pair")))?;
        rel.push(w);
    }
    let Some(first) = items.first() else {
        return Err(Error::EmptySequence);
    };
    let mut out = vec![first.clone()];
    for l in 0..items.len().saturating_sub(1) {
        let (s, next) = (&items[l], &items[l + 1]);
        let (pl, pl1) = (rel[l].0, rel[l + 1].0);
        if !eff.efficiently_distinguishes(&s.underlying(), pl, pl1)? {
            let mut inserted = None;
            for r in n.members() {
                if !eff.efficiently_distinguishes(r, pl, pl1)? {
                    continue;
                }
                let Some(ro) = eff.orient(pl1, r)? else { continue };
                if lt(s, &ro)? && lt(&ro, next)? {
                    inserted = Some(ro);
                    break;
                }
            }
            let r = inserted.ok_or_else(|| {
                Error::Precondition(format!(
                    "no member of the nested set efficiently distinguishes the witnesses of items {l} and {}",
                    l + 1
                ))
            })?;
            out.push(r);
        }
        out.push(next.clone());
    }
    let sequence = SeparationSequence::new(out)?;
    let tangles = assign_tangles(g, &mut eff, &sequence, rel[0])?;
    InterlacedPair::new(sequence, tangles)
}

/// `P_0 = O_1`, `P_{i+1}` the middle of the witness for `s_i < s_{i+1}`,
/// and the last tangle the `Q` of the final witness. A single separation
/// takes its relevance pair.
fn assign_tangles(
    g: &Graph,
    eff: &mut Efficiency,
    seq: &SeparationSequence,
    single: (usize, usize),
) -> Result<Vec<usize>> {
    let items = seq.items();
    if items.len() == 1 {
        return Ok(vec![single.0, single.1]);
    }
    let mut tangles = Vec::with_capacity(items.len() + 1);
    let mut last_q = 0;
    for (i, w) in items.windows(2).enumerate() {
        let ws = strong_witnesses(eff, &w[0], &w[1])?;
        let (o, p, q) = least_witness(g, eff.pool, ws)
            .ok_or_else(|| Error::Precondition(format!("pair {i} < {} is not strongly relevant", i + 1)))?;
        if i == 0 {
            tangles.push(o);
        }
        tangles.push(p);
        last_q = q;
    }
    tangles.push(last_q);
    Ok(tangles)
}

/// Whether orders beyond the window are known to exceed every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthHypothesis {
    /// Declared by the caller from family knowledge.
    Declared,
    /// Not certifiable from the window alone.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinOut {
    pub pair: InterlacedPair,
    pub selected: Vec<usize>,
    pub hypothesis: GrowthHypothesis,
}

impl ThinOut {
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "pair": self.pair.to_json(g),
            "selected": self.selected,
            "growth_hypothesis": match self.hypothesis {
                GrowthHypothesis::Declared => "declared",
                GrowthHypothesis::Inconclusive => "inconclusive",
            },
            "evidence_only": true,
        })
    }
}

/// Indices `j(0) < j(1) < …`: `j(0)` is the last index of minimal order,
/// `j(i)` the last index after `j(i-1)` attaining the least later order.
pub fn thin_out_indices(orders: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < orders.len() {
        let least = *orders[start..].iter().min().expect("non-empty");
        let j = (start..orders.len()).rev().find(|&k| orders[k] == least).expect("attained");
        out.push(j);
        start = j + 1;
    }
    out
}

/// Subsequence of strictly increasing orders with tangles `P_{j(i)}` and the
/// tangle following the last selected item.
pub fn thin_out(ip: &InterlacedPair, declared_growth: bool) -> Result<ThinOut> {
    let items = ip.sequence.items();
    if items.is_empty() {
        return Err(Error::WindowTooShort { completed: Vec::new() });
    }
    let orders: Vec<usize> = items.iter().map(OrientedSeparation::order).collect();
    let selected = thin_out_indices(&orders);
    let seq = SeparationSequence::new(selected.iter().map(|&j| items[j].clone()).collect())?;
    let mut tangles: Vec<usize> = selected.iter().map(|&j| ip.tangles[j]).collect();
    tangles.push(ip.tangles[selected[selected.len() - 1] + 1]);
    Ok(ThinOut {
        pair: InterlacedPair::new(seq, tangles)?,
        selected,
        hypothesis: if declared_growth { GrowthHypothesis::Declared } else { GrowthHypothesis::Inconclusive },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexStatus {
    Pass,
    Fail,
    /// Enters the separators too late in the window, or lies on the
    /// truncation boundary.
    Interference,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexEvidence {
    pub vertex: String,
    /// Window indices where the vertex lies in the separator and has a
    /// neighbour in a tight component on the `B` side.
    pub count: usize,
    /// First index from which the vertex stays in the separator.
    pub entry: usize,
    pub status: VertexStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoTightReport {
    pub threshold: usize,
    pub window: usize,
    pub vertices: Vec<VertexEvidence>,
    /// `N(B \ A) = A ∩ B` for the supremum, restricted to interior vertices.
    pub neighbourhood_equal: bool,
}

impl PseudoTightReport {
    pub fn passes(&self) -> bool {
        self.neighbourhood_equal && self.vertices.iter().all(|v| v.status != VertexStatus::Fail)
    }
    pub fn failures(&self) -> Vec<&str> {
        self.vertices.iter().filter(|v| v.status == VertexStatus::Fail).map(|v| v.vertex.as_str()).collect()
    }
    pub fn to_json(&self) -> Value {
        json!({
            "threshold": self.threshold,
            "window": self.window,
            "neighbourhood_equal": self.neighbourhood_equal,
            "vertices": self.vertices.iter().map(|v| json!({
                "vertex": v.vertex,
                "count": v.count,
                "entry": v.entry,
                "status": match v.status {
                    VertexStatus::Pass => "pass",
                    VertexStatus::Fail => "fail",
                    VertexStatus::Interference => "boundary-interference",
                },
            })).collect::<Vec<_>>(),
            "passes": self.passes(),
            "evidence_only": true,
        })
    }
}

/// Window form of pseudo-tightness. A vertex `x` of the supremum's
/// separator passes when, for at least `threshold` indices (default: half
/// the window, rounded up), `x` lies in `A_i ∩ B_i` next to a tight
/// component of `g - (A_i ∩ B_i)` inside `B_i \ A_i`. Vertices on
/// `boundary`, or entering the separators after index `window - threshold`,
/// are reported as interference rather than failures.
pub fn pseudo_tight_check(
    g: &Graph,
    seq: &SeparationSequence,
    boundary: &VSet,
    threshold: Option<usize>,
) -> Result<PseudoTightReport> {
    let sup = supremum(g, seq)?;
    if sup.strict_b().is_empty() {
        return Err(Error::Precondition("the supremum has an empty strict B side".into()));
    }
    let items = seq.items();
    let window = items.len();
    let threshold = threshold.unwrap_or(window.div_ceil(2)).max(1);
    let hits: Vec<VSet> = items
        .iter()
        .map(|s| {
            let x = s.separator();
            let sb = s.strict_b();
            let mut near = g.empty_set();
            for k in tight_components(g, &x).into_iter().filter(|k| k.is_subset(&sb)) {
                near.union_with(&g.neighbourhood(&k));
            }
            near.intersection(&x)
        })
        .collect();
    let sep = sup.separator();
    let mut vertices = Vec::new();
    for v in sep.iter() {
        let count = hits.iter().filter(|h| h.contains(v)).count();
        let entry = (0..window).rev().take_while(|&i| items[i].separator().contains(v)).last().unwrap_or(window);
        let status = if boundary.contains(v) {
            VertexStatus::Interference
        } else if count >= threshold {
            VertexStatus::Pass
        } else if entry + threshold > window {
            VertexStatus::Interference
        } else {
            VertexStatus::Fail
        };
        vertices.push(VertexEvidence { vertex: g.name(v).to_string(), count, entry, status });
    }
    let interior = boundary.complement();
    let nb = g.neighbourhood(&sup.strict_b());
    let neighbourhood_equal = nb.intersection(&interior) == sep.intersection(&interior);
    Ok(PseudoTightReport { threshold, window, vertices, neighbourhood_equal })
}

/// Layers a separator vertex needs to settle: vertices of `G_m` entering
/// the supremum's separator near the top are not yet part of the limit.
pub const SETTLE_MARGIN: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub rows: Vec<(usize, usize)>,
    /// Per row, the settled separator vertices by name.
    pub prefixes: Vec<Vec<String>>,
}

impl GrowthTable {
    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].1 <= w[1].1)
    }
    /// Strictly increasing across the last three rows.
    pub fn unbounded_evidence(&self) -> bool {
        let k = self.rows.len();
        k >= 3 && self.rows[k - 3].1 < self.rows[k - 2].1 && self.rows[k - 2].1 < self.rows[k - 1].1
    }
    pub fn to_csv(&self) -> String {
        let mut out = String::from("horizon,separator_size\n");
        for (m, s) in &self.rows {
            out.push_str(&format!("{m},{s}\n"));
        }
        out
    }
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().zip(&self.prefixes).map(|((m, s), x)| json!({
                "horizon": m,
                "separator_size": s,
                "settled": x,
            })).collect::<Vec<_>>(),
            "monotone": self.monotone(),
            "unbounded_evidence": self.unbounded_evidence(),
            "evidence_only": true,
        })
    }
}

/// For each chain horizon `m ≥ SETTLE_MARGIN`, the separator of the window
/// supremum on `G_m` restricted to `G_{m - SETTLE_MARGIN}`. Requires a
/// tight chain with a non-exhaustive-witness verdict.
pub fn limit_separator_growth(p: &LayeredPresentation, chain: &LayerChain) -> Result<GrowthTable> {
    let verdict = exhaustiveness_evidence(p, chain)?;
    if verdict.verdict != Exhaustiveness::NonExhaustiveWitness {
        return Err(Error::Precondition(format!(
            "separator growth needs a non-exhaustive witness, found {}",
            verdict.verdict.label()
        )));
    }
    for (m, seq) in chain.layers() {
        let g = p.layer(*m)?;
        if let Some(i) = seq.items().iter().position(|s| s.is_proper() && !is_tight(g, s)) {
            return Err(Error::Precondition(format!("item {i} is not tight on layer {m}")));
        }
    }
    let mut rows = Vec::new();
    let mut prefixes = Vec::new();
    for (m, seq) in chain.layers().iter().filter(|(m, _)| *m >= SETTLE_MARGIN) {
        let g = p.layer(*m)?;
        let settled = p.layer(m - SETTLE_MARGIN)?;
        let sep = settled.transfer(g, &supremum(g, seq)?.separator());
        rows.push((*m, sep.len()));
        prefixes.push(settled.names_of(&sep));
    }
    Ok(GrowthTable { rows, prefixes })
}

/// Clique witnesses `P_0, …, P_m` for the cliques of `clique_chain` on
/// layer `m`. `P_n` takes the tangle-grade bound `⌊(c_n + 2) / 3⌋` when that
/// still exceeds `|S_n|`, and the full clique size otherwise, so that every
/// `s_n` is oriented by its neighbours.
pub fn clique_chain_witnesses(p: &LayeredPresentation, m: usize) -> Result<Vec<TangleWitness>> {
    let cc = CliqueChain::new(p)?;
    let g = p.layer(m)?;
    (0..=m)
        .map(|n| {
            let clique = cc.clique(n);
            let graded = clique.len().div_ceil(3);
            let bound = if graded > cc.separator(n).len() { graded } else { clique.len() };
            TangleWitness::clique(g, &clique, bound)
        })
        .collect()
}

/// Number of leading clique witnesses whose efficient distinguishers on
/// `G_h` match the untruncated graph. Rays end at `w^h`, so separating
/// `K_i` from `K_{i+1}` can cut the rays through their `h - i` later
/// attachments instead of the `i` earlier ones; that is only not cheaper
/// while `2i <= h`.
pub fn clique_chain_faithful_levels(h: usize) -> usize {
    (h / 2 + 2).min(h + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{standard_chain, standard_sequence};
    use crate::graph_core::family::{generate_family, FamilyParams};
    use crate::separations::{make_separation, separation_by_names};

    #[test]
    fn thin_out_selection() {
        assert_eq!(thin_out_indices(&[2, 2, 5, 5, 9]), vec![1, 3, 4]);
        assert_eq!(thin_out_indices(&[1, 2, 3]), vec![0, 1, 2]);
        assert_eq!(thin_out_indices(&[3, 1, 2]), vec![1, 2]);
    }

    #[test]
    fn supremum_relates_to_itself() {
        let p = generate_family("ray", &FamilyParams { horizon: 5, sizes: None, width: None }).unwrap();
        let g = p.layer(5).unwrap();
        let seq = standard_sequence(&p, 5).unwrap();
        let sup = supremum(g, &seq).unwrap();
        let r = classify_vs_limit(g, &seq, &sup).unwrap();
        let below = r.holding.iter().find(|e| e.relation == LimitRelation::Below).unwrap();
        let above = r.holding.iter().find(|e| e.relation == LimitRelation::Above).unwrap();
        assert_eq!(above.stable_from, Some(0));
        assert_eq!(below.stable_from, Some(5));
    }

    #[test]
    fn column_cut_crosses_row_cut_limit() {
        let p = generate_family("grid", &FamilyParams { horizon: 4, sizes: None, width: Some(3) }).unwrap();
        let g = p.layer(4).unwrap();
        let seq = standard_sequence(&p, 4).unwrap();
        let left: Vec<String> = (0..=4).flat_map(|y| [format!("g:0:{y}"), format!("g:1:{y}")]).collect();
        let right: Vec<String> = (0..=4).flat_map(|y| [format!("g:1:{y}"), format!("g:2:{y}")]).collect();
        let cd = separation_by_names(g, &left, &right).unwrap();
        let r = classify_vs_limit(g, &seq, &cd).unwrap();
        assert_eq!(r.holding.len(), 1);
        assert_eq!(r.holding[0].relation, LimitRelation::Cross);
        assert!(r.holding[0].stable_from.is_some());
    }

    #[test]
    fn ray_cuts_are_pseudo_tight() {
        let p = generate_family("ray", &FamilyParams { horizon: 6, sizes: None, width: None }).unwrap();
        let g = p.layer(6).unwrap();
        let items: Vec<_> = standard_sequence(&p, 6).unwrap().items()[1..5].to_vec();
        let seq = SeparationSequence::new(items).unwrap();
        let r = pseudo_tight_check(g, &seq, p.boundary(6).unwrap(), None).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.vertices.len(), 1);
    }

    #[test]
    fn hub_without_tight_side_fails() {
        // A path with a hub; cuts keep the hub and two path vertices, so the
        // B side component misses the hub-free part of the separator.
        let n = 8;
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).chain(["h".to_string()]).collect();
        let mut edges: Vec<(String, String)> = (1..n).map(|i| (format!("x{}", i - 1), format!("x{i}"))).collect();
        edges.extend((0..n).map(|i| ("h".to_string(), format!("x{i}"))));
        let g = Graph::new(names, edges).unwrap();
        let items = (0..4)
            .map(|i| {
                let mut a: Vec<String> = (0..=i + 1).map(|j| format!("x{j}")).collect();
                a.push("h".into());
                let mut b: Vec<String> = (i..n).map(|j| format!("x{j}")).collect();
                b.push("h".into());
                make_separation(&g, &g.vset(&a).unwrap(), &g.vset(&b).unwrap()).unwrap()
            })
            .collect();
        let seq = SeparationSequence::new(items).unwrap();
        let r = pseudo_tight_check(&g, &seq, &g.empty_set(), None).unwrap();
        assert!(r.failures().contains(&"h"), "{r:?}");
        assert!(!r.passes());
    }

    #[test]
    fn growth_needs_non_exhaustive_chain() {
        let p = generate_family("ray", &FamilyParams { horizon: 5, sizes: None, width: None }).unwrap();
        let chain = standard_chain(&p, &[1, 2, 3, 4, 5]).unwrap();
        assert!(matches!(limit_separator_growth(&p, &chain), Err(Error::Precondition(_))));
    }
    fn clique_chain(h: usize) -> LayeredPresentation {
        generate_family("clique_chain", &FamilyParams { horizon: h, sizes: Some(vec![8, 12, 20, 36]), width: None })
            .unwrap()
    }

    #[test]
    fn first_cut_sits_below_the_rest() {
        let p = clique_chain(4);
        let g = p.layer(4).unwrap();
        let all = standard_sequence(&p, 4).unwrap();
        let rest = SeparationSequence::new(all.items()[1..].to_vec()).unwrap();
        let r = classify_vs_limit(g, &rest, &all.items()[0]).unwrap();
        let below = r.holding.iter().find(|e| e.relation == LimitRelation::Below).unwrap();
        assert_eq!(below.stable_from, Some(0));
    }

    /// `s_0 < s_1 < s_2` on layer 4. On the top layer the rays meet the last
    /// clique only through one attachment vertex, which makes a cheaper cut.
    fn window(p: &LayeredPresentation) -> SeparationSequence {
        SeparationSequence::new(standard_sequence(p, 4).unwrap().items()[..3].to_vec()).unwrap()
    }

    #[test]
    fn clique_witnesses_interlace_the_cuts() {
        let p = clique_chain(4);
        let g = p.layer(4).unwrap();
        let ws = clique_chain_witnesses(&p, 4).unwrap();
        let pool: Vec<&dyn Orienter> = ws[..4].iter().map(|w| w as &dyn Orienter).collect();
        let seq = window(&p);
        assert_eq!(seq.orders(), vec![2, 5, 10]);
        let ip = InterlacedPair::new(seq.clone(), vec![0, 1, 2, 3]).unwrap();
        let r = check_interlaced_pair(g, &ip, &pool, 1 << 20).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(check_distinguishes_later(g, &ip, &pool, 1 << 20).unwrap(), None);

        let swapped = InterlacedPair::new(seq, vec![0, 2, 1, 3]).unwrap();
        let r = check_interlaced_pair(g, &swapped, &pool, 1 << 20).unwrap();
        assert_eq!(r.im1, Some(InterlaceFailure::Orientation { index: 1, upper: false }));

        let back = InterlacedPair::from_json(g, &ip.to_json(g)).unwrap();
        assert_eq!(back, ip);
    }

    #[test]
    fn strong_relevance_needs_the_middle_clique() {
        let p = clique_chain(4);
        let g = p.layer(4).unwrap();
        let ws = clique_chain_witnesses(&p, 4).unwrap();
        let seq = window(&p);
        let (s0, s1) = (&seq.items()[0], &seq.items()[1]);
        let full: Vec<&dyn Orienter> = ws[..3].iter().map(|w| w as &dyn Orienter).collect();
        let r = check_strongly_relevant(g, s0, s1, &full, 1 << 20).unwrap();
        assert_eq!(r.witness, Some((0, 1, 2)));
        let gap: Vec<&dyn Orienter> = vec![&ws[0], &ws[2]];
        assert_eq!(check_strongly_relevant(g, s0, s1, &gap, 1 << 20).unwrap().witness, None);
        assert!(matches!(check_strongly_relevant(g, s1, s0, &full, 1 << 20), Err(Error::Precondition(_))));
    }

    #[test]
    fn skipping_a_clique_needs_no_filler() {
        let p = clique_chain(4);
        let g = p.layer(4).unwrap();
        let ws = clique_chain_witnesses(&p, 4).unwrap();
        let pool: Vec<&dyn Orienter> = ws[..4].iter().map(|w| w as &dyn Orienter).collect();
        let seq = window(&p);
        let n = NestedSet::new(seq.items().iter().map(|s| s.underlying()).collect()).unwrap();
        let sparse = SeparationSequence::new(vec![seq.items()[0].clone(), seq.items()[2].clone()]).unwrap();
        let ip = construct_interlaced(g, &n, &sparse, &pool, 1 << 20).unwrap();
        // s_0 already separates K_0 from K_2 at its efficient order.
        assert_eq!(ip.sequence, sparse);
        assert_eq!(ip.tangles, vec![0, 2, 3]);
        assert!(check_interlaced_pair(g, &ip, &pool, 1 << 20).unwrap().passes());
        let t = thin_out(&ip, true).unwrap();
        assert_eq!(t.selected, vec![0, 1]);
        assert_eq!(t.hypothesis, GrowthHypothesis::Declared);
    }

    /// Cliques `A, B, C, D` of size 6 glued along 2, 1 and 4 vertices, with
    /// the three cuts between consecutive cliques.
    fn glued_cliques() -> (Graph, Vec<TangleWitness>, [OrientedSeparation; 3]) {
        let v = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let cliques = [
            v(&["a0", "a1", "a2", "a3", "a4", "a5"]),
            v(&["a4", "a5", "b0", "b1", "b2", "b3"]),
            v(&["b3", "c0", "c1", "c2", "c3", "c4"]),
            v(&["c1", "c2", "c3", "c4", "d0", "d1"]),
        ];
        let mut names: Vec<String> = cliques.concat();
        names.sort();
        names.dedup();
        let mut edges = Vec::new();
        for k in &cliques {
            for (i, x) in k.iter().enumerate() {
                for y in &k[i + 1..] {
                    edges.push((x.clone(), y.clone()));
                }
            }
        }
        edges.sort();
        edges.dedup();
        let g = Graph::new(names, edges).unwrap();
        let cut = |upto: usize| {
            let a = g.vset(&cliques[..=upto].concat()).unwrap();
            let b = g.vset(&cliques[upto + 1..].concat()).unwrap();
            let b = b.union(&a.intersection(&g.vset(&cliques[upto + 1]).unwrap()));
            make_separation(&g, &a, &b).unwrap()
        };
        let cuts = [cut(0), cut(1), cut(2)];
        let ws = cliques.iter().map(|k| TangleWitness::clique(&g, k, 5).unwrap()).collect();
        (g, ws, cuts)
    }

    #[test]
    fn construction_inserts_the_cheap_cut() {
        let (g, ws, [ab, bc, cd]) = glued_cliques();
        assert_eq!((ab.order(), bc.order(), cd.order()), (2, 1, 4));
        let pool: Vec<&dyn Orienter> = ws.iter().map(|w| w as &dyn Orienter).collect();
        let n = NestedSet::new(vec![ab.underlying(), bc.underlying(), cd.underlying()]).unwrap();
        let seq = SeparationSequence::new(vec![ab.clone(), cd.clone()]).unwrap();
        let ip = construct_interlaced(&g, &n, &seq, &pool, 1 << 20).unwrap();
        assert_eq!(ip.sequence.items(), &[ab, bc, cd]);
        assert_eq!(ip.tangles, vec![0, 1, 2, 3]);
        assert!(check_interlaced_pair(&g, &ip, &pool, 1 << 20).unwrap().passes());
        let t = thin_out(&ip, false).unwrap();
        assert_eq!(t.selected, vec![1, 2]);
        assert!(check_interlaced_pair(&g, &t.pair, &pool, 1 << 20).unwrap().passes());
        assert_eq!(check_distinguishes_later(&g, &t.pair, &pool, 1 << 20).unwrap(), None);
    }

    #[test]
    fn construction_aborts_without_a_filler() {
        let (g, ws, [ab, _, cd]) = glued_cliques();
        let pool: Vec<&dyn Orienter> = ws.iter().map(|w| w as &dyn Orienter).collect();
        let n = NestedSet::new(vec![ab.underlying(), cd.underlying()]).unwrap();
        let seq = SeparationSequence::new(vec![ab, cd]).unwrap();
        let err = construct_interlaced(&g, &n, &seq, &pool, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn attachment_vertices_stay_pseudo_tight() {
        let p = clique_chain(4);
        let g = p.layer(4).unwrap();
        let seq = standard_sequence(&p, 4).unwrap();
        let r = pseudo_tight_check(g, &seq, p.boundary(4).unwrap(), None).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.neighbourhood_equal);
        let status = |name: &str| r.vertices.iter().find(|v| v.vertex == name).unwrap().status;
        for w in ["v:0:1", "v:1:1", "v:2:1"] {
            assert_eq!(status(w), VertexStatus::Pass, "{w}");
        }
        assert_eq!(status("v:3:2"), VertexStatus::Interference);
    }

    #[test]
    fn clique_chain_limit_separator_grows_by_one() {
        let p = clique_chain(5);
        let chain = standard_chain(&p, &[0, 1, 2, 3, 4, 5]).unwrap();
        let t = limit_separator_growth(&p, &chain).unwrap();
        assert_eq!(t.rows, vec![(2, 1), (3, 2), (4, 3), (5, 4)]);
        assert_eq!(t.prefixes[3], vec!["v:0:1", "v:1:1", "v:2:1", "v:3:1"]);
        assert!(t.monotone() && t.unbounded_evidence());
        assert!(t.to_csv().starts_with("horizon,separator_size\n2,1\n"));
    }

    #[test]
    fn truncated_rays_cheapen_late_clique_pairs() {
        use crate::tangles::min_order_distinguishers;
        let sizes = Some(vec![8, 12, 20, 36]);
        let p = generate_family("clique_chain", &FamilyParams { horizon: 5, sizes, width: None }).unwrap();
        let g = p.layer(5).unwrap();
        let ws = clique_chain_witnesses(&p, 5).unwrap();
        let eff = |i: usize| min_order_distinguishers(g, &ws[i], &ws[i + 1], 1_000_000).unwrap()[0].order();
        // |S_i| = i + 2^(i+1) survives while 2i <= 5; beyond that the rays are
        // cut through w^4 and w^5 instead of w^0..w^(i-1).
        assert_eq!((eff(1), eff(2)), (5, 10));
        assert_eq!((eff(3), eff(4)), (18, 33));
        assert_eq!(clique_chain_faithful_levels(5), 4);
        assert_eq!(clique_chain_faithful_levels(2), 3);
        assert_eq!(clique_chain_faithful_levels(6), 5);
    }
}
