//! Ends at truncation scale: combs onto vertex sets, directions given by
//! classes of declared rays, ray packings, and the thick and thin end
//! evidence built from them.

use serde_json::{json, Value};

use crate::chains::LayerChain;
use crate::error::{Error, Result};
use crate::graph_core::family::LayeredPresentation;
use crate::graph_core::{components, disjoint_paths, Graph, SplitFlow};
use crate::limits::limit_separator_growth;
use crate::separations::{is_tight, make_separation, supremum, NestedSet, SeparationSequence};
use crate::tangles::Orienter;
use crate::tree_of_tangles::{exhaustiveness_evidence, verify_tree_of_tangles, Exhaustiveness};
use crate::vset::VSet;

/// Disjoint paths needed to call two rays equivalent, and teeth needed for
/// a ray to reach a vertex set.
pub const DEFAULT_PATH_THRESHOLD: usize = 3;

/// Shortens each path to run from its last vertex in `s` to the first
/// vertex of `t` after it. Disjointness is kept.
fn trimmed(paths: Vec<Vec<usize>>, s: &VSet, t: &VSet) -> Vec<Vec<usize>> {
    paths
        .into_iter()
        .filter_map(|p| {
            let i = p.iter().rposition(|&v| s.contains(v))?;
            let j = i + p[i..].iter().position(|&v| t.contains(v))?;
            Some(p[i..=j].to_vec())
        })
        .collect()
}

fn named(g: &Graph, paths: &[Vec<usize>]) -> Vec<Vec<String>> {
    paths.iter().map(|p| p.iter().map(|&v| g.name(v).to_string()).collect()).collect()
}

fn present(g: &Graph, names: &[String]) -> VSet {
    let mut out = g.empty_set();
    for n in names {
        if let Some(v) = g.index_of(n) {
            out.insert(v);
        }
    }
    out
}

/// A declared ray's prefix together with disjoint paths from it to a target
/// set, each meeting the spine only in its first vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombWitness {
    pub label: String,
    pub spine: Vec<String>,
    pub teeth_paths: Vec<Vec<String>>,
}

impl CombWitness {
    pub fn teeth(&self) -> Vec<&str> {
        self.teeth_paths.iter().map(|p| p.last().expect("paths are non-empty").as_str()).collect()
    }

    /// Structural check against `g` and the target names.
    pub fn verify(&self, g: &Graph, targets: &[String]) -> bool {
        let spine: Vec<Option<usize>> = self.spine.iter().map(|n| g.index_of(n)).collect();
        if spine.iter().any(Option::is_none) || spine.windows(2).any(|w| !g.has_edge(w[0].unwrap(), w[1].unwrap())) {
            return false;
        }
        let on_spine = |n: &String| self.spine.contains(n);
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.teeth_paths {
            let ids: Vec<Option<usize>> = p.iter().map(|n| g.index_of(n)).collect();
            let valid = !p.is_empty()
                && ids.iter().all(Option::is_some)
                && ids.windows(2).all(|w| g.has_edge(w[0].unwrap(), w[1].unwrap()))
                && on_spine(&p[0])
                && p[1..].iter().all(|n| !on_spine(n))
                && targets.contains(p.last().unwrap())
                && p.iter().all(|n| seen.insert(n.clone()));
            if !valid {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spine_label": self.label,
            "spine": self.spine,
            "teeth_paths": self.teeth_paths,
            "teeth": self.teeth(),
        })
    }
}

fn comb_on(g: &Graph, label: &str, spine: &[String], u: &VSet) -> CombWitness {
    let s = present(g, spine);
    let paths = trimmed(disjoint_paths(g, &s, u), &s, u);
    CombWitness { label: label.to_string(), spine: spine.to_vec(), teeth_paths: named(g, &paths) }
}

/// Declared rays cut to layer `m`, in declaration order.
fn rays_at(p: &LayeredPresentation, m: usize) -> Result<Vec<(String, Vec<String>)>> {
    let g = p.layer(m)?;
    let out: Vec<(String, Vec<String>)> = p
        .rays()
        .iter()
        .map(|r| (r.label.clone(), r.vertices.iter().filter(|v| g.index_of(v).is_some()).cloned().collect()))
        .filter(|(_, vs): &(String, Vec<String>)| !vs.is_empty())
        .collect();
    if out.is_empty() {
        return Err(Error::NoDeclaredRays);
    }
    Ok(out)
}

/// First declared ray (in declaration order) carrying a comb with at least
/// `t` teeth in `u`; `None` when no ray does at this horizon.
pub fn find_comb(p: &LayeredPresentation, m: usize, u: &[String], t: usize) -> Result<Option<CombWitness>> {
    if t == 0 {
        return Err(Error::Precondition("a comb needs at least one tooth".into()));
    }
    let g = p.layer(m)?;
    let target = present(g, u);
    for (label, spine) in rays_at(p, m)? {
        let comb = comb_on(g, &label, &spine, &target);
        if comb.teeth_paths.len() >= t {
            return Ok(Some(comb));
        }
    }
    Ok(None)
}

/// A class of declared rays, pairwise equivalent at the horizon it was
/// computed for. The first label represents the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub rays: Vec<String>,
}

impl Direction {
    pub fn representative(&self) -> &str {
        &self.rays[0]
    }
    pub fn to_json(&self) -> Value {
        json!({ "rays": self.rays })
    }
    pub fn from_json(v: &Value) -> Result<Self> {
        let rays: Vec<String> = v
            .get("rays")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_str).map(str::to_string).collect())
            .unwrap_or_default();
        if rays.is_empty() {
            return Err(Error::Malformed { context: "direction".into(), message: "expected non-empty `rays`".into() });
        }
        Ok(Direction { rays })
    }

    /// Last two vertices in `G_m` of each ray of the class present there.
    fn tails(&self, p: &LayeredPresentation, m: usize) -> Result<VSet> {
        let g = p.layer(m)?;
        let rays = rays_at(p, m)?;
        let mut out = g.empty_set();
        for (_, vs) in rays.iter().filter(|(l, _)| self.rays.contains(l)) {
            out.union_with(&present(g, &vs[vs.len().saturating_sub(2)..]));
        }
        if out.is_empty() {
            return Err(Error::Precondition(format!("no ray of the direction is present on layer {m}")));
        }
        Ok(out)
    }
}

/// Classes of the relation "joined by at least `threshold` disjoint paths"
/// on the declared rays of layer `m`, closed transitively.
pub fn ray_classes(p: &LayeredPresentation, m: usize, threshold: usize) -> Result<Vec<Direction>> {
    let g = p.layer(m)?;
    let rays = rays_at(p, m)?;
    let sets: Vec<VSet> = rays.iter().map(|(_, vs)| present(g, vs)).collect();
    let none = g.empty_set();
    let mut class: Vec<usize> = (0..rays.len()).collect();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if class[i] == class[j] {
                continue;
            }
            if SplitFlow::solve(g, &sets[i], &sets[j], &none).value() >= threshold {
                let (from, to) = (class[j], class[i]);
                for c in class.iter_mut() {
                    if *c == from {
                        *c = to;
                    }
                }
            }
        }
    }
    let mut out: Vec<Direction> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    for (i, (label, _)) in rays.iter().enumerate() {
        match order.iter().position(|&c| c == class[i]) {
            Some(k) => out[k].rays.push(label.clone()),
            None => {
                order.push(class[i]);
                out.push(Direction { rays: vec![label.clone()] });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub classes: Vec<Direction>,
    /// Classes with a ray carrying a comb of `threshold` teeth in the set,
    /// each with that comb.
    pub directions: Vec<(Direction, CombWitness)>,
}

impl ClosureReport {
    pub fn unique(&self) -> bool {
        self.directions.len() == 1
    }
    pub fn to_json(&self) -> Value {
        json!({
            "classes": self.classes.iter().map(Direction::to_json).collect::<Vec<_>>(),
            "directions": self.directions.iter().map(|(d, c)| json!({ "direction": d.to_json(), "comb": c.to_json() })).collect::<Vec<_>>(),
            "unique": self.unique(),
            "evidence_only": true,
        })
    }
}

/// Directions whose rays reach `u` by combs with `threshold` teeth, among
/// the ray classes of layer `m`.
pub fn directions_in_closure(p: &LayeredPresentation, m: usize, u: &[String], threshold: usize) -> Result<ClosureReport> {
    let g = p.layer(m)?;
    let target = present(g, u);
    let rays = rays_at(p, m)?;
    let classes = ray_classes(p, m, threshold)?;
    let mut directions = Vec::new();
    for d in &classes {
        let comb = d.rays.iter().find_map(|label| {
            let spine = &rays.iter().find(|(l, _)| l == label).expect("class of present rays").1;
            let c = comb_on(g, label, spine, &target);
            (c.teeth_paths.len() >= threshold).then_some(c)
        });
        if let Some(c) = comb {
            directions.push((d.clone(), c));
        }
    }
    Ok(ClosureReport { classes, directions })
}

/// Disjoint paths from a base set to the horizon boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPacking {
    pub horizon: usize,
    pub base: Vec<String>,
    pub rays: Vec<Vec<String>>,
}

impl RayPacking {
    pub fn len(&self) -> usize {
        self.rays.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Paths are valid, pairwise disjoint, start in the base and end on the
    /// boundary of their layer.
    pub fn verify(&self, p: &LayeredPresentation) -> bool {
        let (Ok(g), Ok(boundary)) = (p.layer(self.horizon), p.boundary(self.horizon)) else {
            return false;
        };
        let mut seen = std::collections::BTreeSet::new();
        self.rays.iter().all(|r| {
            let ids: Vec<Option<usize>> = r.iter().map(|n| g.index_of(n)).collect();
            !r.is_empty()
                && ids.iter().all(Option::is_some)
                && ids.windows(2).all(|w| g.has_edge(w[0].unwrap(), w[1].unwrap()))
                && self.base.contains(&r[0])
                && boundary.contains(ids.last().unwrap().unwrap())
                && r.iter().all(|n| seen.insert(n.clone()))
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "horizon": self.horizon, "base": self.base, "rays": self.rays, "packing": self.len() })
    }
}

/// Maximum family of disjoint paths from `base` to the boundary of `G_m`
/// inside `base` plus the direction's territory: the components of
/// `G_m - base` meeting the tails of the direction's rays.
pub fn ray_packing(p: &LayeredPresentation, m: usize, direction: &Direction, base: &[String]) -> Result<RayPacking> {
    let g = p.layer(m)?;
    let b = present(g, base);
    let tails = direction.tails(p, m)?.difference(&b);
    let mut territory = g.empty_set();
    for c in components(g, &b).into_iter().filter(|c| !c.intersection(&tails).is_empty()) {
        territory.union_with(&c);
    }
    if territory.is_empty() {
        return Err(Error::EmptyTerritory);
    }
    let keep = territory.union(&b);
    let h = g.induced(&keep);
    let hb = h.transfer(g, &b);
    let target = h.transfer(g, &p.boundary(m)?.intersection(&keep));
    let paths = trimmed(disjoint_paths(&h, &hb, &target), &hb, &target);
    Ok(RayPacking { horizon: m, base: g.names_of(&b), rays: named(&h, &paths) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingTable {
    pub rows: Vec<(usize, usize)>,
}

impl PackingTable {
    pub fn non_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].1 <= w[1].1)
    }
    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].1 < w[1].1)
    }
    /// Whether every packing size up to `k_max` is reached on some row.
    pub fn reaches(&self, k_max: usize) -> bool {
        self.rows.iter().map(|r| r.1).max().unwrap_or(0) >= k_max
    }
    pub fn to_csv(&self) -> String {
        let mut out = String::from("horizon,packing\n");
        for (m, k) in &self.rows {
            out.push_str(&format!("{m},{k}\n"));
        }
        out
    }
}

/// Packing sizes for a fixed base across horizons.
pub fn packing_growth(
    p: &LayeredPresentation,
    direction: &Direction,
    base: &[String],
    horizons: &[usize],
) -> Result<PackingTable> {
    let rows = horizons
        .iter()
        .map(|&m| ray_packing(p, m, direction, base).map(|r| (m, r.len())))
        .collect::<Result<Vec<_>>>()?;
    Ok(PackingTable { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    pub status: StageStatus,
    pub reason: String,
    pub witnesses: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub stages: Vec<Stage>,
}

impl PipelineReport {
    pub fn passes(&self) -> bool {
        self.stages.iter().all(|s| s.status == StageStatus::Pass)
    }
    pub fn to_json(&self) -> Value {
        json!({
            "stages": self.stages.iter().map(|s| json!({
                "stage": s.name,
                "status": match s.status {
                    StageStatus::Pass => "pass",
                    StageStatus::Fail => "fail",
                    StageStatus::Skipped => "skipped",
                },
                "reason": s.reason,
                "witnesses": s.witnesses,
            })).collect::<Vec<_>>(),
            "label": if self.passes() { "thick-evidence" } else { "no-evidence" },
            "passes": self.passes(),
            "evidence_only": true,
        })
    }
}

const STAGES: [&str; 5] = ["preconditions", "separator-growth", "unique-direction", "packing-growth", "packing-beyond-limit"];

struct Pipeline {
    stages: Vec<Stage>,
}

impl Pipeline {
    fn record(&mut self, pass: bool, reason: String, witnesses: Value) -> bool {
        let name = STAGES[self.stages.len()];
        let status = if pass { StageStatus::Pass } else { StageStatus::Fail };
        self.stages.push(Stage { name, status, reason, witnesses });
        pass
    }

    fn finish(mut self) -> PipelineReport {
        while self.stages.len() < STAGES.len() {
            let name = STAGES[self.stages.len()];
            self.stages.push(Stage { name, status: StageStatus::Skipped, reason: "an earlier stage failed".into(), witnesses: Value::Null });
        }
        PipelineReport { stages: self.stages }
    }
}

/// Thick-end evidence for the limit of `chain`, staged:
/// 1. the limit separator grows across horizons;
/// 2. exactly one direction reaches the top settled separator by a comb;
/// 3. packings from the settled separators into that direction strictly
///    grow across horizons;
/// 4. the top settled separator `Z` sends `|Z|` disjoint paths to the
///    horizon through the strict `B` side of the top supremum.
///
/// `n` lives on the top chain layer; `pool` are the tangles it must
/// efficiently distinguish.
pub fn thick_end_pipeline(
    p: &LayeredPresentation,
    n: &NestedSet,
    chain: &LayerChain,
    pool: &[&dyn Orienter],
    budget: u64,
) -> Result<PipelineReport> {
    let mut run = Pipeline { stages: Vec::new() };
    let Some((top, seq)) = chain.layers().last() else {
        return Err(Error::Precondition("the chain has no layers".into()));
    };
    let top = *top;
    let gt = p.layer(top)?;

    let verdict = exhaustiveness_evidence(p, chain)?;
    let outside: Vec<usize> =
        (0..seq.len()).filter(|&i| !n.contains(&seq.items()[i].underlying())).collect();
    let tot = verify_tree_of_tangles(gt, n, pool, budget)?;
    let ok = verdict.verdict == Exhaustiveness::NonExhaustiveWitness && outside.is_empty() && tot.efficient();
    let reason = if verdict.verdict != Exhaustiveness::NonExhaustiveWitness {
        format!("chain verdict is {} ({})", verdict.verdict.label(), verdict.reason)
    } else if !outside.is_empty() {
        format!("chain items {outside:?} are not in the nested set")
    } else if !tot.efficient() {
        "the nested set does not efficiently distinguish the pool".into()
    } else {
        "non-exhaustive witness; items in the nested set; pool efficiently distinguished".into()
    };
    if !run.record(ok, reason, verdict.to_json()) {
        return Ok(run.finish());
    }

    let growth = limit_separator_growth(p, chain)?;
    let ok = growth.unbounded_evidence();
    if !run.record(ok, "limit separator size across settled horizons".into(), growth.to_json()) {
        return Ok(run.finish());
    }

    let u = growth.prefixes.last().expect("unbounded evidence has rows").clone();
    let closure = directions_in_closure(p, top, &u, DEFAULT_PATH_THRESHOLD)?;
    let ok = closure.unique();
    let reason = format!("{} direction(s) reach the settled separator on layer {top}", closure.directions.len());
    if !run.record(ok, reason, closure.to_json()) {
        return Ok(run.finish());
    }
    let direction = closure.directions[0].0.clone();

    let mut rows = Vec::new();
    let mut packings = Vec::new();
    for (&(m, _), base) in growth.rows.iter().zip(&growth.prefixes) {
        let r = ray_packing(p, m, &direction, base)?;
        rows.push((m, r.len()));
        packings.push(r.to_json());
    }
    let table = PackingTable { rows };
    let ok = table.rows.len() >= 3 && table.strictly_increasing();
    let reason = "packings from the settled prefixes".to_string();
    if !run.record(ok, reason, json!({ "rows": table.rows, "packings": packings })) {
        return Ok(run.finish());
    }

    let sup = supremum(gt, seq)?;
    let z = gt.vset(&u)?;
    let keep = sup.strict_b().union(&z);
    let h = gt.induced(&keep);
    let hz = h.transfer(gt, &z);
    let target = h.transfer(gt, &p.boundary(top)?.intersection(&keep));
    let paths = named(&h, &trimmed(disjoint_paths(&h, &hz, &target), &hz, &target));
    let inside = paths.iter().all(|r| {
        r[1..].iter().all(|v| gt.index_of(v).is_some_and(|i| sup.strict_b().contains(i)))
    });
    let ok = paths.len() == z.len() && inside;
    let reason = format!("{} of {} disjoint paths from Z through the strict B side", paths.len(), z.len());
    run.record(ok, reason, json!({ "z": gt.names_of(&z), "rays": paths }));
    Ok(run.finish())
}

/// A bounded-order chain toward a direction found by [`thin_end_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinBound {
    pub bound: usize,
    pub orders: Vec<usize>,
    pub chain: SeparationSequence,
}

/// Least `K` for which the window carries a strictly increasing chain of
/// order at most `K`, with connected tight `B` sides holding the
/// direction's ray tails, whose `A` sides sweep `G_0, G_1, …`. Each item is
/// the minimum cut closest to `G_j`. `None` when fewer than two layers fit
/// below the tails, when the cut orders grow in the later half of the
/// window, or when the cuts do not form such a chain.
pub fn thin_end_bound(p: &LayeredPresentation, direction: &Direction, m: usize) -> Result<Option<ThinBound>> {
    let g = p.layer(m)?;
    let tails = direction.tails(p, m)?;
    let mut items = Vec::new();
    let mut orders = Vec::new();
    for j in 0..m {
        let gj = g.transfer(p.layer(j)?, &p.layer(j)?.full_set());
        if !gj.intersection(&tails).is_empty() {
            break;
        }
        let flow = SplitFlow::solve(g, &gj, &tails, &tails);
        if flow.value() > g.n() {
            return Ok(None);
        }
        let (a, b) = flow.source_side_cut();
        let x = a.intersection(&b);
        let mut holding = components(g, &x).into_iter().filter(|c| !c.intersection(&tails).is_empty());
        let (Some(c), None) = (holding.next(), holding.next()) else {
            return Ok(None);
        };
        let side_b = c.union(&g.neighbourhood(&c));
        let s = make_separation(g, &c.complement().union(&side_b.difference(&c)), &side_b)?;
        orders.push(s.order());
        if items.last() != Some(&s) {
            items.push(s);
        }
    }
    if orders.len() < 2 {
        return Ok(None);
    }
    let half = orders.len().div_ceil(2);
    let early = orders[..half].iter().max().copied().unwrap_or(0);
    if orders[half..].iter().any(|&o| o > early) {
        return Ok(None);
    }
    if items.iter().any(|s| s.is_proper() && !is_tight(g, s)) {
        return Ok(None);
    }
    let Ok(chain) = SeparationSequence::new(items) else {
        return Ok(None);
    };
    Ok(Some(ThinBound { bound: early, orders, chain }))
}
