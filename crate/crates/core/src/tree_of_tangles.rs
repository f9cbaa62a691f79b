//! Trees of tangles: a greedy nested set of efficient distinguishers, the
//! tree-decomposition a nested set induces, verification of both, and
//! finite-horizon exhaustiveness evidence for layered chains.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::chains::LayerChain;
use crate::error::{Error, Result};
use crate::graph_core::family::LayeredPresentation;
use crate::graph_core::Graph;
use crate::separations::{is_tight, make_separation, NestedSet, OrientedSeparation, Separation};
use crate::tangles::{distinguishable_pairs, distinguishes, min_order_distinguishers, DistinguishedPair, Orienter};
use crate::vset::VSet;

fn efficiently_distinguishes(
    g: &Graph,
    s: &Separation,
    pair: &DistinguishedPair,
    tangles: &[&dyn Orienter],
) -> Result<bool> {
    if s.order() != pair.order {
        return Ok(false);
    }
    distinguishes(g, s, tangles[pair.i], tangles[pair.j])
}

/// Greedy tree of tangles. Pairs are processed by ascending efficient
/// order; a pair not yet efficiently distinguished admits the first
/// minimum-order distinguisher, in canonical order, nested with every
/// member so far. Deterministic but not automorphism-invariant.
pub fn build_tree_of_tangles(g: &Graph, tangles: &[&dyn Orienter], budget: u64) -> Result<NestedSet> {
    g.require_connected()?;
    let pairs = distinguishable_pairs(g, tangles, budget)?;
    let mut members: Vec<Separation> = Vec::new();
    for pair in &pairs {
        let mut done = false;
        for s in &members {
            if efficiently_distinguishes(g, s, pair, tangles)? {
                done = true;
                break;
            }
        }
        if done {
            continue;
        }
        let mut admitted = false;
        for cand in min_order_distinguishers(g, tangles[pair.i], tangles[pair.j], budget)? {
            let mut nested = true;
            for s in &members {
                if !crate::separations::is_nested(&cand, s)? {
                    nested = false;
                    break;
                }
            }
            if nested {
                members.push(cand);
                admitted = true;
                break;
            }
        }
        if !admitted {
            return Err(Error::NoNestedCandidate(pair.i, pair.j));
        }
    }
    NestedSet::new(members)
}

/// Outcome of [`verify_tree_of_tangles`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeOfTanglesReport {
    pub crossing_pair: Option<(usize, usize)>,
    /// Members efficiently distinguishing no pair.
    pub irrelevant: Vec<usize>,
    /// Distinguishable pairs no member distinguishes efficiently.
    pub undistinguished: Vec<(usize, usize)>,
}

impl TreeOfTanglesReport {
    pub fn nested(&self) -> bool {
        self.crossing_pair.is_none()
    }
    pub fn relevant(&self) -> bool {
        self.irrelevant.is_empty()
    }
    pub fn efficient(&self) -> bool {
        self.undistinguished.is_empty()
    }
    pub fn passes(&self) -> bool {
        self.nested() && self.relevant() && self.efficient()
    }
    pub fn to_json(&self) -> Value {
        json!({
            "nested": self.nested(),
            "crossing_pair": self.crossing_pair.map(|(i, j)| json!([i, j])),
            "relevant": self.relevant(),
            "irrelevant_members": self.irrelevant,
            "efficient": self.efficient(),
            "undistinguished_pairs": self.undistinguished.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
            "canonical": false,
            "note": "greedy deterministic construction; not invariant under automorphisms",
            "passes": self.passes(),
        })
    }
}

pub fn verify_tree_of_tangles(
    g: &Graph,
    n: &NestedSet,
    tangles: &[&dyn Orienter],
    budget: u64,
) -> Result<TreeOfTanglesReport> {
    let crossing_pair = n.crossing_pair()?;
    let pairs = distinguishable_pairs(g, tangles, budget)?;
    let bound = tangles.iter().map(|t| t.order_bound()).min().unwrap_or(0);
    let mut irrelevant = Vec::new();
    for (k, s) in n.members().iter().enumerate() {
        let mut ok = false;
        if s.order() < bound {
            for pair in &pairs {
                if efficiently_distinguishes(g, s, pair, tangles)? {
                    ok = true;
                    break;
                }
            }
        }
        if !ok {
            irrelevant.push(k);
        }
    }
    let mut undistinguished = Vec::new();
    for pair in &pairs {
        let mut ok = false;
        for s in n.members() {
            if efficiently_distinguishes(g, s, pair, tangles)? {
                ok = true;
                break;
            }
        }
        if !ok {
            undistinguished.push((pair.i, pair.j));
        }
    }
    Ok(TreeOfTanglesReport { crossing_pair, irrelevant, undistinguished })
}

/// A tree with vertex-set bags. Nodes are named `t0, t1, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub bags: Vec<VSet>,
}

impl TreeDecomposition {
    pub fn to_json(&self, g: &Graph) -> Value {
        let bags: BTreeMap<&str, Vec<String>> = self
            .nodes
            .iter()
            .zip(&self.bags)
            .map(|(t, b)| (t.as_str(), g.names_of(b)))
            .collect();
        json!({
            "nodes": self.nodes,
            "edges": self.edges.iter().map(|&(a, b)| json!([self.nodes[a], self.nodes[b]])).collect::<Vec<_>>(),
            "bags": bags,
        })
    }

    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        let malformed = |m: String| Error::Malformed { context: "tree decomposition".into(), message: m };
        let nodes: Vec<String> = v
            .get("nodes")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed("expected array `nodes`".into()))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| malformed("node names must be strings".into())))
            .collect::<Result<_>>()?;
        let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
        let node = |x: &Value| -> Result<usize> {
            let name = x.as_str().ok_or_else(|| malformed("edge ends must be node names".into()))?;
            index.get(name).copied().ok_or_else(|| malformed(format!("unknown node `{name}`")))
        };
        let mut edges = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| malformed("expected array `edges`".into()))? {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| malformed("edges are pairs".into()))?;
            edges.push((node(&pair[0])?, node(&pair[1])?));
        }
        let bag_doc = v.get("bags").and_then(Value::as_object).ok_or_else(|| malformed("expected object `bags`".into()))?;
        let mut bags = Vec::with_capacity(nodes.len());
        for t in &nodes {
            let names: Vec<String> = bag_doc
                .get(t)
                .and_then(Value::as_array)
                .ok_or_else(|| malformed(format!("missing bag for `{t}`")))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| malformed("bag entries must be strings".into())))
                .collect::<Result<_>>()?;
            bags.push(g.vset(&names)?);
        }
        Ok(TreeDecomposition { nodes, edges, bags })
    }

    /// Graphviz rendering with bags as node labels.
    pub fn to_dot(&self, g: &Graph) -> String {
        let mut out = String::from("graph T {\n");
        for (t, b) in self.nodes.iter().zip(&self.bags) {
            let label = g.names_of(b).join(", ");
            let _ = writeln!(out, "  \"{t}\" [label=\"{t}: {{{label}}}\"];");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.nodes[a], self.nodes[b]);
        }
        out.push_str("}\n");
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Nodes reachable from `start` without using `skip` (an edge index).
    fn side(&self, adj: &[Vec<usize>], start: usize, skip: (usize, usize)) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if (x, y) == skip || (y, x) == skip || seen[y] {
                    continue;
                }
                seen[y] = true;
                queue.push_back(y);
            }
        }
        seen
    }

    /// Separation `(⋃ bags on a's side, ⋃ bags on b's side)` of tree edge `k`.
    pub fn edge_sides(&self, k: usize) -> (VSet, VSet) {
        let (a, b) = self.edges[k];
        let adj = self.adjacency();
        let left = self.side(&adj, a, (a, b));
        let universe = self.bags.first().map_or(0, VSet::universe);
        let (mut x, mut y) = (VSet::empty(universe), VSet::empty(universe));
        for (t, bag) in self.bags.iter().enumerate() {
            if left[t] {
                x.union_with(bag);
            } else {
                y.union_with(bag);
            }
        }
        (x, y)
    }
}

fn consistent_pair(x: &OrientedSeparation, y: &OrientedSeparation) -> bool {
    let le = |s: &OrientedSeparation, t: &OrientedSeparation| s.a().is_subset(t.a()) && t.b().is_subset(s.b());
    !le(&x.reverse(), y) && !le(&y.reverse(), x)
}

/// Consistent orientations of `n`, each encoded by which members are taken
/// backward, in lexicographic order of that encoding.
fn consistent_orientations(n: &NestedSet) -> Vec<Vec<bool>> {
    fn extend(
        members: &[Separation],
        picked: &mut Vec<OrientedSeparation>,
        code: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        let i = picked.len();
        if i == members.len() {
            out.push(code.clone());
            return;
        }
        for backward in [false, true] {
            let x = if backward { members[i].backward() } else { members[i].forward() };
            if picked.iter().all(|y| consistent_pair(&x, y)) {
                picked.push(x);
                code.push(backward);
                extend(members, picked, code, out);
                code.pop();
                picked.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n.members(), &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Tree-decomposition induced by a nested set of proper separations. Nodes
/// are the consistent orientations of `n`, bag(O) is the intersection of
/// the `B` sides in `O` (all of `V` when `n` is empty), and two nodes are
/// adjacent when they differ in exactly one member.
pub fn induce_tree_decomposition(g: &Graph, n: &NestedSet) -> Result<TreeDecomposition> {
    g.require_connected()?;
    for (i, s) in n.members().iter().enumerate() {
        if s.gid() != g.fingerprint() {
            return Err(Error::AmbientMismatch);
        }
        if !s.is_proper() {
            return Err(Error::ImproperMember(i));
        }
    }
    if let Some((i, j)) = n.crossing_pair()? {
        return Err(Error::Precondition(format!("members {i} and {j} cross")));
    }
    let codes = consistent_orientations(n);
    let bags = codes
        .iter()
        .map(|code| {
            let mut bag = g.full_set();
            for (s, &backward) in n.members().iter().zip(code) {
                let o = if backward { s.backward() } else { s.forward() };
                bag.intersect_with(o.b());
            }
            bag
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..codes.len() {
        for j in i + 1..codes.len() {
            if codes[i].iter().zip(&codes[j]).filter(|(x, y)| x != y).count() == 1 {
                edges.push((i, j));
            }
        }
    }
    let nodes = (0..codes.len()).map(|i| format!("t{i}")).collect();
    Ok(TreeDecomposition { nodes, edges, bags })
}

/// Outcome of [`verify_tree_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecompositionReport {
    pub tree_ok: bool,
    pub uncovered_vertices: Vec<String>,
    pub uncovered_edge: Option<(String, String)>,
    /// A vertex whose bags do not induce a subtree.
    pub t3_witness: Option<String>,
    /// Tree edges whose sides do not form a separation.
    pub invalid_edges: Vec<usize>,
    /// Members of `n` induced by no edge, and induced separations not in `n`.
    pub missing_members: Vec<Separation>,
    pub extra_separations: Vec<Separation>,
    pub undistinguished: Vec<(usize, usize)>,
}

impl TreeDecompositionReport {
    pub fn t1(&self) -> bool {
        self.uncovered_vertices.is_empty()
    }
    pub fn t2(&self) -> bool {
        self.uncovered_edge.is_none()
    }
    pub fn t3(&self) -> bool {
        self.t3_witness.is_none()
    }
    pub fn induced_equals_n(&self) -> bool {
        self.invalid_edges.is_empty() && self.missing_members.is_empty() && self.extra_separations.is_empty()
    }
    pub fn efficient(&self) -> bool {
        self.undistinguished.is_empty()
    }
    pub fn passes(&self) -> bool {
        self.tree_ok && self.t1() && self.t2() && self.t3() && self.induced_equals_n() && self.efficient()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "tree": self.tree_ok,
            "t1": self.t1(),
            "t1_missing": self.uncovered_vertices,
            "t2": self.t2(),
            "t2_witness": self.uncovered_edge.as_ref().map(|(u, v)| json!([u, v])),
            "t3": self.t3(),
            "t3_witness": self.t3_witness,
            "induced_equals_nested_set": self.induced_equals_n(),
            "invalid_edges": self.invalid_edges,
            "missing_members": self.missing_members.iter().map(|s| s.to_json(g)).collect::<Vec<_>>(),
            "extra_separations": self.extra_separations.iter().map(|s| s.to_json(g)).collect::<Vec<_>>(),
            "efficient": self.efficient(),
            "undistinguished_pairs": self.undistinguished.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
            "passes": self.passes(),
        })
    }
}

fn is_tree(td: &TreeDecomposition) -> bool {
    let k = td.nodes.len();
    if k == 0 || td.edges.len() + 1 != k || td.edges.iter().any(|&(a, b)| a == b || a >= k || b >= k) {
        return false;
    }
    let adj = td.adjacency();
    td.side(&adj, 0, (usize::MAX, usize::MAX)).iter().all(|&x| x)
}

/// Checks (T1)–(T3), that tree edges induce exactly the separations of
/// `n`, and that every distinguishable pair of `tangles` is efficiently
/// distinguished by an edge-induced separation.
pub fn verify_tree_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
    n: &NestedSet,
    tangles: &[&dyn Orienter],
    budget: u64,
) -> Result<TreeDecompositionReport> {
    let mut r = TreeDecompositionReport { tree_ok: is_tree(td), ..Default::default() };
    if td.bags.len() != td.nodes.len() || td.bags.iter().any(|b| b.universe() != g.n()) {
        return Err(Error::Precondition("bags do not match the nodes or the graph".into()));
    }
    let mut covered = g.empty_set();
    for b in &td.bags {
        covered.union_with(b);
    }
    r.uncovered_vertices = g.names_of(&covered.complement());
    r.uncovered_edge = g
        .edges()
        .iter()
        .find(|&&(u, v)| !td.bags.iter().any(|b| b.contains(u) && b.contains(v)))
        .map(|&(u, v)| (g.name(u).to_string(), g.name(v).to_string()));
    if r.tree_ok {
        let adj = td.adjacency();
        for v in 0..g.n() {
            let holding: Vec<usize> = (0..td.nodes.len()).filter(|&t| td.bags[t].contains(v)).collect();
            let Some(&start) = holding.first() else { continue };
            let mut seen = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if td.bags[y].contains(v) && seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            if seen.len() != holding.len() {
                r.t3_witness = Some(g.name(v).to_string());
                break;
            }
        }
    } else {
        r.t3_witness = None;
    }
    let mut induced = BTreeSet::new();
    if r.tree_ok {
        for k in 0..td.edges.len() {
            let (a, b) = td.edge_sides(k);
            match make_separation(g, &a, &b) {
                Ok(s) => {
                    induced.insert(s.underlying());
                }
                Err(_) => r.invalid_edges.push(k),
            }
        }
    }
    let members: BTreeSet<Separation> = n.members().iter().cloned().collect();
    r.missing_members = members.difference(&induced).cloned().collect();
    r.extra_separations = induced.difference(&members).cloned().collect();
    for pair in distinguishable_pairs(g, tangles, budget)? {
        let mut ok = false;
        for s in &induced {
            if efficiently_distinguishes(g, s, &pair, tangles)? {
                ok = true;
                break;
            }
        }
        if !ok {
            r.undistinguished.push((pair.i, pair.j));
        }
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustiveness {
    ExhaustiveEvidence,
    NonExhaustiveWitness,
    Inconclusive,
}

impl Exhaustiveness {
    pub fn label(self) -> &'static str {
        match self {
            Exhaustiveness::ExhaustiveEvidence => "exhaustive-evidence",
            Exhaustiveness::NonExhaustiveWitness => "non-exhaustive-witness",
            Exhaustiveness::Inconclusive => "inconclusive",
        }
    }
}

/// Finite-horizon exhaustiveness verdict with its per-horizon data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustivenessVerdict {
    pub verdict: Exhaustiveness,
    pub reason: String,
    pub horizons: Vec<usize>,
    pub max_orders: Vec<usize>,
    /// Every proper item is tight at that horizon (improper end items of a
    /// window cannot be).
    pub tight: Vec<bool>,
    /// `B` side of the last item restricted to the first horizon's layer.
    pub b_prefix: Vec<Vec<String>>,
}

impl ExhaustivenessVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.label(),
            "reason": self.reason,
            "evidence_only": true,
            "horizons": self.horizons,
            "max_orders": self.max_orders,
            "tight": self.tight,
            "b_prefix": self.b_prefix,
        })
    }
}

/// Evidence from the last three horizons of `chain`:
/// - tight at each and the same maximal order at each: bounded orders of a
///   tight chain, `exhaustive-evidence`;
/// - empty `B`-prefix at each: `exhaustive-evidence`;
/// - the same non-empty `B`-prefix at each: `non-exhaustive-witness`;
/// - otherwise, or with fewer than three horizons: `inconclusive`.
pub fn exhaustiveness_evidence(p: &LayeredPresentation, chain: &LayerChain) -> Result<ExhaustivenessVerdict> {
    let layers = chain.layers();
    let first = layers.first().map(|(m, _)| *m).ok_or(Error::EmptySequence)?;
    let base = p.layer(first)?;
    let (mut horizons, mut max_orders, mut tight, mut b_prefix) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (m, seq) in layers {
        let g = p.layer(*m)?;
        let items = seq.items();
        horizons.push(*m);
        max_orders.push(items.iter().map(OrientedSeparation::order).max().unwrap_or(0));
        let proper: Vec<&OrientedSeparation> = items.iter().filter(|s| s.is_proper()).collect();
        tight.push(!proper.is_empty() && proper.iter().all(|s| is_tight(g, s)));
        let prefix = match items.last() {
            Some(s) => base.names_of(&base.transfer(g, s.b())),
            None => base.names().to_vec(),
        };
        b_prefix.push(prefix);
    }
    let k = horizons.len();
    let (verdict, reason) = if k < 3 {
        (Exhaustiveness::Inconclusive, "fewer than three horizons".to_string())
    } else {
        let last = k - 3..k;
        if last.clone().all(|i| tight[i]) && last.clone().all(|i| max_orders[i] == max_orders[k - 1]) {
            (Exhaustiveness::ExhaustiveEvidence, "tight chain with bounded orders".to_string())
        } else if last.clone().all(|i| b_prefix[i].is_empty()) {
            (Exhaustiveness::ExhaustiveEvidence, "B-prefix empties".to_string())
        } else if !b_prefix[k - 1].is_empty() && last.clone().all(|i| b_prefix[i] == b_prefix[k - 1]) {
            (Exhaustiveness::NonExhaustiveWitness, "B-prefix stable and non-empty".to_string())
        } else {
            (Exhaustiveness::Inconclusive, "no stable pattern within the window".to_string())
        }
    };
    Ok(ExhaustivenessVerdict { verdict, reason, horizons, max_orders, tight, b_prefix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::standard_chain;
    use crate::graph_core::family::{generate_family, FamilyParams};
    use crate::separations::separation_by_names;
    use crate::tangles::{enumerate_tangles, Tangle};

    fn two_k4() -> Graph {
        let l = ["l1", "l2", "l3", "l4"];
        let r = ["r1", "r2", "r3", "r4"];
        let mut es = Vec::new();
        for side in [&l, &r] {
            for i in 0..4 {
                for j in i + 1..4 {
                    es.push((side[i], side[j]));
                }
            }
        }
        es.push(("l1", "r1"));
        let vs: Vec<&str> = l.iter().chain(r.iter()).copied().collect();
        Graph::from_strs(&vs, &es).unwrap()
    }

    fn refs(ts: &[Tangle]) -> Vec<&dyn Orienter> {
        ts.iter().map(|t| t as &dyn Orienter).collect()
    }

    #[test]
    fn two_k4_pipeline() {
        let g = two_k4();
        let ts = enumerate_tangles(&g, 3, 1_000_000).unwrap();
        let n = build_tree_of_tangles(&g, &refs(&ts), 1_000_000).unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n.members()[0].order(), 1);
        assert!(verify_tree_of_tangles(&g, &n, &refs(&ts), 1_000_000).unwrap().passes());
        let td = induce_tree_decomposition(&g, &n).unwrap();
        assert_eq!(td.nodes.len(), 2);
        let report = verify_tree_decomposition(&g, &td, &n, &refs(&ts), 1_000_000).unwrap();
        assert!(report.passes(), "{report:?}");
        let back = TreeDecomposition::from_json(&g, &td.to_json(&g)).unwrap();
        assert_eq!(back, td);
        assert!(td.to_dot(&g).contains("--"));
    }

    #[test]
    fn single_tangle_and_empty_set() {
        let g = two_k4();
        let ts = enumerate_tangles(&g, 3, 1_000_000).unwrap();
        let one = refs(&ts[..1]);
        let n = build_tree_of_tangles(&g, &one, 1_000_000).unwrap();
        assert!(n.is_empty());
        assert!(verify_tree_of_tangles(&g, &n, &one, 1_000_000).unwrap().passes());
        let td = induce_tree_decomposition(&g, &n).unwrap();
        assert_eq!(td.bags, vec![g.full_set()]);
        assert!(verify_tree_decomposition(&g, &td, &n, &one, 1_000_000).unwrap().passes());
    }

    #[test]
    fn crossing_members_are_reported() {
        let g = Graph::from_strs(
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
        )
        .unwrap();
        let s = separation_by_names(&g, &["v1", "v2", "v3"], &["v3", "v4", "v1"]).unwrap().underlying();
        let t = separation_by_names(&g, &["v2", "v3", "v4"], &["v4", "v1", "v2"]).unwrap().underlying();
        let n = NestedSet::unchecked(vec![s, t]);
        let report = verify_tree_of_tangles(&g, &n, &[], 1000).unwrap();
        assert_eq!(report.crossing_pair, Some((0, 1)));
    }

    #[test]
    fn corrupted_bag_breaks_t3() {
        let g = Graph::from_strs(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let s1 = separation_by_names(&g, &["a", "b"], &["b", "c", "d"]).unwrap().underlying();
        let s2 = separation_by_names(&g, &["a", "b", "c"], &["c", "d"]).unwrap().underlying();
        let n = NestedSet::new(vec![s1, s2]).unwrap();
        let mut td = induce_tree_decomposition(&g, &n).unwrap();
        assert_eq!(td.nodes.len(), 3);
        assert!(verify_tree_decomposition(&g, &td, &n, &[], 1000).unwrap().passes());
        // Put `a` into the bag of the far end only, away from the rest of its bags.
        let far = (0..3).find(|&t| !td.bags[t].contains(0) && !td.bags[t].contains(1)).unwrap();
        td.bags[far].insert(0);
        let report = verify_tree_decomposition(&g, &td, &n, &[], 1000).unwrap();
        assert_eq!(report.t3_witness.as_deref(), Some("a"));
    }

    #[test]
    fn improper_member_rejected() {
        let g = Graph::from_strs(&["a", "b"], &[("a", "b")]).unwrap();
        let s = separation_by_names(&g, &["a"], &["a", "b"]).unwrap().underlying();
        let n = NestedSet::new(vec![s]).unwrap();
        assert_eq!(induce_tree_decomposition(&g, &n), Err(Error::ImproperMember(0)));
    }

    fn verdict(name: &str, h: usize, sizes: Option<Vec<usize>>, width: Option<usize>) -> ExhaustivenessVerdict {
        let p = generate_family(name, &FamilyParams { horizon: h, sizes, width }).unwrap();
        let layers: Vec<usize> = (0..=h).collect();
        exhaustiveness_evidence(&p, &standard_chain(&p, &layers).unwrap()).unwrap()
    }

    #[test]
    fn exhaustiveness_verdicts() {
        let ray = verdict("ray", 5, None, None);
        assert_eq!(ray.verdict, Exhaustiveness::ExhaustiveEvidence);
        assert_eq!(ray.max_orders, vec![1; 6]);
        assert_eq!(verdict("grid", 4, None, None).verdict, Exhaustiveness::ExhaustiveEvidence);
        let strip = verdict("grid", 5, None, Some(2));
        assert_eq!(strip.verdict, Exhaustiveness::ExhaustiveEvidence);
        assert_eq!(strip.reason, "tight chain with bounded orders");
        // The B-prefix on G_0 settles to w^0 and the ray start from layer 2 on.
        let short = verdict("clique_chain", 3, Some(vec![8, 12, 20, 36]), None);
        assert_eq!(short.verdict, Exhaustiveness::Inconclusive);
        let cc = verdict("clique_chain", 4, Some(vec![8, 12, 20, 36]), None);
        assert_eq!(cc.verdict, Exhaustiveness::NonExhaustiveWitness);
        assert_eq!(cc.b_prefix[4], vec!["r:0:0".to_string(), "v:0:1".to_string()]);
        assert!(cc.to_json()["evidence_only"].as_bool().unwrap());
    }
}
