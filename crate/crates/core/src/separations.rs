//! Separations, their partial order and nestedness, bounded-order
//! enumeration, and suprema of sequences.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph_core::{components, tight_components, Graph};
use crate::vset::VSet;

/// An ordered pair `(A, B)` of vertex sets covering the graph with no edge
/// between `A \ B` and `B \ A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OrientedSeparation {
    a: VSet,
    b: VSet,
    gid: u64,
}

/// Unordered separation; the side with the smaller sorted vertex list is
/// stored first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Separation {
    first: VSet,
    second: VSet,
    gid: u64,
}

impl OrientedSeparation {
    pub fn a(&self) -> &VSet {
        &self.a
    }
    pub fn b(&self) -> &VSet {
        &self.b
    }
    pub fn gid(&self) -> u64 {
        self.gid
    }
    pub fn separator(&self) -> VSet {
        self.a.intersection(&self.b)
    }
    pub fn order(&self) -> usize {
        self.separator().len()
    }
    /// `A \ B`.
    pub fn strict_a(&self) -> VSet {
        self.a.difference(&self.b)
    }
    /// `B \ A`.
    pub fn strict_b(&self) -> VSet {
        self.b.difference(&self.a)
    }
    pub fn reverse(&self) -> OrientedSeparation {
        OrientedSeparation { a: self.b.clone(), b: self.a.clone(), gid: self.gid }
    }
    pub fn underlying(&self) -> Separation {
        Separation::from_sides(self.a.clone(), self.b.clone(), self.gid)
    }
    pub fn is_proper(&self) -> bool {
        !self.a.is_full() && !self.b.is_full()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "a": g.names_of(&self.a), "b": g.names_of(&self.b) })
    }
}

impl Separation {
    fn from_sides(x: VSet, y: VSet, gid: u64) -> Separation {
        if x <= y {
            Separation { first: x, second: y, gid }
        } else {
            Separation { first: y, second: x, gid }
        }
    }
    pub fn first(&self) -> &VSet {
        &self.first
    }
    pub fn second(&self) -> &VSet {
        &self.second
    }
    pub fn gid(&self) -> u64 {
        self.gid
    }
    pub fn separator(&self) -> VSet {
        self.first.intersection(&self.second)
    }
    pub fn order(&self) -> usize {
        self.separator().len()
    }
    /// `(first, second)`.
    pub fn forward(&self) -> OrientedSeparation {
        OrientedSeparation { a: self.first.clone(), b: self.second.clone(), gid: self.gid }
    }
    /// `(second, first)`.
    pub fn backward(&self) -> OrientedSeparation {
        self.forward().reverse()
    }
    pub fn orientations(&self) -> [OrientedSeparation; 2] {
        [self.forward(), self.backward()]
    }
    pub fn is_proper(&self) -> bool {
        self.forward().is_proper()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        self.forward().to_json(g)
    }
}

/// Validates `(a, b)` as an oriented separation of `g`.
pub fn make_separation(g: &Graph, a: &VSet, b: &VSet) -> Result<OrientedSeparation> {
    let cover = a.union(b);
    if !cover.is_full() {
        return Err(Error::CoverViolation { missing: g.names_of(&cover.complement()) });
    }
    let (sa, sb) = (a.difference(b), b.difference(a));
    for &(u, v) in g.edges() {
        if (sa.contains(u) && sb.contains(v)) || (sa.contains(v) && sb.contains(u)) {
            return Err(Error::CrossingEdge(g.name(u).to_string(), g.name(v).to_string()));
        }
    }
    Ok(OrientedSeparation { a: a.clone(), b: b.clone(), gid: g.fingerprint() })
}

/// Name-level convenience wrapper around [`make_separation`].
pub fn separation_by_names<S: AsRef<str>>(g: &Graph, a: &[S], b: &[S]) -> Result<OrientedSeparation> {
    make_separation(g, &g.vset(a)?, &g.vset(b)?)
}

pub fn separation_from_json(g: &Graph, v: &Value) -> Result<OrientedSeparation> {
    let side = |key: &str| -> Result<Vec<String>> {
        let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| Error::Malformed {
            context: format!("separation field `{key}`"),
            message: "expected an array of vertex names".into(),
        })?;
        arr.iter()
            .map(|x| {
                x.as_str().map(str::to_string).ok_or_else(|| Error::Malformed {
                    context: format!("separation field `{key}`"),
                    message: "vertex names must be strings".into(),
                })
            })
            .collect()
    };
    separation_by_names(g, &side("a")?, &side("b")?)
}

fn same_ambient(s: &OrientedSeparation, t: &OrientedSeparation) -> Result<()> {
    if s.gid != t.gid || s.a.universe() != t.a.universe() {
        Err(Error::AmbientMismatch)
    } else {
        Ok(())
    }
}

/// `(A, B) ≤ (C, D)` iff `A ⊆ C` and `B ⊇ D`.
pub fn leq(s: &OrientedSeparation, t: &OrientedSeparation) -> Result<bool> {
    same_ambient(s, t)?;
    Ok(s.a.is_subset(&t.a) && t.b.is_subset(&s.b))
}

/// `s < t`.
pub fn lt(s: &OrientedSeparation, t: &OrientedSeparation) -> Result<bool> {
    Ok(leq(s, t)? && s != t)
}

/// Corner form of `≤`: `(A ∩ D) \ S = ∅` with `S = (A ∩ B) ∩ (C ∩ D)`.
pub fn corner_leq(s: &OrientedSeparation, t: &OrientedSeparation) -> Result<bool> {
    same_ambient(s, t)?;
    let sep = s.separator().intersection(&t.separator());
    Ok(s.a.intersection(&t.b).difference(&sep).is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `lower ≤ upper` for the listed orientations.
    Nested { lower: OrientedSeparation, upper: OrientedSeparation },
    Cross,
}

impl Relation {
    pub fn is_nested(&self) -> bool {
        matches!(self, Relation::Nested { .. })
    }
}

fn candidate_pairs(s: &Separation, t: &Separation) -> Vec<(OrientedSeparation, OrientedSeparation)> {
    let mut out = Vec::with_capacity(8);
    for x in s.orientations() {
        for y in t.orientations() {
            out.push((x.clone(), y.clone()));
            out.push((y, x.clone()));
        }
    }
    out
}

/// First comparable orientation pair by the definition of `≤`.
pub fn nested_definitional(s: &Separation, t: &Separation) -> Result<Option<(OrientedSeparation, OrientedSeparation)>> {
    for (x, y) in candidate_pairs(s, t) {
        if leq(&x, &y)? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// First comparable orientation pair by the corner test.
pub fn nested_by_corners(s: &Separation, t: &Separation) -> Result<Option<(OrientedSeparation, OrientedSeparation)>> {
    for (x, y) in candidate_pairs(s, t) {
        if corner_leq(&x, &y)? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Crossing by the four-corner criterion: all of `A∩C, A∩D, B∩C, B∩D`
/// stay non-empty after removing `S`.
pub fn cross_by_corners(s: &Separation, t: &Separation) -> Result<bool> {
    same_ambient(&s.forward(), &t.forward())?;
    let sep = s.separator().intersection(&t.separator());
    let (a, b) = (&s.first, &s.second);
    let (c, d) = (&t.first, &t.second);
    Ok([a.intersection(c), a.intersection(d), b.intersection(c), b.intersection(d)]
        .iter()
        .all(|corner| !corner.difference(&sep).is_empty()))
}

/// Nested or crossing; the definitional and corner tests must agree.
pub fn relation(s: &Separation, t: &Separation) -> Result<Relation> {
    let def = nested_definitional(s, t)?;
    let corner = nested_by_corners(s, t)?;
    let crosses = cross_by_corners(s, t)?;
    if def != corner || def.is_some() == crosses {
        return Err(Error::CornerDisagreement);
    }
    Ok(match def {
        Some((lower, upper)) => Relation::Nested { lower, upper },
        None => Relation::Cross,
    })
}

pub fn is_nested(s: &Separation, t: &Separation) -> Result<bool> {
    Ok(relation(s, t)?.is_nested())
}

pub fn is_proper(s: &Separation) -> bool {
    s.is_proper()
}

/// Both strict sides contain a tight component of `g - (A ∩ B)`.
pub fn is_tight(g: &Graph, s: &OrientedSeparation) -> bool {
    let x = s.separator();
    let tight = tight_components(g, &x);
    let (sa, sb) = (s.strict_a(), s.strict_b());
    tight.iter().any(|k| k.is_subset(&sa)) && tight.iter().any(|k| k.is_subset(&sb))
}

/// Every separation of order at most `max_order`, in canonical order.
/// Improper separations are included. `budget` bounds the number of
/// separator candidates examined.
pub fn enumerate_separations(g: &Graph, max_order: usize, budget: u64) -> Result<Vec<Separation>> {
    g.require_connected()?;
    let n = g.n();
    let gid = g.fingerprint();
    let mut seen = BTreeSet::new();
    let mut examined = 0u64;
    let mut current = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    // Iterative subset enumeration in size-then-lexicographic order.
    for size in 0..=max_order.min(n) {
        stack.clear();
        stack.extend(0..size);
        loop {
            examined += 1;
            if examined > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            let sep = VSet::from_indices(n, stack.iter().copied());
            current.clear();
            current.extend(components(g, &sep));
            let c = current.len();
            // The first component stays on the left, halving the symmetric choices.
            let choices: u64 = if c == 0 { 1 } else { 1u64 << (c - 1) };
            for mask in 0..choices {
                let mut left = sep.clone();
                let mut right = sep.clone();
                for (k, comp) in current.iter().enumerate() {
                    let to_right = k > 0 && (mask >> (k - 1)) & 1 == 1;
                    if to_right {
                        right.union_with(comp);
                    } else {
                        left.union_with(comp);
                    }
                }
                seen.insert(Separation::from_sides(left, right, gid));
            }
            if !next_subset(&mut stack, n) {
                break;
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn next_subset(stack: &mut [usize], n: usize) -> bool {
    let k = stack.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if stack[i] < n - k + i {
            stack[i] += 1;
            for j in i + 1..k {
                stack[j] = stack[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    Strict,
    Weak,
    Arbitrary,
}

/// Finite window of a sequence of oriented separations of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationSequence {
    items: Vec<OrientedSeparation>,
    kind: SequenceKind,
}

impl SeparationSequence {
    /// Strictly increasing sequence.
    pub fn new(items: Vec<OrientedSeparation>) -> Result<Self> {
        Self::checked(items, SequenceKind::Strict)
    }

    /// Increasing, equal neighbours allowed.
    pub fn weakly_increasing(items: Vec<OrientedSeparation>) -> Result<Self> {
        Self::checked(items, SequenceKind::Weak)
    }

    /// No monotonicity requirement.
    pub fn arbitrary(items: Vec<OrientedSeparation>) -> Result<Self> {
        Self::checked(items, SequenceKind::Arbitrary)
    }

    fn checked(items: Vec<OrientedSeparation>, kind: SequenceKind) -> Result<Self> {
        for (i, w) in items.windows(2).enumerate() {
            same_ambient(&w[0], &w[1])?;
            let ok = match kind {
                SequenceKind::Strict => lt(&w[0], &w[1])?,
                SequenceKind::Weak => leq(&w[0], &w[1])?,
                SequenceKind::Arbitrary => true,
            };
            if !ok {
                let label = if kind == SequenceKind::Strict { "strictly increasing" } else { "increasing" };
                return Err(Error::NotIncreasing { index: i + 1, kind: label });
            }
        }
        Ok(SeparationSequence { items, kind })
    }

    pub fn items(&self) -> &[OrientedSeparation] {
        &self.items
    }
    pub fn len(&self) -> usize {
        self.items.len()
    }
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
    pub fn kind(&self) -> SequenceKind {
        self.kind
    }
    pub fn orders(&self) -> Vec<usize> {
        self.items.iter().map(OrientedSeparation::order).collect()
    }
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "items": self.items.iter().map(|s| s.to_json(g)).collect::<Vec<_>>() })
    }
    pub fn from_json(g: &Graph, v: &Value) -> Result<Self> {
        let items = v.get("items").and_then(Value::as_array).ok_or_else(|| Error::Malformed {
            context: "sequence".into(),
            message: "expected field `items`".into(),
        })?;
        Self::new(items.iter().map(|x| separation_from_json(g, x)).collect::<Result<_>>()?)
    }
}

/// `(⋃ A_i, ⋂ B_i)`.
pub fn supremum(g: &Graph, seq: &SeparationSequence) -> Result<OrientedSeparation> {
    let first = seq.items.first().ok_or(Error::EmptySequence)?;
    let mut a = first.a.clone();
    let mut b = first.b.clone();
    for s in &seq.items[1..] {
        a.union_with(&s.a);
        b.intersect_with(&s.b);
    }
    make_separation(g, &a, &b)
}

/// Every item of `lower` lies below some item of `upper`.
pub fn dominates(upper: &SeparationSequence, lower: &SeparationSequence) -> Result<bool> {
    for t in &lower.items {
        let mut found = false;
        for s in &upper.items {
            if leq(t, s)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn interlaced(x: &SeparationSequence, y: &SeparationSequence) -> Result<bool> {
    Ok(dominates(x, y)? && dominates(y, x)?)
}

/// Least window index from which the traces of `x` on the separator and on
/// the strict left side agree with those of the supremum.
pub fn pushing_index(g: &Graph, seq: &SeparationSequence, x: &VSet) -> Result<usize> {
    let sup = supremum(g, seq)?;
    if !x.is_subset(&sup.a) {
        return Err(Error::Precondition(format!(
            "vertices {:?} lie outside the left side of the supremum",
            g.names_of(&x.difference(&sup.a))
        )));
    }
    let target = (x.intersection(&sup.separator()), x.intersection(&sup.strict_a()));
    let matches = |s: &OrientedSeparation| {
        (x.intersection(&s.separator()), x.intersection(&s.strict_a())) == target
    };
    let mut index = None;
    for (i, s) in seq.items.iter().enumerate().rev() {
        if matches(s) {
            index = Some(i);
        } else {
            break;
        }
    }
    index.ok_or(Error::WindowExhausted)
}

/// Pairwise nested set of separations of one graph, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NestedSet {
    members: Vec<Separation>,
}

impl NestedSet {
    pub fn new(members: Vec<Separation>) -> Result<Self> {
        let set = Self::unchecked(members);
        if let Some((i, j)) = set.crossing_pair()? {
            return Err(Error::Precondition(format!("members {i} and {j} cross")));
        }
        Ok(set)
    }

    /// Sorted and deduplicated, without the nestedness check; for reports
    /// on candidate sets.
    pub fn unchecked(mut members: Vec<Separation>) -> Self {
        members.sort();
        members.dedup();
        NestedSet { members }
    }

    pub fn members(&self) -> &[Separation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Separation) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn crossing_pair(&self) -> Result<Option<(usize, usize)>> {
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                if !is_nested(&self.members[i], &self.members[j])? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "members": self.members.iter().map(|s| s.to_json(g)).collect::<Vec<_>>() })
    }

    pub fn from_json_unchecked(g: &Graph, v: &Value) -> Result<Self> {
        let items = v.get("members").and_then(Value::as_array).ok_or_else(|| Error::Malformed {
            context: "nested set".into(),
            message: "expected field `members`".into(),
        })?;
        let members = items
            .iter()
            .map(|x| separation_from_json(g, x).map(|s| s.underlying()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::unchecked(members))
    }
}
