//! Unit vertex-capacity max-flow on the split-vertex digraph.
//!
//! Vertex `v` becomes an arc `v_in -> v_out` of capacity 1 (or unbounded when
//! the vertex may not be cut); every edge `uv` becomes the arcs
//! `u_out -> v_in` and `v_out -> u_in` of unbounded capacity.

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::vset::VSet;
use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: u32,
    rev: usize,
}

/// A solved flow network between two vertex sets.
pub struct SplitFlow<'g> {
    g: &'g Graph,
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    value: usize,
    vertex_arc: Vec<usize>,
}

impl<'g> SplitFlow<'g> {
    fn inn(v: usize) -> usize {
        2 * v
    }
    fn out(v: usize) -> usize {
        2 * v + 1
    }
    fn source(&self) -> usize {
        2 * self.g.n()
    }
    fn sink(&self) -> usize {
        2 * self.g.n() + 1
    }

    /// Builds the network and runs augmenting-path max-flow. Vertices in
    /// `uncuttable` get unbounded capacity.
    pub fn solve(g: &'g Graph, s: &VSet, t: &VSet, uncuttable: &VSet) -> Self {
        let n = g.n();
        let inf = (n as u32) + 1;
        let mut f = SplitFlow {
            g,
            arcs: Vec::new(),
            head: vec![Vec::new(); 2 * n + 2],
            value: 0,
            vertex_arc: vec![0; n],
        };
        for v in 0..n {
            let cap = if uncuttable.contains(v) { inf } else { 1 };
            f.vertex_arc[v] = f.add_arc(Self::inn(v), Self::out(v), cap);
        }
        for &(u, v) in g.edges() {
            f.add_arc(Self::out(u), Self::inn(v), inf);
            f.add_arc(Self::out(v), Self::inn(u), inf);
        }
        let (src, snk) = (f.source(), f.sink());
        for v in s.iter() {
            f.add_arc(src, Self::inn(v), inf);
        }
        for v in t.iter() {
            f.add_arc(Self::out(v), snk, inf);
        }
        f.run(inf as usize);
        f
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, rev: id + 1 });
        self.arcs.push(Arc { to: from, cap: 0, rev: id });
        self.head[from].push(id);
        self.head[to].push(id + 1);
        id
    }

    fn run(&mut self, limit: usize) {
        let (src, snk) = (self.source(), self.sink());
        loop {
            if self.value >= limit {
                return;
            }
            let mut pred: Vec<Option<usize>> = vec![None; self.head.len()];
            let mut seen = vec![false; self.head.len()];
            seen[src] = true;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                if x == snk {
                    break;
                }
                for &a in &self.head[x] {
                    let arc = &self.arcs[a];
                    if arc.cap > 0 && !seen[arc.to] {
                        seen[arc.to] = true;
                        pred[arc.to] = Some(a);
                        queue.push_back(arc.to);
                    }
                }
            }
            if !seen[snk] {
                return;
            }
            let mut x = snk;
            while let Some(a) = pred[x] {
                self.arcs[a].cap -= 1;
                let r = self.arcs[a].rev;
                self.arcs[r].cap += 1;
                x = self.arcs[r].to;
            }
            self.value += 1;
        }
    }

    /// Maximum number of disjoint paths, capped at `|V| + 1` when no finite
    /// cut exists.
    pub fn value(&self) -> usize {
        self.value
    }

    fn flow_on(&self, a: usize) -> u32 {
        // Forward arcs have even ids; flow equals the residual of the twin.
        self.arcs[self.arcs[a].rev].cap
    }

    /// Decomposes the flow into vertex paths. Only meaningful when every
    /// vertex has unit capacity.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let n = self.g.n();
        let mut used: Vec<u32> = (0..self.arcs.len())
            .map(|a| if a % 2 == 0 { self.flow_on(a) } else { 0 })
            .collect();
        let (src, snk) = (self.source(), self.sink());
        let mut out = Vec::new();
        loop {
            let mut walk = vec![src];
            let mut arcs_taken: Vec<usize> = Vec::new();
            let mut x = src;
            let mut found = false;
            while x != snk {
                let next = self.head[x]
                    .iter()
                    .copied()
                    .find(|&a| a % 2 == 0 && used[a] > 0);
                let Some(a) = next else { break };
                used[a] -= 1;
                x = self.arcs[a].to;
                if let Some(pos) = walk.iter().position(|&y| y == x) {
                    // Drop a flow cycle.
                    walk.truncate(pos + 1);
                    arcs_taken.truncate(pos);
                } else {
                    walk.push(x);
                    arcs_taken.push(a);
                }
                if x == snk {
                    found = true;
                }
            }
            if !found {
                break;
            }
            let mut path = Vec::new();
            for &node in &walk {
                if node < 2 * n && node % 2 == 0 {
                    path.push(node / 2);
                }
            }
            out.push(path);
        }
        out.sort();
        out
    }

    fn residual_reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &a in &self.head[x] {
                let arc = &self.arcs[a];
                let (y, open) = if forward {
                    (arc.to, arc.cap > 0)
                } else {
                    (arc.to, self.arcs[arc.rev].cap > 0)
                };
                if open && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Converts a source-side node set of a minimum cut into `(A, B)`:
    /// `A \ B` holds vertices with both split nodes inside, the separator
    /// holds vertices whose `in` node alone is inside.
    fn sides_of(&self, inside: &[bool]) -> (VSet, VSet) {
        let n = self.g.n();
        let mut a = VSet::empty(n);
        let mut b = VSet::empty(n);
        for v in 0..n {
            let (i, o) = (inside[Self::inn(v)], inside[Self::out(v)]);
            if i {
                a.insert(v);
            }
            if !(i && o) {
                b.insert(v);
            }
        }
        (a, b)
    }

    /// The minimum cut closest to the source, as a separation `(A, B)`.
    pub fn source_side_cut(&self) -> (VSet, VSet) {
        self.sides_of(&self.residual_reach(self.source(), true))
    }

    /// All minimum cuts as separations `(A, B)` with the source side in `A`.
    /// Enumerates closed node sets of the residual graph; errors once more
    /// than `budget` closed sets have been produced.
    pub fn min_cut_separations(&self, budget: u64) -> Result<Vec<(VSet, VSet)>> {
        let nodes = self.head.len();
        let from_src = self.residual_reach(self.source(), true);
        let to_snk = self.residual_reach(self.sink(), false);
        let free: Vec<usize> = (0..nodes).filter(|&x| !from_src[x] && !to_snk[x]).collect();
        let mut slot = vec![usize::MAX; nodes];
        for (i, &x) in free.iter().enumerate() {
            slot[x] = i;
        }
        // Residual successor lists restricted to free nodes.
        let mut succ = vec![Vec::new(); free.len()];
        let mut pred = vec![Vec::new(); free.len()];
        for (i, &x) in free.iter().enumerate() {
            for &a in &self.head[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && slot[arc.to] != usize::MAX {
                    succ[i].push(slot[arc.to]);
                    pred[slot[arc.to]].push(i);
                }
            }
        }
        let mut state = vec![0i8; free.len()];
        let mut out = Vec::new();
        let mut produced = 0u64;
        self.enumerate_closures(
            0,
            &mut state,
            &succ,
            &pred,
            &free,
            &from_src,
            &mut out,
            &mut produced,
            budget,
        )?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_closures(
        &self,
        idx: usize,
        state: &mut Vec<i8>,
        succ: &[Vec<usize>],
        pred: &[Vec<usize>],
        free: &[usize],
        base: &[bool],
        out: &mut Vec<(VSet, VSet)>,
        produced: &mut u64,
        budget: u64,
    ) -> Result<()> {
        let mut idx = idx;
        while idx < state.len() && state[idx] != 0 {
            idx += 1;
        }
        if idx == state.len() {
            *produced += 1;
            if *produced > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            let mut inside = base.to_vec();
            for (i, &x) in free.iter().enumerate() {
                if state[i] == 1 {
                    inside[x] = true;
                }
            }
            out.push(self.sides_of(&inside));
            return Ok(());
        }
        for choice in [1i8, -1i8] {
            let saved = state.clone();
            let links = if choice == 1 { succ } else { pred };
            let mut stack = vec![idx];
            state[idx] = choice;
            let mut ok = true;
            while let Some(x) = stack.pop() {
                for &y in &links[x] {
                    if state[y] == 0 {
                        state[y] = choice;
                        stack.push(y);
                    } else if state[y] != choice {
                        ok = false;
                    }
                }
            }
            if ok {
                self.enumerate_closures(idx + 1, state, succ, pred, free, base, out, produced, budget)?;
            }
            *state = saved;
        }
        Ok(())
    }
}

/// Maximum family of pairwise vertex-disjoint `s`-`t` paths.
pub fn disjoint_paths(g: &Graph, s: &VSet, t: &VSet) -> Vec<Vec<usize>> {
    SplitFlow::solve(g, s, t, &VSet::empty(g.n())).paths()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> Graph {
        let name = |x: usize, y: usize| format!("{x}:{y}");
        let mut vs = Vec::new();
        let mut es = Vec::new();
        for x in 0..w {
            for y in 0..h {
                vs.push(name(x, y));
                if x + 1 < w {
                    es.push((name(x, y), name(x + 1, y)));
                }
                if y + 1 < h {
                    es.push((name(x, y), name(x, y + 1)));
                }
            }
        }
        Graph::new(vs, es).unwrap()
    }

    #[test]
    fn grid_columns_carry_four_paths() {
        let g = grid(4, 4);
        let s = g.vset(&["0:0", "0:1", "0:2", "0:3"]).unwrap();
        let t = g.vset(&["3:0", "3:1", "3:2", "3:3"]).unwrap();
        let paths = disjoint_paths(&g, &s, &t);
        assert_eq!(paths.len(), 4);
        let mut seen = VSet::empty(g.n());
        for p in &paths {
            for &v in p {
                assert!(!seen.contains(v));
                seen.insert(v);
            }
            assert!(s.contains(p[0]) && t.contains(*p.last().unwrap()));
        }
    }

    #[test]
    fn overlapping_terminals_give_trivial_paths() {
        let g = Graph::new(
            ["a", "b", "c"].map(String::from),
            [("a".to_string(), "b".to_string()), ("b".to_string(), "c".to_string())],
        )
        .unwrap();
        let s = g.vset(&["a", "b"]).unwrap();
        let t = g.vset(&["b", "c"]).unwrap();
        let paths = disjoint_paths(&g, &s, &t);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0], vec![1]);
    }

    #[test]
    fn min_cuts_of_a_path_are_its_inner_vertices() {
        let g = Graph::new(
            ["a", "b", "c", "d"].map(String::from),
            [("a", "b"), ("b", "c"), ("c", "d")].map(|(x, y)| (x.to_string(), y.to_string())),
        )
        .unwrap();
        let s = g.vset(&["a"]).unwrap();
        let t = g.vset(&["d"]).unwrap();
        let flow = SplitFlow::solve(&g, &s, &t, &VSet::empty(4));
        assert_eq!(flow.value(), 1);
        let cuts = flow.min_cut_separations(100).unwrap();
        let seps: Vec<Vec<usize>> = cuts.iter().map(|(a, b)| a.intersection(b).to_vec()).collect();
        assert_eq!(seps.len(), 4);
        for sep in &seps {
            assert_eq!(sep.len(), 1);
        }
    }
}
