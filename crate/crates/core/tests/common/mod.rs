//! Shared fixtures and brute-force oracles for the integration tests. The
//! oracles work on bitmasks straight from the definitions and share no code
//! with the library beyond reading a graph's vertices and edges.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangle_core::separations::{OrientedSeparation, Separation};
use tangle_core::tangles::PreTangle;
use tangle_core::{Graph, VSet};

pub const BUDGET: u64 = 50_000_000;

/// Random connected graph on `n` vertices: a random tree plus each other
/// edge with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let name = |i: usize| format!("v{i}");
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.insert((u, v));
            }
        }
    }
    Graph::new((0..n).map(name), edges.into_iter().map(|(u, v)| (name(u), name(v)))).unwrap()
}

/// Fixed corpus: `count` connected graphs with `lo..=hi` vertices and
/// mixed densities, reproducible from `seed`.
pub fn corpus(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let p = [0.15, 0.3, 0.5, 0.75][rng.gen_range(0..4)];
            random_connected(&mut rng, n, p)
        })
        .collect()
}

pub fn two_k4() -> Graph {
    let vs = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut es = Vec::new();
    for side in [&vs[..4], &vs[4..]] {
        for i in 0..4 {
            for j in i + 1..4 {
                es.push((side[i], side[j]));
            }
        }
    }
    es.push(("d", "e"));
    Graph::from_strs(&vs, &es).unwrap()
}

pub fn mask(s: &VSet) -> u64 {
    s.iter().fold(0u64, |m, i| m | 1 << i)
}

fn edge_masks(g: &Graph) -> Vec<u64> {
    g.edges().iter().map(|&(u, v)| (1u64 << u) | (1u64 << v)).collect()
}

/// `{A, B}` as a canonical pair of masks, smaller mask first.
pub type Pair = (u64, u64);

pub fn pair_of(s: &Separation) -> Pair {
    let (x, y) = (mask(s.first()), mask(s.second()));
    (x.min(y), x.max(y))
}

pub fn oriented_of(s: &OrientedSeparation) -> Pair {
    (mask(s.a()), mask(s.b()))
}

/// Every separation of order at most `k`, by assigning each vertex to
/// `A \ B`, `B \ A` or `A ∩ B` and keeping assignments with no edge across.
pub fn brute_separations(g: &Graph, k: usize) -> BTreeSet<Pair> {
    let n = g.n();
    let es = edge_masks(g);
    let mut out = BTreeSet::new();
    let mut digits = vec![0u8; n];
    loop {
        let (mut a, mut b, mut s) = (0u64, 0u64, 0u64);
        for (v, &d) in digits.iter().enumerate() {
            match d {
                0 => a |= 1 << v,
                1 => b |= 1 << v,
                _ => s |= 1 << v,
            }
        }
        let across = es.iter().any(|&e| e & a != 0 && e & b != 0);
        if !across && (s.count_ones() as usize) <= k {
            let (x, y) = (a | s, b | s);
            out.insert((x.min(y), x.max(y)));
        }
        // Next base-3 numeral.
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }
    out
}

/// Every tangle of order `k`: orientations of all separations of order
/// below `k` such that no one, two or three small sides have induced
/// subgraphs covering `g`. Plain backtracking; each tangle is the set of
/// its `(small, big)` pairs.
pub fn brute_tangles(g: &Graph, k: usize) -> BTreeSet<BTreeSet<Pair>> {
    let full_v = (1u64 << g.n()) - 1;
    let es = edge_masks(g);
    let full_e: u128 = (1u128 << es.len()) - 1;
    let inside = |s: u64| -> u128 {
        es.iter().enumerate().fold(0u128, |m, (i, &e)| if e & !s == 0 { m | 1 << i } else { m })
    };
    let mut seps: Vec<Pair> = if k == 0 { Vec::new() } else { brute_separations(g, k - 1).into_iter().collect() };
    seps.sort_by_key(|&(x, y)| (x & y).count_ones());
    let mut out = BTreeSet::new();
    let mut chosen: Vec<(u64, u128, Pair)> = Vec::new();
    fn covers(a: &(u64, u128, Pair), b: &(u64, u128, Pair), c: &(u64, u128, Pair), fv: u64, fe: u128) -> bool {
        a.0 | b.0 | c.0 == fv && a.1 | b.1 | c.1 == fe
    }
    fn go(
        i: usize,
        seps: &[Pair],
        chosen: &mut Vec<(u64, u128, Pair)>,
        out: &mut BTreeSet<BTreeSet<Pair>>,
        inside: &dyn Fn(u64) -> u128,
        fv: u64,
        fe: u128,
    ) {
        if i == seps.len() {
            out.insert(chosen.iter().map(|c| c.2).collect());
            return;
        }
        let (x, y) = seps[i];
        let options = if x == y { vec![(x, y)] } else { vec![(x, y), (y, x)] };
        for (small, big) in options {
            let new = (small, inside(small), (small, big));
            let bad = covers(&new, &new, &new, fv, fe)
                || chosen.iter().enumerate().any(|(p, a)| {
                    covers(&new, a, a, fv, fe) || chosen[p..].iter().any(|b| covers(&new, a, b, fv, fe))
                });
            if !bad {
                chosen.push(new);
                go(i + 1, seps, chosen, out, inside, fv, fe);
                chosen.pop();
            }
        }
    }
    go(0, &seps, &mut chosen, &mut out, &inside, full_v, full_e);
    out
}

pub fn tangle_pairs(t: &PreTangle) -> BTreeSet<Pair> {
    t.orientations().map(oriented_of).collect()
}

/// Least order of a separation the two tangles orient differently.
pub fn brute_distinguishing_order(x: &BTreeSet<Pair>, y: &BTreeSet<Pair>) -> Option<usize> {
    let by_sep = |t: &BTreeSet<Pair>| -> BTreeMap<Pair, Pair> {
        t.iter().map(|&(a, b)| ((a.min(b), a.max(b)), (a, b))).collect()
    };
    let (mx, my) = (by_sep(x), by_sep(y));
    mx.iter()
        .filter(|(s, o)| my.get(s).is_some_and(|p| p != *o))
        .map(|(s, _)| (s.0 & s.1).count_ones() as usize)
        .min()
}

/// Components of `g - removed`, as masks.
pub fn brute_components(g: &Graph, removed: u64) -> Vec<u64> {
    let n = g.n();
    let mut seen = removed;
    let mut out = Vec::new();
    for v in 0..n {
        if seen >> v & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << v;
        loop {
            let mut grow = comp;
            for &(a, b) in g.edges() {
                if comp >> a & 1 == 1 && removed >> b & 1 == 0 {
                    grow |= 1 << b;
                }
                if comp >> b & 1 == 1 && removed >> a & 1 == 0 {
                    grow |= 1 << a;
                }
            }
            if grow == comp {
                break;
            }
            comp = grow;
        }
        seen |= comp;
        out.push(comp);
    }
    out
}

pub fn brute_neighbourhood(g: &Graph, s: u64) -> u64 {
    let mut out = 0u64;
    for &(a, b) in g.edges() {
        if s >> a & 1 == 1 && s >> b & 1 == 0 {
            out |= 1 << b;
        }
        if s >> b & 1 == 1 && s >> a & 1 == 0 {
            out |= 1 << a;
        }
    }
    out
}

/// Both strict sides hold a component of `g - (A ∩ B)` whose
/// neighbourhood is all of `A ∩ B`.
pub fn brute_tight(g: &Graph, a: u64, b: u64) -> bool {
    let sep = a & b;
    let tight: Vec<u64> =
        brute_components(g, sep).into_iter().filter(|&c| brute_neighbourhood(g, c) == sep).collect();
    let (sa, sb) = (a & !sep, b & !sep);
    tight.iter().any(|&c| c & !sa == 0) && tight.iter().any(|&c| c & !sb == 0)
}

/// `(A, B) ≤ (C, D)` for masks.
pub fn mask_leq(s: Pair, t: Pair) -> bool {
    s.0 & !t.0 == 0 && t.1 & !s.1 == 0
}

/// Some orientations of the two separations are comparable.
pub fn brute_nested(s: Pair, t: Pair) -> bool {
    let flip = |p: Pair| (p.1, p.0);
    [s, flip(s)].iter().any(|&x| [t, flip(t)].iter().any(|&y| mask_leq(x, y) || mask_leq(y, x)))
}

/// Components of `g - removed` for graphs of any size, as sorted index lists.
pub fn components_of(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for v in 0..g.n() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbours(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest number of vertex-disjoint paths from `s` to `t` (a vertex in
/// both is a path on its own), by augmenting paths on the split graph.
/// Equals the least size of a vertex set meeting every `s`-`t` path.
pub fn menger(g: &Graph, s: &[usize], t: &[usize]) -> usize {
    let n = g.n();
    // Node 2v is v_in, 2v+1 is v_out, 2n the source, 2n+1 the sink.
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut cap: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    let mut adj = vec![Vec::new(); 2 * n + 2];
    let mut add = |cap: &mut BTreeMap<(usize, usize), i32>, a: usize, b: usize, c: i32| {
        *cap.entry((a, b)).or_insert(0) += c;
        cap.entry((b, a)).or_insert(0);
        adj[a].push(b);
        adj[b].push(a);
    };
    for v in 0..n {
        add(&mut cap, 2 * v, 2 * v + 1, 1);
    }
    for &(u, v) in g.edges() {
        add(&mut cap, 2 * u + 1, 2 * v, 1);
        add(&mut cap, 2 * v + 1, 2 * u, 1);
    }
    for &v in s {
        add(&mut cap, src, 2 * v, 1);
    }
    for &v in t {
        add(&mut cap, 2 * v + 1, snk, 1);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * n + 2];
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if prev[y] == usize::MAX && cap[&(x, y)] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[snk] == usize::MAX {
            return flow;
        }
        let mut y = snk;
        while y != src {
            let x = prev[y];
            *cap.get_mut(&(x, y)).unwrap() -= 1;
            *cap.get_mut(&(y, x)).unwrap() += 1;
            y = x;
        }
        flow += 1;
    }
}

pub fn indices<S: AsRef<str>>(g: &Graph, names: &[S]) -> Vec<usize> {
    names.iter().filter_map(|x| g.index_of(x.as_ref())).collect()
}
