use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::vset::VSet;

/// Finite simple undirected graph on string-named vertices. Vertex indices
/// follow the lexicographic order of the names.
#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    nbr: Vec<VSet>,
    edges: Vec<(usize, usize)>,
    fingerprint: u64,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl Graph {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut names: Vec<String> = vertices.into_iter().collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex {
                    vertex: w[0].clone(),
                    context: "vertices".into(),
                });
            }
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let n = names.len();
        let mut edge_set = BTreeSet::new();
        for (k, (u, v)) in edges.into_iter().enumerate() {
            let ctx = || format!("edges[{k}]");
            let iu = *index.get(&u).ok_or_else(|| Error::UnknownVertex {
                vertex: u.clone(),
                context: ctx(),
            })?;
            let iv = *index.get(&v).ok_or_else(|| Error::UnknownVertex {
                vertex: v.clone(),
                context: ctx(),
            })?;
            if iu == iv {
                return Err(Error::LoopEdge { vertex: u, context: ctx() });
            }
            if !edge_set.insert((iu.min(iv), iu.max(iv))) {
                return Err(Error::DuplicateEdge { u, v, context: ctx() });
            }
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        let mut nbr = vec![VSet::empty(n); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
            nbr[u].insert(v);
            nbr[v].insert(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut h = DefaultHasher::new();
        names.hash(&mut h);
        edges.hash(&mut h);
        Ok(Graph { names, index, adj, nbr, edges, fingerprint: h.finish() })
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Graph> {
        Graph::new(
            vertices.iter().map(|s| s.to_string()),
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string())),
        )
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn nbr_set(&self, v: usize) -> &VSet {
        &self.nbr[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.nbr[u].contains(v)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn empty_set(&self) -> VSet {
        VSet::empty(self.n())
    }

    pub fn full_set(&self) -> VSet {
        VSet::full(self.n())
    }

    /// Vertex set from names; unknown names are an error.
    pub fn vset<S: AsRef<str>>(&self, names: &[S]) -> Result<VSet> {
        let mut s = self.empty_set();
        for (k, x) in names.iter().enumerate() {
            let v = self.index_of(x.as_ref()).ok_or_else(|| Error::UnknownVertex {
                vertex: x.as_ref().to_string(),
                context: format!("set element {k}"),
            })?;
            s.insert(v);
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &VSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    /// Open neighbourhood of a vertex set.
    pub fn neighbourhood(&self, s: &VSet) -> VSet {
        let mut out = self.empty_set();
        for v in s.iter() {
            out.union_with(&self.nbr[v]);
        }
        out.difference_with(s);
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && components(self, &self.empty_set()).len() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.n() == 0 {
            Err(Error::EmptyGraph)
        } else if !self.is_connected() {
            Err(Error::Disconnected)
        } else {
            Ok(())
        }
    }

    /// Edges with both ends in `s`.
    pub fn edges_within(&self, s: &VSet) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| s.contains(*u) && s.contains(*v))
            .map(|(k, _)| k)
            .collect()
    }

    /// Induced subgraph on `keep`, with the original names.
    pub fn induced(&self, keep: &VSet) -> Graph {
        let vs = keep.iter().map(|v| self.names[v].clone());
        let es = self
            .edges
            .iter()
            .filter(|(u, v)| keep.contains(*u) && keep.contains(*v))
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()));
        Graph::new(vs, es).expect("induced subgraph of a valid graph is valid")
    }

    /// Re-expresses a vertex set of `other` in this graph by name; names
    /// absent here are dropped.
    pub fn transfer(&self, other: &Graph, s: &VSet) -> VSet {
        let mut out = self.empty_set();
        for v in s.iter() {
            if let Some(i) = self.index_of(other.name(v)) {
                out.insert(i);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|&(u, v)| json!([self.names[u], self.names[v]]))
            .collect();
        json!({ "edges": edges, "vertices": self.names })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Parses a graph document `{"vertices":[..],"edges":[[a,b],..]}`.
pub fn load_graph(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Malformed {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    Graph::new(doc.vertices, doc.edges)
}

/// Components of `g - removed`, ordered by their least vertex.
pub fn components(g: &Graph, removed: &VSet) -> Vec<VSet> {
    let n = g.n();
    let mut seen = removed.clone();
    let mut out = Vec::new();
    for start in 0..n {
        if seen.contains(start) {
            continue;
        }
        let mut comp = VSet::empty(n);
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            comp.insert(v);
            for &w in g.neighbours(v) {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Components `K` of `g - x` with `N(K) = x`.
pub fn tight_components(g: &Graph, x: &VSet) -> Vec<VSet> {
    components(g, x)
        .into_iter()
        .filter(|k| g.neighbourhood(k) == *x)
        .collect()
}
