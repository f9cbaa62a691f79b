//! Layered presentations of locally finite graphs and the generated families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::vset::VSet;

pub const FAMILIES: [&str; 5] = ["clique_chain", "ray", "double_ray", "grid", "binary_tree"];

/// Family parameters as they appear in a presentation document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    /// Grid only: a fixed number of columns turns the quadrant into a strip.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub family: String,
    pub params: FamilyParams,
}

/// A ray named by the generator, listed by its vertices in ray order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredRay {
    pub label: String,
    pub vertices: Vec<String>,
}

/// Monotone tower `G_0 ⊆ … ⊆ G_h` of finite truncations.
#[derive(Clone, Debug)]
pub struct LayeredPresentation {
    pub family: String,
    pub params: FamilyParams,
    layers: Vec<Graph>,
    boundaries: Vec<VSet>,
    rays: Vec<DeclaredRay>,
    sizes: Vec<usize>,
}

type Layer = (Vec<String>, Vec<(String, String)>);

impl LayeredPresentation {
    pub fn horizon(&self) -> usize {
        self.params.horizon
    }

    pub fn layer(&self, m: usize) -> Result<&Graph> {
        self.layers.get(m).ok_or(Error::HorizonExceeded { m, horizon: self.horizon() })
    }

    pub fn boundary(&self, m: usize) -> Result<&VSet> {
        self.boundaries.get(m).ok_or(Error::HorizonExceeded { m, horizon: self.horizon() })
    }

    /// Declared rays, each cut to the vertices present in the final layer.
    pub fn rays(&self) -> &[DeclaredRay] {
        &self.rays
    }

    /// Clique sizes in use (clique_chain only; empty otherwise).
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// First layer containing the named vertex.
    pub fn entry_layer(&self, name: &str) -> Option<usize> {
        self.layers.iter().position(|g| g.index_of(name).is_some())
    }

    pub fn spec_json(&self) -> Value {
        json!({ "family": self.family, "params": self.params })
    }
}

/// `G_m` and its boundary.
pub fn truncate(p: &LayeredPresentation, m: usize) -> Result<(Graph, VSet)> {
    Ok((p.layer(m)?.clone(), p.boundary(m)?.clone()))
}

pub fn load_presentation(text: &str) -> Result<LayeredPresentation> {
    let spec: PresentationSpec = serde_json::from_str(text).map_err(|e| Error::Malformed {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    generate_family(&spec.family, &spec.params)
}

pub fn generate_family(name: &str, params: &FamilyParams) -> Result<LayeredPresentation> {
    let h = params.horizon;
    let mut sizes = Vec::new();
    let build: Box<dyn Fn(usize) -> Layer> = match name {
        "clique_chain" => {
            sizes = clique_sizes(params.sizes.as_deref(), h + 2)?;
            let s = sizes.clone();
            Box::new(move |m| clique_chain_layer(&s, m))
        }
        "ray" => Box::new(ray_layer),
        "double_ray" => Box::new(double_ray_layer),
        "grid" => {
            if params.width == Some(0) {
                return Err(Error::InvalidParams("grid width must be positive".into()));
            }
            let w = params.width;
            Box::new(move |m| grid_layer(w, m))
        }
        "binary_tree" => Box::new(binary_tree_layer),
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    if name != "clique_chain" && params.sizes.is_some() {
        return Err(Error::InvalidParams(format!("`sizes` does not apply to {name}")));
    }
    if name != "grid" && params.width.is_some() {
        return Err(Error::InvalidParams(format!("`width` does not apply to {name}")));
    }
    // One hidden layer beyond the horizon fixes boundary(h).
    let mut graphs = Vec::with_capacity(h + 2);
    for m in 0..=h + 1 {
        let (vs, es) = build(m);
        graphs.push(Graph::new(vs, es)?);
    }
    let mut boundaries = Vec::with_capacity(h + 1);
    for m in 0..=h {
        let (g, next) = (&graphs[m], &graphs[m + 1]);
        let mut b = g.empty_set();
        for &(u, v) in next.edges() {
            let (iu, iv) = (g.index_of(next.name(u)), g.index_of(next.name(v)));
            match (iu, iv) {
                (Some(x), None) => b.insert(x),
                (None, Some(y)) => b.insert(y),
                _ => {}
            }
        }
        boundaries.push(b);
    }
    let top = &graphs[h];
    let rays = declared_rays(name, params.width, h)
        .into_iter()
        .map(|(label, vs)| DeclaredRay {
            label,
            vertices: vs.into_iter().filter(|v| top.index_of(v).is_some()).collect(),
        })
        .filter(|r| !r.vertices.is_empty())
        .collect();
    graphs.truncate(h + 1);
    Ok(LayeredPresentation {
        family: name.to_string(),
        params: params.clone(),
        layers: graphs,
        boundaries,
        rays,
        sizes,
    })
}

/// Clique sizes for levels `0..levels`. Missing levels double the previous
/// size; the default is `2^(n+4)`.
fn clique_sizes(given: Option<&[usize]>, levels: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(levels);
    for n in 0..levels {
        let c = match given {
            None => 1usize << (n + 4),
            Some(s) if n < s.len() => s[n],
            Some([]) => {
                return Err(Error::InvalidParams("`sizes` must not be empty".into()))
            }
            Some(_) => 2 * out[n - 1],
        };
        let need = (1usize << n) + (1usize << (n + 1));
        if c < need {
            return Err(Error::InvalidParams(format!(
                "clique size {c} at level {n} cannot host {need} designated vertices"
            )));
        }
        out.push(c);
    }
    Ok(out)
}

pub fn cc_u(n: usize, i: usize) -> String {
    // u_i^{n+1} is identified with v_i^n.
    if n == 0 {
        format!("u:0:{i}")
    } else {
        cc_v(n - 1, i)
    }
}

pub fn cc_v(n: usize, i: usize) -> String {
    format!("v:{n}:{i}")
}

pub fn cc_r(n: usize, m: usize) -> String {
    format!("r:{n}:{m}")
}

/// The attachment vertex `w^m = v_1^m`.
pub fn cc_w(m: usize) -> String {
    cc_v(m, 1)
}

/// Vertex names of the level-`n` clique.
pub fn cc_clique(sizes: &[usize], n: usize) -> Vec<String> {
    let (nu, nv) = (1usize << n, 1usize << (n + 1));
    let mut out: Vec<String> = (1..=nu).map(|i| cc_u(n, i)).collect();
    out.extend((1..=nv).map(|i| cc_v(n, i)));
    out.extend((1..=sizes[n] - nu - nv).map(|i| format!("x:{n}:{i}")));
    out
}

fn clique_chain_layer(sizes: &[usize], m: usize) -> Layer {
    let mut vs = std::collections::BTreeSet::new();
    let mut es = Vec::new();
    for n in 0..=m {
        let k = cc_clique(sizes, n);
        for (i, a) in k.iter().enumerate() {
            vs.insert(a.clone());
            for b in &k[i + 1..] {
                // Consecutive cliques share the v^{n-1} vertices; keep each edge once.
                let shared = n > 0 && a.starts_with(&format!("v:{}:", n - 1))
                    && b.starts_with(&format!("v:{}:", n - 1));
                if !shared {
                    es.push((a.clone(), b.clone()));
                }
            }
        }
    }
    for n in 0..=m {
        for i in 0..=m {
            vs.insert(cc_r(n, i));
            if i > 0 {
                es.push((cc_r(n, i - 1), cc_r(n, i)));
            }
            if n <= i {
                es.push((cc_r(n, i), cc_w(i)));
            }
        }
    }
    (vs.into_iter().collect(), es)
}

fn ray_layer(m: usize) -> Layer {
    let vs: Vec<String> = (0..=m).map(|i| format!("x:{i}")).collect();
    let es = (1..=m).map(|i| (format!("x:{}", i - 1), format!("x:{i}"))).collect();
    (vs, es)
}

fn double_ray_layer(m: usize) -> Layer {
    let mut vs: Vec<String> = (0..=m).map(|i| format!("p:{i}")).collect();
    vs.extend((1..=m).map(|i| format!("n:{i}")));
    let mut es: Vec<(String, String)> =
        (1..=m).map(|i| (format!("p:{}", i - 1), format!("p:{i}"))).collect();
    if m >= 1 {
        es.push(("p:0".into(), "n:1".into()));
    }
    es.extend((2..=m).map(|i| (format!("n:{}", i - 1), format!("n:{i}"))));
    (vs, es)
}

pub fn grid_name(x: usize, y: usize) -> String {
    format!("g:{x}:{y}")
}

fn grid_layer(width: Option<usize>, m: usize) -> Layer {
    let w = width.unwrap_or(m + 1);
    let mut vs = Vec::new();
    let mut es = Vec::new();
    for x in 0..w {
        for y in 0..=m {
            vs.push(grid_name(x, y));
            if x + 1 < w {
                es.push((grid_name(x, y), grid_name(x + 1, y)));
            }
            if y < m {
                es.push((grid_name(x, y), grid_name(x, y + 1)));
            }
        }
    }
    (vs, es)
}

fn tree_name(bits: &str) -> String {
    format!("t:{bits}")
}

fn binary_tree_layer(m: usize) -> Layer {
    let mut vs = vec![tree_name("")];
    let mut es = Vec::new();
    let mut frontier = vec![String::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for b in &frontier {
            for c in ["0", "1"] {
                let child = format!("{b}{c}");
                vs.push(tree_name(&child));
                es.push((tree_name(b), tree_name(&child)));
                next.push(child);
            }
        }
        frontier = next;
    }
    (vs, es)
}

fn declared_rays(name: &str, width: Option<usize>, h: usize) -> Vec<(String, Vec<String>)> {
    let len = h + 1;
    match name {
        "ray" => vec![("R".into(), (0..len).map(|i| format!("x:{i}")).collect())],
        "double_ray" => vec![
            ("R+".into(), (0..len).map(|i| format!("p:{i}")).collect()),
            ("R-".into(), (1..len).map(|i| format!("n:{i}")).collect()),
        ],
        "grid" => {
            let cols = width.unwrap_or(len);
            (0..cols)
                .map(|x| (format!("col:{x}"), (0..len).map(|y| grid_name(x, y)).collect()))
                .collect()
        }
        "binary_tree" => vec![
            ("L".into(), (0..len).map(|d| tree_name(&"0".repeat(d))).collect()),
            ("R".into(), (0..len).map(|d| tree_name(&"1".repeat(d))).collect()),
        ],
        "clique_chain" => {
            let mut out: Vec<(String, Vec<String>)> = (0..len)
                .map(|n| (format!("R{n}"), (0..len).map(|i| cc_r(n, i)).collect()))
                .collect();
            out.push(("W".into(), (0..len).map(cc_w).collect()));
            out
        }
        _ => Vec::new(),
    }
}

/// Designated clique_chain structure at layer `m`, by vertex name.
pub struct CliqueChain<'p> {
    pub p: &'p LayeredPresentation,
}

impl<'p> CliqueChain<'p> {
    pub fn new(p: &'p LayeredPresentation) -> Result<Self> {
        if p.family != "clique_chain" {
            return Err(Error::Precondition(format!("{} is not clique_chain", p.family)));
        }
        Ok(CliqueChain { p })
    }

    pub fn clique(&self, n: usize) -> Vec<String> {
        cc_clique(self.p.sizes(), n)
    }

    /// Separator `S_n = {v_1^i : i < n} ∪ {v_j^n : j ≤ 2^(n+1)}`.
    pub fn separator(&self, n: usize) -> Vec<String> {
        let mut s: Vec<String> = (0..n).map(cc_w).collect();
        s.extend((1..=(1usize << (n + 1))).map(|j| cc_v(n, j)));
        s.sort();
        s
    }

    /// Sides of `s_n` in `G_m` oriented toward the later cliques and the
    /// rays: `A` holds the cliques `0..=n`, `B` the separator and the rest.
    pub fn s_sides(&self, n: usize, m: usize) -> Result<(VSet, VSet)> {
        let g = self.p.layer(m)?;
        let mut a = g.empty_set();
        for k in 0..=n.min(m) {
            a.union_with(&g.vset(&self.clique(k))?);
        }
        let sep = g.vset(&self.separator(n))?;
        let b = a.complement().union(&sep);
        Ok((a, b))
    }

    /// The limit separator prefix `{w^0, …, w^{m-1}}` seen in `G_m`.
    pub fn attachment_vertices(&self, upto: usize) -> Vec<String> {
        (0..upto).map(cc_w).collect()
    }
}

/// Per-vertex degree stabilization: the degree of every vertex in layers
/// past `entry + 1` equals its degree in the final layer.
pub fn degree_stabilization_violations(p: &LayeredPresentation) -> Vec<String> {
    let h = p.horizon();
    let top = p.layer(h).expect("horizon layer exists");
    let mut out = Vec::new();
    let mut entry: BTreeMap<&str, usize> = BTreeMap::new();
    for m in 0..=h {
        for name in p.layer(m).unwrap().names() {
            entry.entry(name.as_str()).or_insert(m);
        }
    }
    for (name, e) in entry {
        let final_deg = top.neighbours(top.index_of(name).unwrap()).len();
        for m in (e + 1)..=h {
            let g = p.layer(m).unwrap();
            if g.neighbours(g.index_of(name).unwrap()).len() != final_deg {
                out.push(name.to_string());
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: usize, sizes: Option<Vec<usize>>) -> FamilyParams {
        FamilyParams { horizon: h, sizes, width: None }
    }

    #[test]
    fn default_level_zero_clique_has_sixteen_vertices() {
        let p = generate_family("clique_chain", &params(1, None)).unwrap();
        assert_eq!(p.sizes()[0], 16);
        assert_eq!(CliqueChain::new(&p).unwrap().clique(0).len(), 16);
    }

    #[test]
    fn ray_truncation_three_is_p4() {
        let p = generate_family("ray", &params(3, None)).unwrap();
        let (g, b) = truncate(&p, 3).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.names_of(&b), vec!["x:3"]);
        let (g0, b0) = truncate(&p, 0).unwrap();
        assert_eq!(g0.n(), 1);
        assert_eq!(b0.len(), 1);
    }

    #[test]
    fn scaled_sizes_are_valid_and_small_sizes_rejected() {
        assert!(generate_family("clique_chain", &params(3, Some(vec![8, 12, 20, 36]))).is_ok());
        let e = generate_family("clique_chain", &params(3, Some(vec![8, 5, 20, 36]))).unwrap_err();
        assert!(matches!(e, Error::InvalidParams(_)));
        assert!(matches!(
            generate_family("moebius", &params(1, None)),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn truncation_beyond_horizon_is_an_error() {
        let p = generate_family("ray", &params(2, None)).unwrap();
        assert!(matches!(truncate(&p, 3), Err(Error::HorizonExceeded { m: 3, horizon: 2 })));
    }

    #[test]
    fn grid_truncation_two_is_three_by_three() {
        let p = generate_family("grid", &params(2, None)).unwrap();
        let (g, b) = truncate(&p, 2).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.edges().len(), 12);
        // The quadrant grows along its far row and column.
        let mut expect = vec!["g:0:2", "g:1:2", "g:2:0", "g:2:1", "g:2:2"];
        expect.sort();
        assert_eq!(g.names_of(&b), expect);
    }

    #[test]
    fn clique_chain_layer_one_counts() {
        let p = generate_family("clique_chain", &params(1, Some(vec![8, 12]))).unwrap();
        let (g, b) = truncate(&p, 1).unwrap();
        // Cliques 8 + 12 share two vertices; rays R0, R1 contribute 2 each.
        assert_eq!(g.n(), 8 + 12 - 2 + 4);
        // Boundary: v^1 (next clique) and the ray ends r:0:1, r:1:1.
        assert_eq!(b.len(), 4 + 2);
    }

    #[test]
    fn towers_are_monotone_and_induced() {
        for fam in FAMILIES {
            let p = generate_family(fam, &params(3, None)).unwrap();
            for m in 0..3 {
                let (a, b) = (p.layer(m).unwrap(), p.layer(m + 1).unwrap());
                let keep = b.vset(a.names()).unwrap();
                assert_eq!(&b.induced(&keep), a, "{fam} layer {m}");
            }
            assert!(degree_stabilization_violations(&p).is_empty(), "{fam}");
        }
    }
}
