//! Separation chains given layer by layer on a layered presentation.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph_core::family::{grid_name, CliqueChain, LayeredPresentation};
use crate::graph_core::Graph;
use crate::separations::{make_separation, separation_from_json, OrientedSeparation, SeparationSequence};

/// Strictly increasing sequences on several layers of one presentation.
/// Item `i` agrees between layers: same `A`, same separator, and the `B`
/// side on the smaller layer is the restriction of the larger one.
#[derive(Clone, Debug)]
pub struct LayerChain {
    layers: Vec<(usize, SeparationSequence)>,
}

impl LayerChain {
    /// Layers are sorted ascending; coherence is checked between each pair
    /// of successive layers.
    pub fn new(p: &LayeredPresentation, mut layers: Vec<(usize, SeparationSequence)>) -> Result<Self> {
        layers.sort_by_key(|(m, _)| *m);
        for w in layers.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition(format!("layer {} listed twice", w[0].0)));
            }
        }
        for (m, seq) in &layers {
            let g = p.layer(*m)?;
            if let Some(s) = seq.items().first() {
                if s.gid() != g.fingerprint() {
                    return Err(Error::AmbientMismatch);
                }
            }
        }
        for w in layers.windows(2) {
            let ((m, lo), (m2, hi)) = (&w[0], &w[1]);
            let (g, g2) = (p.layer(*m)?, p.layer(*m2)?);
            for (i, (x, y)) in lo.items().iter().zip(hi.items()).enumerate() {
                if !coherent(g, x, g2, y) {
                    return Err(Error::IncoherentChain { item: i, layer: *m, next: *m2 });
                }
            }
        }
        Ok(LayerChain { layers })
    }

    pub fn layers(&self) -> &[(usize, SeparationSequence)] {
        &self.layers
    }

    pub fn horizons(&self) -> Vec<usize> {
        self.layers.iter().map(|(m, _)| *m).collect()
    }

    pub fn to_json(&self, p: &LayeredPresentation) -> Result<Value> {
        let mut out = Vec::new();
        for (m, seq) in &self.layers {
            let g = p.layer(*m)?;
            out.push(json!({ "layer": m, "items": seq.to_json(g)["items"].clone() }));
        }
        Ok(json!({ "layers": out }))
    }

    pub fn from_json(p: &LayeredPresentation, v: &Value) -> Result<Self> {
        let malformed = |msg: &str| Error::Malformed { context: "chain".into(), message: msg.into() };
        let arr = v.get("layers").and_then(Value::as_array).ok_or_else(|| malformed("expected `layers`"))?;
        let mut layers = Vec::new();
        for entry in arr {
            let m = entry.get("layer").and_then(Value::as_u64).ok_or_else(|| malformed("expected `layer`"))? as usize;
            let g = p.layer(m)?;
            let items = entry.get("items").and_then(Value::as_array).ok_or_else(|| malformed("expected `items`"))?;
            let seq = items.iter().map(|x| separation_from_json(g, x)).collect::<Result<Vec<_>>>()?;
            layers.push((m, SeparationSequence::new(seq)?));
        }
        LayerChain::new(p, layers)
    }
}

fn coherent(g: &Graph, x: &OrientedSeparation, g2: &Graph, y: &OrientedSeparation) -> bool {
    let names = |h: &Graph, s: &crate::vset::VSet| h.names_of(s);
    let ya = g.transfer(g2, y.a());
    let yb = g.transfer(g2, y.b());
    names(g, x.a()) == names(g2, y.a())
        && names(g, &x.separator()) == names(g2, &y.separator())
        && *x.b() == yb
        && ya == *x.a()
}

/// The family's reference chain on layer `m`:
/// - `ray`: cuts after each vertex, `({x:0..x:i}, {x:i..x:m})` for `i ≤ m`;
/// - `clique_chain`: `s_n` for `n < m`;
/// - `grid` quadrant: layer cuts `{max(x,y) ≤ i}` against `{max(x,y) ≥ i}`
///   for `i ≤ m`; strip: row cuts `{y ≤ i}` against `{y ≥ i}`.
///
/// `double_ray` has none: a cut along one half keeps the whole other half
/// on its small side, which grows with the layer.
pub fn standard_sequence(p: &LayeredPresentation, m: usize) -> Result<SeparationSequence> {
    let g = p.layer(m)?;
    let mut items = Vec::new();
    match p.family.as_str() {
        "ray" => {
            for i in 0..=m {
                let a: Vec<String> = (0..=i).map(|j| format!("x:{j}")).collect();
                let b: Vec<String> = (i..=m).map(|j| format!("x:{j}")).collect();
                items.push(make_separation(g, &g.vset(&a)?, &g.vset(&b)?)?);
            }
        }
        "clique_chain" => {
            let cc = CliqueChain::new(p)?;
            for n in 0..m {
                let (a, b) = cc.s_sides(n, m)?;
                items.push(make_separation(g, &a, &b)?);
            }
        }
        "grid" => {
            let width = p.params.width;
            let w = width.unwrap_or(m + 1);
            for i in 0..=m {
                let (mut a, mut b) = (Vec::new(), Vec::new());
                for x in 0..w {
                    for y in 0..=m {
                        let level = if width.is_some() { y } else { x.max(y) };
                        if level <= i {
                            a.push(grid_name(x, y));
                        }
                        if level >= i {
                            b.push(grid_name(x, y));
                        }
                    }
                }
                items.push(make_separation(g, &g.vset(&a)?, &g.vset(&b)?)?);
            }
        }
        other => {
            return Err(Error::InvalidParams(format!("no reference chain for family {other}")));
        }
    }
    SeparationSequence::new(items)
}

/// Reference chains on the given layers.
pub fn standard_chain(p: &LayeredPresentation, layers: &[usize]) -> Result<LayerChain> {
    let seqs = layers
        .iter()
        .map(|&m| standard_sequence(p, m).map(|s| (m, s)))
        .collect::<Result<Vec<_>>>()?;
    LayerChain::new(p, seqs)
}
