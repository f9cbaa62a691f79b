//! One function per subcommand; each returns an [`Outcome`] or an error.

use serde_json::{json, Value};
use tangle_core::chains::{standard_chain, standard_sequence, LayerChain};
use tangle_core::ends::{
    packing_growth, ray_classes, thick_end_pipeline, thin_end_bound, Direction, PackingTable,
    DEFAULT_PATH_THRESHOLD,
};
use tangle_core::graph_core::family::LayeredPresentation;
use tangle_core::graph_core::Graph;
use tangle_core::limits::{
    check_distinguishes_later, check_interlaced_pair, clique_chain_faithful_levels, clique_chain_witnesses, construct_interlaced,
    limit_separator_growth, pseudo_tight_check, thin_out,
};
use tangle_core::separations::{is_tight, make_separation, supremum, NestedSet, SeparationSequence};
use tangle_core::tangles::{check_pretangle, check_tangle, enumerate_tangles, AnyTangle, Orienter, PreTangle};
use tangle_core::tree_of_tangles::{
    build_tree_of_tangles, exhaustiveness_evidence, induce_tree_decomposition, verify_tree_decomposition,
    verify_tree_of_tangles, Exhaustiveness, TreeDecomposition,
};

use crate::io::{self, input, parse, require, CliError, CliResult};
use crate::{Args, Command, Outcome};

pub fn dispatch(args: &Args) -> CliResult<Outcome> {
    match args.command {
        Command::Generate => generate(args),
        Command::Tangles => tangles(args),
        Command::Tot => tot(args),
        Command::Decompose => decompose(args),
        Command::Limits => limits(args),
        Command::Interlace => interlace(args),
        Command::Ends => ends(args),
        Command::Verify => verify(args),
    }
}

fn order(args: &Args) -> CliResult<usize> {
    args.order.ok_or_else(|| CliError::Usage("this command needs --order".into()))
}

/// Applies `f` to every item on up to `threads` scoped workers, keeping
/// input order.
fn par_map<T: Sync, R: Send>(threads: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn generate(args: &Args) -> CliResult<Outcome> {
    if args.family.is_none() {
        return Err(CliError::Usage("generate needs --family and --horizon".into()));
    }
    let p = io::presentation(args)?;
    let mut layers = Vec::new();
    for m in 0..=p.horizon() {
        let g = p.layer(m)?;
        layers.push(json!({
            "layer": m,
            "vertices": g.n(),
            "edges": g.edges().len(),
            "boundary": g.names_of(p.boundary(m)?),
        }));
    }
    let rays: Vec<Value> = p.rays().iter().map(|r| json!({ "label": r.label, "vertices": r.vertices })).collect();
    Ok(Outcome::pass(json!({
        "presentation": p.spec_json(),
        "layers": layers,
        "rays": rays,
        "graph": p.layer(p.horizon())?.to_json(),
    })))
}

fn tangles(args: &Args) -> CliResult<Outcome> {
    let (g, _) = io::graph(args)?;
    let k = order(args)?;
    let ts = enumerate_tangles(&g, k, args.budget)?;
    Ok(Outcome::pass(json!({
        "order": k,
        "count": ts.len(),
        "tangles": ts.iter().map(|t| t.to_json(&g)).collect::<Vec<_>>(),
    })))
}

fn orienters(ts: &[PreTangle]) -> Vec<&dyn Orienter> {
    ts.iter().map(|t| t as &dyn Orienter).collect()
}

fn tot(args: &Args) -> CliResult<Outcome> {
    let (g, _) = io::graph(args)?;
    let k = order(args)?;
    let ts = enumerate_tangles(&g, k, args.budget)?;
    let pool = orienters(&ts);
    let n = build_tree_of_tangles(&g, &pool, args.budget)?;
    let report = verify_tree_of_tangles(&g, &n, &pool, args.budget)?;
    let td = induce_tree_decomposition(&g, &n)?;
    Ok(Outcome {
        passes: report.passes(),
        result: json!({
            "order": k,
            "tangle_count": ts.len(),
            "nested_set": n.to_json(&g),
            "report": report.to_json(),
        }),
        dot: Some(td.to_dot(&g)),
        csv: None,
    })
}

fn nested_set(g: &Graph, args: &Args, i: usize) -> CliResult<NestedSet> {
    let path = input(args, i, "nested set")?;
    let v = parse(path)?;
    Ok(NestedSet::from_json_unchecked(g, require(&v, &["members"], "nested set", path)?)?)
}

fn decompose(args: &Args) -> CliResult<Outcome> {
    let (g, used) = io::graph(args)?;
    let n = nested_set(&g, args, used)?;
    if let Some((i, j)) = n.crossing_pair()? {
        return Ok(Outcome {
            passes: false,
            result: json!({ "nested": false, "crossing_pair": [i, j], "nested_set": n.to_json(&g) }),
            dot: None,
            csv: None,
        });
    }
    let td = induce_tree_decomposition(&g, &n)?;
    let ts = match args.order {
        Some(k) => enumerate_tangles(&g, k, args.budget)?,
        None => Vec::new(),
    };
    let report = verify_tree_decomposition(&g, &td, &n, &orienters(&ts), args.budget)?;
    Ok(Outcome {
        passes: report.passes(),
        result: json!({ "nested": true, "decomposition": td.to_json(&g), "report": report.to_json(&g) }),
        dot: Some(td.to_dot(&g)),
        csv: None,
    })
}

fn chain(args: &Args, p: &LayeredPresentation) -> CliResult<LayerChain> {
    let path = if args.family.is_some() { args.input.first() } else { args.input.get(1) };
    match path {
        Some(path) => {
            let v = parse(path)?;
            Ok(LayerChain::from_json(p, require(&v, &["layers"], "chain", path)?)?)
        }
        None => {
            let layers: Vec<usize> = (0..=p.horizon()).collect();
            Ok(standard_chain(p, &layers)?)
        }
    }
}

fn limits(args: &Args) -> CliResult<Outcome> {
    let p = io::presentation(args)?;
    let chain = chain(args, &p)?;
    let verdict = exhaustiveness_evidence(&p, &chain)?;
    let growth = if verdict.verdict == Exhaustiveness::NonExhaustiveWitness {
        Some(limit_separator_growth(&p, &chain)?)
    } else {
        None
    };
    let (top, seq) = chain.layers().last().ok_or_else(|| CliError::Usage("empty chain".into()))?;
    let g = p.layer(*top)?;
    let sup = supremum(g, seq)?;
    let pseudo = if sup.strict_b().is_empty() {
        None
    } else {
        Some(pseudo_tight_check(g, seq, p.boundary(*top)?, None)?)
    };
    let passes = pseudo.as_ref().is_none_or(|r| r.passes());
    Ok(Outcome {
        passes,
        result: json!({
            "verdict": verdict.to_json(),
            "growth": growth.as_ref().map(|t| t.to_json()),
            "pseudo_tight": pseudo.as_ref().map(|r| r.to_json()),
            "evidence_only": true,
        }),
        dot: None,
        csv: Some(growth.map(|t| t.to_csv()).unwrap_or_else(|| "horizon,separator_size\n".into())),
    })
}

struct InterlaceInputs {
    g: Graph,
    n: NestedSet,
    seq: SeparationSequence,
    pool: Vec<AnyTangle>,
    declared_growth: bool,
}

fn interlace_inputs(args: &Args) -> CliResult<InterlaceInputs> {
    if args.family.is_some() {
        let p = io::presentation(args)?;
        let h = p.horizon();
        if p.family != "clique_chain" || h < 2 {
            return Err(CliError::Usage("interlace without inputs needs clique_chain with --horizon ≥ 2".into()));
        }
        let g = p.layer(h)?.clone();
        let all = standard_sequence(&p, h)?;
        let n = NestedSet::new(all.items().iter().map(|s| s.underlying()).collect())?;
        // Later cliques are separated more cheaply on G_h than in the
        // full graph; keep to the ones that are not.
        let levels = clique_chain_faithful_levels(h);
        let seq = SeparationSequence::new(all.items()[..levels - 1].to_vec())?;
        let pool = clique_chain_witnesses(&p, h)?.into_iter().take(levels).map(AnyTangle::Witness).collect();
        return Ok(InterlaceInputs { g, n, seq, pool, declared_growth: true });
    }
    let (g, _) = io::graph(args)?;
    let n = nested_set(&g, args, 1)?;
    let path = input(args, 2, "sequence")?;
    let v = parse(path)?;
    let seq = SeparationSequence::from_json(&g, require(&v, &["items"], "sequence", path)?)?;
    let path = input(args, 3, "pool")?;
    let v = parse(path)?;
    let doc = require(&v, &["tangles"], "pool", path)?;
    let pool = doc["tangles"]
        .as_array()
        .ok_or_else(|| CliError::Usage("pool `tangles` must be an array".into()))?
        .iter()
        .map(|t| AnyTangle::from_json(&g, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InterlaceInputs { g, n, seq, pool, declared_growth: false })
}

fn interlace(args: &Args) -> CliResult<Outcome> {
    let InterlaceInputs { g, n, seq, pool, declared_growth } = interlace_inputs(args)?;
    let refs: Vec<&dyn Orienter> = pool.iter().map(|t| t as &dyn Orienter).collect();
    let ip = construct_interlaced(&g, &n, &seq, &refs, args.budget)?;
    let report = check_interlaced_pair(&g, &ip, &refs, args.budget)?;
    let thinned = thin_out(&ip, declared_growth)?;
    let thinned_report = check_interlaced_pair(&g, &thinned.pair, &refs, args.budget)?;
    let later = check_distinguishes_later(&g, &thinned.pair, &refs, args.budget)?;
    Ok(Outcome {
        passes: report.passes() && thinned_report.passes() && later.is_none(),
        result: json!({
            "pool": pool.iter().map(|t| t.to_json(&g)).collect::<Vec<_>>(),
            "pair": ip.to_json(&g),
            "report": report.to_json(&g),
            "thinned": thinned.to_json(&g),
            "thinned_report": thinned_report.to_json(&g),
            "distinguishes_later": later.is_none(),
            "distinguishes_later_witness": later.map(|(i, j)| json!([i, j])),
            "evidence_only": true,
        }),
        dot: None,
        csv: None,
    })
}

fn ends(args: &Args) -> CliResult<Outcome> {
    let p = io::presentation(args)?;
    let h = p.horizon();
    let classes = ray_classes(&p, h, DEFAULT_PATH_THRESHOLD)?;
    let bounds = par_map(args.threads, &classes, |d| thin_end_bound(&p, d, h));
    let mut thin = Vec::new();
    for (d, b) in classes.iter().zip(bounds) {
        let b = b?;
        thin.push(json!({
            "direction": d.to_json(),
            "bound": b.as_ref().map(|t| t.bound),
            "orders": b.as_ref().map(|t| t.orders.clone()),
        }));
    }
    let pipeline = match standard_chain(&p, &(0..=h).collect::<Vec<_>>()) {
        Ok(chain) => {
            let (top, seq) = chain.layers().last().expect("layers 0..=h");
            let n = NestedSet::new(seq.items().iter().map(|s| s.underlying()).collect())?;
            let pool = if p.family == "clique_chain" {
                clique_chain_witnesses(&p, *top)?.into_iter().take(clique_chain_faithful_levels(*top)).collect()
            } else {
                Vec::new()
            };
            let refs: Vec<&dyn Orienter> = pool.iter().map(|t| t as &dyn Orienter).collect();
            Some(thick_end_pipeline(&p, &n, &chain, &refs, args.budget)?)
        }
        Err(tangle_core::Error::InvalidParams(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let table = match pipeline.as_ref().and_then(|r| r.stages.get(3)).map(|s| &s.witnesses["rows"]) {
        Some(Value::Array(rows)) => PackingTable {
            rows: rows.iter().filter_map(|r| Some((r[0].as_u64()? as usize, r[1].as_u64()? as usize))).collect(),
        },
        _ => fixed_base_packing(&p, &classes[0])?,
    };
    Ok(Outcome::pass(json!({
        "horizon": h,
        "classes": classes.iter().map(Direction::to_json).collect::<Vec<_>>(),
        "thin_bounds": thin,
        "pipeline": pipeline.as_ref().map(|r| r.to_json()),
        "packing": table.rows.iter().map(|(m, k)| json!({ "horizon": m, "packing": k })).collect::<Vec<_>>(),
        "evidence_only": true,
    }))
    .with_csv(table.to_csv()))
}

/// Packing from the first vertex of the direction's representative ray.
fn fixed_base_packing(p: &LayeredPresentation, d: &Direction) -> CliResult<PackingTable> {
    let ray = p
        .rays()
        .iter()
        .find(|r| r.label == d.representative())
        .ok_or_else(|| CliError::Usage("direction without a declared ray".into()))?;
    let base = vec![ray.vertices[0].clone()];
    let first = p.entry_layer(&base[0]).unwrap_or(0).max(1);
    let horizons: Vec<usize> = (first..=p.horizon()).collect();
    Ok(packing_growth(p, d, &base, &horizons)?)
}

impl Outcome {
    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn verify(args: &Args) -> CliResult<Outcome> {
    let (g, used) = io::graph(args)?;
    let path = input(args, used, "artifact")?;
    let v = parse(path)?;
    if let Some(doc) = io::find_object(&v, &["nodes", "bags"]) {
        let td = TreeDecomposition::from_json(&g, doc)?;
        let n = match args.input.get(used + 1) {
            Some(_) => nested_set(&g, args, used + 1)?,
            None => {
                let mut members = Vec::new();
                for k in 0..td.edges.len() {
                    let (a, b) = td.edge_sides(k);
                    members.push(make_separation(&g, &a, &b)?.underlying());
                }
                NestedSet::unchecked(members)
            }
        };
        let ts = match args.order {
            Some(k) => enumerate_tangles(&g, k, args.budget)?,
            None => Vec::new(),
        };
        let report = verify_tree_decomposition(&g, &td, &n, &orienters(&ts), args.budget)?;
        return Ok(Outcome {
            passes: report.passes(),
            result: json!({ "artifact": "tree_decomposition", "report": report.to_json(&g) }),
            dot: None,
            csv: None,
        });
    }
    if let Some(doc) = io::find_object(&v, &["members"]) {
        let n = NestedSet::from_json_unchecked(&g, doc)?;
        let ts = enumerate_tangles(&g, order(args)?, args.budget)?;
        let report = verify_tree_of_tangles(&g, &n, &orienters(&ts), args.budget)?;
        return Ok(Outcome {
            passes: report.passes(),
            result: json!({ "artifact": "nested_set", "tangle_count": ts.len(), "report": report.to_json() }),
            dot: None,
            csv: None,
        });
    }
    if let Some(doc) = io::find_object(&v, &["order_bound", "orientation"]) {
        let t = PreTangle::from_json(&g, doc)?;
        let pre = check_pretangle(&g, &t, args.budget)?;
        let tangle = check_tangle(&g, &t)?;
        return Ok(Outcome {
            passes: pre.valid() && tangle.valid(),
            result: json!({
                "artifact": "tangle",
                "pretangle": pre.to_json(&g),
                "tangle": tangle.to_json(&g),
            }),
            dot: None,
            csv: None,
        });
    }
    if let Some(doc) = io::find_object(&v, &["items"]) {
        let seq = SeparationSequence::from_json(&g, doc)?;
        let untight: Vec<usize> =
            (0..seq.len()).filter(|&i| seq.items()[i].is_proper() && !is_tight(&g, &seq.items()[i])).collect();
        return Ok(Outcome {
            passes: untight.is_empty(),
            result: json!({
                "artifact": "sequence",
                "strictly_increasing": true,
                "orders": seq.orders(),
                "untight_items": untight,
            }),
            dot: None,
            csv: None,
        });
    }
    Err(CliError::Usage(format!("{}: unrecognised artifact", path.display())))
}
