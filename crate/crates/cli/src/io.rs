//! Reading input documents and writing self-describing reports.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tangle_core::graph_core::{generate_family, load_graph, load_presentation, FamilyParams, Graph, LayeredPresentation};
use tangle_core::Error;

use crate::Args;

/// Error for the CLI: either a library error or a problem with the
/// invocation itself.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn kind(&self) -> String {
        match self {
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
            CliError::Usage(_) => "Usage".into(),
            CliError::Io(..) => "Io".into(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
            CliError::Io(p, e) => format!("{}: {e}", p.display()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.message() } })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn parse(path: &Path) -> CliResult<Value> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Core(Error::Malformed {
            context: format!("{} line {} column {}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    })
}

/// First object (depth first, keys in document order) holding every key
/// in `keys`. Lets a report produced by one command feed another.
pub fn find_object<'v>(v: &'v Value, keys: &[&str]) -> Option<&'v Value> {
    match v {
        Value::Object(map) => {
            if keys.iter().all(|k| map.contains_key(*k)) {
                return Some(v);
            }
            map.values().find_map(|x| find_object(x, keys))
        }
        Value::Array(items) => items.iter().find_map(|x| find_object(x, keys)),
        _ => None,
    }
}

pub fn require<'v>(v: &'v Value, keys: &[&str], what: &str, path: &Path) -> CliResult<&'v Value> {
    find_object(v, keys).ok_or_else(|| {
        CliError::Core(Error::Malformed {
            context: path.display().to_string(),
            message: format!("no {what} found (expected keys {keys:?})"),
        })
    })
}

pub fn input<'a>(args: &'a Args, i: usize, what: &str) -> CliResult<&'a PathBuf> {
    args.input
        .get(i)
        .ok_or_else(|| CliError::Usage(format!("missing --input #{} ({what})", i + 1)))
}

pub fn presentation(args: &Args) -> CliResult<LayeredPresentation> {
    if let Some(family) = &args.family {
        let horizon = args.horizon.ok_or_else(|| CliError::Usage("--family needs --horizon".into()))?;
        let params = FamilyParams { horizon, sizes: args.sizes.clone(), width: args.width };
        return Ok(generate_family(family, &params)?);
    }
    let path = input(args, 0, "presentation")?;
    let v = parse(path)?;
    let spec = require(&v, &["family", "params"], "presentation", path)?;
    let text = json!({ "family": spec["family"], "params": spec["params"] }).to_string();
    Ok(load_presentation(&text)?)
}

/// The graph of `--input #1`, or the top layer of the generated family.
/// Returns the number of inputs consumed.
pub fn graph(args: &Args) -> CliResult<(Graph, usize)> {
    if args.family.is_some() {
        let p = presentation(args)?;
        return Ok((p.layer(p.horizon())?.clone(), 0));
    }
    let path = input(args, 0, "graph")?;
    let v = parse(path)?;
    let doc = require(&v, &["vertices", "edges"], "graph", path)?;
    Ok((load_graph(&doc.to_string())?, 1))
}

/// Hash of everything that determines the output: command, parameters and
/// input contents. Paths, `--output` and `--threads` are left out.
pub fn config_hash(command: &str, args: &Args) -> CliResult<String> {
    let mut inputs = Vec::new();
    for p in &args.input {
        let bytes = std::fs::read(p).map_err(|e| CliError::Io(p.clone(), e))?;
        inputs.push(hex::encode(Sha256::digest(&bytes)));
    }
    let config = json!({
        "command": command,
        "inputs": inputs,
        "family": args.family,
        "sizes": args.sizes,
        "width": args.width,
        "horizon": args.horizon,
        "order": args.order,
        "budget": args.budget,
        "format": args.format.name(),
    });
    Ok(hex::encode(Sha256::digest(config.to_string().as_bytes())))
}

pub fn emit(args: &Args, text: &str) -> CliResult<()> {
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
