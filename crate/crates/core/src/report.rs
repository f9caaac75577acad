//! Report envelope shared by the CLI: command name, input-file hashes,
//! and a command-specific JSON payload, written atomically. Reports
//! deliberately carry no wall-clock data so identical inputs reproduce
//! identical bytes.

use crate::covers::{Cover, PartWitness, PlannerTable};
use crate::error::{Error, Result};
use crate::homotopy::FenceWitness;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub payload: Value,
}

pub fn hash_file(path: &Path) -> Result<InputHash> {
    let bytes = std::fs::read(path)?;
    let mut h = Sha256::new();
    h.update(&bytes);
    Ok(InputHash {
        path: path.display().to_string(),
        sha256: format!("{:x}", h.finalize()),
    })
}

/// Write-then-rename so readers never observe a half-written report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    use std::io::Write;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn fence_view(fence: &FenceWitness) -> Value {
    json!(fence.serialize_steps())
}

pub fn cover_view(cover: &Cover) -> Value {
    let parts: Vec<Vec<String>> = cover.parts.iter().map(|p| p.labels()).collect();
    let witnesses: Vec<Value> = cover
        .witnesses
        .iter()
        .map(|w| match w {
            PartWitness::Null(f) => json!({"null_homotopy": fence_view(f)}),
            PartWitness::Planner(fs) => {
                json!({"projection_fences": fs.iter().map(fence_view).collect::<Vec<_>>()})
            }
        })
        .collect();
    json!({"parts": parts, "witnesses": witnesses})
}

/// `codomain` is the codomain of `f`, used to label the path points.
pub fn planner_view(table: &PlannerTable, codomain: &crate::space::FiniteSpace) -> Value {
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|e| {
            let path: Vec<String> = e
                .path
                .iter()
                .map(|&p| codomain.label(p).to_string())
                .collect();
            json!({
                "tuple": table.subset.space.label(e.product_index),
                "path": path,
                "waypoints": e.waypoints,
            })
        })
        .collect();
    json!({"subset": table.subset.labels(), "entries": entries})
}
