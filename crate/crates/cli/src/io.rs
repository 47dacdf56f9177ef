//! Raw payload encoding/decoding and the diagram CSV format.

use anyhow::{bail, Context, Result};
use std::path::Path;

use persifold::{PersistenceDiagram, Scalar};

use crate::header::VolumeHeader;

pub fn decode_values<S: Scalar>(payload: &[u8], header: &VolumeHeader) -> Result<Vec<S>> {
    let width = std::mem::size_of::<S>();
    let expected = header.vertex_count() * width;
    if payload.len() != expected {
        bail!(
            "payload size mismatch: dims {:?} with {} need {} bytes, got {}",
            header.dims,
            header.scalar_type,
            expected,
            payload.len()
        );
    }
    Ok(payload.chunks_exact(width).map(S::read_le).collect())
}

pub fn encode_values<S: Scalar>(values: &[S]) -> Vec<u8> {
    let mut out = Vec::with_capacity(std::mem::size_of_val(values));
    for v in values {
        v.write_le(&mut out);
    }
    out
}

/// Fixed-order CSV with a mandatory header row. Scalar columns use the
/// shortest round-trip decimal form, so files are byte-stable.
pub fn diagram_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = String::from("birth,death,birthVertexId,deathVertexId,pairType,certain\n");
    for p in &diagram.pairs {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.birth,
            p.death,
            p.birth_vertex.0,
            p.death_vertex.0,
            p.pair_type.label(),
            p.certain
        ));
    }
    out
}

pub fn write_diagram_csv(diagram: &PersistenceDiagram, path: &Path) -> Result<()> {
    std::fs::write(path, diagram_csv(diagram))
        .with_context(|| format!("writing diagram {}", path.display()))
}
