//! JSON sidecar header describing a raw little-endian scalar volume.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use persifold::ScalarType;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeHeader {
    /// Per-axis vertex counts, 2 or 3 axes.
    pub dims: Vec<usize>,
    /// One of f32|f64|i8|i16|i32|i64|u8|u16|u32|u64.
    pub scalar_type: String,
    /// Always little-endian; present for self-description.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub byte_order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl VolumeHeader {
    pub fn scalar_type(&self) -> Result<ScalarType> {
        ScalarType::parse(&self.scalar_type)
            .with_context(|| format!("unknown scalar type tag `{}`", self.scalar_type))
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        let ty = self.scalar_type()?;
        if let Some(order) = &self.byte_order {
            if order != "little" {
                bail!("unsupported byte order `{order}` (payloads are little-endian)");
            }
        }
        let _ = ty;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<VolumeHeader> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading header {}", path.display()))?;
        let header: VolumeHeader = serde_json::from_str(&text)
            .with_context(|| format!("parsing header {}", path.display()))?;
        header.validate()?;
        Ok(header)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("header serializes");
        std::fs::write(path, text + "\n")
            .with_context(|| format!("writing header {}", path.display()))
    }
}
