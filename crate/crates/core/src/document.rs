//! JSON persistence of tiling windows. Every coordinate is an exact scalar
//! written as text, so a document reloads to identical values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point};
use crate::scalar::Scalar;
use crate::tiling::{PlacedStrip, Tile, TileLabel, TilingWindow, WindowKind};

pub const FORMAT: &str = "equitile-tiling/1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    /// Squared-edge budget used by `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_budget: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonRecord {
    pub label: TileLabel,
    pub vertices: Vec<Point>,
}

/// Generator identity only; no timestamps, so identical inputs give
/// byte-identical files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            generator: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingDocument {
    pub format: String,
    pub kind: WindowKind,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strips: Vec<PlacedStrip>,
    pub polygons: Vec<PolygonRecord>,
    pub provenance: Provenance,
}

impl TilingDocument {
    pub fn from_window(w: &TilingWindow, parameters: Parameters) -> Self {
        TilingDocument {
            format: FORMAT.to_string(),
            kind: w.kind,
            parameters,
            strips: w.strips.clone(),
            polygons: w
                .tiles
                .iter()
                .map(|t| PolygonRecord {
                    label: t.label,
                    vertices: t.polygon.vertices().to_vec(),
                })
                .collect(),
            provenance: Provenance::default(),
        }
    }

    /// Rebuilds the window; a non-convex or misoriented polygon is reported
    /// as [`Error::InvalidPolygon`] naming the tile.
    pub fn to_window(&self) -> Result<TilingWindow> {
        let tiles = self
            .polygons
            .iter()
            .map(|r| {
                ConvexPolygon::new(r.vertices.clone())
                    .map(|polygon| Tile {
                        label: r.label,
                        polygon,
                    })
                    .map_err(|e| Error::InvalidPolygon(format!("{}: {e}", r.label)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TilingWindow {
            kind: self.kind,
            tiles,
            strips: self.strips.clone(),
            horizon: self.parameters.horizon,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TilingDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format != FORMAT {
            return Err(Error::Parse(format!("unsupported format {:?}", doc.format)));
        }
        Ok(doc)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
