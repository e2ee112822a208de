//! Finite tiling windows shared by the generators, the verifier and the
//! document format.

use serde::{Deserialize, Serialize};

use crate::geom::{ConvexPolygon, Point};
use crate::scalar::Scalar;
use crate::strip::{LabeledTriangle, TriangleId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TileLabel {
    Triangle(TriangleId),
    Pentagon { row: i64, col: i64, face: u8 },
    Other { index: usize },
}

impl std::fmt::Display for TileLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TileLabel::Triangle(id) => write!(f, "{id}"),
            TileLabel::Pentagon { row, col, face } => write!(f, "P[{row},{col}]_{face}"),
            TileLabel::Other { index } => write!(f, "tile#{index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub label: TileLabel,
    pub polygon: ConvexPolygon,
}

impl From<&LabeledTriangle> for Tile {
    fn from(t: &LabeledTriangle) -> Self {
        Tile {
            label: TileLabel::Triangle(t.id),
            polygon: t.polygon.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Strip,
    Plane,
    Supertile,
}

impl std::fmt::Display for WindowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WindowKind::Strip => "strip",
            WindowKind::Plane => "plane",
            WindowKind::Supertile => "supertile",
        })
    }
}

/// One sheared strip copy as placed in a plane window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedStrip {
    pub n: usize,
    pub delta: Scalar,
    pub reflected: bool,
    pub translation: Point,
    /// The strip covers `ℝ × [2k − 1, 2k + 1]`.
    pub band: i64,
}

#[derive(Clone, Debug)]
pub struct TilingWindow {
    pub kind: WindowKind,
    pub tiles: Vec<Tile>,
    pub strips: Vec<PlacedStrip>,
    pub horizon: u64,
}

impl TilingWindow {
    pub fn new(kind: WindowKind, tiles: Vec<Tile>, horizon: u64) -> Self {
        TilingWindow {
            kind,
            tiles,
            strips: Vec::new(),
            horizon,
        }
    }

    pub fn from_triangles(kind: WindowKind, triangles: &[LabeledTriangle], horizon: u64) -> Self {
        Self::new(kind, triangles.iter().map(Tile::from).collect(), horizon)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }
}
