//! Exact certification of a finite tiling window: unit areas, the
//! vertex-to-vertex property, pairwise incongruence and the edge budget.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geom::{
    congruence_key, congruent, interiors_disjoint, point_in_open_segment, signed_area,
    CongruenceKey, ConvexPolygon, Point,
};
use crate::scalar::Scalar;
use crate::tiling::{Tile, TileLabel, TilingWindow};

/// Offender lists are truncated to this many entries; counts stay exact.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct AreaOffender {
    pub tile: usize,
    pub label: TileLabel,
    pub area: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct AreaCheck {
    pub pass: bool,
    pub failures: usize,
    pub offenders: Vec<AreaOffender>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VtvOffender {
    pub vertex_tile: TileLabel,
    pub vertex: Point,
    pub edge_tile: TileLabel,
    pub edge: (Point, Point),
}

#[derive(Clone, Debug, Serialize)]
pub struct VtvCheck {
    pub pass: bool,
    pub failures: usize,
    pub offenders: Vec<VtvOffender>,
    /// Exact point-on-segment tests performed after spatial filtering.
    pub exact_tests: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruentPair {
    pub first: TileLabel,
    pub second: TileLabel,
    pub first_index: usize,
    pub second_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncongruenceCheck {
    pub pass: bool,
    pub classes: usize,
    /// Number of tiles that repeat an earlier tile's class.
    pub repeats: usize,
    pub offending: Option<CongruentPair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerimeterCheck {
    pub pass: bool,
    pub budget: Scalar,
    pub max_squared_edge: Scalar,
    pub max_edge_tile: Option<TileLabel>,
    pub max_perimeter: f64,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessSample {
    pub pass: bool,
    pub sampled_pairs: usize,
    pub overlapping: Vec<(TileLabel, TileLabel)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub window: String,
    pub tiles: usize,
    pub vertices: usize,
    pub edges: usize,
    pub unit_area: AreaCheck,
    pub vtv: VtvCheck,
    pub incongruence: IncongruenceCheck,
    pub perimeter: Option<PerimeterCheck>,
    pub disjointness: DisjointnessSample,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.unit_area.pass
            && self.vtv.pass
            && self.incongruence.pass
            && self.perimeter.as_ref().is_none_or(|p| p.pass)
            && self.disjointness.pass
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = |b: bool| if b { "pass" } else { "FAIL" };
        let _ = writeln!(s, "window {}", self.window);
        let _ = writeln!(
            s,
            "  tiles {}  vertices {}  edges {}  ({:.1} ms)",
            self.tiles, self.vertices, self.edges, self.wall_time_ms
        );
        let _ = writeln!(
            s,
            "  unit area      {} ({} offenders)",
            verdict(self.unit_area.pass),
            self.unit_area.failures
        );
        for o in &self.unit_area.offenders {
            let _ = writeln!(s, "    {} has area {}", o.label, o.area);
        }
        let _ = writeln!(
            s,
            "  vtv            {} ({} offenders)",
            verdict(self.vtv.pass),
            self.vtv.failures
        );
        for o in &self.vtv.offenders {
            let _ = writeln!(
                s,
                "    vertex {} of {} lies inside edge {} -> {} of {}",
                o.vertex, o.vertex_tile, o.edge.0, o.edge.1, o.edge_tile
            );
        }
        let _ = writeln!(
            s,
            "  incongruence   {} ({} classes, {} repeats)",
            verdict(self.incongruence.pass),
            self.incongruence.classes,
            self.incongruence.repeats
        );
        if let Some(p) = &self.incongruence.offending {
            let _ = writeln!(s, "    {} is congruent to {}", p.first, p.second);
        }
        match &self.perimeter {
            Some(p) => {
                let _ = writeln!(
                    s,
                    "  edge budget    {} (max squared edge {} <= {}, max perimeter {:.4})",
                    verdict(p.pass),
                    p.max_squared_edge,
                    p.budget,
                    p.max_perimeter
                );
            }
            None => {
                let _ = writeln!(s, "  edge budget    skipped");
            }
        }
        let _ = writeln!(
            s,
            "  disjointness   {} ({} sampled pairs)",
            verdict(self.disjointness.pass),
            self.disjointness.sampled_pairs
        );
        let _ = writeln!(s, "  overall        {}", verdict(self.passed()));
        s
    }
}

pub fn check_unit_areas(w: &TilingWindow) -> AreaCheck {
    let bad: Vec<AreaOffender> = w
        .tiles
        .iter()
        .enumerate()
        .filter_map(|(k, t)| {
            let area = signed_area(&t.polygon);
            (area != Scalar::one()).then_some(AreaOffender {
                tile: k,
                label: t.label,
                area,
            })
        })
        .collect();
    AreaCheck {
        pass: bad.is_empty(),
        failures: bad.len(),
        offenders: bad.into_iter().take(MAX_WITNESSES).collect(),
    }
}

/// Uniform grid over float approximations. Only used to find candidates;
/// every decision is taken by an exact predicate.
struct Grid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

const GRID_MARGIN: f64 = 1e-6;

impl Grid {
    fn cell_of(&self, x: f64, y: f64) -> (i64, i64) {
        (
            (x / self.cell).floor() as i64,
            (y / self.cell).floor() as i64,
        )
    }

    fn cells_of_box(&self, lo: (f64, f64), hi: (f64, f64)) -> impl Iterator<Item = (i64, i64)> {
        let a = self.cell_of(lo.0 - GRID_MARGIN, lo.1 - GRID_MARGIN);
        let b = self.cell_of(hi.0 + GRID_MARGIN, hi.1 + GRID_MARGIN);
        (a.0..=b.0).flat_map(move |i| (a.1..=b.1).map(move |j| (i, j)))
    }
}

fn bbox(points: &[(f64, f64)]) -> ((f64, f64), (f64, f64)) {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    (lo, hi)
}

fn approx_points(p: &ConvexPolygon) -> Vec<(f64, f64)> {
    p.vertices()
        .iter()
        .map(|v| (v.x.approx(), v.y.approx()))
        .collect()
}

/// Grid keyed by tile bounding boxes, cell size about the mean edge length.
fn tile_grid(tiles: &[Tile]) -> (Grid, Vec<Vec<(f64, f64)>>) {
    let approx: Vec<Vec<(f64, f64)>> = tiles.iter().map(|t| approx_points(&t.polygon)).collect();
    let (mut total, mut count) = (0.0, 0usize);
    for pts in &approx {
        let (lo, hi) = bbox(pts);
        total += (hi.0 - lo.0).max(hi.1 - lo.1);
        count += 1;
    }
    let cell = if count == 0 {
        1.0
    } else {
        (total / count as f64).max(1e-3)
    };
    let mut grid = Grid {
        cell,
        buckets: HashMap::new(),
    };
    for (k, pts) in approx.iter().enumerate() {
        let (lo, hi) = bbox(pts);
        let cells: Vec<_> = grid.cells_of_box(lo, hi).collect();
        for c in cells {
            grid.buckets.entry(c).or_default().push(k);
        }
    }
    (grid, approx)
}

/// Fails iff a vertex of one tile lies strictly inside an edge of another.
/// For interior-disjoint convex tiles this also rules out partially shared
/// edges: the end of a partial overlap is such a vertex.
pub fn check_vtv(w: &TilingWindow) -> VtvCheck {
    let (grid, approx) = tile_grid(&w.tiles);
    let mut offenders = Vec::new();
    let mut failures = 0;
    let mut exact_tests = 0;
    for (k, t) in w.tiles.iter().enumerate() {
        for (vi, v) in t.polygon.vertices().iter().enumerate() {
            let (x, y) = approx[k][vi];
            let mut seen: Vec<usize> = Vec::new();
            for c in grid.cells_of_box((x, y), (x, y)) {
                let Some(bucket) = grid.buckets.get(&c) else {
                    continue;
                };
                for &other in bucket {
                    if other == k || seen.contains(&other) {
                        continue;
                    }
                    seen.push(other);
                    for (a, b) in w.tiles[other].polygon.edges() {
                        exact_tests += 1;
                        if point_in_open_segment(v, a, b) {
                            failures += 1;
                            if offenders.len() < MAX_WITNESSES {
                                offenders.push(VtvOffender {
                                    vertex_tile: t.label,
                                    vertex: v.clone(),
                                    edge_tile: w.tiles[other].label,
                                    edge: (a.clone(), b.clone()),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    VtvCheck {
        pass: failures == 0,
        failures,
        offenders,
        exact_tests,
    }
}

/// Buckets tiles by their exact congruence key.
pub fn check_incongruence(w: &TilingWindow) -> IncongruenceCheck {
    let mut first_of: HashMap<CongruenceKey, usize> = HashMap::with_capacity(w.tiles.len());
    let mut repeats = 0;
    let mut offending: Option<CongruentPair> = None;
    for (k, t) in w.tiles.iter().enumerate() {
        let key = congruence_key(&t.polygon);
        match first_of.get(&key) {
            Some(&j) => {
                repeats += 1;
                if offending.is_none() {
                    offending = Some(CongruentPair {
                        first: w.tiles[j].label,
                        second: t.label,
                        first_index: j,
                        second_index: k,
                    });
                }
            }
            None => {
                first_of.insert(key, k);
            }
        }
    }
    IncongruenceCheck {
        pass: repeats == 0,
        classes: first_of.len(),
        repeats,
        offending,
    }
}

/// All congruent index pairs by direct comparison; for cross-checking the
/// bucketed scan.
pub fn congruent_pairs_bruteforce(w: &TilingWindow) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..w.tiles.len() {
        for j in i + 1..w.tiles.len() {
            if congruent(&w.tiles[i].polygon, &w.tiles[j].polygon) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn check_perimeter(w: &TilingWindow, budget: &Scalar) -> PerimeterCheck {
    let mut max_sq = Scalar::zero();
    let mut max_tile = None;
    let mut max_perimeter = 0.0f64;
    let mut failures = 0;
    for t in &w.tiles {
        for l in t.polygon.squared_edge_lengths() {
            if &l > budget {
                failures += 1;
            }
            if l > max_sq {
                max_sq = l;
                max_tile = Some(t.label);
            }
        }
        max_perimeter = max_perimeter.max(t.polygon.perimeter_f64());
    }
    PerimeterCheck {
        pass: failures == 0 && budget.is_positive(),
        budget: budget.clone(),
        max_squared_edge: max_sq,
        max_edge_tile: max_tile,
        max_perimeter,
        failures,
    }
}

/// Separating-edge test on nearby tile pairs around `samples` random tiles.
pub fn sample_disjointness(w: &TilingWindow, samples: usize, seed: u64) -> DisjointnessSample {
    let mut overlapping = Vec::new();
    let mut sampled_pairs = 0;
    if w.tiles.len() >= 2 {
        let (grid, approx) = tile_grid(&w.tiles);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let k = rng.random_range(0..w.tiles.len());
            let (lo, hi) = bbox(&approx[k]);
            let mut near: Vec<usize> = grid
                .cells_of_box(lo, hi)
                .filter_map(|c| grid.buckets.get(&c))
                .flatten()
                .copied()
                .filter(|&j| j != k)
                .collect();
            near.sort_unstable();
            near.dedup();
            for j in near {
                sampled_pairs += 1;
                if !interiors_disjoint(&w.tiles[k].polygon, &w.tiles[j].polygon) {
                    overlapping.push((w.tiles[k].label, w.tiles[j].label));
                }
            }
        }
    }
    overlapping.truncate(MAX_WITNESSES);
    DisjointnessSample {
        pass: overlapping.is_empty(),
        sampled_pairs,
        overlapping,
    }
}

fn count_vertices_edges(w: &TilingWindow) -> (usize, usize) {
    let mut vertices: Vec<&Point> = w.tiles.iter().flat_map(|t| t.polygon.vertices()).collect();
    vertices.sort();
    vertices.dedup();
    let mut edges: Vec<(&Point, &Point)> = w
        .tiles
        .iter()
        .flat_map(|t| t.polygon.edges())
        .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect();
    edges.sort();
    edges.dedup();
    (vertices.len(), edges.len())
}

/// Runs every check. `budget` enables the edge-length check.
pub fn verify_window(w: &TilingWindow, id: &str, budget: Option<&Scalar>) -> VerificationReport {
    let start = Instant::now();
    let (vertices, edges) = count_vertices_edges(w);
    let unit_area = check_unit_areas(w);
    let vtv = check_vtv(w);
    let incongruence = check_incongruence(w);
    let perimeter = budget.map(|b| check_perimeter(w, b));
    let disjointness = sample_disjointness(w, 64.min(w.tiles.len()), 0);
    VerificationReport {
        window: id.to_string(),
        tiles: w.tiles.len(),
        vertices,
        edges,
        unit_area,
        vtv,
        incongruence,
        perimeter,
        disjointness,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Deliberate corruptions of a valid window, each of which one check must
/// catch.
pub mod mutations {
    use super::*;

    /// Scales tile `k` by `factor` about its first vertex.
    pub fn scale_tile(w: &TilingWindow, k: usize, factor: &Scalar) -> TilingWindow {
        let mut out = w.clone();
        let p = &w.tiles[k].polygon;
        let o = p.vertices()[0].clone();
        out.tiles[k].polygon = p.map(|v| o.add(&v.sub(&o).scale(factor)), true);
        out
    }

    /// Slides vertex `vi` of tile `k` a third of the way along its outgoing
    /// edge, so it lands inside the edge shared with the neighbour.
    pub fn nudge_vertex(w: &TilingWindow, k: usize, vi: usize) -> TilingWindow {
        let mut out = w.clone();
        let v = w.tiles[k].polygon.vertices();
        let n = v.len();
        let moved = v[vi].add(&v[(vi + 1) % n].sub(&v[vi]).scale(&Scalar::ratio(1, 3)));
        let mut pts = v.to_vec();
        pts[vi] = moved;
        out.tiles[k].polygon = ConvexPolygon::new(pts).expect("shrinking keeps convexity");
        out
    }

    /// Appends a translated copy of tile `k`, placed clear of the window.
    pub fn duplicate_shape(w: &TilingWindow, k: usize) -> TilingWindow {
        let mut out = w.clone();
        let max_x = w
            .tiles
            .iter()
            .flat_map(|t| t.polygon.vertices())
            .map(|v| v.x.floor())
            .max()
            .unwrap_or_default();
        let dx = Scalar::Rat(crate::scalar::Rational::from_integer(max_x)) + Scalar::int(100);
        let p = &w.tiles[k].polygon;
        let shift = Point::new(dx - &p.vertices()[0].x, Scalar::zero());
        out.tiles.push(Tile {
            label: TileLabel::Other {
                index: w.tiles.len(),
            },
            polygon: p.translate(&shift),
        });
        out
    }

    pub fn remove_tile(w: &TilingWindow, k: usize) -> TilingWindow {
        let mut out = w.clone();
        out.tiles.remove(k);
        out
    }
}
