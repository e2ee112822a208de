//! Tiling-a-tile: a house-shaped pentagon of area 6 cut into six unit-area
//! convex pentagons, perturbed copy by copy so that no two pieces in the
//! window are congruent.
//!
//! The house `C_0..C_4 = (0,0), (2,0), (2,2), (1,4), (0,2)` tiles the plane by
//! translations and point reflections. Its edge midpoints `Q_k` are boundary
//! vertices of the subdivision, so neighbouring copies meet vertex to vertex
//! whatever happens inside. Interior vertices `P_0..P_4` carry the freedom:
//!
//! * outer face `F_k = Q_{k−1}, C_k, Q_k, P_k, P_{k−1}`, `k = 0..4`
//! * central face `P_0..P_4`, area 1 automatically
//!
//! `P_0` moves freely, `P_1..P_3` each move along one area-preserving line,
//! and `P_4` is the intersection of the lines fixed by `F_4` and `F_0`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{congruence_key, signed_area, CongruenceKey, ConvexPolygon, Point};
use crate::scalar::Scalar;
use crate::tiling::{Tile, TileLabel, TilingWindow, WindowKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexTag {
    Fixed,
    Free2,
    Free1,
    Dependent,
}

/// A supertile cut into convex faces. Vertex indices: `0..5` the corners,
/// `5..10` the edge midpoints, `10..15` the interior vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub vertices: Vec<Point>,
    pub tags: Vec<VertexTag>,
    pub faces: Vec<Vec<usize>>,
    /// Faces required to have unit area; the remaining face follows.
    pub constrained: Vec<usize>,
    /// Resolution order of the non-fixed vertices.
    pub order: Vec<usize>,
}

pub const HOUSE: [(i64, i64); 5] = [(0, 0), (2, 0), (2, 2), (1, 4), (0, 2)];

fn corner(k: usize) -> usize {
    k % 5
}
fn midpoint(k: usize) -> usize {
    5 + k % 5
}
fn interior(k: usize) -> usize {
    10 + k % 5
}

fn house_corners() -> Vec<Point> {
    HOUSE.iter().map(|&(x, y)| Point::ints(x, y)).collect()
}

pub fn house() -> ConvexPolygon {
    ConvexPolygon::new(house_corners()).expect("house is convex")
}

/// Interior vertices of the unperturbed subdivision, solved once offline.
fn base_interior() -> [Point; 5] {
    [
        Point::ratios((1, 1), (4, 5)),
        Point::ratios((7, 5), (27, 25)),
        Point::ratios((13, 10), (64, 25)),
        Point::ratios((7, 10), (219, 100)),
        Point::ratios((167, 266), (1429, 1330)),
    ]
}

impl Subdivision {
    pub fn house() -> Self {
        let c = house_corners();
        let half = Scalar::ratio(1, 2);
        let mut vertices = c.clone();
        vertices.extend((0..5).map(|k| c[k].add(&c[(k + 1) % 5]).scale(&half)));
        vertices.extend(base_interior());
        let mut tags = vec![VertexTag::Fixed; 10];
        tags.extend([
            VertexTag::Free2,
            VertexTag::Free1,
            VertexTag::Free1,
            VertexTag::Free1,
            VertexTag::Dependent,
        ]);
        let mut faces: Vec<Vec<usize>> = (0..5)
            .map(|k| {
                vec![
                    midpoint(k + 4),
                    corner(k),
                    midpoint(k),
                    interior(k),
                    interior(k + 4),
                ]
            })
            .collect();
        faces.push((0..5).map(interior).collect());
        Subdivision {
            vertices,
            tags,
            faces,
            constrained: (0..5).collect(),
            order: (0..5).map(interior).collect(),
        }
    }

    pub fn face_points(&self, f: usize) -> Vec<Point> {
        self.faces[f]
            .iter()
            .map(|&v| self.vertices[v].clone())
            .collect()
    }

    /// Faces as validated convex polygons.
    pub fn polygons(&self) -> Result<Vec<ConvexPolygon>> {
        (0..self.faces.len())
            .map(|f| {
                ConvexPolygon::new(self.face_points(f))
                    .map_err(|_| Error::ConvexityLost { face: f })
            })
            .collect()
    }

    pub fn count(&self, tag: VertexTag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }
}

fn shoelace(points: &[Point]) -> Scalar {
    let n = points.len();
    let twice = (0..n).fold(Scalar::zero(), |acc, k| {
        acc + points[k].cross(&points[(k + 1) % n])
    });
    twice * Scalar::ratio(1, 2)
}

/// The direction in which vertex `k` of `face` can slide without changing
/// the area: the chord joining its two neighbours.
pub fn area_preserving_direction(face: &ConvexPolygon, k: usize) -> Result<Point> {
    chord(face.vertices(), k)
}

fn chord(points: &[Point], k: usize) -> Result<Point> {
    let n = points.len();
    let d = points[(k + 1) % n].sub(&points[(k + n - 1) % n]);
    if d.x.is_zero() && d.y.is_zero() {
        return Err(Error::DegenerateConfiguration(format!(
            "neighbours of vertex {k} coincide"
        )));
    }
    Ok(d)
}

/// The area of `points` as a function of vertex `k` is `K + ½·cross(v, d)`
/// with `d` the neighbour chord. Returns `(d, r)` with `cross(v, d) = r`
/// exactly when the area equals `target`.
fn area_line(points: &[Point], k: usize, target: &Scalar) -> Result<(Point, Scalar)> {
    let d = chord(points, k)?;
    let mut at_origin = points.to_vec();
    at_origin[k] = Point::ints(0, 0);
    let rhs = Scalar::int(2) * (target - shoelace(&at_origin));
    Ok((d, rhs))
}

/// Solves two unit-area constraints for a shared unknown vertex. Each face is
/// given as a vertex list with the unknown at the stated index (its current
/// value is ignored).
pub fn resolve_dependent(first: (&[Point], usize), second: (&[Point], usize)) -> Result<Point> {
    let one = Scalar::one();
    let (da, ra) = area_line(first.0, first.1, &one)?;
    let (db, rb) = area_line(second.0, second.1, &one)?;
    // x·d.y − y·d.x = r
    let det = &da.y * -&db.x + &da.x * &db.y;
    if det.is_zero() {
        return Err(Error::DegenerateConfiguration(
            "parallel area constraints".into(),
        ));
    }
    let x = (&ra * -&db.x + &da.x * &rb) / &det;
    let y = (&da.y * &rb - &db.y * &ra) / &det;
    Ok(Point::new(x, y))
}

/// Moves vertex `k` of `points` to `guess` corrected perpendicular to its
/// area-preserving direction so that the area becomes exactly 1.
fn correct_onto_line(points: &[Point], k: usize, guess: &Point) -> Result<Point> {
    let (d, r) = area_line(points, k, &Scalar::one())?;
    let m = Point::new(-&d.y, d.x.clone());
    let lambda = (r - guess.cross(&d)) / m.cross(&d);
    Ok(guess.add(&m.scale(&lambda)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationParams {
    /// Displacement of the 2-dof vertex.
    pub free2: (Scalar, Scalar),
    /// Displacements of the 1-dof vertices, in units of their neighbour chords.
    pub free1: [Scalar; 3],
    pub epsilon: Scalar,
}

/// `1/25`, slightly below a hundredth of the house diameter `√17`.
pub fn default_epsilon() -> Scalar {
    Scalar::ratio(1, 25)
}

impl PerturbationParams {
    pub fn zero() -> Self {
        PerturbationParams {
            free2: (Scalar::zero(), Scalar::zero()),
            free1: [Scalar::zero(), Scalar::zero(), Scalar::zero()],
            epsilon: default_epsilon(),
        }
    }

    fn within_cap(&self) -> bool {
        [&self.free2.0, &self.free2.1]
            .into_iter()
            .chain(self.free1.iter())
            .all(|t| t.abs() <= self.epsilon)
    }

    /// Seeded draw with coordinates `p/1000`, `|p/1000| ≤ ε`.
    pub fn draw(rng: &mut impl Rng, epsilon: &Scalar) -> Self {
        let cap = (epsilon.approx() * 1000.0).floor() as i64;
        let mut t = || Scalar::ratio(rng.random_range(-cap..=cap), 1000);
        PerturbationParams {
            free2: (t(), t()),
            free1: [t(), t(), t()],
            epsilon: epsilon.clone(),
        }
    }
}

/// Resolves the interior vertices of `base` in dependency order under
/// `params`; every face ends convex with unit area, or the call fails.
pub fn perturb_subdivision(base: &Subdivision, params: &PerturbationParams) -> Result<Subdivision> {
    if !params.within_cap() {
        return Err(Error::PerturbationTooLarge);
    }
    let mut s = base.clone();
    let p0 = &base.vertices[interior(0)];
    s.vertices[interior(0)] = Point::new(&p0.x + &params.free2.0, &p0.y + &params.free2.1);
    // F_k fixes P_k once P_{k−1} is known; its position in F_k is index 3
    for k in 1..=3 {
        let pts = s.face_points(k);
        let d = chord(&pts, 3)?;
        let guess = base.vertices[interior(k)].add(&d.scale(&params.free1[k - 1]));
        s.vertices[interior(k)] = correct_onto_line(&pts, 3, &guess)?;
    }
    let f4 = s.face_points(4);
    let f0 = s.face_points(0);
    s.vertices[interior(4)] = resolve_dependent((&f4, 3), (&f0, 4))?;
    let polygons = s.polygons()?;
    for (f, p) in polygons.iter().enumerate() {
        if signed_area(p) != Scalar::one() {
            return Err(Error::DegenerateConfiguration(format!(
                "face {f} lost unit area"
            )));
        }
    }
    Ok(s)
}

/// Placement of copy `(row, col)`: even rows upright, odd rows point
/// reflected into the notches between roofs.
pub fn copy_transform(row: i64, col: i64) -> (bool, Point) {
    let m = row.div_euclid(2);
    if row.rem_euclid(2) == 0 {
        (false, Point::ints(2 * col + m, 6 * m))
    } else {
        (true, Point::ints(3 + 2 * col + m, 6 + 6 * m))
    }
}

fn place(p: &ConvexPolygon, (inverted, t): &(bool, Point)) -> ConvexPolygon {
    if *inverted {
        p.negate().translate(t)
    } else {
        p.translate(t)
    }
}

#[derive(Clone, Debug)]
pub struct SupertileConfig {
    pub max_draws: usize,
    pub epsilon: Scalar,
}

impl Default for SupertileConfig {
    fn default() -> Self {
        SupertileConfig {
            max_draws: 1000,
            epsilon: default_epsilon(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupertileCopy {
    pub row: i64,
    pub col: i64,
    pub inverted: bool,
    pub translation: Point,
    pub params: PerturbationParams,
}

#[derive(Clone, Debug)]
pub struct SupertileBuild {
    pub window: TilingWindow,
    pub copies: Vec<SupertileCopy>,
    pub rejected_convexity: usize,
    pub rejected_congruence: usize,
}

/// `rows × cols` perturbed house copies, each re-drawn until its six faces are
/// incongruent to each other and to everything placed before.
pub fn supertile_plane_window(rows: usize, cols: usize, seed: u64) -> Result<SupertileBuild> {
    supertile_plane_window_with(rows, cols, seed, &SupertileConfig::default())
}

pub fn supertile_plane_window_with(
    rows: usize,
    cols: usize,
    seed: u64,
    config: &SupertileConfig,
) -> Result<SupertileBuild> {
    let base = Subdivision::house();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut registry: HashMap<CongruenceKey, TileLabel> = HashMap::new();
    let mut tiles = Vec::new();
    let mut copies = Vec::new();
    let (mut rejected_convexity, mut rejected_congruence) = (0, 0);
    for row in 0..rows as i64 {
        for col in 0..cols as i64 {
            let index = copies.len();
            let mut draws = 0;
            let (params, faces) = loop {
                if draws == config.max_draws {
                    return Err(Error::DrawBudget {
                        strip: index,
                        draws,
                    });
                }
                draws += 1;
                let params = PerturbationParams::draw(&mut rng, &config.epsilon);
                let faces = match perturb_subdivision(&base, &params).and_then(|s| s.polygons()) {
                    Ok(f) => f,
                    Err(Error::ConvexityLost { .. }) | Err(Error::DegenerateConfiguration(_)) => {
                        rejected_convexity += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let keys: Vec<CongruenceKey> = faces.iter().map(congruence_key).collect();
                let mut distinct = keys.clone();
                distinct.sort();
                distinct.dedup();
                if distinct.len() != keys.len() || keys.iter().any(|k| registry.contains_key(k)) {
                    rejected_congruence += 1;
                    continue;
                }
                for (face, k) in keys.into_iter().enumerate() {
                    registry.insert(
                        k,
                        TileLabel::Pentagon {
                            row,
                            col,
                            face: face as u8,
                        },
                    );
                }
                break (params, faces);
            };
            let transform = copy_transform(row, col);
            for (face, p) in faces.iter().enumerate() {
                tiles.push(Tile {
                    label: TileLabel::Pentagon {
                        row,
                        col,
                        face: face as u8,
                    },
                    polygon: place(p, &transform),
                });
            }
            copies.push(SupertileCopy {
                row,
                col,
                inverted: transform.0,
                translation: transform.1,
                params,
            });
        }
    }
    let window = TilingWindow::new(WindowKind::Supertile, tiles, (rows.max(cols)) as u64);
    Ok(SupertileBuild {
        window,
        copies,
        rejected_convexity,
        rejected_congruence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::congruent;
    use proptest::prelude::*;

    fn sq(points: &[(i64, i64)]) -> ConvexPolygon {
        ConvexPolygon::new(points.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn house_area_and_base_faces() {
        assert_eq!(signed_area(&house()), Scalar::int(6));
        let s = Subdivision::house();
        let faces = s.polygons().unwrap();
        assert_eq!(faces.len(), 6);
        assert!(faces
            .iter()
            .all(|f| signed_area(f) == Scalar::one() && f.len() == 5));
        assert_eq!(s.count(VertexTag::Free2), 1);
        assert_eq!(s.count(VertexTag::Free1), 3);
        assert_eq!(s.count(VertexTag::Dependent), 1);
        assert_eq!(s.vertices[midpoint(2)], Point::ratios((3, 2), (3, 1)));
    }

    #[test]
    fn square_vertex_slides_along_neighbour_chord() {
        let square = sq(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let d = area_preserving_direction(&square, 2).unwrap();
        assert_eq!(d, Point::ints(-1, 1));
        for k in -4..=4 {
            let t = Scalar::ratio(k, 10);
            let moved = vec![
                Point::ints(0, 0),
                Point::ints(1, 0),
                Point::new(Scalar::one() + &t, Scalar::one() - &t),
                Point::ints(0, 1),
            ];
            assert_eq!(shoelace(&moved), Scalar::one());
        }
    }

    #[test]
    fn triangle_apex_slides_parallel_to_base() {
        let t = sq(&[(0, 0), (4, 0), (1, 3)]);
        let d = area_preserving_direction(&t, 2).unwrap();
        assert!(d.y.is_zero());
    }

    #[test]
    fn hexagon_direction_is_the_neighbour_chord() {
        let h = ConvexPolygon::new(vec![
            Point::ints(2, 0),
            Point::ints(1, 2),
            Point::ints(-1, 2),
            Point::ints(-2, 0),
            Point::ints(-1, -2),
            Point::ints(1, -2),
        ])
        .unwrap();
        for k in 0..6 {
            let d = area_preserving_direction(&h, k).unwrap();
            let v = h.vertices();
            assert_eq!(d, v[(k + 1) % 6].sub(&v[(k + 5) % 6]));
        }
    }

    #[test]
    fn dependent_vertex_from_two_triangles() {
        // apex v over bases (0,0)-(2,0) and (0,0)-(0,2), both of unit area
        let a = [Point::ints(0, 0), Point::ints(2, 0), Point::ints(9, 9)];
        let b = [Point::ints(0, 2), Point::ints(0, 0), Point::ints(9, 9)];
        let v = resolve_dependent((&a, 2), (&b, 2)).unwrap();
        assert_eq!(v, Point::ints(1, 1));
        let c = [Point::ints(0, 3), Point::ints(2, 3), Point::ints(9, 9)];
        assert!(matches!(
            resolve_dependent((&a, 2), (&c, 2)),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let base = Subdivision::house();
        assert_eq!(
            perturb_subdivision(&base, &PerturbationParams::zero()).unwrap(),
            base
        );
    }

    #[test]
    fn oversized_perturbation_rejected() {
        let mut p = PerturbationParams::zero();
        p.free1[1] = Scalar::ratio(1, 10);
        assert!(matches!(
            perturb_subdivision(&Subdivision::house(), &p),
            Err(Error::PerturbationTooLarge)
        ));
    }

    #[test]
    fn large_displacement_loses_convexity() {
        let mut p = PerturbationParams::zero();
        p.epsilon = Scalar::int(10);
        p.free2 = (Scalar::zero(), Scalar::int(3));
        assert!(perturb_subdivision(&Subdivision::house(), &p).is_err());
    }

    #[test]
    fn two_draws_share_no_congruent_face() {
        let base = Subdivision::house();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = default_epsilon();
        let a = perturb_subdivision(&base, &PerturbationParams::draw(&mut rng, &e)).unwrap();
        let b = perturb_subdivision(&base, &PerturbationParams::draw(&mut rng, &e)).unwrap();
        for p in a.polygons().unwrap() {
            for q in b.polygons().unwrap() {
                assert!(!congruent(&p, &q));
            }
        }
    }

    #[test]
    fn window_sizes_and_orientation() {
        let w = supertile_plane_window(1, 1, 0).unwrap();
        assert_eq!(w.window.tiles.len(), 6);
        let b = supertile_plane_window(2, 3, 9).unwrap();
        assert_eq!(b.window.tiles.len(), 36);
        assert!(b.copies.iter().filter(|c| c.inverted).count() == 3);
    }

    #[test]
    fn inverted_copy_fills_the_notch() {
        let up0 = house().translate(&copy_transform(0, 0).1);
        let up1 = house().translate(&copy_transform(0, 1).1);
        let (inv, t) = copy_transform(1, 0);
        assert!(inv);
        let notch = house().negate().translate(&t);
        let v = notch.vertices();
        assert!(v.contains(&up0.vertices()[2]) && v.contains(&up0.vertices()[3]));
        assert!(v.contains(&up1.vertices()[3]) && v.contains(&up1.vertices()[4]));
        let above = house().translate(&copy_transform(2, 0).1);
        assert!(v.contains(&above.vertices()[0]) && v.contains(&above.vertices()[1]));
    }

    proptest! {
        #[test]
        fn perturbed_faces_keep_unit_area(a in -40i64..=40, b in -40i64..=40, c in -40i64..=40, d in -40i64..=40, e in -40i64..=40) {
            let p = PerturbationParams {
                free2: (Scalar::ratio(a, 1000), Scalar::ratio(b, 1000)),
                free1: [Scalar::ratio(c, 1000), Scalar::ratio(d, 1000), Scalar::ratio(e, 1000)],
                epsilon: default_epsilon(),
            };
            let s = perturb_subdivision(&Subdivision::house(), &p).unwrap();
            let total = s.polygons().unwrap().iter().fold(Scalar::zero(), |acc, f| acc + signed_area(f));
            prop_assert_eq!(total, Scalar::int(6));
            prop_assert_eq!(signed_area(&s.polygons().unwrap()[5]), Scalar::one());
        }

        #[test]
        fn shoelace_is_linear_along_direction(k in 0usize..5, t in -50i64..=50) {
            let s = Subdivision::house();
            let pts = s.face_points(0);
            let d = chord(&pts, k).unwrap();
            let mut moved = pts.clone();
            moved[k] = pts[k].add(&d.scale(&Scalar::ratio(t, 7)));
            prop_assert_eq!(shoelace(&moved), shoelace(&pts));
        }
    }
}
