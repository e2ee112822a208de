//! Exact planar primitives: points, strictly convex polygons, areas, and the
//! two congruence relations used throughout.
//!
//! `≅` (isometries including reflections) and `≃` (translations and the point
//! reflection `v ↦ −v`) are both decided by comparing canonical keys, so every
//! pairwise scan reduces to hashing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::int(x), Scalar::int(y))
    }

    pub fn ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point::new(Scalar::ratio(x.0, x.1), Scalar::ratio(y.0, y.1))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    /// `(x, y) ↦ (x + δy, y)`.
    pub fn shear(&self, delta: &Scalar) -> Point {
        Point::new(&self.x + delta * &self.y, self.y.clone())
    }

    pub fn mirror_x(&self) -> Point {
        Point::new(-&self.x, self.y.clone())
    }

    pub fn mirror_y(&self) -> Point {
        Point::new(self.x.clone(), -&self.y)
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.approx(), self.y.approx())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `abc`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Scalar {
    b.sub(a).cross(&c.sub(a))
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates strict convexity: every vertex lies strictly left of every
    /// edge it is not an endpoint of.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            if a == b {
                return Err(Error::InvalidPolygon(format!("repeated vertex {a}")));
            }
            for (k, c) in vertices.iter().enumerate() {
                if k == i || k == (i + 1) % n {
                    continue;
                }
                if !orient(a, b, c).is_positive() {
                    return Err(Error::InvalidPolygon(format!(
                        "vertex {c} not strictly left of edge {a} -> {b}"
                    )));
                }
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Reorders a convex vertex list given clockwise into counterclockwise
    /// before validating.
    pub fn from_any_orientation(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() >= 3 && orient(&vertices[0], &vertices[1], &vertices[2]).is_negative() {
            vertices.reverse();
        }
        ConvexPolygon::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn edge_vectors(&self) -> Vec<Point> {
        self.edges().map(|(a, b)| b.sub(a)).collect()
    }

    pub fn squared_edge_lengths(&self) -> Vec<Scalar> {
        self.edge_vectors().iter().map(Point::norm2).collect()
    }

    pub fn has_horizontal_edge(&self) -> bool {
        self.edges().any(|(a, b)| a.y == b.y)
    }

    /// Applies an affine map; `preserves_orientation = false` reverses the
    /// vertex order so the result stays counterclockwise.
    pub fn map(&self, f: impl Fn(&Point) -> Point, preserves_orientation: bool) -> ConvexPolygon {
        let mut vertices: Vec<Point> = self.vertices.iter().map(f).collect();
        if !preserves_orientation {
            vertices.reverse();
        }
        ConvexPolygon { vertices }
    }

    pub fn translate(&self, t: &Point) -> ConvexPolygon {
        self.map(|p| p.add(t), true)
    }

    pub fn shear(&self, delta: &Scalar) -> ConvexPolygon {
        self.map(|p| p.shear(delta), true)
    }

    /// Reflection in the vertical axis `x = 0`.
    pub fn mirror_x(&self) -> ConvexPolygon {
        self.map(Point::mirror_x, false)
    }

    /// Reflection in the horizontal axis `y = 0`.
    pub fn mirror_y(&self) -> ConvexPolygon {
        self.map(Point::mirror_y, false)
    }

    /// Point reflection `v ↦ −v`.
    pub fn negate(&self) -> ConvexPolygon {
        self.map(Point::neg, true)
    }

    pub fn perimeter_f64(&self) -> f64 {
        self.squared_edge_lengths()
            .iter()
            .map(|l| l.approx().sqrt())
            .sum()
    }
}

/// Exact area by the shoelace formula, taken relative to the first vertex.
pub fn signed_area(p: &ConvexPolygon) -> Scalar {
    let v = p.vertices();
    let origin = &v[0];
    let mut twice = Scalar::zero();
    for k in 1..v.len() - 1 {
        twice = twice + orient(origin, &v[k], &v[k + 1]);
    }
    twice * Scalar::ratio(1, 2)
}

/// Canonical signature under the full Euclidean group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(clippy::large_enum_variant)]
pub enum CongruenceKey {
    /// Sorted squared edge lengths.
    Triangle([Scalar; 3]),
    /// Minimal rotation over both orientations of `(|e_k|², e_k · e_{k+1})`.
    Polygon(Vec<(Scalar, Scalar)>),
}

fn cyclic_signature(vertices: &[Point]) -> Vec<(Scalar, Scalar)> {
    let n = vertices.len();
    let edges: Vec<Point> = (0..n)
        .map(|i| vertices[(i + 1) % n].sub(&vertices[i]))
        .collect();
    (0..n)
        .map(|i| (edges[i].norm2(), edges[i].dot(&edges[(i + 1) % n])))
        .collect()
}

fn minimal_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len())
        .map(|r| {
            seq[r..]
                .iter()
                .chain(&seq[..r])
                .cloned()
                .collect::<Vec<T>>()
        })
        .min()
        .unwrap_or_default()
}

pub fn congruence_key(p: &ConvexPolygon) -> CongruenceKey {
    if p.len() == 3 {
        let mut l = p.squared_edge_lengths();
        l.sort();
        let [a, b, c]: [Scalar; 3] = l.try_into().expect("three edges");
        return CongruenceKey::Triangle([a, b, c]);
    }
    let forward = cyclic_signature(p.vertices());
    let mut reversed_vertices = p.vertices().to_vec();
    reversed_vertices.reverse();
    let backward = cyclic_signature(&reversed_vertices);
    CongruenceKey::Polygon(std::cmp::min(
        minimal_rotation(&forward),
        minimal_rotation(&backward),
    ))
}

/// `p ≅ q`.
pub fn congruent(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    p.len() == q.len() && congruence_key(p) == congruence_key(q)
}

/// Canonical signature under translations and the point reflection: the
/// vertex set recentred at its centroid, sorted, and the lexicographic
/// minimum of it and its negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranslationKey(pub Vec<Point>);

pub fn translation_key(p: &ConvexPolygon) -> TranslationKey {
    let v = p.vertices();
    let n = Scalar::int(v.len() as i64);
    let sx = v.iter().fold(Scalar::zero(), |acc, q| acc + &q.x);
    let sy = v.iter().fold(Scalar::zero(), |acc, q| acc + &q.y);
    let c = Point::new(sx / &n, sy / &n);
    let mut centred: Vec<Point> = v.iter().map(|q| q.sub(&c)).collect();
    let mut negated: Vec<Point> = centred.iter().map(Point::neg).collect();
    centred.sort();
    negated.sort();
    TranslationKey(std::cmp::min(centred, negated))
}

/// `p ≃ q`, i.e. `q = s·p + t` with `s ∈ {±1}`.
pub fn translation_congruent(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    p.len() == q.len() && translation_key(p) == translation_key(q)
}

/// Max minus min vertex ordinate.
pub fn vertical_width(p: &ConvexPolygon) -> Scalar {
    let ys = p.vertices().iter().map(|v| &v.y);
    let max = ys.clone().max().expect("nonempty");
    let min = ys.min().expect("nonempty");
    max - min
}

/// True iff `v` lies on segment `ab` strictly between its endpoints.
pub fn point_in_open_segment(v: &Point, a: &Point, b: &Point) -> bool {
    let ab = b.sub(a);
    let av = v.sub(a);
    if !ab.cross(&av).is_zero() {
        return false;
    }
    let t = av.dot(&ab);
    t.is_positive() && t < ab.norm2()
}

/// True iff the two polygons have disjoint interiors, certified by a
/// separating edge line of either polygon.
pub fn interiors_disjoint(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    let separated_by = |a: &ConvexPolygon, b: &ConvexPolygon| {
        a.edges()
            .any(|(u, w)| b.vertices().iter().all(|c| !orient(u, w, c).is_positive()))
    };
    separated_by(p, q) || separated_by(q, p)
}
