//! Finite-window versions of the countability arguments: certify that a start
//! height yields no `≃`-pair among the generated triangles, and pick shear
//! parameters `δ_n` that avoid the finitely many excluded values.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assembler::shear_strip;
use crate::error::{Error, Result};
use crate::geom::{
    congruence_key, translation_key, vertical_width, CongruenceKey, ConvexPolygon, Point,
};
use crate::scalar::{rational_sqrt, Rational, Scalar};
use crate::strip::{
    in_certified_interval, LabeledTriangle, StripWindow, TriangleId, CERTIFIED_INTERVAL,
    DEFAULT_BIT_BUDGET,
};

/// Real roots of one exclusion quadratic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShearRoots {
    Empty,
    /// Roots lying in the coefficient field.
    Exact(Vec<Scalar>),
    /// Two real roots outside the coefficient field; kept only through the
    /// stored coefficients.
    Algebraic,
}

/// `c2·δ² + c1·δ + c0 = 0` with its root description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearQuadratic {
    pub c2: Scalar,
    pub c1: Scalar,
    pub c0: Scalar,
    pub roots: ShearRoots,
}

impl ShearQuadratic {
    pub fn new(c2: Scalar, c1: Scalar, c0: Scalar) -> Result<Self> {
        let roots = solve_quadratic(&c2, &c1, &c0)?;
        Ok(ShearQuadratic { c2, c1, c0, roots })
    }

    pub fn eval(&self, delta: &Scalar) -> Scalar {
        (&self.c2 * delta + &self.c1) * delta + &self.c0
    }

    pub fn root_count(&self) -> usize {
        match &self.roots {
            ShearRoots::Empty => 0,
            ShearRoots::Exact(r) => r.len(),
            ShearRoots::Algebraic => 2,
        }
    }

    /// Float approximations of the real roots.
    pub fn approx_roots(&self) -> Vec<f64> {
        match &self.roots {
            ShearRoots::Empty => vec![],
            ShearRoots::Exact(r) => r.iter().map(Scalar::approx).collect(),
            ShearRoots::Algebraic => {
                let (a, b, c) = (self.c2.approx(), self.c1.approx(), self.c0.approx());
                let d = (b * b - 4.0 * a * c).max(0.0).sqrt();
                let q = -0.5 * (b + b.signum() * d);
                let mut r = vec![q / a, if q != 0.0 { c / q } else { -b / (2.0 * a) }];
                r.sort_by(|x, y| x.partial_cmp(y).unwrap());
                r
            }
        }
    }
}

fn solve_quadratic(c2: &Scalar, c1: &Scalar, c0: &Scalar) -> Result<ShearRoots> {
    if c2.is_zero() {
        if c1.is_zero() {
            if c0.is_zero() {
                return Err(Error::DegenerateConfiguration(
                    "exclusion equation holds for every shear".into(),
                ));
            }
            return Ok(ShearRoots::Empty);
        }
        return Ok(ShearRoots::Exact(vec![-(c0 / c1)]));
    }
    let disc = c1.square() - Scalar::int(4) * c2 * c0;
    let two_a = Scalar::int(2) * c2;
    match disc.sign() {
        std::cmp::Ordering::Less => Ok(ShearRoots::Empty),
        std::cmp::Ordering::Equal => Ok(ShearRoots::Exact(vec![-(c1 / &two_a)])),
        std::cmp::Ordering::Greater => {
            let root = disc.as_rational().and_then(rational_sqrt).map(Scalar::Rat);
            match root {
                Some(r) => {
                    let mut roots = vec![(-c1 - &r) / &two_a, (-c1 + &r) / &two_a];
                    roots.sort();
                    Ok(ShearRoots::Exact(roots))
                }
                None => Ok(ShearRoots::Algebraic),
            }
        }
    }
}

/// The excluded shears for one pair of triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearExclusion {
    pub pair: (TriangleId, TriangleId),
    pub quadratics: Vec<ShearQuadratic>,
}

impl ShearExclusion {
    pub fn root_count(&self) -> usize {
        self.quadratics.iter().map(ShearQuadratic::root_count).sum()
    }

    /// Exact membership by substitution.
    pub fn excludes(&self, delta: &Scalar) -> bool {
        self.quadratics.iter().any(|q| q.eval(delta).is_zero())
    }

    pub fn approx_roots(&self) -> Vec<f64> {
        self.quadratics
            .iter()
            .flat_map(ShearQuadratic::approx_roots)
            .collect()
    }

    pub fn exact_roots(&self) -> impl Iterator<Item = &Scalar> {
        self.quadratics.iter().flat_map(|q| match &q.roots {
            ShearRoots::Exact(r) => r.as_slice(),
            _ => &[],
        })
    }
}

/// Edge vector up to sign, normalised to `y > 0`, or `y = 0` and `x > 0`.
pub fn normalized_edge(e: &Point) -> Point {
    if e.y.is_negative() || (e.y.is_zero() && e.x.is_negative()) {
        e.neg()
    } else {
        e.clone()
    }
}

fn normalized_edges(p: &ConvexPolygon) -> Vec<Point> {
    p.edge_vectors().iter().map(normalized_edge).collect()
}

/// `|shear(e0)|² = |shear(ek)|²` as a quadratic in `δ`.
pub fn same_shear_quadratic(e0: &Point, ek: &Point) -> Result<ShearQuadratic> {
    let (x0, y0, xk, yk) = (&e0.x, &e0.y, &ek.x, &ek.y);
    ShearQuadratic::new(
        y0.square() - yk.square(),
        Scalar::int(2) * (x0 * y0 - xk * yk),
        x0.square() + y0.square() - xk.square() - yk.square(),
    )
}

/// `|shear(e0)|² = target` as a quadratic in `δ`.
pub fn cross_shear_quadratic(e0: &Point, target: &Scalar) -> Result<ShearQuadratic> {
    let (x0, y0) = (&e0.x, &e0.y);
    ShearQuadratic::new(
        y0.square(),
        Scalar::int(2) * x0 * y0,
        x0.square() + y0.square() - target,
    )
}

/// Shears `δ` for which `shear(T) ≅ shear(U)` may hold, given `T ≄ U`.
///
/// Uses an edge `e0` of `T` that is a translate of no edge of `U` (up to
/// sign); such an edge exists exactly when `T ≄ U`.
pub fn excluded_shears_same(t: &LabeledTriangle, u: &LabeledTriangle) -> Result<ShearExclusion> {
    let te = normalized_edges(&t.polygon);
    let ue = normalized_edges(&u.polygon);
    let e0 = te
        .iter()
        .find(|e| !ue.contains(e))
        .ok_or_else(|| Error::TranslationCongruent(format!("{} and {}", t.id, u.id)))?;
    let quadratics = ue
        .iter()
        .map(|ek| same_shear_quadratic(e0, ek))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShearExclusion {
        pair: (t.id, u.id),
        quadratics,
    })
}

/// First edge of `p` with nonzero vertical component.
pub fn slanted_edge(p: &ConvexPolygon) -> Option<Point> {
    p.edge_vectors().into_iter().find(|e| !e.y.is_zero())
}

/// Shears `δ` for which `shear(T) ≅ U` may hold.
pub fn excluded_shears_cross(t: &LabeledTriangle, u: &LabeledTriangle) -> Result<ShearExclusion> {
    let e0 = slanted_edge(&t.polygon)
        .ok_or_else(|| Error::Precondition(format!("{} has no slanted edge", t.id)))?;
    excluded_shears_cross_with_edge(t.id, &e0, u)
}

pub fn excluded_shears_cross_with_edge(
    t_id: TriangleId,
    e0: &Point,
    u: &LabeledTriangle,
) -> Result<ShearExclusion> {
    if e0.y.is_zero() {
        return Err(Error::Precondition(
            "edge must have nonzero vertical component".into(),
        ));
    }
    let mut targets = u.polygon.squared_edge_lengths();
    targets.sort();
    targets.dedup();
    let quadratics = targets
        .iter()
        .map(|l| cross_shear_quadratic(e0, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShearExclusion {
        pair: (t_id, u.id),
        quadratics,
    })
}

/// Counts from a `≃` scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TranslationScan {
    pub triangles: usize,
    pub pairs: usize,
    pub pruned_by_width: usize,
    pub pruned_by_horizontal_edge: usize,
    pub key_comparisons: usize,
    pub offending: Option<(TriangleId, TriangleId)>,
}

/// Scans all pairs of distinct triangles for `≃`. Pairs with different
/// vertical width or with a horizontal edge on only one side are pruned
/// without comparing keys; both quantities are `≃`-invariant.
pub fn scan_translation_pairs(triangles: &[LabeledTriangle]) -> TranslationScan {
    let n = triangles.len();
    let mut scan = TranslationScan {
        triangles: n,
        pairs: n * n.saturating_sub(1) / 2,
        ..Default::default()
    };
    let mut groups: HashMap<(Scalar, bool), Vec<usize>> = HashMap::new();
    for (k, t) in triangles.iter().enumerate() {
        groups
            .entry((vertical_width(&t.polygon), t.polygon.has_horizontal_edge()))
            .or_default()
            .push(k);
    }
    let mut by_width: HashMap<&Scalar, usize> = HashMap::new();
    for ((w, _), members) in &groups {
        *by_width.entry(w).or_default() += members.len();
    }
    let same_width: usize = by_width.values().map(|c| c * (c - 1) / 2).sum();
    let same_group: usize = groups.values().map(|g| g.len() * (g.len() - 1) / 2).sum();
    scan.pruned_by_width = scan.pairs - same_width;
    scan.pruned_by_horizontal_edge = same_width - same_group;

    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut sorted_groups: Vec<_> = groups.into_values().collect();
    sorted_groups.sort();
    for g in sorted_groups {
        scan.key_comparisons += g.len() * (g.len() - 1) / 2;
        let mut seen: HashMap<_, usize> = HashMap::new();
        for k in g {
            let key = translation_key(&triangles[k].polygon);
            if let Some(&first) = seen.get(&key) {
                keys.push((first, k));
            } else {
                seen.insert(key, k);
            }
        }
    }
    scan.offending = keys
        .into_iter()
        .min()
        .map(|(a, b)| (triangles[a].id, triangles[b].id));
    scan
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub y0: String,
    pub i_max: u64,
    pub scan: TranslationScan,
}

#[derive(Clone, Debug)]
pub enum Certification {
    Certified(Certificate),
    Offending {
        pair: (TriangleId, TriangleId),
        scan: TranslationScan,
    },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// A strip window whose triangles are pairwise `≄`.
#[derive(Clone, Debug)]
pub struct CertifiedStrip {
    pub window: StripWindow,
    pub certificate: Certificate,
}

/// Checks a rational start height in the admissible interval for `≃`-pairs
/// among all triangles with `|i| ≤ i_max`.
pub fn certify_y0(y0: &Rational, i_max: u64) -> Result<Certification> {
    Ok(match certify_strip(y0, i_max)? {
        Ok(c) => Certification::Certified(c.certificate),
        Err(c) => c,
    })
}

/// Like [`certify_y0`] but returns the generated window on success.
pub fn certify_strip(
    y0: &Rational,
    i_max: u64,
) -> Result<std::result::Result<CertifiedStrip, Certification>> {
    certify_strip_with_budget(y0, i_max, DEFAULT_BIT_BUDGET)
}

pub fn certify_strip_with_budget(
    y0: &Rational,
    i_max: u64,
    bit_budget: u64,
) -> Result<std::result::Result<CertifiedStrip, Certification>> {
    let y0s = Scalar::Rat(y0.clone());
    if !in_certified_interval(&y0s) {
        return Err(Error::InvalidStartHeight(
            y0s.to_string(),
            CERTIFIED_INTERVAL,
        ));
    }
    if i_max == 0 {
        return Err(Error::Precondition("i_max must be at least 1".into()));
    }
    let window = StripWindow::generate_with_budget(&y0s, i_max, bit_budget)?;
    certify_window(window)
}

pub fn certify_window(
    window: StripWindow,
) -> Result<std::result::Result<CertifiedStrip, Certification>> {
    let scan = scan_translation_pairs(&window.triangles);
    Ok(match scan.offending {
        Some(pair) => Err(Certification::Offending { pair, scan }),
        None => {
            let certificate = Certificate {
                y0: window.y0.to_string(),
                i_max: window.i_max,
                scan,
            };
            Ok(CertifiedStrip {
                window,
                certificate,
            })
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearChoice {
    pub n: usize,
    pub delta: Scalar,
}

#[derive(Clone, Debug)]
pub struct ShearConfig {
    pub max_draws: usize,
    pub max_denominator: i64,
}

impl Default for ShearConfig {
    fn default() -> Self {
        ShearConfig {
            max_draws: 10_000,
            max_denominator: 64,
        }
    }
}

/// Accepted shears plus bookkeeping from the draw loop.
#[derive(Clone, Debug, Serialize)]
pub struct ShearSelection {
    pub seed: u64,
    pub choices: Vec<ShearChoice>,
    /// Exact roots in the within-strip exclusion set (set A).
    pub same_strip_roots: usize,
    /// Quadratics of set A with roots outside the rationals.
    pub same_strip_algebraic: usize,
    pub rejected_same: usize,
    pub rejected_cross: usize,
    pub rejected_scan: usize,
}

/// The union of within-strip exclusion sets over all distinct pairs.
#[derive(Clone, Debug, Default)]
pub struct SameStripExclusions {
    pub rational_roots: HashSet<Scalar>,
    /// Quadratics whose coefficients are irrational; tested by substitution.
    pub irrational: Vec<ShearQuadratic>,
    pub algebraic_quadratics: usize,
    pub pairs: usize,
    pub max_roots_per_pair: usize,
}

impl SameStripExclusions {
    pub fn build(triangles: &[LabeledTriangle]) -> Result<Self> {
        let mut out = SameStripExclusions::default();
        for (k, t) in triangles.iter().enumerate() {
            for u in &triangles[k + 1..] {
                let ex = excluded_shears_same(t, u)?;
                out.pairs += 1;
                out.max_roots_per_pair = out.max_roots_per_pair.max(ex.root_count());
                for q in ex.quadratics {
                    let rational = q.c2.is_rational() && q.c1.is_rational() && q.c0.is_rational();
                    match (&q.roots, rational) {
                        (ShearRoots::Exact(r), true) => {
                            out.rational_roots.extend(r.iter().cloned())
                        }
                        (ShearRoots::Algebraic, true) => out.algebraic_quadratics += 1,
                        (ShearRoots::Empty, _) => {}
                        (_, false) => out.irrational.push(q),
                    }
                }
            }
        }
        Ok(out)
    }

    /// A rational `δ` is a root of a rational quadratic only if it is one of
    /// the stored rational roots.
    pub fn excludes(&self, delta: &Scalar) -> bool {
        if delta.is_rational() && self.rational_roots.contains(delta) {
            return true;
        }
        !delta.is_rational() && self.algebraic_quadratics > 0
            || self.irrational.iter().any(|q| q.eval(delta).is_zero())
    }
}

/// The union of cross-strip exclusion sets against every already placed
/// triangle (set B), stored as the slanted edge of each base triangle and the
/// set of squared edge lengths seen so far: `δ` is a root of
/// `δ²y² + 2δxy + x² + y² − L` iff `|shear_δ(e0)|² = L`.
#[derive(Clone, Debug)]
pub struct CrossStripExclusions {
    base_edges: Vec<(TriangleId, Point)>,
    targets: HashMap<Scalar, TriangleId>,
}

impl CrossStripExclusions {
    pub fn new(base: &[LabeledTriangle]) -> Result<Self> {
        let base_edges = base
            .iter()
            .map(|t| {
                slanted_edge(&t.polygon)
                    .map(|e| (t.id, e))
                    .ok_or_else(|| Error::Precondition(format!("{} has no slanted edge", t.id)))
            })
            .collect::<Result<_>>()?;
        Ok(CrossStripExclusions {
            base_edges,
            targets: HashMap::new(),
        })
    }

    pub fn add_placed(&mut self, placed: &[LabeledTriangle]) {
        for t in placed {
            for l in t.polygon.squared_edge_lengths() {
                self.targets.entry(l).or_insert(t.id);
            }
        }
    }

    /// The base/placed pair whose exclusion set contains `δ`, if any.
    pub fn excluded_by(&self, delta: &Scalar) -> Option<(TriangleId, TriangleId)> {
        self.base_edges.iter().find_map(|(id, e)| {
            let len = e.shear(delta).norm2();
            self.targets.get(&len).map(|placed| (*id, *placed))
        })
    }
}

/// Greedy draw-and-verify selection of `count` shears. Each candidate is a
/// rational `p/q` with `2 ≤ q ≤ max_denominator`, `|p| < q`, drawn from a
/// ChaCha stream seeded by `seed`; it is accepted when it avoids set A, set B,
/// and an exhaustive exact `≅` scan of the new strip against itself and every
/// earlier strip finds nothing.
pub fn choose_shears(
    strip: &CertifiedStrip,
    count: usize,
    seed: u64,
    config: &ShearConfig,
) -> Result<ShearSelection> {
    let base = &strip.window.triangles;
    let same = SameStripExclusions::build(base)?;
    let mut cross = CrossStripExclusions::new(base)?;
    let mut registry: HashMap<CongruenceKey, TriangleId> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selection = ShearSelection {
        seed,
        choices: Vec::with_capacity(count),
        same_strip_roots: same.rational_roots.len(),
        same_strip_algebraic: same.algebraic_quadratics,
        rejected_same: 0,
        rejected_cross: 0,
        rejected_scan: 0,
    };
    for n in 1..=count {
        let mut draws = 0;
        let accepted = loop {
            if draws == config.max_draws {
                return Err(Error::DrawBudget { strip: n, draws });
            }
            draws += 1;
            let q = rng.random_range(2..=config.max_denominator.max(2));
            let p = rng.random_range(-(q - 1)..=(q - 1));
            let delta = Scalar::ratio(p, q);
            if same.excludes(&delta) {
                selection.rejected_same += 1;
                continue;
            }
            if cross.excluded_by(&delta).is_some() {
                selection.rejected_cross += 1;
                continue;
            }
            let sheared = shear_strip(base, &delta, n as u32);
            let mut fresh: HashMap<CongruenceKey, TriangleId> = HashMap::new();
            let clash = sheared.iter().any(|t| {
                let key = congruence_key(&t.polygon);
                registry.contains_key(&key) || fresh.insert(key, t.id).is_some()
            });
            if clash {
                selection.rejected_scan += 1;
                continue;
            }
            registry.extend(fresh);
            cross.add_placed(&sheared);
            break delta;
        };
        selection.choices.push(ShearChoice { n, delta: accepted });
    }
    Ok(selection)
}
