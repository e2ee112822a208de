//! Stacking sheared strip copies into a vertex-to-vertex window of the plane.
//!
//! Band `k` covers `ℝ × [2k − 1, 2k + 1]`. Bands at odd `k` are reflected in
//! `y = 0` before the vertical shift, so every shared boundary line carries
//! the same spacing sequence on both sides: the upper boundaries of bands 0
//! and 1 both come from the strip's `a_i`, the next line from its `b_i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::{Rational, Scalar};
use crate::selector::{
    certify_strip_with_budget, choose_shears, Certificate, Certification, ShearConfig,
    ShearSelection,
};
use crate::strip::{
    perimeter_budget, LabeledTriangle, StripWindow, TriangleId, DEFAULT_BIT_BUDGET,
};
use crate::tiling::{PlacedStrip, Tile, TilingWindow, WindowKind};

/// `(x, y) ↦ (x + δy, y)` on every triangle, relabelled as strip `n`.
pub fn shear_strip(triangles: &[LabeledTriangle], delta: &Scalar, n: u32) -> Vec<LabeledTriangle> {
    triangles
        .iter()
        .map(|t| LabeledTriangle {
            id: TriangleId { strip: n, ..t.id },
            polygon: t.polygon.shear(delta),
        })
        .collect()
}

/// Bands in placement order: `0, +1, −1, +2, −2, …`.
pub fn band_sequence(count: usize) -> Vec<i64> {
    (0..count as i64)
        .map(|m| if m % 2 == 1 { (m + 1) / 2 } else { -(m / 2) })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Above,
    Below,
}

/// Sorted abscissae of the vertices lying on the line `y = level`.
fn boundary_on(triangles: &[LabeledTriangle], level: &Scalar) -> Vec<Scalar> {
    let mut xs: Vec<Scalar> = triangles
        .iter()
        .flat_map(|t| t.polygon.vertices().iter())
        .filter(|v| &v.y == level)
        .map(|v| v.x.clone())
        .collect();
    xs.sort();
    xs.dedup();
    xs
}

/// A plane window under construction.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub triangles: Vec<LabeledTriangle>,
    pub strips: Vec<PlacedStrip>,
    top: (i64, Vec<Scalar>),
    bottom: (i64, Vec<Scalar>),
    horizon: u64,
}

impl Assembly {
    /// Starts with `first` (already sheared) in band 0.
    pub fn new(first: Vec<LabeledTriangle>, n: usize, delta: Scalar, horizon: u64) -> Self {
        let upper = boundary_on(&first, &Scalar::one());
        let lower = boundary_on(&first, &Scalar::int(-1));
        let placed = PlacedStrip {
            n,
            delta,
            reflected: false,
            translation: Point::ints(0, 0),
            band: 0,
        };
        Assembly {
            triangles: first,
            strips: vec![placed],
            top: (0, upper),
            bottom: (0, lower),
            horizon,
        }
    }

    /// Exposed boundary abscissae on the top or bottom of the assembly.
    pub fn exposed(&self, position: Position) -> (i64, &[Scalar]) {
        match position {
            Position::Above => (self.top.0, &self.top.1),
            Position::Below => (self.bottom.0, &self.bottom.1),
        }
    }

    /// Adds `next` (sheared, still in `ℝ × [−1, 1]`) as the next band above or
    /// below. The horizontal shift aligns the shared-boundary vertex of least
    /// `|x|`; every other shared vertex is then checked to coincide exactly.
    pub fn place_strip(
        &mut self,
        next: Vec<LabeledTriangle>,
        n: usize,
        delta: Scalar,
        position: Position,
    ) -> Result<&PlacedStrip> {
        let (edge_band, exposed) = self.exposed(position);
        let band = match position {
            Position::Above => edge_band + 1,
            Position::Below => edge_band - 1,
        };
        let reflected = band.rem_euclid(2) == 1;
        let oriented: Vec<LabeledTriangle> = if reflected {
            next.into_iter()
                .map(|t| LabeledTriangle {
                    polygon: t.polygon.mirror_y(),
                    ..t
                })
                .collect()
        } else {
            next
        };
        let (facing, far) = match position {
            Position::Above => (Scalar::int(-1), Scalar::one()),
            Position::Below => (Scalar::one(), Scalar::int(-1)),
        };
        let incoming = boundary_on(&oriented, &facing);
        if incoming.len() != exposed.len() || exposed.is_empty() {
            return Err(Error::SpacingMismatch {
                strip: n,
                detail: format!(
                    "{} shared vertices against {}",
                    incoming.len(),
                    exposed.len()
                ),
            });
        }
        let anchor = (0..exposed.len())
            .min_by(|&p, &q| exposed[p].abs().cmp(&exposed[q].abs()))
            .expect("nonempty");
        let shift = &exposed[anchor] - &incoming[anchor];
        if let Some(j) = (0..exposed.len()).find(|&j| exposed[j] != &incoming[j] + &shift) {
            return Err(Error::SpacingMismatch {
                strip: n,
                detail: format!("vertex {j}: {} vs {}", exposed[j], &incoming[j] + &shift),
            });
        }
        let translation = Point::new(shift, Scalar::int(2 * band));
        let far_side: Vec<Scalar> = boundary_on(&oriented, &far)
            .into_iter()
            .map(|x| x + &translation.x)
            .collect();
        self.triangles
            .extend(oriented.into_iter().map(|t| LabeledTriangle {
                polygon: t.polygon.translate(&translation),
                ..t
            }));
        match position {
            Position::Above => self.top = (band, far_side),
            Position::Below => self.bottom = (band, far_side),
        }
        self.strips.push(PlacedStrip {
            n,
            delta,
            reflected,
            translation,
            band,
        });
        Ok(self.strips.last().expect("just pushed"))
    }

    pub fn into_window(self) -> TilingWindow {
        TilingWindow {
            kind: WindowKind::Plane,
            tiles: self.triangles.iter().map(Tile::from).collect(),
            strips: self.strips,
            horizon: self.horizon,
        }
    }
}

/// Places `deltas[m]` as strip `m + 1` in band `band_sequence[m]`.
pub fn assemble_plane(strip: &StripWindow, deltas: &[Scalar]) -> Result<TilingWindow> {
    let Some(first) = deltas.first() else {
        return Ok(TilingWindow::new(
            WindowKind::Plane,
            Vec::new(),
            strip.i_max,
        ));
    };
    let base = &strip.triangles;
    let mut assembly = Assembly::new(shear_strip(base, first, 1), 1, first.clone(), strip.i_max);
    for (m, (band, delta)) in band_sequence(deltas.len())
        .into_iter()
        .zip(deltas)
        .enumerate()
        .skip(1)
    {
        let position = if band > 0 {
            Position::Above
        } else {
            Position::Below
        };
        let n = m + 1;
        assembly.place_strip(
            shear_strip(base, delta, n as u32),
            n,
            delta.clone(),
            position,
        )?;
    }
    Ok(assembly.into_window())
}

/// Squared-edge budget for sheared copies: a shear with `|δ| < 1` moves a
/// vertex horizontally by less than `|y| ≤ 1`, so edge extents grow by at
/// most 2.
pub fn plane_squared_edge_budget(y0: &Scalar) -> Result<Scalar> {
    let p = perimeter_budget(y0)?;
    let four = Scalar::int(4);
    let extent = (&p.squared_edge - &four)
        .as_rational()
        .and_then(crate::scalar::rational_sqrt);
    Ok(match extent {
        Some(e) => (Scalar::Rat(e) + Scalar::int(2)).square() + four,
        None => {
            // fall back on (e + 2)² ≤ 2e² + 8 for irrational extents
            Scalar::int(2) * (&p.squared_edge - &four) + Scalar::int(8) + four
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneBuild {
    #[serde(skip)]
    pub window: TilingWindow,
    pub certificate: Certificate,
    pub selection: ShearSelection,
}

#[derive(Clone, Debug)]
pub struct PlaneConfig {
    pub shear: ShearConfig,
    pub bit_budget: u64,
}

impl Default for PlaneConfig {
    fn default() -> Self {
        PlaneConfig {
            shear: ShearConfig::default(),
            bit_budget: DEFAULT_BIT_BUDGET,
        }
    }
}

/// The full pipeline: certify `y0`, choose `strips` shears, stack them.
pub fn generate_plane(
    y0: &Rational,
    i_max: u64,
    strips: usize,
    seed: u64,
    config: &PlaneConfig,
) -> Result<PlaneBuild> {
    let certified = match certify_strip_with_budget(y0, i_max, config.bit_budget)? {
        Ok(c) => c,
        Err(Certification::Offending { pair: (a, b), .. }) => {
            return Err(Error::TranslationCongruent(format!("{a} and {b}")))
        }
        Err(Certification::Certified(_)) => unreachable!("certified strips are returned as Ok"),
    };
    let selection = choose_shears(&certified, strips, seed, &config.shear)?;
    let deltas: Vec<Scalar> = selection.choices.iter().map(|c| c.delta.clone()).collect();
    let window = assemble_plane(&certified.window, &deltas)?;
    Ok(PlaneBuild {
        window,
        certificate: certified.certificate,
        selection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::signed_area;
    use crate::scalar::rational;

    fn strip(i_max: u64) -> StripWindow {
        StripWindow::generate(&Scalar::ratio(3, 5), i_max).unwrap()
    }

    #[test]
    fn band_order() {
        assert_eq!(band_sequence(5), vec![0, 1, -1, 2, -2]);
        assert!(band_sequence(0).is_empty());
    }

    #[test]
    fn zero_shear_is_identity() {
        let w = strip(2);
        assert_eq!(shear_strip(&w.triangles, &Scalar::zero(), 0), w.triangles);
    }

    #[test]
    fn shear_moves_boundary_vertex_and_keeps_area() {
        let p = Point::ints(0, 1).shear(&Scalar::ratio(1, 3));
        assert_eq!(p, Point::ratios((1, 3), (1, 1)));
        let w = strip(3);
        let s = shear_strip(&w.triangles, &Scalar::ratio(2, 7), 1);
        assert!(s.iter().all(|t| signed_area(&t.polygon) == Scalar::one()));
        let sa = boundary_on(&s, &Scalar::one());
        let ba = w.boundary_abscissae(true);
        for k in 1..sa.len() {
            assert_eq!(&sa[k] - &sa[k - 1], &ba[k] - &ba[k - 1]);
        }
    }

    #[test]
    fn reflected_copy_matches_upper_boundary() {
        let w = strip(2);
        let d1 = Scalar::ratio(1, 5);
        let d2 = Scalar::ratio(-3, 7);
        let mut asm = Assembly::new(shear_strip(&w.triangles, &d1, 1), 1, d1.clone(), 2);
        let upper = asm.exposed(Position::Above).1.to_vec();
        let placed = asm
            .place_strip(
                shear_strip(&w.triangles, &d2, 2),
                2,
                d2.clone(),
                Position::Above,
            )
            .unwrap()
            .clone();
        assert!(placed.reflected);
        assert_eq!(placed.band, 1);
        // aligning a_1: a_1 + δ1 = a_1 + δ2 + t
        assert_eq!(placed.translation.x, &d1 - &d2);
        let lower_of_new = boundary_on(&asm.triangles[w.triangles.len()..], &Scalar::one());
        assert_eq!(lower_of_new, upper);
    }

    #[test]
    fn five_bands_stack_consistently() {
        let w = strip(2);
        let deltas: Vec<Scalar> = [1, -2, 3, -4, 5]
            .iter()
            .map(|&k| Scalar::ratio(k, 11))
            .collect();
        let win = assemble_plane(&w, &deltas).unwrap();
        let bands: Vec<i64> = win.strips.iter().map(|s| s.band).collect();
        assert_eq!(bands, vec![0, 1, -1, 2, -2]);
        assert_eq!(win.tiles.len(), 5 * w.triangles.len());
        for s in &win.strips {
            assert_eq!(s.reflected, s.band % 2 != 0);
        }
        for t in &win.tiles {
            assert_eq!(signed_area(&t.polygon), Scalar::one());
        }
    }

    #[test]
    fn mismatched_spacing_is_rejected() {
        let w = strip(2);
        let other = StripWindow::generate(&Scalar::ratio(2, 3), 2).unwrap();
        let d = Scalar::ratio(1, 4);
        let mut asm = Assembly::new(shear_strip(&w.triangles, &d, 1), 1, d.clone(), 2);
        let err = asm
            .place_strip(shear_strip(&other.triangles, &d, 2), 2, d, Position::Above)
            .unwrap_err();
        assert!(matches!(err, Error::SpacingMismatch { strip: 2, .. }));
    }

    #[test]
    fn unreflected_neighbour_would_not_match() {
        let w = strip(2);
        let d = Scalar::ratio(1, 4);
        let mut asm = Assembly::new(shear_strip(&w.triangles, &d, 1), 1, d.clone(), 2);
        // pre-reflecting cancels the placement's reflection
        let flipped: Vec<_> = shear_strip(&w.triangles, &d, 2)
            .into_iter()
            .map(|t| LabeledTriangle {
                polygon: t.polygon.mirror_y(),
                ..t
            })
            .collect();
        assert!(asm.place_strip(flipped, 2, d, Position::Above).is_err());
    }

    #[test]
    fn budget_with_shear_allowance() {
        assert_eq!(
            plane_squared_edge_budget(&Scalar::ratio(3, 5)).unwrap(),
            Scalar::int(260)
        );
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = generate_plane(&rational(3, 5), 2, 3, 11, &PlaneConfig::default()).unwrap();
        let b = generate_plane(&rational(3, 5), 2, 3, 11, &PlaneConfig::default()).unwrap();
        assert_eq!(a.window.tiles, b.window.tiles);
        assert_eq!(a.window.strips.len(), 3);
    }
}
