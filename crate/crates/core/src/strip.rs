//! The distorted strip tiling of `S = ℝ × [−1, 1]`.
//!
//! Raising the centre vertex of the undistorted strip (triangles with edges
//! √2, √2, 2) to `(0, y0)` and insisting on unit areas, mirror symmetry and
//! unchanged topology determines every other vertex. Along the centre line
//! sit `(x_i, y_i)`, on the upper boundary `(a_i, 1)`, on the lower boundary
//! `(b_i, −1)`.
//!
//! The production recursion runs on the deviations from the undistorted
//! tiling, `ξ_i = x_i − 2i`, `α_i = a_i − (2i − 1)`, `β_i = b_i − (2i − 1)`,
//! and `h_i = 1 + α_{i+1} + β_{i+1}`. The raw recursion is kept as
//! [`raw_step`] for cross-checking.
//!
//! Exact rationals grow quickly: for a generic rational start height the
//! bit length of `y_i` roughly triples per column (measured: 2, 11, 46, 155,
//! 495, 1523, 4610, 13884 bits for `y0 = 3/5`). Generation therefore carries
//! an explicit bit budget and fails with [`Error::ExactBudget`] instead of
//! rounding.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{signed_area, ConvexPolygon, Point};
use crate::scalar::{rational, Rational, Scalar};

/// Default cap on the bit length of any integer in a strip state. Reached
/// at column 10 for `y0 = 3/5`.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 17;

/// Recursion state for column `i`. The boundary fields hold the *next*
/// abscissae: `a = a_{i+1}`, `b = b_{i+1}`, `alpha = α_{i+1}`,
/// `beta = β_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripState {
    pub i: u64,
    pub x: Scalar,
    pub y: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub xi: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub h: Scalar,
}

impl StripState {
    fn from_deviations(i: u64, xi: Scalar, y: Scalar, alpha: Scalar, beta: Scalar) -> Self {
        let two_i = Scalar::int(2 * i as i64);
        let odd = Scalar::int(2 * i as i64 + 1);
        StripState {
            i,
            x: &xi + &two_i,
            a: &alpha + &odd,
            b: &beta + &odd,
            h: Scalar::one() + &alpha + &beta,
            xi,
            y,
            alpha,
            beta,
        }
    }

    /// Largest bit length among the state's scalars.
    pub fn bits(&self) -> u64 {
        [
            &self.x,
            &self.y,
            &self.a,
            &self.b,
            &self.xi,
            &self.alpha,
            &self.beta,
            &self.h,
        ]
        .iter()
        .map(|s| s.bits())
        .max()
        .unwrap_or(0)
    }

    /// Checks the deviation invariants that tie the stored fields together.
    pub fn is_consistent(&self) -> bool {
        let odd = Scalar::int(2 * self.i as i64 + 1);
        self.h == Scalar::one() + &self.alpha + &self.beta
            && self.xi == &self.x - Scalar::int(2 * self.i as i64)
            && self.alpha == &self.a - &odd
            && self.beta == &self.b - &odd
    }

    pub fn centre(&self) -> Point {
        Point::new(self.x.clone(), self.y.clone())
    }
}

/// Accepts `0 < y0 < 1`.
pub fn init_state(y0: &Scalar) -> Result<StripState> {
    if !y0.is_positive() || *y0 >= Scalar::one() {
        return Err(Error::InvalidStartHeight(y0.to_string(), "(0, 1)"));
    }
    let alpha = y0 / (Scalar::one() - y0);
    let beta = -(y0 / (Scalar::one() + y0));
    Ok(StripState::from_deviations(
        0,
        Scalar::zero(),
        y0.clone(),
        alpha,
        beta,
    ))
}

/// Advances one column with the deviation recursion and checks the
/// telescoped-denominator identity
/// `½((x_i + a_{i+1})(1 − y_i) + (x_i + b_{i+1})(1 + y_i)) = 4(i+1) − 3`,
/// which is what makes the raw and deviation forms coincide.
pub fn step_state(s: &StripState) -> Result<StripState> {
    let column = s.i + 1;
    let degenerate = |reason: &str| Error::Degenerate {
        column,
        reason: reason.into(),
    };
    if s.h.is_zero() {
        return Err(degenerate("h vanishes"));
    }
    let one = Scalar::one();
    let identity =
        ((&s.x + &s.a) * (&one - &s.y) + (&s.x + &s.b) * (&one + &s.y)) * Scalar::ratio(1, 2);
    if identity != Scalar::int(4 * column as i64 - 3) {
        return Err(Error::IdentityFailed {
            column,
            identity: "telescoped denominator",
        });
    }

    let y_over_h = &s.y / &s.h;
    let y = &s.y - &y_over_h * Scalar::int(2);
    let xi = &s.xi - (&s.alpha - &s.beta) * &y_over_h;
    let up = &one - &y;
    let down = &one + &y;
    if up.is_zero() || down.is_zero() {
        return Err(degenerate("centre vertex reached the boundary"));
    }
    let two_y = &y * Scalar::int(2);
    let alpha = &s.alpha + &two_y / up;
    let beta = &s.beta - &two_y / down;
    Ok(StripState::from_deviations(column, xi, y, alpha, beta))
}

/// One step of the raw recursion: returns `(x_{i+1}, y_{i+1}, a_{i+2},
/// b_{i+2})` from the undisturbed coordinates of `s`, using the full
/// denominator `(a − x)(1 + y) + (b − x)(1 − y)`.
pub fn raw_step(s: &StripState) -> Result<(Scalar, Scalar, Scalar, Scalar)> {
    let one = Scalar::one();
    let denom = (&s.a - &s.x) * (&one + &s.y) + (&s.b - &s.x) * (&one - &s.y);
    let fail = || Error::Degenerate {
        column: s.i + 1,
        reason: "raw denominator vanishes".into(),
    };
    let x = &s.x + Scalar::int(2)
        - (Scalar::int(2) * (&s.a - &s.b) * &s.y)
            .checked_div(&denom)
            .ok_or_else(fail)?;
    let y = &s.y
        - (Scalar::int(4) * &s.y)
            .checked_div(&denom)
            .ok_or_else(fail)?;
    let a = &s.a + Scalar::int(2).checked_div(&(&one - &y)).ok_or_else(fail)?;
    let b = &s.b + Scalar::int(2).checked_div(&(&one + &y)).ok_or_else(fail)?;
    Ok((x, y, a, b))
}

/// The simplified recursion with denominator `−4i + 3 + a_i + b_i`, with
/// `i = s.i + 1`. Returns `(x_{i}, y_{i})`.
pub fn simplified_step(s: &StripState) -> Result<(Scalar, Scalar)> {
    let i = s.i as i64 + 1;
    let denom = Scalar::int(-4 * i + 3) + &s.a + &s.b;
    let fail = || Error::Degenerate {
        column: s.i + 1,
        reason: "simplified denominator vanishes".into(),
    };
    let x = &s.x + Scalar::int(2)
        - ((&s.a - &s.b) * &s.y)
            .checked_div(&denom)
            .ok_or_else(fail)?;
    let y = &s.y
        - (Scalar::int(2) * &s.y)
            .checked_div(&denom)
            .ok_or_else(fail)?;
    Ok((x, y))
}

/// States for columns `0..=i_max`, failing once any state exceeds
/// `bit_budget` bits.
pub fn generate_states(y0: &Scalar, i_max: u64, bit_budget: u64) -> Result<Vec<StripState>> {
    match generate_states_partial(y0, i_max, bit_budget)? {
        (states, None) => Ok(states),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`generate_states`], but on a budget overrun returns the columns
/// computed so far together with the [`Error::ExactBudget`] that stopped it.
pub fn generate_states_partial(
    y0: &Scalar,
    i_max: u64,
    bit_budget: u64,
) -> Result<(Vec<StripState>, Option<Error>)> {
    let mut states = vec![init_state(y0)?];
    while states.len() as u64 <= i_max {
        let next = step_state(states.last().expect("nonempty"))?;
        let bits = next.bits();
        if bits > bit_budget {
            return Ok((
                states,
                Some(Error::ExactBudget {
                    column: next.i,
                    bits,
                    budget: bit_budget,
                }),
            ));
        }
        states.push(next);
    }
    Ok((states, None))
}

/// `T_i^j`; negative columns are mirror images in the vertical axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleId {
    pub strip: u32,
    pub column: i64,
    pub kind: u8,
}

impl TriangleId {
    pub fn new(strip: u32, column: i64, kind: u8) -> Self {
        TriangleId {
            strip,
            column,
            kind,
        }
    }

    /// Membership in `I = ((ℤ∖{0}) × {1,2,3,4}) ∪ {(0,1),(0,4)}`.
    pub fn is_valid(&self) -> bool {
        match self.column {
            0 => self.kind == 1 || self.kind == 4,
            _ => (1..=4).contains(&self.kind),
        }
    }
}

impl std::fmt::Display for TriangleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T[n={}]_{}^{}", self.strip, self.column, self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTriangle {
    pub id: TriangleId,
    pub polygon: ConvexPolygon,
}

impl LabeledTriangle {
    fn build(id: TriangleId, vertices: [Point; 3]) -> Result<Self> {
        let polygon = ConvexPolygon::new(vertices.to_vec())?;
        if signed_area(&polygon) != Scalar::one() {
            return Err(Error::IdentityFailed {
                column: id.column.unsigned_abs(),
                identity: "unit area",
            });
        }
        Ok(LabeledTriangle { id, polygon })
    }

    pub fn mirrored(&self) -> LabeledTriangle {
        LabeledTriangle {
            id: TriangleId {
                column: -self.id.column,
                ..self.id
            },
            polygon: self.polygon.mirror_x(),
        }
    }
}

/// `T_0^1 = △((−a_1, 1), (0, y0), (a_1, 1))` and
/// `T_0^4 = △((−b_1, −1), (b_1, −1), (0, y0))`.
pub fn centre_triangles(s0: &StripState) -> Result<[LabeledTriangle; 2]> {
    if s0.i != 0 {
        return Err(Error::NonConsecutive(s0.i, 0));
    }
    let top = Scalar::one();
    let bottom = Scalar::int(-1);
    let apex = s0.centre();
    let t1 = LabeledTriangle::build(
        TriangleId::new(0, 0, 1),
        [
            Point::new(-&s0.a, top.clone()),
            apex.clone(),
            Point::new(s0.a.clone(), top),
        ],
    )?;
    let t4 = LabeledTriangle::build(
        TriangleId::new(0, 0, 4),
        [
            Point::new(-&s0.b, bottom.clone()),
            Point::new(s0.b.clone(), bottom),
            apex,
        ],
    )?;
    Ok([t1, t4])
}

/// The four triangles of column `i = cur.i ≥ 1`, all counterclockwise:
///
/// * `T_i^1 = △((a_i, 1), (x_i, y_i), (a_{i+1}, 1))`, horizontal edge on `y = 1`
/// * `T_i^2 = △((x_{i−1}, y_{i−1}), (x_i, y_i), (a_i, 1))`
/// * `T_i^3 = △((x_{i−1}, y_{i−1}), (b_i, −1), (x_i, y_i))`
/// * `T_i^4 = △((b_i, −1), (b_{i+1}, −1), (x_i, y_i))`, horizontal edge on `y = −1`
///
/// `mirrored` reflects them in `x = 0`, giving `T_{−i}^j`.
pub fn triangles_of_column(
    prev: &StripState,
    cur: &StripState,
    mirrored: bool,
) -> Result<[LabeledTriangle; 4]> {
    if cur.i != prev.i + 1 || cur.i == 0 {
        return Err(Error::NonConsecutive(prev.i, cur.i));
    }
    let i = cur.i as i64;
    let top = Scalar::one();
    let bottom = Scalar::int(-1);
    let a_i = Point::new(prev.a.clone(), top.clone());
    let a_next = Point::new(cur.a.clone(), top);
    let b_i = Point::new(prev.b.clone(), bottom.clone());
    let b_next = Point::new(cur.b.clone(), bottom);
    let (c_prev, c_cur) = (prev.centre(), cur.centre());
    let id = |kind| TriangleId::new(0, i, kind);
    let tris = [
        LabeledTriangle::build(id(1), [a_i.clone(), c_cur.clone(), a_next])?,
        LabeledTriangle::build(id(2), [c_prev.clone(), c_cur.clone(), a_i])?,
        LabeledTriangle::build(id(3), [c_prev, b_i.clone(), c_cur.clone()])?,
        LabeledTriangle::build(id(4), [b_i, b_next, c_cur])?,
    ];
    Ok(if mirrored {
        tris.map(|t| t.mirrored())
    } else {
        tris
    })
}

/// The strip tiling restricted to columns `|i| ≤ i_max`:
/// `2 + 8·i_max` triangles.
#[derive(Clone, Debug)]
pub struct StripWindow {
    pub y0: Scalar,
    pub i_max: u64,
    pub states: Vec<StripState>,
    pub triangles: Vec<LabeledTriangle>,
}

impl StripWindow {
    pub fn generate(y0: &Scalar, i_max: u64) -> Result<Self> {
        Self::generate_with_budget(y0, i_max, DEFAULT_BIT_BUDGET)
    }

    pub fn generate_with_budget(y0: &Scalar, i_max: u64, bit_budget: u64) -> Result<Self> {
        let states = generate_states(y0, i_max, bit_budget)?;
        Self::from_states(y0.clone(), states)
    }

    pub fn from_states(y0: Scalar, states: Vec<StripState>) -> Result<Self> {
        let i_max = states.len() as u64 - 1;
        let mut triangles = centre_triangles(&states[0])?.to_vec();
        for pair in states.windows(2) {
            let right = triangles_of_column(&pair[0], &pair[1], false)?;
            let left = right.clone().map(|t| t.mirrored());
            triangles.extend(right);
            triangles.extend(left);
        }
        Ok(StripWindow {
            y0,
            i_max,
            states,
            triangles,
        })
    }

    pub fn get(&self, column: i64, kind: u8) -> Option<&LabeledTriangle> {
        self.triangles
            .iter()
            .find(|t| t.id.column == column && t.id.kind == kind)
    }

    /// Abscissae on the upper (`upper = true`) or lower boundary, ascending.
    pub fn boundary_abscissae(&self, upper: bool) -> Vec<Scalar> {
        let mut right: Vec<Scalar> = self
            .states
            .iter()
            .map(|s| if upper { s.a.clone() } else { s.b.clone() })
            .collect();
        let mut all: Vec<Scalar> = right.iter().rev().map(|v| -v).collect();
        all.append(&mut right);
        all
    }
}

/// Closed form of the critical tiling at `y0 = 1/√3`, as a recursion state:
/// `x_i = 2i − ½`, `y_i = 0`, `a_i = 2i + (√3 − 1)/2`, `b_i = 2i − (√3 + 1)/2`
/// for `i ≥ 1`; column 0 follows from the start values.
pub fn closed_form_star(i: u64) -> StripState {
    let half = rational(1, 2);
    let alpha = Scalar::quad(half.clone(), half.clone());
    let beta = Scalar::quad(half.clone(), -half.clone());
    if i == 0 {
        StripState::from_deviations(0, Scalar::zero(), Scalar::inv_sqrt3(), alpha, beta)
    } else {
        StripState::from_deviations(i, Scalar::ratio(-1, 2), Scalar::zero(), alpha, beta)
    }
}

/// Coordinates `(x_i, y_i, a_i, b_i)` of the critical tiling,
/// `i ≥ 1`.
pub fn star_coordinates(i: u64) -> (Scalar, Scalar, Scalar, Scalar) {
    let i2 = rational(2 * i as i64, 1);
    let half = rational(1, 2);
    (
        Scalar::Rat(&i2 - &half),
        Scalar::zero(),
        Scalar::quad(&i2 - &half, half.clone()),
        Scalar::quad(&i2 - &half, -half),
    )
}

/// Which bound failed in [`check_bounds`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// `0 < y_i`
    PositiveHeight,
    /// `y_i < 1`
    HeightBelowOne,
    /// `y_i < y_{i−1}/2`
    Halving,
    /// `2 < h_{i−1}` (or `h_0 > 2`)
    HLowerBound,
    /// `h_{i−1} < h_i`
    HIncreasing,
    /// `h_i ≤ 1 + (10 − 4^{1−i})/3 · y0²/(1 − y0²)`
    HUpperBound,
    /// `y_i < 2^{−i} y0`
    GeometricDecay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub column: u64,
    pub kind: BoundKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub y0: String,
    pub i_max: u64,
    pub checks: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `1/3 < y0² < 9/19`, i.e. `1/√3 < y0 < 3/√19`, decided on squares.
pub fn in_certified_interval(y0: &Scalar) -> bool {
    if !y0.is_positive() {
        return false;
    }
    let sq = y0.square();
    sq > Scalar::ratio(1, 3) && sq < Scalar::ratio(9, 19)
}

pub const CERTIFIED_INTERVAL: &str = "(1/sqrt3, 3/sqrt19)";

fn require_certified_interval(y0: &Scalar) -> Result<()> {
    if in_certified_interval(y0) {
        Ok(())
    } else {
        Err(Error::InvalidStartHeight(
            y0.to_string(),
            CERTIFIED_INTERVAL,
        ))
    }
}

/// Exact check of the contraction bounds on columns `0..=i_max`.
pub fn check_bounds(y0: &Scalar, i_max: u64) -> Result<BoundsReport> {
    check_bounds_with_budget(y0, i_max, DEFAULT_BIT_BUDGET)
}

pub fn check_bounds_with_budget(y0: &Scalar, i_max: u64, bit_budget: u64) -> Result<BoundsReport> {
    require_certified_interval(y0)?;
    let states = generate_states(y0, i_max, bit_budget)?;
    Ok(check_bounds_on_states(y0, &states))
}

/// Checks the bounds on consecutive columns `0..states.len()` of the strip
/// starting at `y0`.
pub fn check_bounds_on_states(y0: &Scalar, states: &[StripState]) -> BoundsReport {
    let one = Scalar::one();
    let two = Scalar::int(2);
    let y0_sq = y0.square();
    let ratio0 = &y0_sq / (&one - &y0_sq);
    let mut violations = Vec::new();
    let mut checks = 0;
    let mut check = |ok: bool, column: u64, kind: BoundKind| {
        checks += 1;
        if !ok {
            violations.push(BoundViolation { column, kind });
        }
    };
    let mut pow_half = Scalar::one();
    for (k, s) in states.iter().enumerate() {
        let i = k as u64;
        check(s.y.is_positive(), i, BoundKind::PositiveHeight);
        check(s.y < one, i, BoundKind::HeightBelowOne);
        // 4^{1−i}
        let four_pow = if i == 0 {
            Scalar::int(4)
        } else {
            Scalar::Rat(Rational::new(
                1.into(),
                num_bigint::BigInt::from(4).pow(i as u32 - 1),
            ))
        };
        let cap = &one + (Scalar::int(10) - four_pow) / Scalar::int(3) * &ratio0;
        check(s.h <= cap, i, BoundKind::HUpperBound);
        if i == 0 {
            check(s.h > two, i, BoundKind::HLowerBound);
        } else {
            let prev = &states[k - 1];
            check(s.y < &prev.y / &two, i, BoundKind::Halving);
            check(prev.h > two, i, BoundKind::HLowerBound);
            check(prev.h < s.h, i, BoundKind::HIncreasing);
            pow_half = pow_half * Scalar::ratio(1, 2);
            check(s.y < &pow_half * y0, i, BoundKind::GeometricDecay);
        }
    }
    BoundsReport {
        y0: y0.to_string(),
        i_max: states.len().saturating_sub(1) as u64,
        checks,
        violations,
    }
}

/// Deviation bounds and the derived per-edge budget.
#[derive(Clone, Debug, PartialEq)]
pub struct PerimeterBudget {
    /// `4y0/(1 − y0)` bounds `|α_i|`.
    pub c_alpha: Scalar,
    /// `4y0` bounds `|β_i|`.
    pub c_beta: Scalar,
    /// `(C_α + C_β)·y0` bounds `|ξ_i|`.
    pub c_xi: Scalar,
    /// `(2 + 2·max(C_α, C_β, C_ξ))² + 4`: every edge has horizontal extent at
    /// most `2 + 2·max` and vertical extent at most 2.
    pub squared_edge: Scalar,
    /// `3·√squared_edge`, an upper bound on every perimeter.
    pub perimeter_bound: f64,
}

pub fn perimeter_budget(y0: &Scalar) -> Result<PerimeterBudget> {
    require_certified_interval(y0)?;
    let four = Scalar::int(4);
    let c_alpha = &four * y0 / (Scalar::one() - y0);
    let c_beta = &four * y0;
    let c_xi = (&c_alpha + &c_beta) * y0;
    let m = Scalar::max(&Scalar::max(&c_alpha, &c_beta), &c_xi);
    let extent = Scalar::int(2) + Scalar::int(2) * m;
    let squared_edge = extent.square() + four;
    let perimeter_bound = 3.0 * squared_edge.approx().sqrt();
    Ok(PerimeterBudget {
        c_alpha,
        c_beta,
        c_xi,
        squared_edge,
        perimeter_bound,
    })
}

/// Sign pattern of `y_i` for the alternation experiment below the critical
/// height. Stops at the bit budget and reports how far it got.
#[derive(Clone, Debug, Serialize)]
pub struct SignExperiment {
    pub y0: String,
    pub requested: u64,
    pub reached: u64,
    pub signs: Vec<i8>,
    pub alternates: bool,
    pub stopped_by_budget: bool,
}

pub fn alternation_experiment(y0: &Scalar, i_max: u64, bit_budget: u64) -> Result<SignExperiment> {
    let mut state = init_state(y0)?;
    let mut signs = vec![sign_i8(&state.y)];
    let mut stopped_by_budget = false;
    while state.i < i_max {
        let next = step_state(&state)?;
        if next.bits() > bit_budget {
            stopped_by_budget = true;
            break;
        }
        signs.push(sign_i8(&next.y));
        state = next;
    }
    let alternates = signs.windows(2).all(|w| w[0] != 0 && w[0] == -w[1]);
    Ok(SignExperiment {
        y0: y0.to_string(),
        requested: i_max,
        reached: state.i,
        signs,
        alternates,
        stopped_by_budget,
    })
}

fn sign_i8(s: &Scalar) -> i8 {
    match s.sign() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{congruence_key, translation_congruent, vertical_width};
    use std::collections::HashSet;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn start_values_for_three_fifths() {
        let s = init_state(&q(3, 5)).unwrap();
        assert_eq!(s.a, q(5, 2));
        assert_eq!(s.b, q(5, 8));
        assert_eq!(s.alpha, q(3, 2));
        assert_eq!(s.beta, q(-3, 8));
        assert_eq!(s.h, q(17, 8));
        assert!(s.is_consistent());
    }

    #[test]
    fn start_values_at_critical_height() {
        let s = init_state(&Scalar::inv_sqrt3()).unwrap();
        assert_eq!(s.h, Scalar::int(2));
        assert_eq!(s, closed_form_star(0));
    }

    #[test]
    fn start_height_outside_unit_interval_rejected() {
        for y0 in [Scalar::zero(), Scalar::one(), q(-1, 2), q(3, 2)] {
            assert!(matches!(
                init_state(&y0),
                Err(Error::InvalidStartHeight(..))
            ));
        }
    }

    #[test]
    fn first_step_for_three_fifths() {
        let s1 = step_state(&init_state(&q(3, 5)).unwrap()).unwrap();
        assert_eq!(s1.y, q(3, 85));
        assert_eq!(s1.xi, q(-9, 17));
        assert_eq!(s1.x, q(25, 17));
        assert!(s1.is_consistent());
    }

    #[test]
    fn raw_and_simplified_forms_agree() {
        let mut s = init_state(&q(3, 5)).unwrap();
        for _ in 0..7 {
            let (x, y, a, b) = raw_step(&s).unwrap();
            let (sx, sy) = simplified_step(&s).unwrap();
            let next = step_state(&s).unwrap();
            assert_eq!((&next.x, &next.y, &next.a, &next.b), (&x, &y, &a, &b));
            assert_eq!((&next.x, &next.y), (&sx, &sy));
            s = next;
        }
    }

    #[test]
    fn critical_height_collapses_to_the_axis() {
        let mut s = init_state(&Scalar::inv_sqrt3()).unwrap();
        for i in 1..=20 {
            s = step_state(&s).unwrap();
            assert!(s.y.is_zero());
            assert_eq!(s, closed_form_star(i));
        }
    }

    #[test]
    fn closed_form_values() {
        let (x1, y1, a1, b1) = star_coordinates(1);
        assert_eq!(x1, q(3, 2));
        assert!(y1.is_zero());
        let sqrt3 = Scalar::sqrt3();
        assert_eq!(
            a1,
            Scalar::int(2) + (&sqrt3 - Scalar::one()) / Scalar::int(2)
        );
        assert_eq!(
            b1,
            Scalar::int(2) - (&sqrt3 + Scalar::one()) / Scalar::int(2)
        );
        let (x2, _, a2, _) = star_coordinates(2);
        assert_eq!(x2, q(7, 2));
        assert_eq!(
            a2,
            Scalar::int(4) + (&sqrt3 - Scalar::one()) / Scalar::int(2)
        );
        // a_{i+1} is carried by state i
        assert_eq!(closed_form_star(1).a, a2);
        assert_eq!(closed_form_star(0).a, a1);
    }

    #[test]
    fn unit_areas_and_vertical_widths() {
        let w = StripWindow::generate(&q(3, 5), 6).unwrap();
        assert_eq!(w.triangles.len(), 2 + 8 * 6);
        for t in &w.triangles {
            assert_eq!(signed_area(&t.polygon), Scalar::one());
            assert!(t.id.is_valid());
        }
        let s = &w.states;
        assert_eq!(vertical_width(&w.get(1, 3).unwrap().polygon), q(8, 5));
        assert_eq!(vertical_width(&w.get(1, 1).unwrap().polygon), q(82, 85));
        for i in 1..=6i64 {
            let k = i as usize;
            for col in [i, -i] {
                let vw = |j| vertical_width(&w.get(col, j).unwrap().polygon);
                assert_eq!(vw(1), Scalar::one() - &s[k].y);
                assert_eq!(vw(2), Scalar::one() - &s[k].y);
                assert_eq!(vw(3), Scalar::one() + &s[k - 1].y);
                assert_eq!(vw(4), Scalar::one() + &s[k].y);
            }
        }
    }

    #[test]
    fn horizontal_edges_match_labels() {
        let w = StripWindow::generate(&q(3, 5), 4).unwrap();
        for t in &w.triangles {
            assert_eq!(
                t.polygon.has_horizontal_edge(),
                t.id.kind == 1 || t.id.kind == 4,
                "{}",
                t.id
            );
        }
    }

    #[test]
    fn mirror_symmetry() {
        let w = StripWindow::generate(&q(3, 5), 5).unwrap();
        let shapes: HashSet<_> = w
            .triangles
            .iter()
            .map(|t| t.polygon.vertices().to_vec())
            .collect();
        for t in &w.triangles {
            let m = t.polygon.mirror_x();
            let mut found = false;
            for s in &shapes {
                let mut a = s.clone();
                let mut b = m.vertices().to_vec();
                a.sort();
                b.sort();
                found |= a == b;
            }
            assert!(found, "mirror of {} missing", t.id);
        }
    }

    #[test]
    fn star_column_one() {
        let states: Vec<_> = (0..=3).map(closed_form_star).collect();
        let w = StripWindow::from_states(Scalar::inv_sqrt3(), states).unwrap();
        let t2 = w.get(1, 2).unwrap();
        let mut got = t2.polygon.vertices().to_vec();
        got.sort();
        let mut want = vec![
            Point::new(Scalar::quad(rational(3, 2), rational(1, 2)), Scalar::one()),
            Point::new(q(3, 2), Scalar::zero()),
            Point::new(Scalar::zero(), Scalar::inv_sqrt3()),
        ];
        want.sort();
        assert_eq!(got, want);
        for t in &w.triangles {
            assert_eq!(signed_area(&t.polygon), Scalar::one());
        }
        for i in 1..=3 {
            for j in 1..=4 {
                let (r, l) = (w.get(i, j).unwrap(), w.get(-i, j).unwrap());
                assert!(!translation_congruent(&r.polygon, &l.polygon), "T*_{i}^{j}");
            }
        }
    }

    #[test]
    fn star_has_six_congruence_classes() {
        let states: Vec<_> = (0..=8).map(closed_form_star).collect();
        let w = StripWindow::from_states(Scalar::inv_sqrt3(), states).unwrap();
        let classes: HashSet<_> = w
            .triangles
            .iter()
            .map(|t| congruence_key(&t.polygon))
            .collect();
        assert_eq!(classes.len(), 6);
        let key = |i, j| congruence_key(&w.get(i, j).unwrap().polygon);
        assert_eq!(key(1, 1), key(2, 2));
        assert_eq!(key(1, 4), key(2, 3));
        assert_ne!(key(0, 1), key(1, 1));
    }

    #[test]
    fn non_consecutive_states_rejected() {
        let states = generate_states(&q(3, 5), 3, DEFAULT_BIT_BUDGET).unwrap();
        assert!(matches!(
            triangles_of_column(&states[0], &states[2], false),
            Err(Error::NonConsecutive(0, 2))
        ));
        assert!(centre_triangles(&states[1]).is_err());
    }

    #[test]
    fn bounds_hold_for_three_fifths() {
        let report = check_bounds(&q(3, 5), 8).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        let s0 = init_state(&q(3, 5)).unwrap();
        assert!(s0.h > Scalar::int(2) && s0.h < Scalar::int(4));
    }

    #[test]
    fn bounds_reject_outside_interval() {
        assert!(matches!(
            check_bounds(&q(1, 2), 4),
            Err(Error::InvalidStartHeight(..))
        ));
        assert!(matches!(
            check_bounds(&Scalar::inv_sqrt3(), 4),
            Err(Error::InvalidStartHeight(..))
        ));
        // 3/√19 ≈ 0.688
        assert!(check_bounds(&q(69, 100), 2).is_err());
        assert!(check_bounds(&q(68, 100), 2).is_ok());
    }

    #[test]
    fn budget_stops_generation() {
        let err = generate_states(&q(3, 5), 40, 4096).unwrap_err();
        match err {
            Error::ExactBudget {
                column,
                bits,
                budget,
            } => {
                assert_eq!(budget, 4096);
                assert!(bits > 4096);
                assert!(column < 40);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn perimeter_constants() {
        let p = perimeter_budget(&q(3, 5)).unwrap();
        assert_eq!(p.c_alpha, Scalar::int(6));
        assert_eq!(p.c_beta, q(12, 5));
        assert_eq!(p.c_xi, q(126, 25));
        assert_eq!(p.squared_edge, Scalar::int(200));
        let w = StripWindow::generate(&q(3, 5), 8).unwrap();
        for t in &w.triangles {
            for l in t.polygon.squared_edge_lengths() {
                assert!(l <= p.squared_edge);
            }
        }
    }

    #[test]
    fn c_beta_near_critical_height() {
        // 4·y0 → 4/√3 ≈ 2.309 as y0 ↓ 1/√3
        let p = perimeter_budget(&q(57736, 100000)).unwrap();
        assert!((p.c_beta.approx() - 4.0 / 3f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn alpha_beta_partial_sums() {
        let y0 = q(3, 5);
        let states = generate_states(&y0, 7, DEFAULT_BIT_BUDGET).unwrap();
        let one = Scalar::one();
        let frac = |y: &Scalar| y.square() / (&one - y.square());
        let mut sum = Scalar::int(2) * frac(&y0);
        for (k, s) in states.iter().enumerate() {
            // α_{k+1} + β_{k+1} = 2y0²/(1−y0²) + 4 Σ_{m=1}^{k} y_m²/(1−y_m²)
            if k > 0 {
                sum = sum + Scalar::int(4) * frac(&s.y);
            }
            assert_eq!(&s.alpha + &s.beta, sum);
        }
    }

    #[test]
    fn alternation_below_critical_height() {
        let e = alternation_experiment(&q(1, 2), 8, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(e.reached, 8);
        assert!(e.alternates, "{:?}", e.signs);
    }
}
