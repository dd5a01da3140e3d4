//! Integer-coordinate geometry of the triangular lattice.
//!
//! Points are stored in the skewed basis `e1 = (1, 0)`, `e2 = (0, 1)`, where
//! the six nearest neighbours of `x` are `x ± e1`, `x ± e2` and `x ± (e1 - e2)`.
//! [`embed`] maps a point to its Euclidean position in the plane.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// A vertex of the triangular lattice in integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePoint {
    pub x1: i64,
    pub x2: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x1: 0, x2: 0 };

    pub const fn new(x1: i64, x2: i64) -> Self {
        Self { x1, x2 }
    }

    /// Graph distance to the origin, `(|x1| + |x2| + |x1 + x2|) / 2`.
    ///
    /// This is also the Manhattan distance of the point's canonical
    /// representative, so it indexes the Green's function shells.
    pub fn hex_norm(self) -> i64 {
        (self.x1.abs() + self.x2.abs() + (self.x1 + self.x2).abs()) / 2
    }

    /// Euclidean norm of the integer coordinate pair (not of the embedding).
    pub fn coord_norm(self) -> f64 {
        (self.x1 as f64).hypot(self.x2 as f64)
    }

    /// Direction angle in `[0, 2π)` with `x1 = |x| cos α`, `x2 = |x| sin α`.
    pub fn coord_angle(self) -> f64 {
        let a = (self.x2 as f64).atan2(self.x1 as f64);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x1, x2): (i64, i64)) -> Self {
        Self { x1, x2 }
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * rhs.x1, self * rhs.x2)
    }
}

/// One of the six lattice directions `e1, ..., e6`.
///
/// `e3 = e1 - e2` and `e_{j+3} = -e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
        Direction(6),
    ];

    /// Returns `None` unless `index` is in `1..=6`.
    pub fn new(index: u8) -> Option<Self> {
        (1..=6).contains(&index).then_some(Self(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn offset(self) -> LatticePoint {
        match self.0 {
            1 => LatticePoint::new(1, 0),
            2 => LatticePoint::new(0, 1),
            3 => LatticePoint::new(1, -1),
            4 => LatticePoint::new(-1, 0),
            5 => LatticePoint::new(0, -1),
            6 => LatticePoint::new(-1, 1),
            _ => unreachable!("direction index out of range"),
        }
    }

    pub fn opposite(self) -> Self {
        Self((self.0 + 2) % 6 + 1)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Euclidean position `(x1 + x2/2, √3 x2 / 2)` of a lattice point.
pub fn embed(p: LatticePoint) -> (f64, f64) {
    let x1 = p.x1 as f64;
    let x2 = p.x2 as f64;
    (x1 + 0.5 * x2, 0.5 * 3f64.sqrt() * x2)
}

/// The six nearest neighbours of `p`, ordered `p + e1, ..., p + e6`.
pub fn neighborhood(p: LatticePoint) -> [LatticePoint; 6] {
    Direction::ALL.map(|d| p + d.offset())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("interior and boundary must be nonempty and disjoint (offending point {0:?})")]
    DisjointnessViolation(Option<LatticePoint>),
    #[error("interior point {0} has a neighbour outside the region")]
    InteriorNeighborhoodViolation(LatticePoint),
    #[error("boundary point {0} has no interior neighbour")]
    BoundaryContactViolation(LatticePoint),
    #[error("region is not connected: {0} is unreachable")]
    Disconnected(LatticePoint),
    #[error("cone condition fails at {0}")]
    ConeConditionViolation(LatticePoint),
    #[error("region has an empty boundary")]
    EmptyBoundary,
}

/// A region of the lattice with a fixed split into interior and boundary.
///
/// Finite regions list both parts. Cofinite regions list the boundary and
/// the excluded points; the interior is everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Finite {
        interior: BTreeSet<LatticePoint>,
        boundary: BTreeSet<LatticePoint>,
    },
    Cofinite {
        boundary: BTreeSet<LatticePoint>,
        excluded: BTreeSet<LatticePoint>,
    },
}

impl Region {
    /// Validated finite region.
    pub fn finite(
        interior: impl IntoIterator<Item = LatticePoint>,
        boundary: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self, LatticeError> {
        let region = Self::Finite {
            interior: interior.into_iter().collect(),
            boundary: boundary.into_iter().collect(),
        };
        region.validate()?;
        Ok(region)
    }

    /// Validated region `Z² \ excluded` with the given boundary.
    ///
    /// With `excluded` empty this is the whole plane with a marked boundary.
    pub fn cofinite(
        boundary: impl IntoIterator<Item = LatticePoint>,
        excluded: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self, LatticeError> {
        let region = Self::Cofinite {
            boundary: boundary.into_iter().collect(),
            excluded: excluded.into_iter().collect(),
        };
        region.validate()?;
        Ok(region)
    }

    pub fn boundary(&self) -> &BTreeSet<LatticePoint> {
        match self {
            Self::Finite { boundary, .. } | Self::Cofinite { boundary, .. } => boundary,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn is_interior(&self, p: LatticePoint) -> bool {
        match self {
            Self::Finite { interior, .. } => interior.contains(&p),
            Self::Cofinite { boundary, excluded } => {
                !boundary.contains(&p) && !excluded.contains(&p)
            }
        }
    }

    pub fn is_boundary(&self, p: LatticePoint) -> bool {
        self.boundary().contains(&p)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.is_interior(p) || self.is_boundary(p)
    }

    /// Checks the region axioms and connectivity.
    pub fn validate(&self) -> Result<(), LatticeError> {
        match self {
            Self::Finite { interior, boundary } => validate_region(interior, boundary),
            Self::Cofinite { boundary, excluded } => validate_cofinite(boundary, excluded),
        }
    }

    /// Cone condition for the region; see [`check_cone_condition`].
    pub fn check_cone_condition(&self) -> Result<(), LatticeError> {
        match self {
            Self::Cofinite { excluded, .. } => check_cone_condition(excluded),
            // every cone is infinite, so none fits inside a finite region
            Self::Finite { interior, boundary } => {
                let first = interior.iter().chain(boundary).min().copied();
                Err(LatticeError::ConeConditionViolation(first.unwrap_or_default()))
            }
        }
    }
}

/// Checks the region axioms for a finite region and its 6-connectivity.
///
/// Reports the first violating point in lexicographic order.
pub fn validate_region(
    interior: &BTreeSet<LatticePoint>,
    boundary: &BTreeSet<LatticePoint>,
) -> Result<(), LatticeError> {
    if interior.is_empty() || boundary.is_empty() {
        return Err(LatticeError::DisjointnessViolation(None));
    }
    if let Some(p) = interior.intersection(boundary).next() {
        return Err(LatticeError::DisjointnessViolation(Some(*p)));
    }
    let inside = |p: &LatticePoint| interior.contains(p) || boundary.contains(p);
    for v in interior {
        if !neighborhood(*v).iter().all(inside) {
            return Err(LatticeError::InteriorNeighborhoodViolation(*v));
        }
    }
    for b in boundary {
        if !neighborhood(*b).iter().any(|w| interior.contains(w)) {
            return Err(LatticeError::BoundaryContactViolation(*b));
        }
    }
    let all: BTreeSet<LatticePoint> = interior.union(boundary).copied().collect();
    let start = *all.iter().next().expect("nonempty");
    let reached = flood_fill(start, |p| all.contains(&p));
    if let Some(p) = all.iter().find(|p| !reached.contains(p)) {
        return Err(LatticeError::Disconnected(*p));
    }
    Ok(())
}

fn validate_cofinite(
    boundary: &BTreeSet<LatticePoint>,
    excluded: &BTreeSet<LatticePoint>,
) -> Result<(), LatticeError> {
    if boundary.is_empty() {
        return Err(LatticeError::DisjointnessViolation(None));
    }
    if let Some(p) = boundary.intersection(excluded).next() {
        return Err(LatticeError::DisjointnessViolation(Some(*p)));
    }
    // An interior point touching an excluded point breaks axiom (b); report
    // the interior point.
    let mut offenders = BTreeSet::new();
    for c in excluded {
        for w in neighborhood(*c) {
            if !excluded.contains(&w) && !boundary.contains(&w) {
                offenders.insert(w);
            }
        }
    }
    if let Some(p) = offenders.into_iter().next() {
        return Err(LatticeError::InteriorNeighborhoodViolation(p));
    }
    for b in boundary {
        let touches = neighborhood(*b)
            .iter()
            .any(|w| !boundary.contains(w) && !excluded.contains(w));
        if !touches {
            return Err(LatticeError::BoundaryContactViolation(*b));
        }
    }
    // Outside the dilated box every point belongs to the region and the box
    // frame is connected, so connectivity inside the box decides it.
    let (lo, hi) = bounding_box(boundary.iter().chain(excluded)).expect("nonempty");
    let lo = lo - LatticePoint::new(2, 2);
    let hi = hi + LatticePoint::new(2, 2);
    let in_box = |p: LatticePoint| p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2;
    let member = |p: LatticePoint| in_box(p) && !excluded.contains(&p);
    let reached = flood_fill(lo, member);
    for x1 in lo.x1..=hi.x1 {
        for x2 in lo.x2..=hi.x2 {
            let p = LatticePoint::new(x1, x2);
            if member(p) && !reached.contains(&p) {
                return Err(LatticeError::Disconnected(p));
            }
        }
    }
    Ok(())
}

fn flood_fill(start: LatticePoint, member: impl Fn(LatticePoint) -> bool) -> BTreeSet<LatticePoint> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for q in neighborhood(p) {
            if member(q) && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

fn bounding_box<'a>(
    points: impl IntoIterator<Item = &'a LatticePoint>,
) -> Option<(LatticePoint, LatticePoint)> {
    points.into_iter().fold(None, |acc, p| match acc {
        None => Some((*p, *p)),
        Some((lo, hi)) => Some((
            LatticePoint::new(lo.x1.min(p.x1), lo.x2.min(p.x2)),
            LatticePoint::new(hi.x1.max(p.x1), hi.x2.max(p.x2)),
        )),
    })
}

// 2cos(πi/3) and 2sin(πi/3)/√3 for i = 0..5.
const CONE_COS2: [i64; 6] = [2, 1, -1, -2, -1, 1];
const CONE_SIN: [i64; 6] = [0, 1, 1, 0, -1, -1];

/// Whether `v` lies in the 120° cone `C_i(w)`, `i ∈ 0..6`.
///
/// The cone is defined on the embedded vertices. After substituting
/// [`embed`] and scaling by `4/√3` the defining inequality has integer
/// coefficients, so the test is exact.
pub fn in_cone(i: usize, w: LatticePoint, v: LatticePoint) -> bool {
    let d = v - w;
    let c = CONE_COS2[i];
    let s = CONE_SIN[i];
    let u = 2 * d.x1 + d.x2;
    let lhs = (c * d.x2 - s * u).abs();
    let rhs = c * u + 3 * s * d.x2;
    lhs <= rhs
}

/// Checks that every point of `Z² \ complement` admits a cone `C_i(w)`
/// disjoint from `complement`.
///
/// Only points whose embedding lies in the embedded bounding box of the
/// complement (dilated by two lattice steps) are tested. For a point `w`
/// beyond that box, the cone opening away from the box lies in the
/// half-plane past `w` and so misses the complement: `C_0` when `w` is to
/// the right, `C_3` to the left, `C_1` above and `C_4` below (each cone
/// contains the half-plane boundary ray only on the side of `w`).
pub fn check_cone_condition(complement: &BTreeSet<LatticePoint>) -> Result<(), LatticeError> {
    let Some(first) = complement.iter().next() else {
        return Ok(());
    };
    // u = 2x1 + x2 is twice the embedded abscissa; x2 is proportional to the
    // ordinate.
    let (mut umin, mut umax) = (2 * first.x1 + first.x2, 2 * first.x1 + first.x2);
    let (mut vmin, mut vmax) = (first.x2, first.x2);
    for c in complement {
        let u = 2 * c.x1 + c.x2;
        umin = umin.min(u);
        umax = umax.max(u);
        vmin = vmin.min(c.x2);
        vmax = vmax.max(c.x2);
    }
    let (umin, umax, vmin, vmax) = (umin - 4, umax + 4, vmin - 2, vmax + 2);
    for x2 in vmin..=vmax {
        // 2x1 + x2 in [umin, umax]
        let x1_lo = (umin - x2).div_euclid(2);
        let x1_hi = (umax - x2).div_euclid(2) + 1;
        for x1 in x1_lo..=x1_hi {
            let w = LatticePoint::new(x1, x2);
            if complement.contains(&w) {
                continue;
            }
            let free = (0..6).any(|i| complement.iter().all(|c| !in_cone(i, w, *c)));
            if !free {
                return Err(LatticeError::ConeConditionViolation(w));
            }
        }
    }
    Ok(())
}

/// The hexagonal window `H_N`: interior `H_{N-1}`, boundary `H_N \ H_{N-1}`.
///
/// `H_0 = {(0,0)}` is returned as a single boundary point with an empty
/// interior, which is not a valid region; every `N >= 1` is.
pub fn hexagon_window(n: u32) -> Region {
    let n = i64::from(n);
    let mut interior = BTreeSet::new();
    let mut boundary = BTreeSet::new();
    for x1 in -n..=n {
        for x2 in -n..=n {
            let p = LatticePoint::new(x1, x2);
            match p.hex_norm() {
                h if h < n => {
                    interior.insert(p);
                }
                h if h == n => {
                    boundary.insert(p);
                }
                _ => {}
            }
        }
    }
    Region::Finite { interior, boundary }
}

/// Which kind of region the side memberships were computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideFrame {
    /// Sides of a finite region; for an exterior problem with a hole this is
    /// the hole `Ω^c`.
    Finite,
    /// Sides of a cofinite region.
    Cofinite,
}

/// A boundary listed as `y_1, ..., y_m` with its side structure.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEnumeration {
    points: Vec<LatticePoint>,
    sides: Vec<Vec<Direction>>,
    inward: Vec<Vec<LatticePoint>>,
    index: BTreeMap<LatticePoint, usize>,
    frame: SideFrame,
}

impl BoundaryEnumeration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> LatticePoint {
        self.points[i]
    }

    /// Sides `j` with `y_i ∈ (∂R)_j`, ascending.
    pub fn sides(&self, i: usize) -> &[Direction] {
        &self.sides[i]
    }

    /// Inward points `y_i - e_j`, aligned with [`Self::sides`].
    pub fn inward(&self, i: usize) -> &[LatticePoint] {
        &self.inward[i]
    }

    /// Number of sides `n_i` the point belongs to.
    pub fn side_count(&self, i: usize) -> usize {
        self.sides[i].len()
    }

    /// The single side kept when only one is wanted: the smallest `j`.
    pub fn chosen_side(&self, i: usize) -> Direction {
        self.sides[i][0]
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn frame(&self) -> SideFrame {
        self.frame
    }

    /// The points in `(∂R)_j`.
    pub fn side_members(&self, j: Direction) -> impl Iterator<Item = LatticePoint> + '_ {
        self.points
            .iter()
            .zip(&self.sides)
            .filter(move |(_, s)| s.contains(&j))
            .map(|(p, _)| *p)
    }
}

/// Lists the boundary of `region` in lexicographic order with its sides.
///
/// `y ∈ (∂R)_j` iff `y - e_j` is an interior point of `region`.
pub fn enumerate_boundary(region: &Region) -> Result<BoundaryEnumeration, LatticeError> {
    let boundary = region.boundary();
    if boundary.is_empty() {
        return Err(LatticeError::EmptyBoundary);
    }
    let points: Vec<LatticePoint> = boundary.iter().copied().collect();
    let mut sides = Vec::with_capacity(points.len());
    let mut inward = Vec::with_capacity(points.len());
    for y in &points {
        let (s, w): (Vec<_>, Vec<_>) = Direction::ALL
            .iter()
            .map(|d| (*d, *y - d.offset()))
            .filter(|(_, w)| region.is_interior(*w))
            .unzip();
        if s.is_empty() {
            return Err(LatticeError::BoundaryContactViolation(*y));
        }
        sides.push(s);
        inward.push(w);
    }
    let index = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let frame = if region.is_finite() {
        SideFrame::Finite
    } else {
        SideFrame::Cofinite
    };
    Ok(BoundaryEnumeration {
        points,
        sides,
        inward,
        index,
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(list: &[(i64, i64)]) -> BTreeSet<LatticePoint> {
        list.iter().map(|&p| p.into()).collect()
    }

    pub(crate) fn hole_interior() -> BTreeSet<LatticePoint> {
        pts(&[(2, 2), (3, 2), (3, 3)])
    }

    pub(crate) fn hole_boundary() -> BTreeSet<LatticePoint> {
        pts(&[
            (2, 1),
            (3, 1),
            (4, 1),
            (4, 2),
            (4, 3),
            (3, 4),
            (2, 4),
            (2, 3),
            (1, 3),
            (1, 2),
        ])
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(LatticePoint::new(0, 0)), (0.0, 0.0));
        assert_eq!(embed(LatticePoint::new(1, 0)), (1.0, 0.0));
        let (x, y) = embed(LatticePoint::new(0, 1));
        assert_eq!(x, 0.5);
        assert!((y - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn neighbours_are_at_unit_distance() {
        let expected = pts(&[(1, 0), (0, 1), (1, -1), (-1, 0), (0, -1), (-1, 1)]);
        let got: BTreeSet<_> = neighborhood(LatticePoint::ORIGIN).into_iter().collect();
        assert_eq!(got, expected);
        let p = LatticePoint::new(2, 2);
        let (px, py) = embed(p);
        for q in neighborhood(p) {
            let (qx, qy) = embed(q);
            assert!(((qx - px).hypot(qy - py) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn opposite_directions() {
        for d in Direction::ALL {
            assert_eq!(d.opposite().offset(), -d.offset());
            assert_eq!(d.opposite().opposite(), d);
        }
        assert_eq!(
            Direction::new(3).unwrap().offset(),
            Direction::new(1).unwrap().offset() - Direction::new(2).unwrap().offset()
        );
        assert!(Direction::new(0).is_none());
        assert!(Direction::new(7).is_none());
    }

    #[test]
    fn single_point_region() {
        let interior = pts(&[(0, 0)]);
        let boundary: BTreeSet<_> = neighborhood(LatticePoint::ORIGIN).into_iter().collect();
        assert_eq!(validate_region(&interior, &boundary), Ok(()));
        let mut broken = boundary.clone();
        broken.remove(&LatticePoint::new(1, 0));
        assert_eq!(
            validate_region(&interior, &broken),
            Err(LatticeError::InteriorNeighborhoodViolation(LatticePoint::ORIGIN))
        );
    }

    #[test]
    fn region_axiom_errors() {
        let interior = pts(&[(0, 0)]);
        let mut boundary: BTreeSet<_> = neighborhood(LatticePoint::ORIGIN).into_iter().collect();
        boundary.insert(LatticePoint::ORIGIN);
        assert_eq!(
            validate_region(&interior, &boundary),
            Err(LatticeError::DisjointnessViolation(Some(LatticePoint::ORIGIN)))
        );
        boundary.remove(&LatticePoint::ORIGIN);
        boundary.insert(LatticePoint::new(5, 5));
        assert_eq!(
            validate_region(&interior, &boundary),
            Err(LatticeError::BoundaryContactViolation(LatticePoint::new(5, 5)))
        );
        assert_eq!(
            validate_region(&BTreeSet::new(), &boundary),
            Err(LatticeError::DisjointnessViolation(None))
        );
    }

    #[test]
    fn disconnected_finite_region() {
        let a = hexagon_window(1);
        let Region::Finite { interior, boundary } = a else {
            unreachable!()
        };
        let shift = LatticePoint::new(10, 0);
        let interior: BTreeSet<_> = interior.iter().chain(interior.iter().map(|p| *p + shift).collect::<Vec<_>>().iter()).copied().collect();
        let boundary: BTreeSet<_> = boundary.iter().copied().chain(boundary.iter().map(|p| *p + shift)).collect();
        assert!(matches!(
            validate_region(&interior, &boundary),
            Err(LatticeError::Disconnected(_))
        ));
    }

    #[test]
    fn hole_geometry_is_valid() {
        let hole = Region::finite(hole_interior(), hole_boundary()).unwrap();
        assert!(hole.is_finite());
        let exterior = Region::cofinite(hole_boundary(), hole_interior()).unwrap();
        assert!(exterior.is_interior(LatticePoint::new(0, 0)));
        assert!(!exterior.contains(LatticePoint::new(2, 2)));
        assert_eq!(exterior.check_cone_condition(), Ok(()));
    }

    #[test]
    fn cofinite_rejects_missing_boundary_point() {
        let mut boundary = hole_boundary();
        boundary.remove(&LatticePoint::new(4, 2));
        assert_eq!(
            Region::cofinite(boundary, hole_interior()),
            Err(LatticeError::InteriorNeighborhoodViolation(LatticePoint::new(4, 2)))
        );
    }

    #[test]
    fn cofinite_rejects_enclosed_pocket() {
        // a ring of excluded points around the origin; the boundary is the
        // ring's outer and inner neighbours
        let excluded: BTreeSet<_> = match hexagon_window(3) {
            Region::Finite { boundary, .. } => boundary,
            _ => unreachable!(),
        };
        let mut boundary = BTreeSet::new();
        for c in &excluded {
            for w in neighborhood(*c) {
                if !excluded.contains(&w) {
                    boundary.insert(w);
                }
            }
        }
        let err = Region::cofinite(boundary, excluded).unwrap_err();
        assert!(matches!(err, LatticeError::Disconnected(_)), "{err:?}");
    }

    #[test]
    fn cone_zero_matches_definition() {
        // C_0(w): |E2| <= √3 E1 in embedded coordinates
        let w = LatticePoint::new(0, 0);
        for x1 in -6..=6 {
            for x2 in -6..=6 {
                let v = LatticePoint::new(x1, x2);
                let (ex, ey) = embed(v);
                let exact = ey.abs() <= 3f64.sqrt() * ex + 1e-9;
                assert_eq!(in_cone(0, w, v), exact, "{v}");
            }
        }
    }

    #[test]
    fn cones_rotate_by_sixty_degrees() {
        // axis of C_i is the lattice direction at embedded angle πi/3
        let axes = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        for (i, axis) in axes.into_iter().enumerate() {
            let axis = LatticePoint::from(axis);
            assert!(in_cone(i, LatticePoint::ORIGIN, 5 * axis));
            assert!(!in_cone(i, LatticePoint::ORIGIN, -5 * axis));
        }
    }

    #[test]
    fn empty_complement_satisfies_cone_condition() {
        assert_eq!(check_cone_condition(&BTreeSet::new()), Ok(()));
    }

    #[test]
    fn ring_complement_violates_cone_condition() {
        let ring: BTreeSet<_> = match hexagon_window(4) {
            Region::Finite { boundary, .. } => boundary,
            _ => unreachable!(),
        };
        assert!(matches!(
            check_cone_condition(&ring),
            Err(LatticeError::ConeConditionViolation(_))
        ));
    }

    #[test]
    fn hexagon_sizes() {
        let count = |n| match hexagon_window(n) {
            Region::Finite { interior, boundary } => (interior.len(), boundary.len()),
            _ => unreachable!(),
        };
        assert_eq!(count(0), (0, 1));
        assert_eq!(count(1), (1, 6));
        assert_eq!(count(2).0 + count(2).1, 19);
        // brute force: H_2 is the union of F_x over x in H_1
        let mut h2 = BTreeSet::new();
        for x in neighborhood(LatticePoint::ORIGIN).into_iter().chain([LatticePoint::ORIGIN]) {
            h2.insert(x);
            h2.extend(neighborhood(x));
        }
        assert_eq!(h2.len(), 19);
        for n in 1..6 {
            hexagon_window(n).validate().unwrap();
        }
    }

    #[test]
    fn hole_boundary_sides() {
        let hole = Region::finite(hole_interior(), hole_boundary()).unwrap();
        let e = enumerate_boundary(&hole).unwrap();
        assert_eq!(e.len(), 10);
        assert_eq!(e.frame(), SideFrame::Finite);
        let i = e.index_of(LatticePoint::new(2, 1)).unwrap();
        assert_eq!(e.sides(i), &[Direction::new(5).unwrap()]);
        assert_eq!(e.inward(i), &[LatticePoint::new(2, 2)]);
        let i = e.index_of(LatticePoint::new(4, 2)).unwrap();
        assert_eq!(e.sides(i), &[Direction::new(1).unwrap(), Direction::new(3).unwrap()]);
        assert_eq!(e.inward(i), &[LatticePoint::new(3, 2), LatticePoint::new(3, 3)]);
        assert_eq!(e.side_count(i), 2);
        assert_eq!(e.chosen_side(i), Direction::new(1).unwrap());
        // lexicographic order
        assert!(e.points().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hexagon_boundary_has_sides() {
        for n in 1..8 {
            let e = enumerate_boundary(&hexagon_window(n)).unwrap();
            let union: BTreeSet<_> = Direction::ALL.iter().flat_map(|d| e.side_members(*d)).collect();
            assert_eq!(union.len(), e.len());
            assert!((0..e.len()).all(|i| e.side_count(i) >= 1));
        }
    }

    #[test]
    fn empty_boundary_is_an_error() {
        let region = Region::Finite {
            interior: pts(&[(0, 0)]),
            boundary: BTreeSet::new(),
        };
        assert_eq!(enumerate_boundary(&region), Err(LatticeError::EmptyBoundary));
    }
}
