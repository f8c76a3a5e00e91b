//! Layered cell states and the enumerated symbol alphabet.
//!
//! A cell carries up to four layers: a blue segment, a diagonal segment, a
//! horizontal arm and a vertical arm. Only combinations that satisfy the
//! intra-cell invariants (see [`CellState::check`]) are symbols of the alphabet.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A cell of the plane. `y` grows upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord2 {
    pub x: i64,
    pub y: i64,
}

impl Coord2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Coord2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Group coordinates in (Z/3Z)^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct Mod3Pair {
    x: u8,
    y: u8,
}

impl Mod3Pair {
    /// The center of a 3x3 group.
    pub const CENTER: Mod3Pair = Mod3Pair { x: 1, y: 1 };

    pub fn new(x: u8, y: u8) -> Option<Self> {
        (x < 3 && y < 3).then_some(Self { x, y })
    }

    /// Coordinates of the square at lattice index `(i, j)`.
    pub fn from_lattice(i: i64, j: i64) -> Self {
        Self {
            x: i.rem_euclid(3) as u8,
            y: j.rem_euclid(3) as u8,
        }
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn y(self) -> u8 {
        self.y
    }

    pub fn shifted(self, dx: i64, dy: i64) -> Self {
        Self::from_lattice(self.x as i64 + dx, self.y as i64 + dy)
    }

    /// Coordinates of the neighbor one step along `axis` in the increasing direction.
    pub fn step(self, axis: Axis) -> Self {
        match axis {
            Axis::Horizontal => self.shifted(1, 0),
            Axis::Vertical => self.shifted(0, 1),
        }
    }

    pub fn transposed(self) -> Self {
        Self { x: self.y, y: self.x }
    }

    /// All nine pairs in row-major order `(0,0), (1,0), ...`.
    pub fn all() -> impl Iterator<Item = Mod3Pair> {
        (0..3u8).flat_map(|y| (0..3u8).map(move |x| Mod3Pair { x, y }))
    }
}

impl TryFrom<[u8; 2]> for Mod3Pair {
    type Error = String;

    fn try_from(v: [u8; 2]) -> Result<Self, Self::Error> {
        Mod3Pair::new(v[0], v[1]).ok_or_else(|| format!("coordinates {v:?} out of range 0..3"))
    }
}

impl From<Mod3Pair> for [u8; 2] {
    fn from(p: Mod3Pair) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Mod3Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::North, Dir::East, Dir::South, Dir::West];

    pub fn opposite(self) -> Dir {
        match self {
            Dir::North => Dir::South,
            Dir::East => Dir::West,
            Dir::South => Dir::North,
            Dir::West => Dir::East,
        }
    }

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::North => (0, 1),
            Dir::East => (1, 0),
            Dir::South => (0, -1),
            Dir::West => (-1, 0),
        }
    }

    /// Axis of the edge crossed when leaving a cell in this direction.
    pub fn axis(self) -> Axis {
        match self {
            Dir::East | Dir::West => Axis::Horizontal,
            Dir::North | Dir::South => Axis::Vertical,
        }
    }

    /// Mirror image under the transposition `(x, y) -> (y, x)`.
    pub fn transposed(self) -> Dir {
        match self {
            Dir::North => Dir::East,
            Dir::East => Dir::North,
            Dir::South => Dir::West,
            Dir::West => Dir::South,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Dir::North => 1,
            Dir::East => 2,
            Dir::South => 4,
            Dir::West => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlueShape {
    Horizontal,
    Vertical,
    CornerNe,
    CornerNw,
    CornerSe,
    CornerSw,
}

impl BlueShape {
    pub const CORNERS: [BlueShape; 4] = [
        BlueShape::CornerNe,
        BlueShape::CornerNw,
        BlueShape::CornerSe,
        BlueShape::CornerSw,
    ];

    pub fn is_corner(self) -> bool {
        !matches!(self, BlueShape::Horizontal | BlueShape::Vertical)
    }

    /// The two directions along which the blue line leaves the cell.
    pub fn exits(self) -> [Dir; 2] {
        match self {
            BlueShape::Horizontal => [Dir::East, Dir::West],
            BlueShape::Vertical => [Dir::North, Dir::South],
            BlueShape::CornerNe => [Dir::West, Dir::South],
            BlueShape::CornerNw => [Dir::East, Dir::South],
            BlueShape::CornerSe => [Dir::West, Dir::North],
            BlueShape::CornerSw => [Dir::East, Dir::North],
        }
    }

    /// Outward directions of the two arms emitted by a corner.
    pub fn arm_directions(self) -> Option<[Dir; 2]> {
        match self {
            BlueShape::CornerNe => Some([Dir::North, Dir::East]),
            BlueShape::CornerNw => Some([Dir::North, Dir::West]),
            BlueShape::CornerSe => Some([Dir::East, Dir::South]),
            BlueShape::CornerSw => Some([Dir::South, Dir::West]),
            _ => None,
        }
    }

    /// Whether the perimeter detour signal may ride on this shape. The signal runs
    /// from the north-west corner along the top side, through the north-east
    /// corner, down the right side to the south-east corner.
    pub fn may_detour(self, inner: Option<Dir>) -> bool {
        match self {
            BlueShape::Horizontal => inner == Some(Dir::South),
            BlueShape::Vertical => inner == Some(Dir::West),
            BlueShape::CornerNe | BlueShape::CornerNw | BlueShape::CornerSe => true,
            BlueShape::CornerSw => false,
        }
    }

    pub fn transposed(self) -> BlueShape {
        match self {
            BlueShape::Horizontal => BlueShape::Vertical,
            BlueShape::Vertical => BlueShape::Horizontal,
            BlueShape::CornerNe => BlueShape::CornerNe,
            BlueShape::CornerNw => BlueShape::CornerSe,
            BlueShape::CornerSe => BlueShape::CornerNw,
            BlueShape::CornerSw => BlueShape::CornerSw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlueSegment {
    pub shape: BlueShape,
    /// Normal toward the inside, for straight shapes only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Dir>,
    pub coords: Mod3Pair,
    /// Set when the diagonal of an enclosing square passes this square by its
    /// perimeter (absorbed at the north-west corner, re-emitted at the south-east).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub detour: bool,
    /// Axis of the arm crossing this segment in this cell, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossed_by_arm: Option<Axis>,
}

impl BlueSegment {
    pub fn straight(shape: BlueShape, inner: Dir, coords: Mod3Pair, detour: bool) -> Self {
        Self {
            shape,
            inner: Some(inner),
            coords,
            detour,
            crossed_by_arm: None,
        }
    }

    pub fn corner(shape: BlueShape, coords: Mod3Pair, detour: bool) -> Self {
        Self {
            shape,
            inner: None,
            coords,
            detour,
            crossed_by_arm: None,
        }
    }

    /// Inner side as seen on the edge leaving the cell toward `exit`.
    pub fn inner_toward(&self, exit: Dir) -> Option<Dir> {
        match self.shape {
            BlueShape::Horizontal | BlueShape::Vertical => self.inner,
            BlueShape::CornerNe => Some(if exit == Dir::West { Dir::South } else { Dir::West }),
            BlueShape::CornerNw => Some(if exit == Dir::East { Dir::South } else { Dir::East }),
            BlueShape::CornerSe => Some(if exit == Dir::West { Dir::North } else { Dir::West }),
            BlueShape::CornerSw => Some(if exit == Dir::East { Dir::North } else { Dir::East }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalSegment {
    Through,
    /// Start of a square's diagonal at its upper-left (north-west) corner.
    AttachUl,
    /// End of a square's diagonal at its lower-right (south-east) corner.
    AttachLr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmSide {
    Top,
    Bottom,
    Left,
    Right,
}

impl ArmSide {
    pub fn for_axis(axis: Axis) -> [ArmSide; 2] {
        match axis {
            Axis::Horizontal => [ArmSide::Top, ArmSide::Bottom],
            Axis::Vertical => [ArmSide::Left, ArmSide::Right],
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            ArmSide::Top | ArmSide::Bottom => Axis::Horizontal,
            ArmSide::Left | ArmSide::Right => Axis::Vertical,
        }
    }

    pub fn transposed(self) -> ArmSide {
        match self {
            ArmSide::Top => ArmSide::Right,
            ArmSide::Right => ArmSide::Top,
            ArmSide::Bottom => ArmSide::Left,
            ArmSide::Left => ArmSide::Bottom,
        }
    }
}

/// Orientation mark of an arm cell.
///
/// `FromLow` cells lie between the low extremity (left or bottom) and the
/// crossing point; `FromHigh` cells lie past it. The crossing cell itself is
/// `FromLow`, and an arm without crossing is `FromLow` throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmMark {
    FromLow,
    FromHigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArmSegment {
    pub side: ArmSide,
    pub mark: ArmMark,
    /// Coordinates of the square at the low extremity.
    pub label: Mod3Pair,
}

impl ArmSegment {
    pub fn new(side: ArmSide, mark: ArmMark, label: Mod3Pair) -> Self {
        Self { side, mark, label }
    }

    pub fn axis(&self) -> Axis {
        self.side.axis()
    }

    /// Arms incident to a `(1,1)` square must be crossed by exactly one blue line.
    pub fn must_cross(&self) -> bool {
        must_cross(self.label, self.axis())
    }
}

/// True when an arm of the given label on `axis` touches a `(1,1)` square.
pub fn must_cross(label: Mod3Pair, axis: Axis) -> bool {
    label == Mod3Pair::CENTER || label.step(axis) == Mod3Pair::CENTER
}

/// Small set of directions, used for arm attachments on corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DirSet(u8);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);

    pub fn from_dirs(dirs: &[Dir]) -> Self {
        DirSet(dirs.iter().fold(0, |acc, d| acc | d.bit()))
    }

    pub fn contains(self, d: Dir) -> bool {
        self.0 & d.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Dir> {
        Dir::ALL.into_iter().filter(move |d| self.contains(*d))
    }
}

impl Serialize for DirSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for DirSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dirs = Vec::<Dir>::deserialize(d)?;
        Ok(DirSet::from_dirs(&dirs))
    }
}

/// One symbol of the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CellState {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<BlueSegment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<DiagonalSegment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_arm: Option<ArmSegment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_arm: Option<ArmSegment>,
    #[serde(default, skip_serializing_if = "DirSet::is_empty")]
    pub arm_endpoints: DirSet,
}

impl CellState {
    pub const BLANK: CellState = CellState {
        blue: None,
        diagonal: None,
        h_arm: None,
        v_arm: None,
        arm_endpoints: DirSet::EMPTY,
    };

    pub fn is_blank(&self) -> bool {
        *self == Self::BLANK
    }

    /// A blue corner with its mandatory arm endpoints and diagonal attachment.
    pub fn corner(shape: BlueShape, coords: Mod3Pair, detour: bool) -> Self {
        debug_assert!(shape.is_corner());
        let diagonal = match shape {
            BlueShape::CornerNw => Some(DiagonalSegment::AttachUl),
            BlueShape::CornerSe => Some(DiagonalSegment::AttachLr),
            _ => None,
        };
        CellState {
            blue: Some(BlueSegment::corner(shape, coords, detour)),
            diagonal,
            h_arm: None,
            v_arm: None,
            arm_endpoints: shape.arm_directions().map_or(DirSet::EMPTY, |d| DirSet::from_dirs(&d)),
        }
    }

    /// A straight blue segment, optionally crossed by a perpendicular arm.
    pub fn straight(blue: BlueSegment, crossing: Option<ArmSegment>) -> Self {
        let mut blue = blue;
        let mut cell = CellState::BLANK;
        if let Some(arm) = crossing {
            blue.crossed_by_arm = Some(arm.axis());
            match arm.axis() {
                Axis::Horizontal => cell.h_arm = Some(arm),
                Axis::Vertical => cell.v_arm = Some(arm),
            }
        }
        cell.blue = Some(blue);
        cell
    }

    pub fn corner_shape(&self) -> Option<BlueShape> {
        self.blue.map(|b| b.shape).filter(|s| s.is_corner())
    }

    pub fn is_corner(&self) -> bool {
        self.corner_shape().is_some()
    }

    pub fn arm(&self, axis: Axis) -> Option<ArmSegment> {
        match axis {
            Axis::Horizontal => self.h_arm,
            Axis::Vertical => self.v_arm,
        }
    }

    /// Whether this cell carries a blue line crossed by an arm.
    pub fn is_crossing(&self) -> bool {
        self.blue.is_some_and(|b| !b.shape.is_corner()) && (self.h_arm.is_some() || self.v_arm.is_some())
    }

    /// Checks every intra-cell invariant; the error names the first one broken.
    pub fn check(&self) -> Result<(), &'static str> {
        if let Some(arm) = self.h_arm {
            if arm.axis() != Axis::Horizontal {
                return Err("horizontal arm layer carries a vertical side type");
            }
        }
        if let Some(arm) = self.v_arm {
            if arm.axis() != Axis::Vertical {
                return Err("vertical arm layer carries a horizontal side type");
            }
        }
        match self.blue {
            None => {
                if !self.arm_endpoints.is_empty() {
                    return Err("arm endpoints outside a blue corner");
                }
                match self.diagonal {
                    None | Some(DiagonalSegment::Through) => Ok(()),
                    Some(_) => Err("diagonal attachment without a blue corner"),
                }
            }
            Some(blue) if blue.shape.is_corner() => {
                if blue.inner.is_some() {
                    return Err("corner carries an explicit inner side");
                }
                if blue.crossed_by_arm.is_some() {
                    return Err("corner marked as crossed");
                }
                if self.h_arm.is_some() || self.v_arm.is_some() {
                    return Err("arm layer through a corner");
                }
                if blue.detour && !blue.shape.may_detour(None) {
                    return Err("detour signal on a south-west corner");
                }
                let expected = blue
                    .shape
                    .arm_directions()
                    .map_or(DirSet::EMPTY, |d| DirSet::from_dirs(&d));
                if self.arm_endpoints != expected {
                    return Err("corner arm endpoints do not match its shape");
                }
                let diagonal = match blue.shape {
                    BlueShape::CornerNw => Some(DiagonalSegment::AttachUl),
                    BlueShape::CornerSe => Some(DiagonalSegment::AttachLr),
                    _ => None,
                };
                if self.diagonal != diagonal {
                    return Err("corner diagonal attachment does not match its shape");
                }
                Ok(())
            }
            Some(blue) => {
                if !self.arm_endpoints.is_empty() {
                    return Err("arm endpoints on a straight segment");
                }
                if self.diagonal.is_some() {
                    return Err("diagonal shares a cell with a blue line");
                }
                let (along, across) = match blue.shape {
                    BlueShape::Horizontal => (self.h_arm, self.v_arm),
                    _ => (self.v_arm, self.h_arm),
                };
                let inner_ok = matches!(
                    (blue.shape, blue.inner),
                    (BlueShape::Horizontal, Some(Dir::North | Dir::South))
                        | (BlueShape::Vertical, Some(Dir::East | Dir::West))
                );
                if !inner_ok {
                    return Err("straight segment inner side is not perpendicular to it");
                }
                if blue.detour && !blue.shape.may_detour(blue.inner) {
                    return Err("detour signal off the top or right side");
                }
                if along.is_some() {
                    return Err("arm overlaps a parallel blue line");
                }
                match (across, blue.crossed_by_arm) {
                    (None, None) => Ok(()),
                    (Some(arm), Some(axis)) if arm.axis() == axis => {
                        if arm.mark != ArmMark::FromLow {
                            return Err("crossing cell arm is not marked from-low");
                        }
                        if arm.must_cross() && blue.inner != Some(required_inner(arm)) {
                            return Err("crossing line's inner side does not face the (1,1) square");
                        }
                        Ok(())
                    }
                    _ => Err("crossed-by-arm flag disagrees with the arm layers"),
                }
            }
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.check().is_ok()
    }

    /// Image under the transposition `(x, y) -> (y, x)`.
    pub fn transposed(&self) -> CellState {
        let blue = self.blue.map(|b| BlueSegment {
            shape: b.shape.transposed(),
            inner: b.inner.map(Dir::transposed),
            coords: b.coords.transposed(),
            detour: b.detour,
            crossed_by_arm: b.crossed_by_arm.map(Axis::other),
        });
        let diagonal = self.diagonal.map(|d| match d {
            DiagonalSegment::Through => DiagonalSegment::Through,
            DiagonalSegment::AttachUl => DiagonalSegment::AttachLr,
            DiagonalSegment::AttachLr => DiagonalSegment::AttachUl,
        });
        let tr = |a: ArmSegment| ArmSegment::new(a.side.transposed(), a.mark, a.label.transposed());
        CellState {
            blue,
            diagonal,
            h_arm: self.v_arm.map(tr),
            v_arm: self.h_arm.map(tr),
            arm_endpoints: DirSet::from_dirs(&self.arm_endpoints.iter().map(Dir::transposed).collect::<Vec<_>>()),
        }
    }
}

/// Inner side that a line crossing a must-cross arm has to present.
pub fn required_inner(arm: ArmSegment) -> Dir {
    let low_is_center = arm.label == Mod3Pair::CENTER;
    match (arm.axis(), low_is_center) {
        (Axis::Horizontal, true) => Dir::West,
        (Axis::Horizontal, false) => Dir::East,
        (Axis::Vertical, true) => Dir::South,
        (Axis::Vertical, false) => Dir::North,
    }
}

/// Dense index of a symbol in the canonical enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub const BLANK: SymbolId = SymbolId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

fn arm_options(axis: Axis) -> Vec<ArmSegment> {
    let mut out = Vec::with_capacity(36);
    for side in ArmSide::for_axis(axis) {
        for label in Mod3Pair::all() {
            for mark in [ArmMark::FromLow, ArmMark::FromHigh] {
                out.push(ArmSegment::new(side, mark, label));
            }
        }
    }
    out
}

fn straight_options(shape: BlueShape) -> Vec<BlueSegment> {
    let inners = match shape {
        BlueShape::Horizontal => [Dir::North, Dir::South],
        _ => [Dir::East, Dir::West],
    };
    let mut out = Vec::new();
    for inner in inners {
        for coords in Mod3Pair::all() {
            out.push(BlueSegment::straight(shape, inner, coords, false));
            if shape.may_detour(Some(inner)) {
                out.push(BlueSegment::straight(shape, inner, coords, true));
            }
        }
    }
    out
}

/// Every well-formed cell state, in canonical order. The blank state comes first.
///
/// Order: cells without blue (diagonal, then horizontal arm, then vertical arm
/// varying fastest), straight horizontal segments, straight vertical segments,
/// then corners NE, NW, SE, SW.
pub fn enumerate_alphabet() -> Vec<CellState> {
    let h_arms = arm_options(Axis::Horizontal);
    let v_arms = arm_options(Axis::Vertical);
    let mut out = Vec::new();

    for diagonal in [None, Some(DiagonalSegment::Through)] {
        for h_arm in std::iter::once(None).chain(h_arms.iter().copied().map(Some)) {
            for v_arm in std::iter::once(None).chain(v_arms.iter().copied().map(Some)) {
                out.push(CellState {
                    diagonal,
                    h_arm,
                    v_arm,
                    ..CellState::BLANK
                });
            }
        }
    }

    for (shape, crossing_arms) in [(BlueShape::Horizontal, &v_arms), (BlueShape::Vertical, &h_arms)] {
        for blue in straight_options(shape) {
            out.push(CellState::straight(blue, None));
            for arm in crossing_arms.iter().filter(|a| a.mark == ArmMark::FromLow) {
                if arm.must_cross() && blue.inner != Some(required_inner(*arm)) {
                    continue;
                }
                out.push(CellState::straight(blue, Some(*arm)));
            }
        }
    }

    for shape in BlueShape::CORNERS {
        for coords in Mod3Pair::all() {
            out.push(CellState::corner(shape, coords, false));
            if shape.may_detour(None) {
                out.push(CellState::corner(shape, coords, true));
            }
        }
    }
    out
}

/// A rectangular grid of values anchored at `origin`, stored row-major from the
/// bottom row up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow<T>", bound(deserialize = "T: Deserialize<'de>"))]
pub struct Window<T> {
    origin: Coord2,
    width: usize,
    height: usize,
    cells: Vec<T>,
}

#[derive(Deserialize)]
struct RawWindow<T> {
    origin: Coord2,
    width: usize,
    height: usize,
    cells: Vec<T>,
}

impl<T> TryFrom<RawWindow<T>> for Window<T> {
    type Error = String;

    fn try_from(r: RawWindow<T>) -> Result<Self, String> {
        let n = r.cells.len();
        Window::from_cells(r.origin, r.width, r.height, r.cells).ok_or_else(|| {
            format!(
                "{}x{} window needs {} cells, got {n}",
                r.width,
                r.height,
                r.width * r.height
            )
        })
    }
}

/// A window of cell states.
pub type PatternWindow = Window<CellState>;

impl<T: Clone> Window<T> {
    /// Mirror image in the main diagonal: cell `(x, y)` moves to `(y, x)`.
    pub fn transposed(&self, f: impl Fn(&T) -> T) -> Window<T> {
        let origin = Coord2::new(self.origin.y, self.origin.x);
        Window::from_fn(origin, self.height, self.width, |c| {
            f(self.get(Coord2::new(c.y, c.x)).expect("inside"))
        })
    }

    pub fn filled(origin: Coord2, width: usize, height: usize, value: T) -> Self {
        Self {
            origin,
            width,
            height,
            cells: vec![value; width * height],
        }
    }
}

impl<T> Window<T> {
    /// Builds a window from row-major cells (bottom row first).
    pub fn from_cells(origin: Coord2, width: usize, height: usize, cells: Vec<T>) -> Option<Self> {
        (cells.len() == width * height).then_some(Self {
            origin,
            width,
            height,
            cells,
        })
    }

    pub fn from_fn(origin: Coord2, width: usize, height: usize, mut f: impl FnMut(Coord2) -> T) -> Self {
        let mut cells = Vec::with_capacity(width * height);
        for dy in 0..height {
            for dx in 0..width {
                cells.push(f(origin.offset(dx as i64, dy as i64)));
            }
        }
        Self {
            origin,
            width,
            height,
            cells,
        }
    }

    pub fn origin(&self) -> Coord2 {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<T> {
        self.cells
    }

    pub fn contains(&self, c: Coord2) -> bool {
        self.local(c).is_some()
    }

    /// Local (column, row) of an absolute cell.
    pub fn local(&self, c: Coord2) -> Option<(usize, usize)> {
        let dx = c.x - self.origin.x;
        let dy = c.y - self.origin.y;
        (dx >= 0 && dy >= 0 && (dx as usize) < self.width && (dy as usize) < self.height)
            .then_some((dx as usize, dy as usize))
    }

    pub fn at_local(&self, col: usize, row: usize) -> &T {
        &self.cells[row * self.width + col]
    }

    pub fn at_local_mut(&mut self, col: usize, row: usize) -> &mut T {
        &mut self.cells[row * self.width + col]
    }

    pub fn get(&self, c: Coord2) -> Option<&T> {
        self.local(c).map(|(col, row)| self.at_local(col, row))
    }

    pub fn get_mut(&mut self, c: Coord2) -> Option<&mut T> {
        self.local(c).map(|(col, row)| &mut self.cells[row * self.width + col])
    }

    /// Absolute coordinate of a local position.
    pub fn absolute(&self, col: usize, row: usize) -> Coord2 {
        self.origin.offset(col as i64, row as i64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord2, &T)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.absolute(i % self.width, i / self.width), v))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Window<U> {
        Window {
            origin: self.origin,
            width: self.width,
            height: self.height,
            cells: self.cells.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Window<T> {
    /// Restriction to a sub-rectangle; `None` when it does not fit.
    pub fn sub_window(&self, origin: Coord2, width: usize, height: usize) -> Option<Window<T>> {
        let (c0, r0) = self.local(origin)?;
        if c0 + width > self.width || r0 + height > self.height {
            return None;
        }
        let mut cells = Vec::with_capacity(width * height);
        for r in r0..r0 + height {
            cells.extend_from_slice(&self.cells[r * self.width + c0..r * self.width + c0 + width]);
        }
        Some(Window {
            origin,
            width,
            height,
            cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn blank_is_first_and_unique() {
        let alphabet = enumerate_alphabet();
        assert!(alphabet[0].is_blank());
        assert_eq!(alphabet.iter().filter(|c| c.is_blank()).count(), 1);
    }

    #[test]
    fn no_duplicates_and_all_well_formed() {
        let alphabet = enumerate_alphabet();
        let set: HashSet<_> = alphabet.iter().collect();
        assert_eq!(set.len(), alphabet.len());
        for c in &alphabet {
            assert!(c.is_well_formed(), "{c:?}: {:?}", c.check());
        }
    }

    #[test]
    fn corner_with_through_diagonal_is_not_a_symbol() {
        let mut c = CellState::corner(BlueShape::CornerNw, Mod3Pair::CENTER, false);
        c.diagonal = Some(DiagonalSegment::Through);
        assert!(!c.is_well_formed());
        assert!(!enumerate_alphabet().contains(&c));
    }

    /// Count derived layer by layer, independently of the enumeration loops.
    #[test]
    fn alphabet_size_matches_combinatorial_count() {
        let arms_per_axis = 2 * 9 * 2; // side x label x mark
        let unblue = 2 * (1 + arms_per_axis) * (1 + arms_per_axis);
        // 9 coords for the inner side without detour, 18 for the side that may carry it.
        let straight_plain = 9 + 18;
        // Crossing arms are from-low. Seven labels leave the inner side free; of the two
        // must-cross labels one requires the detour-capable side (18) and one the other (9).
        let crossings = 2 * (7 * straight_plain + 18 + 9);
        let per_straight_shape = straight_plain + crossings;
        let corners = 18 + 18 + 18 + 9;
        let expected = unblue + 2 * per_straight_shape + corners;
        assert_eq!(expected, 3719);
        assert_eq!(enumerate_alphabet().len(), expected);
    }

    #[test]
    fn enumeration_is_closed_under_the_invariants() {
        // Full layer product on a reduced coordinate domain {(0,0), (1,1), (0,1)}.
        let coords = [
            Mod3Pair::new(0, 0).unwrap(),
            Mod3Pair::CENTER,
            Mod3Pair::new(0, 1).unwrap(),
        ];
        let alphabet: HashSet<CellState> = enumerate_alphabet().into_iter().collect();
        let shapes = [
            BlueShape::Horizontal,
            BlueShape::Vertical,
            BlueShape::CornerNe,
            BlueShape::CornerNw,
            BlueShape::CornerSe,
            BlueShape::CornerSw,
        ];
        let mut blues = vec![None];
        for shape in shapes {
            for inner in [
                None,
                Some(Dir::North),
                Some(Dir::East),
                Some(Dir::South),
                Some(Dir::West),
            ] {
                for &c in &coords {
                    for detour in [false, true] {
                        for crossed in [None, Some(Axis::Horizontal), Some(Axis::Vertical)] {
                            blues.push(Some(BlueSegment {
                                shape,
                                inner,
                                coords: c,
                                detour,
                                crossed_by_arm: crossed,
                            }));
                        }
                    }
                }
            }
        }
        let mut arms: Vec<Option<ArmSegment>> = vec![None];
        for side in [ArmSide::Top, ArmSide::Bottom, ArmSide::Left, ArmSide::Right] {
            for &label in &coords {
                for mark in [ArmMark::FromLow, ArmMark::FromHigh] {
                    arms.push(Some(ArmSegment::new(side, mark, label)));
                }
            }
        }
        let diagonals = [
            None,
            Some(DiagonalSegment::Through),
            Some(DiagonalSegment::AttachUl),
            Some(DiagonalSegment::AttachLr),
        ];
        let endpoint_sets: Vec<DirSet> = (0u8..16)
            .map(|bits| {
                DirSet::from_dirs(
                    &Dir::ALL
                        .iter()
                        .copied()
                        .filter(|d| bits & d.bit() != 0)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let mut checked = 0usize;
        for blue in &blues {
            for diagonal in diagonals {
                for h_arm in &arms {
                    for v_arm in &arms {
                        for &arm_endpoints in &endpoint_sets {
                            let cell = CellState {
                                blue: *blue,
                                diagonal,
                                h_arm: *h_arm,
                                v_arm: *v_arm,
                                arm_endpoints,
                            };
                            assert_eq!(cell.is_well_formed(), alphabet.contains(&cell), "{cell:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1_000_000);
    }

    #[test]
    fn transposition_is_an_involution_on_the_alphabet() {
        let alphabet: HashSet<CellState> = enumerate_alphabet().into_iter().collect();
        for c in &alphabet {
            let t = c.transposed();
            assert!(alphabet.contains(&t), "{c:?} -> {t:?}");
            assert_eq!(t.transposed(), *c);
        }
    }

    #[test]
    fn sub_window_restricts() {
        let w = Window::from_fn(Coord2::new(-2, 3), 5, 4, |c| (c.x, c.y));
        let s = w.sub_window(Coord2::new(-1, 4), 2, 3).unwrap();
        assert_eq!(*s.get(Coord2::new(0, 6)).unwrap(), (0, 6));
        assert!(w.sub_window(Coord2::new(2, 3), 2, 1).is_none());
    }
}
