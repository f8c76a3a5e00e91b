//! The canonical hierarchical configuration, painted cell by cell.
//!
//! Level-`k` squares have side `3^k` and sit at `anchor + 3^(k+1) * (i, j)` with
//! `anchor = (3^k - 1, 3^k - 1)`. Column `x` belongs to level `v3(x + 1)` (the
//! 3-adic valuation), and so does row `y`: each line of the plane carries the
//! sides and arms of exactly one level, except the lines `x = -1` and `y = -1`
//! which no square reaches. Every cell is therefore a closed-form function of
//! its coordinates.

use crate::exec::Exec;
use crate::model::{
    ArmMark, ArmSegment, ArmSide, Axis, BlueSegment, BlueShape, CellState, Coord2, Dir, Mod3Pair, PatternWindow, Window,
};

/// Highest level painted. Coordinates must stay within `+-MAX_COORD`.
pub const MAX_LEVEL: u32 = 36;
pub const MAX_COORD: i64 = 3i64.pow(34);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeLevel {
    pub k: u32,
    /// Distance between the corner cells of one square.
    pub side: i64,
    /// South-west corner of the square at lattice index `(0, 0)`.
    pub anchor: Coord2,
    pub period: i64,
}

impl LatticeLevel {
    /// South-west corner of the square at lattice index `(i, j)`.
    pub fn square_at(&self, i: i64, j: i64) -> Coord2 {
        self.anchor.offset(self.period * i, self.period * j)
    }

    /// Group coordinates of the square at lattice index `(i, j)`.
    pub fn coords(&self, i: i64, j: i64) -> Mod3Pair {
        Mod3Pair::from_lattice(i, j)
    }

    /// Gap between facing sides of neighboring squares.
    pub fn gap(&self) -> i64 {
        self.period - self.side
    }

    fn locate(&self, t: i64) -> (i64, LinePos) {
        let a = self.anchor.x;
        let r = (t - a).rem_euclid(self.period);
        let i = (t - a).div_euclid(self.period);
        let pos = if r == 0 {
            LinePos::LowSide
        } else if r == self.side {
            LinePos::HighSide
        } else if r < self.side {
            LinePos::Inside
        } else {
            LinePos::Gap
        };
        (i, pos)
    }
}

pub fn square_lattice(k: u32) -> LatticeLevel {
    let side = 3i64.pow(k);
    LatticeLevel {
        k,
        side,
        anchor: Coord2::new(side - 1, side - 1),
        period: 3 * side,
    }
}

/// Largest level whose squares (side + 1 cells across) fit in a window of this size.
pub fn max_level_for(width: usize, height: usize) -> u32 {
    let span = width.min(height) as i64;
    let mut k = 0;
    while 3i64.pow(k + 1) < span {
        k += 1;
    }
    k
}

/// Position of a coordinate relative to one level's lattice, along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LinePos {
    LowSide,
    HighSide,
    Inside,
    Gap,
}

/// Level whose sides and arms run along line `t`, or `None` for `t = -1`.
fn line_level(t: i64) -> Option<u32> {
    let mut n = t + 1;
    if n == 0 {
        return None;
    }
    let mut k = 0;
    while n % 3 == 0 {
        n /= 3;
        k += 1;
    }
    Some(k)
}

/// Whether the square of level `k` at lattice `(i, j)` lies on the diagonal of an
/// enclosing square (its diagonal detours around this one's perimeter).
fn on_enclosing_diagonal(k: u32, i: i64, j: i64) -> bool {
    let lat = square_lattice(k);
    let sw = lat.square_at(i, j);
    let (x0, top) = (sw.x, sw.y + lat.side);
    let reach = x0.abs().max(sw.y.abs()) + lat.side + 1;
    let mut level = k + 1;
    while level <= MAX_LEVEL {
        let big = square_lattice(level);
        if big.side - 1 > reach {
            break;
        }
        let (bi, _) = big.locate(x0);
        let (bj, _) = big.locate(sw.y);
        let bsw = big.square_at(bi, bj);
        let inside =
            bsw.x < x0 && x0 + lat.side < bsw.x + big.side && bsw.y < sw.y && sw.y + lat.side < bsw.y + big.side;
        if inside {
            return x0 - bsw.x == bsw.y + big.side - top;
        }
        level += 1;
    }
    false
}

/// Whether a straight blue side runs through `(x, y)` along the column's direction.
fn vertical_side_at(x: i64, y: i64) -> bool {
    match line_level(x) {
        Some(k) if Some(k) != line_level(y) => {
            let (_, pos) = square_lattice(k).locate(y);
            pos == LinePos::Inside
        }
        _ => false,
    }
}

fn horizontal_side_at(x: i64, y: i64) -> bool {
    match line_level(y) {
        Some(k) if Some(k) != line_level(x) => {
            let (_, pos) = square_lattice(k).locate(x);
            pos == LinePos::Inside
        }
        _ => false,
    }
}

enum Layer {
    Blue(BlueSegment),
    Arm(ArmSegment),
}

/// Structure that the line of `axis` through the cell contributes, given that
/// the perpendicular coordinate is not on the same level.
fn line_layer(axis: Axis, c: Coord2) -> Option<Layer> {
    let (along, across) = match axis {
        Axis::Horizontal => (c.x, c.y),
        Axis::Vertical => (c.y, c.x),
    };
    let k = line_level(across)?;
    let lat = square_lattice(k);
    let (across_idx, across_pos) = lat.locate(across);
    let high_side = across_pos == LinePos::HighSide;
    let (idx, pos) = lat.locate(along);
    let coords = |along_idx: i64| match axis {
        Axis::Horizontal => lat.coords(along_idx, across_idx),
        Axis::Vertical => lat.coords(across_idx, along_idx),
    };
    match pos {
        LinePos::Inside => {
            let (shape, inner) = match (axis, high_side) {
                (Axis::Horizontal, true) => (BlueShape::Horizontal, Dir::South),
                (Axis::Horizontal, false) => (BlueShape::Horizontal, Dir::North),
                (Axis::Vertical, true) => (BlueShape::Vertical, Dir::West),
                (Axis::Vertical, false) => (BlueShape::Vertical, Dir::East),
            };
            let detour = high_side && {
                let (i, j) = match axis {
                    Axis::Horizontal => (idx, across_idx),
                    Axis::Vertical => (across_idx, idx),
                };
                on_enclosing_diagonal(k, i, j)
            };
            Some(Layer::Blue(BlueSegment::straight(shape, inner, coords(idx), detour)))
        }
        LinePos::Gap => {
            let side = match (axis, high_side) {
                (Axis::Horizontal, true) => ArmSide::Top,
                (Axis::Horizontal, false) => ArmSide::Bottom,
                (Axis::Vertical, true) => ArmSide::Right,
                (Axis::Vertical, false) => ArmSide::Left,
            };
            // The only line in the gap that can carry a perpendicular blue side.
            let cross_at = lat.period * (idx + 1) - 1;
            let crossed = match axis {
                Axis::Horizontal => vertical_side_at(cross_at, c.y),
                Axis::Vertical => horizontal_side_at(c.x, cross_at),
            };
            let mark = if crossed && along > cross_at {
                ArmMark::FromHigh
            } else {
                ArmMark::FromLow
            };
            Some(Layer::Arm(ArmSegment::new(side, mark, coords(idx))))
        }
        LinePos::LowSide | LinePos::HighSide => None,
    }
}

/// The canonical configuration at one cell.
pub fn cell_at(c: Coord2) -> CellState {
    debug_assert!(c.x.abs() <= MAX_COORD && c.y.abs() <= MAX_COORD);
    let (kx, ky) = (line_level(c.x), line_level(c.y));
    if let (Some(k), true) = (kx, kx == ky) {
        let lat = square_lattice(k);
        let (i, px) = lat.locate(c.x);
        let (j, py) = lat.locate(c.y);
        let right = px == LinePos::HighSide;
        let top = py == LinePos::HighSide;
        let shape = match (right, top) {
            (true, true) => BlueShape::CornerNe,
            (false, true) => BlueShape::CornerNw,
            (true, false) => BlueShape::CornerSe,
            (false, false) => BlueShape::CornerSw,
        };
        let detour = shape != BlueShape::CornerSw && on_enclosing_diagonal(k, i, j);
        return CellState::corner(shape, lat.coords(i, j), detour);
    }

    let mut cell = CellState::BLANK;
    let mut blue = None;
    for axis in [Axis::Horizontal, Axis::Vertical] {
        match line_layer(axis, c) {
            Some(Layer::Blue(b)) => blue = Some(b),
            Some(Layer::Arm(a)) => match axis {
                Axis::Horizontal => cell.h_arm = Some(a),
                Axis::Vertical => cell.v_arm = Some(a),
            },
            None => {}
        }
    }
    if let Some(mut b) = blue {
        let across = match b.shape {
            BlueShape::Horizontal => cell.v_arm,
            _ => cell.h_arm,
        };
        b.crossed_by_arm = across.map(|a| a.axis());
        cell.blue = Some(b);
    }
    cell
}

/// Restriction of the canonical configuration to `[origin, origin + (width, height))`.
pub fn generate_window(origin: Coord2, width: usize, height: usize) -> PatternWindow {
    generate_window_with(origin, width, height, &Exec::sequential())
}

/// As [`generate_window`], painting rows concurrently.
pub fn generate_window_with(origin: Coord2, width: usize, height: usize, exec: &Exec) -> PatternWindow {
    assert!(width >= 1 && height >= 1, "window must be non-empty");
    let rows = exec.map_range(height, |row| {
        (0..width)
            .map(|col| cell_at(origin.offset(col as i64, row as i64)))
            .collect::<Vec<_>>()
    });
    Window::from_cells(origin, width, height, rows.concat()).expect("rows have window width")
}
