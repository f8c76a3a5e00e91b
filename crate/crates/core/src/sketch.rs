//! Hand-built windows: paint squares and arms onto a blank grid.
//!
//! Useful for counterexamples; nothing here checks the rules.

use crate::model::{
    ArmMark, ArmSegment, ArmSide, BlueSegment, BlueShape, CellState, Coord2, Dir, Mod3Pair, PatternWindow, Window,
};

#[derive(Debug, Clone)]
pub struct Sketch {
    window: PatternWindow,
}

impl Sketch {
    pub fn new(origin: Coord2, width: usize, height: usize) -> Self {
        Self {
            window: Window::filled(origin, width, height, CellState::BLANK),
        }
    }

    fn put(&mut self, c: Coord2, state: CellState) {
        if let Some(cell) = self.window.get_mut(c) {
            *cell = state;
        }
    }

    /// A square with south-west corner `anchor` and corner distance `side`.
    pub fn square(mut self, anchor: Coord2, side: i64, coords: Mod3Pair) -> Self {
        let (x0, y0) = (anchor.x, anchor.y);
        let (x1, y1) = (x0 + side, y0 + side);
        for t in 1..side {
            let h =
                |inner| CellState::straight(BlueSegment::straight(BlueShape::Horizontal, inner, coords, false), None);
            let v = |inner| CellState::straight(BlueSegment::straight(BlueShape::Vertical, inner, coords, false), None);
            self.put(Coord2::new(x0 + t, y0), h(Dir::North));
            self.put(Coord2::new(x0 + t, y1), h(Dir::South));
            self.put(Coord2::new(x0, y0 + t), v(Dir::East));
            self.put(Coord2::new(x1, y0 + t), v(Dir::West));
        }
        self.put(
            Coord2::new(x0, y0),
            CellState::corner(BlueShape::CornerSw, coords, false),
        );
        self.put(
            Coord2::new(x1, y0),
            CellState::corner(BlueShape::CornerSe, coords, false),
        );
        self.put(
            Coord2::new(x0, y1),
            CellState::corner(BlueShape::CornerNw, coords, false),
        );
        self.put(
            Coord2::new(x1, y1),
            CellState::corner(BlueShape::CornerNe, coords, false),
        );
        self
    }

    /// `len` uncrossed arm cells starting next to `from` and heading `dir`.
    pub fn arm(mut self, from: Coord2, dir: Dir, len: usize, side: ArmSide, label: Mod3Pair) -> Self {
        let (dx, dy) = dir.delta();
        for i in 1..=len as i64 {
            let c = from.offset(dx * i, dy * i);
            let mut cell = self.window.get(c).copied().unwrap_or_default();
            let arm = Some(ArmSegment::new(side, ArmMark::FromLow, label));
            match side.axis() {
                crate::model::Axis::Horizontal => cell.h_arm = arm,
                crate::model::Axis::Vertical => cell.v_arm = arm,
            }
            self.put(c, cell);
        }
        self
    }

    pub fn build(self) -> PatternWindow {
        self.window
    }
}
