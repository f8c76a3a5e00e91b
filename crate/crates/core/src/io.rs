//! JSON window files.
//!
//! ```json
//! { "format": "aperiodic-window/1", "origin": {"x": 0, "y": 0},
//!   "width": 2, "height": 1, "cells": [{}, {"blue": {...}}] }
//! ```
//!
//! Cells are row-major starting from the bottom row; a blank cell is `{}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CellState, Coord2, PatternWindow, Window};
use crate::rules::TileSet;

pub const WINDOW_FORMAT: &str = "aperiodic-window/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFile {
    pub format: String,
    pub origin: Coord2,
    pub width: usize,
    pub height: usize,
    pub cells: Vec<CellState>,
}

impl WindowFile {
    pub fn from_window(w: &PatternWindow) -> Self {
        Self {
            format: WINDOW_FORMAT.to_string(),
            origin: w.origin(),
            width: w.width(),
            height: w.height(),
            cells: w.cells().to_vec(),
        }
    }

    /// Checks the format tag, the shape and that every cell is a symbol of `ts`.
    pub fn into_window(self, ts: &TileSet) -> Result<PatternWindow> {
        if self.format != WINDOW_FORMAT {
            return Err(Error::Format(format!("unsupported window format '{}'", self.format)));
        }
        let (w, h) = (self.width, self.height);
        let n = self.cells.len();
        for (i, c) in self.cells.iter().enumerate() {
            if ts.symbol_id(c).is_err() {
                let at = self.origin.offset((i % w.max(1)) as i64, (i / w.max(1)) as i64);
                return Err(Error::Format(format!("cell {at} is not a symbol of the tile set")));
            }
        }
        Window::from_cells(self.origin, w, h, self.cells)
            .ok_or_else(|| Error::Format(format!("{w}x{h} window needs {} cells, got {n}", w * h)))
    }
}

pub fn window_to_json(w: &PatternWindow) -> String {
    serde_json::to_string(&WindowFile::from_window(w)).expect("window serializes")
}

pub fn window_from_json(s: &str, ts: &TileSet) -> Result<PatternWindow> {
    let file: WindowFile = serde_json::from_str(s)?;
    file.into_window(ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_window;
    use crate::rules::compile_tileset;

    #[test]
    fn round_trip() {
        let ts = compile_tileset();
        let w = generate_window(Coord2::new(-3, 5), 17, 11);
        assert_eq!(window_from_json(&window_to_json(&w), &ts).unwrap(), w);
    }

    #[test]
    fn blank_cells_are_empty_objects() {
        let w = Window::filled(Coord2::new(0, 0), 2, 1, CellState::BLANK);
        assert!(window_to_json(&w).contains(r#""cells":[{},{}]"#));
    }

    #[test]
    fn rejects_bad_input() {
        let ts = compile_tileset();
        let ok = window_to_json(&generate_window(Coord2::new(0, 0), 3, 3));
        assert!(window_from_json(&ok.replace("aperiodic-window/1", "other/9"), &ts).is_err());
        assert!(window_from_json(&ok.replace(r#""width":3"#, r#""width":4"#), &ts).is_err());
        assert!(window_from_json("{not json", &ts).is_err());
        // a corner without its arm endpoints is not a symbol
        let mut w = generate_window(Coord2::new(0, 0), 3, 3);
        w.at_local_mut(0, 0).arm_endpoints = Default::default();
        assert!(window_from_json(&window_to_json(&w), &ts).is_err());
    }
}
