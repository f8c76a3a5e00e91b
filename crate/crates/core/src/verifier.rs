//! Window verification against the compiled rules.
//!
//! Every 1x2, 2x1 and 2x2 sub-window is identified by its south-west cell
//! (its *anchor*). Under [`Wrap::Open`] only sub-windows fully inside the window
//! are checked; under [`Wrap::Torus`] both directions wrap around.

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::model::{Axis, Coord2, Dir, PatternWindow};
use crate::rules::{diagonal_links, edge_violations, face, Face, RuleId, TileSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Wrap {
    #[default]
    Open,
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub rule: RuleId,
    pub location: Coord2,
    pub detail: String,
}

impl Violation {
    fn sort_key(&self) -> (i64, i64, RuleId, &str) {
        (self.location.y, self.location.x, self.rule, &self.detail)
    }
}

impl PartialOrd for Violation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Violation {
    /// Row-major by location (bottom row first), then rule, then detail.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Per-cell data the checks need, computed once.
#[derive(Clone, Copy)]
struct CellInfo {
    known: bool,
    /// North, east, south, west.
    faces: [Face; 4],
    links: (bool, bool),
    corner: bool,
}

fn info(window: &PatternWindow, tileset: &TileSet, col: usize, row: usize) -> CellInfo {
    let s = window.at_local(col, row);
    CellInfo {
        known: tileset.symbol_id(s).is_ok(),
        faces: [
            face(s, Dir::North),
            face(s, Dir::East),
            face(s, Dir::South),
            face(s, Dir::West),
        ],
        links: diagonal_links(s),
        corner: s.is_corner(),
    }
}

struct Checker<'a> {
    window: &'a PatternWindow,
    tileset: &'a TileSet,
    /// Precomputed cell data; computed on demand when absent.
    cells: Option<Vec<CellInfo>>,
    wrap: Wrap,
    angle_rule: bool,
}

impl<'a> Checker<'a> {
    fn new(window: &'a PatternWindow, tileset: &'a TileSet, wrap: Wrap, exec: &Exec) -> Self {
        let (w, h) = (window.width(), window.height());
        let rows = exec.map_range(h, |row| {
            (0..w).map(|col| info(window, tileset, col, row)).collect::<Vec<_>>()
        });
        Self {
            cells: Some(rows.into_iter().flatten().collect()),
            ..Self::lazy(window, tileset, wrap)
        }
    }

    fn lazy(window: &'a PatternWindow, tileset: &'a TileSet, wrap: Wrap) -> Self {
        Self {
            window,
            tileset,
            cells: None,
            wrap,
            angle_rule: tileset.angle_rule(),
        }
    }

    fn at(&self, col: usize, row: usize) -> CellInfo {
        match &self.cells {
            Some(cells) => cells[row * self.window.width() + col],
            None => info(self.window, self.tileset, col, row),
        }
    }

    /// Index of the next column/row, or `None` when it falls off an open window.
    fn next(&self, i: usize, len: usize) -> Option<usize> {
        if i + 1 < len {
            Some(i + 1)
        } else if self.wrap == Wrap::Torus {
            Some(0)
        } else {
            None
        }
    }

    /// All violations of sub-windows anchored at local `(col, row)`.
    fn anchored_at(&self, col: usize, row: usize, out: &mut Vec<Violation>) {
        let (w, h) = (self.window.width(), self.window.height());
        let loc = self.window.absolute(col, row);
        let here = self.at(col, row);
        if !here.known {
            out.push(Violation {
                rule: RuleId::UnknownSymbol,
                location: loc,
                detail: format!("cell {loc} is not in the alphabet"),
            });
        }
        let east = self.next(col, w);
        let north = self.next(row, h);
        if let Some(e) = east {
            let right = self.at(e, row);
            for rule in edge_violations(&here.faces[1], &right.faces[3], Axis::Horizontal) {
                out.push(Violation {
                    rule,
                    location: loc,
                    detail: format!("horizontal pair at {loc}"),
                });
            }
        }
        if let Some(n) = north {
            let top = self.at(col, n);
            for rule in edge_violations(&here.faces[0], &top.faces[2], Axis::Vertical) {
                out.push(Violation {
                    rule,
                    location: loc,
                    detail: format!("vertical pair at {loc}"),
                });
            }
        }
        if let (Some(e), Some(n)) = (east, north) {
            let nw = self.at(col, n);
            let ne = self.at(e, n);
            let se = self.at(e, row);
            if nw.links.1 != se.links.0 {
                out.push(Violation {
                    rule: RuleId::DiagonalStep,
                    location: loc,
                    detail: format!("2x2 block at {loc}: diagonal link {} -> {}", nw.links.1, se.links.0),
                });
            }
            if self.angle_rule && !(nw.corner || ne.corner || here.corner || se.corner) {
                out.push(Violation {
                    rule: RuleId::Angle2x2,
                    location: loc,
                    detail: format!("2x2 block at {loc} has no blue corner"),
                });
            }
        }
    }

    fn row(&self, row: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        for col in 0..self.window.width() {
            self.anchored_at(col, row, &mut out);
        }
        out.sort();
        out
    }
}

/// All violations in `window`, sorted row-major by anchor then rule.
pub fn verify(window: &PatternWindow, tileset: &TileSet, wrap: Wrap) -> Vec<Violation> {
    verify_with(window, tileset, wrap, &Exec::sequential())
}

/// [`verify`] with rows checked under `exec`; the result does not depend on it.
pub fn verify_with(window: &PatternWindow, tileset: &TileSet, wrap: Wrap, exec: &Exec) -> Vec<Violation> {
    if window.width() == 0 || window.height() == 0 {
        return Vec::new();
    }
    let checker = Checker::new(window, tileset, wrap, exec);
    exec.map_range(window.height(), |row| checker.row(row))
        .into_iter()
        .flatten()
        .collect()
}

/// Violations of the sub-windows that contain the absolute cell `c`.
///
/// Equal to the entries of [`verify`] whose sub-window covers `c`; used to
/// re-check a window after a single-cell change without a full pass.
pub fn verify_around(window: &PatternWindow, tileset: &TileSet, wrap: Wrap, c: Coord2) -> Vec<Violation> {
    let Some((col, row)) = window.local(c) else {
        return Vec::new();
    };
    let (w, h) = (window.width(), window.height());
    let span = |i: usize, len: usize| -> Vec<usize> {
        let mut v = vec![i];
        if i > 0 {
            v.push(i - 1);
        } else if wrap == Wrap::Torus && len > 1 {
            v.push(len - 1);
        }
        v.sort_unstable();
        v
    };
    let rows = span(row, h);
    let cols = span(col, w);
    let checker = Checker::lazy(window, tileset, wrap);
    let mut out = Vec::new();
    for &r in &rows {
        for &q in &cols {
            let mut here = Vec::new();
            checker.anchored_at(q, r, &mut here);
            out.extend(here.into_iter().filter(|v| covers(window, wrap, v, c)));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Whether the sub-window of violation `v` contains cell `c`.
fn covers(window: &PatternWindow, wrap: Wrap, v: &Violation, c: Coord2) -> bool {
    let (w, h) = (window.width() as i64, window.height() as i64);
    let (dx, dy) = (c.x - v.location.x, c.y - v.location.y);
    let (dx, dy) = match wrap {
        Wrap::Open => (dx, dy),
        Wrap::Torus => (dx.rem_euclid(w), dy.rem_euclid(h)),
    };
    let (ex, ey) = match v.rule {
        RuleId::UnknownSymbol => (0, 0),
        RuleId::DiagonalStep | RuleId::Angle2x2 => (1, 1),
        _ if v.detail.starts_with("horizontal") => (1, 0),
        _ => (0, 1),
    };
    (0..=ex).contains(&dx) && (0..=ey).contains(&dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_window;
    use crate::model::{ArmMark, ArmSegment, ArmSide, CellState, Mod3Pair, Window};
    use crate::rules::compile_tileset;

    #[test]
    fn blank_block_breaks_only_the_angle_rule() {
        let ts = compile_tileset();
        let w = Window::filled(Coord2::new(0, 0), 2, 2, CellState::BLANK);
        let v = verify(&w, &ts, Wrap::Open);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, RuleId::Angle2x2);
        assert_eq!(v[0].location, Coord2::new(0, 0));
    }

    #[test]
    fn isolated_arm_is_caught() {
        let ts = compile_tileset().with_angle_rule(false);
        let mut w = Window::filled(Coord2::new(0, 0), 3, 3, CellState::BLANK);
        *w.at_local_mut(1, 1) = CellState {
            h_arm: Some(ArmSegment::new(ArmSide::Bottom, ArmMark::FromLow, Mod3Pair::CENTER)),
            ..CellState::BLANK
        };
        let v = verify(&w, &ts, Wrap::Open);
        assert!(v.iter().filter(|v| v.rule == RuleId::ArmContinuity).count() >= 2);
    }

    #[test]
    fn canonical_windows_verify_clean() {
        let ts = compile_tileset();
        for (o, s) in [((0, 0), 81), ((-50, -31), 64), ((200, -7), 40)] {
            let w = generate_window(Coord2::new(o.0, o.1), s, s);
            assert_eq!(verify(&w, &ts, Wrap::Open), vec![]);
        }
    }

    #[test]
    fn unknown_state_is_reported() {
        let ts = compile_tileset();
        let mut w = generate_window(Coord2::new(0, 0), 9, 9);
        let blue = w.at_local(0, 1).blue;
        w.at_local_mut(4, 4).blue = blue;
        w.at_local_mut(4, 4).h_arm = Some(ArmSegment::new(ArmSide::Top, ArmMark::FromLow, Mod3Pair::CENTER));
        let v = verify(&w, &ts, Wrap::Open);
        assert!(v
            .iter()
            .any(|v| v.rule == RuleId::UnknownSymbol && v.location == Coord2::new(4, 4)));
    }

    #[test]
    fn output_is_sorted_and_thread_independent() {
        let ts = compile_tileset();
        let mut w = generate_window(Coord2::new(-5, 3), 40, 30);
        for (i, c) in [(3usize, 4usize), (20, 20), (39, 0), (10, 29)].into_iter().enumerate() {
            *w.at_local_mut(c.0, c.1) = ts.alphabet()[i * 911 + 17];
        }
        let seq = verify(&w, &ts, Wrap::Open);
        assert!(!seq.is_empty());
        assert!(seq.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(seq, verify_with(&w, &ts, Wrap::Open, &Exec::with_threads(4)));
        assert_eq!(
            verify(&w, &ts, Wrap::Torus),
            verify_with(&w, &ts, Wrap::Torus, &Exec::with_threads(3))
        );
    }

    #[test]
    fn local_check_matches_full_pass() {
        let ts = compile_tileset();
        let base = generate_window(Coord2::new(0, 0), 12, 10);
        for wrap in [Wrap::Open, Wrap::Torus] {
            for (k, (col, row)) in [(0usize, 0usize), (5, 5), (11, 9), (11, 0), (0, 9)]
                .into_iter()
                .enumerate()
            {
                let mut w = base.clone();
                *w.at_local_mut(col, row) = ts.alphabet()[100 + 700 * k];
                let c = w.absolute(col, row);
                let full: Vec<_> = verify(&w, &ts, wrap)
                    .into_iter()
                    .filter(|v| covers(&w, wrap, v, c))
                    .collect();
                assert_eq!(verify_around(&w, &ts, wrap, c), full, "{wrap:?} {c}");
            }
        }
    }
}
