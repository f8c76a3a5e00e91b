//! Local rules: per-edge continuity, the diagonal step and the 2x2 angle rule.
//!
//! Every binary rule is phrased through the [`Face`] a cell shows on each of its
//! four edges. Two cells are compatible across an edge when their facing faces
//! match (see [`edge_violations`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    enumerate_alphabet, must_cross, ArmMark, ArmSide, Axis, BlueShape, CellState, DiagonalSegment, Dir, Mod3Pair,
    SymbolId,
};

pub const TILESET_VERSION: &str = "aperiodic-tileset/1";

/// Blue line state on an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlueEdge {
    pub coords: Mod3Pair,
    pub inner: Dir,
    pub detour: bool,
}

/// Arm state on an edge. `LowEnd` is shown by the corner an arm leaves from
/// (toward east or north), `HighEnd` by the corner it arrives at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArmEdge {
    Run {
        side: ArmSide,
        label: Mod3Pair,
        crossed: bool,
    },
    LowEnd {
        side: ArmSide,
        label: Mod3Pair,
    },
    HighEnd {
        side: ArmSide,
        label: Mod3Pair,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face {
    pub blue: Option<BlueEdge>,
    pub arm: Option<ArmEdge>,
}

/// Identifier of a broken rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    BlueContinuityH,
    BlueContinuityV,
    CoordMismatch,
    ArmContinuity,
    ArmMarkMonotone,
    ArmMarkTransition,
    MustcrossMissing,
    DiagonalStep,
    #[serde(rename = "angle-2x2")]
    Angle2x2,
    /// A cell state outside the tile set's alphabet.
    UnknownSymbol,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::BlueContinuityH => "blue-continuity-h",
            RuleId::BlueContinuityV => "blue-continuity-v",
            RuleId::CoordMismatch => "coord-mismatch",
            RuleId::ArmContinuity => "arm-continuity",
            RuleId::ArmMarkMonotone => "arm-mark-monotone",
            RuleId::ArmMarkTransition => "arm-mark-transition",
            RuleId::MustcrossMissing => "mustcross-missing",
            RuleId::DiagonalStep => "diagonal-step",
            RuleId::Angle2x2 => "angle-2x2",
            RuleId::UnknownSymbol => "unknown-symbol",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn arm_face(arm: crate::model::ArmSegment, crossed: bool) -> ArmEdge {
    ArmEdge::Run {
        side: arm.side,
        label: arm.label,
        crossed,
    }
}

/// The face `state` shows on its edge in direction `dir`.
pub fn face(state: &CellState, dir: Dir) -> Face {
    let axis = dir.axis();
    let mut out = Face::default();

    if let Some(blue) = state.blue {
        if blue.shape.exits().contains(&dir) {
            let inner = blue.inner_toward(dir).expect("blue segments always have an inner side");
            // The detour signal rides the top side (east of the NW corner), the
            // NE corner and the right side (north of the SE corner).
            let detour = blue.detour
                && match blue.shape {
                    BlueShape::CornerNw => dir == Dir::East,
                    BlueShape::CornerSe => dir == Dir::North,
                    _ => true,
                };
            out.blue = Some(BlueEdge {
                coords: blue.coords,
                inner,
                detour,
            });
        }
        if blue.shape.is_corner() && state.arm_endpoints.contains(dir) {
            let side = corner_arm_side(blue.shape, dir);
            out.arm = Some(match dir {
                Dir::East | Dir::North => ArmEdge::LowEnd {
                    side,
                    label: blue.coords,
                },
                Dir::West => ArmEdge::HighEnd {
                    side,
                    label: blue.coords.shifted(-1, 0),
                },
                Dir::South => ArmEdge::HighEnd {
                    side,
                    label: blue.coords.shifted(0, -1),
                },
            });
            return out;
        }
    }

    if let Some(arm) = state.arm(axis) {
        let crossing = state.blue.is_some();
        let crossed = match arm.mark {
            ArmMark::FromHigh => true,
            // A crossing cell switches the mark on its far side.
            ArmMark::FromLow => crossing && matches!(dir, Dir::East | Dir::North),
        };
        out.arm = Some(arm_face(arm, crossed));
    }
    out
}

/// Side type of the arm a corner emits in direction `dir`.
fn corner_arm_side(shape: BlueShape, dir: Dir) -> ArmSide {
    let top_row = matches!(shape, BlueShape::CornerNe | BlueShape::CornerNw);
    let right_col = matches!(shape, BlueShape::CornerNe | BlueShape::CornerSe);
    match dir.axis() {
        Axis::Horizontal if top_row => ArmSide::Top,
        Axis::Horizontal => ArmSide::Bottom,
        Axis::Vertical if right_col => ArmSide::Right,
        Axis::Vertical => ArmSide::Left,
    }
}

/// Diagonal links of a cell: toward its north-west and south-east diagonal neighbors.
pub fn diagonal_links(state: &CellState) -> (bool, bool) {
    let detour = state.blue.is_some_and(|b| b.detour);
    match state.diagonal {
        Some(DiagonalSegment::Through) => (true, true),
        Some(DiagonalSegment::AttachUl) => (detour, true),
        Some(DiagonalSegment::AttachLr) => (true, detour),
        None => (false, false),
    }
}

/// Rules broken between an outgoing face (east or north side of the low cell)
/// and the incoming face (west or south side of the high cell).
pub fn edge_violations(out: &Face, inc: &Face, axis: Axis) -> Vec<RuleId> {
    let mut v = Vec::new();
    let blue_rule = match axis {
        Axis::Horizontal => RuleId::BlueContinuityH,
        Axis::Vertical => RuleId::BlueContinuityV,
    };
    match (out.blue, inc.blue) {
        (None, None) => {}
        (Some(a), Some(b)) => {
            if a.coords != b.coords {
                v.push(RuleId::CoordMismatch);
            }
            if a.inner != b.inner || a.detour != b.detour {
                v.push(blue_rule);
            }
        }
        _ => v.push(blue_rule),
    }

    use ArmEdge::*;
    let same = |s1: ArmSide, l1: Mod3Pair, s2: ArmSide, l2: Mod3Pair, v: &mut Vec<RuleId>| {
        if s1 != s2 {
            v.push(RuleId::ArmContinuity);
            false
        } else if l1 != l2 {
            v.push(RuleId::CoordMismatch);
            false
        } else {
            true
        }
    };
    match (out.arm, inc.arm) {
        (None, None) => {}
        (
            Some(Run {
                side: s1,
                label: l1,
                crossed: c1,
            }),
            Some(Run {
                side: s2,
                label: l2,
                crossed: c2,
            }),
        ) => {
            if same(s1, l1, s2, l2, &mut v) && c1 != c2 {
                v.push(if c1 {
                    RuleId::ArmMarkMonotone
                } else {
                    RuleId::ArmMarkTransition
                });
            }
        }
        (
            Some(LowEnd { side: s1, label: l1 }),
            Some(Run {
                side: s2,
                label: l2,
                crossed,
            }),
        ) => {
            if same(s1, l1, s2, l2, &mut v) && crossed {
                v.push(RuleId::ArmMarkTransition);
            }
        }
        (
            Some(Run {
                side: s1,
                label: l1,
                crossed,
            }),
            Some(HighEnd { side: s2, label: l2 }),
        ) => {
            if same(s1, l1, s2, l2, &mut v) && !crossed && must_cross(l1, axis) {
                v.push(RuleId::MustcrossMissing);
            }
        }
        _ => v.push(RuleId::ArmContinuity),
    }
    v.sort();
    v.dedup();
    v
}

pub fn h_violations(left: &CellState, right: &CellState) -> Vec<RuleId> {
    edge_violations(&face(left, Dir::East), &face(right, Dir::West), Axis::Horizontal)
}

pub fn v_violations(bottom: &CellState, top: &CellState) -> Vec<RuleId> {
    edge_violations(&face(bottom, Dir::North), &face(top, Dir::South), Axis::Vertical)
}

/// Horizontal adjacency: `right` sits immediately east of `left`.
pub fn h_compatible(left: &CellState, right: &CellState) -> bool {
    h_violations(left, right).is_empty()
}

/// Vertical adjacency: `top` sits immediately north of `bottom`.
pub fn v_compatible(bottom: &CellState, top: &CellState) -> bool {
    v_violations(bottom, top).is_empty()
}

/// Diagonal step inside a 2x2 block: the north-west cell's south-east link must
/// equal the south-east cell's north-west link.
pub fn diagonal_compatible(nw: &CellState, se: &CellState) -> bool {
    diagonal_links(nw).1 == diagonal_links(se).0
}

/// A 2x2 block given as `[nw, ne, sw, se]` must contain a blue corner.
pub fn angle_ok(block: [&CellState; 4]) -> bool {
    block.iter().any(|c| c.is_corner())
}

/// Rules broken by a 2x2 block `[nw, ne, sw, se]`, excluding its four dominoes.
pub fn block_violations(block: [&CellState; 4], angle_rule: bool) -> Vec<RuleId> {
    let mut v = Vec::new();
    if !diagonal_compatible(block[0], block[3]) {
        v.push(RuleId::DiagonalStep);
    }
    if angle_rule && !angle_ok(block) {
        v.push(RuleId::Angle2x2);
    }
    v
}

/// Dense compatibility tables, built on first use.
pub struct Tables {
    /// `east_of[a]`: symbols allowed immediately east of `a`.
    pub east_of: Vec<FixedBitSet>,
    pub west_of: Vec<FixedBitSet>,
    pub north_of: Vec<FixedBitSet>,
    pub south_of: Vec<FixedBitSet>,
    /// Symbols whose north-west / south-east diagonal link is set.
    pub links_nw: FixedBitSet,
    pub links_se: FixedBitSet,
    pub corners: FixedBitSet,
}

/// The compiled tile set: alphabet plus the local rules.
pub struct TileSet {
    alphabet: Vec<CellState>,
    index: HashMap<CellState, SymbolId>,
    faces: Vec<[Face; 4]>,
    links: Vec<(bool, bool)>,
    angle_rule: bool,
    tables: OnceLock<Tables>,
}

impl fmt::Debug for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TileSet")
            .field("symbols", &self.alphabet.len())
            .field("angle_rule", &self.angle_rule)
            .finish()
    }
}

fn dir_slot(d: Dir) -> usize {
    match d {
        Dir::North => 0,
        Dir::East => 1,
        Dir::South => 2,
        Dir::West => 3,
    }
}

/// Builds the tile set for the full alphabet.
pub fn compile_tileset() -> TileSet {
    TileSet::new(enumerate_alphabet(), true)
}

impl TileSet {
    fn new(alphabet: Vec<CellState>, angle_rule: bool) -> Self {
        let index = alphabet
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, SymbolId(i as u32)))
            .collect();
        let faces = alphabet
            .iter()
            .map(|c| {
                [
                    face(c, Dir::North),
                    face(c, Dir::East),
                    face(c, Dir::South),
                    face(c, Dir::West),
                ]
            })
            .collect();
        let links = alphabet.iter().map(diagonal_links).collect();
        Self {
            alphabet,
            index,
            faces,
            links,
            angle_rule,
            tables: OnceLock::new(),
        }
    }

    /// Same alphabet, with the 2x2 angle rule switched on or off.
    pub fn with_angle_rule(&self, on: bool) -> TileSet {
        TileSet::new(self.alphabet.clone(), on)
    }

    pub fn version(&self) -> &'static str {
        TILESET_VERSION
    }

    pub fn angle_rule(&self) -> bool {
        self.angle_rule
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn alphabet(&self) -> &[CellState] {
        &self.alphabet
    }

    pub fn symbol_id(&self, state: &CellState) -> Result<SymbolId> {
        self.index
            .get(state)
            .copied()
            .ok_or_else(|| Error::UnknownState(format!("{state:?}")))
    }

    pub fn state_of(&self, id: SymbolId) -> Result<CellState> {
        self.alphabet
            .get(id.index())
            .copied()
            .ok_or(Error::SymbolOutOfRange(id.0, self.alphabet.len()))
    }

    pub fn state(&self, id: SymbolId) -> &CellState {
        &self.alphabet[id.index()]
    }

    pub fn face_of(&self, id: SymbolId, dir: Dir) -> &Face {
        &self.faces[id.index()][dir_slot(dir)]
    }

    pub fn links_of(&self, id: SymbolId) -> (bool, bool) {
        self.links[id.index()]
    }

    pub fn h_allowed(&self, left: SymbolId, right: SymbolId) -> bool {
        edge_violations(
            self.face_of(left, Dir::East),
            self.face_of(right, Dir::West),
            Axis::Horizontal,
        )
        .is_empty()
    }

    pub fn v_allowed(&self, bottom: SymbolId, top: SymbolId) -> bool {
        edge_violations(
            self.face_of(bottom, Dir::North),
            self.face_of(top, Dir::South),
            Axis::Vertical,
        )
        .is_empty()
    }

    pub fn diagonal_allowed(&self, nw: SymbolId, se: SymbolId) -> bool {
        self.links[nw.index()].1 == self.links[se.index()].0
    }

    /// The 2x2 angle predicate on a block `[nw, ne, sw, se]`.
    pub fn angle_rule_holds(&self, block: [SymbolId; 4]) -> bool {
        !self.angle_rule || block.iter().any(|s| self.alphabet[s.index()].is_corner())
    }

    /// All four dominoes, the diagonal step and the angle rule for `[nw, ne, sw, se]`.
    pub fn block_allowed(&self, b: [SymbolId; 4]) -> bool {
        self.h_allowed(b[0], b[1])
            && self.h_allowed(b[2], b[3])
            && self.v_allowed(b[2], b[0])
            && self.v_allowed(b[3], b[1])
            && self.diagonal_allowed(b[0], b[3])
            && self.angle_rule_holds(b)
    }

    pub fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> Tables {
        let n = self.len();
        // Group symbols by face so that the pairwise predicate is evaluated per
        // face class rather than per symbol pair.
        let dense = |out_dir: Dir| -> Vec<FixedBitSet> {
            let in_dir = out_dir.opposite();
            let axis = out_dir.axis();
            let mut in_classes: HashMap<Face, FixedBitSet> = HashMap::new();
            for b in 0..n {
                in_classes
                    .entry(self.faces[b][dir_slot(in_dir)])
                    .or_insert_with(|| FixedBitSet::with_capacity(n))
                    .insert(b);
            }
            let mut in_list: Vec<_> = in_classes.into_iter().collect();
            in_list.sort_by_key(|(_, set)| set.ones().next());
            let mut memo: HashMap<Face, FixedBitSet> = HashMap::new();
            (0..n)
                .map(|a| {
                    let f = self.faces[a][dir_slot(out_dir)];
                    memo.entry(f)
                        .or_insert_with(|| {
                            let mut set = FixedBitSet::with_capacity(n);
                            for (g, members) in &in_list {
                                let ok = match out_dir {
                                    Dir::East | Dir::North => edge_violations(&f, g, axis).is_empty(),
                                    Dir::West | Dir::South => edge_violations(g, &f, axis).is_empty(),
                                };
                                if ok {
                                    set.union_with(members);
                                }
                            }
                            set
                        })
                        .clone()
                })
                .collect()
        };
        let mut links_nw = FixedBitSet::with_capacity(n);
        let mut links_se = FixedBitSet::with_capacity(n);
        let mut corners = FixedBitSet::with_capacity(n);
        for (i, c) in self.alphabet.iter().enumerate() {
            let (nw, se) = self.links[i];
            links_nw.set(i, nw);
            links_se.set(i, se);
            corners.set(i, c.is_corner());
        }
        Tables {
            east_of: dense(Dir::East),
            west_of: dense(Dir::West),
            north_of: dense(Dir::North),
            south_of: dense(Dir::South),
            links_nw,
            links_se,
            corners,
        }
    }

    /// Number of allowed horizontal pairs.
    pub fn h_allowed_count(&self) -> usize {
        self.tables().east_of.iter().map(|s| s.count_ones(..)).sum()
    }

    pub fn v_allowed_count(&self) -> usize {
        self.tables().north_of.iter().map(|s| s.count_ones(..)).sum()
    }

    /// Explicit forbidden horizontal dominoes `(left, right)`.
    pub fn forbidden_h_dominoes(&self) -> impl Iterator<Item = (SymbolId, SymbolId)> + '_ {
        let t = self.tables();
        let n = self.len();
        (0..n).flat_map(move |a| {
            (0..n)
                .filter(move |&b| !t.east_of[a].contains(b))
                .map(move |b| (SymbolId(a as u32), SymbolId(b as u32)))
        })
    }

    /// Explicit forbidden vertical dominoes `(bottom, top)`.
    pub fn forbidden_v_dominoes(&self) -> impl Iterator<Item = (SymbolId, SymbolId)> + '_ {
        let t = self.tables();
        let n = self.len();
        (0..n).flat_map(move |a| {
            (0..n)
                .filter(move |&b| !t.north_of[a].contains(b))
                .map(move |b| (SymbolId(a as u32), SymbolId(b as u32)))
        })
    }

    /// Unary filter for degenerate tori: symbols compatible with themselves
    /// horizontally (width 1) and vertically (height 1).
    pub fn self_compatible(&self, id: SymbolId, wrap_h: bool, wrap_v: bool) -> bool {
        (!wrap_h || self.h_allowed(id, id)) && (!wrap_v || self.v_allowed(id, id))
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.len() as u32).map(SymbolId)
    }

    /// Encodes a window of states as symbol ids.
    pub fn encode_window(&self, w: &crate::model::PatternWindow) -> Result<crate::model::Window<SymbolId>> {
        let cells = w
            .cells()
            .iter()
            .map(|c| self.symbol_id(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(crate::model::Window::from_cells(w.origin(), w.width(), w.height(), cells).expect("same shape"))
    }

    pub fn decode_window(&self, w: &crate::model::Window<SymbolId>) -> Result<crate::model::PatternWindow> {
        let cells = w
            .cells()
            .iter()
            .map(|s| self.state_of(*s))
            .collect::<Result<Vec<_>>>()?;
        Ok(crate::model::Window::from_cells(w.origin(), w.width(), w.height(), cells).expect("same shape"))
    }

    /// Restricts the tile set to a sub-alphabet; ids are renumbered in order.
    pub fn restricted(&self, keep: impl Fn(&CellState) -> bool) -> TileSet {
        let alphabet = self.alphabet.iter().copied().filter(|c| keep(c)).collect();
        TileSet::new(alphabet, self.angle_rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArmSegment, BlueSegment};

    fn c(x: u8, y: u8) -> Mod3Pair {
        Mod3Pair::new(x, y).unwrap()
    }

    fn h_blue(inner: Dir, coords: Mod3Pair) -> CellState {
        CellState::straight(BlueSegment::straight(BlueShape::Horizontal, inner, coords, false), None)
    }

    fn v_blue(inner: Dir, coords: Mod3Pair) -> CellState {
        CellState::straight(BlueSegment::straight(BlueShape::Vertical, inner, coords, false), None)
    }

    fn h_arm(mark: ArmMark, label: Mod3Pair) -> CellState {
        CellState {
            h_arm: Some(ArmSegment::new(ArmSide::Top, mark, label)),
            ..CellState::BLANK
        }
    }

    fn v_arm(mark: ArmMark, label: Mod3Pair) -> CellState {
        CellState {
            v_arm: Some(ArmSegment::new(ArmSide::Left, mark, label)),
            ..CellState::BLANK
        }
    }

    #[test]
    fn blank_pairs_are_compatible() {
        assert!(h_compatible(&CellState::BLANK, &CellState::BLANK));
        assert!(v_compatible(&CellState::BLANK, &CellState::BLANK));
    }

    #[test]
    fn interrupted_blue_line_is_rejected() {
        let h = h_blue(Dir::North, c(0, 0));
        assert!(!h_compatible(&h, &CellState::BLANK));
        assert_eq!(h_violations(&h, &CellState::BLANK), vec![RuleId::BlueContinuityH]);
    }

    #[test]
    fn arm_marks_cannot_go_back_from_high_to_low() {
        let a = h_arm(ArmMark::FromHigh, c(0, 0));
        let b = h_arm(ArmMark::FromLow, c(0, 0));
        assert!(!h_compatible(&a, &b));
        assert_eq!(h_violations(&a, &b), vec![RuleId::ArmMarkMonotone]);
        // and cannot switch outside a crossing either
        assert_eq!(h_violations(&b, &a), vec![RuleId::ArmMarkTransition]);
    }

    #[test]
    fn vertical_line_continues_into_north_west_corner() {
        let coords = c(2, 1);
        let corner = CellState::corner(BlueShape::CornerNw, coords, false);
        assert!(v_compatible(&v_blue(Dir::East, coords), &corner));
        // the left side of a square has its inside to the east
        assert!(!v_compatible(&v_blue(Dir::West, coords), &corner));
    }

    #[test]
    fn inner_side_is_constant_along_a_side() {
        assert!(!v_compatible(&v_blue(Dir::East, c(0, 0)), &v_blue(Dir::West, c(0, 0))));
    }

    #[test]
    fn arm_label_is_constant() {
        let v = v_violations(&v_arm(ArmMark::FromLow, c(1, 0)), &v_arm(ArmMark::FromLow, c(1, 1)));
        assert_eq!(v, vec![RuleId::CoordMismatch]);
    }

    #[test]
    fn corners_emit_and_receive_arms_with_incremented_coordinates() {
        let ne = CellState::corner(BlueShape::CornerNe, c(2, 0), false);
        let nw = CellState::corner(BlueShape::CornerNw, c(0, 0), false);
        let run = h_arm(ArmMark::FromLow, c(2, 0));
        assert!(h_compatible(&ne, &run));
        assert!(h_compatible(&run, &nw));
        // wrong coordinates at the far end
        let nw_bad = CellState::corner(BlueShape::CornerNw, c(1, 0), false);
        assert_eq!(h_violations(&run, &nw_bad), vec![RuleId::CoordMismatch]);
        // an arm along the top cannot end at a bottom corner
        let sw = CellState::corner(BlueShape::CornerSw, c(0, 0), false);
        assert_eq!(h_violations(&run, &sw), vec![RuleId::ArmContinuity]);
        // corners cannot be joined by an arm of length zero
        assert!(!h_compatible(&ne, &nw));
    }

    #[test]
    fn must_cross_arm_needs_its_crossing() {
        // (0,1) -> (1,1) along the top, uncrossed: rejected at the (1,1) corner.
        let run = h_arm(ArmMark::FromLow, c(0, 1));
        let nw = CellState::corner(BlueShape::CornerNw, Mod3Pair::CENTER, false);
        assert_eq!(h_violations(&run, &nw), vec![RuleId::MustcrossMissing]);
        let crossed = h_arm(ArmMark::FromHigh, c(0, 1));
        assert!(h_compatible(&crossed, &nw));
    }

    #[test]
    fn crossing_cell_switches_the_mark() {
        let arm = ArmSegment::new(ArmSide::Top, ArmMark::FromLow, c(0, 1));
        let line = BlueSegment::straight(BlueShape::Vertical, Dir::East, c(2, 2), false);
        let crossing = CellState::straight(line, Some(arm));
        assert!(crossing.is_well_formed());
        assert!(h_compatible(&h_arm(ArmMark::FromLow, c(0, 1)), &crossing));
        assert!(h_compatible(&crossing, &h_arm(ArmMark::FromHigh, c(0, 1))));
        assert!(!h_compatible(&crossing, &h_arm(ArmMark::FromLow, c(0, 1))));
        // the inside of a line crossing a must-cross arm faces the (1,1) square
        let wrong = BlueSegment::straight(BlueShape::Vertical, Dir::West, c(2, 2), true);
        assert!(!CellState::straight(wrong, Some(arm)).is_well_formed());
    }

    #[test]
    fn diagonal_block_examples() {
        let through = CellState {
            diagonal: Some(DiagonalSegment::Through),
            ..CellState::BLANK
        };
        assert!(!diagonal_compatible(&through, &CellState::BLANK));
        let ul = CellState::corner(BlueShape::CornerNw, c(0, 0), false);
        let lr = CellState::corner(BlueShape::CornerSe, c(0, 0), false);
        assert!(diagonal_compatible(&ul, &lr));
        // an inner square on the diagonal absorbs the line at its upper-left corner
        let inner_ul = CellState::corner(BlueShape::CornerNw, c(1, 1), true);
        assert!(diagonal_compatible(&through, &inner_ul));
        assert!(!diagonal_compatible(&through, &ul));
    }

    #[test]
    fn angle_rule_examples() {
        let b = CellState::BLANK;
        assert!(!angle_ok([&b, &b, &b, &b]));
        let ne = CellState::corner(BlueShape::CornerNe, c(0, 0), false);
        assert!(angle_ok([&b, &ne, &b, &b]));
    }

    #[test]
    fn tables_agree_with_predicates_and_forbidden_sets_complement() {
        let ts = compile_tileset();
        let n = ts.len();
        let t = ts.tables();
        // spot-check the class-based tables against the direct predicate
        for a in (0..n).step_by(7) {
            for b in (0..n).step_by(5) {
                let (sa, sb) = (SymbolId(a as u32), SymbolId(b as u32));
                assert_eq!(t.east_of[a].contains(b), h_compatible(ts.state(sa), ts.state(sb)));
                assert_eq!(t.west_of[b].contains(a), h_compatible(ts.state(sa), ts.state(sb)));
                assert_eq!(t.north_of[a].contains(b), v_compatible(ts.state(sa), ts.state(sb)));
                assert_eq!(t.south_of[b].contains(a), v_compatible(ts.state(sa), ts.state(sb)));
            }
        }
        assert_eq!(ts.forbidden_h_dominoes().count(), n * n - ts.h_allowed_count());
    }

    #[test]
    fn rules_are_symmetric_under_transposition() {
        let ts = compile_tileset();
        let t = ts.tables();
        let tr: Vec<usize> = ts
            .alphabet()
            .iter()
            .map(|c| ts.symbol_id(&c.transposed()).unwrap().index())
            .collect();
        for a in 0..ts.len() {
            // (a east of b) <=> (T(a) north of T(b))
            let mapped: FixedBitSet = t.east_of[a].ones().map(|b| tr[b]).collect();
            let mut expected = t.north_of[tr[a]].clone();
            expected.grow(ts.len());
            let mut mapped = mapped;
            mapped.grow(ts.len());
            assert_eq!(mapped, expected, "symbol {a}");
            // the diagonal step is reversed: NW link of a equals SE link of T(a)
            assert_eq!(ts.links_of(SymbolId(a as u32)), {
                let (nw, se) = ts.links_of(SymbolId(tr[a] as u32));
                (se, nw)
            });
        }
    }

    /// Enumerates all chains of horizontally compatible cells over a reduced arm
    /// sub-alphabet and returns those that pass `accept`.
    fn arm_chains(label: Mod3Pair, len: usize) -> Vec<Vec<CellState>> {
        let side = ArmSide::Top;
        let mut cells = Vec::new();
        for mark in [ArmMark::FromLow, ArmMark::FromHigh] {
            cells.push(CellState {
                h_arm: Some(ArmSegment::new(side, mark, label)),
                ..CellState::BLANK
            });
        }
        for inner in [Dir::East, Dir::West] {
            for detour in [false, true] {
                let arm = ArmSegment::new(side, ArmMark::FromLow, label);
                let cell = CellState::straight(
                    BlueSegment::straight(BlueShape::Vertical, inner, c(0, 0), detour),
                    Some(arm),
                );
                if cell.is_well_formed() {
                    cells.push(cell);
                }
            }
        }
        let mut out = Vec::new();
        let mut stack: Vec<Vec<CellState>> = cells.iter().map(|c| vec![*c]).collect();
        while let Some(chain) = stack.pop() {
            if chain.len() == len {
                out.push(chain);
                continue;
            }
            let last = *chain.last().unwrap();
            for next in &cells {
                if h_compatible(&last, next) {
                    let mut longer = chain.clone();
                    longer.push(*next);
                    stack.push(longer);
                }
            }
        }
        out
    }

    #[test]
    fn mark_monotonicity_allows_at_most_one_crossing() {
        for len in 1..=8 {
            for chain in arm_chains(c(2, 0), len) {
                let crossings = chain.iter().filter(|c| c.is_crossing()).count();
                assert!(crossings <= 1, "{chain:?}");
            }
        }
    }

    #[test]
    fn must_cross_chains_between_corners_cross_exactly_once() {
        for label in [c(0, 1), Mod3Pair::CENTER] {
            let low = CellState::corner(BlueShape::CornerNe, label, false);
            let high = CellState::corner(BlueShape::CornerNw, label.shifted(1, 0), false);
            let mut complete = 0;
            for len in 1..=8 {
                for chain in arm_chains(label, len) {
                    if h_compatible(&low, &chain[0]) && h_compatible(chain.last().unwrap(), &high) {
                        complete += 1;
                        let crossings = chain.iter().filter(|c| c.is_crossing()).count();
                        assert_eq!(crossings, 1, "{chain:?}");
                    }
                }
            }
            assert!(complete > 0);
        }
    }
}
