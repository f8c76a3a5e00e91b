//! Blue structure extraction and structural checks on concrete windows.
//!
//! Closed blue components are classified as squares; components that leave the
//! window are kept aside as truncated and never count against a check. Each
//! check reports `not-applicable` when nothing in the window could test it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::model::{required_inner, BlueShape, Coord2, Dir, Mod3Pair, PatternWindow};

/// One arm leaving a corner of a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmRecord {
    pub corner: Coord2,
    pub dir: Dir,
    /// Arm cells strictly between the two corners.
    pub length: usize,
    pub crossings: usize,
    /// Crossing cells whose blue inner side is not the required one.
    pub wrong_inner: Vec<Coord2>,
    /// Corner reached at the far end, when the arm stays in the window.
    pub far_corner: Option<Coord2>,
    pub truncated: bool,
    /// The arm stops at a cell that is neither an arm nor a corner.
    pub broken: bool,
    /// Label of the arm cells (coordinates of the square on its low side).
    pub label: Option<Mod3Pair>,
}

impl ArmRecord {
    pub fn complete(&self) -> bool {
        self.far_corner.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRecord {
    /// South-west corner cell.
    pub anchor: Coord2,
    /// Distance between corner cells.
    pub side: i64,
    pub coords: Mod3Pair,
    /// Arms in corner order south-west, south-east, north-east, north-west.
    pub arms: Vec<ArmRecord>,
    pub arm_crossings: Vec<usize>,
    /// Index of the neighboring square to the north, east, south and west.
    pub neighbors: [Option<usize>; 4],
    /// Some arm leaves the window.
    pub boundary_truncated: bool,
}

impl SquareRecord {
    pub fn contains_strictly(&self, other: &SquareRecord) -> bool {
        let (a, b) = (self.anchor, other.anchor);
        a.x < b.x && a.y < b.y && b.x + other.side < a.x + self.side && b.y + other.side < a.y + self.side
    }

    pub fn corners(&self) -> [(BlueShape, Coord2); 4] {
        let (a, s) = (self.anchor, self.side);
        [
            (BlueShape::CornerSw, a),
            (BlueShape::CornerSe, a.offset(s, 0)),
            (BlueShape::CornerNe, a.offset(s, s)),
            (BlueShape::CornerNw, a.offset(0, s)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedPath {
    pub cells: usize,
    pub min: Coord2,
    pub max: Coord2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub location: Coord2,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BlueStructure {
    pub squares: Vec<SquareRecord>,
    pub truncated: Vec<TruncatedPath>,
    pub anomalies: Vec<Anomaly>,
}

impl BlueStructure {
    pub fn count_with_side(&self, side: i64) -> usize {
        self.squares.iter().filter(|s| s.side == side).count()
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

fn step(c: Coord2, d: Dir) -> Coord2 {
    let (dx, dy) = d.delta();
    c.offset(dx, dy)
}

fn walk_arm(window: &PatternWindow, corner: Coord2, dir: Dir) -> ArmRecord {
    let axis = dir.axis();
    let mut rec = ArmRecord {
        corner,
        dir,
        length: 0,
        crossings: 0,
        wrong_inner: Vec::new(),
        far_corner: None,
        truncated: false,
        broken: false,
        label: None,
    };
    let mut c = step(corner, dir);
    loop {
        let Some(cell) = window.get(c) else {
            rec.truncated = true;
            return rec;
        };
        if cell.is_corner() {
            rec.far_corner = Some(c);
            return rec;
        }
        let Some(arm) = cell.arm(axis) else {
            rec.broken = true;
            return rec;
        };
        rec.label.get_or_insert(arm.label);
        rec.length += 1;
        if cell.is_crossing() {
            rec.crossings += 1;
            if arm.must_cross() && cell.blue.and_then(|b| b.inner) != Some(required_inner(arm)) {
                rec.wrong_inner.push(c);
            }
        }
        c = step(c, dir);
    }
}

/// Connected blue components of `window`, classified.
pub fn extract_blue_paths(window: &PatternWindow) -> BlueStructure {
    let (w, h) = (window.width(), window.height());
    let mut seen = vec![false; w * h];
    let mut out = BlueStructure::default();
    let mut corner_owner: HashMap<Coord2, usize> = HashMap::new();

    for row in 0..h {
        for col in 0..w {
            if seen[row * w + col] || window.at_local(col, row).blue.is_none() {
                continue;
            }
            let start = window.absolute(col, row);
            let mut stack = vec![start];
            seen[row * w + col] = true;
            let (mut cells, mut truncated, mut dangling) = (0usize, false, None);
            let (mut min, mut max) = (start, start);
            let mut corners: Vec<(BlueShape, Coord2)> = Vec::new();
            let mut coords = Vec::new();
            while let Some(c) = stack.pop() {
                cells += 1;
                min = Coord2::new(min.x.min(c.x), min.y.min(c.y));
                max = Coord2::new(max.x.max(c.x), max.y.max(c.y));
                let blue = window.get(c).and_then(|s| s.blue).expect("blue cell");
                coords.push(blue.coords);
                if blue.shape.is_corner() {
                    corners.push((blue.shape, c));
                }
                for d in blue.shape.exits() {
                    let n = step(c, d);
                    let Some((nc, nr)) = window.local(n) else {
                        truncated = true;
                        continue;
                    };
                    let joins = window
                        .at_local(nc, nr)
                        .blue
                        .is_some_and(|b| b.shape.exits().contains(&d.opposite()));
                    if !joins {
                        dangling.get_or_insert(c);
                        continue;
                    }
                    if !seen[nr * w + nc] {
                        seen[nr * w + nc] = true;
                        stack.push(n);
                    }
                }
            }
            if let Some(at) = dangling {
                out.anomalies.push(Anomaly {
                    location: at,
                    detail: "blue line ends inside the window".into(),
                });
                continue;
            }
            if truncated {
                out.truncated.push(TruncatedPath { cells, min, max });
                continue;
            }
            let side = max.x - min.x;
            corners.sort_by_key(|&(_, c)| (c.y, c.x));
            let expected = [
                (BlueShape::CornerSw, min),
                (BlueShape::CornerSe, Coord2::new(max.x, min.y)),
                (BlueShape::CornerNw, Coord2::new(min.x, max.y)),
                (BlueShape::CornerNe, max),
            ];
            let square = corners.len() == 4 && corners == expected && side == max.y - min.y && side > 0;
            let uniform = coords.iter().all(|&k| k == coords[0]);
            if !square || !uniform {
                out.anomalies.push(Anomaly {
                    location: min,
                    detail: if square {
                        "closed path with mixed coordinates".into()
                    } else {
                        format!("closed path with {} corners is not a square", corners.len())
                    },
                });
                continue;
            }
            let idx = out.squares.len();
            let mut rec = SquareRecord {
                anchor: min,
                side,
                coords: coords[0],
                arms: Vec::new(),
                arm_crossings: Vec::new(),
                neighbors: [None; 4],
                boundary_truncated: false,
            };
            for (shape, c) in rec.corners() {
                corner_owner.insert(c, idx);
                let endpoints = window.get(c).expect("corner").arm_endpoints;
                for d in shape.arm_directions().expect("corner shape") {
                    if !endpoints.contains(d) {
                        continue;
                    }
                    rec.arms.push(walk_arm(window, c, d));
                }
            }
            rec.arm_crossings = rec.arms.iter().map(|a| a.crossings).collect();
            rec.boundary_truncated = rec.arms.iter().any(|a| a.truncated);
            out.squares.push(rec);
        }
    }

    for sq in &mut out.squares {
        let mut found: [Vec<Option<usize>>; 4] = Default::default();
        for arm in &sq.arms {
            let owner = arm.far_corner.and_then(|c| corner_owner.get(&c).copied());
            found[dir_slot(arm.dir)].push(owner);
        }
        for (slot, owners) in found.iter().enumerate() {
            if let Some(&first) = owners.first() {
                if owners.iter().all(|o| *o == first) {
                    sq.neighbors[slot] = first;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub status: LemmaStatus,
    /// Structures the check was evaluated on.
    pub checked: usize,
    pub counterexamples: Vec<Coord2>,
    /// `(subject, witness)` pairs, for checks that look for a witness.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<(Coord2, Coord2)>,
}

impl LemmaResult {
    fn from_counts(checked: usize, mut counterexamples: Vec<Coord2>) -> Self {
        counterexamples.sort_by_key(|c| (c.y, c.x));
        counterexamples.dedup();
        let status = if !counterexamples.is_empty() {
            LemmaStatus::Fail
        } else if checked == 0 {
            LemmaStatus::NotApplicable
        } else {
            LemmaStatus::Pass
        };
        Self {
            status,
            checked,
            counterexamples,
            witnesses: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaReport {
    pub size_equality: LemmaResult,
    pub four_neighbors: LemmaResult,
    pub at_most_one_crossing: LemmaResult,
    pub one_one_exactly_one: LemmaResult,
    pub containment: LemmaResult,
    pub angle_density: LemmaResult,
    pub diagonal_alignment: LemmaResult,
}

impl LemmaReport {
    pub fn entries(&self) -> [(&'static str, &LemmaResult); 7] {
        [
            ("sizeEquality", &self.size_equality),
            ("fourNeighbors", &self.four_neighbors),
            ("atMostOneCrossing", &self.at_most_one_crossing),
            ("oneOneExactlyOne", &self.one_one_exactly_one),
            ("containment", &self.containment),
            ("angleDensity", &self.angle_density),
            ("diagonalAlignment", &self.diagonal_alignment),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.entries().iter().all(|(_, r)| r.status == LemmaStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.entries().iter().any(|(_, r)| r.status == LemmaStatus::Fail)
    }
}

/// Runs every structural check on `window`.
pub fn check_lemmas(window: &PatternWindow) -> LemmaReport {
    let s = extract_blue_paths(window);
    check_lemmas_on(window, &s)
}

pub fn check_lemmas_on(window: &PatternWindow, s: &BlueStructure) -> LemmaReport {
    let owner: HashMap<Coord2, usize> = s
        .squares
        .iter()
        .enumerate()
        .flat_map(|(i, sq)| sq.corners().into_iter().map(move |(_, c)| (c, i)))
        .collect();
    let far_square = |a: &ArmRecord| a.far_corner.and_then(|c| owner.get(&c).copied());

    // arms joining two extracted squares have equal sides
    let (mut checked, mut bad) = (0, Vec::new());
    for sq in &s.squares {
        for arm in &sq.arms {
            if let Some(j) = far_square(arm) {
                checked += 1;
                if s.squares[j].side != sq.side {
                    bad.push(arm.corner);
                }
            }
        }
    }
    let size_equality = LemmaResult::from_counts(checked, bad);

    // eight complete arms and one neighbor in each direction
    let (mut checked, mut bad) = (0, Vec::new());
    for sq in s.squares.iter().filter(|q| !q.boundary_truncated) {
        checked += 1;
        let eight = sq.arms.len() == 8 && sq.arms.iter().all(ArmRecord::complete);
        let mut dirs: Vec<usize> = Vec::new();
        for d in Dir::ALL {
            let ends: Vec<_> = sq.arms.iter().filter(|a| a.dir == d).map(far_square).collect();
            if ends.len() == 2 && ends[0].is_some() && ends[0] == ends[1] {
                dirs.push(ends[0].unwrap());
            }
        }
        let mut distinct = dirs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if !eight || dirs.len() != 4 || distinct.len() != 4 {
            bad.push(sq.anchor);
        }
    }
    let four_neighbors = LemmaResult::from_counts(checked, bad);

    // crossings on complete arms; each arm is listed by both of its squares,
    // so count it once from its low (west or south) end
    let complete: Vec<&ArmRecord> = s
        .squares
        .iter()
        .flat_map(|q| q.arms.iter())
        .filter(|a| a.complete() && matches!(a.dir, Dir::East | Dir::North))
        .collect();
    let bad = complete.iter().filter(|a| a.crossings > 1).map(|a| a.corner).collect();
    let at_most_one_crossing = LemmaResult::from_counts(complete.len(), bad);

    let (mut checked, mut bad) = (0, Vec::new());
    for arm in &complete {
        let low = owner.get(&arm.corner).copied();
        let high = far_square(arm);
        let touches_center = [low, high]
            .into_iter()
            .flatten()
            .any(|i| s.squares[i].coords == Mod3Pair::CENTER);
        if touches_center {
            checked += 1;
            if arm.crossings != 1 || !arm.wrong_inner.is_empty() {
                bad.push(arm.corner);
            }
        }
    }
    let one_one_exactly_one = LemmaResult::from_counts(checked, bad);

    // every central square whose concentric enclosing square would be visible
    // lies strictly inside some larger square
    let (mut checked, mut bad, mut witnesses) = (0, Vec::new(), Vec::new());
    for sq in s.squares.iter().filter(|q| q.coords == Mod3Pair::CENTER) {
        let lo = sq.anchor.offset(-sq.side, -sq.side);
        let hi = sq.anchor.offset(2 * sq.side, 2 * sq.side);
        if !(window.contains(lo) && window.contains(hi)) {
            continue;
        }
        checked += 1;
        let witness = s
            .squares
            .iter()
            .filter(|big| big.contains_strictly(sq))
            .min_by_key(|big| big.side);
        match witness {
            Some(big) => witnesses.push((sq.anchor, big.anchor)),
            None => bad.push(sq.anchor),
        }
    }
    let mut containment = LemmaResult::from_counts(checked, bad);
    containment.witnesses = witnesses;

    let (w, h) = (window.width(), window.height());
    let (mut checked, mut bad) = (0, Vec::new());
    for row in 0..h.saturating_sub(1) {
        for col in 0..w.saturating_sub(1) {
            checked += 1;
            let any = [(0, 0), (1, 0), (0, 1), (1, 1)]
                .iter()
                .any(|&(dx, dy)| window.at_local(col + dx, row + dy).is_corner());
            if !any {
                bad.push(window.absolute(col, row));
            }
        }
    }
    let angle_density = LemmaResult::from_counts(checked, bad);

    // corners met along a square's anti-diagonal are upper-left or lower-right
    let (mut checked, mut bad) = (0, Vec::new());
    for sq in &s.squares {
        let top = sq.anchor.y + sq.side;
        for t in 1..sq.side {
            let c = Coord2::new(sq.anchor.x + t, top - t);
            if let Some(shape) = window.get(c).and_then(|cell| cell.corner_shape()) {
                checked += 1;
                if !matches!(shape, BlueShape::CornerNw | BlueShape::CornerSe) {
                    bad.push(c);
                }
            }
        }
    }
    let diagonal_alignment = LemmaResult::from_counts(checked, bad);

    LemmaReport {
        size_equality,
        four_neighbors,
        at_most_one_crossing,
        one_one_exactly_one,
        containment,
        angle_density,
        diagonal_alignment,
    }
}
