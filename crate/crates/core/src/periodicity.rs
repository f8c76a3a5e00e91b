//! Exhaustive search for periodic tilings on small tori, and axis periods.
//!
//! A `w x h` torus tiling is a bi-periodic configuration with periods `(w, 0)`
//! and `(0, h)`; conversely any configuration with two independent periods has
//! axis-parallel ones (see [`derive_axis_periods`]). Refuting every torus up to a
//! bound therefore rules out all periodic tilings with those axis periods.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Coord2, Dir, PatternWindow, SymbolId, Window};
use crate::rules::{Face, TileSet};
use crate::verifier::{verify, Wrap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    /// Value assignments tried.
    pub nodes: u64,
    pub max_depth: u32,
    /// Branches closed by propagation.
    pub prunes: u64,
    pub wall_time_ms: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.prunes += o.prunes;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Sat { domain: PatternWindow },
    Unsat,
    Timeout,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Sat { .. } => "sat",
            Outcome::Unsat => "unsat",
            Outcome::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusSearchResult {
    pub width: usize,
    pub height: usize,
    pub outcome: Outcome,
    pub stats: SearchStats,
}

/// Symbol partition by the face shown in one direction, with the set of
/// symbols each face admits on the other side.
struct FaceClasses {
    class_of: Vec<u32>,
    admits: Vec<FixedBitSet>,
}

impl FaceClasses {
    fn new(ts: &TileSet, dir: Dir) -> Self {
        let tables = ts.tables();
        let allowed = match dir {
            Dir::East => &tables.east_of,
            Dir::West => &tables.west_of,
            Dir::North => &tables.north_of,
            Dir::South => &tables.south_of,
        };
        let mut index: HashMap<Face, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(ts.len());
        let mut admits = Vec::new();
        for id in ts.ids() {
            let next = index.len() as u32;
            let k = *index.entry(*ts.face_of(id, dir)).or_insert_with(|| {
                admits.push(allowed[id.index()].clone());
                next
            });
            class_of.push(k);
        }
        Self { class_of, admits }
    }

    /// Symbols admitted next to some symbol of `domain`.
    fn support(&self, domain: &FixedBitSet, n: usize) -> FixedBitSet {
        let mut seen = vec![false; self.admits.len()];
        let mut out = FixedBitSet::with_capacity(n);
        for s in domain.ones() {
            let k = self.class_of[s] as usize;
            if !seen[k] {
                seen[k] = true;
                out.union_with(&self.admits[k]);
            }
        }
        out
    }
}

/// Precomputed propagation data for one tile set.
struct Model {
    n: usize,
    /// East, west, north, south.
    classes: [FaceClasses; 4],
    /// Symbols whose north-west link (resp. south-east link) is set.
    link_nw: FixedBitSet,
    link_se: FixedBitSet,
    corners: FixedBitSet,
    angle_rule: bool,
}

impl Model {
    fn new(ts: &TileSet) -> Self {
        let tables = ts.tables();
        Self {
            n: ts.len(),
            classes: [
                FaceClasses::new(ts, Dir::East),
                FaceClasses::new(ts, Dir::West),
                FaceClasses::new(ts, Dir::North),
                FaceClasses::new(ts, Dir::South),
            ],
            link_nw: tables.links_nw.clone(),
            link_se: tables.links_se.clone(),
            corners: tables.corners.clone(),
            angle_rule: ts.angle_rule(),
        }
    }
}

struct Torus {
    w: usize,
    h: usize,
}

impl Torus {
    fn idx(&self, x: usize, y: usize) -> usize {
        y * self.w + x
    }

    fn step(&self, i: usize, dx: isize, dy: isize) -> usize {
        let (x, y) = ((i % self.w) as isize, (i / self.w) as isize);
        let nx = (x + dx).rem_euclid(self.w as isize) as usize;
        let ny = (y + dy).rem_euclid(self.h as isize) as usize;
        self.idx(nx, ny)
    }

    /// Cells `[nw, ne, sw, se]` of the 2x2 block anchored at cell `i`.
    fn block(&self, i: usize) -> [usize; 4] {
        [self.step(i, 0, 1), self.step(i, 1, 1), i, self.step(i, 1, 0)]
    }
}

type Domains = Vec<FixedBitSet>;

struct Search<'a> {
    model: &'a Model,
    torus: Torus,
    deadline: Option<Instant>,
    cancel: &'a AtomicBool,
    stats: SearchStats,
}

enum Step {
    Found(Domains),
    Exhausted,
    OutOfTime,
}

impl Search<'_> {
    fn restrict(&self, d: &mut Domains, cell: usize, keep: &FixedBitSet, queue: &mut Vec<usize>) -> bool {
        let before = d[cell].count_ones(..);
        d[cell].intersect_with(keep);
        let after = d[cell].count_ones(..);
        if after < before && !queue.contains(&cell) {
            queue.push(cell);
        }
        after > 0
    }

    /// Arc consistency on dominoes and diagonal links, plus angle forcing.
    fn propagate(&self, d: &mut Domains, mut queue: Vec<usize>) -> bool {
        let m = self.model;
        let t = &self.torus;
        while let Some(c) = queue.pop() {
            let neighbors = [
                (0, t.step(c, 1, 0)),
                (1, t.step(c, -1, 0)),
                (2, t.step(c, 0, 1)),
                (3, t.step(c, 0, -1)),
            ];
            for (k, other) in neighbors {
                let sup = m.classes[k].support(&d[c], m.n);
                if !self.restrict(d, other, &sup, &mut queue) {
                    return false;
                }
            }
            // c as north-west of the block anchored below it, then as south-east.
            let pairs = [
                (c, t.step(c, 1, -1), &m.link_se, &m.link_nw),
                (c, t.step(c, -1, 1), &m.link_nw, &m.link_se),
            ];
            for (from, to, from_link, to_link) in pairs {
                let on = d[from].intersection(from_link).next().is_some();
                let off = d[from].difference(from_link).next().is_some();
                if on && !off {
                    if !self.restrict(d, to, to_link, &mut queue) {
                        return false;
                    }
                } else if off && !on {
                    let mut keep = to_link.clone();
                    keep.toggle_range(..);
                    if !self.restrict(d, to, &keep, &mut queue) {
                        return false;
                    }
                }
            }
            if m.angle_rule {
                for anchor in [c, t.step(c, -1, 0), t.step(c, 0, -1), t.step(c, -1, -1)] {
                    let mut open: Vec<usize> = t
                        .block(anchor)
                        .into_iter()
                        .filter(|&b| d[b].intersection(&m.corners).next().is_some())
                        .collect();
                    open.dedup();
                    open.sort_unstable();
                    open.dedup();
                    match open.len() {
                        0 => return false,
                        1 if !self.restrict(d, open[0], &m.corners, &mut queue) => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn pick(&self, d: &Domains) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, dom) in d.iter().enumerate() {
            let n = dom.count_ones(..);
            if n > 1 && best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, i));
            }
        }
        best.map(|(_, i)| i)
    }

    fn out_of_time(&self) -> bool {
        self.cancel.load(Ordering::Relaxed) || self.deadline.is_some_and(|dl| Instant::now() >= dl)
    }

    fn assign(&mut self, d: &Domains, cell: usize, value: usize, depth: u32) -> Step {
        if self.out_of_time() {
            return Step::OutOfTime;
        }
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let mut next = d.clone();
        next[cell].clear();
        next[cell].insert(value);
        if !self.propagate(&mut next, vec![cell]) {
            self.stats.prunes += 1;
            return Step::Exhausted;
        }
        self.descend(next, depth)
    }

    fn descend(&mut self, d: Domains, depth: u32) -> Step {
        let Some(cell) = self.pick(&d) else {
            return Step::Found(d);
        };
        let values: Vec<usize> = d[cell].ones().collect();
        for v in values {
            match self.assign(&d, cell, v, depth + 1) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}

fn solution_window(ts: &TileSet, w: usize, h: usize, d: &Domains) -> PatternWindow {
    let cells = d
        .iter()
        .map(|dom| *ts.state(SymbolId(dom.ones().next().expect("assigned") as u32)))
        .collect();
    Window::from_cells(Coord2::new(0, 0), w, h, cells).expect("shape")
}

/// Symbols that can sit at every cell of a `w x h` torus on their own: when a
/// dimension is 1 a cell is its own neighbor along it.
fn unary_filter(ts: &TileSet, w: usize, h: usize) -> FixedBitSet {
    let mut keep = FixedBitSet::with_capacity(ts.len());
    for id in ts.ids() {
        if ts.self_compatible(id, w == 1, h == 1) {
            keep.insert(id.index());
        }
    }
    keep
}

/// Complete backtracking search for a tiling of the `w x h` torus.
///
/// `budget = None` searches without a time limit. Under a parallel `exec` the
/// first branching is split across workers; the outcome and, for `Unsat`, the
/// statistics do not depend on the thread count.
pub fn search_torus(w: usize, h: usize, ts: &TileSet, budget: Option<Duration>, exec: &Exec) -> TorusSearchResult {
    assert!(w >= 1 && h >= 1, "torus dimensions must be positive");
    let start = Instant::now();
    let deadline = budget.map(|b| start + b);
    let model = Model::new(ts);
    let cancel = AtomicBool::new(false);
    let mut root = Search {
        model: &model,
        torus: Torus { w, h },
        deadline,
        cancel: &cancel,
        stats: SearchStats::default(),
    };
    let finish = |outcome: Outcome, mut stats: SearchStats| {
        stats.wall_time_ms = start.elapsed().as_millis() as u64;
        TorusSearchResult {
            width: w,
            height: h,
            outcome,
            stats,
        }
    };
    if budget.is_some_and(|b| b.is_zero()) {
        return finish(Outcome::Timeout, root.stats);
    }

    let cells = w * h;
    let keep = unary_filter(ts, w, h);
    let mut d: Domains = vec![keep; cells];
    if model.angle_rule {
        // The block at (0, 0) holds a corner; translate the torus to put it at (0, 0).
        d[0].intersect_with(&model.corners);
    }
    if !root.propagate(&mut d, (0..cells).collect()) {
        root.stats.prunes += 1;
        return finish(Outcome::Unsat, root.stats);
    }
    let Some(cell) = root.pick(&d) else {
        return finish(
            Outcome::Sat {
                domain: solution_window(ts, w, h, &d),
            },
            root.stats,
        );
    };

    let values: Vec<usize> = d[cell].ones().collect();
    let run = |i: usize| {
        let mut s = Search {
            model: &model,
            torus: Torus { w, h },
            deadline,
            cancel: &cancel,
            stats: SearchStats::default(),
        };
        let step = s.assign(&d, cell, values[i], 1);
        if matches!(step, Step::OutOfTime) {
            cancel.store(true, Ordering::Relaxed);
        }
        (step, s.stats)
    };
    let branches = if exec.is_parallel() {
        exec.map_range(values.len(), run)
    } else {
        let mut out = Vec::new();
        for i in 0..values.len() {
            let r = run(i);
            let stop = !matches!(r.0, Step::Exhausted);
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };

    let mut stats = root.stats;
    for (step, st) in branches {
        stats.absorb(&st);
        match step {
            Step::Exhausted => {}
            Step::Found(sol) => {
                let domain = solution_window(ts, w, h, &sol);
                debug_assert!(verify(&domain, ts, Wrap::Torus).is_empty());
                return finish(Outcome::Sat { domain }, stats);
            }
            Step::OutOfTime => return finish(Outcome::Timeout, stats),
        }
    }
    finish(Outcome::Unsat, stats)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub width: usize,
    pub height: usize,
    pub outcome: String,
    /// Set when the entry was obtained by transposing the `(height, width)` search.
    pub mirrored: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub max_width: usize,
    pub max_height: usize,
    pub entries: Vec<ScanEntry>,
}

impl ScanTable {
    pub fn entry(&self, w: usize, h: usize) -> Option<&ScanEntry> {
        self.entries.iter().find(|e| e.width == w && e.height == h)
    }

    pub fn all_unsat(&self) -> bool {
        self.entries.iter().all(|e| e.outcome == "unsat")
    }

    /// Plain-text grid: one row per height, one column per width.
    pub fn grid(&self) -> String {
        let mut s = String::from("h\\w");
        for w in 1..=self.max_width {
            s.push_str(&format!(" {w:>7}"));
        }
        s.push('\n');
        for h in 1..=self.max_height {
            s.push_str(&format!("{h:>3}"));
            for w in 1..=self.max_width {
                let cell = self.entry(w, h).map_or("-", |e| e.outcome.as_str());
                s.push_str(&format!(" {cell:>7}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Searches every torus up to `max_w x max_h`. The rules are symmetric under
/// transposition, so only `w <= h` is searched and the rest is mirrored.
pub fn scan(max_w: usize, max_h: usize, ts: &TileSet, budget_each: Option<Duration>, exec: &Exec) -> ScanTable {
    let mut done: HashMap<(usize, usize), TorusSearchResult> = HashMap::new();
    let mut entries = Vec::new();
    for h in 1..=max_h {
        for w in 1..=max_w {
            let key = (w.min(h), w.max(h));
            let r = done
                .entry(key)
                .or_insert_with(|| search_torus(key.0, key.1, ts, budget_each, exec));
            entries.push(ScanEntry {
                width: w,
                height: h,
                outcome: r.outcome.label().to_string(),
                mirrored: (w, h) != key,
                stats: r.stats,
            });
        }
    }
    ScanTable {
        max_width: max_w,
        max_height: max_h,
        entries,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisPeriods {
    /// `(p, 0)` with `p > 0`.
    pub horizontal: (i64, i64),
    /// `(0, q)` with `q > 0`.
    pub vertical: (i64, i64),
}

/// Axis-parallel periods implied by two independent periods `v1`, `v2`.
///
/// `y2 * v1 - y1 * v2` is horizontal and `x2 * v1 - x1 * v2` is vertical; both
/// have length `|x1 * y2 - x2 * y1|`.
pub fn derive_axis_periods(v1: (i64, i64), v2: (i64, i64)) -> Result<AxisPeriods> {
    let ((x1, y1), (x2, y2)) = (v1, v2);
    let mul = |a: i64, b: i64| a.checked_mul(b).ok_or(Error::Overflow);
    let det = mul(x1, y2)?.checked_sub(mul(x2, y1)?).ok_or(Error::Overflow)?;
    if det == 0 {
        return Err(Error::DependentVectors(v1, v2));
    }
    let p = det.checked_abs().ok_or(Error::Overflow)?;
    Ok(AxisPeriods {
        horizontal: (p, 0),
        vertical: (0, p),
    })
}
