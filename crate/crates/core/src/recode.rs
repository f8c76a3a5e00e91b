//! 2x2 block recoding and the equivalent Wang tile set.
//!
//! A block is written `[nw, ne, sw, se]` and is anchored at its south-west cell.
//! Recoding a window replaces each cell by the block it anchors, so the result
//! is one row and one column smaller. Neighboring blocks overlap in a column
//! (horizontally) or a row (vertically); a Wang tile per block whose edge colors
//! are those shared columns and rows turns overlap consistency into edge
//! matching.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Coord2, Dir, PatternWindow, SymbolId, Window};
use crate::rules::{Face, TileSet};

pub type Block = [SymbolId; 4];

const NW: usize = 0;
const NE: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Every legal 2x2 block, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAlphabet {
    blocks: Vec<Block>,
}

impl BlockAlphabet {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn index_of(&self, b: &Block) -> Option<usize> {
        self.blocks.binary_search(b).ok()
    }
}

fn face_classes(ts: &TileSet, dir: Dir) -> Vec<u32> {
    let mut index: HashMap<Face, u32> = HashMap::new();
    ts.ids()
        .map(|id| {
            let next = index.len() as u32;
            *index.entry(*ts.face_of(id, dir)).or_insert(next)
        })
        .collect()
}

/// Enumerates the blocks that pass all four dominoes, the diagonal step and
/// the angle rule.
pub fn legal_blocks(ts: &TileSet) -> BlockAlphabet {
    legal_blocks_with(ts, &Exec::sequential())
}

pub fn legal_blocks_with(ts: &TileSet, exec: &Exec) -> BlockAlphabet {
    let t = ts.tables();
    let east_class = face_classes(ts, Dir::East);
    let north_class = face_classes(ts, Dir::North);
    let corner = |i: usize| t.corners.contains(i);
    let angle = ts.angle_rule();

    // The north-east cell only depends on the north-west cell's east face and
    // the south-east cell's north face; group both by those.
    let per_sw = exec.map_range(ts.len(), |sw| {
        let mut nws: HashMap<(u32, bool, bool), Vec<usize>> = HashMap::new();
        for nw in t.north_of[sw].ones() {
            nws.entry((east_class[nw], t.links_se.contains(nw), corner(nw)))
                .or_default()
                .push(nw);
        }
        let mut ses: HashMap<(u32, bool, bool), Vec<usize>> = HashMap::new();
        for se in t.east_of[sw].ones() {
            ses.entry((north_class[se], t.links_nw.contains(se), corner(se)))
                .or_default()
                .push(se);
        }
        let mut out = Vec::new();
        for (kn, nw_group) in &nws {
            for (ks, se_group) in &ses {
                if kn.1 != ks.1 {
                    continue;
                }
                let mut ne = t.east_of[nw_group[0]].clone();
                ne.intersect_with(&t.north_of[se_group[0]]);
                if angle && !(corner(sw) || kn.2 || ks.2) {
                    ne.intersect_with(&t.corners);
                }
                let ne: Vec<usize> = ne.ones().collect();
                for &a in nw_group {
                    for &b in se_group {
                        for &c in &ne {
                            out.push([a, c, sw, b].map(|i| SymbolId(i as u32)));
                        }
                    }
                }
            }
        }
        out
    });
    let mut blocks: Vec<Block> = per_sw.into_iter().flatten().collect();
    blocks.sort_unstable();
    BlockAlphabet { blocks }
}

/// Replaces each cell by the 2x2 block it anchors.
pub fn block_recode(window: &PatternWindow, ts: &TileSet) -> Result<Window<Block>> {
    let (w, h) = (window.width(), window.height());
    if w < 2 || h < 2 {
        return Err(Error::WindowTooSmall {
            width: w,
            height: h,
            need: "recoding needs at least 2x2",
        });
    }
    let ids = ts.encode_window(window)?;
    let mut cells = Vec::with_capacity((w - 1) * (h - 1));
    for row in 0..h - 1 {
        for col in 0..w - 1 {
            let b = [
                *ids.at_local(col, row + 1),
                *ids.at_local(col + 1, row + 1),
                *ids.at_local(col, row),
                *ids.at_local(col + 1, row),
            ];
            if !ts.block_allowed(b) {
                return Err(Error::IllegalBlock(window.absolute(col, row)));
            }
            cells.push(b);
        }
    }
    Ok(Window::from_cells(window.origin(), w - 1, h - 1, cells).expect("shape"))
}

/// The south-west symbol of every block: the inverse of recoding, minus the
/// top row and the right column.
pub fn project_sw(recoded: &Window<Block>, ts: &TileSet) -> PatternWindow {
    recoded.map(|b| *ts.state(b[SW]))
}

/// Nearest-neighbor check on a window of blocks: every block is legal and
/// neighbors agree on their overlap. Returns the anchors of offending blocks.
pub fn domino_mismatches(recoded: &Window<Block>, alphabet: &BlockAlphabet) -> Vec<Coord2> {
    let (w, h) = (recoded.width(), recoded.height());
    let mut bad = Vec::new();
    for row in 0..h {
        for col in 0..w {
            let b = recoded.at_local(col, row);
            let mut ok = alphabet.index_of(b).is_some();
            if col + 1 < w {
                let r = recoded.at_local(col + 1, row);
                ok &= b[NE] == r[NW] && b[SE] == r[SW];
            }
            if row + 1 < h {
                let u = recoded.at_local(col, row + 1);
                ok &= b[NW] == u[SW] && b[NE] == u[SE];
            }
            if !ok {
                bad.push(recoded.absolute(col, row));
            }
        }
    }
    bad
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WangTile {
    pub north: u32,
    pub east: u32,
    pub south: u32,
    pub west: u32,
}

/// Wang tiles, one per legal block, in block order.
///
/// Vertical edges are colored by the shared column `(bottom, top)`, horizontal
/// edges by the shared row `(left, right)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WangTileSet {
    pub tiles: Vec<WangTile>,
    pub column_colors: Vec<(SymbolId, SymbolId)>,
    pub row_colors: Vec<(SymbolId, SymbolId)>,
}

impl WangTileSet {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }
}

pub fn to_wang(alphabet: &BlockAlphabet) -> WangTileSet {
    let mut columns: HashMap<(SymbolId, SymbolId), u32> = HashMap::new();
    let mut rows: HashMap<(SymbolId, SymbolId), u32> = HashMap::new();
    let mut column_colors = Vec::new();
    let mut row_colors = Vec::new();
    let color = |map: &mut HashMap<_, u32>, list: &mut Vec<_>, key| {
        *map.entry(key).or_insert_with(|| {
            list.push(key);
            list.len() as u32 - 1
        })
    };
    let tiles = alphabet
        .blocks()
        .iter()
        .map(|b| WangTile {
            west: color(&mut columns, &mut column_colors, (b[SW], b[NW])),
            east: color(&mut columns, &mut column_colors, (b[SE], b[NE])),
            south: color(&mut rows, &mut row_colors, (b[SW], b[SE])),
            north: color(&mut rows, &mut row_colors, (b[NW], b[NE])),
        })
        .collect();
    WangTileSet {
        tiles,
        column_colors,
        row_colors,
    }
}

/// Maps recoded blocks to their Wang tile indices.
pub fn wang_window(recoded: &Window<Block>, alphabet: &BlockAlphabet) -> Result<Window<u32>> {
    let cells = recoded
        .iter()
        .map(|(c, b)| alphabet.index_of(b).map(|i| i as u32).ok_or(Error::IllegalBlock(c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Window::from_cells(recoded.origin(), recoded.width(), recoded.height(), cells).expect("shape"))
}

/// Number of adjacent tile pairs whose shared edge colors differ.
pub fn wang_mismatches(tiles: &Window<u32>, set: &WangTileSet) -> usize {
    let (w, h) = (tiles.width(), tiles.height());
    let tile = |col, row| &set.tiles[*tiles.at_local(col, row) as usize];
    let mut bad = 0;
    for row in 0..h {
        for col in 0..w {
            if col + 1 < w && tile(col, row).east != tile(col + 1, row).west {
                bad += 1;
            }
            if row + 1 < h && tile(col, row).north != tile(col, row + 1).south {
                bad += 1;
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_window;
    use crate::model::CellState;
    use crate::rules::compile_tileset;

    fn small() -> TileSet {
        // blue only, one coordinate pair: small enough to brute-force
        compile_tileset().restricted(|c| {
            c.h_arm.is_none()
                && c.v_arm.is_none()
                && c.blue.map_or(c.diagonal.is_none(), |b| {
                    b.coords == crate::model::Mod3Pair::new(0, 0).unwrap() && !b.detour
                })
        })
    }

    #[test]
    fn enumeration_matches_brute_force_on_a_sub_alphabet() {
        let ts = small();
        let n = ts.len() as u32;
        let mut brute = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let blk = [a, b, c, d].map(SymbolId);
                        if ts.block_allowed(blk) {
                            brute.push(blk);
                        }
                    }
                }
            }
        }
        assert!(!brute.is_empty());
        assert_eq!(legal_blocks(&ts).blocks(), brute.as_slice());
        assert_eq!(
            legal_blocks_with(&ts, &Exec::with_threads(3)).blocks(),
            brute.as_slice()
        );
    }

    #[test]
    fn recoding_round_trips_and_matches_wang() {
        let ts = compile_tileset();
        let alphabet = legal_blocks(&ts);
        let wang = to_wang(&alphabet);
        assert_eq!(wang.len(), alphabet.len());
        let w = generate_window(Coord2::new(-4, 7), 20, 15);
        let r = block_recode(&w, &ts).unwrap();
        assert_eq!(project_sw(&r, &ts), w.sub_window(w.origin(), 19, 14).unwrap());
        assert!(domino_mismatches(&r, &alphabet).is_empty());
        let mut tiles = wang_window(&r, &alphabet).unwrap();
        assert_eq!(wang_mismatches(&tiles, &wang), 0);

        // swap one tile for another with a different west color
        let t = *tiles.at_local(5, 5) as usize;
        let other = wang.tiles.iter().position(|x| x.west != wang.tiles[t].west).unwrap();
        *tiles.at_local_mut(5, 5) = other as u32;
        assert!(wang_mismatches(&tiles, &wang) >= 1);
    }

    #[test]
    fn angle_violation_has_no_recoding() {
        let ts = compile_tileset();
        let w = Window::filled(Coord2::new(0, 0), 3, 3, CellState::BLANK);
        assert!(matches!(block_recode(&w, &ts), Err(Error::IllegalBlock(_))));
    }
}
