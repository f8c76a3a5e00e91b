//! Single-cell mutation testing of the rule set.
//!
//! Every interior cell of a valid window is pinned down by its eight neighbors
//! when the alphabet carries no redundant information. A mutation that the
//! local rules cannot see is reported as *silent*.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Coord2, PatternWindow, SymbolId};
use crate::rules::TileSet;
use crate::verifier::{verify, Wrap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SilentMutation {
    pub location: Coord2,
    pub original: SymbolId,
    pub replacement: SymbolId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationReport {
    pub samples: usize,
    pub seed: u64,
    pub caught: usize,
    pub silent: Vec<SilentMutation>,
}

impl MutationReport {
    pub fn all_caught(&self) -> bool {
        self.silent.is_empty()
    }
}

/// Draws `samples` interior cells and replacements, and checks each mutation.
pub fn mutate_check(window: &PatternWindow, tileset: &TileSet, samples: usize, seed: u64) -> Result<MutationReport> {
    mutate_check_with(window, tileset, samples, seed, &Exec::sequential())
}

pub fn mutate_check_with(
    window: &PatternWindow,
    tileset: &TileSet,
    samples: usize,
    seed: u64,
    exec: &Exec,
) -> Result<MutationReport> {
    let (w, h) = (window.width(), window.height());
    if w < 3 || h < 3 {
        return Err(Error::WindowTooSmall {
            width: w,
            height: h,
            need: "mutation needs an interior cell",
        });
    }
    let symbols = tileset.encode_window(window)?;
    let n = tileset.len() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(usize, usize, SymbolId)> = (0..samples)
        .map(|_| {
            let col = rng.gen_range(1..w - 1);
            let row = rng.gen_range(1..h - 1);
            let cur = symbols.at_local(col, row).0;
            let r = rng.gen_range(0..n - 1);
            (col, row, SymbolId(if r >= cur { r + 1 } else { r }))
        })
        .collect();

    let results = exec.map_range(draws.len(), |i| {
        let (col, row, replacement) = draws[i];
        let at = window.absolute(col, row);
        // Every sub-window touching the cell lies in its 3x3 neighborhood.
        let mut crop = window.sub_window(at.offset(-1, -1), 3, 3).expect("interior cell");
        *crop.at_local_mut(1, 1) = *tileset.state(replacement);
        if verify(&crop, tileset, Wrap::Open).is_empty() {
            Some(SilentMutation {
                location: at,
                original: *symbols.at_local(col, row),
                replacement,
            })
        } else {
            None
        }
    });
    let silent: Vec<_> = results.into_iter().flatten().collect();
    Ok(MutationReport {
        samples,
        seed,
        caught: samples - silent.len(),
        silent,
    })
}
