//! An aperiodic tile set built from nested blue squares, diagonals and arms.
//!
//! The crate compiles the symbol alphabet and its local rules, paints the
//! canonical hierarchical configuration on any window, verifies windows,
//! checks the structural lemmas on extracted squares, and refutes small
//! periodic tilings by exhaustive torus search.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod generator;
pub mod io;
pub mod model;
pub mod mutate;
pub mod periodicity;
pub mod recode;
pub mod render;
pub mod rules;
pub mod sketch;
pub mod verifier;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{CellState, Coord2, Mod3Pair, PatternWindow, SymbolId, Window};
pub use rules::{compile_tileset, RuleId, TileSet};
pub use verifier::{verify, verify_with, Violation, Wrap};
