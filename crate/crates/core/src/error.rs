use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("state is not a symbol of the alphabet: {0}")]
    UnknownState(String),

    #[error("symbol id {0} out of range (alphabet has {1} symbols)")]
    SymbolOutOfRange(u32, usize),

    #[error("window {width}x{height} is too small: {need}")]
    WindowTooSmall {
        width: usize,
        height: usize,
        need: &'static str,
    },

    #[error("2x2 block at {0} is not in the block alphabet")]
    IllegalBlock(crate::model::Coord2),

    #[error("vectors {0:?} and {1:?} are not independent")]
    DependentVectors((i64, i64), (i64, i64)),

    #[error("arithmetic overflow while combining period vectors")]
    Overflow,

    #[error("malformed window file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
