use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input; `pos` is a byte offset into the input.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate arc: {0}")]
    DegenerateArc(String),

    /// A breakpoint list that does not describe a dyadic PL homeomorphism.
    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A coarsened relation whose children disagree; this is an internal invariant.
    #[error("core graph is not deterministic: class {class} has several {label}-children")]
    NonDeterministicCore { class: usize, label: u8 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidMap(msg.into())
    }
}
