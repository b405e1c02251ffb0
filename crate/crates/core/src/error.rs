use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}` in alphabet")]
    DuplicateLabel(String),

    #[error("alphabet has {0} labels; at most 65535 are supported")]
    AlphabetTooLarge(usize),

    #[error("pattern words must be non-empty")]
    EmptyWord,

    #[error("placement of `{word}` at position {start} does not fit in a chain of length {n}")]
    PlacementOutOfRange { word: String, start: usize, n: usize },

    #[error("duplicate cost entry for `{word}` at position {start}")]
    DuplicateCost { word: String, start: usize },

    #[error("pattern `{word}` is not in the vocabulary")]
    WordNotInVocabulary { word: String },

    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),

    #[error("invalid interaction grammar: {0}")]
    InvalidInteraction(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("no labeling is derivable from the grammar")]
    NoDerivableLabeling,

    #[error("argmin extraction needs a tropical run with backpointers")]
    NoBackpointers,

    #[error("enumeration refused: {what} needs {required}, limit is {limit}")]
    SizeRefused {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("suffix-order graph contains a cycle")]
    CycleDetected,
}
