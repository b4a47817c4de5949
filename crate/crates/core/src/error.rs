use thiserror::Error;

/// Errors shared across the toolkit.
///
/// The CLI maps these onto exit codes: parse/input/structural/contract
/// problems are exit 2, budget and time-box refusals are exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A catalog or graph file failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input violates an operation's precondition.
    #[error("input error: {0}")]
    Input(String),

    /// The graph violates a structural assumption of the proof regime.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was called outside its contract (e.g. wrong degree).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The charge dictionary has no entry covering a letter position.
    #[error("dictionary not exhaustive: word {word} has no entry at letter position {position}")]
    DictionaryIncomplete { word: String, position: usize },

    /// Two equally specific dictionary windows disagree on the charge.
    #[error("ambiguous dictionary: {0}")]
    AmbiguousDictionary(String),

    /// The estimated search space exceeds the configured budget.
    #[error("budget refusal: estimated {estimate} canonical assignments exceeds budget {budget}")]
    Budget { estimate: u128, budget: u128 },

    /// A time-boxed search ran out of time; coverage is explicitly partial.
    #[error(
        "time-box refusal: checked {checked} of an estimated {estimate} canonical assignments \
         before the {limit_secs} s limit; coverage is partial, the claim is unproven"
    )]
    TimeBox {
        checked: u64,
        estimate: u128,
        limit_secs: u64,
    },
}

impl Error {
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::TimeBox { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
