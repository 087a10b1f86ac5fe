use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown distribution family `{0}`")]
    UnknownFamily(String),
    #[error("{family}: missing parameter `{name}`")]
    MissingParameter { family: &'static str, name: &'static str },
    #[error("{family}: unexpected parameter `{name}`")]
    UnexpectedParameter { family: &'static str, name: String },
    #[error("{family}: parameter `{name}` given more than once")]
    DuplicateParameter { family: &'static str, name: String },
    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: &'static str,
    },
    #[error("malformed model spec `{spec}`: {reason}")]
    ModelSpec { spec: String, reason: String },
    #[error("probability {0} outside the admissible range")]
    ProbabilityOutOfRange(f64),
    #[error("strategy must be 1, 2 or 3, got {0}")]
    InvalidStrategy(u32),
    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("degenerate {context}: zero denominator {term}")]
    ZeroDenominator { context: &'static str, term: String },

    #[error("empty sample")]
    EmptySample,
    #[error("income #{index} = {value} is not a finite non-negative number")]
    InvalidIncome { index: usize, value: f64 },
    #[error("sample of size {n} is too small for {what} (need at least {min})")]
    SampleTooSmall { what: &'static str, n: usize, min: usize },
    #[error("total count n_T = {n_total} is smaller than the sample size {n}")]
    CountMismatch { n_total: usize, n: usize },

    #[error("rank {rank} outside 1..={n}")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("transfer requires L < H, got L={receiver} H={giver}")]
    RankOrder { receiver: usize, giver: usize },
    #[error("no admissible transfer between ranks {receiver} and {giver}: tied neighbouring incomes")]
    NoAdmissibleTransfer { receiver: usize, giver: usize },
    #[error("transfer amount c={amount} inadmissible: need 0 < c < {bound}")]
    InadmissibleTransfer { amount: f64, bound: f64 },
    #[error("transfer L={receiver} H={giver} involves the median person M={median}; no prediction available")]
    MedianInvolved {
        receiver: usize,
        giver: usize,
        median: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("step {step}: {source}")]
    PlanStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("plan line {line}: {reason}")]
    PlanSyntax { line: usize, reason: String },

    #[error("unknown currency code `{0}`")]
    UnknownCurrency(String),
    #[error("missing column `{0}` in input header")]
    MissingColumn(String),
    #[error("record {record}: {reason}")]
    InvalidRecord { record: usize, reason: String },
    #[error("invalid pipeline config: {0}")]
    Config(String),
    #[error("no records supplied")]
    NoRecords,

    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics on otherwise valid input: a
    /// degenerate sample or model, or an iteration that did not converge.
    pub fn is_computational(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::ZeroDenominator { .. }
            | Error::SampleTooSmall { .. } => true,
            Error::PlanStep { source, .. } => source.is_computational(),
            _ => false,
        }
    }
}
