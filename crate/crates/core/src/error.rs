use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report. Variants name the offending entity
/// (line, race, team pair) so that CLI messages are actionable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("race `{race_id}`: duplicate finish_rank {rank}")]
    DuplicateFinishRank { race_id: String, rank: u32 },

    #[error("race `{race_id}`: team cardinality violated, team `{team_id}` fields {cars} car(s), expected 2")]
    TeamCardinality {
        race_id: String,
        team_id: String,
        cars: usize,
    },

    #[error("race `{race_id}`: team `{team_id}` car {car_index} has neither a classified flag nor a laps fraction")]
    MissingClassification {
        race_id: String,
        team_id: String,
        car_index: u8,
    },

    #[error("race `{race_id}`: team `{team_id}` car {car_index} is classified but has no finish_rank")]
    ClassifiedWithoutRank {
        race_id: String,
        team_id: String,
        car_index: u8,
    },

    #[error("race `{race_id}`: team `{team_id}` is not part of the season team list")]
    UnknownTeam { race_id: String, team_id: String },

    #[error("unknown team `{0}`")]
    NoSuchTeam(String),

    #[error("race `{race_id}`: inconsistent or duplicate ordinal {ordinal}")]
    DuplicateOrdinal { race_id: String, ordinal: u32 },

    #[error("a season needs at least two teams, found {0}")]
    TooFewTeams(usize),

    #[error("matrix is non-square: {0}")]
    NonSquare(String),

    #[error("cell ({row}, {col}): {message}")]
    InvalidCell { row: String, col: String, message: String },

    #[error("diagonal cell of `{0}` must be empty")]
    NonEmptyDiagonal(String),

    #[error("division by zero: `{denominator}` scored no goals against `{numerator}`; set epsilon > 0")]
    ZeroGoals { numerator: String, denominator: String },

    #[error("division by zero in goal ratio {g_ij}/{g_ji}; set epsilon > 0")]
    ZeroRatio { g_ij: u32, g_ji: u32 },

    #[error("reciprocity violated at ({row}, {col})")]
    NotReciprocal { row: String, col: String },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
