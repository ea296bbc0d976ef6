use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("inversion of zero")]
    InverseOfZero,

    #[error("singular curve (zero discriminant)")]
    SingularCurve,

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("trace t={t} is not admissible for n={n}")]
    InadmissibleTrace { n: u32, t: i64 },

    #[error("gcd(d={d}, N={order}) = {gcd}, degree-d translates would collide")]
    NotCoprime { d: u32, order: u64, gcd: u64 },

    #[error("no cyclic curve with N={order} found for n={n}")]
    SearchExhausted { n: u32, order: u64 },

    #[error("generator has order {actual}, expected {expected}")]
    WrongGeneratorOrder { expected: u64, actual: u64 },

    #[error("no regular place of degree {d} found")]
    NoRegularPlace { d: u32 },

    #[error("Riemann-Roch computation failed: {0}")]
    RiemannRoch(String),

    #[error("place count formula produced a non-integer for q={q}, t={t}, d={d}")]
    NonIntegerPlaceCount { q: u64, t: i64, d: u32 },

    #[error("zero sequence has no linear complexity")]
    ZeroSequence,

    #[error("delay {delay} out of range for length {len}")]
    DelayOutOfRange { delay: usize, len: usize },

    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("exhaustive analysis exceeds the budget: {0}")]
    BudgetExceeded(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit status used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::BoundViolation(_) => 3,
            Error::Io(_) | Error::Json(_) | Error::Format(_) => 4,
            _ => 2,
        }
    }
}
