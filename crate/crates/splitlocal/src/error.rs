use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands come from different coefficient sessions (q={0}, N={1}) vs (q={2}, N={3})")]
    MixedSession(u64, u32, u64, u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("evaluation at a pole")]
    Pole,
    #[error("series diverges everywhere: {0}")]
    Divergent(String),
    #[error("divergent regularization: total order {0} at t = 1")]
    DivergentRegularization(i64),
    #[error("cannot close region: {0}")]
    Unclosed(String),
    #[error("pole in {0}")]
    FactorPole(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
