use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by precondition checks. Every variant is a caller error;
/// broken internal invariants are reported through [`crate::selfcheck`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("affine map is not invertible over the integers (det = {det})")]
    NonInvertibleMap { det: i64 },

    #[error("sphere dimension n must be at least 3, got {0}")]
    DimensionTooSmall(i64),

    #[error("window [{lo},{hi}] must contain [{need_lo},{need_hi}]")]
    WindowTooSmall { lo: i64, hi: i64, need_lo: i64, need_hi: i64 },

    #[error("window bounds reversed: {lo} > {hi}")]
    EmptyWindow { lo: i64, hi: i64 },

    #[error("alpha generators require W0 = 1, got W0 = {0}")]
    AlphaNeedsUnitDegree(i64),

    #[error("alpha index must be positive, got {0}")]
    NonPositiveAlphaIndex(i64),

    #[error("cover degree must be positive, got {0}")]
    NonPositiveCoverDegree(i64),

    #[error("iteration depth must be positive, got {0}")]
    NonPositiveDepth(i64),

    #[error("point index {0} out of range 1..=3")]
    PointIndexOutOfRange(u8),

    #[error("unknown facet `{0}` (expected t1=0, t1=t2, t2=t3 or t3=1)")]
    UnknownFacet(String),

    #[error("unknown roman form `{0}` (expected I, IIb, IIbe, IIr or IIre)")]
    UnknownRomanForm(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("twist vector length {got} does not match k-1 = {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("bracket cannot be normalized: {0}")]
    Unnormalizable(String),

    #[error("relator at ({p},{q}) has a monomial outside its orbit")]
    NotOrbitLocal { p: i64, q: i64 },

    #[error("operands live in different contexts: {0}")]
    ContextMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
