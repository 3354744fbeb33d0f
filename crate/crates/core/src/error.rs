use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadratic fields for p-radicands {left} and {right} cannot be mixed")]
    FieldMismatch { left: u32, right: u32 },
    #[error("series multiplication needs q-support bounded below")]
    UnboundedSupport,
    #[error("both factors of a series product are truncated in z")]
    WindowedProduct,
    #[error("pairing <{left}, {right}> = {pairing} is not an integer; the OPE is multivalued")]
    NonIntegerExponent {
        left: String,
        right: String,
        pairing: String,
    },
    #[error("field is not Virasoro: {0}")]
    NotVirasoro(String),
    #[error("label out of range: {0}")]
    LabelOutOfRange(String),
    #[error("sum does not terminate: {0}")]
    NonTerminating(String),
    #[error("screening is multivalued on this Fock module: alpha_minus * mu = {0}")]
    Multivalued(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("exponent is not rational: {0}")]
    IrrationalExponent(String),
    #[error("exponent {0} does not fit in a machine rational")]
    ExponentOverflow(String),
    #[error("requested order {requested} exceeds the computed cutoff {available}")]
    OrderUnavailable { requested: i64, available: i64 },
}
