use alloc::string::String;
use core::fmt;

/// Errors raised by checks and constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    FieldMismatch,
    ParseScalar(String),
    EmptyPartition,
    IdempotentMismatch,
    TranslationDefectMismatch(usize),
    AlgebraMismatch,
    StasheffViolation(String),
    TriangularityViolation(String),
    TruncationMismatch,
    TruncationTooSmall,
    ModuleMismatch,
    NotInvertible(String),
    NotABocsMorphism(String),
    NotAHomotopy(String),
    NotAcyclic(String),
    ChainMapDefect(String),
    NotIdempotent,
    NotComposableToZero,
    NotExactOnComponents(String),
    NotQuasiIso(String),
    NotAnAlgMorphism(String),
    NotAComplex,
    FormulationMismatch(String),
    GenerationFailed(String),
    Invalid(String),
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Error::*;
        match self {
            DivisionByZero => write!(f, "division by zero"),
            FieldMismatch => write!(f, "field mismatch"),
            ParseScalar(s) => write!(f, "cannot parse scalar {:?}", s),
            EmptyPartition => write!(f, "empty partition"),
            IdempotentMismatch => write!(f, "idempotent mismatch"),
            TranslationDefectMismatch(n) => write!(f, "sign translation defect mismatch at n={}", n),
            AlgebraMismatch => write!(f, "algebra mismatch"),
            StasheffViolation(w) => write!(f, "differential does not square to zero at {}", w),
            TriangularityViolation(s) => write!(f, "triangularity violation: {}", s),
            TruncationMismatch => write!(f, "truncation mismatch"),
            TruncationTooSmall => write!(f, "truncation level too small"),
            ModuleMismatch => write!(f, "module mismatch"),
            NotInvertible(s) => write!(f, "not invertible: {}", s),
            NotABocsMorphism(s) => write!(f, "not a bocs morphism: {}", s),
            NotAHomotopy(s) => write!(f, "not a homotopy: {}", s),
            NotAcyclic(s) => write!(f, "not acyclic: {}", s),
            ChainMapDefect(s) => write!(f, "chain map defect: {}", s),
            NotIdempotent => write!(f, "not idempotent"),
            NotComposableToZero => write!(f, "composite is not zero"),
            NotExactOnComponents(s) => write!(f, "first components not short exact: {}", s),
            NotQuasiIso(s) => write!(f, "not a quasi-isomorphism: {}", s),
            NotAnAlgMorphism(s) => write!(f, "not an A-infinity morphism: {}", s),
            NotAComplex => write!(f, "differential does not square to zero"),
            FormulationMismatch(s) => write!(f, "formulation mismatch: {}", s),
            GenerationFailed(s) => write!(f, "generation failed: {}", s),
            Invalid(s) => write!(f, "invalid input: {}", s),
            Internal(s) => write!(f, "internal error: {}", s),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
