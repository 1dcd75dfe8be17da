use core::fmt;

use crate::FieldElement;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `m` must lie in `1..=8`.
    DegreeOutOfRange {
        m: u32,
    },
    SubfieldNotDivisor {
        m: u32,
        h: u32,
    },
    ModulusDegree {
        expected: u32,
        found: u32,
    },
    ReducibleModulus {
        modulus: u32,
    },
    /// The supplied distinguished element does not have trace 1 over `F`.
    InvalidIElem {
        value: FieldElement,
    },
    ZeroInverse,
    ZeroHasNoPolarForm,
    NotInBaseField {
        value: FieldElement,
    },
    NotInSubfield {
        value: FieldElement,
    },
    OutOfField {
        value: u32,
    },
    DuplicatePoint {
        value: FieldElement,
    },
    ContainsNucleus,
    SizeMismatch {
        expected: usize,
        found: usize,
    },
    /// Arc types outside `1 <= t < q` are not handled.
    TypeOutOfRange {
        t: u32,
        q: u32,
    },
    NotStarSet,
    NotKmArc,
    ExponentOutOfRange {
        k: u64,
        max: u64,
    },
    VandermondeSize {
        size: usize,
    },
    ZeroScalar,
    /// The lift requires `m / h` odd.
    EvenDegreeRatio {
        m: u32,
        h: u32,
    },
    /// The subplane input failed its census (not an arc of the claimed kind).
    SubplaneArc {
        s: u32,
    },
    NoExternalPoint,
    TowerTooSmall {
        m: u32,
        h: u32,
    },
    FixtureMismatch,
    IdenticalPoints,
    ZeroVector,
    SingularMatrix,
    TraceCondition,
    InvalidParameter(&'static str),
    NotSecant,
    NotInvariant,
    ClosureOverflow {
        cap: usize,
    },
    /// A construction-time self check failed; indicates an arithmetic bug.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOutOfRange { m } => write!(f, "m = {m} out of range 1..=8"),
            Error::SubfieldNotDivisor { m, h } => write!(f, "h = {h} does not divide m = {m}"),
            Error::ModulusDegree { expected, found } => {
                write!(f, "modulus has degree {found}, expected {expected}")
            }
            Error::ReducibleModulus { modulus } => write!(f, "modulus {modulus:#x} is reducible"),
            Error::InvalidIElem { value } => write!(f, "element {value} does not have trace 1"),
            Error::ZeroInverse => write!(f, "inversion of zero"),
            Error::ZeroHasNoPolarForm => write!(f, "zero has no polar representation"),
            Error::NotInBaseField { value } => write!(f, "{value} is not in the base field F"),
            Error::NotInSubfield { value } => write!(f, "{value} is not in the required subfield"),
            Error::OutOfField { value } => write!(f, "{value:#x} is not an element of K"),
            Error::DuplicatePoint { value } => write!(f, "duplicate point {value}"),
            Error::ContainsNucleus => write!(f, "point set contains the nucleus 0"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "point set has {found} points, expected {expected}")
            }
            Error::TypeOutOfRange { t, q } => write!(f, "type t = {t} outside 1 <= t < q = {q}"),
            Error::NotStarSet => write!(f, "point set is not a star-set"),
            Error::NotKmArc => write!(f, "point set is not a KM-arc with nucleus 0"),
            Error::ExponentOutOfRange { k, max } => write!(f, "exponent {k} outside 1..={max}"),
            Error::VandermondeSize { size } => {
                write!(f, "set of size {size} too small or too large")
            }
            Error::ZeroScalar => write!(f, "scaling element must be nonzero"),
            Error::EvenDegreeRatio { m, h } => write!(f, "m/h = {m}/{h} is even"),
            Error::SubplaneArc { s } => {
                write!(f, "subplane set is not an arc of type {s} with nucleus 0")
            }
            Error::NoExternalPoint => write!(f, "no translation of the subplane conic avoids 0"),
            Error::TowerTooSmall { m, h } => write!(f, "example needs h = {h} dividing m = {m}"),
            Error::FixtureMismatch => write!(f, "recurrence set does not match the listed set"),
            Error::IdenticalPoints => write!(f, "points coincide"),
            Error::ZeroVector => write!(f, "(0:0:0) is not a point"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::TraceCondition => write!(f, "trace conditions on the parameters violated"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NotSecant => write!(f, "line is not a t-secant"),
            Error::NotInvariant => write!(f, "generators do not preserve the set"),
            Error::ClosureOverflow { cap } => write!(f, "group closure exceeded {cap} elements"),
            Error::Internal(what) => write!(f, "internal check failed: {what}"),
        }
    }
}

impl core::error::Error for Error {}
