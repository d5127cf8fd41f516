use std::fmt;

/// Errors raised by the library.
///
/// Two families are distinguished: input problems a caller can fix
/// (bad preconditions, non-supersingular curves, unsupported parameters)
/// and internal tripwires that signal a bug if they ever fire, because
/// the underlying theory rules them out for valid inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands belong to different fields.
    FieldMismatch,
    /// Inversion of zero.
    DivisionByZero,
    /// The random search for an irreducible modulus exceeded its trial cap.
    IrreducibleSearchFailed { degree: usize },
    /// A point handed to curve arithmetic does not satisfy the curve equation.
    PointNotOnCurve,
    /// The Weierstrass coefficients describe a singular cubic.
    SingularCurve,
    /// Trace determination found no candidate in {0, ±p, ±2p} (or several).
    NotSupersingular,
    /// The group order over the chosen extension has ℓ-adic valuation < 2.
    LValuationTooSmall { valuation: u32 },
    /// Torsion basis extraction exhausted its retry budget.
    RetryBudgetExhausted,
    /// A kernel generator does not have the expected exact order.
    KernelOrderMismatch,
    /// A value expected to lie in a subfield failed to descend.
    SubfieldDescent,
    /// Floating-point class polynomial coefficients did not round cleanly
    /// even after the maximum number of precision doublings.
    InsufficientPrecision { residual_log2: i64 },
    /// p does not admit enough supersingular j-invariants for this ℓ.
    SupersingularCountTooSmall { p: u64, ell: u64, count: u64 },
    /// The graph walk ran out of unvisited roots before collecting ℓ+1 nodes.
    FrontierExhausted,
    /// A coefficient that must lie in F_p did not.
    DescentFailure,
    /// The q-expansion linear system was singular at the chosen truncation.
    InsufficientTruncation,
    /// CRT reconstruction failed to stabilize before the modulus cap.
    NotStabilized { modulus_bits: u64 },
    /// Parameters outside the supported range (e.g. ℓ = p, even ℓ).
    InvalidParameter(String),
}

impl Error {
    /// True for failures that indicate an internal bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::IrreducibleSearchFailed { .. }
                | Error::RetryBudgetExhausted
                | Error::SubfieldDescent
                | Error::FrontierExhausted
                | Error::DescentFailure
                | Error::NotStabilized { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldMismatch => write!(f, "field mismatch"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::IrreducibleSearchFailed { degree } => {
                write!(f, "irreducible search failed at degree {degree}")
            }
            Error::PointNotOnCurve => write!(f, "point not on curve"),
            Error::SingularCurve => write!(f, "singular curve"),
            Error::NotSupersingular => {
                write!(f, "not supersingular or trace undetermined")
            }
            Error::LValuationTooSmall { valuation } => {
                write!(f, "l-valuation too small (got {valuation}, need >= 2)")
            }
            Error::RetryBudgetExhausted => write!(f, "retry budget exhausted"),
            Error::KernelOrderMismatch => write!(f, "kernel generator order mismatch"),
            Error::SubfieldDescent => write!(f, "value does not lie in the expected subfield"),
            Error::InsufficientPrecision { residual_log2 } => {
                write!(f, "insufficient precision (residual ~2^{residual_log2})")
            }
            Error::SupersingularCountTooSmall { p, ell, count } => {
                write!(f, "precondition S(p) >= l+1 violated: S({p}) = {count} < {}", ell + 1)
            }
            Error::FrontierExhausted => write!(f, "frontier exhausted"),
            Error::DescentFailure => write!(f, "descent failure: coefficient not in F_p"),
            Error::InsufficientTruncation => write!(f, "insufficient truncation"),
            Error::NotStabilized { modulus_bits } => {
                write!(f, "not stabilized at cap ({modulus_bits} modulus bits)")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
