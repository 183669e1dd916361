use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    DimensionMismatch { left: usize, right: usize },
    ZeroPolynomial,
    /// Exact division left a remainder.
    NotDivisible,
    VariableOutOfRange { var: usize, dim: usize },
    /// An ordering that is not a permutation of the variables.
    BadOrdering,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DimensionMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {left} vs {right}")
            }
            PolyError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            PolyError::NotDivisible => write!(f, "exact division left a non-zero remainder"),
            PolyError::VariableOutOfRange { var, dim } => {
                write!(f, "variable z{} out of range for dimension {dim}", var + 1)
            }
            PolyError::BadOrdering => write!(f, "variable ordering is not a permutation"),
        }
    }
}

impl core::error::Error for PolyError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixError {
    Empty,
    Ragged { row: usize },
    DimensionMismatch { expected: usize, found: usize },
    NotSquare { rows: usize, cols: usize },
    SizeMismatch { rows: usize, cols: usize },
    IndexOutOfRange { index: usize, bound: usize },
    ZeroMatrix,
    /// Minor enumeration would exceed the candidate cap.
    SearchCapExceeded { size: usize, candidates: u128, cap: u128 },
    Singular,
    Poly(PolyError),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::Empty => write!(f, "matrix must have at least one row and column"),
            MatrixError::Ragged { row } => write!(f, "row {} has a different length", row + 1),
            MatrixError::DimensionMismatch { expected, found } => {
                write!(f, "entry has ambient dimension {found}, expected {expected}")
            }
            MatrixError::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            MatrixError::SizeMismatch { rows, cols } => {
                write!(f, "row set has {rows} indices but column set has {cols}")
            }
            MatrixError::IndexOutOfRange { index, bound } => {
                write!(f, "index {} out of range 1..={bound}", index + 1)
            }
            MatrixError::ZeroMatrix => write!(f, "the zero matrix has no non-vanishing minor"),
            MatrixError::SearchCapExceeded { size, candidates, cap } => write!(
                f,
                "minor search of size {size} needs {candidates} candidates, above the cap of {cap}"
            ),
            MatrixError::Singular => write!(f, "matrix determinant vanishes"),
            MatrixError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MatrixError {}

impl From<PolyError> for MatrixError {
    fn from(e: PolyError) -> Self {
        MatrixError::Poly(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundError {
    /// The power-law bound needs `wd ≥ 1`; width zero is the step case.
    ZeroWidth,
    ExhaustiveTooLarge { dim: usize },
    InvalidParameter(&'static str),
    Matrix(MatrixError),
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::ZeroWidth => write!(f, "width is zero; use the step bound"),
            BoundError::ExhaustiveTooLarge { dim } => {
                write!(f, "exhaustive ordering search is limited to d <= 8 (got d = {dim})")
            }
            BoundError::InvalidParameter(what) => write!(f, "invalid bound parameter: {what}"),
            BoundError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BoundError {}

impl From<MatrixError> for BoundError {
    fn from(e: MatrixError) -> Self {
        BoundError::Matrix(e)
    }
}

impl From<PolyError> for BoundError {
    fn from(e: PolyError) -> Self {
        BoundError::Matrix(MatrixError::Poly(e))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DensityError {
    EmptyLambdas,
    UnsortedLambdas,
    DimensionMismatch { expected: usize, found: usize },
    ZeroPolynomial,
    /// Jacobi sweeps hit the cap with off-diagonal mass left.
    NoConvergence { off_diagonal: f64 },
    /// Too few points with `F̂(λ) > F(0)` inside the fit window.
    InsufficientPoints { usable: usize },
    InvalidParameter(&'static str),
    Matrix(MatrixError),
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::EmptyLambdas => write!(f, "lambda grid is empty"),
            DensityError::UnsortedLambdas => write!(f, "lambda grid must be ascending"),
            DensityError::DimensionMismatch { expected, found } => {
                write!(f, "grid has dimension {found}, expected {expected}")
            }
            DensityError::ZeroPolynomial => write!(f, "spectral density of the zero polynomial"),
            DensityError::NoConvergence { off_diagonal } => {
                write!(f, "Jacobi iteration did not converge (off-diagonal norm {off_diagonal:e})")
            }
            DensityError::InsufficientPoints { usable } => write!(
                f,
                "only {usable} usable points above F(0) in the fit window; need at least 5"
            ),
            DensityError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            DensityError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DensityError {}

impl From<MatrixError> for DensityError {
    fn from(e: MatrixError) -> Self {
        DensityError::Matrix(e)
    }
}
