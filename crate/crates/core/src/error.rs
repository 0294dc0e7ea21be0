//! Error type shared by every module in this crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
///
/// Callers that map errors onto process exit codes can use
/// [`Error::is_numerical`] to distinguish numerical breakdowns from
/// input/usage problems.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix or vector shapes are inconsistent for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A label column or label value violates the one-hot / 1-based contract.
    #[error("invalid label: {0}")]
    InvalidLabel(String),

    /// A NaN or infinity appeared where a finite value is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// An iterative or factorization routine broke down numerically.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The transform has a zero singular value, so its log-determinant
    /// regularizer is undefined.
    #[error("singular transform: smallest singular value is zero")]
    SingularTransform,

    /// An argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgs(String),

    /// The training set cannot support the requested fit (e.g. a class with
    /// no samples).
    #[error("degenerate training set: {0}")]
    Degenerate(String),

    /// A class population is too small for the requested split.
    #[error(
        "class {class} has only {population} labeled samples, too few for the requested split"
    )]
    ClassTooSmall { class: usize, population: usize },

    /// Two slices that must align have different lengths.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// A class index is outside `0..classes`.
    #[error("class index {index} out of range for {classes} classes")]
    IndexOutOfRange { index: usize, classes: usize },

    /// A confusion matrix with zero observations has no defined metrics.
    #[error("confusion matrix is empty")]
    EmptyMatrix,

    /// A class has no test samples, so its recall is undefined.
    #[error("class {0} has no test samples")]
    EmptyClass(usize),

    /// A text input failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A delimited text file has rows of unequal width.
    #[error("ragged row at line {line}: expected {expected} fields, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    /// A file that must contain data is empty.
    #[error("empty input: {0}")]
    EmptyFile(String),

    /// A binary payload has the wrong byte length for its declared shape.
    #[error("size mismatch: expected {expected} bytes, found {found}")]
    SizeMismatch { expected: u64, found: u64 },

    /// A cube header is missing fields or declares an unsupported layout.
    #[error("invalid cube header: {0}")]
    HeaderInvalid(String),

    /// A ground-truth grid does not match the cube header dimensions.
    #[error("ground truth grid is {gt_height}x{gt_width} but header declares {height}x{width}")]
    GroundTruthDimsMismatch {
        gt_height: usize,
        gt_width: usize,
        height: usize,
        width: usize,
    },

    /// A model file declares a format version this build cannot read.
    #[error("unsupported model format version {0}")]
    FormatVersionUnsupported(u64),

    /// A model file is structurally invalid or internally inconsistent.
    #[error("invalid model file: {0}")]
    SchemaInvalid(String),

    /// An underlying I/O operation failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by numerical breakdown of an otherwise
    /// well-posed computation, as opposed to bad inputs or I/O.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_) | Error::SingularTransform)
    }
}
