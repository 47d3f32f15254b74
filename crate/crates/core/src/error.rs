use thiserror::Error;

/// Errors raised by the walk, resonator and sorter models.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("operator list is empty")]
    EmptyOperatorList,

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("q-plate charge q={q} is invalid: 2q must be a nonzero integer")]
    InvalidQPlateCharge { q: f64 },

    #[error("invalid lattice bounds: lmin={lmin} > lmax={lmax}")]
    InvalidLatticeBounds { lmin: i64, lmax: i64 },

    #[error("site l={l} outside lattice [{lmin}, {lmax}]")]
    SiteOutOfRange { l: i64, lmin: i64, lmax: i64 },

    #[error("lattice overflow: nonzero amplitude at l={l} would shift past [{lmin}, {lmax}]; enlarge the truncation")]
    LatticeOverflow { l: i64, lmin: i64, lmax: i64 },

    #[error("lattice [{lmin}, {lmax}] cannot hold {n} steps of size {step} from support [{lo}, {hi}]")]
    InsufficientLatticeBounds {
        lmin: i64,
        lmax: i64,
        lo: i64,
        hi: i64,
        n: usize,
        step: i64,
    },

    #[error("probability p={p} outside [0, 1]")]
    InvalidProbability { p: f64 },

    #[error("invalid pulse model: {reason}")]
    InvalidPulseModel { reason: String },

    #[error("invalid cavity config: {reason}")]
    InvalidCavityConfig { reason: String },

    #[error("gate width {gate_ns} ns exceeds pulse window {window_ns} ns")]
    GateExceedsWindow { gate_ns: f64, window_ns: f64 },

    #[error("degenerate gating: main-window coefficient c_n is zero at step {n}")]
    DegenerateGating { n: usize },

    #[error("invalid field grid: {reason}")]
    InvalidFieldGrid { reason: String },

    #[error("waist {w0} m too large for grid half-extent {half_extent} m")]
    WaistTooLarge { w0: f64, half_extent: f64 },

    #[error("invalid sorter design: {reason}")]
    InvalidSorterDesign { reason: String },

    #[error("sampling too coarse: pitch {dx:.3e} m exceeds Nyquist limit {limit:.3e} m for the element phase gradient")]
    SamplingTooCoarse { dx: f64, limit: f64 },

    #[error("detection bins for l in [{lmin}, {lmax}] exceed the grid extent")]
    BinsExceedGrid { lmin: i64, lmax: i64 },

    #[error("spectra have mismatched support")]
    SupportMismatch,

    #[error("spectrum has zero total weight")]
    ZeroTotalWeight,
}

pub type Result<T> = std::result::Result<T, Error>;
