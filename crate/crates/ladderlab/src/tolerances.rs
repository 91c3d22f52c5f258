//! Pinned numerical constants.
//!
//! Every tolerance that participates in a contract (grid validation, solver
//! stopping rules, edge guards, window bands) lives here under one name so the
//! value is stated exactly once and test code can reference the same constant
//! it is exercising.

/// Minimum number of grid points accepted by [`crate::grid::build_grid`].
pub const MIN_GRID_COUNT: usize = 16;

/// Fraction of points trimmed from *each* end when measuring interior
/// residuals (`k = ceil(count * band)`); boundary stencils and edge guards
/// pollute the outermost samples, so metrics ignore them.
pub const WINDOW_BAND: f64 = 0.05;

/// Number of samples zeroed at each end after a ladder-operator application.
/// The one-sided derivative stencils touch two points per edge.
pub const EDGE_GUARD: usize = 2;

/// A dilation may extrapolate past the upper grid edge by at most this factor
/// of the grid span before it is rejected as out of range.
pub const DILATION_UPPER_MARGIN: f64 = 1.05;

/// A dilation may undershoot the lower grid edge by at most this many grid
/// spacings (harmless Lagrange extrapolation) before it is rejected.
pub const DILATION_LOWER_MARGIN_SPACINGS: f64 = 1.5;

/// Adjacent dilation factors whose product is within this distance of one are
/// dropped entirely when a chain is compacted.
pub const DILATION_MERGE_EPS: f64 = 1e-12;

/// Absolute bisection width at which a Sturm eigenvalue bracket is accepted.
pub const STURM_BISECT_TOL: f64 = 1e-12;

/// Floor applied to LDLT pivots during Sturm counting so exact-hit shifts do
/// not divide by zero; counts an exact eigenvalue hit as "below".
pub const STURM_PIVOT_GUARD: f64 = 1e-300;

/// Hard cap on Sturm bisection iterations; f64 intervals collapse in about 64
/// halvings, so this is never the binding stop.
pub const STURM_BISECT_MAX_ITER: usize = 200;

/// Maximum inverse-iteration sweeps before the eigenvector solve is declared
/// non-convergent.
pub const INVERSE_ITER_MAX_SWEEPS: usize = 50;

/// Inverse iteration stops once the eigenpair residual drops below this
/// multiple of the matrix scale.
pub const INVERSE_ITER_REL_RESID: f64 = 1e-10;

/// A ladder step whose image norm falls below this multiple of the input norm
/// is reported as an annihilation event.
pub const ANNIHILATION_NORM_FLOOR: f64 = 1e-12;

/// Relative sup-norm under which an operator image counts as annihilated when
/// measuring ladder coefficients (c = 0 branch).
pub const COEFFICIENT_ZERO_SUP: f64 = 1e-5;

/// Minimum |projection|/norm alignment required before a ladder coefficient is
/// trusted; below this the operator mapped the state somewhere unexpected.
pub const COEFFICIENT_OVERLAP_FLOOR: f64 = 0.999;

/// Residual denominators below this switch the metric to an absolute residual
/// (threshold [`ABSOLUTE_RESIDUAL_THRESHOLD`]) to avoid 0/0 on annihilated
/// right-hand sides.
pub const RESIDUAL_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Absolute-residual threshold used when the denominator floor triggers.
pub const ABSOLUTE_RESIDUAL_THRESHOLD: f64 = 1e-10;

/// Largest `n_max` the lattice renderer accepts.
pub const LATTICE_N_MAX: i64 = 12;

/// How many of the lowest oracle levels are searched when matching a
/// closed-form energy to a discrete eigenvalue.
pub const ORACLE_STATE_LEVELS: usize = 12;

/// A matched oracle level must sit within this fraction of |E| of the
/// closed-form prediction; otherwise the level is absent from the channel.
pub const ORACLE_GAP_FRACTION: f64 = 0.1;
