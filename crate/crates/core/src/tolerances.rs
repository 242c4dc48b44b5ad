//! Numerical tolerances shared by the solvers and the verification suite.

/// Relative bracket width at which the Luxemburg root solve stops.
pub const NORM_BRACKET_REL: f64 = 1e-10;

/// Maximum number of doublings (or halvings) while bracketing a norm.
pub const MAX_DOUBLINGS: usize = 200;

/// Cap on the number of sampled pairs in the log-Hölder estimate.
pub const MAX_HOLDER_PAIRS: usize = 1_000_000;

/// Fraction of the half extent forming the outer band used for p_∞.
pub const DECAY_BAND_FRACTION: f64 = 0.1;

/// Values below this are treated as support leakage.
pub const SUPPORT_LEAKAGE: f64 = 1e-12;

/// Largest Hestenes order accepted.
pub const HESTENES_MAX_ORDER: usize = 12;

/// Default epsilon of the lift symbol and the number of halvings tried.
pub const LIFT_EPSILON: f64 = 0.01;
pub const LIFT_EPSILON_RETRIES: usize = 10;

/// Number of Gauss-Legendre nodes in the lift symbol quadrature.
pub const LIFT_QUADRATURE_NODES: usize = 64;

/// Largest accepted relative spread between traces of different extensions.
pub const UTRACE_SPREAD: f64 = 1e-4;
