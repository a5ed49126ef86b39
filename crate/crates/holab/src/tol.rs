//! Centralized tolerances.
//!
//! Numerical checks fall into three accuracy classes, and every threshold
//! in the crate is one of these named constants (tests pin the same
//! values). The classes:
//!
//! * pure algebra on exact inputs: round-off only;
//! * quantities assembled from analytic jets: a few guard digits above
//!   round-off to absorb conditioning;
//! * quantities involving finite differences or ODE integration: limited
//!   by truncation error of the scheme.

/// Pure algebra (curvature tensor identities, Gram residuals of freshly
/// orthonormalized frames). IEEE-754 round-off with a small margin.
pub const ALGEBRA: f64 = 1e-12;

/// Frame and Gram-matrix residuals after projection chains.
pub const FRAME: f64 = 1e-10;

/// Identities evaluated through analytic jets (shape-operator symmetry,
/// Weingarten duality, connection-coefficient skewness).
pub const ANALYTIC: f64 = 1e-9;

/// Default per-check tolerance with analytic jets.
pub const CHECK_ANALYTIC: f64 = 1e-6;

/// Default per-check tolerance with finite-difference jets.
pub const CHECK_FINITE_DIFF: f64 = 1e-3;

/// Orthogonality defect allowed for integrated loop transports.
pub const TRANSPORT_ORTHO: f64 = 1e-7;

/// Norm preservation of a single parallel transport.
pub const TRANSPORT_NORM: f64 = 1e-10;

/// Principal-angle tolerance for span comparisons (image of the trace-form
/// curvature tensor, estimated algebra generators).
pub const SPAN_ANGLE: f64 = 1e-5;

/// Relative singular-value cutoff for rank decisions when estimating the
/// holonomy algebra.
pub const RANK_REL: f64 = 1e-6;

/// Absolute floor below which a stack of curvature samples counts as zero
/// (flat normal bundle).
pub const RANK_ABS_FLOOR: f64 = 1e-9;

/// Default angle tolerance for CR classification from analytic jets.
pub const CR_ANGLE_ANALYTIC: f64 = 1e-6;

/// Default angle tolerance for CR classification from finite-difference jets.
pub const CR_ANGLE_FINITE_DIFF: f64 = 1e-3;

/// Condition-number bound above which a Jacobian is rejected as rank
/// deficient.
pub const JACOBIAN_COND_MAX: f64 = 1e8;

/// Norm deviation allowed for total-space representatives.
pub const REPRESENTATIVE_NORM: f64 = 1e-10;

/// Default finite-difference step scale: h = FD_STEP * (1 + |u|).
pub const FD_STEP: f64 = 1e-4;

/// Step used when differentiating smooth vector fields along parameters.
pub const FIELD_STEP: f64 = 1e-4;

/// Finer step for the connection-coefficient extraction, where the
/// Procrustes-aligned gauge leaves only an O(step²) symmetric residue that
/// must stay below [`ANALYTIC`].
pub const GAMMA_STEP: f64 = 1e-5;
