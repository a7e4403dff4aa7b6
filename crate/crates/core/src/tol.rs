//! Central numeric tolerances.

/// Normalization slack for a [`Spinor`](crate::sphere::Spinor).
pub const NORM: f64 = 1e-12;

/// Default absolute tolerance for state and vector comparisons.
pub const ABS: f64 = 1e-12;

/// Slack accepted on user-supplied unit vectors and coefficient pairs.
pub const INPUT_UNIT: f64 = 1e-9;

/// Below this radius a BS-ring is a single point.
pub const RING_DEGENERATE: f64 = 1e-9;

/// An unwrapped winding must sit this close to an integer.
pub const WINDING_INTEGRALITY: f64 = 1e-6;

/// Stokes third component below this magnitude counts as linear polarization.
pub const LINEAR_POLARIZATION: f64 = 1e-9;

/// Largest precession angle per step the fixed-step integrator accepts.
pub const MAX_STEP_ANGLE: f64 = 0.5;

/// Minimum azimuth samples per ring traversal.
pub const SAMPLES_PER_TURN: usize = 8;

/// Default azimuth grid size.
pub const DEFAULT_SAMPLES: usize = 64;
