//! Higher-order Bloch and Poincare spheres.
//!
//! Two-level states whose poles carry azimuthal phase factors `e^{i l phi}`
//! and `e^{i m phi}`: construction, azimuth-dependent Stokes/Bloch fields and
//! their BS-rings, photon-to-spin transfer, and Larmor precession on the
//! time-varying higher-order sphere.
//!
//! ```
//! use std::f64::consts::PI;
//! use hosphere::higher_order::{BasisPair, Charges, HigherOrderFrame, HigherOrderState};
//! use hosphere::orientation::{ring_analytic, sample_field, AzimuthGrid};
//! use hosphere::sphere::{SphereCoords, SphereKind};
//!
//! let basis = BasisPair::new(SphereCoords::new(PI / 2.0, 0.0)?, SphereKind::Bloch);
//! let frame = HigherOrderFrame::new(basis, Charges::new(-1, 1));
//! let north = HigherOrderState::new(frame, SphereCoords::NORTH);
//!
//! let field = sample_field(&north, AzimuthGrid::new(64)?);
//! assert_eq!(field.len(), 64);
//! assert_eq!(ring_analytic(&north).winding, 2);
//! # Ok::<(), hosphere::Error>(())
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod higher_order;
pub mod orientation;
pub mod render;
pub mod sphere;
pub mod tol;
pub mod transfer;

pub use error::{Error, Result};
