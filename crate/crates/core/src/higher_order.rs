//! Generalized higher-order sphere.
//!
//! A [`HigherOrderFrame`] picks an orthogonal pair `lambda+/-` on the base
//! sphere and attaches the azimuthal phases `e^{i l phi}` and `e^{i m phi}`,
//! giving the `chi+/-` bases. The higher-order poles are built from `chi+/-`
//! so that at `phi = 0` they collapse onto the base-sphere poles, and a
//! [`HigherOrderState`] is a point `(theta', phi')` relative to those poles.
//!
//! `phi` is the real-space azimuth. It is never wrapped, so callers can
//! follow a field continuously through several turns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{expectation_vector, SphereCoords, SphereKind, Spinor, Vec3, C64};
use crate::tol;

/// Base-sphere coordinates `(theta_lambda, phi_lambda)` of `lambda+`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisPair {
    pub coords: SphereCoords,
    pub kind: SphereKind,
}

impl BasisPair {
    pub fn new(coords: SphereCoords, kind: SphereKind) -> Self {
        BasisPair { coords, kind }
    }

    fn half_angles(&self) -> (f64, f64) {
        let (s, c) = (0.5 * self.coords.theta()).sin_cos();
        (c, s)
    }

    pub fn lambda_plus(&self) -> Spinor {
        Spinor::from_coords(self.coords, self.kind)
    }

    /// `sin(t/2) |N> - e^{i p} cos(t/2) |S>`, orthogonal to `lambda+`.
    pub fn lambda_minus(&self) -> Spinor {
        let (c, s) = self.half_angles();
        Spinor::from_parts(
            C64::from(s),
            -C64::from_polar(c, self.coords.phi()),
            self.kind,
        )
    }
}

pub fn lambda_plus(b: &BasisPair) -> Spinor {
    b.lambda_plus()
}

pub fn lambda_minus(b: &BasisPair) -> Spinor {
    b.lambda_minus()
}

/// Topological charges carried by `chi+` (`l`) and `chi-` (`m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Charges {
    pub l: i64,
    pub m: i64,
}

impl Charges {
    pub const ZERO: Charges = Charges { l: 0, m: 0 };

    pub fn new(l: i64, m: i64) -> Self {
        Charges { l, m }
    }

    /// Signed winding `m - l` of the orientation field about the `lambda+` axis.
    pub fn winding(&self) -> i64 {
        self.m - self.l
    }

    /// `|l - m|`.
    pub fn period(&self) -> u64 {
        self.winding().unsigned_abs()
    }

    pub fn shifted(&self, k: i64) -> Charges {
        Charges::new(self.l + k, self.m + k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherOrderFrame {
    pub basis: BasisPair,
    pub charges: Charges,
}

impl HigherOrderFrame {
    pub fn new(basis: BasisPair, charges: Charges) -> Self {
        HigherOrderFrame { basis, charges }
    }

    pub fn kind(&self) -> SphereKind {
        self.basis.kind
    }

    /// Unit expectation vector of `lambda+`; the BS-ring axis.
    pub fn axis(&self) -> Vec3 {
        expectation_vector(&self.basis.lambda_plus())
    }

    pub fn chi_plus(&self, phi: f64) -> Spinor {
        self.basis.lambda_plus().phased(self.charges.l as f64 * phi)
    }

    pub fn chi_minus(&self, phi: f64) -> Spinor {
        self.basis
            .lambda_minus()
            .phased(self.charges.m as f64 * phi)
    }

    /// `cos(t/2) chi+ + sin(t/2) chi-`.
    pub fn north_pole(&self, phi: f64) -> Spinor {
        let (c, s) = self.basis.half_angles();
        superpose(
            C64::from(c),
            &self.chi_plus(phi),
            C64::from(s),
            &self.chi_minus(phi),
        )
    }

    /// `e^{-i p} (sin(t/2) chi+ - cos(t/2) chi-)`.
    pub fn south_pole(&self, phi: f64) -> Spinor {
        let (c, s) = self.basis.half_angles();
        let phase = C64::from_polar(1.0, -self.basis.coords.phi());
        superpose(
            phase * s,
            &self.chi_plus(phi),
            -phase * c,
            &self.chi_minus(phi),
        )
    }
}

/// A point on the higher-order sphere of a given frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherOrderState {
    pub frame: HigherOrderFrame,
    pub coords: SphereCoords,
}

impl HigherOrderState {
    pub fn new(frame: HigherOrderFrame, coords: SphereCoords) -> Self {
        HigherOrderState { frame, coords }
    }

    pub fn kind(&self) -> SphereKind {
        self.frame.kind()
    }

    /// Physical spinor at azimuth `phi`:
    /// `cos(t'/2) N(phi) + e^{i p'} sin(t'/2) S(phi)`.
    pub fn state_at(&self, phi: f64) -> Spinor {
        let (s, c) = (0.5 * self.coords.theta()).sin_cos();
        superpose(
            C64::from(c),
            &self.frame.north_pole(phi),
            C64::from_polar(s, self.coords.phi()),
            &self.frame.south_pole(phi),
        )
    }

    /// Azimuth-independent `(alpha, beta)` with `psi = alpha chi+ + beta chi-`.
    pub fn coefficients(&self) -> (C64, C64) {
        let (lc, ls) = self.frame.basis.half_angles();
        let (s, c) = (0.5 * self.coords.theta()).sin_cos();
        let rel = C64::from_polar(s, self.coords.phi() - self.frame.basis.coords.phi());
        let alpha = c * lc + rel * ls;
        let beta = c * ls - rel * lc;
        (alpha, beta)
    }

    /// Inverse of [`coefficients`](Self::coefficients), up to a global phase.
    pub fn from_coefficients(frame: HigherOrderFrame, alpha: C64, beta: C64) -> Result<Self> {
        if !crate::sphere::is_finite(alpha) || !crate::sphere::is_finite(beta) {
            return Err(Error::domain("coefficients must be finite"));
        }
        let norm2 = alpha.norm_sqr() + beta.norm_sqr();
        if (norm2 - 1.0).abs() > tol::INPUT_UNIT {
            return Err(Error::domain(format!(
                "coefficients not normalized: |alpha|^2 + |beta|^2 = {norm2}"
            )));
        }
        // At phi = 0 the higher-order poles coincide with the base poles, so the
        // base-sphere point of alpha lambda+ + beta lambda- is (theta', phi').
        let lp = frame.basis.lambda_plus().amplitudes();
        let lm = frame.basis.lambda_minus().amplitudes();
        let north = alpha * lp[0] + beta * lm[0];
        let south = alpha * lp[1] + beta * lm[1];
        let coords = SphereCoords::from_amplitudes(north, south)?;
        Ok(HigherOrderState { frame, coords })
    }

    /// Bloch map of `(alpha, beta)`: `(2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2)`.
    ///
    /// Reduces to the ordinary Stokes/Bloch vector when `(l, m) = (0, 0)` and
    /// the frame basis is the pole basis.
    pub fn higher_order_vector(&self) -> Vec3 {
        let (a, b) = self.coefficients();
        let coh = a.conj() * b;
        Vec3::new(2.0 * coh.re, 2.0 * coh.im, a.norm_sqr() - b.norm_sqr())
    }

    /// Same state and coordinates on the other sphere family.
    pub fn with_kind(&self, kind: SphereKind) -> HigherOrderState {
        let mut out = *self;
        out.frame.basis.kind = kind;
        out
    }
}

fn superpose(a: C64, x: &Spinor, b: C64, y: &Spinor) -> Spinor {
    let [x0, x1] = x.amplitudes();
    let [y0, y1] = y.amplitudes();
    Spinor::from_parts(a * x0 + b * y0, a * x1 + b * y1, x.kind())
}
