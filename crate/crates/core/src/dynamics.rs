//! Larmor precession of higher-order states.
//!
//! Time evolution under a static Zeeman field is the rotation
//! `R_n(omega t)`. Applied to a higher-order state it carries both `chi`
//! bases along, so the coefficients `(alpha, beta)` never change while the
//! sphere they live on precesses. Internally `hbar = 1` and only `omega`
//! enters; [`PhysicalParams`] exists to compute `omega` from `g`, `B`,
//! `mu_B` and `hbar`.

use crate::error::{Error, Result};
use crate::higher_order::{HigherOrderFrame, HigherOrderState};
use crate::orientation::{AzimuthGrid, OrientationField};
use crate::sphere::{
    apply, expectation_vector, pauli_dot, rotation_operator, Operator2, Spinor, Vec3, C64,
};
use crate::tol;

/// Static field direction and the precession angular frequency it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeemanField {
    n: Vec3,
    omega: f64,
}

impl ZeemanField {
    /// `omega` may be negative (negative g-factor).
    pub fn new(n: Vec3, omega: f64) -> Result<Self> {
        let n = n.require_unit(tol::INPUT_UNIT)?;
        if !omega.is_finite() {
            return Err(Error::domain("precession frequency must be finite"));
        }
        Ok(ZeemanField { n, omega })
    }

    pub fn direction(&self) -> Vec3 {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// SI-style inputs for the precession frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub g: f64,
    /// Field magnitude (tesla).
    pub b: f64,
    /// Bohr magneton (J/T).
    pub mu_b: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
}

/// `omega = g mu_B B / hbar`.
pub fn larmor_frequency(p: &PhysicalParams) -> Result<f64> {
    if !(p.hbar > 0.0) || !(p.mu_b > 0.0) {
        return Err(Error::domain("hbar and mu_B must be positive"));
    }
    if !(p.b >= 0.0) || !p.g.is_finite() || !p.b.is_finite() {
        return Err(Error::domain("B must be non-negative and g finite"));
    }
    Ok(p.g * p.mu_b * p.b / p.hbar)
}

/// `(hbar omega / 2) n.sigma`, with `hbar = 1` when no parameters are given.
pub fn hamiltonian(f: &ZeemanField, p: Option<&PhysicalParams>) -> Result<Operator2> {
    let hbar = match p {
        Some(p) if !(p.hbar > 0.0) => return Err(Error::domain("hbar must be positive")),
        Some(p) => p.hbar,
        None => 1.0,
    };
    Ok(pauli_dot(f.n)?.scale(C64::from(0.5 * hbar * f.omega)))
}

/// A higher-order frame carried along by the accumulated rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedFrame {
    pub base: HigherOrderFrame,
    pub rotation: Operator2,
    pub t: f64,
}

impl EvolvedFrame {
    pub fn chi_plus(&self, phi: f64) -> Spinor {
        rotate(&self.rotation, &self.base.chi_plus(phi))
    }

    pub fn chi_minus(&self, phi: f64) -> Spinor {
        rotate(&self.rotation, &self.base.chi_minus(phi))
    }

    /// Precessed `lambda+` expectation axis.
    pub fn axis(&self) -> Vec3 {
        expectation_vector(&self.chi_plus(0.0))
    }
}

/// Exact state at time `t`: the precessed frame plus the unchanged coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    pub initial: HigherOrderState,
    pub frame: EvolvedFrame,
    pub alpha: C64,
    pub beta: C64,
}

impl Evolution {
    /// `R_n(omega t) |psi(phi)>`.
    pub fn spinor_at(&self, phi: f64) -> Spinor {
        rotate(&self.frame.rotation, &self.initial.state_at(phi))
    }

    /// `alpha chi+(t) + beta chi-(t)`, the same spinor as
    /// [`spinor_at`](Self::spinor_at) built from the precessed bases.
    pub fn spinor_from_bases(&self, phi: f64) -> Spinor {
        let p = self.frame.chi_plus(phi).amplitudes();
        let m = self.frame.chi_minus(phi).amplitudes();
        Spinor::from_parts(
            self.alpha * p[0] + self.beta * m[0],
            self.alpha * p[1] + self.beta * m[1],
            self.initial.kind(),
        )
    }

    pub fn field(&self, grid: AzimuthGrid) -> OrientationField {
        let points = grid
            .phis()
            .map(|phi| (phi, expectation_vector(&self.spinor_at(phi))))
            .collect();
        OrientationField {
            frame: self.initial.frame,
            coords: self.initial.coords,
            points,
        }
    }
}

pub fn evolve_exact(s: &HigherOrderState, f: &ZeemanField, t: f64) -> Result<Evolution> {
    if !t.is_finite() {
        return Err(Error::domain("time must be finite"));
    }
    let rotation = rotation_operator(f.n, f.omega * t)?;
    let (alpha, beta) = s.coefficients();
    Ok(Evolution {
        initial: *s,
        frame: EvolvedFrame {
            base: s.frame,
            rotation,
            t,
        },
        alpha,
        beta,
    })
}

/// Result of the fixed-step integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericEvolution {
    pub spinor: Spinor,
    /// Largest per-step `|1/|psi| - 1|` absorbed by renormalization.
    pub max_renormalization: f64,
}

/// Classical fourth-order Runge-Kutta on `d psi/dt = -i H psi`, starting from
/// `state_at(s, phi)` at time zero.
pub fn evolve_numeric(
    s: &HigherOrderState,
    f: &ZeemanField,
    t: f64,
    steps: usize,
    phi: f64,
) -> Result<NumericEvolution> {
    if steps == 0 {
        return Err(Error::domain("integrator needs at least one step"));
    }
    if !t.is_finite() || !phi.is_finite() {
        return Err(Error::domain("time and azimuth must be finite"));
    }
    let dt = t / steps as f64;
    let step_angle = (f.omega * dt).abs();
    if step_angle > tol::MAX_STEP_ANGLE {
        let needed = ((f.omega * t).abs() / tol::MAX_STEP_ANGLE).ceil();
        return Err(Error::StepSize(format!(
            "omega*dt = {step_angle:.3} exceeds {}; use at least {needed} steps",
            tol::MAX_STEP_ANGLE
        )));
    }
    // -i H with hbar = 1.
    let generator = hamiltonian(f, None)?.scale(C64::new(0.0, -1.0));
    let deriv = |v: [C64; 2]| generator.act(v);
    let axpy = |v: [C64; 2], k: [C64; 2], h: f64| [v[0] + k[0] * h, v[1] + k[1] * h];

    let start = s.state_at(phi);
    let mut psi = start.amplitudes();
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        let k1 = deriv(psi);
        let k2 = deriv(axpy(psi, k1, 0.5 * dt));
        let k3 = deriv(axpy(psi, k2, 0.5 * dt));
        let k4 = deriv(axpy(psi, k3, dt));
        let next = [
            psi[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * (dt / 6.0),
            psi[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * (dt / 6.0),
        ];
        let norm = next[0].norm().hypot(next[1].norm());
        worst = worst.max((1.0 / norm - 1.0).abs());
        psi = [next[0] / norm, next[1] / norm];
    }
    Ok(NumericEvolution {
        spinor: Spinor::from_parts(psi[0], psi[1], start.kind()),
        max_renormalization: worst,
    })
}

/// One frame of a precession movie.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub evolution: Evolution,
    pub field: OrientationField,
}

/// `frames` uniformly spaced exact snapshots on `[t0, t1]`.
pub fn trajectory(
    s: &HigherOrderState,
    f: &ZeemanField,
    t0: f64,
    t1: f64,
    frames: usize,
    grid: AzimuthGrid,
) -> Result<Vec<Snapshot>> {
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::domain("trajectory needs finite t0 < t1"));
    }
    if frames < 2 {
        return Err(Error::domain("trajectory needs at least two frames"));
    }
    (0..frames)
        .map(|k| {
            let t = if k + 1 == frames {
                t1
            } else {
                t0 + (t1 - t0) * k as f64 / (frames - 1) as f64
            };
            let evolution = evolve_exact(s, f, t)?;
            let field = evolution.field(grid);
            Ok(Snapshot {
                t,
                evolution,
                field,
            })
        })
        .collect()
}

fn rotate(u: &Operator2, s: &Spinor) -> Spinor {
    apply(u, s).expect("rotation operators are unitary")
}
