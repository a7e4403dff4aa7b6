//! Two-level state algebra shared by the Poincare and Bloch spheres.
//!
//! Amplitudes are taken in the pole basis `|N> = (1, 0)`, `|S> = (0, 1)`, with
//! `sigma_z` diagonal and `+1` on the north pole. The two sphere families are
//! algebraically identical; [`SphereKind`] only selects how components are
//! named when presented.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Which sphere the poles belong to: `{|R>, |L>}` or `{|up>, |down>}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SphereKind {
    #[serde(rename = "P")]
    Poincare,
    #[serde(rename = "B")]
    Bloch,
}

impl SphereKind {
    pub fn letter(self) -> &'static str {
        match self {
            SphereKind::Poincare => "P",
            SphereKind::Bloch => "B",
        }
    }

    /// Presentation names of the three expectation components.
    pub fn component_names(self) -> [&'static str; 3] {
        match self {
            SphereKind::Poincare => ["s1", "s2", "s3"],
            SphereKind::Bloch => ["sx", "sy", "sz"],
        }
    }
}

impl fmt::Display for SphereKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl std::str::FromStr for SphereKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "P" | "p" | "PS" => Ok(SphereKind::Poincare),
            "B" | "b" | "BS" => Ok(SphereKind::Bloch),
            other => Err(Error::parse(format!(
                "unknown sphere label {other:?}, expected P or B"
            ))),
        }
    }
}

/// Polar and azimuthal angle on a unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereCoords {
    theta: f64,
    phi: f64,
}

impl SphereCoords {
    /// Checked constructor: `theta` in `[0, pi]`, `phi` in `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::domain("sphere angles must be finite"));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!("theta = {theta} outside [0, pi]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::domain(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(SphereCoords { theta, phi })
    }

    pub const NORTH: SphereCoords = SphereCoords {
        theta: 0.0,
        phi: 0.0,
    };
    pub const SOUTH: SphereCoords = SphereCoords {
        theta: PI,
        phi: 0.0,
    };

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Recover coordinates from raw amplitudes, discarding the global phase.
    ///
    /// The phase is removed so that the north amplitude is real and
    /// non-negative; `phi` is set to zero at either pole.
    pub fn from_amplitudes(north: C64, south: C64) -> Result<Self> {
        if !is_finite(north) || !is_finite(south) {
            return Err(Error::domain("amplitudes must be finite"));
        }
        let a = north.norm();
        let b = south.norm();
        let scale = a.hypot(b);
        if scale == 0.0 {
            return Err(Error::domain("zero-norm amplitudes have no sphere point"));
        }
        let pole_eps = f64::EPSILON * scale;
        if b <= pole_eps {
            return Ok(SphereCoords::NORTH);
        }
        if a <= pole_eps {
            return Ok(SphereCoords::SOUTH);
        }
        let theta = (2.0 * b.atan2(a)).min(PI);
        let relative = south * north.conj();
        let mut phi = relative.arg().rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(SphereCoords { theta, phi })
    }

    /// Unit vector `(sin t cos p, sin t sin p, cos t)`.
    pub fn unit_vector(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }
}

/// Plain real 3-vector (Stokes vector, Bloch vector, field direction).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const X: Vec3 = Vec3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: Vec3 = Vec3 {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }

    /// `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }

    /// Right-handed rotation about the unit vector `axis` (Rodrigues formula).
    pub fn rotated_about(self, axis: Vec3, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        self.scale(c) + axis.cross(self).scale(s) + axis.scale(axis.dot(self) * (1.0 - c))
    }

    /// Checks `|v| = 1` within `tol`.
    pub fn require_unit(self, tol: f64) -> Result<Vec3> {
        if !self.is_finite() || (self.norm() - 1.0).abs() > tol {
            return Err(Error::domain(format!(
                "expected a unit vector, got ({}, {}, {}) with norm {}",
                self.x,
                self.y,
                self.z,
                self.norm()
            )));
        }
        Ok(self)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2(pub [[C64; 2]; 2]);

impl Operator2 {
    pub const IDENTITY: Operator2 = Operator2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Operator2 = Operator2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.0
    }

    pub fn adjoint(&self) -> Operator2 {
        let m = &self.0;
        Operator2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn scale(&self, k: C64) -> Operator2 {
        let m = &self.0;
        Operator2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn determinant(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn act(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn max_abs_diff(&self, o: &Operator2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - o.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, o: &Operator2, tol: f64) -> bool {
        self.max_abs_diff(o) <= tol
    }

    /// Equality up to an overall sign, the ambiguity of SU(2) over SO(3).
    pub fn approx_eq_up_to_sign(&self, o: &Operator2, tol: f64) -> bool {
        self.approx_eq(o, tol) || self.approx_eq(&o.scale(-ONE), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).approx_eq(&Operator2::IDENTITY, tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let m = &self.0;
        let mean = 0.5 * (m[0][0].re + m[1][1].re);
        let half_gap = (0.25 * (m[0][0].re - m[1][1].re).powi(2) + m[0][1].norm_sqr()).sqrt();
        (mean - half_gap, mean + half_gap)
    }
}

impl Mul for Operator2 {
    type Output = Operator2;
    fn mul(self, o: Operator2) -> Operator2 {
        let (a, b) = (&self.0, &o.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Operator2(out)
    }
}

impl Add for Operator2 {
    type Output = Operator2;
    fn add(self, o: Operator2) -> Operator2 {
        let (a, b) = (&self.0, &o.0);
        Operator2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Operator2 {
    type Output = Operator2;
    fn sub(self, o: Operator2) -> Operator2 {
        self + o.scale(-ONE)
    }
}

/// Pauli operator selector. `X`, `Y`, `Z` double as Stokes indices 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    Identity,
    X,
    Y,
    Z,
}

pub fn pauli(axis: PauliAxis) -> Operator2 {
    match axis {
        PauliAxis::Identity => Operator2::IDENTITY,
        PauliAxis::X => Operator2([[ZERO, ONE], [ONE, ZERO]]),
        PauliAxis::Y => Operator2([[ZERO, -I], [I, ZERO]]),
        PauliAxis::Z => Operator2([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// `n . sigma` for a unit vector `n`.
pub fn pauli_dot(n: Vec3) -> Result<Operator2> {
    let n = n.require_unit(tol::INPUT_UNIT)?;
    Ok(pauli_dot_unchecked(n))
}

fn pauli_dot_unchecked(n: Vec3) -> Operator2 {
    let xy = C64::new(n.x, -n.y);
    Operator2([[C64::from(n.z), xy], [xy.conj(), C64::from(-n.z)]])
}

/// `cos(a/2) I - i sin(a/2) (n . sigma)`: right-handed rotation by `a` about `n`.
pub fn rotation_operator(n: Vec3, angle: f64) -> Result<Operator2> {
    let n = n.require_unit(tol::INPUT_UNIT)?;
    if !angle.is_finite() {
        return Err(Error::domain("rotation angle must be finite"));
    }
    let (s, c) = (0.5 * angle).sin_cos();
    Ok(Operator2::IDENTITY.scale(C64::from(c)) + pauli_dot_unchecked(n).scale(C64::new(0.0, -s)))
}

/// Normalized two-component state in the pole basis of one sphere family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    north: C64,
    south: C64,
    kind: SphereKind,
}

impl Spinor {
    /// Checked constructor; amplitudes must already be normalized.
    pub fn new(north: C64, south: C64, kind: SphereKind) -> Result<Self> {
        if !is_finite(north) || !is_finite(south) {
            return Err(Error::domain("spinor amplitudes must be finite"));
        }
        let norm2 = north.norm_sqr() + south.norm_sqr();
        if (norm2 - 1.0).abs() > tol::NORM {
            return Err(Error::domain(format!(
                "spinor not normalized: |aN|^2 + |aS|^2 = {norm2}"
            )));
        }
        Ok(Spinor { north, south, kind })
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(north: C64, south: C64, kind: SphereKind) -> Result<Self> {
        if !is_finite(north) || !is_finite(south) {
            return Err(Error::domain("spinor amplitudes must be finite"));
        }
        let norm = north.norm().hypot(south.norm());
        if norm == 0.0 {
            return Err(Error::domain("cannot normalize a zero-norm spinor"));
        }
        Ok(Spinor {
            north: north / norm,
            south: south / norm,
            kind,
        })
    }

    /// Internal constructor for amplitudes that are normalized by construction.
    pub(crate) fn from_parts(north: C64, south: C64, kind: SphereKind) -> Self {
        debug_assert!((north.norm_sqr() + south.norm_sqr() - 1.0).abs() < 1e-9);
        Spinor { north, south, kind }
    }

    pub fn north_pole(kind: SphereKind) -> Self {
        Spinor::from_parts(ONE, ZERO, kind)
    }

    pub fn south_pole(kind: SphereKind) -> Self {
        Spinor::from_parts(ZERO, ONE, kind)
    }

    /// `cos(theta/2) |N> + e^{i phi} sin(theta/2) |S>`.
    pub fn from_coords(c: SphereCoords, kind: SphereKind) -> Self {
        let (s, co) = (0.5 * c.theta).sin_cos();
        Spinor::from_parts(C64::from(co), C64::from_polar(s, c.phi), kind)
    }

    pub fn north(&self) -> C64 {
        self.north
    }

    pub fn south(&self) -> C64 {
        self.south
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.north, self.south]
    }

    pub fn kind(&self) -> SphereKind {
        self.kind
    }

    /// Same amplitudes, relabeled to the other sphere family.
    pub fn with_kind(&self, kind: SphereKind) -> Spinor {
        Spinor { kind, ..*self }
    }

    pub fn coords(&self) -> SphereCoords {
        SphereCoords::from_amplitudes(self.north, self.south)
            .expect("normalized spinor always has coordinates")
    }

    /// Multiply by the global phase `e^{i angle}`.
    pub fn phased(&self, angle: f64) -> Spinor {
        let p = C64::from_polar(1.0, angle);
        Spinor::from_parts(self.north * p, self.south * p, self.kind)
    }

    pub fn max_abs_diff(&self, o: &Spinor) -> f64 {
        (self.north - o.north)
            .norm()
            .max((self.south - o.south).norm())
    }

    /// Euclidean distance between the amplitude pairs.
    pub fn distance(&self, o: &Spinor) -> f64 {
        ((self.north - o.north).norm_sqr() + (self.south - o.south).norm_sqr()).sqrt()
    }

    /// `|<a|b>| = 1` within `tol`, i.e. equal up to a global phase.
    pub fn same_ray(&self, o: &Spinor, tol: f64) -> bool {
        let overlap = self.north.conj() * o.north + self.south.conj() * o.south;
        (overlap.norm() - 1.0).abs() <= tol
    }
}

/// `(aN, aS) -> (theta, phi)` with the global phase stripped.
pub fn sphere_from_spinor(s: &Spinor) -> SphereCoords {
    s.coords()
}

pub fn spinor_from_sphere(c: SphereCoords, kind: SphereKind) -> Spinor {
    Spinor::from_coords(c, kind)
}

/// `(<sigma_x>, <sigma_y>, <sigma_z>)`: the Stokes or Bloch vector of `s`.
pub fn expectation_vector(s: &Spinor) -> Vec3 {
    let coherence = s.north.conj() * s.south;
    Vec3::new(
        2.0 * coherence.re,
        2.0 * coherence.im,
        s.north.norm_sqr() - s.south.norm_sqr(),
    )
}

/// `<a|b>`; both spinors must name the same sphere family.
pub fn inner_product(a: &Spinor, b: &Spinor) -> Result<C64> {
    if a.kind != b.kind {
        return Err(Error::domain(format!(
            "inner product between sphere {} and sphere {}",
            a.kind, b.kind
        )));
    }
    Ok(a.north.conj() * b.north + a.south.conj() * b.south)
}

/// `U |s>`, renormalized only to absorb rounding.
pub fn apply(u: &Operator2, s: &Spinor) -> Result<Spinor> {
    let [n, so] = u.act(s.amplitudes());
    let norm = n.norm().hypot(so.norm());
    if !norm.is_finite() || (1.0 / norm - 1.0).abs() > tol::NORM {
        return Err(Error::domain(format!(
            "operator is not unitary on this state (output norm {norm})"
        )));
    }
    Ok(Spinor::from_parts(n / norm, so / norm, s.kind))
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
