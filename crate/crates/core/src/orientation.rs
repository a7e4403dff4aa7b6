//! Azimuth-dependent orientation fields and their BS-ring summary.
//!
//! Sampling a [`HigherOrderState`] around the real-space azimuth gives one
//! expectation vector per sample. Those vectors trace a circle on the sphere
//! (the BS-ring): the plane perpendicular to the `lambda+` axis through the
//! `phi = 0` orientation, traversed `m - l` times per turn, right-handed about
//! that axis.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::higher_order::{HigherOrderFrame, HigherOrderState};
use crate::sphere::{expectation_vector, SphereCoords, Vec3};
use crate::tol;

/// Uniform azimuth grid `phi_k = 2 pi k / n`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AzimuthGrid {
    n: usize,
}

impl AzimuthGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("azimuth grid needs at least one sample"));
        }
        Ok(AzimuthGrid { n })
    }

    /// Smallest grid that resolves winding `w` with the required margin.
    pub fn minimum_for(winding: i64) -> usize {
        tol::SAMPLES_PER_TURN * (winding.unsigned_abs() as usize).max(1)
    }

    /// Grid of `n` samples, rejected unless `n >= 8 max(1, |w|)`.
    pub fn for_winding(n: usize, winding: i64) -> Result<Self> {
        let min = Self::minimum_for(winding);
        if n < min {
            return Err(Error::domain(format!(
                "{n} azimuth samples cannot resolve winding {winding}; need at least {min}"
            )));
        }
        AzimuthGrid::new(n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn phi(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n as f64
    }

    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.phi(k))
    }
}

impl Default for AzimuthGrid {
    fn default() -> Self {
        AzimuthGrid {
            n: tol::DEFAULT_SAMPLES,
        }
    }
}

/// One expectation vector per azimuth sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationField {
    pub frame: HigherOrderFrame,
    pub coords: SphereCoords,
    pub points: Vec<(f64, Vec3)>,
}

impl OrientationField {
    /// Wraps precomputed samples, enforcing unit vectors and increasing azimuth.
    pub fn from_points(
        frame: HigherOrderFrame,
        coords: SphereCoords,
        points: Vec<(f64, Vec3)>,
    ) -> Result<Self> {
        for (k, (phi, s)) in points.iter().enumerate() {
            if !phi.is_finite() || !s.is_finite() {
                return Err(Error::domain(format!("sample {k} is not finite")));
            }
            if (s.norm() - 1.0).abs() > tol::INPUT_UNIT {
                return Err(Error::domain(format!(
                    "sample {k} has norm {}, expected 1",
                    s.norm()
                )));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain("azimuth samples must be strictly increasing"));
        }
        Ok(OrientationField {
            frame,
            coords,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.points.iter().map(|&(_, s)| s)
    }

    /// Largest componentwise difference to another field sampled on the same grid.
    pub fn max_abs_diff(&self, other: &OrientationField) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.0 - b.0).abs().max(a.1.max_abs_diff(b.1)))
            .fold(0.0, f64::max)
    }
}

/// `points[k] = (phi_k, <sigma>(state_at(phi_k)))`.
pub fn sample_field(state: &HigherOrderState, grid: AzimuthGrid) -> OrientationField {
    let points = grid
        .phis()
        .map(|phi| (phi, expectation_vector(&state.state_at(phi))))
        .collect();
    OrientationField {
        frame: state.frame,
        coords: state.coords,
        points,
    }
}

/// Geometric summary of an orientation field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsRing {
    /// Unit normal of the ring plane.
    pub axis: Vec3,
    /// Signed distance of the plane from the origin along `axis`.
    pub offset: f64,
    pub radius: f64,
    /// Signed turns per azimuthal cycle, right-handed about `axis`.
    pub winding: i64,
    /// Orientation at `phi = 0`.
    pub anchor: Vec3,
    /// Set when the field never leaves the anchor: zero radius or zero winding.
    pub degenerate: bool,
}

impl BsRing {
    /// The same ring described with the opposite normal.
    pub fn flipped(&self) -> BsRing {
        BsRing {
            axis: -self.axis,
            offset: -self.offset,
            winding: -self.winding,
            ..*self
        }
    }

    /// Orientation with non-negative winding (non-negative offset when the
    /// winding is zero).
    pub fn canonical(&self) -> BsRing {
        let flip = self.winding < 0 || (self.winding == 0 && self.offset < 0.0);
        if flip {
            self.flipped()
        } else {
            *self
        }
    }

    /// Largest disagreement with `other`, taken over the two equivalent normal
    /// orientations. A point-ring on either side leaves axis sign and winding
    /// unconstrained, so only the point itself is compared.
    pub fn discrepancy(&self, other: &BsRing) -> RingDiscrepancy {
        if self.degenerate || other.degenerate {
            return RingDiscrepancy {
                geometry: self.anchor.max_abs_diff(other.anchor),
                winding_mismatch: false,
            };
        }
        let direct = ring_distance(self, other);
        let flipped = ring_distance(self, &other.flipped());
        if direct.0 <= flipped.0 {
            RingDiscrepancy {
                geometry: direct.0,
                winding_mismatch: direct.1,
            }
        } else {
            RingDiscrepancy {
                geometry: flipped.0,
                winding_mismatch: flipped.1,
            }
        }
    }
}

fn ring_distance(a: &BsRing, b: &BsRing) -> (f64, bool) {
    let g = a
        .axis
        .max_abs_diff(b.axis)
        .max((a.offset - b.offset).abs())
        .max((a.radius - b.radius).abs())
        .max(a.anchor.max_abs_diff(b.anchor));
    (g, a.winding != b.winding)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDiscrepancy {
    /// Max absolute difference over axis, offset, radius and anchor.
    pub geometry: f64,
    pub winding_mismatch: bool,
}

/// Closed-form ring: `lambda+` axis, `phi = 0` anchor, winding `m - l`.
pub fn ring_analytic(state: &HigherOrderState) -> BsRing {
    let axis = state.frame.axis();
    let anchor = expectation_vector(&state.state_at(0.0));
    let offset = axis.dot(anchor).clamp(-1.0, 1.0);
    // Distance from the anchor to the plane centre, which stays accurate
    // near the poles where sqrt(1 - offset^2) loses digits.
    let radius = (anchor - axis.scale(offset)).norm().min(1.0);
    BsRing {
        axis,
        offset,
        radius,
        winding: state.frame.charges.winding(),
        anchor,
        degenerate: radius < tol::RING_DEGENERATE || state.frame.charges.winding() == 0,
    }
}

/// Ring recovered from samples alone: least-squares plane fit plus an
/// unwrapped in-plane angle count.
///
/// Fails with [`Error::Inconsistency`] when consecutive samples are more
/// than a quarter turn apart in the ring plane or the unwrapped angle is not
/// a whole number of turns.
///
/// The fitted normal is oriented along the traversal, so the winding comes
/// out non-negative.
pub fn ring_from_field(field: &OrientationField) -> Result<BsRing> {
    let n = field.points.len();
    let needed = AzimuthGrid::minimum_for(field.frame.charges.winding());
    if n < needed {
        return Err(Error::domain(format!(
            "field has {n} samples; ring extraction needs at least {needed}"
        )));
    }
    let pts: Vec<Vector3<f64>> = field
        .vectors()
        .map(|v| Vector3::new(v.x, v.y, v.z))
        .collect();
    let anchor = field.points[0].1;
    let centroid = pts.iter().sum::<Vector3<f64>>() / n as f64;

    let spread = pts
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max);
    if spread < tol::RING_DEGENERATE {
        let axis = to_vec3(centroid).normalized().unwrap_or(anchor);
        return Ok(BsRing {
            axis,
            offset: axis.dot(anchor),
            radius: 0.0,
            winding: 0,
            anchor,
            degenerate: true,
        });
    }

    let mut scatter = Matrix3::<f64>::zeros();
    for p in &pts {
        let d = p - centroid;
        scatter += d * d.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let smallest = eig.eigenvalues.imin();
    let mut normal: Vector3<f64> = eig.eigenvectors.column(smallest).into_owned();
    normal.normalize_mut();

    // Orient the normal with the circulation of the closed sample polygon.
    let circulation = (0..n).fold(Vector3::zeros(), |acc: Vector3<f64>, k| {
        acc + pts[k].cross(&pts[(k + 1) % n])
    });
    if circulation.dot(&normal) < 0.0 {
        normal = -normal;
    }
    let axis = to_vec3(normal);
    let offset = normal.dot(&centroid);
    let centre = normal * offset;
    let radius = pts.iter().map(|p| (p - centre).norm()).sum::<f64>() / n as f64;

    // In-plane basis and unwrapped angle, closing the loop back to sample 0.
    let e1 = (pts[0] - centre).normalize();
    let e2 = normal.cross(&e1);
    let angles: Vec<f64> = pts
        .iter()
        .map(|p| {
            let d = p - centre;
            d.dot(&e2).atan2(d.dot(&e1))
        })
        .collect();
    let steps: Vec<f64> = (0..n)
        .map(|k| wrap_pi(angles[(k + 1) % n] - angles[k]))
        .collect();
    // At >= 8 samples per turn no in-plane step exceeds pi/4.
    if let Some(k) = steps.iter().position(|d| d.abs() > 0.5 * PI) {
        return Err(Error::Inconsistency(format!(
            "in-plane step {k} spans {:.3} rad; the field is undersampled",
            steps[k].abs()
        )));
    }
    let turns = steps.iter().sum::<f64>() / TAU;
    let winding = turns.round();
    if (turns - winding).abs() > tol::WINDING_INTEGRALITY {
        return Err(Error::Inconsistency(format!(
            "unwrapped winding {turns} is not an integer; the field is undersampled"
        )));
    }

    Ok(BsRing {
        axis,
        offset,
        radius,
        winding: winding as i64,
        anchor,
        degenerate: false,
    })
}

fn wrap_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

fn to_vec3(v: Vector3<f64>) -> Vec3 {
    Vec3::new(v.x, v.y, v.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
    Linear,
}

/// Polarization ellipse of a Stokes vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationEllipse {
    /// Major-axis angle in `[0, pi)`.
    pub orientation: f64,
    /// In `[-pi/4, pi/4]`; `tan` of it is the signed axis ratio.
    pub ellipticity: f64,
    pub handedness: Handedness,
}

pub fn stokes_to_ellipse(s: Vec3) -> PolarizationEllipse {
    let mut orientation = (0.5 * s.y.atan2(s.x)).rem_euclid(PI);
    if orientation >= PI {
        orientation = 0.0;
    }
    let ellipticity = 0.5 * s.z.clamp(-1.0, 1.0).asin();
    let handedness = if s.z > tol::LINEAR_POLARIZATION {
        Handedness::Right
    } else if s.z < -tol::LINEAR_POLARIZATION {
        Handedness::Left
    } else {
        Handedness::Linear
    };
    PolarizationEllipse {
        orientation,
        ellipticity,
        handedness,
    }
}
