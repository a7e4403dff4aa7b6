//! Photon-to-spin coherent transfer through a V-shaped three-level system.
//!
//! With the light-hole degeneracy lifted by an in-plane field, absorption
//! into the `|-x>_LH` hole state maps `alpha |R> + beta |L>` onto
//! `(alpha |up> + beta |down>) (x) |-x>_LH`. The product is unentangled, so the
//! hole is kept as metadata and the electron inherits the amplitudes as-is.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::higher_order::HigherOrderState;
use crate::sphere::{SphereKind, Spinor, C64};

/// Light-hole eigenstates `(|up> +/- |down>) / sqrt 2` under an in-plane field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhBasis {
    pub plus_x: Spinor,
    pub minus_x: Spinor,
}

impl LhBasis {
    pub fn new() -> Self {
        let h = C64::from(FRAC_1_SQRT_2);
        LhBasis {
            plus_x: Spinor::from_parts(h, h, SphereKind::Bloch),
            minus_x: Spinor::from_parts(h, -h, SphereKind::Bloch),
        }
    }
}

impl Default for LhBasis {
    fn default() -> Self {
        LhBasis::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Electron {
    Spinor(Spinor),
    HigherOrder(HigherOrderState),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferResult {
    pub electron: Electron,
    /// Hole state the transition leaves behind (`|-x>_LH`).
    pub hole: Spinor,
    pub fidelity: f64,
}

/// `alpha |R> + beta |L>  ->  alpha |up> + beta |down>`.
pub fn transfer_state(photon: &Spinor) -> Result<TransferResult> {
    require_photon(photon.kind())?;
    Ok(TransferResult {
        electron: Electron::Spinor(photon.with_kind(SphereKind::Bloch)),
        hole: LhBasis::new().minus_x,
        fidelity: 1.0,
    })
}

/// Higher-order version: frame, charges and coordinates carry over unchanged.
pub fn transfer_higher_order(photon: &HigherOrderState) -> Result<TransferResult> {
    require_photon(photon.kind())?;
    Ok(TransferResult {
        electron: Electron::HigherOrder(photon.with_kind(SphereKind::Bloch)),
        hole: LhBasis::new().minus_x,
        fidelity: 1.0,
    })
}

fn require_photon(kind: SphereKind) -> Result<()> {
    match kind {
        SphereKind::Poincare => Ok(()),
        SphereKind::Bloch => Err(Error::domain(
            "transfer input must be a polarization state (sphere P)",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::higher_order::{BasisPair, Charges, HigherOrderFrame};
    use crate::orientation::{sample_field, AzimuthGrid};
    use crate::sphere::{expectation_vector, inner_product, SphereCoords};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    const P: SphereKind = SphereKind::Poincare;

    fn photon_state(tl: f64, pl: f64, l: i64, m: i64, t: f64, p: f64) -> HigherOrderState {
        HigherOrderState::new(
            HigherOrderFrame::new(
                BasisPair::new(SphereCoords::new(tl, pl).unwrap(), P),
                Charges::new(l, m),
            ),
            SphereCoords::new(t, p).unwrap(),
        )
    }

    fn electron_spinor(r: &TransferResult) -> Spinor {
        match r.electron {
            Electron::Spinor(s) => s,
            Electron::HigherOrder(_) => panic!("expected a plain spinor"),
        }
    }

    fn electron_state(r: &TransferResult) -> HigherOrderState {
        match r.electron {
            Electron::HigherOrder(s) => s,
            Electron::Spinor(_) => panic!("expected a higher-order state"),
        }
    }

    #[test]
    fn lh_basis_orthonormal() {
        let b = LhBasis::new();
        assert!(inner_product(&b.plus_x, &b.minus_x).unwrap().norm() < 1e-16);
        assert!((inner_product(&b.minus_x, &b.minus_x).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn right_circular_goes_to_spin_up() {
        let r = transfer_state(&Spinor::north_pole(P)).unwrap();
        assert_eq!(electron_spinor(&r), Spinor::north_pole(SphereKind::Bloch));
        assert_eq!(r.hole, LhBasis::new().minus_x);
        assert_eq!(r.fidelity, 1.0);
    }

    #[test]
    fn linear_superposition_carries_over() {
        let h = FRAC_1_SQRT_2;
        let p = Spinor::new(C64::from(h), C64::from(h), P).unwrap();
        let e = electron_spinor(&transfer_state(&p).unwrap());
        assert_eq!(e.amplitudes(), p.amplitudes());
        assert_eq!(e.kind(), SphereKind::Bloch);
    }

    #[test]
    fn rejects_spin_input() {
        let s = Spinor::north_pole(SphereKind::Bloch);
        assert!(transfer_state(&s).is_err());
        let hs = photon_state(1.0, 0.0, 1, 1, 0.0, 0.0).with_kind(SphereKind::Bloch);
        assert!(transfer_higher_order(&hs).is_err());
    }

    #[test]
    fn zero_charge_matches_plain_transfer() {
        let s = photon_state(0.7, 1.0, 0, 0, 1.3, 2.0);
        let e = electron_state(&transfer_higher_order(&s).unwrap());
        for phi in [0.0, 1.0, 3.0] {
            let plain = electron_spinor(&transfer_state(&s.state_at(phi)).unwrap());
            assert_eq!(e.state_at(phi), plain);
        }
    }

    #[test]
    fn quadrupole_states_transfer() {
        let grid = AzimuthGrid::default();
        for (t, p) in [(0.0, 0.0), (PI, 0.0), (PI / 2.0, 0.0), (PI / 2.0, PI)] {
            let s = photon_state(PI / 2.0, 0.0, -1, 1, t, p);
            let e = electron_state(&transfer_higher_order(&s).unwrap());
            assert_eq!(sample_field(&s, grid).points, sample_field(&e, grid).points);
            assert_eq!(e.coefficients(), s.coefficients());
        }
    }

    proptest! {
        #[test]
        fn amplitudes_and_fields_identical(
            tl in 0.0..=PI, pl in 0.0..TAU, l in -5i64..=5, m in -5i64..=5, t in 0.0..=PI, p in 0.0..TAU
        ) {
            let s = photon_state(tl, pl, l, m, t, p);
            let e = electron_state(&transfer_higher_order(&s).unwrap());
            prop_assert_eq!(e.frame.basis.coords, s.frame.basis.coords);
            prop_assert_eq!(e.frame.charges, s.frame.charges);
            prop_assert_eq!(e.coords, s.coords);
            let sp = s.state_at(0.3);
            let plain = electron_spinor(&transfer_state(&sp).unwrap());
            prop_assert_eq!(expectation_vector(&plain), expectation_vector(&sp));
        }
    }
}
