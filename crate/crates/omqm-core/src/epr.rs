//! Two-particle entangled measurement: deterministic correlated collapse
//! with opposite key orientations, and the genus-2 entanglement-volume
//! ledger. The genus-2 form value is an external input — the ledger tests a
//! bookkeeping identity, not a genus-2 evaluator.

use crate::omcore::collapse_index;
use num_complex::Complex64;
use thiserror::Error;

/// Errors from EPR setup validation and the volume ledger.
#[derive(Debug, Error)]
pub enum EprError {
    /// The entanglement box cannot exceed either particle scale.
    #[error("entanglement box b = {b} exceeds a particle scale (min l1 = {min_l1})")]
    BoxTooLarge { b: u64, min_l1: u64 },
    /// The outcome space must have at least one outcome.
    #[error("outcome space size n must be >= 1")]
    ZeroModulus,
    /// Crossing parity is a sign.
    #[error("crossing parity must be +1 or -1, got {0}")]
    BadParity(i8),
    /// The genus-2 form value must be nonzero for the logarithm.
    #[error("genus-2 form value is zero; entanglement volume undefined")]
    ZeroVolumeForm,
    /// Volumes and the form value must be finite.
    #[error("non-finite volume input: {0}")]
    NonFinite(String),
}

/// A two-particle entangled measurement configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EprSetup {
    /// Particle A scale.
    pub l1_a: u64,
    /// Particle B scale.
    pub l1_b: u64,
    /// Entanglement-box scale, b ≤ min(l1_a, l1_b).
    pub b: u64,
    /// Outcome-space size, n ≥ 1.
    pub n: u64,
    /// Sign of the entanglement-box crossing (orientation of particle A).
    pub crossing_parity: i8,
}

impl EprSetup {
    /// Construct a validated setup.
    pub fn new(
        l1_a: u64,
        l1_b: u64,
        b: u64,
        n: u64,
        crossing_parity: i8,
    ) -> Result<Self, EprError> {
        if n == 0 {
            return Err(EprError::ZeroModulus);
        }
        if !matches!(crossing_parity, 1 | -1) {
            return Err(EprError::BadParity(crossing_parity));
        }
        let min_l1 = l1_a.min(l1_b);
        if b > min_l1 {
            return Err(EprError::BoxTooLarge { b, min_l1 });
        }
        Ok(EprSetup {
            l1_a,
            l1_b,
            b,
            n,
            crossing_parity,
        })
    }
}

/// The correlated outcome of an entangled measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprOutcome {
    /// Outcome index of particle A.
    pub k_a: u64,
    /// Outcome index of particle B.
    pub k_b: u64,
    /// Key orientation of particle A (= crossing parity).
    pub orient_a: i8,
    /// Key orientation of particle B (= −crossing parity; the keys rotate in
    /// exactly opposite directions).
    pub orient_b: i8,
    /// Signed half-integer spin, defined only for n = 2: orient·(k − ½).
    pub spin_a: Option<f64>,
    /// Particle B spin for n = 2.
    pub spin_b: Option<f64>,
    /// True when l1_a = l1_b; asymmetric runs are flagged because the
    /// two-scale case has no settled interpretation.
    pub symmetric: bool,
}

fn spin(k: u64, orient: i8, n: u64) -> Option<f64> {
    (n == 2).then_some(orient as f64 * (k as f64 - 0.5))
}

/// Collapse both particles: k_x = collapse_index(l1_x − b, n), orientations
/// opposite by construction (orient_a·orient_b = −1 always).
pub fn epr_collapse(setup: &EprSetup) -> Result<EprOutcome, EprError> {
    // Re-validate: the fields are public and may have been edited.
    let setup = EprSetup::new(
        setup.l1_a,
        setup.l1_b,
        setup.b,
        setup.n,
        setup.crossing_parity,
    )?;
    let k_a = collapse_index(setup.l1_a - setup.b, setup.n);
    let k_b = collapse_index(setup.l1_b - setup.b, setup.n);
    let orient_a = setup.crossing_parity;
    let orient_b = -setup.crossing_parity;
    Ok(EprOutcome {
        k_a,
        k_b,
        orient_a,
        orient_b,
        spin_a: spin(k_a, orient_a, setup.n),
        spin_b: spin(k_b, orient_b, setup.n),
        symmetric: setup.l1_a == setup.l1_b,
    })
}

/// The genus-2 volume ledger: component volumes, the externally supplied
/// form value, and the entanglement volume that balances them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeLedger {
    /// Petal volume of particle A.
    pub vol_s1: Complex64,
    /// Petal volume of particle B.
    pub vol_s2: Complex64,
    /// Loop volume of particle A.
    pub vol_q1: Complex64,
    /// Loop volume of particle B.
    pub vol_q2: Complex64,
    /// Externally supplied genus-2 form value (nonzero).
    pub phi_genus2: Complex64,
    /// Entanglement volume ln(φ) − Σ components.
    pub vol_e: Complex64,
    /// Logarithm branch used for vol_e.
    pub branch: LogBranch,
}

/// Branch of the complex logarithm used in the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBranch {
    /// Im(ln z) ∈ (−π, π].
    Principal,
}

impl VolumeLedger {
    /// Assemble the ledger: vol_e = ln(phi_genus2) − (vol_s1 + vol_s2 +
    /// vol_q1 + vol_q2) on the principal branch.
    pub fn new(
        vol_s1: Complex64,
        vol_s2: Complex64,
        vol_q1: Complex64,
        vol_q2: Complex64,
        phi_genus2: Complex64,
    ) -> Result<Self, EprError> {
        for (name, v) in [
            ("vol_s1", vol_s1),
            ("vol_s2", vol_s2),
            ("vol_q1", vol_q1),
            ("vol_q2", vol_q2),
            ("phi_genus2", phi_genus2),
        ] {
            if !v.is_finite() {
                return Err(EprError::NonFinite(name.to_string()));
            }
        }
        if phi_genus2.norm() == 0.0 {
            return Err(EprError::ZeroVolumeForm);
        }
        let vol_e = phi_genus2.ln() - (vol_s1 + vol_s2 + vol_q1 + vol_q2);
        Ok(VolumeLedger {
            vol_s1,
            vol_s2,
            vol_q1,
            vol_q2,
            phi_genus2,
            vol_e,
            branch: LogBranch::Principal,
        })
    }

    /// |exp(vol_e)·exp(vol_s1)·exp(vol_s2)·exp(vol_q1)·exp(vol_q2) − φ|:
    /// the inversion defect of the ledger identity.
    pub fn inversion_residual(&self) -> f64 {
        let product = self.vol_e.exp()
            * self.vol_s1.exp()
            * self.vol_s2.exp()
            * self.vol_q1.exp()
            * self.vol_q2.exp();
        (product - self.phi_genus2).norm()
    }
}

/// Convenience form of the ledger balance: the entanglement volume alone.
pub fn entanglement_volume(
    vol_s1: Complex64,
    vol_s2: Complex64,
    vol_q1: Complex64,
    vol_q2: Complex64,
    phi_genus2: Complex64,
) -> Result<Complex64, EprError> {
    Ok(VolumeLedger::new(vol_s1, vol_s2, vol_q1, vol_q2, phi_genus2)?.vol_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::{build_mixed_state, key_cylinder_collapse};
    use crate::omcore::{OmConstants, OmScale};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn setup_validation() {
        assert!(EprSetup::new(100, 100, 10, 2, 1).is_ok());
        assert!(matches!(
            EprSetup::new(100, 5, 10, 2, 1),
            Err(EprError::BoxTooLarge { b: 10, min_l1: 5 })
        ));
        assert!(matches!(
            EprSetup::new(100, 100, 10, 0, 1),
            Err(EprError::ZeroModulus)
        ));
        assert!(matches!(
            EprSetup::new(100, 100, 10, 2, 0),
            Err(EprError::BadParity(0))
        ));
        assert!(EprSetup::new(100, 100, 10, 2, -1).is_ok());
    }

    #[test]
    fn worked_example_matches_rule() {
        // l1 = 100, b = 10: 90 mod 4 = 2, floor(2/2) = 1 for both particles.
        let setup = EprSetup::new(100, 100, 10, 2, 1).unwrap();
        let out = epr_collapse(&setup).unwrap();
        assert_eq!(out.k_a, 1);
        assert_eq!(out.k_b, 1);
        assert_eq!(out.orient_a, 1);
        assert_eq!(out.orient_b, -1);
        assert_eq!(out.spin_a, Some(0.5));
        assert_eq!(out.spin_b, Some(-0.5));
        assert!(out.symmetric);
    }

    #[test]
    fn no_box_reduces_to_independent_collapse() {
        let setup = EprSetup::new(27, 31, 0, 5, -1).unwrap();
        let out = epr_collapse(&setup).unwrap();
        assert_eq!(out.k_a, crate::omcore::collapse_index(27, 5));
        assert_eq!(out.k_b, crate::omcore::collapse_index(31, 5));
        assert!(!out.symmetric);
        assert_eq!(out.spin_a, None); // spins only defined for n = 2
    }

    #[test]
    fn shift_property_matches_collapse_module() {
        // The boxed collapse equals single-particle collapse at l1 - b.
        let constants = OmConstants::default();
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..200 {
            let b = rng.random_range(0..=1000u64);
            let l1 = rng.random_range(b..=1_000_000u64);
            let n = rng.random_range(1..=64u64);
            let setup = EprSetup::new(l1, l1, b, n, 1).unwrap();
            let out = epr_collapse(&setup).unwrap();
            let single = key_cylinder_collapse(OmScale::new(l1 - b, n).unwrap(), &constants);
            assert_eq!(out.k_a, single.k_star, "l1 = {l1}, b = {b}, n = {n}");
            assert_eq!(out.k_b, single.k_star);
        }
    }

    #[test]
    fn orientations_anti_correlate_and_spins_are_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..500 {
            let b = rng.random_range(0..=100u64);
            let l1a = rng.random_range(b..=100_000u64);
            let l1b = rng.random_range(b..=100_000u64);
            let parity = if rng.random::<bool>() { 1 } else { -1 };
            let setup = EprSetup::new(l1a, l1b, b, 2, parity).unwrap();
            let out = epr_collapse(&setup).unwrap();
            assert_eq!(out.orient_a as i32 * out.orient_b as i32, -1);
            assert_eq!(out.spin_a.unwrap().abs(), 0.5);
            assert_eq!(out.spin_b.unwrap().abs(), 0.5);
            if l1a == l1b {
                assert_eq!(out.k_a, out.k_b);
            }
        }
    }

    #[test]
    fn symmetric_setups_share_the_outcome() {
        for l1 in [0u64, 1, 7, 26, 999_999] {
            for n in [1u64, 2, 7, 64] {
                let setup = EprSetup::new(l1, l1, 0, n, 1).unwrap();
                let out = epr_collapse(&setup).unwrap();
                assert_eq!(out.k_a, out.k_b);
                assert!(out.symmetric);
            }
        }
    }

    #[test]
    fn ledger_recovers_trivial_entanglement() {
        let s1 = Complex64::new(0.3, 0.0);
        let s2 = Complex64::new(0.4, 0.0);
        let q1 = Complex64::new(0.0, 0.2);
        let q2 = Complex64::new(0.0, 0.1);
        let phi = (s1 + s2 + q1 + q2).exp();
        let ledger = VolumeLedger::new(s1, s2, q1, q2, phi).unwrap();
        assert!(ledger.vol_e.norm() < 1e-12, "vol_e = {}", ledger.vol_e);
        assert!(ledger.inversion_residual() < 1e-10);
        assert_eq!(ledger.branch, LogBranch::Principal);
    }

    #[test]
    fn ledger_inversion_for_random_complex_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..100 {
            let mut v = || Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let (s1, s2, q1, q2, phi) = (v(), v(), v(), v(), v());
            if phi.norm() < 1e-3 {
                continue;
            }
            let ledger = VolumeLedger::new(s1, s2, q1, q2, phi).unwrap();
            assert!(
                ledger.inversion_residual() < 1e-10,
                "residual = {:e}",
                ledger.inversion_residual()
            );
            assert_eq!(
                entanglement_volume(s1, s2, q1, q2, phi).unwrap(),
                ledger.vol_e
            );
        }
    }

    #[test]
    fn ledger_rejects_degenerate_inputs() {
        let z = Complex64::new(0.1, 0.1);
        assert!(matches!(
            VolumeLedger::new(z, z, z, z, Complex64::new(0.0, 0.0)),
            Err(EprError::ZeroVolumeForm)
        ));
        let nan = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            VolumeLedger::new(nan, z, z, z, Complex64::new(1.0, 0.0)),
            Err(EprError::NonFinite(_))
        ));
        assert!(matches!(
            VolumeLedger::new(z, z, z, z, Complex64::new(f64::INFINITY, 0.0)),
            Err(EprError::NonFinite(_))
        ));
    }

    #[test]
    fn ledger_from_mixed_state_volumes() {
        // Compose with the collapse module: both particles at l1 = 100 with
        // box b = 10 contribute the volumes of the effective scale 90.
        let constants = OmConstants::default();
        let state = build_mixed_state(OmScale::new(90, 2).unwrap(), &constants).unwrap();
        let s = Complex64::new(state.vol_r, 0.0);
        let q = Complex64::new(0.0, state.vol_h);
        // Choose a form value with a known excess volume.
        let excess = Complex64::new(0.25, 0.1);
        let phi = (s + s + q + q + excess).exp();
        let ledger = VolumeLedger::new(s, s, q, q, phi).unwrap();
        assert!((ledger.vol_e - excess).norm() < 1e-12);
        // |phi| is astronomically large here (the petal volumes are ~90), so
        // the inversion defect is only meaningful relative to |phi|.
        assert!(ledger.inversion_residual() / phi.norm() < 1e-12);
    }
}
