//! Deterministic state collapse: volume bookkeeping for mixed states, the
//! scale cut, the key-cylinder braid walk, and the independent zeta-stretch
//! path. The two collapse paths compute the same outcome by construction on
//! different machinery, which is the module's central invariant.

use crate::numtheory::{self, trial_factorise};
use crate::omcore::{OmConstants, OmScale};
use crate::zeta::{self, ZetaError};
use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

/// Certification tolerance for the zeta-stretch round trip, scaled by
/// max(1, k*/2) so the k* = 2 case certifies to exactly 1e-10.
pub const STRETCH_TOLERANCE: f64 = 1e-10;

/// Cutoff Q for the reported prime-power partial sum Σ_{q ≤ Q} q^{−t*}.
pub const PRIME_POWER_CUTOFF: u64 = 100_000;

/// Errors from collapse construction and the zeta-stretch path.
#[derive(Debug, Error)]
pub enum CollapseError {
    /// Mixed-state volumes use a logarithm with lower cutoff 1.
    #[error("mixed state requires l1 >= 1 (logarithmic volume cutoff)")]
    ZeroScale,
    /// Scale cuts must stay inside [1, l1].
    #[error("scale cut {cut} outside [1, {l1}]")]
    CutOutOfRange { cut: u64, l1: u64 },
    /// Propagated zeta-machinery failure (inverse out of range, etc.).
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    /// The ζ(t*) ≈ k* round trip missed its tolerance.
    #[error("zeta-stretch certification failed: residual {residual:e} exceeds {tolerance:e}")]
    Certification { residual: f64, tolerance: f64 },
}

/// An OM mixed state: a scale plus its two volume sectors and the
/// exponentiated state value exp(vol_R + i·vol_H).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmMixedState {
    /// The generating scale.
    pub scale: OmScale,
    /// Radial (petal-sector) volume α̃·ln l₁, from the α̃/u curvature
    /// integrated on [1, l₁].
    pub vol_r: f64,
    /// Loop-sector volume α̃·k* under the per-loop unit-volume convention
    /// (k* active loops).
    pub vol_h: f64,
    /// State value exp(vol_R + i·vol_H).
    pub value: Complex64,
}

/// Build the mixed state for a scale. Requires l₁ ≥ 1: the radial volume
/// integrates the α̃/u curvature from the one-cell cutoff at u = 1, so
/// l₁ = 0 sits on the logarithmic singularity and is rejected.
pub fn build_mixed_state(
    scale: OmScale,
    constants: &OmConstants,
) -> Result<OmMixedState, CollapseError> {
    if scale.l1 == 0 {
        return Err(CollapseError::ZeroScale);
    }
    let alpha = constants.alpha_tilde;
    let vol_r = alpha * (scale.l1 as f64).ln();
    let vol_h = alpha * scale.index() as f64;
    Ok(OmMixedState {
        scale,
        vol_r,
        vol_h,
        value: Complex64::from_polar(vol_r.exp(), vol_h),
    })
}

/// Truncate a state at `l1_cut`, zeroing the tail volumes: the result is the
/// mixed state of the cut scale (the tail's compensation is enforced as the
/// definition of the cut). Requires 1 ≤ l1_cut ≤ l₁.
pub fn scale_cut(
    state: &OmMixedState,
    l1_cut: u64,
    constants: &OmConstants,
) -> Result<OmMixedState, CollapseError> {
    if l1_cut == 0 || l1_cut > state.scale.l1 {
        return Err(CollapseError::CutOutOfRange {
            cut: l1_cut,
            l1: state.scale.l1,
        });
    }
    let scale = OmScale {
        l1: l1_cut,
        n: state.scale.n,
    };
    build_mixed_state(scale, constants)
}

/// One level of the key cylinder: its crossing profile is the prime
/// factorisation of the level index (one crossing group per prime, with the
/// exponent as multiplicity), and its net rotation follows the crossing
/// rules — zero whenever any group has an even-complete pairing (exponent
/// ≥ 2), otherwise (−1)^(number of groups). By construction this equals
/// μ(index), which the tests verify against the arithmetic tables; the
/// builder itself never consults them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidLevel {
    /// Level index j ≥ 1.
    pub index: u64,
    /// (prime, exponent) crossing groups, ascending by prime.
    pub crossing_profile: Vec<(u64, u32)>,
    /// Net rotation in {−1, 0, +1}.
    pub rotation: i8,
}

impl BraidLevel {
    /// Build level `index` (≥ 1) from its factorisation.
    pub fn new(index: u64) -> Self {
        assert!(index >= 1, "braid level index must be >= 1");
        let crossing_profile = trial_factorise(index);
        let rotation = if crossing_profile.iter().any(|&(_, e)| e >= 2) {
            0
        } else if crossing_profile.len().is_multiple_of(2) {
            1
        } else {
            -1
        };
        BraidLevel {
            index,
            crossing_profile,
            rotation,
        }
    }
}

/// Which algorithm produced a collapse outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapsePath {
    /// Level-by-level braid walk.
    KeyCylinder,
    /// Zeta-inverse stretch of the radial coordinate.
    ZetaStretch,
}

impl CollapsePath {
    /// Stable textual name (used by the CLI output contract).
    pub fn as_str(self) -> &'static str {
        match self {
            CollapsePath::KeyCylinder => "key-cylinder",
            CollapsePath::ZetaStretch => "zeta-stretch",
        }
    }
}

/// The collapsed state: outcome index, per-level rotations, their sum
/// (the Mertens value at k*), and the final phase exp(i·α̃·k*).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOutcome {
    /// Outcome index k* = collapse_index(l₁, n).
    pub k_star: u64,
    /// Per-level rotations for j = 1..k* (empty on the stretch path, which
    /// walks no levels).
    pub rotation_trace: Vec<i8>,
    /// Σ of rotations = Mertens M(k*).
    pub rotation_sum: i64,
    /// exp(i·α̃·k*); unit modulus.
    pub phase: Complex64,
    /// Which path produced this outcome.
    pub path: CollapsePath,
}

fn collapse_phase(k_star: u64, constants: &OmConstants) -> Complex64 {
    Complex64::from_polar(1.0, constants.alpha_tilde * k_star as f64)
}

fn rotation_sum_to(k_star: u64) -> i64 {
    (1..=k_star)
        .map(|j| BraidLevel::new(j).rotation as i64)
        .sum()
}

/// Key-cylinder collapse: walk levels j = 1..k*, accumulating each level's
/// rotation, and phase the outcome by exp(i·α̃·k*). Total for every scale.
pub fn key_cylinder_collapse(scale: OmScale, constants: &OmConstants) -> CollapseOutcome {
    let k_star = scale.index();
    let mut rotation_trace = Vec::with_capacity(k_star.min(1 << 20) as usize);
    let mut rotation_sum = 0i64;
    for j in 1..=k_star {
        let level = BraidLevel::new(j);
        rotation_sum += level.rotation as i64;
        rotation_trace.push(level.rotation);
    }
    CollapseOutcome {
        k_star,
        rotation_trace,
        rotation_sum,
        phase: collapse_phase(k_star, constants),
        path: CollapsePath::KeyCylinder,
    }
}

/// Certificate of the zeta-stretch round trip and the reported prime-power
/// partial sum (reported, not asserted: the sum over prime powers is not ζ,
/// so only the ζ⁻¹/ζ round trip is certified).
#[derive(Debug, Clone, PartialEq)]
pub struct StretchCertificate {
    /// The outcome index the stretch targeted.
    pub k_star: u64,
    /// True when the analytic path ran (k* ≥ 2); false for the k* ∈ {0, 1}
    /// convention, where ζ⁻¹ is undefined and k* is returned directly.
    pub analytic: bool,
    /// t* = ζ⁻¹(k*) on the analytic path.
    pub t_star: Option<f64>,
    /// |ζ(t*) − k*| on the analytic path (0 on the convention path).
    pub zeta_residual: f64,
    /// Σ_{q ≤ Q, q a prime power} q^{−t*} (0 on the convention path).
    pub prime_power_partial: f64,
    /// Crude tail bound Q^{1−t*}/(t*−1) for the omitted prime powers.
    pub prime_power_tail: f64,
    /// The cutoff Q used for the partial sum.
    pub q_max: u64,
}

/// Prime powers q = p^m ≤ [`PRIME_POWER_CUTOFF`], computed once.
fn prime_powers() -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let table =
            numtheory::build_table(PRIME_POWER_CUTOFF).expect("cutoff within table limits");
        (2..=PRIME_POWER_CUTOFF)
            .filter(|&q| table.von_mangoldt(q).expect("in range") != 0.0)
            .collect()
    })
}

/// Zeta-stretch collapse: find the stretch parameter t* with ζ(t*) = k*,
/// certify the round trip, and report the truncated prime-power sum. The
/// outcome must (and does) agree with the key-cylinder path in k* and phase;
/// the rotation sum is carried by the same braid bookkeeping while the trace
/// stays empty because no levels are walked.
pub fn zeta_stretch_collapse(
    scale: OmScale,
    constants: &OmConstants,
) -> Result<(CollapseOutcome, StretchCertificate), CollapseError> {
    let k_star = scale.index();
    let certificate = if k_star >= 2 {
        let t_star = zeta::zeta_inverse(k_star as f64, 1e-12)?;
        let zeta_back = zeta::zeta_real(t_star, 1e-13)?;
        let residual = (zeta_back - k_star as f64).abs();
        let tolerance = STRETCH_TOLERANCE * (k_star as f64 / 2.0).max(1.0);
        if residual > tolerance {
            return Err(CollapseError::Certification {
                residual,
                tolerance,
            });
        }
        let partial: f64 = prime_powers()
            .iter()
            .map(|&q| (q as f64).powf(-t_star))
            .sum();
        let tail = (PRIME_POWER_CUTOFF as f64).powf(1.0 - t_star) / (t_star - 1.0);
        StretchCertificate {
            k_star,
            analytic: true,
            t_star: Some(t_star),
            zeta_residual: residual,
            prime_power_partial: partial,
            prime_power_tail: tail,
            q_max: PRIME_POWER_CUTOFF,
        }
    } else {
        StretchCertificate {
            k_star,
            analytic: false,
            t_star: None,
            zeta_residual: 0.0,
            prime_power_partial: 0.0,
            prime_power_tail: 0.0,
            q_max: PRIME_POWER_CUTOFF,
        }
    };
    let outcome = CollapseOutcome {
        k_star,
        rotation_trace: Vec::new(),
        rotation_sum: rotation_sum_to(k_star),
        phase: collapse_phase(k_star, constants),
        path: CollapsePath::ZetaStretch,
    };
    Ok((outcome, certificate))
}
