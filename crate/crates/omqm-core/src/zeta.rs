//! Riemann zeta machinery: Euler–Maclaurin evaluation on the half-plane
//! Re s > 1 and on the critical line, the real inverse ζ⁻¹, the truncated
//! −ζ′/ζ Dirichlet series, Hardy-function zero tables with a text cache, and
//! the prime-indexed energy form built from the zeros.

use crate::numtheory::{self, ArithmeticTable, TableError};
use crate::omcore::OmConstants;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use thiserror::Error;

/// Errors from zeta evaluation and zero-table handling.
#[derive(Debug, Error)]
pub enum ZetaError {
    /// Argument outside the operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// The adaptive Euler–Maclaurin loop could not certify the tolerance.
    #[error("requested tolerance {requested:e} not certified (best bound {achieved:e})")]
    PrecisionNotReached {
        /// Tolerance asked for.
        requested: f64,
        /// Best certified truncation bound achieved.
        achieved: f64,
    },
    /// ζ⁻¹ target outside the range reachable on (1, ∞).
    #[error("zeta inverse target {0} out of reachable range")]
    InverseOutOfRange(f64),
    /// Argument must be a prime power.
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    /// Zero index beyond the computed table.
    #[error("zero index {index} out of range (table holds {available})")]
    ZeroIndex {
        /// Requested 1-based index.
        index: usize,
        /// Zeros available in the table.
        available: usize,
    },
    /// Underlying number-theory table failure.
    #[error(transparent)]
    Table(#[from] TableError),
    /// I/O failure on the zero-table text format.
    #[error("zero table i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Structurally invalid zero-table file.
    #[error("zero table format: {0}")]
    Format(String),
}

/// Even-indexed Bernoulli numbers B₂, B₄, …, B₃₄ as exact-ratio evaluations.
const BERNOULLI_EVEN: [f64; 17] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
];

/// A value together with a certified truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    /// The computed value.
    pub value: Complex64,
    /// Bound on the magnitude of the truncation error.
    pub bound: f64,
}

/// Euler–Maclaurin evaluation of ζ(s) for Re s > 0 (s ≠ 1):
/// Σ_{k<N} k^{−s} + N^{1−s}/(s−1) + N^{−s}/2 + correction terms, with the
/// standard remainder bound |T_{M+1}|·|s+2M+1|/(Re s + 2M+1).
fn zeta_euler_maclaurin(s: Complex64, tol: f64) -> Result<Certified, ZetaError> {
    let mut n = (16.0f64).max(0.6 * s.im.abs() + 10.0).ceil() as usize;
    for _ in 0..6 {
        let nf = n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..n {
            sum += (-s * (k as f64).ln()).exp();
        }
        let n_pow_minus_s = (-s * nf.ln()).exp();
        sum += n_pow_minus_s * nf / (s - 1.0) + n_pow_minus_s * 0.5;
        // T_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
        let mut pochhammer = s; // running product s(s+1)…(s+2j−2)
        let mut factorial = 2.0f64; // (2j)!
        let mut n_power = n_pow_minus_s / nf; // N^{−s−2j+1}
        let mut value = sum;
        let mut last_term_mag = f64::INFINITY;
        for (j, &b2j) in BERNOULLI_EVEN.iter().enumerate() {
            let term = pochhammer * (b2j / factorial) * n_power;
            let mag = term.norm();
            if mag > last_term_mag {
                // Asymptotic series started diverging before certifying.
                break;
            }
            value += term;
            last_term_mag = mag;
            // Remainder is bounded by the next term scaled by |s+2j+1|/(σ+2j+1).
            let two_j = 2.0 * (j as f64 + 1.0);
            let next_poch = pochhammer * (s + (two_j - 1.0)) * (s + two_j);
            let next_fact = factorial * (two_j + 1.0) * (two_j + 2.0);
            let next_power = n_power / (nf * nf);
            if j + 1 < BERNOULLI_EVEN.len() {
                let next_term =
                    next_poch * (BERNOULLI_EVEN[j + 1] / next_fact) * next_power;
                let scale = (s + (two_j + 1.0)).norm() / (s.re + two_j + 1.0);
                let bound = next_term.norm() * scale.max(1.0);
                if bound < tol {
                    return Ok(Certified { value, bound });
                }
            }
            pochhammer = next_poch;
            factorial = next_fact;
            n_power = next_power;
        }
        n *= 2;
    }
    Err(ZetaError::PrecisionNotReached {
        requested: tol,
        achieved: f64::NAN,
    })
}

/// ζ(s) on the real axis, s > 1 + 10⁻⁶, certified to `tol`.
pub fn zeta_real(s: f64, tol: f64) -> Result<f64, ZetaError> {
    // Slack of 1e-12 absorbs the rounding of 1 + 1e-6 itself.
    if s.is_nan() || s - 1.0 < 1e-6 - 1e-12 {
        return Err(ZetaError::Domain(format!(
            "zeta_real needs s >= 1 + 1e-6, got {s}"
        )));
    }
    let c = zeta_euler_maclaurin(Complex64::new(s, 0.0), tol)?;
    Ok(c.value.re)
}

/// ζ(s) for complex s with Re s > 0, s ≠ 1, certified to `tol`.
pub fn zeta_complex(s: Complex64, tol: f64) -> Result<Certified, ZetaError> {
    if s.re <= 0.0 {
        return Err(ZetaError::Domain(format!(
            "zeta_complex needs Re s > 0, got {}",
            s.re
        )));
    }
    if (s - 1.0).norm() < 1e-9 {
        return Err(ZetaError::Domain("s too close to the pole at 1".into()));
    }
    zeta_euler_maclaurin(s, tol)
}

/// Inverse of ζ on (1, ∞): the unique t with ζ(t) = y, for y > 1.
///
/// ζ decreases from +∞ to 1 on this ray, so bisection after exponential
/// bracket growth is exact. Targets closer to 1 than ~1e-14 are rejected.
pub fn zeta_inverse(y: f64, tol: f64) -> Result<f64, ZetaError> {
    if !y.is_finite() || y <= 1.0 + 1e-14 {
        return Err(ZetaError::InverseOutOfRange(y));
    }
    let eval_tol = (tol * 1e-3).clamp(1e-15, 1e-10);
    let lo_limit = 1.0 + 1e-6;
    if zeta_real(lo_limit, eval_tol)? < y {
        return Err(ZetaError::InverseOutOfRange(y));
    }
    let mut lo = lo_limit;
    let mut hi = 2.0;
    while zeta_real(hi, eval_tol)? > y {
        lo = hi;
        hi = 1.0 + 2.0 * (hi - 1.0);
        if hi > 64.0 {
            return Err(ZetaError::InverseOutOfRange(y));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if zeta_real(mid, eval_tol)? > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let residual = (zeta_real(t, eval_tol)? - y).abs();
    if residual > tol * y.max(1.0) {
        return Err(ZetaError::PrecisionNotReached {
            requested: tol,
            achieved: residual,
        });
    }
    Ok(t)
}

/// Truncated Dirichlet series for −ζ′/ζ with its reported tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivativeSeries {
    /// ζ′(t)/ζ(t) ≈ −Σ_{q ≤ q_max} Λ(q) q^{−t}.
    pub value: f64,
    /// Reported tail bound Q^{1−t}/(t−1).
    pub tail_bound: f64,
    /// Truncation point actually used.
    pub q_max: u64,
}

/// ζ′(t)/ζ(t) via the truncated series −Σ Λ(q) q^{−t}, for real t > 1.
pub fn log_derivative_series(
    t: f64,
    q_max: u64,
    table: &ArithmeticTable,
) -> Result<LogDerivativeSeries, ZetaError> {
    if t.is_nan() || t <= 1.0 {
        return Err(ZetaError::Domain(format!(
            "log_derivative_series needs t > 1, got {t}"
        )));
    }
    if q_max < 2 || q_max > table.bound() {
        return Err(ZetaError::Table(TableError::OutOfRange {
            operation: "log_derivative_series",
            argument: q_max,
        }));
    }
    let mut sum = 0.0f64;
    for q in 2..=q_max {
        let lam = table.von_mangoldt(q)?;
        if lam != 0.0 {
            sum += lam * (-t * (q as f64).ln()).exp();
        }
    }
    let qf = q_max as f64;
    Ok(LogDerivativeSeries {
        value: -sum,
        tail_bound: qf.powf(1.0 - t) / (t - 1.0),
        q_max,
    })
}

/// Riemann–Siegel theta function via its Stirling expansion (t ≥ 1).
pub fn riemann_siegel_theta(t: f64) -> f64 {
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0 + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's function Z(t) = e^{iθ(t)} ζ(½ + it), real-valued on t ≥ 1,
/// with the same sign pattern as ζ on the critical line.
pub fn hardy_z(t: f64) -> Result<f64, ZetaError> {
    if t.is_nan() || t < 1.0 {
        return Err(ZetaError::Domain(format!(
            "hardy_z supported for t >= 1, got {t}"
        )));
    }
    let z = zeta_complex(Complex64::new(0.5, t), 1e-12)?;
    let theta = riemann_siegel_theta(t);
    let rotated = Complex64::from_polar(1.0, theta) * z.value;
    Ok(rotated.re)
}

/// Riemann–von Mangoldt estimate N(T) ≈ (T/2π)·ln(T/2πe) + 7/8 for the
/// number of critical-line zeros with 0 < t ≤ T.
pub fn counting_estimate(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * (x / std::f64::consts::E).ln() + 7.0 / 8.0
}

/// Ordered table of critical-line zero ordinates with their precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaZeroTable {
    zeros: Vec<f64>,
    precision: f64,
}

/// Upper limit on the scan height (keeps the fixed scan step safe).
pub const MAX_ZERO_HEIGHT: f64 = 120.0;

/// Find all critical-line zeros with ordinate in (0, t_max] by sign-change
/// scanning of Hardy's Z at step 0.05 followed by bisection to `precision`.
///
/// `t_max` must lie in (0, 120] and `precision` in [10⁻¹², 10⁻⁴]; the
/// zero-free region below t = 1 is skipped (the first zero is above 14).
pub fn find_zeros(t_max: f64, precision: f64) -> Result<ZetaZeroTable, ZetaError> {
    if !(t_max > 0.0 && t_max <= MAX_ZERO_HEIGHT) {
        return Err(ZetaError::Domain(format!(
            "t_max must lie in (0, {MAX_ZERO_HEIGHT}], got {t_max}"
        )));
    }
    if !(1e-12..=1e-4).contains(&precision) {
        return Err(ZetaError::Domain(format!(
            "precision must lie in [1e-12, 1e-4], got {precision}"
        )));
    }
    let step = 0.05;
    let mut zeros = Vec::new();
    let t_prev = 1.0f64;
    if t_max > t_prev {
        let mut z_prev = hardy_z(t_prev)?;
        let n_steps = ((t_max - t_prev) / step).ceil() as usize;
        for i in 1..=n_steps {
            let t = (t_prev + i as f64 * step).min(t_max);
            let z = hardy_z(t)?;
            if z_prev == 0.0 {
                zeros.push(t_prev + (i as f64 - 1.0) * step);
            } else if z_prev * z < 0.0 {
                let lo = t_prev + (i as f64 - 1.0) * step;
                zeros.push(bisect_zero(lo, t, z_prev, precision)?);
            }
            z_prev = z;
        }
    }
    let table = ZetaZeroTable { zeros, precision };
    if let Some(&first) = table.zeros.first() {
        debug_assert!((14.0..15.0).contains(&first));
    }
    Ok(table)
}

fn bisect_zero(mut lo: f64, mut hi: f64, z_lo: f64, precision: f64) -> Result<f64, ZetaError> {
    let mut sign_lo = z_lo.signum();
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let z_mid = hardy_z(mid)?;
        if z_mid == 0.0 {
            return Ok(mid);
        }
        if z_mid.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        let _ = &mut sign_lo;
    }
    Ok(0.5 * (lo + hi))
}

impl ZetaZeroTable {
    /// The zero ordinates, ascending.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Precision the ordinates were refined to.
    pub fn precision(&self) -> f64 {
        self.precision
    }

    /// 1-based access: the j-th zero ordinate.
    pub fn zero(&self, index: usize) -> Result<f64, ZetaError> {
        if index == 0 || index > self.zeros.len() {
            return Err(ZetaError::ZeroIndex {
                index,
                available: self.zeros.len(),
            });
        }
        Ok(self.zeros[index - 1])
    }

    /// Number of zeros with ordinate ≤ t.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.zeros.partition_point(|&z| z <= t)
    }

    /// Write the table in the text cache format: a header line
    /// `# omqm-zeros v1 precision=<p>` followed by one ordinate per line.
    pub fn save(&self, path: &Path) -> Result<(), ZetaError> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "# omqm-zeros v1 precision={:e}", self.precision)?;
        for z in &self.zeros {
            writeln!(w, "{z:.15}")?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a table written by [`ZetaZeroTable::save`], re-verifying that
    /// each ordinate is bracketed by a Hardy-function sign change.
    pub fn load(path: &Path) -> Result<Self, ZetaError> {
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| ZetaError::Format("empty file".into()))??;
        let precision: f64 = header
            .strip_prefix("# omqm-zeros v1 precision=")
            .ok_or_else(|| ZetaError::Format(format!("bad header {header:?}")))?
            .trim()
            .parse()
            .map_err(|e| ZetaError::Format(format!("bad precision: {e}")))?;
        if !(1e-12..=1e-4).contains(&precision) {
            return Err(ZetaError::Format(format!("bad precision {precision:e}")));
        }
        let mut zeros = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let z: f64 = line
                .trim()
                .parse()
                .map_err(|e| ZetaError::Format(format!("bad ordinate {line:?}: {e}")))?;
            if let Some(&prev) = zeros.last() {
                if z <= prev {
                    return Err(ZetaError::Format(format!(
                        "ordinates not increasing at {z}"
                    )));
                }
            }
            zeros.push(z);
        }
        // Re-verify the sign-change bracket around each loaded ordinate.
        let half_width = (precision * 10.0).max(1e-9);
        for &z in &zeros {
            let lo = hardy_z(z - half_width)?;
            let hi = hardy_z(z + half_width)?;
            if lo * hi > 0.0 {
                return Err(ZetaError::Format(format!(
                    "no sign change around claimed zero {z}"
                )));
            }
        }
        Ok(ZetaZeroTable { zeros, precision })
    }
}

/// Normalised squared energy attached to a prime power q and the j-th zero:
/// Ẽ²/(4π²)² = s̃²·σ_j·ln(q)·q + m̃(q) + 2·m̃(q)², with m̃(q) = s̃·Λ(q).
///
/// `zero_index` is 1-based into `table`. Rejects q that is not a prime power.
pub fn om_energy_sq(
    q: u64,
    zero_index: usize,
    table: &ZetaZeroTable,
    constants: &OmConstants,
) -> Result<Complex64, ZetaError> {
    let lambda = numtheory::von_mangoldt_trial(q)?;
    if lambda == 0.0 {
        return Err(ZetaError::NotPrimePower(q));
    }
    let sigma_j = table.zero(zero_index)?;
    let s = constants.s_tilde;
    let m_tilde = s * lambda;
    Ok(s * s * sigma_j * (q as f64).ln() * q as f64 + m_tilde + m_tilde * m_tilde * 2.0)
}
