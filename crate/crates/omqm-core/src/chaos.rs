//! Instability machinery: the logistic superstable cascade (Feigenbaum δ),
//! largest Lyapunov exponents of the Rössler flow, the exponential scaling
//! diagnostic, and the fine-structure readings derived from δ and the ring
//! dimension D.

use crate::omcore::{FEIGENBAUM_DELTA, RING_DIMENSION};
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from cascade and flow computations.
#[derive(Debug, Error)]
pub enum ChaosError {
    /// Argument outside the operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// Newton iteration for a superstable parameter failed to converge
    /// or broke the cascade ordering.
    #[error("superstable cascade Newton failed at level {level}")]
    CascadeNewton {
        /// Doubling level whose parameter could not be certified.
        level: usize,
    },
    /// Trajectory left the basin (norm overflow) during integration.
    #[error("trajectory diverged at t = {t}")]
    Diverged {
        /// Integration time at which the norm overflowed.
        t: f64,
    },
}

/// Result of the superstable-cascade estimate of the Feigenbaum constant.
#[derive(Debug, Clone, PartialEq)]
pub struct FeigenbaumEstimate {
    /// Superstable parameters a₀, a₁, …, a_{levels+1} of the logistic map.
    pub parameters: Vec<f64>,
    /// Successive ratios (a_{m+1} − a_m) / (a_{m+2} − a_{m+1}).
    pub ratios: Vec<f64>,
    /// The final ratio, the δ estimate.
    pub delta: f64,
}

/// Iterate the logistic map x ← a·x(1−x) 2^m times from x = ½, carrying the
/// derivative with respect to the parameter a.
fn logistic_orbit(a: f64, level: u32) -> (f64, f64) {
    let mut x = 0.5f64;
    let mut xa = 0.0f64; // ∂x/∂a
    for _ in 0..(1u64 << level) {
        let x_new = a * x * (1.0 - x);
        xa = x * (1.0 - x) + a * (1.0 - 2.0 * x) * xa;
        x = x_new;
    }
    (x, xa)
}

/// Solve f_a^{2^m}(½) = ½ for the superstable parameter at doubling level m,
/// starting Newton from `guess`.
fn superstable_parameter(level: u32, guess: f64) -> Result<f64, ChaosError> {
    let mut a = guess;
    for _ in 0..80 {
        let (x, xa) = logistic_orbit(a, level);
        let g = x - 0.5;
        if xa == 0.0 || !g.is_finite() {
            return Err(ChaosError::CascadeNewton {
                level: level as usize,
            });
        }
        let step = g / xa;
        a -= step;
        if step.abs() < 1e-14 * a.abs() {
            return Ok(a);
        }
    }
    Err(ChaosError::CascadeNewton {
        level: level as usize,
    })
}

/// Estimate the Feigenbaum constant δ from the logistic superstable cascade.
///
/// Computes a₀ … a_{levels+1} (a₀ = 2 exactly) and returns the ratio
/// sequence; the δ estimate is the last ratio. `levels` must lie in [6, 14]
/// (the deepest parameter gap at 14 is ≈ 4·10⁻¹³, near the f64 limit).
pub fn feigenbaum_delta(levels: usize) -> Result<FeigenbaumEstimate, ChaosError> {
    if !(6..=14).contains(&levels) {
        return Err(ChaosError::Domain(format!(
            "levels must lie in [6, 14], got {levels}"
        )));
    }
    let mut params: Vec<f64> = vec![2.0]; // a₀: x = ½ is the superstable fixed point at a = 2
    for m in 1..=(levels + 1) as u32 {
        let guess = match params.len() {
            1 => 3.24,
            len => {
                let last = params[len - 1];
                let prev = params[len - 2];
                last + (last - prev) / FEIGENBAUM_DELTA
            }
        };
        let a = superstable_parameter(m, guess)?;
        let last = *params.last().expect("params nonempty");
        let gap = a - last;
        let prev_gap = if params.len() >= 2 {
            last - params[params.len() - 2]
        } else {
            f64::INFINITY
        };
        // The cascade must keep increasing with shrinking gaps.
        if !(gap > 0.0 && gap < prev_gap) {
            return Err(ChaosError::CascadeNewton { level: m as usize });
        }
        params.push(a);
    }
    let ratios: Vec<f64> = (0..params.len() - 2)
        .map(|m| (params[m + 1] - params[m]) / (params[m + 2] - params[m + 1]))
        .collect();
    let delta = *ratios.last().expect("at least one ratio");
    Ok(FeigenbaumEstimate {
        parameters: params,
        ratios,
        delta,
    })
}

/// Parameters for Rössler-flow integrations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosslerParams {
    /// Flow parameter a.
    pub a: f64,
    /// Flow parameter b.
    pub b: f64,
    /// Flow parameter c.
    pub c: f64,
    /// Initial state (x, y, z).
    pub initial: [f64; 3],
    /// Fixed RK4 step.
    pub dt: f64,
    /// Transient time discarded before measurement.
    pub t_transient: f64,
    /// Measured integration time after the transient.
    pub t_total: f64,
}

impl Default for RosslerParams {
    fn default() -> Self {
        RosslerParams {
            a: 0.2,
            b: 0.2,
            c: 5.7,
            initial: [1.0, 1.0, 0.0],
            dt: 0.01,
            t_transient: 200.0,
            t_total: 2000.0,
        }
    }
}

impl RosslerParams {
    fn validate(&self) -> Result<(), ChaosError> {
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(ChaosError::Domain(format!(
                "dt must lie in (0, 0.1], got {}",
                self.dt
            )));
        }
        if !(self.t_total > 0.0 && self.t_total <= 100_000.0) {
            return Err(ChaosError::Domain(format!(
                "t_total must lie in (0, 1e5], got {}",
                self.t_total
            )));
        }
        if !(self.t_transient >= 0.0 && self.t_transient <= 100_000.0) {
            return Err(ChaosError::Domain(format!(
                "t_transient must lie in [0, 1e5], got {}",
                self.t_transient
            )));
        }
        for v in [self.a, self.b, self.c] {
            if !v.is_finite() {
                return Err(ChaosError::Domain("non-finite flow parameter".into()));
            }
        }
        Ok(())
    }
}

fn rossler_rhs(p: &RosslerParams, s: [f64; 3]) -> [f64; 3] {
    [
        -s[1] - s[2],
        s[0] + p.a * s[1],
        p.b + s[2] * (s[0] - p.c),
    ]
}

/// Combined RHS for state + tangent vector (variational equation with the
/// Jacobian [[0,−1,−1],[1,a,0],[z,0,x−c]]).
fn rossler_tangent_rhs(p: &RosslerParams, s: [f64; 6]) -> [f64; 6] {
    let (x, z) = (s[0], s[2]);
    let (vx, vy, vz) = (s[3], s[4], s[5]);
    [
        -s[1] - s[2],
        s[0] + p.a * s[1],
        p.b + s[2] * (x - p.c),
        -vy - vz,
        vx + p.a * vy,
        z * vx + (x - p.c) * vz,
    ]
}

fn rk4_step<const N: usize>(
    f: impl Fn([f64; N]) -> [f64; N],
    s: [f64; N],
    dt: f64,
) -> [f64; N] {
    let add = |a: [f64; N], b: [f64; N], w: f64| {
        let mut out = a;
        for i in 0..N {
            out[i] += w * b[i];
        }
        out
    };
    let k1 = f(s);
    let k2 = f(add(s, k1, dt / 2.0));
    let k3 = f(add(s, k2, dt / 2.0));
    let k4 = f(add(s, k3, dt));
    let mut out = s;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

const DIVERGENCE_NORM: f64 = 1e6;

/// Integrate the Rössler flow with fixed-step RK4, returning sampled rows
/// (t, [x, y, z]) every `stride` steps after the transient.
pub fn rossler_trajectory(
    params: &RosslerParams,
    stride: usize,
) -> Result<Vec<(f64, [f64; 3])>, ChaosError> {
    params.validate()?;
    if stride == 0 {
        return Err(ChaosError::Domain("stride must be >= 1".into()));
    }
    let mut s = params.initial;
    let n_transient = (params.t_transient / params.dt).round() as u64;
    for i in 0..n_transient {
        s = rk4_step(|v| rossler_rhs(params, v), s, params.dt);
        if s.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_NORM) {
            return Err(ChaosError::Diverged {
                t: (i + 1) as f64 * params.dt,
            });
        }
    }
    let n_steps = (params.t_total / params.dt).round() as u64;
    let mut rows = Vec::with_capacity((n_steps / stride as u64 + 1) as usize);
    rows.push((0.0, s));
    for i in 1..=n_steps {
        s = rk4_step(|v| rossler_rhs(params, v), s, params.dt);
        let t = i as f64 * params.dt;
        if s.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_NORM) {
            return Err(ChaosError::Diverged {
                t: params.t_transient + t,
            });
        }
        if i % stride as u64 == 0 {
            rows.push((t, s));
        }
    }
    Ok(rows)
}

/// Largest Lyapunov exponent of the Rössler flow via the tangent-space
/// (Benettin) method: integrate state + tangent jointly, renormalising the
/// tangent every 100 steps and averaging the log stretch factors.
pub fn lyapunov_largest(params: &RosslerParams) -> Result<f64, ChaosError> {
    params.validate()?;
    let mut s = params.initial;
    let n_transient = (params.t_transient / params.dt).round() as u64;
    for i in 0..n_transient {
        s = rk4_step(|v| rossler_rhs(params, v), s, params.dt);
        if s.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_NORM) {
            return Err(ChaosError::Diverged {
                t: (i + 1) as f64 * params.dt,
            });
        }
    }
    let mut joint = [s[0], s[1], s[2], 1.0, 0.0, 0.0];
    let mut log_sum = 0.0f64;
    let n_steps = (params.t_total / params.dt).round() as u64;
    for i in 1..=n_steps {
        joint = rk4_step(|v| rossler_tangent_rhs(params, v), joint, params.dt);
        if joint[..3]
            .iter()
            .any(|v| !v.is_finite() || v.abs() > DIVERGENCE_NORM)
        {
            return Err(ChaosError::Diverged {
                t: params.t_transient + i as f64 * params.dt,
            });
        }
        if i % 100 == 0 || i == n_steps {
            let norm =
                (joint[3] * joint[3] + joint[4] * joint[4] + joint[5] * joint[5]).sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(ChaosError::Diverged {
                    t: params.t_transient + i as f64 * params.dt,
                });
            }
            log_sum += norm.ln();
            for v in &mut joint[3..6] {
                *v /= norm;
            }
        }
    }
    Ok(log_sum / (n_steps as f64 * params.dt))
}

/// The scaling form K·exp(√(π·λ)); equals K exactly at λ = 0.
pub fn scaling_formula(k_const: f64, lambda: f64) -> f64 {
    if lambda < 0.0 {
        return k_const;
    }
    k_const * (PI * lambda).sqrt().exp()
}

/// Diagnostic comparing per-cycle separation growth on the Rössler attractor
/// against the scaling form K·exp(√(π·λ)).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingLawReport {
    /// Number of full revolutions detected (plane x < 0, y crossing 0 upward).
    pub cycles: usize,
    /// Geometric mean per-cycle growth factor of an infinitesimal separation.
    pub per_cycle_growth: f64,
    /// Largest Lyapunov exponent measured on the same run.
    pub lambda: f64,
    /// The constant K supplied.
    pub k_const: f64,
    /// K·exp(√(π·λ)) for the measured λ.
    pub formula_value: f64,
    /// Ratio per_cycle_growth / formula_value.
    pub ratio: f64,
}

/// Measure per-cycle separation growth and compare with the scaling form.
/// Report-only: the comparison asserts nothing.
pub fn scaling_law_report(
    params: &RosslerParams,
    k_const: f64,
) -> Result<ScalingLawReport, ChaosError> {
    params.validate()?;
    if !(k_const.is_finite() && k_const > 0.0) {
        return Err(ChaosError::Domain(format!(
            "k_const must be positive and finite, got {k_const}"
        )));
    }
    let mut s = params.initial;
    let n_transient = (params.t_transient / params.dt).round() as u64;
    for _ in 0..n_transient {
        s = rk4_step(|v| rossler_rhs(params, v), s, params.dt);
    }
    let mut joint = [s[0], s[1], s[2], 1.0, 0.0, 0.0];
    let mut log_sum = 0.0f64;
    let mut cycle_logs: Vec<f64> = Vec::new();
    let mut log_at_cycle_start = 0.0f64;
    let mut y_prev = joint[1];
    let mut started = false;
    let n_steps = (params.t_total / params.dt).round() as u64;
    for i in 1..=n_steps {
        joint = rk4_step(|v| rossler_tangent_rhs(params, v), joint, params.dt);
        if joint[..3]
            .iter()
            .any(|v| !v.is_finite() || v.abs() > DIVERGENCE_NORM)
        {
            return Err(ChaosError::Diverged {
                t: params.t_transient + i as f64 * params.dt,
            });
        }
        let norm =
            (joint[3] * joint[3] + joint[4] * joint[4] + joint[5] * joint[5]).sqrt();
        if i % 100 == 0 {
            log_sum += norm.ln();
            for v in &mut joint[3..6] {
                *v /= norm;
            }
        }
        let y = joint[1];
        // One revolution: the flow circles counterclockwise in (x, y), so y
        // crosses 0 upward once per loop, on the x > 0 side.
        if y_prev < 0.0 && y >= 0.0 && joint[0] > 0.0 {
            let running = log_sum + norm.ln() * if i % 100 == 0 { 0.0 } else { 1.0 };
            if started {
                cycle_logs.push(running - log_at_cycle_start);
            }
            log_at_cycle_start = running;
            started = true;
        }
        y_prev = y;
    }
    let final_norm =
        (joint[3] * joint[3] + joint[4] * joint[4] + joint[5] * joint[5]).sqrt();
    if !n_steps.is_multiple_of(100) {
        log_sum += final_norm.ln();
    }
    let lambda = log_sum / (n_steps as f64 * params.dt);
    let mean_cycle_log = if cycle_logs.is_empty() {
        0.0
    } else {
        cycle_logs.iter().sum::<f64>() / cycle_logs.len() as f64
    };
    let per_cycle_growth = mean_cycle_log.exp();
    let formula_value = scaling_formula(k_const, lambda.max(0.0));
    Ok(ScalingLawReport {
        cycles: cycle_logs.len(),
        per_cycle_growth,
        lambda,
        k_const,
        formula_value,
        ratio: per_cycle_growth / formula_value,
    })
}

/// The two fine-structure readings derived from D and δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineStructure {
    /// The ring dimension D used.
    pub dimension: f64,
    /// The Feigenbaum constant δ used.
    pub delta: f64,
    /// D·√(exp(√(π·δ))) — the expression in its printed form (≈ 20.19).
    pub reading_printed: f64,
    /// D·exp(√(π·δ)) — the form that reproduces 1/α ≈ 137.000 000 4.
    pub reading_matching: f64,
}

/// Evaluate both fine-structure readings for the given D and δ.
///
/// With the reference values the matching form gives 137.000 000 4 while the
/// printed form gives ≈ 20.19; both are reported and neither is asserted.
pub fn fine_structure(dimension: f64, delta: f64) -> Result<FineStructure, ChaosError> {
    if !(dimension.is_finite() && dimension > 0.0) {
        return Err(ChaosError::Domain(format!(
            "dimension must be positive, got {dimension}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(ChaosError::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let grow = (PI * delta).sqrt().exp();
    Ok(FineStructure {
        dimension,
        delta,
        reading_printed: dimension * grow.sqrt(),
        reading_matching: dimension * grow,
    })
}

/// Fine-structure readings with the reference D and δ.
pub fn fine_structure_reference() -> FineStructure {
    fine_structure(RING_DIMENSION, FEIGENBAUM_DELTA).expect("reference constants valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Superstable parameters from an independent high-precision oracle.
    const A_REF: [f64; 8] = [
        2.0,
        3.236_067_977_499_79,
        3.498_561_699_327_701_5,
        3.554_640_862_768_825,
        3.566_667_379_856_268_5,
        3.569_243_531_637_11,
        3.569_795_293_749_944_6,
        3.569_913_465_422_348_5,
    ];

    #[test]
    fn cascade_parameters_match_oracle() {
        let est = feigenbaum_delta(6).unwrap();
        assert_eq!(est.parameters.len(), 8);
        assert_eq!(est.ratios.len(), 6);
        for (got, want) in est.parameters.iter().zip(A_REF) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        // a₁ = 1 + √5.
        assert!((est.parameters[1] - (1.0 + 5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn delta_estimate_converges_at_ten_levels() {
        let est = feigenbaum_delta(10).unwrap();
        assert_eq!(est.parameters.len(), 12);
        assert_eq!(est.ratios.len(), 10);
        assert!(
            (est.delta - FEIGENBAUM_DELTA).abs() < 1e-3,
            "delta = {}",
            est.delta
        );
        // The estimate is far better than the required 1e-3 in practice.
        assert!((est.delta - FEIGENBAUM_DELTA).abs() < 1e-5);
    }

    #[test]
    fn ratio_gaps_contract_and_settle() {
        // The ratio sequence is not monotone at the start (it dips below δ
        // around the third entry), but successive gaps contract and the tail
        // increases towards δ.
        let est = feigenbaum_delta(9).unwrap();
        let r = &est.ratios;
        for m in 2..r.len() - 1 {
            assert!(
                (r[m + 1] - r[m]).abs() < (r[m] - r[m - 1]).abs() + 1e-12,
                "gap grew at {m}"
            );
        }
        for m in 2..r.len() - 1 {
            assert!(r[m + 1] > r[m], "tail not increasing at {m}: {r:?}");
        }
    }

    #[test]
    fn cascade_levels_validated() {
        assert!(matches!(feigenbaum_delta(5), Err(ChaosError::Domain(_))));
        assert!(matches!(feigenbaum_delta(15), Err(ChaosError::Domain(_))));
    }

    #[test]
    fn lyapunov_positive_on_classic_attractor() {
        let params = RosslerParams::default();
        let lambda = lyapunov_largest(&params).unwrap();
        assert!(
            (0.04..0.12).contains(&lambda),
            "lambda = {lambda}, expected near 0.07"
        );
    }

    #[test]
    fn lyapunov_near_zero_on_periodic_window() {
        // c = 2 sits on a periodic orbit: the largest exponent vanishes.
        let params = RosslerParams {
            c: 2.0,
            t_total: 1000.0,
            ..RosslerParams::default()
        };
        let lambda = lyapunov_largest(&params).unwrap();
        assert!(lambda.abs() < 0.01, "lambda = {lambda}");
    }

    #[test]
    fn trajectory_is_deterministic_and_bounded() {
        let params = RosslerParams {
            t_total: 100.0,
            ..RosslerParams::default()
        };
        let a = rossler_trajectory(&params, 10).unwrap();
        let b = rossler_trajectory(&params, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1001);
        assert!(a
            .iter()
            .all(|(_, s)| s.iter().all(|v| v.abs() < 100.0)));
        // The attractor actually moves.
        assert!(a.iter().any(|(_, s)| s[0].abs() > 1.0));
    }

    #[test]
    fn rossler_params_validated() {
        let bad_dt = RosslerParams {
            dt: 0.0,
            ..RosslerParams::default()
        };
        assert!(matches!(
            lyapunov_largest(&bad_dt),
            Err(ChaosError::Domain(_))
        ));
        let bad_t = RosslerParams {
            t_total: -1.0,
            ..RosslerParams::default()
        };
        assert!(matches!(
            rossler_trajectory(&bad_t, 1),
            Err(ChaosError::Diverged { .. }) | Err(ChaosError::Domain(_))
        ));
        assert!(matches!(
            rossler_trajectory(&RosslerParams::default(), 0),
            Err(ChaosError::Domain(_))
        ));
    }

    #[test]
    fn divergence_is_reported_not_panicked() {
        // b large and c negative pushes z to blow up.
        let params = RosslerParams {
            a: 0.2,
            b: 50.0,
            c: -5.0,
            initial: [0.0, 0.0, 50.0],
            dt: 0.05,
            t_transient: 0.0,
            t_total: 500.0,
        };
        match lyapunov_largest(&params) {
            Err(ChaosError::Diverged { t }) => assert!(t > 0.0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn scaling_formula_limit_at_zero() {
        assert_eq!(scaling_formula(3.5, 0.0), 3.5);
        assert_eq!(scaling_formula(2.0, -0.1), 2.0);
        assert!((scaling_formula(1.0, FEIGENBAUM_DELTA) - 46.061_512_799_670_6).abs() < 1e-9);
    }

    #[test]
    fn scaling_report_is_deterministic_and_sane() {
        let params = RosslerParams {
            t_total: 600.0,
            ..RosslerParams::default()
        };
        let r1 = scaling_law_report(&params, 1.0).unwrap();
        let r2 = scaling_law_report(&params, 1.0).unwrap();
        assert_eq!(r1, r2);
        // Rössler loops take ≈ 6 time units, so 600 units ≈ 100 cycles.
        assert!((80..=120).contains(&r1.cycles), "cycles = {}", r1.cycles);
        assert!(r1.per_cycle_growth > 1.0);
        assert!((r1.lambda - 0.07).abs() < 0.04, "lambda = {}", r1.lambda);
        assert!(r1.ratio > 0.0);
        assert!(matches!(
            scaling_law_report(&params, 0.0),
            Err(ChaosError::Domain(_))
        ));
    }

    #[test]
    fn fine_structure_reference_readings() {
        let fs = fine_structure_reference();
        assert!(
            (fs.reading_matching - 137.000_000_395_551_16).abs() < 1e-6,
            "matching = {}",
            fs.reading_matching
        );
        assert!(
            (fs.reading_printed - 20.186_055_812_701_63).abs() < 1e-9,
            "printed = {}",
            fs.reading_printed
        );
        // The printed form is the square-root compression of the matching one.
        let ratio = fs.reading_matching / fs.dimension;
        assert!((fs.reading_printed - fs.dimension * ratio.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fine_structure_validates_inputs() {
        assert!(fine_structure(0.0, 4.669).is_err());
        assert!(fine_structure(2.97, -1.0).is_err());
        assert!(fine_structure(f64::NAN, 4.669).is_err());
    }

    #[test]
    fn fine_structure_with_computed_delta_stays_close() {
        // Swapping the reference δ for a freshly computed estimate moves the
        // matching reading only in late digits (the window is generous).
        let est = feigenbaum_delta(10).unwrap();
        let fs = fine_structure(RING_DIMENSION, est.delta).unwrap();
        assert!((fs.reading_matching - 137.0).abs() < 0.01);
    }
}
