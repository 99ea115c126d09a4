//! Cycle-level stochastic model of the engine.
//!
//! A raising cycle extracts T_G·ln2 from the gas bath and parks it in a
//! lifted weight; a lowering cycle pumps a trapped weight fluctuation back.
//! Imperfect resetting couples the two: the reset operation on the piston
//! triple {φ₀, φ_L, φ_R} is constrained by unitarity, and every long-run
//! quantity depends on it only through the squared magnitudes
//! (|a₁|², |b₁|², |c₁|²) of its first row.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("reset magnitudes must lie in [0,1] and sum to 1 (got {m_a}, {m_b}, {m_c})")]
    InvalidReset { m_a: f64, m_b: f64, m_c: f64 },
    #[error("temperatures must be positive (T_G = {t_g}, T_W = {t_w})")]
    InvalidTemperatures { t_g: f64, t_w: f64 },
    #[error("P1 must lie in [0,1], got {p1}")]
    InvalidP1 { p1: f64 },
    #[error("stationary mixture formula requires a symmetric reset (m_b = m_c)")]
    AsymmetricReset,
    /// The two-state update oscillates (P₁ = 1, m_a = 1); the closed-form
    /// fixed point is reported alongside.
    #[error("stationary mixture iteration does not converge (fixed-point value {fixed_point})")]
    NonConvergent { fixed_point: f64 },
}

/// Squared magnitudes of the first row of the reset operation.
///
/// Unitarity forces m_a + m_b + m_c = 1; phases and the remaining rows
/// never enter any observable of the engine.
#[derive(Debug, Clone, Copy)]
pub struct ResetUnitary {
    pub m_a: f64,
    pub m_b: f64,
    pub m_c: f64,
}

impl ResetUnitary {
    pub fn new(m_a: f64, m_b: f64, m_c: f64) -> Result<Self, EngineError> {
        let ok = [m_a, m_b, m_c].iter().all(|m| (0.0..=1.0).contains(m))
            && (m_a + m_b + m_c - 1.0).abs() <= 1e-9;
        if ok {
            Ok(Self { m_a, m_b, m_c })
        } else {
            Err(EngineError::InvalidReset { m_a, m_b, m_c })
        }
    }

    /// Symmetric left/right treatment: m_b = m_c = (1 − m_a)/2.
    pub fn symmetric(m_a: f64) -> Result<Self, EngineError> {
        Self::new(m_a, 0.5 * (1.0 - m_a), 0.5 * (1.0 - m_a))
    }

    /// Extreme slice with m_c = 0, m_b = 1 − m_a.
    pub fn c_zero(m_a: f64) -> Result<Self, EngineError> {
        Self::new(m_a, 1.0 - m_a, 0.0)
    }
}

/// Engine configuration. P₁ = (½)^(T_G/T_W) is the probability that an
/// unraised thermal weight is caught above the shelf height h_T.
#[derive(Debug, Clone, Copy)]
pub struct EngineParams {
    pub t_g: f64,
    pub t_w: f64,
    pub reset: ResetUnitary,
    p1: f64,
    ln_p1: f64,
}

impl EngineParams {
    pub fn new(t_g: f64, t_w: f64, reset: ResetUnitary) -> Result<Self, EngineError> {
        if !(t_g > 0.0 && t_w > 0.0) {
            return Err(EngineError::InvalidTemperatures { t_g, t_w });
        }
        let ln_p1 = -t_g / t_w * LN_2;
        Ok(Self { t_g, t_w, reset, p1: ln_p1.exp(), ln_p1 })
    }

    /// Parameterize directly by P₁ ∈ [0,1] (T_W = 1; the endpoints stand
    /// for the T_G/T_W → ∞ and → 0 limits).
    pub fn from_p1(p1: f64, reset: ResetUnitary) -> Result<Self, EngineError> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(EngineError::InvalidP1 { p1 });
        }
        let ln_p1 = p1.ln();
        Ok(Self { t_g: -ln_p1 / LN_2, t_w: 1.0, reset, p1, ln_p1 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// ln P₁ = −(T_G/T_W)·ln2, kept algebraically consistent with the
    /// temperatures so ledger identities hold to machine precision.
    pub fn ln_p1(&self) -> f64 {
        self.ln_p1
    }
}

/// End-of-cycle piston statistics: w1..w3 close a raising cycle
/// (center / right / left), w4..w6 a lowering cycle.
#[derive(Debug, Clone, Copy)]
pub struct CycleWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
    pub w6: f64,
}

/// Reversal probabilities, mean run lengths and the long-run energy flow.
/// Degenerate endpoints carry `f64::INFINITY` run lengths; `delta_e` stays
/// finite (closed form).
#[derive(Debug, Clone, Copy)]
pub struct FlowStats {
    pub p_r: f64,
    pub p_l: f64,
    pub n_r: f64,
    pub n_l: f64,
    /// Mean long-run energy flow T_G → T_W per cycle, in units of T_G·ln2.
    pub delta_e: f64,
}

/// Statistical weights of the piston location at the end of each cycle:
///
/// ```text
///   w1 = 1 − ½P₁(1+m_a)        w4 = (1−2P₁) + P₁²(1+m_a)
///   w2 = ½P₁(1−m_b)            w5 = P₁ − P₁²(1−m_b)
///   w3 = ½P₁(1−m_c)            w6 = P₁ − P₁²(1−m_c)
/// ```
pub fn cycle_weights(params: &EngineParams) -> CycleWeights {
    let p1 = params.p1();
    let r = params.reset;
    let w = CycleWeights {
        w1: 1.0 - 0.5 * p1 * (1.0 + r.m_a),
        w2: 0.5 * p1 * (1.0 - r.m_b),
        w3: 0.5 * p1 * (1.0 - r.m_c),
        w4: (1.0 - 2.0 * p1) + p1 * p1 * (1.0 + r.m_a),
        w5: p1 - p1 * p1 * (1.0 - r.m_b),
        w6: p1 - p1 * p1 * (1.0 - r.m_c),
    };
    debug_assert!((w.w1 + w.w2 + w.w3 - 1.0).abs() < 1e-12);
    debug_assert!((w.w4 + w.w5 + w.w6 - 1.0).abs() < 1e-12);
    w
}

/// Reversal probabilities P_r = w2+w3, P_l = w4, run lengths N = 1/P and
/// the long-run flow.
pub fn reversal_and_lengths(params: &EngineParams) -> FlowStats {
    let w = cycle_weights(params);
    let p_r = w.w2 + w.w3;
    let p_l = w.w4;
    FlowStats {
        p_r,
        p_l,
        n_r: if p_r > 0.0 { 1.0 / p_r } else { f64::INFINITY },
        n_l: if p_l > 0.0 { 1.0 / p_l } else { f64::INFINITY },
        delta_e: energy_flow(params),
    }
}

/// Mean long-run energy flow from the T_G to the T_W bath per cycle, in
/// units of T_G·ln2:
///
/// ```text
///   f(P₁, m_a) = (1−2P₁)(1 − ½P₁(1+m_a)) / [(1−2P₁) + (1+2P₁)·½P₁(1+m_a)]
/// ```
///
/// Its sign is the sign of (1−2P₁) for every admissible reset: the mean
/// heat flow is always hot-to-cold.
pub fn energy_flow(params: &EngineParams) -> f64 {
    let p1 = params.p1();
    let half = 0.5 * p1 * (1.0 + params.reset.m_a);
    let numerator = (1.0 - 2.0 * p1) * (1.0 - half);
    let denominator = (1.0 - 2.0 * p1) + (1.0 + 2.0 * p1) * half;
    numerator / denominator
}

/// Stationary probability of being on a raising cycle,
/// w_r' = w4 / (2·w2 + w4), valid for symmetric resets. Verified against
/// the two-state update iterated from both endpoints; the oscillating
/// corner (P₁ = 1, m_a = 1) is reported as [`EngineError::NonConvergent`].
pub fn stationary_mix(params: &EngineParams) -> Result<f64, EngineError> {
    let r = params.reset;
    if (r.m_b - r.m_c).abs() > 1e-12 {
        return Err(EngineError::AsymmetricReset);
    }
    let w = cycle_weights(params);
    let fixed_point = w.w4 / (2.0 * w.w2 + w.w4);
    for start in [0.0f64, 1.0] {
        let mut wr = start;
        let mut converged = false;
        for _ in 0..200 {
            let next = w.w4 + wr * (w.w1 - w.w4);
            if (next - wr).abs() < 1e-10 {
                converged = true;
                break;
            }
            wr = next;
        }
        if !converged {
            return Err(EngineError::NonConvergent { fixed_point });
        }
    }
    Ok(fixed_point)
}

/// Monte-Carlo renewal estimate of the flow over `n_cycles` cycles.
#[derive(Debug, Clone, Copy)]
pub struct McEngineResult {
    /// Mean per-cycle flow in units of T_G·ln2.
    pub mean_flow: f64,
    pub stderr: f64,
    pub fraction_raising: f64,
    pub fraction_stderr: f64,
}

/// Two-state Markov chain oracle: a raising cycle contributes +1 and
/// reverses with probability P_r, a lowering cycle contributes −1 and
/// reverses with probability P_l. Starts on a raising cycle. Standard
/// errors come from 100 cycle batches.
pub fn mc_engine(params: &EngineParams, n_cycles: u64, seed: u64) -> McEngineResult {
    let stats = reversal_and_lengths(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_batches = 100u64;
    let per_batch = (n_cycles / n_batches).max(1);

    let mut raising = true;
    let mut flow_means = Vec::with_capacity(n_batches as usize);
    let mut frac_means = Vec::with_capacity(n_batches as usize);
    for _ in 0..n_batches {
        let mut flow = 0i64;
        let mut raised = 0u64;
        for _ in 0..per_batch {
            if raising {
                flow += 1;
                raised += 1;
                if rng.gen::<f64>() < stats.p_r {
                    raising = false;
                }
            } else {
                flow -= 1;
                if rng.gen::<f64>() < stats.p_l {
                    raising = true;
                }
            }
        }
        flow_means.push(flow as f64 / per_batch as f64);
        frac_means.push(raised as f64 / per_batch as f64);
    }
    let (mean_flow, stderr) = batch_stats(&flow_means);
    let (fraction_raising, fraction_stderr) = batch_stats(&frac_means);
    McEngineResult { mean_flow, stderr, fraction_raising, fraction_stderr }
}

pub(crate) fn batch_stats(means: &[f64]) -> (f64, f64) {
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
