//! Eigenstates of a single atom in a box of half-width 1 with a central
//! potential barrier of half-width `p` and height `V`.
//!
//! In units ε = ħ²π²/8mL² = 1, L = 1 the wavenumbers are
//!
//! ```text
//!   K_a = (π/2)√(E/ε)          outside the barrier
//!   K_b = (π/2)√((E−V)/ε)      inside, E > V
//!   K_c = (π/2)√((V−E)/ε)      inside, E < V
//! ```
//!
//! so that E = (4ε/π²)·K_a². Matching the piecewise solution at the barrier
//! edges gives one transcendental continuity equation per symmetry whose
//! roots are the eigenvalues. Both equations are implemented as a single
//! residual analytic in q = K_a² − (π²/4)(V/ε); the trigonometric (E > V),
//! polynomial (E = V) and hyperbolic (E < V) regimes are the q > 0, q = 0
//! and q < 0 branches of the same function, so the residual is continuous
//! across the E = V seam by construction.
//!
//! Eigenvalues at arbitrary barrier height are tracked by natural-parameter
//! continuation in V from the unperturbed V = 0 roots, with a
//! predictor-corrector step safeguarded by the bracket
//! [previous root, lπ/(1−p)): the limiting wavenumber is approached from
//! below and levels of one symmetry never cross.

use crate::numeric::logspace;
use std::f64::consts::PI;
use thiserror::Error;

/// Half π, used to convert between energies (ε units) and wavenumbers.
const HALF_PI: f64 = PI / 2.0;

/// Scaled-residual polish tolerance for Newton corrections.
const RESIDUAL_TOL: f64 = 1e-10;

/// Newton iteration budget per continuation step.
const MAX_NEWTON: usize = 50;

/// Maximum number of times a continuation step is halved before stalling.
const MAX_REFINE: usize = 14;

/// Width of the E = V seam (in ε units) inside which the series branch of
/// the residual is used; K_b and K_c are ill-conditioned there.
const SEAM_WIDTH: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectrumError {
    /// Levels start at l = 1.
    #[error("level index must be >= 1")]
    InvalidLevel,
    /// The bracket lπ < K_a < lπ/(1−p) only separates levels while
    /// l < (1−p)/p.
    #[error("level {level} too high to track for barrier fraction p = {p}")]
    LevelOutOfRange { level: u32, p: f64 },
    /// Barrier fraction must satisfy 0 < p < 1.
    #[error("barrier half-width fraction must lie in (0, 1), got {p}")]
    InvalidBarrierFraction { p: f64 },
    /// Newton polish failed to converge within the iteration budget even
    /// after step refinement; the caller should retry with a finer V grid.
    #[error("continuation stalled at V = {v:.6e} (level {level})")]
    ContinuationStall { v: f64, level: u32 },
}

/// Symmetry class of a box eigenstate. Odd states vanish at the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Odd,
    Even,
}

/// Box and barrier geometry: ground energy scale ε and the dimensionless
/// barrier half-width fraction p = d/L.
#[derive(Debug, Clone, Copy)]
pub struct GasBoxParams {
    /// Ground energy scale ε = ħ²π²/8mL²; 1 in internal units.
    pub epsilon: f64,
    /// Barrier half-width fraction d/L, 0 < p < 1.
    pub p: f64,
}

impl Default for GasBoxParams {
    fn default() -> Self {
        Self { epsilon: 1.0, p: 0.01 }
    }
}

impl GasBoxParams {
    pub fn new(p: f64) -> Result<Self, SpectrumError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(SpectrumError::InvalidBarrierFraction { p });
        }
        Ok(Self { epsilon: 1.0, p })
    }

    /// Energy of wavenumber K_a: E = (4ε/π²)K_a².
    pub fn energy_of(&self, k_a: f64) -> f64 {
        self.epsilon * (k_a / HALF_PI).powi(2)
    }

    /// Wavenumber of energy E (E ≥ 0): K = (π/2)√(E/ε).
    pub fn wavenumber_of(&self, e: f64) -> f64 {
        HALF_PI * (e / self.epsilon).sqrt()
    }
}

/// One solved (symmetry, level, barrier-height) eigenstate.
#[derive(Debug, Clone, Copy)]
pub struct Eigenstate {
    pub symmetry: Symmetry,
    pub level: u32,
    /// Barrier height V in ε units.
    pub barrier_height: f64,
    /// Outer wavenumber K_a.
    pub k_a: f64,
    /// Energy in ε units, E = (4ε/π²)K_a².
    pub energy: f64,
    /// Barrier half-width fraction the state was solved with.
    pub p: f64,
}

impl Eigenstate {
    /// Inner wavenumber K_b = (π/2)√(E−V); defined for E ≥ V.
    pub fn k_b(&self) -> Option<f64> {
        let d = self.energy - self.barrier_height;
        (d >= 0.0).then(|| HALF_PI * d.sqrt())
    }

    /// Inner decay constant K_c = (π/2)√(V−E); defined for V ≥ E.
    pub fn k_c(&self) -> Option<f64> {
        let d = self.barrier_height - self.energy;
        (d >= 0.0).then(|| HALF_PI * d.sqrt())
    }
}

/// Unperturbed (V = 0) eigenvalue: 4εl² (odd), ε(2l−1)² (even).
pub fn unperturbed_energy(
    symmetry: Symmetry,
    level: u32,
    params: &GasBoxParams,
) -> Result<f64, SpectrumError> {
    if level == 0 {
        return Err(SpectrumError::InvalidLevel);
    }
    let l = level as f64;
    Ok(match symmetry {
        Symmetry::Odd => 4.0 * params.epsilon * l * l,
        Symmetry::Even => params.epsilon * (2.0 * l - 1.0).powi(2),
    })
}

/// Infinite-barrier limit ε(2l/(1−p))², degenerate across symmetries.
pub fn infinite_barrier_energy(level: u32, params: &GasBoxParams) -> f64 {
    let l = level as f64;
    params.epsilon * (2.0 * l / (1.0 - params.p)).powi(2)
}

fn start_wavenumber(symmetry: Symmetry, level: u32) -> f64 {
    let l = level as f64;
    match symmetry {
        Symmetry::Odd => l * PI,
        Symmetry::Even => (2.0 * l - 1.0) * HALF_PI,
    }
}

fn limit_wavenumber(level: u32, p: f64) -> f64 {
    level as f64 * PI / (1.0 - p)
}

/// Barrier-interior kernel functions and their q-derivatives.
///
/// g(q) = sin(√q·p)/√q, c(q) = cos(√q·p) continued analytically through
/// q = 0 (where they become p and 1) and to q < 0 (sinh, cosh). Both are
/// entire in q, evaluated by series in w = q·p² near the seam.
fn interior_gc(q: f64, p: f64) -> (f64, f64, f64, f64) {
    let w = q * p * p;
    if w.abs() < 1e-6 {
        let p2 = p * p;
        let g = p * (1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0);
        let c = 1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0;
        let dg_dq = p * p2 * (-1.0 / 6.0 + w / 60.0 - w * w / 1680.0);
        let dc_dq = p2 * (-0.5 + w / 12.0 - w * w / 240.0);
        (g, c, dg_dq, dc_dq)
    } else if q > 0.0 {
        let kb = q.sqrt();
        let g = (kb * p).sin() / kb;
        let c = (kb * p).cos();
        (g, c, (p * c - g) / (2.0 * q), -0.5 * p * g)
    } else {
        let kc = (-q).sqrt();
        let g = (kc * p).sinh() / kc;
        let c = (kc * p).cosh();
        (g, c, (p * c - g) / (2.0 * q), -0.5 * p * g)
    }
}

/// Continuity residual f(K_a, V) whose roots are the eigen-wavenumbers.
///
/// The Appendix-style matching conditions are multiplied into pole-free
/// form and scaled by 1/K_a so magnitudes are comparable across regimes:
///
/// ```text
///   odd:  g(q)·cos(K_a(1−p)) + (c(q)/K_a)·sin(K_a(1−p))
///   even: c(q)·cos(K_a(1−p)) − (q·g(q)/K_a)·sin(K_a(1−p))
/// ```
///
/// with q = K_a² − (π²/4)(V/ε). At V = 0 these reduce to sin(K_a)/K_a and
/// cos(K_a); at E = V to the exact polynomial branch. Total on K_a > 0,
//  V ≥ 0.
pub fn continuity_residual(symmetry: Symmetry, k_a: f64, v: f64, params: &GasBoxParams) -> f64 {
    residual_and_partials(symmetry, k_a, v, params).0
}

/// Residual together with (∂f/∂K_a, ∂f/∂V); the partials drive the Newton
/// corrector and the continuation predictor dE/dV = −(∂f/∂V)/(∂f/∂E).
pub fn residual_and_partials(
    symmetry: Symmetry,
    k_a: f64,
    v: f64,
    params: &GasBoxParams,
) -> (f64, f64, f64) {
    let p = params.p;
    let e = params.energy_of(k_a);
    let mut q = k_a * k_a - HALF_PI * HALF_PI * v / params.epsilon;
    // Clamp onto the seam so both sides use the identical series branch.
    if (e - v).abs() < SEAM_WIDTH {
        q = 0.0;
    }
    let dq_dv = -HALF_PI * HALF_PI / params.epsilon;
    let (g, c, g_q, c_q) = interior_gc(q, p);
    let theta = k_a * (1.0 - p);
    let (sin_t, cos_t) = theta.sin_cos();
    match symmetry {
        Symmetry::Odd => {
            let f = g * cos_t + c / k_a * sin_t;
            let df_dk = 2.0 * k_a * g_q * cos_t - g * (1.0 - p) * sin_t
                + (2.0 * c_q - c / (k_a * k_a)) * sin_t
                + c / k_a * (1.0 - p) * cos_t;
            let df_dv = dq_dv * (g_q * cos_t + c_q / k_a * sin_t);
            (f, df_dk, df_dv)
        }
        Symmetry::Even => {
            let f = c * cos_t - q * g / k_a * sin_t;
            let df_dk = 2.0 * k_a * c_q * cos_t
                - c * (1.0 - p) * sin_t
                - (2.0 * g + 2.0 * q * g_q - q * g / (k_a * k_a)) * sin_t
                - q * g / k_a * (1.0 - p) * cos_t;
            let df_dv = dq_dv * (c_q * cos_t - (g + q * g_q) / k_a * sin_t);
            (f, df_dk, df_dv)
        }
    }
}

/// Tracks one eigenvalue curve K_a(V) by continuation.
struct Continuation<'a> {
    symmetry: Symmetry,
    level: u32,
    params: &'a GasBoxParams,
    k: f64,
    v: f64,
    k_limit: f64,
}

impl<'a> Continuation<'a> {
    fn new(
        symmetry: Symmetry,
        level: u32,
        params: &'a GasBoxParams,
    ) -> Result<Self, SpectrumError> {
        if level == 0 {
            return Err(SpectrumError::InvalidLevel);
        }
        if level as f64 >= (1.0 - params.p) / params.p {
            return Err(SpectrumError::LevelOutOfRange { level, p: params.p });
        }
        Ok(Self {
            symmetry,
            level,
            params,
            k: start_wavenumber(symmetry, level),
            v: 0.0,
            k_limit: limit_wavenumber(level, params.p),
        })
    }

    fn residual(&self, k: f64, v: f64) -> (f64, f64, f64) {
        residual_and_partials(self.symmetry, k, v, self.params)
    }

    /// One predictor-corrector step to barrier height `v_next`, halving the
    /// step on failure.
    fn advance(&mut self, v_next: f64) -> Result<(), SpectrumError> {
        let mut pending = vec![v_next];
        let mut refinements = 0usize;
        while let Some(target) = pending.pop() {
            if self.try_step(target) {
                continue;
            }
            refinements += 1;
            if refinements > MAX_REFINE {
                return Err(SpectrumError::ContinuationStall { v: target, level: self.level });
            }
            pending.push(target);
            pending.push(0.5 * (self.v + target));
        }
        Ok(())
    }

    fn try_step(&mut self, v_next: f64) -> bool {
        // Predictor from the implicit derivative dK/dV = −f_V/f_K.
        let (_, f_k, f_v) = self.residual(self.k, self.v);
        let slope = if f_k != 0.0 { -f_v / f_k } else { 0.0 };
        let mut x = self.k + slope * (v_next - self.v);

        // The root lies in [previous root, limit): E(V) is nondecreasing and
        // the level approaches lπ/(1−p) from below.
        let mut lo = self.k;
        let mut hi = self.k_limit;
        let (mut f_lo, _, _) = self.residual(lo, v_next);
        if f_lo.abs() < RESIDUAL_TOL {
            // Step so small the root has not measurably moved.
            self.v = v_next;
            return true;
        }
        let (f_hi, _, _) = self.residual(hi, v_next);
        if f_lo.signum() == f_hi.signum() {
            return false;
        }
        if !(lo < x && x < hi) {
            x = 0.5 * (lo + hi);
        }

        for _ in 0..MAX_NEWTON {
            let (f, f_k, _) = self.residual(x, v_next);
            if f.abs() < RESIDUAL_TOL {
                self.k = x;
                self.v = v_next;
                return true;
            }
            if f.signum() == f_lo.signum() {
                lo = x;
                f_lo = f;
            } else {
                hi = x;
            }
            let newton = x - f / f_k;
            x = if f_k != 0.0 && lo < newton && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 * hi {
                self.k = x;
                self.v = v_next;
                return true;
            }
        }
        false
    }

    fn state(&self) -> Eigenstate {
        Eigenstate {
            symmetry: self.symmetry,
            level: self.level,
            barrier_height: self.v,
            k_a: self.k,
            energy: self.params.energy_of(self.k),
            p: self.params.p,
        }
    }
}

/// Log-spaced continuation grid from 0 up to `v` (about 30 steps/decade).
fn continuation_grid(v: f64) -> Vec<f64> {
    let lo = (v * 1e-6).max(1e-3).min(v);
    if lo >= v {
        return vec![v];
    }
    let decades = (v / lo).log10();
    let n = ((30.0 * decades).ceil() as usize).max(8);
    logspace(lo, v, n)
}

/// Solve the (symmetry, level) eigenvalue at barrier height `v` by
/// continuation from the unperturbed V = 0 root.
pub fn solve_eigenvalue(
    symmetry: Symmetry,
    level: u32,
    v: f64,
    params: &GasBoxParams,
) -> Result<Eigenstate, SpectrumError> {
    let mut tracker = Continuation::new(symmetry, level, params)?;
    if v > 0.0 {
        let mut e_prev = params.energy_of(tracker.k);
        for step in continuation_grid(v) {
            tracker.advance(step)?;
            let e = params.energy_of(tracker.k);
            // Level protection: the curve must not lose monotonicity.
            if e < e_prev - 1e-9 * e_prev.max(1.0) {
                return Err(SpectrumError::ContinuationStall { v: step, level });
            }
            e_prev = e;
        }
    }
    Ok(tracker.state())
}

/// Solve one level along an ascending grid of barrier heights, reusing the
/// continuation state between grid points.
pub fn eigencurve(
    symmetry: Symmetry,
    level: u32,
    v_grid: &[f64],
    params: &GasBoxParams,
) -> Result<Vec<Eigenstate>, SpectrumError> {
    let mut tracker = Continuation::new(symmetry, level, params)?;
    let mut out = Vec::with_capacity(v_grid.len());
    for &v in v_grid {
        assert!(v >= tracker.v, "barrier grid must be ascending");
        if v > tracker.v {
            tracker.advance(v)?;
        }
        out.push(tracker.state());
    }
    Ok(out)
}

/// High-barrier asymptotic energy (V ≫ E), with K_c taken from √(V/ε):
///
/// ```text
///   E_l ≈ ε(2l/(1−p))²·(1 − 2(1 ∓ 2e^{−2K_c p})/(K_c(1−p)))
/// ```
///
/// minus sign for odd symmetry, plus for even.
pub fn hba_energy(symmetry: Symmetry, level: u32, v: f64, params: &GasBoxParams) -> f64 {
    let p = params.p;
    let k_c = HALF_PI * (v / params.epsilon).sqrt();
    let t = 2.0 * (-2.0 * k_c * p).exp();
    let sign = match symmetry {
        Symmetry::Odd => -1.0,
        Symmetry::Even => 1.0,
    };
    infinite_barrier_energy(level, params) * (1.0 - 2.0 * (1.0 + sign * t) / (k_c * (1.0 - p)))
}

/// High-barrier splitting Δ_l = ε(4l/(1−p))²·e^{−2K_c p}/(K_c(1−p)), half
/// the odd-even gap (E_odd = E_mean + Δ, E_even = E_mean − Δ).
pub fn hba_splitting(level: u32, v: f64, params: &GasBoxParams) -> f64 {
    let p = params.p;
    let k_c = HALF_PI * (v / params.epsilon).sqrt();
    let l = level as f64;
    params.epsilon * (4.0 * l / (1.0 - p)).powi(2) * (-2.0 * k_c * p).exp() / (k_c * (1.0 - p))
}

/// Zurek's asymptotic values for comparison: mean energy ε(2l/(1−p))² and
/// splitting (ε/π)(4/(1−p))²·e^{−2K_c p} (level-independent).
pub fn zurek_energy(level: u32, v: f64, params: &GasBoxParams) -> (f64, f64) {
    let p = params.p;
    let k_c = HALF_PI * (v / params.epsilon).sqrt();
    let delta = params.epsilon / PI * (4.0 / (1.0 - p)).powi(2) * (-2.0 * k_c * p).exp();
    (infinite_barrier_energy(level, params), delta)
}

/// Inner-region amplitudes for the wavefunction: (A, inner), where `inner`
/// is B (odd) or C (even), with the corrected normalization constants from
/// integrating the piecewise forms.
fn amplitudes(state: &Eigenstate) -> (f64, f64) {
    let p = state.p;
    let k = state.k_a;
    let theta = k * (1.0 - p);
    let sin_t = theta.sin();
    let outer = 2.0 * theta - (2.0 * theta).sin();
    let e = state.energy;
    let v = state.barrier_height;

    if (e - v).abs() < SEAM_WIDTH {
        return match state.symmetry {
            Symmetry::Odd => {
                let a2 = 6.0 * k / (3.0 * outer + 4.0 * p * k * sin_t * sin_t);
                let a = a2.sqrt();
                (a, a * (k * (p - 1.0)).sin() / p)
            }
            Symmetry::Even => {
                let a2 = 2.0 * k / (outer + 4.0 * p * k * sin_t * sin_t);
                let a = a2.sqrt();
                (a, a * sin_t)
            }
        };
    }

    if e > v {
        let k_b = state.k_b().expect("E > V");
        match state.symmetry {
            Symmetry::Odd => {
                let s = (k_b * p).sin();
                let d = k_b * s * s * outer
                    + k * sin_t * sin_t * (2.0 * k_b * p - (2.0 * k_b * p).sin());
                let a = (2.0 * k * k_b * s * s / d).sqrt();
                (a, a * (k * (p - 1.0)).sin() / s)
            }
            Symmetry::Even => {
                let c = (k_b * p).cos();
                let d = k_b * c * c * outer
                    + k * sin_t * sin_t * ((2.0 * k_b * p).sin() + 2.0 * k_b * p);
                let a = (2.0 * k * k_b * c * c / d).sqrt();
                (a, a * sin_t / c)
            }
        }
    } else {
        let k_c = state.k_c().expect("V > E");
        match state.symmetry {
            Symmetry::Odd => {
                let s = (k_c * p).sinh();
                let d = k_c * s * s * outer
                    + k * sin_t * sin_t * ((2.0 * k_c * p).sinh() - 2.0 * k_c * p);
                let a = (2.0 * k * k_c * s * s / d).sqrt();
                (a, a * (k * (p - 1.0)).sin() / s)
            }
            Symmetry::Even => {
                let c = (k_c * p).cosh();
                let d = k_c * c * c * outer
                    + k * sin_t * sin_t * ((2.0 * k_c * p).sinh() + 2.0 * k_c * p);
                let a = (2.0 * k * k_c * c * c / d).sqrt();
                (a, a * sin_t / c)
            }
        }
    }
}

/// Normalized eigenfunction amplitude at −1 ≤ x ≤ 1 (x in units of L).
pub fn wavefunction(state: &Eigenstate, x: f64) -> f64 {
    let p = state.p;
    let k = state.k_a;
    if !(-1.0..=1.0).contains(&x) {
        return 0.0;
    }
    let (a, inner) = amplitudes(state);
    if x < -p {
        a * (k * (1.0 + x)).sin()
    } else if x > p {
        match state.symmetry {
            Symmetry::Odd => -a * (k * (1.0 - x)).sin(),
            Symmetry::Even => a * (k * (1.0 - x)).sin(),
        }
    } else {
        let e = state.energy;
        let v = state.barrier_height;
        if (e - v).abs() < SEAM_WIDTH {
            match state.symmetry {
                Symmetry::Odd => inner * x,
                Symmetry::Even => inner,
            }
        } else if e > v {
            let k_b = state.k_b().expect("E > V");
            match state.symmetry {
                Symmetry::Odd => inner * (k_b * x).sin(),
                Symmetry::Even => inner * (k_b * x).cos(),
            }
        } else {
            let k_c = state.k_c().expect("V > E");
            match state.symmetry {
                Symmetry::Odd => inner * (k_c * x).sinh(),
                Symmetry::Even => inner * (k_c * x).cosh(),
            }
        }
    }
}
