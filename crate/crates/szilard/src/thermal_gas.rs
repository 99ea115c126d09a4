//! Thermal ensembles of the one-atom gas.
//!
//! Energies are in units of the box ground scale ε = 1 and k_B = 1. With
//! the gas confined to one side of a piston at Y, the levels are
//! E_l(Y) = (2l/(Y+1−p))²·ε, so the "volume" is the occupied length
//! V(Y) = Y + 1 − p (box of total length 2).
//!
//! Every closed-form quantity has a brute-force Boltzmann-sum companion
//! with the common 1e-12 relative weight cutoff.

use crate::numeric::linspace;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GasError {
    #[error("piston position must lie in [0, 1-p] (Y = {y}, p = {p})")]
    PistonOutOfRange { y: f64, p: f64 },
    #[error("temperature must be positive, got {t}")]
    InvalidTemperature { t: f64 },
}

/// Occupancy mode of the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GasMode {
    /// Atom roams the whole box (levels ε·n²).
    NoPartition,
    /// Central partition inserted, atom on either side (degeneracy 2).
    Partitioned,
    /// Atom confined left of a piston at Y.
    ConfinedLeft { y: f64 },
    /// Atom confined right of a piston at Y (mirror of left).
    ConfinedRight { y: f64 },
}

/// Thermal state of the gas: mode, temperature and barrier fraction.
#[derive(Debug, Clone, Copy)]
pub struct GasThermalState {
    pub mode: GasMode,
    pub t_g: f64,
    pub p: f64,
}

impl GasThermalState {
    pub fn new(mode: GasMode, t_g: f64, p: f64) -> Result<Self, GasError> {
        if t_g <= 0.0 {
            return Err(GasError::InvalidTemperature { t: t_g });
        }
        if let GasMode::ConfinedLeft { y } | GasMode::ConfinedRight { y } = mode {
            if !(0.0..=1.0 - p).contains(&y) {
                return Err(GasError::PistonOutOfRange { y, p });
            }
        }
        Ok(Self { mode, t_g, p })
    }
}

/// Closed form and Boltzmann-sum value of a partition function.
#[derive(Debug, Clone, Copy)]
pub struct PartitionPair {
    pub closed: f64,
    pub sum: f64,
}

fn boltzmann_sum<F: Fn(u32) -> f64>(energy: F, t: f64, degeneracy: f64) -> (f64, f64) {
    let mut z = 0.0;
    let mut ze = 0.0;
    let e1 = energy(1);
    let mut l = 1u32;
    loop {
        let e = energy(l);
        let w = (-(e - e1) / t).exp();
        if w < 1e-12 {
            break;
        }
        z += degeneracy * w;
        ze += degeneracy * w * e;
        l += 1;
    }
    // Re-attach the factored ground weight.
    let scale = (-e1 / t).exp();
    (z * scale, ze / z)
}

/// Partition function Z of the state.
///
/// Closed forms: Z_G0 ≈ ½√(πT/ε), Z_G1 ≈ (1−p)/2·√(πT/ε),
/// Z(confined at Y) ≈ (Y+1−p)/4·√(πT/ε).
pub fn gas_partition(state: &GasThermalState) -> PartitionPair {
    let t = state.t_g;
    let root = (PI * t).sqrt();
    let p = state.p;
    let (closed, sum) = match state.mode {
        GasMode::NoPartition => (
            0.5 * root,
            boltzmann_sum(|n| (n as f64).powi(2), t, 1.0).0,
        ),
        GasMode::Partitioned => (
            (1.0 - p) / 2.0 * root,
            boltzmann_sum(|l| (2.0 * l as f64 / (1.0 - p)).powi(2), t, 2.0).0,
        ),
        GasMode::ConfinedLeft { y } | GasMode::ConfinedRight { y } => (
            (y + 1.0 - p) / 4.0 * root,
            boltzmann_sum(|l| (2.0 * l as f64 / (y + 1.0 - p)).powi(2), t, 1.0).0,
        ),
    };
    PartitionPair { closed, sum }
}

/// Mean internal energy (closed form ½·T in every mode) with its sum.
pub fn gas_mean_energy(state: &GasThermalState) -> PartitionPair {
    let t = state.t_g;
    let p = state.p;
    let sum = match state.mode {
        GasMode::NoPartition => boltzmann_sum(|n| (n as f64).powi(2), t, 1.0).1,
        GasMode::Partitioned => {
            boltzmann_sum(|l| (2.0 * l as f64 / (1.0 - p)).powi(2), t, 2.0).1
        }
        GasMode::ConfinedLeft { y } | GasMode::ConfinedRight { y } => {
            boltzmann_sum(|l| (2.0 * l as f64 / (y + 1.0 - p)).powi(2), t, 1.0).1
        }
    };
    PartitionPair { closed: 0.5 * t, sum }
}

/// Work required to raise the central barrier from V = 0 to ∞.
#[derive(Debug, Clone, Copy)]
pub struct InsertionWork {
    pub w_odd: f64,
    pub w_even: f64,
    pub w_mean: f64,
}

/// Closed-form insertion work:
/// W_odd = ½T·f(p)/(1−p)², f(p) = p(2−p);
/// W_even adds 4√(ε/πT) + 2ε/T inside the bracket — the (2l−1) offset of
/// the even levels contributes 2√(T/π) + 1 per the Gaussian integrals
/// ∫e^(−εy²/T)dy = ¼√(πT), ∫y·e^(−εy²/T)dy = T/4.
pub fn insertion_work(t_g: f64, p: f64) -> InsertionWork {
    let f = p * (2.0 - p);
    let scale = 0.5 * t_g / (1.0 - p).powi(2);
    let w_odd = scale * f;
    let w_even = scale * (f + 4.0 * (1.0 / (PI * t_g)).sqrt() + 2.0 / t_g);
    InsertionWork { w_odd, w_even, w_mean: 0.5 * (w_odd + w_even) }
}

/// Eigenshift-sum oracle: Σ p_l·ΔE_l over the V = 0 Boltzmann distribution
/// with the exact hard-wall shifts ΔE_l = E_l(∞) − E_l(0) per symmetry,
/// averaged over the two symmetry sectors.
pub fn insertion_work_oracle(t_g: f64, p: f64) -> f64 {
    let shift_odd = |l: f64| 4.0 * l * l * (1.0 / (1.0 - p).powi(2) - 1.0);
    let shift_even =
        |l: f64| (2.0 * l / (1.0 - p)).powi(2) - (2.0 * l - 1.0).powi(2);
    let sector = |e0: &dyn Fn(f64) -> f64, shift: &dyn Fn(f64) -> f64| {
        let mut z = 0.0;
        let mut zs = 0.0;
        let e1 = e0(1.0);
        let mut l = 1.0f64;
        loop {
            let w = (-(e0(l) - e1) / t_g).exp();
            if w < 1e-12 {
                break;
            }
            z += w;
            zs += w * shift(l);
            l += 1.0;
        }
        zs / z
    };
    let w_odd = sector(&|l| 4.0 * l * l, &shift_odd);
    let w_even = sector(&|l| (2.0 * l - 1.0).powi(2), &shift_even);
    0.5 * (w_odd + w_even)
}

/// How the gas exchanges heat while the piston moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionRegime {
    /// No contact with any bath; occupation probabilities frozen.
    Isolated,
    /// Continual rethermalization at a drifting temperature with zero net
    /// heat exchange.
    Essential,
    /// Constant contact with the T_G bath.
    Isothermal,
}

/// Mean-state profile of an expansion leg starting at Y = 0.
/// `work` is the energy extracted from the gas into the work reservoir
/// over 0 → Y (positive on expansion).
#[derive(Debug, Clone, Copy)]
pub struct ExpansionPoint {
    pub energy: f64,
    /// Outward force on the piston (positive); P·V(Y) = T(Y).
    pub pressure: f64,
    pub temperature: f64,
    pub work: f64,
}

/// Mean energy, pressure, temperature and extracted work at piston
/// position Y for an expansion that started from Y = 0.
pub fn expansion_profile(
    regime: ExpansionRegime,
    y: f64,
    t_g: f64,
    p: f64,
) -> ExpansionPoint {
    let vol = y + 1.0 - p;
    match regime {
        ExpansionRegime::Isolated => {
            let r = (1.0 - p) / vol;
            ExpansionPoint {
                energy: 0.5 * t_g * r * r,
                pressure: t_g * (1.0 - p).powi(2) / vol.powi(3),
                temperature: t_g * r * r,
                work: 0.5 * t_g * y * (y + 2.0 * (1.0 - p)) / (vol * vol),
            }
        }
        ExpansionRegime::Essential => {
            // Identical mean behaviour, computed through the drifting
            // temperature T(Y) = T_G·((1−p)/(Y+1−p))².
            let t = t_g * ((1.0 - p) / vol).powi(2);
            ExpansionPoint {
                energy: 0.5 * t,
                pressure: t / vol,
                temperature: t,
                work: 0.5 * (t_g - t),
            }
        }
        ExpansionRegime::Isothermal => ExpansionPoint {
            energy: 0.5 * t_g,
            pressure: t_g / vol,
            temperature: t_g,
            work: t_g * (vol / (1.0 - p)).ln(),
        },
    }
}

/// Isolated recompression after rethermalizing at full expansion: the gas
/// starts at Y = 1−p in equilibrium and is compressed back to `y`.
/// `work` is again the energy extracted from the gas (negative: the piston
/// works on the gas).
pub fn recompression_profile(y: f64, t_g: f64, p: f64) -> ExpansionPoint {
    let vol = y + 1.0 - p;
    let r = (1.0 - p) / vol;
    ExpansionPoint {
        energy: 2.0 * t_g * r * r,
        pressure: 4.0 * t_g * (1.0 - p).powi(2) / vol.powi(3),
        temperature: 4.0 * t_g * r * r,
        work: -2.0 * t_g * (r * r - 0.25),
    }
}

fn regime_weights(regime: ExpansionRegime, y: f64, t_g: f64, p: f64) -> impl Fn(f64) -> f64 {
    // Occupation weight of level l at piston position y, up to
    // normalization.
    let vol = y + 1.0 - p;
    let beta_scale = match regime {
        // Frozen initial probabilities; essential isolation reproduces them
        // exactly because T(Y) rescales with the volume.
        ExpansionRegime::Isolated | ExpansionRegime::Essential => {
            (2.0 / (1.0 - p)).powi(2) / t_g
        }
        ExpansionRegime::Isothermal => (2.0 / vol).powi(2) / t_g,
    };
    move |l: f64| (-beta_scale * l * l).exp()
}

/// Boltzmann-sum oracle for the mean energy and pressure at position Y.
pub fn expansion_profile_sum(
    regime: ExpansionRegime,
    y: f64,
    t_g: f64,
    p: f64,
) -> (f64, f64) {
    let vol = y + 1.0 - p;
    let weight = regime_weights(regime, y, t_g, p);
    let (mut z, mut ze, mut zp) = (0.0, 0.0, 0.0);
    let w1 = weight(1.0);
    let mut l = 1.0f64;
    loop {
        let w = weight(l) / w1;
        if w < 1e-12 {
            break;
        }
        z += w;
        ze += w * (2.0 * l / vol).powi(2);
        zp += w * 8.0 * l * l / vol.powi(3);
        l += 1.0;
    }
    (ze / z, zp / z)
}

/// Simpson quadrature of the summed pressure: the work-extraction oracle.
pub fn expansion_work_sum(
    regime: ExpansionRegime,
    y_from: f64,
    y_to: f64,
    t_g: f64,
    p: f64,
    panels: usize,
) -> f64 {
    let h = (y_to - y_from) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let a = y_from + i as f64 * h;
        let f = |y: f64| expansion_profile_sum(regime, y, t_g, p).1;
        total += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
    }
    total
}

/// Second-moment ratios of energy and pressure, from Boltzmann sums.
/// Closed forms: ⟨E²⟩/⟨E⟩² = ⟨P²⟩/⟨P⟩² = 3, variance ratios = 2.
#[derive(Debug, Clone, Copy)]
pub struct FluctuationMoments {
    pub energy_ratio: f64,
    pub pressure_ratio: f64,
    pub energy_var_ratio: f64,
    pub pressure_var_ratio: f64,
}

pub fn fluctuation_moments(
    regime: ExpansionRegime,
    y: f64,
    t_g: f64,
    p: f64,
) -> FluctuationMoments {
    let vol = y + 1.0 - p;
    let weight = regime_weights(regime, y, t_g, p);
    let (mut z, mut e1, mut e2, mut p1, mut p2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let w1 = weight(1.0);
    let mut l = 1.0f64;
    loop {
        let w = weight(l) / w1;
        if w < 1e-12 {
            break;
        }
        let e = (2.0 * l / vol).powi(2);
        let pr = 8.0 * l * l / vol.powi(3);
        z += w;
        e1 += w * e;
        e2 += w * e * e;
        p1 += w * pr;
        p2 += w * pr * pr;
        l += 1.0;
    }
    let (e1, e2, p1, p2) = (e1 / z, e2 / z, p1 / z, p2 / z);
    FluctuationMoments {
        energy_ratio: e2 / (e1 * e1),
        pressure_ratio: p2 / (p1 * p1),
        energy_var_ratio: (e2 - e1 * e1) / (e1 * e1),
        pressure_var_ratio: (p2 - p1 * p1) / (p1 * p1),
    }
}

/// One stochastic realization of the isothermal expansion work: at each of
/// `n_steps` equal-Y steps a level is drawn from the Boltzmann distribution
/// at the step midpoint and its exact ΔE over the step is accrued.
pub fn mc_expansion_work(n_steps: usize, t_g: f64, p: f64, seed: u64) -> f64 {
    mc_expansion_ensemble(n_steps, t_g, p, &[seed])[0]
}

/// Expansion-work realizations for many seeds, sharing the per-step
/// sampling tables.
pub fn mc_expansion_ensemble(n_steps: usize, t_g: f64, p: f64, seeds: &[u64]) -> Vec<f64> {
    assert!(n_steps >= 1);
    let y_grid = linspace(0.0, 1.0 - p, n_steps + 1);

    // Per-step cumulative Boltzmann tables at the midpoint volume.
    let mut tables: Vec<Vec<f64>> = Vec::with_capacity(n_steps);
    for m in 0..n_steps {
        let vol = 0.5 * (y_grid[m] + y_grid[m + 1]) + 1.0 - p;
        let beta = (2.0 / vol).powi(2) / t_g;
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        let mut l = 1.0f64;
        loop {
            let w = (-beta * (l * l - 1.0)).exp();
            if w < 1e-12 && l > 1.0 {
                break;
            }
            acc += w;
            cdf.push(acc);
            l += 1.0;
        }
        let norm = acc;
        for c in &mut cdf {
            *c /= norm;
        }
        tables.push(cdf);
    }

    seeds
        .iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut work = 0.0;
            for (m, cdf) in tables.iter().enumerate() {
                let u: f64 = rng.gen();
                let idx = cdf.partition_point(|&c| c < u);
                let l = (idx + 1) as f64;
                let e_before = (2.0 * l / (y_grid[m] + 1.0 - p)).powi(2);
                let e_after = (2.0 * l / (y_grid[m + 1] + 1.0 - p)).powi(2);
                work += e_before - e_after;
            }
            work
        })
        .collect()
}

/// Isothermal gearing h(Y) = (T_G/M_w g)·ln(1 + Y/(1−p)); full stroke gives
/// h_T = (T_G/M_w g)·ln 2.
pub fn gearing_height(y: f64, t_g: f64, mg: f64, p: f64) -> f64 {
    t_g / mg * (1.0 + y / (1.0 - p)).ln()
}

/// Essential-isolation gearing alternative, maximum 3T_G/(8 M_w g).
pub fn gearing_height_essential(y: f64, t_g: f64, mg: f64, p: f64) -> f64 {
    0.5 * t_g / mg * (1.0 - ((1.0 - p) / (y + 1.0 - p)).powi(2))
}
