//! Airy-function model of a quantum weight bouncing on a floor in a
//! uniform gravitational field.
//!
//! Above a floor at height h the eigenfunctions are shifted Airy functions
//! with energies E_n = (h − a_n·H)·M_w·g, where a_n < 0 is the n-th zero of
//! Ai and H = (ħ²/2M_w²g)^(1/3) the characteristic height. Inserting a
//! shelf at height h splits each unraised eigenstate into amplitudes α_n(h)
//! above and β_n(h) below the shelf; thermally averaged, α gives the
//! probability that an unraised weight is caught above the shelf — the
//! error channel of the engine's resetting mechanism.

pub mod airy;

pub use airy::{airy_derivative_at_zero, airy_value_and_derivative, airy_zero};

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeightError {
    /// Public Airy evaluation is specified for |z| ≤ 20.
    #[error("airy evaluation out of the supported domain |z| <= 20 (z = {z})")]
    DomainTooLarge { z: f64 },
    #[error("weight parameters must be positive (Mg = {mg}, H = {h}, T_W = {t_w})")]
    InvalidParams { mg: f64, h: f64, t_w: f64 },
}

/// Weight force, characteristic height and bath temperature.
///
/// The natural unit choice is Mg·H = 1, all energies in units of Mg·H.
#[derive(Debug, Clone, Copy)]
pub struct WeightParams {
    /// Weight force M_w·g (energy per unit height).
    pub mg: f64,
    /// Characteristic height H = (ħ²/2M_w²g)^(1/3).
    pub height_scale: f64,
    /// Weight bath temperature T_W.
    pub t_w: f64,
}

impl WeightParams {
    pub fn new(mg: f64, height_scale: f64, t_w: f64) -> Result<Self, WeightError> {
        if mg > 0.0 && height_scale > 0.0 && t_w > 0.0 {
            Ok(Self { mg, height_scale, t_w })
        } else {
            Err(WeightError::InvalidParams { mg, h: height_scale, t_w })
        }
    }

    /// Natural units Mg = H = 1 at temperature `t_w` (in units of MgH).
    pub fn natural(t_w: f64) -> Result<Self, WeightError> {
        Self::new(1.0, 1.0, t_w)
    }

    /// Ground energy scale Mg·H.
    pub fn mgh(&self) -> f64 {
        self.mg * self.height_scale
    }
}

/// Amplitudes of one weight eigenstate above/below an inserted shelf.
/// β = √(1−α²) by construction, so α² + β² = 1 exactly.
#[derive(Debug, Clone, Copy)]
pub struct ShelfSplit {
    pub n: u32,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Indexed negative zero of the Airy function.
#[derive(Debug, Clone, Copy)]
pub struct AiryZero {
    pub n: u32,
    pub a_n: f64,
}

impl AiryZero {
    pub fn new(n: u32) -> Self {
        Self { n, a_n: airy_zero(n) }
    }
}

/// Energy of level n above a floor at height h: (h − a_n·H)·Mg.
pub fn weight_energy(n: u32, h: f64, params: &WeightParams) -> f64 {
    (h - airy_zero(n) * params.height_scale) * params.mg
}

/// Level index below which a shelf at height h sits above the last node of
/// the eigenstate, so the state lies entirely below: (2/3π)(h/H)^(3/2).
fn shelf_cutoff(h: f64, params: &WeightParams) -> f64 {
    2.0 / (3.0 * PI) * (h / params.height_scale).powf(1.5)
}

/// Amplitude of level n above a shelf at height h:
/// α = (1 − (2/3πn)^(2/3)·h/H)^(1/4), zero below the node cutoff.
pub fn alpha_above(n: u32, h: f64, params: &WeightParams) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    if nf < shelf_cutoff(h, params) {
        return 0.0;
    }
    let inner = 1.0 - (2.0 / (3.0 * PI * nf)).powf(2.0 / 3.0) * h / params.height_scale;
    inner.max(0.0).powf(0.25)
}

/// Above/below split of level n at shelf height h.
pub fn shelf_split(n: u32, h: f64, params: &WeightParams) -> ShelfSplit {
    let alpha = alpha_above(n, h, params);
    ShelfSplit { n, h, alpha, beta: (1.0 - alpha * alpha).sqrt() }
}

/// Probability that an unraised thermal weight is above the shelf:
/// P₁(h, T_W) = e^(−Mg·h/T_W). The companion [`p_above_shelf_sum`] sums the
/// level-resolved amplitudes.
pub fn p_above_shelf(h: f64, params: &WeightParams) -> f64 {
    (-params.mg * h / params.t_w).exp()
}

/// Complement P₂ = 1 − P₁ (exact).
pub fn p_below_shelf(h: f64, params: &WeightParams) -> f64 {
    1.0 - p_above_shelf(h, params)
}

/// Iterates Boltzmann weights e^(a_n·MgH/T) relative to the ground term,
/// stopping at the 1e-12 relative cutoff.
fn thermal_sum<F: FnMut(u32, f64, f64)>(params: &WeightParams, mut visit: F) {
    let r = params.mgh() / params.t_w;
    let a1 = airy_zero(1);
    let mut n = 1u32;
    loop {
        let a_n = airy_zero(n);
        let w = ((a_n - a1) * r).exp();
        if w < 1e-12 {
            break;
        }
        visit(n, a_n, w);
        n += 1;
    }
}

/// Summation oracle for P₁: Σ e^(a_m·MgH/T)·α_m(h)² / Z_W0.
pub fn p_above_shelf_sum(h: f64, params: &WeightParams) -> f64 {
    let mut above = 0.0;
    let mut z = 0.0;
    thermal_sum(params, |n, _a, w| {
        let alpha = alpha_above(n, h, params);
        above += w * alpha * alpha;
        z += w;
    });
    above / z
}

/// First and second thermal moments of a raised weight, with the virial
/// kinetic/potential split.
#[derive(Debug, Clone, Copy)]
pub struct ThermalMoments {
    /// Partition sum Z_W1(h).
    pub z: f64,
    pub mean_energy: f64,
    pub var_energy: f64,
    pub mean_kinetic: f64,
    pub mean_potential: f64,
}

/// Closed forms alongside the brute-force level sums.
#[derive(Debug, Clone, Copy)]
pub struct MomentsPair {
    pub closed: ThermalMoments,
    pub numeric: ThermalMoments,
}

/// Thermal moments of the weight above a floor at height h.
///
/// Closed forms (valid for T_W ≳ 10·MgH):
/// Z ≈ e^(−h·Mg/T)·(T/MgH)^(3/2)/(2√π), ⟨E⟩ = Mg·h + (3/2)T,
/// var E = (3/2)T², ⟨KE⟩ = T/2, ⟨PE⟩ = T + Mg·h.
pub fn weight_thermal_moments(h: f64, params: &WeightParams) -> MomentsPair {
    let t = params.t_w;
    let mgh = params.mgh();
    let closed = ThermalMoments {
        z: (-params.mg * h / t).exp() / (2.0 * PI.sqrt()) * (t / mgh).powf(1.5),
        mean_energy: params.mg * h + 1.5 * t,
        var_energy: 1.5 * t * t,
        mean_kinetic: 0.5 * t,
        mean_potential: t + params.mg * h,
    };

    let (mut z, mut se, mut se2, mut ske, mut spe) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let a1 = airy_zero(1);
    thermal_sum(params, |_n, a_n, w_rel| {
        let e = (h - a_n * params.height_scale) * params.mg;
        let internal = -a_n * mgh;
        z += w_rel;
        se += w_rel * e;
        se2 += w_rel * e * e;
        // Linear-potential virial: ⟨PE⟩_n = (2/3)·E_internal above the floor.
        ske += w_rel * internal / 3.0;
        spe += w_rel * (2.0 * internal / 3.0 + params.mg * h);
    });
    let scale = (a1 * mgh / t).exp();
    let mean = se / z;
    let numeric = ThermalMoments {
        z: z * scale,
        mean_energy: mean,
        var_energy: se2 / z - mean * mean,
        mean_kinetic: ske / z,
        mean_potential: spe / z,
    };
    MomentsPair { closed, numeric }
}

/// Mean energies of a thermal weight conditioned above/below a shelf at h:
/// E(z>h) = (3/2)T + Mg·h and
/// E(z<h) = (3/2)T − Mg·h·e^(−Mg·h/T)/(1 − e^(−Mg·h/T)).
pub fn conditional_energies(h: f64, params: &WeightParams) -> (f64, f64) {
    let t = params.t_w;
    let x = params.mg * h;
    let q = (-x / t).exp();
    (1.5 * t + x, 1.5 * t - x * q / (1.0 - q))
}

/// Numeric Gibbs entropy −Σ p_n ln p_n of the thermal weight at floor
/// height h; exactly h-independent since the height only shifts every
/// level by Mg·h.
pub fn numeric_entropy(h: f64, params: &WeightParams) -> f64 {
    let t = params.t_w;
    let mut weights = Vec::new();
    thermal_sum(params, |_n, a_n, _w| {
        weights.push(((a_n * params.height_scale - h) * params.mg / t).exp());
    });
    let z: f64 = weights.iter().sum();
    -weights
        .iter()
        .map(|w| {
            let p = w / z;
            p * p.ln()
        })
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wp(t_w: f64) -> WeightParams {
        WeightParams::natural(t_w).unwrap()
    }

    #[test]
    fn weight_energy_basics() {
        let p = wp(10.0);
        // At h = 0 the energy is −a_n·MgH.
        assert!((weight_energy(1, 0.0, &p) - 2.338_107_410_459_767).abs() < 1e-9);
        // Raising the floor adds Mg·δ for every level.
        for n in [1u32, 5, 40] {
            let d = weight_energy(n, 0.7, &p) - weight_energy(n, 0.0, &p);
            assert!((d - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_at_asymptotic_nodes() {
        let p = wp(10.0);
        // Shelf at the m-th node (asymptotic heights): α_n(h_m) = (m/n)^(1/6).
        let asymptotic = |k: f64| (1.5 * PI * k).powf(2.0 / 3.0);
        let h = asymptotic(4.0) - asymptotic(2.0);
        let alpha = alpha_above(4, h, &p);
        assert!(
            (alpha - (2.0f64 / 4.0).powf(1.0 / 6.0)).abs() < 1e-12,
            "{alpha}"
        );
        // Whole state above the floor when there is no shelf.
        assert_eq!(alpha_above(7, 0.0, &p), 1.0);
    }

    #[test]
    fn alpha_against_airy_derivative_oracle() {
        // α_n(h_m)² = (Ai'(a_m)/Ai'(a_n))² at exact node heights, within the
        // asymptotic formula's few-percent error.
        let p = wp(10.0);
        let (n, m) = (20u32, 10u32);
        let h = (airy_zero(m) - airy_zero(n)) * p.height_scale;
        let alpha2 = alpha_above(n, h, &p).powi(2);
        let exact = (airy_derivative_at_zero(m) / airy_derivative_at_zero(n)).powi(2);
        assert!(
            ((alpha2 - exact) / exact).abs() < 0.03,
            "α² = {alpha2}, oracle = {exact}"
        );
    }

    proptest! {
        #[test]
        fn alpha_monotonic(n in 1u32..200, h in 0.0f64..40.0) {
            let p = wp(10.0);
            // Nonincreasing in h.
            let a0 = alpha_above(n, h, &p);
            let a1 = alpha_above(n, h + 0.3, &p);
            prop_assert!(a1 <= a0 + 1e-12);
            // Nondecreasing in n.
            let b = alpha_above(n + 1, h, &p);
            prop_assert!(b + 1e-12 >= a0);
            // Completeness is exact by construction.
            let split = shelf_split(n, h, &p);
            prop_assert!((split.alpha.powi(2) + split.beta.powi(2) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn shelf_probability_closed_form() {
        let p = wp(100.0);
        assert_eq!(p_above_shelf(0.0, &p), 1.0);
        // Median height h = (T/Mg)·ln 2.
        let h = p.t_w * 2f64.ln() / p.mg;
        assert!((p_above_shelf(h, &p) - 0.5).abs() < 1e-12);
        assert!((p_above_shelf(h, &p) + p_below_shelf(h, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shelf_probability_sum_oracle() {
        let p = wp(100.0);
        let h = p.t_w / p.mg;
        let numeric = p_above_shelf_sum(h, &p);
        let closed = p_above_shelf(h, &p);
        assert!(
            ((numeric - closed) / closed).abs() < 0.02,
            "sum {numeric} vs closed {closed}"
        );
    }

    #[test]
    fn thermal_moments_closed_and_numeric() {
        let p = wp(100.0);
        let m = weight_thermal_moments(0.0, &p);
        assert!((m.closed.mean_energy - 150.0).abs() < 1e-12);
        assert!((m.closed.var_energy - 15000.0).abs() < 1e-9);
        assert!((m.closed.mean_kinetic - 50.0).abs() < 1e-12);
        for (num, cl) in [
            (m.numeric.z, m.closed.z),
            (m.numeric.mean_energy, m.closed.mean_energy),
            (m.numeric.var_energy, m.closed.var_energy),
            (m.numeric.mean_kinetic, m.closed.mean_kinetic),
            (m.numeric.mean_potential, m.closed.mean_potential),
        ] {
            assert!(((num - cl) / cl).abs() < 0.01, "numeric {num} vs closed {cl}");
        }
        // Raised floor: same internal state, shifted by Mg·h.
        let h = 42.0;
        let raised = weight_thermal_moments(h, &p);
        assert!((raised.closed.mean_energy - (m.closed.mean_energy + h)).abs() < 1e-9);
    }

    #[test]
    fn conditional_energy_decomposition() {
        let p = wp(7.0);
        for &h in &[0.3, 1.0, 5.0, 30.0] {
            let (above, below) = conditional_energies(h, &p);
            let p1 = p_above_shelf(h, &p);
            let total = p1 * above + (1.0 - p1) * below;
            assert!(
                (total - 1.5 * p.t_w).abs() < 1e-12,
                "h={h}: decomposition {total}"
            );
        }
        // E(z>h) at h = T/Mg is (5/2)T; E(z<h) → (3/2)T for high shelves.
        let (above, _) = conditional_energies(p.t_w / p.mg, &p);
        assert!((above - 2.5 * p.t_w).abs() < 1e-12);
        let (_, below) = conditional_energies(50.0 * p.t_w / p.mg, &p);
        assert!((below - 1.5 * p.t_w).abs() < 1e-9);
    }

    #[test]
    fn raising_is_isentropic() {
        let p = wp(100.0);
        let s0 = numeric_entropy(0.0, &p);
        for &h in &[1.0 * p.t_w, 10.0 * p.t_w] {
            let s = numeric_entropy(h / p.mg, &p);
            assert!((s - s0).abs() < 1e-9, "S({h}) = {s} vs {s0}");
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(WeightParams::new(0.0, 1.0, 1.0).is_err());
        assert!(WeightParams::natural(-1.0).is_err());
    }
}
