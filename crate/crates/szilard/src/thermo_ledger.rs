//! Entropy and free-energy bookkeeping.
//!
//! Free energy F = −T·ln Z is the isothermally extractable work; the
//! Gibbs-von Neumann entropy satisfies E = F + T·S in equilibrium. Mixing
//! orthogonal subensembles adds −Σp·ln p to the entropy and T·Σp·ln p to
//! the free energy, and a subensemble taken alone carries
//! F_a = F − T·ln p_a. These rules, plus the bath book entries dS = dE/T,
//! give complete stage-by-stage ledgers of the raising and lowering
//! cycles.
//!
//! Ledger units: gas energies in ε, weight energies via natural units
//! Mg = H = 1, entropies in nats, k_B = 1. Piston internal entropy and
//! free energy are taken as zero (they cancel in every delta).

use crate::engine_cycle::{cycle_weights, EngineParams};
use crate::numeric::{x_ln_x, x_ln_y};
use crate::quantum_weight::WeightParams;
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("subensemble probabilities must sum to 1 (Σp = {sum})")]
    ProbabilityMismatch { sum: f64 },
}

/// One equilibrium subensemble entering a mixture.
#[derive(Debug, Clone, Copy)]
pub struct Subensemble {
    pub probability: f64,
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
    pub temperature: f64,
}

impl Subensemble {
    /// Build from (p, F, S, T) with E = F + T·S.
    pub fn from_free_energy(probability: f64, free_energy: f64, entropy: f64, temperature: f64) -> Self {
        Self {
            probability,
            energy: free_energy + temperature * entropy,
            entropy,
            free_energy,
            temperature,
        }
    }

    /// E = F + T·S consistency residual.
    pub fn consistency(&self) -> f64 {
        self.energy - self.free_energy - self.temperature * self.entropy
    }
}

/// {E, S, F} triple of one subsystem.
#[derive(Debug, Clone, Copy)]
pub struct Thermo {
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
}

/// Entropy and free energy of the unpartitioned gas at T_G (ε = 1):
/// S_G0 = ½(1 + ln(πT) − 2ln2), F_G0 = (T/2)(2ln2 − ln(πT)).
pub fn gas_thermo_unpartitioned(t_g: f64) -> Thermo {
    let s = 0.5 * (1.0 + (PI * t_g).ln() - 2.0 * LN_2);
    let f = 0.5 * t_g * (2.0 * LN_2 - (PI * t_g).ln());
    Thermo { energy: 0.5 * t_g, entropy: s, free_energy: f }
}

/// Gas confined to one side of the piston at Y:
/// S = S_G0 − ln(2/(Y+1−p)), F = F_G0 + T·ln(2/(Y+1−p)), E = T/2.
pub fn gas_thermo(y: f64, t_g: f64, p: f64) -> Thermo {
    let base = gas_thermo_unpartitioned(t_g);
    let squeeze = (2.0 / (y + 1.0 - p)).ln();
    Thermo {
        energy: base.energy,
        entropy: base.entropy - squeeze,
        free_energy: base.free_energy + t_g * squeeze,
    }
}

/// Raised thermal weight at floor height h: S is h-independent,
/// F(h) = F(0) + Mg·h, E = Mg·h + (3/2)T_W.
pub fn weight_thermo(h: f64, params: &WeightParams) -> Thermo {
    let t = params.t_w;
    let mgh = params.mgh();
    let s = 1.5 * (1.0 + (t / mgh).ln()) - (2.0 * PI.sqrt()).ln();
    let f = params.mg * h - t * (1.5 * (t / mgh).ln() - (2.0 * PI.sqrt()).ln());
    Thermo { energy: params.mg * h + 1.5 * t, entropy: s, free_energy: f }
}

fn check_probabilities(parts: &[Subensemble]) -> Result<(), LedgerError> {
    let sum: f64 = parts.iter().map(|s| s.probability).sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(LedgerError::ProbabilityMismatch { sum });
    }
    Ok(())
}

/// Mixing entropy S = Σp_i·S_i − Σp_i·ln p_i (orthogonal subensembles).
pub fn mix_entropy(parts: &[Subensemble]) -> Result<f64, LedgerError> {
    check_probabilities(parts)?;
    Ok(parts
        .iter()
        .map(|s| s.probability * s.entropy - x_ln_x(s.probability))
        .sum())
}

/// Mixing free energy F = Σp_i·F_i + T·Σp_i·ln p_i (equilibrium mixture at
/// temperature T).
pub fn mix_free_energy(parts: &[Subensemble], temperature: f64) -> Result<f64, LedgerError> {
    check_probabilities(parts)?;
    Ok(parts
        .iter()
        .map(|s| s.probability * s.free_energy + temperature * x_ln_x(s.probability))
        .sum())
}

/// Free energy of a subensemble occurring with probability p in an
/// ensemble of free energy F: F_a = F − T·ln p.
pub fn subensemble_free_energy(ensemble_f: f64, probability: f64, temperature: f64) -> f64 {
    ensemble_f - temperature * probability.ln()
}

/// Spontaneous-occurrence probability from free energies:
/// p_a = e^((F − F_a)/T).
pub fn prob_from_free_energy(ensemble_f: f64, subensemble_f: f64, temperature: f64) -> f64 {
    ((ensemble_f - subensemble_f) / temperature).exp()
}

/// Non-equilibrium free energy of a mixture with out-of-equilibrium
/// weights: F' = Σ p'_α (F_α + T·ln p'_α). Exceeds the equilibrium F of
/// the same subensembles unless p' is the Gibbs distribution.
pub fn noneq_free_energy(
    probs: &[f64],
    free_energies: &[f64],
    temperature: f64,
) -> Result<f64, LedgerError> {
    assert_eq!(probs.len(), free_energies.len());
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(LedgerError::ProbabilityMismatch { sum });
    }
    Ok(probs
        .iter()
        .zip(free_energies)
        .map(|(&p, &f)| p * f + temperature * x_ln_x(p))
        .sum())
}

/// Characteristic free-energy change when entropy S moves through a
/// temperature difference: ΔF = −S·(T₂ − T₁).
pub fn entropy_engine_delta(entropy: f64, t1: f64, t2: f64) -> f64 {
    -entropy * (t2 - t1)
}

/// Heat-bath book entry: cumulative energy and entropy change.
#[derive(Debug, Clone, Copy, Default)]
pub struct BathDelta {
    pub energy: f64,
    pub entropy: f64,
}

/// Piston + weights group cell; `free_energy` is `None` where the paper
/// declares F undefined (correlated subsystems at two temperatures).
#[derive(Debug, Clone, Copy)]
pub struct GroupThermo {
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: Option<f64>,
}

/// One ledger row. Either the gas is a separable subsystem
/// (`gas` + `piston_weights`) or everything is one correlated group
/// (`combined`).
#[derive(Debug, Clone)]
pub struct LedgerRow {
    pub stage: &'static str,
    pub tg_bath: BathDelta,
    pub tw_bath: BathDelta,
    pub gas: Option<Thermo>,
    pub piston_weights: Option<GroupThermo>,
    pub combined: Option<GroupThermo>,
}

impl LedgerRow {
    /// Total energy of engine plus bath deltas; constant along a cycle.
    pub fn total_energy(&self) -> f64 {
        let system = match (&self.gas, &self.piston_weights, &self.combined) {
            (Some(g), Some(pw), None) => g.energy + pw.energy,
            (None, None, Some(c)) => c.energy,
            _ => unreachable!("ledger row must be split or combined"),
        };
        self.tg_bath.energy + self.tw_bath.energy + system
    }

    /// Total entropy including bath deltas, when all cells are defined.
    pub fn total_entropy(&self) -> f64 {
        let system = match (&self.gas, &self.piston_weights, &self.combined) {
            (Some(g), Some(pw), None) => g.entropy + pw.entropy,
            (None, None, Some(c)) => c.entropy,
            _ => unreachable!(),
        };
        self.tg_bath.entropy + self.tw_bath.entropy + system
    }
}

/// Stage rows plus cycle totals for the raising cycle.
#[derive(Debug, Clone)]
pub struct RaisingLedger {
    pub rows: Vec<LedgerRow>,
    /// ΔS_R/k = −ln2 − w1·lnP₁ − Σ₁₋₃ wₙ·ln wₙ; always ≥ 0.
    pub ds_r: f64,
    /// ΔF_R = kT_W·(Σ₁₋₃ wₙ·ln wₙ − (w2+w3)·lnP₁); always ≤ 0.
    pub df_r: f64,
    /// Stage-b free-energy change −(T_W−T_G)·ln2, the ΔF = −SΔT signature.
    pub stage_b_df: f64,
}

/// Stage rows plus cycle totals for the lowering cycle.
#[derive(Debug, Clone)]
pub struct LoweringLedger {
    pub rows: Vec<LedgerRow>,
    /// Stage-f change ΔS_L/k = (w5+w6)·lnP₁ − Σ₄₋₆ wₙ·ln wₙ; ≥ 0.
    pub ds_l: f64,
    /// Cycle total ΔS_L + ln2 (stage-d free expansion); ≥ ln2.
    pub ds_total: f64,
    /// ΔF_L = kT_W·(w4·lnP₁ + Σ₄₋₆ wₙ·ln wₙ); ≤ 0.
    pub df_l: f64,
}

/// ΔS_R/k in nats (dimensionless closed form).
pub fn raising_entropy_delta(params: &EngineParams) -> f64 {
    let w = cycle_weights(params);
    -LN_2 - x_ln_y(w.w1, params.p1()) - x_ln_x(w.w1) - x_ln_x(w.w2) - x_ln_x(w.w3)
}

/// Stage-f ΔS_L/k in nats.
pub fn lowering_entropy_delta(params: &EngineParams) -> f64 {
    let w = cycle_weights(params);
    x_ln_y(w.w5 + w.w6, params.p1()) - x_ln_x(w.w4) - x_ln_x(w.w5) - x_ln_x(w.w6)
}

/// ΔF_R/(kT_W), dimensionless.
pub fn raising_free_energy_delta(params: &EngineParams) -> f64 {
    let w = cycle_weights(params);
    x_ln_x(w.w1) + x_ln_x(w.w2) + x_ln_x(w.w3) - x_ln_y(w.w2 + w.w3, params.p1())
}

/// ΔF_L/(kT_W), dimensionless.
pub fn lowering_free_energy_delta(params: &EngineParams) -> f64 {
    let w = cycle_weights(params);
    x_ln_y(w.w4, params.p1()) + x_ln_x(w.w4) + x_ln_x(w.w5) + x_ln_x(w.w6)
}

/// Default geometry for ledger rows: barrier fraction 0.01 and natural
/// weight units at the engine's T_W.
fn ledger_scales(params: &EngineParams) -> (f64, WeightParams) {
    (0.01, WeightParams::natural(params.t_w).expect("positive T_W"))
}

/// Stage-by-stage raising-cycle ledger (stages a, mid-expansion, b, f).
///
/// All rows keep the exact (non-neglected) entropy and free-energy forms;
/// the cycle totals `ds_r`/`df_r` are the closed formulas. The shelf
/// insertion (stage c) is treated as reversible with negligible work, per
/// the adopted modeling assumption.
pub fn raising_ledger(params: &EngineParams) -> RaisingLedger {
    let (p, wp) = ledger_scales(params);
    let t_g = params.t_g;
    let t_w = params.t_w;
    let w = cycle_weights(params);
    let mgh_t = t_g * LN_2;

    let gas0 = gas_thermo_unpartitioned(t_g);
    let w0 = weight_thermo(0.0, &wp);

    let mut rows = Vec::new();

    // Stage a: equilibrium product state, piston centered.
    rows.push(LedgerRow {
        stage: "a",
        tg_bath: BathDelta::default(),
        tw_bath: BathDelta::default(),
        gas: Some(gas0),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy,
            entropy: 2.0 * w0.entropy,
            free_energy: Some(2.0 * w0.free_energy),
        }),
        combined: None,
    });

    // Mid-expansion: gas, piston and weights are one correlated mixture at
    // two temperatures; free energy is undefined there.
    let y_mid = 0.5 * (1.0 - p);
    let stretch = (1.0 + y_mid / (1.0 - p)).ln(); // gearing: Mg·h = T_G·ln(…)
    let gas_mid = gas_thermo(y_mid, t_g, p);
    rows.push(LedgerRow {
        stage: "b-mid",
        tg_bath: BathDelta { energy: -t_g * stretch, entropy: -stretch },
        tw_bath: BathDelta::default(),
        gas: None,
        piston_weights: None,
        combined: Some(GroupThermo {
            energy: gas_mid.energy + 2.0 * w0.energy + t_g * stretch,
            entropy: gas_mid.entropy + 2.0 * w0.entropy + LN_2,
            free_energy: None,
        }),
    });

    // Stage b end: piston at the wall, one weight raised through h_T; the
    // gas factors out again.
    let gas_b = gas_thermo(1.0 - p, t_g, p);
    rows.push(LedgerRow {
        stage: "b",
        tg_bath: BathDelta { energy: -t_g * LN_2, entropy: -LN_2 },
        tw_bath: BathDelta::default(),
        gas: Some(gas_b),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy + mgh_t,
            entropy: 2.0 * w0.entropy + LN_2,
            free_energy: Some(2.0 * w0.free_energy + mgh_t - t_w * LN_2),
        }),
        combined: None,
    });

    // Stage f: shelves out, weights rethermalized conditional on the
    // piston; w1 of the raised weights fell, dissipating into T_W.
    rows.push(LedgerRow {
        stage: "f",
        tg_bath: BathDelta { energy: -t_g * LN_2, entropy: -LN_2 },
        tw_bath: BathDelta {
            energy: -x_ln_y(w.w1, params.p1()) * t_w,
            entropy: -x_ln_y(w.w1, params.p1()),
        },
        gas: Some(gas0),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy - x_ln_y(w.w2 + w.w3, params.p1()) * t_w,
            entropy: 2.0 * w0.entropy
                - (x_ln_x(w.w1) + x_ln_x(w.w2) + x_ln_x(w.w3)),
            free_energy: Some(
                2.0 * w0.free_energy
                    + t_w
                        * (x_ln_x(w.w1) + x_ln_x(w.w2) + x_ln_x(w.w3)
                            - x_ln_y(w.w2 + w.w3, params.p1())),
            ),
        }),
        combined: None,
    });

    RaisingLedger {
        rows,
        ds_r: raising_entropy_delta(params),
        df_r: t_w * raising_free_energy_delta(params),
        stage_b_df: -(t_w - t_g) * LN_2,
    }
}

/// Stage-by-stage lowering-cycle ledger (stages a, b, d, f), starting with
/// the piston on the right and the left weight raised.
pub fn lowering_ledger(params: &EngineParams) -> LoweringLedger {
    let (p, wp) = ledger_scales(params);
    let t_g = params.t_g;
    let t_w = params.t_w;
    let w = cycle_weights(params);
    let mgh_t = t_g * LN_2;

    let gas0 = gas_thermo_unpartitioned(t_g);
    let w0 = weight_thermo(0.0, &wp);

    let mut rows = Vec::new();

    // Stage a: one weight holds Mg·h_T of work.
    rows.push(LedgerRow {
        stage: "a",
        tg_bath: BathDelta::default(),
        tw_bath: BathDelta::default(),
        gas: Some(gas0),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy + mgh_t,
            entropy: 2.0 * w0.entropy,
            free_energy: Some(2.0 * w0.free_energy + mgh_t),
        }),
        combined: None,
    });

    // Stage b: weight lowered, gas compressed to the left half; the work
    // passed into the T_G bath.
    let gas_b = gas_thermo(0.0, t_g, p);
    rows.push(LedgerRow {
        stage: "b",
        tg_bath: BathDelta { energy: t_g * LN_2, entropy: LN_2 },
        tw_bath: BathDelta::default(),
        gas: Some(gas_b),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy,
            entropy: 2.0 * w0.entropy,
            free_energy: Some(2.0 * w0.free_energy),
        }),
        combined: None,
    });

    // Stage d: piston removed, free expansion back to the whole box; the
    // gas entropy rises by ln2 with no compensation anywhere.
    rows.push(LedgerRow {
        stage: "d",
        tg_bath: BathDelta { energy: t_g * LN_2, entropy: LN_2 },
        tw_bath: BathDelta::default(),
        gas: Some(gas0),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy,
            entropy: 2.0 * w0.entropy,
            free_energy: Some(2.0 * w0.free_energy),
        }),
        combined: None,
    });

    // Stage f: shelves out; w5+w6 of the cycles trapped a thermal
    // fluctuation above the shelf, drawn from the T_W bath.
    rows.push(LedgerRow {
        stage: "f",
        tg_bath: BathDelta { energy: t_g * LN_2, entropy: LN_2 },
        tw_bath: BathDelta {
            energy: x_ln_y(w.w5 + w.w6, params.p1()) * t_w,
            entropy: x_ln_y(w.w5 + w.w6, params.p1()),
        },
        gas: Some(gas0),
        piston_weights: Some(GroupThermo {
            energy: 2.0 * w0.energy - x_ln_y(w.w5 + w.w6, params.p1()) * t_w,
            entropy: 2.0 * w0.entropy
                - (x_ln_x(w.w4) + x_ln_x(w.w5) + x_ln_x(w.w6)),
            free_energy: Some(
                2.0 * w0.free_energy
                    + t_w
                        * (x_ln_x(w.w4) + x_ln_x(w.w5) + x_ln_x(w.w6)
                            - x_ln_y(w.w5 + w.w6, params.p1())),
            ),
        }),
        combined: None,
    });

    let ds_l = lowering_entropy_delta(params);
    LoweringLedger {
        rows,
        ds_l,
        ds_total: ds_l + LN_2,
        df_l: t_w * lowering_free_energy_delta(params),
    }
}
