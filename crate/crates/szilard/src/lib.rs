//! Numerical laboratory for the quantum Popper-Szilard engine.
//!
//! A single atom in a box ("gas") drives a piston that lifts one of two
//! quantum weights; shelves, pulleys and a reset operation attempt to close
//! the cycle without measurement. This crate implements the complete
//! quantitative model:
//!
//! * [`box_spectrum`] — eigenvalues and eigenfunctions of the box with a
//!   central potential barrier (transcendental continuity equations, natural
//!   parameter continuation, high-barrier asymptotics).
//! * [`quantum_weight`] — Airy-function model of a weight bouncing on a
//!   floor in gravity: zeros, shelf-splitting amplitudes, thermal moments.
//! * [`thermal_gas`] — thermal ensembles of the one-atom gas: partition
//!   functions, barrier-insertion work, the three expansion regimes,
//!   fluctuations and the piston-to-pulley gearing.
//! * [`engine_cycle`] — cycle-level statistics: reset-unitary
//!   parameterization, cycle weights, reversal probabilities, long-run
//!   energy flow and a Monte-Carlo renewal oracle.
//! * [`thermo_ledger`] — entropy/free-energy functionals, mixing algebra and
//!   stage-by-stage ledgers of the raising and lowering cycles.
//! * [`general_demon`] — the generalized two-subensemble demon with
//!   imperfect resetting, fluctuation probability relation and Carnot
//!   bounds.
//!
//! # Units
//!
//! Internally k_B = 1 and L = 1. Gas energies and temperatures are measured
//! in units of the box ground scale ε = ħ²π²/8mL² (ε = 1); weight energies
//! in units of M_w·g·H where H = (ħ²/2M_w²g)^(1/3) is the characteristic
//! height. Entropies are in nats.

pub mod box_spectrum;
pub mod engine_cycle;
pub mod general_demon;
pub mod quantum_weight;
pub mod thermal_gas;
pub mod thermo_ledger;

pub(crate) mod numeric;

pub use box_spectrum::{Eigenstate, GasBoxParams, Symmetry};
pub use engine_cycle::{CycleWeights, EngineParams, FlowStats, ResetUnitary};
pub use general_demon::{DemonFlow, DemonParams};
pub use quantum_weight::{ShelfSplit, WeightParams};
pub use thermal_gas::{ExpansionRegime, GasThermalState};
pub use thermo_ledger::Subensemble;
