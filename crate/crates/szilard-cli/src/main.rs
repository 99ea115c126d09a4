//! CSV front end for the engine laboratory.
//!
//! Every subcommand regenerates one figure or table as CSV with
//! `#`-prefixed provenance headers (artifact version, canonical parameter
//! echo, seed). Output is bit-identical for identical (command, params,
//! seed); grid cells are computed on a worker pool but written in grid
//! order.
//!
//! Exit codes: 0 success, 2 parameter error, 3 numeric failure, 4 I/O.

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use szilard::box_spectrum::{
    eigencurve, hba_energy, zurek_energy, GasBoxParams, SpectrumError, Symmetry,
};
use szilard::engine_cycle::{
    cycle_weights, energy_flow, mc_engine, stationary_mix, EngineError, EngineParams,
    ResetUnitary,
};
use szilard::general_demon::{demon_flow, mc_demon, DemonError, DemonParams};
use szilard::quantum_weight::{
    conditional_energies, p_above_shelf, p_above_shelf_sum, WeightParams,
};
use szilard::thermal_gas::{expansion_profile, expansion_profile_sum, ExpansionRegime};
use szilard::thermo_ledger::{lowering_ledger, raising_ledger, LedgerRow};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "szilard", version, about = "Quantum Popper-Szilard engine laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    Odd,
    Even,
}

impl From<SymmetryArg> for Symmetry {
    fn from(s: SymmetryArg) -> Symmetry {
        match s {
            SymmetryArg::Odd => Symmetry::Odd,
            SymmetryArg::Even => Symmetry::Even,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SliceArg {
    /// m_c = 0, m_b = 1 − m_a.
    McZero,
    /// m_b = m_c = (1 − m_a)/2.
    MbEqMc,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Isolated,
    Essential,
    Isothermal,
}

impl From<RegimeArg> for ExpansionRegime {
    fn from(r: RegimeArg) -> ExpansionRegime {
        match r {
            RegimeArg::Isolated => ExpansionRegime::Isolated,
            RegimeArg::Essential => ExpansionRegime::Essential,
            RegimeArg::Isothermal => ExpansionRegime::Isothermal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue curve E(V) with HBA and Zurek asymptotics.
    Eigencurve {
        #[arg(value_enum)]
        symmetry: SymmetryArg,
        level: u32,
        v_min: f64,
        v_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-run energy-flow surface f(P1, m_a).
    EnergySurface {
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cycle entropy/free-energy change surfaces.
    EntropySurface {
        #[arg(long, value_enum, default_value_t = SliceArg::MbEqMc)]
        slice: SliceArg,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo runs of the engine or the generalized demon.
    #[command(subcommand)]
    Montecarlo(McCommand),
    /// Demon flow statistics over a (p_A, tau) grid.
    DemonReport {
        #[arg(long, default_value_t = 30)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shelf-splitting probabilities and conditional energies over h.
    WeightSplit {
        #[arg(long, default_value_t = 100.0)]
        tw: f64,
        #[arg(long, default_value_t = 81)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean-state profile of one expansion regime.
    Expansion {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, default_value_t = 100.0)]
        tg: f64,
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stage-by-stage thermodynamic ledgers for both cycles.
    Ledger {
        #[arg(long)]
        tg: f64,
        #[arg(long)]
        tw: f64,
        #[arg(long)]
        ma: f64,
        #[arg(long)]
        mb: Option<f64>,
        #[arg(long)]
        mc: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum McCommand {
    /// Two-state engine chain against the closed-form flow.
    Engine {
        #[arg(long)]
        tg: f64,
        #[arg(long)]
        tw: f64,
        #[arg(long)]
        ma: f64,
        #[arg(long)]
        mb: Option<f64>,
        #[arg(long)]
        mc: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        cycles: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-state demon chain against the closed-form Q.
    Demon {
        #[arg(long)]
        pa: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 1_000_000)]
        cycles: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Param(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::ContinuationStall { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NonConvergent { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<DemonError> for CliError {
    fn from(e: DemonError) -> Self {
        CliError::Param(e.to_string())
    }
}

/// 12 significant digits; non-finite values print as inf/-inf/NaN.
fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

fn header(command_echo: &str, seed: Option<u64>) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# szilard {VERSION}");
    let _ = writeln!(h, "# command: {command_echo}");
    match seed {
        Some(s) => {
            let _ = writeln!(h, "# seed: {s}");
        }
        None => {
            let _ = writeln!(h, "# seed: -");
        }
    }
    h
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn reset_from_flags(ma: f64, mb: Option<f64>, mc: Option<f64>) -> Result<ResetUnitary, CliError> {
    let mb = mb.unwrap_or(0.5 * (1.0 - ma));
    let mc = mc.unwrap_or(1.0 - ma - mb);
    Ok(ResetUnitary::new(ma, mb, mc)?)
}

fn grid01(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eigencurve { symmetry, level, v_min, v_max, points, p, out } => {
            if points < 2 || v_min < 0.0 || v_max <= v_min {
                return Err(CliError::Param(
                    "need points >= 2 and 0 <= v_min < v_max".into(),
                ));
            }
            let params = GasBoxParams::new(p)?;
            let sym: Symmetry = symmetry.into();
            // Log-spaced grid; a v_min of zero keeps the unperturbed start.
            let lo = if v_min > 0.0 { v_min } else { 1e-2_f64.min(v_max / 10.0) };
            let mut grid: Vec<f64> = Vec::with_capacity(points);
            if v_min == 0.0 {
                grid.push(0.0);
            }
            let n = points - grid.len();
            for i in 0..n {
                grid.push((lo.ln() + (v_max.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp());
            }
            let curve = eigencurve(sym, level, &grid, &params)?;
            let sym_name = match sym {
                Symmetry::Odd => "odd",
                Symmetry::Even => "even",
            };
            let mut csv = header(
                &format!(
                    "eigencurve {sym_name} {level} v_min={v_min} v_max={v_max} points={points} p={p}"
                ),
                None,
            );
            csv.push_str("V,E_numeric,E_hba,E_zurek_upper,E_zurek_lower\n");
            for state in &curve {
                let v = state.barrier_height;
                let hba = hba_energy(sym, level, v, &params);
                let (ez, dz) = zurek_energy(level, v, &params);
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    fmt(v),
                    fmt(state.energy),
                    fmt(hba),
                    fmt(ez + dz),
                    fmt(ez - dz)
                );
            }
            write_output(&out, &csv)
        }

        Command::EnergySurface { points, out } => {
            if points < 2 {
                return Err(CliError::Param("need points >= 2".into()));
            }
            let p1s = grid01(points);
            let mas = grid01(points);
            let cells: Vec<(String, f64)> = p1s
                .par_iter()
                .flat_map_iter(|&p1| {
                    mas.iter().map(move |&m_a| {
                        let params =
                            EngineParams::from_p1(p1, ResetUnitary::symmetric(m_a).unwrap())
                                .unwrap();
                        let f = energy_flow(&params);
                        (
                            format!(
                                "{},{},{},{}",
                                fmt(p1),
                                fmt(m_a),
                                fmt(f),
                                fmt(f * std::f64::consts::LN_2)
                            ),
                            f,
                        )
                    })
                })
                .collect();
            let min = cells.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            let max = cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            let mut csv = header(&format!("energy-surface points={points}"), None);
            csv.push_str("P1,m_a,f,delta_E\n");
            for (row, _) in cells {
                csv.push_str(&row);
                csv.push('\n');
            }
            let _ = writeln!(csv, "# f_min: {}", fmt(min));
            let _ = writeln!(csv, "# f_max: {}", fmt(max));
            write_output(&out, &csv)
        }

        Command::EntropySurface { slice, points, out } => {
            if points < 2 {
                return Err(CliError::Param("need points >= 2".into()));
            }
            let (slice_name, make): (&str, fn(f64) -> ResetUnitary) = match slice {
                SliceArg::McZero => ("mc_zero", |m_a| ResetUnitary::c_zero(m_a).unwrap()),
                SliceArg::MbEqMc => ("mb_eq_mc", |m_a| ResetUnitary::symmetric(m_a).unwrap()),
            };
            let p1s = grid01(points);
            let mas = grid01(points);
            let cells: Vec<(String, [f64; 4])> = p1s
                .par_iter()
                .flat_map_iter(|&p1| {
                    mas.iter().map(move |&m_a| {
                        let params = EngineParams::from_p1(p1, make(m_a)).unwrap();
                        let ds_r = szilard::thermo_ledger::raising_entropy_delta(&params);
                        let ds_l = szilard::thermo_ledger::lowering_entropy_delta(&params)
                            + std::f64::consts::LN_2;
                        let df_r = szilard::thermo_ledger::raising_free_energy_delta(&params);
                        let df_l = szilard::thermo_ledger::lowering_free_energy_delta(&params);
                        (
                            format!(
                                "{},{},{},{},{},{}",
                                fmt(p1),
                                fmt(m_a),
                                fmt(ds_r),
                                fmt(ds_l),
                                fmt(df_r),
                                fmt(df_l)
                            ),
                            [ds_r, ds_l, df_r, df_l],
                        )
                    })
                })
                .collect();
            let mut csv = header(
                &format!("entropy-surface slice={slice_name} points={points}"),
                None,
            );
            csv.push_str("P1,m_a,dS_R,dS_L_total,dF_R,dF_L\n");
            let mut mins = [f64::INFINITY; 4];
            let mut maxs = [f64::NEG_INFINITY; 4];
            for (row, vals) in &cells {
                csv.push_str(row);
                csv.push('\n');
                for k in 0..4 {
                    mins[k] = mins[k].min(vals[k]);
                    maxs[k] = maxs[k].max(vals[k]);
                }
            }
            for (k, name) in ["dS_R", "dS_L_total", "dF_R", "dF_L"].iter().enumerate() {
                let _ = writeln!(csv, "# {name}_min: {}", fmt(mins[k]));
                let _ = writeln!(csv, "# {name}_max: {}", fmt(maxs[k]));
            }
            write_output(&out, &csv)
        }

        Command::Montecarlo(McCommand::Engine { tg, tw, ma, mb, mc, cycles, seed, out }) => {
            let reset = reset_from_flags(ma, mb, mc)?;
            let params = EngineParams::new(tg, tw, reset)?;
            let r = mc_engine(&params, cycles, seed);
            let mut csv = header(
                &format!(
                    "montecarlo engine tg={tg} tw={tw} ma={} mb={} mc={} cycles={cycles}",
                    reset.m_a, reset.m_b, reset.m_c
                ),
                Some(seed),
            );
            csv.push_str("quantity,value\n");
            let analytic_fraction = match stationary_mix(&params) {
                Ok(v) => v,
                // Asymmetric resets have no closed form; the oscillating
                // corner has no converged value. Report NaN, not a guess.
                Err(EngineError::AsymmetricReset)
                | Err(EngineError::NonConvergent { .. }) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            let w = cycle_weights(&params);
            for (name, value) in [
                ("mean_flow", r.mean_flow),
                ("stderr", r.stderr),
                ("fraction_raising", r.fraction_raising),
                ("fraction_stderr", r.fraction_stderr),
                ("analytic_flow", energy_flow(&params)),
                ("analytic_fraction", analytic_fraction),
                ("p1", params.p1()),
                ("w1", w.w1),
                ("w4", w.w4),
            ] {
                let _ = writeln!(csv, "{name},{}", fmt(value));
            }
            write_output(&out, &csv)
        }

        Command::Montecarlo(McCommand::Demon { pa, tau, cycles, seed, out }) => {
            let params = DemonParams::new(pa, tau)?;
            let flow = demon_flow(&params)?;
            let r = mc_demon(&params, cycles, seed)?;
            let mut csv = header(
                &format!("montecarlo demon pa={pa} tau={tau} cycles={cycles}"),
                Some(seed),
            );
            csv.push_str("quantity,value\n");
            let lower_total = (r.first_lowering[0] + r.first_lowering[1]).max(1);
            for (name, value) in [
                ("mean_q", r.mean_q),
                ("stderr", r.stderr),
                ("analytic_q", flow.q),
                (
                    "first_lowering_a_fraction",
                    r.first_lowering[0] as f64 / lower_total as f64,
                ),
            ] {
                let _ = writeln!(csv, "{name},{}", fmt(value));
            }
            write_output(&out, &csv)
        }

        Command::DemonReport { points, out } => {
            if points < 2 {
                return Err(CliError::Param("need points >= 2".into()));
            }
            let axis: Vec<f64> = (1..=points).map(|i| i as f64 / (points + 1) as f64).collect();
            let cells: Vec<(String, f64)> = axis
                .par_iter()
                .flat_map_iter(|&p_a| {
                    axis.iter().map(move |&tau| {
                        let f = demon_flow(&DemonParams::new(p_a, tau).unwrap()).unwrap();
                        (
                            format!(
                                "{},{},{},{},{},{},{},{},{}",
                                fmt(p_a),
                                fmt(tau),
                                fmt(f.p_r),
                                fmt(f.p_l),
                                fmt(f.n_r),
                                fmt(f.n_l),
                                fmt(f.q_r),
                                fmt(f.q_l),
                                fmt(f.q)
                            ),
                            f.q,
                        )
                    })
                })
                .collect();
            let q_max = cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            let mut csv = header(&format!("demon-report points={points}"), None);
            csv.push_str("p_A,tau,P_R,P_L,N_R,N_L,Q_R,Q_L,Q\n");
            for (row, _) in cells {
                csv.push_str(&row);
                csv.push('\n');
            }
            let _ = writeln!(csv, "# Q_max: {}", fmt(q_max));
            write_output(&out, &csv)
        }

        Command::WeightSplit { tw, points, out } => {
            if points < 2 {
                return Err(CliError::Param("need points >= 2".into()));
            }
            let wp = WeightParams::natural(tw).map_err(|e| CliError::Param(e.to_string()))?;
            let h_max = 4.0 * wp.t_w / wp.mg;
            let rows: Vec<String> = (0..points)
                .into_par_iter()
                .map(|i| {
                    let h = h_max * i as f64 / (points - 1) as f64;
                    let closed = p_above_shelf(h, &wp);
                    let sum = p_above_shelf_sum(h, &wp);
                    let (above, below) = conditional_energies(h, &wp);
                    format!(
                        "{},{},{},{},{},{}",
                        fmt(h),
                        fmt(closed),
                        fmt(sum),
                        fmt(1.0 - closed),
                        fmt(above),
                        fmt(below)
                    )
                })
                .collect();
            let mut csv = header(&format!("weight-split tw={tw} points={points}"), None);
            csv.push_str("h,P_above,P_above_sum,P_below,E_above,E_below\n");
            for row in rows {
                csv.push_str(&row);
                csv.push('\n');
            }
            write_output(&out, &csv)
        }

        Command::Expansion { regime, tg, p, points, out } => {
            if points < 2 || !(0.0 < p && p < 1.0) || tg <= 0.0 {
                return Err(CliError::Param("need points >= 2, 0 < p < 1, tg > 0".into()));
            }
            let reg: ExpansionRegime = regime.into();
            let name = match reg {
                ExpansionRegime::Isolated => "isolated",
                ExpansionRegime::Essential => "essential",
                ExpansionRegime::Isothermal => "isothermal",
            };
            let rows: Vec<String> = (0..points)
                .into_par_iter()
                .map(|i| {
                    let y = (1.0 - p) * i as f64 / (points - 1) as f64;
                    let pt = expansion_profile(reg, y, tg, p);
                    let (e_sum, p_sum) = expansion_profile_sum(reg, y, tg, p);
                    format!(
                        "{},{},{},{},{},{},{}",
                        fmt(y),
                        fmt(pt.energy),
                        fmt(pt.pressure),
                        fmt(pt.temperature),
                        fmt(pt.work),
                        fmt(e_sum),
                        fmt(p_sum)
                    )
                })
                .collect();
            let mut csv = header(
                &format!("expansion regime={name} tg={tg} p={p} points={points}"),
                None,
            );
            csv.push_str("Y,energy,pressure,temperature,work,energy_sum,pressure_sum\n");
            for row in rows {
                csv.push_str(&row);
                csv.push('\n');
            }
            write_output(&out, &csv)
        }

        Command::Ledger { tg, tw, ma, mb, mc, out } => {
            let reset = reset_from_flags(ma, mb, mc)?;
            let params = EngineParams::new(tg, tw, reset)?;
            let raise = raising_ledger(&params);
            let lower = lowering_ledger(&params);
            let mut csv = header(
                &format!(
                    "ledger tg={tg} tw={tw} ma={} mb={} mc={}",
                    reset.m_a, reset.m_b, reset.m_c
                ),
                None,
            );
            csv.push_str(
                "cycle,stage,tg_bath_E,tg_bath_S,gas_E,gas_S,gas_F,pw_E,pw_S,pw_F,tw_bath_E,tw_bath_S,total_E\n",
            );
            let push_rows = |cycle: &str, rows: &[LedgerRow], csv: &mut String| {
                for row in rows {
                    let (gas_e, gas_s, gas_f, pw_e, pw_s, pw_f) =
                        match (&row.gas, &row.piston_weights, &row.combined) {
                            (Some(g), Some(pw), None) => (
                                fmt(g.energy),
                                fmt(g.entropy),
                                fmt(g.free_energy),
                                fmt(pw.energy),
                                fmt(pw.entropy),
                                pw.free_energy.map(fmt).unwrap_or_else(|| "undefined".into()),
                            ),
                            (None, None, Some(c)) => (
                                "combined".into(),
                                "combined".into(),
                                "combined".into(),
                                fmt(c.energy),
                                fmt(c.entropy),
                                c.free_energy.map(fmt).unwrap_or_else(|| "undefined".into()),
                            ),
                            _ => unreachable!(),
                        };
                    let _ = writeln!(
                        csv,
                        "{cycle},{},{},{},{gas_e},{gas_s},{gas_f},{pw_e},{pw_s},{pw_f},{},{},{}",
                        row.stage,
                        fmt(row.tg_bath.energy),
                        fmt(row.tg_bath.entropy),
                        fmt(row.tw_bath.energy),
                        fmt(row.tw_bath.entropy),
                        fmt(row.total_energy())
                    );
                }
            };
            push_rows("raising", &raise.rows, &mut csv);
            push_rows("lowering", &lower.rows, &mut csv);
            let _ = writeln!(csv, "# dS_R: {}", fmt(raise.ds_r));
            let _ = writeln!(csv, "# dF_R: {}", fmt(raise.df_r));
            let _ = writeln!(csv, "# stage_b_dF: {}", fmt(raise.stage_b_df));
            let _ = writeln!(csv, "# dS_L_total: {}", fmt(lower.ds_total));
            let _ = writeln!(csv, "# dF_L: {}", fmt(lower.df_l));
            write_output(&out, &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Param(msg)) => {
            eprintln!("parameter error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(4)
        }
    }
}
