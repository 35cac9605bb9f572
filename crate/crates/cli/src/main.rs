//! Command-line surface of the workbench: compilation plans, exact gate
//! decompositions, grid-state synthesis rows, fault-tolerance budgets,
//! reference-table and curve reproduction, circuit sampling, and the oracle
//! battery.
//!
//! JSON-emitting commands print one versioned report (see `report.rs`);
//! table, curve and sample commands print bit-stable CSV. Exit codes:
//! 0 success, 2 usage error, 3 oracle failure found by `verify`.

mod config;
mod emitters;
mod report;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cvqc::comb;
use cvqc::ftcalc::{self, Model};
use cvqc::kerrplan;
use cvqc::sampler;
use cvqc::symplectic;

use config::ConfigFile;
use report::{sig6, Discrepancy, Report};

#[derive(Parser)]
#[command(
    name = "cvqc",
    about = "Continuous-variable quantum computing workbench",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOut {
    /// Write the output here instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Optional key=value config file supplying defaults for absent flags
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Plan the cross-Kerr compilation for a precision budget
    PlanKerr {
        /// Target total precision y in (0, pi)
        #[arg(long)]
        y: Option<f64>,
        /// Also materialize the plan into elementary gates
        #[arg(long)]
        materialize: bool,
        /// Gate-count cap for materialization
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Decompose a Gaussian gate into shears and Fourier transforms
    Decompose {
        /// One of: squeeze, beamsplitter, rotation
        #[arg(long)]
        gate: String,
        /// Gate parameter (s, R, or theta)
        #[arg(long)]
        param: Option<f64>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Synthesis-protocol summary row for iteration order m
    Gkp {
        #[arg(long)]
        m: Option<u32>,
        /// Homodyne window half-width
        #[arg(long)]
        eta: Option<f64>,
        /// Write wavefunction samples of the resulting comb here
        #[arg(long)]
        curve: Option<std::path::PathBuf>,
        /// Cross-check the first iteration against the dense grid
        #[arg(long)]
        grid: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Fault-tolerance budget and minimal-m search
    FtBudget {
        /// One of: universal, cviqp
        #[arg(long)]
        model: String,
        #[arg(long = "eps-th")]
        eps_th: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        /// Iteration order for the universal budget (default 1)
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Reproduce a published table as CSV
    Tables {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Emit curve data as CSV
    Curves {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Draw a circuit, simulate its binned distributions, and sample
    Sample {
        /// One of: random, cviqp
        #[arg(long)]
        model: String,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Bin divisor K with sqrt(pi) = K*eta
        #[arg(long = "K")]
        k: Option<u32>,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// State-quality point defining the gate parameters
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        y: Option<f64>,
        /// Input momentum squeezing for the position-diagonal model
        #[arg(long)]
        sigma: Option<f64>,
        /// Also write the simulated per-mode bin distributions here
        #[arg(long)]
        distribution: Option<std::path::PathBuf>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Run the oracle battery; exits 3 on any failure
    Verify {
        /// Smaller grids, skip the two-mode synthesis cross-check
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        common: CommonOut,
    },
}

enum Output {
    Json(Report),
    Csv(String),
}

fn write_output(out: Output, dest: &Option<std::path::PathBuf>) -> Result<(), String> {
    let text = match out {
        Output::Json(report) => {
            let value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            report::validate_report(&value)
                .map_err(|e| format!("internal: report violates its schema: {e}"))?;
            serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n"
        }
        Output::Csv(csv) => csv,
    };
    match dest {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command, started) {
        Ok(code) => code,
        Err(msg) => usage_error(&msg),
    }
}

fn run(command: Command, started: Instant) -> Result<ExitCode, String> {
    match command {
        Command::PlanKerr {
            y,
            materialize,
            cap,
            common,
        } => {
            let cfg = ConfigFile::load(&common.config)?;
            let y = cfg.resolve_f64("y", y)?.ok_or("--y is required")?;
            let cap = cfg.resolve_u64("cap", cap)?.unwrap_or(1_000_000);
            let counts = kerrplan::count_report(y).map_err(|e| e.to_string())?;

            let mut report = Report::new("plan-kerr", json!({"y": y, "cap": cap}));
            report.references = vec![
                "relation:tau-p-budget".into(),
                "relation:rescaling-integers".into(),
                "table:gate-count-asymptotics".into(),
            ];
            report.discrepancies.push(Discrepancy {
                quantity: "asymptotic_gate_count".into(),
                reference_value: counts.asymptotic_reference,
                computed_value: counts.asymptotic_derived,
                note: counts.note.clone(),
            });
            let mut outputs = serde_json::to_value(&counts).map_err(|e| e.to_string())?;
            if materialize {
                match kerrplan::materialize(&counts.plan, cap) {
                    Ok(seq) => {
                        outputs["materialized_gates"] = json!(seq.len());
                        outputs["first_gates"] = serde_json::to_value(
                            seq.gates.iter().take(8).collect::<Vec<_>>(),
                        )
                        .map_err(|e| e.to_string())?;
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            report.outputs = outputs;
            report.runtime_ms = started.elapsed().as_millis() as u64;
            write_output(Output::Json(report), &common.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Decompose {
            gate,
            param,
            common,
        } => {
            let cfg = ConfigFile::load(&common.config)?;
            let param = cfg.resolve_f64("param", param)?.ok_or("--param is required")?;
            let (seq, target) = match gate.as_str() {
                "squeeze" => (
                    symplectic::decompose_squeeze(param).map_err(|e| e.to_string())?,
                    symplectic::squeeze_target(param),
                ),
                "beamsplitter" => (
                    symplectic::decompose_beamsplitter(param).map_err(|e| e.to_string())?,
                    symplectic::beamsplitter_target(param),
                ),
                "rotation" => (
                    symplectic::decompose_rotation(param).map_err(|e| e.to_string())?,
                    symplectic::rotation_target(param),
                ),
                other => return Err(format!("unknown gate `{other}`")),
            };
            let composed = symplectic::compose(&seq).map_err(|e| e.to_string())?;
            let residual = composed.residual_against(&target);

            let mut report = Report::new("decompose", json!({"gate": gate, "param": param}));
            report.references = vec!["relation:exact-gaussian-decompositions".into()];
            report.outputs = json!({
                "gates": seq.gates,
                "gate_count": seq.len(),
                "verification_residual": residual,
                "symplectic_residual": composed.symplectic_residual(),
            });
            if gate == "beamsplitter" && (param - 0.5).abs() < 1e-12 {
                // two couplings are in circulation for the balanced block;
                // report which one the matrix oracle accepts
                let alt = symplectic::compose(&symplectic::decompose_beamsplitter_main_text_variant())
                    .map_err(|e| e.to_string())?;
                report.outputs["alternative_coupling_residual"] =
                    json!(alt.residual_against(&target));
                report.outputs["coupling_note"] = json!(
                    "the sqrt(1-R) coupling reproduces the target; the 1/(2*sqrt2) \
                     variant does not (residual above)"
                );
            }
            report.runtime_ms = started.elapsed().as_millis() as u64;
            write_output(Output::Json(report), &common.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Gkp {
            m,
            eta,
            curve,
            grid,
            common,
        } => {
            let cfg = ConfigFile::load(&common.config)?;
            let m = cfg.resolve_u64("m", m.map(u64::from))?.ok_or("--m is required")? as u32;
            let eta = cfg.resolve_f64("eta", eta)?.unwrap_or(1e-3);
            let sq = comb::sigma_of_m(m);
            let synthesis =
                comb::synthesize_gkp(m, sq.sigma, eta).map_err(|e| e.to_string())?;

            let mut report = Report::new("gkp", json!({"m": m, "eta": eta}));
            report.references = vec![
                "table:binomial-gkp-comparison".into(),
                "relation:m-vs-sigma".into(),
            ];
            report.outputs = json!({
                "sigma": sq.sigma,
                "squeezing_db": sq.squeezing_db,
                "overlap_gaussian": comb::overlap_gaussian(m),
                "success_probability": synthesis.success_prob,
                "success_coefficient": comb::success_prob_coefficient(m),
                "peaks": synthesis.comb.terms.len(),
                "orthogonal_peaks_valid": synthesis.comb.orthogonal_peaks_valid(),
                "displacement_alpha": comb::displacement_alpha(m, sq.sigma),
                "displacement_alpha_no_squeeze": comb::displacement_alpha_no_squeeze(m),
            });
            if m == 6 {
                report.discrepancies.push(Discrepancy {
                    quantity: "squeezing_db".into(),
                    reference_value: 19.0,
                    computed_value: sq.squeezing_db,
                    note: "printed as 19 dB; the m-sigma relation gives 20.0 dB".into(),
                });
            }
            if grid {
                let cross = cvqc::gridsim::synthesis_cross_check(2048);
                report.outputs["grid_cross_check"] = json!({
                    "fidelity": cross.fidelity,
                    "grid_probability": cross.grid_prob,
                    "comb_probability": cross.comb_prob,
                });
            }
            if let Some(path) = curve {
                let mut csv = String::from("q,amplitude\n");
                let q_max = synthesis.comb.max_center() + 6.0 * sq.sigma;
                let steps = 2000;
                for i in 0..=steps {
                    let q = -q_max + 2.0 * q_max * i as f64 / steps as f64;
                    csv.push_str(&format!(
                        "{},{}\n",
                        sig6(q),
                        sig6(synthesis.comb.amplitude(q).re)
                    ));
                }
                std::fs::write(path, csv).map_err(|e| e.to_string())?;
            }
            report.runtime_ms = started.elapsed().as_millis() as u64;
            write_output(Output::Json(report), &common.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::FtBudget {
            model,
            eps_th,
            y,
            m,
            common,
        } => {
            let cfg = ConfigFile::load(&common.config)?;
            let eps_th = cfg.resolve_f64("eps-th", eps_th)?.unwrap_or(1e-6);
            let y = cfg.resolve_f64("y", y)?.ok_or("--y is required")?;
            let mut report =
                Report::new("ft-budget", json!({"model": model, "eps_th": eps_th, "y": y}));
            match model.as_str() {
                "universal" => {
                    let m = m.unwrap_or(1);
                    let p = ftcalc::p_succ(m, y).map_err(|e| e.to_string())?;
                    let table = ftcalc::gate_parameter_table(Model::Universal, m, y);
                    push_table_discrepancies(&mut report, &table);
                    report.references = vec![
                        "relation:success-probability-erf".into(),
                        "table:universal-gate-parameters".into(),
                    ];
                    report.outputs = json!({
                        "m": m,
                        "zeta_m": ftcalc::zeta(m),
                        "epsilon_m": ftcalc::epsilon_m(m, y),
                        "p_succ": p,
                        "p_succ_gauss_tail": ftcalc::p_succ_gauss_tail(m, y).ok(),
                        "parameters": table,
                    });
                }
                "cviqp" => {
                    let search = ftcalc::cviqp_minimal_m(eps_th, y).map_err(|e| e.to_string())?;
                    let table = ftcalc::gate_parameter_table(Model::Cviqp, search.m_min.max(6), y);
                    push_table_discrepancies(&mut report, &table);
                    report.references = vec![
                        "relation:teleported-fourier-threshold".into(),
                        "table:cviqp-gate-parameters".into(),
                    ];
                    report.outputs = json!({
                        "search": search,
                        "max_y_at_m6": ftcalc::cviqp_max_y(6, eps_th),
                        "parameters": table,
                        "erf_convention_note":
                            "the erf argument is taken literally (no 1/sqrt2); the strict \
                             Gaussian-tail convention shifts the minimal m by about one — \
                             both values are reported",
                    });
                }
                other => return Err(format!("unknown model `{other}`")),
            }
            report.runtime_ms = started.elapsed().as_millis() as u64;
            write_output(Output::Json(report), &common.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Tables { name, common } => match emitters::emit_table(&name) {
            Some(csv) => {
                write_output(Output::Csv(csv), &common.out)?;
                Ok(ExitCode::SUCCESS)
            }
            None => Err(format!(
                "unknown table `{name}`; known tables: {}",
                emitters::known_tables().join(", ")
            )),
        },

        Command::Curves { name, common } => match emitters::emit_curve(&name) {
            Some(csv) => {
                write_output(Output::Csv(csv), &common.out)?;
                Ok(ExitCode::SUCCESS)
            }
            None => Err(format!(
                "unknown curve `{name}`; known curves: {}",
                emitters::known_curves().join(", ")
            )),
        },

        Command::Sample {
            model,
            modes,
            depth,
            k,
            shots,
            seed,
            m,
            y,
            sigma,
            distribution,
            common,
        } => {
            let cfg = ConfigFile::load(&common.config)?;
            let modes = cfg.resolve_u64("modes", modes.map(|v| v as u64))?.unwrap_or(1) as usize;
            let depth = cfg.resolve_u64("depth", depth.map(|v| v as u64))?.unwrap_or(8) as usize;
            let k = cfg.resolve_u64("K", k.map(u64::from))?.unwrap_or(8) as u32;
            let shots = cfg.resolve_u64("shots", shots)?.unwrap_or(1000);
            let seed = cfg.resolve_u64("seed", seed)?.unwrap_or(0);
            let m = cfg.resolve_u64("m", m.map(u64::from))?.unwrap_or(1) as u32;
            let y = cfg.resolve_f64("y", y)?.unwrap_or(0.1);
            let sigma = cfg.resolve_f64("sigma", sigma)?.unwrap_or(0.5);

            let model = match model.as_str() {
                "random" => sampler::CircuitModel::random_cv(m, y),
                "cviqp" => sampler::CircuitModel::cviqp(m, y, sigma),
                other => return Err(format!("unknown model `{other}`")),
            };
            let spec = sampler::draw_circuit(&model, modes, depth, k, seed);
            if let Some(path) = distribution {
                let dists = sampler::simulate_distribution(&spec).map_err(|e| e.to_string())?;
                let mut csv = String::from("mode,bin_index,bin_center,mass\n");
                for (mode, d) in dists.iter().enumerate() {
                    for bin in -d.k_lim..=d.k_lim {
                        csv.push_str(&format!(
                            "{},{},{},{}\n",
                            mode,
                            bin,
                            sig6(spec.homodyne.bin_center(bin)),
                            sig6(d.mass_of(bin))
                        ));
                    }
                }
                std::fs::write(path, csv).map_err(|e| e.to_string())?;
            }
            let records = sampler::sample(&spec, shots, seed ^ 0x5eed).map_err(|e| e.to_string())?;
            let mut csv = String::from("shot,mode,bin_index,bin_center\n");
            for r in &records {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    r.shot,
                    r.mode,
                    r.bin,
                    sig6(r.center)
                ));
            }
            write_output(Output::Csv(csv), &common.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { quick, common } => {
            let checks = verify::run_battery(quick);
            let all_passed = checks.iter().all(|c| c.passed);
            for c in &checks {
                eprintln!(
                    "{} {} — {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let mut report = Report::new("verify", json!({"quick": quick}));
            report.outputs = json!({
                "passed": all_passed,
                "checks": checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect::<Vec<_>>(),
            });
            report.runtime_ms = started.elapsed().as_millis() as u64;
            write_output(Output::Json(report), &common.out)?;
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn push_table_discrepancies(report: &mut Report, table: &[ftcalc::ParameterRow]) {
    for row in table {
        if row.matches == Some(false) {
            report.discrepancies.push(Discrepancy {
                quantity: row.quantity.clone(),
                reference_value: row.reference.unwrap(),
                computed_value: row.derived,
                note: "derived parameter disagrees with the published table entry".into(),
            });
        }
    }
}
