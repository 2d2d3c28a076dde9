use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64;

use entrocast::broadcast::{
    broadcast_residual, classical_copier, entropy_gap_certificate, mixture_reduction,
    optimize_broadcaster, unitary_from_params, BroadcastCertificate, BroadcastTask,
    OptimizerConfig,
};
use entrocast::linalg::{CMatrix, CVector};
use entrocast::state::DensityMatrix;
use entrocast::Error;

use crate::input;
use crate::report::{self, Format};

const COPIER_RESIDUAL_TOL: f64 = 1e-6;
const COPIER_GAP_TOL: f64 = 1e-8;
const IMPOSSIBILITY_FLOOR: f64 = 1e-3;
const NEAR_BROADCAST_RESIDUAL: f64 = 0.05;
const NEAR_CLOSED_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BroadcastPreset {
    /// Two commuting diagonal qubits through the permutation copier.
    CommutingDiagonal,
    /// Ground state and equal superposition through the optimizer.
    ZeroPlus,
    /// Sources from a JSON file through the optimizer.
    Custom,
}

#[derive(Args)]
pub struct BroadcastArgs {
    #[arg(long, value_enum)]
    pub preset: BroadcastPreset,

    /// JSON array with exactly two source matrices (custom preset).
    #[arg(long)]
    pub sources: Option<PathBuf>,

    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    #[arg(long, default_value_t = 20)]
    pub restarts: usize,

    /// Coordinate sweeps per optimizer restart.
    #[arg(long, default_value_t = 20)]
    pub max_sweeps: usize,

    /// Machine dimension; source dimension squared when omitted.
    #[arg(long)]
    pub machine_dim: Option<usize>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &BroadcastArgs) -> i32 {
    let sources = match build_sources(args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let task = match build_task(args, sources) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };

    let outcome = match args.preset {
        BroadcastPreset::CommutingDiagonal => run_copier(args, &task),
        BroadcastPreset::ZeroPlus | BroadcastPreset::Custom => run_optimizer(args, &task),
    };
    let (residual, certificate, pass) = match outcome {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };

    let preset = match args.preset {
        BroadcastPreset::CommutingDiagonal => "commuting-diagonal",
        BroadcastPreset::ZeroPlus => "zero-plus",
        BroadcastPreset::Custom => "custom",
    };
    let text = match args.format {
        Format::Csv => {
            let mut text =
                String::from("preset,seed,restarts,residual,entropy_in,entropy_out,gap,status\n");
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                preset,
                args.seed,
                args.restarts,
                report::real(residual),
                report::entropy_text(&certificate.entropy_in),
                report::entropy_text(&certificate.entropy_out),
                report::real(certificate.gap),
                report::status(pass),
            ));
            text
        }
        Format::Json => {
            let doc = serde_json::json!({
                "preset": preset,
                "residual": residual,
                "entropy_in": report::entropy_json(&certificate.entropy_in),
                "entropy_out": report::entropy_json(&certificate.entropy_out),
                "gap": certificate.gap,
                "seed": args.seed,
                "restarts": args.restarts,
                "pass": pass,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    report::finish(args.out.as_deref(), &text, pass)
}

fn build_sources(args: &BroadcastArgs) -> Result<Vec<DensityMatrix>, String> {
    match args.preset {
        BroadcastPreset::CommutingDiagonal => Ok(vec![
            DensityMatrix::from_probabilities(&[0.7, 0.3]).expect("valid fixed source"),
            DensityMatrix::from_probabilities(&[0.4, 0.6]).expect("valid fixed source"),
        ]),
        BroadcastPreset::ZeroPlus => {
            let zero = DensityMatrix::basis_state(2, 0).expect("valid fixed source");
            let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let plus_vec = CVector::from_element(2, amp);
            let plus = DensityMatrix::from_pure(&plus_vec, vec![2]).expect("valid fixed source");
            Ok(vec![zero, plus])
        }
        BroadcastPreset::Custom => {
            let path = args
                .sources
                .as_ref()
                .ok_or_else(|| "custom preset needs --sources".to_string())?;
            let sources = input::load_sources(path)?;
            if sources.len() != 2 {
                return Err(format!("need exactly two sources, got {}", sources.len()));
            }
            Ok(sources)
        }
    }
}

fn build_task(args: &BroadcastArgs, sources: Vec<DensityMatrix>) -> Result<BroadcastTask, String> {
    match args.machine_dim {
        None => BroadcastTask::with_defaults(sources).map_err(|e| e.to_string()),
        Some(m) => {
            let d = sources[0].dim();
            let target = DensityMatrix::basis_state(d, 0).map_err(|e| e.to_string())?;
            let machine = DensityMatrix::basis_state(m, 0).map_err(|e| e.to_string())?;
            BroadcastTask::new(sources, target, machine).map_err(|e| e.to_string())
        }
    }
}

fn run_copier(
    _args: &BroadcastArgs,
    task: &BroadcastTask,
) -> Result<(f64, BroadcastCertificate, bool), String> {
    let (d, _, machine_dim) = task.dims();
    let u = classical_copier(d, machine_dim).map_err(|e| e.to_string())?;
    let residual = broadcast_residual(task, &u).map_err(|e| e.to_string())?;
    let certificate = certificate_for(task, &u)?;
    let pass = residual <= COPIER_RESIDUAL_TOL && certificate.gap.abs() <= COPIER_GAP_TOL;
    Ok((residual, certificate, pass))
}

fn run_optimizer(
    args: &BroadcastArgs,
    task: &BroadcastTask,
) -> Result<(f64, BroadcastCertificate, bool), String> {
    let cfg = OptimizerConfig {
        seed: args.seed,
        restarts: args.restarts,
        max_sweeps: args.max_sweeps,
        ..OptimizerConfig::default()
    };
    let (params, history) = optimize_broadcaster(task, &cfg).map_err(|e| e.to_string())?;
    let u = unitary_from_params(&params, task.total_dim()).map_err(|e| e.to_string())?;
    let residual = broadcast_residual(task, &u).map_err(|e| e.to_string())?;
    let certificate = certificate_for(task, &u)?;
    let pass = match args.preset {
        // Non-commuting pure sources cannot be broadcast: the optimum must
        // stay off the floor and never pair a small residual with a closed
        // entropy gap.
        BroadcastPreset::ZeroPlus => {
            let floor = history.iter().fold(residual, |a, &b| a.min(b));
            floor > IMPOSSIBILITY_FLOOR
                && !(residual <= NEAR_BROADCAST_RESIDUAL
                    && certificate.gap.abs() <= NEAR_CLOSED_GAP)
        }
        _ => true,
    };
    Ok((residual, certificate, pass))
}

/// Certificate for the task's own source pair when its relative entropy is
/// finite; otherwise for the pair (s₁, even mixture), which always is.
fn certificate_for(task: &BroadcastTask, u: &CMatrix) -> Result<BroadcastCertificate, String> {
    match entropy_gap_certificate(task, u) {
        Ok(cert) => Ok(cert),
        Err(Error::InfiniteEntropy) => {
            let sources = task.sources();
            let (mix, _) = mixture_reduction(&sources[0], &sources[1], 0.5)
                .map_err(|e| e.to_string())?;
            let (d, _, m) = task.dims();
            let target = DensityMatrix::basis_state(d, 0).map_err(|e| e.to_string())?;
            let machine = DensityMatrix::basis_state(m, 0).map_err(|e| e.to_string())?;
            let reduced = BroadcastTask::new(vec![sources[0].clone(), mix], target, machine)
                .map_err(|e| e.to_string())?;
            entropy_gap_certificate(&reduced, u).map_err(|e| e.to_string())
        }
        Err(e) => Err(e.to_string()),
    }
}
