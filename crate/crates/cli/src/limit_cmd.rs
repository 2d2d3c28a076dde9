use std::path::PathBuf;

use clap::{Args, ValueEnum};

use entrocast::entropy::{kl_divergence_grid, quantum_relative_entropy, ExtendedNonNegative};
use entrocast::phase_space::{
    build_v_matrix, eigenvalue_multiset_distance, hbar_sweep, p_construct, v_eigensystem,
    FockConfig, GridSpec, PhaseSpaceDistribution, SweepRow,
};

use crate::input;
use crate::report::{self, Format};

const MONOTONE_SLACK: f64 = 1e-12;
const VMATRIX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitPreset {
    /// Identical unit Gaussians at the origin.
    Identical,
    /// Unit Gaussians with the second center shifted along x.
    Offset,
    /// Both densities from CSV files.
    Custom,
}

#[derive(Args)]
pub struct LimitArgs {
    #[arg(long, value_enum, default_value = "identical")]
    pub preset: LimitPreset,

    /// First density as a `x,p,value` CSV (custom preset).
    #[arg(long)]
    pub p1: Option<PathBuf>,

    /// Second density as a `x,p,value` CSV (custom preset).
    #[arg(long)]
    pub p2: Option<PathBuf>,

    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25,0.125")]
    pub hbar_schedule: Vec<f64>,

    /// Even moment order n of the comparison (n must be at least 2).
    #[arg(long, default_value_t = 2)]
    pub moment_order: usize,

    /// Half-width of the square grid used by the presets.
    #[arg(long, default_value_t = 6.0)]
    pub half_width: f64,

    /// Nodes per axis of the preset grid.
    #[arg(long, default_value_t = 65)]
    pub nodes: usize,

    /// Also compare relative entropy against the classical divergence;
    /// rows whose truncated supports fail to overlap report `inf`.
    #[arg(long)]
    pub direct: bool,

    /// Absolute support-cutoff override for the direct comparison; each
    /// state's relative default applies when omitted. Lowering it keeps
    /// more of the tiny tail eigenvalues in play, which can turn `inf`
    /// rows finite at the cost of a less stable matrix log.
    #[arg(long, value_name = "EPS")]
    pub support_cutoff: Option<f64>,

    /// Verify the moment-matrix eigensystem for sizes 2..=N.
    #[arg(long, value_name = "N")]
    pub vmatrix: Option<usize>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &LimitArgs) -> i32 {
    if args.moment_order < 2 {
        eprintln!("error: moment order must be at least 2, got {}", args.moment_order);
        return 2;
    }
    let (p1, p2) = match build_densities(args) {
        Ok(pair) => pair,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };

    let template = FockConfig::new(2, 1.0).expect("valid template");
    let rows = match hbar_sweep(&p1, &p2, args.moment_order, &args.hbar_schedule, &template) {
        Ok(rows) => rows,
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };
    let monotone = rows
        .windows(2)
        .all(|w| w[1].rel_error <= w[0].rel_error + MONOTONE_SLACK);

    if let Some(eps) = args.support_cutoff {
        if !(eps > 0.0 && eps.is_finite()) {
            eprintln!("error: support cutoff must be positive and finite, got {eps}");
            return 2;
        }
    }
    let direct = if args.direct {
        match direct_rows(&p1, &p2, &args.hbar_schedule, args.support_cutoff) {
            Ok(rows) => Some(rows),
            Err(msg) => {
                eprintln!("error: {msg}");
                return 2;
            }
        }
    } else {
        None
    };

    let vmatrix = match args.vmatrix {
        Some(max_n) => {
            if max_n < 2 {
                eprintln!("error: vmatrix bound must be at least 2, got {max_n}");
                return 2;
            }
            Some(vmatrix_rows(max_n))
        }
        None => None,
    };
    let vmatrix_pass = vmatrix
        .as_ref()
        .map_or(true, |rows| rows.iter().all(|r| r.pass));
    let pass = monotone && vmatrix_pass;

    let text = match args.format {
        Format::Csv => render_csv(&rows, direct.as_deref(), vmatrix.as_deref(), monotone, pass),
        Format::Json => render_json(args, &rows, direct.as_deref(), vmatrix.as_deref(), monotone, pass),
    };
    report::finish(args.out.as_deref(), &text, pass)
}

fn build_densities(
    args: &LimitArgs,
) -> Result<(PhaseSpaceDistribution, PhaseSpaceDistribution), String> {
    match args.preset {
        LimitPreset::Custom => {
            let p1_path = args.p1.as_ref().ok_or("custom preset needs --p1")?;
            let p2_path = args.p2.as_ref().ok_or("custom preset needs --p2")?;
            let p1 = input::load_distribution(p1_path)?;
            let p2 = input::load_distribution(p2_path)?;
            if p1.grid() != p2.grid() {
                return Err("the two densities use different grids".to_string());
            }
            Ok((p1, p2))
        }
        preset => {
            let grid = GridSpec::symmetric(args.half_width, args.nodes)
                .map_err(|e| e.to_string())?;
            let shift = match preset {
                LimitPreset::Identical => 0.0,
                _ => 0.5,
            };
            let p1 = PhaseSpaceDistribution::gaussian(grid.clone(), 0.0, 0.0, 1.0, 1.0)
                .map_err(|e| e.to_string())?;
            let p2 = PhaseSpaceDistribution::gaussian(grid, shift, 0.0, 1.0, 1.0)
                .map_err(|e| e.to_string())?;
            Ok((p1, p2))
        }
    }
}

struct DirectRow {
    hbar: f64,
    /// Infinite when the truncated supports fail to overlap; reported as
    /// `inf` rather than treated as an error, since the table is
    /// informational.
    s_quantum: ExtendedNonNegative,
    k_classical: f64,
}

impl DirectRow {
    fn abs_diff(&self) -> Option<f64> {
        self.s_quantum.finite().map(|s| (s - self.k_classical).abs())
    }
}

fn direct_rows(
    p1: &PhaseSpaceDistribution,
    p2: &PhaseSpaceDistribution,
    schedule: &[f64],
    cutoff: Option<f64>,
) -> Result<Vec<DirectRow>, String> {
    let k_classical = kl_divergence_grid(p1, p2).map_err(|e| e.to_string())?;
    let k_classical = k_classical
        .finite()
        .ok_or("classical divergence is infinite on this grid")?;
    schedule
        .iter()
        .map(|&hbar| {
            let cfg = FockConfig::auto_for_grid(p1.grid(), hbar, 2).map_err(|e| e.to_string())?;
            let rho1 = p_construct(p1, &cfg).map_err(|e| e.to_string())?;
            let rho2 = p_construct(p2, &cfg).map_err(|e| e.to_string())?;
            let s = quantum_relative_entropy(&rho1, &rho2, cutoff).map_err(|e| e.to_string())?;
            Ok(DirectRow {
                hbar,
                s_quantum: s,
                k_classical,
            })
        })
        .collect()
}

struct VMatrixRow {
    n: usize,
    eigenpair_residual: f64,
    multiset_distance: f64,
    zero_count: usize,
    pass: bool,
}

fn vmatrix_rows(max_n: usize) -> Vec<VMatrixRow> {
    (2..=max_n)
        .map(|n| {
            let v = build_v_matrix(n).expect("n >= 2");
            match v_eigensystem(&v) {
                Ok(sys) => {
                    let mut worst = 0.0f64;
                    for col in 0..v.dim() {
                        let e = sys.vectors().column(col);
                        let residual = (v.matrix() * e - e * sys.eigenvalues()[col]).norm();
                        worst = worst.max(residual);
                    }
                    let distance = v
                        .numerical_eigenvalues()
                        .and_then(|numeric| {
                            eigenvalue_multiset_distance(sys.eigenvalues(), &numeric)
                        })
                        .unwrap_or(f64::INFINITY);
                    let zero_count = sys.zero_eigenvalue_count();
                    let pass =
                        worst <= VMATRIX_TOL && distance <= VMATRIX_TOL && zero_count == 2;
                    VMatrixRow {
                        n,
                        eigenpair_residual: worst,
                        multiset_distance: distance,
                        zero_count,
                        pass,
                    }
                }
                Err(_) => VMatrixRow {
                    n,
                    eigenpair_residual: f64::INFINITY,
                    multiset_distance: f64::INFINITY,
                    zero_count: 0,
                    pass: false,
                },
            }
        })
        .collect()
}

fn render_csv(
    rows: &[SweepRow],
    direct: Option<&[DirectRow]>,
    vmatrix: Option<&[VMatrixRow]>,
    monotone: bool,
    pass: bool,
) -> String {
    let mut text = String::from("hbar,n,quantum_raw,quantum,classical,rel_error\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report::real(row.hbar),
            row.n,
            report::real(row.quantum_raw),
            report::real(row.quantum),
            report::real(row.classical),
            report::real(row.rel_error),
        ));
    }
    if let Some(direct) = direct {
        text.push('\n');
        text.push_str("hbar,s_quantum,k_classical,abs_diff\n");
        for row in direct {
            let diff = row
                .abs_diff()
                .map_or_else(|| "inf".to_string(), report::real);
            text.push_str(&format!(
                "{},{},{},{}\n",
                report::real(row.hbar),
                report::entropy_text(&row.s_quantum),
                report::real(row.k_classical),
                diff,
            ));
        }
    }
    if let Some(vmatrix) = vmatrix {
        text.push('\n');
        text.push_str("n,eigenpair_residual,multiset_distance,zero_count,status\n");
        for row in vmatrix {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n,
                report::real(row.eigenpair_residual),
                report::real(row.multiset_distance),
                row.zero_count,
                report::status(row.pass),
            ));
        }
    }
    text.push('\n');
    text.push_str(&format!(
        "check,status\nrel_error_monotone,{}\noverall,{}\n",
        report::status(monotone),
        report::status(pass)
    ));
    text
}

fn render_json(
    args: &LimitArgs,
    rows: &[SweepRow],
    direct: Option<&[DirectRow]>,
    vmatrix: Option<&[VMatrixRow]>,
    monotone: bool,
    pass: bool,
) -> String {
    let mut doc = serde_json::json!({
        "moment_order": args.moment_order,
        "sweep": rows,
        "rel_error_monotone": monotone,
        "pass": pass,
    });
    let map = doc.as_object_mut().expect("object");
    if let Some(direct) = direct {
        let rows: Vec<_> = direct
            .iter()
            .map(|r| {
                serde_json::json!({
                    "hbar": r.hbar,
                    "s_quantum": report::entropy_json(&r.s_quantum),
                    "k_classical": r.k_classical,
                    "abs_diff": r.abs_diff().map_or(serde_json::json!("inf"), |d| serde_json::json!(d)),
                })
            })
            .collect();
        map.insert("direct".to_string(), serde_json::json!(rows));
    }
    if let Some(vmatrix) = vmatrix {
        let rows: Vec<_> = vmatrix
            .iter()
            .map(|r| {
                serde_json::json!({
                    "n": r.n,
                    "eigenpair_residual": r.eigenpair_residual,
                    "multiset_distance": r.multiset_distance,
                    "zero_count": r.zero_count,
                    "pass": r.pass,
                })
            })
            .collect();
        map.insert("vmatrix".to_string(), serde_json::json!(rows));
    }
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
}
