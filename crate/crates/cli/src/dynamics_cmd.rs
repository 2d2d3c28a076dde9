use std::path::PathBuf;

use clap::{Args, ValueEnum};

use entrocast::dynamics::{
    correspondence_report, free_hamiltonian, harmonic_hamiltonian, kernel_deviation,
    quartic_hamiltonian, CharacteristicFunction, CorrespondenceRow,
};
use entrocast::phase_space::{GridSpec, PhaseSpaceDistribution};

use crate::report::{self, Format};

/// Deviations at or below this level count as zero when judging whether
/// shrinking hbar shrinks the quantum-classical gap.
const DEVIATION_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DynamicsPreset {
    /// No Hamiltonian: the density must not move.
    Zero,
    /// Kinetic term `p^2 / 2`.
    Free,
    /// Isotropic oscillator `strength (x^2 + p^2) / 2`.
    Harmonic,
    /// Pure quartic potential `strength x^4 / 4`.
    Quartic,
}

#[derive(Args)]
pub struct DynamicsArgs {
    #[arg(long, value_enum)]
    pub preset: DynamicsPreset,

    /// Coupling in front of the harmonic or quartic preset
    /// [default: 1, or 0.5 for quartic].
    #[arg(long)]
    pub strength: Option<f64>,

    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
    pub hbar_schedule: Vec<f64>,

    /// Evolution time [default: a quarter period of the unit oscillator,
    /// or 0.5 for free and 0.25 for quartic].
    #[arg(long)]
    pub t_final: Option<f64>,

    /// Half-width of the spatial grid carrying the initial density.
    #[arg(long, default_value_t = 3.2)]
    pub half_width: f64,

    /// Nodes per axis of the spatial grid.
    #[arg(long, default_value_t = 49)]
    pub nodes: usize,

    /// Half-width of the frequency grid carrying the evolution.
    #[arg(long, default_value_t = 9.0)]
    pub freq_half_width: f64,

    /// Nodes per axis of the frequency grid.
    #[arg(long, default_value_t = 31)]
    pub freq_nodes: usize,

    /// Center of the initial Gaussian density
    /// [default: (0.55, 0.55), or (0, 0.3) for free].
    #[arg(long)]
    pub center_x: Option<f64>,

    #[arg(long)]
    pub center_p: Option<f64>,

    /// Standard deviation of the initial Gaussian density.
    #[arg(long, default_value_t = 0.6)]
    pub sigma: f64,

    /// Low-discrepancy samples for the kernel-deviation table.
    #[arg(long, default_value_t = 4096)]
    pub deviation_samples: usize,

    /// The kernel deviation is maximized over the box `[-b, b]^4`.
    #[arg(long, default_value_t = 2.0)]
    pub deviation_box: f64,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Scene values resolved per preset when not given explicitly. The zero and
/// harmonic flows move the density rigidly, so the long off-center
/// quarter-period scene stays inside the box; the free and quartic flows
/// shear it and need shorter, gentler scenes to keep the evolved density
/// clear of the grid edge.
struct Scene {
    strength: f64,
    t_final: f64,
    center_x: f64,
    center_p: f64,
}

fn scene(args: &DynamicsArgs) -> Scene {
    let (strength, t_final, center) = match args.preset {
        DynamicsPreset::Zero | DynamicsPreset::Harmonic => {
            (1.0, std::f64::consts::FRAC_PI_2, (0.55, 0.55))
        }
        DynamicsPreset::Free => (1.0, 0.5, (0.0, 0.3)),
        DynamicsPreset::Quartic => (0.5, 0.25, (0.55, 0.55)),
    };
    Scene {
        strength: args.strength.unwrap_or(strength),
        t_final: args.t_final.unwrap_or(t_final),
        center_x: args.center_x.unwrap_or(center.0),
        center_p: args.center_p.unwrap_or(center.1),
    }
}

pub fn run(args: &DynamicsArgs) -> i32 {
    let outcome = build_and_run(args);
    let (kernel_rows, rows) = match outcome {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };

    let shrinking = deviations_shrink(&rows);
    let text = match args.format {
        Format::Csv => render_csv(&kernel_rows, &rows, shrinking),
        Format::Json => render_json(&kernel_rows, &rows, shrinking),
    };
    report::finish(args.out.as_deref(), &text, shrinking)
}

fn build_and_run(
    args: &DynamicsArgs,
) -> Result<(Vec<(f64, f64)>, Vec<CorrespondenceRow>), String> {
    let b = args.deviation_box;
    if !(b > 0.0 && b.is_finite()) {
        return Err("deviation box half-width must be positive and finite".to_string());
    }
    let mut kernel_rows = Vec::new();
    for &hbar in &args.hbar_schedule {
        let dev = kernel_deviation([-b; 4], [b; 4], hbar, args.deviation_samples)
            .map_err(|e| e.to_string())?;
        kernel_rows.push((hbar, dev));
    }

    let scene = scene(args);
    let space = GridSpec::symmetric(args.half_width, args.nodes).map_err(|e| e.to_string())?;
    let freq =
        GridSpec::symmetric(args.freq_half_width, args.freq_nodes).map_err(|e| e.to_string())?;
    let p0 = PhaseSpaceDistribution::gaussian(
        space,
        scene.center_x,
        scene.center_p,
        args.sigma,
        args.sigma,
    )
    .map_err(|e| e.to_string())?;
    let h = match args.preset {
        DynamicsPreset::Zero => CharacteristicFunction::zeros(freq),
        DynamicsPreset::Free => free_hamiltonian(&freq).map_err(|e| e.to_string())?,
        DynamicsPreset::Harmonic => {
            harmonic_hamiltonian(&freq, scene.strength).map_err(|e| e.to_string())?
        }
        DynamicsPreset::Quartic => {
            quartic_hamiltonian(&freq, scene.strength).map_err(|e| e.to_string())?
        }
    };

    let rows = correspondence_report(&p0, &h, &args.hbar_schedule, scene.t_final)
        .map_err(|e| e.to_string())?;
    Ok((kernel_rows, rows))
}

/// Every deviation column must shrink along the schedule, except where both
/// neighbors already sit at the noise floor.
fn deviations_shrink(rows: &[CorrespondenceRow]) -> bool {
    rows.windows(2).all(|w| {
        columns(&w[0])
            .into_iter()
            .zip(columns(&w[1]))
            .all(|(a, b)| b <= a || (a <= DEVIATION_FLOOR && b <= DEVIATION_FLOOR))
    })
}

fn columns(row: &CorrespondenceRow) -> [f64; 4] {
    [row.dx_mean, row.dp_mean, row.dx2, row.dp2]
}

fn render_csv(kernel_rows: &[(f64, f64)], rows: &[CorrespondenceRow], shrinking: bool) -> String {
    let mut text = String::from("hbar,kernel_deviation\n");
    for &(hbar, dev) in kernel_rows {
        text.push_str(&format!("{},{}\n", report::real(hbar), report::real(dev)));
    }
    text.push('\n');
    text.push_str("hbar,t_final,dx_mean,dp_mean,dx2,dp2\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report::real(row.hbar),
            report::real(row.t_final),
            report::real(row.dx_mean),
            report::real(row.dp_mean),
            report::real(row.dx2),
            report::real(row.dp2),
        ));
    }
    text.push('\n');
    text.push_str(&format!(
        "check,status\ndeviations_shrink,{}\n",
        report::status(shrinking)
    ));
    text
}

fn render_json(kernel_rows: &[(f64, f64)], rows: &[CorrespondenceRow], shrinking: bool) -> String {
    let kernel: Vec<_> = kernel_rows
        .iter()
        .map(|&(hbar, dev)| serde_json::json!({"hbar": hbar, "kernel_deviation": dev}))
        .collect();
    let doc = serde_json::json!({
        "kernel": kernel,
        "correspondence": rows,
        "deviations_shrink": shrinking,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
}
