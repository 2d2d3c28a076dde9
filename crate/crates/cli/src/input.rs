use std::fs;
use std::path::Path;

use entrocast::phase_space::{GridSpec, PhaseSpaceDistribution};
use entrocast::serialize::MatrixJson;
use entrocast::state::DensityMatrix;

/// Reads a phase-space density from a `x,p,value` CSV covering a full
/// uniform grid. Row order is free; the quadrature mass is renormalized
/// to one before validation.
pub fn load_distribution(path: &Path) -> Result<PhaseSpaceDistribution, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.eq_ignore_ascii_case("x,p,value") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format!(
                "{}:{}: expected three fields `x,p,value`",
                path.display(),
                lineno + 1
            ));
        }
        let mut parsed = [0.0f64; 3];
        for (k, field) in fields.iter().enumerate() {
            parsed[k] = field
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("{}:{}: bad number `{field}`", path.display(), lineno + 1))?;
            if !parsed[k].is_finite() {
                return Err(format!("{}:{}: non-finite entry", path.display(), lineno + 1));
            }
        }
        rows.push((parsed[0], parsed[1], parsed[2]));
    }
    if rows.is_empty() {
        return Err(format!("{}: no data rows", path.display()));
    }

    let xs = sorted_axis(rows.iter().map(|r| r.0));
    let ps = sorted_axis(rows.iter().map(|r| r.1));
    check_uniform(&xs, "x")?;
    check_uniform(&ps, "p")?;
    if xs.len() * ps.len() != rows.len() {
        return Err(format!(
            "grid is not complete: {} x-values times {} p-values, but {} rows",
            xs.len(),
            ps.len(),
            rows.len()
        ));
    }

    let grid = GridSpec::new(xs[0], xs[xs.len() - 1], xs.len(), ps[0], ps[ps.len() - 1], ps.len())
        .map_err(|e| e.to_string())?;
    let mut values = vec![f64::NAN; grid.node_count()];
    for &(x, p, v) in &rows {
        let i = axis_index(&xs, x);
        let j = axis_index(&ps, p);
        let slot = &mut values[i * ps.len() + j];
        if !slot.is_nan() {
            return Err(format!("duplicate grid node ({x}, {p})"));
        }
        *slot = v;
    }

    let mut mass = 0.0;
    for i in 0..grid.nx() {
        for j in 0..grid.np() {
            mass += grid.weight(i, j) * values[i * grid.np() + j];
        }
    }
    if !(mass > 0.0) {
        return Err("distribution has no positive quadrature mass".to_string());
    }
    for v in &mut values {
        *v /= mass;
    }
    PhaseSpaceDistribution::new(grid, values).map_err(|e| e.to_string())
}

fn sorted_axis(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut axis: Vec<f64> = values.collect();
    axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
    axis.dedup();
    axis
}

fn axis_index(axis: &[f64], value: f64) -> usize {
    axis.binary_search_by(|probe| probe.partial_cmp(&value).unwrap())
        .expect("axis entries come from the same rows")
}

fn check_uniform(axis: &[f64], name: &str) -> Result<(), String> {
    if axis.len() < 2 {
        return Err(format!("axis {name} needs at least two distinct values"));
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    for pair in axis.windows(2) {
        if ((pair[1] - pair[0]) - step).abs() > 1e-9 * step.abs().max(1.0) {
            return Err(format!("axis {name} is not uniformly spaced"));
        }
    }
    Ok(())
}

/// Reads a JSON array of matrices and validates each as a density matrix
/// on a single subsystem of the stated dimension.
pub fn load_sources(path: &Path) -> Result<Vec<DensityMatrix>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let raw: Vec<MatrixJson> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    raw.iter()
        .map(|m| m.to_density().map_err(|e| e.to_string()))
        .collect()
}
