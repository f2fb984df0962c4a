use serde::Serialize;

use kinlayer::expansion::{far_field_gap, grazing_probe, grazing_probe_diffusive, verify_point_formulas};
use kinlayer::milne::BoundaryKind;

use crate::args::ProbeKind;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{opt, Output};

pub const MAX_LEVELS: usize = 8;
pub const POINT_NS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Serialize)]
struct Table {
    probe: ProbeKind,
    header: Vec<&'static str>,
    rows: Vec<Vec<Option<f64>>>,
}

fn cell(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e6 {
        format!("{x}")
    } else {
        format!("{x:.6e}")
    }
}

fn emit(out: &mut Output, cfg: &RunConfig, probe: ProbeKind, name: &str, header: Vec<&'static str>, rows: Vec<Vec<Option<f64>>>) -> Result<Vec<String>> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| opt(*v)).collect()).collect();
    out.csv(&format!("{name}.csv"), &header, &text)?;
    let mut lines = vec![header.join("  ")];
    lines.extend(rows.iter().map(|r| {
        r.iter().map(|v| v.map_or_else(|| "-".to_string(), cell)).collect::<Vec<_>>().join("  ")
    }));
    out.json(&format!("{name}.json"), "probe", cfg, &Table { probe, header, rows })?;
    Ok(lines)
}

pub fn run(cfg: &RunConfig, probe: ProbeKind, levels: usize, out: &mut Output) -> Result<Vec<String>> {
    let g = cfg.profile()?;
    match probe {
        ProbeKind::Grazing => {
            if !(1..=MAX_LEVELS).contains(&levels) {
                return Err(CliError::config(format!("levels must lie in 1..={MAX_LEVELS}")));
            }
            let table = match cfg.kind() {
                BoundaryKind::Inflow => grazing_probe(&g, levels)?,
                BoundaryKind::Diffusive => grazing_probe_diffusive(&g, levels)?,
            };
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Some(r.level as f64),
                        Some(r.n_angles as f64),
                        Some(r.phi_min),
                        Some(r.f_bar0),
                        Some(r.f_wall),
                        Some(r.derivative),
                        Some(r.scaled()),
                        r.growth,
                    ]
                })
                .collect();
            let header = vec!["level", "n_angles", "phi_min", "f_bar0", "f_wall", "derivative", "scaled", "growth"];
            let mut lines = emit(out, cfg, probe, "probe_grazing", header, rows)?;
            let monotone = table.rows.windows(2).all(|w| w[1].derivative > w[0].derivative);
            lines.push(format!("derivative growing monotonically: {monotone}"));
            Ok(lines)
        }
        ProbeKind::Point => {
            let rows = verify_point_formulas(&cfg.eps, &POINT_NS, &g, &cfg.radial()?, &cfg.angles()?)?
                .iter()
                .map(|r| {
                    [r.epsilon, r.n, r.flat_solved, r.flat_formula, r.geometric_solved, r.geometric_formula, r.discrepancy]
                        .map(Some)
                        .to_vec()
                })
                .collect();
            let header = vec!["epsilon", "n", "flat_solved", "flat_formula", "geometric_solved", "geometric_formula", "discrepancy"];
            emit(out, cfg, probe, "probe_point", header, rows)
        }
        ProbeKind::FarField => {
            let (radial, angles) = (cfg.radial()?, cfg.angles()?);
            let mut rows = Vec::new();
            for &eps in &cfg.eps {
                let f = far_field_gap(&g, eps, &radial, &angles)?;
                rows.push(vec![Some(eps), Some(f.geometric), Some(f.classical), Some(f.gap())]);
            }
            emit(out, cfg, probe, "probe_far_field", vec!["epsilon", "geometric", "classical", "gap"], rows)
        }
    }
}

