use serde::Serialize;

use kinlayer::disk::{self, DiskBoundary};
use kinlayer::expansion::{error_report, loglog_slope, ExpansionSpec, SweepRow, Variant};

use crate::args::VariantArg;
use crate::commands::disk::problem as disk_problem;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{num, Output};

#[derive(Debug, Serialize)]
struct Row {
    epsilon: f64,
    variant: &'static str,
    order: u8,
    sup_error: f64,
    l2_error: f64,
    grazing_sup_error: f64,
}

#[derive(Debug, Serialize)]
struct Slope {
    variant: &'static str,
    slope: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ExpandDoc {
    rows: Vec<Row>,
    slopes: Vec<Slope>,
}

pub fn variants(v: VariantArg) -> Vec<Variant> {
    match v {
        VariantArg::Classical => vec![Variant::Classical],
        VariantArg::Geometric => vec![Variant::Geometric],
        VariantArg::Both => vec![Variant::Geometric, Variant::Classical],
    }
}

pub fn run(cfg: &RunConfig, variant: VariantArg, order: u8, out: &mut Output) -> Result<Vec<String>> {
    if order > 1 {
        return Err(CliError::config("order must be 0 or 1"));
    }
    let variants = variants(variant);
    let boundary = DiskBoundary::Uniform(cfg.profile()?);
    let (radial, angles) = (cfg.radial()?, cfg.angles()?);
    let mut sweep: Vec<SweepRow> = Vec::new();
    let mut rows = Vec::new();
    for &eps in &cfg.eps {
        let reference = disk::solve(&disk_problem(cfg, eps)?)?;
        for &v in &variants {
            let spec = ExpansionSpec::new(v, order, boundary.clone(), cfg.kind(), eps)
                .with_grids(radial.clone(), angles.clone());
            let rep = error_report(&spec, &reference)?;
            sweep.push(rep.row());
            rows.push(Row {
                epsilon: eps,
                variant: v.name(),
                order,
                sup_error: rep.sup_error,
                l2_error: rep.l2_error,
                grazing_sup_error: rep.grazing_sup_error,
            });
        }
    }
    let slopes: Vec<Slope> = variants
        .iter()
        .map(|&v| {
            let sub: Vec<SweepRow> = sweep.iter().filter(|r| r.variant == v).copied().collect();
            Slope { variant: v.name(), slope: loglog_slope(&sub) }
        })
        .collect();
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![num(r.epsilon), r.variant.into(), r.order.to_string(), num(r.sup_error), num(r.l2_error)])
        .collect();
    out.csv("expand.csv", &["epsilon", "variant", "order", "sup_error", "l2_error"], &csv_rows)?;
    let mut lines: Vec<String> = rows
        .iter()
        .map(|r| format!("eps {:<8} {:<10} order {}  sup {:.6e}  l2 {:.6e}", r.epsilon, r.variant, r.order, r.sup_error, r.l2_error))
        .collect();
    for s in &slopes {
        match s.slope {
            Some(k) => lines.push(format!("{} log-log slope: {k:.4}", s.variant)),
            None => lines.push(format!("{} log-log slope: n/a", s.variant)),
        }
    }
    out.json("expand.json", "expand", cfg, &ExpandDoc { rows, slopes })?;
    Ok(lines)
}
