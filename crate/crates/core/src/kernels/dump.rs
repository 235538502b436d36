//! CSV dump of kernel values over a list of point pairs.
//!
//! Format: header `x_coords,y_coords,kernel,err_est`, coordinates
//! semicolon-separated within their cell, one row per evaluated pair.

use std::io::Write;

use super::evaluate::kernel_general_alt;
use super::KernelSpec;
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

/// One evaluated pair, ready for serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDumpRow {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub kernel: f64,
    pub err_est: f64,
}

fn join_coords(v: &[f64]) -> String {
    v.iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Evaluate the alternative kernel on every pair and write the CSV table.
pub fn write_kernel_dump(
    spec: &KernelSpec,
    pairs: &[(Vec<f64>, Vec<f64>)],
    cfg: &QuadratureConfig,
    out: &mut dyn Write,
) -> Result<Vec<KernelDumpRow>> {
    writeln!(out, "x_coords,y_coords,kernel,err_est")
        .map_err(|e| Error::Experiment(format!("kernel dump write failed: {e}")))?;
    let mut rows = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let res = kernel_general_alt(spec, x, y, cfg)?;
        let row = KernelDumpRow {
            x: x.clone(),
            y: y.clone(),
            kernel: res.value,
            err_est: res.error_estimate,
        };
        writeln!(
            out,
            "{},{},{},{}",
            join_coords(&row.x),
            join_coords(&row.y),
            row.kernel,
            row.err_est
        )
        .map_err(|e| Error::Experiment(format!("kernel dump write failed: {e}")))?;
        rows.push(row);
    }
    Ok(rows)
}
