//! Telemetry export.
//!
//! The CSV has a fixed header and column order (see [`CSV_HEADER`]) and
//! writes every float with 17 significant digits, so two runs that agree
//! bitwise produce byte-identical files.

use std::io::{self, Write};

use sha2::{Digest, Sha256};

use crate::sim::{TelemetryRecord, Trajectory};

pub const CSV_HEADER: [&str; 13] =
    ["t", "psi", "psi_d", "r", "delta", "delta_dot", "xi", "eta", "z1", "z2", "z3", "z4", "V"];

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(rec: &TelemetryRecord) -> [f64; 13] {
    let s = rec.state;
    let z = rec.z;
    [rec.t, s.psi, rec.psi_d, s.r, s.delta, rec.delta_dot, s.xi, rec.eta, z.z1, z.z2, z.z3, z.z4, rec.v]
}

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in &traj.records {
        w.write_record(row(rec).map(format_float))?;
    }
    w.flush()
}

pub fn csv_bytes(traj: &Trajectory) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(traj, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

/// Hex SHA-256 of the CSV rendering.
pub fn csv_digest(traj: &Trajectory) -> String {
    hex::encode(Sha256::digest(csv_bytes(traj)))
}

/// Whitespace-separated columns with a `#` header line, in the CSV column
/// order. Column `n` in gnuplot is `CSV_HEADER[n - 1]`.
pub fn write_plot_data<W: Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    writeln!(out, "# {}", CSV_HEADER.join(" "))?;
    for rec in &traj.records {
        let line: Vec<String> = row(rec).iter().map(|v| format_float(*v)).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
