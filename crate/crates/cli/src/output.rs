//! Writing grids, plot scripts and the metadata document.
//!
//! Nothing written here depends on the clock or the thread count, so a rerun
//! with the same config reproduces every file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qraman::signal::SignalGrid;

use crate::config::{to_raw, OutputFormat, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "qraman";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const METADATA_FILE: &str = "metadata.json";

#[derive(Debug, Clone, Serialize)]
pub struct GridStats {
    pub min: f64,
    pub max: f64,
    pub argmax_shift_ev: f64,
    pub argmax_delay_fs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRecord {
    pub probe: String,
    pub data_file: String,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<String>,
    pub rows: usize,
    pub columns: usize,
    pub probe_frequency: f64,
    pub omega_i: f64,
    pub normalization: f64,
    pub prefactor: f64,
    pub scale: f64,
    pub normalized: bool,
    pub stats: GridStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub grids: Vec<GridRecord>,
}

/// Gnuplot "nonuniform matrix" text: first row is `N shift_1 … shift_N`, each
/// following row is `delay value_1 … value_N`.
pub fn render_text(grid: &SignalGrid) -> String {
    let meta = &grid.meta;
    let mut s = String::new();
    let probe = serde_json::to_string(&meta.probe).expect("probe serializes");
    let _ = writeln!(s, "# {TOOL} {VERSION}");
    let _ = writeln!(s, "# kind: {}", meta.kind.as_str());
    let _ = writeln!(s, "# probe: {probe}");
    let _ = writeln!(s, "# probe_frequency_ev: {:.16e}", meta.probe_frequency);
    let _ = writeln!(s, "# omega_i_ev: {:.16e}", meta.omega_i);
    let _ = writeln!(s, "# normalization: {:.16e}", meta.normalization);
    let _ = writeln!(s, "# prefactor: {:.16e}", meta.prefactor);
    let _ = writeln!(s, "# scale: {:.16e}", meta.scale);
    let _ = writeln!(s, "# normalized: {}", meta.normalized);
    let _ = writeln!(
        s,
        "# layout: first row = column count then Raman shifts (eV); other rows = delay (fs) then values"
    );
    let _ = write!(s, "{}", grid.shift_axis.len());
    for x in &grid.shift_axis {
        let _ = write!(s, " {x:.16e}");
    }
    s.push('\n');
    for (i, t) in grid.delay_axis.iter().enumerate() {
        let _ = write!(s, "{t:.16e}");
        for v in grid.row(i) {
            let _ = write!(s, " {v:.16e}");
        }
        s.push('\n');
    }
    s
}

/// Values only, row-major by delay, little-endian f64.
pub fn render_binary(grid: &SignalGrid) -> Vec<u8> {
    grid.values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Parses [`render_text`] output back into `(shifts, delays, values)`.
pub fn read_text(text: &str) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let head: Vec<f64> = lines.next()?.split_whitespace().map(|w| w.parse().ok()).collect::<Option<_>>()?;
    let (n, shifts) = head.split_first()?;
    if *n as usize != shifts.len() {
        return None;
    }
    let (mut delays, mut values) = (Vec::new(), Vec::new());
    for line in lines {
        let row: Vec<f64> = line.split_whitespace().map(|w| w.parse().ok()).collect::<Option<_>>()?;
        let (t, vals) = row.split_first()?;
        if vals.len() != shifts.len() {
            return None;
        }
        delays.push(*t);
        values.extend_from_slice(vals);
    }
    Some((shifts.to_vec(), delays, values))
}

pub fn read_binary(bytes: &[u8]) -> Option<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return None;
    }
    Some(
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    )
}

fn plot_script(grid: &SignalGrid, data_file: &str, format: OutputFormat) -> String {
    let title = format!("{} ({})", grid.meta.kind.as_str(), grid.meta.probe.label());
    let png = Path::new(data_file).with_extension("png");
    let png = png.to_string_lossy();
    let mut s = String::new();
    let _ = writeln!(s, "set terminal pngcairo size 900,700");
    let _ = writeln!(s, "set output '{png}'");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel 'Raman shift (eV)'");
    let _ = writeln!(s, "set ylabel 'delay T (fs)'");
    let _ = writeln!(s, "set view map");
    let _ = writeln!(s, "unset key");
    if !grid.meta.kind.is_intensity() {
        let _ = writeln!(s, "set palette defined (-1 'blue', 0 'white', 1 'red')");
        let m = grid.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if m > 0.0 {
            let _ = writeln!(s, "set cbrange [{:e}:{:e}]", -m, m);
        }
    }
    match format {
        OutputFormat::Text => {
            let _ = writeln!(s, "plot '{data_file}' nonuniform matrix with image");
        }
        OutputFormat::Binary => {
            let (n, m) = (grid.shift_axis.len(), grid.delay_axis.len());
            let dx = step(&grid.shift_axis);
            let dy = step(&grid.delay_axis);
            let _ = writeln!(
                s,
                "plot '{data_file}' binary array=({n},{m}) format='%float64' endian=little \
                 origin=({:e},{:e}) dx={dx:e} dy={dy:e} with image",
                grid.shift_axis[0], grid.delay_axis[0]
            );
        }
    }
    s
}

fn step(axis: &[f64]) -> f64 {
    if axis.len() > 1 {
        axis[1] - axis[0]
    } else {
        1.0
    }
}

/// Grids paired with the file stem each should be written under.
pub struct NamedGrid {
    pub stem: String,
    pub grid: SignalGrid,
}

/// Writes every grid plus `metadata.json` into the configured directory.
/// Files already written are removed again if a later write fails.
pub fn write_run(cfg: &RunConfig, subcommand: &str, grids: &[NamedGrid]) -> Result<PathBuf, CliError> {
    let dir = &cfg.output.directory;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written: Vec<PathBuf> = Vec::new();
    let result = write_all(cfg, subcommand, grids, &mut written);
    if result.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
    }
    result.map(|_| dir.join(METADATA_FILE))
}

fn write_all(cfg: &RunConfig, subcommand: &str, grids: &[NamedGrid], written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let dir = &cfg.output.directory;
    let format = cfg.output.format;
    let mut records = Vec::with_capacity(grids.len());
    let put = |name: &str, bytes: &[u8], written: &mut Vec<PathBuf>| -> Result<(), CliError> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    for NamedGrid { stem, grid } in grids {
        let data_file = match format {
            OutputFormat::Text => format!("{stem}.dat"),
            OutputFormat::Binary => format!("{stem}.bin"),
        };
        match format {
            OutputFormat::Text => put(&data_file, render_text(grid).as_bytes(), written)?,
            OutputFormat::Binary => put(&data_file, &render_binary(grid), written)?,
        }
        let script = if cfg.output.plot_script {
            let name = format!("{stem}.gp");
            put(&name, plot_script(grid, &data_file, format).as_bytes(), written)?;
            Some(name)
        } else {
            None
        };
        let (argmax_shift_ev, argmax_delay_fs) = grid.argmax();
        let meta = &grid.meta;
        records.push(GridRecord {
            probe: meta.probe.label().to_string(),
            data_file,
            format,
            plot_script: script,
            rows: grid.delay_axis.len(),
            columns: grid.shift_axis.len(),
            probe_frequency: meta.probe_frequency,
            omega_i: meta.omega_i,
            normalization: meta.normalization,
            prefactor: meta.prefactor,
            scale: meta.scale,
            normalized: meta.normalized,
            stats: GridStats {
                min: grid.min(),
                max: grid.max(),
                argmax_shift_ev,
                argmax_delay_fs,
            },
        });
    }
    let doc = metadata(cfg, subcommand, records);
    let mut text = serde_json::to_string_pretty(&doc).expect("metadata serializes");
    text.push('\n');
    put(METADATA_FILE, text.as_bytes(), written)
}

/// The resolved config with every default filled in, plus a `run` report.
/// Feeding this document back as a config reproduces the run.
pub fn metadata(cfg: &RunConfig, subcommand: &str, grids: Vec<GridRecord>) -> serde_json::Value {
    let mut doc = serde_json::to_value(to_raw(cfg)).expect("config serializes");
    let run = RunRecord {
        tool: TOOL,
        version: VERSION,
        subcommand: subcommand.to_string(),
        grids,
    };
    doc.as_object_mut()
        .expect("config is an object")
        .insert("run".into(), serde_json::to_value(run).expect("run serializes"));
    doc
}
