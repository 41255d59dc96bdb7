//! CSV traces, SVG regret plot and the run manifest.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the
//! aggregate file can be recomputed exactly from the trace file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::config::{ensure_writable, ExperimentConfig};
use super::run::{AggregateResult, RunTrace, SweepRow};

pub const TRACE_HEADER: &str = "step,instant_regret,cum_regret,policy,seed";
pub const AGGREGATE_HEADER: &str = "step,mean,stderr,policy";
pub const SWEEP_HEADER: &str = "gamma,policy,mean_final,stderr_final";

pub const TRACES_FILE: &str = "traces.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const PLOT_FILE: &str = "regret.svg";
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const SWEEP_FILE: &str = "sweep.csv";

pub fn traces_csv(runs: &[RunTrace]) -> String {
    let mut out = String::with_capacity(64 * runs.iter().map(|r| r.trace.len()).sum::<usize>() + 64);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for run in runs {
        for (t, (inst, cum)) in run.trace.instantaneous.iter().zip(&run.trace.cumulative).enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", t + 1, inst, cum, run.policy, run.seed);
        }
    }
    out
}

pub fn aggregate_csv(aggregates: &[AggregateResult]) -> String {
    let mut out = String::new();
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for agg in aggregates {
        for (t, (m, se)) in agg.mean_cumulative.iter().zip(&agg.stderr_cumulative).enumerate() {
            let _ = writeln!(out, "{},{},{},{}", t + 1, m, se, agg.policy);
        }
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.gamma, r.policy, r.mean_final, r.stderr_final);
    }
    out
}

/// The config as TOML, prefixed with comments on how streams are derived.
pub fn manifest(config: &ExperimentConfig) -> Result<String> {
    let mut out = String::new();
    out.push_str("# Run manifest. Rerun with `linbandit run <this file>`.\n");
    let _ = writeln!(
        out,
        "# Seeds: {}..{} (base_seed + run index).",
        config.base_seed,
        config.base_seed + config.n_runs as u64
    );
    out.push_str("# Streams are paired: every policy in a run sees the same arm sets and the\n");
    out.push_str("# same per-step noise draws, and starts from the same policy stream state.\n");
    out.push_str(&config.to_toml_string()?);
    Ok(out)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Mean cumulative regret per policy with ±1 standard-error bands.
pub fn regret_svg(aggregates: &[AggregateResult], title: &str) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 180.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;

    let t_max = aggregates.iter().map(|a| a.horizon()).max().unwrap_or(0).max(1) as f64;
    let y_max = aggregates
        .iter()
        .flat_map(|a| a.mean_cumulative.iter().zip(&a.stderr_cumulative).map(|(m, s)| m + s))
        .filter(|v| v.is_finite())
        .fold(0.0_f64, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let sx = |t: f64| LEFT + pw * t / t_max;
    let sy = |v: f64| TOP + ph * (1.0 - v.clamp(0.0, y_max) / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        xml_escape(title)
    );
    // Axes and ticks.
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT},{TOP} V{} H{}" fill="none" stroke="black"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (x, y) = (sx(f * t_max), sy(f * y_max));
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(f * t_max)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            tick_label(f * y_max)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="#e0e0e0"/>"##,
            LEFT + pw
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">step</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">cumulative regret</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (k, agg) in aggregates.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let n = agg.horizon();
        if n > 0 {
            // Thin the polyline to at most ~1000 vertices.
            let stride = n.div_ceil(1000).max(1);
            let idx: Vec<usize> = (0..n).step_by(stride).chain(std::iter::once(n - 1)).collect();
            let mut band = String::new();
            for &i in &idx {
                let _ = write!(
                    band,
                    "{:.2},{:.2} ",
                    sx((i + 1) as f64),
                    sy(agg.mean_cumulative[i] + agg.stderr_cumulative[i])
                );
            }
            for &i in idx.iter().rev() {
                let _ = write!(
                    band,
                    "{:.2},{:.2} ",
                    sx((i + 1) as f64),
                    sy(agg.mean_cumulative[i] - agg.stderr_cumulative[i])
                );
            }
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                band.trim_end()
            );
            let line: Vec<String> = idx
                .iter()
                .map(|&i| format!("{:.2},{:.2}", sx((i + 1) as f64), sy(agg.mean_cumulative[i])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
                line.join(" ")
            );
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            xml_escape(&agg.policy)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Paths written by [`emit_outputs`].
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub traces: PathBuf,
    pub aggregate: PathBuf,
    pub plot: PathBuf,
    pub manifest: PathBuf,
}

pub fn emit_outputs(
    config: &ExperimentConfig,
    runs: &[RunTrace],
    aggregates: &[AggregateResult],
    output_dir: &Path,
) -> Result<OutputFiles> {
    ensure_writable(output_dir)?;
    let files = OutputFiles {
        traces: output_dir.join(TRACES_FILE),
        aggregate: output_dir.join(AGGREGATE_FILE),
        plot: output_dir.join(PLOT_FILE),
        manifest: output_dir.join(MANIFEST_FILE),
    };
    write_file(&files.traces, &traces_csv(runs))?;
    write_file(&files.aggregate, &aggregate_csv(aggregates))?;
    let title = format!(
        "{} d={} K={} T={} ({} runs)",
        config.family.label(),
        config.dim,
        config.n_arms,
        config.horizon,
        config.n_runs
    );
    write_file(&files.plot, &regret_svg(aggregates, &title))?;
    write_file(&files.manifest, &manifest(config)?)?;
    Ok(files)
}

pub fn emit_sweep(rows: &[SweepRow], output_dir: &Path) -> Result<PathBuf> {
    ensure_writable(output_dir)?;
    let path = output_dir.join(SWEEP_FILE);
    write_file(&path, &sweep_csv(rows))?;
    Ok(path)
}
