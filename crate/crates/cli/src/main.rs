use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use uncprob_core::{
    build_projectors, check_chain, check_lp_inequality, detection_probability,
    momentum_uncertainty, reconstruct_truncated, reduce, run_protocol_with, sample_packet,
    sine_coefficients, state_bound_check, uncertainty_product, DiffractionSetup, DomainParams,
    ElementaryPacket, QuadratureSpec, Window,
};

/// Environment variable naming the default output directory. Relative --out
/// paths and the figures directory resolve against it when set.
const OUT_DIR_VAR: &str = "UNCPROB_OUT_DIR";

/// Numerical lab for sliced wave packets: four-stage sampling protocol,
/// figure data, grid projector inequalities, and slit-diffraction estimates.
#[derive(Parser)]
#[command(name = "uncprob", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate per-harmonic spreads and uncertainty products
    Kennard {
        /// Largest harmonic index in the table
        #[arg(long, default_value_t = 10)]
        max_k: u32,
        /// Table format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the four-stage sampling protocol; one JSON record per stage
    Protocol {
        /// Bloch index of the prepared packet
        #[arg(long, default_value_t = 10)]
        n: i32,
        /// Number of detector slices tiling the box
        #[arg(long = "N", default_value_t = 200)]
        detectors: u32,
        /// Selected slice, 1-indexed from x = 0
        #[arg(long = "l0", default_value_t = 80)]
        slice: u32,
        /// Series truncation for the full momentum read-out [default: 4N]
        #[arg(long)]
        kmax: Option<usize>,
        /// Quadrature panels for position moments
        #[arg(long, default_value_t = 100_000)]
        panels: usize,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write figure CSVs: packet density, slice density, series weights,
    /// truncated reconstruction
    Figures {
        /// Bloch index of the prepared packet
        #[arg(long, default_value_t = 10)]
        n: i32,
        /// Number of detector slices tiling the box
        #[arg(long = "N", default_value_t = 200)]
        detectors: u32,
        /// Selected slice, 1-indexed from x = 0
        #[arg(long = "l0", default_value_t = 80)]
        slice: u32,
        /// Series truncation for the reconstruction [default: 4N]
        #[arg(long)]
        kmax: Option<usize>,
        /// Sample points across the unit box
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Output directory [default: $UNCPROB_OUT_DIR or .]
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Grid projector report: chain trace, spectral bound, state probabilities
    LandauPollak {
        /// Grid size (points on the periodic unit interval)
        #[arg(long = "M", default_value_t = 64)]
        grid: usize,
        /// Coordinate window width (points)
        #[arg(long, default_value_t = 8)]
        wx: usize,
        /// Frequency window width (bins)
        #[arg(long, default_value_t = 8)]
        wp: usize,
        /// First index of the coordinate window
        #[arg(long, default_value_t = 0)]
        x_start: usize,
        /// First bin of the frequency window
        #[arg(long, default_value_t = 0)]
        p_start: usize,
        /// Bloch index of the packet sampled for the state bound
        #[arg(long, default_value_t = 10)]
        n: i32,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slit-diffraction estimates: spread, product, detection probability
    Diffraction {
        /// Incoming momentum (units of 1/length)
        #[arg(long, default_value_t = 1000.0)]
        p0: f64,
        /// Prepared momentum spread (same units)
        #[arg(long, default_value_t = 1.0)]
        dp0: f64,
        /// Detector radial position over screen distance
        #[arg(long = "q", default_value_t = 0.5)]
        q_over_l: f64,
        /// Detector size over screen distance
        #[arg(long = "dq", default_value_t = 0.01)]
        dq_over_l: f64,
        /// Annulus normalization constant
        #[arg(long, default_value_t = 1.0)]
        annulus_norm: f64,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Kennard { max_k, format, out } => cmd_kennard(max_k, format, out.as_deref()),
        Command::Protocol { n, detectors, slice, kmax, panels, out } => {
            cmd_protocol(n, detectors, slice, kmax, panels, out.as_deref())
        }
        Command::Figures { n, detectors, slice, kmax, samples, out_dir } => {
            cmd_figures(n, detectors, slice, kmax, samples, out_dir)
        }
        Command::LandauPollak { grid, wx, wp, x_start, p_start, n, out } => {
            cmd_landau_pollak(grid, wx, wp, x_start, p_start, n, out.as_deref())
        }
        Command::Diffraction { p0, dp0, q_over_l, dq_over_l, annulus_norm, out } => {
            cmd_diffraction(p0, dp0, q_over_l, dq_over_l, annulus_norm, out.as_deref())
        }
    }
}

fn cmd_kennard(max_k: u32, format: Format, out: Option<&Path>) -> Result<()> {
    if max_k == 0 {
        bail!("the table needs at least one harmonic");
    }
    let dom = DomainParams::default();
    let mut lines = Vec::with_capacity(max_k as usize + 1);
    if matches!(format, Format::Csv) {
        lines.push("k,sd_x,sd_p,product".to_string());
    }
    for k in 1..=max_k {
        let m = ElementaryPacket::new(0, k)?.analytic_moments(&dom);
        let product = m.sd_x * m.sd_p;
        lines.push(match format {
            Format::Csv => format!("{k},{:.6},{:.6},{:.6}", m.sd_x, m.sd_p, product),
            Format::Json => serde_json::to_string(&json!({
                "k": k, "sd_x": m.sd_x, "sd_p": m.sd_p, "product": product,
            }))?,
        });
    }
    emit(&lines, out)
}

fn cmd_protocol(
    n: i32,
    detectors: u32,
    slice: u32,
    kmax: Option<usize>,
    panels: usize,
    out: Option<&Path>,
) -> Result<()> {
    let kmax = kmax.unwrap_or(4 * detectors as usize);
    let spec = QuadratureSpec::new(panels)?;
    let records = run_protocol_with(n, detectors, slice, kmax, &spec)?;
    let lines = records
        .iter()
        .map(serde_json::to_string)
        .collect::<Result<Vec<_>, _>>()?;
    emit(&lines, out)
}

fn cmd_figures(
    n: i32,
    detectors: u32,
    slice: u32,
    kmax: Option<usize>,
    samples: usize,
    out_dir: Option<PathBuf>,
) -> Result<()> {
    if samples < 2 {
        bail!("samples = {samples}: need at least two grid points");
    }
    let kmax = kmax.unwrap_or(4 * detectors as usize);
    let dir = out_dir
        .or_else(|| env::var_os(OUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let dom = DomainParams::default();
    let packet = ElementaryPacket::new(n, 1)?;
    let reduced = reduce(&packet, detectors, slice)?;
    let series = sine_coefficients(&reduced, kmax)?;
    let recon = reconstruct_truncated(&series);
    let grid: Vec<f64> = (0..samples)
        .map(|i| i as f64 / (samples - 1) as f64)
        .collect();

    let sampled = |f: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, f(x))).collect()
    };
    write_figure(&dir, "fig1.csv", "x,packet_density", &sampled(&|x| packet.density(x, &dom)))?;
    write_figure(&dir, "fig2.csv", "x,slice_density", &sampled(&|x| reduced.density(x)))?;
    let mut fig3 = String::from("k,coeff_sq\n");
    for k in 1..=kmax {
        fig3.push_str(&format!("{k},{:.16e}\n", series.coeff(k).norm_sqr()));
    }
    let fig3_path = dir.join("fig3.csv");
    write_atomic(&fig3_path, &fig3)?;
    println!("wrote {}", fig3_path.display());
    write_figure(&dir, "fig4.csv", "x,truncated_density", &sampled(&|x| recon.density(x)))?;
    Ok(())
}

fn cmd_landau_pollak(
    grid: usize,
    wx: usize,
    wp: usize,
    x_start: usize,
    p_start: usize,
    n: i32,
    out: Option<&Path>,
) -> Result<()> {
    let pair = build_projectors(grid, Window::new(x_start, wx), Window::new(p_start, wp))?;
    let chain = check_chain(&pair);
    let spectrum = check_lp_inequality(&pair);
    let residual = pair.projector_residual();
    let state = sample_packet(&ElementaryPacket::new(n, 1)?, grid)?;
    let state_report = state_bound_check(&state, &pair)?;
    let counting = (wx * wp) as f64 / grid as f64;
    let report = json!({
        "m": grid,
        "coord_window": pair.coord_window(),
        "freq_window": pair.freq_window(),
        "projector_residual": residual,
        "chain": chain,
        "sum_spectrum": spectrum,
        "packet_n": n,
        "state": state_report,
        "checks": {
            "projectors_idempotent_hermitian": residual <= 1e-12,
            "trace_matches_counting": (chain.trace_epe - counting).abs() <= 1e-12,
            "traces_agree": (chain.trace_epe - chain.trace_pep).abs() <= 1e-10,
            "norm_sq_within_trace": chain.norm_ep.powi(2) <= chain.trace_epe + 1e-10,
            "sum_spectrum_matches_bound": (spectrum.lambda_max - spectrum.bound).abs() <= 1e-8,
            "state_within_trace_bound": state_report.within_bound,
        },
    });
    emit(&[serde_json::to_string(&report)?], out)
}

fn cmd_diffraction(
    p0: f64,
    dp0: f64,
    q_over_l: f64,
    dq_over_l: f64,
    annulus_norm: f64,
    out: Option<&Path>,
) -> Result<()> {
    let setup =
        DiffractionSetup::new(p0, dp0, q_over_l, dq_over_l)?.with_annulus_norm(annulus_norm)?;
    let spread = momentum_uncertainty(&setup);
    let probability = detection_probability(&setup);
    let (product, product_note) = match uncertainty_product(&setup) {
        Ok(est) => (Some(est), None),
        Err(err) => (None, Some(err.to_string())),
    };
    let ratio = product.as_ref().map(|p| probability.value / p.value);
    let report = json!({
        "setup": setup,
        "crossover": setup.crossover(),
        "momentum_uncertainty": spread,
        "detection_probability": probability,
        "uncertainty_product": product,
        "product_note": product_note,
        "probability_over_product": ratio,
        "checks": {
            "below_crossover": dq_over_l < setup.crossover(),
            "ratio_order_unity": ratio.map(|r| (0.1..=10.0).contains(&r)),
        },
    });
    emit(&[serde_json::to_string(&report)?], out)
}

fn emit(lines: &[String], out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            let stdout = io::stdout();
            let mut handle = stdout.lock();
            for line in lines {
                writeln!(handle, "{line}")?;
            }
            Ok(())
        }
        Some(path) => {
            let path = resolve_out_path(path);
            let mut text = lines.join("\n");
            text.push('\n');
            write_atomic(&path, &text)?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = env::var_os(OUT_DIR_VAR) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

fn write_figure(dir: &Path, name: &str, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    let mut text = String::with_capacity(header.len() + 1 + rows.len() * 48);
    text.push_str(header);
    text.push('\n');
    for (a, b) in rows {
        text.push_str(&format!("{a:.16e},{b:.16e}\n"));
    }
    let path = dir.join(name);
    write_atomic(&path, &text)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Stage into a temp file in the destination directory, then rename: readers
/// never observe a partially written file.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("staging a temp file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}
