//! Command-line front end: single-point rates, scans, Bloch checks, Monte
//! Carlo runs, preset tables and the flux cross-check.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ionload::bloch::{integrate_bloch, p_ion_closed, p_ion_simplified, p_ion_weak, PulseParams};
use ionload::constants::{MEGAHERTZ, NANOSECOND, PICOSECOND};
use ionload::physkit::presets::{write_species_csv, write_traps_csv};
use ionload::physkit::{species_presets, trap_presets, Species};
use ionload::scan::{
    emit_csv, emit_report, evaluate, oracle_triangle, parse_config, parse_point, run_scan, Evaluation, PointConfig,
};
use ionload::vaporflux::{
    angular_constant, flux_analytic, flux_monte_carlo, flux_quadrature, FluxResult, LoadingVolume,
};
use ionload::warning::join_codes;
use ionload::Error;

#[derive(Parser)]
#[command(name = "ionload", version, about = "Photoionization loading rates for rf ion traps")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format (default: text, or csv for `scan`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate flux, loading rate and efficiency at one operating point.
    Rate(PointArgs),
    /// Run the scan described by a configuration file.
    Scan {
        #[arg(long)]
        config: String,
        /// Table destination (default: stdout). The report goes to stdout.
        #[arg(long)]
        out: Option<String>,
        /// Extra `key=value` settings, overriding the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Per-period ionization probability from the closed forms.
    Bloch {
        /// Rabi angle θ (rad).
        #[arg(long)]
        theta: f64,
        /// x = Γτ/2.
        #[arg(long)]
        x: f64,
        /// Γ_cw / γ.
        #[arg(long, default_value_t = 0.0)]
        gamma_cw_ratio: f64,
        /// Also integrate the equations of motion over one period.
        #[arg(long)]
        ode: bool,
        /// Linewidth γ/2π in MHz.
        #[arg(long, default_value_t = 91.0)]
        linewidth_mhz: f64,
        /// Pulse duration in ps.
        #[arg(long, default_value_t = 1.0)]
        tau_ps: f64,
        /// Pulse period in ns.
        #[arg(long, default_value_t = 12.5)]
        period_ns: f64,
    },
    /// Monte Carlo flux at one operating point, next to the analytic and
    /// quadrature values.
    Mc {
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Print the species or trap tables.
    Presets {
        #[arg(value_enum, default_value_t = Table::Species)]
        table: Table,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check analytic, quadrature and Monte Carlo fluxes on random
    /// weak-regime inputs.
    Check {
        #[arg(long, default_value_t = 20)]
        sets: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Species,
    Traps,
}

/// Flags mirroring the configuration keys. Values take the same
/// `number unit` form as the file, e.g. `--energy "60 pJ"`.
#[derive(Args, Default)]
struct PointArgs {
    #[arg(long)]
    config: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    species: Option<String>,
    #[arg(long)]
    linewidth: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    energy: Option<String>,
    #[arg(long)]
    duration: Option<String>,
    #[arg(long)]
    period: Option<String>,
    #[arg(long)]
    rep_rate: Option<String>,
    #[arg(long)]
    wavelength: Option<String>,
    #[arg(long)]
    cw_intensity: Option<String>,
    #[arg(long)]
    cw_wavelength: Option<String>,
    #[arg(long)]
    waist: Option<String>,
    #[arg(long)]
    length: Option<String>,
    #[arg(long)]
    trap: Option<String>,
    #[arg(long)]
    density: Option<String>,
    #[arg(long)]
    pressure: Option<String>,
    #[arg(long)]
    temperature: Option<String>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long = "mc-samples")]
    mc_samples: Option<String>,
    #[arg(long = "mc-seed")]
    mc_seed: Option<String>,
}

impl PointArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let flags = [
            ("species.preset", &self.species),
            ("species.linewidth", &self.linewidth),
            ("species.sigma", &self.sigma),
            ("laser.energy", &self.energy),
            ("laser.duration", &self.duration),
            ("laser.period", &self.period),
            ("laser.rep_rate", &self.rep_rate),
            ("laser.wavelength", &self.wavelength),
            ("cw.intensity", &self.cw_intensity),
            ("cw.wavelength", &self.cw_wavelength),
            ("beam.waist", &self.waist),
            ("beam.length", &self.length),
            ("trap.preset", &self.trap),
            ("vapor.density", &self.density),
            ("vapor.pressure", &self.pressure),
            ("vapor.temperature", &self.temperature),
            ("run.method", &self.method),
            ("mc.samples", &self.mc_samples),
            ("mc.seed", &self.mc_seed),
        ];
        let mut out: Vec<(String, String)> = flags
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        out.extend(split_sets(&self.set)?);
        Ok(out)
    }

    fn text(&self) -> Result<String, Error> {
        compose(self.config.as_deref(), &self.overrides()?)
    }
}

fn split_sets(sets: &[String]) -> Result<Vec<(String, String)>, Error> {
    sets.iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| {
                    Error::Config(ionload::scan::ConfigError::Syntax {
                        line: 0,
                        message: format!("--set expects KEY=VALUE, got `{s}`"),
                    })
                })
        })
        .collect()
}

/// Configuration text from an optional file with command-line settings
/// replacing any file line that sets the same key. Line numbers of the file
/// are preserved.
fn compose(path: Option<&str>, overrides: &[(String, String)]) -> Result<String, Error> {
    let file = match path {
        Some(p) => fs::read_to_string(p)?,
        None => String::new(),
    };
    let mut text = String::new();
    for line in file.lines() {
        let key = line
            .split('#')
            .next()
            .unwrap_or("")
            .split('=')
            .next()
            .unwrap_or("")
            .trim();
        if overrides.iter().any(|(k, _)| k == key) {
            text.push('\n');
        } else {
            text.push_str(line);
            text.push('\n');
        }
    }
    for (k, v) in overrides {
        text.push_str(&format!("{k} = {v}\n"));
    }
    Ok(text)
}

#[derive(Serialize)]
struct PointReport<'a> {
    config: &'a PointConfig,
    p0: f64,
    result: &'a FluxResult,
}

fn result_csv(rows: &[(&str, f64, &FluxResult)]) -> String {
    let mut s = String::from("label,p0,flux_per_m2_s,rate_per_s,efficiency,stderr,warnings\n");
    for (label, p0, r) in rows {
        s.push_str(&format!(
            "{label},{p0:.9e},{:.9e},{:.9e},{:.9e},{},{}\n",
            r.flux,
            r.rate,
            r.efficiency,
            r.stderr.map(|e| format!("{e:.9e}")).unwrap_or_default(),
            join_codes(&r.warnings)
        ));
    }
    s
}

fn result_text(p0: f64, r: &FluxResult) -> String {
    let mut s = format!("method:     {}\n", r.method.as_str());
    s.push_str(&format!("p0:         {p0:.6e}\n"));
    match r.stderr {
        Some(e) => s.push_str(&format!("flux:       {:.6e} ± {e:.2e} m^-2 s^-1\n", r.flux)),
        None => s.push_str(&format!("flux:       {:.6e} m^-2 s^-1\n", r.flux)),
    }
    s.push_str(&format!("rate:       {:.6e} s^-1\n", r.rate));
    s.push_str(&format!("efficiency: {:.6e}\n", r.efficiency));
    let w = join_codes(&r.warnings);
    s.push_str(&format!("warnings:   {}\n", if w.is_empty() { "none" } else { &w }));
    s
}

fn json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(io::Error::other(e)))
}

fn cmd_rate(args: &PointArgs, format: Option<Format>) -> Result<String, Error> {
    let point = parse_point(&args.text()?)?;
    let Evaluation { p0, result } = evaluate(&point)?;
    Ok(match format {
        Some(Format::Json) => json(&PointReport {
            config: &point,
            p0,
            result: &result,
        })?,
        Some(Format::Csv) => result_csv(&[(result.method.as_str(), p0, &result)]),
        None => result_text(p0, &result),
    })
}

fn cmd_scan(config: &str, out: Option<&str>, set: &[String], format: Option<Format>) -> Result<String, Error> {
    let text = compose(Some(config), &split_sets(set)?)?;
    let cfg = parse_config(&text)?;
    let rows = run_scan(&cfg)?;
    let table = match format {
        Some(Format::Json) => json(&rows)?.into_bytes(),
        _ => {
            let mut buf = Vec::new();
            emit_csv(cfg.axis.kind, &rows, &mut buf)?;
            buf
        }
    };
    match out {
        Some(path) => {
            fs::write(path, table)?;
            Ok(emit_report(&cfg, &rows))
        }
        None => Ok(String::from_utf8(table).expect("csv output is UTF-8")),
    }
}

#[derive(Serialize)]
struct BlochReport {
    closed: f64,
    simplified: f64,
    weak_exact: f64,
    weak_quadratic: f64,
    ode: Option<f64>,
    warnings: String,
}

#[allow(clippy::too_many_arguments)]
fn cmd_bloch(
    theta: f64,
    x: f64,
    ratio: f64,
    ode: bool,
    linewidth_mhz: f64,
    tau_ps: f64,
    period_ns: f64,
    format: Option<Format>,
) -> Result<String, Error> {
    let gamma = 2.0 * std::f64::consts::PI * linewidth_mhz * MEGAHERTZ;
    let params = PulseParams::new(theta, x, ratio, gamma, tau_ps * PICOSECOND, period_ns * NANOSECOND)?;
    let weak = p_ion_weak(theta, x);
    let report = BlochReport {
        closed: p_ion_closed(&params),
        simplified: p_ion_simplified(&params),
        weak_exact: weak.exact,
        weak_quadratic: weak.quadratic,
        ode: if ode {
            Some(integrate_bloch(&params, 1, 1e-10)?.first_period_ionization())
        } else {
            None
        },
        warnings: join_codes(&params.warnings()),
    };
    Ok(match format {
        Some(Format::Json) => json(&report)?,
        Some(Format::Csv) => format!(
            "closed,simplified,weak_exact,weak_quadratic,ode,warnings\n{:.9e},{:.9e},{:.9e},{:.9e},{},{}\n",
            report.closed,
            report.simplified,
            report.weak_exact,
            report.weak_quadratic,
            report.ode.map(|v| format!("{v:.9e}")).unwrap_or_default(),
            report.warnings
        ),
        None => {
            let mut s = format!("closed:          {:.9e}\n", report.closed);
            s.push_str(&format!("simplified:      {:.9e}\n", report.simplified));
            s.push_str(&format!("weak (bracket):  {:.9e}\n", report.weak_exact));
            s.push_str(&format!("weak (theta^2):  {:.9e}\n", report.weak_quadratic));
            if let Some(v) = report.ode {
                s.push_str(&format!("ode:             {v:.9e}\n"));
            }
            let w = if report.warnings.is_empty() {
                "none"
            } else {
                &report.warnings
            };
            s.push_str(&format!("warnings:        {w}\n"));
            s
        }
    })
}

#[derive(Serialize)]
struct McReport<'a> {
    p0: f64,
    monte_carlo: &'a FluxResult,
    analytic: &'a FluxResult,
    quadrature: &'a FluxResult,
}

fn cmd_mc(samples: usize, seed: u64, args: &PointArgs, format: Option<Format>) -> Result<String, Error> {
    let point = parse_point(&args.text()?)?;
    let s = &point.setup;
    let p0 = ionload::bloch::p_ion_focus(&s.pulse, &s.beam, &s.species).p0.min(1.0);
    let volume = LoadingVolume::from(s.beam);
    let period = s.pulse.period;
    let mc = flux_monte_carlo(&s.vapor, &volume, p0, period, samples, seed)?;
    let an = flux_analytic(&s.vapor, &volume, p0, period)?;
    let quad = flux_quadrature(&s.vapor, &volume, p0, period)?;
    Ok(match format {
        Some(Format::Json) => json(&McReport {
            p0,
            monte_carlo: &mc,
            analytic: &an,
            quadrature: &quad,
        })?,
        Some(Format::Csv) => result_csv(&[
            ("monte_carlo", p0, &mc),
            ("analytic", p0, &an),
            ("quadrature", p0, &quad),
        ]),
        None => {
            let se = mc.stderr.unwrap_or(0.0);
            let mut t = result_text(p0, &mc);
            t.push_str(&format!(
                "analytic:   {:.6e} m^-2 s^-1 ({:+.2} stderr)\n",
                an.flux,
                (mc.flux - an.flux) / se
            ));
            t.push_str(&format!(
                "quadrature: {:.6e} m^-2 s^-1 ({:+.2} stderr)\n",
                quad.flux,
                (mc.flux - quad.flux) / se
            ));
            t
        }
    })
}

fn cmd_presets(table: Table, csv: bool, format: Option<Format>) -> Result<String, Error> {
    let mut buf = Vec::new();
    match (table, csv || format == Some(Format::Csv), format == Some(Format::Json)) {
        (Table::Species, _, true) => return json(&species_presets()),
        (Table::Traps, _, true) => return json(&trap_presets()),
        (Table::Species, true, _) => write_species_csv(&mut buf)?,
        (Table::Traps, true, _) => write_traps_csv(&mut buf)?,
        (Table::Species, false, false) => {
            writeln!(
                buf,
                "{:<4} {:>10} {:>11} {:>10} {:>12}  two-photon",
                "", "S-P (nm)", "S-ion (nm)", "mass (u)", "γ/2π (MHz)"
            )?;
            for p in species_presets() {
                let lw = p
                    .gamma
                    .map(|g| format!("{:.0}", g / (2.0 * std::f64::consts::PI * MEGAHERTZ)))
                    .unwrap_or_else(|| "-".into());
                writeln!(
                    buf,
                    "{:<4} {:>10.1} {:>11.1} {:>10.3} {:>12}  {}",
                    p.name,
                    p.lambda_sp * 1e9,
                    p.lambda_ion * 1e9,
                    p.mass / ionload::constants::ATOMIC_MASS_UNIT,
                    lw,
                    if p.two_photon_feasible() { "yes" } else { "no" }
                )?;
            }
        }
        (Table::Traps, false, false) => {
            writeln!(
                buf,
                "{:<14} {:<10} {:>12} {:>10}  name",
                "key", "kind", "depth (eV)", "L (um)"
            )?;
            for t in trap_presets() {
                let span = |lo: f64, hi: f64, unit: f64| {
                    let (lo, hi) = ((lo / unit * 1e6).round() / 1e6, (hi / unit * 1e6).round() / 1e6);
                    if lo == hi {
                        format!("{lo}")
                    } else {
                        format!("{lo}-{hi}")
                    }
                };
                writeln!(
                    buf,
                    "{:<14} {:<10} {:>12} {:>10}  {}",
                    t.key,
                    format!("{:?}", t.kind).to_lowercase(),
                    span(t.depth.min, t.depth.max, ionload::constants::ELECTRONVOLT),
                    span(t.size_l.min, t.size_l.max, ionload::constants::MICROMETER),
                    t.name
                )?;
            }
        }
    }
    Ok(String::from_utf8(buf).expect("tables are UTF-8"))
}

fn cmd_check(sets: usize, samples: usize, seed: u64, format: Option<Format>) -> Result<(String, bool), Error> {
    let cases = oracle_triangle(sets, samples, seed)?;
    let mut ok = cases.iter().all(|c| c.passed());

    // Determinism: the first case again on a single thread.
    let deterministic = match cases.first() {
        Some(c) => {
            let cd = Species::cadmium();
            let vapor = ionload::physkit::Vapor::new(c.density, c.temperature, cd.mass)?;
            let volume = LoadingVolume::new(c.waist, c.length)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .map_err(|e| Error::Io(io::Error::other(e)))?;
            let single = pool.install(|| flux_monte_carlo(&vapor, &volume, c.p0, c.period, samples, seed))?;
            single.flux.to_bits() == c.monte_carlo.to_bits()
        }
        None => true,
    };
    ok &= deterministic;

    if format == Some(Format::Json) {
        #[derive(Serialize)]
        struct CheckReport<'a> {
            passed: bool,
            deterministic: bool,
            cases: &'a [ionload::scan::TriangleCase],
        }
        return Ok((
            json(&CheckReport {
                passed: ok,
                deterministic,
                cases: &cases,
            })?,
            ok,
        ));
    }
    let mut s = String::new();
    for (i, c) in cases.iter().enumerate() {
        let rel = (c.analytic - c.quadrature) / c.quadrature;
        let z = (c.monte_carlo - c.quadrature_exact) / c.stderr.max(f64::MIN_POSITIVE);
        s.push_str(&format!(
            "{} set {:>2}: analytic/quadrature {:+.3}%  monte carlo {:+.2} stderr\n",
            if c.passed() { "PASS" } else { "FAIL" },
            i + 1,
            100.0 * rel,
            z
        ));
    }
    s.push_str(&format!(
        "{} monte carlo bit-identical on one thread\n",
        if deterministic { "PASS" } else { "FAIL" }
    ));
    let a = angular_constant(1e-9)?;
    s.push_str(&format!(
        "info angular constant {a:.10} (sqrt(pi) = {:.10}, ratio {:.6})\n",
        std::f64::consts::PI.sqrt(),
        a / std::f64::consts::PI.sqrt()
    ));
    s.push_str(if ok {
        "all checks passed\n"
    } else {
        "some checks failed\n"
    });
    Ok((s, ok))
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Io(io::Error::other(e)))?;
    }
    let f = cli.format;
    let out = match &cli.command {
        Command::Rate(args) => cmd_rate(args, f)?,
        Command::Scan { config, out, set } => cmd_scan(config, out.as_deref(), set, f)?,
        Command::Bloch {
            theta,
            x,
            gamma_cw_ratio,
            ode,
            linewidth_mhz,
            tau_ps,
            period_ns,
        } => cmd_bloch(
            *theta,
            *x,
            *gamma_cw_ratio,
            *ode,
            *linewidth_mhz,
            *tau_ps,
            *period_ns,
            f,
        )?,
        Command::Mc { samples, seed, point } => cmd_mc(*samples, *seed, point, f)?,
        Command::Presets { table, csv } => cmd_presets(*table, *csv, f)?,
        Command::Check { sets, samples, seed } => return cmd_check(*sets, *samples, *seed, f),
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
