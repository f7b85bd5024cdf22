//! `tlscoh`: temperature sweeps of autonomous local coherence.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure,
//! 3 verification failure.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tls_coherence::analytic::{gamma_opt, high_t_asymptote};
use tls_coherence::coherence::SpectralCoherence;
use tls_coherence::operator::{build_operator, set_site_cap};
use tls_coherence::sweep::{
    default_tail_window, emit_csv, figure_preset, find_optimal_gamma, fit_power_tail, parse_key_values, preset_names,
    run_sweep, verify_suite_with, write_csv, Mutation, SweepConfig,
};
use tls_coherence::thermal::eig_hermitian;
use tls_coherence::{Error, ENGINE_VERSION};

const SITE_CAP_VAR: &str = "TLSCOH_MAX_SITES";

#[derive(Parser)]
#[command(
    name = "tlscoh",
    version,
    about = "Thermal local coherence of coupled two-level systems"
)]
#[command(after_help = "Set TLSCOH_MAX_SITES to change the site cap (default 12).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep temperature and write a CSV of per-site coherences.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-site coherences at one temperature.
    Coherence {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        temp: f64,
        #[arg(long)]
        site: Option<usize>,
    },
    /// Fit C ~ A·T^p to the high-temperature tail of a sweep.
    FitTail {
        #[command(flatten)]
        source: Source,
        /// Column to fit; defaults to the site carrying the model's tail law.
        #[arg(long)]
        site: Option<usize>,
        #[arg(long, requires = "window_hi")]
        window_lo: Option<f64>,
        #[arg(long, requires = "window_lo")]
        window_hi: Option<f64>,
    },
    /// Coupling γ maximising the partner coherence of the indirect model.
    OptGamma {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        omega1: f64,
        #[arg(long)]
        omega2: f64,
        #[arg(long)]
        temp: f64,
    },
    /// Run the built-in verification battery.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MutationArg::None)]
        mutation: MutationArg,
    },
    /// List figure presets, or print one as config-file text.
    Preset { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    None,
    FlipSigmaY,
    ReversedSiteOrder,
}

/// Where sweep parameters come from: preset, then config file, then flags.
#[derive(Args)]
struct Source {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long)]
    omega1: Option<String>,
    #[arg(long)]
    omega2: Option<String>,
    /// Source frequencies of N-source models: one value or a comma list.
    #[arg(long)]
    omega_src: Option<String>,
    #[arg(long)]
    n_sources: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_z: Option<String>,
    #[arg(long)]
    tmin: Option<String>,
    #[arg(long)]
    tmax: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Log-spaced grid (the default).
    #[arg(long, conflicts_with = "linear")]
    log: bool,
    #[arg(long)]
    linear: bool,
    /// Comma list of site indices to report.
    #[arg(long)]
    sites: Option<String>,
}

impl Source {
    fn config(&self) -> Result<SweepConfig, Error> {
        let mut map = BTreeMap::new();
        if let Some(name) = &self.preset {
            map = parse_key_values(&figure_preset(name)?.to_key_values())?;
        }
        if let Some(path) = &self.config {
            map.extend(parse_key_values(&std::fs::read_to_string(path)?)?);
        }
        let flags = [
            ("model", &self.model),
            ("gamma", &self.gamma),
            ("theta", &self.theta),
            ("omega0", &self.omega0),
            ("omega1", &self.omega1),
            ("omega2", &self.omega2),
            ("omega-src", &self.omega_src),
            ("n-sources", &self.n_sources),
            ("gamma-x", &self.gamma_x),
            ("gamma-y", &self.gamma_y),
            ("gamma-z", &self.gamma_z),
            ("tmin", &self.tmin),
            ("tmax", &self.tmax),
            ("points", &self.points),
            ("sites", &self.sites),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        if self.log {
            map.insert("log".into(), "true".into());
        }
        if self.linear {
            map.insert("log".into(), "false".into());
        }
        SweepConfig::from_key_values(&map)
    }
}

enum Failure {
    Engine(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Engine(Error::Io(e))
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Sweep { source, out: path } => {
            let table = run_sweep(&source.config()?)?;
            match path {
                Some(p) => emit_csv(&table, p)?,
                None => write_csv(&table, &mut out)?,
            }
        }
        Command::Coherence { source, temp, site } => {
            let spec = source.config()?.model.spec()?;
            let sites: Vec<usize> = match site {
                Some(s) => vec![s],
                None => (0..spec.n_sites()).collect(),
            };
            let eval = SpectralCoherence::new(eig_hermitian(&build_operator(&spec)?)?, &sites)?;
            for (s, c) in sites.iter().zip(eval.at(temp)?) {
                writeln!(out, "C_site{s} = {c:.12e}")?;
            }
        }
        Command::FitTail {
            source,
            site,
            window_lo,
            window_hi,
        } => {
            let cfg = source.config()?;
            let law = high_t_asymptote(&cfg.model).ok();
            let site = site.or(law.as_ref().map(|l| l.site)).unwrap_or(0);
            let table = run_sweep(&cfg)?;
            let window = match (window_lo, window_hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => default_tail_window(&table, &cfg.model)?,
            };
            let fit = fit_power_tail(&table, site, window)?;
            writeln!(out, "site = {site}")?;
            writeln!(
                out,
                "window = {} .. {} ({} points)",
                fit.window.0, fit.window.1, fit.n_points
            )?;
            writeln!(out, "exponent = {:.6}", fit.exponent)?;
            writeln!(out, "prefactor = {:.6e}", fit.prefactor)?;
            writeln!(out, "rms_residual = {:.3e}", fit.rms_residual)?;
            if let Some(law) = law.filter(|l| l.site == site) {
                let a = law.prefactor.map_or("unspecified".to_string(), |a| format!("{a:.6e}"));
                writeln!(out, "expected = {a} * T^{} ({})", law.exponent, law.validity)?;
            }
        }
        Command::OptGamma {
            theta,
            omega1,
            omega2,
            temp,
        } => {
            let opt = find_optimal_gamma(theta, omega1, omega2, temp)?;
            writeln!(out, "gamma = {:.9}", opt.gamma)?;
            writeln!(out, "C_site1 = {:.12e}", opt.coherence)?;
            writeln!(out, "closed_form_gamma = {:.9}", gamma_opt(theta, omega1, omega2))?;
        }
        Command::Verify { seed, mutation } => {
            let mutation = match mutation {
                MutationArg::None => Mutation::None,
                MutationArg::FlipSigmaY => Mutation::FlipSigmaY,
                MutationArg::ReversedSiteOrder => Mutation::ReversedSiteOrder,
            };
            let report = verify_suite_with(seed, mutation);
            writeln!(out, "{ENGINE_VERSION}\n{report}")?;
            if !report.all_passed() {
                return Err(Failure::Verify);
            }
        }
        Command::Preset { name: None } => {
            for n in preset_names() {
                writeln!(out, "{n}")?;
            }
        }
        Command::Preset { name: Some(name) } => write!(out, "{}", figure_preset(&name)?.to_key_values())?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Ok(raw) = std::env::var(SITE_CAP_VAR) {
        match raw.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => set_site_cap(cap),
            _ => {
                eprintln!("error: {SITE_CAP_VAR} must be a positive integer, got `{raw}`");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(3),
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
