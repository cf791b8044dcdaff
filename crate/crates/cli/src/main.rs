//! Command-line front end: parameter sweeps, ratio calibration,
//! waiting-time tables, and Monte-Carlo validation, emitted as CSV or JSON.
//!
//! Exit codes: 0 success (and every validation gate passed), 1 validation
//! gate failed, 2 usage error, 3 calibration target not bracketed,
//! 4 internal consistency failure.

mod output;

use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use photon_mux::{
    apply_loss, calibrate_nbar, choose_cutoff, herald_ensemble, multiplexed_metrics,
    network_efficiency, simulate_system, snr_of, success_outcome, thermal_distribution,
    waiting_time, DetectorModel, Error as CoreError, MultiplexConfig,
};
use serde::Deserialize;

use output::{write_csv, write_json, Record, Value};

/// Directory for relative `--out` paths when set in the environment.
const OUT_DIR_VAR: &str = "PHOTON_MUX_OUT_DIR";

const DEFAULT_ETA_D: f64 = 0.7;
const DEFAULT_ETA_S: f64 = 0.8;
const DEFAULT_ETA_TAU: f64 = 0.99;
const DEFAULT_REP_RATE: f64 = 1e6;

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_BRACKETED: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "photon-mux",
    version,
    about = "Multiplexed heralded single-photon sources: sweeps, calibration, waiting times, validation"
)]
struct Cli {
    /// TOML file supplying defaults for efficiencies, detector, format, and
    /// output directory; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; a relative path lands in the output directory, stdout
    /// when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep system parameters and tabulate the analytic figures of merit.
    Scan(ScanArgs),
    /// Find the pump strength that hits a target single- to multi-photon
    /// ratio.
    Calibrate(CalibrateArgs),
    /// Waiting times for simultaneous multi-photon delivery from the preset
    /// systems, each calibrated to a common ratio first.
    Wait(WaitArgs),
    /// Cross-check the analytic figures against the seeded photon-by-photon
    /// simulation.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Pump grid: `min:max:step` or a comma-separated list.
    #[arg(long)]
    nbar: String,
    /// Comma-separated array sizes.
    #[arg(long, value_name = "LIST")]
    n_sources: Option<String>,
    /// Comma-separated detectors: binary | pnr | pseudo:M.
    #[arg(long, value_name = "LIST")]
    detector: Option<String>,
    /// Comma-separated heralding-arm efficiencies.
    #[arg(long, value_name = "LIST")]
    eta_d: Option<String>,
    /// Comma-separated per-stage switch efficiencies.
    #[arg(long, value_name = "LIST")]
    eta_s: Option<String>,
    /// Comma-separated delay-line efficiencies.
    #[arg(long, value_name = "LIST")]
    eta_tau: Option<String>,
}

#[derive(Args)]
struct SystemArgs {
    /// Heralding detector: binary | pnr | pseudo:M.
    #[arg(long)]
    detector: Option<String>,
    /// Number of multiplexed sources.
    #[arg(long)]
    n_sources: Option<usize>,
    /// Heralding-arm efficiency.
    #[arg(long)]
    eta_d: Option<f64>,
    /// Per-stage switch efficiency.
    #[arg(long)]
    eta_s: Option<f64>,
    /// Delay-line efficiency.
    #[arg(long)]
    eta_tau: Option<f64>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Target single- to multi-photon ratio.
    #[arg(long)]
    snr: f64,
    #[command(flatten)]
    system: SystemArgs,
}

#[derive(Args)]
struct WaitArgs {
    /// Common calibration target for every preset system.
    #[arg(long, default_value_t = 100.0)]
    snr: f64,
    /// Largest simultaneous photon count tabulated.
    #[arg(long, default_value_t = 8)]
    max_photons: u32,
    /// Comma-separated subset of the preset systems (default: all).
    #[arg(long, value_name = "LIST")]
    systems: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Mean photon pairs per pulse.
    #[arg(long)]
    nbar: f64,
    /// Simulated pulses (at least 1000).
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Root seed for the per-trial RNG streams.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    system: SystemArgs,
}

/// Optional TOML defaults, overridden by flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    eta_d: Option<f64>,
    eta_s: Option<f64>,
    eta_tau: Option<f64>,
    detector: Option<String>,
    n_sources: Option<usize>,
    format: Option<String>,
    out_dir: Option<PathBuf>,
}

/// A failed run: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file_config = load_config(cli.config.as_deref())?;
    let format = resolve_format(cli.format, &file_config)?;
    let sink = resolve_sink(cli.out.as_deref(), &file_config);
    let (records, code) = match cli.command {
        Command::Scan(args) => cmd_scan(args, &file_config)?,
        Command::Calibrate(args) => cmd_calibrate(args, &file_config)?,
        Command::Wait(args) => cmd_wait(args)?,
        Command::Validate(args) => cmd_validate(args, &file_config)?,
    };
    emit(&records, format, &sink)?;
    Ok(code)
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))
}

fn resolve_format(flag: Option<Format>, file: &ConfigFile) -> Result<Format, Failure> {
    if let Some(format) = flag {
        return Ok(format);
    }
    match file.format.as_deref() {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(Failure::usage(format!(
            "unknown format `{other}` in config (expected csv or json)"
        ))),
    }
}

enum Sink {
    Stdout,
    File(PathBuf),
}

fn resolve_sink(out: Option<&Path>, file: &ConfigFile) -> Sink {
    match out {
        None => Sink::Stdout,
        Some(path) if path.is_absolute() => Sink::File(path.to_path_buf()),
        Some(path) => {
            let dir = env::var_os(OUT_DIR_VAR)
                .map(PathBuf::from)
                .or_else(|| file.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            Sink::File(dir.join(path))
        }
    }
}

fn emit(records: &[Record], format: Format, sink: &Sink) -> Result<(), Failure> {
    let mut buffer = Vec::new();
    match format {
        Format::Csv => write_csv(records, &mut buffer),
        Format::Json => write_json(records, &mut buffer),
    }
    .map_err(|e| Failure::internal(format!("cannot render output: {e}")))?;
    match sink {
        Sink::Stdout => io::stdout()
            .write_all(&buffer)
            .map_err(|e| Failure::internal(format!("cannot write stdout: {e}"))),
        Sink::File(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| {
                    Failure::usage(format!("cannot create {}: {e}", parent.display()))
                })?;
            }
            fs::write(path, &buffer)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn parse_detector(token: &str, eta_d: f64) -> Result<DetectorModel, Failure> {
    match token {
        "binary" => Ok(DetectorModel::Binary { efficiency: eta_d }),
        "pnr" => Ok(DetectorModel::Pnr { efficiency: eta_d }),
        other => {
            let modes = other
                .strip_prefix("pseudo:")
                .and_then(|m| m.parse::<usize>().ok())
                .filter(|&m| m >= 1)
                .ok_or_else(|| {
                    Failure::usage(format!(
                        "unknown detector `{other}` (expected binary, pnr, or pseudo:M)"
                    ))
                })?;
            Ok(DetectorModel::PseudoPnr {
                modes,
                efficiency: eta_d,
            })
        }
    }
}

fn detector_label(detector: &DetectorModel) -> String {
    match detector {
        DetectorModel::Binary { .. } => "binary".into(),
        DetectorModel::Pnr { .. } => "pnr".into(),
        DetectorModel::PseudoPnr { modes, .. } => format!("pseudo:{modes}"),
    }
}

fn check_unit_interval(name: &str, value: f64) -> Result<f64, Failure> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Failure::usage(format!("{name} must lie in [0, 1], got {value}")))
    }
}

fn check_nbar(value: f64) -> Result<f64, Failure> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Failure::usage(format!(
            "nbar must be finite and non-negative, got {value}"
        )))
    }
}

/// Flag > config file > built-in default, then validated.
fn resolve_system(args: &SystemArgs, file: &ConfigFile) -> Result<MultiplexConfig, Failure> {
    let eta_d = check_unit_interval("eta_d", args.eta_d.or(file.eta_d).unwrap_or(DEFAULT_ETA_D))?;
    let eta_s = check_unit_interval("eta_s", args.eta_s.or(file.eta_s).unwrap_or(DEFAULT_ETA_S))?;
    let eta_tau = check_unit_interval(
        "eta_tau",
        args.eta_tau.or(file.eta_tau).unwrap_or(DEFAULT_ETA_TAU),
    )?;
    let token = args
        .detector
        .clone()
        .or_else(|| file.detector.clone())
        .unwrap_or_else(|| "binary".into());
    let detector = parse_detector(&token, eta_d)?;
    let n_sources = args.n_sources.or(file.n_sources).unwrap_or(1);
    if n_sources < 1 {
        return Err(Failure::usage("n_sources must be at least 1"));
    }
    Ok(MultiplexConfig {
        n_sources,
        eta_s,
        eta_tau,
        rep_rate: DEFAULT_REP_RATE,
        detector,
        nbar: f64::NAN,
    })
}

fn parse_float_item(name: &str, item: &str) -> Result<f64, Failure> {
    item.trim()
        .parse::<f64>()
        .map_err(|_| Failure::usage(format!("{name}: cannot parse `{item}` as a number")))
}

/// `min:max:step` range or comma-separated values; must be non-empty.
fn parse_grid(name: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::usage(format!(
                "{name}: range must be min:max:step, got `{text}`"
            )));
        }
        let min = parse_float_item(name, parts[0])?;
        let max = parse_float_item(name, parts[1])?;
        let step = parse_float_item(name, parts[2])?;
        if step.is_nan() || step <= 0.0 {
            return Err(Failure::usage(format!("{name}: step must be positive")));
        }
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let x = min + i as f64 * step;
            if x > max + step * 1e-9 {
                break;
            }
            values.push(x);
            i += 1;
        }
        values
    } else {
        text.split(',')
            .map(|item| parse_float_item(name, item))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(Failure::usage(format!("{name}: grid is empty")));
    }
    Ok(values)
}

fn parse_float_list(
    name: &str,
    text: Option<&str>,
    fallback: f64,
) -> Result<Vec<f64>, Failure> {
    match text {
        None => Ok(vec![fallback]),
        Some(s) => {
            let values = s
                .split(',')
                .map(|item| parse_float_item(name, item))
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(Failure::usage(format!("{name}: list is empty")));
            }
            Ok(values)
        }
    }
}

fn cmd_scan(args: ScanArgs, file: &ConfigFile) -> Result<(Vec<Record>, u8), Failure> {
    let nbars = parse_grid("--nbar", &args.nbar)?;
    for &nbar in &nbars {
        check_nbar(nbar)?;
    }
    let n_sources_list: Vec<usize> = match args.n_sources.as_deref() {
        None => vec![file.n_sources.unwrap_or(1)],
        Some(s) => s
            .split(',')
            .map(|item| {
                item.trim().parse::<usize>().map_err(|_| {
                    Failure::usage(format!("--n-sources: cannot parse `{item}`"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    if n_sources_list.iter().any(|&n| n < 1) {
        return Err(Failure::usage("--n-sources: every entry must be at least 1"));
    }
    let detector_names: Vec<String> = match args.detector.as_deref() {
        None => vec![file
            .detector
            .clone()
            .unwrap_or_else(|| "binary".into())],
        Some(s) => s.split(',').map(|d| d.trim().to_string()).collect(),
    };
    let eta_ds = parse_float_list(
        "--eta-d",
        args.eta_d.as_deref(),
        file.eta_d.unwrap_or(DEFAULT_ETA_D),
    )?;
    let eta_ss = parse_float_list(
        "--eta-s",
        args.eta_s.as_deref(),
        file.eta_s.unwrap_or(DEFAULT_ETA_S),
    )?;
    let eta_taus = parse_float_list(
        "--eta-tau",
        args.eta_tau.as_deref(),
        file.eta_tau.unwrap_or(DEFAULT_ETA_TAU),
    )?;
    for list in [&eta_ds, &eta_ss, &eta_taus] {
        for &eta in list {
            check_unit_interval("efficiency", eta)?;
        }
    }

    let mut records = Vec::new();
    for &nbar in &nbars {
        for &n_sources in &n_sources_list {
            for name in &detector_names {
                for &eta_d in &eta_ds {
                    let detector = parse_detector(name, eta_d)?;
                    for &eta_s in &eta_ss {
                        for &eta_tau in &eta_taus {
                            let config = MultiplexConfig {
                                n_sources,
                                eta_s,
                                eta_tau,
                                rep_rate: DEFAULT_REP_RATE,
                                detector,
                                nbar,
                            };
                            let m = multiplexed_metrics(&config)
                                .map_err(|e| Failure::usage(e.to_string()))?;
                            records.push(Record {
                                fields: vec![
                                    ("nbar", Value::Float(nbar)),
                                    ("n_sources", Value::Int(n_sources as u64)),
                                    ("detector", Value::Text(detector_label(&detector))),
                                    ("eta_d", Value::Float(eta_d)),
                                    ("eta_s", Value::Float(eta_s)),
                                    ("eta_tau", Value::Float(eta_tau)),
                                    ("p_heralding", Value::Float(m.p_heralding)),
                                    ("fidelity", Value::Float(m.fidelity)),
                                    ("snr", Value::Float(m.snr)),
                                    ("p_success", Value::Float(m.p_success)),
                                ],
                            });
                        }
                    }
                }
            }
        }
    }
    Ok((records, 0))
}

fn check_target_snr(snr: f64) -> Result<f64, Failure> {
    if snr.is_finite() && snr > 0.0 {
        Ok(snr)
    } else {
        Err(Failure::usage(format!(
            "--snr must be a positive finite target, got {snr}"
        )))
    }
}

fn cmd_calibrate(args: CalibrateArgs, file: &ConfigFile) -> Result<(Vec<Record>, u8), Failure> {
    let target = check_target_snr(args.snr)?;
    let config = resolve_system(&args.system, file)?;
    match calibrate_nbar(target, &config) {
        Ok(r) => {
            let record = Record {
                fields: vec![
                    ("detector", Value::Text(detector_label(&config.detector))),
                    ("n_sources", Value::Int(config.n_sources as u64)),
                    ("eta_d", Value::Float(config.detector.efficiency())),
                    ("eta_s", Value::Float(config.eta_s)),
                    ("eta_tau", Value::Float(config.eta_tau)),
                    ("target_snr", Value::Float(target)),
                    ("nbar_star", Value::Float(r.nbar_star)),
                    ("achieved_snr", Value::Float(r.achieved_snr)),
                    ("iterations", Value::Int(u64::from(r.iterations))),
                    ("bracket_lo", Value::Float(r.bracket.0)),
                    ("bracket_hi", Value::Float(r.bracket.1)),
                ],
            };
            Ok((vec![record], 0))
        }
        Err(CoreError::NotBracketed {
            target,
            lo,
            hi,
            snr_lo,
            snr_hi,
        }) => {
            let record = Record {
                fields: vec![
                    ("error", Value::Text("not-bracketed".into())),
                    ("target_snr", Value::Float(target)),
                    ("bracket_lo", Value::Float(lo)),
                    ("bracket_hi", Value::Float(hi)),
                    ("snr_at_lo", Value::Float(snr_lo)),
                    ("snr_at_hi", Value::Float(snr_hi)),
                ],
            };
            Ok((vec![record], EXIT_NOT_BRACKETED))
        }
        Err(e @ (CoreError::NonMonotone { .. } | CoreError::Inconsistent(_))) => {
            Err(Failure::internal(e.to_string()))
        }
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

struct Preset {
    name: &'static str,
    /// None marks the ideal deterministic reference (unit success, no
    /// calibration).
    system: Option<MultiplexConfig>,
    rep_rate: f64,
}

fn presets() -> Vec<Preset> {
    let standard = |n_sources, detector| MultiplexConfig {
        n_sources,
        eta_s: DEFAULT_ETA_S,
        eta_tau: DEFAULT_ETA_TAU,
        rep_rate: DEFAULT_REP_RATE,
        detector,
        nbar: f64::NAN,
    };
    vec![
        Preset {
            name: "single-binary",
            system: Some(standard(1, DetectorModel::Binary { efficiency: 0.7 })),
            rep_rate: 8e7,
        },
        Preset {
            name: "binary-8",
            system: Some(standard(8, DetectorModel::Binary { efficiency: 0.7 })),
            rep_rate: 1e6,
        },
        Preset {
            name: "pseudo-4",
            system: Some(standard(
                4,
                DetectorModel::PseudoPnr {
                    modes: 8,
                    efficiency: 0.7,
                },
            )),
            rep_rate: 1e6,
        },
        Preset {
            name: "pnr-16",
            system: Some(standard(16, DetectorModel::Pnr { efficiency: 0.7 })),
            rep_rate: 1e6,
        },
        Preset {
            name: "pnr-16-high-performance",
            system: Some(MultiplexConfig {
                n_sources: 16,
                eta_s: 0.95,
                eta_tau: 0.99,
                rep_rate: 1e6,
                detector: DetectorModel::Pnr { efficiency: 0.98 },
                nbar: f64::NAN,
            }),
            rep_rate: 1e6,
        },
        Preset {
            name: "deterministic-reference",
            system: None,
            rep_rate: 1e6,
        },
    ]
}

fn cmd_wait(args: WaitArgs) -> Result<(Vec<Record>, u8), Failure> {
    let target = check_target_snr(args.snr)?;
    if args.max_photons < 1 {
        return Err(Failure::usage("--max-photons must be at least 1"));
    }
    let all = presets();
    let selected: Vec<&Preset> = match args.systems.as_deref() {
        None => all.iter().collect(),
        Some(list) => {
            let mut chosen = Vec::new();
            for name in list.split(',').map(str::trim) {
                let preset = all.iter().find(|p| p.name == name).ok_or_else(|| {
                    let known: Vec<&str> = all.iter().map(|p| p.name).collect();
                    Failure::usage(format!(
                        "unknown system `{name}` (expected one of {})",
                        known.join(", ")
                    ))
                })?;
                chosen.push(preset);
            }
            chosen
        }
    };

    let mut records = Vec::new();
    for preset in selected {
        let p_success = match &preset.system {
            None => 1.0,
            Some(config) => match calibrate_nbar(target, config) {
                Ok(r) => {
                    let m = multiplexed_metrics(&MultiplexConfig {
                        nbar: r.nbar_star,
                        ..*config
                    })
                    .map_err(|e| Failure::internal(e.to_string()))?;
                    m.p_success
                }
                Err(CoreError::NotBracketed {
                    target,
                    lo,
                    hi,
                    snr_lo,
                    snr_hi,
                }) => {
                    let record = Record {
                        fields: vec![
                            ("error", Value::Text("not-bracketed".into())),
                            ("system", Value::Text(preset.name.into())),
                            ("target_snr", Value::Float(target)),
                            ("bracket_lo", Value::Float(lo)),
                            ("bracket_hi", Value::Float(hi)),
                            ("snr_at_lo", Value::Float(snr_lo)),
                            ("snr_at_hi", Value::Float(snr_hi)),
                        ],
                    };
                    return Ok((vec![record], EXIT_NOT_BRACKETED));
                }
                Err(e @ (CoreError::NonMonotone { .. } | CoreError::Inconsistent(_))) => {
                    return Err(Failure::internal(e.to_string()));
                }
                Err(e) => return Err(Failure::usage(e.to_string())),
            },
        };
        for n_photons in 1..=args.max_photons {
            let t = waiting_time(p_success, preset.rep_rate, n_photons)
                .map_err(|e| Failure::internal(e.to_string()))?;
            records.push(Record {
                fields: vec![
                    ("system", Value::Text(preset.name.into())),
                    ("n_photons", Value::Int(u64::from(n_photons))),
                    ("t_wait_s", Value::Float(t)),
                ],
            });
        }
    }
    Ok((records, 0))
}

/// Single- to multi-photon ratio of the state the network actually
/// delivers, for comparison against the sampled photons.
fn delivered_ratio(config: &MultiplexConfig) -> photon_mux::Result<f64> {
    let cutoff = choose_cutoff(config.nbar, 1e-12);
    let pairs = thermal_distribution(config.nbar, cutoff.n_max)?;
    let povm = config.detector.povm(cutoff.n_max)?;
    let ensemble = herald_ensemble(&pairs, &povm)?;
    let total = network_efficiency(config.n_sources, config.eta_s, config.eta_tau)?.total;
    match ensemble.conditional(success_outcome(&config.detector)) {
        Some(conditional) => Ok(snr_of(&apply_loss(conditional, total)?)),
        None => Ok(f64::INFINITY),
    }
}

/// Analytic and empirical agree when both are infinite or they sit within
/// three standard errors.
fn agrees(analytic: f64, empirical: f64, se: f64) -> bool {
    if analytic.is_infinite() || empirical.is_infinite() {
        return analytic == empirical;
    }
    (analytic - empirical).abs() <= 3.0 * se + 1e-12
}

fn cmd_validate(args: ValidateArgs, file: &ConfigFile) -> Result<(Vec<Record>, u8), Failure> {
    if args.trials < 1000 {
        return Err(Failure::usage(format!(
            "--trials must be at least 1000, got {}",
            args.trials
        )));
    }
    let nbar = check_nbar(args.nbar)?;
    let config = MultiplexConfig {
        nbar,
        ..resolve_system(&args.system, file)?
    };
    let analytic = multiplexed_metrics(&config).map_err(|e| Failure::usage(e.to_string()))?;
    let analytic_snr = delivered_ratio(&config).map_err(|e| Failure::internal(e.to_string()))?;
    let empirical =
        simulate_system(&config, args.trials, args.seed).map_err(|e| Failure::usage(e.to_string()))?;
    if empirical.cap_clamps > 0 {
        return Err(Failure::internal(format!(
            "{} pair-number draws hit the photon cap; results would be biased",
            empirical.cap_clamps
        )));
    }

    let comparisons = [
        (
            "p_heralding",
            analytic.p_heralding,
            empirical.p_heralding,
            empirical.p_heralding_se,
        ),
        (
            "fidelity",
            analytic.fidelity,
            empirical.fidelity,
            empirical.fidelity_se,
        ),
        ("snr", analytic_snr, empirical.snr, empirical.snr_se),
        (
            "p_success",
            analytic.p_success,
            empirical.p_success,
            empirical.p_success_se,
        ),
    ];
    let mut all_pass = true;
    let mut records = Vec::new();
    for (metric, a, e, se) in comparisons {
        let pass = agrees(a, e, se);
        all_pass &= pass;
        records.push(Record {
            fields: vec![
                ("metric", Value::Text(metric.into())),
                ("analytic", Value::Float(a)),
                ("empirical", Value::Float(e)),
                ("std_error", Value::Float(se)),
                ("pass", Value::Flag(pass)),
            ],
        });
    }
    Ok((records, if all_pass { 0 } else { EXIT_VALIDATION }))
}
