//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure (including a failed `validate` run).

use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biphoton_core::{
    input_fidelity, transform, trapping_fidelity, wavepacket, BeamSplitterParams, BiphotonSpectrum,
    TwoPhotonState,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{self, FormatError, DIP_COLUMNS, SHIH_COLUMNS};
use crate::scans::{
    build_model, run_scan, DelayMode, Evaluation, GridInfo, GridOptions, ModelSpec, ParityName,
    Pump, ScanError, ScanResult, ScanSpec, SweepRange, SweptParameter, DEFAULT_GRID_POINTS,
    DEFAULT_SPAN_SIGMAS,
};
use crate::validation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn flag(name: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("--{name}: {reason}"))
    }
}

impl From<biphoton_core::Error> for CliError {
    fn from(e: biphoton_core::Error) -> Self {
        use biphoton_core::Error as E;
        match e {
            E::DegenerateSpectrum
            | E::NonFinite { .. }
            | E::VanishingNormFactor(_)
            | E::ShapeMismatch { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Spectrum(inner) => inner.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::InvalidSpec { key, reason } => CliError::Config(format!("{key}: {reason}")),
            ScanError::SpectrumFile(f) => f.into(),
            ScanError::Numeric(n) => n.into(),
            ScanError::MissingColumn(_) => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Two-photon interference at a lossless beam splitter"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coincidence probability against the signal-arm delay.
    DipScan(DipScanArgs),
    /// Delay or path-difference scan of the two-path (folded) source.
    ShihScan(ShihScanArgs),
    /// Output channels of one beam-splitter transform.
    Transform(TransformArgs),
    /// Amplitude maps in the frequency and/or time domain.
    Wavepacket(WavepacketArgs),
    /// Run the built-in physics checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    GaussianPair,
    Shih,
    DeltaPump,
    Bell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PumpKind {
    Constant,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Numeric,
    Closed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Frequency,
    Time,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DelayModeArg {
    Relative,
    Common,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Unit convention; natural units fix c = 1.
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    /// Speed of light, required with --units si.
    #[arg(long)]
    pub c_light: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Odd number of grid points per axis.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Grid half width in multiples of σ.
    #[arg(long)]
    pub grid_span: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Spectrum CSV file instead of an analytic model.
    #[arg(long, conflicts_with = "model")]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Carrier frequency Ω.
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
    /// Carrier wavelength, alternative to --center.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub pump: Option<PumpKind>,
    /// Pump bandwidth relative to σ.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Half path difference ΔL.
    #[arg(long)]
    pub dl: Option<f64>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega_b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DipScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_max: f64,
    #[arg(long, default_value_t = 81)]
    pub steps: usize,
    /// Delay the signal arm only, or both arms together.
    #[arg(long, value_enum, default_value = "relative")]
    pub delay_mode: DelayModeArg,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ShihScanArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub center: Option<f64>,
    /// Half path difference, fixed during a delay scan.
    #[arg(long)]
    pub dl: Option<f64>,
    /// Mean delay, fixed during a path-difference scan.
    #[arg(long, allow_negative_numbers = true)]
    pub dz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_max: Option<f64>,
    #[arg(long)]
    pub dl_min: Option<f64>,
    #[arg(long)]
    pub dl_max: Option<f64>,
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub phi_tau: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub phi_rho: f64,
    /// Signal-arm delay applied before the splitter.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub dz: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct WavepacketArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "frequency")]
    pub domain: Domain,
    /// Signal-arm delay applied before export.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub dz: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run only these checks (repeatable).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub criterion: Vec<u8>,
}

pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::DipScan(a) => dip_scan(a),
        Command::ShihScan(a) => shih_scan(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Wavepacket(a) => cmd_wavepacket(a),
        Command::Validate(a) => cmd_validate(a),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|e| match e {
        Outcome::Exit(code) => Ok(code),
        Outcome::Error(e) => Err(e),
    })
}

/// Internal control flow: a finished command with a non-zero status, or an error.
enum Outcome {
    Exit(ExitCode),
    Error(CliError),
}

impl<E: Into<CliError>> From<E> for Outcome {
    fn from(e: E) -> Self {
        Outcome::Error(e.into())
    }
}

type CmdResult = Result<(), Outcome>;

fn c_light(common: &CommonArgs) -> Result<f64, CliError> {
    match (common.units, common.c_light) {
        (Units::Natural, None) => Ok(1.0),
        (Units::Natural, Some(_)) => {
            Err(CliError::flag("c-light", "only accepted with --units si"))
        }
        (Units::Si, None) => Err(CliError::flag("c-light", "required with --units si")),
        (Units::Si, Some(c)) if c.is_finite() && c > 0.0 => Ok(c),
        (Units::Si, Some(c)) => Err(CliError::flag(
            "c-light",
            format!("must be positive, got {c}"),
        )),
    }
}

fn grid_options(
    common: &CommonArgs,
    allow_span: bool,
    allow_points: bool,
) -> Result<GridOptions, CliError> {
    if !allow_span && common.grid_span.is_some() {
        return Err(CliError::flag("grid-span", "does not apply to this input"));
    }
    if !allow_points && common.grid_points.is_some() {
        return Err(CliError::flag(
            "grid-points",
            "does not apply to this input",
        ));
    }
    let n = common.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    if n < 3 || n.is_multiple_of(2) {
        return Err(CliError::flag(
            "grid-points",
            format!("odd point count required (at least 3), got {n}"),
        ));
    }
    let span = common.grid_span.unwrap_or(DEFAULT_SPAN_SIGMAS);
    if !(span.is_finite() && span > 0.0) {
        return Err(CliError::flag(
            "grid-span",
            format!("must be positive, got {span}"),
        ));
    }
    Ok(GridOptions {
        span_sigmas: span,
        n_points: n,
    })
}

fn evaluation(m: Method) -> Evaluation {
    Evaluation {
        numeric: m != Method::Closed,
        closed_form: m != Method::Numeric,
    }
}

fn sigma_value(sigma: Option<f64>, units: Units) -> Result<f64, CliError> {
    match (sigma, units) {
        (Some(s), _) => Ok(s),
        (None, Units::Natural) => Ok(1.0),
        (None, Units::Si) => Err(CliError::flag("sigma", "required with --units si")),
    }
}

fn carrier(center: Option<f64>, lambda: Option<f64>, c: f64) -> Result<f64, CliError> {
    match (center, lambda) {
        (Some(w), None) => Ok(w),
        (None, Some(l)) if l.is_finite() && l > 0.0 => Ok(2.0 * PI * c / l),
        (None, Some(l)) => Err(CliError::flag(
            "lambda",
            format!("must be positive, got {l}"),
        )),
        (Some(_), Some(_)) => Err(CliError::flag(
            "lambda",
            "give either --lambda or --center, not both",
        )),
        (None, None) => Err(CliError::flag(
            "center",
            "one of --center or --lambda is required",
        )),
    }
}

/// Which model the flags describe; flags foreign to that model are refused.
fn resolve_model(a: &ModelArgs, units: Units, c: f64) -> Result<ModelSpec, CliError> {
    let given = [
        ("sigma", a.sigma.is_some()),
        ("center", a.center.is_some()),
        ("lambda", a.lambda.is_some()),
        ("pump", a.pump.is_some()),
        ("beta", a.beta.is_some()),
        ("dl", a.dl.is_some()),
        ("parity", a.parity.is_some()),
        ("omega-a", a.omega_a.is_some()),
        ("omega-b", a.omega_b.is_some()),
    ];
    let (label, allowed): (&str, &[&str]) = match (
        a.spectrum.is_some(),
        a.model.unwrap_or(ModelKind::GaussianPair),
    ) {
        (true, _) => ("spectrum file", &[]),
        (false, ModelKind::GaussianPair) => ("gaussian-pair", &["sigma", "center", "pump", "beta"]),
        (false, ModelKind::Shih) => ("shih", &["sigma", "center", "lambda", "beta", "dl"]),
        (false, ModelKind::DeltaPump) => ("delta-pump", &["sigma", "center", "dl", "parity"]),
        (false, ModelKind::Bell) => ("bell", &["omega-a", "omega-b"]),
    };
    if let Some((name, _)) = given
        .iter()
        .find(|(name, on)| *on && !allowed.contains(name))
    {
        return Err(CliError::flag(
            name,
            format!("does not apply to the {label} model"),
        ));
    }
    let required = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| CliError::flag(name, format!("required for the {label} model")))
    };
    if let Some(path) = &a.spectrum {
        return Ok(ModelSpec::SpectrumFile { path: path.clone() });
    }
    Ok(match a.model.unwrap_or(ModelKind::GaussianPair) {
        ModelKind::GaussianPair => {
            let pump = match (a.pump, a.beta) {
                (Some(PumpKind::Constant), Some(_)) => {
                    return Err(CliError::flag("beta", "does not apply to a constant pump"))
                }
                (Some(PumpKind::Constant), None) | (None, None) => Pump::Constant,
                (_, Some(beta)) => Pump::Gaussian { beta },
                (Some(PumpKind::Gaussian), None) => {
                    return Err(CliError::flag("beta", "required for a gaussian pump"))
                }
            };
            ModelSpec::GaussianPair {
                center: a.center.unwrap_or(0.0),
                sigma: sigma_value(a.sigma, units)?,
                pump,
            }
        }
        ModelKind::Shih => ModelSpec::Shih {
            center: carrier(a.center, a.lambda, c)?,
            sigma: sigma_value(a.sigma, units)?,
            beta: required("beta", a.beta)?,
            delta_l: required("dl", a.dl)?,
        },
        ModelKind::DeltaPump => ModelSpec::DeltaPump {
            center: a.center.unwrap_or(0.0),
            sigma: sigma_value(a.sigma, units)?,
            delta_l: required("dl", a.dl)?,
            parity: match a.parity {
                Some(ParityArg::Even) => ParityName::Even,
                Some(ParityArg::Odd) => ParityName::Odd,
                None => {
                    return Err(CliError::flag(
                        "parity",
                        "required for the delta-pump model",
                    ))
                }
            },
        },
        ModelKind::Bell => ModelSpec::Bell {
            omega_a: required("omega-a", a.omega_a)?,
            omega_b: required("omega-b", a.omega_b)?,
        },
    })
}

/// Grid flags accepted by each kind of input.
fn model_grid_options(model: &ModelSpec, common: &CommonArgs) -> Result<GridOptions, CliError> {
    match model {
        ModelSpec::SpectrumFile { .. } => grid_options(common, false, false),
        ModelSpec::Bell { .. } => grid_options(common, false, true),
        _ => grid_options(common, true, true),
    }
}

fn emit(common: &CommonArgs, data: &str) -> Result<(), CliError> {
    write_to(common.output.as_deref(), data)
}

fn write_to(path: Option<&Path>, data: &str) -> Result<(), CliError> {
    let result = match path {
        Some(p) => fs::write(p, data),
        None => io::stdout().lock().write_all(data.as_bytes()),
    };
    result.map_err(|e| {
        let target = path.map_or_else(
            || "standard output".to_string(),
            |p| p.display().to_string(),
        );
        CliError::Config(format!("cannot write {target}: {e}"))
    })
}

/// Metadata goes to standard output unless the data already did.
fn emit_metadata(data_on_stdout: bool, meta: &Value) {
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    if data_on_stdout {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn emit_scan(
    common: &CommonArgs,
    r: &ScanResult,
    columns: &[format::Column],
) -> Result<(), CliError> {
    match common.format {
        OutputFormat::Csv => {
            emit(common, &format::scan_csv(r, columns))?;
            emit_metadata(common.output.is_none(), &json!(r.metadata));
        }
        OutputFormat::Json => emit(common, &json_text(&format::scan_json(r, columns)))?,
    }
    Ok(())
}

fn dip_scan(a: DipScanArgs) -> CmdResult {
    let c = c_light(&a.common)?;
    let model = resolve_model(&a.model, a.common.units, c)?;
    if matches!(model, ModelSpec::Shih { .. }) {
        return Err(CliError::flag("model", "use shih-scan for the two-path source").into());
    }
    let mut spec = ScanSpec::new(
        model,
        SweptParameter::Dz,
        SweepRange {
            min: a.dz_min,
            max: a.dz_max,
            steps: a.steps,
        },
    );
    spec.grid = model_grid_options(&spec.model, &a.common)?;
    spec.delay_mode = match a.delay_mode {
        DelayModeArg::Relative => DelayMode::Relative,
        DelayModeArg::Common => DelayMode::Common,
    };
    spec.evaluation = evaluation(a.method);
    spec.c_light = c;
    let r = run_scan(&spec)?;
    emit_scan(&a.common, &r, &DIP_COLUMNS)?;
    Ok(())
}

fn shih_scan(a: ShihScanArgs) -> CmdResult {
    let c = c_light(&a.common)?;
    let center = carrier(a.center, a.lambda, c)?;
    let sigma = sigma_value(a.sigma, a.common.units)?;
    let dz_range = (a.dz_min, a.dz_max);
    let dl_range = (a.dl_min, a.dl_max);
    let (swept, range, delta_l, fixed_dz) = match (dz_range, dl_range) {
        ((Some(min), Some(max)), (None, None)) => {
            if a.dz.is_some() {
                return Err(CliError::flag("dz", "does not apply to a delay scan").into());
            }
            let dl =
                a.dl.ok_or_else(|| CliError::flag("dl", "required for a delay scan"))?;
            (SweptParameter::Dz, (min, max), dl, 0.0)
        }
        ((None, None), (Some(min), Some(max))) => {
            if a.dl.is_some() {
                return Err(
                    CliError::flag("dl", "does not apply to a path-difference scan").into(),
                );
            }
            (
                SweptParameter::DeltaL,
                (min, max),
                min.max(0.0),
                a.dz.unwrap_or(0.0),
            )
        }
        _ => {
            return Err(CliError::Config(
                "give exactly one of --dz-min/--dz-max or --dl-min/--dl-max".into(),
            )
            .into())
        }
    };
    let mut spec = ScanSpec::new(
        ModelSpec::Shih {
            center,
            sigma,
            beta: a.beta,
            delta_l,
        },
        swept,
        SweepRange {
            min: range.0,
            max: range.1,
            steps: a.steps,
        },
    );
    spec.fixed_dz = fixed_dz;
    spec.grid = grid_options(&a.common, true, true)?;
    spec.evaluation = evaluation(a.method);
    spec.c_light = c;
    let r = run_scan(&spec)?;
    emit_scan(&a.common, &r, &SHIH_COLUMNS)?;
    Ok(())
}

/// Model spectrum with its warnings and, when `dz ≠ 0`, the signal arm delayed.
fn load_input(
    a: &ModelArgs,
    common: &CommonArgs,
    dz: f64,
) -> Result<(ModelSpec, BiphotonSpectrum, Vec<String>, f64), CliError> {
    let c = c_light(common)?;
    let model = resolve_model(a, common.units, c)?;
    let opts = model_grid_options(&model, common)?;
    let (mut s, warnings) = build_model(&model, &opts, c)?;
    if dz != 0.0 {
        s = s.apply_path_delays(dz, 0.0, c);
    }
    Ok((model, s, warnings, c))
}

#[derive(Debug, Serialize)]
struct TransformReport {
    p_11: f64,
    p_22: f64,
    p_coinc: f64,
    w_antisym: f64,
    exchange_overlap: f64,
    rank1_fraction: f64,
    trapping_fidelity: f64,
    input_fidelity: f64,
    /// Distance between the output and the input state.
    output_distance: f64,
}

const REPORT_FIELDS: [&str; 9] = [
    "p_11",
    "p_22",
    "p_coinc",
    "w_antisym",
    "exchange_overlap",
    "rank1_fraction",
    "trapping_fidelity",
    "input_fidelity",
    "output_distance",
];

fn cmd_transform(a: TransformArgs) -> CmdResult {
    let (model, s, warnings, c) = load_input(&a.model, &a.common, a.dz)?;
    let bs = BeamSplitterParams::new(a.theta, a.phi_tau, a.phi_rho)?;
    let out = transform(&s, &bs);
    let input = TwoPhotonState::from(&s);
    let report = TransformReport {
        p_11: out.p_11,
        p_22: out.p_22,
        p_coinc: out.p_coinc,
        w_antisym: s.antisymmetric_weight(),
        exchange_overlap: s.exchange_overlap(),
        rank1_fraction: s.separability_rank1_fraction(),
        trapping_fidelity: trapping_fidelity(&s),
        input_fidelity: input_fidelity(&s, &bs),
        output_distance: out.state.distance(&input),
    };
    let report_value = serde_json::to_value(&report).expect("report serializes");
    let spec = json!({
        "model": model,
        "theta": a.theta,
        "phi_tau": a.phi_tau,
        "phi_rho": a.phi_rho,
        "dz": a.dz,
        "c_light": c,
    });
    let metadata = json!({
        "grid": GridInfo::from(s.grid()),
        "warnings": warnings,
    });
    match a.common.format {
        OutputFormat::Json => emit(
            &a.common,
            &json_text(&json!({ "spec": spec, "rows": [report_value], "metadata": metadata })),
        )?,
        OutputFormat::Csv => {
            let values: Vec<String> = REPORT_FIELDS
                .iter()
                .map(|k| format::fmt_f64(report_value[k].as_f64().unwrap_or(f64::NAN)))
                .collect();
            emit(
                &a.common,
                &format!("{}\n{}\n", REPORT_FIELDS.join(","), values.join(",")),
            )?;
            emit_metadata(
                a.common.output.is_none(),
                &json!({ "spec": spec, "metadata": metadata }),
            );
        }
    }
    Ok(())
}

/// Relative Frobenius distance between the time-domain amplitude and the
/// product of one-dimensional transforms of the leading Schmidt pair.
fn factorization_residual(s: &BiphotonSpectrum, time: &[Complex64]) -> f64 {
    let g = s.grid();
    let (sv, u, v) = s.leading_schmidt_pair();
    let vbar: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    let fu = wavepacket::time_domain_1d(g, &u);
    let fv = wavepacket::time_domain_1d(g, &vbar);
    let n = g.len();
    let (mut diff, mut total) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let z = time[i * n + j];
            diff += (z - fu[i] * fv[j] * sv).norm_sqr();
            total += z.norm_sqr();
        }
    }
    (diff / total).sqrt()
}

fn argmax(values: &[f64], axis: &[f64]) -> [f64; 2] {
    let n = axis.len();
    let k = values
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v > values[best] { k } else { best });
    [axis[k / n], axis[k % n]]
}

struct Map<'a> {
    label: &'static str,
    corner: &'static str,
    axis: &'a [f64],
    values: &'a [f64],
}

fn render_map(m: &Map<'_>, fmt: OutputFormat, spec: &Value, metadata: &Value) -> String {
    match fmt {
        OutputFormat::Csv => format::matrix_csv(m.corner, m.axis, m.values),
        OutputFormat::Json => {
            let data = format::MatrixData::new(m.label, m.axis, m.values);
            json_text(&json!({
                "spec": spec,
                "rows": data.rows,
                "metadata": { "axis_label": data.axis_label, "axis": data.axis, "info": metadata },
            }))
        }
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn cmd_wavepacket(a: WavepacketArgs) -> CmdResult {
    if a.domain == Domain::Both && a.common.output.is_none() {
        return Err(CliError::flag("output", "required with --domain both").into());
    }
    let (model, s, warnings, c) = load_input(&a.model, &a.common, a.dz)?;
    let g = *s.grid();
    let omegas: Vec<f64> = g.omegas().collect();
    let freq_abs: Vec<f64> = s.amplitudes().iter().map(|z| z.norm()).collect();
    let spec = json!({ "model": model, "dz": a.dz, "c_light": c, "domain": format!("{:?}", a.domain).to_lowercase() });
    let mut meta = json!({
        "grid": GridInfo::from(&g),
        "warnings": warnings,
        "rank1_fraction": s.separability_rank1_fraction(),
        "peak_frequency": argmax(&freq_abs, &omegas),
    });
    let want_time = a.domain != Domain::Frequency;
    let time = want_time.then(|| s.time_domain());
    let time_abs: Vec<f64> = time
        .as_ref()
        .map_or_else(Vec::new, |t| t.values().iter().map(|z| z.norm()).collect());
    if let Some(t) = &time {
        meta["dt"] = json!(t.dt());
        meta["parseval_residual"] = json!((t.parseval_norm() - 1.0).abs());
        meta["factorization_residual"] = json!(factorization_residual(&s, t.values()));
        meta["peak_time"] = json!(argmax(&time_abs, t.times()));
    }
    let freq_map = Map {
        label: "omega",
        corner: "omega",
        axis: &omegas,
        values: &freq_abs,
    };
    let time_map = time.as_ref().map(|t| Map {
        label: "t",
        corner: "t",
        axis: t.times(),
        values: &time_abs,
    });
    let fmt = a.common.format;
    let out = a.common.output.as_deref();
    match (a.domain, time_map) {
        (Domain::Frequency, _) => write_to(out, &render_map(&freq_map, fmt, &spec, &meta))?,
        (Domain::Time, Some(tm)) => write_to(out, &render_map(&tm, fmt, &spec, &meta))?,
        (Domain::Both, Some(tm)) => {
            let base = out.expect("checked above");
            let f = suffixed(base, "frequency");
            let t = suffixed(base, "time");
            write_to(Some(&f), &render_map(&freq_map, fmt, &spec, &meta))?;
            write_to(Some(&t), &render_map(&tm, fmt, &spec, &meta))?;
            meta["files"] = json!([f, t]);
        }
        (_, None) => unreachable!("time map computed for time output"),
    }
    emit_metadata(out.is_none(), &meta);
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> CmdResult {
    let ids: Vec<u8> = if a.criterion.is_empty() {
        validation::IDS.to_vec()
    } else {
        a.criterion
    };
    let mut failed = false;
    for id in ids {
        let outcome = validation::run(id).expect("ids are range checked");
        println!("{outcome}");
        failed |= !outcome.passed;
    }
    if failed {
        return Err(Outcome::Exit(ExitCode::from(3)));
    }
    Ok(())
}
