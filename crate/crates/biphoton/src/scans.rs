//! Parameter scans: sweep a delay or path difference, evaluate the
//! coincidence probability on the grid and with the closed forms, and
//! collect the rows into a table.
//!
//! Rows are independent pure evaluations and run on the rayon pool; the
//! output order always follows the swept values.

use std::path::PathBuf;
use std::time::Instant;

use biphoton_core::models::{self, Parity, PumpEnvelope};
use biphoton_core::{
    coincidence_probability, BeamSplitterParams, BiphotonSpectrum, FrequencyGrid,
    GaussianPairModel, ShihModel,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::format;

/// Default grid: ±6σ with 257 points.
pub const DEFAULT_SPAN_SIGMAS: f64 = 6.0;
pub const DEFAULT_GRID_POINTS: usize = 257;

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("invalid {key}: {reason}")]
    InvalidSpec { key: &'static str, reason: String },
    #[error(transparent)]
    SpectrumFile(#[from] format::FormatError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] biphoton_core::Error),
    #[error("comparison needs the {0} column")]
    MissingColumn(&'static str),
}

impl ScanError {
    pub(crate) fn invalid(key: &'static str, reason: impl Into<String>) -> Self {
        ScanError::InvalidSpec {
            key,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pump {
    Constant,
    /// Gaussian pump with bandwidth `β·σ`.
    Gaussian {
        beta: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    GaussianPair {
        center: f64,
        sigma: f64,
        pump: Pump,
    },
    Shih {
        center: f64,
        sigma: f64,
        beta: f64,
        delta_l: f64,
    },
    DeltaPump {
        center: f64,
        sigma: f64,
        delta_l: f64,
        parity: ParityName,
    },
    Bell {
        omega_a: f64,
        omega_b: f64,
    },
    SpectrumFile {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityName {
    Even,
    Odd,
}

impl From<ParityName> for Parity {
    fn from(p: ParityName) -> Self {
        match p {
            ParityName::Even => Parity::Even,
            ParityName::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    Dz,
    #[serde(rename = "dL")]
    DeltaL,
}

/// How a swept or fixed delay `dz` is applied: to the signal arm only
/// (`z₁ = dz`, `z₂ = 0`) or to both arms equally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    #[default]
    Relative,
    Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(move |k| self.min + (self.max - self.min) * k as f64 / last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub numeric: bool,
    pub closed_form: bool,
}

impl Default for Evaluation {
    fn default() -> Self {
        Self {
            numeric: true,
            closed_form: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptions {
    /// Half width in units of σ.
    pub span_sigmas: f64,
    /// Point count; for two-path spectra a lower bound, refined to resolve the pump.
    pub n_points: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            span_sigmas: DEFAULT_SPAN_SIGMAS,
            n_points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSpec {
    pub model: ModelSpec,
    pub swept: SweptParameter,
    pub range: SweepRange,
    /// Delay used when `ΔL` is swept.
    pub fixed_dz: f64,
    pub delay_mode: DelayMode,
    pub evaluation: Evaluation,
    pub grid: GridOptions,
    pub c_light: f64,
}

impl ScanSpec {
    pub fn new(model: ModelSpec, swept: SweptParameter, range: SweepRange) -> Self {
        Self {
            model,
            swept,
            range,
            fixed_dz: 0.0,
            delay_mode: DelayMode::Relative,
            evaluation: Evaluation::default(),
            grid: GridOptions::default(),
            c_light: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let r = &self.range;
        if r.steps < 2 {
            return Err(ScanError::invalid("steps", "steps must be ≥ 2"));
        }
        if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
            return Err(ScanError::invalid(
                "range",
                format!("need finite min < max, got [{}, {}]", r.min, r.max),
            ));
        }
        if !self.evaluation.numeric && !self.evaluation.closed_form {
            return Err(ScanError::invalid(
                "evaluation",
                "select at least one method",
            ));
        }
        if !(self.c_light.is_finite() && self.c_light > 0.0) {
            return Err(ScanError::invalid("c_light", "must be positive"));
        }
        if self.grid.n_points.is_multiple_of(2) || self.grid.n_points < 3 {
            return Err(ScanError::invalid(
                "grid_points",
                "odd point count required (at least 3)",
            ));
        }
        if !(self.grid.span_sigmas.is_finite() && self.grid.span_sigmas > 0.0) {
            return Err(ScanError::invalid("grid_span", "must be positive"));
        }
        let sweeps_dl = self.swept == SweptParameter::DeltaL;
        match &self.model {
            ModelSpec::Shih { delta_l, .. } => {
                if self.delay_mode == DelayMode::Common {
                    return Err(ScanError::invalid(
                        "delay_mode",
                        "the two-path source fixes its own arm delays",
                    ));
                }
                if sweeps_dl && r.min < 0.0 {
                    return Err(ScanError::invalid("range", "dL must be non-negative"));
                }
                if !sweeps_dl && *delta_l < 0.0 {
                    return Err(ScanError::invalid("dL", "must be non-negative"));
                }
            }
            ModelSpec::DeltaPump { .. } => {}
            _ if sweeps_dl => {
                return Err(ScanError::invalid(
                    "swept",
                    "dL can only be swept for the shih and delta_pump models",
                ))
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub param: f64,
    pub p_numeric: Option<f64>,
    /// Closed form; for the two-path source this is the exact formula.
    pub p_closed: Option<f64>,
    /// Reduced (narrow pump, long path) formula, two-path source only.
    pub p_reduced: Option<f64>,
    pub w_antisym: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub center: f64,
    pub half_span: f64,
    pub n_points: usize,
    pub spacing: f64,
}

impl From<&FrequencyGrid> for GridInfo {
    fn from(g: &FrequencyGrid) -> Self {
        Self {
            center: g.center(),
            half_span: g.half_span(),
            n_points: g.len(),
            spacing: g.spacing(),
        }
    }
}

/// Per-row data of two-path scans: the closed-form norm factor `B` and the
/// fringe order `4ΔL/λ` reduced modulo 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseNote {
    pub param: f64,
    pub b_factor: f64,
    pub phase_order_mod2: f64,
    /// Set when `4ΔL/λ` is an integer to within 1e-9.
    pub parity: Option<ParityName>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub grid: Option<GridInfo>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub phase_notes: Vec<PhaseNote>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    pub rows: Vec<ScanRow>,
    pub metadata: ScanMetadata,
}

/// Everything a row needs that does not change between rows.
enum Prepared {
    Delayed {
        base: Option<BiphotonSpectrum>,
        closed: Option<Box<dyn Fn(f64) -> f64 + Sync>>,
    },
    Shih {
        grid: FrequencyGrid,
    },
    DeltaPumpByLength {
        sigma: f64,
        center: f64,
        parity: Parity,
        grid: FrequencyGrid,
    },
}

fn shih_model(spec: &ScanSpec, delta_l: f64, dz: f64) -> Result<ShihModel, ScanError> {
    let ModelSpec::Shih {
        center,
        sigma,
        beta,
        ..
    } = spec.model
    else {
        unreachable!("caller matched the two-path model");
    };
    Ok(ShihModel::from_offsets(
        center,
        sigma,
        beta * sigma,
        delta_l,
        dz,
        spec.c_light,
    )?)
}

/// Grid a scan of `model` would use; `None` for spectrum files, whose grid
/// comes from the file.
pub fn model_grid(
    model: &ModelSpec,
    opts: &GridOptions,
) -> Result<Option<FrequencyGrid>, ScanError> {
    let g = match *model {
        ModelSpec::GaussianPair { center, sigma, .. }
        | ModelSpec::DeltaPump { center, sigma, .. } => {
            FrequencyGrid::around(center, sigma, opts.span_sigmas, opts.n_points)?
        }
        ModelSpec::Shih {
            center,
            sigma,
            beta,
            ..
        } => models::pump_resolving_grid(
            center,
            sigma,
            beta * sigma,
            opts.span_sigmas,
            opts.n_points,
        )?,
        ModelSpec::Bell { omega_a, omega_b } => bell_grid(omega_a, omega_b, opts.n_points)?,
        ModelSpec::SpectrumFile { .. } => return Ok(None),
    };
    Ok(Some(g))
}

/// Grid centred between the two Bell frequencies with both of them on grid points.
fn bell_grid(omega_a: f64, omega_b: f64, n_points: usize) -> Result<FrequencyGrid, ScanError> {
    let gap = (omega_b - omega_a).abs();
    if gap.is_nan() || gap == 0.0 {
        return Err(ScanError::invalid("omega_b", "must differ from omega_a"));
    }
    let r = ((n_points - 1) / 4).max(1);
    let spacing = gap / (2 * r) as f64;
    Ok(FrequencyGrid::new(
        0.5 * (omega_a + omega_b),
        spacing * ((n_points - 1) / 2) as f64,
        n_points,
    )?)
}

/// Builds the model spectrum at zero delay together with its grid and warnings.
pub fn build_model(
    model: &ModelSpec,
    opts: &GridOptions,
    c_light: f64,
) -> Result<(BiphotonSpectrum, Vec<String>), ScanError> {
    let grid = model_grid(model, opts)?;
    let built = match (model, grid) {
        (
            ModelSpec::GaussianPair {
                center,
                sigma,
                pump,
            },
            Some(g),
        ) => {
            let envelope = match *pump {
                Pump::Constant => PumpEnvelope::Constant,
                Pump::Gaussian { beta } => PumpEnvelope::Gaussian {
                    sigma_p: beta * sigma,
                },
            };
            models::gaussian_pair_spectrum(&GaussianPairModel::new(*center, *sigma, envelope)?, &g)?
        }
        (
            ModelSpec::Shih {
                center,
                sigma,
                beta,
                delta_l,
            },
            Some(g),
        ) => {
            let m = ShihModel::from_offsets(*center, *sigma, beta * sigma, *delta_l, 0.0, c_light)?;
            models::shih_spectrum(&m, &g)?
        }
        (
            ModelSpec::DeltaPump {
                center,
                sigma,
                delta_l,
                parity,
            },
            Some(g),
        ) => models::delta_pump_spectrum(*sigma, *center, *delta_l, (*parity).into(), c_light, &g)?,
        (ModelSpec::Bell { omega_a, omega_b }, Some(g)) => {
            models::bell_antisymmetric_spectrum(*omega_a, *omega_b, &g)?
        }
        (ModelSpec::SpectrumFile { path }, _) => {
            return Ok((format::read_spectrum_file(path)?, Vec::new()));
        }
        (_, None) => unreachable!("every analytic model has a grid"),
    };
    Ok((
        built.spectrum,
        built.warnings.iter().map(|w| w.to_string()).collect(),
    ))
}

fn delays(mode: DelayMode, dz: f64) -> (f64, f64) {
    match mode {
        DelayMode::Relative => (dz, 0.0),
        DelayMode::Common => (dz, dz),
    }
}

fn prepare(
    spec: &ScanSpec,
    warnings: &mut Vec<String>,
) -> Result<(Prepared, Option<FrequencyGrid>), ScanError> {
    let c = spec.c_light;
    if let ModelSpec::Shih { delta_l, .. } = spec.model {
        let grid = model_grid(&spec.model, &spec.grid)?.expect("analytic grid");
        let probe = shih_model(spec, delta_l.max(spec.range.min.max(0.0)), 0.0)?;
        if let Some(w) = models::check_coverage(&grid, probe.center(), probe.sigma()) {
            warnings.push(w.to_string());
        }
        if spec.evaluation.closed_form {
            let dls: Vec<f64> = match spec.swept {
                SweptParameter::Dz => vec![delta_l],
                SweptParameter::DeltaL => spec.range.values().collect(),
            };
            for dl in dls {
                for w in models::reduced_regime_warnings(&shih_model(spec, dl, 0.0)?) {
                    let text = w.to_string();
                    if !warnings.contains(&text) {
                        warnings.push(text);
                    }
                }
            }
        }
        return Ok((Prepared::Shih { grid }, Some(grid)));
    }
    if let (
        ModelSpec::DeltaPump {
            center,
            sigma,
            parity,
            ..
        },
        SweptParameter::DeltaL,
    ) = (&spec.model, spec.swept)
    {
        let grid = model_grid(&spec.model, &spec.grid)?.expect("analytic grid");
        if let Some(w) = models::check_coverage(&grid, *center, *sigma) {
            warnings.push(w.to_string());
        }
        return Ok((
            Prepared::DeltaPumpByLength {
                sigma: *sigma,
                center: *center,
                parity: (*parity).into(),
                grid,
            },
            Some(grid),
        ));
    }

    let base = if spec.evaluation.numeric {
        let (s, w) = build_model(&spec.model, &spec.grid, c)?;
        warnings.extend(w);
        Some(s)
    } else {
        None
    };
    let grid = match &base {
        Some(s) => Some(*s.grid()),
        None => model_grid(&spec.model, &spec.grid)?,
    };
    let mode = spec.delay_mode;
    let effective = move |dz: f64| {
        let (z1, z2) = delays(mode, dz);
        z1 - z2
    };
    let closed: Option<Box<dyn Fn(f64) -> f64 + Sync>> =
        match (&spec.model, spec.evaluation.closed_form) {
            (ModelSpec::GaussianPair { sigma, .. }, true) => {
                let sigma = *sigma;
                Some(Box::new(move |dz| {
                    models::hom_dip_closed(sigma, effective(dz), c)
                }))
            }
            (ModelSpec::Bell { omega_a, omega_b }, true) => {
                let g = grid.expect("analytic grid");
                let (a, b) = (
                    g.omega(g.nearest_index(*omega_a)),
                    g.omega(g.nearest_index(*omega_b)),
                );
                Some(Box::new(move |dz| {
                    models::bell_closed(a, b, effective(dz), c)
                }))
            }
            _ => None,
        };
    Ok((Prepared::Delayed { base, closed }, grid))
}

fn evaluate_row(
    spec: &ScanSpec,
    prepared: &Prepared,
    value: f64,
) -> Result<(ScanRow, Option<PhaseNote>), ScanError> {
    let balanced = BeamSplitterParams::balanced();
    let mut row = ScanRow {
        param: value,
        p_numeric: None,
        p_closed: None,
        p_reduced: None,
        w_antisym: None,
    };
    let mut numeric = |s: &BiphotonSpectrum| {
        row.p_numeric = Some(coincidence_probability(s, &balanced));
        row.w_antisym = Some(s.antisymmetric_weight());
    };
    let mut note = None;
    match prepared {
        Prepared::Delayed { base, closed } => {
            if let Some(base) = base {
                let (z1, z2) = delays(spec.delay_mode, value);
                numeric(&base.apply_path_delays(z1, z2, spec.c_light));
            }
            row.p_closed = closed.as_ref().map(|f| f(value));
        }
        Prepared::Shih { grid, .. } => {
            let (dl, dz) = match spec.swept {
                SweptParameter::Dz => match spec.model {
                    ModelSpec::Shih { delta_l, .. } => (delta_l, value),
                    _ => unreachable!(),
                },
                SweptParameter::DeltaL => (value, spec.fixed_dz),
            };
            let m = shih_model(spec, dl, dz)?;
            if spec.evaluation.numeric {
                numeric(&models::shih_spectrum(&m, grid)?.spectrum);
            }
            if spec.evaluation.closed_form {
                row.p_closed = Some(models::shih_exact(&m, dz)?);
                row.p_reduced = Some(models::shih_reduced(&m, dz));
            }
            let order = m.phase_order();
            let parity = if (order - order.round()).abs() < 1e-9 {
                Some(if order.round().rem_euclid(2.0) == 1.0 {
                    ParityName::Odd
                } else {
                    ParityName::Even
                })
            } else {
                None
            };
            note = Some(PhaseNote {
                param: value,
                b_factor: models::shih_b_factor(&m),
                phase_order_mod2: order.rem_euclid(2.0),
                parity,
            });
        }
        Prepared::DeltaPumpByLength {
            sigma,
            center,
            parity,
            grid,
        } => {
            let s =
                models::delta_pump_spectrum(*sigma, *center, value, *parity, spec.c_light, grid)?
                    .spectrum;
            let (z1, z2) = delays(spec.delay_mode, spec.fixed_dz);
            numeric(&s.apply_path_delays(z1, z2, spec.c_light));
        }
    }
    Ok((row, note))
}

/// Runs every row of the scan. Rows are evaluated independently, so the
/// table is identical whatever the evaluation order.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult, ScanError> {
    spec.validate()?;
    let start = Instant::now();
    let mut warnings = Vec::new();
    let (prepared, grid) = prepare(spec, &mut warnings)?;
    let values: Vec<f64> = spec.range.values().collect();
    let evaluated: Vec<(ScanRow, Option<PhaseNote>)> = values
        .par_iter()
        .map(|&v| evaluate_row(spec, &prepared, v))
        .collect::<Result<_, _>>()?;
    let (rows, notes): (Vec<ScanRow>, Vec<Option<PhaseNote>>) = evaluated.into_iter().unzip();
    Ok(ScanResult {
        spec: spec.clone(),
        rows,
        metadata: ScanMetadata {
            grid: grid.as_ref().map(GridInfo::from),
            warnings,
            wall_time_s: start.elapsed().as_secs_f64(),
            phase_notes: notes.into_iter().flatten().collect(),
        },
    })
}

/// Deviation statistics between the numeric and closed-form columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub max_abs_deviation: f64,
    /// Row index and swept value of the largest deviation.
    pub argmax_row: usize,
    pub argmax_param: f64,
    pub rms: f64,
}

pub fn compare_methods(r: &ScanResult) -> Result<Comparison, ScanError> {
    compare_columns(
        r,
        |row| row.p_numeric,
        "P_numeric",
        |row| row.p_closed,
        "P_closed",
    )
}

/// Same statistics for any two columns.
pub fn compare_columns(
    r: &ScanResult,
    left: impl Fn(&ScanRow) -> Option<f64>,
    left_name: &'static str,
    right: impl Fn(&ScanRow) -> Option<f64>,
    right_name: &'static str,
) -> Result<Comparison, ScanError> {
    let mut out = Comparison {
        max_abs_deviation: 0.0,
        argmax_row: 0,
        argmax_param: r.rows.first().map_or(f64::NAN, |row| row.param),
        rms: 0.0,
    };
    let mut sum_sq = 0.0;
    for (k, row) in r.rows.iter().enumerate() {
        let a = left(row).ok_or(ScanError::MissingColumn(left_name))?;
        let b = right(row).ok_or(ScanError::MissingColumn(right_name))?;
        let d = (a - b).abs();
        sum_sq += d * d;
        if d > out.max_abs_deviation {
            out.max_abs_deviation = d;
            out.argmax_row = k;
            out.argmax_param = row.param;
        }
    }
    out.rms = (sum_sq / r.rows.len().max(1) as f64).sqrt();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dip_spec(steps: usize) -> ScanSpec {
        ScanSpec::new(
            ModelSpec::GaussianPair {
                center: 0.0,
                sigma: 1.0,
                pump: Pump::Constant,
            },
            SweptParameter::Dz,
            SweepRange {
                min: -4.0,
                max: 4.0,
                steps,
            },
        )
    }

    #[test]
    fn sweep_values_hit_endpoints_and_centre() {
        let v: Vec<f64> = dip_spec(81).range.values().collect();
        assert_eq!(v.len(), 81);
        assert_eq!(v[0], -4.0);
        assert_eq!(v[40], 0.0);
        assert_eq!(v[80], 4.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let err = run_scan(&dip_spec(1)).unwrap_err();
        assert!(err.to_string().contains("steps must be ≥ 2"));
        let mut s = dip_spec(5);
        s.range.max = -5.0;
        assert!(matches!(
            run_scan(&s),
            Err(ScanError::InvalidSpec { key: "range", .. })
        ));
        let mut s = dip_spec(5);
        s.evaluation = Evaluation {
            numeric: false,
            closed_form: false,
        };
        assert!(run_scan(&s).is_err());
        let mut s = dip_spec(5);
        s.swept = SweptParameter::DeltaL;
        assert!(matches!(
            run_scan(&s),
            Err(ScanError::InvalidSpec { key: "swept", .. })
        ));
    }

    #[test]
    fn identical_columns_compare_to_zero() {
        let mut r = run_scan(&dip_spec(9)).unwrap();
        for row in &mut r.rows {
            row.p_closed = row.p_numeric;
        }
        let c = compare_methods(&r).unwrap();
        assert_eq!(c.max_abs_deviation, 0.0);
        assert_eq!(c.argmax_row, 0);
        assert_eq!(c.rms, 0.0);
    }

    #[test]
    fn missing_column_is_an_error() {
        let mut s = dip_spec(5);
        s.evaluation.numeric = false;
        let r = run_scan(&s).unwrap();
        assert!(r
            .rows
            .iter()
            .all(|row| row.p_numeric.is_none() && row.p_closed.is_some()));
        assert!(matches!(
            compare_methods(&r),
            Err(ScanError::MissingColumn("P_numeric"))
        ));
    }

    #[test]
    fn bell_common_delay_stays_trapped() {
        let mut s = ScanSpec::new(
            ModelSpec::Bell {
                omega_a: -1.0,
                omega_b: 2.0,
            },
            SweptParameter::Dz,
            SweepRange {
                min: -10.0,
                max: 10.0,
                steps: 21,
            },
        );
        s.delay_mode = DelayMode::Common;
        let r = run_scan(&s).unwrap();
        assert!(r.metadata.warnings.is_empty());
        for row in &r.rows {
            assert!((row.p_numeric.unwrap() - 1.0).abs() < 1e-12);
            assert!((row.p_closed.unwrap() - 1.0).abs() < 1e-12);
        }
        s.delay_mode = DelayMode::Relative;
        let r = run_scan(&s).unwrap();
        assert!(compare_methods(&r).unwrap().max_abs_deviation < 1e-12);
    }

    #[test]
    fn bell_grid_holds_both_frequencies() {
        for n in [3, 5, 9, 255, 257] {
            let g = bell_grid(-1.0, 2.0, n).unwrap();
            for w in [-1.0, 2.0] {
                assert!((g.omega(g.nearest_index(w)) - w).abs() < 1e-12, "n = {n}");
            }
        }
    }
}
