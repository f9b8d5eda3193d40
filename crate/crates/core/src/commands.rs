//! Command implementations behind the `dissipative-fall` binary.
//!
//! Each command computes everything first and returns the files to write;
//! the caller does all I/O from a single place.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{ConfigError, ConfigFile};
use crate::dynamics::{constant_of_motion, integrate, Formulation, MediumParams, PhaseState};
use crate::error::Result;
use crate::output::svg::{Plot, Series};
use crate::output::Table;
use crate::quantum::{spectrum, w_oracle, BouncerBasis};
use crate::specfun::QuadratureSpec;
use crate::statmech::{
    heat_capacity_oracle, internal_energy_oracle, log_partition_oracle, log_spaced, sweep_beta, thermo_point,
    EnsembleParams, SweepTable, SweepTolerances,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<OutputFile>,
    /// Human-readable summary lines for stdout.
    pub messages: Vec<String>,
    /// False maps to exit code 1.
    pub success: bool,
}

fn file(name: impl Into<String>, contents: String) -> OutputFile {
    OutputFile { name: name.into(), contents }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

/// Table file in the requested format, named `{stem}.csv` or `{stem}.json`.
fn table_file(stem: &str, format: OutputFormat, table: &Table, meta: serde_json::Value) -> OutputFile {
    match format {
        OutputFormat::Csv => file(format!("{stem}.csv"), table.to_csv()),
        OutputFormat::Json => {
            let mut doc = meta;
            doc["rows"] = table.to_json();
            file(format!("{stem}.json"), pretty(&doc))
        }
    }
}

/// Every key a config file may contain.
pub const CONFIG_KEYS: &[&str] = &[
    "out_dir",
    "format",
    "m",
    "g",
    "alpha",
    "x0",
    "v0",
    "t_end",
    "tol",
    "drift_threshold",
    "log_diagnostics",
    "hbar",
    "n_max",
    "oracle_tolerance",
    "n1",
    "n2",
    "m1",
    "m2",
    "l",
    "height",
    "beta",
    "k_b",
    "h_planck",
    "beta_min",
    "beta_max",
    "points",
    "quadrature",
];

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub params: MediumParams,
    pub initial: PhaseState,
    pub t_end: f64,
    pub tol: f64,
    /// Largest acceptable relative drift of K1 and K2.
    pub drift_threshold: f64,
    /// Require the log constant K1 to be defined along the whole run.
    pub log_diagnostics: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            params: MediumParams { m: 1.0, g: 1.0, alpha: 0.25 },
            initial: PhaseState { x: 10.0, v: 0.0 },
            t_end: 2.0,
            tol: 1e-10,
            drift_threshold: 1e-8,
            log_diagnostics: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SimulateFlags {
    pub m: Option<f64>,
    pub g: Option<f64>,
    pub alpha: Option<f64>,
    pub x0: Option<f64>,
    pub v0: Option<f64>,
    pub t_end: Option<f64>,
    pub tol: Option<f64>,
    pub drift_threshold: Option<f64>,
    pub log_diagnostics: Option<bool>,
}

impl SimulateConfig {
    pub fn resolve(flags: &SimulateFlags, cfg: &ConfigFile) -> std::result::Result<Self, ConfigError> {
        let d = Self::default();
        Ok(Self {
            params: MediumParams {
                m: cfg.resolve(flags.m, "m", d.params.m)?,
                g: cfg.resolve(flags.g, "g", d.params.g)?,
                alpha: cfg.resolve(flags.alpha, "alpha", d.params.alpha)?,
            },
            initial: PhaseState {
                x: cfg.resolve(flags.x0, "x0", d.initial.x)?,
                v: cfg.resolve(flags.v0, "v0", d.initial.v)?,
            },
            t_end: cfg.resolve(flags.t_end, "t_end", d.t_end)?,
            tol: cfg.resolve(flags.tol, "tol", d.tol)?,
            drift_threshold: cfg.resolve(flags.drift_threshold, "drift_threshold", d.drift_threshold)?,
            log_diagnostics: cfg.resolve(flags.log_diagnostics, "log_diagnostics", d.log_diagnostics)?,
        })
    }
}

pub fn cmd_simulate(cfg: &SimulateConfig, format: OutputFormat) -> Result<CommandOutput> {
    let p = cfg.params;
    p.validate()?;
    if cfg.log_diagnostics && !p.is_frictionless() {
        p.check_log_domain(cfg.initial.v)?;
    }
    let traj = integrate(&p, cfg.initial, cfg.t_end, cfg.tol)?;
    if cfg.log_diagnostics && traj.k1_drift.is_none() {
        let speed = traj.samples.iter().map(|s| s.state.v.abs()).fold(0.0, f64::max);
        return Err(crate::Error::TerminalSpeed { speed, terminal: p.terminal_speed() });
    }

    let mut table = Table::new(&["t", "x", "v", "k1", "k2"]);
    for s in &traj.samples {
        let k1 = constant_of_motion(Formulation::Log, &p, &s.state).unwrap_or(f64::NAN);
        let k2 = constant_of_motion(Formulation::Exp, &p, &s.state)?;
        table.push(vec![s.t.into(), s.state.x.into(), s.state.v.into(), k1.into(), k2.into()]);
    }
    let drift = traj.max_drift();
    let success = drift <= cfg.drift_threshold;
    let k1_text = traj.k1_drift.map_or("skipped (|v| reaches terminal speed)".to_string(), |d| format!("{d:.3e}"));
    let messages = vec![
        format!("simulate: {} steps to t = {}", traj.samples.len() - 1, traj.t_end()),
        format!("K1 drift {k1_text}, K2 drift {:.3e} (threshold {:.1e})", traj.k2_drift, cfg.drift_threshold),
    ];
    let meta = json!({
        "command": "simulate",
        "config": cfg,
        "k1_drift": traj.k1_drift,
        "k2_drift": traj.k2_drift,
        "passed": success,
    });
    let plot = Plot {
        title: format!("Fall with quadratic drag, alpha = {}", p.alpha),
        x_label: "t".into(),
        y_label: "x, v".into(),
        log_x: false,
        log_y: false,
        series: vec![
            Series::line("x(t)", traj.samples.iter().map(|s| (s.t, s.state.x))),
            Series::line("v(t)", traj.samples.iter().map(|s| (s.t, s.state.v))),
        ],
    };
    Ok(CommandOutput {
        files: vec![table_file("trajectory", format, &table, meta), file("trajectory.svg", plot.render())],
        messages,
        success,
    })
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub params: MediumParams,
    pub hbar: f64,
    pub n_max: usize,
    /// Relative closed-form vs quadrature deviation allowed per level.
    pub oracle_tolerance: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { params: MediumParams { m: 1.0, g: 1.0, alpha: 0.01 }, hbar: 1.0, n_max: 10, oracle_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SpectrumFlags {
    pub m: Option<f64>,
    pub g: Option<f64>,
    pub alpha: Option<f64>,
    pub hbar: Option<f64>,
    pub n_max: Option<usize>,
    pub oracle_tolerance: Option<f64>,
}

impl SpectrumConfig {
    pub fn resolve(flags: &SpectrumFlags, cfg: &ConfigFile) -> std::result::Result<Self, ConfigError> {
        let d = Self::default();
        Ok(Self {
            params: MediumParams {
                m: cfg.resolve(flags.m, "m", d.params.m)?,
                g: cfg.resolve(flags.g, "g", d.params.g)?,
                alpha: cfg.resolve(flags.alpha, "alpha", d.params.alpha)?,
            },
            hbar: cfg.resolve(flags.hbar, "hbar", d.hbar)?,
            n_max: cfg.resolve(flags.n_max, "n_max", d.n_max)?,
            oracle_tolerance: cfg.resolve(flags.oracle_tolerance, "oracle_tolerance", d.oracle_tolerance)?,
        })
    }
}

/// |a - b| / |b|, or |a - b| when b is zero.
fn deviation(closed: f64, oracle: f64) -> f64 {
    let d = (closed - oracle).abs();
    if oracle == 0.0 {
        d
    } else {
        d / oracle.abs()
    }
}

pub fn cmd_spectrum(cfg: &SpectrumConfig, format: OutputFormat) -> Result<CommandOutput> {
    let basis = BouncerBasis::new(cfg.params, cfg.hbar, (cfg.n_max + 1).min(crate::specfun::MAX_AIRY_ZERO))?;
    let lines = spectrum(&basis, cfg.n_max)?;
    let mut table = Table::new(&[
        "n",
        "z_n",
        "e0",
        "de_log",
        "de_exp",
        "dev_log",
        "dev_exp",
        "e_total_log",
        "e_total_exp",
        "splitting",
        "relative_splitting",
        "spacing",
        "shift_to_spacing",
        "first_order_valid",
    ]);
    let mut worst: f64 = 0.0;
    for l in &lines {
        let dev_log = deviation(l.de_log, w_oracle(&basis, Formulation::Log, l.n)?);
        let dev_exp = deviation(l.de_exp, w_oracle(&basis, Formulation::Exp, l.n)?);
        worst = worst.max(dev_log).max(dev_exp);
        table.push(vec![
            l.n.into(),
            l.z_n.into(),
            l.e0.into(),
            l.de_log.into(),
            l.de_exp.into(),
            dev_log.into(),
            dev_exp.into(),
            l.e_total_log.into(),
            l.e_total_exp.into(),
            (l.de_exp - l.de_log).into(),
            l.splitting.into(),
            l.spacing.into(),
            l.shift_to_spacing.into(),
            l.first_order_valid.into(),
        ]);
    }
    let success = worst <= cfg.oracle_tolerance;
    let invalid: Vec<String> = lines.iter().filter(|l| !l.first_order_valid).map(|l| l.n.to_string()).collect();
    let mut messages = vec![
        format!("spectrum: {} levels, l_g = {:.6e}", lines.len(), basis.l_g),
        format!("largest oracle deviation {worst:.3e} (tolerance {:.1e})", cfg.oracle_tolerance),
    ];
    if !invalid.is_empty() {
        messages.push(format!("first-order shift exceeds 10% of level spacing for n = {}", invalid.join(", ")));
    }
    let meta = json!({
        "command": "spectrum",
        "config": cfg,
        "l_g": basis.l_g,
        "max_oracle_deviation": worst,
        "passed": success,
    });

    // Level diagram: three columns of short bars.
    let bars = |col: f64, f: &dyn Fn(&crate::quantum::SpectrumLine) -> f64| {
        lines.iter().map(|l| vec![(col, f(l)), (col + 0.8, f(l))]).collect::<Vec<_>>()
    };
    let plot = Plot {
        title: "Bouncer levels".into(),
        x_label: "unperturbed | log | exp".into(),
        y_label: "E".into(),
        log_x: false,
        log_y: false,
        series: vec![
            Series::segments("E0", bars(0.0, &|l| l.e0)),
            Series::segments("E0 + dE_log", bars(1.0, &|l| l.e_total_log)),
            Series::segments("E0 + dE_exp", bars(2.0, &|l| l.e_total_exp)),
        ],
    };
    Ok(CommandOutput {
        files: vec![table_file("spectrum", format, &table, meta), file("spectrum.svg", plot.render())],
        messages,
        success,
    })
}

// ---------------------------------------------------------------- thermo / sweep

#[derive(Debug, Clone, Copy, Default)]
pub struct EnsembleFlags {
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub alpha: Option<f64>,
    pub g: Option<f64>,
    pub l: Option<f64>,
    pub height: Option<f64>,
    pub beta: Option<f64>,
    pub k_b: Option<f64>,
    pub h_planck: Option<f64>,
}

pub fn resolve_ensemble(flags: &EnsembleFlags, cfg: &ConfigFile) -> std::result::Result<EnsembleParams, ConfigError> {
    let d = EnsembleParams::default();
    Ok(EnsembleParams {
        n1: cfg.resolve(flags.n1, "n1", d.n1)?,
        n2: cfg.resolve(flags.n2, "n2", d.n2)?,
        m1: cfg.resolve(flags.m1, "m1", d.m1)?,
        m2: cfg.resolve(flags.m2, "m2", d.m2)?,
        alpha: cfg.resolve(flags.alpha, "alpha", d.alpha)?,
        g: cfg.resolve(flags.g, "g", d.g)?,
        l: cfg.resolve(flags.l, "l", d.l)?,
        height: cfg.resolve(flags.height, "height", d.height)?,
        beta: cfg.resolve(flags.beta, "beta", d.beta)?,
        k_b: cfg.resolve(flags.k_b, "k_b", d.k_b)?,
        h_planck: cfg.resolve(flags.h_planck, "h_planck", d.h_planck)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoConfig {
    pub ensemble: EnsembleParams,
    pub tolerances: SweepTolerances,
}

impl Default for ThermoConfig {
    fn default() -> Self {
        Self { ensemble: EnsembleParams { beta: 1000.0, ..Default::default() }, tolerances: SweepTolerances::default() }
    }
}

/// Both formulations at one β, each quantity next to its oracle.
pub fn cmd_thermo(cfg: &ThermoConfig, format: OutputFormat) -> Result<CommandOutput> {
    let ens = &cfg.ensemble;
    ens.validate()?;
    let tol = &cfg.tolerances;
    let mut table = Table::new(&[
        "formulation",
        "beta",
        "log_z",
        "log_z_oracle",
        "u",
        "u_oracle",
        "c_v",
        "c_v_oracle",
        "dev_log_z",
        "dev_u",
        "dev_c_v",
        "oracle_flag",
    ]);
    let mut success = true;
    let mut messages = vec![format!("thermo: beta = {}, alpha = {}", ens.beta, ens.alpha)];
    for form in Formulation::ALL {
        let p = thermo_point(form, ens)?;
        let zo = if tol.quadrature { log_partition_oracle(form, ens, &QuadratureSpec::default())? } else { f64::NAN };
        let uo = internal_energy_oracle(form, ens)?;
        let co = heat_capacity_oracle(form, ens)?;
        let (dz, du, dc) = ((p.log_z - zo).abs(), deviation(p.u, uo), deviation(p.c_v, co));
        let flag = (tol.quadrature && !(dz <= tol.log_z_abs)) || !(du <= tol.u_rel) || !(dc <= tol.cv_rel);
        success &= !flag;
        messages.push(format!("{form}: ln Z = {:.12e}, U = {:.12e}, C_V = {:.12e}", p.log_z, p.u, p.c_v));
        table.push(vec![
            form.label().into(),
            ens.beta.into(),
            p.log_z.into(),
            zo.into(),
            p.u.into(),
            uo.into(),
            p.c_v.into(),
            co.into(),
            dz.into(),
            du.into(),
            dc.into(),
            flag.into(),
        ]);
    }
    let meta = json!({ "command": "thermo", "config": cfg, "passed": success });
    Ok(CommandOutput { files: vec![table_file("thermo", format, &table, meta)], messages, success })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub template: EnsembleParams,
    pub beta_min: f64,
    pub beta_max: f64,
    pub points: usize,
    pub tolerances: SweepTolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            template: EnsembleParams::default(),
            beta_min: 1.0,
            beta_max: 1e4,
            points: 64,
            tolerances: SweepTolerances::default(),
        }
    }
}

pub fn sweep_table(t: &SweepTable) -> Table {
    let mut table = Table::new(&[
        "beta",
        "log_z1",
        "log_z2",
        "u1",
        "u2",
        "cv1",
        "cv2",
        "delta_cv",
        "abs_delta_cv",
        "dev_log_z1",
        "dev_log_z2",
        "dev_u1",
        "dev_u2",
        "dev_cv1",
        "dev_cv2",
        "oracle_flag",
    ]);
    for r in &t.rows {
        table.push(vec![
            r.beta.into(),
            r.log_z1.into(),
            r.log_z2.into(),
            r.u1.into(),
            r.u2.into(),
            r.cv1.into(),
            r.cv2.into(),
            r.delta_cv.into(),
            r.abs_delta_cv.into(),
            r.dev_log_z1.into(),
            r.dev_log_z2.into(),
            r.dev_u1.into(),
            r.dev_u2.into(),
            r.dev_cv1.into(),
            r.dev_cv2.into(),
            r.oracle_flag.into(),
        ]);
    }
    table
}

/// One line per crossover, naming the formulation with the larger C_V below β*.
pub fn describe_crossovers(t: &SweepTable) -> Vec<String> {
    if t.crossovers.is_empty() {
        return vec!["no sign change of cv2 - cv1 on the grid".into()];
    }
    t.crossovers
        .iter()
        .map(|c| {
            let (below, above) = if c.exp_above_below { ("exp", "log") } else { ("log", "exp") };
            format!(
                "crossover at beta* = {:.6e} (bracket [{:.4e}, {:.4e}]): {below} C_V higher below, {above} above",
                c.beta_star, c.beta_lo, c.beta_hi
            )
        })
        .collect()
}

pub fn cmd_sweep(cfg: &SweepConfig, format: OutputFormat) -> Result<CommandOutput> {
    let grid = log_spaced(cfg.beta_min, cfg.beta_max, cfg.points)?;
    let t = sweep_beta(&cfg.template, &grid, &cfg.tolerances)?;
    let table = sweep_table(&t);
    let mut messages = vec![format!(
        "sweep: {} points on beta in [{}, {}], {} flagged",
        t.rows.len(),
        cfg.beta_min,
        cfg.beta_max,
        t.flagged_points
    )];
    messages.extend(describe_crossovers(&t));
    messages.push(format!("|delta C_V| increasing over the high-beta end: {}", t.increasing_at_high_beta));
    let success = t.flagged_points == 0;

    let mut files = vec![table_file(
        "sweep",
        format,
        &table,
        json!({
            "command": "sweep",
            "config": cfg,
            "crossovers": t.crossovers,
            "increasing_at_high_beta": t.increasing_at_high_beta,
            "flagged_points": t.flagged_points,
            "passed": success,
        }),
    )];
    if format == OutputFormat::Csv {
        let mut cross = Table::new(&["beta_lo", "beta_hi", "beta_star", "higher_below"]);
        for c in &t.crossovers {
            let higher = if c.exp_above_below { "exp" } else { "log" };
            cross.push(vec![c.beta_lo.into(), c.beta_hi.into(), c.beta_star.into(), higher.into()]);
        }
        files.push(file("crossovers.csv", cross.to_csv()));
    }
    let plot = Plot {
        title: format!(
            "|C_V(log) - C_V(exp)|, alpha = {}, m1/m2 = {}",
            cfg.template.alpha,
            cfg.template.m1 / cfg.template.m2
        ),
        x_label: "beta".into(),
        y_label: "|delta C_V|".into(),
        log_x: true,
        log_y: true,
        series: vec![Series::line("|delta C_V|", t.rows.iter().map(|r| (r.beta, r.abs_delta_cv)))],
    };
    files.push(file("sweep.svg", plot.render()));
    Ok(CommandOutput { files, messages, success })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulate_defaults_conserve() {
        let out = cmd_simulate(&SimulateConfig::default(), OutputFormat::Csv).unwrap();
        assert!(out.success);
        let csv = &out.files[0].contents;
        assert!(csv.starts_with("t,x,v,k1,k2\n"));
        assert_eq!(out.files[1].name, "trajectory.svg");
        assert_eq!(csv, &cmd_simulate(&SimulateConfig::default(), OutputFormat::Csv).unwrap().files[0].contents);
    }

    #[test]
    fn simulate_frictionless_is_parabola() {
        let cfg = SimulateConfig {
            params: MediumParams { m: 1.0, g: 1.0, alpha: 0.0 },
            initial: PhaseState { x: 10.0, v: 1.0 },
            ..Default::default()
        };
        let out = cmd_simulate(&cfg, OutputFormat::Json).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.files[0].contents).unwrap();
        for row in doc["rows"].as_array().unwrap() {
            let t = row["t"].as_f64().unwrap();
            let x = row["x"].as_f64().unwrap();
            assert!((x - (10.0 + t - 0.5 * t * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn simulate_rejects_supercritical_speed_with_log_diagnostics() {
        let cfg =
            SimulateConfig { initial: PhaseState { x: 0.0, v: -3.0 }, log_diagnostics: true, ..Default::default() };
        assert!(matches!(cmd_simulate(&cfg, OutputFormat::Csv), Err(crate::Error::TerminalSpeed { .. })));
    }

    #[test]
    fn spectrum_columns_are_consistent() {
        let out = cmd_spectrum(&SpectrumConfig::default(), OutputFormat::Csv).unwrap();
        assert!(out.success, "{:?}", out.messages);
        let lines: Vec<&str> = out.files[0].contents.lines().collect();
        assert_eq!(lines.len(), 11);
        let header: Vec<&str> = lines[0].split(',').collect();
        let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
        for line in &lines[1..] {
            let f: Vec<&str> = line.split(',').collect();
            let v = |name: &str| f[col(name)].parse::<f64>().unwrap();
            assert_eq!(v("splitting"), v("de_exp") - v("de_log"));
            assert!(v("dev_log") < 1e-6 && v("dev_exp") < 1e-6);
        }
        let zero =
            SpectrumConfig { params: MediumParams { m: 1.0, g: 1.0, alpha: 0.0 }, n_max: 3, ..Default::default() };
        let out = cmd_spectrum(&zero, OutputFormat::Json).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.files[0].contents).unwrap();
        for row in doc["rows"].as_array().unwrap() {
            assert_eq!(row["de_log"].as_f64(), Some(0.0));
            assert_eq!(row["de_exp"].as_f64(), Some(0.0));
        }
    }

    #[test]
    fn thermo_agrees_with_oracles() {
        let out = cmd_thermo(&ThermoConfig::default(), OutputFormat::Csv).unwrap();
        assert!(out.success, "{:?}", out.messages);
        assert_eq!(out.files[0].contents.lines().count(), 3);
    }

    #[test]
    fn sweep_at_tiny_alpha_has_no_difference() {
        let cfg = SweepConfig {
            template: EnsembleParams { alpha: 1e-8, ..Default::default() },
            points: 6,
            tolerances: SweepTolerances { quadrature: false, ..Default::default() },
            ..Default::default()
        };
        let out = cmd_sweep(&cfg, OutputFormat::Csv).unwrap();
        let csv = &out.files[0].contents;
        let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        let i = header.iter().position(|h| *h == "abs_delta_cv").unwrap();
        for line in csv.lines().skip(1) {
            assert!(line.split(',').nth(i).unwrap().parse::<f64>().unwrap() < 1e-6);
        }
        assert!(out.files.iter().any(|f| f.name == "sweep.svg"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<OutputFormat>(), Ok(OutputFormat::Json));
        assert!("xml".parse::<OutputFormat>().is_err());
        assert_eq!(OutputFormat::Csv.to_string(), "csv");
    }
}
