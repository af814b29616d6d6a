//! The `pdm-bgcs` command-line driver.
//!
//! Parameters come from an optional flat `key = value` file (`--config`, `#`
//! comments) overridden by flags. Exit codes: 0 success, 1 numerical or
//! contract failure, 2 configuration error.

pub mod figures;
pub mod table;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::bgcs::{make_state, DEFAULT_TRUNCATION, MAX_TRUNCATION};
use crate::model::{evaluate_model, integrate_orbit, OscillatorParams};
use crate::specfun::PrecisionConfig;
use crate::stats::summarize;
use figures::{figure_table, Figure};
use table::{Cell, Format, Table};
use verify::{run_suite, Status, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pdm-bgcs", version, about = "Position-dependent-mass oscillator numerics")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long = "lambda-prime", global = true, allow_hyphen_values = true)]
    pub lambda_prime: Option<f64>,
    #[arg(long = "z-re", global = true, allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    #[arg(long = "z-im", global = true, allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mass and potential on an x grid.
    Model {
        #[arg(long = "x-max", default_value_t = 5.0)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// RK4 orbit started at rest at `x = amplitude`.
    Orbit {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        amplitude: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v0: f64,
        /// Defaults to 1e-4 · 2π/α.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 50_000)]
        steps: usize,
    },
    /// Coherent-state coefficients.
    State,
    /// Figure data files.
    Figures {
        #[arg(value_enum)]
        which: Figure,
    },
    /// Moments, Mandel Q and g2 by both methods.
    Moments,
    /// Invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

/// Resolved and validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub lambda_explicit: bool,
    pub lambda_prime: Option<f64>,
    pub z: Option<Complex64>,
    pub trunc: usize,
    pub precision: PrecisionConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1.0,
            lambda: 0.25,
            lambda_explicit: false,
            lambda_prime: None,
            z: None,
            trunc: DEFAULT_TRUNCATION,
            precision: PrecisionConfig::default(),
            out: None,
            format: Format::Csv,
        }
    }
}

/// `λ'` used when the command needs a single value and none was given.
pub const DEFAULT_LAMBDA_PRIME: f64 = 0.9;

impl RunConfig {
    /// Explicit `--lambda-prime`, else `λ/(2α)` if `--lambda` was set, else 0.9.
    pub fn single_lambda_prime(&self) -> f64 {
        match self.lambda_prime {
            Some(l) => l,
            None if self.lambda_explicit => self.lambda / (2.0 * self.alpha),
            None => DEFAULT_LAMBDA_PRIME,
        }
    }

    pub fn single_z(&self) -> Complex64 {
        self.z.unwrap_or(Complex64::new(1.0, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

const CONFIG_KEYS: [&str; 9] = [
    "alpha",
    "lambda",
    "lambda-prime",
    "z-re",
    "z-im",
    "trunc",
    "rel-tol",
    "out",
    "format",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(ConfigError(format!("config line {}: unknown key '{k}'", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("config key '{key}': cannot parse '{v}'")))
}

impl CommonArgs {
    /// Fills unset flags from a config map.
    fn merge(mut self, file: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        for (k, v) in file {
            match k.as_str() {
                "alpha" if self.alpha.is_none() => self.alpha = Some(parse_value(k, v)?),
                "lambda" if self.lambda.is_none() => self.lambda = Some(parse_value(k, v)?),
                "lambda-prime" if self.lambda_prime.is_none() => {
                    self.lambda_prime = Some(parse_value(k, v)?)
                }
                "z-re" if self.z_re.is_none() => self.z_re = Some(parse_value(k, v)?),
                "z-im" if self.z_im.is_none() => self.z_im = Some(parse_value(k, v)?),
                "trunc" if self.trunc.is_none() => self.trunc = Some(parse_value(k, v)?),
                "rel-tol" if self.rel_tol.is_none() => self.rel_tol = Some(parse_value(k, v)?),
                "out" if self.out.is_none() => self.out = Some(PathBuf::from(v)),
                "format" if self.format.is_none() => {
                    self.format = Some(match v.as_str() {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(ConfigError(format!("config key 'format': '{v}'"))),
                    })
                }
                _ => {}
            }
        }
        Ok(self)
    }

    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let merged = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    ConfigError(format!("cannot read config {}: {e}", path.display()))
                })?;
                let file = parse_config_text(&text)?;
                self.clone().merge(&file)?
            }
            None => self,
        };
        let d = RunConfig::default();
        let alpha = merged.alpha.unwrap_or(d.alpha);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ConfigError(format!("alpha = {alpha}: must be positive")));
        }
        let lambda = merged.lambda.unwrap_or(d.lambda);
        if !lambda.is_finite() {
            return Err(ConfigError(format!("lambda = {lambda}: must be finite")));
        }
        if let Some(lp) = merged.lambda_prime {
            if !lp.is_finite() {
                return Err(ConfigError(format!("lambda-prime = {lp}: must be finite")));
            }
        }
        let z = match (merged.z_re, merged.z_im) {
            (None, None) => None,
            (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
        };
        if let Some(z) = z {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(ConfigError("z must be finite".into()));
            }
        }
        let trunc = merged.trunc.unwrap_or(d.trunc);
        if !(2..=MAX_TRUNCATION).contains(&trunc) {
            return Err(ConfigError(format!(
                "trunc = {trunc}: must lie in 2..={MAX_TRUNCATION}"
            )));
        }
        let precision = d.precision.with_rel_tol(merged.rel_tol.unwrap_or(d.precision.rel_tol));
        precision
            .validate()
            .map_err(|e| ConfigError(format!("rel-tol: {e}")))?;
        Ok(RunConfig {
            alpha,
            lambda,
            lambda_explicit: merged.lambda.is_some(),
            lambda_prime: merged.lambda_prime,
            z,
            trunc,
            precision,
            out: merged.out,
            format: merged.format.unwrap_or(d.format),
        })
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn emit(table: &Table, cfg: &RunConfig, stdout: &mut dyn Write) -> std::io::Result<()> {
    let text = table.render(cfg.format);
    match &cfg.out {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Writes one figure into `dir`, or `<name>.error.log` on failure.
pub fn emit_figure(which: Figure, cfg: &RunConfig, dir: &Path) -> Result<PathBuf, String> {
    let name = which.name();
    let io = |e: std::io::Error| format!("{}: {e}", dir.display());
    fs::create_dir_all(dir).map_err(io)?;
    match figure_table(which, cfg) {
        Ok(t) => {
            let path = dir.join(format!("{name}.{}", extension(cfg.format)));
            fs::write(&path, t.render(cfg.format)).map_err(io)?;
            Ok(path)
        }
        Err(e) => {
            let msg = format!("{name}: {e}\n");
            fs::write(dir.join(format!("{name}.error.log")), &msg).map_err(io)?;
            Err(msg)
        }
    }
}

fn run_command(cmd: &Command, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    let num = |e: crate::Error| e.to_string();
    match cmd {
        Command::Model { x_max, points } => {
            if *points < 2 || !(*x_max > 0.0) {
                return Ok(EXIT_CONFIG);
            }
            let p = OscillatorParams::new(cfg.alpha, cfg.lambda).map_err(num)?;
            let reach = x_max.min(0.999 * p.domain_halfwidth);
            let mut t = Table::new(vec!["x", "mass", "V"]);
            for k in 0..*points {
                let x = -reach + 2.0 * reach * k as f64 / (*points - 1) as f64;
                let m = evaluate_model(&p, x).map_err(num)?;
                t.push(vec![x.into(), m.mass.into(), m.potential.into()]);
            }
            emit(&t, cfg, stdout).map_err(io)?;
        }
        Command::Orbit {
            amplitude,
            v0,
            dt,
            steps,
        } => {
            let p = OscillatorParams::new(cfg.alpha, cfg.lambda).map_err(num)?;
            let dt = dt.unwrap_or(1e-4 * 2.0 * std::f64::consts::PI / cfg.alpha);
            let o = integrate_orbit(&p, *amplitude, *v0, dt, *steps).map_err(num)?;
            let mut t = Table::new(vec!["quantity", "value"]);
            let rows: [(&str, f64); 5] = [
                ("amplitude", o.amplitude),
                ("phase", o.phase),
                ("measured_omega", o.measured_omega.unwrap_or(f64::NAN)),
                ("predicted_omega", p.omega(o.amplitude)),
                ("energy_drift", o.energy_drift),
            ];
            for (k, v) in rows {
                t.push(vec![k.into(), v.into()]);
            }
            emit(&t, cfg, stdout).map_err(io)?;
        }
        Command::State => {
            let s = make_state(cfg.single_z(), cfg.single_lambda_prime(), cfg.trunc, &cfg.precision)
                .map_err(num)?;
            let mut t = Table::new(vec!["n", "re_c", "im_c", "abs_c_sq"]);
            for (n, c) in s.coeffs.iter().enumerate() {
                t.push(vec![n.into(), c.re.into(), c.im.into(), c.norm_sqr().into()]);
            }
            emit(&t, cfg, stdout).map_err(io)?;
        }
        Command::Moments => {
            let s = summarize(cfg.single_z(), cfg.single_lambda_prime(), &cfg.precision)
                .map_err(num)?;
            let mut t = Table::new(vec!["quantity", "closed", "direct"]);
            for (k, d) in [
                ("mean", s.mean),
                ("second_moment", s.second_moment),
                ("variance", s.variance),
                ("mandel_q", s.mandel_q),
                ("g2", s.g2),
            ] {
                let closed: Cell = d.closed.map(Cell::from).unwrap_or_else(|| "none".into());
                t.push(vec![k.into(), closed, d.direct.into()]);
            }
            t.push(vec![
                "cross_check_err".into(),
                "none".into(),
                s.cross_check_err.into(),
            ]);
            emit(&t, cfg, stdout).map_err(io)?;
        }
        Command::Figures { which } => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let path = emit_figure(*which, cfg, &dir)?;
            writeln!(stdout, "{}", path.display()).map_err(io)?;
        }
        Command::Verify { suite } => {
            let checks = run_suite(*suite, cfg);
            let t = verify::to_table(&checks);
            emit(&t, cfg, stdout).map_err(io)?;
            if checks.iter().any(|c| c.status == Status::Fail) {
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let cfg = match cli.common.resolve() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "configuration error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Command::Model { x_max, points } = &cli.command {
        if *points < 2 || !(*x_max > 0.0) {
            let _ = writeln!(
                stderr,
                "configuration error: model needs points >= 2 and x-max > 0"
            );
            return EXIT_CONFIG;
        }
    }
    match run_command(&cli.command, &cfg, stdout) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {}", msg.trim_end());
            EXIT_FAILURE
        }
    }
}
