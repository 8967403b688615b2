//! Command-line front end for the cubic-nef library.
//!
//! Subcommands: `verify` (run the check suite), `posterior` (conjugate
//! update on a data file), `sample` (draw from the prior), `plot-data`
//! (CSV plot columns), `catalog` (list the implemented families).
//!
//! Configuration comes from a JSON file (`--config`), overridden by flags;
//! every field has a documented default, so `verify` runs with zero
//! arguments on the inverse-Gaussian-type family at `beta = 1`,
//! `(t, m0) = (2, 1)`.
//!
//! Exit codes: 0 all checks pass / command succeeded, 1 at least one check
//! failed, 2 usage or configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_nef::family::{make_model, CumulantModel, FamilySpec, QuadraticKind};
use cubic_nef::numerics::{log_end_grid, uniform_grid, Tolerance};
use cubic_nef::posterior::{
    closed_form_functional, posterior_functional_summary_with, update_summary, DataBatch,
    PosteriorState,
};
use cubic_nef::prior::{normalize_with, HyperParams, PriorKind};
use cubic_nef::tbeta::{m_beta_set, theta_beta_set};
use cubic_nef::theorems::{verify_suite, CheckReport, VerifyConfig};
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

/// Default seed for every random draw; override with `--seed` or the
/// `CUBIC_NEF_SEED` environment variable.
const DEFAULT_SEED: u64 = 42;
const DEFAULT_FAMILY: &str = "inverse-gaussian";
const DEFAULT_BETA: f64 = 1.0;
const DEFAULT_T: f64 = 2.0;
const DEFAULT_M0: f64 = 1.0;
const DEFAULT_GRID_SIZE: usize = 200;

#[derive(Parser)]
#[command(
    name = "cubic-nef",
    version,
    about = "Verification suites, conjugate posterior updates, prior sampling, and \
             plot data for natural exponential families with cubic variance functions",
    after_help = "Defaults: --family inverse-gaussian --beta 1 --t 2 --m0 1 --seed 42 \
                  --format json, grid size 200. CUBIC_NEF_SEED overrides the default \
                  seed when --seed is absent. Identical configuration and seed produce \
                  byte-identical output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    /// JSON configuration file; flags override its fields
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Family: gaussian | poisson | gamma[(shape)] | binomial[(trials)] |
    /// negative-binomial[(successes)] | hyperbolic | inverse-gaussian.
    /// A catalog name with a nonzero --beta selects the transported image
    /// of that base
    #[arg(long, global = true, value_name = "NAME")]
    family: Option<String>,
    /// Transport and prior parameter
    #[arg(long, global = true, value_name = "X")]
    beta: Option<f64>,
    /// Prior weight, must be positive
    #[arg(long, global = true, value_name = "X")]
    t: Option<f64>,
    /// Prior mean parameter
    #[arg(long, global = true, value_name = "X")]
    m0: Option<f64>,
    /// Seed for random draws
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Report format (plot-data is always CSV)
    #[arg(long, global = true, value_enum, value_name = "FMT")]
    format: Option<OutputFormat>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite; exit 0 iff every check passes
    Verify,
    /// Conjugate posterior update from a file of newline-delimited decimal
    /// observations
    Posterior {
        /// Data file, one observation per line
        data: PathBuf,
    },
    /// Draw from the generalized natural prior
    Sample {
        /// Number of draws
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Emit plot columns (variance, prior densities, posterior functional)
    /// as CSV
    PlotData,
    /// List the implemented families
    Catalog,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// JSON configuration file schema. Every field is optional; omitted fields
/// fall back to flag values or the documented defaults.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    family: Option<String>,
    beta: Option<f64>,
    hyper: HyperConfig,
    tolerances: TolConfig,
    seed: Option<u64>,
    grid_size: Option<usize>,
    output_format: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct HyperConfig {
    t: Option<f64>,
    m0: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct TolConfig {
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
    max_subdivisions: Option<usize>,
}

/// Fully resolved run configuration.
struct Resolved {
    family: FamilySpec,
    model: CumulantModel,
    beta: f64,
    t: f64,
    m0: f64,
    tol: Tolerance,
    seed: u64,
    grid_size: usize,
    format: OutputFormat,
    out: Option<PathBuf>,
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("configuration error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let resolved = match resolve(&cli.overrides) {
        Ok(r) => r,
        Err(msg) => return config_error(msg),
    };
    let result = match &cli.command {
        Command::Verify => cmd_verify(&resolved),
        Command::Posterior { data } => cmd_posterior(&resolved, data),
        Command::Sample { count } => cmd_sample(&resolved, *count),
        Command::PlotData => cmd_plotdata(&resolved),
        Command::Catalog => cmd_catalog(&resolved),
    };
    match result {
        Ok(code) => code,
        Err(msg) => config_error(msg),
    }
}

/// Merge defaults, configuration file, environment, and flags
/// (flag > environment > file > default) and validate the result.
fn resolve(ov: &Overrides) -> Result<Resolved, String> {
    let file: FileConfig = match &ov.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
            serde_json::from_str(&text)
                .map_err(|e| format!("cannot parse config file {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let env_seed = match std::env::var("CUBIC_NEF_SEED") {
        Ok(s) => Some(
            s.parse::<u64>()
                .map_err(|_| format!("CUBIC_NEF_SEED is not a 64-bit unsigned integer: {s:?}"))?,
        ),
        Err(_) => None,
    };

    let family_name = ov
        .family
        .clone()
        .or(file.family)
        .unwrap_or_else(|| DEFAULT_FAMILY.to_string());
    let beta = ov.beta.or(file.beta).unwrap_or(DEFAULT_BETA);
    let t = ov.t.or(file.hyper.t).unwrap_or(DEFAULT_T);
    let m0 = ov.m0.or(file.hyper.m0).unwrap_or(DEFAULT_M0);
    let seed = ov.seed.or(env_seed).or(file.seed).unwrap_or(DEFAULT_SEED);
    let grid_size = file.grid_size.unwrap_or(DEFAULT_GRID_SIZE);
    let format = match ov.format {
        Some(f) => f,
        None => match file.output_format.as_deref() {
            None | Some("json") => OutputFormat::Json,
            Some("csv") => OutputFormat::Csv,
            Some(other) => {
                return Err(format!(
                    "output_format must be \"json\" or \"csv\", got {other:?}"
                ))
            }
        },
    };

    if !beta.is_finite() {
        return Err(format!("beta must be finite, got {beta}"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(format!("violated invariant t > 0: got t = {t}"));
    }
    if !m0.is_finite() {
        return Err(format!("m0 must be finite, got {m0}"));
    }
    if grid_size < 8 || grid_size > 100_000 {
        return Err(format!("grid_size must be in [8, 100000], got {grid_size}"));
    }
    let tol = Tolerance::new(
        file.tolerances.abs_tol.unwrap_or(1e-10),
        file.tolerances.rel_tol.unwrap_or(1e-10),
        file.tolerances.max_subdivisions.unwrap_or(2000),
    )
    .map_err(|e| e.to_string())?;

    let family = parse_family(&family_name, beta)?;
    let model = make_model(&family).map_err(|e| e.to_string())?;
    // Surface inadmissible hyperparameters as configuration errors up front.
    HyperParams::new(t, m0, beta, &model).map_err(|e| e.to_string())?;

    Ok(Resolved {
        family,
        model,
        beta,
        t,
        m0,
        tol,
        seed,
        grid_size,
        format,
        out: ov.out.clone(),
    })
}

/// Parse a family descriptor. A bare catalog name with nonzero `beta`
/// selects the transported image of that base, so `--family gaussian
/// --beta 0.5` verifies the cubic image rather than the quadratic base.
fn parse_family(name: &str, beta: f64) -> Result<FamilySpec, String> {
    let trimmed = name.trim();
    let (head, param) = match trimmed.find('(') {
        Some(open) => {
            let close = trimmed
                .rfind(')')
                .filter(|&c| c == trimmed.len() - 1 && c > open)
                .ok_or_else(|| format!("unbalanced parameter parentheses in {trimmed:?}"))?;
            (&trimmed[..open], Some(&trimmed[open + 1..close]))
        }
        None => (trimmed, None),
    };
    let parse_f64 = |p: &str| -> Result<f64, String> {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse family parameter {p:?} as a number"))
    };
    let kind = match head {
        "gaussian" => QuadraticKind::Gaussian,
        "poisson" => QuadraticKind::Poisson,
        "gamma" => QuadraticKind::Gamma {
            shape: param.map(parse_f64).transpose()?.unwrap_or(1.0),
        },
        "binomial" => QuadraticKind::Binomial {
            trials: match param {
                Some(p) => p
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| format!("cannot parse trial count {p:?} as a positive integer"))?,
                None => 4,
            },
        },
        "negative-binomial" => QuadraticKind::NegativeBinomial {
            successes: param.map(parse_f64).transpose()?.unwrap_or(2.0),
        },
        "hyperbolic" => QuadraticKind::Hyperbolic,
        "inverse-gaussian" => {
            if param.is_some() {
                return Err("family inverse-gaussian takes no parameter".into());
            }
            return Ok(FamilySpec::InverseGaussian);
        }
        other => {
            return Err(format!(
                "unknown family {other:?}; valid names: gaussian, poisson, gamma(shape), \
                 binomial(trials), negative-binomial(successes), hyperbolic, inverse-gaussian"
            ))
        }
    };
    match kind {
        QuadraticKind::Gaussian | QuadraticKind::Poisson | QuadraticKind::Hyperbolic
            if param.is_some() =>
        {
            return Err(format!("family {head} takes no parameter"));
        }
        _ => {}
    }
    if beta == 0.0 {
        Ok(FamilySpec::Quadratic(kind))
    } else {
        Ok(FamilySpec::CubicViaTBeta { base: kind, beta })
    }
}

/// Write the finished report to `--out` or stdout.
fn emit(resolved: &Resolved, output: &str) -> Result<(), String> {
    match &resolved.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| format!("cannot write output file {}: {e}", path.display())),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

/// CSV field quoting: wrap fields containing separators or quotes and
/// double embedded quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Fixed numeric formatting for CSV: 17 significant digits round-trip every
/// binary double exactly.
fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_verify(resolved: &Resolved) -> Result<ExitCode, String> {
    let config = VerifyConfig {
        family: resolved.family,
        beta: resolved.beta,
        t: resolved.t,
        m0: resolved.m0,
        grid_size: resolved.grid_size,
    };
    let reports = verify_suite(&config).map_err(|e| e.to_string())?;
    let mut output = String::new();
    match resolved.format {
        OutputFormat::Json => {
            for report in &reports {
                let line = serde_json::to_string(report)
                    .map_err(|e| format!("cannot serialize report: {e}"))?;
                output.push_str(&line);
                output.push('\n');
            }
        }
        OutputFormat::Csv => {
            output.push_str("name,max_residual,tolerance,grid,pass,notes\n");
            for r in &reports {
                let _ = writeln!(
                    output,
                    "{},{},{},{},{},{}",
                    csv_field(&r.name),
                    csv_num(r.max_residual),
                    csv_num(r.tolerance),
                    csv_field(&r.grid),
                    r.pass,
                    csv_field(&r.notes)
                );
            }
        }
    }
    emit(resolved, &output)?;
    let all_pass = reports.iter().all(|r: &CheckReport| r.pass);
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_posterior(resolved: &Resolved, data_path: &PathBuf) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| format!("cannot read data file {}: {e}", data_path.display()))?;
    let mut observations = Vec::new();
    if !text.trim().is_empty() {
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                return Err(format!("invalid data: line {} is empty", i + 1));
            }
            let x: f64 = trimmed.parse().map_err(|_| {
                format!(
                    "invalid data: line {} is not a decimal observation: {trimmed:?}",
                    i + 1
                )
            })?;
            observations.push(x);
        }
    }

    let hp = HyperParams::new(resolved.t, resolved.m0, resolved.beta, &resolved.model)
        .map_err(|e| e.to_string())?;
    let state = PosteriorState::new(resolved.model.clone(), hp).map_err(|e| e.to_string())?;

    let (n, xbar, warning) = if observations.is_empty() {
        (0usize, None, Some("data file is empty; state echoed unchanged"))
    } else {
        // Observation index equals line number: one observation per line.
        let batch = DataBatch::new(observations, &resolved.model, resolved.beta)
            .map_err(|e| e.to_string())?;
        (batch.n(), Some(batch.sample_mean()), None)
    };
    let xbar_value = xbar.unwrap_or(0.0);
    let updated = update_summary(&state, n, xbar_value).map_err(|e| e.to_string())?;
    let closed = closed_form_functional(&state, n, xbar_value);
    let quad = posterior_functional_summary_with(&state, n, xbar_value, &resolved.tol)
        .map_err(|e| e.to_string())?;

    let mut output = String::new();
    match resolved.format {
        OutputFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("t".into(), resolved.t.into());
            obj.insert("m0".into(), resolved.m0.into());
            obj.insert("beta".into(), resolved.beta.into());
            obj.insert("n".into(), n.into());
            obj.insert(
                "xbar".into(),
                match xbar {
                    Some(x) => x.into(),
                    None => serde_json::Value::Null,
                },
            );
            obj.insert("t_updated".into(), updated.hp.t.into());
            obj.insert("m0_updated".into(), updated.hp.m0.into());
            obj.insert("closed_form_functional".into(), closed.into());
            obj.insert("quadrature_functional".into(), quad.into());
            obj.insert("functional_gap".into(), (quad - closed).abs().into());
            if let Some(w) = warning {
                obj.insert("warning".into(), w.into());
            }
            let _ = writeln!(output, "{}", serde_json::Value::Object(obj));
        }
        OutputFormat::Csv => {
            output.push_str(
                "t,m0,beta,n,xbar,t_updated,m0_updated,closed_form_functional,\
                 quadrature_functional,functional_gap,warning\n",
            );
            let _ = writeln!(
                output,
                "{},{},{},{n},{},{},{},{},{},{},{}",
                csv_num(resolved.t),
                csv_num(resolved.m0),
                csv_num(resolved.beta),
                xbar.map(csv_num).unwrap_or_default(),
                csv_num(updated.hp.t),
                csv_num(updated.hp.m0),
                csv_num(closed),
                csv_num(quad),
                csv_num((quad - closed).abs()),
                csv_field(warning.unwrap_or(""))
            );
        }
    }
    emit(resolved, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(resolved: &Resolved, count: usize) -> Result<ExitCode, String> {
    if count == 0 || count > 10_000_000 {
        return Err(format!("sample count must be in [1, 10000000], got {count}"));
    }
    let hp = HyperParams::new(resolved.t, resolved.m0, resolved.beta, &resolved.model)
        .map_err(|e| e.to_string())?;
    let prior = normalize_with(
        PriorKind::GeneralizedNatural,
        &hp,
        &resolved.model,
        &resolved.tol,
    )
    .map_err(|e| e.to_string())?;
    let draws = prior.sample(count, resolved.seed).map_err(|e| e.to_string())?;

    let mut output = String::new();
    match resolved.format {
        OutputFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("family".into(), resolved.model.name().into());
            obj.insert("beta".into(), resolved.beta.into());
            obj.insert("t".into(), resolved.t.into());
            obj.insert("m0".into(), resolved.m0.into());
            obj.insert("seed".into(), resolved.seed.into());
            obj.insert("count".into(), count.into());
            obj.insert(
                "draws".into(),
                serde_json::Value::Array(draws.iter().map(|&d| d.into()).collect()),
            );
            let _ = writeln!(output, "{}", serde_json::Value::Object(obj));
        }
        OutputFormat::Csv => {
            output.push_str("draw\n");
            for d in &draws {
                let _ = writeln!(output, "{}", csv_num(*d));
            }
        }
    }
    emit(resolved, &output)?;
    Ok(ExitCode::SUCCESS)
}

/// The interior mean window used for plot abscissae: finite ends are inset
/// by 15% of the span, infinite ends are replaced by a fixed offset window.
fn plot_mean_window(model: &CumulantModel, beta: f64) -> Result<(f64, f64), String> {
    let m_beta = m_beta_set(model, beta)
        .ok_or_else(|| format!("beta = {beta} leaves no admissible mean for {}", model.name()))?;
    let (lo, hi) = match (m_beta.lo().is_finite(), m_beta.hi().is_finite()) {
        (true, true) => {
            let span = m_beta.hi() - m_beta.lo();
            (m_beta.lo() + 0.15 * span, m_beta.hi() - 0.15 * span)
        }
        (true, false) => (m_beta.lo() + 0.25, m_beta.lo() + 2.25),
        (false, true) => (m_beta.hi() - 2.25, m_beta.hi() - 0.25),
        (false, false) => (-1.0, 1.0),
    };
    Ok((lo, hi))
}

fn cmd_plotdata(resolved: &Resolved) -> Result<ExitCode, String> {
    let model = &resolved.model;
    let beta = resolved.beta;
    let n_rows = resolved.grid_size;
    let hp = HyperParams::new(resolved.t, resolved.m0, beta, model).map_err(|e| e.to_string())?;

    // Variance column on a uniform window, with the nearest grid point
    // snapped onto each integer mean so reference values land on exact
    // abscissae.
    let (wlo, whi) = plot_mean_window(model, beta)?;
    let mut m_grid = uniform_grid(wlo, whi, n_rows);
    let step = (whi - wlo) / (n_rows - 1) as f64;
    let mut anchor = wlo.ceil();
    while anchor < whi {
        if anchor > wlo {
            let idx = ((anchor - wlo) / step).round() as usize;
            m_grid[idx.min(n_rows - 1)] = anchor;
        }
        anchor += 1.0;
    }
    let variances: Vec<f64> = m_grid
        .iter()
        .map(|&m| model.variance(m).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;

    // Prior density columns over their own domains.
    let natural = normalize_with(PriorKind::GeneralizedNatural, &hp, model, &resolved.tol)
        .map_err(|e| e.to_string())?;
    let theta_grid = log_end_grid(&natural.domain, n_rows, 1e-6);
    let natural_density: Vec<f64> = theta_grid
        .iter()
        .map(|&th| natural.log_density(th).map(f64::exp).unwrap_or(0.0))
        .collect();
    let mean_prior = normalize_with(PriorKind::GeneralizedMean, &hp, model, &resolved.tol)
        .map_err(|e| e.to_string())?;
    let mean_grid = log_end_grid(&mean_prior.domain, n_rows, 1e-6);
    let mean_density: Vec<f64> = mean_grid
        .iter()
        .map(|&m| mean_prior.log_density(m).map(f64::exp).unwrap_or(0.0))
        .collect();

    // Posterior functional for single observations across the mean window.
    let state = PosteriorState::new(model.clone(), hp).map_err(|e| e.to_string())?;
    let xbar_candidates: Vec<f64> = uniform_grid(wlo, whi, n_rows)
        .into_iter()
        .filter(|&x| update_summary(&state, 1, x).is_ok())
        .collect();
    if xbar_candidates.is_empty() {
        return Err("no admissible sample mean in the plot window".into());
    }
    let pick = |i: usize| {
        if n_rows == 1 {
            xbar_candidates.len() / 2
        } else {
            i * (xbar_candidates.len() - 1) / (n_rows - 1)
        }
    };
    let mut xbars = Vec::with_capacity(n_rows);
    let mut functionals = Vec::with_capacity(n_rows);
    for i in 0..n_rows {
        let x = xbar_candidates[pick(i)];
        let f = posterior_functional_summary_with(&state, 1, x, &resolved.tol)
            .map_err(|e| e.to_string())?;
        xbars.push(x);
        functionals.push(f);
    }

    // Grid lengths can drop below n_rows after deduplication; repeat the
    // final row of a short column so the table stays rectangular.
    let at = |v: &[f64], i: usize| v[i.min(v.len() - 1)];
    let mut output =
        String::from("m,variance,theta,natural_density,m_mean,mean_density,xbar,posterior_functional\n");
    for i in 0..n_rows {
        let _ = writeln!(
            output,
            "{},{},{},{},{},{},{},{}",
            csv_num(at(&m_grid, i)),
            csv_num(at(&variances, i)),
            csv_num(at(&theta_grid, i)),
            csv_num(at(&natural_density, i)),
            csv_num(at(&mean_grid, i)),
            csv_num(at(&mean_density, i)),
            csv_num(at(&xbars, i)),
            csv_num(at(&functionals, i)),
        );
    }
    emit(resolved, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(resolved: &Resolved) -> Result<ExitCode, String> {
    let entries: Vec<(FamilySpec, &str)> = vec![
        (FamilySpec::Quadratic(QuadraticKind::Gaussian), "1"),
        (FamilySpec::Quadratic(QuadraticKind::Poisson), "m"),
        (FamilySpec::Quadratic(QuadraticKind::Gamma { shape: 1.0 }), "m^2/shape"),
        (FamilySpec::Quadratic(QuadraticKind::Binomial { trials: 4 }), "m(1 - m/trials)"),
        (
            FamilySpec::Quadratic(QuadraticKind::NegativeBinomial { successes: 2.0 }),
            "m(1 + m/successes)",
        ),
        (FamilySpec::Quadratic(QuadraticKind::Hyperbolic), "1 + m^2"),
        (FamilySpec::InverseGaussian, "(1 + m)^3"),
    ];
    let mut output = String::new();
    let mut rows = Vec::new();
    for (spec, variance) in &entries {
        let model = make_model(spec).map_err(|e| e.to_string())?;
        rows.push((
            model.name().to_string(),
            variance.to_string(),
            model.theta_domain().describe(),
            model.mean_domain().describe(),
            model.support().interval.describe(),
            model.jorgensen().describe().to_string(),
        ));
    }
    match resolved.format {
        OutputFormat::Json => {
            for (name, variance, theta, mean, support, powers) in &rows {
                let mut obj = serde_json::Map::new();
                obj.insert("name".into(), name.as_str().into());
                obj.insert("variance".into(), variance.as_str().into());
                obj.insert("theta_domain".into(), theta.as_str().into());
                obj.insert("mean_domain".into(), mean.as_str().into());
                obj.insert("support".into(), support.as_str().into());
                obj.insert("admissible_powers".into(), powers.as_str().into());
                let _ = writeln!(output, "{}", serde_json::Value::Object(obj));
            }
        }
        OutputFormat::Csv => {
            output.push_str("name,variance,theta_domain,mean_domain,support,admissible_powers\n");
            for (name, variance, theta, mean, support, powers) in &rows {
                let _ = writeln!(
                    output,
                    "{},{},{},{},{},{}",
                    csv_field(name),
                    csv_field(variance),
                    csv_field(theta),
                    csv_field(mean),
                    csv_field(support),
                    csv_field(powers)
                );
            }
        }
    }
    emit(resolved, &output)?;
    Ok(ExitCode::SUCCESS)
}
