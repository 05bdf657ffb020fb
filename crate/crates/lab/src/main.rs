//! `lab` — command-line experiment runner.
//!
//! One experiment per invocation; reports are written atomically to the
//! output directory as CSV or JSON and a summary line goes to stdout. The
//! exit status is nonzero when an experiment's pass verdict is false.
//!
//! Flag defaults can also come from a TOML config file (same keys as the
//! global flags); explicit flags win.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use twonorm::constructors::ScalarField;
use twonorm::domains::DomainSpec;
use twonorm::experiments::{
    run_ellipse_evidence, run_extension_discontinuity, run_geodesic, run_lalesco, run_membership,
    run_norm_growth, run_weyl, LabConfig, MembershipTarget, OutputFormat,
};
use twonorm::report::ExperimentReport;
use twonorm::spectra::{pseudospectrum_grid, LadderBuilder};

#[derive(Parser)]
#[command(
    name = "lab",
    about = "Numerical experiments on truncated two-norm operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    globals: GlobalFlags,
}

#[derive(Args, Debug, Default, Clone)]
struct GlobalFlags {
    /// Domain: interval | disk | weyl:<n>:<volume> | fourier[:<n>:<kmax>]
    #[arg(long, global = true)]
    domain: Option<String>,

    /// Truncation size (number of modes)
    #[arg(long = "N", global = true)]
    n_modes: Option<usize>,

    /// Schatten index: 1 | 2 | inf | any float >= 1
    #[arg(long, global = true)]
    p: Option<String>,

    /// RNG seed for reproducible draws
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for report files
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format: csv | json
    #[arg(long, global = true)]
    format: Option<String>,

    /// Membership tolerance override (default 1e-8 * N)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// TOML config file with the same keys as the flags above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    domain: Option<String>,
    #[serde(rename = "N")]
    n: Option<usize>,
    p: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Norm growth of rank-one group elements from f = sin(pi x) + sin(k pi x)
    NormGrowth {
        /// Frequencies k (all >= 2)
        #[arg(long, value_delimiter = ',', default_value = "2,5,10,50")]
        k_values: Vec<u32>,
    },
    /// Extension-map discontinuity ladder for theta_n = e^{i sin(nx)/n}
    Extension {
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        n_values: Vec<u32>,
        /// The box (a, b) inside (0, 1) carrying the Sobolev-level energy
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.75", num_args = 2)]
        r#box: Vec<f64>,
        /// Quadrature panel count (default max(64, 4N))
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Real truncation spectra vs resolvent blow-up at the limiting ellipse
    Ellipse {
        /// Weyl dimension of the doubling model (sub 2^{1/n}, sup 2^{-1/n})
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128,256,512")]
        ladder: Vec<usize>,
        /// Also emit a pseudospectrum grid CSV around the ellipse
        #[arg(long)]
        grid: bool,
    },
    /// Exp/log round trip plus the variational minimality experiment
    Geodesic {
        /// Number of endpoint-corrected variations (each costs ~400 dense
        /// exponentials at the configured N)
        #[arg(long, default_value_t = 10)]
        variations: usize,
    },
    /// The two-ideal inequality on seeded Schatten-profile draws
    Lalesco {
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        p_set: Vec<f64>,
    },
    /// Group-membership defect of a named constructor
    Membership {
        /// rank_one | finite_block | mult | reflection | rotation | random_exp
        #[arg(long)]
        constructor: String,
        /// Phase for rank_one
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Block size for finite_block
        #[arg(long, default_value_t = 2)]
        block: usize,
        /// Symbol for mult: one | plane_wave | theta_n | custom
        #[arg(long, default_value = "plane_wave")]
        symbol: String,
        /// Wave number k for plane_wave
        #[arg(long, default_value_t = 2.0)]
        sym_k: f64,
        /// Index n for theta_n
        #[arg(long, default_value_t = 8)]
        sym_n: u32,
        /// Sampled symbol table (CSV: x, re, im, dre, dim) for custom
        #[arg(long)]
        table: Option<PathBuf>,
        /// Rotation angle for the disk rotation
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        alpha: f64,
    },
    /// Weyl growth-law ratio check on the configured domain
    Weyl {
        #[arg(long, default_value_t = 400)]
        modes: usize,
        /// Retained asymptotic share of the spectrum
        #[arg(long, default_value_t = 0.5)]
        fraction: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::NormGrowth { .. } => "norm_growth",
            Command::Extension { .. } => "extension_discontinuity",
            Command::Ellipse { .. } => "ellipse_evidence",
            Command::Geodesic { .. } => "geodesic",
            Command::Lalesco { .. } => "lalesco",
            Command::Membership { .. } => "membership",
            Command::Weyl { .. } => "weyl",
        }
    }
}

fn parse_domain(text: &str) -> Result<DomainSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[0] {
        "interval" => Ok(DomainSpec::Interval01),
        "disk" => Ok(DomainSpec::UnitDisk),
        "weyl" => {
            if parts.len() != 3 {
                bail!("weyl domain needs the form weyl:<n>:<volume>");
            }
            Ok(DomainSpec::WeylModel {
                n: parts[1].parse().context("weyl dimension")?,
                volume: parts[2].parse().context("weyl volume")?,
            })
        }
        "fourier" => {
            let (n, kmax) = match parts.len() {
                1 => (1u32, 8i64),
                3 => (
                    parts[1].parse().context("fourier dimension")?,
                    parts[2].parse().context("fourier kmax")?,
                ),
                _ => bail!("fourier domain is fourier or fourier:<n>:<kmax>"),
            };
            Ok(DomainSpec::fourier_integer_grid(n, kmax))
        }
        other => bail!("unknown domain {other:?} (interval | disk | weyl:n:vol | fourier)"),
    }
}

fn parse_p(text: &str) -> Result<f64> {
    match text {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        other => {
            let p: f64 = other.parse().context("Schatten index")?;
            if p < 1.0 {
                bail!("Schatten index must be >= 1");
            }
            Ok(p)
        }
    }
}

fn parse_format(text: &str) -> Result<OutputFormat> {
    match text {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => bail!("unknown format {other:?} (csv | json)"),
    }
}

/// Defaults <- config file <- explicit flags.
fn resolve_config(globals: &GlobalFlags) -> Result<LabConfig> {
    let file: FileConfig = match &globals.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    let mut cfg = LabConfig::default();
    if let Some(text) = globals.domain.as_deref().or(file.domain.as_deref()) {
        cfg.domain = parse_domain(text)?;
    }
    if let Some(n) = globals.n_modes.or(file.n) {
        cfg.n_modes = n;
    }
    if let Some(text) = globals.p.as_deref().or(file.p.as_deref()) {
        cfg.p = parse_p(text)?;
    }
    if let Some(seed) = globals.seed.or(file.seed) {
        cfg.seed = seed;
    }
    if let Some(out) = globals.out.clone().or(file.out) {
        cfg.out_dir = out;
    }
    if let Some(text) = globals.format.as_deref().or(file.format.as_deref()) {
        cfg.format = parse_format(text)?;
    }
    if let Some(tol) = globals.tol.or(file.tol) {
        cfg.tolerance = Some(tol);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_symbol_table(path: &PathBuf) -> Result<ScalarField> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading symbol table {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue; // header or comment
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        if fields.len() != 5 {
            bail!(
                "symbol table line {} has {} fields, expected x,re,im,dre,dim",
                lineno + 1,
                fields.len()
            );
        }
        let parse = |i: usize| -> Result<f64> {
            fields[i]
                .parse()
                .with_context(|| format!("field {} on line {}", i + 1, lineno + 1))
        };
        rows.push((
            parse(0)?,
            num_complex::Complex64::new(parse(1)?, parse(2)?),
            num_complex::Complex64::new(parse(3)?, parse(4)?),
        ));
    }
    Ok(ScalarField::from_table(
        format!("custom({})", path.display()),
        rows,
        false,
    )?)
}

fn run(cli: &Cli) -> Result<ExperimentReport> {
    let cfg = resolve_config(&cli.globals)?;
    let mut report = match &cli.command {
        Command::NormGrowth { k_values } => run_norm_growth(&cfg, k_values)?,
        Command::Extension {
            n_values,
            r#box,
            quad_order,
        } => run_extension_discontinuity(&cfg, n_values, (r#box[0], r#box[1]), *quad_order)?,
        Command::Ellipse { n, ladder, grid } => {
            let mut report = run_ellipse_evidence(&cfg, *n, ladder)?;
            if *grid {
                let size = *ladder.last().unwrap_or(&128);
                let builder = LadderBuilder::ToeplitzModel { n: *n };
                let mat = builder.build(size.min(128))?;
                let (major, minor) = twonorm::spectra::ellipse_semi_axes(*n);
                let g = pseudospectrum_grid(
                    &mat,
                    (-1.2 * major, 1.2 * major),
                    (-1.2 * minor, 1.2 * minor),
                    41,
                )?;
                let path = cfg.out_dir.join("ellipse_pseudospectrum_grid.csv");
                twonorm::report::write_atomic(&path, g.to_csv().as_bytes())?;
                report.artifacts.push(path);

                // plot-ready spectral report (eigenvalues + resolvent ladder)
                let builder = LadderBuilder::ToeplitzModel { n: *n };
                let (_, top) = twonorm::spectra::ellipse_semi_axes(*n);
                let spectral = twonorm::spectra::essential_spectrum_ladder(
                    &builder,
                    &[num_complex::Complex64::new(0.0, top)],
                    ladder,
                )?;
                let path = cfg.out_dir.join("ellipse_spectral_report.json");
                twonorm::report::write_atomic(&path, spectral.to_json()?.as_bytes())?;
                report.artifacts.push(path);
            }
            report
        }
        Command::Geodesic { variations } => {
            let mut report = run_geodesic(&cfg, *variations)?;
            // the minimal curve itself, in the operator interchange schema
            let g = twonorm::experiments::seeded_geodesic_endpoint(&cfg)?;
            let identity = twonorm::operator::TwoNormOperator::identity(g.gamma().clone());
            let tol = cfg.tol(cfg.n_modes);
            let geo = twonorm::geodesics::geodesic_between(&identity, &g, cfg.p, tol)?;
            let path = cfg.out_dir.join("geodesic_result.json");
            twonorm::report::write_atomic(&path, geo.to_json()?.as_bytes())?;
            report.artifacts.push(path);
            report
        }
        Command::Lalesco { draws, p_set } => run_lalesco(&cfg, *draws, p_set)?,
        Command::Membership {
            constructor,
            t,
            block,
            symbol,
            sym_k,
            sym_n,
            table,
            alpha,
        } => {
            let target = match constructor.as_str() {
                "rank_one" => MembershipTarget::RankOne { t: *t },
                "finite_block" => MembershipTarget::FiniteBlock { k: *block },
                "mult" => {
                    let field = match symbol.as_str() {
                        "one" => ScalarField::one(),
                        "plane_wave" => ScalarField::plane_wave(*sym_k),
                        "theta_n" => ScalarField::theta_n(*sym_n),
                        "custom" => {
                            let path = table
                                .as_ref()
                                .context("--table is required with --symbol custom")?;
                            load_symbol_table(path)?
                        }
                        other => bail!(
                            "unknown symbol {other:?} (one | plane_wave | theta_n | custom)"
                        ),
                    };
                    MembershipTarget::Mult { symbol: field }
                }
                "reflection" => MembershipTarget::Reflection,
                "rotation" => MembershipTarget::Rotation { alpha: *alpha },
                "random_exp" => MembershipTarget::RandomExp,
                other => bail!(
                    "unknown constructor {other:?} (rank_one | finite_block | mult | reflection | rotation | random_exp)"
                ),
            };
            run_membership(&cfg, &target)?
        }
        Command::Weyl { modes, fraction } => run_weyl(&cfg, *modes, *fraction)?,
    };

    let filename = format!("{}.{}", cli.command.name(), cfg.format.extension());
    let path = cfg.out_dir.join(filename);
    match cfg.format {
        OutputFormat::Csv => report.write_csv(&path)?,
        OutputFormat::Json => report.write_json(&path)?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!(
                "{}: {} rows, pass = {}",
                report.name,
                report.rows.len(),
                report
                    .pass
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "n/a".into())
            );
            for artifact in &report.artifacts {
                println!("wrote {}", artifact.display());
            }
            if report.pass == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
