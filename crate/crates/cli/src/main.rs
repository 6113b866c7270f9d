//! `copulakit` — bivariate copula toolkit on the command line.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage/parse error,
//! 3 estimation-range error.

use clap::{Parser, Subcommand, ValueEnum};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use copulakit::csvio::{self, CsvScale};
use copulakit::report::run_check;
use copulakit::svg::{render_panels, render_scatter, PlotSpec};
use copulakit_core::copulas::CopulaFamily;
use copulakit_core::dependence::{kendall_tau, spearman_rho, tail_coefficients};
use copulakit_core::empirical::rank_transform;
use copulakit_core::estimation::{
    fit_moments_spearman_gaussian, fit_moments_tau, fit_pseudolikelihood, FitFamily, FitResult,
};
use copulakit_core::sampling::{sample_copula, sample_joint, RandomSource};
use copulakit_core::{Error, JointModel, Margin};

#[derive(Parser)]
#[command(
    name = "copulakit",
    version,
    about = "Bivariate copula toolkit: sampling, fitting, dependence measures, axiom checks, scatterplots"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Invert the sample Kendall tau in closed form
    Mom,
    /// Invert the sample Spearman rho numerically (gauss only)
    MomSpearman,
    /// Maximize the pseudo-likelihood
    Mpl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a copula sample as CSV (u,v), or x,y when margins are given
    Sample {
        /// Copula spec: indep | w | m | clayton:<theta> | gumbel:<theta> | gauss:<rho>
        copula: String,
        /// Number of rows to draw
        #[arg(short = 'n', long = "count", default_value_t = 5000)]
        n: usize,
        /// Generator seed; fixed seed means byte-identical output
        #[arg(long, default_value_t = 12345)]
        seed: u64,
        /// Two margins `<spec>,<spec>` (uniform | exp:<rate> | stdnormal |
        /// lognormal:<shape>) to emit data-scale columns
        #[arg(long)]
        margins: Option<String>,
        /// Output file (stdout when omitted)
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Estimate a family parameter from a two-column CSV
    Fit {
        /// Input CSV (two numeric columns, optional header)
        input: PathBuf,
        /// Family to fit: clayton | gumbel | gauss
        #[arg(long)]
        family: String,
        /// Estimation method
        #[arg(long, value_enum, default_value_t = MethodArg::Mom)]
        method: MethodArg,
    },
    /// Print dependence measures of a copula
    Measure {
        /// Copula spec
        copula: String,
    },
    /// Verify copula axioms, Fréchet bounds, and quadrant dependence
    Check {
        /// Copula spec
        copula: String,
        /// Grid points per axis
        #[arg(long, default_value_t = 51)]
        grid: usize,
    },
    /// Render a scatterplot of pseudo-observations as SVG
    Plot {
        /// Input CSV to plot (raw x,y data is rank-transformed first)
        input: Option<PathBuf>,
        /// Sample this copula instead of reading a file
        #[arg(long)]
        copula: Option<String>,
        /// Sample size when --copula or --figure-481 is used
        #[arg(short = 'n', long = "count", default_value_t = 5000)]
        n: usize,
        /// Generator seed
        #[arg(long, default_value_t = 12345)]
        seed: u64,
        /// Emit the three-panel reference figure (Clayton 2.88, Gaussian 0.8,
        /// Gumbel 2.44)
        #[arg(long = "figure-481", default_value_t = false)]
        figure_481: bool,
        /// Output SVG file
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Panel title (defaults to the family and parameter)
        #[arg(long)]
        title: Option<String>,
        /// Marker color (SVG color keyword or #rrggbb)
        #[arg(long, default_value = "blue")]
        color: String,
    },
}

enum CliError {
    Core(Error),
    Msg(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Msg(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::OutOfRange(_)) => 3,
            _ => 2,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cmd: Cmd) -> Result<i32, CliError> {
    match cmd {
        Cmd::Sample {
            copula,
            n,
            seed,
            margins,
            output,
        } => cmd_sample(&copula, n, seed, margins.as_deref(), output.as_deref()),
        Cmd::Fit {
            input,
            family,
            method,
        } => cmd_fit(&input, &family, method),
        Cmd::Measure { copula } => cmd_measure(&copula),
        Cmd::Check { copula, grid } => cmd_check(&copula, grid),
        Cmd::Plot {
            input,
            copula,
            n,
            seed,
            figure_481,
            output,
            title,
            color,
        } => cmd_plot(
            input.as_deref(),
            copula.as_deref(),
            n,
            seed,
            figure_481,
            &output,
            title.as_deref(),
            &color,
        ),
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Msg(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_sample(
    copula: &str,
    n: usize,
    seed: u64,
    margins: Option<&str>,
    output: Option<&Path>,
) -> Result<i32, CliError> {
    let c: CopulaFamily = copula.parse()?;
    let mut src = RandomSource::new(seed);
    let text = match margins {
        Some(spec) => {
            let (a, b) = spec.split_once(',').ok_or_else(|| {
                CliError::Msg(format!(
                    "--margins needs two comma-separated specs, got `{spec}`"
                ))
            })?;
            let mx: Margin = a.trim().parse()?;
            let my: Margin = b.trim().parse()?;
            let j = JointModel::new(c, mx, my)?;
            let rows = sample_joint(&mut src, &j, n)?;
            csvio::render_csv("x,y", &rows)
        }
        None => {
            let pairs = sample_copula(&mut src, &c, n)?;
            let rows: Vec<(f64, f64)> = pairs.iter().map(|p| (p.u, p.v)).collect();
            csvio::render_csv("u,v", &rows)
        }
    };
    write_text(output, &text)?;
    Ok(0)
}

fn read_csv_file(path: &Path) -> Result<(CsvScale, Vec<(f64, f64)>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Msg(format!("cannot read {}: {e}", path.display())))?;
    csvio::read_pairs(&text).map_err(|m| CliError::Msg(format!("{}: {m}", path.display())))
}

fn print_fit(fit: &FitResult) {
    println!("family     {}", fit.family);
    println!("method     {}", fit.method);
    println!("tau_hat    {:.6}", fit.sample_tau);
    println!("estimate   {:.6}", fit.estimate);
    if let Some(ll) = fit.log_pseudolikelihood {
        println!("log_pseudolikelihood {ll:.6}");
    }
    for w in &fit.warnings {
        println!("warning: {w}");
    }
    println!("---");
    println!("family={}", fit.family);
    println!("method={}", fit.method);
    println!("tau_hat={}", fit.sample_tau);
    println!("estimate={}", fit.estimate);
    if let Some(ll) = fit.log_pseudolikelihood {
        println!("log_pseudolikelihood={ll}");
    }
}

fn cmd_fit(input: &Path, family: &str, method: MethodArg) -> Result<i32, CliError> {
    let family: FitFamily = family.parse()?;
    let (_, rows) = read_csv_file(input)?;
    let rs = rank_transform(&rows)?;
    let fit = match method {
        MethodArg::Mom => fit_moments_tau(&rs, family)?,
        MethodArg::MomSpearman => {
            if family != FitFamily::Gaussian {
                return Err(CliError::Msg(format!(
                    "method mom-spearman supports only the gauss family, not {family}"
                )));
            }
            fit_moments_spearman_gaussian(&rs)?
        }
        MethodArg::Mpl => fit_pseudolikelihood(&rs, family)?,
    };
    print_fit(&fit);
    Ok(0)
}

fn cmd_measure(copula: &str) -> Result<i32, CliError> {
    let c: CopulaFamily = copula.parse()?;
    let tau = kendall_tau(&c)?;
    let rho_s = spearman_rho(&c, 64)?;
    let tails = tail_coefficients(&c)?;
    println!("tau       {tau:.6}");
    println!("rho_s     {rho_s:.6}");
    println!("lambda_L  {:.6}", tails.lambda_lower);
    println!("lambda_U  {:.6}", tails.lambda_upper);
    Ok(0)
}

fn cmd_check(copula: &str, grid: usize) -> Result<i32, CliError> {
    let c: CopulaFamily = copula.parse()?;
    let report = run_check(&c, grid)?;
    print!("{}", report.render());
    Ok(report.exit_code())
}

fn default_title(c: &CopulaFamily) -> String {
    match *c {
        CopulaFamily::Independence => "Independence Copula".to_string(),
        CopulaFamily::LowerBound => "Frechet-Hoeffding Lower Bound".to_string(),
        CopulaFamily::UpperBound => "Frechet-Hoeffding Upper Bound".to_string(),
        CopulaFamily::Clayton { theta } => format!("Clayton Copula, theta = {theta}"),
        CopulaFamily::Gumbel { theta } => format!("Gumbel Copula, theta = {theta}"),
        CopulaFamily::Gaussian { rho } => format!("Gaussian Copula, rho = {rho}"),
    }
}

/// Rank-transforms raw rows to pseudo-observations; empty input plots as an
/// empty panel.
fn to_pseudo(rows: &[(f64, f64)]) -> Result<Vec<(f64, f64)>, CliError> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let rs = rank_transform(rows)?;
    Ok(rs.pseudo().iter().map(|p| (p.u, p.v)).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_plot(
    input: Option<&Path>,
    copula: Option<&str>,
    n: usize,
    seed: u64,
    figure_481: bool,
    output: &Path,
    title: Option<&str>,
    color: &str,
) -> Result<i32, CliError> {
    if figure_481 {
        if input.is_some() || copula.is_some() {
            return Err(CliError::Msg(
                "--figure-481 replaces both the input file and --copula".to_string(),
            ));
        }
        let configs = [
            (CopulaFamily::Clayton { theta: 2.88 }, "blue"),
            (CopulaFamily::Gaussian { rho: 0.8 }, "red"),
            (CopulaFamily::Gumbel { theta: 2.44 }, "darkgreen"),
        ];
        let mut src = RandomSource::new(seed);
        let mut panels = Vec::new();
        for (c, panel_color) in &configs {
            let pairs = sample_copula(&mut src, c, n)?;
            let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.u, p.v)).collect();
            panels.push((
                PlotSpec::new(&default_title(c)).with_color(panel_color),
                points,
            ));
        }
        let doc = render_panels(&panels).map_err(CliError::Msg)?;
        write_text(Some(output), &doc)?;
        return Ok(0);
    }

    let (spec_title, points) = match (copula, input) {
        (Some(spec), None) => {
            let c: CopulaFamily = spec.parse()?;
            let mut src = RandomSource::new(seed);
            let pairs = sample_copula(&mut src, &c, n)?;
            let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.u, p.v)).collect();
            (default_title(&c), points)
        }
        (None, Some(path)) => {
            let (scale, rows) = read_csv_file(path)?;
            let in_unit_square = |r: &[(f64, f64)]| {
                r.iter()
                    .all(|&(u, v)| (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v))
            };
            let points = match scale {
                CsvScale::Unit => {
                    if !in_unit_square(&rows) {
                        return Err(CliError::Msg(format!(
                            "{}: header says u,v but values leave [0, 1]",
                            path.display()
                        )));
                    }
                    rows
                }
                CsvScale::Raw => to_pseudo(&rows)?,
                CsvScale::Unknown => {
                    if in_unit_square(&rows) {
                        rows
                    } else {
                        to_pseudo(&rows)?
                    }
                }
            };
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            (format!("Pseudo-observations: {name}"), points)
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Msg(
                "give either an input file or --copula, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(CliError::Msg(
                "nothing to plot: give an input file, --copula, or --figure-481".to_string(),
            ))
        }
    };

    let spec = PlotSpec::new(title.unwrap_or(&spec_title)).with_color(color);
    let doc = render_scatter(&spec, &points).map_err(CliError::Msg)?;
    write_text(Some(output), &doc)?;
    Ok(0)
}
