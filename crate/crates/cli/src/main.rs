use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crbf_core::analysis::{
    compare_kernels, convergence, flat_limit_report, fmt_g17, sweep, write_compare_csv, write_convergence_csv,
    write_sweep_csv, Point, Sweep, SweepRow,
};
use crbf_core::formulas::{node_label, DEFAULT_TRUNC};
use crbf_core::{
    lte_numeric_with, lte_poly_derived, lte_poly_template, optimal_eps, weights_auto_with, weights_series, AutoConfig,
    Error, FormulaId, KernelKind, Mechanism, TestFunctionId,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "crbf", version, about = "Compact RBF-FD weights, truncation errors and shape-parameter studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact series weights in t = (eps*h)^2.
    Derive {
        #[arg(long)]
        formula: FormulaId,
        #[command(flatten)]
        common: Common,
        /// Number of series terms to print.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Weights at a given eps and h.
    Weights {
        #[arg(long)]
        formula: FormulaId,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        h: f64,
    },
    /// Compare every flat limit against the classical compact stencils.
    FlatCheck {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Local truncation error at one (eps, h).
    Lte {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        h: f64,
    },
    /// Optimal shape parameter from the leading error polynomial.
    OptimalEps {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        /// Take the polynomial from the closed-form error rows instead of the series weights.
        #[arg(long)]
        template: bool,
    },
    /// |tau0| over an eps grid for one or more step sizes.
    Sweep {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: EpsGrid,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05])]
        h: Vec<f64>,
    },
    /// Observed orders under step refinement.
    Converge {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.025, 0.0125])]
        h: Vec<f64>,
    },
    /// Gaussian, multiquadric and flat-limit errors side by side.
    Compare {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: EpsGrid,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Kernel::Ga)]
    kernel: Kernel,
    /// Series truncation length.
    #[arg(long, env = "CRBF_TRUNC", default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    formula: FormulaId,
    #[arg(long)]
    testfn: TestFunctionId,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    y0: Option<f64>,
}

impl Target {
    fn point(&self) -> Point {
        let d = self.testfn.default_point();
        [self.x0.unwrap_or(d[0]), self.y0.unwrap_or(d[1])]
    }
}

#[derive(Args)]
struct EpsGrid {
    #[arg(long, default_value_t = 0.01)]
    eps_start: f64,
    #[arg(long, default_value_t = 3.0)]
    eps_stop: f64,
    #[arg(long, default_value_t = 300)]
    eps_count: usize,
    /// Geometric spacing.
    #[arg(long)]
    log: bool,
}

impl EpsGrid {
    fn values(&self) -> Vec<f64> {
        let n = self.eps_count;
        if n <= 1 {
            return vec![self.eps_start; n];
        }
        let s = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let f = i as f64 / s;
                if self.log {
                    self.eps_start * (self.eps_stop / self.eps_start).powf(f)
                } else {
                    self.eps_start + (self.eps_stop - self.eps_start) * f
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Ga,
    Mq,
}

impl From<Kernel> for KernelKind {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Ga => KernelKind::Gaussian,
            Kernel::Mq => KernelKind::Multiquadric,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ArityMismatch(..) | Error::InvalidArgument(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn open(output: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn config(common: &Common) -> Result<AutoConfig, Failure> {
    if common.trunc < 2 {
        return Err(Failure::Usage("truncation length must be at least 2".into()));
    }
    Ok(AutoConfig { trunc_len: common.trunc, ..AutoConfig::default() })
}

fn print_json(w: &mut dyn Write, v: &serde_json::Value) -> io::Result<()> {
    writeln!(w, "{}", serde_json::to_string_pretty(v).expect("json values always serialise"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Derive { formula, common, order } => {
            let n = common.trunc.max(order);
            let ws = weights_series(formula, common.kernel.into(), n)?;
            let mut w = open(&common.output)?;
            if common.format == Format::Json {
                print_json(&mut w, &ws.to_json())?;
            } else {
                for line in ws.describe(order) {
                    writeln!(w, "{line}")?;
                }
            }
            w.flush()?;
        }
        Command::Weights { formula, common, eps, h } => {
            let ws = weights_auto_with(formula, common.kernel.into(), eps, h, &config(&common)?)?;
            if let Some(warning) = ws.to_json()["warning"].as_str() {
                eprintln!("warning: {warning}");
            }
            let mut w = open(&common.output)?;
            if common.format == Format::Json {
                print_json(&mut w, &ws.to_json())?;
            } else {
                let dim = formula.dim();
                writeln!(w, "weight,value")?;
                for (o, v) in &ws.alpha {
                    writeln!(w, "{},{}", node_label("alpha", *o, dim), fmt_g17(*v))?;
                }
                for (o, v) in &ws.beta {
                    writeln!(w, "{},{}", node_label("beta", *o, dim), fmt_g17(*v))?;
                }
                writeln!(w, "gamma,{}", fmt_g17(ws.gamma))?;
            }
            w.flush()?;
        }
        Command::FlatCheck { output } => {
            let report = flat_limit_report();
            let mut w = open(&output)?;
            for c in &report {
                match &c.result {
                    Ok(()) => writeln!(w, "PASS {}", c.formula)?,
                    Err(e) => writeln!(w, "FAIL {} {e}", c.formula)?,
                }
            }
            w.flush()?;
            if !report.iter().all(|c| c.passed()) {
                return Err(Failure::Numeric("flat limits differ from the reference stencils".into()));
            }
        }
        Command::Lte { target, common, eps, h } => {
            let kernel = common.kernel.into();
            let r = lte_numeric_with(target.formula, kernel, target.testfn, target.point(), eps, h, &config(&common)?)?;
            let mut w = open(&common.output)?;
            if common.format == Format::Json {
                print_json(
                    &mut w,
                    &json!({
                        "formula": r.formula.name(), "kernel": kernel.tag(), "testfn": r.testfn.name(),
                        "point": r.point, "eps": eps, "h": h, "tau0": r.tau0,
                        "route": format!("{:?}", r.route).to_lowercase(),
                    }),
                )?;
            } else {
                let s = Sweep {
                    formula: r.formula,
                    kernel,
                    testfn: r.testfn,
                    point: r.point,
                    rows: vec![SweepRow { eps, h, tau0: r.tau0 }],
                    missing: vec![],
                };
                write_sweep_csv(&mut w, &s)?;
            }
            w.flush()?;
        }
        Command::OptimalEps { target, common, template } => {
            let pt = target.point();
            let p = if template {
                lte_poly_template(target.formula, target.testfn, pt)?
            } else {
                lte_poly_derived(target.formula, common.kernel.into(), target.testfn, pt, common.trunc)?
            };
            let r = optimal_eps(&p)?;
            let mut w = open(&common.output)?;
            if common.format == Format::Json {
                let mechanism = match r.mechanism {
                    Mechanism::PolynomialRoot => "polynomial-root",
                    Mechanism::DerivativeMinimum => "derivative-minimum",
                };
                print_json(
                    &mut w,
                    &json!({
                        "formula": target.formula.name(), "testfn": target.testfn.name(), "point": pt,
                        "eps_star": r.eps_star, "z_c": r.z_c, "mechanism": mechanism,
                        "candidates": r.candidates, "coeffs": p.coeffs, "h_order": p.h_order,
                    }),
                )?;
            } else {
                writeln!(w, "{:.10}", r.eps_star)?;
            }
            w.flush()?;
        }
        Command::Sweep { target, common, grid, h } => {
            let s = sweep(target.formula, common.kernel.into(), target.testfn, target.point(), &grid.values(), &h, &config(&common)?)?;
            for (eps, h, e) in &s.missing {
                eprintln!("skipped eps={} h={}: {e}", fmt_g17(*eps), fmt_g17(*h));
            }
            let mut w = open(&common.output)?;
            write_sweep_csv(&mut w, &s)?;
            w.flush()?;
        }
        Command::Converge { target, common, eps, h } => {
            let kernel = common.kernel.into();
            let rows = convergence(target.formula, kernel, target.testfn, target.point(), eps, &h, &config(&common)?)?;
            let mut w = open(&common.output)?;
            write_convergence_csv(&mut w, target.formula, kernel, target.testfn, eps, &rows)?;
            w.flush()?;
        }
        Command::Compare { target, common, grid, h } => {
            let rows = compare_kernels(target.formula, target.testfn, target.point(), &grid.values(), h, &config(&common)?)?;
            let mut w = open(&common.output)?;
            write_compare_csv(&mut w, target.formula, target.testfn, &rows)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
