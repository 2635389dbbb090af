use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bohr_radius::radius::{
    grid, refine_threshold, solve_radius, threshold_scan, ClassId, ScanFamily, SolverOptions,
};
use bohr_radius::report::{compute_table, fmt_sig, OUTPUT_DIGITS};
use bohr_radius::verify::run_campaign;
use bohr_radius::{BohrError, PhiSpec};

#[derive(Parser)]
#[command(
    name = "bohr",
    version,
    about = "Bohr radii for close-to-convex classes built on Ma-Minda functions"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the radius equation for one class and φ
    #[command(allow_negative_numbers = true)]
    Radius {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Reproduce one of the reference tables
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, value_enum, default_value_t = Output::Csv)]
        out: Output,
    },
    /// Check the Bohr inequality on sampled class members
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        numeric: Numeric,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Check at this radius instead of the capped radius
        #[arg(long)]
        r: Option<f64>,
    },
    /// Sweep a one-parameter family and locate where r_f crosses 1/3
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, value_enum)]
        family: ScanArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Refine the crossing to this tolerance
        #[arg(long)]
        refine: Option<f64>,
        #[arg(long, value_enum, default_value_t = Output::Csv)]
        out: Output,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long, value_parser = parse_class)]
    class: ClassId,
    #[arg(long, value_enum)]
    phi: PhiArg,
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct Numeric {
    /// Truncation order of the series
    #[arg(long, env = "BOHR_ORDER")]
    order: Option<usize>,
    /// Quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiArg {
    Janowski,
    Sakaguchi,
    Lemniscate,
    Expblend,
    Strongly,
    Wang,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanArg {
    KsSakaguchi,
    ScLemniscate,
    ScExpblend,
    ScStrongly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

fn parse_class(s: &str) -> Result<ClassId, String> {
    s.parse().map_err(|e: BohrError| e.to_string())
}

fn required(value: Option<f64>, flag: &str, phi: &str) -> Result<f64, BohrError> {
    value.ok_or_else(|| BohrError::Parameter(format!("--phi {phi} needs --{flag}")))
}

impl Target {
    fn spec(&self) -> Result<PhiSpec, BohrError> {
        match self.phi {
            PhiArg::Janowski => PhiSpec::janowski(
                required(self.a, "A", "janowski")?,
                required(self.b, "B", "janowski")?,
            ),
            PhiArg::Sakaguchi => PhiSpec::sakaguchi(required(self.gamma, "gamma", "sakaguchi")?),
            PhiArg::Lemniscate => PhiSpec::lemniscate(required(self.s, "s", "lemniscate")?),
            PhiArg::Expblend => PhiSpec::exp_blend(required(self.alpha, "alpha", "expblend")?),
            PhiArg::Strongly => PhiSpec::strongly(required(self.alpha, "alpha", "strongly")?),
            PhiArg::Wang => PhiSpec::wang(
                required(self.alpha, "alpha", "wang")?,
                required(self.beta, "beta", "wang")?,
            ),
        }
    }
}

impl Numeric {
    fn options(&self) -> Result<SolverOptions, BohrError> {
        let mut opts = SolverOptions::default();
        if let Some(order) = self.order {
            opts.order = order;
        }
        if let Some(tol) = self.tol {
            opts.tol = tol;
        }
        opts.validate()?;
        Ok(opts)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), BohrError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| BohrError::Inconsistent(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), BohrError> {
    match cli.command {
        Command::Radius { target, numeric, out } => {
            let result = solve_radius(target.class, target.spec()?, numeric.options()?)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            match out {
                Output::Json => print_json(&serde_json::json!({ "schema": 1, "result": result }))?,
                Output::Csv => {
                    println!("class,phi,r_f,capped,sharp,target,residual");
                    println!(
                        "{},\"{}\",{},{},{},{},{:e}",
                        result.class,
                        result.spec,
                        fmt_sig(result.r_f, OUTPUT_DIGITS),
                        fmt_sig(result.capped, OUTPUT_DIGITS),
                        result.sharp,
                        fmt_sig(result.target, OUTPUT_DIGITS),
                        result.residual
                    );
                }
            }
        }
        Command::Table { id, out } => {
            let table = compute_table(id)?;
            match out {
                Output::Csv => print!("{}", table.to_csv()),
                Output::Json => print_json(&table.to_json())?,
            }
        }
        Command::Verify {
            target,
            numeric,
            samples,
            seed,
            r,
        } => {
            if samples == 0 {
                return Err(BohrError::Parameter("--samples must be at least 1".into()));
            }
            let report = run_campaign(target.class, target.spec()?, samples, seed, r, numeric.options()?)?;
            print_json(&report)?;
            report.into_result()?;
        }
        Command::Scan {
            family,
            from,
            to,
            step,
            refine,
            out,
        } => {
            if step.is_nan() || step <= 0.0 || from.is_nan() || to.is_nan() || to < from {
                return Err(BohrError::Parameter(
                    "scan needs --from <= --to and --step > 0".into(),
                ));
            }
            let family = match family {
                ScanArg::KsSakaguchi => ScanFamily::KsSakaguchi,
                ScanArg::ScLemniscate => ScanFamily::ScLemniscate,
                ScanArg::ScExpblend => ScanFamily::ScExpBlend,
                ScanArg::ScStrongly => ScanFamily::ScStrongly,
            };
            let scan = threshold_scan(family, &grid(from, to, step))?;
            let threshold = match (refine, scan.bracket) {
                (Some(tol), Some((lo, hi))) => Some(refine_threshold(family, lo, hi, tol)?),
                _ => None,
            };
            match out {
                Output::Json => print_json(&serde_json::json!({
                    "schema": 1,
                    "scan": scan,
                    "threshold": threshold,
                }))?,
                Output::Csv => {
                    println!("param,r_f,in_sharp_window");
                    for row in &scan.rows {
                        println!(
                            "{},{},{}",
                            fmt_sig(row.param, OUTPUT_DIGITS),
                            fmt_sig(row.r_f, OUTPUT_DIGITS),
                            row.in_sharp_window
                        );
                    }
                    if let Some((lo, hi)) = scan.bracket {
                        eprintln!("crossing in ({lo}, {hi})");
                    }
                    if let Some(t) = threshold {
                        eprintln!("threshold {}", fmt_sig(t, 10));
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
