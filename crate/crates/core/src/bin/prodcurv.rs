//! Command-line front end: verify one family member, scan the
//! classification table, export samples, or run the whole battery.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prodcurv::verify::{
    battery, classification_scan, export_samples, run_suite, ExportFormat, FamilyEntry, GridSpec,
    Tolerances,
};

#[derive(Parser)]
#[command(name = "prodcurv", version, about = "Constant-curvature hypersurfaces of S^n x R and H^n x R: construction and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EntryArgs {
    /// Family tag (rot-sph-S, rot-sph-H, rot-hyp-H, rot-par-H, slice,
    /// constant-angle-clifford, constant-angle-h-clifford,
    /// product-flat-surface-S3, product-flat-surface-H3, product-horosphere)
    #[arg(long)]
    family: String,
    /// +1 for S^n x R, -1 for H^n x R
    #[arg(long, allow_hyphen_values = true)]
    epsilon: i8,
    /// Target constant sectional curvature
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    /// Intrinsic dimension
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Slope of the constant-angle construction (overrides --c)
    #[arg(long = "B")]
    b: Option<f64>,
    /// Base angle of the Clifford-type families
    #[arg(long)]
    theta0: Option<f64>,
}

impl EntryArgs {
    fn entry(&self) -> FamilyEntry {
        let mut e = FamilyEntry::new(&self.family, self.epsilon, self.c).with_n(self.n);
        if let Some(b) = self.b {
            e = e.with_b(b);
        }
        if let Some(t) = self.theta0 {
            e = e.with_theta0(t);
        }
        e
    }
}

#[derive(Args)]
struct GridArgs {
    /// Samples per chart parameter
    #[arg(long)]
    grid: Option<usize>,
    /// Seed for random curvature planes
    #[arg(long)]
    seed: Option<u64>,
}

impl GridArgs {
    fn grid(&self, n: usize) -> GridSpec {
        let mut g = GridSpec::for_dim(n);
        if let Some(s) = self.grid {
            g.samples_per_axis = s;
        }
        if let Some(s) = self.seed {
            g.seed = s;
        }
        g
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on one family member and report residuals
    Verify {
        #[command(flatten)]
        entry: EntryArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Tolerance profile
        #[arg(long = "tol-profile", default_value = "default")]
        tol_profile: String,
        /// Write the JSON report here (otherwise stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the families the classification permits for (epsilon, c)
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: i8,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Export a sample table (csv/json) or projected mesh (obj)
    Export {
        #[command(flatten)]
        entry: EntryArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        format: ExportFormatArg,
        #[arg(long)]
        out: PathBuf,
        /// Ambient coordinates for the obj projection, e.g. x2,x3,x4
        #[arg(long)]
        project: Option<String>,
    },
    /// Run the full acceptance battery
    Battery {
        /// Directory for per-case reports and the summary
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone)]
struct ExportFormatArg(ExportFormat);

impl std::str::FromStr for ExportFormatArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(ExportFormatArg)
    }
}

fn parse_projection(spec: &str) -> Result<[usize; 3], String> {
    let idx: Vec<usize> = spec
        .split(',')
        .map(|p| {
            let p = p.trim().trim_start_matches('x');
            p.parse::<usize>()
                .map_err(|_| format!("bad projection component {p:?}"))
                .and_then(|i| {
                    if i == 0 {
                        Err("projection coordinates are 1-based (x1, x2, ...)".into())
                    } else {
                        Ok(i - 1)
                    }
                })
        })
        .collect::<Result<_, String>>()?;
    <[usize; 3]>::try_from(idx).map_err(|v: Vec<usize>| {
        format!("projection needs exactly 3 coordinates, got {}", v.len())
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            entry,
            grid,
            tol_profile,
            out,
        } => {
            let tol = match tol_profile.as_str() {
                "default" => Tolerances::default(),
                "strict" => Tolerances::strict(),
                other => {
                    eprintln!("unknown tolerance profile {other:?} (expected default or strict)");
                    return ExitCode::from(2);
                }
            };
            let e = entry.entry();
            let g = grid.grid(e.n);
            match run_suite(&e, &g, &tol) {
                Ok(report) => {
                    let json = report.to_json();
                    match out {
                        Some(path) => {
                            if let Err(err) = std::fs::write(&path, &json) {
                                eprintln!("cannot write {}: {err}", path.display());
                                return ExitCode::from(2);
                            }
                        }
                        None => println!("{json}"),
                    }
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        let failing = report.first_failure().expect("failing check");
                        eprintln!(
                            "FAIL {}: max residual {:.3e} exceeds {:.3e} at {:?}",
                            failing.name, failing.max_residual, failing.tol, failing.argmax
                        );
                        ExitCode::from(1)
                    }
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Scan { epsilon, c } => {
            let tags = classification_scan(epsilon, c);
            if tags.is_empty() {
                println!("(none: no constant-curvature hypersurface exists for this c)");
            } else {
                for t in tags {
                    println!("{t}");
                }
            }
            ExitCode::SUCCESS
        }
        Command::Export {
            entry,
            grid,
            format,
            out,
            project,
        } => {
            let projection = match project.as_deref().map(parse_projection) {
                Some(Ok(p)) => Some(p),
                Some(Err(e)) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                None => None,
            };
            let e = entry.entry();
            let g = grid.grid(e.n);
            match export_samples(&e, &g, format.0, &out, projection) {
                Ok(()) => ExitCode::SUCCESS,
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Battery { out } => match battery(out.as_deref()) {
            Ok(reports) => {
                let mut all_pass = true;
                for r in &reports {
                    let verdict = if r.pass { "pass" } else { "FAIL" };
                    println!(
                        "{verdict}  {:<28} eps={:+} c={:<6} n={} ({} ms)",
                        r.family, r.params["epsilon"], r.params["c"], r.params["n"], r.runtime_ms
                    );
                    all_pass &= r.pass;
                }
                if all_pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(2)
            }
        },
    }
}
