//! Command-line surface over the PLPDM dynamics library.
//!
//! Every command is a pure function of its flags: fixed defaults, explicit
//! seeds, machine-readable results on stdout, diagnostics on stderr.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use plpdm::map::{near_break_point, CirclePoint, LiftPoint, Params};
use plpdm::scan::{export, label_components, scan_grid, CellResult, ExportFormat, GridSpec};
use plpdm::search::{audit_uniqueness, find_attractor, AttractorReport, SearchOptions};
use plpdm::semiconj::{phi, type_of};
use plpdm::symbolic::{Cycle, Itinerary, ItineraryClass};
use plpdm::tongue::{boundary_a, seed_tongue, BoundaryQuery, SeedResult, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plpdm",
    about = "Attracting cycles, itineraries, semiconjugacy types, and parameter-plane scans \
             of the piecewise-linear perturbation of the doubling map",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize a parameter-plane window and export PPM/CSV/JSON
    Scan(ScanArgs),
    /// Find the attracting cycle at one parameter point
    Cycle(CycleArgs),
    /// Print the first n itinerary symbols of a point's orbit
    Itinerary(ItinArgs),
    /// Print the semiconjugacy type of the attractor, or "none"
    Type(TypeArgs),
    /// Locate a component edge where a break point becomes periodic
    Boundary(BoundaryArgs),
    /// Run the constructive tongue seeding for a single-minus period
    Seed(SeedArgs),
    /// Evaluate the semiconjugacy limit at a lift point
    Phi(PhiArgs),
    /// Cross-check uniqueness of the attractor over random parameters
    Audit(AuditArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    a0: f64,
    #[arg(long)]
    a1: f64,
    #[arg(long)]
    b0: f64,
    #[arg(long)]
    b1: f64,
    #[arg(long)]
    na: usize,
    #[arg(long)]
    nb: usize,
    /// Output path prefix; files are written as <prefix>.<ext>
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of ppm,csv,json
    #[arg(long, value_delimiter = ',', default_values = ["ppm", "csv", "json"])]
    format: Vec<FormatArg>,
    /// Largest cycle period the per-cell search reports
    #[arg(long, default_value_t = 64)]
    max_period: usize,
}

#[derive(Args)]
struct CycleArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 64)]
    max_period: usize,
}

#[derive(Args)]
struct ItinArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long)]
    b: f64,
    /// Itinerary word over '-' and '+', e.g. "-++++"
    #[arg(long, allow_hyphen_values = true)]
    itinerary: String,
    #[arg(long, value_enum)]
    side: SideArg,
    /// Select the component nearest this a when several carry the word
    #[arg(long)]
    near: Option<f64>,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long)]
    period: usize,
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct PhiArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    max_period: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Ppm,
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ppm => ExportFormat::Ppm,
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Serialize)]
struct CycleDetail {
    period: usize,
    itinerary: String,
    classification: ItineraryClass,
    multiplier: f64,
    points: Vec<f64>,
    type_k: Option<u64>,
    type_p: Option<u32>,
}

impl CycleDetail {
    fn new(p: Params, c: &Cycle) -> Self {
        let t = type_of(p, c).ok();
        CycleDetail {
            period: c.period(),
            itinerary: c.itinerary().canonical().to_string(),
            classification: c.itinerary().classification(),
            multiplier: c.multiplier(),
            points: c.points().iter().map(|x| x.value()).collect(),
            type_k: t.map(|t| t.k),
            type_p: t.map(|t| t.p),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum CycleOut {
    Found(CycleDetail),
    NotFound,
    BreakPointAdjacent(CycleDetail),
}

fn params(a: f64, b: f64) -> Result<Params> {
    Params::reduced(a, b).map_err(|e| anyhow!("{e}"))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run() -> Result<u8> {
    match Cli::parse().command {
        Command::Scan(args) => {
            let spec = GridSpec {
                a_min: args.a0,
                a_max: args.a1,
                b_min: args.b0,
                b_max: args.b1,
                na: args.na,
                nb: args.nb,
            };
            if !(1..=4096).contains(&args.max_period) {
                return Err(anyhow!("--max-period must be in 1..=4096"));
            }
            let opts = SearchOptions::with_max_period(args.max_period);
            let grid = scan_grid(spec, &opts)?;
            let components = label_components(&grid);
            let mut files = Vec::new();
            for format in &args.format {
                let format = ExportFormat::from(*format);
                let path = args.out.with_extension(format.extension());
                export(&grid, &components, format, &path)?;
                files.push(path.display().to_string());
            }
            let attractor_cells = grid
                .cells
                .iter()
                .filter(|c| matches!(c, CellResult::Attractor { .. }))
                .count();
            #[derive(Serialize)]
            struct Summary {
                grid_spec: GridSpec,
                attractor_cells: usize,
                components: usize,
                files: Vec<String>,
            }
            print_json(&Summary {
                grid_spec: spec,
                attractor_cells,
                components: components.len(),
                files,
            })?;
            Ok(0)
        }
        Command::Cycle(args) => {
            let p = params(args.a, args.b)?;
            if !(1..=4096).contains(&args.max_period) {
                return Err(anyhow!("--max-period must be in 1..=4096"));
            }
            let opts = SearchOptions::with_max_period(args.max_period);
            let out = match find_attractor(p, &opts) {
                AttractorReport::Found(c) => CycleOut::Found(CycleDetail::new(p, &c)),
                AttractorReport::NotFound => CycleOut::NotFound,
                AttractorReport::BreakPointAdjacent(c) => {
                    CycleOut::BreakPointAdjacent(CycleDetail::new(p, &c))
                }
            };
            print_json(&out)?;
            Ok(0)
        }
        Command::Itinerary(args) => {
            let p = params(args.a, args.b)?;
            let mut x = CirclePoint::new(args.x);
            let mut word = String::with_capacity(args.n);
            let mut hits = Vec::new();
            for step in 0..args.n {
                if near_break_point(x.value()) {
                    hits.push(step);
                }
                word.push(x.half().symbol());
                x = p.eval(x);
            }
            for step in &hits {
                eprintln!("break point hit at step {step}");
            }
            println!("{word}");
            Ok(0)
        }
        Command::Type(args) => {
            let p = params(args.a, args.b)?;
            match find_attractor(p, &SearchOptions::default()).cycle() {
                Some(c) => {
                    let t = type_of(p, c).context("type computation failed")?;
                    println!("{t}");
                }
                None => println!("none"),
            }
            Ok(0)
        }
        Command::Boundary(args) => {
            let itinerary: Itinerary = args
                .itinerary
                .parse()
                .map_err(|e| anyhow!("bad itinerary: {e}"))?;
            let side = match args.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let r = boundary_a(&BoundaryQuery {
                b: args.b,
                itinerary: itinerary.clone(),
                side,
                near: args.near,
            })?;
            #[derive(Serialize)]
            struct Out {
                a: f64,
                bisection_a: f64,
                residual: f64,
                b: f64,
                itinerary: String,
                side: &'static str,
            }
            print_json(&Out {
                a: r.a,
                bisection_a: r.bisection_a,
                residual: r.residual,
                b: args.b,
                itinerary: itinerary.canonical().to_string(),
                side: match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
            })?;
            Ok(0)
        }
        Command::Seed(args) => {
            if !(3..=48).contains(&args.period) {
                return Err(anyhow!("--period must be in 3..=48"));
            }
            if !(0.5..1.0).contains(&args.b) {
                return Err(anyhow!("--b must be in [0.5, 1)"));
            }
            let seed = seed_tongue(args.period, args.b)?;
            #[derive(Serialize)]
            struct Out {
                period: usize,
                b: f64,
                #[serde(flatten)]
                seed: SeedResult,
            }
            print_json(&Out {
                period: args.period,
                b: args.b,
                seed,
            })?;
            Ok(0)
        }
        Command::Phi(args) => {
            let p = params(args.a, args.b)?;
            if args.tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(anyhow!("--tol must be positive"));
            }
            print_json(&phi(p, LiftPoint(args.x), args.tol))?;
            Ok(0)
        }
        Command::Audit(args) => {
            if !(1..=20).contains(&args.max_period) {
                return Err(anyhow!(
                    "--max-period must be in 1..=20 (enumeration is exponential)"
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut violations = 0usize;
            let mut inconsistent = 0usize;
            let mut with_cycle = 0usize;
            for _ in 0..args.samples {
                let a = rng.gen_range(0.0..1.0);
                let b = rng.gen_range(0.5..1.0);
                let audit = audit_uniqueness(params(a, b)?, args.max_period);
                violations += audit.uniqueness_violation as usize;
                with_cycle += audit.cycle.is_some() as usize;
                if !audit.consistent() {
                    inconsistent += 1;
                    for m in &audit.mismatches {
                        eprintln!("({a}, {b}): {m}");
                    }
                }
            }
            #[derive(Serialize)]
            struct Out {
                samples: usize,
                seed: u64,
                max_period: usize,
                with_cycle: usize,
                violations: usize,
                inconsistent: usize,
            }
            print_json(&Out {
                samples: args.samples,
                seed: args.seed,
                max_period: args.max_period,
                with_cycle,
                violations,
                inconsistent,
            })?;
            Ok(if violations + inconsistent > 0 { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
