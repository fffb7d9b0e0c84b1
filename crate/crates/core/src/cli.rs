//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::generate::{generate, GeneratorConfig};
use crate::pathcheck::{audit_plan, write_svg, AuditReport, Tolerances};
use crate::plan::{PlanFile, DEFAULT_SAMPLE_SPACING};
use crate::problem::Problem;
use crate::scenario::{load_scenario, write_text};
use crate::upper::{solve_bnb_with, solve_brute_with, Algorithm, LowerCache, PlanResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "glidepath",
    version,
    about = "Plan glider routes over interest points and thermals"
)]
pub struct RunConfig {
    /// Worker threads for parallel lower-level solves (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Increase log verbosity (-v, -vv).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario file against the planning assumptions.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Compute the optimal allocation and write a plan file.
    Plan(PlanArgs),
    /// Re-integrate a plan file and check every constraint.
    Audit(AuditArgs),
    /// Draw a scenario, and optionally a plan, as SVG.
    Render {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Compare Branch&Bound against brute force on random scenarios.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Bnb,
    Brute,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bnb => Algorithm::Bnb,
            AlgoArg::Brute => Algorithm::Brute,
        }
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "bnb")]
    pub algo: AlgoArg,
    /// Plan file to write; the plan goes to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Search statistics as JSON.
    #[arg(long)]
    pub json_stats: Option<PathBuf>,
    /// Polyline sample spacing in meters; 0 leaves polylines out.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SPACING)]
    pub spacing: f64,
    #[arg(long)]
    pub tol_endpoint: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub plan: PathBuf,
    /// Audit report to write; a summary is printed either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol_endpoint: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub count: u64,
    #[arg(long, default_value_t = 2)]
    pub gliders: usize,
    #[arg(long, default_value_t = 4)]
    pub interest_points: usize,
    #[arg(long, default_value_t = 3)]
    pub thermals: usize,
    /// CSV destination; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave the timing columns empty so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub tol_endpoint: Option<f64>,
}

fn tolerances(endpoint: Option<f64>) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(e) = endpoint {
        tol.endpoint = e;
    }
    tol
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::Structure(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn print_audit_failures(report: &AuditReport) {
    for c in report.failures() {
        eprintln!(
            "audit: {} failed (worst {:e}, limit {:e})",
            c.name, c.worst, c.limit
        );
    }
}

pub fn cmd_validate(scenario: &Path) -> i32 {
    match load_scenario(scenario) {
        Ok(s) => {
            println!(
                "ok: {} gliders, {} interest points, {} thermals, l_min = {:.4} m",
                s.gliders.len(),
                s.interest_points.len(),
                s.thermals.len(),
                s.l_min()
            );
            EXIT_OK
        }
        Err(Error::Validation(violations)) => {
            for v in &violations {
                eprintln!("violation: {v}");
            }
            EXIT_INVALID
        }
        Err(e) => fail(&e),
    }
}

fn run_search(problem: &Problem, algorithm: Algorithm) -> Result<PlanResult> {
    let cache = LowerCache::new();
    match algorithm {
        Algorithm::Bnb => solve_bnb_with(problem, &cache),
        Algorithm::Brute => solve_brute_with(problem, &cache),
    }
}

pub fn cmd_plan(args: &PlanArgs) -> i32 {
    let scenario = match load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let problem = match Problem::new(scenario) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let result = match run_search(&problem, args.algo.into()) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let spacing = (args.spacing > 0.0).then_some(args.spacing);
    let plan = PlanFile::from_result(&problem, &result, spacing);

    match audit_plan(&problem.scenario, &plan, &tolerances(args.tol_endpoint)) {
        Ok(report) if report.passed => {}
        Ok(report) => {
            print_audit_failures(&report);
            return EXIT_INTERNAL;
        }
        Err(e) => {
            eprintln!("error: own plan failed to audit: {e}");
            return EXIT_INTERNAL;
        }
    }

    for g in &plan.gliders {
        eprintln!(
            "{}: allocation {{{}}} order [{}] S_L = {:.3} m, K_L = {}",
            g.glider,
            g.allocation.join(", "),
            g.order.join(", "),
            g.s_l,
            g.k_l
        );
    }
    eprintln!(
        "K_U = {}, S_U = {:.3} m, {} lower solves, {} nodes expanded",
        plan.k_u, plan.s_u, result.stats.lower_solves, result.stats.nodes_expanded
    );

    let written = (|| -> Result<()> {
        match &args.out {
            Some(path) => plan.save(path)?,
            None => print!("{}", plan.to_json_string()?),
        }
        if let Some(path) = &args.svg {
            write_svg(path, &problem.scenario, Some(&plan))?;
        }
        if let Some(path) = &args.json_stats {
            let mut text = serde_json::to_string_pretty(&result.stats)?;
            text.push('\n');
            write_text(path, &text)?;
        }
        Ok(())
    })();
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

pub fn cmd_audit(args: &AuditArgs) -> i32 {
    let loaded = load_scenario(&args.scenario).and_then(|s| Ok((s, PlanFile::load(&args.plan)?)));
    let (scenario, plan) = match loaded {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let report = match audit_plan(&scenario, &plan, &tolerances(args.tol_endpoint)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    for c in &report.checks {
        println!(
            "{:<22} {:<4} worst {:.3e} limit {:.3e}{}",
            c.name,
            if c.passed { "ok" } else { "FAIL" },
            c.worst,
            c.limit,
            if c.gating { "" } else { " (informational)" }
        );
    }
    if let Some(path) = &args.out {
        if let Err(e) = report.to_json_string().and_then(|t| write_text(path, &t)) {
            return fail(&e);
        }
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

pub fn cmd_render(scenario: &Path, plan: Option<&Path>, svg: &Path) -> i32 {
    let result = (|| -> Result<()> {
        let scenario = load_scenario(scenario)?;
        let plan = plan.map(PlanFile::load).transpose()?;
        write_svg(svg, &scenario, plan.as_ref())
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

pub const BENCH_HEADER: &str =
    "seed,n_g,n_ip,n_t,k_u,s_u,lower_solves_bnb,lower_solves_brute,time_bnb,time_brute,equivalent";

/// Same `K_U`, and `S_U` equal to a relative 1e-9.
pub fn equivalent(a: &PlanResult, b: &PlanResult) -> bool {
    a.best.k_u == b.best.k_u && (a.best.s_u - b.best.s_u).abs() <= 1e-9 * a.best.s_u.abs().max(1.0)
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let cfg = GeneratorConfig {
        n_gliders: args.gliders,
        n_interest: args.interest_points,
        n_thermals: args.thermals,
        ..GeneratorConfig::default()
    };
    let tol = tolerances(args.tol_endpoint);
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    let mut status = EXIT_OK;
    let mut rejections = 0usize;

    for seed in args.seed..args.seed + args.count {
        let run = (|| -> Result<_> {
            let generated = generate(seed, &cfg)?;
            let problem = Problem::new(generated.scenario)?;
            let bnb = run_search(&problem, Algorithm::Bnb)?;
            let brute = run_search(&problem, Algorithm::Brute)?;
            Ok((generated.rejections, problem, bnb, brute))
        })();
        let (rejected, problem, bnb, brute) = match run {
            Ok(x) => x,
            Err(e) => {
                eprintln!("seed {seed}: {e}");
                status = status.max(exit_code(&e));
                continue;
            }
        };
        rejections += rejected;
        let same = equivalent(&bnb, &brute);
        if !same {
            eprintln!(
                "seed {seed}: results differ (bnb K_U={} S_U={}, brute K_U={} S_U={})",
                bnb.best.k_u, bnb.best.s_u, brute.best.k_u, brute.best.s_u
            );
            status = EXIT_INTERNAL;
        }
        for r in [&bnb, &brute] {
            let plan = PlanFile::from_result(&problem, r, None);
            match audit_plan(&problem.scenario, &plan, &tol) {
                Ok(report) if report.passed => {}
                Ok(report) => {
                    eprintln!("seed {seed}: {:?} plan failed audit", r.algorithm);
                    print_audit_failures(&report);
                    status = EXIT_INTERNAL;
                }
                Err(e) => {
                    eprintln!("seed {seed}: {e}");
                    status = EXIT_INTERNAL;
                }
            }
        }
        let (t_bnb, t_brute) = if args.no_timing {
            (String::new(), String::new())
        } else {
            (
                format!("{:.6}", bnb.stats.wall_time.as_secs_f64()),
                format!("{:.6}", brute.stats.wall_time.as_secs_f64()),
            )
        };
        let _ = writeln!(
            csv,
            "{seed},{},{},{},{},{:.6},{},{},{t_bnb},{t_brute},{same}",
            problem.n_gliders(),
            problem.n_interest(),
            problem.n_thermals(),
            bnb.best.k_u,
            bnb.best.s_u,
            bnb.stats.lower_solves,
            brute.stats.lower_solves,
        );
    }
    log::info!(
        "scenario generator rejected {rejections} draws over {} seeds",
        args.count
    );

    let written = match &args.out {
        Some(path) => write_text(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    };
    if let Err(e) = written {
        return fail(&e);
    }
    status
}

/// Parses nothing; dispatches an already-parsed configuration.
pub fn run(config: &RunConfig) -> i32 {
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match &config.command {
        Command::Validate { scenario } => cmd_validate(scenario),
        Command::Plan(args) => cmd_plan(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Render {
            scenario,
            plan,
            svg,
        } => cmd_render(scenario, plan.as_deref(), svg),
        Command::Bench(args) => cmd_bench(args),
    }
}
