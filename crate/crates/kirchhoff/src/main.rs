use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use kirchhoff::bounds::Audit;
use kirchhoff::construct::{
    audit_external_graph, census, realize, verify_certificate, CensusMode, Certificate,
    ConstructorConfig, SimplifyMode, Strategy,
};
use kirchhoff::decompose::{decompose_search, SearchBudget};
use kirchhoff::graph::MarkedGraph;
use kirchhoff::rational::{parse_rational, Rational};

#[derive(Parser)]
#[command(
    name = "kirchhoff",
    about = "Exact effective-resistance realization by planar graphs",
    version
)]
struct Cli {
    /// Suppress informational output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a simple planar marked graph with resistance exactly c/t.
    Realize(RealizeArgs),
    /// Re-verify a certificate or a bare graph JSON file.
    Verify(VerifyArgs),
    /// Decompose a rational in [0,1) into short summands in (-1,1).
    Decompose(DecomposeArgs),
    /// Realize every reduced c/t up to a denominator bound.
    Census(CensusArgs),
}

#[derive(Args)]
struct RealizeArgs {
    /// Target resistance "c/t" with 1 <= c < t coprime.
    target: String,
    /// Write the certificate as JSON.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write the graph in DOT format (marked edge bold).
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Construction route: direct, large, mid, small, or portfolio.
    #[arg(long, default_value = "portfolio")]
    strategy: String,
    /// Simplify unconditionally instead of only when needed.
    #[arg(long)]
    always_simplify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate or marked-graph JSON file.
    file: PathBuf,
    /// Target resistance to check against (required for bare graphs).
    #[arg(long)]
    target: Option<String>,
    /// Print the audit report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Target rational "d/c" in [0,1).
    target: String,
    #[arg(long, default_value_t = 10_000)]
    max_den: u64,
    #[arg(long, default_value_t = 4)]
    max_quotient: u64,
    #[arg(long, default_value_t = 3)]
    max_terms: usize,
    /// Print the decomposition as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// Largest denominator t to sweep.
    #[arg(long)]
    max_t: u64,
    /// Write rows as CSV.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Sample at most this many c per t instead of all of them.
    #[arg(long)]
    sample_c: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Realize(args) => cmd_realize(args, cli.quiet),
        Command::Verify(args) => cmd_verify(args, cli.quiet),
        Command::Decompose(args) => cmd_decompose(args, cli.quiet),
        Command::Census(args) => cmd_census(args, cli.quiet),
    }
}

fn approx(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn print_audits(audits: &[Audit]) {
    for a in audits {
        let mark = if a.pass { "pass" } else { "FAIL" };
        println!("  [{mark}] {:<32} {} vs {}", a.name, a.lhs, a.rhs);
    }
}

fn cmd_realize(args: RealizeArgs, quiet: bool) -> Result<ExitCode, String> {
    let target = parse_rational(&args.target).map_err(|e| e.to_string())?;
    let mut config = ConstructorConfig::default();
    if args.always_simplify {
        config.simplify = SimplifyMode::Always;
    }
    if args.strategy != "portfolio" {
        let s: Strategy = args
            .strategy
            .parse()
            .map_err(|e: kirchhoff::Error| e.to_string())?;
        config.strategies = vec![s];
    }
    let cert = realize(&target, &config).map_err(|e| e.to_string())?;

    if let Some(path) = &args.json {
        let js = serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())?;
        fs::write(path, js).map_err(|e| e.to_string())?;
    }
    if let Some(path) = &args.dot {
        fs::write(path, cert.graph.to_dot()).map_err(|e| e.to_string())?;
    }
    let pass = cert.all_audits_pass();
    if !quiet {
        let t = cert.target.denom();
        let c = cert.target.numer();
        println!("target {} (t={t}, c={c})", cert.target);
        println!("strategy {}", cert.strategy);
        println!("V={} E={}", cert.v_count, cert.e_count);
        println!(
            "tau(G)={} tau(G-e)={} tau(G/e)={}",
            cert.tau_g, cert.tau_del, cert.tau_con
        );
        println!("zeta={} resistance={}", cert.zeta, cert.resistance);
        println!(
            "bound={} size-ratio={} (~{:.3} approximate)",
            cert.bound_value,
            cert.size_ratio,
            approx(&cert.size_ratio)
        );
        let passed = cert.audits.iter().filter(|a| a.pass).count();
        println!("audits: {passed}/{} pass", cert.audits.len());
        if !pass {
            print_audits(&cert.audits);
        }
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify(args: VerifyArgs, quiet: bool) -> Result<ExitCode, String> {
    let raw = fs::read_to_string(&args.file).map_err(|e| e.to_string())?;
    let wanted = args
        .target
        .as_deref()
        .map(parse_rational)
        .transpose()
        .map_err(|e| e.to_string())?;

    let audits = if let Ok(cert) = serde_json::from_str::<Certificate>(&raw) {
        if let Some(t) = &wanted {
            if t != &cert.target {
                return Err(format!("certificate targets {}, expected {t}", cert.target));
            }
        }
        verify_certificate(&cert)
    } else {
        let graph = MarkedGraph::from_json(&raw).map_err(|e| e.to_string())?;
        let target = wanted.ok_or("bare graph input needs --target c/t")?;
        audit_external_graph(&graph, &target).map_err(|e| e.to_string())?
    };

    let pass = audits.iter().all(|a| a.pass);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&audits).map_err(|e| e.to_string())?
        );
    } else if !quiet {
        print_audits(&audits);
        println!("{}", if pass { "all audits pass" } else { "AUDIT FAILURE" });
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_decompose(args: DecomposeArgs, quiet: bool) -> Result<ExitCode, String> {
    let target = parse_rational(&args.target).map_err(|e| e.to_string())?;
    let budget = SearchBudget {
        max_den: args.max_den,
        max_quotient: args.max_quotient,
        max_terms: args.max_terms,
        ..SearchBudget::default()
    };
    let dec = decompose_search(&target, &budget).map_err(|e| e.to_string())?;
    if !dec.is_valid() && !dec.parts.is_empty() {
        return Err("internal error: decomposition failed validation".into());
    }
    if args.json {
        println!("{}", serde_json::to_string(&dec).map_err(|e| e.to_string())?);
    } else if !quiet {
        let parts: Vec<String> = dec.parts.iter().map(|p| p.to_string()).collect();
        println!("target {}", dec.target);
        println!("parts [{}]", parts.join(", "));
        println!("cost {}", dec.cost());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_census(args: CensusArgs, quiet: bool) -> Result<ExitCode, String> {
    if args.max_t < 2 {
        return Err("census needs --max-t >= 2".into());
    }
    if let Some(w) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let config = ConstructorConfig::default();
    let mode = match args.sample_c {
        Some(n) => CensusMode::SampledPerT(n),
        None => CensusMode::All,
    };
    let report = census(args.max_t, &config, mode);

    if let Some(path) = &args.csv {
        let mut out = String::from("t,c,strategy,V,E,bound_value,size_ratio\n");
        for r in &report.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.t, r.c, r.strategy, r.v, r.e, r.bound_value, r.size_ratio
            ));
        }
        fs::write(path, out).map_err(|e| e.to_string())?;
    }
    if !quiet {
        println!("census: {} targets realized", report.rows.len());
        if let (Some(max), Some(mean)) = (&report.max_size_ratio, &report.mean_size_ratio) {
            println!(
                "size-ratio max {} (~{:.3} approximate) mean {} (~{:.3} approximate)",
                max,
                approx(max),
                mean,
                approx(mean)
            );
        }
        for f in &report.failures {
            println!("FAILURE {f}");
        }
    }
    Ok(if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
