use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toroidal_duality::fock::FockBasis;
use toroidal_duality::iom::build::{IomKind, Truncation, WeightParams};
use toroidal_duality::iom::cache::{build_iom_cached, iom_key};
use toroidal_duality::suite::{run_suite, Report, SuiteConfig, SuiteId};
use toroidal_duality::Result;

/// Numerical certificates for the toroidal algebra representations and the
/// duality of their integrals of motion.
#[derive(Parser, Debug)]
#[command(name = "toroidal-verify", version)]
struct Cli {
    /// TOML suite configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Comma-separated suites, overriding the config.
    #[arg(long, global = true, value_delimiter = ',')]
    suite: Vec<String>,
    /// Sampling seed, replacing any parameters given in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Where to write the JSON report.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Operator cache directory.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Truncation ladder for the integrals of motion, e.g. `1,2,3,4`.
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Vec<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the configured suites (the default).
    Run,
    /// Run only the duality suite.
    VerifyDuality,
    /// Build one integral of motion and print a summary.
    BuildIom {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        mu: usize,
        /// Truncation order; defaults to the ladder top.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    G,
    GStar,
    GDual,
    GDualStar,
}

impl From<Kind> for IomKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::G => IomKind::First,
            Kind::GStar => IomKind::Second,
            Kind::GDual => IomKind::DualFirst,
            Kind::GDualStar => IomKind::DualSecond,
        }
    }
}

fn load(cli: &Cli) -> Result<SuiteConfig> {
    let mut cfg = match &cli.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::default(),
    };
    if !cli.suite.is_empty() {
        cfg.suites = cli.suite.iter().map(|s| SuiteId::parse(s)).collect::<Result<_>>()?;
    }
    if let Some(seed) = cli.seed {
        cfg.params = toroidal_duality::suite::ParamSource { seed: Some(seed), regime: cfg.params.regime.take(), ..Default::default() };
    }
    if !cli.ladder.is_empty() {
        cfg.settings.iom.ladder = cli.ladder.clone();
    }
    if cli.report.is_some() {
        cfg.report = cli.report.clone();
    }
    if cli.cache.is_some() {
        cfg.cache_dir = cli.cache.clone();
    }
    if matches!(cli.command, Some(Command::VerifyDuality)) {
        cfg.suites = vec![SuiteId::IomDuality];
    }
    Ok(cfg)
}

fn print_report(rep: &Report) {
    for s in &rep.suites {
        let verdict = if s.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<15} records={:<5} failed={:<4} vacuous={:<4} worst={:.3e} worst/tol={:.3}",
            s.id.name(),
            s.summary.total,
            s.summary.failed,
            s.summary.vacuous,
            s.summary.worst_residual,
            s.summary.worst_ratio
        );
        for r in s.records.iter().filter(|r| !r.pass).take(5) {
            println!("    {} {}: {:.3e} (tolerance {:.1e})", r.relation, r.case, r.residual, r.tolerance);
        }
    }
    println!("config {} params {}", &rep.config_hash[..16], &rep.params.hash[..16]);
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load(cli)?;
    if let Some(Command::BuildIom { kind, mu, k }) = &cli.command {
        cfg.validate()?;
        let params = cfg.resolve_params(cfg.m, cfg.n)?;
        let io = &cfg.settings.iom;
        let basis = FockBasis::new(&params, io.d_max, io.l_max)?;
        let kind = IomKind::from(*kind);
        let order = if matches!(kind, IomKind::First | IomKind::Second) { io.order } else { io.order_dual };
        let wp = WeightParams::duality(&params);
        let trunc = Truncation::new(k.unwrap_or(*io.ladder.last().unwrap()));
        let (op, hit) = build_iom_cached(cfg.cache_dir.as_deref(), &basis, &params, kind, *mu, order, &wp, &trunc)?;
        let summary = serde_json::json!({
            "kind": kind.name(),
            "mu": op.mu,
            "order": op.order,
            "k": op.k_p,
            "window": op.window,
            "theta_terms": op.theta_terms,
            "dim": basis.len(),
            "nnz": op.op.mat.nnz(),
            "exact_columns": op.op.exact.iter().filter(|e| **e).count(),
            "cache_key": iom_key(&basis, &params, kind, *mu, order, &wp, &trunc),
            "cache_hit": hit,
        });
        println!("{}", serde_json::to_string_pretty(&summary)?);
        return Ok(true);
    }
    let rep = run_suite(&cfg)?;
    print_report(&rep);
    if let Some(path) = &cfg.report {
        std::fs::write(path, serde_json::to_string_pretty(&rep)? + "\n")?;
    }
    Ok(rep.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
