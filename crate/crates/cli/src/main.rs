//! Command-line front end: catalog listing/verification/export, per-spec
//! instanton reports, and monad sampling/scanning on the quadric.
//!
//! Exit codes: 0 success, 1 catalog or self-check failure, 2 inadmissible
//! input, 3 stochastic-budget failure (generation retries or a draw that
//! fails its own verification). All randomness flows from --seed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod report;

use report::Report;

const EXIT_CATALOG: u8 = 1;
const EXIT_INADMISSIBLE: u8 = 2;
const EXIT_STOCHASTIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fano3",
    version,
    about = "Exact instanton-bundle arithmetic on Fano threefolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in catalog; optionally verify or export it.
    Catalog(CatalogArgs),
    /// Full numeric report for a threefold and an (eps, k) spec.
    Report(ReportArgs),
    /// Monads on the quadric: sample, verify, scan lines, or run a pencil.
    Monad(MonadArgs),
}

#[derive(Args)]
struct CatalogArgs {
    /// Re-run the exhaustive ring-law, degree and Noether checks.
    #[arg(long)]
    verify: bool,
    /// Emit the catalog document (JSON) on stdout.
    #[arg(long)]
    export: bool,
    /// Validate a previously exported catalog document.
    #[arg(long, value_name = "PATH")]
    import: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Catalog id: P3, Q3, V3, V4, V5, F62, F63, F7, Prime3..Prime12.
    threefold: String,
    #[arg(long)]
    eps: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MonadArgs {
    /// sample | verify | scan | pencil
    action: String,
    #[arg(long)]
    k: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Lines per jumping scan.
    #[arg(long, default_value_t = 200)]
    lines: usize,
    /// Points per fibrewise verification.
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog(args) => cmd_catalog(args),
        Command::Report(args) => cmd_report(args),
        Command::Monad(args) => cmd_monad(args),
    }
}

fn cmd_catalog(args: CatalogArgs) -> ExitCode {
    let catalog = match fano3::build_catalog() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("catalog construction failed: {e}");
            return ExitCode::from(EXIT_CATALOG);
        }
    };
    let doc = fano3::chow::export_catalog(&catalog);
    let fingerprint = fano3::chow::catalog_fingerprint(&doc);

    if let Some(path) = &args.import {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                return ExitCode::from(EXIT_CATALOG);
            }
        };
        let imported: fano3::chow::CatalogDoc = match serde_json::from_str(&text) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("catalog document does not parse: {e}");
                return ExitCode::from(EXIT_CATALOG);
            }
        };
        match fano3::chow::import_catalog(&imported) {
            Ok(rings) => {
                if imported != doc {
                    eprintln!(
                        "catalog import failed: document differs from the built-in catalog \
                         (fingerprint {} vs {fingerprint})",
                        fano3::chow::catalog_fingerprint(&imported)
                    );
                    return ExitCode::from(EXIT_CATALOG);
                }
                println!(
                    "catalog import OK: {} rings rebuilt and revalidated (fingerprint {fingerprint})",
                    rings.len()
                );
            }
            Err(e) => {
                eprintln!("catalog import failed: {e}");
                return ExitCode::from(EXIT_CATALOG);
            }
        }
        return ExitCode::SUCCESS;
    }

    if args.export {
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serialisable")
        );
        return ExitCode::SUCCESS;
    }

    if args.verify {
        let mut failures = Vec::new();
        for x in catalog.threefolds() {
            let laws = fano3::chow::verify_ring_laws(&x.ring);
            if !laws.violations.is_empty() {
                failures.push(format!("{}: {:?}", x.id, laws.violations));
            }
            if x.h.pow(3).degree_of().ok() != Some(fano3::rat::rat(x.degree)) {
                failures.push(format!("{}: deg(h^3) mismatch", x.id));
            }
            let noether = x
                .h
                .scale(&fano3::rat::rat(x.index))
                .mul(&x.c2_omega)
                .degree_of();
            if noether.ok() != Some(fano3::rat::rat(24)) {
                failures.push(format!("{}: Noether check failed", x.id));
            }
            let chi = fano3::bundles::riemann_roch(
                x,
                &fano3::bundles::BundleClass::trivial(&x.ring, 1),
            );
            if chi != fano3::rat::rat(1) {
                failures.push(format!("{}: chi(O) = {}", x.id, fano3::rat::render(&chi)));
            }
        }
        for r in catalog.aux_rings() {
            let laws = fano3::chow::verify_ring_laws(r);
            if !laws.violations.is_empty() {
                failures.push(format!("{}: {:?}", r.id, laws.violations));
            }
        }
        if !failures.is_empty() {
            for f in &failures {
                eprintln!("FAIL {f}");
            }
            return ExitCode::from(EXIT_CATALOG);
        }
        println!(
            "{} varieties + {} auxiliary rings OK (fingerprint {fingerprint})",
            catalog.threefolds().len(),
            catalog.aux_rings().len()
        );
        return ExitCode::SUCCESS;
    }

    if args.json {
        let report = Report::catalog_listing(&catalog, &fingerprint);
        println!("{}", report.to_json());
    } else {
        println!("id      index  rho  degree  genus");
        for x in catalog.threefolds() {
            println!(
                "{:<7} {:<6} {:<4} {:<7} {}",
                x.id,
                x.index,
                x.picard_rank,
                x.degree,
                x.genus.map_or("-".to_string(), |g| g.to_string())
            );
        }
        println!("auxiliary rings: G24 (lines in P3), LQ (lines on the quadric)");
        println!("fingerprint {fingerprint}");
    }
    ExitCode::SUCCESS
}

fn cmd_report(args: ReportArgs) -> ExitCode {
    let catalog = match fano3::build_catalog() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("catalog construction failed: {e}");
            return ExitCode::from(EXIT_CATALOG);
        }
    };
    let x = match catalog.get(&args.threefold) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INADMISSIBLE);
        }
    };
    if !(0..=1).contains(&args.eps) {
        eprintln!("eps must be 0 or 1");
        return ExitCode::from(EXIT_INADMISSIBLE);
    }
    let spec = match fano3::instanton::InstantonSpec::new(x, args.eps, args.k) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INADMISSIBLE);
        }
    };
    match &spec.verdict {
        fano3::instanton::Admissibility::Admissible => {}
        fano3::instanton::Admissibility::BelowBound { min } => {
            eprintln!(
                "inadmissible: quantum number {} violates the sharp bound {min} on {}",
                args.k, x.id
            );
            return ExitCode::from(EXIT_INADMISSIBLE);
        }
        fano3::instanton::Admissibility::OddQuantum => {
            eprintln!(
                "inadmissible: non-ordinary specs need an even quantum number, got {}",
                args.k
            );
            return ExitCode::from(EXIT_INADMISSIBLE);
        }
    }
    let report = match Report::spec_report(&catalog, &spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("internal consistency failure: {e}");
            return ExitCode::from(EXIT_CATALOG);
        }
    };
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::SUCCESS
}

fn cmd_monad(args: MonadArgs) -> ExitCode {
    let monad = match fano3::monad::qmonad_random(args.k, args.seed) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(match e {
                fano3::monad::MonadError::UnsupportedQuantum(_)
                | fano3::monad::MonadError::BadQuantum(_) => EXIT_INADMISSIBLE,
                _ => EXIT_STOCHASTIC,
            });
        }
    };
    let verify = fano3::monad::qmonad_verify_bundle(&monad, args.points, args.seed);
    match args.action.as_str() {
        "sample" => {
            let report = Report::monad_sample(&monad, &verify);
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        "verify" => {
            let report = Report::monad_verify(&monad, &verify, args.points);
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        "scan" => {
            if !verify.ok {
                eprintln!(
                    "draw (k = {}, seed = {}) failed its fibrewise verification; not scanning",
                    args.k, args.seed
                );
                return ExitCode::from(EXIT_STOCHASTIC);
            }
            match fano3::monad::jumping_scan(&monad, args.lines, args.seed, args.workers) {
                Ok(stats) => {
                    let report = Report::monad_scan(&monad, &stats, args.workers);
                    if args.json {
                        println!("{}", report.to_json());
                    } else {
                        print!("{}", report.to_text());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("scan aborted: {e}");
                    ExitCode::from(EXIT_STOCHASTIC)
                }
            }
        }
        "pencil" => {
            // degenerate families are reported by the engine; resample the
            // family seed a bounded number of times
            let mut family_seed = args.seed;
            for _ in 0..20 {
                match fano3::monad::pencil_jumping_count(&monad, family_seed) {
                    Ok(count) => {
                        let report = Report::monad_pencil(&monad, &count);
                        if args.json {
                            println!("{}", report.to_json());
                        } else {
                            print!("{}", report.to_text());
                        }
                        return ExitCode::SUCCESS;
                    }
                    Err(fano3::monad::MonadError::DegenerateFamily { .. }) => {
                        family_seed += 1;
                        continue;
                    }
                    Err(e) => {
                        eprintln!("pencil failed: {e}");
                        return ExitCode::from(EXIT_STOCHASTIC);
                    }
                }
            }
            eprintln!("every sampled family was degenerate; giving up");
            ExitCode::from(EXIT_STOCHASTIC)
        }
        other => {
            eprintln!("unknown monad action `{other}` (expected sample|verify|scan|pencil)");
            ExitCode::from(EXIT_INADMISSIBLE)
        }
    }
}
