use clap::{Parser, Subcommand, ValueEnum};
use pitree::config::{build_str, Built};
use pitree::export::{to_dot, to_jsonl};
use pitree::tree::{materialize, rise, FoliageTree};
use pitree::verify::samples::{default_samples, samples_from_json, Sample};
use pitree::verify::{
    baire_suite, box_decomposition_check, cocountable_checks, fip_check, grows_into_suite, hybrid_oracle_suite,
    rescale_checks, theorem2_checks, BaireParams, Report, StageBounds,
};
use pitree::{ClopenSet, Point};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pitree", version, about = "Build, export and check Baire foliage trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Baire,
    GrowsInto,
    Fip,
    HybridOracle,
    Theorem2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Materialize a truncation of the tree.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        sons: u64,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Run a check suite and print its report.
    Check {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 32)]
        sons: u64,
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the truncated rise set of a point into a neighborhood.
    Rise {
        #[arg(long)]
        config: PathBuf,
        /// Point as JSON.
        #[arg(long)]
        point: String,
        /// Neighborhood as JSON.
        #[arg(long)]
        nbhd: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn config_err(msg: impl std::fmt::Display) -> Failure {
    Failure { code: 2, msg: msg.to_string() }
}

fn internal(e: pitree::Error) -> Failure {
    match e {
        pitree::Error::Config(_) | pitree::Error::SpaceMismatch(_) | pitree::Error::PointOutsideRoot(_) => config_err(e),
        other => Failure { code: 1, msg: other.to_string() },
    }
}

fn load(path: &Path) -> Result<Built, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    build_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn load_samples(path: Option<&PathBuf>, tree: &dyn FoliageTree, seed: u64) -> Result<Vec<Sample>, Failure> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
            let s = samples_from_json(&v).map_err(config_err)?;
            let space = tree.space();
            if let Some(bad) = s.iter().find(|x| !space.admits(&x.point)) {
                return Err(config_err(format!("{} is not a point of {}", bad.point, tree.name())));
            }
            Ok(s)
        }
        None => Ok(default_samples(&tree.space(), &tree.removed_points(), 10, seed)),
    }
}

fn run_check(
    built: Option<Built>,
    suite: Suite,
    params: BaireParams,
    samples: Option<&PathBuf>,
    seed: u64,
) -> Result<Report, Failure> {
    if let Suite::HybridOracle = suite {
        return Ok(hybrid_oracle_suite(seed, 100, 60, 3));
    }
    let built = built.ok_or_else(|| config_err("this suite needs --config"))?;
    let tree = built.tree();
    let t = tree.as_ref();
    let d = params.depth;
    match suite {
        Suite::Baire => baire_suite(t, &params).map_err(internal),
        Suite::GrowsInto => {
            let s = load_samples(samples, t, seed)?;
            let mut r = grows_into_suite(t, &s, d).map_err(internal)?;
            if let Built::Cocountable(h) = &built {
                let extra = cocountable_checks(h, &s, d.max(8), StageBounds::default()).map_err(internal)?;
                for e in extra.entries {
                    if r.entry(&e.check).is_none() {
                        r.entries.push(e);
                    }
                }
            }
            Ok(r)
        }
        Suite::Fip => {
            let s = load_samples(samples, t, seed)?;
            let mut r = Report::new("fip", t.name());
            let whole = t.root_leaf();
            for x in &s {
                let mut rises = Vec::new();
                for u in [&x.nbhd, &whole] {
                    rises.push(rise(t, &x.point, u, d).map_err(internal)?);
                }
                r.merge(fip_check(&rises));
            }
            Ok(r)
        }
        Suite::Theorem2 => {
            let s = load_samples(samples, t, seed)?;
            match &built {
                Built::Pipeline(p, comps) => theorem2_checks(comps, p, &params, 3, seed, 12).map_err(internal),
                Built::Rescaled(h) => {
                    let mut r = baire_suite(t, &params).map_err(internal)?;
                    r.merge(rescale_checks(h, d, 3, &s, d).map_err(internal)?);
                    Ok(r)
                }
                Built::Cocountable(h) => {
                    let mut r = baire_suite(t, &params).map_err(internal)?;
                    r.merge(cocountable_checks(h, &s, d.max(8), StageBounds::default()).map_err(internal)?);
                    Ok(r)
                }
                Built::Product(p) => {
                    let mut r = baire_suite(t, &params).map_err(internal)?;
                    r.merge(box_decomposition_check(p, 2, 3, 3, 8).map_err(internal)?);
                    Ok(r)
                }
                Built::Plain(_) => Err(config_err("theorem2 needs a pipeline, product, rescale or cocountable term")),
            }
        }
        Suite::HybridOracle => unreachable!(),
    }
}

fn summarize(r: &Report) {
    for e in &r.entries {
        log::info!("{} [{}] {:?}: {}", e.check, e.clause, e.status, e.detail);
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Build { config, depth, sons, format } => {
            let built = load(&config)?;
            let tree = built.tree();
            let text = match format {
                Format::Jsonl => to_jsonl(&materialize(tree.as_ref(), depth, sons).map_err(internal)?),
                Format::Dot => to_dot(tree.as_ref(), depth, sons).map_err(internal)?,
            };
            print!("{text}");
            Ok(0)
        }
        Cmd::Check { config, suite, depth, sons, samples, seed } => {
            let built = config.as_deref().map(load).transpose()?;
            let report = run_check(built, suite, BaireParams::new(depth, sons), samples.as_ref(), seed)?;
            summarize(&report);
            println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("reports serialize"));
            Ok(report.exit_code() as u8)
        }
        Cmd::Rise { config, point, nbhd, depth } => {
            let built = load(&config)?;
            let tree = built.tree();
            let parse = |s: &str| serde_json::from_str::<Value>(s).map_err(config_err);
            let p = Point::from_json(&parse(&point)?).map_err(config_err)?;
            let u = ClopenSet::from_json(&parse(&nbhd)?).map_err(config_err)?;
            let r = rise(tree.as_ref(), &p, &u, depth).map_err(internal)?;
            println!("{r}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PITREE_LOG")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
