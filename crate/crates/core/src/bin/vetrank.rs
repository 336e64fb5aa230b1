use std::collections::BTreeMap;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use chrono::NaiveDate;
use clap::{Parser, Subcommand, ValueEnum};

use vetrank::fixture::{self, AdversarialConfig, SyntheticConfig};
use vetrank::gsa::Estimator;
use vetrank::ingestion::{self, LoadOptions, DEFAULT_MIN_PROGRAMS, DEFAULT_MIN_SUPPORT};
use vetrank::pipeline::{self, IngestOptions, Pooling};
use vetrank::weights::{parse_weight_list, DEFAULT_SCENARIO_RATIO};
use vetrank::{io, scenario, service, topsis, CriterionSpec, PerformanceMatrix};

/// Rank training programs from graduate labor records with TOPSIS and
/// measure how much each criterion drives the ranking.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build yearly matrices from graduate, contract and sector-map CSVs.
    Ingest {
        #[arg(long)]
        graduates: PathBuf,
        #[arg(long)]
        contracts: PathBuf,
        #[arg(long)]
        sector_map: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Minimum defined values per program cell.
        #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
        min_support: u32,
        /// Minimum surviving programs for a year to enter the window.
        #[arg(long, default_value_t = DEFAULT_MIN_PROGRAMS)]
        min_programs: usize,
        /// Cap for open-ended contracts [default: latest date in the data].
        #[arg(long)]
        observation_end: Option<NaiveDate>,
        /// Criteria JSON [default: the built-in C1..C8 set].
        #[arg(long)]
        criteria: Option<PathBuf>,
    },
    /// Rank one matrix; writes `alternative,score,rank,percentile`.
    Rank {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        criteria: PathBuf,
        /// Relative weights `w1,...,wn` [default: from the criteria file].
        #[arg(long)]
        weights: Option<String>,
        /// Output file [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Most/least weighted scenario distances for every year.
    Scenarios {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        criteria: PathBuf,
        /// Weight ratio between the focused criterion and the others.
        #[arg(long, default_value_t = DEFAULT_SCENARIO_RATIO)]
        ratio: f64,
        /// Directory for scenarios.csv and scenario_summary.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Main effects (correlation ratios) of each criterion on the scores.
    Gsa {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        criteria: PathBuf,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value_t = EstimatorArg::Binned)]
        estimator: EstimatorArg,
        /// Bin count for the binned estimator [default: round(sqrt(samples))].
        #[arg(long)]
        bins: Option<usize>,
        /// Pool all years into one sample (the default).
        #[arg(long, conflicts_with = "per_year")]
        pooled: bool,
        /// Estimate each year separately.
        #[arg(long)]
        per_year: bool,
        /// Also evaluate the least/most weighted schemes for this criterion.
        #[arg(long)]
        focus: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean percentile per program and family summaries over all years.
    Panel {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        criteria: PathBuf,
        #[arg(long)]
        weights: Option<String>,
        /// program_id,family_id CSV [default: <matrices>/programs.csv].
        #[arg(long)]
        programs: Option<PathBuf>,
        /// Directory for percentiles.csv and family_summary.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Serve the JSON API over the given matrices.
    Serve {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        criteria: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long)]
        programs: Option<PathBuf>,
    },
    /// Write a seeded synthetic dataset.
    Fixture {
        #[arg(long, value_enum, default_value_t = FixtureKind::Records)]
        kind: FixtureKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Binned,
    Smoother,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    /// graduates.csv, contracts.csv and sector_map.csv
    Records,
    /// Yearly matrices with a designed opposing and a redundant criterion.
    Adversarial,
}

fn weights(arg: Option<&str>) -> Result<Option<Vec<f64>>> {
    Ok(arg.map(parse_weight_list).transpose()?)
}

fn load_matrices(dir: &Path, criteria: &[CriterionSpec]) -> Result<BTreeMap<i32, PerformanceMatrix>> {
    io::read_matrices_dir(dir, criteria)?
        .into_iter()
        .map(|(y, m)| Ok((y, m.validate().with_context(|| format!("matrix_{y}.csv"))?)))
        .collect()
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            graduates,
            contracts,
            sector_map,
            out,
            min_support,
            min_programs,
            observation_end,
            criteria,
        } => {
            let criteria = match criteria {
                Some(p) => io::read_criteria(&p)?,
                None => ingestion::default_criteria(),
            };
            let dataset = ingestion::load_datasets(
                &graduates,
                &contracts,
                &sector_map,
                LoadOptions { observation_end },
            )?;
            let result = pipeline::ingest(
                &dataset,
                &criteria,
                IngestOptions {
                    min_support,
                    min_programs,
                },
            )?;
            pipeline::write_ingest(&result, &out)?;
            let r = &dataset.report;
            eprintln!(
                "{} graduates, {} contracts ({} duplicates, {} orphans, {} unknown sector codes); window {:?}",
                r.graduates,
                r.contracts,
                r.duplicate_contracts,
                r.orphan_contracts,
                r.unknown_sector_codes.len(),
                result.window.years
            );
        }
        Command::Rank {
            matrix,
            criteria,
            weights: w,
            out,
        } => {
            let criteria = io::read_criteria(&criteria)?;
            let matrix = io::read_matrix(&matrix, &criteria)?
                .validate()
                .with_context(|| matrix.display().to_string())?;
            let w = pipeline::resolve_weights(&criteria, weights(w.as_deref())?.as_deref())?;
            io::write_ranking(output(out.as_deref())?, &topsis::rank(&matrix, &w)?)?;
        }
        Command::Scenarios {
            matrices,
            criteria,
            ratio,
            out,
        } => {
            let criteria = io::read_criteria(&criteria)?;
            let panel = scenario::scenario_panel_with_ratio(&load_matrices(&matrices, &criteria)?, ratio)?;
            io::write_scenarios(io::create(&out.join("scenarios.csv"))?, &panel)?;
            io::write_scenario_summary(io::create(&out.join("scenario_summary.csv"))?, &panel)?;
        }
        Command::Gsa {
            matrices,
            criteria,
            weights: w,
            estimator,
            bins,
            pooled: _,
            per_year,
            focus,
            out,
        } => {
            let estimator = match (estimator, bins) {
                (EstimatorArg::Binned, bins) => Estimator::Binned { bins },
                (EstimatorArg::Smoother, None) => Estimator::StateSpaceSmoother,
                (EstimatorArg::Smoother, Some(_)) => {
                    anyhow::bail!("--bins only applies to the binned estimator")
                }
            };
            let criteria = io::read_criteria(&criteria)?;
            let matrices = load_matrices(&matrices, &criteria)?;
            let given = pipeline::resolve_weights(&criteria, weights(w.as_deref())?.as_deref())?;
            let schemes = pipeline::schemes(&criteria, given, focus.as_deref())?;
            let pooling = if per_year {
                Pooling::PerYear
            } else {
                Pooling::Pooled
            };
            let results = pipeline::gsa(&matrices, &schemes, estimator, pooling)?;
            io::write_gsa(output(out.as_deref())?, &results)?;
        }
        Command::Panel {
            matrices,
            criteria,
            weights: w,
            programs,
            out,
        } => {
            let criteria = io::read_criteria(&criteria)?;
            let families = io::read_programs(&programs.unwrap_or_else(|| matrices.join("programs.csv")))?;
            let matrices = load_matrices(&matrices, &criteria)?;
            let w = pipeline::resolve_weights(&criteria, weights(w.as_deref())?.as_deref())?;
            let panel = pipeline::percentiles(&matrices, &w, &families)?;
            io::write_percentiles(io::create(&out.join("percentiles.csv"))?, &panel)?;
            io::write_family_summary(io::create(&out.join("family_summary.csv"))?, &panel)?;
        }
        Command::Serve {
            matrices,
            criteria,
            port,
            host,
            programs,
        } => {
            let programs = programs.unwrap_or_else(|| matrices.join("programs.csv"));
            let load = move || -> vetrank::Result<service::Dataset> {
                let criteria = io::read_criteria(&criteria)?;
                let families = io::read_programs(&programs)?;
                let matrices = io::read_matrices_dir(&matrices, &criteria)?
                    .into_iter()
                    .map(|(y, m)| Ok((y, m.validate()?)))
                    .collect::<vetrank::Result<_>>()?;
                service::Dataset::new(criteria, matrices, families)
            };
            tokio::runtime::Runtime::new()?
                .block_on(service::serve(SocketAddr::new(host, port), load))?;
        }
        Command::Fixture { kind, out, seed } => match kind {
            FixtureKind::Records => {
                let mut cfg = SyntheticConfig::default();
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                fixture::write_records(&fixture::synthetic_records(&cfg), &out)?;
            }
            FixtureKind::Adversarial => {
                let mut cfg = AdversarialConfig::default();
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                let panel = fixture::adversarial_panel(&cfg);
                let first = panel.values().next().expect("at least one year");
                io::write_criteria(&out.join("criteria.json"), first.criteria())?;
                for (year, m) in &panel {
                    io::write_matrix(&out.join(format!("matrix_{year}.csv")), m)?;
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
