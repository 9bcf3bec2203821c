//! `atdeec` command-line harness.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use atdeec::config;
use atdeec::experiments::{self, OutputFile};
use atdeec::{Error, NetworkConfig, ProtocolKind};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "atdeec", version, about = "Heterogeneous WSN clustering: analytic model and lifetime simulator")]
struct Cli {
    /// Flat key=value config file; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

/// One flag per config key, same name.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long = "field_side", visible_alias = "field-side", global = true, value_name = "M")]
    field_side: Option<String>,
    #[arg(long = "node_count", visible_alias = "node-count", global = true, value_name = "N")]
    node_count: Option<String>,
    #[arg(long = "bs_x", visible_alias = "bs-x", global = true)]
    bs_x: Option<String>,
    #[arg(long = "bs_y", visible_alias = "bs-y", global = true)]
    bs_y: Option<String>,
    #[arg(long = "exclusion_radius", visible_alias = "exclusion-radius", global = true, value_name = "R")]
    exclusion_radius: Option<String>,
    #[arg(long = "base_energy", visible_alias = "base-energy", global = true)]
    base_energy: Option<String>,
    #[arg(long = "advanced_fraction", visible_alias = "advanced-fraction", global = true)]
    advanced_fraction: Option<String>,
    #[arg(long = "advanced_factor", visible_alias = "advanced-factor", global = true)]
    advanced_factor: Option<String>,
    #[arg(long = "packet_bits", visible_alias = "packet-bits", global = true)]
    packet_bits: Option<String>,
    #[arg(long = "max_rounds", visible_alias = "max-rounds", global = true)]
    max_rounds: Option<String>,
    #[arg(long = "rng_seed", visible_alias = "rng-seed", global = true)]
    rng_seed: Option<String>,
    #[arg(long = "e_elec", visible_alias = "e-elec", global = true)]
    e_elec: Option<String>,
    #[arg(long = "e_da", visible_alias = "e-da", global = true)]
    e_da: Option<String>,
    #[arg(long = "eps_fs", visible_alias = "eps-fs", global = true)]
    eps_fs: Option<String>,
    #[arg(long = "eps_mp", visible_alias = "eps-mp", global = true)]
    eps_mp: Option<String>,
    #[arg(long = "average_energy", visible_alias = "average-energy", global = true, value_name = "true|estimate")]
    average_energy: Option<String>,
    #[arg(long = "threshold_copt_factor", visible_alias = "threshold-copt-factor", global = true)]
    threshold_copt_factor: Option<String>,
    #[arg(long = "excluded_aggregation", visible_alias = "excluded-aggregation", global = true)]
    excluded_aggregation: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> [(&'static str, Option<&String>); 18] {
        [
            ("field_side", self.field_side.as_ref()),
            ("node_count", self.node_count.as_ref()),
            ("bs_x", self.bs_x.as_ref()),
            ("bs_y", self.bs_y.as_ref()),
            ("exclusion_radius", self.exclusion_radius.as_ref()),
            ("base_energy", self.base_energy.as_ref()),
            ("advanced_fraction", self.advanced_fraction.as_ref()),
            ("advanced_factor", self.advanced_factor.as_ref()),
            ("packet_bits", self.packet_bits.as_ref()),
            ("max_rounds", self.max_rounds.as_ref()),
            ("rng_seed", self.rng_seed.as_ref()),
            ("e_elec", self.e_elec.as_ref()),
            ("e_da", self.e_da.as_ref()),
            ("eps_fs", self.eps_fs.as_ref()),
            ("eps_mp", self.eps_mp.as_ref()),
            ("average_energy", self.average_energy.as_ref()),
            ("threshold_copt_factor", self.threshold_copt_factor.as_ref()),
            ("excluded_aggregation", self.excluded_aggregation.as_ref()),
        ]
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total-energy curves E_total(c) for every (s, R) pair.
    Analyze {
        /// Excluded node counts, e.g. `0,10,20`.
        #[arg(long = "s", value_delimiter = ',', default_value = "0,10,20,30,40,50")]
        s_list: Vec<usize>,
        /// Exclusion radii in m, e.g. `0,10,20`.
        #[arg(long = "r", value_delimiter = ',', default_value = "0,10,20,30,40")]
        r_list: Vec<f64>,
        /// Cluster counts, `lo..hi` or `lo-hi` (inclusive).
        #[arg(long = "c", default_value = "1..30", value_parser = parse_c_range)]
        c_range: (u32, u32),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal cluster count and CH probability for the configured field.
    Copt {
        /// Excluded node count.
        #[arg(long = "s", default_value_t = 0)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One seeded run: per-round CSV trace plus a JSON summary.
    Simulate {
        #[arg(long, default_value = "atdeec")]
        protocol: ProtocolKind,
        /// Overrides `rng_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Trace CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON (stdout after the trace is written to --out, stderr otherwise).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Paired-seed comparison of protocols; ratios are second over first.
    Compare {
        #[arg(long, value_delimiter = ',', default_value = "tdeec,atdeec")]
        protocols: Vec<ProtocolKind>,
        /// Seed list: `1,2,3`, `1..20`, or a mix like `1..5,9`.
        #[arg(long, default_value = "1..20", value_parser = parse_seeds)]
        seeds: SeedList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ATDEEC FND/LND averaged over seeds for each exclusion radius.
    #[command(name = "sweep-r")]
    SweepR {
        #[arg(long = "r", value_delimiter = ',', default_value = "10,15,20,25,30,35,40,45")]
        r_list: Vec<f64>,
        #[arg(long, default_value = "1..10", value_parser = parse_seeds)]
        seeds: SeedList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
struct SeedList(Vec<u64>);

fn parse_span(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    let parts = s.split_once("..").or_else(|| s.split_once('-'));
    let (lo, hi) = match parts {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s, s),
    };
    let lo: u64 = lo.parse().map_err(|_| format!("bad number {lo:?}"))?;
    let hi: u64 = hi.parse().map_err(|_| format!("bad number {hi:?}"))?;
    if hi < lo {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let mut seeds = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (lo, hi) = parse_span(part)?;
        seeds.extend(lo..=hi);
    }
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(SeedList(seeds))
}

fn parse_c_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = parse_span(s)?;
    if lo == 0 {
        return Err("cluster counts start at 1".into());
    }
    let cast = |v: u64| u32::try_from(v).map_err(|_| format!("{v} is too large"));
    Ok((cast(lo)?, cast(hi)?))
}

fn resolve_config(cli: &Cli) -> Result<NetworkConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
            config::parse_onto(NetworkConfig::default(), &text)?
        }
        None => NetworkConfig::default(),
    };
    for (key, value) in cli.overrides.pairs() {
        if let Some(v) = value {
            config::apply(&mut cfg, key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes to `out` when given, stdout otherwise.
fn emit(out: Option<OutputFile>, contents: &str) -> Result<(), Error> {
    match out {
        Some(file) => file.write(contents),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

fn open(path: &Option<PathBuf>) -> Result<Option<OutputFile>, Error> {
    path.as_ref().map(OutputFile::create).transpose()
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = resolve_config(&cli)?;
    match cli.command {
        Command::Analyze { s_list, r_list, c_range, out } => {
            let rows = experiments::analyze(&cfg, &s_list, &r_list, c_range.0..=c_range.1)?;
            let csv = experiments::analyze_csv(&rows)?;
            emit(open(&out)?, &csv)
        }
        Command::Copt { s, out } => {
            let report = experiments::copt(&cfg, s)?;
            emit(open(&out)?, &report.render())
        }
        Command::Simulate { protocol, seed, out, summary } => {
            let cfg = NetworkConfig { rng_seed: seed.unwrap_or(cfg.rng_seed), ..cfg };
            let trace_file = open(&out)?;
            let summary_file = open(&summary)?;
            let (csv, json) = experiments::simulate(&cfg, protocol)?;
            let trace_to_stdout = trace_file.is_none();
            emit(trace_file, &csv)?;
            match summary_file {
                Some(f) => f.write(&json),
                None if trace_to_stdout => {
                    eprint!("{json}");
                    Ok(())
                }
                None => emit(None, &json),
            }
        }
        Command::Compare { protocols, seeds, out } => {
            if protocols.len() < 2 {
                return Err(Error::Config("--protocols needs at least two entries".into()));
            }
            let file = open(&out)?;
            let cmp = experiments::compare(&cfg, &protocols, &seeds.0)?;
            emit(file, &experiments::comparison_json(&cmp)?)
        }
        Command::SweepR { r_list, seeds, out } => {
            for &r in &r_list {
                let check = NetworkConfig { exclusion_radius: r, ..cfg.clone() };
                check.validate()?;
            }
            let file = open(&out)?;
            let rows = experiments::sweep_r(&cfg, &r_list, &seeds.0)?;
            emit(file, &experiments::sweep_csv(&rows)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1..3,9").unwrap().0, vec![1, 2, 3, 9]);
        assert_eq!(parse_seeds("4-6").unwrap().0, vec![4, 5, 6]);
        assert_eq!(parse_seeds("1..=2").unwrap().0, vec![1, 2]);
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("5..2").is_err());
        assert!(parse_seeds("a").is_err());
    }

    #[test]
    fn cluster_ranges() {
        assert_eq!(parse_c_range("1..30").unwrap(), (1, 30));
        assert_eq!(parse_c_range("7").unwrap(), (7, 7));
        assert!(parse_c_range("0..5").is_err());
        assert!(parse_c_range("30..1").is_err());
    }

    #[test]
    fn every_config_key_has_a_flag() {
        let flags: Vec<_> = Overrides::default().pairs().iter().map(|(k, _)| *k).collect();
        assert_eq!(flags, config::KEYS);
    }
}
