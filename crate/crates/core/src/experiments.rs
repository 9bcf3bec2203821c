//! Experiment drivers behind the CLI subcommands.
//!
//! Every driver validates its inputs before doing any work, returns plain
//! data, and has a matching renderer that produces the exact bytes written
//! to disk. Multi-seed drivers run seeds in parallel (feature `parallel`)
//! but always aggregate in ascending seed order.
//!
//! | command    | output | columns / fields |
//! |------------|--------|------------------|
//! | `analyze`  | CSV    | `s,R,c,e_total_J` |
//! | `copt`     | text   | `key: value` lines |
//! | `simulate` | CSV    | `round,alive_total,alive_normal,alive_advanced,alive_excluded,ch_count,residual_energy_J,packets_round,packets_cum` |
//! | `simulate` | JSON   | summary: `fnd_round`, `lnd_round`, `total_packets`, `seed`, `rng_algorithm`, `config`, ... |
//! | `compare`  | JSON   | per-protocol [`ComparisonStats`] plus `fnd_ratio`, `lnd_ratio`, `packets_ratio` |
//! | `sweep-r`  | CSV    | `R,c_opt_int,fnd_mean,fnd_std,lnd_mean` |

use std::f64::consts::PI;
use std::fs::File;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{self, check_radius, AnalyticInputs};
use crate::error::{Error, Result};
use crate::network::{NetworkConfig, RNG_ALGORITHM};
use crate::sim::{run_simulation, ProtocolKind, RoundRecord, SimulationSummary};

/// An output file opened before any computation so bad paths fail fast.
pub struct OutputFile {
    path: PathBuf,
    file: File,
}

impl OutputFile {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Self { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn write(mut self, contents: &str) -> Result<()> {
        self.file
            .write_all(contents.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn sorted_seeds(seeds: &[u64]) -> Result<Vec<u64>> {
    if seeds.is_empty() {
        return Err(Error::EmptyRange("seed list"));
    }
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    Ok(seeds)
}

/// Maps `f` over `items`, in parallel when enabled, preserving input order.
fn ordered_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Mean and sample standard deviation; the deviation is 0 for a single value.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

fn analytic_inputs(config: &NetworkConfig, s_excluded: usize, radius: f64) -> AnalyticInputs {
    AnalyticInputs {
        n_total: config.node_count,
        s_excluded,
        field_side: config.field_side,
        exclusion_radius: radius,
        cluster_count: 1.0,
        packet_bits: config.packet_bits,
        radio: config.radio,
    }
}

// ── analyze ────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub s: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub c: u32,
    #[serde(rename = "e_total_J")]
    pub e_total: f64,
}

/// Total-energy curves over `c` for every `(s, R)` pair, `s` outermost.
pub fn analyze(
    config: &NetworkConfig,
    s_list: &[usize],
    r_list: &[f64],
    clusters: RangeInclusive<u32>,
) -> Result<Vec<CurveRow>> {
    if clusters.is_empty() || *clusters.start() == 0 {
        return Err(Error::EmptyRange("cluster range (must be non-empty and start at >= 1)"));
    }
    if s_list.is_empty() {
        return Err(Error::EmptyRange("s list"));
    }
    if r_list.is_empty() {
        return Err(Error::EmptyRange("R list"));
    }
    for &r in r_list {
        check_radius(config.field_side, r)?;
    }
    let mut rows = Vec::new();
    for &s in s_list {
        for &r in r_list {
            let inputs = analytic_inputs(config, s, r);
            for (c, e) in analytic::energy_curve(&inputs, clusters.clone())? {
                rows.push(CurveRow { s, radius: r, c, e_total: e });
            }
        }
    }
    Ok(rows)
}

pub fn analyze_csv(rows: &[CurveRow]) -> Result<String> {
    to_csv(rows)
}

// ── copt ───────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoptReport {
    pub n: usize,
    pub s: usize,
    pub radius: f64,
    pub c_opt_real: f64,
    pub c_opt_int: u32,
    pub p_opt: f64,
    pub d0: f64,
    /// Golden-section minimiser of the total energy over `c ∈ [1, N−s]`.
    pub c_numeric: f64,
}

pub fn copt(config: &NetworkConfig, s_excluded: usize) -> Result<CoptReport> {
    let inputs = analytic_inputs(config, s_excluded, config.exclusion_radius);
    let opt = analytic::optimal_cluster_count(&inputs)?;
    let upper = ((config.node_count - s_excluded) as f64).max(2.0);
    Ok(CoptReport {
        n: config.node_count,
        s: s_excluded,
        radius: config.exclusion_radius,
        c_opt_real: opt.c_opt_real,
        c_opt_int: opt.c_opt_int,
        p_opt: opt.p_opt,
        d0: config.radio.crossover_distance(),
        c_numeric: analytic::numeric_optimum(&inputs, 1.0, upper)?,
    })
}

impl CoptReport {
    pub fn render(&self) -> String {
        format!(
            "n: {}\ns: {}\nR: {}\nc_opt_real: {}\nc_opt_int: {}\np_opt: {}\nd0: {}\nc_numeric: {}\n",
            self.n, self.s, self.radius, self.c_opt_real, self.c_opt_int, self.p_opt, self.d0, self.c_numeric
        )
    }
}

// ── simulate ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub round: u32,
    pub alive_total: usize,
    pub alive_normal: usize,
    pub alive_advanced: usize,
    pub alive_excluded: usize,
    pub ch_count: usize,
    #[serde(rename = "residual_energy_J")]
    pub residual_energy: f64,
    pub packets_round: u64,
    pub packets_cum: u64,
}

impl From<&RoundRecord> for TraceRow {
    fn from(r: &RoundRecord) -> Self {
        Self {
            round: r.round,
            alive_total: r.alive_total,
            alive_normal: r.alive_normal,
            alive_advanced: r.alive_advanced,
            alive_excluded: r.alive_excluded,
            ch_count: r.ch_count,
            residual_energy: r.residual_energy_total,
            packets_round: r.packets_to_bs_round,
            packets_cum: r.packets_to_bs_cumulative,
        }
    }
}

pub fn trace_csv(trace: &[RoundRecord]) -> Result<String> {
    let rows: Vec<TraceRow> = trace.iter().map(TraceRow::from).collect();
    if rows.is_empty() {
        // Header only.
        return Ok("round,alive_total,alive_normal,alive_advanced,alive_excluded,ch_count,residual_energy_J,packets_round,packets_cum\n".into());
    }
    to_csv(&rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub protocol: ProtocolKind,
    pub fnd_round: u32,
    pub lnd_round: u32,
    pub total_packets: u64,
    pub rounds_simulated: u32,
    pub seed: u64,
    pub rng_algorithm: String,
    pub config: NetworkConfig,
}

fn echo(config: &NetworkConfig) -> NetworkConfig {
    NetworkConfig {
        bs_position: Some(config.bs()),
        ..config.clone()
    }
}

pub fn summary_json(config: &NetworkConfig, summary: &SimulationSummary) -> Result<String> {
    to_json(&SummaryDocument {
        protocol: summary.protocol,
        fnd_round: summary.fnd_round,
        lnd_round: summary.lnd_round,
        total_packets: summary.total_packets,
        rounds_simulated: summary.rounds_simulated,
        seed: summary.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        config: echo(config),
    })
}

/// One seeded run; returns `(trace CSV, summary JSON)`.
pub fn simulate(config: &NetworkConfig, protocol: ProtocolKind) -> Result<(String, String)> {
    let (trace, summary) = run_simulation(config, protocol)?;
    Ok((trace_csv(&trace)?, summary_json(config, &summary)?))
}

// ── compare ────────────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStats {
    pub protocol: ProtocolKind,
    pub runs: usize,
    pub fnd_mean: f64,
    pub fnd_std: f64,
    pub lnd_mean: f64,
    pub lnd_std: f64,
    pub packets_mean: f64,
    pub packets_std: f64,
}

impl ComparisonStats {
    pub fn from_summaries(protocol: ProtocolKind, runs: &[SimulationSummary]) -> Self {
        let col = |f: fn(&SimulationSummary) -> f64| mean_std(&runs.iter().map(f).collect::<Vec<_>>());
        let (fnd_mean, fnd_std) = col(|s| f64::from(s.fnd_round));
        let (lnd_mean, lnd_std) = col(|s| f64::from(s.lnd_round));
        let (packets_mean, packets_std) = col(|s| s.total_packets as f64);
        Self {
            protocol,
            runs: runs.len(),
            fnd_mean,
            fnd_std,
            lnd_mean,
            lnd_std,
            packets_mean,
            packets_std,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub seeds: Vec<u64>,
    pub stats: Vec<ComparisonStats>,
    /// Second protocol over the first.
    pub fnd_ratio: f64,
    pub lnd_ratio: f64,
    pub packets_ratio: f64,
    pub rng_algorithm: String,
    pub config: NetworkConfig,
}

/// Runs each protocol on each seed. A seed gives the same deployment to
/// every protocol, so differences are never down to placement luck.
pub fn compare(config: &NetworkConfig, protocols: &[ProtocolKind], seeds: &[u64]) -> Result<Comparison> {
    if protocols.len() < 2 {
        return Err(Error::Config(format!(
            "compare needs at least two protocols, got {}",
            protocols.len()
        )));
    }
    config.validate()?;
    let seeds = sorted_seeds(seeds)?;
    let jobs: Vec<(usize, u64)> = (0..protocols.len())
        .flat_map(|p| seeds.iter().map(move |&s| (p, s)))
        .collect();
    let summaries = ordered_map(&jobs, |&(p, seed)| {
        let cfg = NetworkConfig { rng_seed: seed, ..config.clone() };
        run_simulation(&cfg, protocols[p]).map(|(_, s)| s)
    })?;
    let stats: Vec<ComparisonStats> = summaries
        .chunks(seeds.len())
        .zip(protocols)
        .map(|(runs, &p)| ComparisonStats::from_summaries(p, runs))
        .collect();
    let (base, other) = (&stats[0], &stats[1]);
    Ok(Comparison {
        fnd_ratio: other.fnd_mean / base.fnd_mean,
        lnd_ratio: other.lnd_mean / base.lnd_mean,
        packets_ratio: other.packets_mean / base.packets_mean,
        seeds,
        stats,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        config: echo(config),
    })
}

pub fn comparison_json(comparison: &Comparison) -> Result<String> {
    to_json(comparison)
}

// ── sweep-r ────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "R")]
    pub radius: f64,
    pub c_opt_int: u32,
    pub fnd_mean: f64,
    pub fnd_std: f64,
    pub lnd_mean: f64,
}

/// Excluded count expected from geometry, `round(N·πR²/M²)`, capped below `N`.
pub fn expected_excluded(config: &NetworkConfig, radius: f64) -> usize {
    let frac = PI * radius * radius / (config.field_side * config.field_side);
    ((config.node_count as f64 * frac).round() as usize).min(config.node_count.saturating_sub(1))
}

/// ATDEEC FND/LND over `seeds` for each radius. `c_opt_int` comes from the
/// analytic model with `s` tied to geometry.
pub fn sweep_r(config: &NetworkConfig, r_list: &[f64], seeds: &[u64]) -> Result<Vec<SweepRow>> {
    if r_list.is_empty() {
        return Err(Error::EmptyRange("R list"));
    }
    for &r in r_list {
        check_radius(config.field_side, r)?;
    }
    config.validate()?;
    let seeds = sorted_seeds(seeds)?;
    let jobs: Vec<(f64, u64)> = r_list
        .iter()
        .flat_map(|&r| seeds.iter().map(move |&s| (r, s)))
        .collect();
    let summaries = ordered_map(&jobs, |&(r, seed)| {
        let cfg = NetworkConfig { rng_seed: seed, exclusion_radius: r, ..config.clone() };
        run_simulation(&cfg, ProtocolKind::Atdeec).map(|(_, s)| s)
    })?;
    r_list
        .iter()
        .zip(summaries.chunks(seeds.len()))
        .map(|(&r, runs)| {
            let opt = analytic::optimal_cluster_count(&analytic_inputs(config, expected_excluded(config, r), r))?;
            let stats = ComparisonStats::from_summaries(ProtocolKind::Atdeec, runs);
            Ok(SweepRow {
                radius: r,
                c_opt_int: opt.c_opt_int,
                fnd_mean: stats.fnd_mean,
                fnd_std: stats.fnd_std,
                lnd_mean: stats.lnd_mean,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    to_csv(rows)
}
