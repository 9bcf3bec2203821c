//! Closed-form per-round energy of a network split into an excluded disk of
//! radius `R` around the base station and a clustered remainder, and the
//! cluster count that minimises it.
//!
//! Nodes are uniform over an `M × M` field whose clustered part is treated as
//! a disk of equal area, `M² − πR²`. The total is evaluated term for term in
//! the grouping
//!
//! ```text
//! E_total = l·s·[E_elec + ε_fs·R²/2]
//!         + l·(N−s)·[N·E_elec + (N−s)·E_DA + c·ε_mp·D²]
//!         + l·(N−s)²·[E_elec + ε_fs·D/c],       D = (M² − πR²)/(2π)
//! ```
//!
//! whose stationary point in `c` is `c_opt = d0·sqrt(2π(N−s)/(M² − πR²))`.
//! [`numeric_optimum`] finds the same point by direct minimisation and is
//! kept separate from [`optimal_cluster_count`] so each can check the other.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, Error, Result};
use crate::radio::RadioParams;

/// Largest admissible exclusion radius (exclusive) for a field of side `m`.
pub fn admissibility_bound(field_side: f64) -> f64 {
    field_side / PI.sqrt()
}

pub(crate) fn check_radius(field_side: f64, radius: f64) -> Result<()> {
    let bound = admissibility_bound(field_side);
    if !(radius.is_finite() && radius >= 0.0 && radius < bound) {
        return Err(Error::InadmissibleRadius { radius, bound });
    }
    Ok(())
}

fn check_clusters(c: f64) -> Result<()> {
    if c.is_finite() && c >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidClusterCount(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticInputs {
    pub n_total: usize,
    pub s_excluded: usize,
    /// Field side `M`, m.
    pub field_side: f64,
    /// Exclusion radius `R`, m.
    pub exclusion_radius: f64,
    /// Cluster count `c`; real-valued so the minimiser can treat it as continuous.
    pub cluster_count: f64,
    /// Message length `l`, bits.
    pub packet_bits: f64,
    pub radio: RadioParams,
}

impl Default for AnalyticInputs {
    fn default() -> Self {
        Self {
            n_total: 100,
            s_excluded: 0,
            field_side: 100.0,
            exclusion_radius: 0.0,
            cluster_count: 1.0,
            packet_bits: 4000.0,
            radio: RadioParams::default(),
        }
    }
}

impl AnalyticInputs {
    pub fn with_clusters(self, cluster_count: f64) -> Self {
        Self {
            cluster_count,
            ..self
        }
    }

    /// Checks everything except the cluster count.
    pub fn validate(&self) -> Result<()> {
        self.radio.validate()?;
        if self.s_excluded >= self.n_total {
            return Err(Error::NoClusteredNodes {
                excluded: self.s_excluded,
                total: self.n_total,
            });
        }
        if !(self.field_side.is_finite() && self.field_side > 0.0) {
            return Err(Error::Config(format!(
                "field side must be > 0, got {}",
                self.field_side
            )));
        }
        check_radius(self.field_side, self.exclusion_radius)?;
        non_negative("packet length", self.packet_bits)?;
        Ok(())
    }

    fn validate_with_clusters(&self) -> Result<()> {
        self.validate()?;
        check_clusters(self.cluster_count)
    }

    fn clustered(&self) -> f64 {
        (self.n_total - self.s_excluded) as f64
    }

    fn clustered_area(&self) -> f64 {
        let r = self.exclusion_radius;
        self.field_side * self.field_side - PI * r * r
    }
}

/// Mean squared distance to the centre for points uniform on a disk of radius `r`.
pub fn expected_sq_dist_excluded(radius: f64) -> Result<f64> {
    let r = non_negative("exclusion radius", radius)?;
    Ok(r * r / 2.0)
}

/// Mean squared member-to-head distance when the clustered area is split into `c` clusters.
pub fn expected_sq_dist_to_ch(field_side: f64, radius: f64, clusters: f64) -> Result<f64> {
    check_clusters(clusters)?;
    check_radius(field_side, radius)?;
    Ok((field_side * field_side - PI * radius * radius) / (2.0 * PI * clusters))
}

/// Mean squared distance from a clustered node to the base station.
pub fn expected_sq_dist_clustered_to_bs(field_side: f64, radius: f64) -> Result<f64> {
    check_radius(field_side, radius)?;
    Ok((field_side * field_side - PI * radius * radius) / (2.0 * PI))
}

/// Per-round energy of one excluded node, including the aggregation charge.
pub fn energy_excluded_node(inputs: &AnalyticInputs) -> Result<f64> {
    inputs.validate()?;
    let l = inputs.packet_bits;
    let radio = &inputs.radio;
    let d2 = expected_sq_dist_excluded(inputs.exclusion_radius)?;
    Ok(l * radio.e_elec + l * radio.e_da + l * radio.eps_fs * d2)
}

pub fn energy_cluster_head(inputs: &AnalyticInputs) -> Result<f64> {
    inputs.validate_with_clusters()?;
    let l = inputs.packet_bits;
    let radio = &inputs.radio;
    let per_cluster = inputs.clustered() / inputs.cluster_count;
    let d2 = expected_sq_dist_clustered_to_bs(inputs.field_side, inputs.exclusion_radius)?;
    Ok(l * radio.e_elec * (per_cluster - 1.0)
        + l * radio.e_da * per_cluster
        + l * radio.e_elec
        + l * radio.eps_mp * d2 * d2)
}

pub fn energy_member_node(inputs: &AnalyticInputs) -> Result<f64> {
    inputs.validate_with_clusters()?;
    let l = inputs.packet_bits;
    let d2 = expected_sq_dist_to_ch(
        inputs.field_side,
        inputs.exclusion_radius,
        inputs.cluster_count,
    )?;
    Ok(l * inputs.radio.e_elec + l * inputs.radio.eps_fs * d2)
}

/// Expected network energy per round, in the grouping given in the module docs.
pub fn total_energy_per_round(inputs: &AnalyticInputs) -> Result<f64> {
    inputs.validate_with_clusters()?;
    let AnalyticInputs {
        n_total,
        s_excluded,
        exclusion_radius: r,
        cluster_count: c,
        packet_bits: l,
        radio,
        ..
    } = *inputs;
    let n = n_total as f64;
    let s = s_excluded as f64;
    let k = n - s;
    let d = inputs.clustered_area() / (2.0 * PI);

    let excluded = l * s * (radio.e_elec + radio.eps_fs * r * r / 2.0);
    let heads = l * k * (n * radio.e_elec + k * radio.e_da + c * radio.eps_mp * d * d);
    let members = l * k * k * (radio.e_elec + radio.eps_fs * d / c);
    Ok(excluded + heads + members)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterOptimum {
    pub c_opt_real: f64,
    /// `round(c_opt_real)`, half away from zero, at least 1.
    pub c_opt_int: u32,
    /// `c_opt_real / (N − s)`.
    pub p_opt: f64,
}

pub fn optimal_cluster_count(inputs: &AnalyticInputs) -> Result<ClusterOptimum> {
    inputs.validate()?;
    let k = inputs.clustered();
    let c_opt_real = inputs.radio.crossover_distance() * (2.0 * PI * k / inputs.clustered_area()).sqrt();
    Ok(ClusterOptimum {
        c_opt_real,
        c_opt_int: (c_opt_real.round() as u32).max(1),
        p_opt: c_opt_real / k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub e_excluded_per_round: f64,
    pub e_ch_per_round: f64,
    pub e_member_per_round: f64,
    pub e_total_per_round: f64,
    pub c_opt_real: f64,
    pub c_opt_int: u32,
    pub p_opt: f64,
}

/// All closed-form quantities at `inputs.cluster_count`, plus the optimum.
pub fn evaluate(inputs: &AnalyticInputs) -> Result<AnalyticResult> {
    let opt = optimal_cluster_count(inputs)?;
    Ok(AnalyticResult {
        e_excluded_per_round: energy_excluded_node(inputs)?,
        e_ch_per_round: energy_cluster_head(inputs)?,
        e_member_per_round: energy_member_node(inputs)?,
        e_total_per_round: total_energy_per_round(inputs)?,
        c_opt_real: opt.c_opt_real,
        c_opt_int: opt.c_opt_int,
        p_opt: opt.p_opt,
    })
}

/// `(c, E_total)` for every integer `c` in the range.
pub fn energy_curve(inputs: &AnalyticInputs, clusters: RangeInclusive<u32>) -> Result<Vec<(u32, f64)>> {
    if clusters.is_empty() {
        return Err(Error::EmptyRange("cluster count range"));
    }
    clusters
        .map(|c| Ok((c, total_energy_per_round(&inputs.with_clusters(c as f64))?)))
        .collect()
}

/// Integer `c` in `1..=N−s` with the lowest total energy (first on ties).
pub fn integer_argmin(inputs: &AnalyticInputs) -> Result<(u32, f64)> {
    inputs.validate()?;
    let upper = (inputs.n_total - inputs.s_excluded) as u32;
    let curve = energy_curve(inputs, 1..=upper)?;
    Ok(curve
        .into_iter()
        .fold((0, f64::INFINITY), |best, (c, e)| if e < best.1 { (c, e) } else { best }))
}

/// Golden-section minimisation of the total energy over real `c ∈ [lo, hi]`.
pub fn numeric_optimum(inputs: &AnalyticInputs, lo: f64, hi: f64) -> Result<f64> {
    inputs.validate()?;
    check_clusters(lo)?;
    if !(hi > lo) {
        return Err(Error::EmptyRange("minimiser bracket"));
    }
    let f = |c: f64| total_energy_per_round(&inputs.with_clusters(c));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-9 * (1.0 + a.abs()) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}
