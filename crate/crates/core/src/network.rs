//! Node population: uniform placement on an `M × M` field, two-level energy
//! heterogeneity and the excluded/clustered zone split around the base
//! station.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::analytic::check_radius;
use crate::error::{non_negative, Error, Result};
use crate::radio::RadioParams;
use crate::sim::AverageEnergyMode;

/// Generator behind every seeded stream, recorded in run outputs.
pub type SimRng = rand_chacha::ChaCha8Rng;
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Field side `M`, m.
    pub field_side: f64,
    pub node_count: usize,
    /// Base station position; `None` puts it at the field centre.
    pub bs_position: Option<Point>,
    /// Exclusion radius `R`, m.
    pub exclusion_radius: f64,
    /// Initial energy of a normal node, J.
    pub base_energy: f64,
    /// Fraction of advanced nodes; `floor(fraction·N)` are created.
    pub advanced_fraction: f64,
    /// Advanced nodes start with `base_energy·(1 + factor)`.
    pub advanced_factor: f64,
    pub packet_bits: f64,
    pub max_rounds: u32,
    pub rng_seed: u64,
    pub radio: RadioParams,
    pub average_energy: AverageEnergyMode,
    /// Multiply the election threshold by `c_opt`.
    pub threshold_copt_factor: bool,
    /// Charge excluded nodes `l·E_DA` for their direct transmission.
    pub excluded_aggregation: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            field_side: 100.0,
            node_count: 100,
            bs_position: None,
            exclusion_radius: 20.0,
            base_energy: 0.5,
            advanced_fraction: 0.4,
            advanced_factor: 2.0,
            packet_bits: 4000.0,
            max_rounds: 8000,
            rng_seed: 1,
            radio: RadioParams::default(),
            average_energy: AverageEnergyMode::True,
            threshold_copt_factor: false,
            excluded_aggregation: true,
        }
    }
}

impl NetworkConfig {
    pub fn bs(&self) -> Point {
        self.bs_position
            .unwrap_or(Point::new(self.field_side / 2.0, self.field_side / 2.0))
    }

    pub fn advanced_count(&self) -> usize {
        (self.advanced_fraction * self.node_count as f64).floor() as usize
    }

    /// `N·E0·(1 + m·a)`, with `m·N` realised as a whole number of nodes.
    pub fn total_initial_energy(&self) -> f64 {
        let advanced = self.advanced_count();
        (self.node_count - advanced) as f64 * self.base_energy
            + advanced as f64 * self.base_energy * (1.0 + self.advanced_factor)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.field_side.is_finite() && self.field_side > 0.0) {
            return bad(format!("field_side must be > 0, got {}", self.field_side));
        }
        if self.node_count == 0 {
            return bad("node_count must be >= 1".into());
        }
        if !(self.base_energy.is_finite() && self.base_energy > 0.0) {
            return bad(format!("base_energy must be > 0, got {}", self.base_energy));
        }
        if !(0.0..=1.0).contains(&self.advanced_fraction) {
            return bad(format!(
                "advanced_fraction must lie in [0, 1], got {}",
                self.advanced_fraction
            ));
        }
        if !(self.advanced_factor.is_finite() && self.advanced_factor >= 0.0) {
            return bad(format!(
                "advanced_factor must be >= 0, got {}",
                self.advanced_factor
            ));
        }
        if let Some(p) = self.bs_position {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return bad(format!("bs position ({}, {}) is not finite", p.x, p.y));
            }
        }
        non_negative("packet_bits", self.packet_bits)?;
        check_radius(self.field_side, self.exclusion_radius)?;
        self.radio.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyClass {
    Normal,
    Advanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    /// Within `R` of the base station; sends directly.
    Excluded,
    Clustered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub position: Point,
    pub energy_class: EnergyClass,
    pub initial_energy: f64,
    /// Can dip below zero in the round a node dies; see [`Node::reported_energy`].
    pub residual_energy: f64,
    pub zone: Zone,
    pub alive: bool,
    /// Rounds left before the node may stand for election again.
    pub epoch_state: u32,
}

impl Node {
    pub fn reported_energy(&self) -> f64 {
        self.residual_energy.max(0.0)
    }

    pub fn is_excluded(&self) -> bool {
        self.zone == Zone::Excluded
    }
}

/// Zone for a node at `position`; a node exactly on the circle is clustered.
pub fn zone_for(position: Point, bs: Point, radius: f64) -> Zone {
    if position.distance(bs) < radius {
        Zone::Excluded
    } else {
        Zone::Clustered
    }
}

/// Deploys with a fresh stream seeded from `config.rng_seed`.
pub fn deploy(config: &NetworkConfig) -> Result<Vec<Node>> {
    deploy_with(config, &mut seeded_rng(config.rng_seed))
}

/// Draws `N` positions (x then y per node, in id order), then picks the
/// advanced nodes with one shuffle of the ids. The zone split consumes no
/// randomness, so deployments depend on the seed but not on `R`.
pub fn deploy_with<R: Rng + ?Sized>(config: &NetworkConfig, rng: &mut R) -> Result<Vec<Node>> {
    config.validate()?;
    let m = config.field_side;
    let bs = config.bs();
    let positions: Vec<Point> = (0..config.node_count)
        .map(|_| {
            let x = rng.gen_range(0.0..m);
            let y = rng.gen_range(0.0..m);
            Point::new(x, y)
        })
        .collect();

    let mut ids: Vec<usize> = (0..config.node_count).collect();
    ids.shuffle(rng);
    let mut advanced = vec![false; config.node_count];
    for &id in &ids[..config.advanced_count()] {
        advanced[id] = true;
    }

    Ok(positions
        .into_iter()
        .enumerate()
        .map(|(id, position)| {
            let (energy_class, initial_energy) = if advanced[id] {
                (
                    EnergyClass::Advanced,
                    config.base_energy * (1.0 + config.advanced_factor),
                )
            } else {
                (EnergyClass::Normal, config.base_energy)
            };
            Node {
                id,
                position,
                energy_class,
                initial_energy,
                residual_energy: initial_energy,
                zone: zone_for(position, bs, config.exclusion_radius),
                alive: true,
                epoch_state: 0,
            }
        })
        .collect())
}

pub fn total_initial_energy(nodes: &[Node]) -> f64 {
    nodes.iter().map(|n| n.initial_energy).sum()
}

pub fn excluded_count(nodes: &[Node]) -> usize {
    nodes.iter().filter(|n| n.is_excluded()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn deterministic_given_seed() {
        let cfg = NetworkConfig::default();
        assert_eq!(deploy(&cfg).unwrap(), deploy(&cfg).unwrap());
        let other = NetworkConfig { rng_seed: 2, ..cfg.clone() };
        assert_ne!(deploy(&cfg).unwrap(), deploy(&other).unwrap());
    }

    #[test]
    fn radius_does_not_move_nodes() {
        let a = deploy(&NetworkConfig { exclusion_radius: 0.0, ..Default::default() }).unwrap();
        let b = deploy(&NetworkConfig::default()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.position, y.position);
            assert_eq!(x.energy_class, y.energy_class);
        }
    }

    #[test]
    fn zero_radius_excludes_nothing() {
        let nodes = deploy(&NetworkConfig { exclusion_radius: 0.0, ..Default::default() }).unwrap();
        assert_eq!(excluded_count(&nodes), 0);
    }

    #[test]
    fn excluded_count_tracks_disk_area() {
        let seeds = 200;
        let total: usize = (0..seeds)
            .map(|seed| excluded_count(&deploy(&NetworkConfig { rng_seed: seed, ..Default::default() }).unwrap()))
            .sum();
        let mean = total as f64 / seeds as f64;
        let expected = 100.0 * PI * 400.0 / 10_000.0;
        assert!((11.0..=14.0).contains(&mean), "mean {mean}, expected {expected}");
    }

    #[test]
    fn excluded_count_matches_positions() {
        let cfg = NetworkConfig { rng_seed: 42, ..Default::default() };
        let nodes = deploy(&cfg).unwrap();
        let recomputed = nodes
            .iter()
            .filter(|n| n.position.distance(cfg.bs()) < cfg.exclusion_radius)
            .count();
        assert_eq!(excluded_count(&nodes), recomputed);
        for n in &nodes {
            assert_eq!(n.is_excluded(), n.position.distance(cfg.bs()) < cfg.exclusion_radius);
            assert!(n.position.x >= 0.0 && n.position.x < 100.0);
            assert!(n.position.y >= 0.0 && n.position.y < 100.0);
        }
    }

    #[test]
    fn all_nodes_at_base_station_are_excluded() {
        let cfg = NetworkConfig::default();
        let mut nodes = deploy(&cfg).unwrap();
        for n in &mut nodes {
            n.position = cfg.bs();
            n.zone = zone_for(n.position, cfg.bs(), cfg.exclusion_radius);
        }
        assert_eq!(excluded_count(&nodes), nodes.len());
    }

    #[test]
    fn boundary_tie_is_clustered() {
        let bs = Point::new(50.0, 50.0);
        assert_eq!(zone_for(Point::new(70.0, 50.0), bs, 20.0), Zone::Clustered);
        assert_eq!(zone_for(Point::new(69.999, 50.0), bs, 20.0), Zone::Excluded);
    }

    #[test]
    fn initial_energy() {
        let nodes = deploy(&NetworkConfig::default()).unwrap();
        assert_eq!(total_initial_energy(&nodes), 90.0);
        assert_eq!(NetworkConfig::default().total_initial_energy(), 90.0);
        let advanced: Vec<_> = nodes.iter().filter(|n| n.energy_class == EnergyClass::Advanced).collect();
        assert_eq!(advanced.len(), 40);
        assert!(advanced.iter().all(|n| n.initial_energy == 1.5));

        let homo = NetworkConfig { advanced_fraction: 0.0, ..Default::default() };
        assert_eq!(total_initial_energy(&deploy(&homo).unwrap()), 50.0);

        let single = NetworkConfig { node_count: 1, advanced_fraction: 0.0, ..Default::default() };
        assert_eq!(total_initial_energy(&deploy(&single).unwrap()), 0.5);
    }

    #[test]
    fn floor_of_advanced_fraction() {
        let cfg = NetworkConfig { node_count: 7, advanced_fraction: 0.5, ..Default::default() };
        let nodes = deploy(&cfg).unwrap();
        assert_eq!(nodes.iter().filter(|n| n.energy_class == EnergyClass::Advanced).count(), 3);
    }

    #[test]
    fn invalid_config_rejected() {
        let base = NetworkConfig::default();
        for cfg in [
            NetworkConfig { node_count: 0, ..base.clone() },
            NetworkConfig { base_energy: 0.0, ..base.clone() },
            NetworkConfig { advanced_fraction: 1.5, ..base.clone() },
            NetworkConfig { advanced_factor: -1.0, ..base.clone() },
            NetworkConfig { exclusion_radius: 57.0, ..base.clone() },
            NetworkConfig { field_side: -1.0, ..base.clone() },
            NetworkConfig { packet_bits: -1.0, ..base.clone() },
        ] {
            assert!(deploy(&cfg).is_err(), "{cfg:?}");
        }
    }
}
