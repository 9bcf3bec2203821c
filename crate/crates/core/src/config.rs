//! Flat `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, unknown keys are errors.
//! Values are SI: metres, joules, J/bit, bits. Keys start from
//! [`NetworkConfig::default`] and are applied in file order.
//!
//! ```text
//! # 100 nodes on a 100 m field
//! field_side = 100
//! node_count = 100
//! exclusion_radius = 20
//! e_elec = 50e-9
//! average_energy = true
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{NetworkConfig, Point};

/// Every recognised key, in the order [`render`] writes them.
pub const KEYS: &[&str] = &[
    "field_side",
    "node_count",
    "bs_x",
    "bs_y",
    "exclusion_radius",
    "base_energy",
    "advanced_fraction",
    "advanced_factor",
    "packet_bits",
    "max_rounds",
    "rng_seed",
    "e_elec",
    "e_da",
    "eps_fs",
    "eps_mp",
    "average_energy",
    "threshold_copt_factor",
    "excluded_aggregation",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

/// Sets one key. `bs_x`/`bs_y` fill the other coordinate from the current
/// field centre when the base station was not yet placed explicitly.
pub fn apply(config: &mut NetworkConfig, key: &str, value: &str) -> Result<()> {
    let value = value.trim();
    match key {
        "field_side" => config.field_side = parse(key, value)?,
        "node_count" => config.node_count = parse(key, value)?,
        "bs_x" => {
            let bs = config.bs();
            config.bs_position = Some(Point::new(parse(key, value)?, bs.y));
        }
        "bs_y" => {
            let bs = config.bs();
            config.bs_position = Some(Point::new(bs.x, parse(key, value)?));
        }
        "exclusion_radius" => config.exclusion_radius = parse(key, value)?,
        "base_energy" => config.base_energy = parse(key, value)?,
        "advanced_fraction" => config.advanced_fraction = parse(key, value)?,
        "advanced_factor" => config.advanced_factor = parse(key, value)?,
        "packet_bits" => config.packet_bits = parse(key, value)?,
        "max_rounds" => config.max_rounds = parse(key, value)?,
        "rng_seed" => config.rng_seed = parse(key, value)?,
        "e_elec" => config.radio.e_elec = parse(key, value)?,
        "e_da" => config.radio.e_da = parse(key, value)?,
        "eps_fs" => config.radio.eps_fs = parse(key, value)?,
        "eps_mp" => config.radio.eps_mp = parse(key, value)?,
        "average_energy" => config.average_energy = value.parse::<crate::sim::AverageEnergyMode>()?,
        "threshold_copt_factor" => config.threshold_copt_factor = parse_bool(key, value)?,
        "excluded_aggregation" => config.excluded_aggregation = parse_bool(key, value)?,
        _ => return Err(Error::Config(format!("unknown key {key:?}"))),
    }
    Ok(())
}

/// Applies every line of `text` on top of `base`. The result is not validated.
pub fn parse_onto(base: NetworkConfig, text: &str) -> Result<NetworkConfig> {
    let mut config = base;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
        })?;
        apply(&mut config, key.trim(), value)
            .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(config)
}

pub fn parse_str(text: &str) -> Result<NetworkConfig> {
    let config = parse_onto(NetworkConfig::default(), text)?;
    config.validate()?;
    Ok(config)
}

pub fn load(path: impl AsRef<Path>) -> Result<NetworkConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_str(&text)
}

/// Writes every key; `parse_str(&render(c))` reproduces `c` exactly.
pub fn render(config: &NetworkConfig) -> String {
    let bs = config.bs();
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("field_side", config.field_side.to_string());
    put("node_count", config.node_count.to_string());
    put("bs_x", bs.x.to_string());
    put("bs_y", bs.y.to_string());
    put("exclusion_radius", config.exclusion_radius.to_string());
    put("base_energy", config.base_energy.to_string());
    put("advanced_fraction", config.advanced_fraction.to_string());
    put("advanced_factor", config.advanced_factor.to_string());
    put("packet_bits", config.packet_bits.to_string());
    put("max_rounds", config.max_rounds.to_string());
    put("rng_seed", config.rng_seed.to_string());
    put("e_elec", format!("{:e}", config.radio.e_elec));
    put("e_da", format!("{:e}", config.radio.e_da));
    put("eps_fs", format!("{:e}", config.radio.eps_fs));
    put("eps_mp", format!("{:e}", config.radio.eps_mp));
    put("average_energy", config.average_energy.to_string());
    put("threshold_copt_factor", config.threshold_copt_factor.to_string());
    put("excluded_aggregation", config.excluded_aggregation.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::AverageEnergyMode;
    use proptest::prelude::*;

    #[test]
    fn comments_blank_lines_and_whitespace() {
        let cfg = parse_str(
            "# header\n\n  field_side = 200  # trailing\nnode_count=50\nexclusion_radius =10\naverage_energy = estimate\n",
        )
        .unwrap();
        assert_eq!(cfg.field_side, 200.0);
        assert_eq!(cfg.node_count, 50);
        assert_eq!(cfg.exclusion_radius, 10.0);
        assert_eq!(cfg.average_energy, AverageEnergyMode::Estimate);
        assert_eq!(cfg.bs(), Point::new(100.0, 100.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_str("bogus = 1"), Err(Error::Config(_))));
        assert!(matches!(parse_str("field_side 100"), Err(Error::Config(_))));
        assert!(matches!(parse_str("node_count = many"), Err(Error::Config(_))));
        assert!(matches!(parse_str("excluded_aggregation = maybe"), Err(Error::Config(_))));
        assert!(matches!(parse_str("exclusion_radius = 80"), Err(Error::InadmissibleRadius { .. })));
    }

    #[test]
    fn base_station_coordinates() {
        let cfg = parse_str("bs_x = 10\n").unwrap();
        assert_eq!(cfg.bs(), Point::new(10.0, 50.0));
    }

    #[test]
    fn load_reports_missing_file() {
        assert!(matches!(load("/nonexistent/dir/x.conf"), Err(Error::Io { .. })));
    }

    proptest! {
        #[test]
        fn render_round_trips(
            side in 10.0f64..1000.0,
            n in 1usize..500,
            frac in 0.0f64..1.0,
            factor in 0.0f64..5.0,
            seed in any::<u64>(),
            r_frac in 0.0f64..0.99,
            est in any::<bool>(),
            agg in any::<bool>(),
        ) {
            let cfg = NetworkConfig {
                field_side: side,
                node_count: n,
                exclusion_radius: r_frac * side / std::f64::consts::PI.sqrt(),
                advanced_fraction: frac,
                advanced_factor: factor,
                rng_seed: seed,
                average_energy: if est { AverageEnergyMode::Estimate } else { AverageEnergyMode::True },
                excluded_aggregation: agg,
                ..Default::default()
            };
            let back = parse_str(&render(&cfg)).unwrap();
            prop_assert_eq!(back.bs(), cfg.bs());
            prop_assert_eq!(NetworkConfig { bs_position: None, ..back }, cfg);
        }
    }
}
