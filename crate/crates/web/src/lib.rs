//! Browser bindings for the static demo page in `www/`.
//!
//! Three operations: the analytic energy curve with its optimum, a
//! step-by-step simulation for the field view, and a full TDEEC/ATDEEC
//! comparison on one seed.

use atdeec::analytic::{self, AnalyticInputs};
use atdeec::sim::Simulation;
use atdeec::{NetworkConfig, ProtocolKind};
use wasm_bindgen::prelude::*;

fn js_err(e: atdeec::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn inputs(s: usize, radius: f64) -> AnalyticInputs {
    AnalyticInputs { s_excluded: s, exclusion_radius: radius, ..AnalyticInputs::default() }
}

fn curve(s: usize, radius: f64, c_min: u32, c_max: u32) -> atdeec::Result<Vec<f64>> {
    if c_min == 0 || c_max < c_min {
        return Err(atdeec::Error::EmptyRange("cluster count"));
    }
    let rows = analytic::energy_curve(&inputs(s, radius), c_min..=c_max)?;
    Ok(rows.into_iter().map(|(_, e)| e).collect())
}

fn optimum(s: usize, radius: f64) -> atdeec::Result<Vec<f64>> {
    let opt = analytic::optimal_cluster_count(&inputs(s, radius))?;
    Ok(vec![opt.c_opt_real, f64::from(opt.c_opt_int), opt.p_opt])
}

/// `E_total(c)` in joules for `c = c_min..=c_max` on the default 100-node field.
#[wasm_bindgen(js_name = energyCurve)]
pub fn energy_curve(s: usize, radius: f64, c_min: u32, c_max: u32) -> Result<Vec<f64>, JsError> {
    curve(s, radius, c_min, c_max).map_err(js_err)
}

/// `[c_opt_real, c_opt_int, p_opt]`.
#[wasm_bindgen(js_name = clusterOptimum)]
pub fn cluster_optimum(s: usize, radius: f64) -> Result<Vec<f64>, JsError> {
    optimum(s, radius).map_err(js_err)
}

fn parse_protocol(protocol: &str) -> atdeec::Result<ProtocolKind> {
    protocol.parse()
}

fn config(radius: f64, seed: u64, max_rounds: u32) -> NetworkConfig {
    NetworkConfig { exclusion_radius: radius, rng_seed: seed, max_rounds, ..NetworkConfig::default() }
}

/// Node states returned by [`Demo::states`].
pub const DEAD: u8 = 0;
pub const MEMBER: u8 = 1;
pub const HEAD: u8 = 2;
pub const EXCLUDED: u8 = 3;

/// A running simulation the page advances a few rounds per frame.
#[wasm_bindgen]
pub struct Demo {
    sim: Simulation,
    alive: usize,
    residual: f64,
    packets: u64,
}

impl Demo {
    fn build(protocol: &str, radius: f64, seed: u64, max_rounds: u32) -> atdeec::Result<Demo> {
        let cfg = config(radius, seed, max_rounds);
        let sim = Simulation::new(&cfg, parse_protocol(protocol)?)?;
        let residual = sim.nodes().iter().map(|n| n.reported_energy()).sum();
        Ok(Demo { alive: sim.nodes().len(), sim, residual, packets: 0 })
    }

    fn advance(&mut self, rounds: u32) -> atdeec::Result<bool> {
        for _ in 0..rounds {
            match self.sim.step()? {
                Some(rec) => self.packets = rec.packets_to_bs_cumulative,
                None => break,
            }
        }
        let nodes = self.sim.nodes();
        self.alive = nodes.iter().filter(|n| n.alive).count();
        self.residual = nodes.iter().map(|n| n.reported_energy()).sum();
        Ok(!self.sim.is_finished())
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(protocol: &str, radius: f64, seed: u64, max_rounds: u32) -> Result<Demo, JsError> {
        Demo::build(protocol, radius, seed, max_rounds).map_err(js_err)
    }

    /// Plays up to `rounds` rounds; false once the run is over.
    pub fn step(&mut self, rounds: u32) -> Result<bool, JsError> {
        self.advance(rounds).map_err(js_err)
    }

    pub fn round(&self) -> u32 {
        self.sim.round()
    }

    pub fn alive(&self) -> usize {
        self.alive
    }

    #[wasm_bindgen(js_name = residualEnergy)]
    pub fn residual_energy(&self) -> f64 {
        self.residual
    }

    pub fn packets(&self) -> u64 {
        self.packets
    }

    #[wasm_bindgen(js_name = fieldSide)]
    pub fn field_side(&self) -> f64 {
        self.sim.config().field_side
    }

    /// Interleaved `[x0, y0, x1, y1, ...]`, metres.
    pub fn positions(&self) -> Vec<f64> {
        self.sim.nodes().iter().flat_map(|n| [n.position.x, n.position.y]).collect()
    }

    /// One of `DEAD`, `MEMBER`, `HEAD`, `EXCLUDED` per node, for the last played round.
    pub fn states(&self) -> Vec<u8> {
        let heads = self.sim.cluster_heads();
        self.sim
            .nodes()
            .iter()
            .map(|n| match () {
                _ if !n.alive => DEAD,
                _ if n.is_excluded() => EXCLUDED,
                _ if heads.contains(&n.id) => HEAD,
                _ => MEMBER,
            })
            .collect()
    }
}

fn compare(radius: f64, seed: u64, max_rounds: u32) -> atdeec::Result<Vec<f64>> {
    let cfg = config(radius, seed, max_rounds);
    let mut out = Vec::with_capacity(6);
    for protocol in [ProtocolKind::Tdeec, ProtocolKind::Atdeec] {
        let (_, summary) = atdeec::sim::run_simulation(&cfg, protocol)?;
        out.extend([f64::from(summary.fnd_round), f64::from(summary.lnd_round), summary.total_packets as f64]);
    }
    Ok(out)
}

/// Runs both protocols to completion: `[fnd, lnd, packets]` for TDEEC then ATDEEC.
#[wasm_bindgen(js_name = compareProtocols)]
pub fn compare_protocols(radius: f64, seed: u64, max_rounds: u32) -> Result<Vec<f64>, JsError> {
    compare(radius, seed, max_rounds).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_minimum_sits_at_the_optimum() {
        let e = curve(0, 0.0, 1, 40).unwrap();
        let argmin = e.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0 + 1;
        let opt = optimum(0, 0.0).unwrap();
        assert_eq!(argmin as f64, opt[1]);
        assert!((opt[2] - opt[0] / 100.0).abs() < 1e-12);
        assert!(curve(0, 0.0, 5, 4).is_err());
    }

    #[test]
    fn demo_runs_to_the_end() {
        let mut demo = Demo::build("atdeec", 20.0, 3, 300).unwrap();
        assert_eq!(demo.positions().len(), 200);
        let start = demo.residual_energy();
        while demo.advance(50).unwrap() {}
        assert_eq!(demo.round(), 300);
        assert!(demo.residual_energy() < start);
        assert!(demo.packets() > 0);
        let states = demo.states();
        assert_eq!(states.len(), 100);
        assert!(states.iter().filter(|&&s| s != DEAD).count() == demo.alive());
        assert!(Demo::build("leach", 20.0, 3, 10).is_err());
    }

    #[test]
    fn heads_are_never_excluded() {
        let mut demo = Demo::build("atdeec", 30.0, 1, 50).unwrap();
        for _ in 0..50 {
            demo.advance(1).unwrap();
            let states = demo.states();
            for (node, state) in demo.sim.nodes().iter().zip(&states) {
                if node.is_excluded() {
                    assert_ne!(*state, HEAD);
                }
            }
        }
    }

    #[test]
    fn compare_returns_both_protocols() {
        let v = compare(20.0, 1, 500).unwrap();
        assert_eq!(v.len(), 6);
        assert!(v.iter().all(|x| *x > 0.0));
    }
}
