//! First-order radio model.
//!
//! Sending `l` bits over `d` metres costs `l·E_elec` for the electronics plus
//! an amplifier term that is free-space (`ε_fs·d²`) below the crossover
//! distance `d0 = sqrt(ε_fs/ε_mp)` and multipath (`ε_mp·d⁴`) at or above it.
//! Receiving costs `l·E_elec`; fusing `n` signals costs `l·n·E_DA`.
//!
//! All quantities are SI: joules, bits, metres.

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    /// Transmit/receive electronics, J/bit.
    pub e_elec: f64,
    /// Data aggregation, J/bit/signal.
    pub e_da: f64,
    /// Free-space amplifier, J/bit/m².
    pub eps_fs: f64,
    /// Multipath amplifier, J/bit/m⁴.
    pub eps_mp: f64,
}

impl Default for RadioParams {
    /// 50 nJ/bit electronics, 5 pJ/bit/signal aggregation,
    /// 10 pJ/bit/m² free space, 0.0013 pJ/bit/m⁴ multipath.
    fn default() -> Self {
        Self {
            e_elec: 50e-9,
            e_da: 5e-12,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
        }
    }
}

impl RadioParams {
    pub fn new(e_elec: f64, e_da: f64, eps_fs: f64, eps_mp: f64) -> Result<Self> {
        let params = Self {
            e_elec,
            e_da,
            eps_fs,
            eps_mp,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("e_elec", self.e_elec),
            ("e_da", self.e_da),
            ("eps_fs", self.eps_fs),
            ("eps_mp", self.eps_mp),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidRadio(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        let d0 = self.crossover_distance();
        if !(d0.is_finite() && d0 > 0.0) {
            return Err(Error::InvalidRadio(format!(
                "crossover distance {d0} is not finite and positive"
            )));
        }
        Ok(())
    }

    /// Distance at which the amplifier switches from the d² to the d⁴ law.
    pub fn crossover_distance(&self) -> f64 {
        (self.eps_fs / self.eps_mp).sqrt()
    }

    /// Amplifier energy per bit at distance `d`, branch chosen by `d0`.
    pub fn amplifier_per_bit(&self, d: f64) -> f64 {
        if d < self.crossover_distance() {
            self.eps_fs * d * d
        } else {
            self.eps_mp * d * d * d * d
        }
    }

    pub fn transmit_energy(&self, bits: f64, distance: f64) -> Result<f64> {
        let bits = non_negative("message length", bits)?;
        let distance = non_negative("distance", distance)?;
        Ok(bits * self.e_elec + bits * self.amplifier_per_bit(distance))
    }

    pub fn receive_energy(&self, bits: f64) -> Result<f64> {
        let bits = non_negative("message length", bits)?;
        Ok(bits * self.e_elec)
    }

    pub fn aggregation_energy(&self, bits: f64, signals: f64) -> Result<f64> {
        let bits = non_negative("message length", bits)?;
        let signals = non_negative("signal count", signals)?;
        Ok(bits * signals * self.e_da)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn crossover_distance_examples() {
        let d0 = RadioParams::default().crossover_distance();
        assert!((d0 - 87.7058).abs() < 1e-4, "{d0}");

        let equal = RadioParams::new(1e-9, 1e-12, 3e-12, 3e-12).unwrap();
        assert!((equal.crossover_distance() - 1.0).abs() < 1e-15);

        let four = RadioParams::new(1e-9, 1e-12, 4e-12, 1e-12).unwrap();
        assert!((four.crossover_distance() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn transmit_examples() {
        let p = RadioParams::default();
        // 4000·50e-9 + 4000·10e-12·10²
        assert!(rel_close(p.transmit_energy(4000.0, 10.0).unwrap(), 2.04e-4, 1e-12));
        // 4000·50e-9 + 4000·1.3e-15·100⁴
        assert!(rel_close(p.transmit_energy(4000.0, 100.0).unwrap(), 7.2e-4, 1e-12));
        assert_eq!(p.transmit_energy(0.0, 55.0).unwrap(), 0.0);
    }

    #[test]
    fn receive_and_aggregation_examples() {
        let p = RadioParams::default();
        assert!(rel_close(p.receive_energy(4000.0).unwrap(), 2.0e-4, 1e-12));
        assert_eq!(p.receive_energy(0.0).unwrap(), 0.0);
        let unit = RadioParams::new(1e-9, 1e-12, 1e-12, 1e-12).unwrap();
        assert_eq!(unit.receive_energy(1.0).unwrap(), 1e-9);

        assert!(rel_close(p.aggregation_energy(4000.0, 10.0).unwrap(), 2.0e-7, 1e-12));
        assert_eq!(p.aggregation_energy(4000.0, 0.0).unwrap(), 0.0);
        assert!(rel_close(p.aggregation_energy(4000.0, 1.0).unwrap(), 2.0e-8, 1e-12));
    }

    #[test]
    fn negative_inputs_rejected() {
        let p = RadioParams::default();
        assert!(p.transmit_energy(-1.0, 1.0).is_err());
        assert!(p.transmit_energy(1.0, -1.0).is_err());
        assert!(p.receive_energy(-1.0).is_err());
        assert!(p.aggregation_energy(-1.0, 1.0).is_err());
        assert!(p.aggregation_energy(1.0, -1.0).is_err());
        assert!(p.transmit_energy(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn non_positive_coefficients_rejected() {
        assert!(RadioParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(RadioParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(RadioParams::new(1.0, 1.0, f64::INFINITY, 1.0).is_err());
        assert!(RadioParams::new(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn branches_agree_at_crossover() {
        let p = RadioParams::default();
        let d0 = p.crossover_distance();
        let fs = p.eps_fs * d0 * d0;
        let mp = p.eps_mp * d0.powi(4);
        assert!(rel_close(fs, mp, 1e-12), "{fs} vs {mp}");
    }

    proptest! {
        #[test]
        fn transmit_monotone_in_distance(l in 0.0f64..1e5, d1 in 0.0f64..500.0, d2 in 0.0f64..500.0) {
            let p = RadioParams::default();
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let a = p.transmit_energy(l, lo).unwrap();
            let b = p.transmit_energy(l, hi).unwrap();
            prop_assert!(a <= b * (1.0 + 1e-12));
        }

        #[test]
        fn transmit_monotone_in_length(d in 0.0f64..500.0, l1 in 0.0f64..1e5, l2 in 0.0f64..1e5) {
            let p = RadioParams::default();
            let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
            prop_assert!(p.transmit_energy(lo, d).unwrap() <= p.transmit_energy(hi, d).unwrap());
        }

        #[test]
        fn linear_in_length(l in 0.0f64..1e5, d in 0.0f64..500.0, n in 0.0f64..100.0) {
            let p = RadioParams::default();
            let tol = 1e-12;
            prop_assert!(rel_close(p.transmit_energy(2.0 * l, d).unwrap(), 2.0 * p.transmit_energy(l, d).unwrap(), tol));
            prop_assert!(rel_close(p.receive_energy(2.0 * l).unwrap(), 2.0 * p.receive_energy(l).unwrap(), tol));
            prop_assert!(rel_close(p.aggregation_energy(2.0 * l, n).unwrap(), 2.0 * p.aggregation_energy(l, n).unwrap(), tol));
        }

        #[test]
        fn receive_never_exceeds_transmit(l in 0.0f64..1e5, d in 0.0f64..500.0) {
            let p = RadioParams::default();
            prop_assert!(p.receive_energy(l).unwrap() <= p.transmit_energy(l, d).unwrap());
        }
    }
}
