use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

/// Frequency-domain localization applied alongside the warped kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Localization {
    /// All weights 1.
    #[default]
    Identity,
    /// `exp(−r²/(2σ²))`, σ in cycles/sample.
    Gaussian { sigma: f64 },
}

/// Transform parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PstParams {
    /// Peak kernel phase in radians, reached at the largest grid radius.
    pub strength: f64,
    /// Curvature of the arctan phase-derivative profile.
    pub warp: f64,
    pub localization: Localization,
    /// Highest even order kept by the small-phase closed form.
    pub taylor_order: usize,
    pub threshold_min: f64,
    pub threshold_max: f64,
}

impl Default for PstParams {
    fn default() -> Self {
        Self {
            strength: 0.48,
            warp: 12.15,
            localization: Localization::Identity,
            taylor_order: 4,
            threshold_min: -0.005,
            threshold_max: 0.005,
        }
    }
}

impl PstParams {
    pub fn new(strength: f64, warp: f64) -> Self {
        Self {
            strength,
            warp,
            ..Self::default()
        }
    }

    pub fn with_localization(mut self, localization: Localization) -> Self {
        self.localization = localization;
        self
    }

    pub fn with_taylor_order(mut self, order: usize) -> Self {
        self.taylor_order = order;
        self
    }

    pub fn with_thresholds(mut self, min: f64, max: f64) -> Self {
        self.threshold_min = min;
        self.threshold_max = max;
        self
    }

    pub fn with_strength(mut self, strength: f64) -> Self {
        self.strength = strength;
        self
    }

    /// Checks every field invariant. Errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.strength.is_finite() && self.strength >= 0.0) {
            return Err(invalid_arg(format!("strength must be finite and >= 0, got {}", self.strength)));
        }
        if !(self.warp.is_finite() && self.warp >= 0.0) {
            return Err(invalid_arg(format!("warp must be finite and >= 0, got {}", self.warp)));
        }
        if self.taylor_order < 2 || !self.taylor_order.is_multiple_of(2) {
            return Err(invalid_arg(format!(
                "taylor_order must be even and >= 2, got {}",
                self.taylor_order
            )));
        }
        if !(self.threshold_min <= 0.0 && 0.0 <= self.threshold_max) {
            return Err(invalid_arg(format!(
                "thresholds must satisfy threshold_min <= 0 <= threshold_max, got [{}, {}]",
                self.threshold_min, self.threshold_max
            )));
        }
        if let Localization::Gaussian { sigma } = self.localization {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(invalid_arg(format!("localization sigma must be > 0, got {sigma}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PstParams::default().validate().unwrap();
    }

    #[test]
    fn field_violations_are_named() {
        let cases = [
            (PstParams::new(-1.0, 1.0), "strength"),
            (PstParams::new(1.0, -0.5), "warp"),
            (PstParams::default().with_taylor_order(3), "taylor_order"),
            (PstParams::default().with_taylor_order(0), "taylor_order"),
            (PstParams::default().with_thresholds(0.1, 0.2), "thresholds"),
            (
                PstParams::default().with_localization(Localization::Gaussian { sigma: 0.0 }),
                "sigma",
            ),
        ];
        for (p, field) in cases {
            let msg = p.validate().unwrap_err().to_string();
            assert!(msg.contains(field), "{msg}");
        }
    }

    #[test]
    fn json_round_trip_with_partial_fields() {
        let p: PstParams = serde_json::from_str(r#"{"strength": 0.4, "warp": 13}"#).unwrap();
        assert_eq!(p.strength, 0.4);
        assert_eq!(p.warp, 13.0);
        assert_eq!(p.taylor_order, 4);
        let g: PstParams =
            serde_json::from_str(r#"{"localization": {"gaussian": {"sigma": 0.2}}}"#).unwrap();
        assert_eq!(g.localization, Localization::Gaussian { sigma: 0.2 });
    }
}
