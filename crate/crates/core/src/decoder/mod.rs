//! Scalar-message GF(4) decoders.
//!
//! Every variant runs the same flooding loop. Per iteration: hard decisions
//! from the previous check messages, residual syndrome, early exit when it
//! vanishes, syndrome ratio, check update, qubit update. Only the check
//! rule and its gain differ:
//!
//! | variant | check magnitude              |
//! |---------|------------------------------|
//! | BP4     | φ⁻¹(Σ φ(\|L_k\|))            |
//! | MS      | min \|L_k\|                  |
//! | SMS     | α · min \|L_k\|              |
//! | SAGMS   | α_eff(γ, s̃_i) · min \|L_k\|  |
//!
//! The check sign always uses the observed syndrome bit; the residual bit of
//! the check enters only through the SAGMS gain boost.

mod engine;
mod rules;

use serde::{Deserialize, Serialize};

pub use engine::{decode, DecodeResult, Decoder, IterationRecord, MAGNITUDE_BINS};
pub(crate) use rules::phi_unchecked;
pub use rules::{
    cn_update, cn_update_all, effective_gain, hard_decision, pauli_metrics, syndrome_ratio,
    vn_update_additive, vn_update_marginal, CheckRule, LLR_CLIP, PHI_FLOOR, PHI_SUM_MAX,
};

use crate::error::{Error, Result};

/// SAGMS gain schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainParams {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub eta_unsat: f64,
}

impl Default for GainParams {
    fn default() -> Self {
        GainParams {
            alpha_min: 0.30,
            alpha_max: 0.50,
            eta_unsat: 1.10,
        }
    }
}

impl GainParams {
    /// Requires `0 < α_min ≤ α_max ≤ 1`, `η_unsat ≥ 1` and the stability
    /// constraint `α_max·η_unsat ≤ 1`.
    pub fn validate(&self) -> Result<()> {
        let GainParams {
            alpha_min,
            alpha_max,
            eta_unsat,
        } = *self;
        let unit = |x: f64| x > 0.0 && x <= 1.0;
        if !unit(alpha_min) || !unit(alpha_max) {
            return Err(Error::InvalidConfig(format!(
                "alpha_min={alpha_min} and alpha_max={alpha_max} must lie in (0, 1]"
            )));
        }
        if alpha_min > alpha_max {
            return Err(Error::InvalidConfig(format!(
                "alpha_min={alpha_min} exceeds alpha_max={alpha_max}"
            )));
        }
        if !(eta_unsat >= 1.0 && eta_unsat.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "eta_unsat={eta_unsat} must be at least 1"
            )));
        }
        if alpha_max * eta_unsat > 1.0 {
            return Err(Error::InvalidConfig(format!(
                "stability constraint α_max·η_unsat ≤ 1 violated: {alpha_max}·{eta_unsat} = {}",
                alpha_max * eta_unsat
            )));
        }
        Ok(())
    }
}

/// Check-node rule and its gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    Bp4,
    MinSum,
    ScaledMinSum { alpha: f64 },
    Sagms(GainParams),
}

impl Variant {
    pub fn check_rule(&self) -> CheckRule {
        match self {
            Variant::Bp4 => CheckRule::Bp4,
            _ => CheckRule::MinSum,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Bp4 => "BP4",
            Variant::MinSum => "MS",
            Variant::ScaledMinSum { .. } => "SMS",
            Variant::Sagms(_) => "SAGMS",
        }
    }
}

/// Qubit-update semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VnMode {
    /// `L0 + Σ` of the other incoming messages, ignoring edge symbols.
    Additive,
    /// Exact four-way marginalization relative to the outgoing edge symbol.
    #[default]
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub variant: Variant,
    pub max_iterations: usize,
    #[serde(default)]
    pub vn_mode: VnMode,
}

impl DecoderConfig {
    pub fn new(variant: Variant, max_iterations: usize) -> Self {
        DecoderConfig {
            variant,
            max_iterations,
            vn_mode: VnMode::Marginal,
        }
    }

    pub fn with_vn_mode(mut self, mode: VnMode) -> Self {
        self.vn_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        match self.variant {
            Variant::ScaledMinSum { alpha } if !(alpha > 0.0 && alpha <= 1.0) => Err(
                Error::InvalidConfig(format!("SMS alpha={alpha} must lie in (0, 1]")),
            ),
            Variant::Sagms(p) => p.validate(),
            _ => Ok(()),
        }
    }
}
