//! Closed-form check-node analysis.
//!
//! Under the uniform message approximation (every incoming magnitude equal
//! to κ) the check output of each rule reduces to a scalar transfer
//! function. Comparing BP4 against min-sum through these curves gives the
//! BP4-matching ratio α*, its decrease with the check degree, and the
//! penalty paid by a fixed scaling tuned for another degree.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decoder::{effective_gain, phi_unchecked, GainParams};
use crate::error::{Error, Result};

/// φ(x) = −ln tanh(x/2). Self-inverse on (0, ∞).
pub fn phi(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("phi requires x > 0, got {x}")));
    }
    Ok(phi_unchecked(x))
}

/// Transfer-curve family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    Bp4,
    MinSum,
    Scaled { alpha: f64 },
    Sagms { alpha_eff: f64 },
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Bp4 => "bp4",
            CurveKind::MinSum => "ms",
            CurveKind::Scaled { .. } => "sms",
            CurveKind::Sagms { .. } => "sagms",
        }
    }
}

/// `T_BP4(κ) = φ⁻¹((d_c − 1)·φ(κ))`, i.e. `2 atanh(tanh(κ/2)^{d_c−1})`.
fn bp4_transfer(kappa: f64, dc: usize) -> f64 {
    let y = (dc - 1) as f64 * phi_unchecked(kappa);
    if y == 0.0 {
        // φ(κ) underflowed: the check passes κ through.
        return kappa;
    }
    phi_unchecked(y)
}

/// Output magnitude for `d_c − 1` inputs of magnitude `kappa`.
pub fn transfer(kind: CurveKind, kappa: f64, dc: usize) -> Result<f64> {
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(Error::Domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if dc < 2 {
        return Err(Error::Domain(format!(
            "check degree must be at least 2, got {dc}"
        )));
    }
    Ok(match kind {
        CurveKind::Bp4 => bp4_transfer(kappa, dc),
        CurveKind::MinSum => kappa,
        CurveKind::Scaled { alpha } => alpha * kappa,
        CurveKind::Sagms { alpha_eff } => alpha_eff * kappa,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferCurve {
    pub kind: CurveKind,
    pub dc: usize,
    pub samples: Vec<(f64, f64)>,
}

impl TransferCurve {
    pub fn sample(kind: CurveKind, dc: usize, kappas: &[f64]) -> Result<Self> {
        let samples = kappas
            .iter()
            .map(|&k| Ok((k, transfer(kind, k, dc)?)))
            .collect::<Result<_>>()?;
        Ok(TransferCurve { kind, dc, samples })
    }

    /// `x y` per line.
    pub fn to_two_column(&self) -> String {
        two_column(&self.samples)
    }
}

/// Formats pairs as whitespace-separated columns with 17 significant digits.
pub fn two_column(pairs: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (x, y) in pairs {
        let _ = writeln!(out, "{x:.16e} {y:.16e}");
    }
    out
}

fn check_l0_dc(l0: f64, dc: usize) -> Result<()> {
    if !(l0 > 0.0 && l0.is_finite()) {
        return Err(Error::Domain(format!(
            "L0 must be positive and finite, got {l0}"
        )));
    }
    if dc < 2 {
        return Err(Error::Domain(format!(
            "check degree must be at least 2, got {dc}"
        )));
    }
    Ok(())
}

/// `α*(L0, d_c) = 2 atanh(tanh(L0/2)^{d_c−1}) / L0`.
pub fn alpha_star_exact(l0: f64, dc: usize) -> Result<f64> {
    check_l0_dc(l0, dc)?;
    Ok(bp4_transfer(l0, dc) / l0)
}

/// First-order form `1 − ln(d_c − 1)/L0`.
pub fn alpha_star_approx(l0: f64, dc: usize) -> Result<f64> {
    check_l0_dc(l0, dc)?;
    Ok(1.0 - ((dc - 1) as f64).ln() / l0)
}

/// Scalability penalty `ln[(d_new − 1)/(d_ref − 1)] / L0`.
pub fn delta_alpha(l0: f64, dc_ref: usize, dc_new: usize) -> Result<f64> {
    check_l0_dc(l0, dc_ref)?;
    check_l0_dc(l0, dc_new)?;
    Ok((((dc_new - 1) as f64) / ((dc_ref - 1) as f64)).ln() / l0)
}

/// True iff `alpha_star_exact(l0, ·)` strictly decreases over consecutive
/// degrees in `[lo, hi]`. The range must sit inside `[2, 10⁴]`.
pub fn check_monotonicity(l0: f64, lo: usize, hi: usize) -> Result<bool> {
    if lo < 2 || hi > 10_000 || lo > hi {
        return Err(Error::Domain(format!(
            "degree range [{lo}, {hi}] not within [2, 10000]"
        )));
    }
    let mut prev = alpha_star_exact(l0, lo)?;
    for dc in lo + 1..=hi {
        let cur = alpha_star_exact(l0, dc)?;
        if cur.is_nan() || cur >= prev {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}

/// Operation-count variants of the weighted cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpVariant {
    Bp4,
    MinSum,
    ScaledMinSum,
    Sagms,
}

impl OpVariant {
    pub const ALL: [OpVariant; 4] = [
        OpVariant::Bp4,
        OpVariant::MinSum,
        OpVariant::ScaledMinSum,
        OpVariant::Sagms,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OpVariant::Bp4 => "BP4",
            OpVariant::MinSum => "MS",
            OpVariant::ScaledMinSum => "SMS",
            OpVariant::Sagms => "SAGMS",
        }
    }
}

/// Operations per check update, producing one output per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCount {
    pub adds: u64,
    pub muls: u64,
    pub cmps: u64,
    pub transcendentals: u64,
}

impl OpCount {
    /// Weights `(a, b, c, d) = (1, 1, 1, 10)`.
    pub const WEIGHTS: [u64; 4] = [1, 1, 1, 10];

    pub fn weighted(&self) -> u64 {
        let [a, b, c, d] = Self::WEIGHTS;
        a * self.adds + b * self.muls + c * self.cmps + d * self.transcendentals
    }
}

pub fn op_count(variant: OpVariant, dc: usize) -> Result<OpCount> {
    if dc < 2 {
        return Err(Error::Domain(format!(
            "check degree must be at least 2, got {dc}"
        )));
    }
    let d = dc as u64;
    Ok(match variant {
        OpVariant::Bp4 => OpCount {
            adds: d - 2,
            muls: d - 1,
            cmps: 0,
            transcendentals: 2 * d - 1,
        },
        OpVariant::MinSum => OpCount {
            adds: 0,
            muls: d - 1,
            cmps: d - 2,
            transcendentals: 0,
        },
        OpVariant::ScaledMinSum => OpCount {
            adds: 0,
            muls: d,
            cmps: d - 2,
            transcendentals: 0,
        },
        OpVariant::Sagms => OpCount {
            adds: 3,
            muls: d + 1,
            cmps: d - 1,
            transcendentals: 0,
        },
    })
}

/// Where the magnitude samples behind `g(μ, d_c)` come from. Every source
/// is scaled to mean `μ`.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    /// All magnitudes equal μ (uniform message approximation).
    PointMass,
    /// Exponential with mean μ.
    Exponential,
    /// Resampled with replacement from observed magnitudes, rescaled to
    /// mean μ (for instance collected from decoder messages).
    Empirical(Vec<f64>),
}

pub const MIN_SAMPLES: usize = 10_000;

/// Monte Carlo estimate of `g(μ, d_c) = E[min of d_c − 1 magnitudes]`.
pub fn expected_min_g(
    mu: f64,
    dc: usize,
    source: &SampleSource,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    if dc < 2 {
        return Err(Error::Domain(format!(
            "check degree must be at least 2, got {dc}"
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = dc - 1;
    let total: f64 = match source {
        SampleSource::PointMass => return Ok(mu),
        SampleSource::Exponential => (0..samples)
            .map(|_| {
                (0..draws)
                    .map(|_| -mu * (1.0 - rng.random::<f64>()).ln())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum(),
        SampleSource::Empirical(pool) => {
            let mean = pool.iter().map(|x| x.abs()).sum::<f64>() / pool.len() as f64;
            if pool.is_empty() || mean.is_nan() || mean <= 0.0 {
                return Err(Error::Domain(
                    "empirical pool needs nonzero magnitudes".into(),
                ));
            }
            let scale = mu / mean;
            (0..samples)
                .map(|_| {
                    (0..draws)
                        .map(|_| pool[rng.random_range(0..pool.len())].abs() * scale)
                        .fold(f64::INFINITY, f64::min)
                })
                .sum()
        }
    };
    Ok(total / samples as f64)
}

/// `α_opt(μ) = T_BP4(μ) / g(μ, d_c)`.
pub fn alpha_opt(
    mu: f64,
    dc: usize,
    source: &SampleSource,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let g = expected_min_g(mu, dc, source, samples, seed)?;
    Ok(transfer(CurveKind::Bp4, mu, dc)? / g)
}

/// The linear ramp `α_max − (α_max − α_min)·γ`.
pub fn linear_gain_fit(alpha_max: f64, alpha_min: f64, gamma: f64) -> f64 {
    effective_gain(
        gamma,
        false,
        &GainParams {
            alpha_min,
            alpha_max,
            eta_unsat: 1.0,
        },
    )
}
