//! Node update rules, kept free of graph bookkeeping so each can be checked
//! in isolation.

use super::GainParams;
use crate::pauli::{trace_inner, Pauli};

/// Every message is saturated to `[-LLR_CLIP, LLR_CLIP]` after each update.
pub const LLR_CLIP: f64 = 64.0;
/// Magnitudes fed to φ are floored here.
pub const PHI_FLOOR: f64 = 1e-12;
/// φ-domain sums are clamped to `[PHI_FLOOR, PHI_SUM_MAX]` before inversion.
pub const PHI_SUM_MAX: f64 = 50.0;

/// Gallager's φ(x) = −ln tanh(x/2) for x > 0, written as
/// `ln(1 + 2e^{−x}/(1 − e^{−x}))` so both tails keep full precision.
#[inline]
pub(crate) fn phi_unchecked(x: f64) -> f64 {
    let u = (-x).exp();
    (2.0 * u / -(-x).exp_m1()).ln_1p()
}

#[inline]
pub(crate) fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

/// Check-node kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckRule {
    /// φ-domain sum-product.
    Bp4,
    /// Minimum magnitude times a gain (MS, SMS and SAGMS).
    MinSum,
}

#[inline]
fn signed(negative: bool, magnitude: f64) -> f64 {
    if magnitude == 0.0 {
        0.0
    } else if negative {
        clip(-magnitude)
    } else {
        clip(magnitude)
    }
}

/// One extrinsic check-to-qubit message from the *other* incoming messages
/// of the check. `gain` scales the min-sum magnitude and is ignored by BP4.
///
/// An empty `incoming` slice yields a saturated magnitude (a degree-1
/// check pins its qubit's parity).
pub fn cn_update(rule: CheckRule, incoming: &[f64], syndrome_bit: u8, gain: f64) -> f64 {
    let mut negative = syndrome_bit & 1 == 1;
    for &l in incoming {
        negative ^= l < 0.0;
    }
    let magnitude = match rule {
        CheckRule::Bp4 => {
            let mut sum = 0.0;
            for &l in incoming {
                sum += phi_unchecked(l.abs().max(PHI_FLOOR));
            }
            phi_unchecked(sum.clamp(PHI_FLOOR, PHI_SUM_MAX))
        }
        CheckRule::MinSum => {
            let min = incoming.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
            gain * min.min(LLR_CLIP)
        }
    };
    signed(negative, magnitude)
}

/// All extrinsic outputs of one check at once; `out[k]` is the message on
/// the check's `k`-th edge. Bit-identical to calling [`cn_update`] per edge.
pub fn cn_update_all(
    rule: CheckRule,
    inputs: &[f64],
    syndrome_bit: u8,
    gain: f64,
    out: &mut [f64],
    scratch: &mut Vec<f64>,
) {
    debug_assert_eq!(inputs.len(), out.len());
    let parity = inputs
        .iter()
        .fold(syndrome_bit & 1 == 1, |acc, &l| acc ^ (l < 0.0));
    match rule {
        CheckRule::Bp4 => {
            scratch.clear();
            scratch.extend(inputs.iter().map(|l| phi_unchecked(l.abs().max(PHI_FLOOR))));
            for (k, o) in out.iter_mut().enumerate() {
                // Direct exclusion sum, same order as the reference path.
                let mut sum = 0.0;
                for (i, &p) in scratch.iter().enumerate() {
                    if i != k {
                        sum += p;
                    }
                }
                let magnitude = phi_unchecked(sum.clamp(PHI_FLOOR, PHI_SUM_MAX));
                *o = signed(parity ^ (inputs[k] < 0.0), magnitude);
            }
        }
        CheckRule::MinSum => {
            let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for (k, l) in inputs.iter().enumerate() {
                let a = l.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    arg = k;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for (k, o) in out.iter_mut().enumerate() {
                let min = if k == arg { min2 } else { min1 };
                *o = signed(parity ^ (inputs[k] < 0.0), gain * min.min(LLR_CLIP));
            }
        }
    }
}

/// Additive qubit update: prior plus the other incoming messages,
/// without regard to edge symbols.
pub fn vn_update_additive(l0: f64, incoming: &[f64]) -> f64 {
    let mut acc = l0;
    for &l in incoming {
        acc += l;
    }
    clip(acc)
}

/// Negative log-belief `b(e) = [e ≠ I]·L0 + Σ 1{⟨e, H_k⟩ = 1}·L_k` for each
/// Pauli, indexed by its code. Lower is more likely.
pub fn pauli_metrics(
    l0: f64,
    incoming: impl IntoIterator<Item = (Pauli, f64)> + Clone,
) -> [f64; 4] {
    let mut b = [0.0, l0, l0, l0];
    for e in Pauli::ALL {
        let slot = &mut b[e.code() as usize];
        for (h, l) in incoming.clone() {
            if trace_inner(e, h) == 1 {
                *slot += l;
            }
        }
    }
    b
}

#[inline]
fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Commute-vs-anticommute LLR of the qubit relative to `target`, from the
/// exact four-way belief built out of the other incoming messages.
pub fn vn_update_marginal(l0: f64, incoming: &[(Pauli, f64)], target: Pauli) -> f64 {
    marginal_from_metrics(&pauli_metrics(l0, incoming.iter().copied()), target)
}

pub(crate) fn marginal_from_metrics(b: &[f64; 4], target: Pauli) -> f64 {
    let (mut commute, mut anti) = ([0.0; 2], [0.0; 2]);
    let (mut nc, mut na) = (0, 0);
    for e in Pauli::ALL {
        let v = -b[e.code() as usize];
        if trace_inner(e, target) == 0 {
            commute[nc] = v;
            nc += 1;
        } else {
            anti[na] = v;
            na += 1;
        }
    }
    if na == 0 {
        // target = I: everything commutes.
        return LLR_CLIP;
    }
    clip(log_sum_exp2(commute[0], commute[1]) - log_sum_exp2(anti[0], anti[1]))
}

/// Index of the smallest metric, first in `I, X, Z, Y` order on ties.
pub(crate) fn argmin_metric(b: &[f64; 4]) -> Pauli {
    let mut best = Pauli::I;
    for e in &Pauli::ALL[1..] {
        if b[e.code() as usize] < b[best.code() as usize] {
            best = *e;
        }
    }
    best
}

/// `argmin_e b(e)` over all incoming messages of the qubit.
pub fn hard_decision(l0: f64, incoming: &[(Pauli, f64)]) -> Pauli {
    argmin_metric(&pauli_metrics(l0, incoming.iter().copied()))
}

/// Fraction of unsatisfied checks.
pub fn syndrome_ratio(residual: &[u8]) -> f64 {
    if residual.is_empty() {
        return 0.0;
    }
    residual.iter().filter(|&&b| b != 0).count() as f64 / residual.len() as f64
}

/// `[α_max − (α_max − α_min)·γ]`, times `η_unsat` at an unsatisfied check.
#[inline]
pub fn effective_gain(gamma: f64, unsatisfied: bool, p: &GainParams) -> f64 {
    let base = p.alpha_max - (p.alpha_max - p.alpha_min) * gamma;
    if unsatisfied {
        base * p.eta_unsat
    } else {
        base
    }
}
