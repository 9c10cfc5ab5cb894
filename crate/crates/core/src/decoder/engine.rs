use serde::{Deserialize, Serialize};

use super::rules::{self, CheckRule};
use super::{DecoderConfig, Variant, VnMode};
use crate::channel::ChannelPrior;
use crate::code::TannerGraph;
use crate::error::{Error, Result};
use crate::pauli::{trace_inner, BitVector, Pauli, PauliVector};

/// Upper bin edges of the check-message magnitude histogram in traces.
pub const MAGNITUDE_BINS: [f64; 8] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, f64::INFINITY];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub success: bool,
    /// Hard decision of the returning iteration.
    pub estimate: PauliVector,
    /// Iteration at which the decoder returned.
    pub iterations: usize,
    /// Syndrome ratio of every evaluated iteration, including the final 0 on
    /// success.
    pub gamma_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<IterationRecord>>,
}

/// One line of the optional per-iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub gamma: f64,
    pub unsatisfied: usize,
    /// Min, mean and max check gain used by the min-sum family; absent for
    /// BP4 and for the converged iteration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain: Option<[f64; 3]>,
    /// Counts of |check → qubit| per [`MAGNITUDE_BINS`] after the check pass.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cn_magnitudes: Vec<u32>,
}

/// Reusable decoder state over one shared graph.
///
/// Messages live in two edge-indexed buffers; each pass reads only the
/// other buffer, so one iteration is a pure function of the previous one.
#[derive(Debug, Clone)]
pub struct Decoder<'g> {
    graph: &'g TannerGraph,
    cfg: DecoderConfig,
    l0: f64,
    vn_to_cn: Vec<f64>,
    cn_to_vn: Vec<f64>,
    estimate: Vec<Pauli>,
    residual: Vec<u8>,
    gains: Vec<f64>,
    scratch: Vec<f64>,
    iteration: usize,
}

impl<'g> Decoder<'g> {
    pub fn new(graph: &'g TannerGraph, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let e = graph.num_edges();
        Ok(Decoder {
            graph,
            cfg,
            l0: 0.0,
            vn_to_cn: vec![0.0; e],
            cn_to_vn: vec![0.0; e],
            estimate: vec![Pauli::I; graph.n()],
            residual: vec![0; graph.m()],
            gains: vec![1.0; graph.m()],
            scratch: Vec::new(),
            iteration: 0,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &'g TannerGraph {
        self.graph
    }

    /// Qubit-to-check messages, edge-indexed.
    pub fn vn_to_cn(&self) -> &[f64] {
        &self.vn_to_cn
    }

    /// Check-to-qubit messages, edge-indexed.
    pub fn cn_to_vn(&self) -> &[f64] {
        &self.cn_to_vn
    }

    pub fn estimate(&self) -> &[Pauli] {
        &self.estimate
    }

    pub fn residual(&self) -> &[u8] {
        &self.residual
    }

    /// Per-check gain of the last check pass (1 for MS, α for SMS).
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// Iterations run since the last [`Self::reset`].
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// `L_{j→i} = L0` on every edge, check messages zero.
    pub fn reset(&mut self, prior: &ChannelPrior) {
        self.l0 = prior.llr;
        self.vn_to_cn.fill(prior.llr);
        self.cn_to_vn.fill(0.0);
        self.estimate.fill(Pauli::I);
        self.iteration = 0;
    }

    /// Per-Pauli metrics `b_j(e)` of qubit `j` from all current check
    /// messages, indexed by [`Pauli::code`]. Lower is more likely.
    pub fn beliefs(&self, j: usize) -> [f64; 4] {
        let edges = self.graph.edges();
        let inc = self
            .graph
            .vn_edges(j)
            .iter()
            .map(|&e| (edges[e].pauli, self.cn_to_vn[e]));
        rules::pauli_metrics(self.l0, inc)
    }

    fn hard_decisions(&mut self) {
        for j in 0..self.graph.n() {
            self.estimate[j] = rules::argmin_metric(&self.beliefs(j));
        }
    }

    fn residual_syndrome(&mut self, syndrome: &[u8]) -> usize {
        let g = self.graph;
        let edges = g.edges();
        let mut unsat = 0;
        for (i, r) in self.residual.iter_mut().enumerate() {
            let mut bit = syndrome[i] & 1;
            for edge in &edges[g.cn_edges(i)] {
                bit ^= trace_inner(edge.pauli, self.estimate[edge.qubit]);
            }
            *r = bit;
            unsat += bit as usize;
        }
        unsat
    }

    fn check_pass(&mut self, syndrome: &[u8], gamma: f64) {
        let g = self.graph;
        let rule = self.cfg.variant.check_rule();
        for (i, &s_i) in syndrome.iter().enumerate().take(g.m()) {
            let gain = match self.cfg.variant {
                Variant::Bp4 | Variant::MinSum => 1.0,
                Variant::ScaledMinSum { alpha } => alpha,
                Variant::Sagms(p) => rules::effective_gain(gamma, self.residual[i] == 1, &p),
            };
            self.gains[i] = gain;
            let r = g.cn_edges(i);
            rules::cn_update_all(
                rule,
                &self.vn_to_cn[r.clone()],
                s_i,
                gain,
                &mut self.cn_to_vn[r],
                &mut self.scratch,
            );
        }
    }

    fn qubit_pass(&mut self) {
        let g = self.graph;
        let edges = g.edges();
        for j in 0..g.n() {
            let adj = g.vn_edges(j);
            for &out in adj {
                let others = adj.iter().filter(|&&e| e != out);
                self.vn_to_cn[out] = match self.cfg.vn_mode {
                    VnMode::Additive => {
                        let mut acc = self.l0;
                        for &e in others {
                            acc += self.cn_to_vn[e];
                        }
                        rules::clip(acc)
                    }
                    VnMode::Marginal => {
                        let inc = others.map(|&e| (edges[e].pauli, self.cn_to_vn[e]));
                        let b = rules::pauli_metrics(self.l0, inc);
                        rules::marginal_from_metrics(&b, edges[out].pauli)
                    }
                };
            }
        }
    }

    /// Runs one full iteration: hard decision, residual, then (unless the
    /// residual vanished) check and qubit passes. Returns `None` on
    /// convergence, otherwise the syndrome ratio γ.
    ///
    /// `syndrome` must have one entry per check.
    pub fn step(&mut self, syndrome: &[u8]) -> Option<f64> {
        self.iterate(syndrome, true, None)
    }

    /// As [`Self::step`] but without the convergence exit: the check and
    /// qubit passes always run. Returns γ of the residual before the passes.
    pub fn propagate(&mut self, syndrome: &[u8]) -> f64 {
        self.iteration += 1;
        self.hard_decisions();
        let gamma = self.residual_syndrome(syndrome) as f64 / self.graph.m() as f64;
        self.check_pass(syndrome, gamma);
        self.qubit_pass();
        gamma
    }

    fn iterate(
        &mut self,
        syndrome: &[u8],
        propagate: bool,
        trace: Option<&mut Vec<IterationRecord>>,
    ) -> Option<f64> {
        self.iteration += 1;
        self.hard_decisions();
        let unsat = self.residual_syndrome(syndrome);
        if unsat == 0 {
            if let Some(t) = trace {
                t.push(IterationRecord {
                    iteration: self.iteration,
                    gamma: 0.0,
                    unsatisfied: 0,
                    gain: None,
                    cn_magnitudes: Vec::new(),
                });
            }
            return None;
        }
        let gamma = unsat as f64 / self.graph.m() as f64;
        if propagate {
            self.check_pass(syndrome, gamma);
            self.qubit_pass();
        }
        if let Some(t) = trace {
            t.push(self.record(gamma, unsat));
        }
        Some(gamma)
    }

    fn record(&self, gamma: f64, unsatisfied: usize) -> IterationRecord {
        let gain = (self.cfg.variant.check_rule() == CheckRule::MinSum && !self.gains.is_empty())
            .then(|| {
                let (lo, hi, sum) = self.gains.iter().fold(
                    (f64::INFINITY, f64::NEG_INFINITY, 0.0),
                    |(lo, hi, s), &g| (lo.min(g), hi.max(g), s + g),
                );
                [lo, sum / self.gains.len() as f64, hi]
            });
        let mut hist = vec![0u32; MAGNITUDE_BINS.len()];
        for l in &self.cn_to_vn {
            let bin = MAGNITUDE_BINS
                .iter()
                .position(|&edge| l.abs() < edge)
                .unwrap_or(MAGNITUDE_BINS.len() - 1);
            hist[bin] += 1;
        }
        IterationRecord {
            iteration: self.iteration,
            gamma,
            unsatisfied,
            gain,
            cn_magnitudes: hist,
        }
    }

    fn run(
        &mut self,
        syndrome: &BitVector,
        prior: &ChannelPrior,
        traced: bool,
    ) -> Result<DecodeResult> {
        if syndrome.len() != self.graph.m() {
            return Err(Error::LengthMismatch {
                expected: self.graph.m(),
                actual: syndrome.len(),
            });
        }
        self.reset(prior);
        let l_max = self.cfg.max_iterations;
        let mut trace = traced.then(Vec::new);
        let mut gamma_trace = Vec::with_capacity(l_max);
        for l in 1..=l_max {
            // The last iteration's message update is never observed unless traced.
            let propagate = traced || l < l_max;
            match self.iterate(syndrome, propagate, trace.as_mut()) {
                None => {
                    gamma_trace.push(0.0);
                    return Ok(DecodeResult {
                        success: true,
                        estimate: PauliVector(self.estimate.clone()),
                        iterations: l,
                        gamma_trace,
                        trace,
                    });
                }
                Some(gamma) => gamma_trace.push(gamma),
            }
        }
        Ok(DecodeResult {
            success: false,
            estimate: PauliVector(self.estimate.clone()),
            iterations: l_max,
            gamma_trace,
            trace,
        })
    }

    pub fn decode(&mut self, syndrome: &BitVector, prior: &ChannelPrior) -> Result<DecodeResult> {
        self.run(syndrome, prior, false)
    }

    /// As [`Self::decode`], also collecting one [`IterationRecord`] per
    /// iteration.
    pub fn decode_traced(
        &mut self,
        syndrome: &BitVector,
        prior: &ChannelPrior,
    ) -> Result<DecodeResult> {
        self.run(syndrome, prior, true)
    }
}

/// One-shot decode with a fresh [`Decoder`].
pub fn decode(
    graph: &TannerGraph,
    syndrome: &BitVector,
    prior: &ChannelPrior,
    cfg: DecoderConfig,
) -> Result<DecodeResult> {
    Decoder::new(graph, cfg)?.decode(syndrome, prior)
}
