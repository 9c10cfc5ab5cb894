//! Shared fixtures and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use qsagms::code::load_code;
use qsagms::decoder::VnMode;
use qsagms::{prior_llr, Decoder, DecoderConfig, Pauli, SparseCheckMatrix, TannerGraph, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn codes_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../codes")
}

pub fn toy_code() -> SparseCheckMatrix {
    load_code(codes_dir().join("toy_6_2.qpc"), true).expect("shipped toy code")
}

/// `None` when the file is absent.
pub fn gb_126_28() -> Option<SparseCheckMatrix> {
    let path = codes_dir().join("gb_126_28.qpc");
    path.exists()
        .then(|| load_code(path, true).expect("shipped [[126,28]] code"))
}

/// Random cycle-free check matrix: a bipartite tree with at most `max_n`
/// qubits, every check of degree at least 2, random non-identity symbols.
pub fn random_tree(rng: &mut ChaCha8Rng, max_n: usize) -> SparseCheckMatrix {
    loop {
        let mut qubits = 1usize;
        let mut checks: Vec<Vec<(usize, Pauli)>> = Vec::new();
        let target = rng.random_range(2..=max_n);
        while qubits < target {
            let sym = Pauli::ALL[rng.random_range(1..4)];
            if checks.is_empty() || rng.random_bool(0.4) {
                // New check hanging off an existing qubit, plus a new qubit on it.
                let anchor = rng.random_range(0..qubits);
                let sym2 = Pauli::ALL[rng.random_range(1..4)];
                checks.push(vec![(anchor, sym), (qubits, sym2)]);
            } else {
                // New qubit on an existing check.
                let c = rng.random_range(0..checks.len());
                checks[c].push((qubits, sym));
            }
            qubits += 1;
        }
        if checks.iter().all(|c| c.len() >= 2) {
            return SparseCheckMatrix::new(qubits, checks).expect("tree fixture is well formed");
        }
    }
}

/// Syndrome bitmask of every one of the `4^n` error patterns, pattern
/// index `Σ code(e_j) · 4^j`.
pub fn all_syndromes(h: &SparseCheckMatrix) -> Vec<u64> {
    let n = h.n();
    (0..1usize << (2 * n))
        .map(|idx| {
            let mut mask = 0u64;
            for (i, row) in h.rows().iter().enumerate() {
                let mut bit = 0;
                for &(j, p) in row {
                    let e = pattern_qubit(idx, j);
                    bit ^= qsagms::pauli::trace_inner(e, p);
                }
                mask |= (bit as u64) << i;
            }
            mask
        })
        .collect()
}

pub fn pattern_qubit(idx: usize, j: usize) -> Pauli {
    Pauli::ALL[(idx >> (2 * j)) & 3]
}

/// Prior probability of a pattern under the depolarizing prior `eps0`.
pub fn pattern_prior(idx: usize, n: usize, eps0: f64) -> f64 {
    (0..n)
        .map(|j| {
            if pattern_qubit(idx, j).is_identity() {
                1.0 - eps0
            } else {
                eps0 / 3.0
            }
        })
        .product()
}

/// Worst absolute deviation between marginal-mode BP4 and exhaustive
/// enumeration over one random tree fixture: qubit-to-check messages
/// against the posterior with that check removed, and per-qubit beliefs
/// against the exact posterior. Also reports whether every hard decision
/// equals the per-qubit MAP decision (ties excluded).
pub struct TreeReport {
    pub message_error: f64,
    pub belief_error: f64,
    pub map_agrees: bool,
    pub messages_checked: usize,
}

pub fn check_tree(
    h: &SparseCheckMatrix,
    eps0: f64,
    syndrome_mask: u64,
    syndromes: &[u64],
) -> TreeReport {
    let n = h.n();
    let m = h.m();
    let graph = TannerGraph::new(h);
    let prior = prior_llr(eps0).unwrap();
    let cfg = DecoderConfig::new(Variant::Bp4, 1).with_vn_mode(VnMode::Marginal);
    let mut dec = Decoder::new(&graph, cfg).unwrap();
    dec.reset(&prior);
    let s: Vec<u8> = (0..m).map(|i| ((syndrome_mask >> i) & 1) as u8).collect();
    // Two passes per tree diameter are more than enough for exactness.
    for _ in 0..2 * (n + m) {
        dec.propagate(&s);
    }

    let weights: Vec<f64> = (0..syndromes.len())
        .map(|idx| pattern_prior(idx, n, eps0))
        .collect();

    let mut message_error = 0.0f64;
    let mut messages_checked = 0;
    for (e, edge) in graph.edges().iter().enumerate() {
        let keep = !(1u64 << edge.check);
        let (mut commute, mut anti) = (0.0, 0.0);
        for (idx, &syn) in syndromes.iter().enumerate() {
            if (syn ^ syndrome_mask) & keep == 0 {
                if qsagms::pauli::trace_inner(pattern_qubit(idx, edge.qubit), edge.pauli) == 0 {
                    commute += weights[idx];
                } else {
                    anti += weights[idx];
                }
            }
        }
        let exact = (commute / anti).ln();
        message_error = message_error.max((dec.vn_to_cn()[e] - exact).abs());
        messages_checked += 1;
    }

    let mut belief_error = 0.0f64;
    let mut map_agrees = true;
    for j in 0..n {
        let mut post = [0.0f64; 4];
        for (idx, &syn) in syndromes.iter().enumerate() {
            if syn == syndrome_mask {
                post[pattern_qubit(idx, j).code() as usize] += weights[idx];
            }
        }
        let b = dec.beliefs(j);
        for c in 1..4 {
            let exact = -(post[c] / post[0]).ln();
            belief_error = belief_error.max(((b[c] - b[0]) - exact).abs());
        }
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| post[b].total_cmp(&post[a]));
        let clear_winner = post[order[0]] > post[order[1]] * (1.0 + 1e-6);
        let argmin = (0..4).min_by(|&a, &c| b[a].total_cmp(&b[c])).unwrap();
        if clear_winner && argmin != order[0] {
            map_agrees = false;
        }
    }
    TreeReport {
        message_error,
        belief_error,
        map_agrees,
        messages_checked,
    }
}

/// Runs [`check_tree`] over `fixtures` random trees and returns the worst
/// message error, worst belief error, MAP agreement and message count.
pub fn tree_oracle_sweep(seed: u64, fixtures: usize) -> (f64, f64, bool, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut msg, mut bel, mut map, mut count) = (0.0f64, 0.0f64, true, 0);
    for _ in 0..fixtures {
        let h = random_tree(&mut rng, 8);
        let syndromes = all_syndromes(&h);
        let eps0 = rng.random_range(0.03..0.3);
        // Syndrome of a random pattern, so the observed syndrome is possible.
        let truth = rng.random_range(0..syndromes.len());
        let r = check_tree(&h, eps0, syndromes[truth], &syndromes);
        msg = msg.max(r.message_error);
        bel = bel.max(r.belief_error);
        map &= r.map_agrees;
        count += r.messages_checked;
    }
    (msg, bel, map, count)
}
