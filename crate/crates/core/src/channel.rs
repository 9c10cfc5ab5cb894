//! Depolarizing noise and the channel prior LLR.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliVector};

/// I.i.d. depolarizing channel: `P(I) = 1 − ε`, `P(X) = P(Y) = P(Z) = ε/3`.
///
/// Each frame is an independent ChaCha8 stream selected by `stream_id`
/// under the channel seed; qubit `j` consumes the `j`-th 64-bit output of
/// that stream, so any `(seed, stream_id, j)` is addressable directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingChannel {
    epsilon: f64,
    seed: u64,
    // Inverse-CDF thresholds over the order (I, X, Y, Z).
    #[serde(skip)]
    thresholds: [f64; 3],
}

impl DepolarizingChannel {
    /// `epsilon` must lie in `[0, 1)`; zero gives the noiseless channel.
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "depolarizing probability {epsilon} not in [0, 1)"
            )));
        }
        let third = epsilon / 3.0;
        let t0 = 1.0 - epsilon;
        Ok(DepolarizingChannel {
            epsilon,
            seed,
            thresholds: [t0, t0 + third, t0 + 2.0 * third],
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    fn symbol(&self, u: f64) -> Pauli {
        let [t0, t1, t2] = self.thresholds;
        if u < t0 {
            Pauli::I
        } else if u < t1 {
            Pauli::X
        } else if u < t2 {
            Pauli::Y
        } else {
            Pauli::Z
        }
    }

    fn stream(&self, stream_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream_id);
        rng
    }

    pub fn sample_error(&self, n: usize, stream_id: u64) -> PauliVector {
        let mut e = PauliVector::identity(n);
        self.sample_into(stream_id, &mut e);
        e
    }

    /// Fills `out` with one frame; equivalent to [`Self::sample_error`].
    pub fn sample_into(&self, stream_id: u64, out: &mut [Pauli]) {
        let mut rng = self.stream(stream_id);
        for slot in out.iter_mut() {
            *slot = self.symbol(rng.random::<f64>());
        }
    }

    /// The symbol of qubit `j` in frame `stream_id`, without generating the
    /// preceding qubits.
    pub fn sample_qubit(&self, stream_id: u64, j: usize) -> Pauli {
        let mut rng = self.stream(stream_id);
        // One f64 consumes two 32-bit words.
        rng.set_word_pos(2 * j as u128);
        self.symbol(rng.random::<f64>())
    }
}

/// Decoder prior for an assumed depolarizing probability `ε0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPrior {
    pub epsilon0: f64,
    /// `L0 = ln((1 − ε0) / (ε0/3))`.
    pub llr: f64,
}

pub fn prior_llr(epsilon0: f64) -> Result<ChannelPrior> {
    if !(epsilon0 > 0.0 && epsilon0 < 1.0) {
        return Err(Error::Domain(format!(
            "assumed probability {epsilon0} not in (0, 1)"
        )));
    }
    Ok(ChannelPrior {
        epsilon0,
        llr: (3.0 * (1.0 - epsilon0) / epsilon0).ln(),
    })
}
