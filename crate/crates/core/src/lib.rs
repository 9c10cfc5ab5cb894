//! Message-passing decoders for quantum LDPC codes over GF(4).
//!
//! The crate provides four check-node rules sharing a single flooding
//! iteration skeleton: quaternary belief propagation (BP4), min-sum (MS),
//! scaled min-sum (SMS) and syndrome adaptive gain min-sum (SAGMS), where the
//! check-node gain follows the fraction of unsatisfied stabilizers.
//!
//! Around the decoders sit the pieces needed to evaluate them:
//!
//! * [`pauli`]: symplectic Pauli arithmetic and syndrome evaluation.
//! * [`code`]: sparse check matrices, generalized bicycle construction,
//!   Tanner graphs and the `QPC 1` text format.
//! * [`channel`]: depolarizing noise with counter-addressable streams.
//! * [`analysis`]: transfer functions, BP4-matching ratio, scalability
//!   penalty and the weighted operation-count model.
//! * [`harness`]: Monte Carlo FER estimation with Wilson intervals and a
//!   deterministic (parallel or sequential) frame executor.

pub mod analysis;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod pauli;

pub use channel::{prior_llr, ChannelPrior, DepolarizingChannel};
pub use code::{build_gb, compute_params, CodeParams, GbSpec, SparseCheckMatrix, TannerGraph};
pub use decoder::{DecodeResult, Decoder, DecoderConfig, GainParams, Variant, VnMode};
pub use error::{Error, Result};
pub use pauli::{BitVector, Pauli, PauliVector};

/// Crate version echoed into every persisted result.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
