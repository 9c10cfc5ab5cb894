//! Frame execution. Frames are ordered by index; the stopping frame is the
//! first index at which the failure count reaches the target, and every
//! frame past it is discarded. Totals therefore do not depend on the
//! executor, batch size or thread count.

use crate::channel::{ChannelPrior, DepolarizingChannel};
use crate::code::TannerGraph;
use crate::decoder::{Decoder, DecoderConfig};
use crate::error::Result;
use crate::pauli::{BitVector, Pauli};

/// How frames are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool with the given thread count (0 = rayon default).
    #[cfg(feature = "parallel")]
    Parallel {
        threads: usize,
    },
}

impl Execution {
    /// Parallel when the feature is on and more than one thread is asked for.
    pub fn from_threads(threads: usize) -> Self {
        #[cfg(feature = "parallel")]
        if threads != 1 {
            return Execution::Parallel { threads };
        }
        let _ = threads;
        Execution::Sequential
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Tally {
    pub frames: u64,
    pub failures: u64,
    pub iterations: u64,
}

#[derive(Debug, Clone, Copy)]
struct FrameOutcome {
    failed: bool,
    iterations: usize,
}

pub(crate) struct FrameWorker<'g> {
    decoder: Decoder<'g>,
    channel: DepolarizingChannel,
    prior: ChannelPrior,
    error: Vec<Pauli>,
    syndrome: BitVector,
}

impl<'g> FrameWorker<'g> {
    pub fn new(
        graph: &'g TannerGraph,
        cfg: DecoderConfig,
        channel: DepolarizingChannel,
        prior: ChannelPrior,
    ) -> Result<Self> {
        Ok(FrameWorker {
            decoder: Decoder::new(graph, cfg)?,
            channel,
            prior,
            error: vec![Pauli::I; graph.n()],
            syndrome: BitVector::zeros(graph.m()),
        })
    }

    fn run(&mut self, frame: u64) -> FrameOutcome {
        self.channel.sample_into(frame, &mut self.error);
        self.decoder
            .graph()
            .syndrome_into(&self.error, &mut self.syndrome);
        let r = self
            .decoder
            .decode(&self.syndrome, &self.prior)
            .expect("syndrome length fixed by construction");
        FrameOutcome {
            failed: !r.success,
            iterations: r.iterations,
        }
    }
}

impl Tally {
    /// Absorbs one frame; returns true once the target is reached.
    fn push(&mut self, o: FrameOutcome, target: u64) -> bool {
        self.frames += 1;
        self.failures += o.failed as u64;
        self.iterations += o.iterations as u64;
        self.failures >= target
    }
}

pub(crate) fn run_frames(
    exec: Execution,
    graph: &TannerGraph,
    cfg: DecoderConfig,
    channel: DepolarizingChannel,
    prior: ChannelPrior,
    target_failures: u64,
    max_frames: u64,
) -> Result<Tally> {
    let mut tally = Tally::default();
    match exec {
        Execution::Sequential => {
            let mut w = FrameWorker::new(graph, cfg, channel, prior)?;
            for f in 0..max_frames {
                if tally.push(w.run(f), target_failures) {
                    break;
                }
            }
        }
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => {
            use rayon::prelude::*;

            // Validate once up front so workers can unwrap.
            FrameWorker::new(graph, cfg, channel, prior)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            let mut batch = 256u64.max(64 * pool.current_num_threads() as u64);
            let mut next = 0u64;
            'outer: while next < max_frames {
                let end = max_frames.min(next + batch);
                let outcomes: Vec<FrameOutcome> = pool.install(|| {
                    (next..end)
                        .into_par_iter()
                        .map_init(
                            || FrameWorker::new(graph, cfg, channel, prior).expect("validated"),
                            |w, f| w.run(f),
                        )
                        .collect()
                });
                for o in outcomes {
                    if tally.push(o, target_failures) {
                        break 'outer;
                    }
                }
                next = end;
                batch = (batch * 2).min(1 << 16);
            }
        }
    }
    Ok(tally)
}
