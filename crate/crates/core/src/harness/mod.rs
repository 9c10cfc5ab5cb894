//! Monte Carlo frame-error-rate estimation.
//!
//! Every point runs frames `0, 1, 2, …` until `target_failures` failures or
//! `max_frames` frames, whichever comes first. Frame `f` draws its error
//! from channel stream `f` under the master seed, so the same frames are
//! seen by every decoder and every ε of a sweep.

mod exec;
mod wilson;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use exec::Execution;
pub use wilson::{relative_half_width, wilson_interval, Z_95};

use crate::channel::{prior_llr, DepolarizingChannel};
use crate::code::{write_code, SparseCheckMatrix, TannerGraph};
use crate::decoder::{DecodeResult, Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::VERSION;

pub const DEFAULT_TARGET_FAILURES: u64 = 500;
pub const DEFAULT_MAX_FRAMES: u64 = 20_000_000;

/// Decoder prior across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PriorMode {
    /// `ε0 = ε` at every point.
    Matched,
    /// One `ε0` for the whole sweep.
    Fixed { epsilon0: f64 },
}

impl PriorMode {
    pub fn epsilon0(&self, epsilon: f64) -> f64 {
        match *self {
            PriorMode::Matched => epsilon,
            PriorMode::Fixed { epsilon0 } => epsilon0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Free-form label, usually the code file path.
    pub code: String,
    /// SHA-256 of the canonical code text.
    pub code_digest: String,
    pub decoder: DecoderConfig,
    pub epsilons: Vec<f64>,
    pub prior: PriorMode,
    pub target_failures: u64,
    pub max_frames: u64,
    pub seed: u64,
    /// Worker threads; results do not depend on it, so it is not persisted.
    #[serde(skip)]
    pub threads: usize,
}

impl SweepConfig {
    /// Standard protocol defaults (500 failures, 2·10⁷ frame cap), matched prior.
    pub fn new(
        h: &SparseCheckMatrix,
        code: impl Into<String>,
        decoder: DecoderConfig,
        epsilons: Vec<f64>,
        seed: u64,
    ) -> Self {
        SweepConfig {
            code: code.into(),
            code_digest: code_digest(h),
            decoder,
            epsilons,
            prior: PriorMode::Matched,
            target_failures: DEFAULT_TARGET_FAILURES,
            max_frames: DEFAULT_MAX_FRAMES,
            seed,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.decoder.validate()?;
        if self.target_failures == 0 || self.max_frames == 0 {
            return Err(Error::InvalidConfig(
                "target_failures and max_frames must be at least 1".into(),
            ));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::InvalidConfig(format!("epsilon {e} not in (0, 1)")));
        }
        if let PriorMode::Fixed { epsilon0 } = self.prior {
            prior_llr(epsilon0)?;
        }
        Ok(())
    }

    fn execution(&self) -> Execution {
        Execution::from_threads(self.threads)
    }
}

pub fn code_digest(h: &SparseCheckMatrix) -> String {
    hex::encode(Sha256::digest(write_code(h).as_bytes()))
}

/// Everything that determines a point's statistics.
#[derive(Serialize)]
struct PointKey<'a> {
    code_digest: &'a str,
    decoder: &'a DecoderConfig,
    epsilon: f64,
    epsilon0: f64,
    target_failures: u64,
    max_frames: u64,
    seed: u64,
    version: &'a str,
}

fn point_digest(cfg: &SweepConfig, epsilon: f64) -> String {
    let key = PointKey {
        code_digest: &cfg.code_digest,
        decoder: &cfg.decoder,
        epsilon,
        epsilon0: cfg.prior.epsilon0(epsilon),
        target_failures: cfg.target_failures,
        max_frames: cfg.max_frames,
        seed: cfg.seed,
        version: VERSION,
    };
    let json = serde_json::to_vec(&key).expect("plain data serializes");
    hex::encode(Sha256::digest(&json))
}

/// One FER estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FerPoint {
    pub epsilon: f64,
    pub epsilon0: f64,
    pub l0: f64,
    pub frames: u64,
    pub failures: u64,
    pub fer: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub mean_iterations: f64,
    /// The frame cap ended the point before the failure target.
    pub cap_hit: bool,
    pub config_digest: String,
    pub seed: u64,
}

impl FerPoint {
    pub fn relative_half_width(&self) -> f64 {
        (self.wilson_high - self.wilson_low) / (2.0 * self.fer)
    }
}

/// Estimates the FER at one ε.
pub fn run_point(graph: &TannerGraph, cfg: &SweepConfig, epsilon: f64) -> Result<FerPoint> {
    run_point_with(graph, cfg, epsilon, cfg.execution())
}

/// As [`run_point`] with an explicit executor.
pub fn run_point_with(
    graph: &TannerGraph,
    cfg: &SweepConfig,
    epsilon: f64,
    exec: Execution,
) -> Result<FerPoint> {
    cfg.validate()?;
    let channel = DepolarizingChannel::new(epsilon, cfg.seed)?;
    let epsilon0 = cfg.prior.epsilon0(epsilon);
    let prior = prior_llr(epsilon0)?;
    let t = exec::run_frames(
        exec,
        graph,
        cfg.decoder,
        channel,
        prior,
        cfg.target_failures,
        cfg.max_frames,
    )?;
    let (wilson_low, wilson_high) = wilson_interval(t.failures, t.frames, 0.95)?;
    Ok(FerPoint {
        epsilon,
        epsilon0,
        l0: prior.llr,
        frames: t.frames,
        failures: t.failures,
        fer: t.failures as f64 / t.frames as f64,
        wilson_low,
        wilson_high,
        mean_iterations: t.iterations as f64 / t.frames as f64,
        cap_hit: t.failures < cfg.target_failures,
        config_digest: point_digest(cfg, epsilon),
        seed: cfg.seed,
    })
}

/// A persisted point: the estimate, the sweep it belongs to, and the
/// software version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    #[serde(flatten)]
    pub point: FerPoint,
    pub config: SweepConfig,
    pub version: String,
}

pub const RESULTS_FILE: &str = "results.json";
pub const TSV_FILE: &str = "fer.tsv";
const POINTS_DIR: &str = "points";

fn read_record(path: &Path) -> Option<PointRecord> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// `<epsilon> <fer>` per line, ascending ε, 17 significant digits.
pub fn fer_tsv(points: &[FerPoint]) -> String {
    let mut sorted: Vec<&FerPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    let mut out = String::new();
    for p in sorted {
        let _ = writeln!(out, "{:.16e} {:.16e}", p.epsilon, p.fer);
    }
    out
}

/// Runs every ε of the sweep, skipping points whose record (same digest)
/// already exists under `out_dir/points/`, then writes
/// `out_dir/results.json` and `out_dir/fer.tsv`. Points come back in
/// ascending ε.
pub fn run_sweep(
    graph: &TannerGraph,
    cfg: &SweepConfig,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<FerPoint>> {
    cfg.validate()?;
    let out_dir = out_dir.as_ref();
    let points_dir = out_dir.join(POINTS_DIR);
    std::fs::create_dir_all(&points_dir).map_err(|e| Error::io(&points_dir, e))?;

    let mut epsilons = cfg.epsilons.clone();
    epsilons.sort_by(f64::total_cmp);
    epsilons.dedup();

    let mut records = Vec::with_capacity(epsilons.len());
    for &eps in &epsilons {
        let digest = point_digest(cfg, eps);
        let path: PathBuf = points_dir.join(format!("{digest}.json"));
        let point = match read_record(&path).filter(|r| r.point.config_digest == digest) {
            Some(r) => {
                log::info!("eps={eps}: reusing {}", path.display());
                r.point
            }
            None => {
                let p = run_point(graph, cfg, eps)?;
                log::info!(
                    "eps={eps}: {}/{} fer={:.4e} [{:.4e}, {:.4e}]",
                    p.failures,
                    p.frames,
                    p.fer,
                    p.wilson_low,
                    p.wilson_high
                );
                let rec = PointRecord {
                    point: p.clone(),
                    config: cfg.clone(),
                    version: VERSION.to_string(),
                };
                write_json(&path, &rec)?;
                p
            }
        };
        records.push(PointRecord {
            point,
            config: cfg.clone(),
            version: VERSION.to_string(),
        });
    }

    write_json(&out_dir.join(RESULTS_FILE), &records)?;
    let points: Vec<FerPoint> = records.into_iter().map(|r| r.point).collect();
    let tsv = out_dir.join(TSV_FILE);
    std::fs::write(&tsv, fer_tsv(&points)).map_err(|e| Error::io(&tsv, e))?;
    Ok(points)
}

/// Decodes frame `frame` of the point at `epsilon` with tracing on.
pub fn trace_frame(
    graph: &TannerGraph,
    cfg: &SweepConfig,
    epsilon: f64,
    frame: u64,
) -> Result<DecodeResult> {
    let channel = DepolarizingChannel::new(epsilon, cfg.seed)?;
    let prior = prior_llr(cfg.prior.epsilon0(epsilon))?;
    let e = channel.sample_error(graph.n(), frame);
    let mut s = crate::pauli::BitVector::zeros(graph.m());
    graph.syndrome_into(&e, &mut s);
    Decoder::new(graph, cfg.decoder)?.decode_traced(&s, &prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_gb, GbSpec};
    use crate::decoder::{GainParams, Variant};

    const PINNED_FRAMES: u64 = 538;

    fn toy() -> SparseCheckMatrix {
        build_gb(&GbSpec::new(3, vec![0, 1], vec![0, 2]).unwrap()).unwrap()
    }

    fn cfg(h: &SparseCheckMatrix, variant: Variant, l_max: usize) -> SweepConfig {
        SweepConfig::new(h, "toy", DecoderConfig::new(variant, l_max), vec![0.5], 7)
    }

    #[test]
    fn stops_at_first_failure_when_target_is_one() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::MinSum, 1);
        c.target_failures = 1;
        // At ε = 0.74 frame 0 almost surely has a nonzero syndrome; with one
        // iteration nothing can be corrected.
        let ch = DepolarizingChannel::new(0.74, c.seed).unwrap();
        let e = ch.sample_error(6, 0);
        assert!(!crate::pauli::syndrome(&h, &e).unwrap().is_zero());
        let p = run_point_with(&g, &c, 0.74, Execution::Sequential).unwrap();
        assert_eq!((p.frames, p.failures, p.fer), (1, 1, 1.0));
        assert!(!p.cap_hit);
    }

    #[test]
    fn single_iteration_fails_on_any_nonzero_syndrome() {
        // With l_max = 1 only the all-identity estimate is tried, so the FER
        // equals the probability of a nonzero syndrome.
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::MinSum, 1);
        c.max_frames = 5000;
        c.target_failures = u64::MAX;
        let p = run_point_with(&g, &c, 0.5, Execution::Sequential).unwrap();
        let ch = DepolarizingChannel::new(0.5, c.seed).unwrap();
        let nonzero = (0..5000)
            .filter(|&f| {
                !crate::pauli::syndrome(&h, &ch.sample_error(6, f))
                    .unwrap()
                    .is_zero()
            })
            .count() as u64;
        assert_eq!(p.failures, nonzero);
        assert!(p.fer > 0.8);
        assert!(p.cap_hit);
    }

    #[test]
    fn stopping_rule_respects_target() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::MinSum, 1);
        c.target_failures = 500;
        let p = run_point(&g, &c, 0.5).unwrap();
        assert_eq!(p.failures, 500);
        assert!(p.frames < 700);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let h = toy();
        let g = TannerGraph::new(&h);
        for variant in [Variant::Bp4, Variant::Sagms(GainParams::default())] {
            let mut c = cfg(&h, variant, 4);
            c.target_failures = 37;
            let seq = run_point_with(&g, &c, 0.2, Execution::Sequential).unwrap();
            for threads in [2, 8] {
                let par = run_point_with(&g, &c, 0.2, Execution::Parallel { threads }).unwrap();
                assert_eq!(par, seq);
            }
        }
    }

    #[test]
    fn prior_modes() {
        assert_eq!(PriorMode::Matched.epsilon0(0.03), 0.03);
        assert_eq!(PriorMode::Fixed { epsilon0: 0.1 }.epsilon0(0.03), 0.1);
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::MinSum, 2);
        c.max_frames = 10;
        c.prior = PriorMode::Fixed { epsilon0: 0.1 };
        let p = run_point(&g, &c, 0.02).unwrap();
        assert!((p.l0 - 27f64.ln()).abs() < 1e-12);
        c.prior = PriorMode::Matched;
        let p = run_point(&g, &c, 0.02).unwrap();
        assert!((p.l0 - prior_llr(0.02).unwrap().llr).abs() < 1e-15);
    }

    #[test]
    fn invalid_configs() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::MinSum, 2);
        c.target_failures = 0;
        assert!(run_point(&g, &c, 0.1).is_err());
        let mut c = cfg(&h, Variant::MinSum, 2);
        c.epsilons = vec![1.5];
        assert!(c.validate().is_err());
    }

    #[test]
    fn tsv_is_sorted_two_column() {
        let mk = |epsilon, fer| FerPoint {
            epsilon,
            epsilon0: epsilon,
            l0: 0.0,
            frames: 1,
            failures: 0,
            fer,
            wilson_low: 0.0,
            wilson_high: 1.0,
            mean_iterations: 1.0,
            cap_hit: false,
            config_digest: String::new(),
            seed: 0,
        };
        let tsv = fer_tsv(&[mk(0.05, 0.25), mk(0.01, 0.5)]);
        assert_eq!(tsv, "1.0000000000000000e-2 5.0000000000000000e-1\n5.0000000000000003e-2 2.5000000000000000e-1\n");
    }

    #[test]
    fn trace_frame_records_each_iteration() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let c = cfg(&h, Variant::Sagms(GainParams::default()), 5);
        let r = trace_frame(&g, &c, 0.3, 0).unwrap();
        let t = r.trace.unwrap();
        assert_eq!(t.len(), r.iterations);
        assert!(t.iter().enumerate().all(|(i, rec)| rec.iteration == i + 1));
    }

    #[test]
    fn seed_pinned_sanity_point() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let c = cfg(&h, Variant::MinSum, 1);
        let p = run_point(&g, &c, 0.5).unwrap();
        assert_eq!((p.failures, p.frames), (500, PINNED_FRAMES));
    }

    #[test]
    fn sweep_resumes_missing_points_only() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut c = cfg(&h, Variant::Sagms(GainParams::default()), 4);
        c.epsilons = vec![0.2, 0.1];
        c.target_failures = 20;
        let dir = tempfile::tempdir().unwrap();
        let first = run_sweep(&g, &c, dir.path()).unwrap();
        assert_eq!(
            first.iter().map(|p| p.epsilon).collect::<Vec<_>>(),
            vec![0.1, 0.2]
        );
        let results = std::fs::read(dir.path().join(RESULTS_FILE)).unwrap();
        let tsv = std::fs::read(dir.path().join(TSV_FILE)).unwrap();

        let points = dir.path().join(POINTS_DIR);
        let victim = points.join(format!("{}.json", first[1].config_digest));
        let kept = points.join(format!("{}.json", first[0].config_digest));
        let kept_mtime = std::fs::metadata(&kept).unwrap().modified().unwrap();
        std::fs::remove_file(&victim).unwrap();

        let second = run_sweep(&g, &c, dir.path()).unwrap();
        assert_eq!(second, first);
        assert!(victim.exists());
        assert_eq!(
            std::fs::metadata(&kept).unwrap().modified().unwrap(),
            kept_mtime
        );
        assert_eq!(
            std::fs::read(dir.path().join(RESULTS_FILE)).unwrap(),
            results
        );
        assert_eq!(std::fs::read(dir.path().join(TSV_FILE)).unwrap(), tsv);

        let record: Vec<PointRecord> = serde_json::from_slice(&results).unwrap();
        assert_eq!(record[0].config, c);
        assert_eq!(record[0].version, VERSION);
    }

    #[test]
    fn digest_depends_on_statistics_inputs_only() {
        let h = toy();
        let mut c = cfg(&h, Variant::MinSum, 2);
        let d = point_digest(&c, 0.1);
        c.threads = 8;
        c.code = "elsewhere".into();
        assert_eq!(point_digest(&c, 0.1), d);
        c.seed += 1;
        assert_ne!(point_digest(&c, 0.1), d);
        assert_eq!(d.len(), 64);
    }
}
