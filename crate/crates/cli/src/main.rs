//! `qsagms`: build and check GB codes, run FER sweeps, and evaluate the
//! gain-analysis formulas.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
//! Log verbosity comes from `QSAGMS_LOG` (`error`, `info`, `debug`, `trace`).

mod ranges;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsagms::analysis::{self, CurveKind, OpVariant, TransferCurve};
use qsagms::harness::{self, PriorMode, SweepConfig};
use qsagms::{
    build_gb,
    code::{load_code, save_code},
    compute_params, DecoderConfig, GainParams, GbSpec, TannerGraph, Variant, VnMode,
};

#[derive(Parser)]
#[command(name = "qsagms", version = qsagms::VERSION, about = "Scalar GF(4) min-sum decoders for quantum LDPC codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a generalized bicycle code from two circulant polynomials.
    BuildCode(BuildCodeArgs),
    /// Check a code file and report its parameters.
    Validate {
        /// Code file.
        path: PathBuf,
    },
    /// Estimate frame error rates over a range of channel error rates.
    Simulate(SimulateArgs),
    /// Evaluate transfer curves, BP4-matching ratios and operation counts.
    Analyze {
        #[command(subcommand)]
        mode: AnalyzeMode,
    },
    /// Print the software version.
    Version,
}

#[derive(Args)]
struct BuildCodeArgs {
    /// Circulant size ℓ; the code has n = 2ℓ qubits.
    #[arg(long)]
    ell: usize,
    /// Exponents of a(x), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<usize>,
    /// Exponents of b(x), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<usize>,
    /// Output code file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderKind {
    Bp4,
    Ms,
    Sms,
    Sagms,
}

#[derive(Clone, Copy, ValueEnum)]
enum VnModeArg {
    Additive,
    Marginal,
}

#[derive(Args)]
struct SimulateArgs {
    /// Code file.
    #[arg(long)]
    code: PathBuf,
    /// Check-node rule.
    #[arg(long, value_enum)]
    decoder: DecoderKind,
    /// Channel error rates: `a,b,c` or log-spaced `start:stop:count`.
    #[arg(long, value_parser = ranges::parse_log_list)]
    eps: std::vec::Vec<f64>,
    /// Decoder prior: `matched` (ε0 = ε) or a fixed ε0.
    #[arg(long, default_value = "matched", value_parser = parse_prior)]
    eps0: PriorMode,
    /// Maximum decoding iterations.
    #[arg(long, default_value_t = 8)]
    lmax: usize,
    /// SMS scaling factor [default: 0.50].
    #[arg(long)]
    alpha: Option<f64>,
    /// SAGMS gain at γ = 1 [default: 0.30].
    #[arg(long)]
    alpha_min: Option<f64>,
    /// SAGMS gain at γ = 0 [default: 0.50].
    #[arg(long)]
    alpha_max: Option<f64>,
    /// SAGMS boost on unsatisfied checks [default: 1.10].
    #[arg(long)]
    eta: Option<f64>,
    /// Stop a point after this many failures.
    #[arg(long, default_value_t = harness::DEFAULT_TARGET_FAILURES)]
    target_failures: u64,
    /// Stop a point after this many frames.
    #[arg(long, default_value_t = harness::DEFAULT_MAX_FRAMES)]
    max_frames: u64,
    /// Master seed; every frame's error is a function of (seed, frame index).
    #[arg(long)]
    seed: u64,
    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Qubit-update rule.
    #[arg(long, value_enum, default_value = "marginal")]
    vn_mode: VnModeArg,
    /// Output directory for results.json, fer.tsv and per-point records.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Also write the per-iteration trace of this frame index at every ε.
    #[arg(long, value_name = "FRAME")]
    trace: Option<u64>,
}

#[derive(Subcommand)]
enum AnalyzeMode {
    /// Sample the BP4, MS, SMS and SAGMS transfer curves.
    Transfer {
        /// Check degree.
        #[arg(long, default_value_t = 4)]
        dc: usize,
        /// SMS scaling factor.
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        /// SAGMS effective gain.
        #[arg(long, default_value_t = 0.65)]
        alpha_eff: f64,
        /// Input magnitudes: `a,b,c` or linearly spaced `start:stop:count`.
        #[arg(long, default_value = "0.05:3:20", value_parser = ranges::parse_linear_list)]
        kappa: std::vec::Vec<f64>,
        /// Write one two-column file per curve into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// BP4-matching scaling ratio, exact and approximate.
    AlphaStar {
        #[command(flatten)]
        prior: PriorArgs,
        /// Check degrees, comma separated.
        #[arg(long, value_parser = ranges::parse_usize_list, default_value = "10,16")]
        dc: std::vec::Vec<usize>,
    },
    /// Change of the approximate BP4-matching ratio between two check degrees.
    DeltaAlpha {
        #[command(flatten)]
        prior: PriorArgs,
        /// Reference check degree.
        #[arg(long, default_value_t = 10)]
        dc_ref: usize,
        /// New check degree.
        #[arg(long, default_value_t = 16)]
        dc_new: usize,
    },
    /// Weighted per-check operation counts (weights 1, 1, 1, 10).
    Opcount {
        /// Check degree.
        #[arg(long, default_value_t = 10)]
        dc: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PriorArgs {
    /// Prior LLR L0.
    #[arg(long = "L0")]
    l0: Option<f64>,
    /// Prior error rate ε0, converted to L0 = ln(3(1 − ε0)/ε0).
    #[arg(long)]
    eps0: Option<f64>,
}

impl PriorArgs {
    fn l0(&self) -> Result<f64, Failure> {
        match (self.l0, self.eps0) {
            (Some(l0), _) => Ok(l0),
            (None, Some(e)) => Ok(qsagms::prior_llr(e).map_err(Failure::usage)?.llr),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

fn parse_prior(text: &str) -> Result<PriorMode, String> {
    if text == "matched" {
        return Ok(PriorMode::Matched);
    }
    let epsilon0: f64 = text
        .parse()
        .map_err(|_| format!("{text:?}: expected `matched` or a number"))?;
    qsagms::prior_llr(epsilon0).map_err(|e| e.to_string())?;
    Ok(PriorMode::Fixed { epsilon0 })
}

/// An error together with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    const VALIDATION: u8 = 1;
    const USAGE: u8 = 2;
    const IO: u8 = 3;

    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: Self::USAGE,
            message: e.to_string(),
        }
    }

    /// I/O errors map to 3, anything else to `otherwise`.
    fn from_lib(e: qsagms::Error, otherwise: u8) -> Self {
        let code = match e {
            qsagms::Error::Io { .. } | qsagms::Error::Json { .. } => Self::IO,
            _ => otherwise,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QSAGMS_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Failure::USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::BuildCode(args) => build_code(&args),
        Command::Validate { path } => validate(&path),
        Command::Simulate(args) => simulate(&args),
        Command::Analyze { mode } => analyze(&mode),
        Command::Version => Ok(format!("qsagms {}\n", qsagms::VERSION)),
    };
    match result {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn build_code(args: &BuildCodeArgs) -> Result<String, Failure> {
    let spec = GbSpec::new(args.ell, args.a.clone(), args.b.clone()).map_err(Failure::usage)?;
    let h = build_gb(&spec).map_err(Failure::usage)?;
    save_code(&h, &args.out).map_err(|e| Failure::from_lib(e, Failure::IO))?;
    Ok(format!("{}\n", compute_params(&h)))
}

fn validate(path: &Path) -> Result<String, Failure> {
    let h = load_code(path, true).map_err(|e| Failure::from_lib(e, Failure::VALIDATION))?;
    let p = compute_params(&h);
    Ok(format!(
        "{p} regular={} overcomplete={} edges={}\n",
        p.regular,
        p.overcomplete,
        h.nnz()
    ))
}

fn decoder_variant(args: &SimulateArgs) -> Result<Variant, Failure> {
    let sagms_flags = args.alpha_min.is_some() || args.alpha_max.is_some() || args.eta.is_some();
    let misuse = |flag: &str, decoder: &str| {
        Failure::usage(format!("{flag} applies only to --decoder {decoder}"))
    };
    match args.decoder {
        DecoderKind::Sms if sagms_flags => Err(misuse("--alpha-min/--alpha-max/--eta", "sagms")),
        DecoderKind::Sagms if args.alpha.is_some() => Err(misuse("--alpha", "sms")),
        DecoderKind::Bp4 | DecoderKind::Ms if args.alpha.is_some() => Err(misuse("--alpha", "sms")),
        DecoderKind::Bp4 | DecoderKind::Ms if sagms_flags => {
            Err(misuse("--alpha-min/--alpha-max/--eta", "sagms"))
        }
        DecoderKind::Bp4 => Ok(Variant::Bp4),
        DecoderKind::Ms => Ok(Variant::MinSum),
        DecoderKind::Sms => Ok(Variant::ScaledMinSum {
            alpha: args.alpha.unwrap_or(0.50),
        }),
        DecoderKind::Sagms => {
            let d = GainParams::default();
            Ok(Variant::Sagms(GainParams {
                alpha_min: args.alpha_min.unwrap_or(d.alpha_min),
                alpha_max: args.alpha_max.unwrap_or(d.alpha_max),
                eta_unsat: args.eta.unwrap_or(d.eta_unsat),
            }))
        }
    }
}

fn simulate(args: &SimulateArgs) -> Result<String, Failure> {
    let vn_mode = match args.vn_mode {
        VnModeArg::Additive => VnMode::Additive,
        VnModeArg::Marginal => VnMode::Marginal,
    };
    let decoder = DecoderConfig::new(decoder_variant(args)?, args.lmax).with_vn_mode(vn_mode);
    decoder.validate().map_err(Failure::usage)?;
    let h = load_code(&args.code, true).map_err(|e| Failure::from_lib(e, Failure::VALIDATION))?;
    let graph = TannerGraph::new(&h);

    let mut cfg = SweepConfig::new(
        &h,
        args.code.display().to_string(),
        decoder,
        args.eps.clone(),
        args.seed,
    );
    cfg.prior = args.eps0;
    cfg.target_failures = args.target_failures;
    cfg.max_frames = args.max_frames;
    cfg.threads = args.threads;
    cfg.validate().map_err(Failure::usage)?;

    let points = harness::run_sweep(&graph, &cfg, &args.out)
        .map_err(|e| Failure::from_lib(e, Failure::USAGE))?;

    if let Some(frame) = args.trace {
        let dir = args.out.join("traces");
        std::fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
        for p in &points {
            let r = harness::trace_frame(&graph, &cfg, p.epsilon, frame).map_err(Failure::usage)?;
            let path = dir.join(format!("{}_frame{frame}.json", p.config_digest));
            let json = serde_json_string(&r);
            std::fs::write(&path, json).map_err(|e| io_failure(&path, e))?;
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} {} on {} seed={}",
        decoder.variant.name(),
        args.lmax,
        compute_params(&h),
        args.seed
    );
    let _ = writeln!(
        out,
        "# epsilon epsilon0 frames failures fer wilson_low wilson_high mean_iter cap_hit digest"
    );
    for p in &points {
        let _ = writeln!(
            out,
            "{:.6e} {:.6e} {} {} {:.6e} {:.6e} {:.6e} {:.4} {} {}",
            p.epsilon,
            p.epsilon0,
            p.frames,
            p.failures,
            p.fer,
            p.wilson_low,
            p.wilson_high,
            p.mean_iterations,
            p.cap_hit,
            p.config_digest
        );
    }
    Ok(out)
}

fn serde_json_string(r: &qsagms::DecodeResult) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("plain data serializes");
    s.push('\n');
    s
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: Failure::IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn analyze(mode: &AnalyzeMode) -> Result<String, Failure> {
    let mut out = String::new();
    match mode {
        AnalyzeMode::Transfer {
            dc,
            alpha,
            alpha_eff,
            kappa,
            out: dir,
        } => {
            let kinds = [
                CurveKind::Bp4,
                CurveKind::MinSum,
                CurveKind::Scaled { alpha: *alpha },
                CurveKind::Sagms {
                    alpha_eff: *alpha_eff,
                },
            ];
            let curves = kinds
                .into_iter()
                .map(|k| TransferCurve::sample(k, *dc, kappa))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::usage)?;
            match dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                    for c in &curves {
                        let path = dir.join(format!("transfer_{}.dat", c.kind.name()));
                        std::fs::write(&path, c.to_two_column())
                            .map_err(|e| io_failure(&path, e))?;
                        let _ = writeln!(out, "{}", path.display());
                    }
                }
                None => {
                    for (i, c) in curves.iter().enumerate() {
                        if i > 0 {
                            out.push_str("\n\n");
                        }
                        let _ = writeln!(out, "# {} dc={}", c.kind.name(), dc);
                        out.push_str(&c.to_two_column());
                    }
                }
            }
        }
        AnalyzeMode::AlphaStar { prior, dc } => {
            let l0 = prior.l0()?;
            let _ = writeln!(out, "# L0={l0:.16e}");
            let _ = writeln!(out, "# dc approx exact");
            for &d in dc {
                let approx = analysis::alpha_star_approx(l0, d).map_err(Failure::usage)?;
                let exact = analysis::alpha_star_exact(l0, d).map_err(Failure::usage)?;
                let _ = writeln!(out, "{d} {approx:.16e} {exact:.16e}");
            }
        }
        AnalyzeMode::DeltaAlpha {
            prior,
            dc_ref,
            dc_new,
        } => {
            let l0 = prior.l0()?;
            let d = analysis::delta_alpha(l0, *dc_ref, *dc_new).map_err(Failure::usage)?;
            let _ = writeln!(out, "{d:.16e}");
        }
        AnalyzeMode::Opcount { dc } => {
            let _ = writeln!(out, "# dc={dc} weights={:?}", analysis::OpCount::WEIGHTS);
            let _ = writeln!(
                out,
                "{:<6} {:>5} {:>5} {:>5} {:>5} {:>8}",
                "rule", "add", "mul", "cmp", "trans", "weighted"
            );
            for v in OpVariant::ALL {
                let c = analysis::op_count(v, *dc).map_err(Failure::usage)?;
                let _ = writeln!(
                    out,
                    "{:<6} {:>5} {:>5} {:>5} {:>5} {:>8}",
                    v.name(),
                    c.adds,
                    c.muls,
                    c.cmps,
                    c.transcendentals,
                    c.weighted()
                );
            }
        }
    }
    Ok(out)
}
