//! AWGN/BPSK Monte-Carlo frame-error simulation.
//!
//! The all-zeros codeword is transmitted, so the received vector is
//! `y = γ·1 + z` with `z ~ N(0, σ² I)`. Noise for frame `k` comes from a
//! ChaCha stream selected by `k`, which makes every estimate independent of
//! how frames are distributed over threads.

mod lpdec;
pub mod simplex;

pub use lpdec::{lp_decode, separate_cut, ForbiddenSet, LpDecodeResult};
pub use simplex::{simplex_solve, LpProblem, LpRow, LpSolution, Sense};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fundamental_cone::GeneratorSet;
use crate::gf2codes::{BinaryMatrix, Codeword};
use crate::pseudogeometry::ChannelParams;

/// Frames simulated per parallel batch.
const BATCH: u64 = 2048;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// A decoded coordinate above this counts as nonzero.
pub const DECODE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub snr_db: f64,
    pub seed: u64,
    pub max_frames: u64,
    pub target_errors: u64,
    pub rate: f64,
}

impl SimConfig {
    pub fn new(snr_db: f64, rate: f64, seed: u64) -> Self {
        Self {
            snr_db,
            seed,
            max_frames: 1_000_000,
            target_errors: 100,
            rate,
        }
    }

    pub fn channel(&self) -> Result<ChannelParams> {
        ChannelParams::new(self.snr_db, self.rate)
    }

    fn validate(&self) -> Result<()> {
        if self.target_errors < 1 || self.max_frames < self.target_errors {
            return Err(Error::InvalidParameter(
                "need target_errors >= 1 and max_frames >= target_errors".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FerEstimate {
    pub frames: u64,
    pub errors: u64,
    pub erasures: u64,
    pub fer: f64,
    pub ci95: (f64, f64),
}

impl FerEstimate {
    pub fn from_counts(frames: u64, errors: u64, erasures: u64) -> Self {
        let fer = if frames == 0 { 0.0 } else { errors as f64 / frames as f64 };
        Self {
            frames,
            errors,
            erasures,
            fer,
            ci95: wilson_interval(errors, frames),
        }
    }

    pub fn csv_header() -> &'static str {
        "snr_db,frames,errors,fer,ci_lo,ci_hi,erasures"
    }

    pub fn csv_row(&self, snr_db: f64) -> String {
        format!(
            "{},{},{},{:e},{:e},{:e},{}",
            snr_db, self.frames, self.errors, self.fer, self.ci95.0, self.ci95.1, self.erasures
        )
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, frames: u64) -> (f64, f64) {
    if frames == 0 {
        return (0.0, 1.0);
    }
    let n = frames as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// Received vector of frame `frame` for an all-zeros transmission.
pub fn received_frame(ch: &ChannelParams, n: usize, seed: u64, frame: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    let (gamma, sigma) = (ch.gamma(), ch.sigma());
    standard_normals(&mut rng, n).into_iter().map(|z| gamma + sigma * z).collect()
}

/// `n` independent standard normal draws by Box-Muller.
pub fn standard_normals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut z = Vec::with_capacity(n + 1);
    while z.len() < n {
        let u1 = 1.0 - rng.gen::<f64>();
        let u2 = rng.gen::<f64>();
        let rad = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        z.push(rad * c);
        z.push(rad * s);
    }
    z.truncate(n);
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameOutcome {
    Correct,
    Error,
    Erasure,
}

/// Runs frames `0, 1, 2, …` until `target_errors` errors or `max_frames`
/// frames. Batches are evaluated in parallel and scanned in frame order.
pub fn run_frames<F>(cfg: &SimConfig, n: usize, frame_fn: F) -> Result<FerEstimate>
where
    F: Fn(&[f64]) -> FrameOutcome + Sync,
{
    cfg.validate()?;
    let ch = cfg.channel()?;
    let (mut frames, mut errors, mut erasures) = (0u64, 0u64, 0u64);
    let mut next = 0u64;
    while next < cfg.max_frames {
        let end = (next + BATCH).min(cfg.max_frames);
        let outcomes: Vec<FrameOutcome> = (next..end)
            .into_par_iter()
            .map(|k| frame_fn(&received_frame(&ch, n, cfg.seed, k)))
            .collect();
        for o in outcomes {
            match o {
                FrameOutcome::Correct => frames += 1,
                FrameOutcome::Error => {
                    frames += 1;
                    errors += 1;
                }
                FrameOutcome::Erasure => erasures += 1,
            }
            if errors >= cfg.target_errors {
                return Ok(FerEstimate::from_counts(frames, errors, erasures));
            }
        }
        next = end;
    }
    Ok(FerEstimate::from_counts(frames, errors, erasures))
}

fn outcome(err: bool) -> FrameOutcome {
    if err {
        FrameOutcome::Error
    } else {
        FrameOutcome::Correct
    }
}

/// ML decoding restricted to a subgroup of codewords: a frame fails when some
/// codeword `x` of the subgroup is at least as close to `y` as the
/// transmitted signal, i.e. `Σ_{i ∈ supp x} y_i ≤ 0`.
pub fn mld_subgroup_fer(codewords: &[Codeword], cfg: &SimConfig) -> Result<FerEstimate> {
    if codewords.is_empty() {
        return Err(Error::EmptySet);
    }
    if codewords.iter().any(|c| c.hamming_weight == 0) {
        return Err(Error::InvalidParameter("the all-zeros word cannot be in the subgroup".into()));
    }
    let n = codewords[0].bits.len();
    let supports: Vec<Vec<usize>> = codewords.iter().map(Codeword::support).collect();
    run_frames(cfg, n, |y| {
        outcome(supports.iter().any(|s| s.iter().map(|&i| y[i]).sum::<f64>() <= 0.0))
    })
}

/// LP decoding restricted to the cone generated by `set`: a frame fails when
/// `⟨ω, y⟩ < 0` for some generator `ω`.
pub fn lpd_subgroup_fer(set: &GeneratorSet, cfg: &SimConfig) -> Result<FerEstimate> {
    let n = set.dim().ok_or(Error::EmptySet)?;
    let sparse: Vec<Vec<(usize, f64)>> = set
        .rays()
        .iter()
        .map(|r| r.values().iter().copied().enumerate().filter(|p| p.1 != 0.0).collect())
        .collect();
    run_frames(cfg, n, |y| {
        outcome(sparse.iter().any(|w| w.iter().map(|&(i, v)| v * y[i]).sum::<f64>() < 0.0))
    })
}

/// Whether an LP decoder output counts as a frame error.
pub fn is_decoding_error(res: &LpDecodeResult) -> bool {
    res.x.iter().any(|&v| v > DECODE_TOL) || res.objective < -DECODE_TOL
}

/// Full LP decoding. Solver failures are counted as erasures.
pub fn lpd_full_fer(h: &BinaryMatrix, cfg: &SimConfig) -> Result<FerEstimate> {
    run_frames(cfg, h.cols(), |y| match lp_decode(h, y) {
        Ok(res) => outcome(is_decoding_error(&res)),
        Err(_) => FrameOutcome::Erasure,
    })
}
