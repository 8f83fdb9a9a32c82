//! Seeded Monte Carlo over the 2×2 Rayleigh broadcast channel.
//!
//! Every trial draws its own ChaCha stream keyed by `(master_seed, snr index,
//! trial index)`, so results do not depend on the worker count. One draw of
//! messages, channel and noise is decoded under every side configuration,
//! which keeps the curves paired.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::codec::{decode, subcode, Codebook, Decoder, Mat2, MessageTuple, SideInfoConfig, Subcode};
use crate::error::{Error, Result};
use crate::partition::PartitionSpec;

/// Transmit antennas.
pub const N_T: u32 = 2;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub snr_db_points: Vec<f64>,
    pub trials_per_point: u64,
    pub master_seed: u64,
    /// Indices of the revealed messages; the receiver knows their true values.
    pub side_configs: Vec<Vec<usize>>,
    pub decoder: Decoder,
}

impl SweepConfig {
    pub fn validate(&self, spec: &PartitionSpec) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.snr_db_points.is_empty() {
            return Err(Error::InvalidConfig("no snr points".into()));
        }
        if self.snr_db_points.iter().any(|s| s.is_nan()) || self.snr_db_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("snr points must be strictly increasing".into()));
        }
        if self.side_configs.is_empty() {
            return Err(Error::InvalidConfig("no side configurations".into()));
        }
        for s in &self.side_configs {
            for &k in s {
                if k >= spec.k() {
                    return Err(Error::InvalidSideInfo { index: k, count: spec.k() });
                }
            }
        }
        Ok(())
    }
}

/// `{}`, `{1}`, `{1,2}`: one-based message indices.
pub fn side_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CerPoint {
    pub snr_db: f64,
    pub errors: u64,
    pub trials: u64,
}

impl CerPoint {
    pub fn cer(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CerCurve {
    pub side_config: Vec<usize>,
    pub seed: u64,
    pub points: Vec<CerPoint>,
}

impl CerCurve {
    pub fn label(&self) -> String {
        side_label(&self.side_config)
    }
}

fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Complex normal with `E|z|² = var`, by Box–Muller.
fn complex_normal<R: Rng>(rng: &mut R, var: f64) -> Complex64 {
    // 1 - u keeps the logarithm finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-var * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    Complex64::new(r * t.cos(), r * t.sin())
}

fn complex_matrix<R: Rng>(rng: &mut R, var: f64) -> Mat2 {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for row in &mut m {
        for v in row.iter_mut() {
            *v = complex_normal(rng, var);
        }
    }
    m
}

/// Noise variance per complex entry, `σ² = n_t / SNR`.
pub fn noise_variance(snr_db: f64) -> f64 {
    N_T as f64 / 10f64.powf(snr_db / 10.0)
}

/// One realization: messages, channel and received matrix.
#[derive(Clone, Debug)]
pub struct Trial {
    pub tuple: MessageTuple,
    pub h: Mat2,
    pub y: Mat2,
}

pub fn draw_trial(book: &Codebook, seed: u64, snr_index: usize, snr_db: f64, trial: u64) -> Trial {
    let mut rng = trial_rng(seed, snr_index, trial);
    let tuple = MessageTuple(book.sizes().iter().map(|&w| rng.random_range(0..w)).collect());
    let h = complex_matrix(&mut rng, 1.0);
    let z = complex_matrix(&mut rng, noise_variance(snr_db));
    let x = book.transmit(book.index_of(&tuple));
    let y = std::array::from_fn(|i| std::array::from_fn(|j| h[i][0] * x[0][j] + h[i][1] * x[1][j] + z[i][j]));
    Trial { tuple, h, y }
}

/// Whether the decoder got any unknown message wrong under side information `s`.
/// `full` is the unrestricted subcode, passed in so it is built once per sweep.
pub fn trial_error(book: &Codebook, full: &Subcode, decoder: Decoder, trial: &Trial, s: &[usize]) -> Result<bool> {
    let got = if s.is_empty() {
        decode(decoder, &trial.y, &trial.h, book, full)
    } else {
        let side = SideInfoConfig::new(s.iter().map(|&k| (k, trial.tuple.0[k])));
        decode(decoder, &trial.y, &trial.h, book, &subcode(book, &side)?)
    };
    Ok((0..book.sizes().len()).any(|k| !s.contains(&k) && got.0[k] != trial.tuple.0[k]))
}

pub fn run_sweep(book: &Codebook, cfg: &SweepConfig) -> Result<Vec<CerCurve>> {
    cfg.validate(book.spec())?;
    let full = subcode(book, &SideInfoConfig::none())?;
    let mut curves: Vec<CerCurve> = cfg
        .side_configs
        .iter()
        .map(|s| CerCurve { side_config: s.clone(), seed: cfg.master_seed, points: Vec::new() })
        .collect();
    for (si, &snr_db) in cfg.snr_db_points.iter().enumerate() {
        let errors: Vec<u64> = (0..cfg.trials_per_point)
            .into_par_iter()
            .map(|t| {
                let trial = draw_trial(book, cfg.master_seed, si, snr_db, t);
                cfg.side_configs
                    .iter()
                    .map(|s| trial_error(book, &full, cfg.decoder, &trial, s).map(u64::from))
                    .collect::<Result<Vec<u64>>>()
            })
            .try_reduce(
                || vec![0; cfg.side_configs.len()],
                |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
            )?;
        for (curve, e) in curves.iter_mut().zip(errors) {
            curve.points.push(CerPoint { snr_db, errors: e, trials: cfg.trials_per_point });
        }
    }
    Ok(curves)
}

/// SNR at which the curve crosses `target`, interpolating `log10(CER)` linearly in dB.
pub fn snr_at_cer(curve: &CerCurve, target: f64) -> Result<f64> {
    let lt = target.log10();
    for w in curve.points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ca, cb) = (a.cer(), b.cer());
        if ca >= target && cb <= target && ca > 0.0 {
            if cb == 0.0 {
                // zero errors at the right end: no log to interpolate against
                return Err(Error::OutOfRange { target });
            }
            if ca == cb {
                return Ok(a.snr_db);
            }
            let (la, lb) = (ca.log10(), cb.log10());
            return Ok(a.snr_db + (lt - la) / (lb - la) * (b.snr_db - a.snr_db));
        }
    }
    Err(Error::OutOfRange { target })
}

/// `snr_A(target) - snr_B(target)`: how much more SNR curve A needs.
pub fn gap_at_cer(a: &CerCurve, b: &CerCurve, target: f64) -> Result<f64> {
    Ok(snr_at_cer(a, target)? - snr_at_cer(b, target)?)
}

/// Hex SHA-256 of the partition's text form.
pub fn spec_hash(spec: &PartitionSpec) -> String {
    let digest = Sha256::digest(spec.to_text().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Writes the curves as CSV after a `#`-prefixed metadata block.
pub fn write_curves_csv<W: Write>(spec: &PartitionSpec, cfg: &SweepConfig, curves: &[CerCurve], mut out: W) -> Result<()> {
    writeln!(out, "# seed={}", cfg.master_seed)?;
    writeln!(out, "# decoder={}", cfg.decoder)?;
    writeln!(out, "# spec_sha256={}", spec_hash(spec))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["side_config", "snr_db", "trials", "errors", "cer"])?;
    for c in curves {
        for p in &c.points {
            w.write_record([c.label(), p.snr_db.to_string(), p.trials.to_string(), p.errors.to_string(), p.cer().to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
