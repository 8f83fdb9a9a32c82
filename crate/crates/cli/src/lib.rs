//! Config parsing and key=value reports behind the `gic` binary.

use std::fmt::Write as _;

use gic_core::algebra::{reduced_norm, reduced_norm_abs2, AlgebraElement};
use gic_core::analysis::{gain_report, predicted_min_det, rate_side_info, side_info_gain, DetSpectrum, Rational};
use gic_core::codec::{Codebook, Decoder};
use gic_core::partition::{build_partition, format_phi, PartitionSpec};
use gic_core::sim::{side_label, SweepConfig, N_T};
use gic_core::{Error, GaussianInteger, Result};

/// Parsed experiment file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub phis: Vec<AlgebraElement>,
    /// Zero-based revealed indices per side configuration.
    pub side_configs: Vec<Vec<usize>>,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub decoder: Decoder,
    pub n_r: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { phis: Vec::new(), side_configs: Vec::new(), snr_db: Vec::new(), trials: 1000, seed: 0, decoder: Decoder::Sphere, n_r: 2 }
    }
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse { line, field: field.to_string(), message: message.into() }
}

fn parse_phi(line: usize, value: &str) -> Result<AlgebraElement> {
    let pairs: Vec<&str> = value.split_whitespace().collect();
    if pairs.len() != 4 {
        return Err(parse_err(line, "phi", format!("expected four re,im pairs, got {}", pairs.len())));
    }
    let mut coords = [GaussianInteger::ZERO; 4];
    for (c, p) in coords.iter_mut().zip(&pairs) {
        let parts: Vec<&str> = p.split(',').collect();
        let [re, im] = parts.as_slice() else {
            return Err(parse_err(line, "phi", format!("`{p}` is not an re,im pair")));
        };
        let re: i64 = re.trim().parse().map_err(|_| parse_err(line, "phi", format!("`{re}` is not an integer")))?;
        let im: i64 = im.trim().parse().map_err(|_| parse_err(line, "phi", format!("`{im}` is not an integer")))?;
        *c = GaussianInteger::new(re, im);
    }
    Ok(AlgebraElement::from_vec(coords))
}

/// `{}`, `{1}`, `{1,2}` with one-based indices.
fn parse_side(line: usize, value: &str) -> Result<Vec<usize>> {
    let inner = value
        .strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or_else(|| parse_err(line, "side", "expected a braced set such as {1,2}"))?;
    let mut out = Vec::new();
    for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let k: usize = t.parse().map_err(|_| parse_err(line, "side", format!("`{t}` is not a message index")))?;
        if k == 0 {
            return Err(parse_err(line, "side", "message indices start at 1"));
        }
        if out.contains(&(k - 1)) {
            return Err(parse_err(line, "side", format!("message {k} listed twice")));
        }
        out.push(k - 1);
    }
    out.sort_unstable();
    Ok(out)
}

/// Either a list `10 12 14` or an inclusive range `start:stop:step`.
fn parse_snr(line: usize, value: &str) -> Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| parse_err(line, "snr_db", format!("`{t}` is not a number")));
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        let [a, b, s] = parts.as_slice() else {
            return Err(parse_err(line, "snr_db", "range must be start:stop:step"));
        };
        let (a, b, s) = (num(a)?, num(b)?, num(s)?);
        if s.is_nan() || s <= 0.0 || b < a {
            return Err(parse_err(line, "snr_db", "range needs stop >= start and step > 0"));
        }
        let n = ((b - a) / s + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * s).collect());
    }
    value.split_whitespace().map(num).collect()
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| parse_err(line, body, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "phi" => cfg.phis.push(parse_phi(line, value)?),
            "side" => cfg.side_configs.push(parse_side(line, value)?),
            "snr_db" => cfg.snr_db = parse_snr(line, value)?,
            "trials" => cfg.trials = value.parse().map_err(|_| parse_err(line, key, format!("`{value}` is not a count")))?,
            "seed" => cfg.seed = value.parse().map_err(|_| parse_err(line, key, format!("`{value}` is not a u64")))?,
            "decoder" => cfg.decoder = value.parse().map_err(|e: String| parse_err(line, key, e))?,
            "n_r" => cfg.n_r = value.parse().map_err(|_| parse_err(line, key, format!("`{value}` is not a count")))?,
            other => return Err(parse_err(line, other, "unknown key")),
        }
    }
    Ok(cfg)
}

impl RunConfig {
    pub fn partition(&self) -> Result<PartitionSpec> {
        build_partition(&self.phis)
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            snr_db_points: self.snr_db.clone(),
            trials_per_point: self.trials,
            master_seed: self.seed,
            side_configs: if self.side_configs.is_empty() { vec![vec![]] } else { self.side_configs.clone() },
            decoder: self.decoder,
        }
    }
}

/// One `key=value` line per check, and whether all passed.
pub fn verify_report() -> (String, bool) {
    let checks = gic_core::verify::verify_examples();
    let mut out = String::new();
    for c in &checks {
        let _ = writeln!(out, "check={} result={} detail=\"{}\"", c.name, if c.pass { "pass" } else { "fail" }, c.detail);
    }
    let ok = checks.iter().all(|c| c.pass);
    let _ = writeln!(out, "all={}", if ok { "pass" } else { "fail" });
    (out, ok)
}

pub fn partition_report(spec: &PartitionSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "messages={}", spec.k());
    for (k, phi) in spec.phis().iter().enumerate() {
        let n = k + 1;
        let _ = writeln!(out, "phi_{n}=\"{}\"", format_phi(phi));
        let _ = writeln!(out, "reduced_norm_{n}={}", reduced_norm(*phi));
        let _ = writeln!(out, "size_{n}={}", spec.sizes()[k]);
        let _ = writeln!(out, "expected_size_{n}={}", spec.expected_size(k));
    }
    let _ = writeln!(out, "q=\"{}\"", format_phi(&spec.q()));
    let _ = writeln!(out, "codebook_size={}", spec.total_size());
    let _ = writeln!(out, "shaping_index={}", spec.shaping().index());
    let _ = writeln!(out, "pairwise_coprime=pass");
    out
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Spectra and gains for the full code and each side configuration.
pub fn analyze_report(spec: PartitionSpec, side_configs: &[Vec<usize>], n_r: u32) -> Result<String> {
    let book = Codebook::new(spec);
    let spec = book.spec();
    let mut out = String::new();
    let full = DetSpectrum::revealed(&book, &[])?;
    let _ = writeln!(out, "codebook_size={}", book.len());
    let _ = writeln!(out, "delta={}", full.delta);
    let _ = writeln!(out, "multiplicity={} multiplicity_approx={:.4}", full.multiplicity_avg, ratio_f64(full.multiplicity_avg));
    for s in side_configs.iter().filter(|s| !s.is_empty()) {
        let label = side_label(s);
        let rate = rate_side_info(spec, s);
        let free = (0..spec.k()).filter(|k| !s.contains(k)).count();
        if free == 0 {
            // a single candidate: the determinant is the closed form
            let delta = predicted_min_det(spec, s);
            let gamma = side_info_gain(full.delta, delta, rate, N_T);
            let _ = writeln!(out, "side={label} delta={delta} multiplicity=NA rate_side_info={rate:.6} gamma_db_per_bit={gamma:.6}");
            continue;
        }
        let sub = DetSpectrum::revealed(&book, s)?;
        let g = gain_report(&full, &sub, spec, s, N_T, n_r);
        let _ = writeln!(
            out,
            "side={label} delta={} multiplicity={} multiplicity_approx={:.4} rate_side_info={:.6} delta_ratio_db={:.6} determinant_term_db={:.6} multiplicity_term_db={:.6} snr_gain_estimate_db={:.6} gamma_db_per_bit={:.6}",
            sub.delta,
            sub.multiplicity_avg,
            ratio_f64(sub.multiplicity_avg),
            g.rate_side_info,
            g.delta_ratio_db,
            g.determinant_term_db,
            g.multiplicity_term_db,
            g.snr_gain_estimate_db,
            g.side_info_gain_db_per_bit
        );
    }
    let _ = writeln!(out, "max_reduced_norm_abs2={}", spec.phis().iter().map(|&p| reduced_norm_abs2(p)).max().unwrap_or(0));
    Ok(out)
}
