//! Exact determinant spectra, multiplicities, rates and side-information gains.
//!
//! For codewords `X, X'` with coordinate difference `d`,
//! `|det(X - X')|² = |N_rd(d)|² / 5`, so every determinant quantity is an
//! integer level `m = |N_rd(d)|²` over 5 and is handled exactly.

use std::collections::HashSet;
use std::fmt;
use std::num::Wrapping;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::{reduced_norm_abs2, AlgebraElement};
use crate::codec::{subcode, Codebook, SideInfoConfig};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger as Gi;
use crate::lattice::{embed, unembed};
use crate::partition::PartitionSpec;
use crate::zmat::{energy, IVec, DIM};

pub type Rational = Ratio<i64>;

/// Sets at most this large are scanned pair by pair.
const PAIRWISE_LIMIT: usize = 4096;

/// Minimum squared determinant and its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetSpectrum {
    pub size: usize,
    pub delta: Rational,
    /// `N_C`, the average number of neighbours at determinant `delta`.
    pub multiplicity_avg: Rational,
    /// `N_X` per codeword, in input order.
    pub per_codeword: Option<Vec<u64>>,
}

impl DetSpectrum {
    /// Computes `delta` and `N_C` for a set of codeword coordinates.
    pub fn compute(coords: &[[Gi; 4]]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DegenerateSet(coords.len()));
        }
        let points: Vec<IVec> = coords.iter().map(embed).collect();
        if let Some(packed) = Packed::new(&points) {
            let nearest = packed.nearest_levels();
            let m = nearest.iter().map(|&(l, _)| l).min().expect("at least two points");
            let table: Vec<u64> = nearest.iter().map(|&(l, c)| if l == m { c } else { 0 }).collect();
            let total: u64 = table.iter().sum();
            return Ok(Self {
                size: coords.len(),
                delta: Rational::new(m as i64, 5),
                multiplicity_avg: Rational::new(total as i64, coords.len() as i64),
                per_codeword: Some(table),
            });
        }
        let delta = min_det(coords)?;
        let (multiplicity_avg, table) = multiplicity(coords, delta);
        Ok(Self { size: coords.len(), delta, multiplicity_avg, per_codeword: Some(table) })
    }

    pub fn of_codebook(book: &Codebook, side: &SideInfoConfig) -> Result<Self> {
        let sub = subcode(book, side)?;
        let coords: Vec<[Gi; 4]> = sub.coords(book).collect();
        Self::compute(&coords)
    }

    /// Spectrum seen by a receiver that knows the messages in `s`, over the whole
    /// codebook: `delta` is the minimum over every revealed assignment, and
    /// `N_X` counts the neighbours of `X` inside its own subcode at that minimum.
    /// `per_codeword` is indexed like the codebook.
    pub fn revealed(book: &Codebook, s: &[usize]) -> Result<Self> {
        if s.is_empty() {
            let coords: Vec<[Gi; 4]> = book.codewords().iter().map(|c| c.coords).collect();
            return Self::compute(&coords);
        }
        let sizes = book.sizes();
        for &k in s {
            if k >= sizes.len() {
                return Err(Error::InvalidSideInfo { index: k, count: sizes.len() });
            }
        }
        let assignments: usize = s.iter().map(|&k| sizes[k]).product();
        let parts: Vec<(Vec<usize>, Self)> = (0..assignments)
            .map(|mut a| {
                let known = s.iter().map(|&k| {
                    let w = a % sizes[k];
                    a /= sizes[k];
                    (k, w)
                });
                let sub = subcode(book, &SideInfoConfig::new(known))?;
                let coords: Vec<[Gi; 4]> = sub.coords(book).collect();
                Ok((sub.members().to_vec(), Self::compute(&coords)?))
            })
            .collect::<Result<_>>()?;
        let delta = parts.iter().map(|(_, p)| p.delta).min().expect("at least one assignment");
        let mut table = vec![0u64; book.len()];
        for (members, part) in &parts {
            if part.delta == delta {
                let counts = part.per_codeword.as_ref().expect("compute fills the table");
                for (&m, &c) in members.iter().zip(counts) {
                    table[m] = c;
                }
            }
        }
        let total: u64 = table.iter().sum();
        Ok(Self {
            size: book.len(),
            delta,
            multiplicity_avg: Rational::new(total as i64, book.len() as i64),
            per_codeword: Some(table),
        })
    }
}

impl fmt::Display for DetSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size={} delta={} multiplicity={}", self.size, self.delta, self.multiplicity_avg)
    }
}

fn level(d: &IVec) -> i64 {
    reduced_norm_abs2(AlgebraElement::from_vec(unembed(d)))
}

fn diff(a: &IVec, b: &IVec) -> IVec {
    std::array::from_fn(|i| a[i] - b[i])
}

/// Upper bound on `|x - x'|²` over the set: `(2·max ‖x‖)²`, rounded up.
fn diameter2(points: &[IVec]) -> i64 {
    let max_e = points.iter().map(energy).max().unwrap_or(0);
    4 * max_e
}

/// Nonzero `d` with `‖d‖² ≤ radius2` and `|N_rd(d)|² ≤ max_level`, tagged with their level.
pub fn difference_ball(radius2: i64, max_level: i64) -> Vec<(i64, IVec)> {
    fn rec(k: usize, budget: i64, d: &mut IVec, max_level: i64, out: &mut Vec<(i64, IVec)>) {
        if k == DIM {
            if d.iter().any(|&v| v != 0) {
                let m = level(d);
                if m <= max_level {
                    out.push((m, *d));
                }
            }
            return;
        }
        let r = (budget as f64).sqrt().floor() as i64;
        for v in -r..=r {
            let rest = budget - v * v;
            if rest < 0 {
                continue;
            }
            d[k] = v;
            rec(k + 1, rest, d, max_level, out);
        }
        d[k] = 0;
    }
    let r0 = (radius2 as f64).sqrt().floor() as i64;
    (-r0..=r0)
        .into_par_iter()
        .flat_map_iter(|v0| {
            let mut out = Vec::new();
            let rest = radius2 - v0 * v0;
            if rest >= 0 {
                let mut d = [0i64; DIM];
                d[0] = v0;
                rec(1, rest, &mut d, max_level, &mut out);
            }
            out
        })
        .collect()
}

/// Exact `min |det(X - X')|²` over distinct pairs.
pub fn min_det(coords: &[[Gi; 4]]) -> Result<Rational> {
    if coords.len() < 2 {
        return Err(Error::DegenerateSet(coords.len()));
    }
    let points: Vec<IVec> = coords.iter().map(embed).collect();
    let m = if let Some(packed) = Packed::new(&points) {
        packed.nearest_levels().iter().map(|&(l, _)| l as i64).min().expect("at least two points")
    } else if points.len() <= PAIRWISE_LIMIT {
        (0..points.len())
            .into_par_iter()
            .map(|i| points[i + 1..].iter().map(|q| level(&diff(q, &points[i]))).min().unwrap_or(i64::MAX))
            .min()
            .expect("at least two points")
    } else {
        min_level_by_ball(&points)
    };
    Ok(Rational::new(m, 5))
}

/// Smallest difference level by scanning candidate differences in increasing level.
fn min_level_by_ball(points: &[IVec]) -> i64 {
    let set: HashSet<IVec> = points.iter().copied().collect();
    let r2 = diameter2(points);
    let mut cap = 1;
    loop {
        let mut ball = difference_ball(r2, cap);
        ball.sort_unstable();
        let mut start = 0;
        while start < ball.len() {
            let lvl = ball[start].0;
            let end = start + ball[start..].partition_point(|(l, _)| *l == lvl);
            let hit = ball[start..end]
                .par_iter()
                .any(|(_, d)| points.iter().any(|p| set.contains(&std::array::from_fn(|i| p[i] + d[i]))));
            if hit {
                return lvl;
            }
            start = end;
        }
        cap *= 4;
    }
}

/// Coordinates in structure-of-arrays `i32` form for the branch-free pair scan.
struct Packed {
    cols: [Vec<i32>; DIM],
}

/// Coordinates up to this magnitude keep every intermediate of the `i32`
/// level computation in range (`288·(2B)⁴ < 2³¹`).
const PACKED_COORD_LIMIT: i64 = 26;

impl Packed {
    fn new(points: &[IVec]) -> Option<Self> {
        if points.iter().flatten().any(|v| v.abs() > PACKED_COORD_LIMIT) {
            return None;
        }
        Some(Self { cols: std::array::from_fn(|k| points.iter().map(|p| p[k] as i32).collect()) })
    }

    fn len(&self) -> usize {
        self.cols[0].len()
    }

    /// Levels `|N_rd(x_j - x_i)|²` for `j` in `range`, written into `out`; the
    /// zero difference reports `i32::MAX`.
    #[inline]
    fn levels_from(&self, i: usize, range: std::ops::Range<usize>, out: &mut [i32]) {
        let p: [i32; DIM] = std::array::from_fn(|k| self.cols[k][i]);
        let c: [&[i32]; DIM] = std::array::from_fn(|k| &self.cols[k][range.clone()]);
        for (j, o) in out.iter_mut().enumerate() {
            // wrapping ops are exact under PACKED_COORD_LIMIT and keep the loop vectorizable
            let [ar, ai, br, bi, cr, ci, dr, di]: [Wrapping<i32>; DIM] = std::array::from_fn(|k| Wrapping(c[k][j]) - Wrapping(p[k]));
            let two = Wrapping(2);
            // N(u + vθ) = u² + uv - v²
            let n0r = ar * ar - ai * ai + ar * br - ai * bi - br * br + bi * bi;
            let n0i = two * ar * ai + ar * bi + ai * br - two * br * bi;
            let n1r = cr * cr - ci * ci + cr * dr - ci * di - dr * dr + di * di;
            let n1i = two * cr * ci + cr * di + ci * dr - two * dr * di;
            // N_rd = N(x0) - i·N(x1)
            let re = n0r + n1i;
            let im = n0i - n1r;
            let lvl = (re * re + im * im).0;
            *o = if lvl == 0 { i32::MAX } else { lvl };
        }
    }

    /// Per codeword: smallest level to any other codeword, and how many attain it.
    fn nearest_levels(&self) -> Vec<(i32, u64)> {
        const CHUNK: usize = 2048;
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map_init(
                || vec![0i32; CHUNK],
                |buf, i| {
                    let mut best = i32::MAX;
                    let mut count = 0u64;
                    let mut start = 0;
                    while start < n {
                        let end = (start + CHUNK).min(n);
                        let out = &mut buf[..end - start];
                        self.levels_from(i, start..end, out);
                        let m = out.iter().copied().min().unwrap_or(i32::MAX);
                        if m < best {
                            best = m;
                            count = 0;
                        }
                        if m == best {
                            count += out.iter().filter(|&&l| l == best).count() as u64;
                        }
                        start = end;
                    }
                    (best, count)
                },
            )
            .collect()
    }

    /// Per codeword: how many other codewords sit at exactly `target`.
    fn count_level(&self, target: i32) -> Vec<u64> {
        const CHUNK: usize = 2048;
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map_init(
                || vec![0i32; CHUNK],
                |buf, i| {
                    let mut count = 0u64;
                    let mut start = 0;
                    while start < n {
                        let end = (start + CHUNK).min(n);
                        let out = &mut buf[..end - start];
                        self.levels_from(i, start..end, out);
                        count += out.iter().filter(|&&l| l == target).count() as u64;
                        start = end;
                    }
                    count
                },
            )
            .collect()
    }
}

/// `N_C` and the table `N_X` for the given minimum determinant.
pub fn multiplicity(coords: &[[Gi; 4]], delta: Rational) -> (Rational, Vec<u64>) {
    let points: Vec<IVec> = coords.iter().map(embed).collect();
    if points.len() < 2 {
        return (Rational::from_integer(0), vec![0; points.len()]);
    }
    let target = delta * 5;
    assert!(target.is_integer(), "delta must be a multiple of 1/5");
    let target = target.to_integer();

    let table: Vec<u64> = if let (Some(packed), Ok(t)) = (Packed::new(&points), i32::try_from(target)) {
        packed.count_level(t)
    } else if points.len() <= PAIRWISE_LIMIT {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| points.iter().enumerate().filter(|&(j, q)| j != i && level(&diff(q, p)) == target).count() as u64)
            .collect()
    } else {
        let set: HashSet<IVec> = points.iter().copied().collect();
        let candidates: Vec<IVec> = difference_ball(diameter2(&points), target)
            .into_iter()
            .filter(|(l, _)| *l == target)
            .map(|(_, d)| d)
            .collect();
        points
            .par_iter()
            .map(|p| candidates.iter().filter(|d| set.contains(&std::array::from_fn(|i| p[i] + d[i]))).count() as u64)
            .collect()
    };
    let total: u64 = table.iter().sum();
    (Rational::new(total as i64, points.len() as i64), table)
}

/// `R_s = (1/8) Σ_{k∈s} log2 |N_rd(φ_k)|⁴` bits per real dimension.
pub fn rate_side_info(spec: &PartitionSpec, s: &[usize]) -> f64 {
    s.iter()
        .map(|&k| {
            let n = reduced_norm_abs2(spec.phis()[k]) as f64;
            (n * n).log2()
        })
        .sum::<f64>()
        / 8.0
}

/// `(1/5) ∏_{k∈s} |N_rd(φ_k)|²`, the minimum determinant after revealing `s`.
pub fn predicted_min_det(spec: &PartitionSpec, s: &[usize]) -> Rational {
    Rational::new(s.iter().map(|&k| reduced_norm_abs2(spec.phis()[k])).product(), 5)
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// dB quantities for revealing one side-information set.
#[derive(Clone, Debug, PartialEq)]
pub struct GainReport {
    /// `R_s`, bits per real dimension.
    pub rate_side_info: f64,
    /// `10 log10(δ_s/δ)`.
    pub delta_ratio_db: f64,
    /// `(1/n_t) · 10 log10(δ_s/δ)`.
    pub determinant_term_db: f64,
    /// `(1/(n_t n_r)) · 10 log10(N_C/N_Cs)`.
    pub multiplicity_term_db: f64,
    /// Sum of the two terms above.
    pub snr_gain_estimate_db: f64,
    /// `Γ = 10 log10(δ_s/δ) / (n_t R_s)`, dB per bit.
    pub side_info_gain_db_per_bit: f64,
}

/// Side-information gain `Γ`, in dB per bit.
pub fn side_info_gain(delta: Rational, delta_side: Rational, rate: f64, n_t: u32) -> f64 {
    db(ratio_f64(delta_side / delta)) / (n_t as f64 * rate)
}

pub fn gain_report(full: &DetSpectrum, sub: &DetSpectrum, spec: &PartitionSpec, s: &[usize], n_t: u32, n_r: u32) -> GainReport {
    let rate = rate_side_info(spec, s);
    let delta_ratio_db = db(ratio_f64(sub.delta / full.delta));
    let determinant_term_db = delta_ratio_db / n_t as f64;
    let multiplicity_term_db = db(ratio_f64(full.multiplicity_avg / sub.multiplicity_avg)) / (n_t * n_r) as f64;
    GainReport {
        rate_side_info: rate,
        delta_ratio_db,
        determinant_term_db,
        multiplicity_term_db,
        snr_gain_estimate_db: multiplicity_term_db + determinant_term_db,
        side_info_gain_db_per_bit: side_info_gain(full.delta, sub.delta, rate, n_t),
    }
}
