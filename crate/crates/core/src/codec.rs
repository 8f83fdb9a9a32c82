//! Message tuples to golden codewords, side-information subcodes, decoding.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_complex::Complex64;

use crate::algebra::{reduced_norm_abs2, AlgebraElement, QuadElement};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger as Gi;
use crate::lattice::{embed, CosetLeader};
use crate::partition::PartitionSpec;
use crate::search::{Mat8, TriangularForm, Vec8};
use crate::zmat::{IVec, DIM};

pub type Mat2 = [[Complex64; 2]; 2];

/// Real value of `θ = (1+√5)/2`.
pub fn theta() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Real value of `θ̄ = 1 - θ = σ(θ)`.
pub fn theta_bar() -> f64 {
    (1.0 - 5f64.sqrt()) / 2.0
}

/// Golden codeword matrix for coordinates `(a, b, c, d)`:
/// `(1/√5)·[[α(a+bθ), α(c+dθ)], [iσ(α)(c+dθ̄), σ(α)(a+bθ̄)]]`, `α = 1 + iθ̄`.
pub fn golden_matrix(coords: &[Gi; 4]) -> Mat2 {
    let (t, tb) = (theta(), theta_bar());
    let alpha = Complex64::new(1.0, tb);
    let alpha_s = Complex64::new(1.0, t);
    let x0 = QuadElement::new(coords[0], coords[1]);
    let x1 = QuadElement::new(coords[2], coords[3]);
    let s = 1.0 / 5f64.sqrt();
    [
        [alpha * x0.eval(t) * s, alpha * x1.eval(t) * s],
        [Complex64::i() * alpha_s * x1.eval(tb) * s, alpha_s * x0.eval(tb) * s],
    ]
}

pub fn det2(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn frobenius2(m: &Mat2) -> f64 {
    m.iter().flatten().map(Complex64::norm_sqr).sum()
}

fn mat_mul(h: &Mat2, x: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| h[i][0] * x[0][j] + h[i][1] * x[1][j]))
}

/// One value per message, `w_k ∈ 0..W_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageTuple(pub Vec<usize>);

/// A golden codeword: exact coordinates plus its (unscaled) matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Codeword {
    pub x: Mat2,
    pub coords: [Gi; 4],
}

impl Codeword {
    pub fn from_coords(coords: [Gi; 4]) -> Self {
        Self { x: golden_matrix(&coords), coords }
    }

    /// Exact `|det X|² · 5 = |N_rd|²`.
    pub fn det_abs2_times5(&self) -> i64 {
        reduced_norm_abs2(AlgebraElement::from_vec(self.coords))
    }

    pub fn real(&self) -> IVec {
        embed(&self.coords)
    }
}

/// Known messages at a receiver: message index (0-based) to value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SideInfoConfig {
    pub known: BTreeMap<usize, usize>,
}

impl SideInfoConfig {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = (usize, usize)>>(known: I) -> Self {
        Self { known: known.into_iter().collect() }
    }

    pub fn indices(&self) -> Vec<usize> {
        self.known.keys().copied().collect()
    }
}

/// `(w_1, …, w_K) ↦ Σ w_k · ∏_{j<k} W_j`, message 1 fastest.
fn tuple_index(sizes: &[usize], w: &[usize]) -> usize {
    w.iter().zip(sizes).rev().fold(0, |acc, (&wk, &size)| acc * size + wk)
}

fn tuple_from_index(sizes: &[usize], mut index: usize) -> Vec<usize> {
    sizes
        .iter()
        .map(|&size| {
            let w = index % size;
            index /= size;
            w
        })
        .collect()
}

pub fn validate(spec: &PartitionSpec, w: &MessageTuple) -> Result<()> {
    let sizes = spec.sizes();
    if w.0.len() != sizes.len() {
        return Err(Error::ArityMismatch { expected: sizes.len(), got: w.0.len() });
    }
    for (index, (&value, &size)) in w.0.iter().zip(&sizes).enumerate() {
        if value >= size {
            return Err(Error::IndexOutOfRange { index, value, size });
        }
    }
    Ok(())
}

/// `x = (Σ_k leader_k[w_k]) mod Λ_s`, mapped through the golden code.
pub fn encode(spec: &PartitionSpec, w: &MessageTuple) -> Result<Codeword> {
    validate(spec, w)?;
    let parts: Vec<CosetLeader> = w.0.iter().enumerate().map(|(k, &wk)| spec.leaders(k)[wk]).collect();
    Ok(Codeword::from_coords(spec.superpose(&parts).coords))
}

/// The full codebook of a partition, indexed by message tuple.
#[derive(Clone, Debug)]
pub struct Codebook {
    spec: PartitionSpec,
    sizes: Vec<usize>,
    codewords: Vec<Codeword>,
    by_coords: HashMap<IVec, usize>,
    tx_scale: f64,
    max_energy: i64,
}

impl Codebook {
    pub fn new(spec: PartitionSpec) -> Self {
        let sizes = spec.sizes();
        let total: usize = sizes.iter().product();
        let codewords: Vec<Codeword> = (0..total)
            .map(|i| encode(&spec, &MessageTuple(tuple_from_index(&sizes, i))).expect("in-range tuple"))
            .collect();
        let by_coords: HashMap<IVec, usize> = codewords.iter().enumerate().map(|(i, c)| (c.real(), i)).collect();
        let mean_entry_energy = codewords.iter().map(|c| frobenius2(&c.x)).sum::<f64>() / (4.0 * total as f64);
        let tx_scale = if mean_entry_energy > 0.0 { mean_entry_energy.sqrt().recip() } else { 1.0 };
        let max_energy = codewords.iter().map(|c| crate::zmat::energy(&c.real())).max().unwrap_or(0);
        Self { spec, sizes, codewords, by_coords, tx_scale, max_energy }
    }

    pub fn spec(&self) -> &PartitionSpec {
        &self.spec
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    /// True when no two message tuples share a codeword.
    pub fn is_injective(&self) -> bool {
        self.by_coords.len() == self.codewords.len()
    }

    pub fn index_of(&self, w: &MessageTuple) -> usize {
        tuple_index(&self.sizes, &w.0)
    }

    pub fn tuple(&self, index: usize) -> MessageTuple {
        MessageTuple(tuple_from_index(&self.sizes, index))
    }

    pub fn codeword(&self, w: &MessageTuple) -> &Codeword {
        &self.codewords[self.index_of(w)]
    }

    /// Tuple index of the codeword with the given coordinates.
    pub fn lookup(&self, coords: &IVec) -> Option<usize> {
        self.by_coords.get(coords).copied()
    }

    /// Largest `‖x‖²` over the codewords' integer coordinates.
    pub fn max_energy(&self) -> i64 {
        self.max_energy
    }

    /// Gain that brings the average per-entry energy of the codebook to one.
    pub fn tx_scale(&self) -> f64 {
        self.tx_scale
    }

    /// Power-normalised transmit matrix.
    pub fn transmit(&self, index: usize) -> Mat2 {
        self.codewords[index].x.map(|row| row.map(|v| v * self.tx_scale))
    }

    /// Writes message indices, the 8 integer coordinates and the 8 real numbers of `X`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.sizes.len()).map(|k| format!("w{k}")).collect();
        header.extend(["a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "d_re", "d_im"].map(String::from));
        header.extend(["x11", "x12", "x21", "x22"].iter().flat_map(|e| [format!("{e}_re"), format!("{e}_im")]));
        w.write_record(&header)?;
        for (i, c) in self.codewords.iter().enumerate() {
            let mut rec: Vec<String> = tuple_from_index(&self.sizes, i).iter().map(usize::to_string).collect();
            rec.extend(c.real().iter().map(i64::to_string));
            rec.extend(c.x.iter().flatten().flat_map(|z| [format!("{:.17e}", z.re), format!("{:.17e}", z.im)]));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Codewords consistent with a receiver's side information.
#[derive(Clone, Debug)]
pub struct Subcode {
    known: Vec<Option<usize>>,
    members: Vec<usize>,
}

impl Subcode {
    /// Tuple indices of the members, in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, book: &Codebook, index: usize) -> bool {
        let mut rest = index;
        book.sizes().iter().zip(&self.known).all(|(&size, known)| {
            let wk = rest % size;
            rest /= size;
            known.is_none_or(|v| v == wk)
        })
    }

    /// Exact coordinates of every member.
    pub fn coords<'a>(&'a self, book: &'a Codebook) -> impl Iterator<Item = [Gi; 4]> + 'a {
        self.members.iter().map(|&i| book.codewords[i].coords)
    }

    /// Replaces the known components of a tuple with the known values.
    fn project(&self, book: &Codebook, index: usize) -> usize {
        let mut w = tuple_from_index(book.sizes(), index);
        for (wk, known) in w.iter_mut().zip(&self.known) {
            if let Some(v) = known {
                *wk = *v;
            }
        }
        tuple_index(book.sizes(), &w)
    }
}

/// `{ (Σ_{k∈s} x_k(w_k) + Σ_{k∉s} Λ_k/Λ_s) mod Λ_s }`.
pub fn subcode(book: &Codebook, side: &SideInfoConfig) -> Result<Subcode> {
    let sizes = book.sizes();
    let mut known = vec![None; sizes.len()];
    for (&index, &value) in &side.known {
        let size = *sizes.get(index).ok_or(Error::InvalidSideInfo { index, count: sizes.len() })?;
        if value >= size {
            return Err(Error::IndexOutOfRange { index, value, size });
        }
        known[index] = Some(value);
    }
    // enumerate free components in mixed radix, fixed ones pinned
    let free: Vec<usize> = (0..sizes.len()).filter(|&k| known[k].is_none()).collect();
    let count: usize = free.iter().map(|&k| sizes[k]).product();
    let mut w: Vec<usize> = known.iter().map(|v| v.unwrap_or(0)).collect();
    let mut members = Vec::with_capacity(count);
    for _ in 0..count {
        members.push(tuple_index(sizes, &w));
        for &k in &free {
            w[k] += 1;
            if w[k] < sizes[k] {
                break;
            }
            w[k] = 0;
        }
    }
    members.sort_unstable();
    Ok(Subcode { known, members })
}

/// `‖Y - H·X‖²_F` for the power-normalised codeword `index`.
fn metric(book: &Codebook, y: &Mat2, h: &Mat2, index: usize) -> f64 {
    let hx = mat_mul(h, &book.transmit(index));
    let mut d = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d += (y[i][j] - hx[i][j]).norm_sqr();
        }
    }
    d
}

/// Smaller metric wins; metrics equal to within rounding fall back to coordinate order.
fn closer(book: &Codebook, m1: f64, i1: usize, m2: f64, i2: usize) -> bool {
    let tol = 1e-12 * m1.max(m2) + 1e-300;
    if (m1 - m2).abs() <= tol {
        book.codewords[i1].real() < book.codewords[i2].real()
    } else {
        m1 < m2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoder {
    Ml,
    Sphere,
}

impl std::str::FromStr for Decoder {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ml" => Ok(Self::Ml),
            "sphere" => Ok(Self::Sphere),
            other => Err(format!("unknown decoder `{other}` (expected ml or sphere)")),
        }
    }
}

impl std::fmt::Display for Decoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Ml => "ml",
            Self::Sphere => "sphere",
        })
    }
}

pub fn decode(decoder: Decoder, y: &Mat2, h: &Mat2, book: &Codebook, candidates: &Subcode) -> MessageTuple {
    match decoder {
        Decoder::Ml => ml_decode(y, h, book, candidates),
        Decoder::Sphere => sphere_decode(y, h, book, candidates),
    }
}

/// Exhaustive maximum-likelihood decoding over the candidate set.
pub fn ml_decode(y: &Mat2, h: &Mat2, book: &Codebook, candidates: &Subcode) -> MessageTuple {
    assert!(!candidates.is_empty(), "empty candidate set");
    let mut best = candidates.members[0];
    let mut best_m = metric(book, y, h, best);
    for &i in &candidates.members[1..] {
        let m = metric(book, y, h, i);
        if closer(book, m, i, best_m, best) {
            best = i;
            best_m = m;
        }
    }
    book.tuple(best)
}

/// Real 8×8 map from coordinates to `vec(H·X)` (power-normalised).
fn effective_generator(book: &Codebook, h: &Mat2) -> Mat8 {
    let mut f = Mat8::zeros();
    for j in 0..DIM {
        let mut unit = [0i64; DIM];
        unit[j] = 1;
        let x = golden_matrix(&crate::lattice::unembed(&unit)).map(|row| row.map(|v| v * book.tx_scale));
        let hx = mat_mul(h, &x);
        for (r, v) in flatten_real(&hx).iter().enumerate() {
            f[(r, j)] = *v;
        }
    }
    f
}

fn flatten_real(m: &Mat2) -> [f64; DIM] {
    [m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im]
}

/// Candidate sets this small are cheaper to scan than to search.
const EXHAUSTIVE_LIMIT: usize = 1024;

/// Sphere decoding over the effective real lattice, restricted to the candidate set.
/// Returns the same tuple as [`ml_decode`].
pub fn sphere_decode(y: &Mat2, h: &Mat2, book: &Codebook, candidates: &Subcode) -> MessageTuple {
    assert!(!candidates.is_empty(), "empty candidate set");
    if candidates.len() == 1 {
        return book.tuple(candidates.members[0]);
    }
    if candidates.len() <= EXHAUSTIVE_LIMIT {
        return ml_decode(y, h, book, candidates);
    }
    let tri = TriangularForm::new(effective_generator(book, h));
    let ry = tri.rotate(&Vec8::from_column_slice(&flatten_real(y)));
    let radius = |m: f64| m * (1.0 + 1e-9) + 1e-12;

    // a member close to the Babai point seeds a finite radius
    let seed = book.lookup(&book.spec().reduce(&tri.babai(&ry))).expect("reduced point lies in the codebook");
    let mut best = candidates.project(book, seed);
    let mut best_m = metric(book, y, h, best);

    // codewords never exceed the codebook's largest coordinate energy
    tri.search_bounded(&ry, radius(best_m), book.max_energy, |z, _| {
        let index = book.lookup(z)?;
        if !candidates.contains(book, index) {
            return None;
        }
        let m = metric(book, y, h, index);
        if closer(book, m, index, best_m, best) {
            best = index;
            best_m = m;
            Some(radius(best_m))
        } else {
            None
        }
    });
    book.tuple(best)
}
