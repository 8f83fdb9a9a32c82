//! `Z[i]`-lattices in `Z[i]⁴`, their real embeddings in `Z⁸`, coset
//! enumeration and minimum-energy reduction modulo a shaping lattice.
//!
//! A vector `(a, b, c, d) ∈ Z[i]⁴` embeds as
//! `(re a, im a, re b, im b, re c, im c, re d, im d)`; that 8-tuple is also the
//! order used to break energy ties.

use std::collections::HashMap;

use crate::algebra::RepMatrix;
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger as Gi;
use crate::search::{Mat8, TriangularForm, Vec8};
use crate::zmat::{self, Basis, Hermite, IVec, DIM};

pub fn embed(v: &[Gi; 4]) -> IVec {
    [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im, v[3].re, v[3].im]
}

pub fn unembed(x: &IVec) -> [Gi; 4] {
    std::array::from_fn(|k| Gi::new(x[2 * k], x[2 * k + 1]))
}

/// Minimum-energy representative of a coset, as Gaussian coordinates `(a, b, c, d)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetLeader {
    pub coords: [Gi; 4],
}

impl CosetLeader {
    pub const ZERO: Self = Self { coords: [Gi::ZERO; 4] };

    pub fn from_real(x: &IVec) -> Self {
        Self { coords: unembed(x) }
    }

    pub fn real(&self) -> IVec {
        embed(&self.coords)
    }

    pub fn energy(&self) -> i64 {
        zmat::energy(&self.real())
    }
}

/// Energy first, then lexicographic order of the real 8-tuple.
pub fn better(a: &IVec, b: &IVec) -> bool {
    (zmat::energy(a), a) < (zmat::energy(b), b)
}

/// A full-rank `Z[i]`-submodule of `Z[i]⁴` given by generating columns.
#[derive(Clone, Debug)]
pub struct ZiLattice {
    gen: RepMatrix,
    real_gen: Basis,
    hermite: Hermite,
    tri: TriangularForm,
}

impl ZiLattice {
    /// Lattice generated by the columns of `gen`; `None` if they are dependent.
    pub fn new(gen: RepMatrix) -> Option<Self> {
        let mut real_gen = [[0i64; DIM]; DIM];
        for j in 0..4 {
            let col = gen.column(j);
            real_gen[2 * j] = embed(&col);
            real_gen[2 * j + 1] = embed(&col.map(Gi::mul_i));
        }
        let hermite = Hermite::of_generators(&real_gen)?;
        let tri = TriangularForm::new(Mat8::from_fn(|i, j| real_gen[j][i] as f64));
        Some(Self { gen, real_gen, hermite, tri })
    }

    /// The base lattice `Z[i]⁴`.
    pub fn full() -> Self {
        Self::new(RepMatrix::identity()).expect("identity is nonsingular")
    }

    pub fn generator(&self) -> &RepMatrix {
        &self.gen
    }

    pub fn real_generator(&self) -> &Basis {
        &self.real_gen
    }

    pub fn hermite(&self) -> &Hermite {
        &self.hermite
    }

    /// Index in `Z[i]⁴`, i.e. `|det(gen)|²`.
    pub fn index(&self) -> i128 {
        self.hermite.index()
    }

    pub fn contains(&self, x: &IVec) -> bool {
        self.hermite.contains(x)
    }

    /// Canonical residue of `x` modulo this lattice; equal keys ⇔ same coset.
    pub fn residue_key(&self, x: &IVec) -> IVec {
        self.hermite.reduce(x)
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &ZiLattice) -> bool {
        other.real_gen.iter().all(|c| self.contains(c))
    }

    /// Index of `self + other` in `Z⁸`; 1 means the two are coprime.
    pub fn sum_index(&self, other: &ZiLattice) -> i128 {
        let mut gens: Vec<IVec> = self.real_gen.to_vec();
        gens.extend_from_slice(&other.real_gen);
        Hermite::of_generators(&gens).expect("sum of full-rank lattices is full rank").index()
    }

    /// Closest lattice vector to `x` in exact integer arithmetic; returns the
    /// residual `x - s`, minimal in energy with lexicographic tie-break.
    fn reduce_residual(&self, x: &IVec) -> IVec {
        let target = Vec8::from_fn(|i, _| x[i] as f64);
        let y = self.tri.rotate(&target);
        let residual = |c: &[i64; DIM]| -> IVec {
            let mut r = *x;
            for (col, &cj) in self.real_gen.iter().zip(c) {
                if cj != 0 {
                    for (ri, &v) in r.iter_mut().zip(col) {
                        *ri -= v * cj;
                    }
                }
            }
            r
        };
        let mut best = residual(&self.tri.babai(&y));
        let slack = |e: i64| e as f64 * (1.0 + 1e-9) + 1e-6;
        self.tri.search(&y, slack(zmat::energy(&best)), |c, _| {
            let r = residual(c);
            if better(&r, &best) {
                best = r;
                Some(slack(zmat::energy(&best)))
            } else {
                None
            }
        });
        best
    }
}

/// Minimum-energy representative of `x + shaping`.
pub fn mod_shaping(x: &[Gi; 4], shaping: &ZiLattice) -> CosetLeader {
    CosetLeader::from_real(&shaping.reduce_residual(&embed(x)))
}

/// Coset leaders of `sub / shaping` in Smith-form mixed-radix order (first digit fastest).
pub fn enumerate_cosets(sub: &ZiLattice, shaping: &ZiLattice) -> Result<Vec<CosetLeader>> {
    let t = zmat::solve_integral(sub.real_generator(), shaping.real_generator()).ok_or(Error::NotSublattice)?;
    let smith = zmat::smith(&t);
    let basis = zmat::mul_mat(&zmat::widen(sub.real_generator()), &smith.u_inv);
    let radices = smith.diag;
    let count: i128 = radices.iter().product();
    let count = usize::try_from(count).expect("coset count fits in usize");

    let mut out = Vec::with_capacity(count);
    let mut digits = [0i128; DIM];
    for _ in 0..count {
        let rep = zmat::mul_vec(&basis, &digits).map(|v| i64::try_from(v).expect("coset representative overflow"));
        out.push(CosetLeader::from_real(&shaping.reduce_residual(&rep)));
        for (d, &r) in digits.iter_mut().zip(&radices) {
            *d += 1;
            if *d < r {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Leader lookup for every coset of `Z[i]⁴ / shaping`, keyed by canonical residue.
#[derive(Clone, Debug)]
pub struct LeaderTable {
    by_key: HashMap<IVec, IVec>,
}

impl LeaderTable {
    pub fn build(shaping: &ZiLattice) -> Self {
        let leaders = enumerate_cosets(&ZiLattice::full(), shaping).expect("every lattice lies in Z[i]⁴");
        let by_key = leaders
            .iter()
            .map(|l| {
                let r = l.real();
                (shaping.residue_key(&r), r)
            })
            .collect();
        Self { by_key }
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn leader(&self, shaping: &ZiLattice, x: &IVec) -> IVec {
        self.by_key[&shaping.residue_key(x)]
    }

    pub fn leaders(&self) -> impl Iterator<Item = &IVec> {
        self.by_key.values()
    }
}
