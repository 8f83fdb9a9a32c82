//! Depth-first (Schnorr–Euchner) enumeration of integer points `z ∈ Z⁸` with
//! `‖y - R·z‖² ≤ r²` for an upper-triangular `R`.
//!
//! The visitor sees every point inside the current radius and may shrink the
//! radius by returning a new squared bound.

use nalgebra::{SMatrix, SVector};

use crate::zmat::DIM;

pub type Mat8 = SMatrix<f64, DIM, DIM>;
pub type Vec8 = SVector<f64, DIM>;

/// QR factorisation of a real 8×8 generator, ready for repeated searches.
#[derive(Clone, Debug)]
pub struct TriangularForm {
    q_t: Mat8,
    r: Mat8,
}

impl TriangularForm {
    pub fn new(generator: Mat8) -> Self {
        let qr = generator.qr();
        Self { q_t: qr.q().transpose(), r: qr.r() }
    }

    /// Rotates a target into the triangular frame.
    pub fn rotate(&self, target: &Vec8) -> Vec8 {
        self.q_t * target
    }

    /// Successive-interference-cancellation (Babai nearest plane) point.
    pub fn babai(&self, y: &Vec8) -> [i64; DIM] {
        let mut z = [0i64; DIM];
        for k in (0..DIM).rev() {
            let mut acc = y[k];
            for j in k + 1..DIM {
                acc -= self.r[(k, j)] * z[j] as f64;
            }
            z[k] = (acc / self.r[(k, k)]).round() as i64;
        }
        z
    }

    /// Enumerates all `z` with `‖y - R z‖² ≤ radius2` (rotated target `y`).
    pub fn search<F>(&self, y: &Vec8, radius2: f64, visit: F)
    where
        F: FnMut(&[i64; DIM], f64) -> Option<f64>,
    {
        self.search_bounded(y, radius2, i64::MAX, visit);
    }

    /// As [`search`](Self::search), restricted to `‖z‖² ≤ energy`.
    pub fn search_bounded<F>(&self, y: &Vec8, radius2: f64, energy: i64, mut visit: F)
    where
        F: FnMut(&[i64; DIM], f64) -> Option<f64>,
    {
        let mut z = [0i64; DIM];
        let mut radius2 = radius2;
        self.level(DIM - 1, y, 0.0, energy, &mut z, &mut radius2, &mut visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn level<F>(&self, k: usize, y: &Vec8, partial: f64, energy: i64, z: &mut [i64; DIM], radius2: &mut f64, visit: &mut F)
    where
        F: FnMut(&[i64; DIM], f64) -> Option<f64>,
    {
        // |z_k| ≤ bound keeps the remaining coordinate energy nonnegative
        let bound = if energy == i64::MAX { i64::MAX } else { (energy as f64).sqrt().floor() as i64 };
        let rkk = self.r[(k, k)];
        let mut acc = y[k];
        for j in k + 1..DIM {
            acc -= self.r[(k, j)] * z[j] as f64;
        }
        let center = acc / rkk;
        let start = center.round();
        let up_first = center >= start;
        // zig-zag around the center: start, start±1, start∓1, start±2, ...
        for step in 0i64.. {
            let offset = if step == 0 {
                0
            } else {
                let m = (step + 1) / 2;
                if (step % 2 == 1) == up_first { m } else { -m }
            };
            let zk = start + offset as f64;
            let dist = partial + (rkk * (zk - center)).powi(2);
            // distances along the zig-zag are non-decreasing
            if dist > *radius2 {
                return;
            }
            let m = offset.abs() as f64;
            if start - m < -(bound as f64) && start + m > bound as f64 {
                return;
            }
            if zk.abs() > bound as f64 {
                continue;
            }
            z[k] = zk as i64;
            if k == 0 {
                if let Some(r) = visit(z, dist) {
                    *radius2 = r;
                }
            } else {
                let rest = if energy == i64::MAX { energy } else { energy - z[k] * z[k] };
                self.level(k - 1, y, dist, rest, z, radius2, visit);
            }
        }
    }
}
