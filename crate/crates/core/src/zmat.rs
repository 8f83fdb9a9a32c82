//! Integer linear algebra in dimension 8: Hermite and Smith normal forms,
//! exact determinants and exact solves. Lattices are given by generating
//! columns; all work is carried out in `i128`.

use num_rational::Ratio;

pub const DIM: usize = 8;

/// A column vector of `Z⁸`.
pub type IVec = [i64; DIM];

/// Generating columns of a full-rank lattice in `Z⁸`; `cols[j][i]` is row `i` of column `j`.
pub type Basis = [IVec; DIM];

/// Upper-triangular column Hermite form: `h[j][i] == 0` for `i > j`, positive
/// diagonal, and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite {
    cols: [[i128; DIM]; DIM],
}

impl Hermite {
    /// Hermite form of the lattice generated by `gens`; `None` if they do not span rank 8.
    pub fn of_generators(gens: &[IVec]) -> Option<Self> {
        let mut pool: Vec<[i128; DIM]> = gens.iter().map(|g| g.map(i128::from)).collect();
        let mut cols = [[0i128; DIM]; DIM];
        for row in (0..DIM).rev() {
            // gcd-reduce row `row` across the pool until one column remains nonzero there
            loop {
                let mut nz: Vec<usize> = (0..pool.len()).filter(|&k| pool[k][row] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by_key(|&k| pool[k][row].abs());
                let p = nz[0];
                let pv = pool[p][row];
                for &k in &nz[1..] {
                    let q = pool[k][row].div_euclid(pv);
                    let pc = pool[p];
                    for (x, y) in pool[k].iter_mut().zip(pc.iter()) {
                        *x -= q * y;
                    }
                }
            }
            let k = pool.iter().position(|c| c[row] != 0)?;
            let mut pivot = pool.swap_remove(k);
            if pivot[row] < 0 {
                pivot.iter_mut().for_each(|x| *x = -*x);
            }
            cols[row] = pivot;
        }
        // reduce entries above the diagonal
        for j in 0..DIM {
            for i in (0..j).rev() {
                let q = cols[j][i].div_euclid(cols[i][i]);
                if q != 0 {
                    let ci = cols[i];
                    for (x, y) in cols[j].iter_mut().zip(ci.iter()) {
                        *x -= q * y;
                    }
                }
            }
        }
        Some(Self { cols })
    }

    pub fn diagonal(&self) -> [i128; DIM] {
        std::array::from_fn(|i| self.cols[i][i])
    }

    /// Index of the lattice in `Z⁸`.
    pub fn index(&self) -> i128 {
        self.diagonal().iter().product()
    }

    /// Canonical representative of `x` modulo the lattice: `0 ≤ r[i] < h[i][i]`.
    pub fn reduce(&self, x: &IVec) -> IVec {
        let mut r = x.map(i128::from);
        for i in (0..DIM).rev() {
            let q = r[i].div_euclid(self.cols[i][i]);
            if q != 0 {
                for (x, y) in r.iter_mut().zip(self.cols[i].iter()) {
                    *x -= q * y;
                }
            }
        }
        r.map(|v| i64::try_from(v).expect("residue out of i64 range"))
    }

    pub fn contains(&self, x: &IVec) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    pub fn columns(&self) -> Basis {
        self.cols.map(|c| c.map(|v| i64::try_from(v).expect("hermite entry out of i64 range")))
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(basis: &Basis) -> i128 {
    let mut m: [[i128; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| i128::from(basis[j][i])));
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..DIM {
        if m[k][k] == 0 {
            match (k + 1..DIM).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..DIM {
            for j in k + 1..DIM {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[DIM - 1][DIM - 1]
}

/// Integer matrix `T` with `basis · T = targets` (column by column), or `None`
/// if some target column is not an integral combination of `basis`.
pub fn solve_integral(basis: &Basis, targets: &Basis) -> Option<[[i128; DIM]; DIM]> {
    type Q = Ratio<i128>;
    // augmented row-major system [B | targets]
    let mut m: Vec<Vec<Q>> = (0..DIM)
        .map(|i| {
            (0..2 * DIM)
                .map(|j| {
                    let v = if j < DIM { basis[j][i] } else { targets[j - DIM][i] };
                    Q::from_integer(i128::from(v))
                })
                .collect()
        })
        .collect();
    for k in 0..DIM {
        let p = (k..DIM).find(|&r| m[r][k] != Q::from_integer(0))?;
        m.swap(k, p);
        let pivot = m[k][k];
        for v in m[k].iter_mut() {
            *v /= pivot;
        }
        for r in 0..DIM {
            if r != k && m[r][k] != Q::from_integer(0) {
                let f = m[r][k];
                let row_k = m[k].clone();
                for (x, y) in m[r].iter_mut().zip(row_k) {
                    *x -= f * y;
                }
            }
        }
    }
    let mut t = [[0i128; DIM]; DIM];
    for (j, col) in t.iter_mut().enumerate() {
        for (i, v) in col.iter_mut().enumerate() {
            let q = m[i][DIM + j];
            if !q.is_integer() {
                return None;
            }
            *v = q.to_integer();
        }
    }
    Some(t)
}

/// Smith form `D = U·T·V` of a nonsingular integer matrix, keeping `U⁻¹`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Invariant factors `d_0 | d_1 | … | d_7`, all positive.
    pub diag: [i128; DIM],
    /// `U⁻¹` as columns.
    pub u_inv: [[i128; DIM]; DIM],
}

/// Smith normal form of `t` (given as columns). Row operations on `t` are
/// mirrored as inverse column operations on an accumulator that ends as `U⁻¹`.
pub fn smith(t: &[[i128; DIM]; DIM]) -> Smith {
    // row-major working copy
    let mut a: [[i128; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| t[j][i]));
    // u_inv row-major, starts as identity
    let mut u: [[i128; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| i128::from(i == j)));

    // row_i += f·row_k   ⇒   col_k of U⁻¹ -= f·col_i
    fn row_add(a: &mut [[i128; DIM]; DIM], u: &mut [[i128; DIM]; DIM], i: usize, k: usize, f: i128) {
        for j in 0..DIM {
            a[i][j] += f * a[k][j];
        }
        for row in u.iter_mut() {
            row[k] -= f * row[i];
        }
    }
    fn row_swap(a: &mut [[i128; DIM]; DIM], u: &mut [[i128; DIM]; DIM], i: usize, k: usize) {
        a.swap(i, k);
        for row in u.iter_mut() {
            row.swap(i, k);
        }
    }
    fn row_neg(a: &mut [[i128; DIM]; DIM], u: &mut [[i128; DIM]; DIM], i: usize) {
        a[i].iter_mut().for_each(|x| *x = -*x);
        for row in u.iter_mut() {
            row[i] = -row[i];
        }
    }
    fn col_add(a: &mut [[i128; DIM]; DIM], j: usize, k: usize, f: i128) {
        for row in a.iter_mut() {
            row[j] += f * row[k];
        }
    }
    fn col_swap(a: &mut [[i128; DIM]; DIM], j: usize, k: usize) {
        for row in a.iter_mut() {
            row.swap(j, k);
        }
    }

    for t in 0..DIM {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..DIM {
                for j in t..DIM {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                panic!("smith form of a singular matrix");
            };
            row_swap(&mut a, &mut u, t, pi);
            col_swap(&mut a, t, pj);

            let mut clean = true;
            for i in t + 1..DIM {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    row_add(&mut a, &mut u, i, t, -q);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..DIM {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    col_add(&mut a, j, t, -q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: pivot must divide the rest of the block
            let offender = (t + 1..DIM).find_map(|i| (t + 1..DIM).find(|&j| a[i][j] % a[t][t] != 0).map(|_| i));
            match offender {
                Some(i) => row_add(&mut a, &mut u, t, i, 1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            row_neg(&mut a, &mut u, t);
        }
    }
    Smith {
        diag: std::array::from_fn(|i| a[i][i]),
        u_inv: std::array::from_fn(|j| std::array::from_fn(|i| u[i][j])),
    }
}

/// `B · x` for an integer basis and integer coefficient vector.
pub fn mul_vec(basis: &[[i128; DIM]; DIM], x: &[i128; DIM]) -> [i128; DIM] {
    let mut out = [0i128; DIM];
    for (col, &c) in basis.iter().zip(x) {
        for (o, &v) in out.iter_mut().zip(col) {
            *o += v * c;
        }
    }
    out
}

/// Column-wise product `A · B`.
pub fn mul_mat(a: &[[i128; DIM]; DIM], b: &[[i128; DIM]; DIM]) -> [[i128; DIM]; DIM] {
    std::array::from_fn(|j| mul_vec(a, &b[j]))
}

pub fn widen(basis: &Basis) -> [[i128; DIM]; DIM] {
    basis.map(|c| c.map(i128::from))
}

/// Squared Euclidean length.
pub fn energy(x: &IVec) -> i64 {
    x.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_basis(d: [i64; DIM]) -> Basis {
        std::array::from_fn(|j| std::array::from_fn(|i| if i == j { d[i] } else { 0 }))
    }

    fn basis_strategy() -> impl Strategy<Value = Basis> {
        proptest::array::uniform8(proptest::array::uniform8(-4i64..=4))
    }

    #[test]
    fn identity_has_index_one() {
        let h = Hermite::of_generators(&diag_basis([1; DIM])).unwrap();
        assert_eq!(h.index(), 1);
        assert_eq!(h.reduce(&[3, -2, 5, 7, 0, 1, -9, 4]), [0; DIM]);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let mut b = diag_basis([1; DIM]);
        b[3] = b[2];
        assert!(Hermite::of_generators(&b).is_none());
        assert_eq!(det(&b), 0);
    }

    #[test]
    fn stacked_generators() {
        let two = diag_basis([2; DIM]);
        let three = diag_basis([3; DIM]);
        let mut both: Vec<IVec> = two.to_vec();
        both.extend_from_slice(&three);
        assert_eq!(Hermite::of_generators(&both).unwrap().index(), 1);
        let mut same: Vec<IVec> = two.to_vec();
        same.extend_from_slice(&two);
        assert_eq!(Hermite::of_generators(&same).unwrap().index(), 256);
    }

    #[test]
    fn smith_of_diagonal_sorts_divisors() {
        let t = widen(&diag_basis([6, 1, 4, 1, 1, 1, 1, 1]));
        let s = smith(&t);
        assert_eq!(s.diag, [1, 1, 1, 1, 1, 1, 2, 12]);
    }

    #[test]
    fn solve_detects_non_membership() {
        let b = diag_basis([2; DIM]);
        assert!(solve_integral(&b, &diag_basis([4; DIM])).is_some());
        assert!(solve_integral(&b, &diag_basis([1; DIM])).is_none());
    }

    proptest! {
        #[test]
        fn hermite_index_is_abs_det(b in basis_strategy()) {
            let d = det(&b);
            match Hermite::of_generators(&b) {
                Some(h) => {
                    prop_assert_eq!(h.index(), d.abs());
                    for col in &b {
                        prop_assert!(h.contains(col));
                    }
                }
                None => prop_assert_eq!(d, 0),
            }
        }

        #[test]
        fn smith_reconstructs(b in basis_strategy()) {
            prop_assume!(det(&b) != 0);
            let t = widen(&b);
            let s = smith(&t);
            prop_assert_eq!(s.diag.iter().product::<i128>(), det(&b).abs());
            for k in 1..DIM {
                prop_assert_eq!(s.diag[k] % s.diag[k - 1], 0);
            }
            // U⁻¹·D generates the same lattice as T
            let ud: [[i128; DIM]; DIM] = std::array::from_fn(|j| s.u_inv[j].map(|v| v * s.diag[j]));
            let as_i64 = |m: [[i128; DIM]; DIM]| m.map(|c| c.map(|v| v as i64));
            let h1 = Hermite::of_generators(&as_i64(ud)).unwrap();
            let h2 = Hermite::of_generators(&b).unwrap();
            prop_assert_eq!(h1, h2);
        }
    }
}
