//! The golden algebra and its maximal order.
//!
//! Elements of the order are written `x0 + x1·e` with `x0, x1 ∈ Z[i][θ]`,
//! `θ = (1+√5)/2`, `e² = i` and `z·e = e·σ(z)` where `σ(√5) = -√5`. Every
//! element is stored through its coordinates `(a, b, c, d) ∈ Z[i]⁴` in the basis
//! `{1, θ, e, θe}`.
//!
//! Two products live side by side. [`algebra_mul`] is the twisted,
//! non-commutative product of the algebra. [`field_mul`] treats `e` as a central
//! square root of `i`, which is the product of the number field `Q(e, √5)` read
//! through the same coordinates. The two agree when the right factor has no
//! `θ` component, and that agreement is what makes the ideal partition work.

use std::fmt;

use crate::gaussian::GaussianInteger as Gi;

/// `u + v·θ` with `θ² = θ + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadElement {
    pub u: Gi,
    pub v: Gi,
}

impl QuadElement {
    pub const ZERO: Self = Self { u: Gi::ZERO, v: Gi::ZERO };
    pub const ONE: Self = Self { u: Gi::ONE, v: Gi::ZERO };
    pub const THETA: Self = Self { u: Gi::ZERO, v: Gi::ONE };

    pub const fn new(u: Gi, v: Gi) -> Self {
        Self { u, v }
    }

    pub const fn from_gi(u: Gi) -> Self {
        Self { u, v: Gi::ZERO }
    }

    pub fn is_zero(self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// The non-trivial automorphism: `σ(u + vθ) = (u + v) - vθ`.
    pub fn sigma(self) -> Self {
        Self::new(self.u + self.v, -self.v)
    }

    /// Relative norm `z·σ(z) = u² + uv - v²`, an element of `Z[i]`.
    pub fn norm(self) -> Gi {
        self.u * self.u + self.u * self.v - self.v * self.v
    }

    pub fn scale(self, s: Gi) -> Self {
        Self::new(self.u * s, self.v * s)
    }

    /// Numeric value for a given real embedding of `θ` (either root of `x² = x + 1`).
    pub fn eval(self, theta: f64) -> num_complex::Complex64 {
        let c = |z: Gi| num_complex::Complex64::new(z.re as f64, z.im as f64);
        c(self.u) + c(self.v) * theta
    }
}

impl std::ops::Add for QuadElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.u + rhs.u, self.v + rhs.v)
    }
}

impl std::ops::Sub for QuadElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.u - rhs.u, self.v - rhs.v)
    }
}

impl std::ops::Neg for QuadElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.u, -self.v)
    }
}

impl std::ops::Mul for QuadElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let vv = self.v * rhs.v;
        Self::new(self.u * rhs.u + vv, self.u * rhs.v + self.v * rhs.u + vv)
    }
}

/// `x0 + x1·e`, an element of the maximal order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub x0: QuadElement,
    pub x1: QuadElement,
}

impl AlgebraElement {
    pub const ZERO: Self = Self { x0: QuadElement::ZERO, x1: QuadElement::ZERO };
    pub const ONE: Self = Self { x0: QuadElement::ONE, x1: QuadElement::ZERO };
    pub const E: Self = Self { x0: QuadElement::ZERO, x1: QuadElement::ONE };
    pub const THETA: Self = Self { x0: QuadElement::THETA, x1: QuadElement::ZERO };

    pub const fn new(x0: QuadElement, x1: QuadElement) -> Self {
        Self { x0, x1 }
    }

    /// Builds `(a + bθ) + (c + dθ)e`.
    pub const fn from_vec(v: [Gi; 4]) -> Self {
        Self {
            x0: QuadElement::new(v[0], v[1]),
            x1: QuadElement::new(v[2], v[3]),
        }
    }

    /// Builds `α + βe`, the shape required of partition generators.
    pub const fn from_pair(alpha: Gi, beta: Gi) -> Self {
        Self::from_vec([alpha, Gi::ZERO, beta, Gi::ZERO])
    }

    pub const fn from_gi(z: Gi) -> Self {
        Self::from_pair(z, Gi::ZERO)
    }

    /// Coordinates `(a, b, c, d)` in the basis `{1, θ, e, θe}`.
    pub fn to_vec(self) -> [Gi; 4] {
        [self.x0.u, self.x0.v, self.x1.u, self.x1.v]
    }

    pub fn is_zero(self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    /// No `θ` component, i.e. the element is `α + βe` with `α, β ∈ Z[i]`.
    pub fn is_theta_free(self) -> bool {
        self.x0.v.is_zero() && self.x1.v.is_zero()
    }

    pub fn scale(self, s: Gi) -> Self {
        Self::new(self.x0.scale(s), self.x1.scale(s))
    }

    /// Largest absolute value among the eight integer coordinates.
    pub fn max_abs_coeff(self) -> i64 {
        self.to_vec()
            .iter()
            .flat_map(|z| [z.re.abs(), z.im.abs()])
            .max()
            .unwrap_or(0)
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x0 + rhs.x0, self.x1 + rhs.x1)
    }
}

impl std::ops::Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x0 - rhs.x0, self.x1 - rhs.x1)
    }
}

impl std::ops::Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_vec();
        write!(f, "({})+({})θ+({})e+({})θe", v[0], v[1], v[2], v[3])
    }
}

/// Twisted product of the golden algebra:
/// `(x0 + x1e)(y0 + y1e) = (x0y0 + i·x1σ(y1)) + (x0y1 + x1σ(y0))e`.
pub fn algebra_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    let x0 = a.x0 * b.x0 + (a.x1 * b.x1.sigma()).scale(Gi::I);
    let x1 = a.x0 * b.x1 + a.x1 * b.x0.sigma();
    AlgebraElement::new(x0, x1)
}

/// Commutative product with `e` central and `e² = i`:
/// `(x0 + x1e)(y0 + y1e) = (x0y0 + i·x1y1) + (x0y1 + x1y0)e`.
pub fn field_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    let x0 = a.x0 * b.x0 + (a.x1 * b.x1).scale(Gi::I);
    let x1 = a.x0 * b.x1 + a.x1 * b.x0;
    AlgebraElement::new(x0, x1)
}

/// Field product of a sequence; the empty product is `1`.
pub fn field_product<I: IntoIterator<Item = AlgebraElement>>(items: I) -> AlgebraElement {
    items.into_iter().fold(AlgebraElement::ONE, field_mul)
}

/// `N_rd(x0 + x1e) = x0σ(x0) - i·x1σ(x1)`.
pub fn reduced_norm(a: AlgebraElement) -> Gi {
    a.x0.norm() - a.x1.norm().mul_i()
}

/// `|N_rd(A)|²`, the quantity that sets codeword determinants.
pub fn reduced_norm_abs2(a: AlgebraElement) -> i64 {
    reduced_norm(a).norm()
}

/// 4×4 Gaussian-integer matrix of right multiplication: `vec(B·A) = M(A)·vec(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RepMatrix {
    pub entries: [[Gi; 4]; 4],
}

impl RepMatrix {
    pub fn identity() -> Self {
        let mut entries = [[Gi::ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Gi::ONE;
        }
        Self { entries }
    }

    pub fn apply(&self, v: [Gi; 4]) -> [Gi; 4] {
        let mut out = [Gi::ZERO; 4];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            *o = row.iter().zip(&v).fold(Gi::ZERO, |acc, (&m, &x)| acc + m * x);
        }
        out
    }

    pub fn column(&self, j: usize) -> [Gi; 4] {
        [self.entries[0][j], self.entries[1][j], self.entries[2][j], self.entries[3][j]]
    }

    pub fn det(&self) -> Gi {
        det_gi(&self.entries)
    }
}

/// The explicit representation matrix of `A = (a+bθ) + (c+dθ)e`.
pub fn rep_matrix(a: AlgebraElement) -> RepMatrix {
    let [a0, b, c, d] = a.to_vec();
    let i = Gi::I;
    RepMatrix {
        entries: [
            [a0, b, i * (c + d), -(i * d)],
            [b, a0 + b, -(i * d), i * c],
            [c, d, a0 + b, -b],
            [d, c + d, -b, a0],
        ],
    }
}

/// Determinant of a 4×4 Gaussian-integer matrix by cofactor expansion.
pub(crate) fn det_gi(m: &[[Gi; 4]; 4]) -> Gi {
    fn det3(m: [[Gi; 3]; 3]) -> Gi {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut total = Gi::ZERO;
    for col in 0..4 {
        let mut minor = [[Gi::ZERO; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for c in 0..4 {
                if c != col {
                    minor[r - 1][cc] = m[r][c];
                    cc += 1;
                }
            }
        }
        let term = m[0][col] * det3(minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Exact solution of `M·x = rhs` over `Z[i]` by Cramer's rule; `None` if the
/// system is singular or the solution is not integral.
pub(crate) fn solve_gi(m: &[[Gi; 4]; 4], rhs: [Gi; 4]) -> Option<[Gi; 4]> {
    let det = det_gi(m);
    if det.is_zero() {
        return None;
    }
    let mut x = [Gi::ZERO; 4];
    for (j, xj) in x.iter_mut().enumerate() {
        let mut mj = *m;
        for (row, &r) in mj.iter_mut().zip(&rhs) {
            row[j] = r;
        }
        *xj = det_gi(&mj).div_exact(det)?;
    }
    Some(x)
}

/// Two-sided inverse inside the maximal order, if one exists.
pub fn inverse(a: AlgebraElement) -> Option<AlgebraElement> {
    if reduced_norm_abs2(a) != 1 {
        return None;
    }
    // B·A = 1  ⇔  M(A)·vec(B) = vec(1)
    let b = AlgebraElement::from_vec(solve_gi(&rep_matrix(a).entries, AlgebraElement::ONE.to_vec())?);
    (algebra_mul(a, b) == AlgebraElement::ONE && algebra_mul(b, a) == AlgebraElement::ONE).then_some(b)
}

pub fn is_unit(a: AlgebraElement) -> bool {
    inverse(a).is_some()
}

/// True when `a = u·b` for a unit `u` of the order.
pub fn is_associate(a: AlgebraElement, b: AlgebraElement) -> bool {
    if b.is_zero() {
        return a.is_zero();
    }
    // u·b = a  ⇔  M(b)·vec(u) = vec(a)
    match solve_gi(&rep_matrix(b).entries, a.to_vec()) {
        Some(u) => is_unit(AlgebraElement::from_vec(u)),
        None => false,
    }
}
