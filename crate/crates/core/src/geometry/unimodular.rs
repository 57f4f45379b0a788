use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{GeometryError, Result};
use crate::rat::{is_primitive, IntVector, Point, Rat};

/// Integer matrix with determinant ±1, stored together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    matrix: Vec<IntVector>,
    inverse: Vec<IntVector>,
}

fn identity(n: usize) -> Vec<IntVector> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl UnimodularMap {
    pub fn identity(n: usize) -> Self {
        UnimodularMap { matrix: identity(n), inverse: identity(n) }
    }

    /// Builds a map from a matrix, checking that it is invertible over the integers.
    pub fn new(matrix: Vec<IntVector>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(GeometryError::DimensionMismatch { expected: n, found: matrix.iter().map(Vec::len).max().unwrap_or(0) });
        }
        let rows: Vec<Vec<Rat>> = matrix.iter().map(|r| crate::rat::to_rat_vector(r)).collect();
        let mut inverse = Vec::with_capacity(n);
        let mut cols = vec![Vec::with_capacity(n); n];
        for j in 0..n {
            let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
            let x = super::linalg::solve(&rows, &e).ok_or(GeometryError::Singular)?;
            for (i, v) in x.into_iter().enumerate() {
                if !v.is_integer() {
                    return Err(GeometryError::Singular);
                }
                cols[i].push(v.to_integer());
            }
        }
        inverse.extend(cols);
        Ok(UnimodularMap { matrix, inverse })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[IntVector] {
        &self.matrix
    }

    pub fn inverse(&self) -> &[IntVector] {
        &self.inverse
    }

    /// `M v` for an integer vector (a direction in `N`).
    pub fn apply(&self, v: &[BigInt]) -> IntVector {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `M^{-T} m` for a point of the dual space `M_R`. Under this change of
    /// coordinates `<m, u>` becomes the first coordinate whenever `M u = e1`.
    pub fn apply_dual(&self, m: &[Rat]) -> Point {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, x) in m.iter().enumerate() {
                    let c = &self.inverse[j][i];
                    if !c.is_zero() && !x.is_zero() {
                        acc += x * Rat::from_integer(c.clone());
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap { matrix: matmul(&self.matrix, &other.matrix), inverse: matmul(&other.inverse, &self.inverse) }
    }
}

fn matmul(a: &[IntVector], b: &[IntVector]) -> Vec<IntVector> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// Unimodular `M` with `M u = e1`, by extended-gcd row operations.
pub fn unimodular_to_e1(u: &[BigInt]) -> Result<UnimodularMap> {
    if !is_primitive(u) {
        return Err(GeometryError::NotPrimitive(format!("{u:?}")));
    }
    let n = u.len();
    let mut v = u.to_vec();
    let mut m = identity(n);
    let mut inv = identity(n);
    for i in (1..n).rev() {
        if v[i].is_zero() {
            continue;
        }
        let a = v[0].clone();
        let b = v[i].clone();
        let eg = a.extended_gcd(&b);
        let (g, x, y) = (eg.gcd, eg.x, eg.y);
        let ag = &a / &g;
        let bg = &b / &g;
        // rows (0, i) <- [[x, y], [-b/g, a/g]] (rows 0, i); determinant 1
        let r0: IntVector = m[0].iter().zip(&m[i]).map(|(p, q)| &x * p + &y * q).collect();
        let ri: IntVector = m[0].iter().zip(&m[i]).map(|(p, q)| -&bg * p + &ag * q).collect();
        m[0] = r0;
        m[i] = ri;
        for row in inv.iter_mut() {
            let c0 = row[0].clone();
            let ci = row[i].clone();
            row[0] = &ag * &c0 + &bg * &ci;
            row[i] = -&y * &c0 + &x * &ci;
        }
        v[0] = g;
        v[i] = BigInt::zero();
    }
    if v[0].is_negative() {
        for x in m[0].iter_mut() {
            *x = -x.clone();
        }
        for row in inv.iter_mut() {
            row[0] = -row[0].clone();
        }
    }
    debug_assert!(v[0].abs().is_one());
    Ok(UnimodularMap { matrix: m, inverse: inv })
}
