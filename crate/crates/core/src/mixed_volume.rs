//! Mixed volumes through polarization, checked against an independent
//! polynomial-fit oracle.
//!
//! Normalization: `V(P, ..., P) = vol(P)`.

use num_traits::{One, Zero};

use crate::error::{GeometryError, Result};
use crate::geometry::linalg::solve;
use crate::geometry::Polytope;
use crate::rat::{factorial_rat, int, to_f64, Rat};

/// A list of polytopes sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeTuple {
    dim: usize,
    bodies: Vec<Polytope>,
}

impl PolytopeTuple {
    pub fn new(bodies: Vec<Polytope>) -> Result<Self> {
        let dim = bodies.first().ok_or(GeometryError::EmptyInput)?.dim();
        if let Some(b) = bodies.iter().find(|b| b.dim() != dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, found: b.dim() });
        }
        Ok(PolytopeTuple { dim, bodies })
    }

    /// The empty tuple in dimension `dim` (the `n = 1` area-measure case).
    pub fn empty(dim: usize) -> Self {
        PolytopeTuple { dim, bodies: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bodies(&self) -> &[Polytope] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }
}

/// Minkowski sums of every nonempty subset, indexed by bitmask.
fn subset_sums(bodies: &[Polytope]) -> Result<Vec<Option<Polytope>>> {
    let mut sums: Vec<Option<Polytope>> = vec![None; 1 << bodies.len()];
    for mask in 1usize..sums.len() {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let body = &bodies[top as usize];
        sums[mask] = Some(match &sums[rest] {
            None => body.clone(),
            Some(s) => s.minkowski_sum(body)?,
        });
    }
    Ok(sums)
}

fn sign(exponent: usize) -> Rat {
    if exponent % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// `V(P_1, ..., P_n) = (1/n!) sum_{S} (-1)^{n-|S|} vol(sum_{i in S} P_i)`.
pub fn mixed_volume(bodies: &PolytopeTuple) -> Result<Rat> {
    let n = bodies.dim;
    if bodies.len() != n {
        return Err(GeometryError::WrongArity { expected: n, found: bodies.len() });
    }
    let sums = subset_sums(&bodies.bodies)?;
    let mut acc = Rat::zero();
    for (mask, s) in sums.iter().enumerate().skip(1) {
        let s = s.as_ref().expect("nonempty mask");
        if !s.volume().is_zero() {
            acc += sign(n - mask.count_ones() as usize) * s.volume();
        }
    }
    Ok(acc / factorial_rat(n))
}

/// `V(P_1, ..., P_{n-1}, Q)` for several choices of `Q`, sharing the subset
/// sums of the first `n - 1` bodies.
pub fn mixed_volumes_last_slot(prefix: &[Polytope], lasts: &[&Polytope]) -> Result<Vec<Rat>> {
    let n = prefix.len() + 1;
    for b in prefix.iter().chain(lasts.iter().copied()) {
        if b.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: b.dim() });
        }
    }
    let sums = subset_sums(prefix)?;
    let mut base = Rat::zero();
    for (mask, s) in sums.iter().enumerate().skip(1) {
        let v = s.as_ref().expect("nonempty mask").volume();
        if !v.is_zero() {
            base += sign(n - mask.count_ones() as usize) * v;
        }
    }
    let mut out = Vec::with_capacity(lasts.len());
    for q in lasts {
        let mut acc = base.clone();
        for (mask, s) in sums.iter().enumerate() {
            let with_q = match s {
                None => (*q).clone(),
                Some(s) => s.minkowski_sum(q)?,
            };
            if !with_q.volume().is_zero() {
                acc += sign(n - 1 - mask.count_ones() as usize) * with_q.volume();
            }
        }
        out.push(acc / factorial_rat(n));
    }
    Ok(out)
}

/// All exponent vectors of length `n` summing to `total`, lexicographic.
fn compositions(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Mixed volume read off the polynomial `vol(l_1 P_1 + ... + l_n P_n)`.
///
/// The homogeneous degree-`n` polynomial is fitted exactly on the grid
/// `l = 1 + a` with `a` ranging over exponent vectors of total degree `n`
/// (so every `l_i` is in `{1, ..., n+1}`); the coefficient of `l_1 ... l_n`
/// equals `n! V(P_1, ..., P_n)`.
pub fn mixed_volume_oracle(bodies: &PolytopeTuple) -> Result<Rat> {
    let n = bodies.dim;
    if bodies.len() != n {
        return Err(GeometryError::WrongArity { expected: n, found: bodies.len() });
    }
    let monomials = compositions(n, n);
    let nodes: Vec<Vec<usize>> = monomials.iter().map(|a| a.iter().map(|x| x + 1).collect()).collect();
    let mut matrix = Vec::with_capacity(nodes.len());
    let mut rhs = Vec::with_capacity(nodes.len());
    for lambda in &nodes {
        let row: Vec<Rat> = monomials
            .iter()
            .map(|beta| {
                let v: u64 = lambda.iter().zip(beta).map(|(&l, &b)| (l as u64).pow(b as u32)).product();
                int(v as i64)
            })
            .collect();
        matrix.push(row);
        let mut sum: Option<Polytope> = None;
        for (body, &l) in bodies.bodies.iter().zip(lambda) {
            let scaled = body.scale(&int(l as i64))?;
            sum = Some(match sum {
                None => scaled,
                Some(s) => s.minkowski_sum(&scaled)?,
            });
        }
        rhs.push(sum.expect("n >= 1").volume().clone());
    }
    let coeffs = solve(&matrix, &rhs).ok_or(GeometryError::Singular)?;
    let target = vec![1usize; n];
    let idx = monomials.iter().position(|m| *m == target).expect("square-free monomial present");
    Ok(&coeffs[idx] / factorial_rat(n))
}

/// `vol(P+Q)^{1/n} - vol(P)^{1/n} - vol(Q)^{1/n}`, nonnegative up to
/// floating rounding.
pub fn brunn_minkowski_gap(p: &Polytope, q: &Polytope) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(GeometryError::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let n = p.dim() as f64;
    let root = |v: &Rat| to_f64(v).powf(1.0 / n);
    let s = p.minkowski_sum(q)?;
    Ok(root(s.volume()) - root(p.volume()) - root(q.volume()))
}

/// Tolerance for the floating Brunn–Minkowski check: the gap may be
/// negative by at most this much.
pub const BRUNN_MINKOWSKI_TOL: f64 = 1e-9;
