//! Exact linear algebra over `Rat` and over checked integer types.

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::rat::Rat;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Basis of `{y : rows · y = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut y = vec![Rat::zero(); cols];
            y[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                y[p] = -m[r][f].clone();
            }
            y
        })
        .collect()
}

/// Integer scalar used by the hull kernel: either `i128` (fast, may overflow)
/// or `BigInt` (never overflows).
pub trait ExactInt:
    Clone
    + Ord
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
    + num_integer::Integer
    + std::hash::Hash
    + std::fmt::Debug
    + Into<num_bigint::BigInt>
    + TryFrom<num_bigint::BigInt>
    + Residue
{
}

impl<T> ExactInt for T where
    T: Clone
        + Ord
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + CheckedDiv
        + num_integer::Integer
        + std::hash::Hash
        + std::fmt::Debug
        + Into<num_bigint::BigInt>
    + TryFrom<num_bigint::BigInt>
    + Residue
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub fn add<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

pub fn sub<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

pub fn mul<T: ExactInt>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

pub fn int_dot<T: ExactInt>(a: &[T], b: &[T]) -> Result<T, Overflow> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = add(&acc, &mul(x, y)?)?;
        }
    }
    Ok(acc)
}

/// Laplace expansion along row `row` over the columns `cols`; no division,
/// so intermediates never exceed the size of the minors.
fn cofactor_det<T: ExactInt>(m: &[Vec<T>], row: usize, cols: &[usize]) -> Result<T, Overflow> {
    if cols.len() == 1 {
        return Ok(m[row][cols[0]].clone());
    }
    let mut acc = T::zero();
    let mut buf = [0usize; 4];
    let rest = &mut buf[..cols.len() - 1];
    for (i, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        for (slot, &x) in rest.iter_mut().zip(cols.iter().filter(|&&x| x != c)) {
            *slot = x;
        }
        let term = mul(&m[row][c], &cofactor_det(m, row + 1, rest)?)?;
        acc = if i % 2 == 0 { add(&acc, &term)? } else { sub(&acc, &term)? };
    }
    Ok(acc)
}

/// Determinant of the square block formed by the first `cols.len()` rows of
/// `m` and the columns `cols`.
pub fn minor_det<T: ExactInt>(m: &[Vec<T>], cols: &[usize]) -> Result<T, Overflow> {
    match cols.len() {
        0 => Ok(T::one()),
        1..=4 => cofactor_det(m, 0, cols),
        k => int_det(m[..k].iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()),
    }
}

/// Determinant: cofactor expansion up to size 4, fraction-free (Bareiss)
/// elimination beyond.
pub fn int_det<T: ExactInt>(mut m: Vec<Vec<T>>) -> Result<T, Overflow> {
    let n = m.len();
    if n == 0 {
        return Ok(T::one());
    }
    if n <= 4 {
        return cofactor_det(&m, 0, &[0, 1, 2, 3][..n]);
    }
    let mut sign_negative = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign_negative = !sign_negative;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = mul(&m[i][j], &m[k][k])?;
                let b = mul(&m[i][k], &m[k][j])?;
                let num = sub(&a, &b)?;
                m[i][j] = num.checked_div(&prev).ok_or(Overflow)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign_negative { -d } else { d })
}

fn widen<T: ExactInt>(m: &[Vec<T>]) -> Vec<Vec<num_bigint::BigInt>> {
    m.iter().map(|r| r.iter().map(|x| x.clone().into()).collect()).collect()
}

/// `int_det`, redone in `BigInt` when `T` overflows in the elimination; fails
/// only if the determinant itself does not fit in `T`.
pub fn int_det_exact<T: ExactInt>(m: Vec<Vec<T>>) -> Result<T, Overflow> {
    match int_det(m.clone()) {
        Ok(d) => Ok(d),
        Err(Overflow) => {
            let d = int_det(widen(&m)).expect("BigInt arithmetic cannot overflow");
            T::try_from(d).map_err(|_| Overflow)
        }
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn invmod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        e >>= 1;
    }
    acc
}

/// Rank over `Z / p`, a lower bound for the rank over `Q`.
fn rank_mod_p<T: ExactInt>(rows: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x.residue(PRIME)).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = invmod(m[r][c]);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let f = mulmod(m[i][c], inv);
            for j in c..ncols {
                let sub = mulmod(f, m[r][j]);
                m[i][j] = (m[i][j] + PRIME - sub) % PRIME;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Exact rank. A full rank modulo a large prime settles it; otherwise
/// fraction-free elimination in `T`, redone in `BigInt` on overflow.
pub fn int_rank_exact<T: ExactInt>(rows: &[Vec<T>]) -> usize {
    let full = rows.len().min(rows.first().map_or(0, Vec::len));
    if rank_mod_p(rows) == full {
        return full;
    }
    int_rank(rows).unwrap_or_else(|_| int_rank(&widen(rows)).expect("BigInt arithmetic cannot overflow"))
}

/// Reduction modulo a positive `u64`.
pub trait Residue {
    fn residue(&self, p: u64) -> u64;
}

impl Residue for i128 {
    fn residue(&self, p: u64) -> u64 {
        self.rem_euclid(p as i128) as u64
    }
}

impl Residue for num_bigint::BigInt {
    fn residue(&self, p: u64) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        self.mod_floor(&num_bigint::BigInt::from(p)).to_u64().expect("residue below p")
    }
}

/// Rank of an integer matrix via fraction-free elimination.
pub fn int_rank<T: ExactInt>(rows: &[Vec<T>]) -> Result<usize, Overflow> {
    let mut m = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            let g = m[r][c].gcd(&m[i][c]);
            let fr = m[i][c].checked_div(&g).ok_or(Overflow)?;
            let fi = m[r][c].checked_div(&g).ok_or(Overflow)?;
            for j in c..ncols {
                let a = mul(&m[i][j], &fi)?;
                let b = mul(&m[r][j], &fr)?;
                m[i][j] = sub(&a, &b)?;
            }
            let content = m[i].iter().fold(T::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                for x in m[i].iter_mut() {
                    *x = x.checked_div(&content).ok_or(Overflow)?;
                }
            }
        }
        r += 1;
    }
    Ok(r)
}
