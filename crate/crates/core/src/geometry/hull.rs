//! Quickhull over integer points in general dimension.
//!
//! The boundary is maintained as a simplicial complex. Facets coplanar with
//! a new point are treated as not visible, so flat neighbouring simplices
//! survive and are merged by hyperplane afterwards. All predicates are exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::linalg::{add, int_det_exact, int_dot, int_rank_exact, minor_det, mul, sub, ExactInt, Overflow};

/// Output of the hull kernel, already merged into true facets.
#[derive(Debug, Clone)]
pub struct RawHull {
    /// Primitive inward normals `n` with offsets `c`: `<n, x> >= c` on the hull.
    pub facets: Vec<(Vec<BigInt>, BigInt)>,
    /// Indices of the extreme input points, ascending.
    pub extreme: Vec<usize>,
    /// `d!` times the volume of the hull in the input coordinates.
    pub volume_factorial: BigInt,
}

struct Facet<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

/// Hull of distinct integer points spanning `R^d`, `d >= 2`.
///
/// Tries `i128` arithmetic first and falls back to `BigInt` on overflow.
pub fn hull(points: &[Vec<BigInt>]) -> RawHull {
    let small: Option<Vec<Vec<i128>>> = points
        .iter()
        .map(|p| p.iter().map(|x| x.to_i128().filter(|v| v.abs() < (1i128 << 100))).collect())
        .collect();
    if let Some(small) = small {
        if let Ok(h) = Kernel::<i128>::run(&small) {
            return h;
        }
    }
    Kernel::<BigInt>::run(points).expect("BigInt arithmetic cannot overflow")
}

struct Kernel<'a, T> {
    pts: &'a [Vec<T>],
    dim: usize,
    facets: Vec<Facet<T>>,
    interior: Vec<T>,
    interior_weight: T,
}

impl<'a, T: ExactInt> Kernel<'a, T> {
    fn run(pts: &'a [Vec<T>]) -> Result<RawHull, Overflow> {
        let dim = pts[0].len();
        let simplex = initial_simplex(pts)?;
        assert_eq!(simplex.len(), dim + 1, "points must span the ambient space");
        let mut interior = vec![T::zero(); dim];
        for &i in &simplex {
            for (acc, x) in interior.iter_mut().zip(&pts[i]) {
                *acc = add(acc, x)?;
            }
        }
        let mut k = Kernel {
            pts,
            dim,
            facets: Vec::new(),
            interior,
            interior_weight: (0..=dim).fold(T::zero(), |acc, _| acc + T::one()),
        };
        k.seed(&simplex)?;
        k.expand()?;
        k.finish()
    }

    fn seed(&mut self, simplex: &[usize]) -> Result<(), Overflow> {
        let d = self.dim;
        for omit in 0..=d {
            let verts: Vec<usize> = (0..=d).filter(|&j| j != omit).map(|j| simplex[j]).collect();
            let neighbors: Vec<usize> = (0..=d).filter(|&j| j != omit).collect();
            let (normal, offset) = self.oriented_plane(&verts)?;
            self.facets.push(Facet { verts, normal, offset, neighbors, outside: Vec::new(), alive: true });
        }
        let in_simplex: std::collections::HashSet<usize> = simplex.iter().copied().collect();
        for p in 0..self.pts.len() {
            if in_simplex.contains(&p) {
                continue;
            }
            for f in 0..self.facets.len() {
                if self.is_outside(f, p)? {
                    self.facets[f].outside.push(p);
                    break;
                }
            }
        }
        Ok(())
    }

    fn signed_distance(&self, f: usize, p: usize) -> Result<T, Overflow> {
        let facet = &self.facets[f];
        sub(&int_dot(&facet.normal, &self.pts[p])?, &facet.offset)
    }

    fn is_outside(&self, f: usize, p: usize) -> Result<bool, Overflow> {
        Ok(self.signed_distance(f, p)?.is_negative())
    }

    fn oriented_plane(&self, verts: &[usize]) -> Result<(Vec<T>, T), Overflow> {
        let d = self.dim;
        let base = &self.pts[verts[0]];
        let mut rows = Vec::with_capacity(d - 1);
        for &v in &verts[1..] {
            let mut r = Vec::with_capacity(d);
            for (x, b) in self.pts[v].iter().zip(base) {
                r.push(sub(x, b)?);
            }
            rows.push(r);
        }
        let mut normal = Vec::with_capacity(d);
        let mut cols: Vec<usize> = (1..d).collect();
        for j in 0..d {
            if j > 0 {
                cols[j - 1] = j - 1;
            }
            let det = minor_det(&rows, &cols)?;
            normal.push(if j % 2 == 0 { det } else { -det });
        }
        let mut offset = int_dot(&normal, base)?;
        let side = sub(&int_dot(&normal, &self.interior)?, &mul(&offset, &self.interior_weight)?)?;
        debug_assert!(!side.is_zero(), "interior reference point lies on a facet plane");
        if side.is_negative() {
            for x in normal.iter_mut() {
                *x = -x.clone();
            }
            offset = -offset;
        }
        Ok((normal, offset))
    }

    fn expand(&mut self) -> Result<(), Overflow> {
        let mut work: Vec<usize> = (0..self.facets.len()).collect();
        let mut stamp = vec![0usize; self.facets.len()];
        let mut round = 0usize;
        while let Some(f) = work.pop() {
            if !self.facets[f].alive || self.facets[f].outside.is_empty() {
                continue;
            }
            // farthest point in the unnormalized metric; ties broken by index
            let mut apex = self.facets[f].outside[0];
            let mut best = self.signed_distance(f, apex)?;
            for &p in &self.facets[f].outside[1..] {
                let d = self.signed_distance(f, p)?;
                if d < best || (d == best && p < apex) {
                    best = d;
                    apex = p;
                }
            }

            round += 1;
            stamp.resize(self.facets.len(), 0);
            let mut visible = vec![f];
            stamp[f] = round;
            let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
            let mut i = 0;
            while i < visible.len() {
                let v = visible[i];
                i += 1;
                for slot in 0..self.dim {
                    let g = self.facets[v].neighbors[slot];
                    if stamp[g] == round {
                        continue;
                    }
                    if self.is_outside(g, apex)? {
                        stamp[g] = round;
                        visible.push(g);
                    } else {
                        horizon.push((v, slot, g));
                    }
                }
            }

            let first_new = self.facets.len();
            let mut ridge_index: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
            for &(v, slot, g) in &horizon {
                let mut verts: Vec<usize> =
                    self.facets[v].verts.iter().enumerate().filter(|&(s, _)| s != slot).map(|(_, &x)| x).collect();
                verts.push(apex);
                let (normal, offset) = self.oriented_plane(&verts)?;
                let id = self.facets.len();
                let mut neighbors = vec![usize::MAX; self.dim];
                neighbors[self.dim - 1] = g;
                if let Some(s) = self.facets[g].neighbors.iter().position(|&x| x == v) {
                    self.facets[g].neighbors[s] = id;
                }
                for k in 0..self.dim - 1 {
                    let mut key: Vec<usize> =
                        verts.iter().enumerate().filter(|&(s, _)| s != k).map(|(_, &x)| x).collect();
                    key.sort_unstable();
                    if let Some((other, other_slot)) = ridge_index.remove(&key) {
                        neighbors[k] = other;
                        self.facets[other].neighbors[other_slot] = id;
                    } else {
                        ridge_index.insert(key, (id, k));
                    }
                }
                self.facets.push(Facet { verts, normal, offset, neighbors, outside: Vec::new(), alive: true });
            }
            debug_assert!(ridge_index.is_empty(), "unmatched ridges in cone construction");

            let mut orphans = Vec::new();
            for &v in &visible {
                self.facets[v].alive = false;
                orphans.append(&mut self.facets[v].outside);
            }
            for p in orphans {
                if p == apex {
                    continue;
                }
                for nf in first_new..self.facets.len() {
                    if self.is_outside(nf, p)? {
                        self.facets[nf].outside.push(p);
                        break;
                    }
                }
            }
            work.extend(first_new..self.facets.len());
        }
        Ok(())
    }

    fn finish(self) -> Result<RawHull, Overflow> {
        let d = self.dim;
        let mut planes: Vec<(Vec<T>, T)> = Vec::new();
        let mut plane_of: HashMap<Vec<T>, usize> = HashMap::new();
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        let alive: Vec<&Facet<T>> = self.facets.iter().filter(|f| f.alive).collect();
        for facet in &alive {
            let g = facet.normal.iter().fold(T::zero(), |acc, x| acc.gcd(x));
            let normal: Vec<T> = facet.normal.iter().map(|x| x.clone() / g.clone()).collect();
            let offset = facet.offset.clone() / g;
            let id = *plane_of.entry(normal.clone()).or_insert_with(|| {
                planes.push((normal, offset));
                planes.len() - 1
            });
            for &v in &facet.verts {
                let list = incident.entry(v).or_default();
                if !list.contains(&id) {
                    list.push(id);
                }
            }
        }
        let mut extreme = Vec::new();
        for (&v, ids) in &incident {
            if ids.len() < d {
                continue;
            }
            let normals: Vec<Vec<T>> = ids.iter().map(|&i| planes[i].0.clone()).collect();
            if int_rank_exact(&normals) == d {
                extreme.push(v);
            }
        }
        extreme.sort_unstable();

        let apex = &self.pts[extreme[0]];
        let mut volume = T::zero();
        for facet in &alive {
            if facet.verts.contains(&extreme[0]) {
                continue;
            }
            let mut m = Vec::with_capacity(d);
            for &v in &facet.verts {
                let mut row = Vec::with_capacity(d);
                for (x, a) in self.pts[v].iter().zip(apex) {
                    row.push(sub(x, a)?);
                }
                m.push(row);
            }
            volume = add(&volume, &int_det_exact(m)?.abs())?;
        }

        let mut facets: Vec<(Vec<BigInt>, BigInt)> = planes
            .into_iter()
            .map(|(n, c)| (n.into_iter().map(Into::into).collect(), c.into()))
            .collect();
        facets.sort();
        Ok(RawHull { facets, extreme, volume_factorial: volume.into() })
    }
}

fn initial_simplex<T: ExactInt>(pts: &[Vec<T>]) -> Result<Vec<usize>, Overflow> {
    let d = pts[0].len();
    let mut chosen = vec![0usize];
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if chosen.len() == d + 1 {
            break;
        }
        let mut row = Vec::with_capacity(d);
        for (x, b) in p.iter().zip(&pts[0]) {
            row.push(sub(x, b)?);
        }
        rows.push(row);
        if int_rank_exact(&rows) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    Ok(chosen)
}
