use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hull::hull;
use super::linalg::{int_rank_exact, nullspace, rref, solve};
use super::unimodular::{unimodular_to_e1, UnimodularMap};
use crate::error::{GeometryError, Result};
use crate::rat::{
    dot, dot_int, factorial, fmt_rat, gcd_all, is_primitive, lcm_denominators, primitive_direction, IntVector, Point,
    Rat,
};

/// Whether integer points affinely span `R^dim`.
fn spans(ints: &[Vec<BigInt>], dim: usize) -> bool {
    if ints.len() <= dim {
        return false;
    }
    let diffs: Vec<Vec<BigInt>> = ints[1..].iter().map(|p| p.iter().zip(&ints[0]).map(|(a, b)| a - b).collect()).collect();
    let small: Option<Vec<Vec<i128>>> = diffs.iter().map(|r| r.iter().map(|x| x.to_i128()).collect()).collect();
    match small {
        Some(rows) => int_rank_exact(&rows) == dim,
        None => int_rank_exact(&diffs) == dim,
    }
}

/// The closed halfspace `{m : <m, normal> >= offset}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: IntVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: IntVector, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, m: &[Rat]) -> bool {
        dot_int(m, &self.normal) >= self.offset
    }

    /// Same halfspace with a primitive normal. `None` for a zero normal.
    fn normalized(&self) -> Option<Halfspace> {
        let g = gcd_all(&self.normal);
        if g.is_zero() {
            return None;
        }
        Some(Halfspace {
            normal: self.normal.iter().map(|x| x / &g).collect(),
            offset: &self.offset / Rat::from_integer(g),
        })
    }
}

/// A nonempty rational polytope with canonical vertex and facet lists.
///
/// Vertices are the extreme points, sorted lexicographically. Halfspace
/// normals are primitive and inward, every halfspace is tight at some vertex,
/// and lower-dimensional bodies carry their affine hull as pairs of opposite
/// halfspaces.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    intrinsic_dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
    volume: Rat,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn from_points(points: Vec<Point>) -> Result<Polytope> {
        let dim = points.first().ok_or(GeometryError::EmptyInput)?.len();
        if dim == 0 {
            return Err(GeometryError::DimensionTooSmall { min: 1, found: 0 });
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, found: p.len() });
        }
        let mut points = points;
        points.sort();
        points.dedup();

        let scale = lcm_denominators(points.iter().flatten());
        let scale_rat = Rat::from_integer(scale.clone());
        let ints: Vec<Vec<BigInt>> =
            points.iter().map(|p| p.iter().map(|x| (x * &scale_rat).to_integer()).collect()).collect();
        if dim >= 2 && spans(&ints, dim) {
            let raw = hull(&ints);
            let halfspaces = raw.facets.into_iter().map(|(n, c)| Halfspace::new(n, Rat::new(c, scale.clone()))).collect();
            let volume = Rat::new(raw.volume_factorial, factorial(dim) * num_traits::pow(scale, dim));
            let vertices = raw.extreme.into_iter().map(|i| points[i].clone()).collect();
            return Ok(Polytope { dim, intrinsic_dim: dim, vertices, halfspaces, volume }.sorted());
        }

        let base = points[0].clone();
        let mut dirs: Vec<Vec<Rat>> =
            points[1..].iter().map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();
        let pivots = rref(&mut dirs);
        let k = pivots.len();

        let mut halfspaces = Vec::new();
        if k < dim {
            // affine hull as opposite halfspace pairs
            let basis: Vec<Vec<Rat>> = dirs.into_iter().take(k).collect();
            for y in nullspace(&basis, dim) {
                let n = primitive_direction(&y).expect("nullspace vectors are nonzero");
                let b = dot_int(&base, &n);
                halfspaces.push(Halfspace::new(n.iter().map(|x| -x).collect(), -b.clone()));
                halfspaces.push(Halfspace::new(n, b));
            }
        }

        let extreme: Vec<usize>;
        let mut volume = Rat::zero();
        match k {
            0 => extreme = vec![0],
            1 => {
                let c = pivots[0];
                let (mut lo, mut hi) = (0, 0);
                for (i, p) in points.iter().enumerate() {
                    if p[c] < points[lo][c] {
                        lo = i;
                    }
                    if p[c] > points[hi][c] {
                        hi = i;
                    }
                }
                let mut e = unit(dim, c);
                halfspaces.push(Halfspace::new(e.clone(), points[lo][c].clone()));
                e[c] = -BigInt::one();
                halfspaces.push(Halfspace::new(e, -points[hi][c].clone()));
                let mut ex = vec![lo, hi];
                ex.sort_unstable();
                extreme = ex;
                if dim == 1 {
                    volume = &points[hi][c] - &points[lo][c];
                }
            }
            _ => {
                let scale = lcm_denominators(points.iter().flat_map(|p| pivots.iter().map(move |&c| &p[c])));
                let scale_rat = Rat::from_integer(scale.clone());
                let projected: Vec<Vec<BigInt>> = points
                    .iter()
                    .map(|p| pivots.iter().map(|&c| (&p[c] * &scale_rat).to_integer()).collect())
                    .collect();
                let raw = hull(&projected);
                for (n, c) in raw.facets {
                    let mut normal = vec![BigInt::zero(); dim];
                    for (&col, x) in pivots.iter().zip(n) {
                        normal[col] = x;
                    }
                    halfspaces.push(Halfspace::new(normal, Rat::new(c, scale.clone())));
                }
                if k == dim {
                    let denom = factorial(dim) * num_traits::pow(scale, dim);
                    volume = Rat::new(raw.volume_factorial, denom);
                }
                extreme = raw.extreme;
            }
        }
        let vertices: Vec<Point> = extreme.into_iter().map(|i| points[i].clone()).collect();
        Ok(Polytope { dim, intrinsic_dim: k, vertices, halfspaces, volume }.sorted())
    }

    fn sorted(mut self) -> Self {
        self.halfspaces.sort();
        self.halfspaces.dedup();
        self
    }

    /// The polytope `{m : <m, n_i> >= c_i for all i}` in `R^dim`.
    pub fn from_halfspaces(halfspaces: &[Halfspace], dim: usize) -> Result<Polytope> {
        if dim == 0 {
            return Err(GeometryError::DimensionTooSmall { min: 1, found: 0 });
        }
        let mut tight: BTreeMap<IntVector, Rat> = BTreeMap::new();
        for h in halfspaces {
            if h.normal.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, found: h.normal.len() });
            }
            match h.normalized() {
                None if h.offset.is_positive() => return Err(GeometryError::EmptyRegion),
                None => {}
                Some(h) => {
                    let e = tight.entry(h.normal).or_insert_with(|| h.offset.clone());
                    if h.offset > *e {
                        *e = h.offset;
                    }
                }
            }
        }
        let system: Vec<Halfspace> = tight.into_iter().map(|(n, c)| Halfspace::new(n, c)).collect();
        if !recession_cone_is_trivial(&system, dim)? {
            return Err(GeometryError::Unbounded);
        }
        let normals: Vec<Vec<Rat>> = system.iter().map(|h| crate::rat::to_rat_vector(&h.normal)).collect();
        let mut found: Vec<Point> = Vec::new();
        for_each_combination(system.len(), dim, |idx| {
            let a: Vec<Vec<Rat>> = idx.iter().map(|&i| normals[i].clone()).collect();
            let b: Vec<Rat> = idx.iter().map(|&i| system[i].offset.clone()).collect();
            if let Some(x) = solve(&a, &b) {
                if system.iter().all(|h| h.contains(&x)) {
                    found.push(x);
                }
            }
        });
        if found.is_empty() {
            return Err(GeometryError::EmptyRegion);
        }
        Polytope::from_points(found)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the affine hull.
    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.intrinsic_dim == self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facet inequalities; for lower-dimensional bodies this also includes
    /// the affine-hull pairs.
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Euclidean volume, zero for lower-dimensional bodies.
    pub fn volume(&self) -> &Rat {
        &self.volume
    }

    pub fn contains_point(&self, m: &[Rat]) -> bool {
        m.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(m))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: n });
        }
        Ok(())
    }

    /// `max_{m in P} <m, u>`.
    pub fn support_value(&self, u: &[Rat]) -> Result<Rat> {
        self.check_dim(u.len())?;
        Ok(self.vertices.iter().map(|v| dot(v, u)).max().expect("polytopes are nonempty"))
    }

    pub fn support_value_int(&self, u: &[BigInt]) -> Result<Rat> {
        self.check_dim(u.len())?;
        Ok(self.vertices.iter().map(|v| dot_int(v, u)).max().expect("polytopes are nonempty"))
    }

    /// `min_{m in P} <m, u>`.
    pub fn min_pairing(&self, u: &[BigInt]) -> Result<Rat> {
        self.check_dim(u.len())?;
        Ok(self.vertices.iter().map(|v| dot_int(v, u)).min().expect("polytopes are nonempty"))
    }

    /// The face `F(P, u)` on which `<., u>` is maximal.
    pub fn face(&self, u: &[Rat]) -> Result<Polytope> {
        if u.iter().all(Zero::is_zero) {
            return Err(GeometryError::ZeroDirection);
        }
        let h = self.support_value(u)?;
        let verts: Vec<Point> = self.vertices.iter().filter(|v| dot(v, u) == h).cloned().collect();
        Polytope::from_points(verts)
    }

    pub fn face_int(&self, u: &[BigInt]) -> Result<Polytope> {
        self.face(&crate::rat::to_rat_vector(u))
    }

    /// Minkowski sum by hulling all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        self.check_dim(other.dim)?;
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Polytope::from_points(pts)
    }

    /// `{lambda m + v : m in P}`.
    pub fn affine(&self, lambda: &Rat, v: &[Rat]) -> Result<Polytope> {
        if lambda.is_negative() {
            return Err(GeometryError::NegativeScale(fmt_rat(lambda)));
        }
        self.check_dim(v.len())?;
        let pts = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(x, t)| lambda * x + t).collect())
            .collect();
        Polytope::from_points(pts)
    }

    pub fn scale(&self, lambda: &Rat) -> Result<Polytope> {
        self.affine(lambda, &vec![Rat::zero(); self.dim])
    }

    pub fn translate(&self, v: &[Rat]) -> Result<Polytope> {
        self.affine(&Rat::one(), v)
    }

    /// `Q ⊆ self`.
    pub fn contains_body(&self, other: &Polytope) -> Result<bool> {
        self.check_dim(other.dim)?;
        Ok(other.vertices.iter().all(|v| self.halfspaces.iter().all(|h| h.contains(v))))
    }

    /// Image under the dual action `m -> M^{-T} m`.
    pub fn transform_dual(&self, map: &UnimodularMap) -> Result<Polytope> {
        self.check_dim(map.dim())?;
        Polytope::from_points(self.vertices.iter().map(|v| map.apply_dual(v)).collect())
    }

    /// Slice `{<m, u> = t}` of `P`, in lattice coordinates on the hyperplane.
    ///
    /// `None` when the hyperplane misses `P`.
    pub fn lattice_slice(&self, u: &[BigInt], t: &Rat) -> Result<Option<Polytope>> {
        self.check_dim(u.len())?;
        if !is_primitive(u) {
            return Err(GeometryError::NotPrimitive(format!("{u:?}")));
        }
        let map = unimodular_to_e1(u)?;
        self.lattice_slice_with(&map, t)
    }

    /// As [`Polytope::lattice_slice`] with an explicit unimodular map sending
    /// the slicing direction to `e1`.
    pub fn lattice_slice_with(&self, map: &UnimodularMap, t: &Rat) -> Result<Option<Polytope>> {
        if self.dim < 2 {
            return Err(GeometryError::DimensionTooSmall { min: 2, found: self.dim });
        }
        self.check_dim(map.dim())?;
        let imgs: Vec<Point> = self.vertices.iter().map(|v| map.apply_dual(v)).collect();
        let mut pts: Vec<Point> = Vec::new();
        for (i, a) in imgs.iter().enumerate() {
            if a[0] == *t {
                pts.push(a[1..].to_vec());
                continue;
            }
            for b in &imgs[i + 1..] {
                let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
                if lo[0] < *t && *t < hi[0] {
                    let s = (t - &lo[0]) / (&hi[0] - &lo[0]);
                    pts.push(lo[1..].iter().zip(&hi[1..]).map(|(x, y)| x + &s * (y - x)).collect());
                }
            }
        }
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::from_points(pts).map(Some)
    }

    /// For a body lying in a hyperplane `{<m, u> = c}`, its image in lattice
    /// coordinates on that hyperplane (`R^{n-1}`).
    pub fn hyperplane_coordinates(&self, u: &[BigInt]) -> Result<Polytope> {
        self.check_dim(u.len())?;
        if self.dim < 2 {
            return Err(GeometryError::DimensionTooSmall { min: 2, found: self.dim });
        }
        let map = unimodular_to_e1(u)?;
        Polytope::from_points(self.vertices.iter().map(|v| map.apply_dual(v)[1..].to_vec()).collect())
    }

    /// Image under the coordinate projection forgetting axis `axis`.
    pub fn drop_coordinate(&self, axis: usize) -> Result<Polytope> {
        if self.dim < 2 {
            return Err(GeometryError::DimensionTooSmall { min: 2, found: self.dim });
        }
        if axis >= self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: axis + 1 });
        }
        Polytope::from_points(
            self.vertices
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(i, _)| i != axis).map(|(_, x)| x.clone()).collect())
                .collect(),
        )
    }

    /// Bounding box `(lo, hi)` of the vertices.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for i in 0..self.dim {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }
}

fn unit(dim: usize, c: usize) -> IntVector {
    let mut e = vec![BigInt::zero(); dim];
    e[c] = BigInt::one();
    e
}

/// Whether `{d : <n_i, d> >= 0}` is `{0}`, i.e. 0 lies in the interior of
/// the convex hull of the normals.
fn recession_cone_is_trivial(system: &[Halfspace], dim: usize) -> Result<bool> {
    if system.is_empty() {
        return Ok(false);
    }
    let normals = Polytope::from_points(system.iter().map(|h| crate::rat::to_rat_vector(&h.normal)).collect())?;
    if !normals.is_full_dimensional() {
        return Ok(false);
    }
    let origin = vec![Rat::zero(); dim];
    Ok(normals.halfspaces.iter().all(|h| dot_int(&origin, &h.normal) > h.offset))
}

/// Calls `f` on every increasing `k`-subset of `0..n`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
