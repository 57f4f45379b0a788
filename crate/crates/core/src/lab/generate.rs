use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::geometry::Polytope;
use crate::piecewise::PiecewiseLinear;
use crate::rat::{int, is_primitive, IntVector, Point, Rat};
use crate::toric::{newton_polytope, NewtonBody, ToricData};

/// Parameters of one generated instance. Equal specs give equal instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub vertex_budget: usize,
    pub coordinate_height: u32,
}

impl InstanceSpec {
    pub const DEFAULT_HEIGHT: u32 = 16;

    pub fn new(seed: u64, dim: usize) -> Self {
        InstanceSpec { seed, dim, vertex_budget: dim + 3, coordinate_height: Self::DEFAULT_HEIGHT }
    }

    pub fn with_budget(mut self, vertex_budget: usize) -> Self {
        self.vertex_budget = vertex_budget;
        self
    }

    pub fn with_height(mut self, coordinate_height: u32) -> Self {
        self.coordinate_height = coordinate_height;
        self
    }

    pub(crate) fn height(&self) -> i64 {
        i64::from(self.coordinate_height.max(1))
    }
}

/// Independent stream `stream` of the generator for `spec`.
pub fn rng_for(spec: &InstanceSpec, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream.wrapping_mul(0x9e37_79b9).wrapping_add(spec.dim as u64));
    rng
}

/// `p/q` with `|p| <= height`, `1 <= q <= height`.
pub fn random_rational(rng: &mut impl Rng, height: i64) -> Rat {
    let p = rng.random_range(-height..=height);
    let q = rng.random_range(1..=height);
    Rat::new(p.into(), q.into())
}

fn random_point(rng: &mut impl Rng, dim: usize, height: i64) -> Point {
    (0..dim).map(|_| random_rational(rng, height)).collect()
}

const ATTEMPTS: usize = 64;

/// Hull of `vertex_budget` random rational points (at least `dim + 1`),
/// full-dimensional.
pub fn random_polytope(spec: &InstanceSpec, rng: &mut impl Rng) -> Result<Polytope> {
    let n = spec.dim;
    let k = spec.vertex_budget.max(n + 1);
    for _ in 0..ATTEMPTS {
        let pts: Vec<Point> = (0..k).map(|_| random_point(rng, n, spec.height())).collect();
        let p = Polytope::from_points(pts)?;
        if p.is_full_dimensional() {
            return Ok(p);
        }
    }
    Err(GeometryError::Generation("no full-dimensional sample".into()))
}

/// Nonzero primitive vector with entries in `[-bound, bound]`.
pub fn random_primitive(rng: &mut impl Rng, dim: usize, bound: i64) -> IntVector {
    loop {
        let v: IntVector = (0..dim).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect();
        if is_primitive(&v) {
            return v;
        }
    }
}

fn convex_combination(rng: &mut impl Rng, vertices: &[Point], height: i64) -> Point {
    let k = rng.random_range(1..=vertices.len().min(3));
    let picks: Vec<&Point> = (0..k).map(|_| &vertices[rng.random_range(0..vertices.len())]).collect();
    let weights: Vec<i64> = (0..k).map(|_| rng.random_range(1..=height)).collect();
    let total: i64 = weights.iter().sum();
    let dim = vertices[0].len();
    (0..dim)
        .map(|i| {
            picks.iter().zip(&weights).map(|(v, w)| &v[i] * int(*w)).sum::<Rat>() / int(total)
        })
        .collect()
}

/// Hull of `budget` random convex combinations of vertices of `outer`.
pub fn random_subbody(rng: &mut impl Rng, outer: &Polytope, budget: usize, height: i64) -> Result<Polytope> {
    if budget == 0 {
        return Err(GeometryError::Generation("vertex budget must be positive".into()));
    }
    let pts: Vec<Point> = (0..budget).map(|_| convex_combination(rng, outer.vertices(), height)).collect();
    Polytope::from_points(pts)
}

/// Fan rays `+-e_i` and up to two more primitive rays; positive coefficients,
/// so `0` is interior to the Newton polytope.
pub fn random_toric_data(spec: &InstanceSpec, rng: &mut impl Rng) -> Result<ToricData> {
    let n = spec.dim;
    let mut rays: Vec<IntVector> = Vec::new();
    for i in 0..n {
        for s in [1i64, -1] {
            let mut u = vec![BigInt::zero(); n];
            u[i] = BigInt::from(s);
            rays.push(u);
        }
    }
    if n > 1 {
        let extra = rng.random_range(0..=2);
        while rays.len() < 2 * n + extra {
            let u = random_primitive(rng, n, 2);
            if !rays.contains(&u) {
                rays.push(u);
            }
        }
    }
    random_toric_data_on(spec, rng, rays)
}

/// Random positive coefficients on a given fan.
pub fn random_toric_data_on(spec: &InstanceSpec, rng: &mut impl Rng, rays: Vec<IntVector>) -> Result<ToricData> {
    let h = spec.height().min(8);
    let coeffs = rays.iter().map(|_| Rat::new(rng.random_range(1..=h).into(), rng.random_range(1..=4).into())).collect();
    ToricData::new(spec.dim, rays, coeffs)
}

/// `(T, S)` with `Delta(T) ⊆ Delta(S) ⊆ P_H`. `S` is full-dimensional with at
/// least `dim + 1` generating points; `T` is the hull of `vertex_budget`
/// points of `S`.
pub fn random_nested_pair(spec: &InstanceSpec, ambient: &ToricData) -> Result<(NewtonBody, NewtonBody)> {
    nested_pair_from(&mut rng_for(spec, 1), spec, ambient)
}

pub(crate) fn nested_pair_from(
    rng: &mut impl Rng,
    spec: &InstanceSpec,
    ambient: &ToricData,
) -> Result<(NewtonBody, NewtonBody)> {
    let p = newton_polytope(ambient)?;
    let h = spec.height();
    let n = spec.dim;
    let mut outer = None;
    for _ in 0..ATTEMPTS {
        let s = random_subbody(rng, &p, spec.vertex_budget.max(n + 1), h)?;
        if s.is_full_dimensional() {
            outer = Some(s);
            break;
        }
    }
    let s = outer.ok_or_else(|| GeometryError::Generation("no full-dimensional outer body".into()))?;
    let t = random_subbody(rng, &s, spec.vertex_budget, h)?;
    Ok((NewtonBody::new(ambient.clone(), t)?, NewtonBody::new(ambient.clone(), s)?))
}

/// Concave, nonnegative piecewise-linear function on `[0, A]` with up to
/// `pieces` linear pieces.
pub fn random_concave_function(rng: &mut impl Rng, pieces: usize, height: i64) -> Result<PiecewiseLinear> {
    let k = rng.random_range(1..=pieces.max(1));
    let mut xs: Vec<Rat> = vec![Rat::zero()];
    for _ in 0..k {
        let step = Rat::new(rng.random_range(1..=height).into(), rng.random_range(1..=4).into());
        let next = xs.last().expect("nonempty") + step;
        xs.push(next);
    }
    let mut slopes: Vec<Rat> = (0..k).map(|_| random_rational(rng, height)).collect();
    slopes.sort_by(|a, b| b.cmp(a));
    let mut ys = vec![Rat::new(rng.random_range(0..=height).into(), BigInt::one())];
    for (i, s) in slopes.iter().enumerate() {
        let y = &ys[i] + s * (&xs[i + 1] - &xs[i]);
        ys.push(y);
    }
    let low = ys.iter().min().expect("nonempty").clone();
    if low < Rat::zero() {
        for y in ys.iter_mut() {
            *y -= &low;
        }
    }
    let knots = xs.into_iter().zip(ys).collect();
    PiecewiseLinear::new(knots)
}

/// Rational in `[0, 1]` with denominator dividing `height`.
pub(crate) fn random_fraction(rng: &mut impl Rng, height: i64) -> Rat {
    let h = height.max(1);
    let p = rng.random_range(0..=h);
    Rat::new(p.into(), h.into()).reduced()
}
