//! Toric divisor data, Newton polytopes and the Newton-body dictionary.
//!
//! A divisor `H = sum a_rho D_rho` on a fan with rays `u_rho` has Newton
//! polytope `P_H = {m : <m, u_rho> >= -a_rho}`; an invariant current in the
//! class of `H` corresponds to a convex body inside `P_H`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::area_measure::face_mixed_volume;
use crate::error::{GeometryError, Result};
use crate::geometry::json::{int_vector_from_json, int_vector_to_json, PolytopeJson};
use crate::geometry::{Halfspace, Polytope};
use crate::rat::{dot_int, factorial_rat, fmt_rat, is_primitive, parse_rat, IntVector, Rat};
use crate::report::{digest, Relation, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricData {
    dim: usize,
    rays: Vec<IntVector>,
    coeffs: Vec<Rat>,
}

impl ToricData {
    pub fn new(dim: usize, rays: Vec<IntVector>, coeffs: Vec<Rat>) -> Result<Self> {
        if dim == 0 {
            return Err(GeometryError::DimensionTooSmall { min: 1, found: 0 });
        }
        if rays.len() != coeffs.len() {
            return Err(GeometryError::InvalidToricData(format!(
                "{} rays but {} coefficients",
                rays.len(),
                coeffs.len()
            )));
        }
        for (i, u) in rays.iter().enumerate() {
            if u.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, found: u.len() });
            }
            if !is_primitive(u) {
                return Err(GeometryError::NotPrimitive(format!("{u:?}")));
            }
            if rays[..i].contains(u) {
                return Err(GeometryError::InvalidToricData(format!("repeated ray {u:?}")));
            }
        }
        Ok(ToricData { dim, rays, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn ray(&self, index: usize) -> Result<&IntVector> {
        self.rays.get(index).ok_or(GeometryError::RayIndexOutOfRange { index, len: self.rays.len() })
    }

    pub fn coeff(&self, index: usize) -> Result<&Rat> {
        self.coeffs.get(index).ok_or(GeometryError::RayIndexOutOfRange { index, len: self.rays.len() })
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.rays.iter().zip(&self.coeffs).map(|(u, a)| Halfspace::new(u.clone(), -a)).collect()
    }

    /// Same rays, new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<Rat>) -> Result<Self> {
        ToricData::new(self.dim, self.rays.clone(), coeffs)
    }

    /// `H + t D_rho`.
    pub fn shift_coeff(&self, index: usize, t: &Rat) -> Result<Self> {
        let mut c = self.coeffs.clone();
        *c.get_mut(index).ok_or(GeometryError::RayIndexOutOfRange { index, len: self.rays.len() })? += t;
        self.with_coeffs(c)
    }

    /// `lambda H`.
    pub fn scale(&self, lambda: &Rat) -> Result<Self> {
        if lambda.is_negative() {
            return Err(GeometryError::NegativeScale(fmt_rat(lambda)));
        }
        self.with_coeffs(self.coeffs.iter().map(|a| a * lambda).collect())
    }

    /// `H + H'` on a common fan.
    pub fn add(&self, other: &ToricData) -> Result<Self> {
        self.check_same_fan(other)?;
        self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn check_same_fan(&self, other: &ToricData) -> Result<()> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.rays != other.rays {
            return Err(GeometryError::InvalidToricData("ray lists differ".into()));
        }
        Ok(())
    }

    /// `<m, u_rho> + a_rho`.
    pub fn pairing(&self, m: &[Rat], index: usize) -> Result<Rat> {
        Ok(dot_int(m, self.ray(index)?) + self.coeff(index)?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(ToricDataJson::from(self)).expect("toric data serializes")
    }
}

pub fn newton_polytope(data: &ToricData) -> Result<Polytope> {
    Polytope::from_halfspaces(&data.halfspaces(), data.dim)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToricDataJson {
    pub dim: usize,
    pub rays: Vec<Vec<Value>>,
    pub coeffs: Vec<String>,
}

impl From<&ToricData> for ToricDataJson {
    fn from(d: &ToricData) -> Self {
        ToricDataJson {
            dim: d.dim,
            rays: d.rays.iter().map(|u| int_vector_to_json(u)).collect(),
            coeffs: d.coeffs.iter().map(fmt_rat).collect(),
        }
    }
}

impl ToricDataJson {
    pub fn to_data(&self) -> Result<ToricData> {
        let rays = self.rays.iter().map(|u| int_vector_from_json(u)).collect::<Result<Vec<_>>>()?;
        let coeffs = self.coeffs.iter().map(|c| parse_rat(c)).collect::<Result<Vec<_>>>()?;
        ToricData::new(self.dim, rays, coeffs)
    }
}

/// A body `Delta` inside the Newton polytope of its ambient divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonBody {
    ambient: ToricData,
    newton: Polytope,
    body: Polytope,
}

impl NewtonBody {
    pub fn new(ambient: ToricData, body: Polytope) -> Result<Self> {
        let newton = newton_polytope(&ambient)?;
        if !newton.contains_body(&body)? {
            return Err(GeometryError::ContainmentViolated("body is not contained in the Newton polytope".into()));
        }
        Ok(NewtonBody { ambient, newton, body })
    }

    /// The body of a current with minimal singularities: `Delta = P_H`.
    pub fn full(ambient: ToricData) -> Result<Self> {
        let newton = newton_polytope(&ambient)?;
        Ok(NewtonBody { ambient, body: newton.clone(), newton })
    }

    pub fn ambient(&self) -> &ToricData {
        &self.ambient
    }

    pub fn newton_polytope(&self) -> &Polytope {
        &self.newton
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim
    }

    /// `T + S`: Minkowski sum of bodies inside the sum of the divisors.
    pub fn add(&self, other: &NewtonBody) -> Result<Self> {
        NewtonBody::new(self.ambient.add(&other.ambient)?, self.body.minkowski_sum(&other.body)?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(NewtonBodyJson::from(self)).expect("newton body serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewtonBodyJson {
    pub ambient: ToricDataJson,
    pub body: PolytopeJson,
}

impl From<&NewtonBody> for NewtonBodyJson {
    fn from(b: &NewtonBody) -> Self {
        NewtonBodyJson { ambient: ToricDataJson::from(&b.ambient), body: PolytopeJson::from(&b.body) }
    }
}

impl NewtonBodyJson {
    pub fn to_body(&self) -> Result<NewtonBody> {
        NewtonBody::new(self.ambient.to_data()?, self.body.to_polytope()?)
    }
}

/// `nu(T, D_rho) = min_{m in Delta} <m, u_rho> + a_rho`.
pub fn lelong_number(body: &NewtonBody, ray_index: usize) -> Result<Rat> {
    let u = body.ambient.ray(ray_index)?;
    Ok(body.body.min_pairing(u)? + body.ambient.coeff(ray_index)?)
}

/// `max_{m in Delta} <m, u_rho> + a_rho`.
pub fn max_pairing(body: &NewtonBody, ray_index: usize) -> Result<Rat> {
    let u = body.ambient.ray(ray_index)?;
    Ok(body.body.support_value_int(u)? + body.ambient.coeff(ray_index)?)
}

/// `n! vol(Delta)`.
pub fn current_volume(body: &NewtonBody) -> Rat {
    factorial_rat(body.dim()) * body.body.volume()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Width {
    pub nu: Rat,
    pub nu_max: Rat,
    pub width: Rat,
}

/// Smallest and largest Lelong numbers along `D_rho` of currents in the
/// class, and their gap.
pub fn nu_max_and_width(data: &ToricData, ray_index: usize) -> Result<Width> {
    data.ray(ray_index)?;
    let full = NewtonBody::full(data.clone())?;
    if !full.newton.is_full_dimensional() {
        return Err(GeometryError::LowerDimensional(full.newton.intrinsic_dim()));
    }
    let nu = lelong_number(&full, ray_index)?;
    let nu_max = max_pairing(&full, ray_index)?;
    let width = &nu_max - &nu;
    Ok(Width { nu, nu_max, width })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedVolume {
    pub value: Rat,
    pub out_of_range: bool,
}

/// `(n-1)!` times the lattice volume of the slice `{<m, u_rho> + a_rho = t}`
/// of the body. Outside `[nu, max]` the value is zero and flagged.
pub fn restricted_volume(body: &NewtonBody, ray_index: usize, t: &Rat) -> Result<RestrictedVolume> {
    let lo = lelong_number(body, ray_index)?;
    let hi = max_pairing(body, ray_index)?;
    if *t < lo || *t > hi {
        return Ok(RestrictedVolume { value: Rat::zero(), out_of_range: true });
    }
    let n = body.dim();
    if n == 1 {
        return Ok(RestrictedVolume { value: Rat::one(), out_of_range: false });
    }
    let u = body.ambient.ray(ray_index)?;
    let level = t - body.ambient.coeff(ray_index)?;
    let value = match body.body.lattice_slice(u, &level)? {
        Some(s) => factorial_rat(n - 1) * s.volume(),
        None => Rat::zero(),
    };
    Ok(RestrictedVolume { value, out_of_range: false })
}

/// `(n-1)!` times the lattice mixed volume of the faces `F(Delta_j, -u_rho)`.
pub fn mixed_restricted_volume(bodies: &[NewtonBody], ray_index: usize) -> Result<Rat> {
    let first = bodies.first().ok_or(GeometryError::EmptyInput)?;
    let n = first.dim();
    if n < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: n });
    }
    if bodies.len() + 1 != n {
        return Err(GeometryError::WrongArity { expected: n - 1, found: bodies.len() });
    }
    for b in &bodies[1..] {
        first.ambient.check_same_fan(&b.ambient)?;
    }
    let u: IntVector = first.ambient.ray(ray_index)?.iter().map(|x| -x).collect();
    let polys: Vec<Polytope> = bodies.iter().map(|b| b.body.clone()).collect();
    Ok(factorial_rat(n - 1) * face_mixed_volume(&polys, &u)?)
}

pub const RIEMANN_SURFACE_STATEMENT: &str = "rs";

/// On a curve: `vol T' - vol T = sum over points of (nu(T) - nu(T'))`.
pub fn riemann_surface_difference(t: &NewtonBody, t_prime: &NewtonBody) -> Result<Report> {
    if t.dim() != 1 || t_prime.dim() != 1 {
        return Err(GeometryError::InvalidToricData("the curve identity needs dimension 1".into()));
    }
    t.ambient.check_same_fan(&t_prime.ambient)?;
    let mut rays: Vec<BigInt> = t.ambient.rays.iter().map(|u| u[0].clone()).collect();
    rays.sort();
    if rays != [BigInt::from(-1), BigInt::from(1)] {
        return Err(GeometryError::InvalidToricData("expected the rays +1 and -1".into()));
    }
    if !t_prime.body.contains_body(&t.body)? {
        return Err(GeometryError::ContainmentViolated("Delta(T) is not contained in Delta(T')".into()));
    }
    let lhs = current_volume(t_prime) - current_volume(t);
    let mut rhs = Rat::zero();
    for i in 0..2 {
        rhs += lelong_number(t, i)? - lelong_number(t_prime, i)?;
    }
    let inputs = json!({"t": t.to_json(), "t_prime": t_prime.to_json()});
    Ok(Report::exact(RIEMANN_SURFACE_STATEMENT, digest(&inputs), lhs, rhs, Relation::Eq))
}

/// Sorted distinct values of `<v, u_rho> + a_rho` over the vertices; the
/// restricted volume is polynomial of degree `n - 1` between them.
pub fn slice_knots(body: &NewtonBody, ray_index: usize) -> Result<Vec<Rat>> {
    let vals = body
        .body
        .vertices()
        .iter()
        .map(|v| body.ambient.pairing(v, ray_index))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::piecewise::normalize_knots(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::integrate_pieces;
    use crate::rat::{int, int_point, int_vector, point, pow, rat};
    use proptest::prelude::*;

    fn square_data() -> ToricData {
        ToricData::new(
            2,
            vec![int_vector(&[1, 0]), int_vector(&[-1, 0]), int_vector(&[0, 1]), int_vector(&[0, -1])],
            vec![int(0), int(1), int(0), int(1)],
        )
        .unwrap()
    }

    fn square_with_diagonal() -> ToricData {
        ToricData::new(
            2,
            vec![
                int_vector(&[1, 0]),
                int_vector(&[-1, 0]),
                int_vector(&[0, 1]),
                int_vector(&[0, -1]),
                int_vector(&[1, 1]),
            ],
            vec![int(0), int(1), int(0), int(1), int(0)],
        )
        .unwrap()
    }

    fn boxed(lo: &[(i64, i64)], hi: &[(i64, i64)]) -> Polytope {
        let (lo, hi) = (point(lo), point(hi));
        let mut pts = Vec::new();
        for m in 0..(1usize << lo.len()) {
            pts.push((0..lo.len()).map(|i| if m >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect());
        }
        Polytope::from_points(pts).unwrap()
    }

    fn count_su_triangle() -> Polytope {
        Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0]), point(&[(1, 1), (1, 2)])]).unwrap()
    }

    #[test]
    fn newton_polytope_examples() {
        assert_eq!(newton_polytope(&square_data()).unwrap(), boxed(&[(0, 1), (0, 1)], &[(1, 1), (1, 1)]));
        let p2 = ToricData::new(
            2,
            vec![int_vector(&[1, 0]), int_vector(&[0, 1]), int_vector(&[-1, -1])],
            vec![int(0), int(0), int(1)],
        )
        .unwrap();
        let simplex = Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0]), int_point(&[0, 1])]).unwrap();
        assert_eq!(newton_polytope(&p2).unwrap(), simplex);
        let p1 = ToricData::new(1, vec![int_vector(&[1]), int_vector(&[-1])], vec![int(0), int(0)]).unwrap();
        let pt = newton_polytope(&p1).unwrap();
        assert_eq!(pt.vertices(), &[int_point(&[0])]);
    }

    #[test]
    fn newton_polytope_errors() {
        let half = ToricData::new(2, vec![int_vector(&[1, 0]), int_vector(&[0, 1])], vec![int(0), int(0)]).unwrap();
        assert!(matches!(newton_polytope(&half), Err(GeometryError::Unbounded)));
        let empty = square_data().with_coeffs(vec![int(0), int(-1), int(0), int(1)]).unwrap();
        assert!(matches!(newton_polytope(&empty), Err(GeometryError::EmptyRegion)));
        assert!(ToricData::new(2, vec![int_vector(&[2, 0])], vec![int(0)]).is_err());
        assert!(ToricData::new(2, vec![int_vector(&[1, 0]), int_vector(&[1, 0])], vec![int(0), int(1)]).is_err());
        assert!(ToricData::new(2, vec![int_vector(&[1, 0])], vec![]).is_err());
    }

    #[test]
    fn lelong_examples() {
        let full = NewtonBody::full(square_data()).unwrap();
        assert_eq!(lelong_number(&full, 0).unwrap(), int(0));
        let half = NewtonBody::new(square_data(), boxed(&[(1, 2), (0, 1)], &[(1, 1), (1, 1)])).unwrap();
        assert_eq!(lelong_number(&half, 0).unwrap(), rat(1, 2));
        assert!(matches!(lelong_number(&half, 9), Err(GeometryError::RayIndexOutOfRange { .. })));
        for n in 2..=4usize {
            let data = cube_data(n);
            let t = rat(1, 3);
            let mut lo = vec![(0, 1); n];
            lo[0] = (1, 3);
            let q_t = NewtonBody::new(data, boxed(&lo, &vec![(1, 1); n])).unwrap();
            assert_eq!(lelong_number(&q_t, 0).unwrap(), t);
        }
    }

    fn cube_data(n: usize) -> ToricData {
        let mut rays = Vec::new();
        let mut coeffs = Vec::new();
        for i in 0..n {
            for s in [1i64, -1] {
                let mut u = vec![0i64; n];
                u[i] = s;
                rays.push(int_vector(&u));
                coeffs.push(if s == 1 { int(0) } else { int(1) });
            }
        }
        ToricData::new(n, rays, coeffs).unwrap()
    }

    #[test]
    fn containment_enforced() {
        assert!(matches!(
            NewtonBody::new(square_data(), boxed(&[(0, 1), (0, 1)], &[(2, 1), (1, 1)])),
            Err(GeometryError::ContainmentViolated(_))
        ));
    }

    #[test]
    fn current_volume_examples() {
        assert_eq!(current_volume(&NewtonBody::full(square_data()).unwrap()), int(2));
        let pt = Polytope::from_points(vec![point(&[(1, 2), (1, 2)])]).unwrap();
        assert_eq!(current_volume(&NewtonBody::new(square_data(), pt).unwrap()), int(0));
        assert_eq!(current_volume(&NewtonBody::new(square_data(), count_su_triangle()).unwrap()), rat(1, 2));
    }

    #[test]
    fn width_examples() {
        let w = nu_max_and_width(&square_data(), 0).unwrap();
        assert_eq!((w.nu_max, w.width), (int(1), int(1)));
        let w = nu_max_and_width(&square_with_diagonal(), 4).unwrap();
        assert_eq!((w.nu, w.nu_max, w.width), (int(0), int(2), int(2)));
        let w2 = nu_max_and_width(&square_data().shift_coeff(0, &rat(3, 4)).unwrap(), 0).unwrap();
        assert_eq!(w2.nu_max, int(1) + rat(3, 4));
        let flat = ToricData::new(
            2,
            vec![int_vector(&[1, 0]), int_vector(&[-1, 0]), int_vector(&[0, 1]), int_vector(&[0, -1])],
            vec![int(0), int(1), int(0), int(0)],
        )
        .unwrap();
        assert!(matches!(nu_max_and_width(&flat, 0), Err(GeometryError::LowerDimensional(1))));
    }

    #[test]
    fn restricted_volume_examples() {
        let full = NewtonBody::full(square_data()).unwrap();
        assert_eq!(restricted_volume(&full, 0, &rat(1, 2)).unwrap().value, int(1));
        let tri = NewtonBody::new(square_data(), count_su_triangle()).unwrap();
        for k in 1..10 {
            let t = rat(k, 10);
            assert_eq!(restricted_volume(&tri, 0, &t).unwrap().value, t / int(2));
        }
        let out = restricted_volume(&tri, 0, &int(2)).unwrap();
        assert!(out.out_of_range);
        assert_eq!(out.value, int(0));
        // endpoint slice of the triangle is the vertex (0, 0)
        assert_eq!(restricted_volume(&tri, 0, &int(0)).unwrap().value, int(0));
        let w = nu_max_and_width(&square_data(), 0).unwrap();
        let bound = current_volume(&full) / pow(&w.width, 2) * rat(1, 2);
        assert_eq!(bound, restricted_volume(&full, 0, &rat(1, 2)).unwrap().value);
    }

    #[test]
    fn restricted_volume_on_a_curve() {
        let seg = ToricData::new(1, vec![int_vector(&[1]), int_vector(&[-1])], vec![int(0), int(3)]).unwrap();
        let b = NewtonBody::full(seg).unwrap();
        assert_eq!(restricted_volume(&b, 0, &int(2)).unwrap(), RestrictedVolume { value: int(1), out_of_range: false });
        assert!(restricted_volume(&b, 0, &int(4)).unwrap().out_of_range);
    }

    #[test]
    fn mixed_restricted_examples() {
        let full = NewtonBody::full(square_data()).unwrap();
        assert_eq!(mixed_restricted_volume(&[full.clone()], 0).unwrap(), int(1));
        assert_eq!(mixed_restricted_volume(&[full.clone()], 0).unwrap(), restricted_volume(&full, 0, &int(0)).unwrap().value);
        let pt = NewtonBody::new(square_data(), Polytope::from_points(vec![int_point(&[1, 1])]).unwrap()).unwrap();
        assert_eq!(mixed_restricted_volume(&[pt], 0).unwrap(), int(0));
        let cube = NewtonBody::full(cube_data(3)).unwrap();
        assert_eq!(mixed_restricted_volume(&[cube.clone(), cube.clone()], 4).unwrap(), int(2));
        assert!(matches!(mixed_restricted_volume(&[cube], 0), Err(GeometryError::WrongArity { .. })));
        assert!(mixed_restricted_volume(&[full.clone(), full], 0).is_err());
    }

    fn interval(data: &ToricData, a: Rat, b: Rat) -> NewtonBody {
        NewtonBody::new(data.clone(), Polytope::from_points(vec![vec![a], vec![b]]).unwrap()).unwrap()
    }

    #[test]
    fn riemann_surface_examples() {
        let line = ToricData::new(1, vec![int_vector(&[1]), int_vector(&[-1])], vec![int(0), int(1)]).unwrap();
        let t = interval(&line, rat(1, 3), rat(1, 2));
        let tp = interval(&line, int(0), int(1));
        let r = riemann_surface_difference(&t, &tp).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs.as_exact().unwrap(), &rat(5, 6));
        assert_eq!(r.rhs.as_exact().unwrap(), &rat(5, 6));
        let r = riemann_surface_difference(&tp, &tp).unwrap();
        assert_eq!(r.lhs.as_exact().unwrap(), &int(0));
        assert!(matches!(riemann_surface_difference(&tp, &t), Err(GeometryError::ContainmentViolated(_))));
        let sq = NewtonBody::full(square_data()).unwrap();
        assert!(riemann_surface_difference(&sq, &sq).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = NewtonBody::new(square_data(), count_su_triangle()).unwrap();
        let s = serde_json::to_string(&NewtonBodyJson::from(&b)).unwrap();
        let back: NewtonBodyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_body().unwrap(), b);
        let d: ToricDataJson =
            serde_json::from_str(r#"{"dim":2,"rays":[[1,0],[-1,0],[0,1],[0,-1]],"coeffs":["0","1","0","1"]}"#).unwrap();
        assert_eq!(d.to_data().unwrap(), square_data());
    }

    fn coeffs(k: usize) -> impl Strategy<Value = Vec<Rat>> {
        prop::collection::vec((0i64..=8, 1i64..=4).prop_map(|(a, b)| rat(a, b)), k)
    }

    /// Cube fan plus the diagonal rays, with coefficients keeping the
    /// polytope full-dimensional.
    fn ambient(n: usize) -> impl Strategy<Value = ToricData> {
        let k = 2 * n + 2;
        coeffs(k).prop_map(move |c| {
            let mut rays = Vec::new();
            let mut cs = Vec::new();
            for i in 0..n {
                for s in [1i64, -1] {
                    let mut u = vec![0i64; n];
                    u[i] = s;
                    rays.push(int_vector(&u));
                    cs.push(&c[2 * i + usize::from(s < 0)] + int(1));
                }
            }
            rays.push(int_vector(&vec![1; n]));
            cs.push(c[2 * n].clone() + int(1));
            rays.push(int_vector(&vec![-1; n]));
            cs.push(c[2 * n + 1].clone() + int(1));
            ToricData::new(n, rays, cs).unwrap()
        })
    }

    fn sub_body(data: ToricData, picks: Vec<(usize, usize, u8)>) -> NewtonBody {
        let p = newton_polytope(&data).unwrap();
        let vs = p.vertices();
        let pts: Vec<Vec<Rat>> = picks
            .iter()
            .map(|&(i, j, w)| {
                let (a, b) = (&vs[i % vs.len()], &vs[j % vs.len()]);
                let s = rat(i64::from(w), 8);
                a.iter().zip(b).map(|(x, y)| x + &s * (y - x)).collect()
            })
            .collect();
        NewtonBody::new(data, Polytope::from_points(pts).unwrap()).unwrap()
    }

    fn picks() -> impl Strategy<Value = Vec<(usize, usize, u8)>> {
        prop::collection::vec((0usize..64, 0usize..64, 0u8..=8), 1..8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lelong_is_additive(d1 in ambient(2), d2 in ambient(2), p1 in picks(), p2 in picks(), r in 0usize..6) {
            let a = sub_body(d1, p1);
            let b = sub_body(d2, p2);
            let s = a.add(&b).unwrap();
            prop_assert_eq!(lelong_number(&s, r).unwrap(), lelong_number(&a, r).unwrap() + lelong_number(&b, r).unwrap());
        }

        #[test]
        fn lelong_is_monotone(d in ambient(3), p in picks(), q in picks(), r in 0usize..8) {
            let outer = sub_body(d.clone(), p);
            let inner_pts: Vec<Vec<Rat>> = outer.body().vertices().iter().take(1 + q.len() % 4).cloned().collect();
            let inner = NewtonBody::new(d, Polytope::from_points(inner_pts).unwrap()).unwrap();
            prop_assert!(lelong_number(&inner, r).unwrap() >= lelong_number(&outer, r).unwrap());
            prop_assert!(lelong_number(&outer, r).unwrap() >= Rat::zero());
        }

        #[test]
        fn width_identities(d in ambient(3), r in 0usize..8, num in 0i64..8, den in 1i64..4) {
            let t = rat(num, den);
            let w = nu_max_and_width(&d, r).unwrap();
            let shifted = nu_max_and_width(&d.shift_coeff(r, &t).unwrap(), r).unwrap();
            prop_assert_eq!(&shifted.nu_max - &t, w.nu_max.clone());
            let lowered = nu_max_and_width(&d.shift_coeff(r, &-&w.nu).unwrap(), r).unwrap();
            prop_assert_eq!(lowered.width, w.width.clone());
            prop_assert_eq!(lowered.nu, Rat::zero());
            let lam = rat(num + 1, den);
            let scaled = nu_max_and_width(&d.scale(&lam).unwrap(), r).unwrap();
            prop_assert_eq!(scaled.nu_max, &lam * &w.nu_max);
            prop_assert_eq!(scaled.width, &lam * &w.width);
            prop_assert!(w.width > Rat::zero());
        }

        #[test]
        fn nu_max_is_superadditive(d1 in ambient(2), d2 in ambient(2), r in 0usize..6) {
            let s = nu_max_and_width(&d1.add(&d2).unwrap(), r).unwrap();
            let a = nu_max_and_width(&d1, r).unwrap();
            let b = nu_max_and_width(&d2, r).unwrap();
            prop_assert!(s.nu_max >= a.nu_max + b.nu_max);
        }

        #[test]
        fn fubini(n in 2usize..=3, d in ambient(3), p in picks(), r in 0usize..8) {
            let d = if n == 3 { d } else {
                ToricData::new(2, vec![int_vector(&[1, 0]), int_vector(&[-1, 0]), int_vector(&[0, 1]), int_vector(&[0, -1]), int_vector(&[1, -1])],
                    d.coeffs()[..5].to_vec()).unwrap()
            };
            let r = r % d.rays().len();
            let body = sub_body(d, p);
            let knots = slice_knots(&body, r).unwrap();
            let total = integrate_pieces(&knots, n - 1, |t| Ok(restricted_volume(&body, r, t)?.value)).unwrap();
            prop_assert_eq!(total / factorial_rat(n - 1), body.body().volume().clone());
        }
    }
}
