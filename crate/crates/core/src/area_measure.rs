//! Mixed area measures of polytopes and the Minkowski volume formula.
//!
//! Atoms sit on primitive integer outer normals and carry lattice-normalized
//! face mixed volumes, so `Supp_Q(u) * weight(u)` agrees with the Euclidean
//! pairing on the unit sphere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{GeometryError, Result};
use crate::geometry::json::{int_vector_from_json, int_vector_to_json, polytope_to_json};
use crate::geometry::Polytope;
use crate::mixed_volume::{mixed_volume, mixed_volumes_last_slot, PolytopeTuple};
use crate::rat::{fmt_rat, int, parse_rat, IntVector, Rat};
use crate::report::{digest, Relation, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub direction: IntVector,
    pub weight: Rat,
}

/// Finite atomic measure on primitive directions; atoms sorted by direction,
/// all weights positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedAreaMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl MixedAreaMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().filter(|a| !a.weight.is_zero()).collect();
        for a in &atoms {
            if a.direction.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, found: a.direction.len() });
            }
            if !crate::rat::is_primitive(&a.direction) {
                return Err(GeometryError::NotPrimitive(format!("{:?}", a.direction)));
            }
            if a.weight < Rat::zero() {
                return Err(GeometryError::OutOfRange(format!("negative atom weight {}", fmt_rat(&a.weight))));
            }
        }
        atoms.sort_by(|a, b| a.direction.cmp(&b.direction));
        if atoms.windows(2).any(|w| w[0].direction == w[1].direction) {
            return Err(GeometryError::OutOfRange("repeated atom direction".into()));
        }
        Ok(MixedAreaMeasure { dim, atoms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weight(&self, direction: &[BigInt]) -> Rat {
        self.atoms
            .iter()
            .find(|a| a.direction == direction)
            .map_or_else(Rat::zero, |a| a.weight.clone())
    }

    /// `sum_u u * weight(u)`; zero for every mixed area measure.
    pub fn centroid(&self) -> Vec<Rat> {
        let mut c = vec![Rat::zero(); self.dim];
        for a in &self.atoms {
            for (acc, x) in c.iter_mut().zip(&a.direction) {
                *acc += &a.weight * Rat::from_integer(x.clone());
            }
        }
        c
    }

    pub fn total_mass(&self) -> Rat {
        self.atoms.iter().map(|a| a.weight.clone()).sum()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub dir: Vec<serde_json::Value>,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
}

impl From<&MixedAreaMeasure> for MeasureJson {
    fn from(m: &MixedAreaMeasure) -> Self {
        MeasureJson {
            dim: m.dim,
            atoms: m
                .atoms
                .iter()
                .map(|a| AtomJson { dir: int_vector_to_json(&a.direction), weight: fmt_rat(&a.weight) })
                .collect(),
        }
    }
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<MixedAreaMeasure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom { direction: int_vector_from_json(&a.dir)?, weight: parse_rat(&a.weight)? }))
            .collect::<Result<Vec<_>>>()?;
        MixedAreaMeasure::new(self.dim, atoms)
    }
}

fn equality_normal(p: &Polytope) -> String {
    let hs = p.halfspaces();
    hs.iter()
        .find(|h| hs.iter().any(|g| g.normal.iter().zip(&h.normal).all(|(a, b)| *a == -b)))
        .map_or_else(String::new, |h| format!("{:?}", h.normal))
}

/// `S(P_1, ..., P_{n-1})` for `n - 1` bodies in `R^n` whose sum is
/// full-dimensional.
pub fn mixed_area_measure(bodies: &PolytopeTuple) -> Result<MixedAreaMeasure> {
    let n = bodies.dim();
    if bodies.len() + 1 != n {
        return Err(GeometryError::WrongArity { expected: n - 1, found: bodies.len() });
    }
    if n == 1 {
        let atoms = vec![
            Atom { direction: vec![BigInt::one()], weight: Rat::one() },
            Atom { direction: vec![-BigInt::one()], weight: Rat::one() },
        ];
        return MixedAreaMeasure::new(1, atoms);
    }
    let mut sum = bodies.bodies()[0].clone();
    for b in &bodies.bodies()[1..] {
        sum = sum.minkowski_sum(b)?;
    }
    if !sum.is_full_dimensional() {
        return Err(GeometryError::DegenerateMeasure(equality_normal(&sum)));
    }
    let mut atoms = Vec::new();
    for h in sum.halfspaces() {
        let u: IntVector = h.normal.iter().map(|x| -x).collect();
        let weight = face_mixed_volume(bodies.bodies(), &u)?;
        atoms.push(Atom { direction: u, weight });
    }
    MixedAreaMeasure::new(n, atoms)
}

/// Lattice-normalized `(n-1)`-dimensional mixed volume of the faces
/// `F(P_i, u)`, taken in the hyperplane coordinates of `u`.
///
/// Computed on the projection forgetting an axis `j` with `u_j != 0`, which
/// scales lattice volume on `u^perp` by `|u_j|`.
pub fn face_mixed_volume(bodies: &[Polytope], u: &[BigInt]) -> Result<Rat> {
    let axis = u
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .min_by_key(|(_, x)| x.magnitude().clone())
        .map(|(i, _)| i)
        .ok_or_else(|| GeometryError::NotPrimitive(format!("{u:?}")))?;
    let faces = bodies
        .iter()
        .map(|b| b.face_int(u)?.drop_coordinate(axis))
        .collect::<Result<Vec<_>>>()?;
    Ok(mixed_volume(&PolytopeTuple::new(faces)?)? / Rat::from_integer(u[axis].abs()))
}

/// `(1/n) sum_u (Supp_{Q'}(u) - Supp_Q(u)) weight(u)`.
pub fn support_integral(measure: &MixedAreaMeasure, q_prime: &Polytope, q: &Polytope) -> Result<Rat> {
    for b in [q_prime, q] {
        if b.dim() != measure.dim {
            return Err(GeometryError::DimensionMismatch { expected: measure.dim, found: b.dim() });
        }
    }
    let mut acc = Rat::zero();
    for a in &measure.atoms {
        acc += (q_prime.support_value_int(&a.direction)? - q.support_value_int(&a.direction)?) * &a.weight;
    }
    Ok(acc / int(measure.dim as i64))
}

pub const MINKOWSKI_STATEMENT: &str = "minkowski";

/// Checks `V(P.., Q') - V(P.., Q) = (1/n) int (Supp_{Q'} - Supp_Q) dS(P..)`
/// exactly.
pub fn minkowski_formula_check(bodies: &PolytopeTuple, q: &Polytope, q_prime: &Polytope) -> Result<Report> {
    let n = bodies.dim();
    if bodies.len() + 1 != n {
        return Err(GeometryError::WrongArity { expected: n - 1, found: bodies.len() });
    }
    if !q_prime.contains_body(q)? {
        return Err(GeometryError::ContainmentViolated("Q is not contained in Q'".into()));
    }
    let lhs = if n == 1 {
        q_prime.volume() - q.volume()
    } else {
        let v = mixed_volumes_last_slot(bodies.bodies(), &[q_prime, q])?;
        &v[0] - &v[1]
    };
    let measure = mixed_area_measure(bodies)?;
    let rhs = support_integral(&measure, q_prime, q)?;
    let inputs = json!({
        "bodies": bodies.bodies().iter().map(polytope_to_json).collect::<Vec<_>>(),
        "q": polytope_to_json(q),
        "q_prime": polytope_to_json(q_prime),
    });
    Ok(Report::exact(MINKOWSKI_STATEMENT, digest(&inputs), lhs, rhs, Relation::Eq)
        .with_note(format!("atoms={}", measure.atoms.len())))
}
