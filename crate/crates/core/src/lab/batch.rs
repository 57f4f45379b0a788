use std::ops::RangeInclusive;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::checks::{
    check_alpha_t_mixed, check_concave_integral, check_loss_mixed, check_loss_product, check_loss_single,
    check_monte_carlo, check_ratio_monotone, check_res_vol_lower_bound, check_slice_lower_bound,
};
use super::generate::{
    nested_pair_from, random_concave_function, random_fraction, random_polytope, random_primitive, random_subbody,
    random_toric_data, random_toric_data_on, rng_for, InstanceSpec,
};
use crate::area_measure::minkowski_formula_check;
use crate::error::{GeometryError, Result};
use crate::geometry::json::polytope_to_json;
use crate::mixed_volume::{brunn_minkowski_gap, mixed_volume, mixed_volume_oracle, PolytopeTuple, BRUNN_MINKOWSKI_TOL};
use crate::rat::{fmt_rat, Rat};
use crate::report::{digest, Relation, Report};
use crate::toric::{lelong_number, newton_polytope, nu_max_and_width, riemann_surface_difference, NewtonBody};

/// Statement ids accepted by [`run_batch`].
pub const STATEMENTS: &[&str] = &[
    "minkowski",
    "mixed-volume-oracle",
    "brunn-minkowski",
    "mc-volume",
    "res-vol",
    "loss-single",
    "loss-mixed",
    "loss-product",
    "alpha-t-mixed",
    "concave-integral",
    "slice-bound",
    "ratio-monotone",
    "rs",
    "lelong-additive",
    "lelong-monotone",
    "width-shift",
    "width-normalize",
    "width-scale",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchOptions {
    /// Points per generated body; defaults depend on the dimension.
    pub vertex_budget: Option<usize>,
    pub coordinate_height: u32,
    /// Monte-Carlo samples per instance.
    pub samples: u64,
    /// Grid size of the ratio monotonicity check.
    pub grid: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions { vertex_budget: None, coordinate_height: InstanceSpec::DEFAULT_HEIGHT, samples: 100_000, grid: 20 }
    }
}

impl BatchOptions {
    fn spec(&self, seed: u64, dim: usize) -> InstanceSpec {
        let budget = self.vertex_budget.unwrap_or(match dim {
            0..=2 => 8,
            3 => 6,
            _ => 5,
        });
        InstanceSpec::new(seed, dim).with_budget(budget).with_height(self.coordinate_height)
    }
}

/// `"a..b"` (inclusive), `"a..=b"` or a single seed.
pub fn parse_seed_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || GeometryError::Parse(format!("invalid seed range {s:?}"));
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    let r = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..=num(b)?
    } else {
        let a = num(s)?;
        a..=a
    };
    if r.start() > r.end() {
        return Err(bad());
    }
    Ok(r)
}

fn min_dim(statement: &str) -> usize {
    match statement {
        "mixed-volume-oracle" | "minkowski" | "brunn-minkowski" | "mc-volume" | "res-vol" | "loss-single"
        | "concave-integral" | "lelong-additive" | "lelong-monotone" | "width-shift" | "width-normalize"
        | "width-scale" | "rs" => 1,
        _ => 2,
    }
}

/// Generates and checks one instance per seed; reports are in seed order.
pub fn run_batch(statement: &str, dim: usize, seeds: RangeInclusive<u64>, opts: &BatchOptions) -> Result<Vec<Report>> {
    if !STATEMENTS.contains(&statement) {
        return Err(GeometryError::Parse(format!("unknown statement {statement:?}")));
    }
    if statement == "rs" && dim != 1 {
        return Err(GeometryError::OutOfRange("the curve identity runs in dimension 1".into()));
    }
    if dim < min_dim(statement) {
        return Err(GeometryError::DimensionTooSmall { min: min_dim(statement), found: dim });
    }
    let seeds: Vec<u64> = seeds.collect();
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let spec = opts.spec(seed, dim);
            let reports = instance(statement, &spec, opts)?;
            Ok(reports.into_iter().map(|r| stamp(r, &spec)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

fn stamp(mut r: Report, spec: &InstanceSpec) -> Report {
    r.inputs_digest = digest(&json!({
        "seed": spec.seed,
        "dim": spec.dim,
        "vertex_budget": spec.vertex_budget,
        "coordinate_height": spec.coordinate_height,
        "instance": r.inputs_digest,
    }));
    r.with_note(format!("seed={}", spec.seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub statement: String,
    pub dim: usize,
    pub seeds: String,
    #[serde(default)]
    pub vertex_budget: Option<usize>,
}

/// Batch manifest: `{"entries": [{"statement", "dim", "seeds"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

pub fn run_manifest(manifest: &Manifest, opts: &BatchOptions) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for e in &manifest.entries {
        let mut o = opts.clone();
        if e.vertex_budget.is_some() {
            o.vertex_budget = e.vertex_budget;
        }
        out.extend(run_batch(&e.statement, e.dim, parse_seed_range(&e.seeds)?, &o)?);
    }
    Ok(out)
}

fn instance(statement: &str, spec: &InstanceSpec, opts: &BatchOptions) -> Result<Vec<Report>> {
    let mut rng = rng_for(spec, 0);
    let n = spec.dim;
    let h = spec.height();
    match statement {
        "minkowski" => {
            let bodies = (1..n).map(|_| random_polytope(spec, &mut rng)).collect::<Result<Vec<_>>>()?;
            let q_prime = random_polytope(spec, &mut rng)?;
            let q = random_subbody(&mut rng, &q_prime, spec.vertex_budget, h)?;
            let tuple = if n == 1 { PolytopeTuple::empty(1) } else { PolytopeTuple::new(bodies)? };
            Ok(vec![minkowski_formula_check(&tuple, &q, &q_prime)?])
        }
        "mixed-volume-oracle" => {
            let bodies = PolytopeTuple::new((0..n).map(|_| random_polytope(spec, &mut rng)).collect::<Result<_>>()?)?;
            let inputs = json!(bodies.bodies().iter().map(polytope_to_json).collect::<Vec<_>>());
            Ok(vec![Report::exact(
                "mixed-volume-oracle",
                digest(&inputs),
                mixed_volume(&bodies)?,
                mixed_volume_oracle(&bodies)?,
                Relation::Eq,
            )])
        }
        "brunn-minkowski" => {
            let p = random_polytope(spec, &mut rng)?;
            let q = random_polytope(spec, &mut rng)?;
            let gap = brunn_minkowski_gap(&p, &q)?;
            let inputs = json!({"p": polytope_to_json(&p), "q": polytope_to_json(&q)});
            Ok(vec![Report::float_ge("brunn-minkowski", digest(&inputs), gap, 0.0, BRUNN_MINKOWSKI_TOL)])
        }
        "mc-volume" => {
            let p = random_polytope(spec, &mut rng)?;
            Ok(vec![check_monte_carlo(&p, opts.samples, spec.seed)?])
        }
        "res-vol" => {
            let data = random_toric_data(spec, &mut rng)?;
            let ray = rng.random_range(0..data.rays().len());
            let w = nu_max_and_width(&data, ray)?;
            let t = &w.nu + random_fraction(&mut rng, h) * &w.width;
            Ok(vec![check_res_vol_lower_bound(&data, ray, &t)?])
        }
        "loss-single" => {
            let data = random_toric_data(spec, &mut rng)?;
            let ray = rng.random_range(0..data.rays().len());
            let (t, s) = nested_pair_from(&mut rng, spec, &data)?;
            Ok(vec![check_loss_single(&t, &s, ray)?])
        }
        "loss-mixed" | "loss-product" => {
            let base = random_toric_data(spec, &mut rng)?;
            let ray = rng.random_range(0..base.rays().len());
            let mut pairs = Vec::new();
            for _ in 0..n {
                let data = random_toric_data_on(spec, &mut rng, base.rays().to_vec())?;
                pairs.push(nested_pair_from(&mut rng, spec, &data)?);
            }
            if statement == "loss-mixed" {
                check_loss_mixed(&pairs, ray)
            } else {
                Ok(vec![check_loss_product(&pairs, ray)?])
            }
        }
        "alpha-t-mixed" => {
            let base = random_toric_data(spec, &mut rng)?;
            let ray = rng.random_range(0..base.rays().len());
            let mut bodies = Vec::new();
            for _ in 0..n {
                let data = random_toric_data_on(spec, &mut rng, base.rays().to_vec())?;
                let p = newton_polytope(&data)?;
                let t = random_subbody(&mut rng, &p, spec.vertex_budget, h)?;
                bodies.push(NewtonBody::new(data, t)?);
            }
            check_alpha_t_mixed(&bodies, ray)
        }
        "concave-integral" => {
            let f = random_concave_function(&mut rng, 4, h)?;
            let t0 = f.end() * Rat::new(rng.random_range(1..=h).into(), (h + 1).into());
            Ok(vec![check_concave_integral(&f, &t0, n)?])
        }
        "slice-bound" => {
            let p = random_polytope(spec, &mut rng)?;
            let u = random_primitive(&mut rng, n, 2);
            let a = p.support_value_int(&u)? - p.min_pairing(&u)?;
            let t0 = random_fraction(&mut rng, h) * a;
            Ok(vec![check_slice_lower_bound(&p, &u, &t0)?])
        }
        "ratio-monotone" => {
            let p = random_polytope(spec, &mut rng)?;
            let q = random_subbody(&mut rng, &p, spec.vertex_budget, h)?;
            let u = random_primitive(&mut rng, n, 2);
            check_ratio_monotone(&p, &q, &u, opts.grid)
        }
        "rs" => {
            let rays = vec![vec![1.into()], vec![(-1).into()]];
            let data = random_toric_data_on(spec, &mut rng, rays)?;
            let p = newton_polytope(&data)?;
            let outer = random_subbody(&mut rng, &p, 2, h)?;
            let inner = random_subbody(&mut rng, &outer, 2, h)?;
            let t_prime = NewtonBody::new(data.clone(), outer)?;
            let t = NewtonBody::new(data, inner)?;
            Ok(vec![riemann_surface_difference(&t, &t_prime)?])
        }
        "lelong-additive" => {
            let d1 = random_toric_data(spec, &mut rng)?;
            let d2 = random_toric_data_on(spec, &mut rng, d1.rays().to_vec())?;
            let ray = rng.random_range(0..d1.rays().len());
            let a = NewtonBody::new(d1.clone(), random_subbody(&mut rng, &newton_polytope(&d1)?, spec.vertex_budget, h)?)?;
            let b = NewtonBody::new(d2.clone(), random_subbody(&mut rng, &newton_polytope(&d2)?, spec.vertex_budget, h)?)?;
            let sum = a.add(&b)?;
            let inputs = json!({"a": a.to_json(), "b": b.to_json(), "ray": ray});
            Ok(vec![Report::exact(
                "lelong-additive",
                digest(&inputs),
                lelong_number(&sum, ray)?,
                lelong_number(&a, ray)? + lelong_number(&b, ray)?,
                Relation::Eq,
            )])
        }
        "lelong-monotone" => {
            let data = random_toric_data(spec, &mut rng)?;
            let (t, s) = nested_pair_from(&mut rng, spec, &data)?;
            let mut worst: Option<Rat> = None;
            for ray in 0..data.rays().len() {
                let d = lelong_number(&t, ray)? - lelong_number(&s, ray)?;
                if worst.as_ref().is_none_or(|w| d < *w) {
                    worst = Some(d);
                }
            }
            let inputs = json!({"t": t.to_json(), "s": s.to_json()});
            Ok(vec![Report::exact(
                "lelong-monotone",
                digest(&inputs),
                worst.unwrap_or_else(Rat::zero),
                Rat::zero(),
                Relation::Ge,
            )
            .with_note("minimum over rays of nu(T) - nu(S)")])
        }
        "width-shift" | "width-normalize" | "width-scale" => {
            let data = random_toric_data(spec, &mut rng)?;
            let ray = rng.random_range(0..data.rays().len());
            let w = nu_max_and_width(&data, ray)?;
            let param = Rat::new(rng.random_range(1..=h).into(), rng.random_range(1..=4).into());
            let inputs = json!({"ambient": data.to_json(), "ray": ray, "param": fmt_rat(&param)});
            let (lhs, rhs) = match statement {
                "width-shift" => (nu_max_and_width(&data.shift_coeff(ray, &param)?, ray)?.nu_max - &param, w.nu_max),
                "width-normalize" => (nu_max_and_width(&data.shift_coeff(ray, &-&w.nu)?, ray)?.width, w.width),
                _ => (nu_max_and_width(&data.scale(&param)?, ray)?.nu_max, &param * w.nu_max),
            };
            Ok(vec![Report::exact(statement, digest(&inputs), lhs, rhs, Relation::Eq)])
        }
        _ => unreachable!("statement validated"),
    }
}
