use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{GeometryError, Result};
use crate::geometry::json::{int_vector_to_json, polytope_to_json};
use crate::geometry::{Halfspace, Polytope};
use crate::mixed_volume::{mixed_volume, PolytopeTuple};
use crate::piecewise::{integrate_pieces, normalize_knots, PiecewiseLinear};
use crate::rat::{factorial_rat, fmt_rat, int, is_primitive, min_rat, pow, to_f64, Point, Rat};
use crate::report::{digest, Relation, Report};
use crate::toric::{
    current_volume, lelong_number, mixed_restricted_volume, nu_max_and_width, restricted_volume, NewtonBody,
    ToricData,
};

/// Directional tolerance for checks involving fractional powers.
pub const FLOAT_TOL: f64 = 1e-9;

/// Half-width of the accepted Monte-Carlo band, in standard errors.
pub const MC_SIGMAS: f64 = 4.0;

fn pair_inputs(pairs: &[(NewtonBody, NewtonBody)], ray: usize) -> Value {
    json!({
        "pairs": pairs.iter().map(|(t, s)| json!({"t": t.to_json(), "s": s.to_json()})).collect::<Vec<_>>(),
        "ray": ray,
    })
}

fn rat_power_f64(r: &Rat, e: f64) -> f64 {
    to_f64(r).powf(e)
}

pub fn check_res_vol_lower_bound(ambient: &ToricData, ray: usize, t: &Rat) -> Result<Report> {
    let n = ambient.dim();
    let w = nu_max_and_width(ambient, ray)?;
    if *t < w.nu || *t > w.nu_max {
        return Err(GeometryError::OutOfRange(format!(
            "t = {} outside [{}, {}]",
            fmt_rat(t),
            fmt_rat(&w.nu),
            fmt_rat(&w.nu_max)
        )));
    }
    let full = NewtonBody::full(ambient.clone())?;
    let lhs = restricted_volume(&full, ray, t)?.value;
    let gap = min_rat(&(t - &w.nu), &(&w.nu_max - t)).clone();
    let rhs = current_volume(&full) / pow(&w.width, n) * pow(&gap, n - 1);
    let inputs = json!({"ambient": ambient.to_json(), "ray": ray, "t": fmt_rat(t)});
    Ok(Report::exact("res-vol", digest(&inputs), lhs, rhs, Relation::Ge))
}

fn check_nested(t: &NewtonBody, s: &NewtonBody) -> Result<()> {
    t.ambient().check_same_fan(s.ambient())?;
    if t.ambient() != s.ambient() {
        return Err(GeometryError::InvalidToricData("a nested pair must share its class".into()));
    }
    if !s.body().contains_body(t.body())? {
        return Err(GeometryError::ContainmentViolated("Delta(T) is not contained in Delta(S)".into()));
    }
    Ok(())
}

/// `vol S - vol T >= (nu(T) - nu(S))^n vol S / wid^n`.
pub fn check_loss_single(t: &NewtonBody, s: &NewtonBody, ray: usize) -> Result<Report> {
    check_nested(t, s)?;
    let n = s.dim();
    let w = nu_max_and_width(s.ambient(), ray)?;
    let dnu = lelong_number(t, ray)? - lelong_number(s, ray)?;
    let vol_s = current_volume(s);
    let lhs = &vol_s - current_volume(t);
    let rhs = pow(&dnu, n) * vol_s / pow(&w.width, n);
    let inputs = pair_inputs(&[(t.clone(), s.clone())], ray);
    Ok(Report::exact("loss-single", digest(&inputs), lhs, rhs, Relation::Ge))
}

fn check_pairs(pairs: &[(NewtonBody, NewtonBody)]) -> Result<usize> {
    let (t0, _) = pairs.first().ok_or(GeometryError::EmptyInput)?;
    let n = t0.dim();
    if n < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: n });
    }
    if pairs.len() != n {
        return Err(GeometryError::WrongArity { expected: n, found: pairs.len() });
    }
    for (t, s) in pairs {
        check_nested(t, s)?;
        t0.ambient().check_same_fan(t.ambient())?;
    }
    Ok(n)
}

fn scaled_mixed_volume(bodies: Vec<Polytope>) -> Result<Rat> {
    let n = bodies[0].dim();
    Ok(factorial_rat(n) * mixed_volume(&PolytopeTuple::new(bodies)?)?)
}

/// Mixed loss of mass with the `2^{1-n}` constant. Returns the floating
/// report followed by the exact restatement with both sides raised to the
/// power `n - 1`.
pub fn check_loss_mixed(pairs: &[(NewtonBody, NewtonBody)], ray: usize) -> Result<Vec<Report>> {
    let n = check_pairs(pairs)?;
    let lhs = scaled_mixed_volume(pairs.iter().map(|(_, s)| s.body().clone()).collect())?
        - scaled_mixed_volume(pairs.iter().map(|(t, _)| t.body().clone()).collect())?;
    let mut dnu = Rat::one();
    for (t, s) in pairs {
        dnu *= lelong_number(t, ray)? - lelong_number(s, ray)?;
    }
    let mut factors = Vec::new();
    for (j, (_, s)) in pairs.iter().enumerate().skip(1) {
        let vol = current_volume(s);
        if !vol.is_positive() {
            return Err(GeometryError::OutOfRange(format!("vol S_{} is zero", j + 1)));
        }
        let w = nu_max_and_width(s.ambient(), ray)?;
        let d = w.nu_max - lelong_number(s, ray)?;
        factors.push(vol / pow(&d, n));
    }
    let half = Rat::new(BigInt::one(), BigInt::from(2).pow(n as u32 - 1));
    let e = 1.0 / (n as f64 - 1.0);
    let rhs_f = to_f64(&(&half * &dnu)) * factors.iter().map(|f| rat_power_f64(f, e)).product::<f64>();
    let inputs = digest(&pair_inputs(pairs, ray));
    let float = Report::float_ge("loss-mixed", inputs.clone(), to_f64(&lhs), rhs_f, FLOAT_TOL);
    let rhs = pow(&(half * dnu), n - 1) * factors.into_iter().product::<Rat>();
    let exact = Report::exact("loss-mixed", inputs, pow(&lhs, n - 1), rhs, Relation::Ge)
        .with_note(format!("both sides raised to the power {}", n - 1));
    Ok(vec![float, exact])
}

/// Product form: `prod(nu(T_i) - nu(S_i))` times the largest
/// `vol_{X|D}(S_j : j != i) / prod_{j != i} wid_j`.
pub fn check_loss_product(pairs: &[(NewtonBody, NewtonBody)], ray: usize) -> Result<Report> {
    let n = check_pairs(pairs)?;
    let lhs = scaled_mixed_volume(pairs.iter().map(|(_, s)| s.body().clone()).collect())?
        - scaled_mixed_volume(pairs.iter().map(|(t, _)| t.body().clone()).collect())?;
    let mut dnu = Rat::one();
    let mut widths = Vec::new();
    for (t, s) in pairs {
        dnu *= lelong_number(t, ray)? - lelong_number(s, ray)?;
        widths.push(nu_max_and_width(s.ambient(), ray)?.width);
    }
    let mut best = Rat::zero();
    let mut best_i = 0;
    for i in 0..n {
        let rest: Vec<NewtonBody> =
            pairs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (_, s))| s.clone()).collect();
        let w: Rat = widths.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w.clone()).product();
        let v = mixed_restricted_volume(&rest, ray)? / w;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let rhs = best * dnu;
    Ok(Report::exact("loss-product", digest(&pair_inputs(pairs, ray)), lhs, rhs, Relation::Ge)
        .with_note(format!("omitted index {}", best_i + 1)))
}

/// `<alpha_1..alpha_n> - vol(T_1..T_n)` against the `c = 1/2` bound. Floating
/// report first, then the exact restatement raised to the power `n - 1`.
pub fn check_alpha_t_mixed(bodies: &[NewtonBody], ray: usize) -> Result<Vec<Report>> {
    let first = bodies.first().ok_or(GeometryError::EmptyInput)?;
    let n = first.dim();
    if n < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: n });
    }
    if bodies.len() != n {
        return Err(GeometryError::WrongArity { expected: n, found: bodies.len() });
    }
    let mut fulls = Vec::new();
    for b in bodies {
        first.ambient().check_same_fan(b.ambient())?;
        fulls.push(NewtonBody::full(b.ambient().clone())?);
    }
    let lhs = scaled_mixed_volume(fulls.iter().map(|f| f.body().clone()).collect())?
        - scaled_mixed_volume(bodies.iter().map(|b| b.body().clone()).collect())?;
    let mut dnu = Rat::one();
    let mut terms = Vec::new();
    for (b, f) in bodies.iter().zip(&fulls) {
        dnu *= lelong_number(b, ray)? - lelong_number(f, ray)?;
        let w = nu_max_and_width(b.ambient(), ray)?;
        terms.push(current_volume(f) / pow(&w.width, n));
    }
    let products: Vec<Rat> = (0..n)
        .map(|k| terms.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t.clone()).product())
        .collect();
    let best = products.iter().max().expect("n >= 2").clone();
    let half = Rat::new(BigInt::one(), BigInt::from(2).pow(n as u32 - 1));
    let e = 1.0 / (n as f64 - 1.0);
    let rhs_f = to_f64(&(&half * &dnu)) * rat_power_f64(&best, e);
    let inputs = json!({"bodies": bodies.iter().map(NewtonBody::to_json).collect::<Vec<_>>(), "ray": ray});
    let d = digest(&inputs);
    let float = Report::float_ge("alpha-t-mixed", d.clone(), to_f64(&lhs), rhs_f, FLOAT_TOL);
    let rhs = pow(&(half * dnu), n - 1) * best;
    let exact = Report::exact("alpha-t-mixed", d, pow(&lhs, n - 1), rhs, Relation::Ge)
        .with_note(format!("both sides raised to the power {}", n - 1));
    Ok(vec![float, exact])
}

/// `int_0^A f^n <= f(t0)^n A^{n+1} / ((n+1) min(t0, A - t0)^n)`.
pub fn check_concave_integral(f: &PiecewiseLinear, t0: &Rat, n: usize) -> Result<Report> {
    if !f.start().is_zero() {
        return Err(GeometryError::InvalidKnots("the domain must start at 0".into()));
    }
    if !f.is_concave() {
        return Err(GeometryError::InvalidKnots("knot data is not concave".into()));
    }
    if !f.is_nonnegative() {
        return Err(GeometryError::InvalidKnots("knot data is negative somewhere".into()));
    }
    let a = f.end().clone();
    if !t0.is_positive() || *t0 >= a {
        return Err(GeometryError::OutOfRange(format!("t0 = {} outside (0, {})", fmt_rat(t0), fmt_rat(&a))));
    }
    let lhs = f.integrate_power(n, &a)?;
    let m = min_rat(t0, &(&a - t0)).clone();
    let rhs = pow(&f.eval(t0)?, n) * pow(&a, n + 1) / int(n as i64 + 1) / pow(&m, n);
    let inputs = json!({
        "knots": f.knots().iter().map(|(x, y)| [fmt_rat(x), fmt_rat(y)]).collect::<Vec<_>>(),
        "t0": fmt_rat(t0),
        "n": n,
    });
    Ok(Report::exact("concave-integral", digest(&inputs), lhs, rhs, Relation::Le))
}

fn support_range(p: &Polytope, u: &[BigInt]) -> Result<(Rat, Rat)> {
    if !is_primitive(u) {
        return Err(GeometryError::NotPrimitive(format!("{u:?}")));
    }
    Ok((p.min_pairing(u)?, p.support_value_int(u)?))
}

fn slice_volume(p: &Polytope, u: &[BigInt], level: &Rat) -> Result<Rat> {
    Ok(p.lattice_slice(u, level)?.map_or_else(Rat::zero, |s| s.volume().clone()))
}

/// `vol{y : (t0, y) in P} >= (n / A^n) vol P min(t0, A - t0)^{n-1}`, heights
/// measured from the bottom of `P` along `u`.
pub fn check_slice_lower_bound(p: &Polytope, u: &[BigInt], t0: &Rat) -> Result<Report> {
    let n = p.dim();
    if n < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: n });
    }
    let (lo, hi) = support_range(p, u)?;
    let a = &hi - &lo;
    if t0.is_negative() || *t0 > a {
        return Err(GeometryError::OutOfRange(format!("t0 = {} outside [0, {}]", fmt_rat(t0), fmt_rat(&a))));
    }
    let lhs = slice_volume(p, u, &(&lo + t0))?;
    let rhs = if a.is_zero() {
        Rat::zero()
    } else {
        int(n as i64) / pow(&a, n) * p.volume() * pow(min_rat(t0, &(&a - t0)), n - 1)
    };
    let inputs = json!({"p": polytope_to_json(p), "u": int_vector_to_json(u), "t0": fmt_rat(t0)});
    Ok(Report::exact("slice-bound", digest(&inputs), lhs, rhs, Relation::Ge))
}

fn slice_integral(p: &Polytope, u: &[BigInt], knots: &[Rat], lo: &Rat, top: &Rat) -> Result<Rat> {
    let mut ks = vec![lo.clone()];
    ks.extend(knots.iter().filter(|k| *k > lo && *k < top).cloned());
    ks.push(top.clone());
    integrate_pieces(&ks, p.dim() - 1, |t| slice_volume(p, u, t))
}

/// For `Q ⊆ P`: `vol P - vol Q >= vol P ((min_Q - min_P) / (max_P - min_P))^n`,
/// and `s -> int_0^s (slice volume) / s^n` is nonincreasing on a grid of
/// `grid` points. Returns the inequality report and the grid report.
pub fn check_ratio_monotone(p: &Polytope, q: &Polytope, u: &[BigInt], grid: usize) -> Result<Vec<Report>> {
    let n = p.dim();
    if n < 2 {
        return Err(GeometryError::DimensionTooSmall { min: 2, found: n });
    }
    if !p.contains_body(q)? {
        return Err(GeometryError::ContainmentViolated("Q is not contained in P".into()));
    }
    let (lo, hi) = support_range(p, u)?;
    let lo_q = q.min_pairing(u)?;
    let a = &hi - &lo;
    let inputs = digest(&json!({"p": polytope_to_json(p), "q": polytope_to_json(q), "u": int_vector_to_json(u)}));
    let lhs = p.volume() - q.volume();
    let rhs = if a.is_zero() { Rat::zero() } else { p.volume() * pow(&((&lo_q - &lo) / &a), n) };
    let first = Report::exact("ratio-volume", inputs.clone(), lhs, rhs, Relation::Ge);
    if a.is_zero() || grid < 2 {
        let grid_report = Report::exact("ratio-monotone", inputs, Rat::zero(), Rat::zero(), Relation::Ge)
            .with_note("degenerate grid");
        return Ok(vec![first, grid_report]);
    }
    let knots = normalize_knots(p.vertices().iter().map(|v| crate::rat::dot_int(v, u)));
    let mut ratios = Vec::with_capacity(grid);
    for k in 1..=grid {
        let s = &a * int(k as i64) / int(grid as i64);
        ratios.push(slice_integral(p, u, &knots, &lo, &(&lo + &s))? / pow(&s, n));
    }
    let worst = ratios.windows(2).map(|w| &w[0] - &w[1]).min().expect("grid >= 2");
    let second = Report::exact("ratio-monotone", inputs, worst, Rat::zero(), Relation::Ge)
        .with_note(format!("grid={grid}"));
    Ok(vec![first, second])
}

/// The simplex with vertices `0`, `e_1` and `e_1 + eps e_i` for `i > 1`.
pub fn count_su_simplex(n: usize, eps: &Rat) -> Result<Polytope> {
    let mut pts: Vec<Point> = vec![vec![Rat::zero(); n]];
    let mut e1 = vec![Rat::zero(); n];
    e1[0] = Rat::one();
    pts.push(e1.clone());
    for i in 1..n {
        let mut v = e1.clone();
        v[i] = eps.clone();
        pts.push(v);
    }
    Polytope::from_points(pts)
}

/// For each `t`: the exact truncation loss `vol Q - vol Q_t` against
/// `t^n eps^{n-1} / n!`, and the implied constant against `eps^{n-1} / n!`.
pub fn reproduce_count_su(n: usize, eps: &Rat, t_grid: &[Rat]) -> Result<Vec<Report>> {
    if !(2..=5).contains(&n) {
        return Err(GeometryError::OutOfRange(format!("n = {n} outside 2..=5")));
    }
    if !eps.is_positive() {
        return Err(GeometryError::OutOfRange(format!("eps = {} must be positive", fmt_rat(eps))));
    }
    let q = count_su_simplex(n, eps)?;
    let constant = pow(eps, n - 1) / factorial_rat(n);
    let mut e1 = vec![BigInt::zero(); n];
    e1[0] = BigInt::one();
    let mut out = Vec::new();
    for t in t_grid {
        if !t.is_positive() || *t >= Rat::one() {
            return Err(GeometryError::OutOfRange(format!("t = {} outside (0, 1)", fmt_rat(t))));
        }
        let mut hs: Vec<Halfspace> = q.halfspaces().to_vec();
        hs.push(Halfspace::new(e1.clone(), t.clone()));
        let q_t = Polytope::from_halfspaces(&hs, n)?;
        let diff = q.volume() - q_t.volume();
        let tn = pow(t, n);
        let inputs = digest(&json!({"n": n, "eps": fmt_rat(eps), "t": fmt_rat(t)}));
        let c = &diff / &tn;
        out.push(
            Report::exact("count-su", inputs.clone(), diff, &tn * &constant, Relation::Eq)
                .with_note(format!("t={} c={}", fmt_rat(t), fmt_rat(&c))),
        );
        out.push(
            Report::exact("count-su-constant", inputs, c, constant.clone(), Relation::Eq)
                .with_note(format!("t={}", fmt_rat(t))),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub estimate: f64,
    pub stderr: f64,
}

/// Rejection sampling in the bounding box with the H-representation
/// membership test.
pub fn monte_carlo_volume(p: &Polytope, samples: u64, seed: u64) -> Result<MonteCarlo> {
    if samples == 0 {
        return Err(GeometryError::OutOfRange("samples must be positive".into()));
    }
    if !p.is_full_dimensional() {
        return Ok(MonteCarlo { estimate: 0.0, stderr: 0.0 });
    }
    let (lo, hi) = p.bounding_box();
    let lo: Vec<f64> = lo.iter().map(to_f64).collect();
    let hi: Vec<f64> = hi.iter().map(to_f64).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let rows: Vec<(Vec<f64>, f64)> = p
        .halfspaces()
        .iter()
        .map(|h| (h.normal.iter().map(|x| to_f64(&Rat::from_integer(x.clone()))).collect(), to_f64(&h.offset)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; p.dim()];
    let mut hits = 0u64;
    for _ in 0..samples {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
        }
        if rows.iter().all(|(a, c)| a.iter().zip(&x).map(|(a, x)| a * x).sum::<f64>() >= *c) {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    Ok(MonteCarlo {
        estimate: box_vol * frac,
        stderr: box_vol * (frac * (1.0 - frac) / samples as f64).sqrt(),
    })
}

/// `|estimate - vol P| <= 4 stderr`.
pub fn check_monte_carlo(p: &Polytope, samples: u64, seed: u64) -> Result<Report> {
    let mc = monte_carlo_volume(p, samples, seed)?;
    let exact = to_f64(p.volume());
    let inputs = json!({"p": polytope_to_json(p), "samples": samples, "seed": seed});
    Ok(Report::float_ge("mc-volume", digest(&inputs), MC_SIGMAS * mc.stderr, (mc.estimate - exact).abs(), FLOAT_TOL)
        .with_note(format!("estimate={} stderr={} exact={}", mc.estimate, mc.stderr, fmt_rat(p.volume()))))
}
