//! Exact integration of piecewise-polynomial functions of one rational variable.

use num_traits::Zero;

use crate::error::{GeometryError, Result};
use crate::geometry::linalg::solve;
use crate::rat::{int, pow, Rat};

/// Sorted, deduplicated copy of `knots`.
pub fn normalize_knots(knots: impl IntoIterator<Item = Rat>) -> Vec<Rat> {
    let mut k: Vec<Rat> = knots.into_iter().collect();
    k.sort();
    k.dedup();
    k
}

/// `int_a^b f` for `f` agreeing with a polynomial of degree at most `degree`
/// on the closed interval.
pub fn integrate_polynomial<F>(a: &Rat, b: &Rat, degree: usize, f: &mut F) -> Result<Rat>
where
    F: FnMut(&Rat) -> Result<Rat>,
{
    if a == b {
        return Ok(Rat::zero());
    }
    let h = b - a;
    // interpolate g(s) = f(a + s h) on s = k / degree, then integrate over [0, 1]
    let nodes: Vec<Rat> = if degree == 0 {
        vec![Rat::new(1.into(), 2.into())]
    } else {
        (0..=degree).map(|k| Rat::new(k.into(), degree.into())).collect()
    };
    let values = nodes.iter().map(|s| f(&(a + s * &h))).collect::<Result<Vec<_>>>()?;
    let vander: Vec<Vec<Rat>> = nodes.iter().map(|s| (0..nodes.len()).map(|e| pow(s, e)).collect()).collect();
    let coeffs = solve(&vander, &values).ok_or(GeometryError::Singular)?;
    let unit: Rat = coeffs.iter().enumerate().map(|(e, c)| c / int(e as i64 + 1)).sum();
    Ok(unit * h)
}

/// `int f` over `[knots[0], knots.last()]` where `f` is a polynomial of degree
/// at most `degree` between consecutive knots.
pub fn integrate_pieces<F>(knots: &[Rat], degree: usize, mut f: F) -> Result<Rat>
where
    F: FnMut(&Rat) -> Result<Rat>,
{
    if knots.windows(2).any(|w| w[0] > w[1]) {
        return Err(GeometryError::InvalidKnots("knots must be sorted".into()));
    }
    let mut total = Rat::zero();
    for w in knots.windows(2) {
        total += integrate_polynomial(&w[0], &w[1], degree, &mut f)?;
    }
    Ok(total)
}

/// Piecewise-linear function given by its graph vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    knots: Vec<(Rat, Rat)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(Rat, Rat)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(GeometryError::InvalidKnots("need at least two knots".into()));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(GeometryError::InvalidKnots("abscissae must be strictly increasing".into()));
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn knots(&self) -> &[(Rat, Rat)] {
        &self.knots
    }

    pub fn start(&self) -> &Rat {
        &self.knots[0].0
    }

    pub fn end(&self) -> &Rat {
        &self.knots[self.knots.len() - 1].0
    }

    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        if t < self.start() || t > self.end() {
            return Err(GeometryError::OutOfRange(format!("{t} outside the knot range")));
        }
        let i = self.knots.windows(2).position(|w| *t <= w[1].0).unwrap_or(0);
        let ((x0, y0), (x1, y1)) = (&self.knots[i], &self.knots[i + 1]);
        Ok(y0 + (y1 - y0) * (t - x0) / (x1 - x0))
    }

    /// Slopes are nonincreasing.
    pub fn is_concave(&self) -> bool {
        let slopes: Vec<Rat> =
            self.knots.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect();
        slopes.windows(2).all(|s| s[0] >= s[1])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.knots.iter().all(|(_, y)| *y >= Rat::zero())
    }

    /// `int f^k` over `[start, s]`.
    pub fn integrate_power(&self, k: usize, s: &Rat) -> Result<Rat> {
        let mut xs: Vec<Rat> = self.knots.iter().map(|(x, _)| x.clone()).filter(|x| x < s).collect();
        xs.push(s.clone());
        integrate_pieces(&xs, k, |t| Ok(pow(&self.eval(t)?, k)))
    }
}

/// `(b - a) (sum_j f(a)^j f(b)^{k-j}) / (k + 1)`, the integral of the `k`-th
/// power of the affine function through `(a, fa)` and `(b, fb)`.
pub fn affine_power_integral(a: &Rat, b: &Rat, fa: &Rat, fb: &Rat, k: usize) -> Rat {
    let s: Rat = (0..=k).map(|j| pow(fa, j) * pow(fb, k - j)).sum();
    (b - a) * s / int(k as i64 + 1)
}
