//! Rational scalars and the small amount of integer plumbing shared by
//! every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeometryError;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// A point or direction in `M_R` / `N_R` with rational coordinates.
pub type Point = Vec<Rat>;

/// An integer vector, used for facet normals and ray generators.
pub type IntVector = Vec<BigInt>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn point(coords: &[(i64, i64)]) -> Point {
    coords.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn int_point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| int(c)).collect()
}

pub fn int_vector(coords: &[i64]) -> IntVector {
    coords.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn to_rat_vector(v: &[BigInt]) -> Point {
    v.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, GeometryError> {
    let t = s.trim();
    let bad = || GeometryError::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator and denominator both overflow f64: scale down first.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_rat(n: usize) -> Rat {
    Rat::from_integer(factorial(n))
}

pub fn pow(r: &Rat, e: usize) -> Rat {
    num_traits::pow(r.clone(), e)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Rat], b: &[BigInt]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !y.is_zero() {
            acc += x * Rat::from_integer(y.clone());
        }
    }
    acc
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

/// Scales a nonzero rational vector to the unique primitive integer vector
/// pointing the same way.
pub fn primitive_direction(v: &[Rat]) -> Option<IntVector> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntVector = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = gcd_all(&scaled);
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert_eq!(fmt_rat(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn primitive_direction_scales() {
        assert_eq!(primitive_direction(&[rat(1, 2), rat(1, 3)]).unwrap(), int_vector(&[3, 2]));
        assert_eq!(primitive_direction(&[int(-4), int(0)]).unwrap(), int_vector(&[-1, 0]));
        assert!(primitive_direction(&[int(0)]).is_none());
    }

    #[test]
    fn huge_ratio_to_float() {
        let big = BigInt::from(10).pow(400);
        let r = Rat::new(big.clone() * 3, big * 2);
        assert!((to_f64(&r) - 1.5).abs() < 1e-12);
    }
}
