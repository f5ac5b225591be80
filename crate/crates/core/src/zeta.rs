//! Closed-point counts and zeta products in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::ClosedPoint;

pub fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `a_e = (1/e) Σ_{d | e} μ(e/d) N_d`, the number of closed points of degree
/// `e`, from the point counts `N_1..N_E`.
pub fn mobius_invert(counts: &[u64]) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(counts.len());
    for e in 1..=counts.len() as u64 {
        let mut acc: i128 = 0;
        for d in 1..=e {
            if e % d == 0 {
                acc += mobius(e / d) as i128 * counts[d as usize - 1] as i128;
            }
        }
        if acc < 0 || acc % e as i128 != 0 {
            return Err(Error::Invalid(format!(
                "point counts are inconsistent: degree {e} gives {acc}/{e} closed points"
            )));
        }
        out.push((acc / e as i128) as u64);
    }
    Ok(out)
}

/// Inverse of [`mobius_invert`]: `N_e = Σ_{d | e} d a_d`.
pub fn point_counts_from_closed(a: &[u64]) -> Vec<u64> {
    (1..=a.len() as u64)
        .map(|e| (1..=e).filter(|d| e % d == 0).map(|d| d * a[d as usize - 1]).sum())
        .collect()
}

/// `#P^n(F_{q^e}) = Σ_{i<=n} q^{ie}` for `e = 1..=e_max`.
pub fn pn_point_counts(n: u32, q: u64, e_max: u32) -> Vec<u64> {
    (1..=e_max)
        .map(|e| (0..=n).map(|i| q.pow(i * e)).sum())
        .collect()
}

fn q_pow_neg(q: u64, e: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(e as u32))
}

/// `1 - q^{-e}`.
pub fn local_factor(q: u64, e: u64) -> BigRational {
    BigRational::one() - q_pow_neg(q, e)
}

/// A truncated inverse zeta product `Π_{e<=r} (1 - q^{-se})^{a_e}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaTruncation {
    pub q: u64,
    pub s: u32,
    pub r: usize,
    pub counts: Vec<u64>,
    pub value: BigRational,
}

impl ZetaTruncation {
    pub fn new(counts: &[u64], q: u64, s: u32, r: usize) -> Result<Self> {
        Ok(ZetaTruncation {
            q,
            s,
            r,
            counts: counts[..r.min(counts.len())].to_vec(),
            value: zeta_inv_truncated(counts, q, s, r)?,
        })
    }
}

/// `Π_{deg x <= r} (1 - q^{-s deg x})` from the closed point counts `a_1..`.
pub fn zeta_inv_truncated(counts: &[u64], q: u64, s: u32, r: usize) -> Result<BigRational> {
    if s == 0 {
        return Err(Error::Invalid("s must be positive".into()));
    }
    if r > counts.len() {
        return Err(Error::Invalid(format!(
            "truncation degree {r} exceeds the {} known counts",
            counts.len()
        )));
    }
    let mut acc = BigRational::one();
    for (i, &a) in counts[..r].iter().enumerate() {
        let f = local_factor(q, s as u64 * (i as u64 + 1));
        acc *= pow(&f, a);
    }
    Ok(acc)
}

fn pow(base: &BigRational, e: u64) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

/// `ζ_{P^n}(s)^{-1} = Π_{i=0}^{n} (1 - q^{i-s})`, valid for `s > n`.
pub fn zeta_inv_pn(n: u32, q: u64, s: u32) -> Result<BigRational> {
    if s <= n {
        return Err(Error::Invalid(format!(
            "ζ_P^{n}(s) diverges at s = {s}; need s > {n}"
        )));
    }
    Ok((0..=n).fold(BigRational::one(), |acc, i| acc * local_factor(q, (s - i) as u64)))
}

/// `Π_{x in S} (1 - #κ(x)^{-1})`.
pub fn avoidance_factor(points: &[ClosedPoint], q: u64) -> BigRational {
    avoidance_factor_degrees(points.iter().map(|p| p.degree()), q)
}

pub fn avoidance_factor_degrees(degrees: impl IntoIterator<Item = u32>, q: u64) -> BigRational {
    degrees
        .into_iter()
        .fold(BigRational::one(), |acc, e| acc * local_factor(q, e as u64))
}

/// `Π_{x in S} (1 - q^{-s deg x})`, the inverse zeta factor of a finite set.
pub fn zeta_inv_finite(degrees: impl IntoIterator<Item = u32>, q: u64, s: u32) -> BigRational {
    degrees
        .into_iter()
        .fold(BigRational::one(), |acc, e| acc * local_factor(q, s as u64 * e as u64))
}

/// `ζ_{P^n - Y}(s)^{-1}` for a finite removed set `Y`.
pub fn zeta_inv_pn_minus(n: u32, q: u64, s: u32, removed: impl IntoIterator<Item = u32>) -> Result<BigRational> {
    let whole = zeta_inv_pn(n, q, s)?;
    let part = zeta_inv_finite(removed, q, s);
    if part.is_zero() {
        return Err(Error::Invalid("degenerate removed set".into()));
    }
    Ok(whole / part)
}

/// Numerator and denominator as machine integers when they fit.
pub fn as_pair(r: &BigRational) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}

pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
