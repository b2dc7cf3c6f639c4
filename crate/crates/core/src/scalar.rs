//! Evaluation contexts for polynomial specializations.
//!
//! A [`Ring`] bundles the arithmetic of one scalar kind together with the
//! value of the parameter `q`: floats at a numeric `q`, exact rationals at a
//! rational `q`, or truncated power series where `q` is the formal variable.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;

pub trait Ring: Sync {
    type Elem: Clone + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Pivot preference for elimination; `0` marks a non-invertible element.
    fn pivot_score(&self, a: &Self::Elem) -> f64;
    /// The value of `q` in this context.
    fn q(&self) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, e: usize) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// `f64` arithmetic at a fixed numeric `q`.
#[derive(Clone, Copy, Debug)]
pub struct FloatRing {
    pub q: f64,
}

impl Ring for FloatRing {
    type Elem = f64;
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn from_int(&self, n: i64) -> f64 {
        n as f64
    }
    fn try_inv(&self, a: &f64) -> Option<f64> {
        (*a != 0.0).then(|| 1.0 / a)
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }
    fn pivot_score(&self, a: &f64) -> f64 {
        a.abs()
    }
    fn q(&self) -> f64 {
        self.q
    }
}

/// Exact rational arithmetic at a rational `q`.
#[derive(Clone, Debug)]
pub struct RationalRing {
    pub q: BigRational,
}

impl Ring for RationalRing {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn try_inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn pivot_score(&self, a: &BigRational) -> f64 {
        if a.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn q(&self) -> BigRational {
        self.q.clone()
    }
}

/// Truncated power series in the formal variable `q`.
#[derive(Clone, Copy, Debug)]
pub struct SeriesRing {
    pub order: usize,
}

impl SeriesRing {
    pub fn constant(&self, c: BigRational) -> QSeries {
        QSeries::constant(c, self.order)
    }
}

impl Ring for SeriesRing {
    type Elem = QSeries;
    fn zero(&self) -> QSeries {
        QSeries::zero(self.order)
    }
    fn one(&self) -> QSeries {
        QSeries::one(self.order)
    }
    fn add(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a + b
    }
    fn sub(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a - b
    }
    fn mul(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a * b
    }
    fn neg(&self, a: &QSeries) -> QSeries {
        -a
    }
    fn from_int(&self, n: i64) -> QSeries {
        QSeries::constant(BigRational::from_integer(BigInt::from(n)), self.order)
    }
    fn try_inv(&self, a: &QSeries) -> Option<QSeries> {
        a.inv()
    }
    fn is_zero(&self, a: &QSeries) -> bool {
        a.is_zero()
    }
    fn pivot_score(&self, a: &QSeries) -> f64 {
        if a.coeff(0).is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn q(&self) -> QSeries {
        QSeries::var(self.order)
    }
}

/// `(q;q)_n = ∏_{j=1}^n (1 - q^j)` in the ring.
pub fn q_factorial<R: Ring>(ring: &R, n: usize) -> R::Elem {
    let q = ring.q();
    let one = ring.one();
    let mut acc = ring.one();
    let mut qj = ring.one();
    for _ in 0..n {
        qj = ring.mul(&qj, &q);
        acc = ring.mul(&acc, &ring.sub(&one, &qj));
    }
    acc
}

/// Table of Gaussian binomials `[n choose k]_q` for `n <= nmax`, built with
/// the division-free recurrence `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binomial_table<R: Ring>(ring: &R, nmax: usize) -> Vec<Vec<R::Elem>> {
    let q = ring.q();
    let qpow: Vec<R::Elem> = (0..=nmax).map(|k| ring.pow(&q, k)).collect();
    let mut rows: Vec<Vec<R::Elem>> = vec![vec![ring.one()]];
    for n in 1..=nmax {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let left = if k > 0 {
                prev[k - 1].clone()
            } else {
                ring.zero()
            };
            let right = if k < n {
                ring.mul(&qpow[k], &prev[k])
            } else {
                ring.zero()
            };
            row.push(ring.add(&left, &right));
        }
        rows.push(row);
    }
    rows
}

/// Determinant of a square matrix over any commutative ring. Uses pivoted
/// elimination while invertible pivots exist and falls back to division-free
/// cofactor expansion (memoized over column subsets) otherwise.
pub fn determinant<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if let Some(d) = eliminate(ring, m) {
        return d;
    }
    cofactor_det(ring, m)
}

fn eliminate<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Option<R::Elem> {
    let n = m.len();
    let mut a: Vec<Vec<R::Elem>> = m.to_vec();
    let mut det = ring.one();
    for col in 0..n {
        let (best, score) = (col..n)
            .map(|r| (r, ring.pivot_score(&a[r][col])))
            .fold((col, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if score == 0.0 {
            // Column without an invertible entry: zero column means det 0,
            // otherwise elimination cannot proceed in this ring.
            if (col..n).all(|r| ring.is_zero(&a[r][col])) {
                return Some(ring.zero());
            }
            return None;
        }
        if best != col {
            a.swap(best, col);
            det = ring.neg(&det);
        }
        let inv = ring.try_inv(&a[col][col])?;
        det = ring.mul(&det, &a[col][col]);
        for r in col + 1..n {
            if ring.is_zero(&a[r][col]) {
                continue;
            }
            let factor = ring.mul(&a[r][col], &inv);
            for c in col..n {
                let t = ring.mul(&factor, &a[col][c]);
                a[r][c] = ring.sub(&a[r][c], &t);
            }
        }
    }
    Some(det)
}

fn cofactor_det<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    assert!(n <= 20, "cofactor expansion limited to n <= 20");
    // memo[mask] = det of rows (n - popcount(mask))..n restricted to the
    // columns in mask.
    let size = 1usize << n;
    let mut memo: Vec<Option<R::Elem>> = vec![None; size];
    memo[0] = Some(ring.one());
    for mask in 1..size {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = ring.zero();
        let mut sign_pos = true;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !ring.is_zero(entry) {
                let sub = memo[mask & !(1 << c)].as_ref().unwrap();
                let t = ring.mul(entry, sub);
                acc = if sign_pos {
                    ring.add(&acc, &t)
                } else {
                    ring.sub(&acc, &t)
                };
            }
            sign_pos = !sign_pos;
        }
        memo[mask] = Some(acc);
    }
    memo[size - 1].take().unwrap()
}

/// Parses an exact rational from `p/q`, an integer, or a finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |reason: &str| Error::Parse {
        flag: "rational".into(),
        value: s.into(),
        reason: reason.into(),
    };
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| bad("numerator is not an integer"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad("expected p/q, an integer or a decimal"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().unwrap()
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{rat, ratio};

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert!(parse_rational("0.3x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn determinant_paths_agree() {
        let ring = RationalRing { q: ratio(1, 2) };
        let m: Vec<Vec<BigRational>> = vec![
            vec![rat(2), rat(1), rat(0)],
            vec![rat(1), rat(3), rat(1)],
            vec![rat(0), rat(1), rat(4)],
        ];
        assert_eq!(determinant(&ring, &m), rat(18));
        assert_eq!(cofactor_det(&ring, &m), rat(18));
        let singular = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(determinant(&ring, &singular), rat(0));
    }

    #[test]
    fn series_determinant_falls_back_to_cofactors() {
        let ring = SeriesRing { order: 4 };
        let q = ring.q();
        // [[q, 1], [1, q]] has no unit in column 0 after choosing... det = q^2 - 1
        let m = vec![vec![q.clone(), ring.one()], vec![ring.one(), q.clone()]];
        let d = determinant(&ring, &m);
        assert_eq!(d.coeffs_i64(), vec![-1, 0, 1, 0, 0]);
        let m = vec![vec![q.clone(), q.clone()], vec![q.clone(), q.shift(1)]];
        let d = determinant(&ring, &m);
        assert_eq!(d.coeffs_i64(), vec![0, 0, -1, 1, 0]);
    }

    #[test]
    fn gaussian_binomials() {
        let ring = SeriesRing { order: 6 };
        let t = q_binomial_table(&ring, 4);
        assert_eq!(t[4][2].coeffs_i64(), vec![1, 1, 2, 1, 1, 0, 0]);
        let f = FloatRing { q: 0.0 };
        let t = q_binomial_table(&f, 5);
        assert_eq!(t[5][2], 1.0);
    }
}
