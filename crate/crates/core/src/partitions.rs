//! Integer partitions and the bounded enumerations behind every finite sum.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// A weakly decreasing sequence of positive integers. Trailing zeros are
/// never stored; indexing past the length yields 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition, dropping zero parts. Fails when the nonzero parts
    /// are not weakly decreasing or a zero precedes a nonzero part.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "partition parts must be weakly decreasing and positive: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Single row `(n)`; the empty partition for `n == 0`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based) with implicit trailing zeros.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.part(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first();
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// `m_j` = number of parts equal to `j`, for `j = 1..=first()`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.first()];
        for &p in &self.parts {
            m[p - 1] += 1;
        }
        m
    }

    /// `self ⊂ other` componentwise.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// True iff `rho[i] <= lambda[i]` for every `i`.
pub fn contains(rho: &Partition, lambda: &Partition) -> bool {
    rho.is_contained_in(lambda)
}

/// All partitions with `λ₁ <= max_part` and `ℓ(λ) <= max_length`, in
/// lexicographically descending order (∅ last).
pub fn enumerate(max_part: usize, max_length: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fill_boxed(max_part, max_length, &mut stack, &mut out);
    out
}

fn fill_boxed(max_part: usize, slots: usize, stack: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if slots > 0 {
        for p in (1..=max_part).rev() {
            stack.push(p);
            fill_boxed(p, slots - 1, stack, out);
            stack.pop();
        }
    }
    out.push(Partition {
        parts: stack.clone(),
    });
}

/// Partitions of exactly `n`, optional bounds on the largest part and the
/// length, in lexicographically descending order.
pub fn partitions_of(
    n: usize,
    max_part: Option<usize>,
    max_length: Option<usize>,
) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let cap = max_part.unwrap_or(n).min(n);
    fill_weight(
        n,
        cap,
        max_length.unwrap_or(usize::MAX),
        &mut stack,
        &mut out,
    );
    out
}

fn fill_weight(
    rest: usize,
    cap: usize,
    slots: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if rest == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        stack.push(p);
        fill_weight(rest - p, p, slots - 1, stack, out);
        stack.pop();
    }
}

/// All partitions with `|λ| <= max_weight` satisfying the optional bounds,
/// ordered by weight, then lexicographically descending.
pub fn enumerate_by_weight(
    max_weight: usize,
    max_part: Option<usize>,
    max_length: Option<usize>,
) -> Vec<Partition> {
    (0..=max_weight)
        .flat_map(|w| partitions_of(w, max_part, max_length))
        .collect()
}

/// All `ρ ⊂ λ`, lexicographically descending.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fill_sub(lambda.parts(), 0, usize::MAX, &mut stack, &mut out);
    out
}

fn fill_sub(
    bound: &[usize],
    i: usize,
    prev: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if i < bound.len() {
        for p in (1..=bound[i].min(prev)).rev() {
            stack.push(p);
            fill_sub(bound, i + 1, p, stack, out);
            stack.pop();
        }
    }
    out.push(Partition {
        parts: stack.clone(),
    });
}

/// All `λ ⊇ ρ` with `λ₁ <= max_part` and `ℓ(λ) <= max_length`,
/// lexicographically descending. Empty when `ρ` itself violates the bounds.
pub fn superpartitions(rho: &Partition, max_part: usize, max_length: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if rho.first() > max_part || rho.len() > max_length {
        return out;
    }
    let mut stack = Vec::new();
    fill_super(rho, 0, max_part, max_length, &mut stack, &mut out);
    out
}

fn fill_super(
    rho: &Partition,
    i: usize,
    prev: usize,
    max_length: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    let lo = rho.part(i);
    if i == max_length || (lo == 0 && prev == 0) {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    for p in (lo.max(1)..=prev).rev() {
        stack.push(p);
        fill_super(rho, i + 1, p, max_length, stack, out);
        stack.pop();
    }
    if lo == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
    }
}

/// `Σ_{ν: ν₁ <= cap} q^{|ν|}` truncated mod `q^{order+1}`, by direct
/// enumeration. Equals the series of `1/(q;q)_cap`.
pub fn restricted_weight_series(first_row_cap: usize, order: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for nu in enumerate_by_weight(order, Some(first_row_cap), None) {
        coeffs[nu.weight()] += BigRational::one();
    }
    QSeries::from_coeffs(coeffs, order)
}
