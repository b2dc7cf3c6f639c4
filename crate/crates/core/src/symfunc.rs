//! Skew Schur and q-Whittaker polynomials evaluated at specialized variables.
//!
//! Everything is generic over a [`Ring`], so the same code produces exact
//! rationals, truncated q-series, or floats.

use std::collections::HashMap;

use crate::partitions::Partition;
use crate::scalar::{determinant, q_binomial_table, q_factorial, Ring};

/// `h_0..=h_kmax` of `vars` via `h_k(x_1..x_n) = h_k(x_1..x_{n-1}) + x_n h_{k-1}(x_1..x_n)`.
pub fn h_table<R: Ring>(ring: &R, vars: &[R::Elem], kmax: usize) -> Vec<R::Elem> {
    let mut h = vec![ring.zero(); kmax + 1];
    h[0] = ring.one();
    for x in vars {
        for k in 1..=kmax {
            let t = ring.mul(x, &h[k - 1]);
            h[k] = ring.add(&h[k], &t);
        }
    }
    h
}

/// `e_0..=e_kmax` of `vars`; `e_k = 0` for `k > vars.len()`.
pub fn e_table<R: Ring>(ring: &R, vars: &[R::Elem], kmax: usize) -> Vec<R::Elem> {
    let mut e = vec![ring.zero(); kmax + 1];
    e[0] = ring.one();
    for x in vars {
        for k in (1..=kmax).rev() {
            let t = ring.mul(x, &e[k - 1]);
            e[k] = ring.add(&e[k], &t);
        }
    }
    e
}

/// Complete homogeneous symmetric polynomial `h_k`; zero for `k < 0`.
pub fn complete_homogeneous<R: Ring>(ring: &R, k: i64, vars: &[R::Elem]) -> R::Elem {
    if k < 0 {
        return ring.zero();
    }
    h_table(ring, vars, k as usize).pop().unwrap()
}

/// Precomputed `h` and `e` tables for repeated skew Schur evaluation.
pub struct SchurTables<E> {
    h: Vec<E>,
    e: Vec<E>,
}

impl<E: Clone> SchurTables<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, vars: &[E], max_degree: usize) -> Self {
        SchurTables {
            h: h_table(ring, vars, max_degree),
            e: e_table(ring, vars, max_degree),
        }
    }

    /// Jacobi–Trudi entries reach degree `λ₁ + ℓ(λ) - 1`, which is at most
    /// `|λ|`; tables must be built at least that deep.
    fn get(table: &[E], k: i64, zero: &E) -> E {
        if k < 0 {
            zero.clone()
        } else {
            assert!(
                (k as usize) < table.len(),
                "symmetric function table too shallow for degree {k}"
            );
            table[k as usize].clone()
        }
    }
}

/// `s_{λ/ρ}` by Jacobi–Trudi, using the `h` form when `ℓ(λ) <= λ₁` and the
/// dual `e` form (in conjugate shapes) otherwise. Zero unless `ρ ⊂ λ`.
pub fn skew_schur_with<R: Ring>(
    ring: &R,
    lambda: &Partition,
    rho: &Partition,
    tables: &SchurTables<R::Elem>,
) -> R::Elem {
    if !rho.is_contained_in(lambda) {
        return ring.zero();
    }
    let zero = ring.zero();
    let (outer, inner, table) = if lambda.len() <= lambda.first() {
        (lambda.clone(), rho.clone(), &tables.h)
    } else {
        (lambda.conjugate(), rho.conjugate(), &tables.e)
    };
    let n = outer.len();
    let m: Vec<Vec<R::Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = outer.part(i) as i64 - inner.part(j) as i64 - i as i64 + j as i64;
                    SchurTables::get(table, k, &zero)
                })
                .collect()
        })
        .collect();
    determinant(ring, &m)
}

pub fn skew_schur<R: Ring>(
    ring: &R,
    lambda: &Partition,
    rho: &Partition,
    vars: &[R::Elem],
) -> R::Elem {
    let tables = SchurTables::new(ring, vars, lambda.weight() + 1);
    skew_schur_with(ring, lambda, rho, &tables)
}

pub fn schur<R: Ring>(ring: &R, lambda: &Partition, vars: &[R::Elem]) -> R::Elem {
    skew_schur(ring, lambda, &Partition::empty(), vars)
}

/// q-Whittaker polynomials through the branching rule over interlacing
/// sequences,
///
/// ```text
/// P_μ(x_1..x_n) = Σ_{κ ≺ μ} ψ_{μ/κ} x_n^{|μ|-|κ|} P_κ(x_1..x_{n-1}),
/// ψ_{μ/κ} = ∏_i [μ_i - μ_{i+1} choose μ_i - κ_i]_q .
/// ```
///
/// Subresults are memoized on `(κ, prefix length)` for the lifetime of the
/// evaluator, which is tied to one variable set.
pub struct QWhittaker<'a, R: Ring> {
    ring: &'a R,
    vars: Vec<R::Elem>,
    binom: Vec<Vec<R::Elem>>,
    memo: HashMap<(Partition, usize), R::Elem>,
}

impl<'a, R: Ring> QWhittaker<'a, R> {
    pub fn new(ring: &'a R, vars: &[R::Elem]) -> Self {
        QWhittaker {
            ring,
            vars: vars.to_vec(),
            binom: vec![vec![ring.one()]],
            memo: HashMap::new(),
        }
    }

    fn ensure_binom(&mut self, n: usize) {
        if self.binom.len() <= n {
            self.binom = q_binomial_table(self.ring, n.max(2 * self.binom.len()));
        }
    }

    /// `P_μ` in all variables of the evaluator.
    pub fn p(&mut self, mu: &Partition) -> R::Elem {
        let n = self.vars.len();
        self.p_prefix(mu, n)
    }

    /// `Q_μ = ∏_j (q;q)_{μ_j - μ_{j+1}}^{-1} P_μ`.
    pub fn q_dual(&mut self, mu: &Partition) -> R::Elem {
        let p = self.p(mu);
        if self.ring.is_zero(&p) {
            return p;
        }
        let ring = self.ring;
        let mut denom = ring.one();
        for j in 0..mu.len() {
            let gap = mu.part(j) - mu.part(j + 1);
            denom = ring.mul(&denom, &q_factorial(ring, gap));
        }
        let inv = ring
            .try_inv(&denom)
            .expect("(q;q)_n must be invertible in the evaluation ring");
        ring.mul(&p, &inv)
    }

    /// `ψ_{μ/κ}` for interlacing `κ ≺ μ`.
    pub fn branching_weight(&mut self, mu: &Partition, kappa: &Partition) -> R::Elem {
        self.ensure_binom(mu.first());
        let ring = self.ring;
        let mut acc = ring.one();
        for i in 0..mu.len() {
            let gap = mu.part(i) - mu.part(i + 1);
            let k = mu.part(i) - kappa.part(i);
            acc = ring.mul(&acc, &self.binom[gap][k]);
        }
        acc
    }

    fn p_prefix(&mut self, mu: &Partition, n: usize) -> R::Elem {
        if mu.len() > n {
            return self.ring.zero();
        }
        if n == 0 {
            return self.ring.one();
        }
        if mu.is_empty() {
            return self.ring.one();
        }
        let key = (mu.clone(), n);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let x = self.vars[n - 1].clone();
        let ring = self.ring;
        let mut acc = ring.zero();
        for kappa in interlacing_below(mu, n - 1) {
            let w = self.branching_weight(mu, &kappa);
            let sub = self.p_prefix(&kappa, n - 1);
            if ring.is_zero(&sub) {
                continue;
            }
            let xp = ring.pow(&x, mu.weight() - kappa.weight());
            let term = ring.mul(&ring.mul(&w, &sub), &xp);
            acc = ring.add(&acc, &term);
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// All `κ` with `μ_{i+1} <= κ_i <= μ_i` and `ℓ(κ) <= max_len`.
pub fn interlacing_below(mu: &Partition, max_len: usize) -> Vec<Partition> {
    let l = mu.len();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(l);
    fn rec(
        mu: &Partition,
        i: usize,
        max_len: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if i == mu.len() {
            out.push(Partition::new(stack.clone()).expect("interlacing is weakly decreasing"));
            return;
        }
        let hi = if i >= max_len { 0 } else { mu.part(i) };
        let lo = mu.part(i + 1);
        if lo > hi {
            return;
        }
        for k in (lo..=hi).rev() {
            stack.push(k);
            rec(mu, i + 1, max_len, stack, out);
            stack.pop();
        }
    }
    rec(mu, 0, max_len, &mut stack, &mut out);
    let _ = l;
    out
}

pub fn qwhittaker_p<R: Ring>(ring: &R, mu: &Partition, vars: &[R::Elem]) -> R::Elem {
    QWhittaker::new(ring, vars).p(mu)
}

pub fn qwhittaker_q<R: Ring>(ring: &R, mu: &Partition, vars: &[R::Elem]) -> R::Elem {
    QWhittaker::new(ring, vars).q_dual(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{rat, ratio, QSeries};
    use crate::scalar::{FloatRing, RationalRing, SeriesRing};
    use num_rational::BigRational;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn rr() -> RationalRing {
        RationalRing { q: ratio(2, 7) }
    }

    #[test]
    fn complete_homogeneous_examples() {
        let ring = rr();
        let (a1, a2) = (ratio(1, 3), ratio(2, 5));
        let v = vec![a1.clone(), a2.clone()];
        assert_eq!(complete_homogeneous(&ring, 0, &v), rat(1));
        assert_eq!(complete_homogeneous(&ring, 1, &v), &a1 + &a2);
        assert_eq!(
            complete_homogeneous(&ring, 2, &v),
            &a1 * &a1 + &a1 * &a2 + &a2 * &a2
        );
        assert_eq!(complete_homogeneous(&ring, -1, &v), rat(0));
    }

    #[test]
    fn skew_schur_examples() {
        let ring = rr();
        let (a1, a2) = (ratio(1, 3), ratio(2, 5));
        let v = vec![a1.clone(), a2.clone()];
        assert_eq!(skew_schur(&ring, &p(&[1]), &p(&[]), &v), &a1 + &a2);
        let s = &a1 + &a2;
        assert_eq!(skew_schur(&ring, &p(&[2, 1]), &p(&[1]), &v), &s * &s);
        assert_eq!(
            skew_schur(&ring, &p(&[2, 2]), &p(&[]), std::slice::from_ref(&a1)),
            rat(0)
        );
        assert_eq!(skew_schur(&ring, &p(&[2]), &p(&[3]), &v), rat(0));
    }

    #[test]
    fn h_and_e_forms_agree() {
        let ring = rr();
        let v = vec![ratio(1, 3), ratio(2, 5), ratio(-1, 4)];
        let tables = SchurTables::new(&ring, &v, 12);
        for lambda in crate::partitions::enumerate(4, 4) {
            for rho in crate::partitions::subpartitions(&lambda) {
                let via_auto = skew_schur_with(&ring, &lambda, &rho, &tables);
                // Force the h form
                let n = lambda.len();
                let zero = ring.zero();
                let m: Vec<Vec<BigRational>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let k = lambda.part(i) as i64 - rho.part(j) as i64 - i as i64
                                    + j as i64;
                                SchurTables::get(&tables.h, k, &zero)
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(via_auto, determinant(&ring, &m), "{lambda}/{rho}");
            }
        }
    }

    #[test]
    fn qwhittaker_examples() {
        let ring = SeriesRing { order: 6 };
        let a1 = ring.constant(ratio(1, 3));
        let a2 = ring.constant(ratio(1, 5));
        let v = vec![a1.clone(), a2.clone()];
        assert_eq!(qwhittaker_p(&ring, &p(&[1]), &v), &a1 + &a2);
        let q = ring.q();
        let one = ring.one();
        let want = &(&(&a1 * &a1) + &(&(&one + &q) * &(&a1 * &a2))) + &(&a2 * &a2);
        assert_eq!(qwhittaker_p(&ring, &p(&[2]), &v), want);
        assert!(qwhittaker_p(&ring, &p(&[1, 1, 1]), &v).is_zero());
        assert_eq!(qwhittaker_q(&ring, &p(&[]), &v), ring.one());
        let q1 = qwhittaker_q(&ring, &p(&[1]), &v);
        let want = &(&a1 + &a2) * &(&one - &q).inv().unwrap();
        assert_eq!(q1, want);
    }

    #[test]
    fn q_dual_of_22_in_one_variable() {
        // P_{(2,2)}(b1) = 0 since ℓ = 2 > 1 variable.
        let ring = SeriesRing { order: 5 };
        let b = ring.constant(ratio(1, 2));
        assert!(qwhittaker_q(&ring, &p(&[2, 2]), std::slice::from_ref(&b)).is_zero());
        // (2) in one variable: Q = b^2 / (q;q)_2
        let q2 = qwhittaker_q(&ring, &p(&[2]), std::slice::from_ref(&b));
        let want = &(&b * &b) * &crate::scalar::q_factorial(&ring, 2).inv().unwrap();
        assert_eq!(q2, want);
        let at_zero = RationalRing { q: rat(0) };
        let b0 = ratio(1, 2);
        assert_eq!(
            qwhittaker_q(&at_zero, &p(&[2, 2]), &[b0.clone(), b0.clone()]),
            schur(&at_zero, &p(&[2, 2]), &[b0.clone(), b0])
        );
    }

    #[test]
    fn interlacing_counts() {
        assert_eq!(interlacing_below(&p(&[2]), 1).len(), 3);
        assert_eq!(interlacing_below(&p(&[2, 1]), 1).len(), 2); // (2),(1)
        assert_eq!(interlacing_below(&p(&[2, 1]), 2).len(), 4);
        assert_eq!(interlacing_below(&p(&[]), 0), vec![p(&[])]);
    }

    #[test]
    fn float_ring_matches_series_evaluation() {
        let q = 0.3;
        let fr = FloatRing { q };
        let sr = SeriesRing { order: 30 };
        let mu = p(&[3, 1]);
        let vf = [0.25, 0.5];
        let vs: Vec<QSeries> = [ratio(1, 4), ratio(1, 2)]
            .iter()
            .map(|c| sr.constant(c.clone()))
            .collect();
        let f = qwhittaker_q(&fr, &mu, &vf);
        let s = qwhittaker_q(&sr, &mu, &vs).eval_f64(q);
        assert!((f - s).abs() < 1e-12, "{f} vs {s}");
    }
}
