use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qcauchy::partitions::{
    contains, enumerate, enumerate_by_weight, partitions_of, restricted_weight_series,
    subpartitions, superpartitions,
};
use qcauchy::{Partition, QSeries};

/// `1/(q;q)_n` mod `q^{T+1}` by the coin-change recurrence over parts `1..=n`.
fn inv_qfact(n: usize, order: usize) -> Vec<u64> {
    let mut c = vec![0u64; order + 1];
    c[0] = 1;
    for part in 1..=n {
        for w in part..=order {
            c[w] += c[w - part];
        }
    }
    c
}

fn counts(ps: &[Partition], order: usize) -> Vec<u64> {
    let mut c = vec![0u64; order + 1];
    for p in ps {
        if p.weight() <= order {
            c[p.weight()] += 1;
        }
    }
    c
}

#[test]
fn fixed_first_row_generating_function() {
    for order in 0..=12 {
        for n in 0..=6 {
            let got = counts(
                &enumerate_by_weight(order, Some(n), None)
                    .into_iter()
                    .filter(|l| l.first() == n)
                    .collect::<Vec<_>>(),
                order,
            );
            // q^n / (q;q)_n
            let base = inv_qfact(n, order);
            let want: Vec<u64> = (0..=order)
                .map(|w| if w >= n { base[w - n] } else { 0 })
                .collect();
            assert_eq!(got, want, "n={n} T={order}");
        }
    }
}

#[test]
fn all_partitions_generating_function() {
    for order in 0..=12 {
        let got = counts(&enumerate_by_weight(order, None, None), order);
        assert_eq!(got, inv_qfact(order, order), "T={order}");
    }
}

#[test]
fn restricted_weight_series_matches_product() {
    for cap in 0..=6 {
        for order in 0..=10 {
            let s = restricted_weight_series(cap, order);
            let want = QSeries::from_coeffs(
                inv_qfact(cap, order)
                    .into_iter()
                    .map(|c| BigRational::from_integer(c.into()))
                    .collect(),
                order,
            );
            assert_eq!(s, want);
            let by_inverse = QSeries::qpoch_n(&QSeries::var(order), cap as i64)
                .unwrap()
                .inv()
                .unwrap();
            assert_eq!(s, by_inverse);
        }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[test]
fn boxed_enumeration_cardinality() {
    for p in 0..=6 {
        for l in 0..=6 {
            let e = enumerate(p, l);
            assert_eq!(e.len() as u64, binomial(p + l, l), "p={p} l={l}");
            // brute force: all sequences in [0,p]^l that are weakly decreasing
            let mut brute = 0u64;
            let total = (p + 1).pow(l as u32);
            for code in 0..total {
                let mut x = code;
                let mut seq = Vec::with_capacity(l);
                for _ in 0..l {
                    seq.push(x % (p + 1));
                    x /= p + 1;
                }
                if seq.windows(2).all(|w| w[0] >= w[1]) {
                    brute += 1;
                }
            }
            assert_eq!(e.len() as u64, brute);
        }
    }
}

#[test]
fn containment_is_a_partial_order() {
    let set = enumerate(3, 3);
    for x in &set {
        assert!(contains(x, x));
        for y in &set {
            if contains(x, y) && contains(y, x) {
                assert_eq!(x, y);
            }
            for z in &set {
                if contains(x, y) && contains(y, z) {
                    assert!(contains(x, z), "{x} ⊂ {y} ⊂ {z}");
                }
            }
        }
    }
}

#[test]
fn enumeration_order_is_lexicographically_descending() {
    for ps in [enumerate(4, 3), partitions_of(7, None, None)] {
        for w in ps.windows(2) {
            assert!(w[0].parts() > w[1].parts(), "{} before {}", w[0], w[1]);
        }
    }
    assert_eq!(enumerate(2, 1).last().unwrap(), &Partition::empty());
}

fn arb_partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0usize..7, 0..6).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(p in arb_partition()) {
        let c = p.conjugate();
        prop_assert_eq!(c.weight(), p.weight());
        prop_assert_eq!(c.len(), p.first());
        prop_assert_eq!(c.conjugate(), p);
    }

    #[test]
    fn sub_and_super_partitions_agree(p in arb_partition()) {
        let subs = subpartitions(&p);
        prop_assert!(subs.iter().all(|r| contains(r, &p)));
        prop_assert_eq!(subs.len(), enumerate(p.first(), p.len()).into_iter().filter(|r| contains(r, &p)).count());
        let sup = superpartitions(&p, p.first() + 1, p.len() + 1);
        prop_assert!(sup.iter().all(|l| contains(&p, l) && l.first() <= p.first() + 1 && l.len() <= p.len() + 1));
        let brute = enumerate(p.first() + 1, p.len() + 1).into_iter().filter(|l| contains(&p, l)).count();
        prop_assert_eq!(sup.len(), brute);
    }

    #[test]
    fn multiplicities_recover_weight(p in arb_partition()) {
        let m = p.multiplicities();
        let w: usize = m.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
        prop_assert_eq!(w, p.weight());
    }
}

#[test]
fn series_helpers_are_consistent() {
    let s = restricted_weight_series(2, 3);
    assert_eq!(s.coeffs_i64(), vec![1, 1, 2, 2]);
    assert!(restricted_weight_series(0, 5).coeff(0).is_one());
    assert!(restricted_weight_series(0, 5).coeff(3).is_zero());
}
