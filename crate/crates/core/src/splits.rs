//! Sub-multiset enumeration with multiplicities.

use num_bigint::BigInt;

use crate::rational::Rational;

/// One way of splitting a multiset `M` into `S ⊔ S^c`, standing for
/// `multiplicity` distinct index subsets of the underlying list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split<T> {
    pub multiplicity: u64,
    pub chosen: Vec<T>,
    pub rest: Vec<T>,
}

impl<T> Split<T> {
    pub fn weight(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.multiplicity))
    }
}

fn binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All splits of a sorted slice, grouping equal items so that each distinct
/// sub-multiset appears once with multiplicity `∏ C(m_i, s_i)`.
pub fn multiset_splits<T: Copy + Eq>(sorted: &[T]) -> Vec<Split<T>> {
    let mut runs: Vec<(T, usize)> = Vec::new();
    for &x in sorted {
        match runs.last_mut() {
            Some((y, m)) if *y == x => *m += 1,
            _ => runs.push((x, 1)),
        }
    }
    let mut out = vec![Split {
        multiplicity: 1,
        chosen: Vec::new(),
        rest: Vec::new(),
    }];
    for (x, m) in runs {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for s in &out {
            for k in 0..=m {
                let mut chosen = s.chosen.clone();
                let mut rest = s.rest.clone();
                chosen.extend(std::iter::repeat_n(x, k));
                rest.extend(std::iter::repeat_n(x, m - k));
                next.push(Split {
                    multiplicity: s.multiplicity * binom(m as u64, k as u64),
                    chosen,
                    rest,
                });
            }
        }
        out = next;
    }
    out
}
