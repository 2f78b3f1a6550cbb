//! Ordinary genus-zero invariants of `P^r` by WDVV reconstruction.
//!
//! A bracket `⟨γ_1, …, γ_{n+2}, D_K⟩_d` with every codim at least 2 is
//! solved from the two contraction sums obtained by pairing the last four
//! slots as `(γ_{n+1} γ_{n+2} | D_L D_M)` and `(γ_{n+1} D_L | γ_{n+2} D_M)`,
//! with `D_L = H`, `D_M = H^{k-1}`. `D_K` is always the smallest codim, so
//! every same-degree term has fewer insertions or a smaller ascending codim
//! tuple.

use std::fmt;
use std::sync::Arc;

use log::debug;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::bracket::Bracket;
use crate::error::{GwError, Result};
use crate::memo::MemoStore;
use crate::rational::{binomial, int, one, zero, Rational};
use crate::splits::multiset_splits;
use crate::target::{virtual_dimension, CurveClass, Target, TargetKind};

const MAX_DEPTH: usize = 4096;

/// Which two remaining insertions play `γ_{n+1}, γ_{n+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LargestFirst,
    SmallestFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WdvvKey {
    pub degree: u32,
    pub codims: Vec<u8>,
}

impl fmt::Display for WdvvKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.codims.iter().map(|c| c.to_string()).collect();
        write!(f, "{}|{}", self.degree, c.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    Terminal(Rational),
    Reduced { factor: Rational, bracket: Bracket },
}

pub struct WdvvEngine {
    target: Arc<Target>,
    r: usize,
    tie_break: TieBreak,
    memo: MemoStore<WdvvKey>,
}

impl WdvvEngine {
    pub fn new(target: &Arc<Target>) -> Result<Self> {
        Self::with_tie_break(target, TieBreak::default())
    }

    pub fn with_tie_break(target: &Arc<Target>, tie_break: TieBreak) -> Result<Self> {
        let TargetKind::ProjectiveSpace(r) = *target.kind() else {
            return Err(GwError::UnsupportedTarget(format!(
                "WDVV engine needs a projective space, got {target}"
            )));
        };
        Ok(WdvvEngine {
            target: target.clone(),
            r: r as usize,
            tie_break,
            memo: MemoStore::new(),
        })
    }

    pub fn target(&self) -> &Arc<Target> {
        &self.target
    }

    pub fn memo(&self) -> &MemoStore<WdvvKey> {
        &self.memo
    }

    /// Easy String / Easy Divisor and the degree-zero rule.
    pub fn reduce_axioms(&self, b: &Bracket) -> Result<Reduction> {
        if !b.is_ordinary() {
            return Err(GwError::Precondition(
                "WDVV engine handles ordinary brackets only".into(),
            ));
        }
        if *b.target != *self.target {
            return Err(GwError::MismatchedTarget);
        }
        let d = b.beta.0[0];
        let codims: Vec<usize> = b.insertions().iter().map(|&(i, _)| i).collect();
        if d == 0 {
            if codims.len() != 3 {
                debug!(
                    "degree-0 bracket {b} with {} insertions classified as zero",
                    codims.len()
                );
                return Ok(Reduction::Terminal(zero()));
            }
            let total: usize = codims.iter().sum();
            return Ok(Reduction::Terminal(int((total == self.r) as i64)));
        }
        if b.degree() != virtual_dimension(&self.target, &b.beta, codims.len()) {
            return Ok(Reduction::Terminal(zero()));
        }
        if codims.contains(&0) {
            return Ok(Reduction::Terminal(zero()));
        }
        let divisors = codims.iter().filter(|&&c| c == 1).count();
        let kept: Vec<usize> = codims.into_iter().filter(|&c| c >= 2).collect();
        let factor = Rational::from_integer(BigInt::from(d).pow(divisors as u32));
        Ok(Reduction::Reduced {
            factor,
            bracket: Bracket::ordinary(&self.target, b.beta.clone(), &kept),
        })
    }

    /// `⟨H^{k_1}, …, H^{k_n}⟩_d` on `P^r`.
    pub fn gw(&self, d: i64, codims: &[usize]) -> Result<Rational> {
        if d < 0 {
            return Err(GwError::InvalidCurveClass(format!("negative degree {d}")));
        }
        if let Some(&k) = codims.iter().find(|&&k| k > self.r) {
            return Err(GwError::InvalidInsertion(format!(
                "codim {k} exceeds dim {}",
                self.r
            )));
        }
        let mut c: Vec<u8> = codims.iter().map(|&k| k as u8).collect();
        c.sort_unstable();
        self.eval(d as u32, c, 0)
    }

    pub fn gw_bracket(&self, b: &Bracket) -> Result<Rational> {
        match self.reduce_axioms(b)? {
            Reduction::Terminal(v) => Ok(v),
            Reduction::Reduced { factor, bracket } => {
                let codims: Vec<u8> = bracket.insertions().iter().map(|&(i, _)| i as u8).collect();
                Ok(factor * self.core(bracket.beta.0[0], codims, 0)?)
            }
        }
    }

    fn eval(&self, d: u32, mut codims: Vec<u8>, depth: usize) -> Result<Rational> {
        let n = codims.len();
        if d == 0 {
            if n != 3 {
                return Ok(zero());
            }
            let total: usize = codims.iter().map(|&c| c as usize).sum();
            return Ok(int((total == self.r) as i64));
        }
        let total: i64 = codims.iter().map(|&c| c as i64).sum();
        if total != virtual_dimension(&self.target, &CurveClass::degree(d), n) {
            return Ok(zero());
        }
        if codims.contains(&0) {
            return Ok(zero());
        }
        let before = codims.len();
        codims.retain(|&c| c >= 2);
        let factor = BigInt::from(d).pow((before - codims.len()) as u32);
        let v = self.core(d, codims, depth)?;
        Ok(v * Rational::from_integer(factor))
    }

    /// On-dimension bracket, positive degree, all codims at least 2, sorted.
    fn core(&self, d: u32, codims: Vec<u8>, depth: usize) -> Result<Rational> {
        if codims.len() <= 2 {
            return Ok(self.seed(d, &codims));
        }
        if depth > MAX_DEPTH {
            return Err(GwError::NotWellFounded(format!(
                "WDVV depth limit at d={d} {codims:?}"
            )));
        }
        let key = WdvvKey { degree: d, codims };
        if let Some(v) = self.memo.get(&key) {
            return Ok(v);
        }
        let c = &key.codims;
        let k = c[0];
        let mut rest: Vec<u8> = c[1..].to_vec();
        let (ga, gb) = match self.tie_break {
            TieBreak::LargestFirst => {
                let gb = rest.pop().unwrap();
                let ga = rest.pop().unwrap();
                (ga, gb)
            }
            TieBreak::SmallestFirst => {
                let ga = rest.remove(0);
                let gb = rest.remove(0);
                (ga, gb)
            }
        };
        let (dl, dm) = (1u8, k - 1);
        let second = self.contraction_sum(d, &rest, [ga, dl], [gb, dm], false, depth + 1)?;
        let first_rest = self.contraction_sum(d, &rest, [ga, gb], [dl, dm], true, depth + 1)?;
        let v = second - first_rest;
        self.memo.insert(key, v.clone())?;
        Ok(v)
    }

    /// Two-point seeds by the dimension count: on `P^r`, with codims at least
    /// 2, only `⟨H^r, H^r⟩_1 = 1` survives; on `P^1` everything reduces to the
    /// empty bracket `⟨⟩_1 = 1`.
    fn seed(&self, d: u32, codims: &[u8]) -> Rational {
        let r = self.r as u8;
        match codims {
            [a, b] if d == 1 && *a == r && *b == r => one(),
            [] if d == 1 && r == 1 => one(),
            _ => zero(),
        }
    }

    /// `Σ_{α,S,I,J} ⟨γ_S, left, e_I⟩_α g^{IJ} ⟨e_J, γ_{S^c}, right⟩_{d-α}`.
    fn contraction_sum(
        &self,
        d: u32,
        gammas: &[u8],
        left: [u8; 2],
        right: [u8; 2],
        skip_full: bool,
        depth: usize,
    ) -> Result<Rational> {
        let splits = multiset_splits(gammas);
        let mut total = zero();
        for alpha in 0..=d {
            for split in &splits {
                if skip_full && alpha == d && split.rest.is_empty() {
                    continue;
                }
                let m = split.chosen.len() + 3;
                let left_codim: i64 = split.chosen.iter().chain(&left).map(|&c| c as i64).sum();
                let need =
                    virtual_dimension(&self.target, &CurveClass::degree(alpha), m) - left_codim;
                if need < 0 || need > self.r as i64 {
                    continue;
                }
                let ci = need as usize;
                let mut lc = split.chosen.clone();
                lc.extend_from_slice(&left);
                lc.push(ci as u8);
                lc.sort_unstable();
                let lv = self.eval(alpha, lc, depth)?;
                if lv.is_zero() {
                    continue;
                }
                for (cj, g) in self.target.inverse_row(ci) {
                    let mut rc = split.rest.clone();
                    rc.extend_from_slice(&right);
                    rc.push(*cj as u8);
                    rc.sort_unstable();
                    let rv = self.eval(d - alpha, rc, depth)?;
                    if !rv.is_zero() {
                        total += split.weight() * &lv * g * rv;
                    }
                }
            }
        }
        Ok(total)
    }

    /// Both contraction sums for `γ_1..γ_{n+2}` against `D_L, D_M`, special
    /// terms included. They agree exactly when WDVV holds.
    pub fn wdvv_relation_sides(
        &self,
        d: i64,
        gammas: &[usize],
        dl: usize,
        dm: usize,
    ) -> Result<(Rational, Rational)> {
        if d < 0 {
            return Err(GwError::InvalidCurveClass(format!("negative degree {d}")));
        }
        if gammas.len() < 2 {
            return Err(GwError::Precondition(
                "need at least two γ insertions".into(),
            ));
        }
        if let Some(&k) = gammas.iter().chain([&dl, &dm]).find(|&&k| k > self.r) {
            return Err(GwError::InvalidInsertion(format!(
                "codim {k} exceeds dim {}",
                self.r
            )));
        }
        let n = gammas.len() - 2;
        let mut rest: Vec<u8> = gammas[..n].iter().map(|&c| c as u8).collect();
        rest.sort_unstable();
        let (ga, gb) = (gammas[n] as u8, gammas[n + 1] as u8);
        let (dl, dm) = (dl as u8, dm as u8);
        let d = d as u32;
        let first = self.contraction_sum(d, &rest, [ga, gb], [dl, dm], false, 0)?;
        let second = self.contraction_sum(d, &rest, [ga, dl], [gb, dm], false, 0)?;
        Ok((first, second))
    }

    pub fn export_entries(&self) -> Vec<(String, Rational)> {
        self.memo
            .entries()
            .into_iter()
            .map(|(k, v)| {
                let ins: Vec<usize> = k.codims.iter().map(|&c| c as usize).collect();
                (
                    Bracket::ordinary(&self.target, CurveClass::degree(k.degree), &ins).key(),
                    v,
                )
            })
            .collect()
    }

    /// Loads ordinary reduced brackets for this target; returns how many were taken.
    pub fn import_entries<'a>(
        &self,
        entries: impl IntoIterator<Item = (&'a str, &'a Rational)>,
    ) -> Result<usize> {
        let mut taken = 0;
        for (key, value) in entries {
            let b = Bracket::parse(key)?;
            if *b.target != *self.target || !b.is_ordinary() {
                continue;
            }
            let codims = b.insertions().iter().map(|&(i, _)| i as u8).collect();
            self.memo.insert(
                WdvvKey {
                    degree: b.beta.0[0],
                    codims,
                },
                value.clone(),
            )?;
            taken += 1;
        }
        Ok(taken)
    }
}

/// `n_d`, the number of rational plane curves of degree `d` through
/// `3d - 1` general points, by Kontsevich's closed recursion.
pub fn kontsevich_nd(d: u32) -> Rational {
    kontsevich_table(d).pop().unwrap_or_else(zero)
}

/// `[n_1, …, n_dmax]`.
pub fn kontsevich_table(dmax: u32) -> Vec<Rational> {
    let mut n: Vec<Rational> = Vec::with_capacity(dmax as usize);
    for d in 1..=dmax as i64 {
        if d == 1 {
            n.push(one());
            continue;
        }
        let mut v = zero();
        for e in 1..d {
            let (ne, nde) = (&n[(e - 1) as usize], &n[(d - e - 1) as usize]);
            let a = int(e * e * (d - e) * (d - e)) * binomial(3 * d - 4, 3 * e - 2);
            let b = int(e * (d - e).pow(3)) * binomial(3 * d - 4, 3 * e - 3);
            v += ne * nde * (a - b);
        }
        n.push(v);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::Target;

    fn engine(r: u32) -> WdvvEngine {
        WdvvEngine::new(&Target::projective_space(r).unwrap()).unwrap()
    }

    #[test]
    fn closed_recursion_values() {
        let v: Vec<String> = kontsevich_table(4).iter().map(|q| q.to_string()).collect();
        assert_eq!(v, ["1", "1", "12", "620"]);
    }

    #[test]
    fn p3_lines() {
        let e = engine(3);
        assert_eq!(e.gw(1, &[3, 3]).unwrap(), int(1));
        assert_eq!(e.gw(1, &[3, 2, 2]).unwrap(), int(1));
        assert_eq!(e.gw(1, &[2, 2, 2, 2]).unwrap(), int(2));
    }

    #[test]
    fn plane_quartics() {
        assert_eq!(engine(2).gw(4, &[2; 11]).unwrap(), int(620));
    }

    #[test]
    fn dimension_filter() {
        assert_eq!(engine(2).gw(1, &[2, 2, 2]).unwrap(), zero());
    }

    #[test]
    fn reduce_axioms_examples() {
        let e = engine(2);
        let t = e.target().clone();
        let b = Bracket::ordinary(&t, CurveClass::degree(1), &[2, 2, 0]);
        assert_eq!(e.reduce_axioms(&b).unwrap(), Reduction::Terminal(zero()));
        let b = Bracket::ordinary(&t, CurveClass::degree(1), &[2, 2, 1]);
        assert_eq!(
            e.reduce_axioms(&b).unwrap(),
            Reduction::Reduced {
                factor: one(),
                bracket: Bracket::ordinary(&t, CurveClass::degree(1), &[2, 2])
            }
        );
        let b = Bracket::ordinary(&t, CurveClass::degree(0), &[0, 1, 1]);
        assert_eq!(e.reduce_axioms(&b).unwrap(), Reduction::Terminal(one()));
        let b = Bracket::ordinary(&t, CurveClass::degree(0), &[1, 1]);
        assert_eq!(e.reduce_axioms(&b).unwrap(), Reduction::Terminal(zero()));
    }

    #[test]
    fn rejects_bad_input() {
        let e = engine(2);
        assert!(matches!(e.gw(-1, &[2]), Err(GwError::InvalidCurveClass(_))));
        assert!(matches!(e.gw(1, &[3]), Err(GwError::InvalidInsertion(_))));
        let q = Target::product(&[1, 1]).unwrap();
        assert!(matches!(
            WdvvEngine::new(&q),
            Err(GwError::UnsupportedTarget(_))
        ));
    }

    #[test]
    fn p1_degree_one() {
        let e = engine(1);
        assert_eq!(e.gw(1, &[1, 1]).unwrap(), int(1));
        assert_eq!(e.gw(1, &[1]).unwrap(), int(1));
        assert_eq!(e.gw(1, &[1, 1, 1]).unwrap(), int(1));
        assert_eq!(e.gw(1, &[0]).unwrap(), zero());
    }

    #[test]
    fn relation_sides_small_instance() {
        let e = engine(3);
        let (a, b) = e.wdvv_relation_sides(1, &[2, 2, 2], 1, 1).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_zero());
        let (a, b) = engine(2)
            .wdvv_relation_sides(2, &[2, 2, 2, 2], 1, 1)
            .unwrap();
        assert_eq!(a, b);
        let (a, b) = e.wdvv_relation_sides(2, &[0, 0, 0], 0, 0).unwrap();
        assert_eq!((a, b), (zero(), zero()));
    }

    #[test]
    fn tie_break_independence() {
        let t = Target::projective_space(3).unwrap();
        let a = WdvvEngine::with_tie_break(&t, TieBreak::LargestFirst).unwrap();
        let b = WdvvEngine::with_tie_break(&t, TieBreak::SmallestFirst).unwrap();
        for codims in [vec![2; 8], vec![3, 3, 2, 2, 2, 2], vec![3, 3, 3, 2, 2]] {
            let (x, y) = (a.gw(2, &codims).unwrap(), b.gw(2, &codims).unwrap());
            assert!(!x.is_zero(), "{codims:?} should be on-dimension");
            assert_eq!(x, y, "{codims:?}");
        }
    }
}
