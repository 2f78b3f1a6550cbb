//! Reconstruction of one-descendant invariants from J-function seeds.
//!
//! The unknown `⟨γ_0, …, γ_n, ψ^a(p)⟩_β` is isolated from the vanishing
//! `t^{-2-a}` coefficient of
//!
//! ```text
//!   ⟨γ_0,…,γ_n, p/(t(t−ψ))⟩_β
//! − Σ_i ⟨γ_0,…, γ_i p/(−t²(t−ψ)), …⟩_β
//! + ⟨γ_0 p(H−βt)/(−t²(−t−ψ)), γ_1,…,γ_n⟩_β
//! + Σ_{α,S} Σ_{ij} ⟨γ_0, γ_S, e_i/(t(t−ψ))⟩_{β−α} g^{ij}
//!       ⟨e_j p(H−αt)/(−t(−t−ψ)), γ_{S^c}⟩_α
//! ```
//!
//! Every other bracket has smaller `|β|` or fewer points, so the recursion
//! bottoms out in one-point brackets (read off `J`) and degree-zero brackets.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::bracket::{parse_key, render_key, DescBracket};
use crate::cohomology::CohClass;
use crate::error::{GwError, Result};
use crate::jfun::{degree_zero_bracket, JCache};
use crate::laurent::TLaurent;
use crate::memo::MemoStore;
use crate::rational::{binomial, int, sign_pow, zero, Rational};
use crate::splits::multiset_splits;
use crate::target::{virtual_dimension, CurveClass, Monomial, Target};

const MAX_DEPTH: usize = 4096;

/// `p(H − βt) = ∏_k (H_k − β_k t)^{p_k}` for a monomial `p`.
#[derive(Debug, Clone)]
pub struct TwistPolynomial {
    pub p: Monomial,
    pub beta: CurveClass,
    pub expansion: TLaurent<CohClass>,
}

impl TwistPolynomial {
    pub fn new(target: &Arc<Target>, p: &Monomial, beta: &CurveClass) -> Result<Self> {
        target.check_class(beta)?;
        target.index_of(p)?;
        let mut acc = TLaurent::monomial(CohClass::unit(target), 0);
        for (k, (&e, &b)) in p.0.iter().zip(&beta.0).enumerate() {
            let mut terms = Vec::new();
            for j in 0..=e {
                let mut exps = vec![0; target.generators()];
                exps[k] = e - j;
                let c =
                    binomial(e as i64, j as i64) * sign_pow(j as u64) * int(b as i64).pow(j as i32);
                let class = match target.index_of(&Monomial(exps)) {
                    Ok(i) => CohClass::basis(target, i).scale(&c),
                    Err(_) => CohClass::zero(target),
                };
                terms.push((j as i64, class));
            }
            acc = acc.mul(&TLaurent::from_terms(terms)?)?;
        }
        Ok(TwistPolynomial {
            p: p.clone(),
            beta: beta.clone(),
            expansion: acc,
        })
    }

    /// `(t-power, basis index, coefficient)` for every nonzero term.
    pub fn terms(&self) -> Vec<(i64, usize, Rational)> {
        let mut out = Vec::new();
        for (j, c) in self.expansion.terms() {
            for (i, q) in c.terms() {
                out.push((j, i, q.clone()));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlotPolicy {
    /// `p` is the largest-codimension insertion, `γ_0` the next largest.
    #[default]
    LargestCodim,
    /// `p` is the smallest nonunit insertion, `γ_0` the next smallest.
    SmallestCodim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescendOptions {
    /// Apply the string, dilaton and divisor equations before the relation.
    pub axiom_shortcuts: bool,
    pub slot: SlotPolicy,
}

impl Default for DescendOptions {
    fn default() -> Self {
        DescendOptions {
            axiom_shortcuts: true,
            slot: SlotPolicy::LargestCodim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LocalKey {
    beta: CurveClass,
    plain: Vec<usize>,
    descendant: Option<(usize, u32)>,
}

impl fmt::Display for LocalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{:?}|{:?}", self.beta, self.plain, self.descendant)
    }
}

type Combination = Vec<(Rational, DescBracket)>;

#[derive(Debug)]
pub struct DescendEngine {
    target: Arc<Target>,
    options: DescendOptions,
    memo: MemoStore<LocalKey>,
    jcache: JCache,
}

impl DescendEngine {
    pub fn new(target: &Arc<Target>) -> Self {
        Self::with_options(target, DescendOptions::default())
    }

    pub fn with_options(target: &Arc<Target>, options: DescendOptions) -> Self {
        DescendEngine {
            target: target.clone(),
            options,
            memo: MemoStore::new(),
            jcache: JCache::new(target),
        }
    }

    pub fn target(&self) -> &Arc<Target> {
        &self.target
    }

    pub fn options(&self) -> DescendOptions {
        self.options
    }

    fn desc(
        &self,
        beta: &CurveClass,
        plain: &[usize],
        descendant: Option<(usize, u32)>,
    ) -> Result<DescBracket> {
        DescBracket::new(&self.target, beta.clone(), plain, descendant)
    }

    fn check_target(&self, b: &DescBracket) -> Result<()> {
        if *b.target != *self.target {
            return Err(GwError::MismatchedTarget);
        }
        Ok(())
    }

    pub fn bracket(&self, b: &DescBracket) -> Result<Rational> {
        self.check_target(b)?;
        self.eval(b, None, 0)
    }

    /// Ordinary bracket of basis indices.
    pub fn gw(&self, beta: &CurveClass, classes: &[usize]) -> Result<Rational> {
        self.bracket(&self.desc(beta, classes, None)?)
    }

    fn eval(
        &self,
        b: &DescBracket,
        parent: Option<(u32, usize)>,
        depth: usize,
    ) -> Result<Rational> {
        let measure = (b.beta.total(), b.len());
        if let Some(p) = parent {
            if measure >= p {
                return Err(GwError::NotWellFounded(format!(
                    "{b} does not decrease below {p:?}"
                )));
            }
        }
        if depth > MAX_DEPTH {
            return Err(GwError::NotWellFounded(format!("depth limit at {b}")));
        }
        if b.is_empty() {
            return Err(GwError::Precondition("bracket without insertions".into()));
        }
        let key = LocalKey {
            beta: b.beta.clone(),
            plain: b.plain().to_vec(),
            descendant: b.descendant(),
        };
        if let Some(v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = self.compute(b, depth)?;
        self.memo.insert(key, v.clone())?;
        Ok(v)
    }

    fn total_codim(&self, b: &DescBracket) -> i64 {
        let t = &self.target;
        let plain: usize = b.plain().iter().map(|&i| t.codim(i)).sum();
        let desc = b.descendant().map_or(0, |(i, a)| t.codim(i) + a as usize);
        (plain + desc) as i64
    }

    fn compute(&self, b: &DescBracket, depth: usize) -> Result<Rational> {
        if self.total_codim(b) != virtual_dimension(&self.target, &b.beta, b.len()) {
            return Ok(zero());
        }
        if b.beta.is_zero() {
            let ins: Vec<(usize, u32)> = b
                .plain()
                .iter()
                .map(|&i| (i, 0))
                .chain(b.descendant())
                .collect();
            return degree_zero_bracket(&self.target, &ins);
        }
        if b.len() == 1 {
            let (i, a) = b.descendant().unwrap_or_else(|| (b.plain()[0], 0));
            return self.jcache.one_point(&b.beta, a, i);
        }
        if self.options.axiom_shortcuts {
            let reduced = match self.string_reduce(b)? {
                Some(c) => Some(c),
                None => match self.dilaton_reduce(b)? {
                    Some(c) => Some(c),
                    None => self.divisor_reduce(b)?,
                },
            };
            if let Some(combo) = reduced {
                let measure = (b.beta.total(), b.len());
                let mut v = zero();
                for (c, sub) in combo {
                    v += c * self.eval(&sub, Some(measure), depth + 1)?;
                }
                return Ok(v);
            }
        }
        let (p, a, gamma0, gammas) = self.choose_slots(b);
        let rest = self.relation_rest(
            &b.beta,
            p,
            a,
            gamma0,
            &gammas,
            (b.beta.total(), b.len()),
            depth,
        )?;
        Ok(-rest)
    }

    fn choose_slots(&self, b: &DescBracket) -> (usize, u32, usize, Vec<usize>) {
        let t = &self.target;
        let mut plain = b.plain().to_vec();
        let by_codim = |x: &usize, y: &usize| (t.codim(*x), *x).cmp(&(t.codim(*y), *y));
        plain.sort_by(by_codim);
        if self.options.slot == SlotPolicy::LargestCodim {
            plain.reverse();
        } else {
            let units = plain.iter().take_while(|&&i| t.codim(i) == 0).count();
            plain.rotate_left(units);
        }
        let (p, a) = match b.descendant() {
            Some(d) => d,
            None => (plain.remove(0), 0),
        };
        let gamma0 = plain.remove(0);
        (p, a, gamma0, plain)
    }

    /// Everything in the relation at `t^{-2-a}` except the unknown itself.
    #[allow(clippy::too_many_arguments)]
    fn relation_rest(
        &self,
        beta: &CurveClass,
        p: usize,
        a: u32,
        gamma0: usize,
        gammas: &[usize],
        measure: (u32, usize),
        depth: usize,
    ) -> Result<Rational> {
        let t = &self.target;
        let up = Some(measure);
        let depth = depth + 1;
        let mut total = zero();

        if a >= 1 {
            for i in 0..gammas.len() {
                let Some(k) = t.mul_index(gammas[i], p) else {
                    continue;
                };
                let mut others = vec![gamma0];
                others.extend(
                    gammas
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &g)| g),
                );
                total -= self.eval(&self.desc(beta, &others, Some((k, a - 1)))?, up, depth)?;
            }
        }

        let pm = t.monomial(p).clone();
        for (j, m, c) in TwistPolynomial::new(t, &pm, beta)?.terms() {
            let ap = j + a as i64 - 1;
            if ap < 0 {
                continue;
            }
            let Some(k) = t.mul_index(gamma0, m) else {
                continue;
            };
            let v = self.eval(&self.desc(beta, gammas, Some((k, ap as u32)))?, up, depth)?;
            total += c * sign_pow(ap as u64) * v;
        }

        let mut sorted = gammas.to_vec();
        sorted.sort_unstable();
        let splits = multiset_splits(&sorted);
        for alpha in beta.sub_classes() {
            let left_beta = beta
                .checked_sub(&alpha)
                .expect("sub_classes stays below beta");
            let twist = TwistPolynomial::new(t, &pm, &alpha)?.terms();
            for split in &splits {
                if (left_beta.is_zero() && split.chosen.is_empty())
                    || (alpha.is_zero() && split.rest.len() <= 1)
                {
                    continue;
                }
                let mut left_plain = vec![gamma0];
                left_plain.extend(&split.chosen);
                let left_codim: usize = left_plain.iter().map(|&i| t.codim(i)).sum();
                let left_vdim = virtual_dimension(t, &left_beta, left_plain.len() + 1);
                for (j, m, c) in &twist {
                    let s = j + a as i64 - 2;
                    if s < 0 {
                        continue;
                    }
                    for i in 0..t.basis_len() {
                        let a1 = left_vdim - (left_codim + t.codim(i)) as i64;
                        if a1 < 0 || a1 > s {
                            continue;
                        }
                        let a2 = s - a1;
                        let left = self.eval(
                            &self.desc(&left_beta, &left_plain, Some((i, a1 as u32)))?,
                            up,
                            depth,
                        )?;
                        if left.is_zero() {
                            continue;
                        }
                        for (jj, g) in t.inverse_row(i) {
                            let Some(k) = t.mul_index(*jj, *m) else {
                                continue;
                            };
                            let right = self.eval(
                                &self.desc(&alpha, &split.rest, Some((k, a2 as u32)))?,
                                up,
                                depth,
                            )?;
                            if right.is_zero() {
                                continue;
                            }
                            total += split.weight() * c * sign_pow(a2 as u64) * g * &left * right;
                        }
                    }
                }
            }
        }
        Ok(total)
    }

    /// The `t^{-2}, …, t^{-2-a_max}` coefficients of the full relation with
    /// every bracket evaluated by the engine. All entries vanish.
    pub fn theorem3_residual(
        &self,
        beta: &CurveClass,
        p: &Monomial,
        gamma0: usize,
        gammas: &[usize],
        a_max: u32,
    ) -> Result<Vec<Rational>> {
        let t = &self.target;
        t.check_class(beta)?;
        if beta.is_zero() {
            return Err(GwError::Precondition(
                "relation needs a nonzero curve class".into(),
            ));
        }
        let p = t.index_of(p)?;
        let n = t.basis_len();
        if let Some(&bad) = gammas.iter().chain([&gamma0]).find(|&&i| i >= n) {
            return Err(GwError::InvalidInsertion(format!(
                "basis index {bad} out of range"
            )));
        }
        let mut plain = vec![gamma0];
        plain.extend(gammas);
        let mut out = Vec::new();
        for a in 0..=a_max {
            let unknown = self.desc(beta, &plain, Some((p, a)))?;
            let mut v = self.eval(&unknown, None, 0)?;
            v +=
                self.relation_rest(beta, p, a, gamma0, gammas, (beta.total(), unknown.len()), 0)?;
            out.push(v);
        }
        Ok(out)
    }

    fn check_reducible(&self, b: &DescBracket) -> Result<()> {
        self.check_target(b)?;
        if b.len() < 2 || (b.beta.is_zero() && b.len() < 4) {
            return Err(GwError::UnstableDegreeZero(b.len() - 1));
        }
        Ok(())
    }

    /// Removes a unit insertion: `⟨…, ψ^a(δ), 1⟩ = ⟨…, ψ^{a−1}(δ)⟩`, and zero
    /// when nothing carries a ψ. `None` when there is no unit insertion.
    pub fn string_reduce(&self, b: &DescBracket) -> Result<Option<Combination>> {
        let unit = self.target.unit_index();
        let Some(pos) = b.plain().iter().position(|&i| i == unit) else {
            return Ok(None);
        };
        self.check_reducible(b)?;
        let mut rest = b.plain().to_vec();
        rest.remove(pos);
        Ok(Some(match b.descendant() {
            Some((i, a)) => vec![(
                Rational::one(),
                self.desc(&b.beta, &rest, Some((i, a - 1)))?,
            )],
            None => Vec::new(),
        }))
    }

    /// `⟨γ_1, …, γ_m, ψ(1)⟩ = (m − 2)⟨γ_1, …, γ_m⟩`. `None` unless the
    /// descendant is `ψ(1)`.
    pub fn dilaton_reduce(&self, b: &DescBracket) -> Result<Option<Combination>> {
        if b.descendant() != Some((self.target.unit_index(), 1)) {
            return Ok(None);
        }
        self.check_reducible(b)?;
        let m = b.plain().len() as i64;
        if m == 2 {
            return Ok(Some(Vec::new()));
        }
        Ok(Some(vec![(
            int(m - 2),
            self.desc(&b.beta, b.plain(), None)?,
        )]))
    }

    /// Removes a bare divisor `H_k`:
    /// `⟨…, ψ^a(δ), H_k⟩ = β_k⟨…, ψ^a(δ)⟩ + ⟨…, ψ^{a−1}(δ H_k)⟩`.
    pub fn divisor_reduce(&self, b: &DescBracket) -> Result<Option<Combination>> {
        let t = &self.target;
        let Some((pos, k)) = b
            .plain()
            .iter()
            .enumerate()
            .find_map(|(pos, &i)| t.as_divisor(i).map(|k| (pos, k)))
        else {
            return Ok(None);
        };
        self.check_reducible(b)?;
        let h = b.plain()[pos];
        let mut rest = b.plain().to_vec();
        rest.remove(pos);
        let mut out = Vec::new();
        if b.beta.0[k] > 0 {
            out.push((
                int(b.beta.0[k] as i64),
                self.desc(&b.beta, &rest, b.descendant())?,
            ));
        }
        if let Some((i, a)) = b.descendant() {
            if let Some(j) = t.mul_index(i, h) {
                out.push((
                    Rational::one(),
                    self.desc(&b.beta, &rest, Some((j, a - 1)))?,
                ));
            }
        }
        Ok(Some(out))
    }

    /// `n_d^{(a)} = ⟨H^2, …, H^2, ψ^a(H^2)⟩_d` on `P^2` for `a = 0..=3d−2`,
    /// from the closed ladder seeded by `n_d^{(3d−2)}`.
    pub fn ladder_nd_a(&self, d: u32) -> Result<Vec<Rational>> {
        if !matches!(
            self.target.kind(),
            crate::target::TargetKind::ProjectiveSpace(2)
        ) {
            return Err(GwError::UnsupportedTarget(format!(
                "ladder needs P2, got {}",
                self.target
            )));
        }
        if d == 0 {
            return Err(GwError::InvalidCurveClass("ladder needs d >= 1".into()));
        }
        let top = self.target.top_index();
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new()];
        for dd in 1..=d as i64 {
            let len = (3 * dd - 1) as usize;
            let mut row = vec![zero(); len];
            row[len - 1] =
                self.jcache
                    .one_point(&CurveClass::degree(dd as u32), len as u32 - 1, top)?;
            for a in (0..len as i64 - 1).rev() {
                let get = |e: i64, a: i64| -> Rational {
                    let r: &Vec<Rational> = &rows[e as usize];
                    if a < 0 || a as usize >= r.len() {
                        zero()
                    } else {
                        r[a as usize].clone()
                    }
                };
                let mut v = int(dd * dd) * &row[a as usize + 1];
                for e in 1..dd {
                    let ne = get(e, 0);
                    let m = 3 * dd - 3 - a;
                    v -= binomial(m, 3 * e - 1) * int((dd - e) * e * e * e) * get(dd - e, a) * &ne;
                    v -= binomial(m, 3 * e - 2) * int(e * e) * get(dd - e, a - 1) * &ne;
                }
                row[a as usize] = v;
            }
            rows.push(row);
        }
        Ok(rows.pop().unwrap_or_default())
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Memo entries under canonical bracket keys, sorted.
    pub fn export_entries(&self) -> Vec<(String, Rational)> {
        let mut out: Vec<(String, Rational)> = self
            .memo
            .entries()
            .into_iter()
            .map(|(k, v)| {
                let ins = k.plain.iter().map(|&i| (i, 0)).chain(k.descendant);
                (render_key(&self.target, &k.beta, ins), v)
            })
            .collect();
        out.sort();
        out
    }

    pub fn import_entries(
        &self,
        entries: impl IntoIterator<Item = (String, Rational)>,
    ) -> Result<usize> {
        let mut count = 0;
        for (key, value) in entries {
            let (target, beta, ins) = parse_key(&key)?;
            if *target != *self.target {
                return Err(GwError::MismatchedTarget);
            }
            let mut plain = Vec::new();
            let mut desc = None;
            for (i, a) in ins {
                if a == 0 {
                    plain.push(i);
                } else if desc.replace((i, a)).is_some() {
                    return Err(GwError::TooManyDescendants);
                }
            }
            let b = DescBracket::new(&self.target, beta, &plain, desc)?;
            let k = LocalKey {
                beta: b.beta.clone(),
                plain: b.plain().to_vec(),
                descendant: b.descendant(),
            };
            self.memo.insert(k, value)?;
            count += 1;
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, ratio};
    use crate::target::parse_target;

    fn engine(spec: &str) -> DescendEngine {
        DescendEngine::new(&parse_target(spec).unwrap())
    }

    fn bare(spec: &str) -> DescendEngine {
        DescendEngine::with_options(
            &parse_target(spec).unwrap(),
            DescendOptions {
                axiom_shortcuts: false,
                slot: SlotPolicy::LargestCodim,
            },
        )
    }

    #[test]
    fn twist_expansion() {
        let t = parse_target("P2").unwrap();
        let tw = TwistPolynomial::new(&t, &Monomial(vec![2]), &CurveClass::degree(3)).unwrap();
        assert_eq!(
            tw.terms(),
            vec![(0, 2, one()), (1, 1, int(-6)), (2, 0, int(9))]
        );
        let tw0 = TwistPolynomial::new(&t, &Monomial(vec![2]), &CurveClass::degree(0)).unwrap();
        assert_eq!(tw0.terms(), vec![(0, 2, one())]);
    }

    #[test]
    fn plane_curves_both_modes() {
        for e in [engine("P2"), bare("P2")] {
            let n: Vec<Rational> = (1..=4)
                .map(|d| {
                    e.gw(&CurveClass::degree(d), &vec![2; 3 * d as usize - 1])
                        .unwrap()
                })
                .collect();
            assert_eq!(n, vec![int(1), int(1), int(12), int(620)]);
        }
    }

    #[test]
    fn ladder_tables() {
        let e = engine("P2");
        assert_eq!(e.ladder_nd_a(1).unwrap(), vec![int(1), int(1)]);
        assert_eq!(
            e.ladder_nd_a(2).unwrap(),
            vec![int(1), int(1), int(1), ratio(1, 2), ratio(1, 8)]
        );
        assert_eq!(
            e.ladder_nd_a(3).unwrap(),
            vec![
                int(12),
                int(10),
                int(7),
                int(3),
                int(1),
                ratio(1, 4),
                ratio(1, 24),
                ratio(1, 216)
            ]
        );
    }

    #[test]
    fn ladder_matches_brackets() {
        let e = engine("P2");
        for d in 1..=3u32 {
            let ladder = e.ladder_nd_a(d).unwrap();
            for (a, v) in ladder.iter().enumerate() {
                let plain = vec![2; 3 * d as usize - 2 - a];
                let b = DescBracket::new(
                    e.target(),
                    CurveClass::degree(d),
                    &plain,
                    Some((2, a as u32)),
                )
                .unwrap();
                assert_eq!(&e.bracket(&b).unwrap(), v, "d={d} a={a}");
            }
        }
    }

    #[test]
    fn reductions() {
        let e = engine("P2");
        let t = e.target().clone();
        let b = DescBracket::new(&t, CurveClass::degree(1), &[2, 2, 0], None).unwrap();
        assert_eq!(e.string_reduce(&b).unwrap(), Some(vec![]));
        let b = DescBracket::new(&t, CurveClass::degree(2), &[2; 5], Some((0, 1))).unwrap();
        let combo = e.dilaton_reduce(&b).unwrap().unwrap();
        assert_eq!(combo.len(), 1);
        assert_eq!(combo[0].0, int(3));
        assert_eq!(e.bracket(&b).unwrap(), int(3));
        let b = DescBracket::new(&t, CurveClass::degree(1), &[2, 2, 1], None).unwrap();
        let combo = e.divisor_reduce(&b).unwrap().unwrap();
        assert_eq!(
            combo,
            vec![(
                one(),
                DescBracket::new(&t, CurveClass::degree(1), &[2, 2], None).unwrap()
            )]
        );
        let z = DescBracket::new(&t, CurveClass::degree(0), &[1, 1, 0], None).unwrap();
        assert!(matches!(
            e.string_reduce(&z),
            Err(GwError::UnstableDegreeZero(2))
        ));
        assert_eq!(
            e.divisor_reduce(&DescBracket::new(&t, CurveClass::degree(1), &[2, 2], None).unwrap())
                .unwrap(),
            None
        );
    }

    #[test]
    fn residuals_vanish() {
        let e = engine("P2");
        let r = e
            .theorem3_residual(&CurveClass::degree(2), &Monomial(vec![2]), 2, &[2, 2, 2], 4)
            .unwrap();
        assert!(r.iter().all(Zero::is_zero), "{r:?}");
        let e = engine("P3");
        let r = e
            .theorem3_residual(&CurveClass::degree(1), &Monomial(vec![1]), 2, &[2, 2], 3)
            .unwrap();
        assert!(r.iter().all(Zero::is_zero), "{r:?}");
        let e = engine("CI:6:5");
        let r = e
            .theorem3_residual(&CurveClass::degree(1), &Monomial(vec![1]), 3, &[2], 3)
            .unwrap();
        assert!(r.iter().all(Zero::is_zero), "{r:?}");
    }

    #[test]
    fn p3_lines() {
        let e = engine("P3");
        let one_line = CurveClass::degree(1);
        assert_eq!(e.gw(&one_line, &[2, 2, 2, 2]).unwrap(), int(2));
        assert_eq!(e.gw(&one_line, &[3, 3]).unwrap(), int(1));
    }

    #[test]
    fn slot_policy_independence() {
        let t = parse_target("P3").unwrap();
        let small = DescendEngine::with_options(
            &t,
            DescendOptions {
                axiom_shortcuts: false,
                slot: SlotPolicy::SmallestCodim,
            },
        );
        let large = bare("P3");
        for classes in [vec![2; 8], vec![3, 3, 3, 2, 2], vec![3, 2, 2, 2, 2, 2, 2]] {
            let d = CurveClass::degree(2);
            assert_eq!(
                small.gw(&d, &classes).unwrap(),
                large.gw(&d, &classes).unwrap(),
                "{classes:?}"
            );
        }
    }

    #[test]
    fn product_swap() {
        let e = engine("P1xP1");
        let t = e.target().clone();
        let b = DescBracket::new(&t, CurveClass(vec![1, 2]), &[3, 3, 3, 3], Some((2, 1))).unwrap();
        let swapped_plain: Vec<usize> = b.plain().iter().map(|&i| t.swapped_index(i)).collect();
        let s = DescBracket::new(
            &t,
            CurveClass(vec![2, 1]),
            &swapped_plain,
            Some((t.swapped_index(2), 1)),
        )
        .unwrap();
        assert_eq!(e.bracket(&b).unwrap(), e.bracket(&s).unwrap());
    }

    #[test]
    fn rejects_zero_points_and_foreign_targets() {
        let e = engine("P2");
        let t = e.target().clone();
        assert!(e
            .bracket(&DescBracket::new(&t, CurveClass::degree(1), &[], None).unwrap())
            .is_err());
        let other = parse_target("P3").unwrap();
        let b = DescBracket::new(&other, CurveClass::degree(1), &[3, 3], None).unwrap();
        assert!(matches!(e.bracket(&b), Err(GwError::MismatchedTarget)));
    }

    #[test]
    fn export_import_round_trip() {
        let e = engine("P2");
        e.gw(&CurveClass::degree(3), &[2; 8]).unwrap();
        let entries = e.export_entries();
        let f = engine("P2");
        assert_eq!(f.import_entries(entries.clone()).unwrap(), entries.len());
        assert_eq!(f.export_entries(), entries);
    }
}
