//! Closed-form J-functions, one-point descendants and degree-zero brackets.
//!
//! For `P^n`, `J^d = 1 / ∏_{k=1}^{d} (H + kt)^{n+1}`; for a Fano complete
//! intersection of type `(l_1..l_r)` the numerator `∏_i ∏_{k=1}^{d l_i}
//! (l_i H + kt)` is added; products use the tensor product of the factor
//! J-functions. Everything is expanded exactly in the nilpotent `H`, so each
//! J-function is a finite Laurent polynomial in `t`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::RwLock;

use crate::cohomology::CohClass;
use crate::error::{GwError, Result};
use crate::laurent::TLaurent;
use crate::rational::{factorial, int, ratio, sign_pow, zero, Rational};
use crate::target::{CurveClass, Monomial, Target, TargetKind};

#[derive(Debug, Clone)]
pub struct JFunction {
    pub target: Arc<Target>,
    pub beta: CurveClass,
    pub series: TLaurent<CohClass>,
}

impl JFunction {
    /// Coefficient class of `t^exp`, zero when absent.
    pub fn coefficient(&self, exp: i64) -> Result<CohClass> {
        if exp > self.series.window().1 {
            return Ok(CohClass::zero(&self.target));
        }
        Ok(self
            .series
            .coeff(exp)?
            .cloned()
            .unwrap_or_else(|| CohClass::zero(&self.target)))
    }

    /// `(t-exponent, monomial, coefficient)` rows, highest exponent first.
    pub fn rows(&self) -> Vec<(i64, Monomial, Rational)> {
        let mut rows = Vec::new();
        for (e, c) in self.series.terms().rev() {
            for (i, q) in c.terms() {
                rows.push((e, self.target.monomial(i).clone(), q.clone()));
            }
        }
        rows
    }
}

/// `−K_X·β + dim X + 2`: deep enough for every coefficient a bracket can use.
pub fn default_order(target: &Target, beta: &CurveClass) -> i64 {
    target.anticanonical_degree(beta) + target.dim() as i64 + 2
}

fn linear(
    target: &Arc<Target>,
    generator: usize,
    h_coeff: i64,
    t_coeff: i64,
) -> Result<TLaurent<CohClass>> {
    TLaurent::from_terms([
        (1, CohClass::unit(target).scale(&int(t_coeff))),
        (0, CohClass::divisor(target, generator).scale(&int(h_coeff))),
    ])
}

/// `1/(H_g + kt)` expanded as `Σ_j (−1)^j k^{−1−j} H_g^j t^{−1−j}`; finite since
/// `H_g` is nilpotent.
fn inverse_linear(target: &Arc<Target>, generator: usize, k: i64) -> Result<TLaurent<CohClass>> {
    let top = target.max_exponents()[generator];
    let mut hj = CohClass::unit(target);
    let h = CohClass::divisor(target, generator);
    let mut terms = Vec::with_capacity(top as usize + 1);
    for j in 0..=top as i64 {
        let c = sign_pow(j as u64) * ratio(1, k.pow(j as u32 + 1));
        terms.push((-1 - j, hj.scale(&c)));
        hj = hj.cup(&h)?;
    }
    TLaurent::from_terms(terms)
}

/// `∏_{k=1}^{d} (H_g + kt)^{-(power)}` in the ring of `target`.
fn inverse_factor(
    target: &Arc<Target>,
    generator: usize,
    d: u32,
    power: u32,
) -> Result<TLaurent<CohClass>> {
    let mut acc = TLaurent::monomial(CohClass::unit(target), 0);
    for k in 1..=d as i64 {
        let inv = inverse_linear(target, generator, k)?;
        acc = acc.mul(&inv.pow(power, CohClass::unit(target))?)?;
    }
    Ok(acc)
}

/// Re-express a series over a single-generator factor in the ring of a product.
fn embed(
    series: &TLaurent<CohClass>,
    product: &Arc<Target>,
    generator: usize,
) -> Result<TLaurent<CohClass>> {
    let mut terms = Vec::new();
    for (e, c) in series.terms() {
        let mut lifted = CohClass::zero(product);
        for (i, q) in c.terms() {
            let mut exps = vec![0; product.generators()];
            exps[generator] = c.target().monomial(i).0[0];
            lifted = lifted.add(&CohClass::from_monomial(product, &Monomial(exps))?.scale(q))?;
        }
        terms.push((e, lifted));
    }
    let (lo, hi) = series.window();
    terms.push((lo, CohClass::zero(product)));
    terms.push((hi, CohClass::zero(product)));
    TLaurent::from_terms(terms)
}

fn raw_series(target: &Arc<Target>, beta: &CurveClass) -> Result<TLaurent<CohClass>> {
    if beta.is_zero() {
        return Ok(TLaurent::monomial(CohClass::unit(target), 0));
    }
    match target.kind() {
        TargetKind::ProjectiveSpace(r) => inverse_factor(target, 0, beta.0[0], r + 1),
        TargetKind::CompleteIntersection { n, degrees } => {
            let d = beta.0[0];
            let mut acc = inverse_factor(target, 0, d, n + 1)?;
            for &l in degrees {
                for k in 1..=(d * l) as i64 {
                    acc = acc.mul(&linear(target, 0, l as i64, k)?)?;
                }
            }
            Ok(acc)
        }
        TargetKind::Product(dims) => {
            let mut acc = TLaurent::monomial(CohClass::unit(target), 0);
            for (g, &r) in dims.iter().enumerate() {
                let factor = Target::projective_space(r)?;
                let j = raw_series(&factor, &CurveClass::degree(beta.0[g]))?;
                acc = acc.mul(&embed(&j, target, g)?)?;
            }
            Ok(acc)
        }
    }
}

/// `J^β_{0,1}(X)` expanded down to `t^{-order}` (default [`default_order`]).
pub fn j_function(
    target: &Arc<Target>,
    beta: &CurveClass,
    order: Option<i64>,
) -> Result<JFunction> {
    target.check_class(beta)?;
    let lead = -target.anticanonical_degree(beta);
    let order = order.unwrap_or_else(|| default_order(target, beta));
    if order < -lead {
        return Err(GwError::OrderTooSmall {
            order,
            needed: -lead,
        });
    }
    let series = raw_series(target, beta)?;
    if series.leading_exponent() != Some(lead) {
        return Err(GwError::Precondition(format!(
            "J-function of {target} at {beta} leads with {:?}, expected {lead}",
            series.leading_exponent()
        )));
    }
    Ok(JFunction {
        target: target.clone(),
        beta: beta.clone(),
        series: series.truncate_below(-order),
    })
}

/// `⟨ψ^a(γ)⟩_β`, the `t^{-2-a}` coefficient of `∫_X J^β ∧ γ`.
pub fn one_point_descendant(
    target: &Arc<Target>,
    beta: &CurveClass,
    a: u32,
    gamma: usize,
) -> Result<Rational> {
    if beta.is_zero() {
        return Err(GwError::UnstableDegreeZero(1));
    }
    let order = default_order(target, beta).max(a as i64 + 2);
    let j = j_function(target, beta, Some(order))?;
    pair_coefficient(&j, a, gamma)
}

fn pair_coefficient(j: &JFunction, a: u32, gamma: usize) -> Result<Rational> {
    let target = &j.target;
    let mut v = zero();
    let exp = -2 - a as i64;
    if exp > j.series.window().1 {
        return Ok(v);
    }
    if let Some(c) = j.series.coeff(exp)? {
        for (i, q) in c.terms() {
            if let Some(k) = target.mul_index(i, gamma) {
                v += q * target.integrate_index(k);
            }
        }
    }
    Ok(v)
}

/// `∫_{M̄_{0,n}} ψ_1^{a_1} … ψ_n^{a_n} = (n−3)!/∏ a_i!` when `Σ a_i = n − 3`.
pub fn psi_intersection(exps: &[u32]) -> Result<Rational> {
    let n = exps.len();
    if n < 3 {
        return Err(GwError::UnstableDegreeZero(n));
    }
    let s: u64 = exps.iter().map(|&a| a as u64).sum();
    if s != n as u64 - 3 {
        return Ok(zero());
    }
    Ok(exps
        .iter()
        .fold(factorial(n as u64 - 3), |acc, &a| acc / factorial(a as u64)))
}

/// `⟨ψ^{a_1}(γ_1), …, ψ^{a_n}(γ_n)⟩_0` from `J^0_{0,n} = Δ_n ∏t_i^{-2}(Σ t_i^{-1})^{n-3}`.
pub fn degree_zero_bracket(target: &Target, insertions: &[(usize, u32)]) -> Result<Rational> {
    let exps: Vec<u32> = insertions.iter().map(|&(_, a)| a).collect();
    let psi = psi_intersection(&exps)?;
    if psi.is_zero() {
        return Ok(psi);
    }
    let mut prod = Some(target.unit_index());
    for &(i, _) in insertions {
        prod = prod.and_then(|p| target.mul_index(p, i));
    }
    Ok(match prod {
        Some(k) => psi * target.integrate_index(k),
        None => zero(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductCheck {
    pub window: (i64, i64),
    pub mismatched_exponents: Vec<i64>,
}

impl ProductCheck {
    pub fn passed(&self) -> bool {
        self.mismatched_exponents.is_empty()
    }
}

/// Compares the tensor product of factor J-functions against a direct
/// expansion of `∏_g ∏_k (H_g + kt)^{-(r_g+1)}` in the product ring.
pub fn j_product_check(target: &Arc<Target>, beta: &CurveClass) -> Result<ProductCheck> {
    let TargetKind::Product(dims) = target.kind() else {
        return Err(GwError::UnsupportedTarget(format!(
            "{target} is not a product"
        )));
    };
    let tensor = j_function(target, beta, None)?;
    let mut direct = TLaurent::monomial(CohClass::unit(target), 0);
    for (g, &r) in dims.iter().enumerate() {
        direct = direct.mul(&inverse_factor(target, g, beta.0[g], r + 1)?)?;
    }
    let window = tensor.series.window();
    let direct = direct.truncate_below(window.0);
    let mut mismatched = Vec::new();
    for e in window.0..=window.1 {
        let a = tensor.coefficient(e)?;
        let b = direct
            .coeff(e)?
            .cloned()
            .unwrap_or_else(|| CohClass::zero(target));
        if a != b {
            mismatched.push(e);
        }
    }
    Ok(ProductCheck {
        window,
        mismatched_exponents: mismatched,
    })
}

/// J-functions cached per curve class.
#[derive(Debug)]
pub struct JCache {
    target: Arc<Target>,
    cache: RwLock<HashMap<CurveClass, Arc<JFunction>>>,
}

impl JCache {
    pub fn new(target: &Arc<Target>) -> Self {
        JCache {
            target: target.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, beta: &CurveClass, min_order: i64) -> Result<Arc<JFunction>> {
        if let Some(j) = self.cache.read().get(beta) {
            if -j.series.window().0 >= min_order {
                return Ok(j.clone());
            }
        }
        let order = default_order(&self.target, beta).max(min_order);
        let j = Arc::new(j_function(&self.target, beta, Some(order))?);
        self.cache.write().insert(beta.clone(), j.clone());
        Ok(j)
    }

    pub fn one_point(&self, beta: &CurveClass, a: u32, gamma: usize) -> Result<Rational> {
        if beta.is_zero() {
            return Err(GwError::UnstableDegreeZero(1));
        }
        pair_coefficient(&*self.get(beta, a as i64 + 2)?, a, gamma)
    }
}

/// Unit-class coefficient of `J^d(P^2)` at `t^{-3d}`.
pub fn p2_leading_coefficient(d: u32) -> Result<Rational> {
    let t = Target::projective_space(2)?;
    let j = j_function(&t, &CurveClass::degree(d), None)?;
    Ok(j.coefficient(-3 * d as i64)?
        .coefficient(t.unit_index())
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;
    use crate::target::parse_target;

    #[test]
    fn p2_degree_one_series() {
        let t = parse_target("P2").unwrap();
        let j = j_function(&t, &CurveClass::degree(1), None).unwrap();
        let rows: Vec<(i64, String, String)> = j
            .rows()
            .into_iter()
            .map(|(e, m, q)| (e, m.pretty(), q.to_string()))
            .collect();
        assert_eq!(
            rows,
            [
                (-3, "H^0".into(), "1".into()),
                (-4, "H^1".into(), "-3".into()),
                (-5, "H^2".into(), "6".into())
            ]
        );
    }

    #[test]
    fn degree_zero_is_one() {
        for spec in ["P2", "P1xP1", "CI:6:5"] {
            let t = parse_target(spec).unwrap();
            let j = j_function(&t, &CurveClass::zero(t.generators()), None).unwrap();
            assert_eq!(j.rows(), vec![(0, Monomial::unit(t.generators()), one())]);
        }
    }

    #[test]
    fn order_too_small() {
        let t = parse_target("P2").unwrap();
        assert!(matches!(
            j_function(&t, &CurveClass::degree(2), Some(5)),
            Err(GwError::OrderTooSmall {
                order: 5,
                needed: 6
            })
        ));
    }

    #[test]
    fn one_point_examples() {
        let t = parse_target("P2").unwrap();
        assert_eq!(
            one_point_descendant(&t, &CurveClass::degree(1), 1, 2).unwrap(),
            one()
        );
        assert_eq!(
            one_point_descendant(&t, &CurveClass::degree(2), 4, 2).unwrap(),
            ratio(1, 8)
        );
        assert_eq!(
            one_point_descendant(&t, &CurveClass::degree(1), 0, 2).unwrap(),
            zero()
        );
        assert!(one_point_descendant(&t, &CurveClass::degree(0), 0, 2).is_err());
    }

    #[test]
    fn psi_intersection_examples() {
        assert_eq!(psi_intersection(&[1, 0, 0, 0]).unwrap(), one());
        assert_eq!(psi_intersection(&[1, 1, 0, 0, 0]).unwrap(), int(2));
        assert_eq!(psi_intersection(&[2, 0, 0, 0]).unwrap(), zero());
        assert!(psi_intersection(&[0, 0]).is_err());
    }

    #[test]
    fn degree_zero_examples() {
        let t = parse_target("P2").unwrap();
        assert_eq!(
            degree_zero_bracket(&t, &[(0, 1), (0, 0), (0, 0), (2, 0)]).unwrap(),
            one()
        );
        assert_eq!(
            degree_zero_bracket(&t, &[(0, 0), (1, 0), (1, 0)]).unwrap(),
            one()
        );
        assert_eq!(
            degree_zero_bracket(&t, &[(1, 0), (1, 0), (1, 0)]).unwrap(),
            zero()
        );
    }

    #[test]
    fn cubic_threefold_lines_through_a_point() {
        let t = parse_target("CI:4:3").unwrap();
        let top = t.top_index();
        assert_eq!(
            one_point_descendant(&t, &CurveClass::degree(1), 0, top).unwrap(),
            int(18)
        );
    }
}
