//! Finite Laurent polynomials in `t` with an explicit validity window.
//!
//! A `TLaurent` knows its coefficients exactly for exponents in
//! `[lo, hi]`. Nothing lives above `hi`. Below `lo` the series is either
//! exactly zero (`exact`) or unknown because it was truncated. Asking for a
//! coefficient outside the window is an error.

use std::collections::BTreeMap;

use crate::cohomology::Coefficient;
use crate::error::{GwError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct TLaurent<C> {
    terms: BTreeMap<i64, C>,
    lo: i64,
    hi: i64,
    exact: bool,
}

impl<C: Coefficient> TLaurent<C> {
    /// `coeff * t^exp`, exact.
    pub fn monomial(coeff: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero_coeff() {
            terms.insert(exp, coeff);
        }
        TLaurent {
            terms,
            lo: exp,
            hi: exp,
            exact: true,
        }
    }

    /// Exact polynomial from `(exponent, coefficient)` pairs; the window is the
    /// span of the given exponents.
    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, C)>) -> Result<Self> {
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for (e, c) in pairs {
            lo = lo.min(e);
            hi = hi.max(e);
            match terms.remove(&e) {
                Some(prev) => {
                    let sum = prev.add_coeff(&c)?;
                    terms.insert(e, sum);
                }
                None => {
                    terms.insert(e, c);
                }
            }
        }
        if lo > hi {
            return Err(GwError::Precondition("empty Laurent polynomial".into()));
        }
        terms.retain(|_, c| !c.is_zero_coeff());
        Ok(TLaurent {
            terms,
            lo,
            hi,
            exact: true,
        })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `t^exp`; `None` means zero.
    pub fn coeff(&self, exp: i64) -> Result<Option<&C>> {
        if exp < self.lo || exp > self.hi {
            return Err(GwError::OutOfWindow {
                exp,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.terms.get(&exp))
    }

    /// Restrict the window to exponents `>= lo`; coefficients below become
    /// unknown. An exact series may also widen its window downwards.
    pub fn truncate_below(mut self, lo: i64) -> Self {
        let lo = if self.exact { lo } else { lo.max(self.lo) };
        self.terms = self.terms.split_off(&lo);
        self.lo = lo;
        self.exact = false;
        self
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.scale_coeff(q)))
            .filter(|(_, c)| !c.is_zero_coeff())
            .collect();
        TLaurent { terms, ..*self }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let hi = self.hi.max(other.hi);
        let (lo, exact) = match (self.exact, other.exact) {
            (true, true) => (self.lo.min(other.lo), true),
            (false, true) => (self.lo, false),
            (true, false) => (other.lo, false),
            (false, false) => (self.lo.max(other.lo), false),
        };
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let sum = match terms.remove(e) {
                Some(prev) => prev.add_coeff(c)?,
                None => c.clone(),
            };
            terms.insert(*e, sum);
        }
        terms.retain(|e, c| *e >= lo && !c.is_zero_coeff());
        Ok(TLaurent {
            terms,
            lo,
            hi,
            exact,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let hi = self.hi + other.hi;
        let (lo, exact) = match (self.exact, other.exact) {
            (true, true) => (self.lo + other.lo, true),
            (false, true) => (self.lo + other.hi, false),
            (true, false) => (other.lo + self.hi, false),
            (false, false) => ((self.lo + other.hi).max(other.lo + self.hi), false),
        };
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e = ea + eb;
                if e < lo {
                    continue;
                }
                let p = a.mul_coeff(b)?;
                let sum = match terms.remove(&e) {
                    Some(prev) => prev.add_coeff(&p)?,
                    None => p,
                };
                terms.insert(e, sum);
            }
        }
        terms.retain(|_, c| !c.is_zero_coeff());
        Ok(TLaurent {
            terms,
            lo,
            hi,
            exact,
        })
    }

    pub fn pow(&self, k: u32, one: C) -> Result<Self> {
        let mut acc = TLaurent::monomial(one, 0);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

pub fn laurent_mul<C: Coefficient>(f: &TLaurent<C>, g: &TLaurent<C>) -> Result<TLaurent<C>> {
    f.mul(g)
}

pub fn laurent_coeff<C: Coefficient>(f: &TLaurent<C>, exp: i64) -> Result<Option<&C>> {
    f.coeff(exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::CohClass;
    use crate::rational::{int, one};
    use crate::target::Target;

    #[test]
    fn inverse_t_squared() {
        let f = TLaurent::monomial(one(), -1);
        let g = f.mul(&f).unwrap();
        assert_eq!(g.window(), (-2, -2));
        assert_eq!(g.coeff(-2).unwrap(), Some(&one()));
    }

    #[test]
    fn coefficient_extraction_and_window() {
        let t = Target::projective_space(2).unwrap();
        let h = CohClass::divisor(&t, 0);
        let f = TLaurent::from_terms([(-3, CohClass::unit(&t)), (-4, h.scale(&int(-3)))]).unwrap();
        assert_eq!(f.coeff(-4).unwrap(), Some(&h.scale(&int(-3))));
        assert!(matches!(f.coeff(-5), Err(GwError::OutOfWindow { .. })));
        assert!(matches!(f.coeff(0), Err(GwError::OutOfWindow { .. })));
    }

    #[test]
    fn truncated_product_narrows_window() {
        let a = TLaurent::from_terms([(0, one()), (-1, one()), (-2, one()), (-3, one())])
            .unwrap()
            .truncate_below(-3);
        let b = TLaurent::from_terms([(0, one()), (-1, int(2))]).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.window(), (-3, 0));
        assert!(!p.is_exact());
        assert_eq!(p.coeff(-3).unwrap(), Some(&int(3)));
        let q = a.mul(&a).unwrap();
        assert_eq!(q.window(), (-3, 0));
        assert!(q.coeff(-4).is_err());
    }
}
