//! Classes in the divisor subring and the Poincaré pairing.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{GwError, Result};
use crate::rational::{zero, Rational};
use crate::target::{Monomial, Target};

/// A class in `W(X)`, stored densely over the target's monomial basis.
#[derive(Clone)]
pub struct CohClass {
    target: Arc<Target>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass({})", self)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(i, c)| format!("{}*{}", c, self.target.monomial(i).pretty()))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        *self.target == *other.target && self.coeffs == other.coeffs
    }
}

impl CohClass {
    pub fn zero(target: &Arc<Target>) -> Self {
        CohClass {
            target: target.clone(),
            coeffs: vec![zero(); target.basis_len()],
        }
    }

    pub fn unit(target: &Arc<Target>) -> Self {
        Self::basis(target, target.unit_index())
    }

    pub fn basis(target: &Arc<Target>, idx: usize) -> Self {
        let mut c = Self::zero(target);
        c.coeffs[idx] = Rational::one();
        c
    }

    pub fn from_monomial(target: &Arc<Target>, m: &Monomial) -> Result<Self> {
        Ok(Self::basis(target, target.index_of(m)?))
    }

    /// Generator `H_k`.
    pub fn divisor(target: &Arc<Target>, k: usize) -> Self {
        Self::basis(target, target.divisor_index(k))
    }

    pub fn target(&self) -> &Arc<Target> {
        &self.target
    }

    pub fn coefficient(&self, idx: usize) -> &Rational {
        &self.coeffs[idx]
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero `(basis index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_target(&self, other: &CohClass) -> Result<()> {
        if Arc::ptr_eq(&self.target, &other.target) || *self.target == *other.target {
            Ok(())
        } else {
            Err(GwError::MismatchedTarget)
        }
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        self.same_target(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CohClass {
            target: self.target.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, q: &Rational) -> CohClass {
        CohClass {
            target: self.target.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn cup(&self, other: &CohClass) -> Result<CohClass> {
        self.same_target(other)?;
        let mut out = CohClass::zero(&self.target);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                if let Some(k) = self.target.mul_index(i, j) {
                    out.coeffs[k] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of the top monomial times `∫_X` of it.
    pub fn integrate(&self) -> Rational {
        &self.coeffs[self.target.top_index()] * self.target.top_integral()
    }

    /// Homogeneous component of the given codimension.
    pub fn graded_part(&self, codim: usize) -> CohClass {
        let mut out = CohClass::zero(&self.target);
        for (i, c) in self.terms() {
            if self.target.codim(i) == codim {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }
}

pub fn cup(a: &CohClass, b: &CohClass) -> Result<CohClass> {
    a.cup(b)
}

pub fn integrate(a: &CohClass) -> Rational {
    a.integrate()
}

/// `(g, g^{-1})` over the monomial basis.
pub fn pairing_matrix(target: &Target) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    (target.pairing().to_vec(), target.inverse_pairing().to_vec())
}

/// Exact Gauss-Jordan inverse; `None` when singular.
pub fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// Coefficient ring for [`crate::laurent::TLaurent`].
pub trait Coefficient: Clone + fmt::Debug {
    fn is_zero_coeff(&self) -> bool;
    fn add_coeff(&self, other: &Self) -> Result<Self>;
    fn mul_coeff(&self, other: &Self) -> Result<Self>;
    fn scale_coeff(&self, q: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn add_coeff(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }

    fn mul_coeff(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }

    fn scale_coeff(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Coefficient for CohClass {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn add_coeff(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }

    fn mul_coeff(&self, other: &Self) -> Result<Self> {
        self.cup(other)
    }

    fn scale_coeff(&self, q: &Rational) -> Self {
        self.scale(q)
    }
}
