//! Supported targets and their divisor-generated cohomology basis.
//!
//! Cohomology is represented only through the subring generated by the
//! hyperplane classes `H_1..H_k`. For complete intersections of odd dimension
//! the primitive middle cohomology is dropped: every invariant computed here
//! has all insertions in that subring.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::invert_matrix;
use crate::error::{GwError, Result};
use crate::rational::{int, one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    ProjectiveSpace(u32),
    Product(Vec<u32>),
    CompleteIntersection { n: u32, degrees: Vec<u32> },
}

/// Exponent tuple in the divisor generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn codim(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn unit(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    /// Human-readable form, `H^2` or `H1^1*H2^0`.
    pub fn pretty(&self) -> String {
        if self.0.len() == 1 {
            format!("H^{}", self.0[0])
        } else {
            self.0
                .iter()
                .enumerate()
                .map(|(k, e)| format!("H{}^{}", k + 1, e))
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl FromStr for Monomial {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        let exps = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| GwError::Parse(format!("bad monomial {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial(exps))
    }
}

/// Effective curve class, one degree per divisor generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass(pub Vec<u32>);

impl CurveClass {
    pub fn new(degrees: &[i64]) -> Result<Self> {
        degrees
            .iter()
            .map(|&d| {
                u32::try_from(d)
                    .map_err(|_| GwError::InvalidCurveClass(format!("negative degree {d}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(CurveClass)
    }

    pub fn degree(d: u32) -> Self {
        CurveClass(vec![d])
    }

    pub fn zero(generators: usize) -> Self {
        CurveClass(vec![0; generators])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &CurveClass) -> Option<CurveClass> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(CurveClass)
    }

    /// Every effective `alpha` with `self - alpha` effective, in lexicographic order.
    pub fn sub_classes(&self) -> Vec<CurveClass> {
        let mut out = vec![Vec::new()];
        for &d in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=d).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(CurveClass).collect()
    }

    /// Swap factor order (used for product targets).
    pub fn reversed(&self) -> CurveClass {
        CurveClass(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CurveClass {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        let degrees = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| GwError::Parse(format!("bad degree {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CurveClass::new(&degrees)
    }
}

#[derive(Debug)]
pub struct Target {
    kind: TargetKind,
    dim: usize,
    max_exps: Vec<u32>,
    anticanonical: Vec<i64>,
    top_integral: Rational,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    mul: Vec<Vec<Option<usize>>>,
    top: usize,
    pairing: Vec<Vec<Rational>>,
    inverse: Vec<Vec<Rational>>,
    inverse_sparse: Vec<Vec<(usize, Rational)>>,
}

impl PartialEq for Target {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Target {}

impl Target {
    pub fn projective_space(r: u32) -> Result<Arc<Target>> {
        if r == 0 {
            return Err(GwError::UnsupportedTarget("P0".into()));
        }
        Self::build(
            TargetKind::ProjectiveSpace(r),
            vec![r],
            vec![r as i64 + 1],
            one(),
        )
    }

    pub fn product(dims: &[u32]) -> Result<Arc<Target>> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(GwError::UnsupportedTarget(format!("product of {dims:?}")));
        }
        let c1 = dims.iter().map(|&r| r as i64 + 1).collect();
        Self::build(TargetKind::Product(dims.to_vec()), dims.to_vec(), c1, one())
    }

    /// Complete intersection of multidegree `degrees` in `P^n`; only the Fano
    /// regime `sum(l) < n` with dimension at least 3 is accepted.
    pub fn complete_intersection(n: u32, degrees: &[u32]) -> Result<Arc<Target>> {
        let ls: Vec<String> = degrees.iter().map(u32::to_string).collect();
        let spec = format!("CI:{n}:{}", ls.join(","));
        let sum: u32 = degrees.iter().sum();
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(GwError::UnsupportedTarget(format!(
                "{spec}: empty or zero degree"
            )));
        }
        if sum >= n {
            return Err(GwError::UnsupportedTarget(format!(
                "{spec}: needs sum of degrees < n"
            )));
        }
        let dim = n as i64 - degrees.len() as i64;
        if dim < 3 {
            return Err(GwError::UnsupportedTarget(format!(
                "{spec}: dimension {dim} < 3"
            )));
        }
        let top: i64 = degrees.iter().map(|&l| l as i64).product();
        Self::build(
            TargetKind::CompleteIntersection {
                n,
                degrees: degrees.to_vec(),
            },
            vec![dim as u32],
            vec![(n + 1 - sum) as i64],
            int(top),
        )
    }

    fn build(
        kind: TargetKind,
        max_exps: Vec<u32>,
        anticanonical: Vec<i64>,
        top_integral: Rational,
    ) -> Result<Arc<Target>> {
        let mut basis = vec![Vec::new()];
        for &m in &max_exps {
            basis = basis
                .into_iter()
                .flat_map(|prefix| {
                    (0..=m).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        let basis: Vec<Monomial> = basis.into_iter().map(Monomial).collect();
        let index: HashMap<Monomial, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let dim = max_exps.iter().map(|&e| e as usize).sum();
        let top = index[&Monomial(max_exps.clone())];
        let mul = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let prod: Vec<u32> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                        if prod.iter().zip(&max_exps).any(|(e, m)| e > m) {
                            None
                        } else {
                            Some(index[&Monomial(prod)])
                        }
                    })
                    .collect()
            })
            .collect::<Vec<Vec<Option<usize>>>>();
        let pairing: Vec<Vec<Rational>> = mul
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        if *p == Some(top) {
                            top_integral.clone()
                        } else {
                            zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let inverse = invert_matrix(&pairing).ok_or(GwError::SingularPairing)?;
        let inverse_sparse = inverse
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Ok(Arc::new(Target {
            kind,
            dim,
            max_exps,
            anticanonical,
            top_integral,
            basis,
            index,
            mul,
            top,
            pairing,
            inverse,
            inverse_sparse,
        }))
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of divisor generators.
    pub fn generators(&self) -> usize {
        self.max_exps.len()
    }

    pub fn max_exponents(&self) -> &[u32] {
        &self.max_exps
    }

    pub fn top_integral(&self) -> &Rational {
        &self.top_integral
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn monomial(&self, idx: usize) -> &Monomial {
        &self.basis[idx]
    }

    pub fn index_of(&self, m: &Monomial) -> Result<usize> {
        self.index.get(m).copied().ok_or_else(|| {
            GwError::InvalidInsertion(format!("{m} is not a basis monomial of {self}"))
        })
    }

    pub fn codim(&self, idx: usize) -> usize {
        self.basis[idx].codim()
    }

    pub fn unit_index(&self) -> usize {
        0
    }

    pub fn top_index(&self) -> usize {
        self.top
    }

    /// Basis index of the generator `H_k`.
    pub fn divisor_index(&self, k: usize) -> usize {
        let mut e = vec![0; self.generators()];
        e[k] = 1;
        self.index[&Monomial(e)]
    }

    /// Generator number when `idx` is a bare divisor `H_k`.
    pub fn as_divisor(&self, idx: usize) -> Option<usize> {
        let m = &self.basis[idx];
        if m.codim() == 1 {
            m.0.iter().position(|&e| e == 1)
        } else {
            None
        }
    }

    /// Product of two basis monomials, `None` when it vanishes.
    pub fn mul_index(&self, a: usize, b: usize) -> Option<usize> {
        self.mul[a][b]
    }

    pub fn pairing(&self) -> &[Vec<Rational>] {
        &self.pairing
    }

    pub fn inverse_pairing(&self) -> &[Vec<Rational>] {
        &self.inverse
    }

    /// Nonzero entries `(j, g^{ij})` of row `i` of the inverse pairing.
    pub fn inverse_row(&self, i: usize) -> &[(usize, Rational)] {
        &self.inverse_sparse[i]
    }

    /// `∫_X` of a basis monomial.
    pub fn integrate_index(&self, idx: usize) -> Rational {
        if idx == self.top {
            self.top_integral.clone()
        } else {
            zero()
        }
    }

    pub fn anticanonical_degree(&self, beta: &CurveClass) -> i64 {
        self.anticanonical
            .iter()
            .zip(&beta.0)
            .map(|(c, &d)| c * d as i64)
            .sum()
    }

    pub fn check_class(&self, beta: &CurveClass) -> Result<()> {
        if beta.0.len() != self.generators() {
            return Err(GwError::InvalidCurveClass(format!(
                "{self} needs {} degrees, got {beta}",
                self.generators()
            )));
        }
        Ok(())
    }

    pub fn is_projective_space(&self) -> bool {
        matches!(self.kind, TargetKind::ProjectiveSpace(_))
    }

    /// Factor-exchange permutation of basis indices for a two-factor product.
    pub fn swapped_index(&self, idx: usize) -> usize {
        let rev: Vec<u32> = self.basis[idx].0.iter().rev().copied().collect();
        self.index[&Monomial(rev)]
    }
}

/// `dim X - K_X·β + n - 3`.
pub fn virtual_dimension(target: &Target, beta: &CurveClass, n: usize) -> i64 {
    target.dim as i64 + target.anticanonical_degree(beta) + n as i64 - 3
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TargetKind::ProjectiveSpace(r) => write!(f, "P{r}"),
            TargetKind::Product(rs) => {
                let parts: Vec<String> = rs.iter().map(|r| format!("P{r}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            TargetKind::CompleteIntersection { n, degrees } => {
                let parts: Vec<String> = degrees.iter().map(|l| l.to_string()).collect();
                write!(f, "CI:{n}:{}", parts.join(","))
            }
        }
    }
}

/// Parses `P<r>`, `P<r>xP<s>[x...]` or `CI:<n>:<l1,l2,...>`.
pub fn parse_target(spec: &str) -> Result<Arc<Target>> {
    let spec = spec.trim();
    let bad = || GwError::Parse(format!("bad target spec {spec:?}"));
    if let Some(rest) = spec.strip_prefix("CI:") {
        let (n, ls) = rest.split_once(':').ok_or_else(bad)?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let ls = ls
            .split(',')
            .map(|l| l.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        return Target::complete_intersection(n, &ls);
    }
    let dims = spec
        .split(['x', 'X'])
        .map(|f| {
            f.strip_prefix('P')
                .ok_or_else(bad)
                .and_then(|r| r.parse::<u32>().map_err(|_| bad()))
        })
        .collect::<Result<Vec<_>>>()?;
    match dims.as_slice() {
        [r] => Target::projective_space(*r),
        _ => Target::product(&dims),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virtual_dimension_examples() {
        let p2 = Target::projective_space(2).unwrap();
        assert_eq!(virtual_dimension(&p2, &CurveClass::degree(1), 2), 4);
        let quintic = Target::complete_intersection(6, &[5]).unwrap();
        assert_eq!(virtual_dimension(&quintic, &CurveClass::degree(3), 2), 10);
        let p1p1 = Target::product(&[1, 1]).unwrap();
        assert_eq!(virtual_dimension(&p1p1, &CurveClass(vec![1, 1]), 2), 5);
    }

    #[test]
    fn rejects_unsupported_complete_intersections() {
        assert!(Target::complete_intersection(4, &[5]).is_err());
        assert!(Target::complete_intersection(5, &[2, 3]).is_err());
        assert!(
            Target::complete_intersection(4, &[2, 2]).is_err(),
            "dimension 2"
        );
        assert!(Target::complete_intersection(4, &[3]).is_ok());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["P2", "P1xP1", "P2xP1", "CI:6:5", "CI:7:2,3"] {
            assert_eq!(parse_target(s).unwrap().to_string(), s);
        }
        assert!(matches!(parse_target("Q3"), Err(GwError::Parse(_))));
        assert!(matches!(
            parse_target("CI:5:5"),
            Err(GwError::UnsupportedTarget(_))
        ));
    }

    #[test]
    fn basis_is_in_canonical_order() {
        let t = Target::product(&[1, 2]).unwrap();
        let b: Vec<String> = t.basis().iter().map(|m| m.to_string()).collect();
        assert_eq!(b, ["(0,0)", "(0,1)", "(0,2)", "(1,0)", "(1,1)", "(1,2)"]);
        assert_eq!(t.dim(), 3);
        assert_eq!(t.monomial(t.top_index()).to_string(), "(1,2)");
    }

    #[test]
    fn sub_classes_enumerates_box() {
        let b = CurveClass(vec![1, 2]);
        assert_eq!(b.sub_classes().len(), 6);
        assert!(CurveClass::new(&[-1]).is_err());
    }
}
