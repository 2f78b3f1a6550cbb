//! Canonical bracket keys.

use std::fmt;
use std::sync::Arc;

use crate::error::{GwError, Result};
use crate::target::{parse_target, CurveClass, Monomial, Target};

/// `⟨ψ^{a_1}(γ_1), …, ψ^{a_n}(γ_n)⟩_β` with insertions sorted by
/// `(exponent tuple, ψ-power)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub target: Arc<Target>,
    pub beta: CurveClass,
    insertions: Vec<(usize, u32)>,
}

impl Bracket {
    pub fn new(
        target: &Arc<Target>,
        beta: CurveClass,
        insertions: &[(Monomial, u32)],
    ) -> Result<Self> {
        target.check_class(&beta)?;
        let ins = insertions
            .iter()
            .map(|(m, a)| Ok((target.index_of(m)?, *a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(target, beta, ins))
    }

    /// Ordinary bracket from basis indices.
    pub fn ordinary(target: &Arc<Target>, beta: CurveClass, classes: &[usize]) -> Self {
        Self::from_indices(target, beta, classes.iter().map(|&i| (i, 0)).collect())
    }

    pub fn from_indices(
        target: &Arc<Target>,
        beta: CurveClass,
        mut insertions: Vec<(usize, u32)>,
    ) -> Self {
        insertions.sort_unstable();
        Bracket {
            target: target.clone(),
            beta,
            insertions,
        }
    }

    pub fn insertions(&self) -> &[(usize, u32)] {
        &self.insertions
    }

    pub fn len(&self) -> usize {
        self.insertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.insertions.is_empty()
    }

    pub fn is_ordinary(&self) -> bool {
        self.insertions.iter().all(|&(_, a)| a == 0)
    }

    /// Total codimension plus ψ-powers.
    pub fn degree(&self) -> i64 {
        self.insertions
            .iter()
            .map(|&(i, a)| (self.target.codim(i) + a as usize) as i64)
            .sum()
    }

    pub fn key(&self) -> String {
        render_key(&self.target, &self.beta, self.insertions.iter().copied())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (target, beta, ins) = parse_key(s)?;
        Ok(Self::from_indices(&target, beta, ins))
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Bracket with at most one descendant slot `ψ^a(γ)`, `a ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescBracket {
    pub target: Arc<Target>,
    pub beta: CurveClass,
    plain: Vec<usize>,
    descendant: Option<(usize, u32)>,
}

impl DescBracket {
    pub fn new(
        target: &Arc<Target>,
        beta: CurveClass,
        plain: &[usize],
        descendant: Option<(usize, u32)>,
    ) -> Result<Self> {
        target.check_class(&beta)?;
        let n = target.basis_len();
        if let Some(&bad) = plain.iter().find(|&&i| i >= n) {
            return Err(GwError::InvalidInsertion(format!(
                "basis index {bad} out of range"
            )));
        }
        if let Some((i, _)) = descendant {
            if i >= n {
                return Err(GwError::InvalidInsertion(format!(
                    "basis index {i} out of range"
                )));
            }
        }
        let mut plain = plain.to_vec();
        let descendant = match descendant {
            Some((i, 0)) => {
                plain.push(i);
                None
            }
            d => d,
        };
        plain.sort_unstable();
        Ok(DescBracket {
            target: target.clone(),
            beta,
            plain,
            descendant,
        })
    }

    /// From a general bracket; fails on two or more ψ-insertions.
    pub fn from_bracket(b: &Bracket) -> Result<Self> {
        let mut plain = Vec::new();
        let mut desc = None;
        for &(i, a) in b.insertions() {
            if a == 0 {
                plain.push(i);
            } else if desc.replace((i, a)).is_some() {
                return Err(GwError::TooManyDescendants);
            }
        }
        Self::new(&b.target, b.beta.clone(), &plain, desc)
    }

    pub fn to_bracket(&self) -> Bracket {
        let mut ins: Vec<(usize, u32)> = self.plain.iter().map(|&i| (i, 0)).collect();
        ins.extend(self.descendant);
        Bracket::from_indices(&self.target, self.beta.clone(), ins)
    }

    pub fn plain(&self) -> &[usize] {
        &self.plain
    }

    pub fn descendant(&self) -> Option<(usize, u32)> {
        self.descendant
    }

    pub fn len(&self) -> usize {
        self.plain.len() + self.descendant.is_some() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Plain insertions first, the descendant last.
    pub fn key(&self) -> String {
        let plain = self.plain.iter().map(|&i| (i, 0));
        render_key(&self.target, &self.beta, plain.chain(self.descendant))
    }
}

impl fmt::Display for DescBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// `<target>|<beta>|<insertion>;<insertion>;…` where an insertion is a
/// monomial (`2`, `(1,0)`) or `psi<a>:<monomial>`.
pub fn render_key(
    target: &Target,
    beta: &CurveClass,
    ins: impl Iterator<Item = (usize, u32)>,
) -> String {
    let parts: Vec<String> = ins
        .map(|(i, a)| {
            let m = target.monomial(i);
            if a == 0 {
                m.to_string()
            } else {
                format!("psi{a}:{m}")
            }
        })
        .collect();
    format!("{target}|{beta}|{}", parts.join(";"))
}

pub fn parse_key(s: &str) -> Result<(Arc<Target>, CurveClass, Vec<(usize, u32)>)> {
    let mut fields = s.split('|');
    let (Some(t), Some(b), Some(ins), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err(GwError::Parse(format!("bad bracket key {s:?}")));
    };
    let target = parse_target(t)?;
    let beta: CurveClass = b.parse()?;
    target.check_class(&beta)?;
    let ins = if ins.is_empty() {
        Vec::new()
    } else {
        ins.split(';')
            .map(|p| parse_insertion(&target, p))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((target, beta, ins))
}

/// `2`, `(1,0)` or `psi<a>:<monomial>`.
pub fn parse_insertion(target: &Target, s: &str) -> Result<(usize, u32)> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("psi") {
        let (a, m) = rest
            .split_once(':')
            .ok_or_else(|| GwError::Parse(format!("bad descendant {s:?}")))?;
        let a: u32 = a
            .parse()
            .map_err(|_| GwError::Parse(format!("bad psi power in {s:?}")))?;
        Ok((target.index_of(&m.parse()?)?, a))
    } else {
        Ok((target.index_of(&s.parse()?)?, 0))
    }
}
