//! Insertion lists such as `2x11`, `(1,0),(1,1)`, `pt,pt` or `psi2:(1,0)`.

use gwsym::rational::one;
use gwsym::{GwError, Monomial, Rational, Result, Target};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub index: usize,
    pub psi: u32,
    /// `pt` is stored as the top monomial scaled by `1/∫top`.
    pub weight: Rational,
    pub label: String,
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(GwError::Parse(format!("unbalanced parentheses in {s:?}")));
        }
    }
    if depth != 0 {
        return Err(GwError::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_token(target: &Target, token: &str) -> Result<Vec<Insertion>> {
    let token = token.trim();
    let (psi, rest) = match token.strip_prefix("psi") {
        Some(r) => {
            let (a, m) = r
                .split_once(':')
                .ok_or_else(|| GwError::Parse(format!("bad descendant {token:?}")))?;
            (
                a.parse::<u32>()
                    .map_err(|_| GwError::Parse(format!("bad psi power in {token:?}")))?,
                m,
            )
        }
        None => (0, token),
    };
    let (mono, count) = match rest.rsplit_once('x') {
        Some((m, c)) if !m.is_empty() && !c.contains(')') => (
            m,
            c.parse::<usize>()
                .map_err(|_| GwError::Parse(format!("bad repeat count in {token:?}")))?,
        ),
        _ => (rest, 1),
    };
    let (index, weight, label) = if mono == "pt" {
        (
            target.top_index(),
            one() / target.top_integral(),
            "pt".to_string(),
        )
    } else {
        let m: Monomial = mono.parse()?;
        let i = target.index_of(&m)?;
        (i, one(), target.monomial(i).to_string())
    };
    let label = if psi > 0 {
        format!("psi{psi}:{label}")
    } else {
        label
    };
    Ok(vec![
        Insertion {
            index,
            psi,
            weight,
            label
        };
        count
    ])
}

pub fn parse_insertions(target: &Target, spec: &str) -> Result<Vec<Insertion>> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for token in split_top_level(spec)? {
        out.extend(parse_token(target, token)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gwsym::rational::ratio;
    use gwsym::target::parse_target;

    #[test]
    fn repeat_and_products() {
        let p2 = parse_target("P2").unwrap();
        let v = parse_insertions(&p2, "2x11").unwrap();
        assert_eq!(v.len(), 11);
        assert!(v.iter().all(|i| i.index == 2 && i.psi == 0));
        let q = parse_target("P1xP1").unwrap();
        let v = parse_insertions(&q, "(1,0),(1,1)x2,psi2:(0,1)").unwrap();
        let labels: Vec<&str> = v.iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, ["(1,0)", "(1,1)", "(1,1)", "psi2:(0,1)"]);
    }

    #[test]
    fn point_class_on_hypersurface() {
        let x = parse_target("CI:6:5").unwrap();
        let v = parse_insertions(&x, "pt,5").unwrap();
        assert_eq!(v[0].index, x.top_index());
        assert_eq!(v[0].weight, ratio(1, 5));
        assert_eq!(v[1].weight, one());
    }

    #[test]
    fn rejects_garbage() {
        let p2 = parse_target("P2").unwrap();
        for bad in ["3", "(1,0)", "2x", "psi:2", "psiq:2", "(2", "2)"] {
            assert!(parse_insertions(&p2, bad).is_err(), "{bad}");
        }
    }
}
