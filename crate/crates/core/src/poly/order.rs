use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PolyError, Term};

/// Monomial orders. `x0 > x1 > ... > x{n-1}` under all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    /// Lexicographic.
    Lex,
    /// Total degree, ties broken lexicographically.
    GrLex,
    /// Total degree, ties broken by the smallest exponent in the last
    /// differing variable.
    GrevLex,
}

impl TermOrder {
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        debug_assert_eq!(a.arity(), b.arity());
        match self {
            TermOrder::Lex => a.exps().cmp(b.exps()),
            TermOrder::GrLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.exps().cmp(b.exps())),
            TermOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.exps().iter().zip(b.exps()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Compares two terms, checking that their arities agree.
pub fn compare_terms(order: TermOrder, a: &Term, b: &Term) -> Result<Ordering, PolyError> {
    if a.arity() != b.arity() {
        return Err(PolyError::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(order.cmp(a, b))
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermOrder::Lex => "lex",
            TermOrder::GrLex => "grlex",
            TermOrder::GrevLex => "grevlex",
        })
    }
}

impl FromStr for TermOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lex" | "plex" => Ok(TermOrder::Lex),
            "grlex" | "deglex" => Ok(TermOrder::GrLex),
            "grevlex" | "grvlex" | "degrevlex" => Ok(TermOrder::GrevLex),
            other => Err(format!("unknown term order `{other}` (lex, grlex, grevlex)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t<const N: usize>(e: [u32; N]) -> Term {
        Term::new(e)
    }

    #[test]
    fn textbook_comparisons() {
        // x2 vs x3^2 in four variables.
        let x2 = t([0, 0, 1, 0]);
        let x3_sq = t([0, 0, 0, 2]);
        assert_eq!(TermOrder::Lex.cmp(&x2, &x3_sq), Ordering::Greater);
        assert_eq!(TermOrder::GrLex.cmp(&x2, &x3_sq), Ordering::Less);
        // x1*x2*x3^2 vs x1*x2^2*x3.
        let a = t([0, 1, 1, 2]);
        let b = t([0, 1, 2, 1]);
        assert_eq!(TermOrder::Lex.cmp(&a, &b), Ordering::Less);
        for order in [TermOrder::Lex, TermOrder::GrLex, TermOrder::GrevLex] {
            assert_eq!(order.cmp(&Term::one(4), &t([0, 0, 0, 1])), Ordering::Less);
            assert_eq!(order.cmp(&a, &a), Ordering::Equal);
        }
    }

    #[test]
    fn grevlex_differs_from_grlex() {
        // x0*x2^2 vs x1^3: grlex favours x0, grevlex penalises the x2 power.
        let a = t([1, 0, 2]);
        let b = t([0, 3, 0]);
        assert_eq!(TermOrder::GrLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::GrevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn arity_checked() {
        let r = compare_terms(TermOrder::Lex, &Term::one(2), &Term::one(3));
        assert_eq!(r, Err(PolyError::ArityMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn parse_names() {
        assert_eq!("grvlex".parse::<TermOrder>().unwrap(), TermOrder::GrevLex);
        assert_eq!("LEX".parse::<TermOrder>().unwrap(), TermOrder::Lex);
        assert!("weird".parse::<TermOrder>().is_err());
    }
}
