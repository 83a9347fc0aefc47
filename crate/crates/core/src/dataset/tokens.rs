//! Prefix token encoding of polynomial sets. The grammar is written out in
//! `docs/tokens.md`; in short:
//!
//! ```text
//! set    := BOS poly (SEP poly)* EOS
//! poly   := "C0" | ("+" term)+
//! term   := "*"^k coeff factor^k        (k = number of variables present)
//! factor := "^" x<i> E<e>
//! coeff  := C<r>                        (prime fields, 0 <= r < p)
//!         | (POS | NEG) N<a> D<b>       (rationals, a/b in lowest terms)
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::Field;
use crate::poly::{PolySet, Polynomial, Ring, Term};

pub const BOS: &str = "BOS";
pub const EOS: &str = "EOS";
pub const SEP: &str = "SEP";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("token {pos}: {msg}")]
pub struct TokenError {
    pub pos: usize,
    pub msg: String,
}

fn push_coeff<C: Field>(c: &C, out: &mut Vec<String>) {
    if C::spec().is_finite() {
        let (num, _) = c.to_ratio();
        out.push(format!("C{num}"));
    } else {
        let (num, den) = c.to_ratio();
        out.push(if num.is_negative() { "NEG" } else { "POS" }.to_string());
        out.push(format!("N{}", num.abs()));
        out.push(format!("D{den}"));
    }
}

/// Tokens of one polynomial, terms in descending order of its ring.
pub fn poly_tokens<C: Field>(p: &Polynomial<C>, out: &mut Vec<String>) {
    if p.is_zero() {
        out.push("C0".to_string());
        return;
    }
    for (c, t) in p.terms() {
        out.push("+".to_string());
        let k = t.exps().iter().filter(|&&e| e > 0).count();
        out.extend(std::iter::repeat_n("*".to_string(), k));
        push_coeff(c, out);
        for (i, &e) in t.exps().iter().enumerate() {
            if e > 0 {
                out.push("^".to_string());
                out.push(format!("x{i}"));
                out.push(format!("E{e}"));
            }
        }
    }
}

pub fn to_prefix_tokens<C: Field>(set: &[Polynomial<C>]) -> Vec<String> {
    let mut out = vec![BOS.to_string()];
    for (i, p) in set.iter().enumerate() {
        if i > 0 {
            out.push(SEP.to_string());
        }
        poly_tokens(p, &mut out);
    }
    out.push(EOS.to_string());
    out
}

struct Cursor<'a> {
    toks: &'a [&'a str],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, TokenError> {
        let t = self.peek().ok_or_else(|| self.err("unexpected end of tokens"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<(), TokenError> {
        let at = self.pos;
        let t = self.next()?;
        if t != want {
            return Err(TokenError {
                pos: at,
                msg: format!("expected `{want}`, found `{t}`"),
            });
        }
        Ok(())
    }

    fn err(&self, msg: &str) -> TokenError {
        TokenError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn number(&mut self, prefix: char) -> Result<BigInt, TokenError> {
        let at = self.pos;
        let t = self.next()?;
        t.strip_prefix(prefix)
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<BigInt>().ok())
            .ok_or_else(|| TokenError {
                pos: at,
                msg: format!("expected {prefix}<digits>, found `{t}`"),
            })
    }
}

fn parse_coeff<C: Field>(cur: &mut Cursor<'_>) -> Result<C, TokenError> {
    let at = cur.pos;
    let bad = |msg: String| TokenError { pos: at, msg };
    if let Some(p) = C::spec().modulus() {
        let r = cur.number('C')?;
        if r >= BigInt::from(p) {
            return Err(bad(format!("residue {r} is not below {p}")));
        }
        if r.is_zero() {
            return Err(bad("zero coefficient inside a term".into()));
        }
        return C::from_ratio(&r, &BigInt::one()).map_err(|e| bad(e.to_string()));
    }
    let sign = cur.next()?;
    let neg = match sign {
        "POS" => false,
        "NEG" => true,
        other => return Err(bad(format!("expected POS or NEG, found `{other}`"))),
    };
    let a = cur.number('N')?;
    let b = cur.number('D')?;
    if a.is_zero() {
        return Err(bad("zero coefficient inside a term".into()));
    }
    let c = C::from_ratio(&a, &b).map_err(|e| bad(e.to_string()))?;
    Ok(if neg { -c } else { c })
}

fn parse_term<C: Field>(ring: Ring, cur: &mut Cursor<'_>) -> Result<(C, Term), TokenError> {
    let mut k = 0;
    while cur.peek() == Some("*") {
        cur.pos += 1;
        k += 1;
    }
    let c = parse_coeff::<C>(cur)?;
    let mut exps = vec![0u32; ring.nvars];
    let mut last: Option<usize> = None;
    for _ in 0..k {
        cur.expect("^")?;
        let at = cur.pos;
        let t = cur.next()?;
        let v = t
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&v| v < ring.nvars)
            .ok_or_else(|| TokenError {
                pos: at,
                msg: format!("expected a variable x0..x{}, found `{t}`", ring.nvars - 1),
            })?;
        if last.is_some_and(|l| l >= v) {
            return Err(TokenError {
                pos: at,
                msg: "variables must appear in increasing index order".into(),
            });
        }
        last = Some(v);
        let at = cur.pos;
        let e = cur.number('E')?;
        exps[v] = u32::try_from(&e)
            .ok()
            .filter(|&e| e > 0)
            .ok_or_else(|| TokenError {
                pos: at,
                msg: format!("exponent {e} out of range"),
            })?;
    }
    Ok((c, Term::new(exps)))
}

fn parse_poly_tokens<C: Field>(ring: Ring, cur: &mut Cursor<'_>) -> Result<Polynomial<C>, TokenError> {
    if cur.peek() == Some("C0") {
        cur.pos += 1;
        return Ok(Polynomial::zero(ring));
    }
    let start = cur.pos;
    let mut terms: Vec<(C, Term)> = Vec::new();
    while cur.peek() == Some("+") {
        cur.pos += 1;
        terms.push(parse_term(ring, cur)?);
    }
    if terms.is_empty() {
        return Err(TokenError {
            pos: start,
            msg: format!("expected `+` or `C0`, found `{}`", cur.peek().unwrap_or("end of tokens")),
        });
    }
    let p = Polynomial::from_terms(ring, terms.clone());
    if p.len() != terms.len() || p.terms().iter().zip(&terms).any(|(a, b)| a.1 != b.1) {
        return Err(TokenError {
            pos: start,
            msg: "terms are repeated or not in descending order".into(),
        });
    }
    Ok(p)
}

/// Inverse of [`to_prefix_tokens`]; rejects non-canonical streams.
pub fn parse_prefix_tokens<C: Field, S: AsRef<str>>(ring: Ring, tokens: &[S]) -> Result<PolySet<C>, TokenError> {
    let toks: Vec<&str> = tokens.iter().map(|s| s.as_ref()).collect();
    let mut cur = Cursor { toks: &toks, pos: 0 };
    cur.expect(BOS)?;
    let mut out = Vec::new();
    if cur.peek() == Some(EOS) {
        cur.pos += 1;
    } else {
        loop {
            out.push(parse_poly_tokens(ring, &mut cur)?);
            let at = cur.pos;
            match cur.next()? {
                t if t == SEP => continue,
                t if t == EOS => break,
                other => {
                    return Err(TokenError {
                        pos: at,
                        msg: format!("expected SEP or EOS, found `{other}`"),
                    })
                }
            }
        }
    }
    if cur.pos != toks.len() {
        return Err(cur.err("trailing tokens after EOS"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, TermOrder};
    use crate::{Rational, F7};

    fn lex2() -> Ring {
        Ring::new(2, TermOrder::Lex)
    }

    #[test]
    fn documented_examples() {
        let r = lex2();
        let mut out = Vec::new();
        poly_tokens(&Polynomial::<F7>::zero(r), &mut out);
        assert_eq!(out, ["C0"]);
        out.clear();
        poly_tokens(&parse_poly::<F7>(r, "x1^3").unwrap(), &mut out);
        assert_eq!(out.join(" "), "+ * C1 ^ x1 E3");
        let q: Polynomial<Rational> = parse_poly(r, "-2/5*x0^2*x1 + 3").unwrap();
        let toks = to_prefix_tokens(&[q]);
        assert_eq!(toks.join(" "), "BOS + * * NEG N2 D5 ^ x0 E2 ^ x1 E1 + POS N3 D1 EOS");
        let p = parse_poly::<F7>(r, "x0 - 3*x1^4 + 2").unwrap();
        assert_eq!(to_prefix_tokens(&[p]).join(" "), "BOS + * C1 ^ x0 E1 + * C4 ^ x1 E4 + C2 EOS");
        let g: Vec<Polynomial<Rational>> = ["x0 - 5/3", "x1"].iter().map(|s| parse_poly(r, s).unwrap()).collect();
        assert_eq!(
            to_prefix_tokens(&g).join(" "),
            "BOS + * POS N1 D1 ^ x0 E1 + NEG N5 D3 SEP + * POS N1 D1 ^ x1 E1 EOS"
        );
    }

    #[test]
    fn round_trip_and_errors() {
        let r = lex2();
        let set: Vec<Polynomial<F7>> = ["x0 - 3*x1", "0", "x1^3 + 2"].iter().map(|s| parse_poly(r, s).unwrap()).collect();
        let toks = to_prefix_tokens(&set);
        assert_eq!(parse_prefix_tokens::<F7, _>(r, &toks).unwrap(), set);
        assert_eq!(parse_prefix_tokens::<F7, _>(r, &["BOS", "EOS"]).unwrap(), vec![]);
        let bad: Vec<(Vec<&str>, usize)> = vec![
            (vec!["BOS", "+", "C9", "EOS"], 2),
            (vec!["BOS", "+", "*", "C1", "^", "x2", "E1", "EOS"], 5),
            (vec!["BOS", "C0", "C0"], 2),
            (vec!["BOS", "+", "C1", "+", "C2", "EOS"], 1),
            (vec!["+", "C1"], 0),
            (vec!["BOS", "C0", "EOS", "EOS"], 3),
        ];
        for (toks, at) in bad {
            let e = parse_prefix_tokens::<F7, _>(r, &toks).unwrap_err();
            assert_eq!(e.pos, at, "{toks:?}: {e}");
        }
    }
}
