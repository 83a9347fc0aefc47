use num_bigint::BigInt;
use num_traits::One;

use super::{PolyError, Polynomial, Ring, Term};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

/// Parses `x0^2*x1 + 2/5*x1^3 - 1` and looser variants: `x_0`, `x_{10}`,
/// `^{10}`, implicit multiplication by juxtaposition, repeated factors.
pub fn parse_poly<C: Field>(ring: Ring, src: &str) -> Result<Polynomial<C>, PolyError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let (pos0, ref t0) = toks[i];
        let negative = match t0 {
            Tok::Plus => {
                i += 1;
                false
            }
            Tok::Minus => {
                i += 1;
                true
            }
            _ if first => false,
            _ => return Err(err(pos0, "expected `+` or `-` between terms")),
        };
        first = false;
        let (term, next) = parse_term::<C>(ring, &toks, i, src.len())?;
        i = next;
        let (c, t) = term;
        terms.push((if negative { -c } else { c }, t));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

fn parse_term<C: Field>(
    ring: Ring,
    toks: &[(usize, Tok)],
    mut i: usize,
    end: usize,
) -> Result<((C, Term), usize), PolyError> {
    let mut coeff = C::one();
    let mut exps = vec![0u32; ring.nvars];
    let mut factors = 0;
    loop {
        let Some((pos, tok)) = toks.get(i) else {
            break;
        };
        match tok {
            Tok::Num(a) => {
                i += 1;
                let mut den = BigInt::one();
                if let Some((_, Tok::Slash)) = toks.get(i) {
                    match toks.get(i + 1) {
                        Some((_, Tok::Num(b))) => {
                            den = b.clone();
                            i += 2;
                        }
                        Some((p, _)) => return Err(err(*p, "expected a denominator")),
                        None => return Err(err(end, "expected a denominator")),
                    }
                }
                let c = C::from_ratio(a, &den).map_err(|e| err(*pos, &e.to_string()))?;
                coeff = coeff.mul_ref(&c);
            }
            Tok::Var(v) => {
                if *v >= ring.nvars {
                    return Err(err(
                        *pos,
                        &format!("variable x{v} out of range for {} variables", ring.nvars),
                    ));
                }
                i += 1;
                let mut e = 1u32;
                if let Some((_, Tok::Caret)) = toks.get(i) {
                    match toks.get(i + 1) {
                        Some((p, Tok::Num(k))) => {
                            e = u32::try_from(k).map_err(|_| err(*p, "exponent too large"))?;
                            i += 2;
                        }
                        Some((p, _)) => return Err(err(*p, "expected an exponent")),
                        None => return Err(err(end, "expected an exponent")),
                    }
                }
                exps[*v] += e;
            }
            _ => break,
        }
        factors += 1;
        match toks.get(i) {
            Some((_, Tok::Star)) => {
                i += 1;
                if !matches!(toks.get(i), Some((_, Tok::Num(_) | Tok::Var(_)))) {
                    let p = toks.get(i).map_or(end, |(p, _)| *p);
                    return Err(err(p, "expected a factor after `*`"));
                }
            }
            Some((_, Tok::Num(_) | Tok::Var(_))) => {}
            _ => break,
        }
    }
    if factors == 0 {
        let p = toks.get(i).map_or(end, |(p, _)| *p);
        return Err(err(p, "expected a term"));
    }
    if let Some((p, t)) = toks.get(i) {
        if !matches!(t, Tok::Plus | Tok::Minus) {
            return Err(err(*p, "unexpected token"));
        }
    }
    Ok(((coeff, Term::new(exps)), i))
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((start, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((start, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((start, Tok::Star));
                i += 1;
            }
            b'/' => {
                out.push((start, Tok::Slash));
                i += 1;
            }
            b'^' => {
                out.push((start, Tok::Caret));
                i += 1;
                let (n, next) = braced_number(src, i)?;
                out.push((i, Tok::Num(n)));
                i = next;
            }
            b'0'..=b'9' => {
                let (n, next) = digits(src, i)?;
                out.push((start, Tok::Num(n)));
                i = next;
            }
            b'x' | b'X' => {
                i += 1;
                if bytes.get(i) == Some(&b'_') {
                    i += 1;
                }
                let (n, next) = braced_number(src, i)?;
                let v = usize::try_from(&n).map_err(|_| err(start, "variable index too large"))?;
                out.push((start, Tok::Var(v)));
                i = next;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(err(i, &format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

fn braced_number(src: &str, mut i: usize) -> Result<(BigInt, usize), PolyError> {
    let bytes = src.as_bytes();
    while bytes.get(i) == Some(&b' ') {
        i += 1;
    }
    if bytes.get(i) == Some(&b'{') {
        let (n, next) = digits(src, i + 1)?;
        if bytes.get(next) != Some(&b'}') {
            return Err(err(next, "expected `}`"));
        }
        return Ok((n, next + 1));
    }
    digits(src, i)
}

fn digits(src: &str, i: usize) -> Result<(BigInt, usize), PolyError> {
    let bytes = src.as_bytes();
    let mut j = i;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        j += 1;
    }
    if j == i {
        return Err(err(i, "expected digits"));
    }
    let n: BigInt = src[i..j].parse().expect("ascii digits");
    Ok((n, j))
}

fn err(pos: usize, msg: &str) -> PolyError {
    PolyError::Parse {
        pos,
        msg: msg.to_string(),
    }
}
