//! Sparse multivariate polynomials over a [`Field`] with lex, grlex and
//! grevlex term orders.
//!
//! A polynomial is a list of `(coefficient, term)` pairs kept strictly
//! descending under the ring's term order, with no zero coefficients. The zero
//! polynomial is the empty list. Variables are named `x0 .. x{n-1}`, `x0`
//! being the largest under every order.

pub(crate) mod division;
mod order;
mod parse;
mod term;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{Field, FieldError};

pub use division::{normal_form, reduce, Division};
pub use order::{compare_terms, TermOrder};
pub use parse::parse_poly;
pub use term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("polynomials live in different rings ({left} vs {right})")]
    RingMismatch { left: Ring, right: Ring },
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Number of variables plus the term order that sorts every polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    pub nvars: usize,
    pub order: TermOrder,
}

impl Ring {
    pub fn new(nvars: usize, order: TermOrder) -> Self {
        Self { nvars, order }
    }

    pub fn with_order(self, order: TermOrder) -> Self {
        Self { order, ..self }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} variables, {}", self.nvars, self.order)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    ring: Ring,
    terms: Vec<(C, Term)>,
}

/// An ordered list of polynomials sharing one ring.
pub type PolySet<C> = Vec<Polynomial<C>>;

impl<C: Field> Polynomial<C> {
    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: Ring, c: C) -> Self {
        Self::monomial(ring, c, Term::one(ring.nvars))
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, C::one())
    }

    /// The variable `x_i`.
    pub fn var(ring: Ring, i: usize) -> Self {
        Self::monomial(ring, C::one(), Term::var(ring.nvars, i))
    }

    pub fn monomial(ring: Ring, c: C, t: Term) -> Self {
        assert_eq!(t.arity(), ring.nvars, "term arity differs from ring");
        if c.is_zero() {
            return Self::zero(ring);
        }
        Self {
            ring,
            terms: vec![(c, t)],
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms<I>(ring: Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (C, Term)>,
    {
        let mut terms: Vec<(C, Term)> = terms.into_iter().collect();
        for (_, t) in &terms {
            assert_eq!(t.arity(), ring.nvars, "term arity differs from ring");
        }
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.1, &a.1));
        Self {
            ring,
            terms: combine_sorted(terms),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.ring.order
    }

    pub fn terms(&self) -> &[(C, Term)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(C, Term)> {
        self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`Polynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, t)| t.is_one())
    }

    /// Leading coefficient and term.
    pub fn leading_term(&self) -> Result<(&C, &Term), PolyError> {
        self.terms
            .first()
            .map(|(c, t)| (c, t))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn lt(&self) -> Option<&Term> {
        self.terms.first().map(|(_, t)| t)
    }

    pub fn lc(&self) -> Option<&C> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, t)| t.degree()).max()
    }

    /// Largest exponent of `x_var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(_, t)| t.exp(var)).max().unwrap_or(0)
    }

    /// True when only `x_var` occurs.
    pub fn is_univariate_in(&self, var: usize) -> bool {
        self.terms.iter().all(|(_, t)| {
            t.exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| i == var || e == 0)
        })
    }

    pub fn coefficient_of(&self, t: &Term) -> C {
        let order = self.ring.order;
        self.terms
            .binary_search_by(|(_, u)| order.cmp(t, u))
            .map(|i| self.terms[i].0.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    /// Scales so the leading coefficient is 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        Self {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, t)| (a.mul_ref(c), t.clone()))
                .collect(),
        }
    }

    /// `c * t * self`.
    pub fn mul_term(&self, c: &C, t: &Term) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        Self {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, u)| (a.mul_ref(c), u.mul(t)))
                .collect(),
        }
    }

    /// `self - c * t * other`, computed in one merge.
    pub fn sub_mul_term(&self, c: &C, t: &Term, other: &Self) -> Self {
        self.assert_same_ring(other);
        Self {
            ring: self.ring,
            terms: merge_sub_scaled(self.ring.order, &self.terms, c, t, &other.terms),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: TermOrder) -> Self {
        let ring = self.ring.with_order(order);
        if order == self.ring.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.1, &a.1));
        Self { ring, terms }
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.ring.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.nvars,
                found: point.len(),
            });
        }
        let mut acc = C::zero();
        for (c, t) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(t.exps()) {
                if e > 0 {
                    v = v.mul_ref(&x.pow(e as u64));
                }
            }
            acc = acc.add_ref(&v);
        }
        Ok(acc)
    }

    /// Largest coefficient magnitude (see [`Field::magnitude`]), 0 for the zero polynomial.
    pub fn max_magnitude(&self) -> u64 {
        self.terms.iter().map(|(c, _)| c.magnitude()).max().unwrap_or(0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    fn assert_same_ring(&self, other: &Self) {
        if let Err(e) = self.check_same_ring(other) {
            panic!("{e}");
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        Self {
            ring: self.ring,
            terms: merge_add(self.ring.order, &self.terms, &other.terms),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring);
        }
        let mut prods = Vec::with_capacity(self.len() * other.len());
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                prods.push((a.mul_ref(b), s.mul(t)));
            }
        }
        let order = self.ring.order;
        prods.sort_by(|a, b| order.cmp(&b.1, &a.1));
        Self {
            ring: self.ring,
            terms: combine_sorted(prods),
        }
    }
}

/// Sums runs of equal terms in a descending list and drops zeros.
fn combine_sorted<C: Field>(terms: Vec<(C, Term)>) -> Vec<(C, Term)> {
    let mut out: Vec<(C, Term)> = Vec::with_capacity(terms.len());
    for (c, t) in terms {
        match out.last_mut() {
            Some((acc, last)) if *last == t => *acc = acc.add_ref(&c),
            _ => {
                if let Some((acc, _)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((c, t));
            }
        }
    }
    if out.last().is_some_and(|(c, _)| c.is_zero()) {
        out.pop();
    }
    out
}

fn merge_add<C: Field>(order: TermOrder, a: &[(C, Term)], b: &[(C, Term)]) -> Vec<(C, Term)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].1, &b[j].1) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].0.add_ref(&b[j].0);
                if !c.is_zero() {
                    out.push((c, a[i].1.clone()));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `a - c * t * b` for descending term lists.
pub(crate) fn merge_sub_scaled<C: Field>(
    order: TermOrder,
    a: &[(C, Term)],
    c: &C,
    t: &Term,
    b: &[(C, Term)],
) -> Vec<(C, Term)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let neg_c = -c.clone();
    let mut i = 0;
    let mut j = 0;
    let mut pending: Option<Term> = b.first().map(|(_, u)| u.mul(t));
    while i < a.len() {
        let Some(bt) = pending.as_ref() else { break };
        match order.cmp(&a[i].1, bt) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let bt = pending.take().unwrap();
                out.push((b[j].0.mul_ref(&neg_c), bt));
                j += 1;
                pending = b.get(j).map(|(_, u)| u.mul(t));
            }
            Ordering::Equal => {
                let v = a[i].0.sub_ref(&b[j].0.mul_ref(c));
                if !v.is_zero() {
                    out.push((v, a[i].1.clone()));
                }
                i += 1;
                j += 1;
                pending = b.get(j).map(|(_, u)| u.mul(t));
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some(bt) = pending {
        out.push((b[j].0.mul_ref(&neg_c), bt));
        for (bc, u) in &b[j + 1..] {
            out.push((bc.mul_ref(&neg_c), u.mul(t)));
        }
    }
    out
}

/// As [`merge_sub_scaled`], but consumes `a` after its first `skip` entries so
/// that surviving coefficients are moved rather than cloned.
pub(crate) fn merge_sub_scaled_owned<C: Field>(
    order: TermOrder,
    a: Vec<(C, Term)>,
    skip: usize,
    c: &C,
    t: &Term,
    b: &[(C, Term)],
) -> Vec<(C, Term)> {
    let mut out = Vec::with_capacity(a.len().saturating_sub(skip) + b.len());
    let neg_c = -c.clone();
    let mut a = a.into_iter().skip(skip).peekable();
    let mut j = 0;
    let mut pending: Option<Term> = b.first().map(|(_, u)| u.mul(t));
    while let Some(bt) = pending.as_ref() {
        let Some((_, at)) = a.peek() else { break };
        match order.cmp(at, bt) {
            Ordering::Greater => out.push(a.next().unwrap()),
            Ordering::Less => {
                let bt = pending.take().unwrap();
                out.push((b[j].0.mul_ref(&neg_c), bt));
                j += 1;
                pending = b.get(j).map(|(_, u)| u.mul(t));
            }
            Ordering::Equal => {
                let (ac, at) = a.next().unwrap();
                let v = ac.sub_ref(&b[j].0.mul_ref(c));
                if !v.is_zero() {
                    out.push((v, at));
                }
                j += 1;
                pending = b.get(j).map(|(_, u)| u.mul(t));
            }
        }
    }
    out.extend(a);
    if let Some(bt) = pending {
        out.push((b[j].0.mul_ref(&neg_c), bt));
        for (bc, u) in &b[j + 1..] {
            out.push((bc.mul_ref(&neg_c), u.mul(t)));
        }
    }
    out
}

impl<C: Field> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        self.assert_same_ring(rhs);
        self.add_unchecked(rhs)
    }
}

impl<C: Field> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        self.sub_mul_term(&C::one(), &Term::one(self.nvars()), rhs)
    }
}

impl<C: Field> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        self.assert_same_ring(rhs);
        self.mul_unchecked(rhs)
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(c, t)| (-c.clone(), t.clone()))
                .collect(),
        }
    }
}

impl<C: Field> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        &self + &rhs
    }
}

impl<C: Field> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        &self - &rhs
    }
}

impl<C: Field> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Field> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, t)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.signed_magnitude();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if t.is_one() {
                f.write_str(&mag)?;
            } else if mag == "1" {
                write!(f, "{t}")?;
            } else {
                write!(f, "{mag}*{t}")?;
            }
        }
        Ok(())
    }
}

impl<C: Field> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", C::spec(), self)
    }
}

/// Leading terms of every nonzero member.
pub fn leading_terms<C: Field>(set: &[Polynomial<C>]) -> Vec<Term> {
    set.iter().filter_map(|p| p.lt().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational, F7};

    fn lex(n: usize) -> Ring {
        Ring::new(n, TermOrder::Lex)
    }

    fn p7(ring: Ring, s: &str) -> Polynomial<F7> {
        parse_poly(ring, s).unwrap()
    }

    #[test]
    fn leading_term_depends_on_order() {
        let f = p7(lex(2), "x0 + x1^2");
        assert_eq!(f.lt().unwrap(), &Term::var(2, 0));
        let g = f.with_order(TermOrder::GrLex);
        assert_eq!(g.lt().unwrap(), &Term::new([0, 2]));
        let h = p7(lex(2), "-3*x0^3 + 2*x0^2*x1 + x1^3");
        let (c, t) = h.leading_term().unwrap();
        assert_eq!((*c, t), (F7::new(-3), &Term::new([3, 0])));
        assert_eq!(
            Polynomial::<F7>::zero(lex(2)).leading_term(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn add_and_multiply() {
        let ring = lex(2);
        let f = p7(ring, "x0 - 3*x1");
        assert!((&f + &(-&f)).is_zero());
        let g = &f * &p7(ring, "x1^3");
        assert_eq!(g, p7(ring, "x0*x1^3 - 3*x1^4"));
        let sq = f.pow(2);
        assert_eq!(sq, p7(ring, "x0^2 - 6*x0*x1 + 9*x1^2"));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let f: Polynomial<F7> = Polynomial::var(lex(2), 0);
        let g: Polynomial<F7> = Polynomial::var(Ring::new(2, TermOrder::GrevLex), 0);
        assert!(matches!(f.checked_add(&g), Err(PolyError::RingMismatch { .. })));
        assert!(f.checked_mul(&g).is_err());
    }

    #[test]
    fn evaluation() {
        let f = p7(lex(2), "x0 - 3*x1");
        assert_eq!(f.evaluate(&[F7::new(3), F7::new(1)]).unwrap(), F7::new(0));
        let one: Polynomial<Rational> = Polynomial::one(lex(3));
        assert_eq!(one.evaluate(&[rat(1, 2), rat(3, 1), rat(0, 1)]).unwrap(), rat(1, 1));
        assert!(matches!(
            f.evaluate(&[F7::new(1)]),
            Err(PolyError::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn rendering_matches_table_style() {
        let ring = lex(2);
        let f: Polynomial<Rational> = parse_poly(ring, "x0^2*x1 + 2/5*x1^3 - 1").unwrap();
        assert_eq!(f.to_string(), "x0^2*x1 + 2/5*x1^3 - 1");
        let g = p7(ring, "4*x0 + 6");
        assert_eq!(g.to_string(), "-3*x0 - 1");
        assert_eq!(Polynomial::<F7>::zero(ring).to_string(), "0");
        let h: Polynomial<Rational> = parse_poly(ring, "-x1").unwrap();
        assert_eq!(h.to_string(), "-x1");
    }

    #[test]
    fn monic_and_coefficients() {
        let f: Polynomial<Rational> = parse_poly(lex(2), "2/3*x0 + x1").unwrap();
        let m = f.monic();
        assert!(m.is_monic());
        assert_eq!(m.coefficient_of(&Term::var(2, 1)), rat(3, 2));
        assert_eq!(m.coefficient_of(&Term::one(2)), rat(0, 1));
    }

    #[test]
    fn sub_mul_term_cancels() {
        let ring = lex(2);
        let f = p7(ring, "x0*x1^3 + x1");
        let g = p7(ring, "x0 - 3*x1");
        let r = f.sub_mul_term(&F7::new(1), &Term::new([0, 3]), &g);
        assert_eq!(r, p7(ring, "3*x1^4 + x1"));
    }
}
