use std::time::Instant;

use super::{merge_sub_scaled_owned, PolyError, Polynomial, Term};
use crate::field::Field;

/// Quotients and remainder of multivariate division, `f = sum q_i g_i + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division<C: Field> {
    pub quotients: Vec<Polynomial<C>>,
    pub remainder: Polynomial<C>,
}

/// Full multivariate division of `f` by `divisors` (first divisible leading
/// term wins). No term of the remainder is divisible by any divisor's leading term.
pub fn normal_form<C: Field>(
    f: &Polynomial<C>,
    divisors: &[Polynomial<C>],
) -> Result<Division<C>, PolyError> {
    let ring = f.ring();
    for g in divisors {
        if g.ring() != ring {
            return Err(PolyError::RingMismatch {
                left: ring,
                right: g.ring(),
            });
        }
        if g.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
    }
    let invs = leading_inverses(divisors)?;
    let mut quotients: Vec<Vec<(C, Term)>> = vec![Vec::new(); divisors.len()];
    let remainder = divide(f, divisors, &invs, Some(&mut quotients), None)
        .expect("no deadline was set");
    Ok(Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(ring, q))
            .collect(),
        remainder,
    })
}

/// Remainder only. Zero divisors are skipped.
pub fn reduce<C: Field>(f: &Polynomial<C>, divisors: &[Polynomial<C>]) -> Polynomial<C> {
    let nonzero: Vec<Polynomial<C>> = divisors.iter().filter(|g| !g.is_zero()).cloned().collect();
    let invs = leading_inverses(&nonzero).expect("nonzero divisors");
    divide(f, &nonzero, &invs, None, None).expect("no deadline was set")
}

/// Remainder with a wall-clock deadline; `None` on timeout. Divisors must be nonzero.
pub(crate) fn reduce_until<C: Field>(
    f: &Polynomial<C>,
    divisors: &[Polynomial<C>],
    invs: &[C],
    deadline: Option<Instant>,
) -> Option<Polynomial<C>> {
    divide(f, divisors, invs, None, deadline)
}

pub(crate) fn leading_inverses<C: Field>(divisors: &[Polynomial<C>]) -> Result<Vec<C>, PolyError> {
    divisors
        .iter()
        .map(|g| {
            let lc = g.lc().ok_or(PolyError::ZeroDivisor)?;
            Ok(lc.inv()?)
        })
        .collect()
}

fn divide<C: Field>(
    f: &Polynomial<C>,
    divisors: &[Polynomial<C>],
    invs: &[C],
    mut quotients: Option<&mut Vec<Vec<(C, Term)>>>,
    deadline: Option<Instant>,
) -> Option<Polynomial<C>> {
    let ring = f.ring();
    let order = ring.order;
    let mut p: Vec<(C, Term)> = f.terms().to_vec();
    let mut start = 0;
    let mut rem: Vec<(C, Term)> = Vec::new();
    let mut steps = 0u32;
    while start < p.len() {
        steps += 1;
        if steps.is_multiple_of(64) {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return None;
                }
            }
        }
        let (c, t) = &p[start];
        let hit = divisors
            .iter()
            .position(|g| g.lt().is_some_and(|lt| lt.divides(t)));
        match hit {
            Some(i) => {
                let g = &divisors[i];
                let m = g.lt().unwrap().quotient_of(t).unwrap();
                let q = c.mul_ref(&invs[i]);
                let tail = &g.terms()[1..];
                p = merge_sub_scaled_owned(order, std::mem::take(&mut p), start + 1, &q, &m, tail);
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[i].push((q, m));
                }
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Some(Polynomial::from_sorted_unchecked(ring, rem))
}

impl<C: Field> Polynomial<C> {
    /// Wraps a list already sorted descending with no zeros and no repeats.
    pub(crate) fn from_sorted_unchecked(ring: super::Ring, terms: Vec<(C, Term)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order.cmp(&w[0].1, &w[1].1) == std::cmp::Ordering::Greater));
        debug_assert!(terms.iter().all(|(c, _)| !c.is_zero()));
        Self { ring, terms }
    }
}
