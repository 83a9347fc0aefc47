//! Change of term order for zero-dimensional ideals by linear algebra in the
//! quotient ring (FGLM).

use std::collections::{HashMap, HashSet, VecDeque};

use crate::field::Field;
use crate::groebner::sort_basis;
use crate::poly::{reduce, PolyError, PolySet, Polynomial, Ring, Term, TermOrder};

/// Quotient dimension above which the input is treated as positive-dimensional.
pub const DEFAULT_QUOTIENT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FglmError {
    #[error("quotient ring has more than {cap} standard monomials; the ideal is not zero-dimensional or too large")]
    NotZeroDimensional { cap: usize },
    #[error("empty basis")]
    EmptyBasis,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Terms outside `⟨lt(G)⟩`, ascending in the source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBasis {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl QuotientBasis {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn dimension(&self) -> usize {
        self.terms.len()
    }

    pub fn position(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Coordinates of a polynomial whose terms are all standard.
    fn coordinates<C: Field>(&self, p: &Polynomial<C>) -> Vec<C> {
        let mut v = vec![C::zero(); self.terms.len()];
        for (c, t) in p.terms() {
            let i = self.index[t];
            v[i] = c.clone();
        }
        v
    }
}

pub fn quotient_basis<C: Field>(g: &[Polynomial<C>]) -> Result<QuotientBasis, FglmError> {
    quotient_basis_with_cap(g, DEFAULT_QUOTIENT_CAP)
}

pub fn quotient_basis_with_cap<C: Field>(
    g: &[Polynomial<C>],
    cap: usize,
) -> Result<QuotientBasis, FglmError> {
    let ring = basis_ring(g)?;
    let lts: Vec<&Term> = g.iter().filter_map(|p| p.lt()).collect();
    let standard = |t: &Term| !lts.iter().any(|l| l.divides(t));
    let mut terms = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let one = Term::one(ring.nvars);
    if standard(&one) {
        seen.insert(one.clone());
        queue.push_back(one);
    }
    while let Some(t) = queue.pop_front() {
        if terms.len() >= cap {
            return Err(FglmError::NotZeroDimensional { cap });
        }
        for i in 0..ring.nvars {
            let u = t.mul(&Term::var(ring.nvars, i));
            if standard(&u) && seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
        terms.push(t);
    }
    terms.sort_by(|a, b| ring.order.cmp(a, b));
    let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    Ok(QuotientBasis { terms, index })
}

/// Converts the reduced basis `g` of a zero-dimensional ideal to the reduced
/// basis under `target`. Output is sorted by leading term descending.
pub fn fglm<C: Field>(g: &[Polynomial<C>], target: TermOrder) -> Result<PolySet<C>, FglmError> {
    fglm_with_cap(g, target, DEFAULT_QUOTIENT_CAP)
}

pub fn fglm_with_cap<C: Field>(
    g: &[Polynomial<C>],
    target: TermOrder,
    cap: usize,
) -> Result<PolySet<C>, FglmError> {
    let src = basis_ring(g)?;
    if target == src.order {
        let mut out = g.to_vec();
        sort_basis(src, &mut out);
        return Ok(out);
    }
    let qb = quotient_basis_with_cap(g, cap)?;
    let dim = qb.dimension();
    let dst = src.with_order(target);
    let nv = src.nvars;

    // Echelon rows: (pivot, row, combination over `staircase`).
    let mut rows: Vec<(usize, Vec<C>, Vec<C>)> = Vec::new();
    let mut staircase: Vec<Term> = Vec::new();
    let mut new_basis: Vec<Polynomial<C>> = Vec::new();
    let mut frontier: Vec<Term> = vec![Term::one(nv)];
    let mut queued: HashSet<Term> = frontier.iter().cloned().collect();

    while !frontier.is_empty() {
        let k = (0..frontier.len())
            .min_by(|&a, &b| target.cmp(&frontier[a], &frontier[b]))
            .unwrap();
        let t = frontier.swap_remove(k);
        if new_basis.iter().any(|p| p.lt().unwrap().divides(&t)) {
            continue;
        }
        let nf = reduce(&Polynomial::monomial(src, C::one(), t.clone()), g);
        let mut v = qb.coordinates(&nf);
        let mut comb = vec![C::zero(); staircase.len() + 1];
        for (pivot, row, rc) in &rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let a = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub_ref(&a.mul_ref(y));
                }
            }
            for (x, y) in comb.iter_mut().zip(rc) {
                if !y.is_zero() {
                    *x = x.sub_ref(&a.mul_ref(y));
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                // t + sum comb_i * staircase_i vanishes in the quotient.
                let mut terms = vec![(C::one(), t.clone())];
                for (c, s) in comb.into_iter().zip(&staircase) {
                    if !c.is_zero() {
                        terms.push((c, s.clone()));
                    }
                }
                new_basis.push(Polynomial::from_terms(dst, terms));
            }
            Some(pivot) => {
                if staircase.len() >= dim {
                    return Err(FglmError::NotZeroDimensional { cap });
                }
                let inv = v[pivot].inv().expect("nonzero pivot");
                let m = staircase.len();
                comb[m] = C::one();
                let row: Vec<C> = v.iter().map(|x| x.mul_ref(&inv)).collect();
                let rc: Vec<C> = comb.iter().map(|x| x.mul_ref(&inv)).collect();
                // Keep earlier rows reduced at the new pivot so one pass suffices.
                for (_, r, c) in rows.iter_mut() {
                    if !r[pivot].is_zero() {
                        let a = r[pivot].clone();
                        for (x, y) in r.iter_mut().zip(&row) {
                            *x = x.sub_ref(&a.mul_ref(y));
                        }
                        c.resize(m + 1, C::zero());
                        for (x, y) in c.iter_mut().zip(&rc) {
                            *x = x.sub_ref(&a.mul_ref(y));
                        }
                    }
                }
                rows.push((pivot, row, rc));
                staircase.push(t.clone());
                for i in 0..nv {
                    let u = t.mul(&Term::var(nv, i));
                    if !queued.contains(&u) {
                        queued.insert(u.clone());
                        frontier.push(u);
                    }
                }
            }
        }
    }
    sort_basis(dst, &mut new_basis);
    Ok(new_basis)
}

fn basis_ring<C: Field>(g: &[Polynomial<C>]) -> Result<Ring, FglmError> {
    let first = g.iter().find(|p| !p.is_zero()).ok_or(FglmError::EmptyBasis)?;
    let ring = first.ring();
    if let Some(p) = g.iter().find(|p| p.ring() != ring) {
        return Err(PolyError::RingMismatch {
            left: ring,
            right: p.ring(),
        }
        .into());
    }
    Ok(ring)
}
