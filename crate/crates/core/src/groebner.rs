//! Buchberger's algorithm with reduced-basis post-processing.
//!
//! Pairs are selected by the normal strategy (smallest lcm under the basis
//! term order, ties by creation order) and pairs with coprime leading terms
//! are skipped. The Gebauer-Moeller chain criterion is on by default and can
//! be switched off through [`BuchbergerOptions`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::field::Field;
use crate::poly::division::reduce_until;
use crate::poly::{reduce, PolyError, PolySet, Polynomial, Ring, Term, TermOrder};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroebnerStats {
    pub pairs_processed: usize,
    pub product_criterion_skips: usize,
    pub chain_criterion_skips: usize,
    pub reductions_to_zero: usize,
    /// Largest intermediate basis size.
    pub peak_basis_len: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerResult<C: Field> {
    /// Reduced, monic, sorted by leading term descending.
    pub basis: PolySet<C>,
    pub stats: GroebnerStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("timed out after {:.3}s ({} pairs processed)", .stats.elapsed.as_secs_f64(), .stats.pairs_processed)]
    Timeout { stats: GroebnerStats },
    #[error("input contains no nonzero polynomial")]
    EmptyInput,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which critical pair is reduced next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSelection {
    /// Smallest lcm under the basis order.
    #[default]
    Normal,
    /// Smallest sugar degree, then as `Normal`.
    Sugar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuchbergerOptions {
    /// Wall-clock budget; `None` runs to completion.
    pub timeout: Option<Duration>,
    pub chain_criterion: bool,
    pub selection: PairSelection,
}

impl Default for BuchbergerOptions {
    fn default() -> Self {
        Self {
            timeout: None,
            chain_criterion: true,
            selection: PairSelection::Normal,
        }
    }
}

impl BuchbergerOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        Self {
            timeout: Some(timeout),
            ..Self::default()
        }
    }
}

/// `(L/lt f) f / lc f - (L/lt g) g / lc g` with `L = lcm(lt f, lt g)`.
pub fn s_polynomial<C: Field>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
) -> Result<Polynomial<C>, PolyError> {
    if f.ring() != g.ring() {
        return Err(PolyError::RingMismatch {
            left: f.ring(),
            right: g.ring(),
        });
    }
    let (cf, tf) = f.leading_term()?;
    let (cg, tg) = g.leading_term()?;
    let l = tf.lcm(tg);
    let mf = tf.quotient_of(&l).expect("lt divides lcm");
    let mg = tg.quotient_of(&l).expect("lt divides lcm");
    let left = f.mul_term(&cf.inv()?, &mf);
    Ok(left.sub_mul_term(&cg.inv()?, &mg, g))
}

/// Reduced Groebner basis of `⟨F⟩` under `F`'s order, aborting after `timeout`.
pub fn buchberger<C: Field>(
    f: &[Polynomial<C>],
    timeout: Duration,
) -> Result<GroebnerResult<C>, GroebnerError> {
    buchberger_with(f, &BuchbergerOptions::with_timeout(timeout))
}

/// Reduced Groebner basis with no time limit.
pub fn groebner_basis<C: Field>(f: &[Polynomial<C>]) -> Result<GroebnerResult<C>, GroebnerError> {
    buchberger_with(f, &BuchbergerOptions::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PairKey {
    order: TermOrder,
    /// Zero unless selecting by sugar.
    sugar: u32,
    lcm: Term,
    seq: u64,
    i: usize,
    j: usize,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sugar
            .cmp(&other.sugar)
            .then_with(|| self.order.cmp(&self.lcm, &other.lcm))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn buchberger_with<C: Field>(
    f: &[Polynomial<C>],
    opts: &BuchbergerOptions,
) -> Result<GroebnerResult<C>, GroebnerError> {
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let ring = check_ring(f)?;
    let mut st = State::new(ring, opts);
    let timed_out = |stats: &GroebnerStats| -> GroebnerError {
        let mut s = stats.clone();
        s.elapsed = start.elapsed();
        GroebnerError::Timeout { stats: s }
    };

    let mut inputs: Vec<Polynomial<C>> = f.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    if inputs.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }
    // Reduce each input by its predecessors until nothing changes.
    loop {
        let mut next: Vec<Polynomial<C>> = Vec::with_capacity(inputs.len());
        for (i, p) in inputs.iter().enumerate() {
            let ones = vec![C::one(); i];
            let r = reduce_until(p, &inputs[..i], &ones, deadline).ok_or_else(|| timed_out(&st.stats))?;
            if !r.is_zero() {
                next.push(r.monic());
            }
        }
        if next == inputs {
            break;
        }
        inputs = next;
    }
    inputs.sort_by(|a, b| ring.order.cmp(a.lt().unwrap(), b.lt().unwrap()));
    for p in inputs {
        let sugar = p.degree().unwrap();
        st.update(p, sugar);
    }

    while let Some(Reverse(key)) = st.queue.pop() {
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Err(timed_out(&st.stats));
            }
        }
        let (i, j) = (key.i, key.j);
        if st.lts[i].is_coprime(&st.lts[j]) {
            st.stats.product_criterion_skips += 1;
            continue;
        }
        st.stats.pairs_processed += 1;
        let s = s_polynomial(&st.basis[i], &st.basis[j])?;
        let r = reduce_until(&s, &st.reducers, &st.ones, deadline).ok_or_else(|| timed_out(&st.stats))?;
        if r.is_zero() {
            st.stats.reductions_to_zero += 1;
            continue;
        }
        let sugar = key.sugar.max(r.degree().unwrap());
        st.update(r.monic(), sugar);
    }

    let mut stats = st.stats;
    let basis = finalize(ring, st.reducers);
    stats.elapsed = start.elapsed();
    Ok(GroebnerResult { basis, stats })
}

/// Working basis, its active subset and the pair queue.
struct State<C: Field> {
    ring: Ring,
    opts: BuchbergerOptions,
    basis: Vec<Polynomial<C>>,
    lts: Vec<Term>,
    sugars: Vec<u32>,
    /// Members no later member's leading term divides, smallest leading
    /// term first; these are the reduction divisors.
    reducers: Vec<Polynomial<C>>,
    reducer_ids: Vec<usize>,
    ones: Vec<C>,
    queue: BinaryHeap<Reverse<PairKey>>,
    seq: u64,
    stats: GroebnerStats,
}

impl<C: Field> State<C> {
    fn new(ring: Ring, opts: &BuchbergerOptions) -> Self {
        Self {
            ring,
            opts: *opts,
            basis: Vec::new(),
            lts: Vec::new(),
            sugars: Vec::new(),
            reducers: Vec::new(),
            reducer_ids: Vec::new(),
            ones: Vec::new(),
            queue: BinaryHeap::new(),
            seq: 0,
            stats: GroebnerStats::default(),
        }
    }

    fn push_pair(&mut self, i: usize, j: usize) {
        self.seq += 1;
        let lcm = self.lts[i].lcm(&self.lts[j]);
        let sugar = match self.opts.selection {
            PairSelection::Normal => 0,
            PairSelection::Sugar => {
                let (a, b) = (&self.lts[i], &self.lts[j]);
                (self.sugars[i] - a.degree()).max(self.sugars[j] - b.degree()) + lcm.degree()
            }
        };
        self.queue.push(Reverse(PairKey {
            order: self.ring.order,
            sugar,
            lcm,
            seq: self.seq,
            i,
            j,
        }));
    }

    /// Adds `h` (monic, nonzero) and its pairs. With the chain criterion this
    /// is the Gebauer-Moeller update: new pairs whose lcm is a multiple of
    /// another new pair's lcm are dropped, coprime ones after they have served
    /// as witnesses, and queued pairs `(i, j)` with `lt h | lcm(i, j)` are
    /// dropped unless `lcm(i, h)` or `lcm(j, h)` equals it.
    fn update(&mut self, h: Polynomial<C>, sugar: u32) {
        let mh = h.lt().unwrap().clone();
        let ih = self.basis.len();
        self.basis.push(h.clone());
        self.lts.push(mh.clone());
        self.sugars.push(sugar);

        let active = self.reducer_ids.clone();
        if self.opts.chain_criterion {
            let lcm_with = |k: usize| mh.lcm(&self.lts[k]);
            let mut kept: Vec<usize> = Vec::new();
            for (pos, &g) in active.iter().enumerate() {
                let l = lcm_with(g);
                let coprime = mh.is_coprime(&self.lts[g]);
                let dominated = || {
                    active[pos + 1..]
                        .iter()
                        .chain(&kept)
                        .any(|&k| lcm_with(k).divides(&l))
                };
                if coprime || !dominated() {
                    kept.push(g);
                } else {
                    self.stats.chain_criterion_skips += 1;
                }
            }
            let before = self.queue.len();
            let lts = &self.lts;
            self.queue.retain(|Reverse(p)| {
                !mh.divides(&p.lcm) || lts[p.i].lcm(&mh) == p.lcm || lts[p.j].lcm(&mh) == p.lcm
            });
            self.stats.chain_criterion_skips += before - self.queue.len();
            for g in kept {
                if mh.is_coprime(&self.lts[g]) {
                    self.stats.product_criterion_skips += 1;
                } else {
                    self.push_pair(g, ih);
                }
            }
        } else {
            for g in active {
                self.push_pair(g, ih);
            }
        }

        let mut k = 0;
        while k < self.reducers.len() {
            if mh.divides(self.reducers[k].lt().unwrap()) {
                self.reducers.remove(k);
                self.reducer_ids.remove(k);
                self.ones.pop();
            } else {
                k += 1;
            }
        }
        let order = self.ring.order;
        let at = self.reducers.partition_point(|r| order.cmp(r.lt().unwrap(), &mh).is_lt());
        self.reducers.insert(at, h);
        self.reducer_ids.insert(at, ih);
        self.ones.push(C::one());
        self.stats.peak_basis_len = self.stats.peak_basis_len.max(self.reducers.len());
    }
}

fn check_ring<C: Field>(f: &[Polynomial<C>]) -> Result<Ring, GroebnerError> {
    let first = f.first().ok_or(GroebnerError::EmptyInput)?;
    let ring = first.ring();
    for p in f {
        if p.ring() != ring {
            return Err(PolyError::RingMismatch {
                left: ring,
                right: p.ring(),
            }
            .into());
        }
    }
    Ok(ring)
}

/// Minimal, monic, interreduced, sorted descending.
fn finalize<C: Field>(ring: Ring, basis: Vec<Polynomial<C>>) -> PolySet<C> {
    let mut kept: Vec<Polynomial<C>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lt = g.lt().unwrap();
        let dominated = basis.iter().enumerate().any(|(k, h)| {
            let hl = h.lt().unwrap();
            k != idx && hl.divides(lt) && (hl != lt || k < idx)
        });
        if !dominated {
            kept.push(g.monic());
        }
    }
    let mut out: Vec<Polynomial<C>> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Polynomial<C>> = kept
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, g)| g.clone())
            .collect();
        out.push(reduce(&kept[i], &others));
    }
    sort_basis(ring, &mut out);
    out
}

/// Sorts by leading term, largest first.
pub fn sort_basis<C: Field>(ring: Ring, basis: &mut [Polynomial<C>]) {
    basis.sort_by(|a, b| match (a.lt(), b.lt()) {
        (Some(x), Some(y)) => ring.order.cmp(y, x),
        (None, None) => std::cmp::Ordering::Equal,
        (None, _) => std::cmp::Ordering::Greater,
        (_, None) => std::cmp::Ordering::Less,
    });
}

/// All S-polynomials of distinct nonzero members reduce to zero.
pub fn is_groebner<C: Field>(f: &[Polynomial<C>]) -> bool {
    let g: Vec<Polynomial<C>> = f.iter().filter(|p| !p.is_zero()).cloned().collect();
    if g.is_empty() {
        return false;
    }
    let ring = g[0].ring();
    if g.iter().any(|p| p.ring() != ring) {
        return false;
    }
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i].lt().unwrap().is_coprime(g[j].lt().unwrap()) {
                continue;
            }
            let s = s_polynomial(&g[i], &g[j]).expect("nonzero, same ring");
            if !reduce(&s, &g).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Groebner, monic, and no term of any member divisible by another member's leading term.
pub fn is_reduced_groebner<C: Field>(f: &[Polynomial<C>]) -> bool {
    if f.is_empty() || f.iter().any(|p| p.is_zero() || !p.is_monic()) {
        return false;
    }
    for (i, g) in f.iter().enumerate() {
        for (k, h) in f.iter().enumerate() {
            if i == k {
                continue;
            }
            let lt = h.lt().unwrap();
            if g.terms().iter().any(|(_, t)| lt.divides(t)) {
                return false;
            }
        }
    }
    is_groebner(f)
}

/// Whether `⟨F⟩ = ⟨G⟩`, by comparing reduced bases. Two all-zero sets are equal.
pub fn ideal_equal<C: Field>(f: &[Polynomial<C>], g: &[Polynomial<C>]) -> Result<bool, GroebnerError> {
    let zf = f.iter().all(|p| p.is_zero());
    let zg = g.iter().all(|p| p.is_zero());
    if zf || zg {
        return Ok(zf && zg);
    }
    let a = groebner_basis(f)?;
    let b = groebner_basis(g)?;
    if a.basis.first().map(|p| p.ring()) != b.basis.first().map(|p| p.ring()) {
        return Err(PolyError::RingMismatch {
            left: a.basis[0].ring(),
            right: b.basis[0].ring(),
        }
        .into());
    }
    Ok(a.basis == b.basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, TermOrder};
    use crate::{Rational, F7};

    fn set7(ring: Ring, ps: &[&str]) -> Vec<Polynomial<F7>> {
        ps.iter().map(|s| parse_poly(ring, s).unwrap()).collect()
    }

    fn lex2() -> Ring {
        Ring::new(2, TermOrder::Lex)
    }

    #[test]
    fn s_polynomial_examples() {
        let r = lex2();
        let f = parse_poly::<F7>(r, "x0 - 3*x1").unwrap();
        let g = parse_poly::<F7>(r, "x1^3").unwrap();
        assert_eq!(s_polynomial(&f, &g).unwrap(), parse_poly(r, "-3*x1^4").unwrap());
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
        let a = parse_poly::<F7>(r, "x0^2").unwrap();
        let b = parse_poly::<F7>(r, "x1^2").unwrap();
        assert!(s_polynomial(&a, &b).unwrap().is_zero());
        assert!(s_polynomial(&a, &Polynomial::zero(r)).is_err());
    }

    #[test]
    fn table_rows_reduce_to_their_bases() {
        let r = lex2();
        let t = Duration::from_secs(5);
        let f = set7(r, &["-3*x0^3 + 2*x0^2*x1 + x1^3", "2*x0^4 + x0^3*x1 - 3*x0*x1^3 + x0 - 3*x1"]);
        assert_eq!(buchberger(&f, t).unwrap().basis, set7(r, &["x0 - 3*x1", "x1^3"]));
        let f = set7(r, &["x0 + x1^2", "x0*x1 + 3*x0 + 2*x1^3 + 3*x1^2 + x1"]);
        assert_eq!(buchberger(&f, t).unwrap().basis, set7(r, &["x0 + x1^2", "x1^3 + x1"]));
        let g = set7(r, &["x0 - 3*x1", "x1^3"]);
        assert_eq!(buchberger(&g, t).unwrap().basis, g);
    }

    #[test]
    fn chain_criterion_gives_same_basis() {
        let r = Ring::new(3, TermOrder::GrevLex);
        let f = set7(r, &["x0^2 + x1*x2 - 1", "x1^2 - x0*x2 + 2", "x2^2 + x0 - x1"]);
        let plain = groebner_basis(&f).unwrap();
        let opts = BuchbergerOptions {
            chain_criterion: false,
            ..Default::default()
        };
        let unchained = buchberger_with(&f, &opts).unwrap();
        assert_eq!(plain.basis, unchained.basis);
        assert!(is_reduced_groebner(&plain.basis));
    }

    #[test]
    fn predicates() {
        let r = lex2();
        assert!(is_groebner(&set7(r, &["x0 - 3*x1", "x1^3"])));
        assert!(!is_reduced_groebner(&set7(r, &["x0 - 3*x1", "2*x1^3"])));
        assert!(!is_reduced_groebner(&set7(r, &["x0 + x1^3", "x1^3 + 1"])));
        let shared = set7(r, &["x0^2 - x1", "x0*x1 - 1"]);
        assert!(!is_groebner(&shared));
    }

    #[test]
    fn ideal_equality() {
        let r = lex2();
        let f = set7(r, &["x0 + x1^2", "x0*x1 + 3*x0 + 2*x1^3 + 3*x1^2 + x1"]);
        assert!(ideal_equal(&f, &f).unwrap());
        let mut unit = f.clone();
        unit.push(Polynomial::one(r));
        assert!(!ideal_equal(&f, &unit).unwrap());
        assert_eq!(groebner_basis(&unit).unwrap().basis, vec![Polynomial::one(r)]);
    }

    #[test]
    fn zeros_are_skipped_and_timeouts_reported() {
        let r = lex2();
        let mut f = set7(r, &["x0 - 3*x1", "x1^3"]);
        f.insert(1, Polynomial::zero(r));
        assert_eq!(groebner_basis(&f).unwrap().basis.len(), 2);
        assert_eq!(
            groebner_basis::<F7>(&[Polynomial::zero(r)]),
            Err(GroebnerError::EmptyInput)
        );
        let hard: Vec<Polynomial<Rational>> = [
            "x0^5 + x1^4 + x0*x1 - 3", "x0^3*x1^2 - 2/3*x1^5 + x0", "x0^4*x1 - x1^3 + 7/2",
        ]
        .iter()
        .map(|s| parse_poly(r, s).unwrap())
        .collect();
        match buchberger(&hard, Duration::ZERO) {
            Err(GroebnerError::Timeout { .. }) => {}
            other => panic!("expected timeout, got {other:?}"),
        }
    }
}
