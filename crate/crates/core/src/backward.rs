//! The backward transform: given a Groebner basis `G` of size `n`, build
//! `F = U1 * P * U2 * G` where `U1` (s x s) and `U2'` (n x n) are unimodular
//! upper-triangular polynomial matrices, `P` is a permutation and
//! `U2 = [U2'; 0]` is `U2'` stacked over an `(s - n) x n` zero block.
//!
//! `A = U1 P U2` has the left inverse `[U2'^-1 | 0] P^T U1^-1`, so `⟨F⟩ = ⟨G⟩`.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::{CoeffRange, Field};
use crate::poly::{PolySet, Polynomial, Ring, Term};

/// A dense matrix of polynomials over one ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix<C: Field> {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackwardError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid backward spec: {0}")]
    Invalid(String),
}

impl<C: Field> PolyMatrix<C> {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        Self {
            ring,
            rows,
            cols,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: Ring, size: usize) -> Self {
        let mut m = Self::zeros(ring, size, size);
        for i in 0..size {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    /// `P[i][perm[i]] = 1`, so `(P v)_i = v_{perm[i]}`.
    pub fn permutation(ring: Ring, perm: &[usize]) -> Self {
        let mut m = Self::zeros(ring, perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, Polynomial::one(ring));
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Polynomial<C>>>) -> Result<Self, BackwardError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(BackwardError::Dimension("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| p.ring() != ring) {
            return Err(BackwardError::Dimension("entry from another ring".into()));
        }
        Ok(Self {
            ring,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        debug_assert_eq!(p.ring(), self.ring);
        self.entries[i * self.cols + j] = p;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, BackwardError> {
        if self.cols != other.rows {
            return Err(BackwardError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_constant() && e.lc().is_some_and(|c| c.is_one())
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Square, ones on the diagonal, zeros below it.
    pub fn is_unimodular_upper(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                let d = self.get(i, i);
                d.is_constant()
                    && d.lc().is_some_and(|c| c.is_one())
                    && (0..i).all(|j| self.get(i, j).is_zero())
            })
    }

    pub fn is_permutation(&self) -> bool {
        let one = Polynomial::one(self.ring);
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).filter(|&j| *self.get(i, j) == one).count() == 1
                    && (0..self.cols).all(|j| self.get(i, j).is_zero() || *self.get(i, j) == one)
            })
            && (0..self.cols).all(|j| (0..self.rows).filter(|&i| *self.get(i, j) == one).count() == 1)
    }

    /// Exact inverse of a unimodular upper-triangular matrix by back substitution.
    pub fn unimodular_inverse(&self) -> Result<Self, BackwardError> {
        if !self.is_unimodular_upper() {
            return Err(BackwardError::Invalid("not unimodular upper-triangular".into()));
        }
        let n = self.rows;
        let mut x = Self::identity(self.ring, n);
        for i in (0..n).rev() {
            for j in i + 1..n {
                let mut acc = Polynomial::zero(self.ring);
                for k in i + 1..=j {
                    let u = self.get(i, k);
                    if !u.is_zero() {
                        acc = &acc + &(u * x.get(k, j));
                    }
                }
                x.set(i, j, -acc);
            }
        }
        Ok(x)
    }

    /// Count of nonzero strictly-upper entries, for density checks.
    pub fn upper_nonzeros(&self) -> usize {
        (0..self.rows)
            .map(|i| (i + 1..self.cols).filter(|&j| !self.get(i, j).is_zero()).count())
            .sum()
    }
}

/// `f_i = sum_j M[i][j] * g_j`.
pub fn matrix_apply<C: Field>(m: &PolyMatrix<C>, g: &[Polynomial<C>]) -> Result<PolySet<C>, BackwardError> {
    if m.cols != g.len() {
        return Err(BackwardError::Dimension(format!(
            "matrix has {} columns, set has {} members",
            m.cols,
            g.len()
        )));
    }
    Ok((0..m.rows)
        .map(|i| {
            let mut acc = Polynomial::zero(m.ring);
            for (j, gj) in g.iter().enumerate() {
                let a = m.get(i, j);
                if !a.is_zero() && !gj.is_zero() {
                    acc = &acc + &(a * gj);
                }
            }
            acc
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackwardSpec {
    /// Largest `|F|`; `s` is drawn from `[n, s_max]`.
    pub s_max: usize,
    /// Maximum total degree of matrix entries.
    pub d_prime: u32,
    /// Probability that a strictly-upper entry of `U1` is nonzero.
    pub sigma_u1: f64,
    /// Same for `U2'`.
    pub sigma_u2: f64,
    pub max_terms_entry: usize,
    pub coeffs: CoeffRange,
    /// Over `Q`, every coefficient `a/b` of `F` must have `|a|, b` at most this.
    pub height_bound: u64,
    /// Redraws of `(U1, U2', P)` allowed when `F` exceeds the height bound.
    pub max_retries: u32,
}

impl BackwardSpec {
    pub fn new(n: usize) -> Self {
        Self {
            s_max: n + 2,
            d_prime: 3,
            sigma_u1: 1.0,
            sigma_u2: 1.0,
            max_terms_entry: 2,
            coeffs: CoeffRange::default(),
            height_bound: 100,
            max_retries: 50,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma_u1 = sigma;
        self.sigma_u2 = sigma;
        self
    }

    pub fn validate(&self, n: usize) -> Result<(), BackwardError> {
        if self.s_max < n {
            return Err(BackwardError::Invalid(format!("s_max = {} is below n = {n}", self.s_max)));
        }
        for (name, s) in [("sigma_u1", self.sigma_u1), ("sigma_u2", self.sigma_u2)] {
            if !(s > 0.0 && s <= 1.0) {
                return Err(BackwardError::Invalid(format!("{name} = {s} is outside (0, 1]")));
            }
        }
        if self.max_terms_entry == 0 {
            return Err(BackwardError::Invalid("max_terms_entry must be at least 1".into()));
        }
        self.coeffs
            .validate()
            .map_err(|e| BackwardError::Invalid(e.to_string()))
    }
}

/// All terms of total degree at most `d` in `n` variables, in no particular order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Term> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Term>) {
        if cur.len() == n {
            out.push(Term::new(cur.iter().copied()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

fn sample_entry<C: Field, R: Rng + ?Sized>(
    ring: Ring,
    monomials: &[Term],
    spec: &BackwardSpec,
    rng: &mut R,
) -> Polynomial<C> {
    let t = rng.gen_range(1..=spec.max_terms_entry.min(monomials.len()));
    let terms: Vec<(C, Term)> = index::sample(rng, monomials.len(), t)
        .into_iter()
        .map(|k| (C::sample_nonzero(rng, &spec.coeffs), monomials[k].clone()))
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// Unit diagonal, zero below; each strictly-upper entry is nonzero with
/// probability `sigma` and then has `[1, max_terms_entry]` terms of total
/// degree at most `d_prime`. Entries are drawn row by row.
pub fn sample_unimodular_upper<C: Field, R: Rng + ?Sized>(
    ring: Ring,
    size: usize,
    sigma: f64,
    spec: &BackwardSpec,
    rng: &mut R,
) -> PolyMatrix<C> {
    let monomials = monomials_up_to(ring.nvars, spec.d_prime);
    unimodular_from(ring, size, sigma, spec, &monomials, rng)
}

fn unimodular_from<C: Field, R: Rng + ?Sized>(
    ring: Ring,
    size: usize,
    sigma: f64,
    spec: &BackwardSpec,
    monomials: &[Term],
    rng: &mut R,
) -> PolyMatrix<C> {
    let mut m = PolyMatrix::identity(ring, size);
    for i in 0..size {
        for j in i + 1..size {
            if rng.gen_bool(sigma) {
                m.set(i, j, sample_entry(ring, monomials, spec, rng));
            }
        }
    }
    m
}

/// Uniform permutation of `0..size` (Fisher-Yates).
pub fn sample_permutation<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..size).collect();
    p.shuffle(rng);
    p
}

/// One draw of the transform together with the matrices used.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardSample<C: Field> {
    pub f: PolySet<C>,
    pub s: usize,
    pub u1: PolyMatrix<C>,
    pub u2_prime: PolyMatrix<C>,
    pub perm: Vec<usize>,
    /// Over `Q`, true when no draw within the retry budget met the height bound.
    pub over_range: bool,
    pub attempts: u32,
}

impl<C: Field> BackwardSample<C> {
    /// The stacked `s x n` matrix `[U2'; 0]`.
    pub fn u2(&self) -> PolyMatrix<C> {
        stack_u2(&self.u2_prime, self.s)
    }

    pub fn p(&self) -> PolyMatrix<C> {
        PolyMatrix::permutation(self.u1.ring(), &self.perm)
    }
}

fn stack_u2<C: Field>(u2p: &PolyMatrix<C>, s: usize) -> PolyMatrix<C> {
    let n = u2p.rows();
    let mut u2 = PolyMatrix::zeros(u2p.ring(), s, n);
    for i in 0..n {
        for j in 0..n {
            u2.set(i, j, u2p.get(i, j).clone());
        }
    }
    u2
}

/// Computes `F = U1 (P (U2 G))`.
///
/// Draw order per attempt: `U1`, `U2'`, `P`, after a single draw of `s`.
/// Over `Q` the attempt is repeated while some coefficient of `F` exceeds the
/// height bound, at most `max_retries` more times.
pub fn backward_transform<C: Field, R: Rng + ?Sized>(
    g: &[Polynomial<C>],
    spec: &BackwardSpec,
    rng: &mut R,
) -> Result<BackwardSample<C>, BackwardError> {
    let ring = g
        .first()
        .map(|p| p.ring())
        .ok_or_else(|| BackwardError::Dimension("empty basis".into()))?;
    let n = ring.nvars;
    if g.len() != n {
        return Err(BackwardError::Dimension(format!(
            "basis has {} members, expected n = {n}",
            g.len()
        )));
    }
    spec.validate(n)?;
    let monomials = monomials_up_to(n, spec.d_prime);
    let s = rng.gen_range(n..=spec.s_max);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let u1: PolyMatrix<C> = unimodular_from(ring, s, spec.sigma_u1, spec, &monomials, rng);
        let u2p: PolyMatrix<C> = unimodular_from(ring, n, spec.sigma_u2, spec, &monomials, rng);
        let perm = sample_permutation(s, rng);
        let f = compose(&u1, &u2p, &perm, g);
        let fits = f
            .iter()
            .all(|p| p.terms().iter().all(|(c, _)| c.within_height(spec.height_bound)));
        if fits || attempts > spec.max_retries {
            return Ok(BackwardSample {
                f,
                s,
                u1,
                u2_prime: u2p,
                perm,
                over_range: !fits,
                attempts,
            });
        }
    }
}

fn compose<C: Field>(
    u1: &PolyMatrix<C>,
    u2p: &PolyMatrix<C>,
    perm: &[usize],
    g: &[Polynomial<C>],
) -> PolySet<C> {
    let ring = u1.ring();
    let s = perm.len();
    let mut v = matrix_apply(u2p, g).expect("U2' is n x n");
    v.resize(s, Polynomial::zero(ring));
    let w: Vec<Polynomial<C>> = perm.iter().map(|&j| v[j].clone()).collect();
    matrix_apply(u1, &w).expect("U1 is s x s")
}

/// Structural check that `A = U1 P U2` has the explicit left inverse
/// `[U2'^-1 | 0] P^T U1^-1`: `s >= n`, `U1` and the top block of `U2`
/// unimodular upper-triangular, the rest of `U2` zero, `P` a permutation.
pub fn is_left_invertible_form<C: Field>(
    s: usize,
    n: usize,
    p: &PolyMatrix<C>,
    u1: &PolyMatrix<C>,
    u2: &PolyMatrix<C>,
) -> bool {
    if s < n || p.rows() != s || u1.rows() != s || u2.rows() != s || u2.cols() != n {
        return false;
    }
    if !p.is_permutation() || !u1.is_unimodular_upper() {
        return false;
    }
    let mut top = PolyMatrix::zeros(u2.ring(), n, n);
    for i in 0..n {
        for j in 0..n {
            top.set(i, j, u2.get(i, j).clone());
        }
    }
    top.is_unimodular_upper() && (n..s).all(|i| (0..n).all(|j| u2.get(i, j).is_zero()))
}

/// `B` with `B * U1 * P * U2 = I_n`.
pub fn left_inverse<C: Field>(sample: &BackwardSample<C>) -> Result<PolyMatrix<C>, BackwardError> {
    let n = sample.u2_prime.rows();
    let s = sample.s;
    let inv2 = sample.u2_prime.unimodular_inverse()?;
    let mut pad = PolyMatrix::zeros(inv2.ring(), n, s);
    for i in 0..n {
        for j in 0..n {
            pad.set(i, j, inv2.get(i, j).clone());
        }
    }
    pad.mul(&sample.p().transpose())?
        .mul(&sample.u1.unimodular_inverse()?)
}
