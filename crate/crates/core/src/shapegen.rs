//! Random reduced lex Groebner bases in shape position,
//! `G = {x0 - g1, ..., x{n-2} - g{n-1}, h(x{n-1})}` with `h` monic and
//! `deg g_j < deg h`.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::{CoeffRange, Field, FieldError};
use crate::poly::{PolySet, Polynomial, Ring, Term, TermOrder};

/// How the monic univariate `h` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeDistribution {
    /// `deg h` uniform on `1..=d`, then the term count, then the lower exponents.
    UniformDegree,
    /// Term count first, then that many distinct exponents uniform on
    /// `0..=d` (redrawn if all are 0); the largest becomes the monic leading term.
    #[default]
    UniformMonomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeBasisSpec {
    pub n: usize,
    /// Maximum degree of `h`.
    pub d: u32,
    pub max_terms_univariate: usize,
    pub coeffs: CoeffRange,
    pub degree_distribution: DegreeDistribution,
}

impl ShapeBasisSpec {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            d: 5,
            max_terms_univariate: 5,
            coeffs: CoeffRange::default(),
            degree_distribution: DegreeDistribution::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ShapeError> {
        if self.n == 0 {
            return Err(ShapeError::Invalid("n must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(ShapeError::Invalid("d must be at least 1".into()));
        }
        if self.max_terms_univariate == 0 {
            return Err(ShapeError::Invalid("max_terms_univariate must be at least 1".into()));
        }
        self.coeffs.validate()?;
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.n, TermOrder::Lex)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("invalid shape basis spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial in the last variable of `ring`.
///
/// With `monic` the result has degree exactly `max_degree` and leading
/// coefficient 1; otherwise its exponents are drawn from `0..=max_degree`.
/// The term count is uniform on `[1, min(max_terms, max_degree + 1)]` and
/// every drawn coefficient is nonzero.
pub fn sample_univariate<C: Field, R: Rng + ?Sized>(
    spec: &ShapeBasisSpec,
    ring: Ring,
    max_degree: u32,
    monic: bool,
    rng: &mut R,
) -> Polynomial<C> {
    let var = ring.nvars - 1;
    let slots = max_degree as usize + 1;
    let t = rng.gen_range(1..=spec.max_terms_univariate.min(slots));
    let mut terms = Vec::with_capacity(t);
    if monic {
        terms.push((C::one(), Term::var_pow(ring.nvars, var, max_degree)));
        for e in index::sample(rng, max_degree as usize, t - 1) {
            terms.push((C::sample_nonzero(rng, &spec.coeffs), Term::var_pow(ring.nvars, var, e as u32)));
        }
    } else {
        for e in index::sample(rng, slots, t) {
            terms.push((C::sample_nonzero(rng, &spec.coeffs), Term::var_pow(ring.nvars, var, e as u32)));
        }
    }
    Polynomial::from_terms(ring, terms)
}

fn sample_h<C: Field, R: Rng + ?Sized>(spec: &ShapeBasisSpec, ring: Ring, rng: &mut R) -> Polynomial<C> {
    match spec.degree_distribution {
        DegreeDistribution::UniformDegree => {
            let deg = rng.gen_range(1..=spec.d);
            sample_univariate(spec, ring, deg, true, rng)
        }
        DegreeDistribution::UniformMonomial => {
            let var = ring.nvars - 1;
            let slots = spec.d as usize + 1;
            let t = rng.gen_range(1..=spec.max_terms_univariate.min(slots));
            let exps = loop {
                let v = index::sample(rng, slots, t).into_vec();
                if v.iter().any(|&e| e > 0) {
                    break v;
                }
            };
            let top = *exps.iter().max().unwrap();
            let terms = exps.into_iter().map(|e| {
                let c = if e == top { C::one() } else { C::sample_nonzero(rng, &spec.coeffs) };
                (c, Term::var_pow(ring.nvars, var, e as u32))
            });
            Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
        }
    }
}

/// Draws `G`, sorted by lex leading term descending (`x0 - g1` first, `h` last).
///
/// Draw order: `h`, then `g1, ..., g{n-1}`.
pub fn sample_shape_basis<C: Field, R: Rng + ?Sized>(
    spec: &ShapeBasisSpec,
    rng: &mut R,
) -> Result<PolySet<C>, ShapeError> {
    spec.validate()?;
    let ring = spec.ring();
    let h: Polynomial<C> = sample_h(spec, ring, rng);
    let dh = h.degree().expect("h is nonzero");
    let mut g = Vec::with_capacity(spec.n);
    for j in 0..spec.n - 1 {
        let gj: Polynomial<C> = sample_univariate(spec, ring, dh - 1, false, rng);
        g.push(&Polynomial::var(ring, j) - &gj);
    }
    g.push(h);
    Ok(g)
}

/// Checks the shape-position form: `n` members, `x_j - g(x{n-1})` for
/// `j < n-1` followed by a monic non-constant `h(x{n-1})` of larger degree.
pub fn is_shape_position<C: Field>(g: &[Polynomial<C>]) -> bool {
    let Some(h) = g.last() else { return false };
    let ring = h.ring();
    let n = ring.nvars;
    if g.len() != n || ring.order != TermOrder::Lex {
        return false;
    }
    let last = n - 1;
    if !h.is_univariate_in(last) || !h.is_monic() || h.degree().unwrap_or(0) == 0 {
        return false;
    }
    let dh = h.degree().unwrap();
    g[..last].iter().enumerate().all(|(j, p)| {
        let tail = p - &Polynomial::var(ring, j);
        p.ring() == ring
            && p.coefficient_of(&Term::var(n, j)).is_one()
            && tail.is_univariate_in(last)
            && tail.degree().unwrap_or(0) < dh
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::is_reduced_groebner;
    use crate::{Rational, F7};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_monic_has_one_shape() {
        let spec = ShapeBasisSpec::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let h: Polynomial<F7> = sample_univariate(&spec, spec.ring(), 1, true, &mut rng);
            assert_eq!(h.lt(), Some(&Term::new([0, 1])));
            assert!(h.is_monic() && h.len() <= 2);
        }
    }

    #[test]
    fn bases_are_reduced_and_in_shape_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dist in [DegreeDistribution::UniformDegree, DegreeDistribution::UniformMonomial] {
            for n in 1..=4 {
                let mut spec = ShapeBasisSpec::new(n);
                spec.degree_distribution = dist;
                for _ in 0..100 {
                    let g: PolySet<Rational> = sample_shape_basis(&spec, &mut rng).unwrap();
                    assert!(is_shape_position(&g), "{g:?}");
                    assert!(is_reduced_groebner(&g));
                    let dh = g[n - 1].degree().unwrap();
                    assert!((1..=5).contains(&dh));
                }
            }
        }
    }

    #[test]
    fn seed_determinism() {
        let spec = ShapeBasisSpec::new(3);
        let a: PolySet<F7> = sample_shape_basis(&spec, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b: PolySet<F7> = sample_shape_basis(&spec, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = ShapeBasisSpec::new(0);
        assert!(spec.validate().is_err());
        spec.n = 2;
        spec.d = 0;
        assert!(spec.validate().is_err());
        spec.d = 3;
        spec.coeffs.den_bound = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_shape_basis::<F7, _>(&spec, &mut rng).is_err());
    }
}
