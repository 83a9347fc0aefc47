//! Computer algebra for zero-dimensional ideals over Q and small prime
//! fields, with a generator of (non-Groebner set, reduced Groebner basis)
//! pairs built by transforming sampled shape-position bases backwards.
//!
//! Everything algebraic is generic over [`Field`]. Use the aliases below
//! for concrete work, or [`with_field!`] to dispatch on a runtime
//! [`FieldSpec`].
//!
//! ```
//! use gbgen::{generate_dataset, groebner_basis, FieldSpec, GenerationConfig, F7};
//!
//! let mut cfg = GenerationConfig::new(2, FieldSpec::prime(7).unwrap());
//! cfg.m = 10;
//! let (samples, _) = generate_dataset::<F7>(&cfg).unwrap();
//! for s in &samples {
//!     assert_eq!(groebner_basis(&s.f).unwrap().basis, s.g);
//! }
//! ```

pub mod backward;
pub mod bench;
pub mod dataset;
pub mod fglm;
pub mod field;
pub mod groebner;
pub mod poly;
pub mod shapegen;
pub mod solve;

pub use field::{
    is_prime, rat, CoeffRange, Field, FieldError, FieldKind, FieldSpec, FiniteField, Fp,
    Rational, SUPPORTED_PRIMES,
};
pub use backward::{
    backward_transform, is_left_invertible_form, left_inverse, matrix_apply, sample_permutation,
    sample_unimodular_upper, BackwardError, BackwardSample, BackwardSpec, PolyMatrix,
};
pub use bench::{run_bench, BenchReport};
pub use dataset::{
    generate_dataset, generate_each, DatasetError, DatasetProfile, GenerationConfig, SampleFlags,
    SamplePair,
};
pub use fglm::{fglm, quotient_basis, FglmError, QuotientBasis};
pub use groebner::{
    buchberger, buchberger_with, groebner_basis, ideal_equal, is_groebner, is_reduced_groebner,
    s_polynomial, sort_basis, BuchbergerOptions, GroebnerError, PairSelection, GroebnerResult, GroebnerStats,
};
pub use poly::{
    compare_terms, leading_terms, normal_form, parse_poly, reduce, Division, PolyError, PolySet,
    Polynomial, Ring, Term, TermOrder,
};
pub use shapegen::{
    is_shape_position, sample_shape_basis, sample_univariate, DegreeDistribution, ShapeBasisSpec,
    ShapeError,
};
pub use solve::{solve_shape, univariate_roots_fp, SolutionSet, SolveError};

pub type F7 = Fp<7>;
pub type F31 = Fp<31>;

pub type QPoly = Polynomial<Rational>;
pub type F7Poly = Polynomial<F7>;
pub type F31Poly = Polynomial<F31>;
