//! End-to-end dataset generation: sample `G` in shape position, transform
//! it backwards into `F`, optionally change the term order, and check a
//! fraction of the pairs with Buchberger.

mod io;
mod profile;
pub mod tokens;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backward::{backward_transform, BackwardError, BackwardSpec};
use crate::fglm::{fglm, FglmError};
use crate::field::{CoeffRange, Field, FieldError, FieldSpec};
use crate::groebner::{buchberger, GroebnerError};
use crate::poly::{PolyError, PolySet, TermOrder};
use crate::shapegen::{sample_shape_basis, DegreeDistribution, ShapeBasisSpec, ShapeError};

pub use io::{
    read_jsonl, write_dataset, write_jsonl, write_meta, DatasetWriter, Header, JsonlReader, Meta,
    FORMAT_NAME, FORMAT_VERSION,
};
pub use profile::{ColumnProfile, DatasetProfile, ProfileAccumulator, Stat};
pub use tokens::{parse_prefix_tokens, to_prefix_tokens, TokenError};

/// Samples per parallel batch; bounds memory when streaming large datasets.
const BATCH: usize = 4096;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("sample {index}: Buchberger disagrees with the generated basis")]
    OracleMismatch { index: u64 },
    #[error("profile of an empty dataset")]
    Empty,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Backward(#[from] BackwardError),
    #[error(transparent)]
    Fglm(#[from] FglmError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Per-draw densities used for the low-density datasets: 1.0, 0.6, 0.3, 0.2
/// for n = 2..5, and 1.0 otherwise.
pub fn sparse_sigma(n: usize) -> f64 {
    match n {
        3 => 0.6,
        4 => 0.3,
        5 => 0.2,
        _ => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub m: u64,
    pub field: FieldSpec,
    pub n: usize,
    pub d: u32,
    pub d_prime: u32,
    pub s_max: usize,
    pub sigma_u1: f64,
    pub sigma_u2: f64,
    pub max_terms_univariate: usize,
    pub max_terms_entry: usize,
    pub coeffs: CoeffRange,
    /// Height bound on `F`'s rational coefficients.
    pub height_bound: u64,
    pub max_retries: u32,
    pub degree_distribution: DegreeDistribution,
    pub order: TermOrder,
    pub seed: u64,
    pub drop_zeros: bool,
    pub verify_fraction: f64,
    /// Per-sample budget for inline verification; a timeout is inconclusive.
    pub verify_timeout_ms: u64,
}

impl GenerationConfig {
    /// Defaults `(d, d', s_max, order) = (5, 3, n + 2, lex)`, density 1.
    pub fn new(n: usize, field: FieldSpec) -> Self {
        Self {
            m: 1000,
            field,
            n,
            d: 5,
            d_prime: 3,
            s_max: n + 2,
            sigma_u1: 1.0,
            sigma_u2: 1.0,
            max_terms_univariate: 5,
            max_terms_entry: 2,
            coeffs: CoeffRange::default(),
            height_bound: 100,
            max_retries: 50,
            degree_distribution: DegreeDistribution::default(),
            order: TermOrder::Lex,
            seed: 0,
            drop_zeros: false,
            verify_fraction: 0.01,
            verify_timeout_ms: 60_000,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma_u1 = sigma;
        self.sigma_u2 = sigma;
        self
    }

    pub fn shape_spec(&self) -> ShapeBasisSpec {
        ShapeBasisSpec {
            n: self.n,
            d: self.d,
            max_terms_univariate: self.max_terms_univariate,
            coeffs: self.coeffs,
            degree_distribution: self.degree_distribution,
        }
    }

    pub fn backward_spec(&self) -> BackwardSpec {
        BackwardSpec {
            s_max: self.s_max,
            d_prime: self.d_prime,
            sigma_u1: self.sigma_u1,
            sigma_u2: self.sigma_u2,
            max_terms_entry: self.max_terms_entry,
            coeffs: self.coeffs,
            height_bound: self.height_bound,
            max_retries: self.max_retries,
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        self.shape_spec()
            .validate()
            .map_err(|e| DatasetError::Config(e.to_string()))?;
        self.backward_spec()
            .validate(self.n)
            .map_err(|e| DatasetError::Config(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.verify_fraction) {
            return Err(DatasetError::Config(format!(
                "verify_fraction = {} is outside [0, 1]",
                self.verify_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFlags {
    pub contains_zero: bool,
    pub over_range: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePair<C: Field> {
    pub index: u64,
    pub f: PolySet<C>,
    pub g: PolySet<C>,
    /// Rows of the transform, `|F|` before any zero removal.
    pub s: usize,
    /// Seed of this sample's generator.
    pub seed: u64,
    pub flags: SampleFlags,
}

/// Tally of inline verification.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub generated: u64,
    pub verified: u64,
    pub inconclusive: u64,
    pub over_range: u64,
    pub with_zeros: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index`; independent of batch layout and thread count.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Draws sample `index` without verification.
pub fn generate_sample<C: Field>(cfg: &GenerationConfig, index: u64) -> Result<SamplePair<C>, DatasetError> {
    let seed = child_seed(cfg.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: PolySet<C> = sample_shape_basis(&cfg.shape_spec(), &mut rng)?;
    let b = backward_transform(&g, &cfg.backward_spec(), &mut rng)?;
    let mut f = b.f;
    let contains_zero = f.iter().any(|p| p.is_zero());
    if cfg.drop_zeros {
        f.retain(|p| !p.is_zero());
    }
    let (f, g) = if cfg.order == TermOrder::Lex {
        (f, g)
    } else {
        let g = fglm(&g, cfg.order)?;
        (f.iter().map(|p| p.with_order(cfg.order)).collect(), g)
    };
    Ok(SamplePair {
        index,
        f,
        g,
        s: b.s,
        seed,
        flags: SampleFlags {
            contains_zero,
            over_range: b.over_range,
        },
    })
}

/// Whether sample `index` is in the inline-verified subset.
pub fn selected_for_verification(cfg: &GenerationConfig, index: u64) -> bool {
    if cfg.verify_fraction <= 0.0 {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(child_seed(cfg.seed, index) ^ 0xA5A5));
    rng.gen_bool(cfg.verify_fraction.min(1.0))
}

enum Verdict {
    Skipped,
    Passed,
    Inconclusive,
}

fn verify_inline<C: Field>(cfg: &GenerationConfig, s: &SamplePair<C>) -> Result<Verdict, DatasetError> {
    if !selected_for_verification(cfg, s.index) {
        return Ok(Verdict::Skipped);
    }
    match buchberger(&s.f, Duration::from_millis(cfg.verify_timeout_ms)) {
        Ok(r) if r.basis == s.g => Ok(Verdict::Passed),
        Ok(_) => Err(DatasetError::OracleMismatch { index: s.index }),
        Err(GroebnerError::Timeout { .. }) => Ok(Verdict::Inconclusive),
        Err(e) => Err(e.into()),
    }
}

/// Generates all `cfg.m` samples in parallel (on the current rayon pool)
/// and hands them to `sink` in index order.
pub fn generate_each<C, F>(cfg: &GenerationConfig, mut sink: F) -> Result<GenerationReport, DatasetError>
where
    C: Field,
    F: FnMut(SamplePair<C>) -> Result<(), DatasetError>,
{
    cfg.validate()?;
    let mut report = GenerationReport::default();
    let mut start = 0u64;
    while start < cfg.m {
        let end = (start + BATCH as u64).min(cfg.m);
        let batch: Vec<Result<(SamplePair<C>, Verdict), DatasetError>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let s = generate_sample::<C>(cfg, i)?;
                let v = verify_inline(cfg, &s)?;
                Ok((s, v))
            })
            .collect();
        for item in batch {
            let (s, v) = item?;
            report.generated += 1;
            match v {
                Verdict::Passed => report.verified += 1,
                Verdict::Inconclusive => report.inconclusive += 1,
                Verdict::Skipped => {}
            }
            report.over_range += s.flags.over_range as u64;
            report.with_zeros += s.flags.contains_zero as u64;
            sink(s)?;
        }
        start = end;
    }
    Ok(report)
}

/// Collects [`generate_each`] into memory.
pub fn generate_dataset<C: Field>(cfg: &GenerationConfig) -> Result<(Vec<SamplePair<C>>, GenerationReport), DatasetError> {
    let mut out = Vec::with_capacity(cfg.m.min(1 << 20) as usize);
    let report = generate_each(cfg, |s| {
        out.push(s);
        Ok(())
    })?;
    Ok((out, report))
}

/// Single-threaded generation without verification, for timing.
pub fn generate_serial<C: Field>(cfg: &GenerationConfig) -> Result<Vec<SamplePair<C>>, DatasetError> {
    cfg.validate()?;
    (0..cfg.m).map(|i| generate_sample(cfg, i)).collect()
}
