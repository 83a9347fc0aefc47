//! Per-column summary statistics of a dataset.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::tokens::to_prefix_tokens;
use super::{DatasetError, SamplePair};
use crate::field::Field;
use crate::groebner::is_reduced_groebner;
use crate::poly::Polynomial;

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} ± {:.3}", self.mean, self.std)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sumsq += o.sumsq;
    }

    fn stat(&self) -> Stat {
        if self.n == 0 {
            return Stat::default();
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = (self.sumsq / n - mean * mean).max(0.0);
        Stat { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    /// Number of polynomials.
    pub size: Stat,
    /// Largest total degree among nonzero members.
    pub max_degree: Stat,
    /// Smallest total degree among nonzero members.
    pub min_degree: Stat,
    /// Total term count.
    pub terms: Stat,
    /// Fraction of sets that are reduced Groebner bases.
    pub groebner_ratio: Stat,
    /// Prefix token count including framing.
    pub tokens: Stat,
    /// Largest coefficient magnitude (balanced residue, or max of |a| and b for a/b).
    pub max_coeff: Stat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct ColumnAcc {
    size: Moments,
    max_degree: Moments,
    min_degree: Moments,
    terms: Moments,
    groebner: Moments,
    tokens: Moments,
    max_coeff: Moments,
}

impl ColumnAcc {
    fn push<C: Field>(&mut self, set: &[Polynomial<C>]) {
        self.size.push(set.len() as f64);
        let degs: Vec<u32> = set.iter().filter_map(|p| p.degree()).collect();
        if let (Some(&mx), Some(&mn)) = (degs.iter().max(), degs.iter().min()) {
            self.max_degree.push(mx as f64);
            self.min_degree.push(mn as f64);
        }
        self.terms.push(set.iter().map(|p| p.len()).sum::<usize>() as f64);
        self.groebner.push(if is_reduced_groebner(set) { 1.0 } else { 0.0 });
        self.tokens.push(to_prefix_tokens(set).len() as f64);
        self.max_coeff
            .push(set.iter().map(|p| p.max_magnitude()).max().unwrap_or(0) as f64);
    }

    fn merge(&mut self, o: &ColumnAcc) {
        self.size.merge(&o.size);
        self.max_degree.merge(&o.max_degree);
        self.min_degree.merge(&o.min_degree);
        self.terms.merge(&o.terms);
        self.groebner.merge(&o.groebner);
        self.tokens.merge(&o.tokens);
        self.max_coeff.merge(&o.max_coeff);
    }

    fn finish(&self) -> ColumnProfile {
        ColumnProfile {
            size: self.size.stat(),
            max_degree: self.max_degree.stat(),
            min_degree: self.min_degree.stat(),
            terms: self.terms.stat(),
            groebner_ratio: self.groebner.stat(),
            tokens: self.tokens.stat(),
            max_coeff: self.max_coeff.stat(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub samples: u64,
    #[serde(rename = "F")]
    pub f: ColumnProfile,
    #[serde(rename = "G")]
    pub g: ColumnProfile,
}

/// Streaming, mergeable profile builder.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProfileAccumulator {
    samples: u64,
    f: ColumnAcc,
    g: ColumnAcc,
}

impl ProfileAccumulator {
    pub fn push<C: Field>(&mut self, s: &SamplePair<C>) {
        self.samples += 1;
        self.f.push(&s.f);
        self.g.push(&s.g);
    }

    pub fn merge(&mut self, other: &ProfileAccumulator) {
        self.samples += other.samples;
        self.f.merge(&other.f);
        self.g.merge(&other.g);
    }

    pub fn finish(&self) -> Result<DatasetProfile, DatasetError> {
        if self.samples == 0 {
            return Err(DatasetError::Empty);
        }
        Ok(DatasetProfile {
            samples: self.samples,
            f: self.f.finish(),
            g: self.g.finish(),
        })
    }
}

impl DatasetProfile {
    pub fn from_samples<C: Field>(samples: &[SamplePair<C>]) -> Result<Self, DatasetError> {
        let mut acc = ProfileAccumulator::default();
        for s in samples {
            acc.push(s);
        }
        acc.finish()
    }
}

impl fmt::Display for DatasetProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "{:<22} {:>20} {:>20}", "", "F", "G")?;
        let rows: [(&str, Stat, Stat); 7] = [
            ("size", self.f.size, self.g.size),
            ("max degree", self.f.max_degree, self.g.max_degree),
            ("min degree", self.f.min_degree, self.g.min_degree),
            ("# terms", self.f.terms, self.g.terms),
            ("groebner ratio", self.f.groebner_ratio, self.g.groebner_ratio),
            ("# tokens", self.f.tokens, self.g.tokens),
            ("max |coefficient|", self.f.max_coeff, self.g.max_coeff),
        ];
        for (name, a, b) in rows {
            writeln!(f, "{:<22} {:>20} {:>20}", name, a.to_string(), b.to_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_dataset, GenerationConfig};
    use crate::{FieldSpec, F7};

    #[test]
    fn single_sample_has_zero_spread() {
        let mut cfg = GenerationConfig::new(2, FieldSpec::prime(7).unwrap());
        cfg.m = 1;
        let (s, _) = generate_dataset::<F7>(&cfg).unwrap();
        let p = DatasetProfile::from_samples(&s).unwrap();
        assert_eq!(p.f.terms.std, 0.0);
        assert_eq!(p.g.groebner_ratio.mean, 1.0);
        assert!(DatasetProfile::from_samples::<F7>(&[]).is_err());
    }

    #[test]
    fn merge_matches_sequential() {
        let mut cfg = GenerationConfig::new(2, FieldSpec::prime(7).unwrap());
        cfg.m = 30;
        let (s, _) = generate_dataset::<F7>(&cfg).unwrap();
        let whole = DatasetProfile::from_samples(&s).unwrap();
        let mut a = ProfileAccumulator::default();
        let mut b = ProfileAccumulator::default();
        for x in &s[..11] {
            a.push(x);
        }
        for x in &s[11..] {
            b.push(x);
        }
        b.merge(&a);
        let merged = b.finish().unwrap();
        assert!((merged.f.terms.mean - whole.f.terms.mean).abs() < 1e-9);
        assert_eq!(merged.samples, 30);
    }
}
