//! Backward-versus-forward timing. Backward time covers generating `m`
//! pairs; forward time runs Buchberger on the same `F`s with a per-instance
//! timeout, charging the full timeout for every instance that hits it.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataset::{generate_serial, DatasetError, GenerationConfig};
use crate::field::Field;
use crate::groebner::{buchberger_with, BuchbergerOptions, GroebnerError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub n: usize,
    pub field: String,
    pub m: u64,
    pub backward_secs: f64,
    pub forward_secs: f64,
    pub timeout_secs: f64,
    pub timeouts: u64,
    /// Forward runs that finished but disagreed with the generated basis.
    pub mismatches: u64,
    /// Fraction of forward runs that finished within the timeout.
    pub success_rate: f64,
    /// `forward_secs / backward_secs`.
    pub speedup: f64,
}

/// Forward total with the timeout charged once per occurrence.
pub fn forward_total(finished: &[Duration], timeouts: u64, timeout: Duration) -> Duration {
    finished.iter().sum::<Duration>() + timeout * timeouts as u32
}

/// Runs both directions single-threaded on the current thread. The forward
/// timeout is `opts.timeout`, five seconds when unset.
pub fn run_bench<C: Field>(cfg: &GenerationConfig, opts: &BuchbergerOptions) -> Result<BenchReport, DatasetError> {
    let timeout = opts.timeout.unwrap_or(Duration::from_secs(5));
    let opts = BuchbergerOptions {
        timeout: Some(timeout),
        ..*opts
    };
    let t0 = Instant::now();
    let samples = generate_serial::<C>(cfg)?;
    let backward = t0.elapsed();

    let mut finished = Vec::with_capacity(samples.len());
    let mut timeouts = 0u64;
    let mut mismatches = 0u64;
    for s in &samples {
        let t = Instant::now();
        match buchberger_with(&s.f, &opts) {
            Ok(r) => {
                finished.push(t.elapsed());
                if r.basis != s.g {
                    mismatches += 1;
                }
            }
            Err(GroebnerError::Timeout { .. }) => timeouts += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let forward = forward_total(&finished, timeouts, timeout);
    let m = samples.len() as u64;
    let backward_secs = backward.as_secs_f64();
    let forward_secs = forward.as_secs_f64();
    Ok(BenchReport {
        n: cfg.n,
        field: cfg.field.to_string(),
        m,
        backward_secs,
        forward_secs,
        timeout_secs: timeout.as_secs_f64(),
        timeouts,
        mismatches,
        success_rate: if m == 0 { 1.0 } else { (m - timeouts) as f64 / m as f64 },
        speedup: if backward_secs > 0.0 { forward_secs / backward_secs } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{FieldSpec, F7};

    #[test]
    fn timeout_accounting() {
        let f = [Duration::from_millis(10), Duration::from_millis(20)];
        assert_eq!(forward_total(&f, 3, Duration::from_secs(5)), Duration::from_millis(15_030));
    }

    #[test]
    fn smoke() {
        let mut cfg = GenerationConfig::new(2, FieldSpec::prime(7).unwrap());
        cfg.m = 1;
        let r = run_bench::<F7>(&cfg, &BuchbergerOptions::default()).unwrap();
        assert_eq!(r.timeout_secs, 5.0);
        assert_eq!(r.m, 1);
        assert_eq!(r.mismatches, 0);
        assert!(r.success_rate == 1.0 || r.timeouts == 1);
    }
}
