use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use gbgen::bench::BenchReport;
use gbgen::dataset::{
    parse_prefix_tokens, read_jsonl, to_prefix_tokens, write_jsonl, write_meta, DatasetWriter, GenerationReport,
    Header, JsonlReader, Meta, ProfileAccumulator,
};
use gbgen::solve::vanishes_at;
use gbgen::{
    buchberger_with, generate_each, is_reduced_groebner, run_bench, solve_shape, with_field, with_finite_field,
    BuchbergerOptions, DatasetError, Field, FiniteField, GroebnerError, SamplePair, TermOrder,
};

use crate::args::{Format, GenArgs};

pub enum Outcome {
    Passed,
    Failed,
}

impl Outcome {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Passed
        } else {
            Outcome::Failed
        }
    }
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn git_describe() -> Option<String> {
    option_env!("GBGEN_GIT_DESCRIBE").map(str::to_string)
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub fn generate(gen: &GenArgs, out: &Path, verify_fraction: f64, fmt: Format) -> Result<Outcome> {
    let mut cfg = gen.config(gen.n);
    cfg.verify_fraction = verify_fraction;
    cfg.validate()?;
    ensure_parent(out)?;
    let t0 = Instant::now();
    let result = with_field!(cfg.field, C => generate_into::<C>(&cfg, out));
    let report = match result {
        Ok(r) => r,
        Err(DatasetError::OracleMismatch { index }) => {
            eprintln!("sample {index}: Buchberger disagrees with the generated basis");
            return Ok(Outcome::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    let secs = t0.elapsed().as_secs_f64();
    let meta = Meta::new(cfg.clone(), report, git_describe());
    let meta_path = write_meta(out, &meta)?;
    match fmt {
        Format::Json => print_json(&json!({ "report": report, "seconds": secs, "meta": meta_path })),
        Format::Table => {
            println!("generated {} samples ({}, n = {}) in {secs:.3}s", report.generated, cfg.field, cfg.n);
            println!("verified inline: {} (inconclusive {})", report.verified, report.inconclusive);
            println!("with zero rows: {}, over height bound: {}", report.with_zeros, report.over_range);
            println!("meta: {}", meta_path.display());
        }
    }
    Ok(Outcome::Passed)
}

fn generate_into<C: Field>(cfg: &gbgen::GenerationConfig, out: &Path) -> Result<GenerationReport, DatasetError> {
    let mut w = DatasetWriter::create(out, Header::new(cfg.field, cfg.n, cfg.order), true)?;
    let report = generate_each::<C, _>(cfg, |s| w.write(&s))?;
    w.finish()?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Verdict {
    Pass,
    Mismatch,
    Timeout,
}

#[derive(Debug, Serialize)]
struct SampleCheck {
    index: u64,
    verdict: Verdict,
    seconds: f64,
    f_is_groebner: bool,
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    samples: usize,
    passed: usize,
    mismatched: usize,
    timed_out: usize,
    /// Samples whose F is already a reduced Groebner basis.
    f_groebner: usize,
    seconds: f64,
}

pub fn verify(input: &Path, opts: &BuchbergerOptions, failures_only: bool, fmt: Format) -> Result<Outcome> {
    let header = Header::read(input)?;
    with_field!(header.field, C => verify_as::<C>(input, opts, failures_only, fmt))
}

fn check_sample<C: Field>(s: &SamplePair<C>, opts: &BuchbergerOptions) -> Result<SampleCheck, GroebnerError> {
    let t = Instant::now();
    let verdict = match buchberger_with(&s.f, opts) {
        Ok(r) if r.basis == s.g => Verdict::Pass,
        Ok(_) => Verdict::Mismatch,
        Err(GroebnerError::Timeout { .. }) => Verdict::Timeout,
        Err(e) => return Err(e),
    };
    Ok(SampleCheck {
        index: s.index,
        verdict,
        seconds: t.elapsed().as_secs_f64(),
        f_is_groebner: is_reduced_groebner(&s.f),
    })
}

fn verify_as<C: Field>(input: &Path, opts: &BuchbergerOptions, failures_only: bool, fmt: Format) -> Result<Outcome> {
    let (_, samples) = read_jsonl::<C>(input)?;
    let t0 = Instant::now();
    let checks = samples
        .par_iter()
        .map(|s| check_sample(s, opts).with_context(|| format!("sample {}", s.index)))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| checks.iter().filter(|c| c.verdict == v).count();
    let summary = VerifySummary {
        samples: checks.len(),
        passed: count(Verdict::Pass),
        mismatched: count(Verdict::Mismatch),
        timed_out: count(Verdict::Timeout),
        f_groebner: checks.iter().filter(|c| c.f_is_groebner).count(),
        seconds: t0.elapsed().as_secs_f64(),
    };
    let shown: Vec<&SampleCheck> = checks
        .iter()
        .filter(|c| !failures_only || c.verdict != Verdict::Pass)
        .collect();
    match fmt {
        Format::Json => print_json(&json!({ "summary": summary, "samples": shown })),
        Format::Table => {
            for c in &shown {
                let v = match c.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Mismatch => "FAIL mismatch",
                    Verdict::Timeout => "FAIL timeout",
                };
                println!("sample {:>6}  {v:<14} {:.4}s", c.index, c.seconds);
            }
            println!(
                "{}/{} passed, {} mismatched, {} timed out; F already Groebner in {} ({:.3}s)",
                summary.passed,
                summary.samples,
                summary.mismatched,
                summary.timed_out,
                summary.f_groebner,
                summary.seconds
            );
        }
    }
    Ok(Outcome::from_ok(summary.passed == summary.samples))
}

pub fn profile(input: &Path, fmt: Format) -> Result<Outcome> {
    let header = Header::read(input)?;
    let acc = with_field!(header.field, C => profile_as::<C>(input))?;
    let p = acc.finish()?;
    match fmt {
        Format::Json => print_json(&p),
        Format::Table => print!("{p}"),
    }
    Ok(Outcome::Passed)
}

fn profile_as<C: Field>(input: &Path) -> Result<ProfileAccumulator> {
    let mut acc = ProfileAccumulator::default();
    for s in JsonlReader::<C>::open(input)? {
        acc.push(&s?);
    }
    Ok(acc)
}

pub fn bench(gen: &GenArgs, also_n: &[usize], opts: &BuchbergerOptions, fmt: Format) -> Result<Outcome> {
    let mut ns = vec![gen.n];
    ns.extend(also_n.iter().copied().filter(|&n| n != gen.n));
    let mut reports: Vec<BenchReport> = Vec::new();
    for n in ns {
        let cfg = gen.config(n);
        reports.push(with_field!(cfg.field, C => run_bench::<C>(&cfg, opts))?);
    }
    match fmt {
        Format::Json => print_json(&reports),
        Format::Table => {
            println!(
                "{:>3} {:>6} {:>7} {:>12} {:>12} {:>9} {:>9} {:>11}",
                "n", "field", "m", "backward s", "forward s", "timeouts", "success", "speedup"
            );
            for r in &reports {
                println!(
                    "{:>3} {:>6} {:>7} {:>12.4} {:>12.4} {:>9} {:>8.1}% {:>10.1}x",
                    r.n,
                    r.field,
                    r.m,
                    r.backward_secs,
                    r.forward_secs,
                    r.timeouts,
                    100.0 * r.success_rate,
                    r.speedup
                );
            }
        }
    }
    let ok = reports.iter().all(|r| r.mismatches == 0);
    if !ok {
        eprintln!("forward Buchberger disagreed with a generated basis");
    }
    Ok(Outcome::from_ok(ok))
}

fn default_tokens_path(input: &Path) -> PathBuf {
    let s = input.to_string_lossy();
    match s.strip_suffix(".jsonl") {
        Some(base) => PathBuf::from(format!("{base}.tokens.txt")),
        None => PathBuf::from(format!("{s}.tokens.txt")),
    }
}

pub fn tokenize(input: &Path, out: Option<&Path>, fmt: Format) -> Result<Outcome> {
    let header = Header::read(input)?;
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| default_tokens_path(input));
    ensure_parent(&out)?;
    let (samples, total, failures) = with_field!(header.field, C => tokenize_as::<C>(input, &out))?;
    match fmt {
        Format::Json => print_json(&json!({
            "samples": samples,
            "tokens": total,
            "round_trip_failures": failures,
            "out": out,
        })),
        Format::Table => {
            println!("{samples} samples, {total} tokens -> {}", out.display());
            println!("round-trip failures: {}", failures.len());
        }
    }
    Ok(Outcome::from_ok(failures.is_empty()))
}

fn tokenize_as<C: Field>(input: &Path, out: &Path) -> Result<(usize, usize, Vec<u64>)> {
    use std::io::Write;
    let reader = JsonlReader::<C>::open(input)?;
    let ring = reader.header().ring();
    let file = std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = std::io::BufWriter::new(file);
    let (mut samples, mut total, mut failures) = (0, 0, Vec::new());
    for s in reader {
        let s = s?;
        let tf = to_prefix_tokens(&s.f);
        let tg = to_prefix_tokens(&s.g);
        let back_f = parse_prefix_tokens::<C, _>(ring, &tf);
        let back_g = parse_prefix_tokens::<C, _>(ring, &tg);
        if back_f.as_ref().ok() != Some(&s.f) || back_g.as_ref().ok() != Some(&s.g) {
            failures.push(s.index);
        }
        writeln!(w, "{}\t{}", tf.join(" "), tg.join(" "))?;
        samples += 1;
        total += tf.len() + tg.len();
    }
    w.flush()?;
    Ok((samples, total, failures))
}

pub fn fglm(input: &Path, from: TermOrder, to: TermOrder, out: Option<&Path>, fmt: Format) -> Result<Outcome> {
    let header = Header::read(input)?;
    if header.order != from {
        bail!("{} is stored in {} order, not {from}", input.display(), header.order);
    }
    let out = out.unwrap_or(input).to_path_buf();
    ensure_parent(&out)?;
    let t0 = Instant::now();
    let count = with_field!(header.field, C => fglm_as::<C>(input, &header, to, &out))?;
    let secs = t0.elapsed().as_secs_f64();
    match fmt {
        Format::Json => print_json(&json!({ "samples": count, "from": from, "to": to, "seconds": secs, "out": out })),
        Format::Table => println!("converted {count} bases {from} -> {to} in {secs:.3}s -> {}", out.display()),
    }
    Ok(Outcome::Passed)
}

fn fglm_as<C: Field>(input: &Path, header: &Header, to: TermOrder, out: &Path) -> Result<usize> {
    let (_, samples) = read_jsonl::<C>(input)?;
    let converted = samples
        .into_par_iter()
        .map(|s| {
            let g = gbgen::fglm(&s.g, to).with_context(|| format!("sample {}", s.index))?;
            let f = s.f.iter().map(|p| p.with_order(to)).collect();
            Ok(SamplePair { f, g, ..s })
        })
        .collect::<Result<Vec<_>>>()?;
    // Write beside the destination first so an in-place rewrite never
    // leaves a truncated file.
    let tmp = {
        let mut s = out.as_os_str().to_owned();
        s.push(".partial");
        PathBuf::from(s)
    };
    write_jsonl(&tmp, &Header::new(header.field, header.n, to), &converted)?;
    std::fs::rename(&tmp, out).with_context(|| format!("renaming to {}", out.display()))?;
    Ok(converted.len())
}

#[derive(Debug, Serialize)]
struct Solved {
    index: u64,
    points: Vec<Vec<String>>,
    /// Every point zeroes both F and G.
    sound: bool,
}

pub fn solve(input: &Path, fmt: Format) -> Result<Outcome> {
    let header = Header::read(input)?;
    let solved = with_finite_field!(
        header.field, C => solve_as::<C>(input)?,
        rationals => bail!("solving is supported over prime fields only, not {}", header.field)
    );
    match fmt {
        Format::Json => print_json(&solved),
        Format::Table => {
            for s in &solved {
                let pts: Vec<String> = s.points.iter().map(|p| format!("({})", p.join(", "))).collect();
                let verdict = if s.sound { "ok" } else { "FAIL" };
                println!("sample {:>6}  {verdict:<4} {} solutions: {}", s.index, pts.len(), pts.join(" "));
            }
            let bad = solved.iter().filter(|s| !s.sound).count();
            println!("{} samples, {} unsound", solved.len(), bad);
        }
    }
    Ok(Outcome::from_ok(solved.iter().all(|s| s.sound)))
}

fn solve_as<C: FiniteField>(input: &Path) -> Result<Vec<Solved>> {
    let (header, samples) = read_jsonl::<C>(input)?;
    samples
        .par_iter()
        .map(|s| {
            let g_lex = if header.order == TermOrder::Lex {
                s.g.clone()
            } else {
                gbgen::fglm(&s.g, TermOrder::Lex).with_context(|| format!("sample {}", s.index))?
            };
            let f_lex: Vec<_> = s.f.iter().map(|p| p.with_order(TermOrder::Lex)).collect();
            let sol = solve_shape(&g_lex).with_context(|| format!("sample {}", s.index))?;
            let sound = sol.complete && sol.points.iter().all(|p| vanishes_at(&f_lex, p) && vanishes_at(&g_lex, p));
            let points = sol
                .points
                .iter()
                .map(|p| p.iter().map(|c| c.to_string()).collect())
                .collect();
            Ok(Solved {
                index: s.index,
                points,
                sound,
            })
        })
        .collect()
}
