//! JSON-lines persistence. A dataset `<base>` consists of
//! `<base>.jsonl` (a header line, then one sample per line),
//! `<base>.tokens.txt` (F tokens, TAB, G tokens per sample) and
//! `<base>.meta.json` (the generation config).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::tokens::to_prefix_tokens;
use super::{DatasetError, GenerationConfig, GenerationReport, SampleFlags, SamplePair};
use crate::field::{Field, FieldError, FieldSpec};
use crate::poly::{parse_poly, Ring, TermOrder};

pub const FORMAT_NAME: &str = "gbgen-jsonl";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub kind: String,
    pub format: String,
    pub version: u32,
    pub field: FieldSpec,
    pub n: usize,
    pub order: TermOrder,
}

impl Header {
    pub fn new(field: FieldSpec, n: usize, order: TermOrder) -> Self {
        Self {
            kind: "header".into(),
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            field,
            n,
            order,
        }
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.n, self.order)
    }

    /// Reads only the first line of a dataset file.
    pub fn read(path: &Path) -> Result<Self, DatasetError> {
        let file = File::open(path).map_err(|e| io_err(path, e))?;
        let mut line = String::new();
        BufReader::new(file)
            .read_line(&mut line)
            .map_err(|e| io_err(path, e))?;
        Self::parse(&line)
    }

    fn parse(line: &str) -> Result<Self, DatasetError> {
        let h: Header = serde_json::from_str(line.trim_end()).map_err(|e| DatasetError::Line {
            line: 1,
            msg: format!("bad header: {e}"),
        })?;
        if h.kind != "header" || h.format != FORMAT_NAME {
            return Err(DatasetError::Line {
                line: 1,
                msg: format!("not a {FORMAT_NAME} header"),
            });
        }
        if h.version != FORMAT_VERSION {
            return Err(DatasetError::Line {
                line: 1,
                msg: format!("unsupported format version {}", h.version),
            });
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Record {
    index: u64,
    #[serde(rename = "F")]
    f: Vec<String>,
    #[serde(rename = "G")]
    g: Vec<String>,
    s: usize,
    seed: u64,
    flags: SampleFlags,
}

impl Record {
    fn from_sample<C: Field>(s: &SamplePair<C>) -> Self {
        Self {
            index: s.index,
            f: s.f.iter().map(|p| p.to_string()).collect(),
            g: s.g.iter().map(|p| p.to_string()).collect(),
            s: s.s,
            seed: s.seed,
            flags: s.flags,
        }
    }
}

/// Provenance sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub version: String,
    pub git_describe: Option<String>,
    pub config: GenerationConfig,
    pub report: GenerationReport,
}

impl Meta {
    pub fn new(config: GenerationConfig, report: GenerationReport, git_describe: Option<String>) -> Self {
        Self {
            generator: "gbgen".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            git_describe,
            config,
            report,
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> DatasetError {
    DatasetError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn suffixed(base: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Streams samples to `<base>.jsonl` and `<base>.tokens.txt`.
pub struct DatasetWriter {
    jsonl: BufWriter<File>,
    tokens: Option<BufWriter<File>>,
    jsonl_path: PathBuf,
    tokens_path: PathBuf,
    header: Header,
}

impl DatasetWriter {
    pub fn create(base: &Path, header: Header, with_tokens: bool) -> Result<Self, DatasetError> {
        let jsonl_path = suffixed(base, ".jsonl");
        let tokens_path = suffixed(base, ".tokens.txt");
        let mut jsonl = BufWriter::new(File::create(&jsonl_path).map_err(|e| io_err(&jsonl_path, e))?);
        let tokens = if with_tokens {
            Some(BufWriter::new(
                File::create(&tokens_path).map_err(|e| io_err(&tokens_path, e))?,
            ))
        } else {
            None
        };
        let line = serde_json::to_string(&header).expect("header serializes");
        writeln!(jsonl, "{line}").map_err(|e| io_err(&jsonl_path, e))?;
        Ok(Self {
            jsonl,
            tokens,
            jsonl_path,
            tokens_path,
            header,
        })
    }

    pub fn jsonl_path(&self) -> &Path {
        &self.jsonl_path
    }

    pub fn write<C: Field>(&mut self, s: &SamplePair<C>) -> Result<(), DatasetError> {
        if C::spec() != self.header.field {
            return Err(FieldError::DomainMismatch {
                expected: self.header.field,
                found: C::spec(),
            }
            .into());
        }
        let line = serde_json::to_string(&Record::from_sample(s)).expect("record serializes");
        writeln!(self.jsonl, "{line}").map_err(|e| io_err(&self.jsonl_path, e))?;
        if let Some(t) = self.tokens.as_mut() {
            writeln!(t, "{}\t{}", to_prefix_tokens(&s.f).join(" "), to_prefix_tokens(&s.g).join(" "))
                .map_err(|e| io_err(&self.tokens_path, e))?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), DatasetError> {
        self.jsonl.flush().map_err(|e| io_err(&self.jsonl_path, e))?;
        if let Some(t) = self.tokens.as_mut() {
            t.flush().map_err(|e| io_err(&self.tokens_path, e))?;
        }
        Ok(())
    }
}

pub fn write_meta(base: &Path, meta: &Meta) -> Result<PathBuf, DatasetError> {
    let path = suffixed(base, ".meta.json");
    let text = serde_json::to_string_pretty(meta).expect("meta serializes");
    std::fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Writes all three files for an in-memory dataset.
pub fn write_dataset<C: Field>(
    base: &Path,
    samples: &[SamplePair<C>],
    meta: &Meta,
) -> Result<(), DatasetError> {
    let header = Header::new(meta.config.field, meta.config.n, meta.config.order);
    let mut w = DatasetWriter::create(base, header, true)?;
    for s in samples {
        w.write(s)?;
    }
    w.finish()?;
    write_meta(base, meta)?;
    Ok(())
}

/// Writes a single `.jsonl` file at `path`.
pub fn write_jsonl<C: Field>(path: &Path, header: &Header, samples: &[SamplePair<C>]) -> Result<(), DatasetError> {
    let mut out = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut put = |line: String| writeln!(out, "{line}").map_err(|e| io_err(path, e));
    put(serde_json::to_string(header).expect("header serializes"))?;
    for s in samples {
        put(serde_json::to_string(&Record::from_sample(s)).expect("record serializes"))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// Streaming reader over a `.jsonl` dataset with coefficients in `C`.
pub struct JsonlReader<C: Field> {
    lines: std::io::Lines<BufReader<File>>,
    header: Header,
    line_no: usize,
    path: PathBuf,
    _field: PhantomData<C>,
}

impl<C: Field> JsonlReader<C> {
    pub fn open(path: &Path) -> Result<Self, DatasetError> {
        let file = File::open(path).map_err(|e| io_err(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let first = match lines.next() {
            Some(l) => l.map_err(|e| io_err(path, e))?,
            None => {
                return Err(DatasetError::Line {
                    line: 1,
                    msg: "missing header".into(),
                })
            }
        };
        let header = Header::parse(&first)?;
        if header.field != C::spec() {
            return Err(FieldError::DomainMismatch {
                expected: C::spec(),
                found: header.field,
            }
            .into());
        }
        Ok(Self {
            lines,
            header,
            line_no: 1,
            path: path.to_path_buf(),
            _field: PhantomData,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    fn parse_record(&self, text: &str) -> Result<SamplePair<C>, DatasetError> {
        let line = self.line_no;
        let bad = |msg: String| DatasetError::Line { line, msg };
        let r: Record = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let ring = self.header.ring();
        let parse_all = |v: &[String], col: &str| {
            v.iter()
                .map(|s| parse_poly::<C>(ring, s).map_err(|e| bad(format!("{col}: {e}"))))
                .collect::<Result<Vec<_>, _>>()
        };
        let f = parse_all(&r.f, "F")?;
        let g = parse_all(&r.g, "G")?;
        Ok(SamplePair {
            index: r.index,
            f,
            g,
            s: r.s,
            seed: r.seed,
            flags: r.flags,
        })
    }
}

impl<C: Field> Iterator for JsonlReader<C> {
    type Item = Result<SamplePair<C>, DatasetError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let text = match line {
                Ok(t) => t,
                Err(e) => return Some(Err(io_err(&self.path, e))),
            };
            if text.trim().is_empty() {
                continue;
            }
            return Some(self.parse_record(&text));
        }
    }
}

/// Reads a whole `.jsonl` dataset.
pub fn read_jsonl<C: Field>(path: &Path) -> Result<(Header, Vec<SamplePair<C>>), DatasetError> {
    let reader = JsonlReader::<C>::open(path)?;
    let header = reader.header().clone();
    let samples = reader.collect::<Result<Vec<_>, _>>()?;
    Ok((header, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_dataset, GenerationConfig};
    use crate::{Rational, F7};

    #[test]
    fn round_trip_and_line_errors() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = GenerationConfig::new(2, FieldSpec::rationals());
        cfg.m = 25;
        let (samples, rep) = generate_dataset::<Rational>(&cfg).unwrap();
        let base = dir.path().join("q2");
        write_dataset(&base, &samples, &Meta::new(cfg.clone(), rep, None)).unwrap();
        let (h, back) = read_jsonl::<Rational>(&dir.path().join("q2.jsonl")).unwrap();
        assert_eq!(h.n, 2);
        assert_eq!(back, samples);
        let tokens = std::fs::read_to_string(dir.path().join("q2.tokens.txt")).unwrap();
        assert_eq!(tokens.lines().count(), 25);

        assert!(matches!(
            JsonlReader::<F7>::open(&dir.path().join("q2.jsonl")),
            Err(DatasetError::Field(FieldError::DomainMismatch { .. }))
        ));

        let text = std::fs::read_to_string(dir.path().join("q2.jsonl")).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines[4] = "{\"index\": 3, \"F\": [\"x0 +\"]";
        let broken = dir.path().join("broken.jsonl");
        std::fs::write(&broken, lines.join("\n")).unwrap();
        match read_jsonl::<Rational>(&broken) {
            Err(DatasetError::Line { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_dataset_has_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = GenerationConfig::new(2, FieldSpec::prime(7).unwrap());
        cfg.m = 0;
        let (samples, rep) = generate_dataset::<F7>(&cfg).unwrap();
        let base = dir.path().join("empty");
        write_dataset(&base, &samples, &Meta::new(cfg, rep, None)).unwrap();
        let text = std::fs::read_to_string(dir.path().join("empty.jsonl")).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(read_jsonl::<F7>(&dir.path().join("empty.jsonl")).unwrap().1.is_empty());
    }
}
