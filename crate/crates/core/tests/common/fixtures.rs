//! Loader for the transcribed (F, G) tables under `tests/fixtures`.
//!
//! Each file holds LaTeX table rows: a `\multirow{k}{*}{ID}` line opens a
//! record, and every line carries `$f_i$ = $...$` and optionally
//! `$g_i$ = $...$` cells.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub file: String,
    pub n: usize,
    /// `"qq"`, `"f7"` or `"f31"`.
    pub field: String,
    pub id: u32,
    pub f: Vec<String>,
    pub g: Vec<String>,
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

/// `$name$ = $body$` cells in order of appearance.
fn cells(line: &str) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let mut parts = line.split('$');
    while let Some(p) = parts.next() {
        let kind = match p.as_bytes() {
            [k @ (b'f' | b'g'), b'_', ..] => *k as char,
            _ => continue,
        };
        // The next segment is " = ", then the body.
        parts.next();
        out.push((kind, parts.next().expect("cell body").trim().to_string()));
    }
    out
}

pub fn parse_file(path: &Path) -> Vec<Fixture> {
    let name = path.file_stem().unwrap().to_str().unwrap().to_string();
    let (n, field) = name.split_once('_').unwrap();
    let n: usize = n.trim_start_matches('n').parse().unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let mut out: Vec<Fixture> = Vec::new();
    for line in text.lines() {
        if let Some(pos) = line.find("\\multirow{") {
            let tail = &line[pos..];
            let id_open = tail.find("{*}{").unwrap() + 4;
            let id_close = id_open + tail[id_open..].find('}').unwrap();
            out.push(Fixture {
                file: name.clone(),
                n,
                field: field.to_string(),
                id: tail[id_open..id_close].parse().unwrap(),
                f: Vec::new(),
                g: Vec::new(),
            });
        }
        for (kind, body) in cells(line) {
            let cur = out.last_mut().expect("cell before first record");
            match kind {
                'f' => cur.f.push(body),
                _ => cur.g.push(body),
            }
        }
    }
    out
}

pub fn load_all() -> Vec<Fixture> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "tex"))
        .collect();
    files.sort();
    files.iter().flat_map(|p| parse_file(p)).collect()
}
