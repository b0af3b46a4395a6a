//! Deterministic CSV and JSON writers and the per-run output bundle.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: String,
    pub config_sha256: String,
    pub precision_bits: usize,
    pub seed: u64,
    pub version: &'static str,
}

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// CSV text with a leading `#` metadata line and a header row.
pub struct CsvDoc {
    comment: String,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvDoc {
    pub fn new(meta: &Meta, header: &[&str]) -> Self {
        let comment = format!(
            "# command={} config_sha256={} precision_bits={} seed={} version={}\n",
            meta.command, meta.config_sha256, meta.precision_bits, meta.seed, meta.version
        );
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        CsvDoc { comment, writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let body = self.writer.into_inner().expect("in-memory flush");
        self.comment + &String::from_utf8(body).expect("utf-8 fields")
    }
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    meta: &'a Meta,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON object `{"meta": ..., <fields of body>}`.
pub fn json_doc<T: Serialize>(meta: &Meta, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&JsonDoc { meta, body }).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Clone, Debug)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

impl OutputFile {
    pub fn new(name: impl Into<String>, contents: String) -> Self {
        OutputFile { name: name.into(), contents }
    }
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    name: &'a str,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    files: Vec<ManifestEntry<'a>>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes every file into `dir` plus a `manifest.json` with their hashes;
/// returns the written paths.
pub fn write_bundle(dir: &Path, meta: &Meta, files: &[OutputFile]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let mut paths = Vec::with_capacity(files.len() + 1);
    for f in files {
        let path = dir.join(&f.name);
        fs::write(&path, &f.contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        paths.push(path);
    }
    let manifest = Manifest {
        files: files
            .iter()
            .map(|f| ManifestEntry { name: &f.name, sha256: sha256_hex(f.contents.as_bytes()), bytes: f.contents.len() })
            .collect(),
    };
    let path = dir.join("manifest.json");
    fs::write(&path, json_doc(meta, &manifest)).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    paths.push(path);
    Ok(paths)
}
