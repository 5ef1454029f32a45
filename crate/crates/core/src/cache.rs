//! On-disk cache of traced paths, one JSON-lines file per trace.
//!
//! The first line is a header carrying the format version, the content key
//! and the trace statistics; every further line is one sample
//! `{"i":..,"X":[re,im],"roots":[[re,im],..]}`. The key is the sha256 of the
//! equation, the path, the tracker controls and the starting roots, so a
//! file can only ever be reused for exactly the same computation.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::equation::TrinomialEquation;
use crate::paths::PathSpec;
use crate::tracker::{trace, TraceSample, TracedPath, TrackerControls, TrackerError};

pub const TRACE_FORMAT: &str = "braidnomial-trace/1";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    key: String,
    equation: String,
    samples: usize,
    max_residual: f64,
    min_separation: f64,
    rejected_steps: usize,
    precision_fallbacks: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    i: usize,
    #[serde(rename = "X")]
    x: [f64; 2],
    roots: Vec<[f64; 2]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Content hash of everything a trace depends on.
pub fn trace_key(eq: &TrinomialEquation, path: &PathSpec, start: &[Complex64], ctl: &TrackerControls) -> String {
    let content = serde_json::json!({
        "equation": eq.tag(),
        "path": path,
        "controls": ctl,
        "start": start.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
    });
    hex::encode(Sha256::digest(content.to_string().as_bytes()))
}

/// What happened when a trace was requested through the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "detail")]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// A file existed under the key but could not be used; it was replaced.
    Replaced(String),
    /// The trace was computed but could not be written.
    Unwritable(String),
}

#[derive(Debug, Clone)]
pub struct TraceCache {
    dir: PathBuf,
}

impl TraceCache {
    pub fn open(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(TraceCache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn file_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.jsonl"))
    }

    /// `Ok(None)` when nothing is stored under `key`.
    pub fn load(&self, key: &str) -> Result<Option<TracedPath>, String> {
        let file = match fs::File::open(self.file_for(key)) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let mut lines = BufReader::new(file).lines();
        let first = lines.next().ok_or("empty file")?.map_err(|e| e.to_string())?;
        let header: Header = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        if header.format != TRACE_FORMAT {
            return Err(format!("format {}", header.format));
        }
        if header.key != key {
            return Err("key mismatch".into());
        }
        let mut samples = Vec::with_capacity(header.samples);
        for (k, line) in lines.enumerate() {
            let rec: Record = serde_json::from_str(&line.map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if rec.i != k {
                return Err(format!("record {} out of order", rec.i));
            }
            samples.push(TraceSample { x: unpair(rec.x), roots: rec.roots.into_iter().map(unpair).collect() });
        }
        if samples.len() != header.samples || samples.is_empty() {
            return Err(format!("expected {} samples, found {}", header.samples, samples.len()));
        }
        Ok(Some(TracedPath {
            samples,
            max_residual: header.max_residual,
            min_separation: header.min_separation,
            rejected_steps: header.rejected_steps,
            precision_fallbacks: header.precision_fallbacks,
        }))
    }

    pub fn store(&self, key: &str, equation: &str, traced: &TracedPath) -> std::io::Result<()> {
        let final_path = self.file_for(key);
        let tmp = self.dir.join(format!("{key}.jsonl.tmp"));
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            let header = Header {
                format: TRACE_FORMAT.into(),
                key: key.into(),
                equation: equation.into(),
                samples: traced.samples.len(),
                max_residual: traced.max_residual,
                min_separation: traced.min_separation,
                rejected_steps: traced.rejected_steps,
                precision_fallbacks: traced.precision_fallbacks,
            };
            serde_json::to_writer(&mut w, &header)?;
            writeln!(w)?;
            for (i, s) in traced.samples.iter().enumerate() {
                let rec = Record { i, x: pair(s.x), roots: s.roots.iter().map(|z| pair(*z)).collect() };
                serde_json::to_writer(&mut w, &rec)?;
                writeln!(w)?;
            }
            w.flush()?;
        }
        fs::rename(tmp, final_path)
    }
}

/// Trace `path`, reusing a cached result when one exists.
pub fn trace_cached(
    cache: Option<&TraceCache>,
    eq: &TrinomialEquation,
    path: &PathSpec,
    start: &[Complex64],
    ctl: &TrackerControls,
) -> Result<(TracedPath, Option<CacheOutcome>), TrackerError> {
    let Some(cache) = cache else {
        return Ok((trace(eq, path, start, ctl)?, None));
    };
    let key = trace_key(eq, path, start, ctl);
    let stale = match cache.load(&key) {
        Ok(Some(t)) => return Ok((t, Some(CacheOutcome::Hit))),
        Ok(None) => None,
        Err(reason) => Some(reason),
    };
    let traced = trace(eq, path, start, ctl)?;
    let outcome = match cache.store(&key, &eq.tag(), &traced) {
        Err(e) => CacheOutcome::Unwritable(e.to_string()),
        Ok(()) => match stale {
            Some(reason) => CacheOutcome::Replaced(reason),
            None => CacheOutcome::Miss,
        },
    };
    Ok((traced, Some(outcome)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::build_equation;
    use crate::paths::{default_delta, loop_path, LoopSpec};
    use crate::tracker::standard_base_roots;

    #[test]
    fn round_trip_is_exact() {
        let eq = build_equation(5, 3, 2, 7).unwrap();
        let ctl = TrackerControls::default();
        let base = standard_base_roots(&eq, &ctl).unwrap();
        let path = loop_path(&eq, &LoopSpec::Zero, default_delta(&eq)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let cache = TraceCache::open(dir.path()).unwrap();
        let (first, o1) = trace_cached(Some(&cache), &eq, &path, &base.roots, &ctl).unwrap();
        let (second, o2) = trace_cached(Some(&cache), &eq, &path, &base.roots, &ctl).unwrap();
        assert_eq!(o1, Some(CacheOutcome::Miss));
        assert_eq!(o2, Some(CacheOutcome::Hit));
        assert_eq!(first, second);

        // a different control setting must not hit the same file
        let other = TrackerControls { tolerance: 1e-11, ..ctl };
        assert_ne!(trace_key(&eq, &path, &base.roots, &ctl), trace_key(&eq, &path, &base.roots, &other));

        // a damaged file is replaced
        let key = trace_key(&eq, &path, &base.roots, &ctl);
        fs::write(cache.file_for(&key), "{\"format\":\"braidnomial-trace/0\"}\n").unwrap();
        let (third, o3) = trace_cached(Some(&cache), &eq, &path, &base.roots, &ctl).unwrap();
        assert!(matches!(o3, Some(CacheOutcome::Replaced(_))));
        assert_eq!(third, first);
    }
}
