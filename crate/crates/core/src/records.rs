//! Line-oriented record formats shared by the loaders, the exporters and
//! the command-line driver.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostRecord {
    pub user: String,
    pub resource: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub user: String,
    pub tag: String,
    pub resource: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub user: String,
    pub kind: crate::profiles::ProfileKind,
    pub items: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabRecord {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub label: String,
    #[serde(serialize_with = "round6")]
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborRecord {
    pub user: String,
    pub members: Vec<MemberRecord>,
}

/// Rounds to 6 decimal digits.
pub fn fixed6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// `serialize_with` helper emitting a float rounded to 6 decimal digits.
pub fn round6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(fixed6(*x))
}

pub fn round6_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&fixed6(*v)),
        None => s.serialize_none(),
    }
}

pub fn round6_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&fixed6(*x))?;
    }
    seq.end()
}

/// Writes one compact JSON object per line.
pub fn write_jsonl<W, T, I>(mut w: W, records: I) -> Result<()>
where
    W: Write,
    T: Serialize,
    I: IntoIterator<Item = T>,
{
    for r in records {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Iterates over the content lines of a record stream, skipping blank lines
/// and `#` comments. Yields 1-based line numbers.
pub fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(Error::Io(e))),
        Ok(l) => {
            let t = l.trim_start();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, l)))
            }
        }
    })
}

/// Reads typed records, one JSON object per line.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(r: R) -> Result<Vec<T>> {
    content_lines(r)
        .map(|item| {
            let (line, text) = item?;
            serde_json::from_str(&text).map_err(|e| Error::Malformed {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}
