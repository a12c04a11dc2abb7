//! The flat dissimilarity store.
//!
//! Observed pairs are kept as parallel vectors sorted by dissimilarity, with
//! tie blocks encoded by their length at the first element of each block and
//! zeros for the remaining members. Missing observations are simply absent,
//! so every stored weight is strictly positive.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower triangle of a symmetric `nobj × nobj` array, stored row by row:
/// `(2,1), (3,1), (3,2), (4,1), …`. `None` marks a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTriangle {
    nobj: usize,
    values: Vec<Option<f64>>,
}

impl DistTriangle {
    pub fn new(nobj: usize, values: Vec<Option<f64>>) -> Result<Self> {
        if nobj < 2 {
            return Err(Error::TooFewObjects(nobj));
        }
        let expected = nobj * (nobj - 1) / 2;
        if values.len() != expected {
            return Err(Error::TriangleLength {
                nobj,
                expected,
                got: values.len(),
            });
        }
        let tri = DistTriangle { nobj, values };
        for (i, j, v) in tri.iter() {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { i, j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { i, j, value: v });
                }
            }
        }
        Ok(tri)
    }

    /// Builds a complete triangle from `f(i, j)` over 1-based `i > j`.
    pub fn from_fn(nobj: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(nobj * nobj.saturating_sub(1) / 2);
        for i in 2..=nobj {
            for j in 1..i {
                values.push(Some(f(i, j)));
            }
        }
        Self::new(nobj, values)
    }

    pub fn nobj(&self) -> usize {
        self.nobj
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Value at 1-based `(i, j)`, either orientation. The diagonal is `None`.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return None;
        }
        let (r, c) = if i > j { (i, j) } else { (j, i) };
        self.values[tri_index(r, c)]
    }

    /// `(i, j, value)` with 1-based `i > j`, in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Option<f64>)> + '_ {
        (2..=self.nobj)
            .flat_map(|i| (1..i).map(move |j| (i, j)))
            .zip(self.values.iter())
            .map(|((i, j), v)| (i, j, *v))
    }
}

fn tri_index(i: usize, j: usize) -> usize {
    (i - 1) * (i - 2) / 2 + (j - 1)
}

impl fmt::Display for DistTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 2..=self.nobj {
            let row: Vec<String> = (1..i)
                .map(|j| match self.get(i, j) {
                    Some(v) => format!("{v}"),
                    None => "NA".to_string(),
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Parses the triangle text format: line `k` holds the `k` entries of row
/// `k + 1`, whitespace separated, `NA` for missing. Lines starting with `#`
/// and blank lines are skipped.
pub fn read_dist<R: BufRead>(reader: R) -> Result<DistTriangle> {
    let mut values = Vec::new();
    let mut rows = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        rows += 1;
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != rows {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!(
                    "ragged triangle: row {} has {} entries, expected {}",
                    rows + 1,
                    tokens.len(),
                    rows
                ),
            });
        }
        for tok in tokens {
            if tok.eq_ignore_ascii_case("na") {
                values.push(None);
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("not a number: {tok:?}"),
            })?;
            values.push(Some(v));
        }
    }
    if rows == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "no data rows".into(),
        });
    }
    DistTriangle::new(rows + 1, values)
}

pub fn read_dist_file(path: impl AsRef<Path>) -> Result<DistTriangle> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    read_dist(std::io::BufReader::new(file))
}

/// Flat sorted store of observed dissimilarities. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdsData {
    pub iind: Vec<usize>,
    pub jind: Vec<usize>,
    pub delta: Vec<f64>,
    pub blocks: Vec<usize>,
    pub weights: Vec<f64>,
    pub nobj: usize,
    pub ndat: usize,
}

/// Builds the flat store from a dissimilarity triangle and optional weights.
///
/// Observations with missing dissimilarity, missing weight or zero weight are
/// dropped. The rest are stably sorted by dissimilarity, starting from the
/// column-major order of the lower triangle, so within a tie block pairs are
/// ordered by `(j, i)`.
pub fn make_mds_data(delta: &DistTriangle, weights: Option<&DistTriangle>) -> Result<MdsData> {
    let n = delta.nobj();
    if let Some(w) = weights {
        if w.nobj() != n {
            return Err(Error::ObjectCountMismatch {
                delta: n,
                weights: w.nobj(),
            });
        }
    }
    let mut obs: Vec<(usize, usize, f64, f64)> = Vec::new();
    for j in 1..n {
        for i in (j + 1)..=n {
            let Some(d) = delta.get(i, j) else { continue };
            let w = match weights {
                Some(wt) => match wt.get(i, j) {
                    Some(w) if w > 0.0 => w,
                    _ => continue,
                },
                None => 1.0,
            };
            obs.push((i, j, d, w));
        }
    }
    if obs.is_empty() {
        return Err(Error::NoObservations);
    }
    obs.sort_by(|a, b| a.2.total_cmp(&b.2));
    let delta: Vec<f64> = obs.iter().map(|o| o.2).collect();
    Ok(MdsData {
        iind: obs.iter().map(|o| o.0).collect(),
        jind: obs.iter().map(|o| o.1).collect(),
        blocks: tie_blocks(&delta),
        weights: obs.iter().map(|o| o.3).collect(),
        ndat: delta.len(),
        delta,
        nobj: n,
    })
}

/// Tie-block codes for a sorted vector.
pub fn tie_blocks(sorted: &[f64]) -> Vec<usize> {
    let mut blocks = vec![0; sorted.len()];
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        blocks[start] = end - start;
        start = end;
    }
    blocks
}

/// Inverse of [`make_mds_data`]: unobserved positions come back as missing
/// dissimilarities with weight zero.
pub fn from_mds_data(data: &MdsData) -> Result<(DistTriangle, DistTriangle)> {
    let n = data.nobj;
    if n < 2 {
        return Err(Error::TooFewObjects(n));
    }
    let len = n * (n - 1) / 2;
    let mut delta = vec![None; len];
    let mut weights = vec![Some(0.0); len];
    for k in 0..data.ndat {
        let (i, j) = (data.iind[k], data.jind[k]);
        let (r, c) = if i > j { (i, j) } else { (j, i) };
        if c < 1 || r > n || r == c {
            return Err(Error::InvalidData(format!("bad index pair ({i},{j})")));
        }
        let idx = tri_index(r, c);
        delta[idx] = Some(data.delta[k]);
        weights[idx] = Some(data.weights[k]);
    }
    Ok((DistTriangle::new(n, delta)?, DistTriangle::new(n, weights)?))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooFewObjects(usize),
    LengthMismatch {
        field: &'static str,
        len: usize,
        ndat: usize,
    },
    NoObservations,
    IndexOutOfRange {
        k: usize,
        i: usize,
        j: usize,
    },
    DiagonalPair {
        k: usize,
        i: usize,
    },
    DuplicatePair {
        k: usize,
        i: usize,
        j: usize,
    },
    DeltaNotSorted {
        k: usize,
    },
    NegativeDelta {
        k: usize,
    },
    NonPositiveWeight {
        k: usize,
    },
    BadBlock {
        k: usize,
        reason: &'static str,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewObjects(n) => write!(f, "nobj {n} < 2"),
            Violation::LengthMismatch { field, len, ndat } => {
                write!(f, "{field} has length {len}, ndat is {ndat}")
            }
            Violation::NoObservations => write!(f, "no observations"),
            Violation::IndexOutOfRange { k, i, j } => {
                write!(f, "index out of range at {}: ({i},{j})", k + 1)
            }
            Violation::DiagonalPair { k, i } => write!(f, "diagonal pair at {}: ({i},{i})", k + 1),
            Violation::DuplicatePair { k, i, j } => {
                write!(f, "duplicate pair at {}: ({i},{j})", k + 1)
            }
            Violation::DeltaNotSorted { k } => write!(f, "delta not sorted at {}", k + 1),
            Violation::NegativeDelta { k } => {
                write!(f, "negative or non-finite delta at {}", k + 1)
            }
            Violation::NonPositiveWeight { k } => write!(f, "non-positive weight at {}", k + 1),
            Violation::BadBlock { k, reason } => write!(f, "bad tie block at {}: {reason}", k + 1),
        }
    }
}

impl MdsData {
    /// Checks every structural invariant and returns all violations found.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let m = self.ndat;
        if self.nobj < 2 {
            out.push(Violation::TooFewObjects(self.nobj));
        }
        for (field, len) in [
            ("iind", self.iind.len()),
            ("jind", self.jind.len()),
            ("delta", self.delta.len()),
            ("blocks", self.blocks.len()),
            ("weights", self.weights.len()),
        ] {
            if len != m {
                out.push(Violation::LengthMismatch {
                    field,
                    len,
                    ndat: m,
                });
            }
        }
        if !out.is_empty() {
            return Err(out);
        }
        if m == 0 {
            return Err(vec![Violation::NoObservations]);
        }

        let mut seen = HashSet::with_capacity(m);
        for k in 0..m {
            let (i, j) = (self.iind[k], self.jind[k]);
            if i < 1 || j < 1 || i > self.nobj || j > self.nobj {
                out.push(Violation::IndexOutOfRange { k, i, j });
            } else if i == j {
                out.push(Violation::DiagonalPair { k, i });
            } else if !seen.insert((i.max(j), i.min(j))) {
                out.push(Violation::DuplicatePair { k, i, j });
            }
            if !(self.delta[k] >= 0.0 && self.delta[k].is_finite()) {
                out.push(Violation::NegativeDelta { k });
            }
            if !(self.weights[k] > 0.0 && self.weights[k].is_finite()) {
                out.push(Violation::NonPositiveWeight { k });
            }
            if k > 0 && self.delta[k] < self.delta[k - 1] {
                out.push(Violation::DeltaNotSorted { k });
            }
        }

        let mut k = 0;
        while k < m {
            let len = self.blocks[k];
            if len == 0 {
                out.push(Violation::BadBlock {
                    k,
                    reason: "block does not start with its length",
                });
                k += 1;
                continue;
            }
            if k + len > m {
                out.push(Violation::BadBlock {
                    k,
                    reason: "block runs past the end",
                });
                break;
            }
            for l in (k + 1)..(k + len) {
                if self.blocks[l] != 0 {
                    out.push(Violation::BadBlock {
                        k: l,
                        reason: "nonzero code inside a block",
                    });
                }
                if self.delta[l] != self.delta[k] {
                    out.push(Violation::BadBlock {
                        k: l,
                        reason: "unequal delta inside a block",
                    });
                }
            }
            if k + len < m && self.delta[k + len] <= self.delta[k] {
                out.push(Violation::BadBlock {
                    k: k + len,
                    reason: "tie continues across a block boundary",
                });
            }
            k += len;
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Like [`MdsData::validate`] but folds the violations into an error.
    pub fn check(&self) -> Result<()> {
        self.validate().map_err(|v| {
            Error::InvalidData(
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })
    }

    pub fn is_complete(&self) -> bool {
        self.ndat == self.nobj * (self.nobj - 1) / 2
    }

    pub fn nblocks(&self) -> usize {
        self.blocks.iter().filter(|&&b| b > 0).count()
    }

    /// Ranges of each tie block.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        block_ranges(&self.blocks)
    }
}

pub(crate) fn block_ranges(blocks: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < blocks.len() {
        let len = blocks[k].max(1);
        out.push(k..(k + len).min(blocks.len()));
        k += len;
    }
    out
}
