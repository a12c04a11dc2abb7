//! The configuration update: distances, stress, `B(X)` and the Guttman
//! transform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// `nobj × ndim` coordinates, row-major. Serialized as a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Configuration {
    nobj: usize,
    ndim: usize,
    coords: Vec<f64>,
}

impl Configuration {
    pub fn new(nobj: usize, ndim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != nobj * ndim {
            return Err(Error::Dimension(format!(
                "{} coordinates for a {nobj}×{ndim} configuration",
                coords.len()
            )));
        }
        Ok(Configuration { nobj, ndim, coords })
    }

    pub fn zeros(nobj: usize, ndim: usize) -> Self {
        Configuration {
            nobj,
            ndim,
            coords: vec![0.0; nobj * ndim],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ndim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ndim) {
            return Err(Error::Dimension("ragged configuration rows".into()));
        }
        Self::new(rows.len(), ndim, rows.concat())
    }

    pub fn nobj(&self) -> usize {
        self.nobj
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    /// 0-based row.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ndim..(i + 1) * self.ndim]
    }

    pub fn get(&self, i: usize, a: usize) -> f64 {
        self.coords[i * self.ndim + a]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.nobj).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.ndim];
        for i in 0..self.nobj {
            for (a, x) in self.row(i).iter().enumerate() {
                s[a] += x;
            }
        }
        s
    }

    /// Subtracts column means.
    pub fn center(&mut self) {
        let n = self.nobj as f64;
        let means: Vec<f64> = self.column_sums().into_iter().map(|s| s / n).collect();
        for i in 0..self.nobj {
            for a in 0..self.ndim {
                self.coords[i * self.ndim + a] -= means[a];
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|x| x.is_finite())
    }
}

impl TryFrom<Vec<Vec<f64>>> for Configuration {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Configuration::from_rows(&rows)
    }
}

impl From<Configuration> for Vec<Vec<f64>> {
    fn from(c: Configuration) -> Self {
        c.rows()
    }
}

/// Euclidean distances between the rows named by 1-based index pairs.
pub fn distances(x: &Configuration, iind: &[usize], jind: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; iind.len()];
    distances_into(x, iind, jind, &mut out);
    out
}

pub fn distances_into(x: &Configuration, iind: &[usize], jind: &[usize], out: &mut [f64]) {
    for ((d, &i), &j) in out.iter_mut().zip(iind).zip(jind) {
        let (a, b) = (x.row(i - 1), x.row(j - 1));
        *d = a
            .iter()
            .zip(b)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
    }
}

/// `Σ w (dhat - d)²`, which is stress when `Σ w dhat² = 1`.
pub fn stress(dhat: &[f64], dist: &[f64], weights: &[f64]) -> f64 {
    dhat.iter()
        .zip(dist)
        .zip(weights)
        .map(|((h, d), w)| w * (h - d) * (h - d))
        .sum()
}

/// `B(X)` with off-diagonal `-w dhat / d`, zero where `d = 0`, and the
/// diagonal making rows sum to zero.
pub fn build_b(
    dhat: &[f64],
    dist: &[f64],
    weights: &[f64],
    iind: &[usize],
    jind: &[usize],
    nobj: usize,
) -> SymMatrix {
    let mut b = SymMatrix::zeros(nobj);
    build_b_into(dhat, dist, weights, iind, jind, &mut b);
    b
}

pub fn build_b_into(
    dhat: &[f64],
    dist: &[f64],
    weights: &[f64],
    iind: &[usize],
    jind: &[usize],
    b: &mut SymMatrix,
) {
    b.fill(0.0);
    for k in 0..dhat.len() {
        if dist[k] > 0.0 {
            b.add(iind[k] - 1, jind[k] - 1, -weights[k] * dhat[k] / dist[k]);
        }
    }
    b.set_centered_diagonal();
}

/// One Guttman transform `X ← V⁺ B X`, with `V⁺ = I/n` when `vinv` is absent.
pub fn guttman_step(
    x: &Configuration,
    b: &SymMatrix,
    vinv: Option<&SymMatrix>,
) -> Result<Configuration> {
    let (n, p) = (x.nobj(), x.ndim());
    if b.order() != n || vinv.is_some_and(|v| v.order() != n) {
        return Err(Error::Dimension(format!(
            "configuration has {n} rows, matrix order {}",
            b.order()
        )));
    }
    let bx = b.mul_mat(x.coords(), p);
    let coords = match vinv {
        Some(v) => v.mul_mat(&bx, p),
        None => {
            let s = 1.0 / n as f64;
            bx.into_iter().map(|e| e * s).collect()
        }
    };
    let mut out = Configuration::new(n, p, coords)?;
    out.center();
    Ok(out)
}
