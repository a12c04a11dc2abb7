//! Dense symmetric kernels on packed lower triangles.

use crate::data::MdsData;
use crate::error::{Error, Result};

/// Symmetric matrix stored as its lower triangle with diagonal, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    lower: Vec<f64>,
}

#[inline]
fn pidx(i: usize, j: usize) -> usize {
    debug_assert!(i >= j);
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    /// Fills from `f(i, j)` for 0-based `i ≥ j`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut lower = Vec::with_capacity(order * (order + 1) / 2);
        for i in 0..order {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        SymMatrix { order, lower }
    }

    pub fn from_packed(order: usize, lower: Vec<f64>) -> Result<Self> {
        if lower.len() != order * (order + 1) / 2 {
            return Err(Error::Dimension(format!(
                "packed length {} for order {order}",
                lower.len()
            )));
        }
        Ok(SymMatrix { order, lower })
    }

    /// Takes the lower triangle of a dense row-major matrix.
    pub fn from_dense(order: usize, dense: &[f64]) -> Self {
        Self::from_fn(order, |i, j| dense[i * order + j])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn packed(&self) -> &[f64] {
        &self.lower
    }

    /// 0-based access, either orientation.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.lower[pidx(i, j)]
        } else {
            self.lower[pidx(j, i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = if i >= j { pidx(i, j) } else { pidx(j, i) };
        self.lower[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = if i >= j { pidx(i, j) } else { pidx(j, i) };
        self.lower[k] += v;
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.order;
        let mut s = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let a = self.lower[pidx(i, j)];
                s[i] += a;
                s[j] += a;
            }
            s[i] += self.lower[pidx(i, i)];
        }
        s
    }

    pub fn fill(&mut self, v: f64) {
        self.lower.iter_mut().for_each(|x| *x = v);
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Sets each diagonal element to minus the sum of the off-diagonal
    /// elements in its row, so rows sum to zero.
    pub fn set_centered_diagonal(&mut self) {
        let n = self.order;
        let mut s = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let a = self.lower[pidx(i, j)];
                s[i] += a;
                s[j] += a;
            }
        }
        for (i, si) in s.into_iter().enumerate() {
            self.lower[pidx(i, i)] = -si;
        }
    }

    /// `Y = A X` for row-major `X` with `p` columns, using only the stored
    /// triangle.
    pub fn mul_mat(&self, x: &[f64], p: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.order * p];
        self.mul_mat_into(x, p, &mut y);
        y
    }

    pub fn mul_mat_into(&self, x: &[f64], p: usize, y: &mut [f64]) {
        let n = self.order;
        assert_eq!(x.len(), n * p);
        assert_eq!(y.len(), n * p);
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let row = pidx(i, 0);
            let (xi, yi) = (i * p, i * p);
            for j in 0..i {
                let a = self.lower[row + j];
                if a == 0.0 {
                    continue;
                }
                let xj = j * p;
                for c in 0..p {
                    y[yi + c] += a * x[xj + c];
                    y[xj + c] += a * x[xi + c];
                }
            }
            let d = self.lower[row + i];
            for c in 0..p {
                y[yi + c] += d * x[xi + c];
            }
        }
    }

    /// Dense product of two symmetric matrices (not symmetric in general).
    pub fn mul_dense(&self, other: &SymMatrix) -> Vec<f64> {
        let n = self.order;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

/// Weighted Laplacian from observation triples (1-based indices).
pub fn laplacian(nobj: usize, iind: &[usize], jind: &[usize], weights: &[f64]) -> SymMatrix {
    let mut v = SymMatrix::zeros(nobj);
    for ((&i, &j), &w) in iind.iter().zip(jind).zip(weights) {
        v.add(i - 1, j - 1, -w);
    }
    v.set_centered_diagonal();
    v
}

/// The constant weight matrix `V` with off-diagonal `-w_k`.
pub fn build_v(data: &MdsData) -> SymMatrix {
    laplacian(data.nobj, &data.iind, &data.jind, &data.weights)
}

/// Connected components of the observation graph, each sorted, ordered by
/// smallest member. Vertices are 1-based.
pub fn components(data: &MdsData) -> Vec<Vec<usize>> {
    let n = data.nobj;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (&i, &j) in data.iind.iter().zip(&data.jind) {
        let (a, b) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(v + 1);
    }
    groups
}

/// Ok when the weights connect all objects, else the component partition.
pub fn check_irreducible(data: &MdsData) -> Result<()> {
    let comps = components(data);
    if comps.len() == 1 {
        Ok(())
    } else {
        Err(Error::Reducible(comps))
    }
}

/// Moore-Penrose inverse of a doubly centered, irreducible `V`, as
/// `(V + ee'/n)^{-1} - ee'/n`. The inverse is taken by symmetric sweeping on
/// the packed triangle.
pub fn mp_inverse_v(v: &SymMatrix) -> Result<SymMatrix> {
    let n = v.order();
    if n < 2 {
        return Err(Error::TooFewObjects(n));
    }
    let shift = 1.0 / n as f64;
    let mut a = v.clone();
    a.lower.iter_mut().for_each(|x| *x += shift);
    sweep_inverse(&mut a)?;
    a.lower.iter_mut().for_each(|x| *x = -*x - shift);
    Ok(a)
}

/// Sweeps every pivot of a symmetric positive definite matrix in place,
/// leaving `-A^{-1}`.
fn sweep_inverse(a: &mut SymMatrix) -> Result<()> {
    let n = a.order;
    let maxdiag = (0..n).map(|i| a.get(i, i).abs()).fold(0.0, f64::max);
    let tol = 1e-12 * maxdiag;
    let mut col = vec![0.0; n];
    for k in 0..n {
        let d = a.get(k, k);
        if !(d > tol) {
            return Err(Error::SingularV { pivot: k + 1 });
        }
        for (i, c) in col.iter_mut().enumerate() {
            *c = a.get(i, k);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = col[i] / d;
            let row = pidx(i, 0);
            for j in 0..=i {
                if j != k {
                    a.lower[row + j] -= f * col[j];
                }
            }
        }
        for i in 0..n {
            if i != k {
                a.set(i, k, col[i] / d);
            }
        }
        a.set(k, k, -1.0 / d);
    }
    Ok(())
}

/// `-½ J A J` with `J = I - ee'/n`.
pub fn double_center(a: &SymMatrix) -> SymMatrix {
    let n = a.order();
    let nf = n as f64;
    let means: Vec<f64> = a.row_sums().into_iter().map(|s| s / nf).collect();
    let grand = means.iter().sum::<f64>() / nf;
    SymMatrix::from_fn(n, |i, j| -0.5 * (a.get(i, j) - means[i] - means[j] + grand))
}

/// Leading eigenpairs, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Row-major `n × k`, column `j` is the eigenvector for `values[j]`.
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl EigenPairs {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        let k = self.k();
        (0..self.n).map(|i| self.vectors[i * k + j]).collect()
    }
}

pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const JACOBI_TOL: f64 = 1e-12;

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Stops when the off-diagonal Frobenius norm falls to `JACOBI_TOL` times the
/// Frobenius norm of the input. Eigenvalues are returned in descending order,
/// each eigenvector signed so its first component above 1e-10 in magnitude is
/// positive.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<EigenPairs> {
    let n = m.order();
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off(&a) <= JACOBI_TOL * fro {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].total_cmp(&a[x * n + x]));
    let values: Vec<f64> = order.iter().map(|&j| a[j * n + j]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &j) in order.iter().enumerate() {
        let sign = (0..n)
            .map(|i| v[i * n + j])
            .find(|x| x.abs() > 1e-10)
            .map_or(1.0, f64::signum);
        for i in 0..n {
            vectors[i * n + col] = sign * v[i * n + j];
        }
    }
    Ok(EigenPairs { values, vectors, n })
}

/// The `k` algebraically largest eigenpairs.
pub fn top_eigen(a: &SymMatrix, k: usize) -> Result<EigenPairs> {
    let n = a.order();
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "asked for {k} eigenpairs of order {n}"
        )));
    }
    let full = jacobi_eigen(a)?;
    let mut vectors = Vec::with_capacity(n * k);
    for i in 0..n {
        vectors.extend_from_slice(&full.vectors[i * n..i * n + k]);
    }
    Ok(EigenPairs {
        values: full.values[..k].to_vec(),
        vectors,
        n,
    })
}
