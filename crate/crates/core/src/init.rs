//! Initial configurations.
//!
//! Torgerson and Guttman starts are spectral and report sstress; the
//! full-dimensional and random starts report stress against the normalized
//! dissimilarities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::MdsData;
use crate::engine::{run, EngineConfig};
use crate::error::{Error, Result};
use crate::linalg::{double_center, top_eigen, EigenPairs, SymMatrix};
use crate::majorize::{distances, stress, Configuration};
use crate::monotone::normalize;

/// Seed used when none is given. The generator is ChaCha8.
pub const DEFAULT_SEED: u64 = 20250101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    Torgerson,
    Guttman,
    Fulldim,
    Random,
    /// Reserved; not implemented.
    Elegant,
}

impl std::str::FromStr for InitMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "torgerson" => Ok(InitMethod::Torgerson),
            "guttman" => Ok(InitMethod::Guttman),
            "fulldim" => Ok(InitMethod::Fulldim),
            "random" => Ok(InitMethod::Random),
            "elegant" => Err("the elegant initializer is not available".into()),
            _ => Err(format!("unknown initial configuration method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QualityKind {
    Sstress,
    Stress,
}

/// An initial configuration with enough of the fit attached to be plotted
/// like an engine result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitResult {
    pub method: InitMethod,
    pub conf: Configuration,
    pub quality: f64,
    pub quality_kind: QualityKind,
    pub delta: Vec<f64>,
    pub dhat: Vec<f64>,
    pub confdist: Vec<f64>,
    pub weightmat: Vec<f64>,
    pub iind: Vec<usize>,
    pub jind: Vec<usize>,
    pub nobj: usize,
    pub ndim: usize,
    /// Stress of the untruncated solution, full-dimensional start only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fulldim_stress: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn check_ndim(data: &MdsData, ndim: usize) -> Result<()> {
    if ndim < 1 || ndim >= data.nobj {
        return Err(Error::Dimension(format!(
            "need 1 <= ndim < nobj, got ndim {ndim} with {} objects",
            data.nobj
        )));
    }
    Ok(())
}

/// `Σ w (δ² - d²)² / Σ w δ⁴` over the observed pairs.
pub fn sstress(data: &MdsData, x: &Configuration) -> Result<f64> {
    let d = distances(x, &data.iind, &data.jind);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..data.ndat {
        let (dl, w) = (data.delta[k], data.weights[k]);
        let r = dl * dl - d[k] * d[k];
        num += w * r * r;
        den += w * dl.powi(4);
    }
    if den == 0.0 {
        return Err(Error::ZeroDissimilarities);
    }
    Ok(num / den)
}

/// `K Λ^½` from the leading eigenpairs; columns with non-positive
/// eigenvalues are left at zero.
fn scaled_vectors(eig: &EigenPairs, warnings: &mut Vec<String>) -> Configuration {
    let (n, p) = (eig.n, eig.k());
    let mut x = Configuration::zeros(n, p);
    for (a, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            warnings.push(format!(
                "eigenvalue {} is {lambda:e}; dimension {} of the start is zero",
                a + 1,
                a + 1
            ));
            continue;
        }
        let s = lambda.sqrt();
        for i in 0..n {
            x.coords_mut()[i * p + a] = eig.vectors[i * p + a] * s;
        }
    }
    x.center();
    x
}

fn sstress_result(
    data: &MdsData,
    method: InitMethod,
    conf: Configuration,
    warnings: Vec<String>,
) -> Result<InitResult> {
    Ok(InitResult {
        method,
        quality: sstress(data, &conf)?,
        quality_kind: QualityKind::Sstress,
        delta: data.delta.clone(),
        dhat: data.delta.clone(),
        confdist: distances(&conf, &data.iind, &data.jind),
        weightmat: data.weights.clone(),
        iind: data.iind.clone(),
        jind: data.jind.clone(),
        nobj: data.nobj,
        ndim: conf.ndim(),
        conf,
        fulldim_stress: None,
        warnings,
    })
}

fn normalized_delta(data: &MdsData) -> Result<Vec<f64>> {
    let mut dhat = data.delta.clone();
    normalize(&mut dhat, &data.weights).map_err(|_| Error::ZeroDissimilarities)?;
    Ok(dhat)
}

/// Classical scaling, unobserved cells imputed with the mean observed
/// dissimilarity.
pub fn torgerson(data: &MdsData, ndim: usize) -> Result<InitResult> {
    check_ndim(data, ndim)?;
    let n = data.nobj;
    let mean = data.delta.iter().sum::<f64>() / data.ndat as f64;
    let mut sq = SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { mean * mean });
    for k in 0..data.ndat {
        let d = data.delta[k];
        sq.set(data.iind[k] - 1, data.jind[k] - 1, d * d);
    }
    let eig = top_eigen(&double_center(&sq), ndim)?;
    let mut warnings = Vec::new();
    let conf = scaled_vectors(&eig, &mut warnings);
    sstress_result(data, InitMethod::Torgerson, conf, warnings)
}

/// The positive semidefinite matrix with off-diagonal `-w δ²` on observed
/// pairs, whose leading eigenvectors give the Guttman-Lingoes start.
pub fn guttman_matrix(data: &MdsData) -> SymMatrix {
    let mut b = SymMatrix::zeros(data.nobj);
    for k in 0..data.ndat {
        let d = data.delta[k];
        b.add(data.iind[k] - 1, data.jind[k] - 1, -data.weights[k] * d * d);
    }
    b.set_centered_diagonal();
    b
}

pub fn guttman_init(data: &MdsData, ndim: usize) -> Result<InitResult> {
    check_ndim(data, ndim)?;
    let eig = top_eigen(&guttman_matrix(data), ndim)?;
    let mut warnings = Vec::new();
    let conf = scaled_vectors(&eig, &mut warnings);
    sstress_result(data, InitMethod::Guttman, conf, warnings)
}

/// Leading principal components of a metric solution in `nobj - 1`
/// dimensions. The full-dimensional run starts from the Guttman
/// configuration, which has no negative-eigenvalue rank loss.
pub fn fulldim_init(data: &MdsData, ndim: usize) -> Result<InitResult> {
    let n = data.nobj;
    if n < 3 {
        return Err(Error::Dimension(
            "full-dimensional start needs 3 objects".into(),
        ));
    }
    check_ndim(data, ndim)?;
    let full_dim = n - 1;
    let cfg = EngineConfig {
        ndim: full_dim,
        weighted: true,
        ..Default::default()
    };
    let start = guttman_init(data, full_dim)?.conf;
    let full = run(data, &cfg, Some(&start))?;

    let y = &full.conf;
    let cross = SymMatrix::from_fn(full_dim, |a, b| {
        (0..n).map(|i| y.get(i, a) * y.get(i, b)).sum()
    });
    let axes = top_eigen(&cross, ndim)?;
    let mut conf = Configuration::zeros(n, ndim);
    for i in 0..n {
        for c in 0..ndim {
            conf.coords_mut()[i * ndim + c] = (0..full_dim)
                .map(|a| y.get(i, a) * axes.vectors[a * ndim + c])
                .sum();
        }
    }
    conf.center();
    let confdist = distances(&conf, &full.iind, &full.jind);
    Ok(InitResult {
        method: InitMethod::Fulldim,
        quality: stress(&full.dhat, &confdist, &full.weightmat),
        quality_kind: QualityKind::Stress,
        delta: full.delta,
        dhat: full.dhat,
        confdist,
        weightmat: full.weightmat,
        iind: full.iind,
        jind: full.jind,
        nobj: n,
        ndim,
        conf,
        fulldim_stress: Some(full.stress),
        warnings: Vec::new(),
    })
}

/// Coordinates uniform on (-0.5, 0.5), centered.
pub fn random_init(data: &MdsData, ndim: usize, seed: u64) -> Result<InitResult> {
    if ndim < 1 {
        return Err(Error::Dimension("ndim must be at least 1".into()));
    }
    let n = data.nobj;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * ndim).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut conf = Configuration::new(n, ndim, coords)?;
    conf.center();
    let dhat = normalized_delta(data)?;
    let confdist = distances(&conf, &data.iind, &data.jind);
    Ok(InitResult {
        method: InitMethod::Random,
        quality: stress(&dhat, &confdist, &data.weights),
        quality_kind: QualityKind::Stress,
        delta: data.delta.clone(),
        dhat,
        confdist,
        weightmat: data.weights.clone(),
        iind: data.iind.clone(),
        jind: data.jind.clone(),
        nobj: n,
        ndim,
        conf,
        fulldim_stress: None,
        warnings: Vec::new(),
    })
}

pub fn initial_configuration(
    data: &MdsData,
    method: InitMethod,
    ndim: usize,
    seed: u64,
) -> Result<InitResult> {
    match method {
        InitMethod::Torgerson => torgerson(data, ndim),
        InitMethod::Guttman => guttman_init(data, ndim),
        InitMethod::Fulldim => fulldim_init(data, ndim),
        InitMethod::Random => random_init(data, ndim, seed),
        InitMethod::Elegant => Err(Error::Config(
            "the elegant initializer is not available".into(),
        )),
    }
}
