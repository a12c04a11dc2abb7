//! Helpers shared by the property tests and the acceptance harness. Each
//! suite returns a summary instead of asserting so the acceptance harness can
//! print it.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smacofss::data::{make_mds_data, read_dist_file, DistTriangle, MdsData};
use smacofss::engine::{run, run_observed, EngineConfig};
use smacofss::init::torgerson;
use smacofss::linalg::{check_irreducible, laplacian, mp_inverse_v};
use smacofss::majorize::{distances, Configuration};
use smacofss::monotone::{pava, TieApproach};
use smacofss::plot::{shepard_plot, PlotData, PlotSpec};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// The fixture's path, or `None` when it is not shipped.
pub fn fixture(name: &str) -> Option<PathBuf> {
    let p = fixture_dir().join(name);
    p.exists().then_some(p)
}

pub fn load(name: &str) -> Option<MdsData> {
    let t = read_dist_file(fixture(name)?).unwrap();
    Some(make_mds_data(&t, None).unwrap())
}

/// The fixture with weights `f(delta)` on every observed pair.
pub fn load_weighted(name: &str, f: impl Fn(f64) -> f64) -> Option<MdsData> {
    let t = read_dist_file(fixture(name)?).unwrap();
    let w = DistTriangle::new(t.nobj(), t.values().iter().map(|v| v.map(&f)).collect()).unwrap();
    Some(make_mds_data(&t, Some(&w)).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The eight engine settings: unweighted or weighted, each numerical or
/// ordinal under one of the three tie approaches.
pub fn flag_combinations() -> Vec<EngineConfig> {
    let mut out = Vec::new();
    for weighted in [false, true] {
        out.push(EngineConfig {
            weighted,
            ..Default::default()
        });
        for ties in [
            TieApproach::Primary,
            TieApproach::Secondary,
            TieApproach::Tertiary,
        ] {
            out.push(EngineConfig {
                weighted,
                ordinal: true,
                ties,
                ..Default::default()
            });
        }
    }
    out
}

/// Irreducible data on 4–10 objects with tied dissimilarities (multiples of
/// 0.25), some missing cells and weights in [0.5, 2).
pub fn random_data(rng: &mut ChaCha8Rng) -> MdsData {
    loop {
        let n = rng.gen_range(4..=10);
        let m = n * (n - 1) / 2;
        let delta: Vec<Option<f64>> = (0..m)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    None
                } else {
                    Some(rng.gen_range(1..=12) as f64 * 0.25)
                }
            })
            .collect();
        let weights: Vec<Option<f64>> = (0..m).map(|_| Some(rng.gen_range(0.5..2.0))).collect();
        let d = DistTriangle::new(n, delta).unwrap();
        let w = DistTriangle::new(n, weights).unwrap();
        let Ok(data) = make_mds_data(&d, Some(&w)) else {
            continue;
        };
        if data.ndat > n && check_irreducible(&data).is_ok() {
            return data;
        }
    }
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

pub fn euclidean_data(points: &[Vec<f64>]) -> MdsData {
    let t = DistTriangle::from_fn(points.len(), |i, j| {
        points[i - 1]
            .iter()
            .zip(&points[j - 1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    })
    .unwrap();
    make_mds_data(&t, None).unwrap()
}

/// Isotonic regression by exhaustive search over all partitions into
/// consecutive blocks whose weighted means are nondecreasing.
pub fn isotonic_bruteforce(y: &[f64], w: &[f64]) -> Vec<f64> {
    let m = y.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << (m - 1)) {
        let mut fit = vec![0.0; m];
        let mut prev = f64::NEG_INFINITY;
        let mut feasible = true;
        let mut start = 0;
        for end in 1..=m {
            if end < m && mask & (1 << (end - 1)) == 0 {
                continue;
            }
            let sw: f64 = w[start..end].iter().sum();
            let mean = (start..end).map(|k| w[k] * y[k]).sum::<f64>() / sw;
            if mean < prev {
                feasible = false;
                break;
            }
            fit[start..end].fill(mean);
            prev = mean;
            start = end;
        }
        if !feasible {
            continue;
        }
        let loss: f64 = (0..m).map(|k| w[k] * (y[k] - fit[k]).powi(2)).sum();
        if best.as_ref().is_none_or(|(l, _)| loss < *l) {
            best = Some((loss, fit));
        }
    }
    best.unwrap().1
}

/// Largest deviation of the monotone regression from the exhaustive
/// solution over `instances` random problems of length 1–8.
pub fn pava_max_error(instances: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let m = rng.gen_range(1..=8);
        let integer = rng.gen_bool(0.5);
        let y: Vec<f64> = (0..m)
            .map(|_| {
                if integer {
                    rng.gen_range(0..5) as f64
                } else {
                    rng.gen_range(-2.0..2.0)
                }
            })
            .collect();
        let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..3.0)).collect();
        let fast = pava(&y, &w);
        let slow = isotonic_bruteforce(&y, &w);
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

pub struct Descent {
    pub runs: usize,
    pub steps: usize,
    pub violations: usize,
    pub worst_increase: f64,
}

/// Runs every flag combination on `instances` random data sets and counts
/// iterations at which stress went up by more than `slack`.
pub fn stress_descent(instances: usize, seed: u64, slack: f64) -> Descent {
    let mut rng = rng(seed);
    let mut out = Descent {
        runs: 0,
        steps: 0,
        violations: 0,
        worst_increase: 0.0,
    };
    for _ in 0..instances {
        let data = random_data(&mut rng);
        for cfg in flag_combinations() {
            let cfg = EngineConfig { itmax: 200, ..cfg };
            let mut trace = Vec::new();
            run_observed(&data, &cfg, None, &mut |_, s| trace.push(s)).unwrap();
            out.runs += 1;
            for pair in trace.windows(2) {
                out.steps += 1;
                let up = pair[1] - pair[0];
                out.worst_increase = out.worst_increase.max(up);
                if up > slack {
                    out.violations += 1;
                }
            }
        }
    }
    out
}

fn dense_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    c
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn asymmetry(a: &[f64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((a[i * n + j] - a[j * n + i]).abs());
        }
    }
    worst
}

/// Largest residual of the four Penrose conditions for the pseudo-inverse of
/// `V` over random connected weighted graphs on 2–50 vertices. The two
/// product conditions are scaled by the magnitude of the matrix reproduced.
pub fn penrose_max_residual(graphs: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..graphs {
        let n = rng.gen_range(2..=50);
        let density = rng.gen_range(0.0..0.5);
        let (mut ii, mut jj, mut ww) = (Vec::new(), Vec::new(), Vec::new());
        for i in 2..=n {
            let tree_parent = rng.gen_range(1..i);
            for j in 1..i {
                if j == tree_parent || rng.gen_bool(density) {
                    ii.push(i);
                    jj.push(j);
                    ww.push(rng.gen_range(0.1..5.0));
                }
            }
        }
        let v = laplacian(n, &ii, &jj, &ww);
        let a = mp_inverse_v(&v).unwrap();
        let (vd, ad) = (v.to_dense(), a.to_dense());
        let va = dense_mul(&vd, &ad, n);
        let av = dense_mul(&ad, &vd, n);
        let vav = dense_mul(&va, &vd, n);
        let ava = dense_mul(&av, &ad, n);
        let vmax = vd.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let amax = ad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst
            .max(max_abs_diff(&vav, &vd) / vmax)
            .max(max_abs_diff(&ava, &ad) / amax)
            .max(asymmetry(&va, n))
            .max(asymmetry(&av, n));
    }
    worst
}

/// Largest distance error of the Torgerson configuration on noiseless
/// Euclidean data of known dimension.
pub fn torgerson_recovery_error(instances: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let p = rng.gen_range(1..=4);
        let n = rng.gen_range(p + 2..=20);
        let data = euclidean_data(&random_points(&mut rng, n, p));
        let init = torgerson(&data, p).unwrap();
        let d = distances(&init.conf, &data.iind, &data.jind);
        worst = worst.max(max_abs_diff(&d, &data.delta));
    }
    worst
}

/// Largest difference between the three tie approaches (configuration and
/// stress) on data without ties, weighted and unweighted.
pub fn tie_equivalence_error(instances: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let n = rng.gen_range(4..=10);
        let t = DistTriangle::from_fn(n, |_, _| rng.gen_range(0.1..3.0)).unwrap();
        let w = DistTriangle::from_fn(n, |_, _| rng.gen_range(0.5..2.0)).unwrap();
        let data = make_mds_data(&t, Some(&w)).unwrap();
        assert!(data.blocks.iter().all(|&b| b == 1));
        for weighted in [false, true] {
            let fits: Vec<_> = [
                TieApproach::Primary,
                TieApproach::Secondary,
                TieApproach::Tertiary,
            ]
            .into_iter()
            .map(|ties| {
                let cfg = EngineConfig {
                    ordinal: true,
                    weighted,
                    ties,
                    ..Default::default()
                };
                run(&data, &cfg, None).unwrap()
            })
            .collect();
            for f in &fits[1..] {
                worst = worst
                    .max(max_abs_diff(f.conf.coords(), fits[0].conf.coords()))
                    .max((f.stress - fits[0].stress).abs())
                    .max(max_abs_diff(&f.dhat, &fits[0].dhat));
                assert_eq!(f.niter, fits[0].niter);
            }
        }
    }
    worst
}

/// Sum of squared fit-line lengths read back from a Shepard plot.
pub fn shepard_fitline_sum(svg: &str) -> f64 {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("fitline"))
        .map(|n| {
            let y1: f64 = n.attribute("data-y1").unwrap().parse().unwrap();
            let y2: f64 = n.attribute("data-y2").unwrap().parse().unwrap();
            (y1 - y2).powi(2)
        })
        .sum()
}

/// Largest gap between the Shepard fit-line sum and the reported stress
/// over unweighted metric and ordinal fits of random data.
pub fn shepard_stress_error(instances: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let data = random_data(&mut rng);
        for cfg in flag_combinations().into_iter().filter(|c| !c.weighted) {
            let r = run(&data, &cfg, None).unwrap();
            let svg = shepard_plot(&PlotData::from(&r), &PlotSpec::shepard()).unwrap();
            worst = worst.max((shepard_fitline_sum(&svg) - r.stress).abs());
        }
    }
    worst
}

/// One Guttman transform computed on full `n × n` matrices, the way a
/// textbook implementation without the packed store would.
pub fn naive_xphase(
    delta: &[f64],
    w: &[f64],
    vinv: Option<&[f64]>,
    x: &[f64],
    n: usize,
    p: usize,
) -> Vec<f64> {
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = (0..p)
                .map(|a| (x[i * p + a] - x[j * p + a]).powi(2))
                .sum::<f64>()
                .sqrt();
        }
    }
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && d[i * n + j] > 0.0 {
                b[i * n + j] = -w[i * n + j] * delta[i * n + j] / d[i * n + j];
            }
        }
        b[i * n + i] = -(0..n).map(|j| b[i * n + j]).sum::<f64>();
    }
    let mut bx = vec![0.0; n * p];
    for i in 0..n {
        for k in 0..n {
            for a in 0..p {
                bx[i * p + a] += b[i * n + k] * x[k * p + a];
            }
        }
    }
    let Some(vinv) = vinv else {
        return bx.into_iter().map(|v| v / n as f64).collect();
    };
    let mut out = vec![0.0; n * p];
    for i in 0..n {
        for k in 0..n {
            for a in 0..p {
                out[i * p + a] += vinv[i * n + k] * bx[k * p + a];
            }
        }
    }
    out
}

/// Median per-iteration time of the naive full-matrix X-phase on `data`
/// (unweighted, normalized dissimilarities), in seconds. Like the engine it
/// uses `I/n` for `V⁺` on complete data.
pub fn naive_xphase_seconds(data: &MdsData, iterations: usize, repetitions: usize) -> f64 {
    let n = data.nobj;
    let p = 2;
    let ss: f64 = data.delta.iter().map(|d| d * d).sum::<f64>().sqrt();
    let mut delta = vec![0.0; n * n];
    let mut w = vec![0.0; n * n];
    for k in 0..data.ndat {
        let (i, j) = (data.iind[k] - 1, data.jind[k] - 1);
        delta[i * n + j] = data.delta[k] / ss;
        delta[j * n + i] = data.delta[k] / ss;
        w[i * n + j] = 1.0;
        w[j * n + i] = 1.0;
    }
    let vinv = (!data.is_complete()).then(|| {
        mp_inverse_v(&laplacian(n, &data.iind, &data.jind, &vec![1.0; data.ndat]))
            .unwrap()
            .to_dense()
    });
    let x0 = torgerson(data, p).unwrap().conf;
    let mut samples = Vec::new();
    for _ in 0..repetitions {
        let mut x = x0.coords().to_vec();
        let t = Instant::now();
        for _ in 0..iterations {
            x = naive_xphase(&delta, &w, vinv.as_deref(), &x, n, p);
        }
        samples.push(t.elapsed().as_secs_f64() / iterations as f64);
        std::hint::black_box(&x);
    }
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

pub fn conf_of(rows: &[Vec<f64>]) -> Configuration {
    Configuration::from_rows(rows).unwrap()
}
