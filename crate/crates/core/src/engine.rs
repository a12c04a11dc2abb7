//! The alternating driver: one Guttman transform, then (for ordinal runs) one
//! monotone regression, until stress stops decreasing by more than `eps`.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::data::MdsData;
use crate::error::{Error, Result};
use crate::init::torgerson;
use crate::linalg::{check_irreducible, laplacian, mp_inverse_v, SymMatrix};
use crate::majorize::{build_b_into, distances_into, guttman_step, stress, Configuration};
use crate::monotone::{normalize_dhat, TieApproach, TransformState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub ndim: usize,
    pub ties: TieApproach,
    pub weighted: bool,
    pub ordinal: bool,
    pub itmax: usize,
    pub eps: f64,
    pub verbose: bool,
    pub digits: usize,
    pub width: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            ndim: 2,
            ties: TieApproach::Primary,
            weighted: false,
            ordinal: false,
            itmax: 1000,
            eps: 1e-10,
            verbose: false,
            digits: 10,
            width: 12,
        }
    }
}

impl EngineConfig {
    pub fn check(&self) -> Result<()> {
        if self.ndim < 1 {
            return Err(Error::Config("ndim must be at least 1".into()));
        }
        if self.itmax < 1 {
            return Err(Error::Config("itmax must be at least 1".into()));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Config("eps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdsResult {
    pub delta: Vec<f64>,
    pub dhat: Vec<f64>,
    pub confdist: Vec<f64>,
    pub conf: Configuration,
    pub weightmat: Vec<f64>,
    pub stress: f64,
    pub ndim: usize,
    pub init: Configuration,
    pub niter: usize,
    pub nobj: usize,
    pub iind: Vec<usize>,
    pub jind: Vec<usize>,
    pub weighted: bool,
    pub ordinal: bool,
    pub ties: TieApproach,
}

/// Wall time spent in each part of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseTimes {
    #[serde(serialize_with = "as_secs")]
    pub setup: Duration,
    #[serde(serialize_with = "as_secs")]
    pub xphase: Duration,
    #[serde(serialize_with = "as_secs")]
    pub dphase: Duration,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// One verbose progress line.
pub fn iteration_line(itel: usize, sigma: f64, digits: usize, width: usize) -> String {
    format!("itel {itel:4} stress {sigma:width$.digits$}")
}

pub fn run(data: &MdsData, cfg: &EngineConfig, xinit: Option<&Configuration>) -> Result<MdsResult> {
    run_timed(data, cfg, xinit).map(|(r, _)| r)
}

/// [`run`] that also reports where the time went. Setup includes the
/// initial configuration when one has to be computed.
pub fn run_timed(
    data: &MdsData,
    cfg: &EngineConfig,
    xinit: Option<&Configuration>,
) -> Result<(MdsResult, PhaseTimes)> {
    run_observed(data, cfg, xinit, &mut |_, _| {})
}

/// [`run_timed`] calling `observer(itel, stress)` for the starting
/// configuration (`itel = 0`) and after every iteration.
pub fn run_observed(
    data: &MdsData,
    cfg: &EngineConfig,
    xinit: Option<&Configuration>,
    observer: &mut dyn FnMut(usize, f64),
) -> Result<(MdsResult, PhaseTimes)> {
    let start = Instant::now();
    cfg.check()?;
    data.check()?;
    check_irreducible(data)?;
    let n = data.nobj;

    let init = match xinit {
        Some(x) => {
            if x.nobj() != n || x.ndim() != cfg.ndim {
                return Err(Error::Dimension(format!(
                    "initial configuration is {}×{}, expected {n}×{}",
                    x.nobj(),
                    x.ndim(),
                    cfg.ndim
                )));
            }
            if !x.is_finite() {
                return Err(Error::Config("initial configuration is not finite".into()));
            }
            x.clone()
        }
        None => torgerson(data, cfg.ndim)?.conf,
    };
    let mut x = init.clone();
    x.center();

    let weights = if cfg.weighted {
        data.weights.clone()
    } else {
        vec![1.0; data.ndat]
    };
    let mut state = TransformState::new(data, weights);
    normalize_dhat(&mut state)?;

    // I/n stands in for V⁺ only when V = nI - ee'.
    let vinv = if cfg.weighted || !data.is_complete() {
        Some(mp_inverse_v(&laplacian(
            n,
            &state.iind,
            &state.jind,
            &state.weights,
        ))?)
    } else {
        None
    };

    let mut dist = vec![0.0; data.ndat];
    distances_into(&x, &state.iind, &state.jind, &mut dist);
    let mut sold = stress(&state.dhat, &dist, &state.weights);
    observer(0, sold);
    let mut b = SymMatrix::zeros(n);
    let mut times = PhaseTimes {
        setup: start.elapsed(),
        ..Default::default()
    };

    let mut niter = 0;
    let mut snew = sold;
    for itel in 1..=cfg.itmax {
        let t0 = Instant::now();
        build_b_into(
            &state.dhat,
            &dist,
            &state.weights,
            &state.iind,
            &state.jind,
            &mut b,
        );
        x = guttman_step(&x, &b, vinv.as_ref())?;
        distances_into(&x, &state.iind, &state.jind, &mut dist);
        let t1 = Instant::now();
        times.xphase += t1 - t0;
        if cfg.ordinal {
            state.apply(cfg.ties, &mut dist)?;
            times.dphase += t1.elapsed();
        }
        snew = stress(&state.dhat, &dist, &state.weights);
        if !snew.is_finite() {
            return Err(Error::Diverged(itel));
        }
        observer(itel, snew);
        if cfg.verbose {
            // A closed stdout must not abort the fit.
            let _ = writeln!(
                std::io::stdout().lock(),
                "{}",
                iteration_line(itel, snew, cfg.digits, cfg.width)
            );
        }
        niter = itel;
        if sold - snew < cfg.eps {
            break;
        }
        sold = snew;
    }

    let result = MdsResult {
        delta: data.delta.clone(),
        dhat: state.dhat,
        confdist: dist,
        conf: x,
        weightmat: state.weights,
        stress: snew,
        ndim: cfg.ndim,
        init,
        niter,
        nobj: n,
        iind: state.iind,
        jind: state.jind,
        weighted: cfg.weighted,
        ordinal: cfg.ordinal,
        ties: cfg.ties,
    };
    Ok((result, times))
}
