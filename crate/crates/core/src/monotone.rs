//! Monotone regression and the three approaches to ties.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::data::{block_ranges, MdsData};
use crate::error::{Error, Result};

/// Weighted least-squares monotone (non-decreasing) regression by pooling
/// adjacent violators.
pub fn pava(targets: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(targets.len(), weights.len());
    // (weighted sum, weight, count)
    let mut stack: Vec<(f64, f64, usize)> = Vec::with_capacity(targets.len());
    for (&t, &w) in targets.iter().zip(weights) {
        stack.push((w * t, w, 1));
        while stack.len() > 1 {
            let (s1, w1, _) = stack[stack.len() - 1];
            let (s0, w0, _) = stack[stack.len() - 2];
            if s0 / w0 > s1 / w1 {
                let (s, w, c) = stack.pop().unwrap();
                let top = stack.last_mut().unwrap();
                top.0 += s;
                top.1 += w;
                top.2 += c;
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(targets.len());
    for (s, w, c) in stack {
        out.extend(std::iter::repeat_n(s / w, c));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum TieApproach {
    /// Tied dissimilarities may get different disparities.
    #[default]
    Primary,
    /// Tied dissimilarities get equal disparities.
    Secondary,
    /// Only the block means of the disparities are ordered.
    Tertiary,
}

impl TryFrom<u8> for TieApproach {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(TieApproach::Primary),
            2 => Ok(TieApproach::Secondary),
            3 => Ok(TieApproach::Tertiary),
            _ => Err(format!("ties must be 1, 2 or 3, got {v}")),
        }
    }
}

impl From<TieApproach> for u8 {
    fn from(t: TieApproach) -> u8 {
        match t {
            TieApproach::Primary => 1,
            TieApproach::Secondary => 2,
            TieApproach::Tertiary => 3,
        }
    }
}

/// Current disparities with the index and weight vectors they align with.
/// Under the primary approach the vectors are permuted within tie blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformState {
    pub dhat: Vec<f64>,
    pub iind: Vec<usize>,
    pub jind: Vec<usize>,
    pub weights: Vec<f64>,
    pub blocks: Vec<usize>,
    ranges: Vec<Range<usize>>,
}

impl TransformState {
    /// Starts from `dhat = delta` with the given weights.
    pub fn new(data: &MdsData, weights: Vec<f64>) -> Self {
        Self::from_parts(
            data.delta.clone(),
            data.iind.clone(),
            data.jind.clone(),
            weights,
            data.blocks.clone(),
        )
    }

    pub fn from_parts(
        dhat: Vec<f64>,
        iind: Vec<usize>,
        jind: Vec<usize>,
        weights: Vec<f64>,
        blocks: Vec<usize>,
    ) -> Self {
        let ranges = block_ranges(&blocks);
        TransformState {
            dhat,
            iind,
            jind,
            weights,
            blocks,
            ranges,
        }
    }

    pub fn apply(&mut self, ties: TieApproach, dist: &mut [f64]) -> Result<()> {
        match ties {
            TieApproach::Primary => primary_approach(self, dist),
            TieApproach::Secondary => secondary_approach(self, dist),
            TieApproach::Tertiary => tertiary_approach(self, dist),
        }
    }

    /// Weighted block means of `values` and the block weights.
    fn block_means(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.ranges
            .iter()
            .map(|r| {
                let w: f64 = self.weights[r.clone()].iter().sum();
                let s: f64 = r.clone().map(|k| self.weights[k] * values[k]).sum();
                (s / w, w)
            })
            .unzip()
    }
}

/// Co-sorts indices, weights and `dist` by `dist` within each tie block
/// (stable), then fits a monotone regression over the whole vector.
pub fn primary_approach(state: &mut TransformState, dist: &mut [f64]) -> Result<()> {
    let mut perm: Vec<usize> = Vec::new();
    let mut scratch_u: Vec<usize> = Vec::new();
    let mut scratch_f: Vec<f64> = Vec::new();
    for r in &state.ranges {
        let block = &dist[r.clone()];
        if block.windows(2).all(|w| w[0] <= w[1]) {
            continue;
        }
        perm.clear();
        perm.extend(0..r.len());
        perm.sort_by(|&a, &b| block[a].total_cmp(&block[b]));
        permute(&mut state.iind[r.clone()], &perm, &mut scratch_u);
        permute(&mut state.jind[r.clone()], &perm, &mut scratch_u);
        permute(&mut state.weights[r.clone()], &perm, &mut scratch_f);
        permute(&mut dist[r.clone()], &perm, &mut scratch_f);
    }
    state.dhat = pava(dist, &state.weights);
    normalize_dhat(state)
}

fn permute<T: Copy>(slice: &mut [T], perm: &[usize], scratch: &mut Vec<T>) {
    scratch.clear();
    scratch.extend(perm.iter().map(|&p| slice[p]));
    slice.copy_from_slice(scratch);
}

/// Fits block means monotonically and gives every member its block's value.
pub fn secondary_approach(state: &mut TransformState, dist: &mut [f64]) -> Result<()> {
    let (means, bw) = state.block_means(dist);
    let fitted = pava(&means, &bw);
    for (r, v) in state.ranges.iter().zip(fitted) {
        state.dhat[r.clone()].iter_mut().for_each(|d| *d = v);
    }
    normalize_dhat(state)
}

/// Shifts each block so its mean matches the monotone fit of the block
/// means, keeping within-block deviations. Negative results are set to 0.
pub fn tertiary_approach(state: &mut TransformState, dist: &mut [f64]) -> Result<()> {
    let (means, bw) = state.block_means(dist);
    let fitted = pava(&means, &bw);
    for ((r, m), f) in state.ranges.iter().zip(&means).zip(&fitted) {
        for k in r.clone() {
            state.dhat[k] = (dist[k] - m + f).max(0.0);
        }
    }
    normalize_dhat(state)
}

/// Scales `dhat` so that `Σ w dhat² = 1`.
pub fn normalize_dhat(state: &mut TransformState) -> Result<()> {
    normalize(&mut state.dhat, &state.weights)
}

pub fn normalize(values: &mut [f64], weights: &[f64]) -> Result<()> {
    let ss: f64 = values.iter().zip(weights).map(|(v, w)| w * v * v).sum();
    if !(ss > 0.0) || !ss.is_finite() {
        return Err(Error::DegenerateDisparities);
    }
    let s = ss.sqrt();
    values.iter_mut().for_each(|v| *v /= s);
    Ok(())
}
