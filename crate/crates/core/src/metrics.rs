//! Inequality indices, rankings and rank-reversal detection across `alpha`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goals::GoalsMatrix;
use crate::weights::{weights_at, Method, WeightVector, WeightingMethod};

/// Weights closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Default bisection width for crossing localisation.
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;

/// Herfindahl–Hirschman index: sum of squared shares.
pub fn hhi(w: &WeightVector) -> f64 {
    w.weights.iter().map(|v| v * v).sum()
}

/// HHI rescaled to `[0, 1]`: 0 for equal shares, 1 when one team takes all.
pub fn hhi_star(w: &WeightVector) -> Result<f64> {
    let n = w.len();
    if n < 2 {
        return Err(Error::TooFewTeams(n));
    }
    let (lo, hi) = w
        .weights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi - lo < TIE_TOLERANCE {
        return Ok(0.0);
    }
    // sum (w_i - mean)^2 equals HHI - 1/n for weights summing to one, without
    // the cancellation of the direct formula.
    let nf = n as f64;
    let mean = w.weights.iter().sum::<f64>() / nf;
    let spread: f64 = w.weights.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok(spread / (1.0 - 1.0 / nf))
}

/// Teams ordered best to worst. Weights within [`TIE_TOLERANCE`] of their
/// neighbour form a tie group and are listed in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub teams: Vec<String>,
    /// Input indices in ranked order.
    pub order: Vec<usize>,
    /// Contiguous partition of `teams`; singleton groups are untied.
    pub tie_groups: Vec<Vec<String>>,
}

impl Ranking {
    /// Position (0 = best) of the team at input index `idx`.
    pub fn position(&self, idx: usize) -> usize {
        self.order.iter().position(|&i| i == idx).expect("index in ranking")
    }

    pub fn has_ties(&self) -> bool {
        self.tie_groups.iter().any(|g| g.len() > 1)
    }
}

pub fn ranking_of(w: &WeightVector) -> Ranking {
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&a, &b| w.weights[b].total_cmp(&w.weights[a]).then(a.cmp(&b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &idx {
        match groups.last_mut() {
            Some(g) if w.weights[*g.last().unwrap()] - w.weights[i] < TIE_TOLERANCE => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    let order: Vec<usize> = groups.iter().flatten().copied().collect();
    Ranking {
        teams: order.iter().map(|&i| w.teams[i].clone()).collect(),
        tie_groups: groups
            .iter()
            .map(|g| g.iter().map(|&i| w.teams[i].clone()).collect())
            .collect(),
        order,
    }
}

/// One rank reversal: between `alpha_low` and `alpha_high` the team
/// `overtaker` moves ahead of `overtaken` as alpha increases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub overtaker: String,
    pub overtaken: String,
    pub alpha_low: f64,
    pub alpha_high: f64,
}

impl Crossing {
    pub fn involves(&self, a: &str, b: &str) -> bool {
        (self.overtaker == a && self.overtaken == b) || (self.overtaker == b && self.overtaken == a)
    }

    pub fn contains_point_in(&self, lo: f64, hi: f64) -> bool {
        self.alpha_low <= hi && self.alpha_high >= lo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub method: Method,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub refine_tol: f64,
    pub crossings: Vec<Crossing>,
}

impl CrossingReport {
    pub fn is_scale_invariant(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn find(&self, a: &str, b: &str) -> Vec<&Crossing> {
        self.crossings.iter().filter(|c| c.involves(a, b)).collect()
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("alpha grid is empty".into()));
    }
    if grid.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidParameter(
            "alpha grid values must be finite and non-negative".into(),
        ));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("alpha grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Whether team `i` ranks ahead of team `j` given their weights, applying the
/// tie rule of [`ranking_of`].
fn ahead(wi: f64, wj: f64, i: usize, j: usize) -> bool {
    let d = wi - wj;
    if d.abs() < TIE_TOLERANCE {
        i < j
    } else {
        d > 0.0
    }
}

/// Locate every pairwise order change between consecutive grid points and
/// bisect each one down to an interval no wider than `refine_tol`.
pub(crate) fn detect_crossings(
    goals: &GoalsMatrix,
    method: &WeightingMethod,
    epsilon: f64,
    grid: &[f64],
    weights: &[WeightVector],
    refine_tol: f64,
) -> Result<Vec<Crossing>> {
    let n = goals.len();
    let rankings: Vec<Ranking> = weights.iter().map(ranking_of).collect();
    let positions: Vec<Vec<usize>> = rankings
        .iter()
        .map(|r| {
            let mut pos = vec![0; n];
            for (p, &i) in r.order.iter().enumerate() {
                pos[i] = p;
            }
            pos
        })
        .collect();

    let mut flips = Vec::new();
    for k in 0..grid.len().saturating_sub(1) {
        for i in 0..n {
            for j in 0..n {
                if i != j && positions[k][i] < positions[k][j] && positions[k + 1][i] > positions[k + 1][j] {
                    flips.push((k, i, j));
                }
            }
        }
    }

    flips
        .into_par_iter()
        .map(|(k, leader, chaser)| {
            let (mut lo, mut hi) = (grid[k], grid[k + 1]);
            while hi - lo > refine_tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let w = weights_at(goals, method, mid, epsilon)?;
                if ahead(w.weights[leader], w.weights[chaser], leader, chaser) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(Crossing {
                overtaker: goals.teams()[chaser].clone(),
                overtaken: goals.teams()[leader].clone(),
                alpha_low: lo,
                alpha_high: hi,
            })
        })
        .collect()
}

/// Evaluate rankings over `alpha_grid` and report every rank reversal.
/// An empty report means the method behaved scale-invariantly on this
/// goals matrix over the scanned grid.
pub fn scale_invariance_scan(
    goals: &GoalsMatrix,
    method: &WeightingMethod,
    alpha_grid: &[f64],
    refine_tol: f64,
    epsilon: f64,
) -> Result<CrossingReport> {
    check_grid(alpha_grid)?;
    if alpha_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter("scan grid must lie in (0, alpha_max]".into()));
    }
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return Err(Error::InvalidParameter("refine_tol must be positive".into()));
    }
    let weights = alpha_grid
        .par_iter()
        .map(|&a| weights_at(goals, method, a, epsilon))
        .collect::<Result<Vec<_>>>()?;
    let crossings = detect_crossings(goals, method, epsilon, alpha_grid, &weights, refine_tol)?;
    Ok(CrossingReport {
        method: method.method(),
        alpha_min: alpha_grid[0],
        alpha_max: *alpha_grid.last().unwrap(),
        refine_tol,
        crossings,
    })
}
