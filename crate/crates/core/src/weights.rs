//! Priority vectors from a comparison matrix: eigenvector method (EM) and
//! row geometric mean method (RGM).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goals::GoalsMatrix;
use crate::pcm::{build_pcm, PairwiseComparisonMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "EM")]
    Eigenvector,
    #[serde(rename = "RGM")]
    RowGeometricMean,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Eigenvector => "EM",
            Method::RowGeometricMean => "RGM",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "em" | "eigenvector" => Ok(Method::Eigenvector),
            "rgm" | "llsm" | "geometric" => Ok(Method::RowGeometricMean),
            _ => Err(Error::InvalidParameter(format!("unknown weighting method `{s}`"))),
        }
    }
}

/// A weighting method together with its solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightingMethod {
    Eigenvector { tol: f64, max_iter: usize },
    RowGeometricMean,
}

impl WeightingMethod {
    pub fn eigenvector() -> Self {
        WeightingMethod::Eigenvector {
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn row_geometric_mean() -> Self {
        WeightingMethod::RowGeometricMean
    }

    pub fn method(&self) -> Method {
        match self {
            WeightingMethod::Eigenvector { .. } => Method::Eigenvector,
            WeightingMethod::RowGeometricMean => Method::RowGeometricMean,
        }
    }

    pub fn weights(&self, m: &PairwiseComparisonMatrix) -> Result<WeightVector> {
        match *self {
            WeightingMethod::Eigenvector { tol, max_iter } => eigenvector_weights(m, tol, max_iter),
            WeightingMethod::RowGeometricMean => Ok(row_geometric_mean_weights(m)),
        }
    }
}

impl From<Method> for WeightingMethod {
    fn from(method: Method) -> Self {
        match method {
            Method::Eigenvector => WeightingMethod::eigenvector(),
            Method::RowGeometricMean => WeightingMethod::row_geometric_mean(),
        }
    }
}

/// Positive weights summing to one, tagged with the method that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub method: Method,
    pub alpha: f64,
    #[serde(default)]
    pub epsilon: f64,
    pub teams: Vec<String>,
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_max: Option<f64>,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_of(&self, team: &str) -> Result<f64> {
        self.teams
            .iter()
            .position(|t| t == team)
            .map(|i| self.weights[i])
            .ok_or_else(|| Error::NoSuchTeam(team.to_string()))
    }
}

fn mat_vec(m: &PairwiseComparisonMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.len())
        .map(|i| m.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// `max_i |(Aw)_i - lambda * w_i| / max_i w_i`.
pub fn eigen_residual(m: &PairwiseComparisonMatrix, w: &[f64], lambda: f64) -> f64 {
    let aw = mat_vec(m, w);
    let num = aw
        .iter()
        .zip(w)
        .map(|(y, x)| (y - lambda * x).abs())
        .fold(0.0, f64::max);
    num / w.iter().copied().fold(0.0, f64::max)
}

/// Perron vector by power iteration from the uniform vector.
///
/// Stops once the largest relative change of a component between two
/// iterates falls below `tol`. `lambda_max` is the component-averaged ratio
/// `(Aw)_i / w_i` at the final iterate.
pub fn eigenvector_weights(m: &PairwiseComparisonMatrix, tol: f64, max_iter: usize) -> Result<WeightVector> {
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidParameter(
            "power iteration needs tol > 0 and max_iter > 0".into(),
        ));
    }
    let n = m.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut y = mat_vec(m, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        let change = y
            .iter()
            .zip(&x)
            .map(|(new, old)| (new - old).abs() / new)
            .fold(0.0, f64::max);
        x = y;
        if change < tol {
            let ax = mat_vec(m, &x);
            let lambda = ax.iter().zip(&x).map(|(y, x)| y / x).sum::<f64>() / n as f64;
            return Ok(WeightVector {
                method: Method::Eigenvector,
                alpha: m.alpha(),
                epsilon: m.epsilon(),
                teams: m.teams().to_vec(),
                weights: x,
                lambda_max: Some(lambda),
            });
        }
    }
    let ax = mat_vec(m, &x);
    let lambda = ax.iter().zip(&x).map(|(y, x)| y / x).sum::<f64>() / n as f64;
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: eigen_residual(m, &x, lambda),
    })
}

/// Row geometric means, normalised to sum one. Computed in the log domain with
/// the largest log-mean subtracted before exponentiation.
pub fn row_geometric_mean_weights(m: &PairwiseComparisonMatrix) -> WeightVector {
    let n = m.len();
    let logs: Vec<f64> = (0..n)
        .map(|i| m.row(i).iter().map(|a| a.ln()).sum::<f64>() / n as f64)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|r| (r - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    WeightVector {
        method: Method::RowGeometricMean,
        alpha: m.alpha(),
        epsilon: m.epsilon(),
        teams: m.teams().to_vec(),
        weights: raw.into_iter().map(|v| v / total).collect(),
        lambda_max: None,
    }
}

/// Build the comparison matrix at `alpha` and derive its weights in one step.
pub fn weights_at(goals: &GoalsMatrix, method: &WeightingMethod, alpha: f64, epsilon: f64) -> Result<WeightVector> {
    method.weights(&build_pcm(goals, alpha, epsilon)?)
}

/// Logarithmic least squares objective
/// `sum_ij (ln a_ij - ln(w_i / w_j))^2`.
pub fn llsm_objective(m: &PairwiseComparisonMatrix, w: &[f64]) -> f64 {
    let n = m.len();
    let logw: Vec<f64> = w.iter().map(|v| v.ln()).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = m.get(i, j).ln() - (logw[i] - logw[j]);
            total += r * r;
        }
    }
    total
}
