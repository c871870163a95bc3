//! Monetary allocation, share curves over `alpha`, the inverse "indifferent
//! alpha" problem and full parameter sweeps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goals::GoalsMatrix;
use crate::metrics::{check_grid, detect_crossings, hhi_star, ranking_of, CrossingReport};
use crate::numfmt::Precision;
use crate::weights::{weights_at, Method, WeightVector, WeightingMethod};

/// Evenly spaced alpha values `start, start + step, ..., stop` (inclusive when
/// `stop` lies on the lattice).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AlphaGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && start >= 0.0 && stop >= start) {
            return Err(Error::InvalidParameter(format!(
                "grid needs 0 <= start <= stop, got {start}:{stop}"
            )));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid step must be positive, got {step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Alpha in `[0, 3]` at step 0.02.
    pub fn standard() -> Self {
        Self {
            start: 0.0,
            stop: 3.0,
            step: 0.02,
        }
    }

    /// `start + k * step` up to and including `stop`, snapped to 12 decimals
    /// so that 0.02-steps give `1.4` rather than `1.4000000000000001`.
    pub fn points(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                let a = self.start + k as f64 * self.step;
                if (a - self.stop).abs() < 1e-9 * self.step {
                    self.stop
                } else if a < 1e3 {
                    (a * 1e12).round() / 1e12
                } else {
                    a
                }
            })
            .collect()
    }
}

impl FromStr for AlphaGrid {
    type Err = Error;

    /// `START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("grid must be START:STOP:STEP, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        AlphaGrid::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for AlphaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationEntry {
    pub team: String,
    pub share: f64,
    pub amount: f64,
    /// `amount` expressed in rounding units; these sum exactly to the pot.
    pub units: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationReport {
    pub pot: f64,
    pub rounding_unit: f64,
    pub method: Method,
    pub alpha: f64,
    pub epsilon: f64,
    pub allocations: Vec<AllocationEntry>,
}

impl AllocationReport {
    pub fn total_units(&self) -> u64 {
        self.allocations.iter().map(|a| a.units).sum()
    }

    pub fn write_csv<W: Write>(&self, out: W, precision: Precision) -> Result<()> {
        write_allocations_csv(std::slice::from_ref(self), out, precision)
    }
}

/// Several reports as one table with columns `method,team,share,amount,units`.
pub fn write_allocations_csv<W: Write>(reports: &[AllocationReport], out: W, precision: Precision) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["method", "team", "share", "amount", "units"])?;
    for r in reports {
        for a in &r.allocations {
            writer.write_record([
                r.method.tag().to_string(),
                a.team.clone(),
                precision.format(a.share),
                precision.format(a.amount),
                a.units.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Split `pot` in proportion to the weights, rounded to multiples of
/// `rounding_unit` by the largest-remainder rule. Leftover units go to the
/// largest fractional parts; equal fractions favour earlier teams.
pub fn allocate(w: &WeightVector, pot: f64, rounding_unit: f64) -> Result<AllocationReport> {
    if !(pot.is_finite() && pot > 0.0 && rounding_unit.is_finite() && rounding_unit > 0.0) {
        return Err(Error::InvalidParameter("pot and rounding unit must be positive".into()));
    }
    let units = pot / rounding_unit;
    let total = units.round();
    if total < 1.0 || (units - total).abs() > 1e-9 * total.max(1.0) || total > u64::MAX as f64 / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "pot {pot} is not a positive multiple of the rounding unit {rounding_unit}"
        )));
    }
    let total = total as u64;
    let weight_sum: f64 = w.weights.iter().sum();
    let quotas: Vec<f64> = w.weights.iter().map(|v| v / weight_sum * total as f64).collect();
    let mut assigned: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();

    let mut by_remainder: Vec<usize> = (0..quotas.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let given: u64 = assigned.iter().sum();
    if given <= total {
        for &i in by_remainder.iter().cycle().take((total - given) as usize) {
            assigned[i] += 1;
        }
    } else {
        // Only reachable through floating-point excess in the quotas.
        for &i in by_remainder.iter().rev().cycle().take((given - total) as usize) {
            assigned[i] -= 1;
        }
    }

    Ok(AllocationReport {
        pot,
        rounding_unit,
        method: w.method,
        alpha: w.alpha,
        epsilon: w.epsilon,
        allocations: w
            .teams
            .iter()
            .zip(&w.weights)
            .zip(assigned)
            .map(|((team, &share), units)| AllocationEntry {
                team: team.clone(),
                share,
                amount: units as f64 * rounding_unit,
                units,
            })
            .collect(),
    })
}

fn weights_on_grid(
    goals: &GoalsMatrix,
    method: &WeightingMethod,
    grid: &[f64],
    epsilon: f64,
) -> Result<Vec<WeightVector>> {
    grid.par_iter()
        .map(|&a| weights_at(goals, method, a, epsilon))
        .collect()
}

/// Share of `team` at each alpha of the grid.
pub fn share_curve(
    goals: &GoalsMatrix,
    team: &str,
    method: &WeightingMethod,
    grid: &[f64],
    epsilon: f64,
) -> Result<Vec<(f64, f64)>> {
    check_grid(grid)?;
    let t = goals.team_index(team)?;
    Ok(weights_on_grid(goals, method, grid, epsilon)?
        .into_iter()
        .zip(grid)
        .map(|(w, &a)| (a, w.weights[t]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub alpha: f64,
    /// `share(alpha) - target` at the reported alpha.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndifferenceResult {
    pub team: String,
    pub method: Method,
    pub target_share: f64,
    /// Ascending.
    pub roots: Vec<Root>,
    pub no_solution: bool,
}

impl IndifferenceResult {
    /// The smallest root, which is the value usually quoted.
    pub fn smallest_root(&self) -> Option<f64> {
        self.roots.first().map(|r| r.alpha)
    }
}

const MAX_BISECTIONS: usize = 200;

/// Every alpha on the grid's range where `team`'s share equals `target`.
///
/// Grid points already within `tol` of the target are roots; each sign change
/// of `share - target` between neighbouring grid points is bisected until the
/// residual is below `tol`. Shares need not be monotone in alpha, so all
/// crossings are reported.
pub fn indifferent_alpha(
    goals: &GoalsMatrix,
    team: &str,
    target: f64,
    method: &WeightingMethod,
    grid: &[f64],
    tol: f64,
    epsilon: f64,
) -> Result<IndifferenceResult> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target share must be in (0, 1), got {target}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let curve = share_curve(goals, team, method, grid, epsilon)?;
    let t = goals.team_index(team)?;
    let gap: Vec<f64> = curve.iter().map(|(_, s)| s - target).collect();
    let near = |g: f64| g.abs() < tol;

    let mut roots: Vec<Root> = Vec::new();
    for (k, &(alpha, _)) in curve.iter().enumerate() {
        if near(gap[k]) {
            roots.push(Root {
                alpha,
                residual: gap[k],
            });
        }
    }
    let brackets: Vec<usize> = (0..gap.len().saturating_sub(1))
        .filter(|&k| !near(gap[k]) && !near(gap[k + 1]) && gap[k].signum() != gap[k + 1].signum())
        .collect();
    let refined = brackets
        .into_par_iter()
        .map(|k| -> Result<Root> {
            let (mut lo, mut hi) = (curve[k].0, curve[k + 1].0);
            let lo_sign = gap[k].signum();
            let mut best = Root {
                alpha: lo,
                residual: gap[k],
            };
            for _ in 0..MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                let g = weights_at(goals, method, mid, epsilon)?.weights[t] - target;
                if g.abs() < best.residual.abs() {
                    best = Root {
                        alpha: mid,
                        residual: g,
                    };
                }
                if near(g) || mid <= lo || mid >= hi {
                    break;
                }
                if g.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    roots.extend(refined);
    roots.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));

    Ok(IndifferenceResult {
        team: team.to_string(),
        method: method.method(),
        target_share: target,
        no_solution: roots.is_empty(),
        roots,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub weights: Vec<f64>,
    pub hhi_star: f64,
    pub ranking: Vec<String>,
}

/// A team whose largest share on the grid occurs strictly inside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorMaximum {
    pub team: String,
    pub alpha: f64,
    pub share: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSweep {
    pub method: Method,
    pub records: Vec<SweepRecord>,
    pub crossings: CrossingReport,
    pub interior_maxima: Vec<InteriorMaximum>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub teams: Vec<String>,
    pub epsilon: f64,
    pub alpha_grid: Vec<f64>,
    pub methods: Vec<MethodSweep>,
}

impl SweepResult {
    pub fn for_method(&self, method: Method) -> Option<&MethodSweep> {
        self.methods.iter().find(|m| m.method == method)
    }

    /// Plot-ready table: `method, alpha, <share per team>, hhi_star`.
    pub fn write_tsv<W: Write>(&self, mut out: W, precision: Precision) -> Result<()> {
        writeln!(out, "method\talpha\t{}\thhi_star", self.teams.join("\t"))?;
        for m in &self.methods {
            for r in &m.records {
                let shares: Vec<String> = r.weights.iter().map(|&w| precision.format(w)).collect();
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    m.method,
                    precision.format(r.alpha),
                    shares.join("\t"),
                    precision.format(r.hhi_star)
                )?;
            }
        }
        Ok(())
    }
}

/// Weights, HHI* and rankings for each method at every grid point, with the
/// rank reversals found between positive grid points.
pub fn sweep(
    goals: &GoalsMatrix,
    methods: &[WeightingMethod],
    grid: &[f64],
    epsilon: f64,
    refine_tol: f64,
) -> Result<SweepResult> {
    check_grid(grid)?;
    let positive: Vec<f64> = grid.iter().copied().filter(|&a| a > 0.0).collect();
    let mut sweeps = Vec::with_capacity(methods.len());
    for method in methods {
        let weights = weights_on_grid(goals, method, grid, epsilon)?;
        let records = weights
            .iter()
            .zip(grid)
            .map(|(w, &alpha)| {
                Ok(SweepRecord {
                    alpha,
                    weights: w.weights.clone(),
                    hhi_star: hhi_star(w)?,
                    ranking: ranking_of(w).teams,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let offset = grid.len() - positive.len();
        let crossings = detect_crossings(goals, method, epsilon, &positive, &weights[offset..], refine_tol)?;

        let mut interior_maxima = Vec::new();
        if records.len() > 2 {
            for (t, team) in goals.teams().iter().enumerate() {
                let (k, best) = records.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (k, r)| {
                    if r.weights[t] > acc.1 {
                        (k, r.weights[t])
                    } else {
                        acc
                    }
                });
                if k > 0 && k + 1 < records.len() {
                    interior_maxima.push(InteriorMaximum {
                        team: team.clone(),
                        alpha: records[k].alpha,
                        share: best,
                    });
                }
            }
        }

        sweeps.push(MethodSweep {
            method: method.method(),
            records,
            crossings: CrossingReport {
                method: method.method(),
                alpha_min: positive.first().copied().unwrap_or(0.0),
                alpha_max: positive.last().copied().unwrap_or(0.0),
                refine_tol,
                crossings,
            },
            interior_maxima,
        });
    }
    Ok(SweepResult {
        teams: goals.teams().to_vec(),
        epsilon,
        alpha_grid: grid.to_vec(),
        methods: sweeps,
    })
}
