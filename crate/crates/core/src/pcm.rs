//! Multiplicative pairwise comparison matrices built from goals.
//!
//! Entry `a[i][j] = ((g[i][j] + eps) / (g[j][i] + eps))^alpha`. The ratio is
//! formed first and then raised with `powf`, so integer ratios stay exact
//! (`66 / 3 = 22`, `22^3 = 10648`). Only the upper triangle is computed; the
//! lower triangle stores exact reciprocals.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goals::GoalsMatrix;
use crate::numfmt::Precision;

/// Relative tolerance for reciprocity of externally supplied matrices.
pub const RECIPROCITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparisonMatrix {
    teams: Vec<String>,
    /// Row-major, `n * n` entries.
    values: Vec<f64>,
    alpha: f64,
    epsilon: f64,
}

/// `((g_ij + eps) / (g_ji + eps))^alpha`.
pub fn ratio(g_ij: u32, g_ji: u32, alpha: f64, epsilon: f64) -> Result<f64> {
    let num = f64::from(g_ij) + epsilon;
    let den = f64::from(g_ji) + epsilon;
    if num <= 0.0 || den <= 0.0 {
        return Err(Error::ZeroRatio { g_ij, g_ji });
    }
    if g_ij == g_ji || alpha == 0.0 {
        return Ok(1.0);
    }
    Ok((num / den).powf(alpha))
}

fn check_parameter(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a finite non-negative number, got {value}"
        )))
    }
}

/// Build the comparison matrix for inequality exponent `alpha` and smoothing
/// constant `epsilon` (use 0 for the unsmoothed definition).
pub fn build_pcm(goals: &GoalsMatrix, alpha: f64, epsilon: f64) -> Result<PairwiseComparisonMatrix> {
    check_parameter("alpha", alpha)?;
    check_parameter("epsilon", epsilon)?;
    let n = goals.len();
    let mut values = vec![1.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (gij, gji) = (goals.get(i, j), goals.get(j, i));
            let a = ratio(gij, gji, alpha, epsilon).map_err(|_| {
                let (num, den) = if gji == 0 { (i, j) } else { (j, i) };
                Error::ZeroGoals {
                    numerator: goals.teams()[num].clone(),
                    denominator: goals.teams()[den].clone(),
                }
            })?;
            values[i * n + j] = a;
            values[j * n + i] = 1.0 / a;
        }
    }
    Ok(PairwiseComparisonMatrix {
        teams: goals.teams().to_vec(),
        values,
        alpha,
        epsilon,
    })
}

/// Raise every entry to the power `alpha`; the provenance exponent multiplies.
pub fn power_transform(m: &PairwiseComparisonMatrix, alpha: f64) -> Result<PairwiseComparisonMatrix> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("power must be positive, got {alpha}")));
    }
    let n = m.len();
    let mut values = vec![1.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let a = m.get(i, j).powf(alpha);
            values[i * n + j] = a;
            values[j * n + i] = 1.0 / a;
        }
    }
    Ok(PairwiseComparisonMatrix {
        teams: m.teams.clone(),
        values,
        alpha: m.alpha * alpha,
        epsilon: m.epsilon,
    })
}

impl PairwiseComparisonMatrix {
    /// Wrap an externally supplied matrix given as rows, checking positivity,
    /// unit diagonal and reciprocity (relative tolerance [`RECIPROCITY_TOL`]).
    pub fn from_rows(teams: Vec<String>, rows: Vec<Vec<f64>>, alpha: f64, epsilon: f64) -> Result<Self> {
        let n = teams.len();
        if n < 2 {
            return Err(Error::TooFewTeams(n));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NonSquare(format!("expected {n}x{n} values")));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        let m = Self {
            teams,
            values,
            alpha,
            epsilon,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.values.len() != n * n {
            return Err(Error::NonSquare(format!("expected {} values", n * n)));
        }
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::InvalidCell {
                        row: self.teams[i].clone(),
                        col: self.teams[j].clone(),
                        message: format!("{a} is not a positive number"),
                    });
                }
                if i == j && (a - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(Error::InvalidCell {
                        row: self.teams[i].clone(),
                        col: self.teams[j].clone(),
                        message: "diagonal must be 1".into(),
                    });
                }
                if j > i && (a * self.get(j, i) - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(Error::NotReciprocal {
                        row: self.teams[i].clone(),
                        col: self.teams[j].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn teams(&self) -> &[String] {
        &self.teams
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn write_csv<W: Write>(&self, out: W, precision: Precision) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.teams.iter().cloned());
        writer.write_record(&header)?;
        for i in 0..self.len() {
            let mut record = vec![self.teams[i].clone()];
            record.extend(self.row(i).iter().map(|&a| precision.format(a)));
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Read the square CSV layout written by [`Self::write_csv`]. `alpha` and
    /// `epsilon` are not part of the CSV and default to 1 and 0.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(input);
        let mut records = reader.records();
        let header = records.next().ok_or_else(|| Error::NonSquare("empty input".into()))??;
        let teams: Vec<String> = header.iter().skip(1).map(|t| t.trim().to_string()).collect();
        let mut rows = Vec::new();
        for record in records {
            let record = record?;
            let label = record.get(0).unwrap_or_default().trim().to_string();
            let row = record
                .iter()
                .skip(1)
                .enumerate()
                .map(|(j, cell)| {
                    cell.trim().parse::<f64>().map_err(|_| Error::InvalidCell {
                        row: label.clone(),
                        col: teams.get(j).cloned().unwrap_or_default(),
                        message: format!("`{cell}` is not a number"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(teams, rows, 1.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goals(g: Vec<Vec<u32>>) -> GoalsMatrix {
        let teams = (0..g.len()).map(|i| format!("T{i}")).collect();
        GoalsMatrix::new(teams, g, None).unwrap()
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(61, 14, 1.0, 0.0).unwrap(), 61.0 / 14.0);
        assert_eq!(ratio(66, 3, 1.0, 0.0).unwrap(), 22.0);
        assert_eq!(ratio(66, 3, 3.0, 0.0).unwrap(), 10648.0);
        assert_eq!(ratio(7, 7, 2.5, 0.3).unwrap(), 1.0);
        assert_eq!(ratio(61, 14, 0.0, 0.0).unwrap(), 1.0);
        // (61/14)^2 = 3721/196
        let sq = ratio(61, 14, 2.0, 0.0).unwrap();
        assert!((sq - 3721.0 / 196.0).abs() / sq < 1e-14);
    }

    #[test]
    fn zero_denominator_is_a_named_error() {
        assert!(matches!(ratio(4, 0, 1.0, 0.0), Err(Error::ZeroRatio { .. })));
        let err = build_pcm(&goals(vec![vec![0, 4], vec![0, 0]]), 1.0, 0.0).unwrap_err();
        match err {
            Error::ZeroGoals { numerator, denominator } => {
                assert_eq!((numerator.as_str(), denominator.as_str()), ("T0", "T1"));
            }
            other => panic!("{other:?}"),
        }
        assert!(err_msg_mentions_epsilon());
    }

    fn err_msg_mentions_epsilon() -> bool {
        let err = build_pcm(&goals(vec![vec![0, 4], vec![0, 0]]), 1.0, 0.0).unwrap_err();
        err.to_string().contains("epsilon")
    }

    #[test]
    fn epsilon_smoothing() {
        let m = build_pcm(&goals(vec![vec![0, 4], vec![0, 0]]), 1.0, 1.0).unwrap();
        assert_eq!(m.get(0, 1), 5.0);
        assert_eq!(m.get(1, 0), 0.2);
    }

    #[test]
    fn alpha_zero_gives_ones() {
        let m = build_pcm(&goals(vec![vec![0, 9, 1], vec![3, 0, 2], vec![5, 7, 0]]), 0.0, 0.0).unwrap();
        assert!(m.values().iter().all(|&a| a == 1.0));
    }

    #[test]
    fn power_transform_matches_direct_build() {
        let g = goals(vec![vec![0, 9, 1], vec![3, 0, 2], vec![5, 7, 0]]);
        let direct = build_pcm(&g, 2.0, 0.0).unwrap();
        let powered = power_transform(&build_pcm(&g, 1.0, 0.0).unwrap(), 2.0).unwrap();
        assert_eq!(powered.alpha(), 2.0);
        for (x, y) in direct.values().iter().zip(powered.values()) {
            assert!((x - y).abs() / x < 1e-12);
        }
        let same = power_transform(&direct, 1.0).unwrap();
        for (x, y) in direct.values().iter().zip(same.values()) {
            assert!((x - y).abs() / x < 1e-15);
        }
        let ones = build_pcm(&g, 0.0, 0.0).unwrap();
        assert!(power_transform(&ones, 3.7).unwrap().values().iter().all(|&a| a == 1.0));
    }

    #[test]
    fn external_matrix_validation() {
        let teams = vec!["A".to_string(), "B".to_string()];
        assert!(
            PairwiseComparisonMatrix::from_rows(teams.clone(), vec![vec![1.0, 4.0], vec![0.25, 1.0]], 1.0, 0.0).is_ok()
        );
        assert!(matches!(
            PairwiseComparisonMatrix::from_rows(teams.clone(), vec![vec![1.0, 4.0], vec![0.3, 1.0]], 1.0, 0.0),
            Err(Error::NotReciprocal { .. })
        ));
        assert!(PairwiseComparisonMatrix::from_rows(teams, vec![vec![1.0, -4.0], vec![-0.25, 1.0]], 1.0, 0.0).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let g = goals(vec![vec![0, 9, 1], vec![3, 0, 2], vec![5, 7, 0]]);
        let m = build_pcm(&g, 1.3, 0.5).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, Precision::Full).unwrap();
        let back = PairwiseComparisonMatrix::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.values(), m.values());
        let back = PairwiseComparisonMatrix::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
