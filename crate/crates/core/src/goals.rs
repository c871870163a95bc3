//! Season goals matrix: car-level head-to-head counts between teams.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{CarResult, Race, SeasonResults};

/// `g[i][j]` counts the occasions on which a car of team `i` finished ahead of
/// a car of team `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalsMatrix {
    teams: Vec<String>,
    g: Vec<Vec<u32>>,
    /// `None` when the matrix was loaded directly rather than aggregated.
    races_counted: Option<u32>,
}

impl GoalsMatrix {
    pub fn new(teams: Vec<String>, g: Vec<Vec<u32>>, races_counted: Option<u32>) -> Result<Self> {
        let n = teams.len();
        if n < 2 {
            return Err(Error::TooFewTeams(n));
        }
        if g.len() != n || g.iter().any(|row| row.len() != n) {
            return Err(Error::NonSquare(format!("expected {n}x{n} cells")));
        }
        for i in 0..n {
            if g[i][i] != 0 {
                return Err(Error::NonEmptyDiagonal(teams[i].clone()));
            }
        }
        if let Some(races) = races_counted {
            for i in 0..n {
                for j in i + 1..n {
                    if u64::from(g[i][j]) + u64::from(g[j][i]) > 4 * u64::from(races) {
                        return Err(Error::InvalidCell {
                            row: teams[i].clone(),
                            col: teams[j].clone(),
                            message: format!("more than 4 x {races} goals in total"),
                        });
                    }
                }
            }
        }
        Ok(Self {
            teams,
            g,
            races_counted,
        })
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

    pub fn races_counted(&self) -> Option<u32> {
        self.races_counted
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.g[i][j]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.g
    }

    pub fn team_index(&self, team: &str) -> Result<usize> {
        self.teams
            .iter()
            .position(|t| t == team)
            .ok_or_else(|| Error::NoSuchTeam(team.to_string()))
    }

    /// Goals scored by `a` against `b`, looked up by team id.
    pub fn between(&self, a: &str, b: &str) -> Result<u32> {
        Ok(self.g[self.team_index(a)?][self.team_index(b)?])
    }

    /// Reorder teams; rows and columns move together.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            teams: order.iter().map(|&i| self.teams[i].clone()).collect(),
            g: order
                .iter()
                .map(|&i| order.iter().map(|&j| self.g[i][j]).collect())
                .collect(),
            races_counted: self.races_counted,
        }
    }
}

/// Whether car `a` is ahead of car `b`: classified cars compare by rank, a
/// classified car beats an unclassified one, two unclassified cars are
/// incomparable.
fn ahead(a: &CarResult, b: &CarResult) -> bool {
    match (a.comparable_rank(), b.comparable_rank()) {
        (Some(ra), Some(rb)) => ra < rb,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Goals scored in a single race, indexed by the season's team order.
pub fn race_goals(teams: &[String], race: &Race) -> Vec<Vec<u32>> {
    let n = teams.len();
    let mut g = vec![vec![0u32; n]; n];
    let idx: Vec<Option<usize>> = race
        .results
        .iter()
        .map(|c| teams.iter().position(|t| *t == c.team_id))
        .collect();
    for (a, ia) in race.results.iter().zip(&idx) {
        for (b, ib) in race.results.iter().zip(&idx) {
            if let (Some(i), Some(j)) = (*ia, *ib) {
                if i != j && ahead(a, b) {
                    g[i][j] += 1;
                }
            }
        }
    }
    g
}

/// Aggregate every race of the season with equal weight.
pub fn goals_matrix(season: &SeasonResults) -> GoalsMatrix {
    let teams = season.teams().to_vec();
    let n = teams.len();
    let g = season.races().par_iter().map(|race| race_goals(&teams, race)).reduce(
        || vec![vec![0u32; n]; n],
        |mut acc, g| {
            for (row, add) in acc.iter_mut().zip(g) {
                for (x, y) in row.iter_mut().zip(add) {
                    *x += y;
                }
            }
            acc
        },
    );
    GoalsMatrix {
        teams,
        g,
        races_counted: Some(season.races().len() as u32),
    }
}

/// Read a square goals CSV: header row and first column carry team ids, the
/// diagonal is empty.
pub fn load_goals<R: Read>(input: R) -> Result<GoalsMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let header = records.next().ok_or_else(|| Error::NonSquare("empty input".into()))??;
    let teams: Vec<String> = header.iter().skip(1).map(|t| t.trim().to_string()).collect();
    let n = teams.len();
    let mut g = Vec::with_capacity(n);
    for (i, record) in records.enumerate() {
        let record = record?;
        if i >= n {
            return Err(Error::NonSquare(format!("more than {n} data rows")));
        }
        if record.len() != n + 1 {
            return Err(Error::NonSquare(format!(
                "row {} has {} cells, expected {}",
                i + 1,
                record.len() - 1,
                n
            )));
        }
        let label = record[0].trim();
        if label != teams[i] {
            return Err(Error::NonSquare(format!(
                "row label `{label}` does not match column `{}`",
                teams[i]
            )));
        }
        let mut row = Vec::with_capacity(n);
        for (j, cell) in record.iter().skip(1).enumerate() {
            let cell = cell.trim();
            if i == j {
                if !cell.is_empty() && cell != "-" && cell != "---" {
                    return Err(Error::NonEmptyDiagonal(teams[i].clone()));
                }
                row.push(0);
                continue;
            }
            let value: u32 = cell.parse().map_err(|_| Error::InvalidCell {
                row: teams[i].clone(),
                col: teams[j].clone(),
                message: format!("`{cell}` is not a non-negative integer"),
            })?;
            row.push(value);
        }
        g.push(row);
    }
    if g.len() != n {
        return Err(Error::NonSquare(format!("{} data rows for {n} columns", g.len())));
    }
    GoalsMatrix::new(teams, g, None)
}

pub fn write_goals<W: Write>(goals: &GoalsMatrix, out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec![String::new()];
    header.extend(goals.teams.iter().cloned());
    writer.write_record(&header)?;
    for (i, row) in goals.g.iter().enumerate() {
        let mut record = vec![goals.teams[i].clone()];
        record.extend(
            row.iter()
                .enumerate()
                .map(|(j, v)| if i == j { String::new() } else { v.to_string() }),
        );
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn car(team: &str, idx: u8, rank: Option<u32>, classified: bool) -> CarResult {
        CarResult {
            team_id: team.into(),
            car_index: idx,
            finish_rank: rank,
            classified: Some(classified),
            laps_fraction: None,
        }
    }

    fn teams() -> Vec<String> {
        vec!["A".into(), "B".into()]
    }

    fn race(results: Vec<CarResult>) -> Race {
        Race {
            race_id: "r".into(),
            ordinal: 1,
            results,
        }
    }

    #[test]
    fn three_one_split() {
        let r = race(vec![
            car("A", 1, Some(1), true),
            car("B", 1, Some(2), true),
            car("A", 2, Some(3), true),
            car("B", 2, Some(4), true),
        ]);
        let g = race_goals(&teams(), &r);
        assert_eq!((g[0][1], g[1][0]), (3, 1));
    }

    #[test]
    fn finishers_beat_non_finishers() {
        let r = race(vec![
            car("A", 1, Some(1), true),
            car("A", 2, Some(2), true),
            car("B", 1, None, false),
            car("B", 2, None, false),
        ]);
        let g = race_goals(&teams(), &r);
        assert_eq!((g[0][1], g[1][0]), (4, 0));
    }

    #[test]
    fn two_non_finishers_are_incomparable() {
        // a1 classified; a2, b1, b2 not. Cross pairs: (a1,b1) (a1,b2) goals for A,
        // (a2,b1) (a2,b2) incomparable.
        let r = race(vec![
            car("A", 1, Some(1), true),
            car("A", 2, None, false),
            car("B", 1, None, false),
            car("B", 2, None, false),
        ]);
        let g = race_goals(&teams(), &r);
        assert_eq!((g[0][1], g[1][0]), (2, 0));
    }

    #[test]
    fn unclassified_rank_is_ignored() {
        // B2 has a rank ahead of A2 but is unclassified.
        let r = race(vec![
            car("A", 1, Some(1), true),
            car("B", 2, Some(2), false),
            car("A", 2, Some(3), true),
            car("B", 1, Some(4), true),
        ]);
        let g = race_goals(&teams(), &r);
        assert_eq!((g[0][1], g[1][0]), (4, 0));
    }

    #[test]
    fn load_rejects_bad_shapes() {
        assert!(matches!(
            load_goals(",A,B\nA,,4\n".as_bytes()),
            Err(Error::NonSquare(_))
        ));
        assert!(matches!(
            load_goals(",A,B,C\nA,,1,2\nB,1,,2\n".as_bytes()),
            Err(Error::NonSquare(_))
        ));
        assert!(matches!(
            load_goals(",A,B\nA,1,4\nB,0,\n".as_bytes()),
            Err(Error::NonEmptyDiagonal(_))
        ));
        assert!(matches!(
            load_goals(",A,B\nA,,-4\nB,0,\n".as_bytes()),
            Err(Error::InvalidCell { .. })
        ));
        assert!(matches!(
            load_goals(",A,B\nA,,1.5\nB,0,\n".as_bytes()),
            Err(Error::InvalidCell { .. })
        ));
    }

    #[test]
    fn zero_entries_are_allowed_here() {
        let g = load_goals(",A,B\nA,,4\nB,0,\n".as_bytes()).unwrap();
        assert_eq!(g.get(0, 1), 4);
        assert_eq!(g.get(1, 0), 0);
        assert_eq!(g.races_counted(), None);
    }

    #[test]
    fn csv_round_trip() {
        let g = load_goals(",A,B,C\nA,,4,3\nB,0,,2\nC,1,2,\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_goals(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            ",A,B,C\nA,,4,3\nB,0,,2\nC,1,2,\n"
        );
        assert_eq!(load_goals(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn race_bound_is_checked_when_known() {
        let err = GoalsMatrix::new(teams(), vec![vec![0, 4], vec![1, 0]], Some(1));
        assert!(err.is_err());
        assert!(GoalsMatrix::new(teams(), vec![vec![0, 4], vec![0, 0]], Some(1)).is_ok());
    }
}
