//! Championship standings under points-per-position scoring systems.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::SeasonResults;

/// Race id of the 2014 finale that awarded double points in the bundled fixture.
pub const DOUBLE_POINTS_RACE_2014: &str = "abu-dhabi";

/// Points awarded per finishing position, plus optional per-race multipliers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsSystem {
    pub name: String,
    /// `points[k]` is awarded for position `k + 1`; later positions score 0.
    pub points: Vec<u32>,
    #[serde(default)]
    pub multipliers: BTreeMap<String, u32>,
}

impl PointsSystem {
    pub fn new(name: impl Into<String>, points: Vec<u32>) -> Result<Self> {
        let system = Self {
            name: name.into(),
            points,
            multipliers: BTreeMap::new(),
        };
        system.validate()?;
        Ok(system)
    }

    pub fn with_multiplier(mut self, race_id: impl Into<String>, factor: u32) -> Result<Self> {
        self.multipliers.insert(race_id.into(), factor);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.windows(2).any(|p| p[1] > p[0]) {
            return Err(Error::InvalidParameter(format!(
                "points system `{}` must be non-increasing in position",
                self.name
            )));
        }
        if let Some((race, _)) = self.multipliers.iter().find(|(_, &m)| m == 0) {
            return Err(Error::InvalidParameter(format!(
                "points system `{}`: multiplier for `{race}` must be positive",
                self.name
            )));
        }
        Ok(())
    }

    pub fn points_for(&self, position: u32) -> u32 {
        position
            .checked_sub(1)
            .and_then(|k| self.points.get(k as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn multiplier(&self, race_id: &str) -> u32 {
        self.multipliers.get(race_id).copied().unwrap_or(1)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let system: Self = serde_json::from_str(text)?;
        system.validate()?;
        Ok(system)
    }
}

/// The four historical systems, oldest first, followed by `2014-official`
/// (the 2010- table with double points at [`DOUBLE_POINTS_RACE_2014`]).
pub fn builtin_systems() -> Vec<PointsSystem> {
    let table = |name: &str, points: &[u32]| PointsSystem {
        name: name.to_string(),
        points: points.to_vec(),
        multipliers: BTreeMap::new(),
    };
    let modern = [25, 18, 15, 12, 10, 8, 6, 4, 2, 1];
    let mut official = table("2014-official", &modern);
    official.multipliers.insert(DOUBLE_POINTS_RACE_2014.to_string(), 2);
    vec![
        table("1961-1990", &[9, 6, 4, 3, 2, 1]),
        table("1991-2002", &[10, 6, 4, 3, 2, 1]),
        table("2003-2009", &[10, 8, 6, 5, 4, 3, 2, 1]),
        table("2010-", &modern),
        official,
    ]
}

/// Look up a built-in system; en dashes are accepted in place of hyphens.
pub fn builtin_system(name: &str) -> Option<PointsSystem> {
    let wanted = name.replace(['\u{2013}', '\u{2014}'], "-");
    builtin_systems().into_iter().find(|s| s.name == wanted)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandingsEntry {
    pub team: String,
    pub points: u64,
    pub rank: usize,
    /// Set when countback could not separate this team from a neighbour.
    pub tie: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standings {
    pub system: String,
    pub entries: Vec<StandingsEntry>,
}

impl Standings {
    pub fn entry(&self, team: &str) -> Option<&StandingsEntry> {
        self.entries.iter().find(|e| e.team == team)
    }

    pub fn order(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.team.as_str()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(["team", "points", "rank", "tie_flag"])?;
        for e in &self.entries {
            writer.write_record([
                e.team.clone(),
                e.points.to_string(),
                e.rank.to_string(),
                e.tie.to_string(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Constructors' standings: each classified car scores by its overall finish
/// position. Equal points are separated by countback (more wins, then more
/// second places, and so on through every position); teams still level keep
/// input order and are flagged.
pub fn score_season(season: &SeasonResults, system: &PointsSystem) -> Standings {
    let n = season.teams().len();
    let max_rank = season
        .races()
        .iter()
        .flat_map(|r| r.results.iter().filter_map(|c| c.finish_rank))
        .max()
        .unwrap_or(0) as usize;
    let mut points = vec![0u64; n];
    let mut countback = vec![vec![0u32; max_rank]; n];
    for race in season.races() {
        let factor = u64::from(system.multiplier(&race.race_id));
        for car in &race.results {
            let Some(rank) = car.comparable_rank() else {
                continue;
            };
            let t = season.team_index(&car.team_id).expect("validated team");
            points[t] += u64::from(system.points_for(rank)) * factor;
            countback[t][rank as usize - 1] += 1;
        }
    }

    let compare = |&a: &usize, &b: &usize| -> Ordering {
        points[b].cmp(&points[a]).then_with(|| countback[b].cmp(&countback[a]))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| compare(a, b).then(a.cmp(b)));

    let entries = order
        .iter()
        .enumerate()
        .map(|(pos, &t)| {
            let level = |other: Option<&usize>| other.is_some_and(|o| compare(&t, o) == Ordering::Equal);
            let tie = level(pos.checked_sub(1).and_then(|p| order.get(p))) || level(order.get(pos + 1));
            StandingsEntry {
                team: season.teams()[t].clone(),
                points: points[t],
                rank: pos + 1,
                tie,
            }
        })
        .collect();
    Standings {
        system: system.name.clone(),
        entries,
    }
}
