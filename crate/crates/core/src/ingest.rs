//! Season race results: the canonical model, its CSV reader and writer.
//!
//! The season CSV has one row per car per race:
//!
//! ```text
//! race_id,ordinal,team_id,car_index,finish_rank,classified,laps_fraction
//! ```
//!
//! `finish_rank`, `classified` and `laps_fraction` may be empty. Two optional
//! directive lines may precede the header: `# season: <label>` and
//! `# teams: <id>,<id>,...`. The latter fixes the team order; without it teams
//! are ordered by first appearance.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Classification threshold used when a car carries only a laps fraction.
pub const DEFAULT_CLASSIFICATION_THRESHOLD: f64 = 0.9;

const COLUMNS: [&str; 7] = [
    "race_id",
    "ordinal",
    "team_id",
    "car_index",
    "finish_rank",
    "classified",
    "laps_fraction",
];

/// One car's result in one race.
#[derive(Clone, Debug, PartialEq)]
pub struct CarResult {
    pub team_id: String,
    /// 1 or 2.
    pub car_index: u8,
    pub finish_rank: Option<u32>,
    /// `None` only before [`derive_classified`] has run.
    pub classified: Option<bool>,
    pub laps_fraction: Option<f64>,
}

impl CarResult {
    /// Whether the car counts as a finisher for comparisons.
    pub fn is_classified(&self) -> bool {
        self.classified == Some(true)
    }

    /// The rank used for head-to-head comparisons; unclassified cars have none.
    pub fn comparable_rank(&self) -> Option<u32> {
        if self.is_classified() {
            self.finish_rank
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Race {
    pub race_id: String,
    pub ordinal: u32,
    pub results: Vec<CarResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeasonResults {
    pub season_id: String,
    teams: Vec<String>,
    races: Vec<Race>,
}

/// Fill in `classified` from `laps_fraction` when no explicit flag is present.
///
/// A car is classified when it completed strictly more than `threshold` of the
/// race distance. Explicit flags are never overridden.
pub fn derive_classified(result: CarResult, threshold: f64) -> Result<CarResult> {
    if result.classified.is_some() {
        return Ok(result);
    }
    match result.laps_fraction {
        Some(fraction) => Ok(CarResult {
            classified: Some(fraction > threshold),
            ..result
        }),
        None => Err(Error::MissingClassification {
            race_id: String::new(),
            team_id: result.team_id,
            car_index: result.car_index,
        }),
    }
}

impl SeasonResults {
    /// Validate and assemble a season. Races are stored in calendar order.
    pub fn new(season_id: impl Into<String>, teams: Vec<String>, mut races: Vec<Race>) -> Result<Self> {
        if teams.len() < 2 {
            return Err(Error::TooFewTeams(teams.len()));
        }
        let known: HashSet<&str> = teams.iter().map(String::as_str).collect();
        if known.len() != teams.len() {
            return Err(Error::InvalidParameter("duplicate team id in team list".into()));
        }
        let mut ordinals = HashSet::new();
        let mut race_ids = HashSet::new();
        for race in &races {
            if !ordinals.insert(race.ordinal) || !race_ids.insert(race.race_id.as_str()) {
                return Err(Error::DuplicateOrdinal {
                    race_id: race.race_id.clone(),
                    ordinal: race.ordinal,
                });
            }
            validate_race(race, &known)?;
        }
        races.sort_by_key(|r| r.ordinal);
        Ok(Self {
            season_id: season_id.into(),
            teams,
            races,
        })
    }

    pub fn teams(&self) -> &[String] {
        &self.teams
    }

    pub fn races(&self) -> &[Race] {
        &self.races
    }

    pub fn team_index(&self, team_id: &str) -> Option<usize> {
        self.teams.iter().position(|t| t == team_id)
    }
}

fn validate_race(race: &Race, known: &HashSet<&str>) -> Result<()> {
    let mut per_team: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
    let mut ranks = HashSet::new();
    for car in &race.results {
        if !known.contains(car.team_id.as_str()) {
            return Err(Error::UnknownTeam {
                race_id: race.race_id.clone(),
                team_id: car.team_id.clone(),
            });
        }
        per_team.entry(&car.team_id).or_default().push(car.car_index);
        match car.classified {
            None => {
                return Err(Error::MissingClassification {
                    race_id: race.race_id.clone(),
                    team_id: car.team_id.clone(),
                    car_index: car.car_index,
                })
            }
            Some(true) if car.finish_rank.is_none() => {
                return Err(Error::ClassifiedWithoutRank {
                    race_id: race.race_id.clone(),
                    team_id: car.team_id.clone(),
                    car_index: car.car_index,
                })
            }
            _ => {}
        }
        if let Some(rank) = car.finish_rank {
            if rank == 0 {
                return Err(Error::InvalidParameter(format!(
                    "race `{}`: finish_rank must be positive",
                    race.race_id
                )));
            }
            if !ranks.insert(rank) {
                return Err(Error::DuplicateFinishRank {
                    race_id: race.race_id.clone(),
                    rank,
                });
            }
        }
    }
    for (team, mut cars) in per_team {
        cars.sort_unstable();
        if cars != [1, 2] {
            return Err(Error::TeamCardinality {
                race_id: race.race_id.clone(),
                team_id: team.to_string(),
                cars: cars.len(),
            });
        }
    }
    Ok(())
}

/// Parse a season CSV, deriving missing classifications with the default
/// threshold.
pub fn parse_season<R: Read>(mut input: R) -> Result<SeasonResults> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_season_str(&text, DEFAULT_CLASSIFICATION_THRESHOLD)
}

pub fn parse_season_str(text: &str, threshold: f64) -> Result<SeasonResults> {
    let mut season_id = String::new();
    let mut declared_teams: Option<Vec<String>> = None;
    for line in text.lines() {
        let Some(directive) = line.strip_prefix('#') else {
            break;
        };
        if let Some((key, value)) = directive.split_once(':') {
            match key.trim() {
                "season" => season_id = value.trim().to_string(),
                "teams" => declared_teams = Some(value.split(',').map(|t| t.trim().to_string()).collect()),
                _ => {}
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut column = HashMap::new();
    for (idx, name) in headers.iter().enumerate() {
        let name = name.trim();
        if !COLUMNS.contains(&name) {
            return Err(Error::UnknownColumn(name.to_string()));
        }
        column.insert(name, idx);
    }
    for name in COLUMNS {
        if !column.contains_key(name) {
            return Err(Error::MissingColumn(name.to_string()));
        }
    }

    let mut order: Vec<String> = Vec::new();
    let mut races: Vec<Race> = Vec::new();
    let mut race_slot: HashMap<String, usize> = HashMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::MalformedRow { line, message };
        if record.len() != headers.len() {
            return Err(bad(format!(
                "expected {} fields, found {}",
                headers.len(),
                record.len()
            )));
        }
        let field = |name: &str| record[column[name]].trim();

        let race_id = field("race_id").to_string();
        if race_id.is_empty() {
            return Err(bad("empty race_id".into()));
        }
        let ordinal: u32 = field("ordinal")
            .parse()
            .map_err(|_| bad(format!("invalid ordinal `{}`", field("ordinal"))))?;
        let team_id = field("team_id").to_string();
        if team_id.is_empty() {
            return Err(bad("empty team_id".into()));
        }
        let car_index: u8 = match field("car_index") {
            "1" => 1,
            "2" => 2,
            other => return Err(bad(format!("car_index must be 1 or 2, found `{other}`"))),
        };
        let finish_rank = match field("finish_rank") {
            "" => None,
            s => Some(
                s.parse::<u32>()
                    .map_err(|_| bad(format!("invalid finish_rank `{s}`")))?,
            ),
        };
        let classified = match field("classified").to_ascii_lowercase().as_str() {
            "" => None,
            "true" | "1" | "yes" => Some(true),
            "false" | "0" | "no" => Some(false),
            s => return Err(bad(format!("invalid classified flag `{s}`"))),
        };
        let laps_fraction = match field("laps_fraction") {
            "" => None,
            s => {
                let v: f64 = s.parse().map_err(|_| bad(format!("invalid laps_fraction `{s}`")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(format!("laps_fraction {v} outside [0, 1]")));
                }
                Some(v)
            }
        };
        let car = CarResult {
            team_id: team_id.clone(),
            car_index,
            finish_rank,
            classified,
            laps_fraction,
        };
        let car = derive_classified(car, threshold).map_err(|_| Error::MissingClassification {
            race_id: race_id.clone(),
            team_id: team_id.clone(),
            car_index,
        })?;

        if !order.contains(&team_id) {
            order.push(team_id);
        }
        let slot = *race_slot.entry(race_id.clone()).or_insert_with(|| {
            races.push(Race {
                race_id: race_id.clone(),
                ordinal,
                results: Vec::new(),
            });
            races.len() - 1
        });
        if races[slot].ordinal != ordinal {
            return Err(Error::DuplicateOrdinal { race_id, ordinal });
        }
        races[slot].results.push(car);
    }

    let teams = match declared_teams {
        Some(teams) => teams,
        None => order,
    };
    SeasonResults::new(season_id, teams, races)
}

/// Write a season in the CSV format [`parse_season`] reads.
pub fn write_season<W: Write>(season: &SeasonResults, out: W) -> Result<()> {
    let mut out = out;
    if !season.season_id.is_empty() {
        writeln!(out, "# season: {}", season.season_id)?;
    }
    writeln!(out, "# teams: {}", season.teams.join(","))?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(COLUMNS)?;
    for race in &season.races {
        for car in &race.results {
            writer.write_record([
                race.race_id.clone(),
                race.ordinal.to_string(),
                car.team_id.clone(),
                car.car_index.to_string(),
                car.finish_rank.map(|r| r.to_string()).unwrap_or_default(),
                car.classified.map(|c| c.to_string()).unwrap_or_default(),
                car.laps_fraction.map(|f| f.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}
