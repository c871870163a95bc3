//! Bundled data for the 2014 constructors' championship.

use crate::goals::{load_goals, GoalsMatrix};

/// Goals matrix CSV of the 2014 season, teams in official championship order.
pub const GOALS_2014_CSV: &str = include_str!("../data/goals_2014.csv");

pub fn goals_2014() -> GoalsMatrix {
    load_goals(GOALS_2014_CSV.as_bytes()).expect("bundled goals matrix is valid")
}
