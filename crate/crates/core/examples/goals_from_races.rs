//! Aggregate race results into the goals matrix.
//!
//!     cargo run --example goals_from_races [season.csv]

use pcm_alloc::goals::{goals_matrix, write_goals};
use pcm_alloc::ingest::parse_season;

const SAMPLE: &str = "\
# season: sample
# teams: Ferrari,McLaren,Williams
race_id,ordinal,team_id,car_index,finish_rank,classified,laps_fraction
monza,1,Ferrari,1,1,true,
monza,1,McLaren,1,2,true,
monza,1,Williams,1,3,true,
monza,1,Ferrari,2,4,true,
monza,1,McLaren,2,,,0.4
monza,1,Williams,2,5,,0.93
spa,2,McLaren,1,1,true,
spa,2,McLaren,2,2,true,
spa,2,Williams,1,3,true,
spa,2,Ferrari,1,4,true,
spa,2,Ferrari,2,,false,
spa,2,Williams,2,,false,
";

fn main() -> pcm_alloc::Result<()> {
    let season = match std::env::args().nth(1) {
        Some(path) => parse_season(std::fs::File::open(path)?)?,
        None => parse_season(SAMPLE.as_bytes())?,
    };
    println!("{} races, teams {:?}\n", season.races().len(), season.teams());
    let goals = goals_matrix(&season);
    write_goals(&goals, std::io::stdout())?;
    Ok(())
}
