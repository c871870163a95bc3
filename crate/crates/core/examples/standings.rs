//! Constructors' standings of one season under the historical points tables.
//!
//!     cargo run --example standings [season.csv]

use pcm_alloc::ingest::parse_season;
use pcm_alloc::scoring::{builtin_systems, score_season};

const SAMPLE: &str = "\
race_id,ordinal,team_id,car_index,finish_rank,classified,laps_fraction
r1,1,Lotus,1,1,true,
r1,1,Sauber,1,2,true,
r1,1,Lotus,2,3,true,
r1,1,Sauber,2,4,true,
r1,1,Marussia,1,7,true,
r1,1,Marussia,2,,false,
r1,1,Caterham,1,8,true,
r1,1,Caterham,2,,false,
";

fn main() -> pcm_alloc::Result<()> {
    let season = match std::env::args().nth(1) {
        Some(path) => parse_season(std::fs::File::open(path)?)?,
        None => parse_season(SAMPLE.as_bytes())?,
    };
    for system in builtin_systems() {
        println!("{}", system.name);
        for e in score_season(&season, &system).entries {
            let tie = if e.tie { "  (tied)" } else { "" };
            println!("  {:>2}. {:<12} {:>4}{tie}", e.rank, e.team, e.points);
        }
    }
    Ok(())
}
