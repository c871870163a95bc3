//! Split a prize pot and find the alpha at which a team is indifferent
//! between its current share and the model share.

use pcm_alloc::alloc::{allocate, indifferent_alpha, AlphaGrid};
use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::weights::{weights_at, WeightingMethod};

fn main() -> pcm_alloc::Result<()> {
    let goals = goals_2014();
    let rgm = WeightingMethod::row_geometric_mean();
    let report = allocate(&weights_at(&goals, &rgm, 1.0, 0.0)?, 350.0, 0.01)?;
    for a in &report.allocations {
        println!("{:<12} {:>7.2}  ({:.2}%)", a.team, a.amount, 100.0 * a.share);
    }

    let grid = AlphaGrid::standard().points();
    for (team, share) in [
        ("Mercedes", 0.2),
        ("Red Bull", 0.12),
        ("Red Bull", 0.2),
        ("Caterham", 1.0 / 11.0),
    ] {
        let r = indifferent_alpha(&goals, team, share, &rgm, &grid, 1e-9, 0.0)?;
        let roots: Vec<String> = r.roots.iter().map(|x| format!("{:.4}", x.alpha)).collect();
        let shown = if r.no_solution {
            "no solution".to_string()
        } else {
            roots.join(", ")
        };
        println!("{team} at share {share:.4}: {shown}");
    }
    Ok(())
}
