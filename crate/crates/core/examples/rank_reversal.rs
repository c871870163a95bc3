//! Rank reversals of the eigenvector method as alpha grows. The row
//! geometric mean never reorders teams.

use pcm_alloc::alloc::AlphaGrid;
use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::metrics::{scale_invariance_scan, DEFAULT_REFINE_TOL};
use pcm_alloc::weights::WeightingMethod;

fn main() -> pcm_alloc::Result<()> {
    let goals = goals_2014();
    let grid = AlphaGrid::new(0.02, 3.0, 0.02)?.points();
    for method in [WeightingMethod::eigenvector(), WeightingMethod::row_geometric_mean()] {
        let report = scale_invariance_scan(&goals, &method, &grid, DEFAULT_REFINE_TOL, 0.0)?;
        println!("{}: {} reversal(s)", report.method, report.crossings.len());
        for c in &report.crossings {
            println!(
                "  {} overtakes {} for alpha in [{:.6}, {:.6}]",
                c.overtaker, c.overtaken, c.alpha_low, c.alpha_high
            );
        }
    }
    Ok(())
}
