//! Eigenvector and row geometric mean shares side by side.

use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::weights::{weights_at, WeightingMethod};

fn main() -> pcm_alloc::Result<()> {
    let goals = goals_2014();
    for alpha in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let em = weights_at(&goals, &WeightingMethod::eigenvector(), alpha, 0.0)?;
        let rgm = weights_at(&goals, &WeightingMethod::row_geometric_mean(), alpha, 0.0)?;
        println!("alpha = {alpha}  (lambda_max {:.4})", em.lambda_max.unwrap_or(f64::NAN));
        for (k, team) in goals.teams().iter().enumerate() {
            println!("  {team:<12} EM {:>7.4}  RGM {:>7.4}", em.weights[k], rgm.weights[k]);
        }
    }
    Ok(())
}
