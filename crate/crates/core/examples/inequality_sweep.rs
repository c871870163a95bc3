//! HHI* of the allocation across alpha, plus teams whose share peaks inside
//! the range.

use pcm_alloc::alloc::{sweep, AlphaGrid};
use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::metrics::DEFAULT_REFINE_TOL;
use pcm_alloc::weights::WeightingMethod;

fn main() -> pcm_alloc::Result<()> {
    let methods = [WeightingMethod::eigenvector(), WeightingMethod::row_geometric_mean()];
    let result = sweep(
        &goals_2014(),
        &methods,
        &AlphaGrid::standard().points(),
        0.0,
        DEFAULT_REFINE_TOL,
    )?;
    println!("alpha    EM      RGM");
    let (em, rgm) = (&result.methods[0], &result.methods[1]);
    for (e, r) in em.records.iter().zip(&rgm.records).step_by(10) {
        println!("{:<5} {:>7.4} {:>7.4}", e.alpha, e.hhi_star, r.hhi_star);
    }
    for s in &result.methods {
        for m in &s.interior_maxima {
            println!(
                "{}: {} peaks at alpha {} with {:.4}",
                s.method, m.team, m.alpha, m.share
            );
        }
    }
    Ok(())
}
