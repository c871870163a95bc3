//! Zero goals make a ratio undefined; a smoothing constant repairs it.

use pcm_alloc::load_goals;
use pcm_alloc::pcm::build_pcm;
use pcm_alloc::weights::WeightingMethod;

fn main() -> pcm_alloc::Result<()> {
    let goals = load_goals(",A,B,C\nA,,4,2\nB,0,,1\nC,0,3,\n".as_bytes())?;
    if let Err(e) = build_pcm(&goals, 1.0, 0.0) {
        println!("epsilon = 0: {e}");
    }
    for eps in [0.1, 0.5, 1.0] {
        let m = build_pcm(&goals, 1.0, eps)?;
        let w = WeightingMethod::row_geometric_mean().weights(&m)?;
        println!(
            "epsilon = {eps}: a(A,B) = {:.3}, weights {:.4?}",
            m.get(0, 1),
            w.weights
        );
    }
    Ok(())
}
