//! The 2014 comparison matrix at a chosen alpha, rounded for display.
//!
//!     cargo run --example comparison_matrix -- 1

use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::numfmt::Precision;
use pcm_alloc::pcm::build_pcm;

fn main() -> pcm_alloc::Result<()> {
    let alpha: f64 = std::env::args().nth(1).map_or(1.0, |a| a.parse().expect("alpha"));
    let m = build_pcm(&goals_2014(), alpha, 0.0)?;
    m.write_csv(std::io::stdout(), Precision::Decimals(2))?;
    Ok(())
}
