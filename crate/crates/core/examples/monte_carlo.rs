//! Monte-Carlo cumulants of traces of the tridiagonal model against the exact
//! polynomials.
//!
//! cargo run --release --example monte_carlo -- 200000

use planar_cumulants::gue::mc_cumulant;
use planar_cumulants::perm::NumericalPartition;

fn main() -> planar_cumulants::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    for (text, levels) in [("2", 10), ("4", 30), ("2,2", 20), ("3,1", 10), ("2,2,2", 6)] {
        let e = mc_cumulant(&NumericalPartition::parse(text)?, levels, samples, 1)?;
        println!(
            "{text:<6} N={levels:<3} estimate {:>12.3} +- {:<9.3} exact {:>7}  z {:+.2}",
            e.estimate,
            e.stderr,
            e.exact,
            e.z_score()
        );
    }
    Ok(())
}
