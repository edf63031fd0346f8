//! Brute-force planar map counts next to Tutte's rooted and labeled formulas.

use planar_cumulants::maps::{enumerate_maps, rooted_from_labeled, tutte};
use planar_cumulants::perm::NumericalPartition;
use planar_cumulants::poly::rational;

fn main() -> planar_cumulants::Result<()> {
    for n in (2..=8).step_by(2) {
        for lambda in NumericalPartition::all(n).into_iter().filter(NumericalPartition::is_eulerian) {
            let theta = lambda.representative();
            let brute = rational(enumerate_maps(&theta).len() as i64);
            let closed = tutte(&lambda)?;
            println!(
                "{:<10} labeled {brute:>6} (formula {:>6})  rooted {:>4} (formula {:>4})",
                lambda.to_string(),
                closed.labeled,
                rooted_from_labeled(&lambda, &brute),
                closed.rooted
            );
        }
    }
    Ok(())
}
