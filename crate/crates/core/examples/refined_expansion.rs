//! Sums the Motzkin-indexed expansion of a GUE cumulant exactly and compares
//! it with the cumulant polynomial.

use planar_cumulants::gue::refined_expansion_check;
use planar_cumulants::perm::NumericalPartition;

fn main() -> planar_cumulants::Result<()> {
    for (text, levels) in [("2", 1), ("2", 3), ("4", 2), ("4", 3), ("2,2", 2), ("2,2", 3)] {
        let lambda = NumericalPartition::parse(text)?;
        let r = refined_expansion_check(&lambda, levels)?;
        println!(
            "{:<6} N={levels}  exact {:<5} tree sum {:<5} quadruple sum {:<5} culled {} (nonzero {})",
            lambda.to_string(),
            r.exact, r.tree_sum, r.quadruple_sum, r.culled, r.culled_nonzero
        );
    }
    Ok(())
}
