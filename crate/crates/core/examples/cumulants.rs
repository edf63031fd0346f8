//! Joint cumulants from moments through the partition lattice.

use planar_cumulants::partition::{cumulant_terms, joint_cumulant, moebius, SetPartition};
use planar_cumulants::poly::rational;

fn main() -> planar_cumulants::Result<()> {
    let bottom = SetPartition::finest(4);
    println!("mu(0_4, 1_4) = {}", moebius(&bottom, &SetPartition::coarsest(4))?);
    for (pi, mu) in cumulant_terms(&SetPartition::finest(3))? {
        println!("{mu:>3} * E[{pi}]");
    }
    // Four standard Gaussians in one block: moments are double factorials, the
    // fourth cumulant of a normal is 0.
    let gaussian = |pi: &SetPartition| -> planar_cumulants::Result<_> {
        Ok(pi.blocks().iter().map(|b| if b.len() % 2 == 1 { 0 } else { (1..b.len()).step_by(2).product::<usize>() as i64 }).map(rational).product())
    };
    println!("kappa_4 of a normal = {}", joint_cumulant(&bottom, gaussian)?);
    Ok(())
}
