//! Counts GJdM and planar maps for every cycle type of S_n and compares them.
//!
//! cargo run --example main_theorem -- 8

use planar_cumulants::gjdm::main_theorem_check;
use planar_cumulants::perm::NumericalPartition;

fn main() {
    let n_max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    println!("{:<18} {:>8} {:>8} {:>6}  ok", "cycle type", "maps", "gjdm", "denom");
    for n in (2..=n_max).step_by(2) {
        for lambda in NumericalPartition::all(n) {
            let c = main_theorem_check(&lambda.representative());
            println!("{:<18} {:>8} {:>8} {:>6}  {}", lambda.to_string(), c.maps, c.gjdm, c.denominator, c.holds());
        }
    }
}
