//! The tree interpolation formula on random polynomials and on the
//! three-point monomial basis.

use planar_cumulants::bkar::{bkar_check, enumerate_trees};
use planar_cumulants::partition::SetPartition;
use planar_cumulants::poly::Polynomial;
use planar_cumulants::report::random_bkar_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> planar_cumulants::Result<()> {
    let theta = SetPartition::finest(3);
    println!("trees over {theta}: {}", enumerate_trees(&theta).len());
    for f in ["1", "1 * q[1,2]", "1 * q[1,2] * q[2,3]", "1 * q[1,2] * q[1,3] * q[2,3]", "1 * q[1,2]^3"] {
        let c = bkar_check(&theta, &Polynomial::parse(f)?)?;
        println!("{f:<30} moebius {:<6} trees {:<6} product {:<6}", c.lhs, c.rhs, c.closed_form);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let (theta, f) = random_bkar_instance(5, &mut rng);
        let c = bkar_check(&theta, &f)?;
        println!("{theta}  {f}\n    = {}  holds: {}", c.lhs, c.holds());
    }
    Ok(())
}
