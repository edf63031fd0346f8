//! Joint cumulants of Gaussian polynomials against their tree expansion.

use planar_cumulants::gauss::CovarianceSpec;
use planar_cumulants::gue::{maintool_check, random_maintool_instance};
use planar_cumulants::partition::SetPartition;
use planar_cumulants::poly::{ratio, rational, Polynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> planar_cumulants::Result<()> {
    let theta = SetPartition::finest(2);
    let polys = [Polynomial::parse("1 * z[1,0]^2")?, Polynomial::parse("1 * z[2,0]^2")?];
    let cov = CovarianceSpec::new(vec![vec![rational(1), ratio(1, 2)], vec![ratio(1, 2), rational(1)]], 1)?;
    let c = maintool_check(&theta, &polys, &cov)?;
    println!("cov(z1^2, z2^2) at correlation 1/2: {} = {}", c.lhs, c.rhs);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let (theta, polys, cov) = random_maintool_instance(&mut rng);
        let c = maintool_check(&theta, &polys, &cov)?;
        println!("{theta}: cumulant {}  tree sum {}  holds {}", c.lhs, c.rhs, c.holds());
    }
    Ok(())
}
