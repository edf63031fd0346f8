//! Exact GUE cumulants of traces as polynomials in N, with the leading
//! coefficient compared to the number of planar maps.

use planar_cumulants::maps::{cumulant_polynomial, enumerate_maps, thooft_leading};
use planar_cumulants::perm::NumericalPartition;

fn main() -> planar_cumulants::Result<()> {
    for text in ["2", "4", "2,2", "3,1", "6", "4,2", "3,3", "2,2,2", "2,1,1"] {
        let lambda = NumericalPartition::parse(text)?;
        let p = cumulant_polynomial(&lambda)?;
        let maps = enumerate_maps(&lambda.representative()).len();
        println!("{:<10} coeffs {:?}  leading {}  maps {maps}", lambda.to_string(), p.coeffs(), thooft_leading(&lambda)?);
    }
    Ok(())
}
