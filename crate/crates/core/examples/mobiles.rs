//! Colored tree and labeled mobile of a GJdM triple, as JSON and Graphviz.

use planar_cumulants::gjdm::{antiderivative, color_tree, mobile, normalize_min_zero};
use planar_cumulants::perm::Permutation;

fn main() -> planar_cumulants::Result<()> {
    let theta = Permutation::parse_cycles("(1,2,3,4)(5,7,8)(9,10)", 10)?;
    let sigma = Permutation::parse_cycles("(4,8,10)(5,6)", 10)?;
    let g = [1, -1, -1, 1, 0, 0, -1, 1, -1, 1];
    let h = normalize_min_zero(&antiderivative(&theta, &sigma, &g)?);
    println!("h = {h:?}");
    let tree = color_tree(&theta, &sigma, &g)?;
    println!("{}", serde_json::to_string_pretty(&tree.to_json()).expect("json"));
    let m = mobile(&theta, &sigma, &g)?;
    println!("{}", m.to_dot());
    println!("decodes back: {}", m.to_colored_tree()? == tree);
    Ok(())
}
