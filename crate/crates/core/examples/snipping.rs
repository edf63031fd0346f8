//! Removes the green leaves of a colored tree and puts them back.

use planar_cumulants::gjdm::{color_tree, count_with_green_set, enumerate_gjdm, snip, unsnip};
use planar_cumulants::perm::Permutation;

fn main() -> planar_cumulants::Result<()> {
    let theta = Permutation::parse_cycles("(1,2)(3,4,5,6,7,8)(9,10,11,12)", 12)?;
    let found = enumerate_gjdm(&theta)
        .into_iter()
        .find(|(s, g)| {
            s.to_cycle_string() == "(2,8,12)"
                && g.iter().enumerate().filter(|(_, &x)| x == -1).map(|(i, _)| i + 1).eq([1, 3, 4, 6, 9, 10])
        })
        .expect("the triple exists");
    let (sigma, g) = found;
    let tree = color_tree(&theta, &sigma, &g)?;
    let snipped = snip(&tree)?;
    let (t2, s2) = snipped.tree.read_off();
    println!("snipped tree: theta' = {t2}, sigma' = {s2}");
    println!("restored: {}", unsnip(&snipped)? == tree);
    println!("triples with this green set: {}", count_with_green_set(&theta, &snipped.removed));
    Ok(())
}
