//! Labeled mobiles: colored trees whose colors are traded for integer flags on
//! edges and integer labels on vertices.

use serde::Serialize;

use super::tree::{color_tree, Color, ColoredTree};
use super::{antiderivative, normalize_min_zero};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagDirection {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Flag {
    pub direction: FlagDirection,
    pub label: i64,
}

/// A white/black tree with flags on the edges of former green and blue
/// vertices and labels on former red vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobile {
    tree: ColoredTree,
}

/// Builds the mobile of `(θ, σ, g)` using the antiderivative `h` of `g`
/// normalized to `min h = 0`. An edge `i` at a green vertex carries a positive
/// flag labeled `h(θ(i))`, an edge at a blue vertex a negative flag labeled
/// `h(i)`, and a red vertex is labeled `h(θ(i))` for any incident edge `i`.
pub fn mobile(theta: &Permutation, sigma: &Permutation, g: &[i8]) -> Result<Mobile> {
    let mut tree = color_tree(theta, sigma, g)?;
    let h = normalize_min_zero(&antiderivative(theta, sigma, g)?);
    let colors: Vec<Color> = tree.vertices().iter().map(|v| v.color).collect();
    let mut red_labels = Vec::new();
    for edge in tree.edges_mut() {
        let i = edge.label;
        match colors[edge.other] {
            Color::Green => {
                edge.flag = Some(Flag { direction: FlagDirection::Positive, label: h[theta.image(i)] })
            }
            Color::Blue => edge.flag = Some(Flag { direction: FlagDirection::Negative, label: h[i] }),
            Color::Red => red_labels.push((edge.other, h[theta.image(i)])),
            _ => {}
        }
    }
    let vertices = tree.vertices_mut();
    for (v, label) in red_labels {
        vertices[v].label = Some(label);
    }
    for v in vertices.iter_mut() {
        if v.color != Color::White {
            v.color = Color::Black;
        }
    }
    Ok(Mobile { tree })
}

impl Mobile {
    pub fn tree(&self) -> &ColoredTree {
        &self.tree
    }

    /// Recovers the colored tree: labeled black vertices become red, unlabeled
    /// ones green or blue according to degree one or two.
    pub fn to_colored_tree(&self) -> Result<ColoredTree> {
        let mut tree = self.tree.clone();
        let degrees: Vec<usize> = (0..tree.vertices().len()).map(|v| tree.degree(v)).collect();
        for (v, vx) in tree.vertices_mut().iter_mut().enumerate() {
            if vx.color == Color::White {
                continue;
            }
            vx.color = match (vx.label.take(), degrees[v]) {
                (Some(_), _) => Color::Red,
                (None, 1) => Color::Green,
                (None, 2) => Color::Blue,
                (None, d) => return Err(Error::Invalid(format!("unlabeled black vertex of degree {d}"))),
            };
        }
        for e in tree.edges_mut() {
            e.flag = None;
        }
        Ok(tree)
    }

    /// All flag and vertex labels.
    pub fn labels(&self) -> Vec<i64> {
        let flags = self.tree.edges().iter().filter_map(|e| e.flag.map(|f| f.label));
        flags.chain(self.tree.vertices().iter().filter_map(|v| v.label)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.tree.to_json()
    }

    pub fn to_dot(&self) -> String {
        self.tree.to_dot()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gjdm::enumerate_gjdm;
    use crate::perm::NumericalPartition;

    #[test]
    fn figure_mobile() {
        let theta = Permutation::parse_cycles("(1,2,3,4)(5,7,8)(9,10)", 10).unwrap();
        let sigma = Permutation::parse_cycles("(4,8,10)(5,6)", 10).unwrap();
        let g = [1, -1, -1, 1, 0, 0, -1, 1, -1, 1];
        let m = mobile(&theta, &sigma, &g).unwrap();
        let t = m.tree();
        assert_eq!(t.count_color(Color::White), 4);
        assert_eq!(t.count_color(Color::Black), 7);
        let flags: Vec<(usize, FlagDirection, i64)> = t
            .edges()
            .iter()
            .filter_map(|e| e.flag.map(|f| (e.label + 1, f.direction, f.label)))
            .collect();
        use FlagDirection::*;
        assert_eq!(
            flags,
            vec![(2, Positive, 1), (3, Positive, 0), (5, Negative, 1), (6, Negative, 1), (7, Positive, 0), (9, Positive, 0)]
        );
        let mut red: Vec<i64> = t.vertices().iter().filter_map(|v| v.label).collect();
        red.sort();
        assert_eq!(red, vec![1, 2]);
        assert_eq!(m.labels().into_iter().min(), Some(0));
        assert_eq!(m.to_colored_tree().unwrap(), color_tree(&theta, &sigma, &g).unwrap());
    }

    #[test]
    fn round_trip_n6() {
        for lambda in NumericalPartition::all(6) {
            let theta = lambda.representative();
            for (sigma, g) in enumerate_gjdm(&theta) {
                let m = mobile(&theta, &sigma, &g).unwrap();
                assert_eq!(m.to_colored_tree().unwrap().decode().unwrap(), (theta.clone(), sigma, g));
                assert_eq!(m.labels().into_iter().min(), Some(0));
            }
        }
    }
}
