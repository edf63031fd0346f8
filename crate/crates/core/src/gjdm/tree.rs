//! Edge-labeled planar trees: Shabat-Voevodsky trees of Goulden-Jackson pairs,
//! their colorings by dMotz functions, and snipping of green leaves.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::mobile::{Flag, FlagDirection};
use super::{is_dmotz, is_gj_pair, is_gj_pair_labeled};
use crate::error::{Error, Result};
use crate::partition::DisjointSets;
use crate::perm::{LabeledPermutation, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
    Blue,
    Green,
    Red,
}

impl Color {
    fn code(self) -> char {
        match self {
            Color::White => 'W',
            Color::Black => 'K',
            Color::Blue => 'B',
            Color::Green => 'G',
            Color::Red => 'R',
        }
    }

    fn name(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
            Color::Blue => "blue",
            Color::Green => "green",
            Color::Red => "red",
        }
    }

    fn from_sign(v: i8) -> Color {
        match v {
            0 => Color::Blue,
            -1 => Color::Green,
            _ => Color::Red,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub color: Color,
    pub label: Option<i64>,
}

/// Edge `label` (0-based) joining a white vertex to a non-white one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: usize,
    pub white: usize,
    pub other: usize,
    pub flag: Option<Flag>,
}

/// A planar tree stored as vertex colors, labeled edges sorted by label, and
/// the counterclockwise order of edges (as indices) around each vertex.
#[derive(Clone, Debug)]
pub struct ColoredTree {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
}

impl PartialEq for ColoredTree {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_code() == other.canonical_code()
    }
}

impl Eq for ColoredTree {}

impl ColoredTree {
    /// White vertices from the cycles of `theta_cycles`, the remaining ones from
    /// `other_cycles`; each label is one edge.
    fn from_cycles(theta_cycles: &[Vec<usize>], other_cycles: &[Vec<usize>], colors: &[Color]) -> Result<Self> {
        let mut labels: Vec<usize> = theta_cycles.iter().flatten().copied().collect();
        labels.sort_unstable();
        let index = |label: usize| labels.binary_search(&label).expect("label set is shared");
        let mut white_of = vec![0; labels.len()];
        let mut other_of = vec![0; labels.len()];
        let mut vertices = Vec::new();
        let mut rotation = Vec::new();
        for cycle in theta_cycles {
            for &i in cycle {
                white_of[index(i)] = vertices.len();
            }
            rotation.push(cycle.iter().map(|&i| index(i)).collect());
            vertices.push(Vertex { color: Color::White, label: None });
        }
        for (cycle, &color) in other_cycles.iter().zip(colors) {
            for &i in cycle {
                other_of[index(i)] = vertices.len();
            }
            rotation.push(cycle.iter().map(|&i| index(i)).collect());
            vertices.push(Vertex { color, label: None });
        }
        let edges = labels
            .iter()
            .enumerate()
            .map(|(k, &label)| Edge { label, white: white_of[k], other: other_of[k], flag: None })
            .collect();
        let tree = ColoredTree { vertices, edges, rotation };
        if !tree.is_tree() {
            return Err(Error::NotATree("the cycles do not span a tree".into()));
        }
        Ok(tree)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices around vertex `v`, counterclockwise.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn edge_labels(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.label).collect()
    }

    pub fn count_color(&self, color: Color) -> usize {
        self.vertices.iter().filter(|v| v.color == color).count()
    }

    pub(crate) fn vertices_mut(&mut self) -> &mut [Vertex] {
        &mut self.vertices
    }

    pub(crate) fn edges_mut(&mut self) -> &mut [Edge] {
        &mut self.edges
    }

    fn is_tree(&self) -> bool {
        if self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut ds = DisjointSets::new(self.vertices.len());
        self.edges.iter().all(|e| ds.union(e.white, e.other))
    }

    fn next_around(&self, v: usize, edge: usize) -> usize {
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&e| e == edge).expect("edge is incident");
        rot[(pos + 1) % rot.len()]
    }

    /// `(θ_𝔗, σ_𝔗)`: the successor of each edge label counterclockwise around
    /// its white end and around its other end.
    pub fn read_off(&self) -> (LabeledPermutation, LabeledPermutation) {
        let read = |white: bool| {
            let pairs: Vec<(usize, usize)> = self
                .edges
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let v = if white { e.white } else { e.other };
                    (e.label, self.edges[self.next_around(v, k)].label)
                })
                .collect();
            LabeledPermutation::from_pairs(&pairs).expect("rotations are cyclic orders")
        };
        (read(true), read(false))
    }

    fn is_standard(&self) -> bool {
        self.edges.iter().enumerate().all(|(k, e)| e.label == k)
    }

    /// `(θ, σ)` as permutations of `0..n`; fails unless the edge labels are `0..n`.
    pub fn permutations(&self) -> Result<(Permutation, Permutation)> {
        if !self.is_standard() {
            return Err(Error::Invalid("edge labels are not 1..n".into()));
        }
        let (t, s) = self.read_off();
        Ok((t.permutation().clone(), s.permutation().clone()))
    }

    /// The sign function read from the colors: blue 0, green −1, red +1.
    pub fn signs(&self) -> Result<Vec<i8>> {
        self.edges
            .iter()
            .map(|e| match self.vertices[e.other].color {
                Color::Blue => Ok(0),
                Color::Green => Ok(-1),
                Color::Red => Ok(1),
                c => Err(Error::Invalid(format!("edge {} ends at a {} vertex", e.label + 1, c.name()))),
            })
            .collect()
    }

    /// `(θ, σ, g)` from a four-colored tree on labels `0..n`.
    pub fn decode(&self) -> Result<(Permutation, Permutation, Vec<i8>)> {
        let (theta, sigma) = self.permutations()?;
        Ok((theta, sigma, self.signs()?))
    }

    /// The vertex coloring rules: every edge has exactly one white end, green
    /// vertices are leaves, blue vertices have degree two, and each white
    /// vertex has as many red as green neighbors.
    pub fn satisfies_coloring_rules(&self) -> bool {
        let colors_ok = self.edges.iter().all(|e| {
            self.vertices[e.white].color == Color::White
                && matches!(self.vertices[e.other].color, Color::Blue | Color::Green | Color::Red)
        });
        colors_ok
            && self.vertices.iter().enumerate().all(|(v, vx)| match vx.color {
                Color::Green => self.degree(v) == 1,
                Color::Blue => self.degree(v) == 2,
                Color::White => {
                    let count = |c: Color| {
                        self.rotation[v].iter().filter(|&&e| self.vertices[self.edges[e].other].color == c).count()
                    };
                    count(Color::Red) == count(Color::Green)
                }
                _ => true,
            })
    }

    /// A string determining the tree up to renaming of vertices: a depth-first
    /// walk from the white end of the largest edge label, following the
    /// counterclockwise orders and recording colors, labels and flags.
    pub fn canonical_code(&self) -> String {
        let mut out = String::new();
        let Some(root_edge) = self.edges.iter().enumerate().max_by_key(|(_, e)| e.label).map(|(k, _)| k) else {
            return "W[]".into();
        };
        let root = self.edges[root_edge].white;
        self.encode(root, root_edge, true, &mut out);
        out
    }

    fn encode(&self, v: usize, entry: usize, is_root: bool, out: &mut String) {
        let vx = &self.vertices[v];
        out.push(vx.color.code());
        if let Some(l) = vx.label {
            let _ = write!(out, "{l}");
        }
        out.push('[');
        let rot = &self.rotation[v];
        let start = rot.iter().position(|&e| e == entry).expect("edge is incident");
        let skip = usize::from(!is_root);
        for step in skip..rot.len() {
            let e = rot[(start + step) % rot.len()];
            let edge = &self.edges[e];
            let _ = write!(out, "{}", edge.label + 1);
            if let Some(flag) = &edge.flag {
                let _ = write!(out, "{}{}", flag.direction.sign(), flag.label);
            }
            let next = if edge.white == v { edge.other } else { edge.white };
            self.encode(next, e, false, out);
        }
        out.push(']');
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| json!({"id": id, "color": v.color, "label": v.label}))
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let mut obj = json!({"label": e.label + 1, "ends": [e.white, e.other]});
                if let Some(flag) = &e.flag {
                    obj["flag"] = json!({"direction": flag.direction, "label": flag.label});
                }
                obj
            })
            .collect();
        let cyclic: serde_json::Map<String, Value> = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, rot)| (v.to_string(), json!(rot.iter().map(|&e| self.edges[e].label + 1).collect::<Vec<_>>())))
            .collect();
        json!({"vertices": vertices, "edges": edges, "cyclic_order": cyclic})
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n  node [style=filled, shape=circle, label=\"\"];\n");
        for (id, v) in self.vertices.iter().enumerate() {
            let font = if matches!(v.color, Color::Black | Color::Blue) { ", fontcolor=white" } else { "" };
            let label = v.label.map(|l| format!(", label=\"{l}\"")).unwrap_or_default();
            let _ = writeln!(out, "  v{id} [fillcolor={}{font}{label}];", v.color.name());
        }
        for e in &self.edges {
            let flag = e
                .flag
                .as_ref()
                .map(|f| format!(" flag {}{}", f.direction.sign(), f.label))
                .unwrap_or_default();
            let _ = writeln!(out, "  v{} -- v{} [label=\"{}{flag}\"];", e.white, e.other, e.label + 1);
        }
        out.push_str("}\n");
        out
    }
}

/// The Shabat-Voevodsky tree of a Goulden-Jackson pair.
pub fn sv_tree(theta: &Permutation, sigma: &Permutation) -> Result<ColoredTree> {
    if !is_gj_pair(theta, sigma) {
        return Err(Error::NotGouldenJackson(format!("({theta}, {sigma})")));
    }
    let others = sigma.orbits();
    ColoredTree::from_cycles(&theta.orbits(), &others, &vec![Color::Black; others.len()])
}

/// The Shabat-Voevodsky tree of a Goulden-Jackson pair on an arbitrary label set.
pub fn sv_tree_labeled(theta: &LabeledPermutation, sigma: &LabeledPermutation) -> Result<ColoredTree> {
    if !is_gj_pair_labeled(theta, sigma) {
        return Err(Error::NotGouldenJackson(format!("({theta}, {sigma})")));
    }
    let others = sigma.orbits();
    ColoredTree::from_cycles(&theta.orbits(), &others, &vec![Color::Black; others.len()])
}

/// The Shabat-Voevodsky tree with each σ-orbit painted blue, green or red
/// according to the value 0, −1 or +1 of `g` on it.
pub fn color_tree(theta: &Permutation, sigma: &Permutation, g: &[i8]) -> Result<ColoredTree> {
    if !is_gj_pair(theta, sigma) {
        return Err(Error::NotGouldenJackson(format!("({theta}, {sigma})")));
    }
    if !is_dmotz(theta, sigma, g, false) {
        return Err(Error::Constraint(format!("g is not a dMotz function for ({theta}, {sigma})")));
    }
    let others = sigma.orbits();
    let colors: Vec<Color> = others.iter().map(|c| Color::from_sign(g[c[0]])).collect();
    ColoredTree::from_cycles(&theta.orbits(), &others, &colors)
}

/// A tree with its green leaves removed and red vertices blackened, together
/// with what is needed to put the leaves back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snipped {
    pub tree: ColoredTree,
    pub theta: Permutation,
    pub removed: BTreeSet<usize>,
}

/// Snips the green leaves of a colored tree whose white vertices all have even
/// degree. The result is the Shabat-Voevodsky tree of `(θ∖X, σ∖X)` on the
/// labels outside `X = {g = −1}`.
pub fn snip(tree: &ColoredTree) -> Result<Snipped> {
    let (theta, sigma, g) = tree.decode()?;
    let odd: Vec<usize> = theta.orbits().iter().map(Vec::len).filter(|k| k % 2 == 1).collect();
    if !odd.is_empty() {
        return Err(Error::NotEulerian(odd));
    }
    if g.contains(&0) {
        return Err(Error::Invalid("tree has a blue vertex".into()));
    }
    let removed: BTreeSet<usize> = (0..g.len()).filter(|&i| g[i] == -1).collect();
    let theta_rest = theta.strike(&removed);
    let sigma_rest = sigma.strike(&removed);
    let snipped = sv_tree_labeled(&theta_rest, &sigma_rest)?;
    Ok(Snipped { tree: snipped, theta, removed })
}

/// Reattaches the green leaves removed by [`snip`].
pub fn unsnip(snipped: &Snipped) -> Result<ColoredTree> {
    let (theta_rest, sigma_rest) = snipped.tree.read_off();
    if theta_rest != snipped.theta.strike(&snipped.removed) {
        return Err(Error::Constraint("snipped tree does not match the stored θ".into()));
    }
    let n = snipped.theta.n();
    let mut images: Vec<usize> = (0..n).collect();
    let mut g = vec![-1i8; n];
    for &label in sigma_rest.labels() {
        images[label] = sigma_rest.image(label).expect("label is present");
        g[label] = 1;
    }
    let sigma = Permutation::from_images(images)?;
    color_tree(&snipped.theta, &sigma, &g)
}

/// Number of `(σ, g)` with `{g = −1} = X`, by enumeration.
pub fn count_with_green_set(theta: &Permutation, x: &BTreeSet<usize>) -> usize {
    super::enumerate_gjdm(theta)
        .into_iter()
        .filter(|(_, g)| (0..g.len()).all(|i| (g[i] == -1) == x.contains(&i)))
        .count()
}

impl FlagDirection {
    fn sign(self) -> char {
        match self {
            FlagDirection::Positive => '+',
            FlagDirection::Negative => '-',
        }
    }
}
