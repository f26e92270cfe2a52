//! Dual graphs of nodal special fibers.
//!
//! Graphs are multigraphs: loops and parallel edges are allowed and every
//! edge stands for one node of the fiber. Cycles are identified by their
//! edge sets, so a loop is a cycle of length one and two parallel edges form
//! a cycle of length two.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fiber::{component_group, FiniteAbelianGroup, IntersectionData};
use crate::linalg::IntMatrix;

/// Default bound on the number of simple cycles enumerated.
pub const DEFAULT_CYCLE_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

/// A simple cycle, stored as the sorted list of its edge indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    edges: Vec<usize>,
}

impl Cycle {
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of edges shared with another cycle.
    pub fn common_edges(&self, other: &Cycle) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

impl DualGraph {
    /// Builds a graph from vertex labels and edges given by endpoint labels.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidGraph("vertex labels must be distinct".into()));
        }
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| {
                Error::InvalidGraph(format!("edge endpoint `{name}` is not a vertex"))
            })
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DualGraph { vertices, edges })
    }

    /// Builds a graph on vertices `0..n` labelled `v0, v1, ...`.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) refers to a vertex outside 0..{n}"
            )));
        }
        Ok(DualGraph {
            vertices: (0..n).map(|i| format!("v{i}")).collect(),
            edges: edges.to_vec(),
        })
    }

    /// The polygon with `d` vertices and `d` edges.
    pub fn polygon(d: usize) -> Self {
        let edges: Vec<_> = (0..d).map(|i| (i, (i + 1) % d)).collect();
        Self::from_indices(d, &edges).expect("indices in range")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn connected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertices.len();
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() <= 1
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a != b {
                adj[a].push((e, b));
                adj[b].push((e, a));
            }
        }
        adj
    }
}

/// First Betti number `#E - #V + #components`.
pub fn betti1(g: &DualGraph) -> usize {
    g.edge_count() + g.connected_components() - g.vertex_count()
}

/// All simple cycles, each reported once, ordered lexicographically by their
/// sorted edge indices.
pub fn enumerate_cycles(g: &DualGraph, cap: u64) -> Result<Vec<Cycle>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let over_cap = |count: usize| Error::CapExceeded {
        what: format!("simple cycle count (at least {count})"),
        cap,
    };

    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if a == b {
            found.insert(vec![e]);
        }
    }
    if found.len() as u64 > cap {
        return Err(over_cap(found.len()));
    }

    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut search = CycleSearch {
        adj: &adj,
        on_path: vec![false; n],
        path: Vec::new(),
        found: &mut found,
        cap,
    };
    for start in 0..n {
        search.on_path[start] = true;
        search.extend(start, start)?;
        search.on_path[start] = false;
    }
    Ok(found.into_iter().map(|edges| Cycle { edges }).collect())
}

struct CycleSearch<'a> {
    adj: &'a [Vec<(usize, usize)>],
    on_path: Vec<bool>,
    path: Vec<usize>,
    found: &'a mut BTreeSet<Vec<usize>>,
    cap: u64,
}

impl CycleSearch<'_> {
    /// Extends the current path (rooted at `start`, the smallest vertex of
    /// every cycle it will report) from vertex `at`.
    fn extend(&mut self, start: usize, at: usize) -> Result<()> {
        let adj = self.adj;
        for &(e, w) in &adj[at] {
            if w == start {
                if !self.path.is_empty() && !self.path.contains(&e) {
                    let mut cycle = self.path.clone();
                    cycle.push(e);
                    cycle.sort_unstable();
                    self.found.insert(cycle);
                    if self.found.len() as u64 > self.cap {
                        return Err(Error::CapExceeded {
                            what: format!("simple cycle count (at least {})", self.found.len()),
                            cap: self.cap,
                        });
                    }
                }
            } else if w > start && !self.on_path[w] {
                self.on_path[w] = true;
                self.path.push(e);
                self.extend(start, w)?;
                self.path.pop();
                self.on_path[w] = false;
            }
        }
        Ok(())
    }
}

/// gcd of the number of common edges over all ordered pairs of simple cycles
/// (a cycle paired with itself included); 0 when the graph has no cycle.
pub fn c2(g: &DualGraph, cap: u64) -> Result<u64> {
    let cycles = enumerate_cycles(g, cap)?;
    Ok(c2_of_cycles(&cycles))
}

fn c2_of_cycles(cycles: &[Cycle]) -> u64 {
    let mut acc = 0u64;
    for (i, c) in cycles.iter().enumerate() {
        for d in &cycles[i..] {
            acc = acc.gcd(&(c.common_edges(d) as u64));
            if acc == 1 {
                return 1;
            }
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiodoCheck {
    pub b1: usize,
    pub c2: u64,
    pub holds: bool,
    /// `(Z/r)^{b1}` when the criterion holds.
    pub predicted: Option<FiniteAbelianGroup>,
}

/// Evaluates the divisibility criterion `r | c2(g)` predicting
/// `Φ[r] ≅ (Z/r)^{b1(g)}`.
pub fn chiodo_check(g: &DualGraph, r: u64, cap: u64) -> Result<ChiodoCheck> {
    if r < 2 {
        return Err(Error::InvalidInput("r must be at least 2".into()));
    }
    let b1 = betti1(g);
    let c2 = c2(g, cap)?;
    let holds = if c2 == 0 { b1 == 0 } else { c2 % r == 0 };
    Ok(ChiodoCheck {
        b1,
        c2,
        holds,
        predicted: holds.then(|| FiniteAbelianGroup::elementary(r, b1)),
    })
}

/// Intersection data of the semistable fiber with dual graph `g`: all
/// multiplicities 1, off-diagonal entries count edges, loops ignored.
pub fn graph_to_fiber(g: &DualGraph) -> Result<IntersectionData> {
    if g.vertex_count() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.vertex_count();
    let mut m = IntMatrix::zeros(n, n);
    for &(a, b) in &g.edges {
        if a != b {
            m[(a, b)] += 1;
            m[(b, a)] += 1;
            m[(a, a)] -= 1;
            m[(b, b)] -= 1;
        }
    }
    Ok(IntersectionData::new(
        g.vertices.clone(),
        vec![BigInt::from(1); n],
        m,
    ))
}

/// Component group of the semistable fiber with dual graph `g`.
pub fn graph_component_group(g: &DualGraph) -> Result<FiniteAbelianGroup> {
    component_group(&graph_to_fiber(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> DualGraph {
        DualGraph::from_indices(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    fn tree5() -> DualGraph {
        DualGraph::from_indices(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap()
    }

    /// Squares 0-1-2-3 and 0-1-2-4 sharing the path 0-1-2.
    fn squares_sharing_two() -> DualGraph {
        DualGraph::from_indices(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti1(&DualGraph::polygon(4)), 1);
        assert_eq!(betti1(&tree5()), 0);
        assert_eq!(betti1(&theta()), 2);
    }

    #[test]
    fn cycles_of_simple_shapes() {
        assert!(enumerate_cycles(&tree5(), DEFAULT_CYCLE_CAP)
            .unwrap()
            .is_empty());
        let poly = enumerate_cycles(&DualGraph::polygon(7), DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(poly.len(), 1);
        assert_eq!(poly[0].len(), 7);
        let th = enumerate_cycles(&theta(), DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(th.len(), 3);
        assert!(th.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn loops_are_cycles() {
        let g = DualGraph::from_indices(1, &[(0, 0)]).unwrap();
        let cycles = enumerate_cycles(&g, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(c2(&g, DEFAULT_CYCLE_CAP).unwrap(), 1);
        assert_eq!(betti1(&g), 1);
    }

    #[test]
    fn deterministic_order() {
        let g = DualGraph::from_indices(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        let cycles = enumerate_cycles(&g, DEFAULT_CYCLE_CAP).unwrap();
        let keys: Vec<Vec<usize>> = cycles.iter().map(|c| c.edges().to_vec()).collect();
        assert_eq!(keys, vec![vec![0, 1, 2], vec![0, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn cap_is_enforced() {
        // theta graph with 6 parallel edges has 15 two-cycles
        let g = DualGraph::from_indices(2, &[(0, 1); 6]).unwrap();
        assert!(matches!(
            enumerate_cycles(&g, 10),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(enumerate_cycles(&g, 15).unwrap().len(), 15);
        assert!(matches!(
            chiodo_check(&g, 2, 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn c2_examples() {
        assert_eq!(c2(&DualGraph::polygon(6), DEFAULT_CYCLE_CAP).unwrap(), 6);
        assert_eq!(c2(&squares_sharing_two(), DEFAULT_CYCLE_CAP).unwrap(), 2);
        assert_eq!(c2(&theta(), DEFAULT_CYCLE_CAP).unwrap(), 1);
        assert_eq!(c2(&tree5(), DEFAULT_CYCLE_CAP).unwrap(), 0);
    }

    #[test]
    fn chiodo_examples() {
        let hex = DualGraph::polygon(6);
        let ok = chiodo_check(&hex, 3, DEFAULT_CYCLE_CAP).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.predicted, Some(FiniteAbelianGroup::elementary(3, 1)));
        let no = chiodo_check(&hex, 4, DEFAULT_CYCLE_CAP).unwrap();
        assert!(!no.holds);
        assert_eq!(no.predicted, None);
        assert!(!chiodo_check(&theta(), 3, DEFAULT_CYCLE_CAP).unwrap().holds);
        let tree = chiodo_check(&tree5(), 5, DEFAULT_CYCLE_CAP).unwrap();
        assert!(tree.holds);
        assert_eq!(tree.predicted, Some(FiniteAbelianGroup::trivial()));
    }

    #[test]
    fn fibers_from_graphs() {
        let tri = graph_to_fiber(&DualGraph::polygon(3)).unwrap();
        assert_eq!(
            tri.matrix,
            IntMatrix::from_rows(&[vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]]).unwrap()
        );
        let two = graph_to_fiber(&DualGraph::from_indices(2, &[(0, 1), (0, 1)]).unwrap()).unwrap();
        assert_eq!(
            two.matrix,
            IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]]).unwrap()
        );
        let lp = graph_to_fiber(&DualGraph::from_indices(1, &[(0, 0)]).unwrap()).unwrap();
        assert_eq!(lp.matrix, IntMatrix::from_rows(&[vec![0]]).unwrap());
        assert!(tri.is_valid() && two.is_valid() && lp.is_valid());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = DualGraph::from_indices(3, &[(0, 1)]).unwrap();
        assert_eq!(graph_to_fiber(&g), Err(Error::DisconnectedGraph));
    }

    #[test]
    fn labelled_construction() {
        let g = DualGraph::new(&["G1", "G2"], &[("G1", "G2"), ("G2", "G2")]).unwrap();
        assert_eq!(betti1(&g), 1);
        assert!(DualGraph::new(&["G1", "G1"], &[]).is_err());
        assert!(DualGraph::new(&["G1"], &[("G1", "G9")]).is_err());
    }
}
