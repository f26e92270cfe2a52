#![allow(dead_code)]

use logtorsor::graphs::DualGraph;
use proptest::prelude::*;

/// Connected multigraph on `1..=max_v` vertices with at most `max_e` edges:
/// a random spanning tree plus extra edges, loops included.
pub fn connected_multigraph(max_v: usize, max_e: usize) -> impl Strategy<Value = DualGraph> {
    (1..=max_v)
        .prop_flat_map(move |n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
            let extra = prop::collection::vec((0..n, 0..n), 0..=(max_e + 1 - n));
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i + 1))
                .collect();
            edges.extend(extra);
            DualGraph::from_indices(n, &edges).expect("valid indices")
        })
}

/// Edge subsets forming a simple cycle: every touched vertex has degree 2
/// (a loop counts twice) and the touched vertices are connected.
pub fn brute_force_cycles(g: &DualGraph) -> Vec<Vec<usize>> {
    let m = g.edge_count();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
        let mut deg = vec![0; n];
        for &e in &chosen {
            let (a, b) = g.edges()[e];
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        let touched: Vec<usize> = (0..n).filter(|&v| deg[v] > 0).collect();
        let mut uf = UnionFind::new(n);
        for &e in &chosen {
            let (a, b) = g.edges()[e];
            uf.union(a, b);
        }
        let root = uf.find(touched[0]);
        if touched.iter().all(|&v| uf.find(v) == root) {
            out.push(chosen);
        }
    }
    out.sort();
    out
}

/// Number of spanning trees, by testing every `(n-1)`-subset of non-loop
/// edges for acyclicity.
pub fn count_spanning_trees(g: &DualGraph) -> u64 {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|(a, b)| a != b).collect();
    let m = edges.len();
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut uf = UnionFind::new(n);
        if (0..m)
            .filter(|e| mask >> e & 1 == 1)
            .all(|e| uf.union(edges[e].0, edges[e].1))
        {
            count += 1;
        }
    }
    count
}

pub struct UnionFind(Vec<usize>);

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    /// False when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}
