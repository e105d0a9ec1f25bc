//! Undirected simple graphs on vertices `0..n`.
//!
//! Vertices are zero-based in the API. The text formats and the CLI present
//! them one-based.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

/// Connectivity verdict with the component partition as certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    /// Components sorted internally and ordered by their smallest vertex.
    pub components: Vec<Vec<usize>>,
}

impl UGraph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Star with center `0`.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (0, v))).expect("star edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete edges are valid");
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Inserts the edge `{u, v}`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidArgument(format!(
                "edge ({u}, {v}) out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(fresh)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|nbrs| nbrs.contains(&v))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].iter().copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    /// Breadth-first hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are labelled");
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for root in 0..self.n() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Uniformly random labelled tree on `n` vertices, decoded from a random
    /// Prüfer sequence.
    pub fn random_labeled_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        if n <= 1 {
            return Self::new(n);
        }
        let sequence: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        Self::from_prufer(n, &sequence)
    }

    /// Decodes a Prüfer sequence of length `n - 2` over `0..n`.
    pub fn from_prufer(n: usize, sequence: &[usize]) -> Self {
        assert!(n >= 2 && sequence.len() == n - 2, "Prüfer sequence must have length n - 2");
        let mut degree = vec![1usize; n];
        for &s in sequence {
            degree[s] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut g = Self::new(n);
        for &s in sequence {
            let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
            g.add_edge(leaf, s).expect("decoded edges are valid");
            degree[s] -= 1;
            if degree[s] == 1 {
                leaves.push(Reverse(s));
            }
        }
        let Reverse(a) = leaves.pop().expect("two vertices remain");
        let Reverse(b) = leaves.pop().expect("two vertices remain");
        g.add_edge(a, b).expect("decoded edges are valid");
        g
    }
}

/// Breadth-first connectivity check. A one-vertex graph is connected.
pub fn is_connected(g: &UGraph) -> Connectivity {
    let components = g.components();
    Connectivity {
        connected: components.len() <= 1,
        components,
    }
}
