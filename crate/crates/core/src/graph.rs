//! Finite multigraphs with a fixed orientation per edge.
//!
//! These are the combinatorial base spaces of the engine. Loops and parallel
//! edges are allowed; each edge keeps the orientation it was declared with,
//! and reversed traversal is expressed through [`Step::forward`].

use crate::error::{Error, Result};

/// A finite multigraph. Edges are stored as ordered `(source, target)` pairs
/// and addressed by their index in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// One traversal step: an edge index plus the direction it is walked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn new(edge: usize, forward: bool) -> Self {
        Step { edge, forward }
    }
}

/// A rooted spanning tree, with the tree path from the root to every vertex
/// precomputed as a sequence of steps.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: usize,
    /// Edge indices that belong to the tree.
    pub tree_edges: Vec<usize>,
    /// Edge indices outside the tree, in declaration order.
    pub cotree_edges: Vec<usize>,
    /// For each vertex, the steps of the tree path root -> vertex.
    pub path_from_root: Vec<Vec<Step>>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{num_vertices}"
                )));
            }
        }
        Ok(Graph { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of an edge in the direction of the step.
    pub fn step_endpoints(&self, s: Step) -> (usize, usize) {
        let (u, v) = self.edges[s.edge];
        if s.forward {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// minimal vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_vertices];
        let mut comps = Vec::new();
        for start in 0..self.num_vertices {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &(a, b) in &self.edges {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == u && !seen[y] {
                            seen[y] = true;
                            comp.push(y);
                            queue.push(y);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices <= 1 || self.components().len() == 1
    }

    /// BFS spanning tree rooted at `root`. Deterministic: vertices are
    /// discovered in edge-declaration order.
    pub fn spanning_tree(&self, root: usize) -> Result<SpanningTree> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut in_tree = vec![false; self.edges.len()];
        let mut visited = vec![false; self.num_vertices];
        let mut path: Vec<Vec<Step>> = vec![Vec::new(); self.num_vertices];
        visited[root] = true;
        let mut frontier = vec![root];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &u in &frontier {
                for (e, &(a, b)) in self.edges.iter().enumerate() {
                    if a == u && !visited[b] {
                        visited[b] = true;
                        in_tree[e] = true;
                        let mut p = path[u].clone();
                        p.push(Step::new(e, true));
                        path[b] = p;
                        next.push(b);
                    } else if b == u && !visited[a] {
                        visited[a] = true;
                        in_tree[e] = true;
                        let mut p = path[u].clone();
                        p.push(Step::new(e, false));
                        path[a] = p;
                        next.push(a);
                    }
                }
            }
            frontier = next;
        }
        let tree_edges = (0..self.edges.len()).filter(|&e| in_tree[e]).collect();
        let cotree_edges = (0..self.edges.len()).filter(|&e| !in_tree[e]).collect();
        Ok(SpanningTree {
            root,
            tree_edges,
            cotree_edges,
            path_from_root: path,
        })
    }

    /// The loop associated to an edge: tree path to its source, the edge,
    /// tree path from its target back to the root.
    pub fn edge_loop(&self, tree: &SpanningTree, e: usize) -> Vec<Step> {
        let (u, v) = self.edges[e];
        let mut steps = tree.path_from_root[u].clone();
        steps.push(Step::new(e, true));
        let mut back = tree.path_from_root[v].clone();
        back.reverse();
        for s in back {
            steps.push(Step::new(s.edge, !s.forward));
        }
        steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_of_two_islands() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(!g.is_connected());
    }

    #[test]
    fn spanning_tree_of_triangle() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = g.spanning_tree(0).unwrap();
        assert_eq!(t.tree_edges.len(), 2);
        assert_eq!(t.cotree_edges.len(), 1);
    }

    #[test]
    fn loop_of_cotree_edge_starts_and_ends_at_root() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = g.spanning_tree(0).unwrap();
        let steps = g.edge_loop(&t, t.cotree_edges[0]);
        let mut at = 0;
        for s in &steps {
            let (from, to) = g.step_endpoints(*s);
            assert_eq!(from, at);
            at = to;
        }
        assert_eq!(at, 0);
    }

    #[test]
    fn rejects_out_of_range_edge() {
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }
}
