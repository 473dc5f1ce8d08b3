//! Rooted trees and starlike construction.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({0}, {1}) closes a cycle")]
    Cycle(usize, usize),
    #[error("edges leave the graph disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("malformed edge list: {0}")]
    Parse(String),
}

/// A tree with a designated root; children lists are sorted by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

impl RootedTree {
    /// Builds a rooted tree from an undirected edge list.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let out_of_range = |vertex| TreeError::VertexOutOfRange { vertex, n };
        if root >= n {
            return Err(out_of_range(root));
        }
        let mut sets = DisjointSets((0..n).collect());
        let mut adjacency = vec![Vec::new(); n];
        let mut components = n;
        for &(u, v) in edges {
            if u >= n {
                return Err(out_of_range(u));
            }
            if v >= n {
                return Err(out_of_range(v));
            }
            let (a, b) = (sets.find(u), sets.find(v));
            if a == b {
                return Err(TreeError::Cycle(u, v));
            }
            sets.0[a] = b;
            components -= 1;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        if components > 1 {
            return Err(TreeError::Disconnected { components });
        }

        let mut children = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        for list in &mut children {
            list.sort_unstable();
        }
        Ok(Self {
            root,
            children,
            parent,
        })
    }

    /// The starlike `S(y_1, ..., y_r)` rooted at its central vertex.
    ///
    /// The center is vertex 0; branch `i` takes the next `y_i` ids, starting
    /// with the vertex adjacent to the center and moving outward.
    pub fn starlike(p: &Partition) -> Self {
        let n = p.n();
        let mut children = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        let mut next = 1;
        for &len in p.parts() {
            let mut prev = 0;
            for _ in 0..len {
                children[prev].push(next);
                parent[next] = Some(prev);
                prev = next;
                next += 1;
            }
        }
        Self {
            root: 0,
            children,
            parent,
        }
    }

    /// Path on `n` vertices rooted at vertex 0.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edge_list(n, &edges, 0).expect("a path is a tree")
    }

    /// Uniformly random recursive tree: vertex `v` attaches to a random
    /// earlier vertex.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        Self::from_edge_list(n, &edges, 0).expect("recursive attachment yields a tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `(parent, child)` pairs ordered by child id.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect()
    }

    /// A copy with one new leaf (id `vertex_count()`) hung below `v`.
    pub fn with_leaf(&self, v: usize) -> Self {
        let mut grown = self.clone();
        let leaf = grown.vertex_count();
        grown.children.push(Vec::new());
        grown.parent.push(Some(v));
        grown.children[v].push(leaf);
        grown
    }

    /// Vertices ordered so that every vertex follows all of its children.
    ///
    /// Breadth-first levels from the root are emitted deepest first; within a
    /// level vertices keep their breadth-first order. The root comes last.
    pub fn bottom_up_order(&self) -> Vec<usize> {
        let mut levels: Vec<Vec<usize>> = vec![vec![self.root]];
        loop {
            let next: Vec<usize> = levels
                .last()
                .unwrap()
                .iter()
                .flat_map(|&v| self.children[v].iter().copied())
                .collect();
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels.into_iter().rev().flatten().collect()
    }

    /// Edge-list text: vertex count on the first line, then `u v` per edge.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list text format (first line `n`, then `n - 1` lines
/// `u v`, zero-based). Blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>), TreeError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| TreeError::Parse("missing vertex count".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| TreeError::Parse(format!("bad vertex count {header:?}")))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut fields = line.split_whitespace().map(str::parse::<usize>);
        match (fields.next(), fields.next(), fields.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(TreeError::Parse(format!("bad edge line {line:?}"))),
        }
    }
    if edges.len() + 1 != n {
        return Err(TreeError::Parse(format!(
            "expected {} edges for {n} vertices, found {}",
            n.saturating_sub(1),
            edges.len()
        )));
    }
    Ok((n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starlike_shapes() {
        let t = RootedTree::starlike(&"1,3,3".parse().unwrap());
        assert_eq!(t.vertex_count(), 8);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.children(0), &[1, 2, 5]);
        assert_eq!(t.children(2), &[3]);

        let star = RootedTree::starlike(&"1,1,1".parse().unwrap());
        assert_eq!(star.vertex_count(), 4);
        assert_eq!(star.degree(0), 3);

        let big = RootedTree::starlike(&"1,2,3,3,5".parse().unwrap());
        assert_eq!(big.vertex_count(), 15);
        assert_eq!(big.degree(0), 5);
        assert!((1..15).all(|v| big.degree(v) <= 2));
    }

    #[test]
    fn edge_list_validation() {
        let k2 = RootedTree::from_edge_list(2, &[(0, 1)], 0).unwrap();
        assert_eq!(k2.vertex_count(), 2);
        let p3 = RootedTree::from_edge_list(3, &[(0, 1), (0, 2)], 0).unwrap();
        assert_eq!(p3.children(0), &[1, 2]);
        assert_eq!(
            RootedTree::from_edge_list(4, &[(0, 1), (2, 3)], 0),
            Err(TreeError::Disconnected { components: 2 })
        );
        assert_eq!(
            RootedTree::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)], 0),
            Err(TreeError::Cycle(2, 0))
        );
        assert_eq!(
            RootedTree::from_edge_list(3, &[(0, 0), (1, 2)], 0),
            Err(TreeError::Cycle(0, 0))
        );
        assert!(matches!(
            RootedTree::from_edge_list(2, &[(0, 5)], 0),
            Err(TreeError::VertexOutOfRange { vertex: 5, .. })
        ));
        assert!(RootedTree::from_edge_list(2, &[(0, 1)], 2).is_err());
        assert_eq!(RootedTree::from_edge_list(0, &[], 0), Err(TreeError::Empty));
    }

    #[test]
    fn orders() {
        let k2 = RootedTree::from_edge_list(2, &[(0, 1)], 0).unwrap();
        assert_eq!(k2.bottom_up_order(), vec![1, 0]);
        let star = RootedTree::starlike(&"1,1,1".parse().unwrap());
        assert_eq!(star.bottom_up_order(), vec![1, 2, 3, 0]);
        let t = RootedTree::starlike(&"1,3,3".parse().unwrap());
        let order = t.bottom_up_order();
        assert_eq!(order.last(), Some(&0));
        assert_eq!(order.len(), 8);
    }

    #[test]
    fn rerooting_keeps_structure() {
        let t = RootedTree::from_edge_list(5, &[(0, 1), (1, 2), (1, 3), (3, 4)], 3).unwrap();
        assert_eq!(t.root(), 3);
        assert_eq!(t.parent(1), Some(3));
        assert_eq!(t.children(1), &[0, 2]);
        assert_eq!(t.degree(1), 3);
        assert_eq!(t.max_degree(), 3);
    }

    #[test]
    fn edge_list_text() {
        let t = RootedTree::starlike(&"1,1,2".parse().unwrap());
        let text = t.to_edge_list_text();
        assert_eq!(text, "5\n0 1\n0 2\n0 3\n3 4\n");
        let (n, edges) = parse_edge_list(&text).unwrap();
        assert_eq!(RootedTree::from_edge_list(n, &edges, 0).unwrap(), t);
        assert!(parse_edge_list("3\n0 1\n").is_err());
        assert!(parse_edge_list("x\n").is_err());
        assert!(parse_edge_list("2\n0 1 2\n").is_err());
    }

    #[test]
    fn leaf_growth() {
        let t = RootedTree::path(3).with_leaf(1);
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.degree(1), 3);
        assert_eq!(t.bottom_up_order().last(), Some(&0));
    }
}
