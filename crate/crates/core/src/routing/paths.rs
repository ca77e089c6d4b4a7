use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::Graph;
use crate::{Error, Result};

const UNREACHED: u32 = u32::MAX;
const NO_PRED: usize = usize::MAX;

/// Single-source Dijkstra over unit-cost links. When two predecessors offer
/// the same distance the lower node id is kept, so paths are deterministic.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    source: usize,
    dist: Vec<u32>,
    pred: Vec<usize>,
}

impl ShortestPathTree {
    pub fn dijkstra(graph: &Graph, source: usize) -> Self {
        let n = graph.node_count();
        let mut dist = vec![UNREACHED; n];
        let mut pred = vec![NO_PRED; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0u32, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &v in graph.neighbors(u) {
                let nd = d + 1;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Reverse((nd, v)));
                } else if nd == dist[v] && u < pred[v] {
                    pred[v] = u;
                }
            }
        }
        ShortestPathTree { source, dist, pred }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn distance(&self, dst: usize) -> Option<u32> {
        self.dist.get(dst).copied().filter(|&d| d != UNREACHED)
    }

    pub fn path_to(&self, dst: usize) -> Option<Vec<usize>> {
        self.distance(dst)?;
        let mut path = vec![dst];
        let mut cur = dst;
        while cur != self.source {
            cur = self.pred[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

pub fn shortest_path(graph: &Graph, src: usize, dst: usize) -> Result<Vec<usize>> {
    check_nodes(graph, src, dst)?;
    ShortestPathTree::dijkstra(graph, src)
        .path_to(dst)
        .ok_or_else(|| Error::Routing(format!("node {dst} unreachable from {src}")))
}

fn check_nodes(graph: &Graph, src: usize, dst: usize) -> Result<()> {
    let n = graph.node_count();
    if src >= n || dst >= n {
        return Err(Error::Lookup(format!("node {} not in graph", src.max(dst))));
    }
    Ok(())
}

/// Every minimal-hop path from `src` to `dst`, in lexicographic order.
pub fn all_shortest_paths(graph: &Graph, src: usize, dst: usize) -> Result<Vec<Vec<usize>>> {
    check_nodes(graph, src, dst)?;
    let dist_to = graph.bfs_distances(dst);
    if dist_to[src].is_none() {
        return Err(Error::Routing(format!("node {dst} unreachable from {src}")));
    }
    let mut out = Vec::new();
    let mut stack = vec![src];
    enumerate(graph, &dist_to, dst, &mut stack, &mut out);
    Ok(out)
}

fn enumerate(
    graph: &Graph,
    dist_to: &[Option<u32>],
    dst: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let u = *stack.last().unwrap();
    if u == dst {
        out.push(stack.clone());
        return;
    }
    let next = dist_to[u].unwrap() - 1;
    for &v in graph.neighbors(u) {
        if dist_to[v] == Some(next) {
            stack.push(v);
            enumerate(graph, dist_to, dst, stack, out);
            stack.pop();
        }
    }
}

/// Lexicographically first minimal path from `src` to the node whose BFS
/// distances are `dist_to`, restricted to paths containing at least one node
/// accepted by `wanted`. `None` when no minimal path qualifies or `src` is
/// unreachable.
pub fn first_shortest_path_with(
    graph: &Graph,
    dist_to: &[Option<u32>],
    src: usize,
    wanted: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let src_dist = dist_to[src]?;
    // reaches[v]: some minimal continuation from v passes a wanted node
    let mut by_dist: Vec<usize> = (0..graph.node_count())
        .filter(|&v| dist_to[v].is_some_and(|d| d <= src_dist))
        .collect();
    by_dist.sort_by_key(|&v| dist_to[v]);
    let mut reaches = vec![false; graph.node_count()];
    for &v in &by_dist {
        let d = dist_to[v].unwrap();
        reaches[v] = wanted(v)
            || (d > 0
                && graph
                    .neighbors(v)
                    .iter()
                    .any(|&w| dist_to[w] == Some(d - 1) && reaches[w]));
    }
    if !reaches[src] {
        return None;
    }
    let mut path = vec![src];
    let mut satisfied = wanted(src);
    let mut u = src;
    while dist_to[u] != Some(0) {
        let next = dist_to[u].unwrap() - 1;
        u = *graph
            .neighbors(u)
            .iter()
            .find(|&&w| dist_to[w] == Some(next) && (satisfied || reaches[w]))
            .expect("a qualifying successor exists");
        satisfied |= wanted(u);
        path.push(u);
    }
    Some(path)
}

/// Lexicographically first minimal path (greedy lowest-id successor).
pub fn first_shortest_path(graph: &Graph, dist_to: &[Option<u32>], src: usize) -> Option<Vec<usize>> {
    first_shortest_path_with(graph, dist_to, src, |_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)])
    }

    fn diamond() -> Graph {
        // A=0, B=1, C=2, D=3
        Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn identity_and_line() {
        assert_eq!(shortest_path(&line(), 1, 1).unwrap(), vec![1]);
        assert_eq!(shortest_path(&line(), 0, 2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn unreachable_is_routing_error() {
        let g = Graph::from_edges(3, [(0, 1)]);
        assert!(matches!(shortest_path(&g, 0, 2), Err(Error::Routing(_))));
        assert!(matches!(all_shortest_paths(&g, 0, 2), Err(Error::Routing(_))));
        assert!(matches!(shortest_path(&g, 0, 9), Err(Error::Lookup(_))));
    }

    #[test]
    fn dijkstra_tie_break_lowest_predecessor() {
        assert_eq!(shortest_path(&diamond(), 0, 3).unwrap(), vec![0, 1, 3]);
        assert_eq!(shortest_path(&diamond(), 3, 0).unwrap(), vec![3, 1, 0]);
    }

    #[test]
    fn diamond_enumeration() {
        assert_eq!(
            all_shortest_paths(&diamond(), 0, 3).unwrap(),
            vec![vec![0, 1, 3], vec![0, 2, 3]]
        );
        assert_eq!(all_shortest_paths(&line(), 0, 2).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn first_path_with_constraint() {
        let g = diamond();
        let dist = g.bfs_distances(3);
        assert_eq!(first_shortest_path(&g, &dist, 0).unwrap(), vec![0, 1, 3]);
        assert_eq!(first_shortest_path_with(&g, &dist, 0, |v| v == 2).unwrap(), vec![0, 2, 3]);
        assert_eq!(first_shortest_path_with(&g, &dist, 0, |v| v == 9), None);
        assert_eq!(first_shortest_path_with(&g, &dist, 0, |v| v == 0).unwrap(), vec![0, 1, 3]);
    }
}
