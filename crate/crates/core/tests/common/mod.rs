#![allow(dead_code)]

use std::collections::VecDeque;

use icncache::graph::Graph;
use icncache::metrics::{total_access_cost, Demand};
use icncache::ObjectId;
use rand::Rng;

pub const A: ObjectId = ObjectId(0);
pub const B: ObjectId = ObjectId(1);
pub const C: ObjectId = ObjectId(2);
pub const D: ObjectId = ObjectId(3);

/// Four single-slot routers (nodes 0..=3 for routers 1..=4) and the server
/// (node 4). Client A sits at router 1, client B at router 2; both reach the
/// server through 3 and 4.
pub fn example_graph() -> Graph {
    Graph::from_edges(5, [(0, 2), (1, 2), (2, 3), (3, 4)])
}

pub const SERVER: usize = 4;

/// Non-cooperative placement: the popular object at both edges.
pub const CASE1: [ObjectId; 4] = [A, A, D, B];
/// Cooperative placement: every object cached once.
pub const CASE2: [ObjectId; 4] = [B, C, A, D];

pub fn demands(ra: u64, rb: u64, rc: u64, rd: u64) -> Vec<Demand> {
    let d = |client, object, rate| Demand { client, object, rate };
    vec![d(0, A, ra), d(0, B, rb), d(0, D, rd), d(1, A, ra), d(1, C, rc), d(1, D, rd)]
}

pub fn cost(placement: &[ObjectId; 4], demands: &[Demand]) -> u64 {
    let placed: Vec<(usize, ObjectId)> = placement.iter().copied().enumerate().collect();
    total_access_cost(&example_graph(), &placed, Some(SERVER), demands).unwrap()
}

/// Cheapest of all 4^4 one-object-per-router placements.
pub fn brute_force_optimum(demands: &[Demand]) -> (u64, [ObjectId; 4]) {
    let objects = [A, B, C, D];
    let mut best = (u64::MAX, CASE1);
    for code in 0..256usize {
        let p = [0, 1, 2, 3].map(|i| objects[(code >> (2 * i)) & 3]);
        let c = cost(&p, demands);
        if c < best.0 {
            best = (c, p);
        }
    }
    best
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

/// Every simple path from `src` to `dst`, by depth-first search.
pub fn simple_paths(g: &Graph, src: usize, dst: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, dst: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *stack.last().unwrap();
        if u == dst {
            out.push(stack.clone());
            return;
        }
        for &v in g.neighbors(u) {
            if !stack.contains(&v) {
                stack.push(v);
                go(g, dst, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, dst, &mut vec![src], &mut out);
    out
}

pub fn minimal_paths(g: &Graph, src: usize, dst: usize) -> Vec<Vec<usize>> {
    let all = simple_paths(g, src, dst);
    let Some(best) = all.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    let mut min: Vec<_> = all.into_iter().filter(|p| p.len() == best).collect();
    min.sort();
    min
}

pub fn is_walk(g: &Graph, path: &[usize]) -> bool {
    path.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Reference LRU: a deque ordered most- to least-recently used.
pub struct LruModel {
    pub capacity: usize,
    pub order: VecDeque<u64>,
    pub evictions: u64,
}

impl LruModel {
    pub fn new(capacity: usize) -> Self {
        LruModel {
            capacity,
            order: VecDeque::new(),
            evictions: 0,
        }
    }

    pub fn touch(&mut self, id: u64) -> bool {
        match self.order.iter().position(|&x| x == id) {
            Some(i) => {
                self.order.remove(i);
                self.order.push_front(id);
                true
            }
            None => false,
        }
    }

    pub fn insert(&mut self, id: u64) -> Option<u64> {
        if self.capacity == 0 || self.touch(id) {
            return None;
        }
        let evicted = if self.order.len() == self.capacity {
            self.evictions += 1;
            self.order.pop_back()
        } else {
            None
        };
        self.order.push_front(id);
        evicted
    }
}
