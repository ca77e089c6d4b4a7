//! Seeded synthetic graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaxmanParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for WaxmanParams {
    fn default() -> Self {
        WaxmanParams {
            alpha: 0.4,
            beta: 0.2,
        }
    }
}

/// A Waxman graph together with the unit-square coordinates it was drawn from.
#[derive(Debug, Clone)]
pub struct WaxmanGraph {
    pub graph: Graph,
    pub coords: Vec<(f64, f64)>,
    /// Edges added after sampling to join components.
    pub bridges: usize,
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Waxman random graph: nodes uniform on the unit square, edge `u-v` kept with
/// probability `alpha * exp(-d(u,v) / (beta * L))`, `L` the largest pairwise
/// distance. Disconnected results are joined by repeatedly linking the
/// closest pair between the component of node 0 and the rest.
pub fn generate_waxman(n: usize, params: WaxmanParams, seed: u64) -> Result<WaxmanGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_waxman_with(n, params, &mut rng)
}

pub(crate) fn generate_waxman_with(
    n: usize,
    params: WaxmanParams,
    rng: &mut impl Rng,
) -> Result<WaxmanGraph> {
    let WaxmanParams { alpha, beta } = params;
    if n == 0 {
        return Err(Error::Validation("waxman node count must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Validation(format!("waxman alpha {alpha} outside (0, 1]")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Validation(format!("waxman beta {beta} outside (0, 1]")));
    }

    let coords: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let mut max_dist: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            max_dist = max_dist.max(distance(coords[i], coords[j]));
        }
    }

    let mut graph = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let p = alpha * (-distance(coords[i], coords[j]) / (beta * max_dist)).exp();
            if rng.gen::<f64>() < p {
                graph.add_edge(i, j);
            }
        }
    }

    let mut bridges = 0;
    loop {
        let comps = graph.components();
        if comps.len() <= 1 {
            break;
        }
        let mut in_main = vec![false; n];
        for &u in &comps[0] {
            in_main[u] = true;
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for &u in &comps[0] {
            for v in (0..n).filter(|&v| !in_main[v]) {
                let d = distance(coords[u], coords[v]);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, u, v));
                }
            }
        }
        let (_, u, v) = best.expect("another component exists");
        graph.add_edge(u, v);
        bridges += 1;
    }

    Ok(WaxmanGraph {
        graph,
        coords,
        bridges,
    })
}

/// Barabási–Albert preferential attachment. Starts from a clique on `m`
/// nodes; each later node links to `m` distinct existing nodes picked with
/// probability proportional to degree (uniformly while no edge exists yet).
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 {
        return Err(Error::Validation("BA edges per node must be at least 1".into()));
    }
    if n <= m {
        return Err(Error::Validation(format!(
            "BA node count {n} must exceed edges per node {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = Graph::new(n);
    // each edge contributes both endpoints, so sampling an entry is degree-proportional
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            graph.add_edge(u, v);
            endpoints.extend([u, v]);
        }
    }
    for new in m..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..new)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            graph.add_edge(new, t);
            endpoints.extend([new, t]);
        }
    }
    Ok(graph)
}
