use crate::graph::Graph;
use crate::{Error, ObjectId, Result};

/// A client at graph node `client` requesting `object` at `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Demand {
    pub client: usize,
    pub object: ObjectId,
    pub rate: u64,
}

/// Σ rate × hops from each client to the nearest replica of its object, with
/// unit link cost. `origin`, when given, holds every object.
pub fn total_access_cost(
    graph: &Graph,
    placement: &[(usize, ObjectId)],
    origin: Option<usize>,
    demands: &[Demand],
) -> Result<u64> {
    let mut total = 0u64;
    for d in demands {
        let dist = graph.bfs_distances(d.client);
        let best = placement
            .iter()
            .filter(|&&(_, o)| o == d.object)
            .map(|&(node, _)| node)
            .chain(origin)
            .filter_map(|node| dist[node])
            .min()
            .ok_or_else(|| Error::Lookup(format!("object {} has no reachable replica", d.object)))?;
        total += d.rate * u64::from(best);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unavailable_object_errors() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let demands = [Demand { client: 0, object: ObjectId(3), rate: 1 }];
        assert!(total_access_cost(&g, &[], None, &demands).is_err());
        assert_eq!(total_access_cost(&g, &[], Some(1), &demands).unwrap(), 1);
        assert_eq!(total_access_cost(&g, &[(0, ObjectId(3))], Some(1), &demands).unwrap(), 0);
    }
}
