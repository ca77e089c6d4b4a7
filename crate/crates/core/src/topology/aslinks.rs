//! AS-link lists in the stripped CAIDA skitter style: one `ASID ASID` edge per
//! line, `#` comments. A leading `D`/`I` record tag and trailing columns (such
//! as a relationship field) are tolerated; `|` works as a separator too.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::Graph;
use crate::{AsId, Error, Result};

/// AS-level graph with dense node indices. `labels[i]` is the AS number of
/// node `i`; labels are sorted so index order equals AS-number order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsGraph {
    pub labels: Vec<u64>,
    pub graph: Graph,
}

impl AsGraph {
    /// Dense graph whose labels are the node indices.
    pub fn unlabeled(graph: Graph) -> Self {
        AsGraph {
            labels: (0..graph.node_count() as u64).collect(),
            graph,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn id_of(&self, label: u64) -> Option<AsId> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|i| AsId(i as u32))
    }

    /// Serializes as an AS-link file (`a b` per edge, sorted).
    pub fn to_text(&self) -> String {
        let mut out = String::from("# as links\n");
        for (u, v) in self.graph.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}

pub fn parse_as_links(text: &str) -> Result<AsGraph> {
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line
            .split(|c: char| c.is_whitespace() || c == '|')
            .filter(|f| !f.is_empty())
            .peekable();
        if matches!(fields.peek(), Some(&"D") | Some(&"I")) {
            fields.next();
        }
        let mut ids = [0u64; 2];
        for slot in &mut ids {
            let field = fields
                .next()
                .ok_or_else(|| Error::parse(line_no, "expected two AS ids"))?;
            *slot = field
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad AS id {field:?}")))?;
        }
        let [a, b] = ids;
        if a == b {
            return Err(Error::Validation(format!(
                "self-loop on AS {a} at line {line_no}"
            )));
        }
        edges.insert((a.min(b), a.max(b)));
    }

    let labels: Vec<u64> = edges
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |l: u64| labels.binary_search(&l).unwrap();
    let graph = Graph::from_edges(labels.len(), edges.iter().map(|&(a, b)| (index(a), index(b))));
    Ok(AsGraph { labels, graph })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_chain() {
        let g = parse_as_links("1 2\n2 3\n").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.graph.edge_count(), 2);
    }

    #[test]
    fn reversed_duplicate_is_deduped() {
        let g = parse_as_links("1 2\n2 1\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.graph.edge_count(), 1);
    }

    #[test]
    fn arity_error_reports_line() {
        match parse_as_links("1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_as_links("# header\n1 2\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(parse_as_links("5 5"), Err(Error::Validation(_))));
    }

    #[test]
    fn skitter_tags_and_pipes() {
        let g = parse_as_links("D 7018 3356 extra\n701|1239|-1 # rel\n").unwrap();
        assert_eq!(g.labels, vec![701, 1239, 3356, 7018]);
        assert_eq!(g.id_of(3356), Some(AsId(2)));
        assert_eq!(g.graph.edge_count(), 2);
    }
}
