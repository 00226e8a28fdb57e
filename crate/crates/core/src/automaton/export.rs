use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::ConstraintGraph;

/// Graphviz rendering. Node `n0` is the initial node (double circle); edges
/// follow [`ConstraintGraph::edges`] order.
pub fn export_dot(g: &ConstraintGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph constraint_graph {\n");
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=circle];\n");
    for (i, word) in g.nodes().iter().enumerate() {
        if i == g.initial() {
            let _ = writeln!(out, "    n{i} [label=\"{word}\", shape=doublecircle];");
        } else {
            let _ = writeln!(out, "    n{i} [label=\"{word}\"];");
        }
    }
    for e in g.edges() {
        let _ = writeln!(out, "    n{} -> n{} [label=\"{}\"];", e.from, e.to, e.label);
    }
    out.push_str("}\n");
    out
}

/// JSON form: `{"nodes": [..], "edges": [[from, "H", to], ..], "initial": i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub strategy: String,
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, String, usize)>,
    pub initial: usize,
}

impl From<&ConstraintGraph> for GraphDocument {
    fn from(g: &ConstraintGraph) -> Self {
        GraphDocument {
            strategy: g.strategy().name().to_string(),
            nodes: g.nodes().iter().map(ToString::to_string).collect(),
            edges: g
                .edges()
                .into_iter()
                .map(|e| (e.from, e.label.to_string(), e.to))
                .collect(),
            initial: g.initial(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_graph, minimize};
    use crate::constraint::{Constraint, ConstraintSet, Strategy};

    #[test]
    fn dot_of_single_node_graph() {
        let cs = ConstraintSet::single(Constraint::any_miss(0, 1).unwrap(), Strategy::Kill);
        let g = minimize(&build_graph(&cs).unwrap());
        assert_eq!(
            export_dot(&g),
            "digraph constraint_graph {\n    rankdir=LR;\n    node [shape=circle];\n    \
             n0 [label=\"H\", shape=doublecircle];\n    n0 -> n0 [label=\"H\"];\n}\n"
        );
    }

    #[test]
    fn json_document() {
        let cs = ConstraintSet::single(Constraint::any_miss(1, 3).unwrap(), Strategy::Kill);
        let g = minimize(&build_graph(&cs).unwrap());
        let doc = GraphDocument::from(&g);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            text,
            r#"{"strategy":"kill","nodes":["XHH","HHM","HMH"],"edges":[[0,"H",0],[0,"M",1],[1,"H",2],[2,"H",0]],"initial":0}"#
        );
        let back: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }
}
