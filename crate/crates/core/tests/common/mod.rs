#![allow(dead_code)]

use hde_core::graph::{parse_builtin_spec, Graph};

/// Fifty (F, G) pairs with chordal F. A few have no homomorphism F → G.
pub const CORPUS: [(&str, &str); 50] = [
    ("complete:2", "complete:3"),
    ("vee", "dicycle:3"),
    ("path:4", "path:6"),
    ("path:3", "path:5"),
    ("path:2", "path:5"),
    ("path:2", "cycle:5"),
    ("path:2", "cycle:4"),
    ("path:3", "cycle:4"),
    ("path:4", "cycle:5"),
    ("complete:3", "complete:3"),
    ("complete:3", "book:2"),
    ("book:2", "complete:3"),
    ("book:2", "book:2"),
    ("complete:2", "book:3"),
    ("star:3", "path:4"),
    ("star:3", "star:3"),
    ("path:4", "star:3"),
    ("path:5", "path:7"),
    ("path:3", "complete:4"),
    ("complete:3", "complete:4"),
    ("complete:4", "complete:4"),
    ("complete:2", "complete:4"),
    ("edgeless:2", "path:3"),
    ("2*complete:2", "path:4"),
    ("complete:2", "2*complete:2"),
    ("path:3", "bipartite:2,3"),
    ("complete:2", "bipartite:2,3"),
    ("path:2", "cycle:6"),
    ("path:4", "cycle:6"),
    ("complete:3", "cycle:5"),
    ("vee", "dipath:3"),
    ("dipath:3", "dicycle:3"),
    ("vee", "vee"),
    ("dipath:2", "vee"),
    ("dipath:2", "dipath:3"),
    ("path:5", "cycle:5"),
    ("star:3", "complete:3"),
    ("path:3", "book:1"),
    ("complete:1", "path:4"),
    ("path:2", "path:8"),
    ("path:4", "path:7"),
    ("path:3", "path:3"),
    ("path:4", "book:2"),
    ("complete:2", "star:4"),
    ("dipath:2", "dicycle:3"),
    ("edgeless:3", "complete:2"),
    ("star:3", "cycle:5"),
    ("path:5", "path:6"),
    ("book:2", "book:3"),
    ("complete:2", "cycle:7"),
];

pub fn graph(spec: &str) -> Graph {
    parse_builtin_spec(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

pub fn corpus() -> Vec<(Graph, Graph)> {
    CORPUS.iter().map(|(f, g)| (graph(f), graph(g))).collect()
}

/// Prints the criterion line and returns `ok`.
pub fn report(criterion: &str, ok: bool, detail: &str) -> bool {
    println!("{} {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}
