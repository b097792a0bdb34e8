//! Hasse diagrams in DOT format.

use std::fmt::Write;

use super::PPLattice;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes in lattice order, labelled by size and witness; edges are covers, drawn bottom-up.
pub fn to_dot(l: &PPLattice) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(l.module().name()));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box];");
    for (i, e) in l.elements().iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label=\"{} {}\\n{}\"];",
            e.set.len(),
            e.set,
            escape(&e.witness.to_string())
        );
    }
    for i in 0..l.len() {
        for j in 0..l.len() {
            if l.covers(i, j) {
                let _ = writeln!(out, "  n{i} -> n{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ring_zmod, FiniteModule, Side};
    use crate::lattice::pp_lattice;

    #[test]
    fn chain_has_two_cover_edges() {
        let m = FiniteModule::regular(&ring_zmod(4).unwrap(), Side::Left);
        let dot = to_dot(&pp_lattice(&m, 2).unwrap());
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.starts_with("digraph"));
    }
}
