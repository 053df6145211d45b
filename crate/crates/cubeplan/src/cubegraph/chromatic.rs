//! Exact chromatic index by backtracking.
//!
//! Vizing pins the chromatic index of a simple graph to Δ or Δ+1, so the
//! search only has to decide Δ-colorability.

use super::{Graph, GraphError};

pub const DEFAULT_NODE_CAP: usize = 16;

/// Exact minimum number of colors in a proper edge coloring.
pub fn chromatic_index(graph: &Graph, node_cap: usize) -> Result<usize, GraphError> {
    if graph.is_directed() {
        return Err(GraphError::DirectedUnsupported);
    }
    if graph.num_nodes() > node_cap {
        return Err(GraphError::CapExceeded {
            what: "chromatic_index nodes",
            value: graph.num_nodes(),
            cap: node_cap,
        });
    }
    let delta = graph.max_degree();
    if delta <= 1 {
        return Ok(delta);
    }
    if colorable(graph, delta) {
        Ok(delta)
    } else {
        Ok(delta + 1)
    }
}

fn colorable(graph: &Graph, num_colors: usize) -> bool {
    let edges = graph.edges();
    // order edges so each one touches previously colored edges early
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| {
        let (u, v) = edges[i];
        std::cmp::Reverse(degree(graph, u) + degree(graph, v))
    });
    // adjacency between edges, in search order
    let adjacent: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(pos, &ei)| {
            let (u, v) = edges[ei];
            order[..pos]
                .iter()
                .enumerate()
                .filter(|&(_, &ej)| {
                    let (a, b) = edges[ej];
                    a == u || a == v || b == u || b == v
                })
                .map(|(earlier, _)| earlier)
                .collect()
        })
        .collect();
    let mut colors = vec![usize::MAX; edges.len()];
    extend(&adjacent, &mut colors, 0, 0, num_colors)
}

fn extend(
    adjacent: &[Vec<usize>],
    colors: &mut Vec<usize>,
    pos: usize,
    max_used: usize,
    num_colors: usize,
) -> bool {
    if pos == adjacent.len() {
        return true;
    }
    // trying one fresh color is enough; the rest are symmetric
    let limit = num_colors.min(max_used + 1);
    for color in 0..limit {
        if adjacent[pos].iter().any(|&j| colors[j] == color) {
            continue;
        }
        colors[pos] = color;
        if extend(adjacent, colors, pos + 1, max_used.max(color + 1), num_colors) {
            return true;
        }
    }
    colors[pos] = usize::MAX;
    false
}

fn degree(graph: &Graph, node: usize) -> usize {
    graph.edges().iter().filter(|&&(u, v)| u == node || v == node).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::undirected(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::undirected(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n).unwrap();
        }
        g
    }

    #[test]
    fn triangle_is_class_two() {
        assert_eq!(chromatic_index(&complete(3), DEFAULT_NODE_CAP).unwrap(), 3);
    }

    #[test]
    fn short_path_needs_two() {
        let g = Graph::with_edges(3, &[(0, 1), (1, 2)], false).unwrap();
        assert_eq!(chromatic_index(&g, DEFAULT_NODE_CAP).unwrap(), 2);
    }

    #[test]
    fn even_cycles_alternate() {
        assert_eq!(chromatic_index(&cycle(4), DEFAULT_NODE_CAP).unwrap(), 2);
        assert_eq!(chromatic_index(&cycle(6), DEFAULT_NODE_CAP).unwrap(), 2);
    }

    #[test]
    fn odd_cycles_need_three() {
        assert_eq!(chromatic_index(&cycle(5), DEFAULT_NODE_CAP).unwrap(), 3);
    }

    #[test]
    fn complete_graphs_split_by_parity() {
        assert_eq!(chromatic_index(&complete(4), DEFAULT_NODE_CAP).unwrap(), 3);
        assert_eq!(chromatic_index(&complete(5), DEFAULT_NODE_CAP).unwrap(), 5);
        assert_eq!(chromatic_index(&complete(6), DEFAULT_NODE_CAP).unwrap(), 5);
    }

    #[test]
    fn hypercube_is_class_one() {
        let (g, _) = super::super::tests::unit_cube();
        assert_eq!(chromatic_index(&g, DEFAULT_NODE_CAP).unwrap(), 3);
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(chromatic_index(&Graph::undirected(1), DEFAULT_NODE_CAP).unwrap(), 0);
        let single = Graph::with_edges(2, &[(0, 1)], false).unwrap();
        assert_eq!(chromatic_index(&single, DEFAULT_NODE_CAP).unwrap(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            chromatic_index(&complete(6), 5),
            Err(GraphError::CapExceeded { .. })
        ));
    }
}
