mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use pathalg::graph::{EdgeSpec, GraphSpec, VertexSpec};
use pathalg::{Graph, Parity};
use proptest::prelude::*;
use rand::Rng;

/// 1–3 even and 1–3 odd vertices with edge multiplicities 0–2 between every pair.
fn bipartite_spec() -> impl Strategy<Value = GraphSpec> {
    (1usize..=3, 1usize..=3, prop::collection::vec(0usize..=2, 9)).prop_map(|(ne, no, mult)| {
        let mut vertices = Vec::new();
        for i in 0..ne {
            vertices.push(VertexSpec { id: format!("v{i}"), parity: Parity::Even, weight2: None });
        }
        for j in 0..no {
            vertices.push(VertexSpec { id: format!("w{j}"), parity: Parity::Odd, weight2: None });
        }
        let mut edges = Vec::new();
        for i in 0..ne {
            for j in 0..no {
                let m = mult[3 * i + j];
                if m > 0 {
                    edges.push(EdgeSpec { u: format!("v{i}"), v: format!("w{j}"), mult: m });
                }
            }
        }
        GraphSpec { vertices, edges }
    })
}

fn adjacency(g: &Graph) -> DMatrix<f64> {
    let a = g.adjacency();
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i][j])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pf_weights_make_the_vertex_ratio_constant(spec in bipartite_spec()) {
        let g = Graph::topology(&spec).unwrap();
        prop_assume!(g.is_connected() && g.edge_count() > 0);
        let (h, lambda) = g.pf_weighting().unwrap();
        let top = SymmetricEigen::new(adjacency(&g)).eigenvalues.max();
        prop_assert!((lambda - top).abs() < 1e-9, "{} vs {}", lambda, top);
        for v in 0..h.vertex_count() {
            prop_assert!((h.delta_v(v) - lambda).abs() < 1e-9);
        }
        prop_assert!((h.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_counts_are_adjacency_powers(spec in bipartite_spec(), n in 0usize..=5) {
        let g = Graph::topology(&spec).unwrap();
        let a = adjacency(&g);
        let mut power = DMatrix::<f64>::identity(g.vertex_count(), g.vertex_count());
        for _ in 0..n {
            power = &power * &a;
        }
        for u in 0..g.vertex_count() {
            for x in 0..g.vertex_count() {
                prop_assert_eq!(g.paths(Some(u), n, Some(x)).len() as f64, power[(u, x)]);
            }
        }
    }

    #[test]
    fn reversal_is_an_involution(gi in 0usize..7, seed in any::<u64>(), len in 0usize..=6) {
        let g = &common::test_graphs()[gi];
        let mut rng = common::rng(seed);
        let p = common::random_path(g, &mut rng, len);
        let r = p.reverse(g);
        prop_assert_eq!(r.start, p.finish(g));
        prop_assert_eq!(r.finish(g), p.start);
        prop_assert_eq!(r.reverse(g), p.clone());
        prop_assert_eq!(g.parse_path(&p.display(g)).unwrap(), p.clone());
        let cut = rng.gen_range(0..=len);
        let (a, b) = (p.sub(g, 0, cut), p.sub(g, cut, len));
        prop_assert_eq!(a.concat(g, &b).unwrap(), p);
    }
}
