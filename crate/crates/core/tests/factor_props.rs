use pathalg::cdelta;
use pathalg::factor::*;
use pathalg::graph::{families, GraphSpec};
use pathalg::noncross::catalan;
use pathalg::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random (q, a, b) with b ≤ Σ q_i a_i when `factor`, else b > Σ q_i a_i.
fn draw(rng: &mut ChaCha8Rng, factor: bool) -> (Vec<usize>, Vec<f64>, f64) {
    loop {
        let k = rng.gen_range(1..=4);
        let q: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let raw: Vec<f64> = (0..=k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let bias = if factor { 1.0 } else { 8.0 };
        let total: f64 = raw[..k].iter().sum::<f64>() + bias * raw[k];
        let a: Vec<f64> = raw[..k].iter().map(|x| x / total).collect();
        let b = bias * raw[k] / total;
        let qa: f64 = q.iter().zip(&a).map(|(&qi, ai)| qi as f64 * ai).sum();
        if (b <= qa) == factor {
            return (q, a, b);
        }
    }
}

#[test]
fn closed_form_matches_free_product_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for factor in [true, false] {
        for _ in 0..200 {
            let (q, a, b) = draw(&mut rng, factor);
            let closed = star_corner(&q, &a, b).unwrap();
            let piped = star_corner_pipeline(&q, &a, b).unwrap();
            assert_eq!(closed.as_factor().is_some(), factor);
            assert!(closed.max_diff(&piped) < 1e-9, "{q:?} {a:?} {b}: {closed:?} vs {piped:?}");
            assert!((fdim(&closed) - fdim(&piped)).abs() < 1e-9);
        }
    }
}

#[test]
fn two_vertex_regimes_on_a_grid() {
    for q in 1..=4 {
        let qf = q as f64;
        for i in 1..40 {
            let alpha = i as f64 / 40.0;
            let beta = 1.0 - alpha;
            let x = alpha / beta;
            let d = two_vertex_corner(q, alpha, beta, Corner::Odd).unwrap();
            let want = if x > qf {
                AlgDesc::lf(qf * qf)
            } else if x >= 1.0 / qf {
                AlgDesc::lf(2.0 * qf * x - x * x)
            } else {
                AlgDesc::new(vec![1.0 - qf * x], vec![(2.0 - 1.0 / (qf * qf), qf * x)]).unwrap()
            };
            assert!(d.max_diff(&want) < 1e-12);
            // Even corner is the odd corner with the weights swapped.
            let e = two_vertex_corner(q, alpha, beta, Corner::Even).unwrap();
            assert!(e.max_diff(&two_vertex_corner(q, beta, alpha, Corner::Odd).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn whole_two_vertex_factor_compresses_to_both_corners() {
    for q in 2..=4 {
        let qf = q as f64;
        for i in 1..60 {
            let alpha = i as f64 / 60.0;
            let beta = 1.0 - alpha;
            match omega_factor(q, alpha, beta).unwrap() {
                FactorVerdict::Factor(d) => {
                    let s = d.as_factor().unwrap();
                    let odd = two_vertex_corner(q, alpha, beta, Corner::Odd).unwrap().as_factor().unwrap();
                    let even = two_vertex_corner(q, alpha, beta, Corner::Even).unwrap().as_factor().unwrap();
                    assert!((compress(s, beta).unwrap() - odd).abs() < 1e-9);
                    assert!((compress(s, alpha).unwrap() - even).abs() < 1e-9);
                    assert!(odd > 1.0 && even > 1.0);
                }
                FactorVerdict::NotFactor(_) => {
                    let x = alpha / beta;
                    assert!(x < 1.0 / qf || x > qf);
                }
            }
        }
    }
    match omega_factor(2, 0.5, 0.5).unwrap() {
        FactorVerdict::Factor(d) => assert!((d.as_factor().unwrap() - 1.5).abs() < 1e-12),
        v => panic!("{v:?}"),
    }
}

#[test]
fn star_graph_even_corner_is_lf_two_root_n_minus_one() {
    for n in 2..=6 {
        let s = 1.0 / (n as f64).sqrt();
        let part = AlgDesc::new(vec![1.0 - s], vec![(1.0, s)]).unwrap();
        let p = free_product_all(&vec![part; n]).unwrap();
        let want = 2.0 * (n as f64).sqrt() - 1.0;
        assert!((p.as_factor().unwrap() - want).abs() < 1e-9, "n={n}: {p:?}");
        // The same corner read off the PF-weighted graph.
        let g = families::k1n(n);
        let leaves: Vec<f64> = (1..=n).map(|v| g.mu2(v)).collect();
        let c = star_corner(&vec![1; n], &leaves, g.mu2(0)).unwrap();
        assert!((c.as_factor().unwrap() - want).abs() < 1e-9);
        let rep = structure_report(&g).unwrap();
        let t = g.mu2(0);
        assert!((rep.diffuse[0].0 - (1.0 + (want - 1.0) * t * t)).abs() < 1e-9);
    }
}

#[test]
fn free_poisson_moments() {
    for (q, alpha, beta) in [(1, 0.5, 0.5), (2, 0.5, 0.5), (2, 0.8, 0.2), (3, 0.3, 0.7), (3, 0.75, 0.25)] {
        let r = alpha / (beta * q as f64);
        let m = two_vertex_matrix_moments(q, alpha, beta, 5).unwrap();
        for (k, got) in m.iter().enumerate() {
            let want = free_poisson_moment(k + 1, r);
            assert!((got - want).abs() < 1e-8, "q={q} α={alpha} k={}: {got} vs {want}", k + 1);
        }
    }
    let m = two_vertex_matrix_moments(1, 0.5, 0.5, 5).unwrap();
    for (k, got) in m.iter().enumerate() {
        assert!((got - catalan(k + 1) as f64).abs() < 1e-8);
    }
}

fn weighted(text: &str) -> Graph {
    Graph::build(&GraphSpec::parse(text).unwrap()).unwrap()
}

#[test]
fn atoms_follow_the_vertex_defect() {
    // Non-PF weights so that some δ(v) < 1.
    let g = weighted(
        r#"
        [[vertices]]
        id = "v1"
        parity = "even"
        weight2 = 0.5
        [[vertices]]
        id = "w"
        parity = "odd"
        weight2 = 0.1
        [[vertices]]
        id = "v2"
        parity = "even"
        weight2 = 0.4
        [[edges]]
        u = "v1"
        v = "w"
        [[edges]]
        u = "w"
        v = "v2"
        "#,
    );
    let rep = structure_report(&g).unwrap();
    let from_centre: Vec<(String, f64)> =
        cdelta::atoms(&g).into_iter().map(|(v, t)| (g.name(v).to_string(), t)).collect();
    assert_eq!(rep.atoms.len(), 2);
    for ((n1, t1), (n2, t2)) in rep.atoms.iter().zip(&from_centre) {
        assert_eq!(n1, n2);
        assert!((t1 - t2).abs() < 1e-12);
    }
    assert!((rep.atoms[0].1 - (1.0 - 0.1 / 0.5) * 0.5).abs() < 1e-12);
    // Corner at w is C ⊕ LF: 0.1 < 0.9, so it carries an atom of trace (1 − δ(w))μ²(w) as well.
    let total: f64 = rep.atoms.iter().map(|a| a.1).sum::<f64>() + rep.diffuse.iter().map(|d| d.1).sum::<f64>();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn isolated_vertices_split_off_as_atoms() {
    let g = weighted(
        r#"
        [[vertices]]
        id = "v1"
        parity = "even"
        weight2 = 0.3
        [[vertices]]
        id = "w"
        parity = "odd"
        weight2 = 0.3
        [[vertices]]
        id = "v2"
        parity = "even"
        weight2 = 0.4
        [[edges]]
        u = "v1"
        v = "w"
        "#,
    );
    let rep = structure_report(&g).unwrap();
    assert!(rep.atoms.iter().any(|(v, t)| v == "v2" && (t - 0.4).abs() < 1e-12));
    assert!((rep.diffuse[0].1 - 0.6).abs() < 1e-12);
    assert!(rep.verdict.contains("M2(LZ)"));
}
