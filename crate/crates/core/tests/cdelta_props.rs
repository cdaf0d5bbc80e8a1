use pathalg::cdelta::*;
use pathalg::falg::sharp_mul;
use pathalg::graph::families;
use pathalg::linalg::{matrix_of, max_entry_diff, spectral_norm};
use pathalg::{Elem, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graphs() -> Vec<(&'static str, Graph)> {
    let mut gs = families::standard_set();
    gs.push(("omega(2,.8,.2)", families::omega(2, 0.8, 0.2)));
    gs.push(("omega(3,.3,.7)", families::omega(3, 0.3, 0.7)));
    gs
}

#[test]
fn defining_relations_hold_as_operators() {
    for (name, g) in graphs() {
        for v in 0..g.vertex_count() {
            for n in 0..=3 {
                for rel in relations(n) {
                    let d = relation_defect(&g, v, &rel).unwrap();
                    assert!(d < 1e-9, "{name} v{v} n={n} {}: {d}", rel.name);
                    let l = word_tpq(&rel.lhs, rel.domain).unwrap();
                    let mut r = word_tpq(&rel.rhs, rel.domain).unwrap();
                    if rel.rhs_scalar_is_delta {
                        r.0 += 1;
                    }
                    assert_eq!(l, r, "{}", rel.name);
                }
            }
        }
    }
}

#[test]
fn cap_and_cup_only_identities() {
    let g = families::double_edge();
    for k in 0..=3 {
        for l in 0..=3 - k {
            let (a, b) = cap_only_words(k, l);
            assert_eq!(word_tpq(&a, k + l).unwrap(), word_tpq(&b, k + l).unwrap());
            let (c, d) = cup_only_words(k, l);
            assert_eq!(word_tpq(&c, 0).unwrap(), word_tpq(&d, 0).unwrap());
            for v in 0..g.vertex_count() {
                for xi in g.loops(v, 2 * (k + l)) {
                    let x = Elem::basis(xi);
                    let lhs = act_word(&g, v, &a, &x).unwrap();
                    assert!(lhs.max_abs_diff(&act_word(&g, v, &b, &x).unwrap()) < 1e-12);
                }
                let e = Elem::vertex(v);
                let lhs = act_word(&g, v, &c, &e).unwrap();
                assert!(lhs.max_abs_diff(&act_word(&g, v, &d, &e).unwrap()) < 1e-12);
            }
        }
    }
}

fn random_tpq(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Tpq {
    let k = rng.gen_range(0..=n.min(m));
    if k == 0 {
        return Tpq::new(n, m, (1, 0), (1, 0)).unwrap();
    }
    let p0 = rng.gen_range(1..=m - k + 1);
    let q0 = rng.gen_range(1..=n - k + 1);
    Tpq::new(n, m, (p0, p0 + k - 1), (q0, q0 + k - 1)).unwrap()
}

#[test]
fn composition_matches_action_and_weights_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = families::a3();
    for _ in 0..100 {
        let (p, n, m) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let f = random_tpq(&mut rng, n, m);
        let h = random_tpq(&mut rng, p, n);
        let (k, fh) = tpq_compose(&f, &h).unwrap();
        for v in 0..g.vertex_count() {
            let delta = g.delta_v(v);
            assert!((f.weight(delta) * h.weight(delta) - delta.powi(k as i32) * fh.weight(delta)).abs() < 1e-9);
            for xi in g.loops(v, 2 * p) {
                let x = Elem::basis(xi);
                let two_step = tpq_act(&g, v, &f, &tpq_act(&g, v, &h, &x).unwrap()).unwrap();
                let direct = tpq_act(&g, v, &fh, &x).unwrap().scale(delta.powi(k as i32));
                assert!(two_step.max_abs_diff(&direct) < 1e-9, "{f:?} ∘ {h:?}");
            }
        }
    }
}

#[test]
fn action_norm_bounded_by_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = families::omega(2, 0.8, 0.2);
    for _ in 0..40 {
        let (n, m) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let t = random_tpq(&mut rng, n, m);
        for v in 0..g.vertex_count() {
            let dom = g.loops(v, 2 * n);
            let cod = g.loops(v, 2 * m);
            let mat = matrix_of(&dom, &cod, |p| tpq_act(&g, v, &t, &Elem::basis(p.clone())).unwrap());
            assert!(spectral_norm(&mat) <= t.weight(g.delta_v(v)) * (1.0 + 1e-9));
        }
    }
}

#[test]
fn creations_are_adjoint_to_annihilations() {
    let g = families::double_edge();
    for v in 0..g.vertex_count() {
        for n in 0..=2 {
            let lo = g.loops(v, 2 * n);
            let hi = g.loops(v, 2 * n + 2);
            for (c, a) in [(Gen::Cm(n), Gen::Am(n + 1)), (Gen::Cp(n), Gen::Ap(n + 1))] {
                let cm = matrix_of(&lo, &hi, |p| act_gen(&g, v, c, &Elem::basis(p.clone())).unwrap());
                let am = matrix_of(&hi, &lo, |p| act_gen(&g, v, a, &Elem::basis(p.clone())).unwrap());
                assert!(max_entry_diff(&cm, &am.transpose()) < 1e-12);
            }
        }
    }
}

#[test]
fn c2n_is_top_term_of_power_and_has_norm_delta_power() {
    let g = families::a3();
    for v in 0..g.vertex_count() {
        let c = c_element(&g, v);
        let mut pow = Elem::vertex(v);
        for n in 0..=4 {
            let top = c_2n(&g, v, n);
            assert!(pow.degree(2 * n).max_abs_diff(&top) < 1e-9);
            assert!((local_norm(&top).powi(2) - g.delta_v(v).powi(n as i32)).abs() < 1e-9);
            pow = sharp_mul(&g, &pow, &c);
        }
    }
}

#[test]
fn commutator_inversion_on_random_orthogonal_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, g) in graphs() {
        for v in 0..g.vertex_count() {
            let c = c_element(&g, v);
            for n in 1..=3 {
                let loops = g.loops(v, 2 * n);
                for _ in 0..3 {
                    let x = Elem::from_terms(loops.iter().map(|p| (p.clone(), rng.gen_range(-1.0..1.0))));
                    let x = project_off_c2n(&g, v, n, &x);
                    let z = commutator_top(&g, v, n, &x).unwrap();
                    let back = commutator_inverse(&g, v, n, &z).unwrap();
                    assert!(back.max_abs_diff(&x) < 1e-9, "{name} v{v} n={n}");
                    let cx = sharp_mul(&g, &c, &x).degree(2 * n + 2);
                    let xc = sharp_mul(&g, &x, &c).degree(2 * n + 2);
                    assert!(cx.max_abs_diff(&act_gen(&g, v, Gen::Cm(n), &x).unwrap()) < 1e-9);
                    assert!(xc.max_abs_diff(&act_gen(&g, v, Gen::Cp(n), &x).unwrap()) < 1e-9);
                }
            }
        }
    }
}

#[test]
fn truncation_blocks_and_edge_identity() {
    let g = families::omega(2, 0.8, 0.2);
    let v = 0;
    for m in 0..=4 {
        let x = zv_truncation(&g, v, m);
        for j in 0..=3 {
            for xi in g.loops(v, 2 * j) {
                let prod = sharp_mul(&g, &x, &Elem::basis(xi.clone()));
                for i in 0..=(j + m) {
                    let got = prod.degree(2 * i);
                    let want = match zv_block(m, i, j) {
                        None => Elem::zero(),
                        Some((s, w)) => act_word(&g, v, &w, &Elem::basis(xi.clone())).unwrap().scale(s),
                    };
                    assert!(got.max_abs_diff(&want) < 1e-9, "m={m} block ({i},{j})");
                }
            }
        }
        for xi in g.paths(Some(v), 1, None) {
            assert!(zv_edge_defect(&g, v, m, &xi) < 1e-9);
        }
    }
}

#[test]
fn truncation_norm_within_uniform_bound() {
    let g = families::omega(2, 0.8, 0.2);
    let v = 0;
    let delta = g.delta_v(v);
    let basis: Vec<_> = (0..=3).flat_map(|k| g.loops(v, 2 * k)).collect();
    for m in 0..=4 {
        let x = zv_truncation(&g, v, m);
        let mat = matrix_of(&basis, &basis, |p| sharp_mul(&g, &x, &Elem::basis(p.clone())));
        assert!(spectral_norm(&mat) <= zv_norm_bound(delta));
        let vac: f64 = local_norm(&x).powi(2);
        let partial: f64 = (0..=m).map(|n| delta.powi(n as i32)).sum();
        assert!((vac - partial).abs() < 1e-9);
    }
}
