use std::collections::HashMap;
use std::sync::Mutex;

use pathalg::cumulants::*;
use pathalg::graph::families;
use pathalg::noncross::enumerate_nc;
use pathalg::{Elem, Graph, Path};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("a3", families::a3()),
        ("a4", families::a4()),
        ("two_odd", families::two_odd()),
        ("omega(2,.6,.4)", families::omega(2, 0.6, 0.4)),
    ]
}

#[test]
fn moment_routes_agree() {
    for (name, g) in graphs() {
        for n in 1..=4 {
            for chain in closed_chains(&g, n) {
                let refs: Vec<&Path> = chain.iter().collect();
                let d = b_max_diff(&moment_phi(&g, &refs), &moment_phi_filtered(&g, &refs));
                assert!(d < 1e-9, "{name} n={n}: {d}");
            }
        }
    }
}

#[test]
fn cumulant_routes_agree_and_recover_moments() {
    for (name, g) in graphs() {
        for n in 1..=4 {
            for chain in closed_chains(&g, n) {
                let refs: Vec<&Path> = chain.iter().collect();
                let k = kappa_mobius(&g, &refs);
                assert!(b_max_diff(&k, &kappa_closed(&g, &refs)) < 1e-9, "{name} n={n}");
                let back = moment_from_cumulants(&g, &kappa_closed, &refs);
                assert!(b_max_diff(&back, &moment_phi(&g, &refs)) < 1e-9, "{name} n={n}");
            }
        }
    }
}

#[test]
fn double_bijection_action_is_cumulant_extension() {
    for (name, g) in graphs() {
        for n in 1..=4 {
            let chains = closed_chains(&g, n);
            for pi in enumerate_nc(n) {
                for chain in &chains {
                    let refs: Vec<&Path> = chain.iter().collect();
                    let args: Vec<Elem> = chain.iter().map(|p| Elem::basis(p.clone())).collect();
                    let ext = multiplicative_extension(&g, &kappa_closed, &pi, &args, Extraction::First).unwrap();
                    let act = double_action(&g, &pi, &refs);
                    assert!(b_max_diff(&ext, &act) < 1e-9, "{name} {pi}");
                    assert!(b_max_diff(&act, &double_product_formula(&g, &pi, &refs)) < 1e-9, "{name} {pi}");
                }
            }
        }
    }
}

/// A random bimodule map: a fixed random value on each closed chain, zero otherwise.
struct RandomMap {
    values: Mutex<HashMap<Vec<Path>, f64>>,
    rng: Mutex<ChaCha8Rng>,
}

impl RandomMap {
    fn eval(&self, g: &Graph, paths: &[&Path]) -> Vec<f64> {
        let mut out = b_zero(g);
        let Some(xi) = compose_all(g, paths) else {
            return out;
        };
        if !xi.is_loop(g) {
            return out;
        }
        let key: Vec<Path> = paths.iter().map(|p| (*p).clone()).collect();
        let mut values = self.values.lock().unwrap();
        let val = *values.entry(key).or_insert_with(|| self.rng.lock().unwrap().gen_range(-1.0..1.0));
        out[xi.start] = val;
        out
    }
}

#[test]
fn mobius_inversion_round_trip_on_random_maps() {
    let g = families::a3();
    let m = RandomMap { values: Mutex::new(HashMap::new()), rng: Mutex::new(ChaCha8Rng::seed_from_u64(5)) };
    let moments = |g: &Graph, p: &[&Path]| m.eval(g, p);
    let kappa = |g: &Graph, p: &[&Path]| kappa_mobius_with(g, &moments, p);
    for n in 1..=4 {
        for chain in closed_chains(&g, n) {
            let refs: Vec<&Path> = chain.iter().collect();
            let back = moment_from_cumulants(&g, &kappa, &refs);
            assert!(b_max_diff(&back, &m.eval(&g, &refs)) < 1e-9, "n={n}");
        }
    }
}

#[test]
fn mixed_cumulants_vanish_to_order_five() {
    let g = families::two_odd();
    let rep = freeness_certificate(&g, 5, 1e-9).unwrap();
    assert!(rep.pass, "{:?}", rep.witnesses);
    assert!(rep.mixed_tuples > 0);
}
