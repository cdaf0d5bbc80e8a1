//! Seeded random graphs and elements shared by the property tests.
#![allow(dead_code)]

use pathalg::graph::families;
use pathalg::{Elem, Graph, Path};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small graphs where random paths compose often enough to exercise products.
pub fn test_graphs() -> Vec<Graph> {
    vec![
        families::a2(),
        families::a3(),
        families::a4(),
        families::k1n(2),
        families::k1n(3),
        families::double_edge(),
        families::omega(2, 0.6, 0.4),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_path(g: &Graph, rng: &mut ChaCha8Rng, len: usize) -> Path {
    let all = g.paths(None, len, None);
    all[rng.gen_range(0..all.len())].clone()
}

/// `terms` random paths of length ≤ `max_deg` with coefficients in [−1, 1].
pub fn random_elem(g: &Graph, rng: &mut ChaCha8Rng, max_deg: usize, terms: usize) -> Elem {
    let mut x = Elem::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_deg);
        x.add_term(random_path(g, rng, len), rng.gen_range(-1.0..1.0));
    }
    x
}

/// Every path of length `deg` with a random coefficient.
pub fn random_homogeneous(g: &Graph, rng: &mut ChaCha8Rng, deg: usize) -> Elem {
    Elem::from_terms(g.paths(None, deg, None).into_iter().map(|p| (p, rng.gen_range(-1.0..1.0))))
}
