//! The filtered picture: the # product, the functional t, the φ/ψ isomorphism pair and
//! truncations of the left regular representation.

use nalgebra::DMatrix;

use crate::elem::Elem;
use crate::epitl::{act_path, act_word, hom_cached};
use crate::error::{Error, Result};
use crate::gr::star;
use crate::graph::{Graph, Path};

/// [ξ]#[η]: with ζ = ξ∘η, the sum over k of S^{m+n−2(k−1)}_{m−k+1} ⋯ S^{m+n}_m [ζ].
pub fn sharp_mul_paths(g: &Graph, xi: &Path, eta: &Path) -> Elem {
    let Some(zeta) = xi.concat(g, eta) else {
        return Elem::zero();
    };
    let (m, n) = (xi.len(), eta.len());
    let mut term = Elem::basis(zeta);
    let mut out = term.clone();
    for k in 1..=m.min(n) {
        term = act_word(g, &[(m + n - 2 * (k - 1), m - k + 1)], &term);
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
    }
    out
}

pub fn sharp_mul(g: &Graph, x: &Elem, y: &Elem) -> Elem {
    x.map_bilinear(y, |p, q| sharp_mul_paths(g, p, q))
}

/// t: [(v)] ↦ μ²(v), zero on positive degrees.
pub fn t_functional(g: &Graph, x: &Elem) -> f64 {
    x.iter().filter(|(p, _)| p.is_empty()).map(|(p, c)| c * g.mu2(p.start)).sum()
}

/// ⟨x, y⟩ = t(y* # x).
pub fn inner(g: &Graph, x: &Elem, y: &Elem) -> f64 {
    t_functional(g, &sharp_mul(g, &star(g, y), x))
}

/// φ: each degree-n path goes to the sum of its images under all of Hom([n],[m]), m ≤ n.
pub fn phi(g: &Graph, x: &Elem) -> Elem {
    x.map_linear(|p| hom_sum(g, p, false))
}

/// ψ: (−1)^k times the non-nested elements with k caps.
pub fn psi(g: &Graph, x: &Elem) -> Elem {
    x.map_linear(|p| hom_sum(g, p, true))
}

fn hom_sum(g: &Graph, p: &Path, alternating_nonnested: bool) -> Elem {
    let n = p.len();
    let mut out = Elem::zero();
    for k in 0..=n / 2 {
        let sign = if alternating_nonnested && k % 2 == 1 { -1.0 } else { 1.0 };
        for s in hom_cached(n, n - 2 * k, alternating_nonnested).iter() {
            if let Some((q, c)) = act_path(g, s, p) {
                out.add_term(q, sign * c);
            }
        }
    }
    out
}

/// √(μ(s(ξ))μ(f(ξ))), the scale between [ξ] and the orthonormal {ξ}.
pub fn brace_scale(g: &Graph, p: &Path) -> f64 {
    (g.mu(p.start) * g.mu(p.finish(g))).sqrt()
}

/// Coefficient of {q} in x.
pub fn brace_coeff(g: &Graph, x: &Elem, q: &Path) -> f64 {
    x.coeff(q) * brace_scale(g, q)
}

/// {ξ} = [ξ]/√(μ(s)μ(f)) as an element.
pub fn brace(g: &Graph, p: &Path) -> Elem {
    Elem::term(p.clone(), 1.0 / brace_scale(g, p))
}

/// All paths of length ≤ n, by length and then path order.
pub fn paths_up_to(g: &Graph, n: usize) -> Vec<Path> {
    (0..=n).flat_map(|k| g.paths(None, k, None)).collect()
}

/// P_N λ(a) P_N in the {ξ} basis of ⊕_{k≤N} P_k; returns the matrix and the basis.
pub fn truncated_left_mult(g: &Graph, a: &Elem, cap: usize) -> (DMatrix<f64>, Vec<Path>) {
    let basis = paths_up_to(g, cap);
    let m = crate::linalg::matrix_of(&basis, &basis, |p| {
        sharp_mul(g, a, &brace(g, p)).map_linear(|q| Elem::term(q.clone(), brace_scale(g, q)))
    });
    (m, basis)
}

/// Σ_ξ |c_ξ| (2m+1) max{1, δ^{m/2}}/μ(f(ξ)) over the {ξ}-expansion of a homogeneous a.
pub fn left_mult_bound(g: &Graph, a: &Elem) -> Result<f64> {
    let Some(m) = a.max_degree() else {
        return Ok(0.0);
    };
    if a.iter().any(|(p, _)| p.len() != m) {
        return Err(Error::Invalid("norm bound needs a homogeneous element".into()));
    }
    let delta = g.delta_max();
    let k_num = (2 * m + 1) as f64 * 1f64.max(delta.powf(m as f64 / 2.0));
    Ok(a.iter().map(|(p, _)| brace_coeff(g, a, p).abs() * k_num / g.mu(p.finish(g))).sum())
}
