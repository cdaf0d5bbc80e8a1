//! Operator-valued moments and free cumulants of length-two paths over the algebra
//! B spanned by the even vertex projections.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::elem::Elem;
use crate::epitl::{act_path, hom_cached, EpiMorphism};
use crate::error::{Error, Result};
use crate::falg::{phi, sharp_mul};
use crate::graph::{Graph, Parity, Path, VertexId};
use crate::noncross::{double_bijection, enumerate_nc, is_starry, mobius_nc, Partition};

/// An element Σ b_v e_v of B, indexed by vertex.
pub type BElem = Vec<f64>;

pub fn b_zero(g: &Graph) -> BElem {
    vec![0.0; g.vertex_count()]
}

pub fn b_max_abs(b: &BElem) -> f64 {
    b.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn b_max_diff(a: &BElem, b: &BElem) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Reads a degree-0 element as a B element; higher-degree terms are ignored.
pub fn b_from_elem(g: &Graph, x: &Elem) -> BElem {
    let mut b = b_zero(g);
    for (p, c) in x.iter().filter(|(p, _)| p.is_empty()) {
        b[p.start] += c;
    }
    b
}

/// x • b: each path is scaled by b at its finish vertex.
pub fn right_mul_b(g: &Graph, x: &Elem, b: &BElem) -> Elem {
    x.map_linear(|p| Elem::term(p.clone(), b[p.finish(g)]))
}

/// b • x: each path is scaled by b at its start vertex.
pub fn left_mul_b(x: &Elem, b: &BElem) -> Elem {
    x.map_linear(|p| Elem::term(p.clone(), b[p.start]))
}

/// A B-valued multilinear map evaluated on basis tuples of length-two paths.
pub trait BasisMap {
    fn eval(&self, g: &Graph, paths: &[&Path]) -> BElem;
}

impl<F: Fn(&Graph, &[&Path]) -> BElem> BasisMap for F {
    fn eval(&self, g: &Graph, paths: &[&Path]) -> BElem {
        self(g, paths)
    }
}

/// Multilinear extension of a basis map to arbitrary arguments.
pub fn eval_multilinear(g: &Graph, f: &dyn BasisMap, args: &[Elem]) -> BElem {
    fn rec<'a>(g: &Graph, f: &dyn BasisMap, args: &'a [Elem], chosen: &mut Vec<&'a Path>, coeff: f64, out: &mut BElem) {
        if chosen.len() == args.len() {
            let val = f.eval(g, chosen);
            out.iter_mut().zip(val).for_each(|(o, v)| *o += coeff * v);
            return;
        }
        for (p, c) in args[chosen.len()].iter() {
            chosen.push(p);
            rec(g, f, args, chosen, coeff * c, out);
            chosen.pop();
        }
    }
    let mut out = b_zero(g);
    rec(g, f, args, &mut Vec::with_capacity(args.len()), 1.0, &mut out);
    out
}

/// The concatenation ξ¹∘⋯∘ξⁿ, if defined.
pub fn compose_all(g: &Graph, paths: &[&Path]) -> Option<Path> {
    let mut acc = Path::trivial(paths.first()?.start);
    for p in paths {
        acc = acc.concat(g, p)?;
    }
    Some(acc)
}

/// φ_n: the sum of the actions of all of Hom([2n],[0]) on the composite path.
pub fn moment_phi(g: &Graph, paths: &[&Path]) -> BElem {
    let mut out = b_zero(g);
    let Some(xi) = compose_all(g, paths) else {
        return out;
    };
    for s in hom_cached(xi.len(), 0, false).iter() {
        if let Some((q, c)) = act_path(g, s, &xi) {
            out[q.start] += c;
        }
    }
    out
}

/// φ_n through the filtered picture: the degree-0 part of φ(ξ¹)#⋯#φ(ξⁿ).
pub fn moment_phi_filtered(g: &Graph, paths: &[&Path]) -> BElem {
    let mut acc = Elem::one(g);
    for p in paths {
        acc = sharp_mul(g, &acc, &phi(g, &Elem::basis((*p).clone())));
    }
    b_from_elem(g, &acc)
}

/// Which interval block the multiplicative extension removes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extraction {
    First,
    Last,
}

/// f_π: remove an interval block [k+1, l], evaluate f on it, absorb the value into the
/// neighbouring argument (x^k•b, or b•x^{l+1} when k = 0) and recurse.
pub fn multiplicative_extension(
    g: &Graph,
    f: &dyn BasisMap,
    pi: &Partition,
    args: &[Elem],
    order: Extraction,
) -> Result<BElem> {
    if pi.size() != args.len() {
        return Err(Error::Invalid(format!("partition of {} points for {} arguments", pi.size(), args.len())));
    }
    if pi.block_count() <= 1 {
        return Ok(eval_multilinear(g, f, args));
    }
    let blocks = pi.interval_blocks();
    let (k, l) = match order {
        Extraction::First => blocks[0],
        Extraction::Last => blocks[blocks.len() - 1],
    };
    let b = eval_multilinear(g, f, &args[k..l]);
    let mut rest: Vec<Elem> = Vec::with_capacity(args.len() - (l - k));
    rest.extend_from_slice(&args[..k]);
    rest.extend_from_slice(&args[l..]);
    if k >= 1 {
        rest[k - 1] = right_mul_b(g, &rest[k - 1], &b);
    } else {
        rest[0] = left_mul_b(&rest[0], &b);
    }
    multiplicative_extension(g, f, &pi.remove_interval(k, l), &rest, order)
}

fn basis_args(paths: &[&Path]) -> Vec<Elem> {
    paths.iter().map(|p| Elem::basis((*p).clone())).collect()
}

/// κ_n = Σ_{π∈NC(n)} μ(π, 1_n) φ_π, from any moment map.
pub fn kappa_mobius_with(g: &Graph, moments: &dyn BasisMap, paths: &[&Path]) -> BElem {
    let n = paths.len();
    let args = basis_args(paths);
    let full = Partition::full(n);
    let mut out = b_zero(g);
    for pi in enumerate_nc(n) {
        let mu = mobius_nc(&pi, &full).expect("π ≤ 1_n") as f64;
        let val = multiplicative_extension(g, moments, &pi, &args, Extraction::Last).expect("sizes match");
        out.iter_mut().zip(val).for_each(|(o, v)| *o += mu * v);
    }
    out
}

/// κ_n by Möbius inversion of [`moment_phi`].
pub fn kappa_mobius(g: &Graph, paths: &[&Path]) -> BElem {
    kappa_mobius_with(g, &moment_phi, paths)
}

/// Closed form: zero unless ξ = ξ¹∘⋯∘ξⁿ is starry, in which case
/// μ(v_2)μ(v_4)⋯μ(v_{2n−2}) / (μ(w)^{n−2} μ(v)) e_v.
pub fn kappa_closed(g: &Graph, paths: &[&Path]) -> BElem {
    let mut out = b_zero(g);
    let Some(xi) = compose_all(g, paths) else {
        return out;
    };
    if xi.is_empty() || !is_starry(g, &xi).unwrap_or(false) {
        return out;
    }
    let n = paths.len();
    let (v, w) = (xi.start, xi.vertex(g, 1));
    let num: f64 = (1..n).map(|i| g.mu(xi.vertex(g, 2 * i))).product();
    out[v] = num / (g.mu(w).powi(n as i32 - 2) * g.mu(v));
    out
}

/// Σ_{π∈NC(n)} κ_π from the closed-form cumulants.
pub fn moment_from_cumulants(g: &Graph, kappa: &dyn BasisMap, paths: &[&Path]) -> BElem {
    let args = basis_args(paths);
    let mut out = b_zero(g);
    for pi in enumerate_nc(paths.len()) {
        let val = multiplicative_extension(g, kappa, &pi, &args, Extraction::First).expect("sizes match");
        out.iter_mut().zip(val).for_each(|(o, v)| *o += v);
    }
    out
}

/// S(π) as an element of Hom([2n],[0]).
pub fn double_morphism(pi: &Partition) -> EpiMorphism {
    let t = double_bijection(pi);
    let lefts = t.blocks().iter().map(|b| b[0]).collect();
    EpiMorphism::new(2 * pi.size(), 0, lefts).expect("a TL pairing gives a valid Hom([2n],[0]) element")
}

/// S(π)[ξ¹∘⋯∘ξⁿ] by the epi-TL action.
pub fn double_action(g: &Graph, pi: &Partition, paths: &[&Path]) -> BElem {
    let mut out = b_zero(g);
    if let Some(xi) = compose_all(g, paths) {
        if let Some((q, c)) = act_path(g, &double_morphism(pi), &xi) {
            out[q.start] += c;
        }
    }
    out
}

/// Blockwise product: for C = {c_1<…<c_t}, the closing factor δ_{ξ^{c_t}_2, ξ̃^{c_1}_1} μ(v^{c_1}_1)/μ(v^{c_t}_2)
/// times Π_p δ_{ξ^{c_p}_2, ξ̃^{c_{p+1}}_1} μ(v^{c_p}_2)/μ(v^{c_{p+1}}_1), all on e at the start vertex.
pub fn double_product_formula(g: &Graph, pi: &Partition, paths: &[&Path]) -> BElem {
    let mut out = b_zero(g);
    if compose_all(g, paths).is_none() {
        return out;
    }
    let pair = |a: &Path, b: &Path| -> Option<f64> {
        (a.edge(2) == g.edge(b.edge(1)).reversal).then(|| g.mu(a.vertex(g, 2)) / g.mu(b.vertex(g, 1)))
    };
    let mut coeff = 1.0;
    for c in pi.blocks() {
        let (first, last) = (paths[c[0] - 1], paths[c[c.len() - 1] - 1]);
        if last.edge(2) != g.edge(first.edge(1)).reversal {
            return out;
        }
        coeff *= g.mu(first.vertex(g, 1)) / g.mu(last.vertex(g, 2));
        for w in c.windows(2) {
            match pair(paths[w[0] - 1], paths[w[1] - 1]) {
                Some(f) => coeff *= f,
                None => return out,
            }
        }
    }
    out[paths[0].start] = coeff;
    out
}

/// Every chain of n length-two paths between even vertices that closes into a loop.
pub fn closed_chains(g: &Graph, n: usize) -> Vec<Vec<Path>> {
    let mut out = Vec::new();
    for v in g.vertices_of(Parity::Even) {
        for lp in g.loops(v, 2 * n) {
            out.push((0..n).map(|i| lp.sub(g, 2 * i, 2 * i + 2)).collect());
        }
    }
    out
}

/// Middle (odd) vertices of a chain.
pub fn middles(g: &Graph, chain: &[Path]) -> BTreeSet<VertexId> {
    chain.iter().map(|p| p.vertex(g, 1)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub max_order: usize,
    pub tuples_checked: usize,
    pub mixed_tuples: usize,
    pub max_mixed_cumulant: f64,
    pub max_closed_form_gap: f64,
    pub max_double_gap: f64,
    pub witnesses: Vec<String>,
    pub pass: bool,
    pub note: String,
}

/// Checks up to order N that every mixed cumulant vanishes, that the Möbius and closed-form
/// cumulants agree, and that the blockwise product matches the S(π) action.
pub fn freeness_certificate(g: &Graph, max_order: usize, tol: f64) -> Result<FreenessReport> {
    if max_order < 2 {
        return Err(Error::Invalid("freeness needs an order of at least 2".into()));
    }
    let mut rep = FreenessReport {
        max_order,
        tuples_checked: 0,
        mixed_tuples: 0,
        max_mixed_cumulant: 0.0,
        max_closed_form_gap: 0.0,
        max_double_gap: 0.0,
        witnesses: Vec::new(),
        pass: true,
        note: format!("exhaustive over closed chains of order ≤ {max_order}; a finite check, not a proof"),
    };
    for n in 1..=max_order {
        let partitions = enumerate_nc(n);
        for chain in closed_chains(g, n) {
            let refs: Vec<&Path> = chain.iter().collect();
            let k = kappa_mobius(g, &refs);
            let closed = kappa_closed(g, &refs);
            rep.tuples_checked += 1;
            let gap = b_max_diff(&k, &closed);
            rep.max_closed_form_gap = rep.max_closed_form_gap.max(gap);
            let show = || chain.iter().map(|p| p.display(g)).collect::<Vec<_>>().join(" | ");
            if gap > tol && rep.witnesses.len() < 10 {
                rep.witnesses.push(format!("closed form differs by {gap:.3e} on {}", show()));
            }
            if middles(g, &chain).len() > 1 {
                rep.mixed_tuples += 1;
                let m = b_max_abs(&k);
                rep.max_mixed_cumulant = rep.max_mixed_cumulant.max(m);
                if m > tol && rep.witnesses.len() < 10 {
                    rep.witnesses.push(format!("mixed cumulant {m:.3e} on {}", show()));
                }
            }
            if n <= 3 {
                for pi in &partitions {
                    let d = b_max_diff(&double_action(g, pi, &refs), &double_product_formula(g, pi, &refs));
                    rep.max_double_gap = rep.max_double_gap.max(d);
                }
            }
        }
    }
    rep.pass = rep.max_mixed_cumulant <= tol && rep.max_closed_form_gap <= tol && rep.max_double_gap <= tol;
    Ok(rep)
}
