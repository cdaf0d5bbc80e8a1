//! The category 𝒞(δ): objects [n] are 2n points, morphisms T(P,Q)^m_n join the points
//! over the intervals Q below and P above and cap or cup the rest without nesting. It acts
//! on loops of length 2n at a vertex v with δ = δ(v).

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::falg::sharp_mul;
use crate::gr::bullet_mul;
use crate::graph::{Graph, Path, VertexId};

/// T(P,Q)^m_n with P = [p_lo, p_lo+len) ⊆ [1..m] and Q = [q_lo, q_lo+len) ⊆ [1..n].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tpq {
    source: usize,
    target: usize,
    p_lo: usize,
    q_lo: usize,
    len: usize,
}

impl Tpq {
    /// Intervals are given as inclusive `(lo, hi)`; `hi < lo` means empty.
    pub fn new(source: usize, target: usize, p: (usize, usize), q: (usize, usize)) -> Result<Tpq> {
        let plen = (p.1 + 1).saturating_sub(p.0);
        let qlen = (q.1 + 1).saturating_sub(q.0);
        if plen != qlen {
            return Err(Error::Invalid(format!("|P| = {plen} but |Q| = {qlen}")));
        }
        if plen == 0 {
            return Ok(Tpq { source, target, p_lo: 1, q_lo: 1, len: 0 });
        }
        if p.0 == 0 || p.1 > target || q.0 == 0 || q.1 > source {
            return Err(Error::Invalid(format!("intervals {p:?}, {q:?} do not fit [{target}] and [{source}]")));
        }
        Ok(Tpq { source, target, p_lo: p.0, q_lo: q.0, len: plen })
    }

    pub fn identity(n: usize) -> Tpq {
        Tpq { source: n, target: n, p_lo: 1, q_lo: 1, len: n }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// |P| = |Q|.
    pub fn rank(&self) -> usize {
        self.len
    }

    /// (lo, hi) of P, `None` when empty.
    pub fn p(&self) -> Option<(usize, usize)> {
        (self.len > 0).then(|| (self.p_lo, self.p_lo + self.len - 1))
    }

    pub fn q(&self) -> Option<(usize, usize)> {
        (self.len > 0).then(|| (self.q_lo, self.q_lo + self.len - 1))
    }

    /// The order-preserving bijection P → Q.
    pub fn f_pq(&self, p: usize) -> usize {
        p + self.q_lo - self.p_lo
    }

    /// δ^{(n+m)/2 − |P|}.
    pub fn weight(&self, delta: f64) -> f64 {
        delta.powf((self.source + self.target) as f64 / 2.0 - self.len as f64)
    }

    /// Generators in the order they act: caps on the left, caps on the right, cups on the
    /// left, cups on the right. Without through strings every generator carries `+`.
    pub fn word(&self) -> Vec<Gen> {
        let (n, m, k) = (self.source, self.target, self.len);
        let mut w = Vec::new();
        if k == 0 {
            w.extend((1..=n).rev().map(Gen::Ap));
            w.extend((0..m).map(Gen::Cp));
            return w;
        }
        let (q0, q1) = self.q().expect("nonempty");
        let (p0, p1) = self.p().expect("nonempty");
        let mut cur = n;
        for _ in 1..q0 {
            w.push(Gen::Am(cur));
            cur -= 1;
        }
        for _ in q1..n {
            w.push(Gen::Ap(cur));
            cur -= 1;
        }
        for _ in 1..p0 {
            w.push(Gen::Cm(cur));
            cur += 1;
        }
        for _ in p1..m {
            w.push(Gen::Cp(cur));
            cur += 1;
        }
        w
    }
}

/// f ∘ g = δ^{n−|Q∪R|} T(Y,Z) with Y = f_PQ⁻¹(Q∩R), Z = f_RS(Q∩R). Returns the power and T(Y,Z).
pub fn tpq_compose(f: &Tpq, g: &Tpq) -> Result<(usize, Tpq)> {
    if g.target != f.source {
        return Err(Error::ObjectMismatch(format!(
            "[{}] → [{}] after [{}] → [{}]",
            f.source, f.target, g.source, g.target
        )));
    }
    let n = f.source;
    let (lo, hi) = match (f.q(), g.p()) {
        (Some(q), Some(r)) => (q.0.max(r.0), q.1.min(r.1)),
        _ => (1, 0),
    };
    let meet = (hi + 1).saturating_sub(lo);
    let union = f.len + g.len - meet;
    let composite = if meet == 0 {
        Tpq::new(g.source, f.target, (1, 0), (1, 0))?
    } else {
        let y = (lo + f.p_lo - f.q_lo, hi + f.p_lo - f.q_lo);
        let z = (g.f_pq(lo), g.f_pq(hi));
        Tpq::new(g.source, f.target, y, z)?
    };
    Ok((n - union, composite))
}

/// The generators A^n_± : [n] → [n−1] and C^n_± : [n] → [n+1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Am(usize),
    Ap(usize),
    Cm(usize),
    Cp(usize),
}

impl Gen {
    pub fn tpq(self) -> Tpq {
        let t = match self {
            Gen::Am(n) => Tpq::new(n, n - 1, (1, n - 1), (2, n)),
            Gen::Ap(n) => Tpq::new(n, n - 1, (1, n - 1), (1, n - 1)),
            Gen::Cm(n) => Tpq::new(n, n + 1, (2, n + 1), (1, n)),
            Gen::Cp(n) => Tpq::new(n, n + 1, (1, n), (1, n)),
        };
        t.expect("generator intervals are valid")
    }

    pub fn source(self) -> usize {
        match self {
            Gen::Am(n) | Gen::Ap(n) | Gen::Cm(n) | Gen::Cp(n) => n,
        }
    }
}

/// Action of one generator on a loop of length 2n at v.
pub fn act_gen_path(g: &Graph, v: VertexId, gen: Gen, xi: &Path) -> Elem {
    let mv = g.mu(v);
    match gen {
        Gen::Am(_) => {
            if xi.edge(1) != g.edge(xi.edge(2)).reversal {
                return Elem::zero();
            }
            Elem::term(xi.sub(g, 2, xi.len()), g.mu(xi.vertex(g, 1)) / mv)
        }
        Gen::Ap(_) => {
            let l = xi.len();
            if xi.edge(l - 1) != g.edge(xi.edge(l)).reversal {
                return Elem::zero();
            }
            Elem::term(xi.sub(g, 0, l - 2), g.mu(xi.vertex(g, l - 1)) / mv)
        }
        Gen::Cm(_) | Gen::Cp(_) => {
            let mut out = Elem::zero();
            for &rho in g.out_edges(v) {
                let back = g.edge(rho).reversal;
                let mut edges = Vec::with_capacity(xi.len() + 2);
                if matches!(gen, Gen::Cm(_)) {
                    edges.extend([rho, back]);
                    edges.extend_from_slice(&xi.edges);
                } else {
                    edges.extend_from_slice(&xi.edges);
                    edges.extend([rho, back]);
                }
                out.add_term(Path { start: v, edges }, g.mu(g.edge(rho).finish) / mv);
            }
            out
        }
    }
}

fn check_local(g: &Graph, v: VertexId, n: usize, x: &Elem) -> Result<()> {
    match x.iter().find(|(p, _)| p.len() != 2 * n || p.start != v || p.finish(g) != v) {
        Some((p, _)) => {
            Err(Error::Invalid(format!("{} is not a loop of length {} at {}", p.display(g), 2 * n, g.name(v))))
        }
        None => Ok(()),
    }
}

pub fn act_gen(g: &Graph, v: VertexId, gen: Gen, x: &Elem) -> Result<Elem> {
    check_local(g, v, gen.source(), x)?;
    Ok(x.map_linear(|p| act_gen_path(g, v, gen, p)))
}

/// Applies generators in order (first element acts first).
pub fn act_word(g: &Graph, v: VertexId, word: &[Gen], x: &Elem) -> Result<Elem> {
    let mut cur = x.clone();
    for &gen in word {
        cur = act_gen(g, v, gen, &cur)?;
    }
    Ok(cur)
}

/// Action of T(P,Q)^m_n on P_{2n}(Γ,v) through its generator word.
pub fn tpq_act(g: &Graph, v: VertexId, t: &Tpq, x: &Elem) -> Result<Elem> {
    check_local(g, v, t.source, x)?;
    act_word(g, v, &t.word(), x)
}

/// A relation between generator words, each listed in acting order, with the scalar on
/// the right-hand side.
pub struct Relation {
    pub name: &'static str,
    pub domain: usize,
    pub lhs: Vec<Gen>,
    pub rhs: Vec<Gen>,
    pub rhs_scalar_is_delta: bool,
}

/// The eight defining relations at level n.
pub fn relations(n: usize) -> Vec<Relation> {
    use Gen::*;
    let r = |name, domain, lhs, rhs, d| Relation { name, domain, lhs, rhs, rhs_scalar_is_delta: d };
    let mut out = Vec::new();
    if n == 0 {
        out.push(r("A1- = A1+", 1, vec![Am(1)], vec![Ap(1)], false));
        out.push(r("C0- = C0+", 0, vec![Cm(0)], vec![Cp(0)], false));
    }
    out.extend([
        r("A-A+ = A+A-", n + 2, vec![Ap(n + 2), Am(n + 1)], vec![Am(n + 2), Ap(n + 1)], false),
        r("A-C- = delta", n, vec![Cm(n), Am(n + 1)], vec![], true),
        r("A-C+ = C+A-", n + 1, vec![Cp(n + 1), Am(n + 2)], vec![Am(n + 1), Cp(n)], false),
        r("A+C- = C-A+", n + 1, vec![Cm(n + 1), Ap(n + 2)], vec![Ap(n + 1), Cm(n)], false),
        r("A+C+ = delta", n, vec![Cp(n), Ap(n + 1)], vec![], true),
        r("C-C+ = C+C-", n, vec![Cp(n), Cm(n + 1)], vec![Cm(n), Cp(n + 1)], false),
    ]);
    out
}

/// Symbolic value of a word: (power of δ, morphism).
pub fn word_tpq(word: &[Gen], domain: usize) -> Result<(usize, Tpq)> {
    let mut acc = (0, Tpq::identity(domain));
    for &gen in word {
        let (k, t) = tpq_compose(&gen.tpq(), &acc.1)?;
        acc = (acc.0 + k, t);
    }
    Ok(acc)
}

/// Max deviation of a relation as operators over every loop basis element of its domain.
pub fn relation_defect(g: &Graph, v: VertexId, rel: &Relation) -> Result<f64> {
    let delta = g.delta_v(v);
    let mut worst = 0.0f64;
    for xi in g.loops(v, 2 * rel.domain) {
        let x = Elem::basis(xi);
        let lhs = act_word(g, v, &rel.lhs, &x)?;
        let mut rhs = act_word(g, v, &rel.rhs, &x)?;
        if rel.rhs_scalar_is_delta {
            rhs = rhs.scale(delta);
        }
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Left words: A^1_- ⋯ A^k_- A^{k+1}_+ ⋯ A^{k+l}_+ and A^1_+ ⋯ A^{k+l}_+, in acting order.
pub fn cap_only_words(k: usize, l: usize) -> (Vec<Gen>, Vec<Gen>) {
    let mut lhs: Vec<Gen> = ((k + 1)..=(k + l)).rev().map(Gen::Ap).collect();
    lhs.extend((1..=k).rev().map(Gen::Am));
    let rhs = (1..=(k + l)).rev().map(Gen::Ap).collect();
    (lhs, rhs)
}

/// C^{k+l−1}_+ ⋯ C^k_+ C^{k−1}_- ⋯ C^0_- and C^{k+l−1}_+ ⋯ C^0_+, in acting order.
pub fn cup_only_words(k: usize, l: usize) -> (Vec<Gen>, Vec<Gen>) {
    let mut lhs: Vec<Gen> = (0..k).map(Gen::Cm).collect();
    lhs.extend((k..k + l).map(Gen::Cp));
    let rhs = (0..k + l).map(Gen::Cp).collect();
    (lhs, rhs)
}

/// c = C^0_-(e_v) = Σ_ρ μ(w)/μ(v) [ρρ̃].
pub fn c_element(g: &Graph, v: VertexId) -> Elem {
    act_gen_path(g, v, Gen::Cm(0), &Path::trivial(v))
}

/// c_{2n} = C^{n−1}_- ⋯ C^0_-(e_v); c_0 = e_v.
pub fn c_2n(g: &Graph, v: VertexId, n: usize) -> Elem {
    let word: Vec<Gen> = (0..n).map(Gen::Cm).collect();
    act_word(g, v, &word, &Elem::vertex(v)).expect("e_v is a loop at v")
}

/// d = Σ_{ρ: v→w} Σ_{ζ: w→x} μ(x)/μ(v) [ρ ζ ζ̃ ρ̃].
pub fn d_element(g: &Graph, v: VertexId) -> Elem {
    let mut out = Elem::zero();
    for &rho in g.out_edges(v) {
        let w = g.edge(rho).finish;
        for &zeta in g.out_edges(w) {
            let x = g.edge(zeta).finish;
            let edges = vec![rho, zeta, g.edge(zeta).reversal, g.edge(rho).reversal];
            out.add_term(Path { start: v, edges }, g.mu(x) / g.mu(v));
        }
    }
    out
}

/// Local norm on F(Γ,v): loops at v are orthonormal.
pub fn local_norm(x: &Elem) -> f64 {
    x.coeff_norm()
}

/// Inverse of x ↦ z = C^n_-(x) − C^n_+(x) on the complement of c_{2n}:
/// Σ_{t=1}^{n} δ^{−t} T([1,n+1−t],[t+1,n+1])^n_{n+1}(z).
pub fn commutator_inverse(g: &Graph, v: VertexId, n: usize, z: &Elem) -> Result<Elem> {
    let delta = g.delta_v(v);
    let mut out = Elem::zero();
    for t in 1..=n {
        let m = Tpq::new(n + 1, n, (1, n + 1 - t), (t + 1, n + 1))?;
        out.add_scaled(&tpq_act(g, v, &m, z)?, delta.powi(-(t as i32)));
    }
    Ok(out)
}

/// z = C^n_-(x) − C^n_+(x), the top-degree part of c#x − x#c.
pub fn commutator_top(g: &Graph, v: VertexId, n: usize, x: &Elem) -> Result<Elem> {
    Ok(act_gen(g, v, Gen::Cm(n), x)?.sub(&act_gen(g, v, Gen::Cp(n), x)?))
}

/// x − ⟨x, c_{2n}⟩ c_{2n}/‖c_{2n}‖².
pub fn project_off_c2n(g: &Graph, v: VertexId, n: usize, x: &Elem) -> Elem {
    let c = c_2n(g, v, n);
    let dot: f64 = x.iter().map(|(p, a)| a * c.coeff(p)).sum();
    let nn: f64 = c.iter().map(|(_, a)| a * a).sum();
    x.sub(&c.scale(dot / nn))
}

/// x_m = Σ_{n≤m} (−1)^n c_{2n}.
pub fn zv_truncation(g: &Graph, v: VertexId, m: usize) -> Elem {
    let mut out = Elem::zero();
    for n in 0..=m {
        out.add_scaled(&c_2n(g, v, n), if n % 2 == 0 { 1.0 } else { -1.0 });
    }
    out
}

/// x_m # [ξ] − (−1)^m c_{2m} • [ξ] for a length-one path ξ; zero when the truncation
/// annihilates ξ up to its top term.
pub fn zv_edge_defect(g: &Graph, v: VertexId, m: usize, xi: &Path) -> f64 {
    let x = zv_truncation(g, v, m);
    let lhs = sharp_mul(g, &x, &Elem::basis(xi.clone()));
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = bullet_mul(g, &c_2n(g, v, m), &Elem::basis(xi.clone())).scale(sign);
    lhs.max_abs_diff(&rhs)
}

/// C^pA^q on P_{2j}(Γ,v): q annihilations A^j_-, …, A^{j−q+1}_- followed by p creations
/// C^{j−q}_-, …, C^{j−q+p−1}_-.
pub fn cp_aq_word(j: usize, p: usize, q: usize) -> Vec<Gen> {
    let mut w: Vec<Gen> = (0..q).map(|s| Gen::Am(j - s)).collect();
    w.extend((0..p).map(|s| Gen::Cm(j - q + s)));
    w
}

/// The (i,j) block of λ(x_m) as a sign and a C^pA^q word, or `None` for a zero block.
pub fn zv_block(m: usize, i: usize, j: usize) -> Option<(f64, Vec<Gen>)> {
    let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    if m > i + j {
        return Some((sign(i + j), cp_aq_word(j, i, j)));
    }
    if m < i.abs_diff(j) || (i + j - m) % 2 == 1 {
        return None;
    }
    Some((sign(m), cp_aq_word(j, (m + i - j) / 2, (m + j - i) / 2)))
}

/// 1 + 2 Σ_{t≥1} δ^{t/2}, finite when δ < 1.
pub fn zv_norm_bound(delta: f64) -> f64 {
    let s = delta.sqrt();
    1.0 + 2.0 * s / (1.0 - s)
}

/// Center data of the corner at v.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CenterReport {
    pub vertex: String,
    pub delta_v: f64,
    pub center_dim: usize,
    pub atom_trace: Option<f64>,
    /// 1/(1−δ(v)) when δ(v) < 1: the idempotent scale of the limit of x_m.
    pub gamma: Option<f64>,
}

/// Requires a connected graph with at least two edges.
pub fn center_report(g: &Graph, v: VertexId) -> Result<CenterReport> {
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if !g.is_connected() || g.undirected_edge_count() < 2 {
        return Err(Error::Invalid("center report needs a connected graph with at least two edges".into()));
    }
    let d = g.delta_v(v);
    let atom = d < 1.0;
    Ok(CenterReport {
        vertex: g.name(v).to_string(),
        delta_v: d,
        center_dim: if atom { 2 } else { 1 },
        atom_trace: atom.then(|| (1.0 - d) * g.mu2(v)),
        gamma: atom.then(|| 1.0 / (1.0 - d)),
    })
}

/// (vertex, (1−δ(v))μ²(v)) for every v with δ(v) < 1.
pub fn atoms(g: &Graph) -> Vec<(VertexId, f64)> {
    (0..g.vertex_count()).filter(|&v| g.delta_v(v) < 1.0).map(|v| (v, (1.0 - g.delta_v(v)) * g.mu2(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn composition_examples() {
        for n in 0..4 {
            let (k, t) = tpq_compose(&Gen::Am(n + 1).tpq(), &Gen::Cm(n).tpq()).unwrap();
            assert_eq!((k, t), (1, Tpq::identity(n)));
            let lhs = tpq_compose(&Gen::Cm(n + 1).tpq(), &Gen::Cp(n).tpq()).unwrap();
            let rhs = tpq_compose(&Gen::Cp(n + 1).tpq(), &Gen::Cm(n).tpq()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let t = Tpq::new(5, 8, (4, 5), (3, 4)).unwrap();
        assert_eq!(t.f_pq(4), 3);
        assert_eq!(t.f_pq(5), 4);
        assert!(tpq_compose(&t, &t).is_err());
    }

    #[test]
    fn word_of_the_worked_morphism() {
        use Gen::*;
        let t = Tpq::new(5, 8, (4, 5), (3, 4)).unwrap();
        // Read right to left: A^5_- A^4_- A^3_+ C^2_- C^3_- C^4_- C^5_+ C^6_+ C^7_+.
        assert_eq!(t.word(), vec![Am(5), Am(4), Ap(3), Cm(2), Cm(3), Cm(4), Cp(5), Cp(6), Cp(7)]);
        assert_eq!(word_tpq(&t.word(), 5).unwrap(), (0, t));
    }

    #[test]
    fn c_and_d_on_a2() {
        let g = families::omega(1, 2.0 / 3.0, 1.0 / 3.0);
        let vwv = g.parse_path("v,w,v").unwrap();
        assert!(c_element(&g, 0).max_abs_diff(&Elem::term(vwv, g.mu(1) / g.mu(0))) < 1e-15);
        let d = d_element(&g, 0);
        assert!(d.max_abs_diff(&Elem::basis(g.parse_path("v,w,v,w,v").unwrap())) < 1e-15);
        let a = act_gen(&g, 0, Gen::Am(1), &c_element(&g, 0)).unwrap();
        assert!(a.max_abs_diff(&Elem::vertex(0).scale(g.delta_v(0))) < 1e-12);
    }

    #[test]
    fn center_examples() {
        assert!(center_report(&families::omega(1, 2.0 / 3.0, 1.0 / 3.0), 0).is_err());
        let g = families::omega(2, 2.0 / 3.0, 1.0 / 3.0);
        let r = center_report(&g, 1).unwrap();
        assert!((r.delta_v - 4.0).abs() < 1e-12 && r.center_dim == 1);
        let r = center_report(&g, 0).unwrap();
        assert!((r.delta_v - 1.0).abs() < 1e-12 && r.center_dim == 1);
        let g = families::omega(2, 0.8, 0.2);
        let r = center_report(&g, 0).unwrap();
        assert!((r.delta_v - 0.5).abs() < 1e-12 && r.center_dim == 2);
        assert!((r.atom_trace.unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(atoms(&g).len(), 1);
    }

    #[test]
    fn weights_of_generators() {
        let d = 2.5;
        for n in 0..4 {
            assert!((Gen::Cm(n).tpq().weight(d) - d.sqrt()).abs() < 1e-12);
            assert!((Gen::Cp(n).tpq().weight(d) - d.sqrt()).abs() < 1e-12);
            assert!((Tpq::identity(n).weight(d) - 1.0).abs() < 1e-12);
        }
    }
}
