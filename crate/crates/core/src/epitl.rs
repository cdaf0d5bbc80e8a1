//! The epi-Temperley-Lieb category: morphisms `[n] → [m]` in which every target point is
//! joined to a source point, stored as the sorted left endpoints of their caps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpiMorphism {
    source: usize,
    target: usize,
    caps: Vec<usize>,
}

/// Decoded diagram: caps as (left, right) pairs and the through points, both increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub caps: Vec<(usize, usize)>,
    pub through: Vec<usize>,
}

impl EpiMorphism {
    /// Validates that `caps` are increasing left endpoints with `i_j ≤ m + 2j − 1`.
    pub fn new(source: usize, target: usize, caps: Vec<usize>) -> Result<EpiMorphism> {
        if target > source || (source - target) % 2 == 1 {
            return Err(Error::Invalid(format!("no epi morphism [{source}] → [{target}]")));
        }
        if caps.len() != (source - target) / 2 {
            return Err(Error::Invalid(format!("[{source}] → [{target}] needs {} caps", (source - target) / 2)));
        }
        for (j, &i) in caps.iter().enumerate() {
            if i == 0 || i > target + 2 * j + 1 || (j > 0 && i <= caps[j - 1]) {
                return Err(Error::Invalid(format!("cap tuple {caps:?} is not canonical")));
            }
        }
        Ok(EpiMorphism { source, target, caps })
    }

    pub fn identity(n: usize) -> EpiMorphism {
        EpiMorphism { source: n, target: n, caps: Vec::new() }
    }

    /// S^n_i: caps points i and i+1 of [n].
    pub fn generator(n: usize, i: usize) -> Result<EpiMorphism> {
        if n < 2 || i == 0 || i >= n {
            return Err(Error::Invalid(format!("S^{n}_{i} does not exist")));
        }
        EpiMorphism::new(n, n - 2, vec![i])
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    /// Caps never contain one another.
    pub fn is_nonnested(&self) -> bool {
        self.caps.windows(2).all(|w| w[1] >= w[0] + 2)
    }

    /// Stack scan: a left endpoint opens a cap, any other point closes the most recent
    /// open cap or, when none is open, is a through point.
    pub fn diagram(&self) -> Diagram {
        let mut caps = Vec::with_capacity(self.caps.len());
        let mut through = Vec::with_capacity(self.target);
        let mut stack = Vec::new();
        let mut next = self.caps.iter().peekable();
        for p in 1..=self.source {
            if next.peek() == Some(&&p) {
                next.next();
                stack.push(p);
            } else if let Some(l) = stack.pop() {
                caps.push((l, p));
            } else {
                through.push(p);
            }
        }
        caps.sort_unstable();
        Diagram { caps, through }
    }

    /// The canonical word S^{m+2}_{i_1} S^{m+4}_{i_2} ⋯ S^{m+2k}_{i_k} as (superscript, index).
    pub fn word(&self) -> Vec<(usize, usize)> {
        self.caps.iter().enumerate().map(|(j, &i)| (self.target + 2 * (j + 1), i)).collect()
    }

    /// The composite of a word read as operators (rightmost letter acts first).
    pub fn from_word(word: &[(usize, usize)]) -> Result<EpiMorphism> {
        let mut acc: Option<EpiMorphism> = None;
        for &(n, i) in word.iter().rev() {
            let s = EpiMorphism::generator(n, i)?;
            acc = Some(match acc {
                None => s,
                Some(g) => compose(&s, &g)?,
            });
        }
        acc.ok_or_else(|| Error::Invalid("empty word".into()))
    }
}

/// f ∘ g for g: [p] → [n] and f: [n] → [m], by tracing strands through the stacked diagram.
pub fn compose(f: &EpiMorphism, g: &EpiMorphism) -> Result<EpiMorphism> {
    if g.target != f.source {
        return Err(Error::ObjectMismatch(format!(
            "cannot compose [{}]→[{}] after [{}]→[{}]",
            f.source, f.target, g.source, g.target
        )));
    }
    let dg = g.diagram();
    let df = f.diagram();
    let mut lefts: Vec<usize> = dg.caps.iter().map(|&(l, _)| l).collect();
    // A cap {a,b} of f joins the through strands of g ending at a and b.
    lefts.extend(df.caps.iter().map(|&(a, _)| dg.through[a - 1]));
    lefts.sort_unstable();
    EpiMorphism::new(g.source, f.target, lefts)
}

/// Rewrites a word with S^{n−2}_p S^n_q = S^{n−2}_q S^n_{p+2} (p ≥ q) until the indices
/// increase left to right. Independent of [`compose`]; used as its oracle.
pub fn canonicalize_word(word: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut w = word.to_vec();
    loop {
        let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k].1 >= w[k + 1].1) else {
            return w;
        };
        let (p, q) = (w[k].1, w[k + 1].1);
        w[k].1 = q;
        w[k + 1].1 = p + 2;
    }
}

/// Cap tuples with `i_1 < … < i_k` and `i_j ≤ m + 2j − 1`, lexicographic.
pub fn enumerate_hom(n: usize, m: usize, nonnested_only: bool) -> Vec<EpiMorphism> {
    if m > n || (n - m) % 2 == 1 {
        return Vec::new();
    }
    let k = (n - m) / 2;
    let mut out = Vec::new();
    let mut caps = Vec::with_capacity(k);
    fn rec(j: usize, k: usize, n: usize, m: usize, nn: bool, caps: &mut Vec<usize>, out: &mut Vec<EpiMorphism>) {
        if j == k {
            out.push(EpiMorphism { source: n, target: m, caps: caps.clone() });
            return;
        }
        let lo = match caps.last() {
            None => 1,
            Some(&prev) if nn => prev + 2,
            Some(&prev) => prev + 1,
        };
        for i in lo..=m + 2 * j + 1 {
            caps.push(i);
            rec(j + 1, k, n, m, nn, caps, out);
            caps.pop();
        }
    }
    rec(0, k, n, m, nonnested_only, &mut caps, &mut out);
    out
}

type HomKey = (usize, usize, bool);

/// Shared cache of Hom sets; they are reused by every φ/ψ and cumulant evaluation.
pub fn hom_cached(n: usize, m: usize, nonnested_only: bool) -> Arc<Vec<EpiMorphism>> {
    static CACHE: OnceLock<Mutex<HashMap<HomKey, Arc<Vec<EpiMorphism>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("hom cache poisoned");
    guard.entry((n, m, nonnested_only)).or_insert_with(|| Arc::new(enumerate_hom(n, m, nonnested_only))).clone()
}

/// Action on one basis path of length `source`: the product over caps {i<j} of
/// δ_{ξ_i, ξ̃_j} μ(v_i)/μ(v_j), times the through edges concatenated in order.
pub fn act_path(g: &Graph, s: &EpiMorphism, xi: &Path) -> Option<(Path, f64)> {
    debug_assert_eq!(xi.len(), s.source);
    let d = s.diagram();
    let mut coeff = 1.0;
    for &(i, j) in &d.caps {
        if xi.edge(i) != g.edge(xi.edge(j)).reversal {
            return None;
        }
        coeff *= g.mu(xi.vertex(g, i)) / g.mu(xi.vertex(g, j));
    }
    let path = match d.through.first() {
        None => Path::trivial(xi.finish(g)),
        Some(&t) => Path { start: xi.vertex(g, t - 1), edges: d.through.iter().map(|&t| xi.edge(t)).collect() },
    };
    Some((path, coeff))
}

/// Linear action on P_n; every term of `x` must have length n = source(s).
pub fn act(g: &Graph, s: &EpiMorphism, x: &Elem) -> Result<Elem> {
    if let Some((p, _)) = x.iter().find(|(p, _)| p.len() != s.source) {
        return Err(Error::Invalid(format!("degree {} term given to a morphism from [{}]", p.len(), s.source)));
    }
    Ok(x.map_linear(|p| act_path(g, s, p).map_or_else(Elem::zero, |(q, c)| Elem::term(q, c))))
}

/// Action of a word, one generator at a time using only the single-cap rule
/// S^n_i[ξ] = δ_{ξ_i, ξ̃_{i+1}} μ(v_i)/μ(v_{i−1}) [ξ_{[0,i−1]} ξ_{[i+1,n]}].
pub fn act_word(g: &Graph, word: &[(usize, usize)], x: &Elem) -> Elem {
    let mut cur = x.clone();
    for &(n, i) in word.iter().rev() {
        cur = cur.map_linear(|p| {
            if p.len() != n || p.edge(i) != g.edge(p.edge(i + 1)).reversal {
                return Elem::zero();
            }
            let mut edges = p.edges.clone();
            edges.drain(i - 1..i + 1);
            let start = if i == 1 { p.vertex(g, 2) } else { p.start };
            Elem::term(Path { start, edges }, g.mu(p.vertex(g, i)) / g.mu(p.vertex(g, i - 1)))
        });
    }
    cur
}

/// Telescoped closed form for S ∈ Hom([2n],[0]): caps inside the first half contribute
/// μ(v_i)/μ(v_j), caps crossing the middle contribute only their Kronecker delta, caps inside
/// the second half contribute μ(v_i)/μ(v_j), and an overall μ(v_n)/μ(v_{2n}) remains.
pub fn telescoped_closed_form(g: &Graph, s: &EpiMorphism, xi: &Path) -> Result<Elem> {
    if s.target != 0 || xi.len() != s.source {
        return Err(Error::Invalid("closed form needs S ∈ Hom([2n],[0]) and a path of length 2n".into()));
    }
    let n = s.source / 2;
    let mut coeff = g.mu(xi.vertex(g, n)) / g.mu(xi.vertex(g, 2 * n));
    for (i, j) in s.diagram().caps {
        if xi.edge(i) != g.edge(xi.edge(j)).reversal {
            return Ok(Elem::zero());
        }
        let crossing = i <= n && j > n;
        if !crossing {
            coeff *= g.mu(xi.vertex(g, i)) / g.mu(xi.vertex(g, j));
        }
    }
    Ok(Elem::term(Path::trivial(xi.vertex(g, 2 * n)), coeff))
}

/// Compares [`act`] with [`telescoped_closed_form`] on one path.
pub fn telescoping_check(g: &Graph, s: &EpiMorphism, xi: &Path, tol: f64) -> Result<bool> {
    let lhs = act(g, s, &Elem::basis(xi.clone()))?;
    let rhs = telescoped_closed_form(g, s, xi)?;
    Ok(lhs.max_abs_diff(&rhs) <= tol)
}

/// (S^n_i)* on the orthonormal basis {η}, η of length n−2:
/// Σ over edges ρ from v^η_{i−1} to w of μ(w)/μ(v^η_{i−1}) {η_{[0,i−1]} ρ ρ̃ η_{[i−1,n−2]}}.
pub fn generator_adjoint(g: &Graph, i: usize, eta: &Path) -> Elem {
    let v = eta.vertex(g, i - 1);
    let mut out = Elem::zero();
    for &rho in g.out_edges(v) {
        let w = g.edge(rho).finish;
        let mut edges = eta.edges[..i - 1].to_vec();
        edges.push(rho);
        edges.push(g.edge(rho).reversal);
        edges.extend_from_slice(&eta.edges[i - 1..]);
        out.add_term(Path { start: eta.start, edges }, g.mu(w) / g.mu(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn caps(list: &[EpiMorphism]) -> Vec<Vec<usize>> {
        list.iter().map(|s| s.caps().to_vec()).collect()
    }

    #[test]
    fn compose_examples() {
        let s21 = EpiMorphism::generator(2, 1).unwrap();
        let c = compose(&s21, &EpiMorphism::generator(4, 3).unwrap()).unwrap();
        assert_eq!(c.caps(), &[1, 3]);
        let c = compose(&s21, &EpiMorphism::generator(4, 2).unwrap()).unwrap();
        assert_eq!(c.caps(), &[1, 2]);
        assert!(!c.is_nonnested());
        let f = EpiMorphism::new(5, 1, vec![2, 3]).unwrap();
        assert_eq!(compose(&EpiMorphism::identity(1), &f).unwrap(), f);
        assert_eq!(compose(&f, &EpiMorphism::identity(5)).unwrap(), f);
        assert!(compose(&s21, &s21).is_err());
    }

    #[test]
    fn hom_examples() {
        assert_eq!(caps(&enumerate_hom(4, 0, false)), vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(caps(&enumerate_hom(4, 0, true)), vec![vec![1, 3]]);
        assert_eq!(caps(&enumerate_hom(3, 1, false)), vec![vec![1], vec![2]]);
        assert!(enumerate_hom(3, 0, false).is_empty());
    }

    #[test]
    fn rewriting_examples() {
        assert_eq!(canonicalize_word(&[(2, 1), (4, 3)]), vec![(2, 1), (4, 3)]);
        assert_eq!(canonicalize_word(&[(2, 1), (4, 1)]), vec![(2, 1), (4, 3)]);
        assert_eq!(canonicalize_word(&[(2, 2), (4, 1)]), vec![(2, 1), (4, 4)]);
    }

    #[test]
    fn a2_generator_action() {
        let g = families::a2();
        let xi = g.parse_path("v,w,v").unwrap();
        let s = EpiMorphism::generator(2, 1).unwrap();
        let got = act(&g, &s, &Elem::basis(xi)).unwrap();
        assert!(got.max_abs_diff(&Elem::term(Path::trivial(0), g.mu(1) / g.mu(0))) < 1e-12);
        let h = families::double_edge();
        let bad = h.parse_path("v1,w:0,v1:1").unwrap();
        assert!(act(&h, &s, &Elem::basis(bad)).unwrap().is_zero());
    }

    #[test]
    fn nested_cap_telescopes() {
        let g = families::a3();
        let s = EpiMorphism::new(4, 0, vec![1, 2]).unwrap();
        for xi in g.loops(0, 4) {
            let want = Elem::term(Path::trivial(0), g.mu(xi.vertex(&g, 2)) / g.mu(xi.vertex(&g, 4)));
            assert!(act(&g, &s, &Elem::basis(xi)).unwrap().max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn telescoping_on_ten_point_relation() {
        // Left endpoints of {{1,10},{2,7},{3,6},{4,5},{8,9}}.
        let s = EpiMorphism::new(10, 0, vec![1, 2, 3, 4, 8]).unwrap();
        let d = s.diagram();
        assert_eq!(d.caps, vec![(1, 10), (2, 7), (3, 6), (4, 5), (8, 9)]);
        let g = families::a3();
        for xi in g.paths(None, 10, None) {
            assert!(telescoping_check(&g, &s, &xi, 1e-12).unwrap());
        }
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let g = families::a2();
        let s = EpiMorphism::generator(2, 1).unwrap();
        assert!(act(&g, &s, &Elem::vertex(0)).is_err());
    }
}
