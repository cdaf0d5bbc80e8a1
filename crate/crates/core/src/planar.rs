//! The path model of a Temperley-Lieb type planar algebra on a PF-weighted graph with a
//! distinguished vertex *: matrix-unit towers, Jones projections, Temperley-Lieb elements,
//! the graded products on ⊕P_n and the maps θ, θ₁ from the loop algebras.

use std::collections::{BTreeMap, HashMap};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexId};
use crate::noncross::{enumerate_tl, Partition, TlPairing};

/// Basis element (ξ(+), ξ(−)) of P_n: two paths of length n from * with a common finish.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathPair {
    pub plus: Path,
    pub minus: Path,
}

impl PathPair {
    pub fn level(&self) -> usize {
        self.minus.len()
    }

    /// The loop ξ(−) ∘ ξ̃(+) at *.
    pub fn to_loop(&self, g: &Graph) -> Path {
        self.minus.concat(g, &self.plus.reverse(g)).expect("pair paths share a finish")
    }

    /// Inverse of [`PathPair::to_loop`] for an even loop: (ξ̃_{[n,2n]}, ξ_{[0,n]}).
    pub fn from_loop(g: &Graph, xi: &Path) -> PathPair {
        let n = xi.len() / 2;
        PathPair { plus: xi.sub(g, n, 2 * n).reverse(g), minus: xi.sub(g, 0, n) }
    }
}

/// A linear combination of basis pairs at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElement {
    pub level: usize,
    pub terms: BTreeMap<PathPair, f64>,
}

impl TowerElement {
    pub fn zero(level: usize) -> TowerElement {
        TowerElement { level, terms: BTreeMap::new() }
    }

    pub fn basis(p: PathPair) -> TowerElement {
        TowerElement::term(p, 1.0)
    }

    pub fn term(p: PathPair, c: f64) -> TowerElement {
        let mut x = TowerElement::zero(p.level());
        x.add_term(p, c);
        x
    }

    pub fn add_term(&mut self, p: PathPair, c: f64) {
        debug_assert_eq!(p.level(), self.level);
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(p).or_insert(0.0);
        *e += c;
    }

    pub fn coeff(&self, p: &PathPair) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, s: f64) -> TowerElement {
        TowerElement { level: self.level, terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect() }
    }

    pub fn add(&self, other: &TowerElement) -> Result<TowerElement> {
        same_level(self, other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), *c);
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest coefficient difference; infinite across levels.
    pub fn max_abs_diff(&self, other: &TowerElement) -> f64 {
        if self.level != other.level {
            return f64::INFINITY;
        }
        let a = self.terms.iter().map(|(p, c)| (c - other.coeff(p)).abs());
        let b = other.terms.iter().filter(|(p, _)| !self.terms.contains_key(p)).map(|(_, c)| c.abs());
        a.chain(b).fold(0.0, f64::max)
    }

    /// The same element read as loops at *.
    pub fn to_loops(&self, g: &Graph) -> Elem {
        Elem::from_terms(self.terms.iter().map(|(p, c)| (p.to_loop(g), *c)))
    }
}

fn same_level(x: &TowerElement, y: &TowerElement) -> Result<()> {
    if x.level != y.level {
        return Err(Error::ObjectMismatch(format!("levels {} and {}", x.level, y.level)));
    }
    Ok(())
}

/// The tower P_0 ⊆ P_1 ⊆ ⋯ of a PF-weighted graph with a distinguished vertex.
pub struct Tower<'g> {
    g: &'g Graph,
    star: VertexId,
    delta: f64,
}

impl<'g> Tower<'g> {
    pub fn new(g: &'g Graph) -> Result<Tower<'g>> {
        let star = g.star().ok_or_else(|| Error::Invalid("the tower needs a distinguished vertex".into()))?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let delta = g.delta_v(star);
        if (0..g.vertex_count()).any(|v| (g.delta_v(v) - delta).abs() > 1e-9) {
            return Err(Error::Invalid("the tower needs the Perron-Frobenius weighting".into()));
        }
        Ok(Tower { g, star, delta })
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn star(&self) -> VertexId {
        self.star
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn mu(&self, v: VertexId) -> f64 {
        self.g.mu(v)
    }

    fn mu2(&self, v: VertexId) -> f64 {
        self.g.mu2(v)
    }

    /// Paths of length n from *, grouped by finish vertex.
    pub fn paths_by_finish(&self, n: usize) -> BTreeMap<VertexId, Vec<Path>> {
        let mut out: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
        for p in self.g.paths(Some(self.star), n, None) {
            out.entry(p.finish(self.g)).or_default().push(p);
        }
        out
    }

    /// Every basis pair at level n.
    pub fn pairs(&self, n: usize) -> Vec<PathPair> {
        let mut out = Vec::new();
        for ps in self.paths_by_finish(n).values() {
            for a in ps {
                for b in ps {
                    out.push(PathPair { plus: a.clone(), minus: b.clone() });
                }
            }
        }
        out
    }

    /// dim e(v,n)P_n for each v reached at level n.
    pub fn block_dims(&self, n: usize) -> Vec<(VertexId, usize)> {
        self.paths_by_finish(n).into_iter().map(|(v, ps)| (v, ps.len() * ps.len())).collect()
    }

    pub fn one(&self, n: usize) -> TowerElement {
        let mut x = TowerElement::zero(n);
        for p in self.g.paths(Some(self.star), n, None) {
            x.add_term(PathPair { plus: p.clone(), minus: p }, 1.0);
        }
        x
    }

    /// Matrix units: (a,b)(c,d) = δ_{b,c} (a,d).
    pub fn mul(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement> {
        same_level(x, y)?;
        let mut rows: HashMap<&Path, Vec<(&Path, f64)>> = HashMap::new();
        for (p, c) in &y.terms {
            rows.entry(&p.plus).or_default().push((&p.minus, *c));
        }
        let mut out = TowerElement::zero(x.level);
        for (p, a) in &x.terms {
            if let Some(row) = rows.get(&p.minus) {
                for (d, b) in row {
                    out.add_term(PathPair { plus: p.plus.clone(), minus: (*d).clone() }, a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, xs: &[&TowerElement]) -> Result<TowerElement> {
        let (first, rest) = xs.split_first().ok_or_else(|| Error::Invalid("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, y| self.mul(&acc, y))
    }

    /// (a,b)* = (b,a).
    pub fn star_op(&self, x: &TowerElement) -> TowerElement {
        TowerElement {
            level: x.level,
            terms: x
                .terms
                .iter()
                .map(|(p, c)| (PathPair { plus: p.minus.clone(), minus: p.plus.clone() }, *c))
                .collect(),
        }
    }

    /// (ξ(+), ξ(−)) ↦ Σ_λ (ξ(+)∘λ, ξ(−)∘λ) over edges λ leaving the common finish.
    pub fn include(&self, x: &TowerElement) -> TowerElement {
        let mut out = TowerElement::zero(x.level + 1);
        for (p, c) in &x.terms {
            let f = p.minus.finish(self.g);
            for &e in self.g.out_edges(f) {
                let step = Path { start: f, edges: vec![e] };
                let plus = p.plus.concat(self.g, &step).expect("same finish");
                let minus = p.minus.concat(self.g, &step).expect("same finish");
                out.add_term(PathPair { plus, minus }, *c);
            }
        }
        out
    }

    pub fn include_to(&self, x: &TowerElement, level: usize) -> Result<TowerElement> {
        if level < x.level {
            return Err(Error::ObjectMismatch(format!("cannot include level {} into {level}", x.level)));
        }
        let mut out = x.clone();
        while out.level < level {
            out = self.include(&out);
        }
        Ok(out)
    }

    /// Trace-preserving conditional expectation P_{n+1} → P_n:
    /// δ_{ξ(+)_{n+1}, ξ(−)_{n+1}} μ²(v_{n+1})/(δ μ²(v_n)) (ξ(+)_{[0,n]}, ξ(−)_{[0,n]}).
    pub fn cond_exp(&self, x: &TowerElement) -> Result<TowerElement> {
        if x.level == 0 {
            return Err(Error::ObjectMismatch("no conditional expectation below level 0".into()));
        }
        let n = x.level - 1;
        let mut out = TowerElement::zero(n);
        for (p, c) in &x.terms {
            if p.plus.edge(n + 1) != p.minus.edge(n + 1) {
                continue;
            }
            let (top, below) = (p.minus.vertex(self.g, n + 1), p.minus.vertex(self.g, n));
            let coef = self.mu2(top) / (self.delta * self.mu2(below));
            out.add_term(PathPair { plus: p.plus.sub(self.g, 0, n), minus: p.minus.sub(self.g, 0, n) }, c * coef);
        }
        Ok(out)
    }

    /// Normalized trace: tr((ξ,ξ)) = δ^{−n} μ²(f(ξ))/μ²(*), zero off the diagonal.
    pub fn tr(&self, x: &TowerElement) -> f64 {
        let scale = self.delta.powi(-(x.level as i32)) / self.mu2(self.star);
        x.terms
            .iter()
            .filter(|(p, _)| p.plus == p.minus)
            .map(|(p, c)| c * self.mu2(p.minus.finish(self.g)) * scale)
            .sum()
    }

    /// δⁿ tr on P_n.
    pub fn picture_trace(&self, x: &TowerElement) -> f64 {
        self.delta.powi(x.level as i32) * self.tr(x)
    }

    /// Jones projection e_n ∈ P_n for n ≥ 2.
    pub fn jones_e(&self, n: usize) -> Result<TowerElement> {
        if n < 2 {
            return Err(Error::Invalid(format!("e_{n} needs n ≥ 2")));
        }
        if self.delta <= 1.0 + 1e-12 {
            return Err(Error::Invalid(format!("Jones projections need δ > 1, got {}", self.delta)));
        }
        let mut out = TowerElement::zero(n);
        for p in self.g.paths(Some(self.star), n - 2, None) {
            let u = p.finish(self.g);
            let there_and_back = |e: usize| {
                let g = self.g;
                Path { start: u, edges: vec![e, g.edge(e).reversal] }
            };
            for &a in self.g.out_edges(u) {
                for &b in self.g.out_edges(u) {
                    let plus = p.concat(self.g, &there_and_back(a)).expect("starts at u");
                    let minus = p.concat(self.g, &there_and_back(b)).expect("starts at u");
                    let (va, vb) = (self.g.edge(a).finish, self.g.edge(b).finish);
                    let coef = self.mu(va) * self.mu(vb) / (self.delta * self.mu2(u));
                    out.add_term(PathPair { plus, minus }, coef);
                }
            }
        }
        Ok(out)
    }

    /// E_t = δ e_t included into P_level.
    pub fn jones_big_e(&self, t: usize, level: usize) -> Result<TowerElement> {
        Ok(self.include_to(&self.jones_e(t)?, level)?.scale(self.delta))
    }

    /// Z_T(1) ∈ P_n for a Temperley-Lieb pairing T of {1..2n}: through classes i ≤ n < j
    /// match ξ(−)_i with ξ(+)_{2n+1−j}; classes inside the top cap ξ(−) with weight
    /// μ(v^−_i)/μ(v^−_j); classes inside the bottom cap ξ(+) the same way after i ↦ 2n+1−i.
    pub fn ztl(&self, t: &TlPairing) -> Result<TowerElement> {
        if !t.is_pairing() || !t.is_noncrossing() || t.size() % 2 == 1 {
            return Err(Error::Invalid("ztl needs a non-crossing pairing of an even set".into()));
        }
        let n = t.size() / 2;
        let g = self.g;
        let mut out = TowerElement::zero(n);
        for p in self.pairs(n) {
            let (plus, minus) = (&p.plus, &p.minus);
            let mut coef = 1.0;
            for b in t.blocks() {
                let (i, j) = (b[0], b[1]);
                if j <= n {
                    if minus.edge(i) != g.edge(minus.edge(j)).reversal {
                        coef = 0.0;
                        break;
                    }
                    coef *= self.mu(minus.vertex(g, i)) / self.mu(minus.vertex(g, j));
                } else if i > n {
                    let (a, b) = (2 * n + 1 - j, 2 * n + 1 - i);
                    if plus.edge(a) != g.edge(plus.edge(b)).reversal {
                        coef = 0.0;
                        break;
                    }
                    coef *= self.mu(plus.vertex(g, a)) / self.mu(plus.vertex(g, b));
                } else if minus.edge(i) != plus.edge(2 * n + 1 - j) {
                    coef = 0.0;
                    break;
                }
            }
            if coef != 0.0 {
                out.add_term(p, coef);
            }
        }
        Ok(out)
    }

    /// Loops of the closure of T (i joined to 2n+1−i) counted directly.
    pub fn closure_loops(t: &TlPairing) -> usize {
        let m = t.size();
        let partner = t.partner();
        let mut seen = vec![false; m + 1];
        let mut loops = 0;
        for s in 1..=m {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut x = s;
            loop {
                seen[x] = true;
                let y = partner[x];
                seen[y] = true;
                x = m + 1 - y;
                if seen[x] {
                    break;
                }
            }
        }
        loops
    }

    /// The element of P_n for a loop, scaled by μ(v_0)/μ(v_n): θ([ξ]).
    pub fn theta(&self, x: &Elem) -> Result<TowerElement> {
        let mut level = None;
        let mut out = BTreeMap::new();
        for (p, c) in x.iter() {
            if p.start != self.star || !p.is_loop(self.g) || p.len() % 2 == 1 {
                return Err(Error::Invalid(format!("θ needs even loops at *, got {}", p.display(self.g))));
            }
            let n = p.len() / 2;
            if *level.get_or_insert(n) != n {
                return Err(Error::Invalid("θ needs a homogeneous element".into()));
            }
            let coef = self.mu(p.start) / self.mu(p.vertex(self.g, n));
            out.insert(PathPair::from_loop(self.g, p), c * coef);
        }
        Ok(TowerElement { level: level.unwrap_or(0), terms: out })
    }

    /// ξ • η = μ(v^ξ_m)μ(v^η_n)/(μ(v^{ξ∘η}_{m+n})μ(v^η_0)) ξ∘η on loops at *.
    pub fn gr0_mul(&self, x: &TowerElement, y: &TowerElement) -> TowerElement {
        let g = self.g;
        let (m, n) = (x.level, y.level);
        let mut out = TowerElement::zero(m + n);
        for (p, a) in &x.terms {
            let xi = p.to_loop(g);
            for (q, b) in &y.terms {
                let eta = q.to_loop(g);
                let both = xi.concat(g, &eta).expect("loops at *");
                let coef = self.mu(xi.vertex(g, m)) * self.mu(eta.vertex(g, n))
                    / (self.mu(both.vertex(g, m + n)) * self.mu(eta.start));
                out.add_term(PathPair::from_loop(g, &both), a * b * coef);
            }
        }
        out
    }

    /// The two nested rainbows on [1,2m] and [2m+1,2m+2n].
    pub fn multiplication_pairing(m: usize, n: usize) -> TlPairing {
        let mut blocks: Vec<Vec<usize>> = (1..=m).map(|i| vec![i, 2 * m + 1 - i]).collect();
        blocks.extend((1..=n).map(|s| vec![2 * m + s, 2 * m + 2 * n + 1 - s]));
        Partition::new(2 * (m + n), blocks).expect("nested rainbows are a TL pairing")
    }

    /// The same product as inclusion, a Temperley-Lieb element and matrix-unit products:
    /// incl(η) · Z · incl(ξ) for m ≥ n, and (η* • ξ*)* otherwise.
    pub fn gr0_mul_tangle(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement> {
        let (m, n) = (x.level, y.level);
        if m < n {
            return Ok(self.star_op(&self.gr0_mul_tangle(&self.star_op(y), &self.star_op(x))?));
        }
        let top = m + n;
        let z = self.ztl(&Self::multiplication_pairing(m, n))?;
        self.mul_all(&[&self.include_to(y, top)?, &z, &self.include_to(x, top)?])
    }

    /// Trace of ⊕P_n on one level: Σ_{T∈TL(2n)} δⁿ tr(Z_T(1) x).
    pub fn gr0_trace(&self, x: &TowerElement) -> Result<f64> {
        let mut total = 0.0;
        for t in enumerate_tl(2 * x.level) {
            total += self.picture_trace(&self.mul(&self.ztl(&t)?, x)?);
        }
        Ok(total)
    }

    /// The annular tangle of S^{2n}_i on P_n, through the tower: δ E(y) for i = n,
    /// δ E(y E_{i+1}⋯E_n) for i < n and δ E(E_n⋯E_{2n−i+1} y) for i > n.
    pub fn annular_generator(&self, n: usize, i: usize, y: &TowerElement) -> Result<TowerElement> {
        if y.level != n || i == 0 || i >= 2 * n {
            return Err(Error::ObjectMismatch(format!("S^{}_{i} on level {}", 2 * n, y.level)));
        }
        let prod = if i == n {
            y.clone()
        } else {
            let j = if i < n { i } else { 2 * n - i };
            let mut es = Vec::with_capacity(n - j);
            for t in j + 1..=n {
                es.push(self.jones_big_e(t, n)?);
            }
            let mut factors: Vec<&TowerElement> = es.iter().collect();
            if i < n {
                factors.insert(0, y);
            } else {
                factors.reverse();
                factors.push(y);
            }
            self.mul_all(&factors)?
        };
        Ok(self.cond_exp(&prod)?.scale(self.delta))
    }

    /// The least length-1 path from * to v.
    pub fn nu(&self, v: VertexId) -> Result<Path> {
        self.g
            .paths(Some(self.star), 1, Some(v))
            .into_iter()
            .min()
            .ok_or_else(|| Error::Invalid(format!("{} is not adjacent to *", self.g.name(v))))
    }

    /// q(v,1) = (ν, ν).
    pub fn q_projection(&self, v: VertexId) -> Result<TowerElement> {
        let nu = self.nu(v)?;
        Ok(TowerElement::basis(PathPair { plus: nu.clone(), minus: nu }))
    }

    /// θ₁([ξ]) = μ(v_0)/μ(v_n) ν∘ξ∘ν̃ ∈ P_{n+1} for loops ξ at v.
    pub fn theta_one(&self, v: VertexId, x: &Elem) -> Result<TowerElement> {
        let g = self.g;
        let nu = self.nu(v)?;
        let back = nu.reverse(g);
        let mut level = None;
        let mut out = BTreeMap::new();
        for (p, c) in x.iter() {
            if p.start != v || !p.is_loop(g) || p.len() % 2 == 1 {
                return Err(Error::Invalid(format!("θ₁ needs even loops at {}, got {}", g.name(v), p.display(g))));
            }
            let n = p.len() / 2;
            if *level.get_or_insert(n) != n {
                return Err(Error::Invalid("θ₁ needs a homogeneous element".into()));
            }
            let lp = nu.concat(g, p).and_then(|q| q.concat(g, &back)).expect("loop at v");
            out.insert(PathPair::from_loop(g, &lp), c * self.mu(p.start) / self.mu(p.vertex(g, n)));
        }
        Ok(TowerElement { level: level.unwrap_or(0) + 1, terms: out })
    }

    /// The shifted product P_m × P_n → P_{m+n−1}: zero unless ξ_{2m} = η̃_1, otherwise
    /// μ(v^ξ_m)μ(v^η_n)/(μ(v^ζ_{m+n−1})μ(v^η_1)) ζ with ζ = ξ_{[0,2m−1]} ∘ η_{[1,2n]}.
    pub fn gr1_mul(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement> {
        let g = self.g;
        let (m, n) = (x.level, y.level);
        if m == 0 || n == 0 {
            return Err(Error::ObjectMismatch("the shifted product starts at level 1".into()));
        }
        let mut out = TowerElement::zero(m + n - 1);
        for (p, a) in &x.terms {
            let xi = p.to_loop(g);
            for (q, b) in &y.terms {
                let eta = q.to_loop(g);
                if xi.edge(2 * m) != g.edge(eta.edge(1)).reversal {
                    continue;
                }
                let zeta = xi.sub(g, 0, 2 * m - 1).concat(g, &eta.sub(g, 1, 2 * n)).expect("ends match");
                let coef = self.mu(xi.vertex(g, m)) * self.mu(eta.vertex(g, n))
                    / (self.mu(zeta.vertex(g, m + n - 1)) * self.mu(eta.vertex(g, 1)));
                out.add_term(PathPair::from_loop(g, &zeta), a * b * coef);
            }
        }
        Ok(out)
    }

    /// Trace of the shifted algebra on P_k: Σ_{T∈TL(2k−2)} δ^k tr(Z_{T'}(1) x) with
    /// T' = {1, 2k} ∪ (T + 1), the outer string closed around T.
    pub fn gr1_trace(&self, x: &TowerElement) -> Result<f64> {
        let k = x.level;
        if k == 0 {
            return Err(Error::ObjectMismatch("the shifted trace starts at level 1".into()));
        }
        let mut total = 0.0;
        for t in enumerate_tl(2 * k - 2) {
            let mut blocks: Vec<Vec<usize>> = t.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
            blocks.push(vec![1, 2 * k]);
            let tp = Partition::new(2 * k, blocks)?;
            total += self.picture_trace(&self.mul(&self.ztl(&tp)?, x)?);
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn matrix_units() {
        let g = families::a3();
        let t = Tower::new(&g).unwrap();
        let ps = t.pairs(2);
        for a in &ps {
            for b in &ps {
                let prod = t.mul(&TowerElement::basis(a.clone()), &TowerElement::basis(b.clone())).unwrap();
                if a.minus == b.plus {
                    let want = PathPair { plus: a.plus.clone(), minus: b.minus.clone() };
                    assert_eq!(prod, TowerElement::basis(want));
                } else {
                    assert!(prod.terms.is_empty());
                }
            }
        }
        let x = TowerElement::basis(ps[1].clone());
        assert_eq!(t.star_op(&t.star_op(&x)), x);
        assert!(t.mul(&x, &t.one(3)).is_err());
    }

    #[test]
    fn unit_trace_on_a3() {
        let g = families::a3();
        let t = Tower::new(&g).unwrap();
        assert!((t.delta() - 2f64.sqrt()).abs() < 1e-9);
        for n in 0..=4 {
            assert!((t.tr(&t.one(n)) - 1.0).abs() < 1e-9, "level {n}");
        }
    }

    #[test]
    fn second_jones_projection_is_a_tl_element() {
        let g = families::a4();
        let t = Tower::new(&g).unwrap();
        let z = t.ztl(&Partition::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap()).unwrap();
        assert!(z.max_abs_diff(&t.jones_e(2).unwrap().scale(t.delta())) < 1e-12);
        let id = t.ztl(&Partition::new(4, vec![vec![1, 4], vec![2, 3]]).unwrap()).unwrap();
        assert!(id.max_abs_diff(&t.one(2)) < 1e-12);
    }

    #[test]
    fn rejects_non_pf_weights_and_short_levels() {
        let g = families::omega(2, 0.7, 0.3);
        assert!(Tower::new(&g).is_err());
        let a2 = families::a2();
        let t = Tower::new(&a2).unwrap();
        assert!(t.jones_e(2).is_err());
        assert!(t.cond_exp(&t.one(0)).is_err());
    }
}
