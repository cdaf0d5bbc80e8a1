//! Free-dimension bookkeeping for finite direct sums of atoms and interpolated free group
//! factors, and the factor parameters of the path algebras built from small graphs.

use serde::Serialize;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::gr::{bullet_mul, tau};
use crate::graph::{families, Graph, Parity, Path, VertexId};
use crate::noncross::enumerate_nc;

/// Weights must sum to 1 within this.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Slack on the regime boundaries x = q and x = 1/q, so that ratios like 20/60 : 40/60
/// land in the same regime for the corner and the whole-algebra tests.
const RATIO_TOL: f64 = 1e-12;

/// ⊕ ℂ_{α_i} ⊕ ⊕ LF(t_j)_{γ_j}. LF(1) stands for LℤZ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgDesc {
    pub atoms: Vec<f64>,
    /// (parameter t ≥ 1, weight γ)
    pub diffuse: Vec<(f64, f64)>,
    pub hyperfinite_possible: bool,
}

impl AlgDesc {
    pub fn new(atoms: Vec<f64>, diffuse: Vec<(f64, f64)>) -> Result<AlgDesc> {
        let d = AlgDesc { atoms, diffuse, hyperfinite_possible: false };
        d.validate()?;
        Ok(d)
    }

    /// LF(t) with weight 1.
    pub fn lf(t: f64) -> AlgDesc {
        AlgDesc { atoms: vec![], diffuse: vec![(t, 1.0)], hyperfinite_possible: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::Invalid("atom traces must be positive".into()));
        }
        if self.diffuse.iter().any(|&(t, g)| !(t.is_finite() && t >= 1.0 - WEIGHT_TOL && g > 0.0)) {
            return Err(Error::Invalid("diffuse summands need t ≥ 1 and positive weight".into()));
        }
        let total = self.total_weight();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Invalid(format!("summand weights add to {total}, not 1")));
        }
        Ok(())
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().sum::<f64>() + self.diffuse.iter().map(|d| d.1).sum::<f64>()
    }

    /// The single LF parameter, when the descriptor is one factor.
    pub fn as_factor(&self) -> Option<f64> {
        match (self.atoms.as_slice(), self.diffuse.as_slice()) {
            ([], [(t, _)]) => Some(*t),
            _ => None,
        }
    }

    /// Largest coordinate difference against another descriptor with the same shape;
    /// infinite when the shapes differ.
    pub fn max_diff(&self, other: &AlgDesc) -> f64 {
        if self.atoms.len() != other.atoms.len() || self.diffuse.len() != other.diffuse.len() {
            return f64::INFINITY;
        }
        let mut a = self.atoms.clone();
        let mut b = other.atoms.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let atoms = a.iter().zip(&b).map(|(x, y)| (x - y).abs());
        let diffuse = self.diffuse.iter().zip(&other.diffuse).flat_map(|(x, y)| [(x.0 - y.0).abs(), (x.1 - y.1).abs()]);
        atoms.chain(diffuse).fold(0.0, f64::max)
    }

    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self.atoms.iter().map(|a| format!("C_{}", fmt12(*a))).collect();
        for &(t, g) in &self.diffuse {
            let name = if (t - 1.0).abs() < WEIGHT_TOL { "LZ".to_string() } else { format!("LF({})", fmt12(t)) };
            parts.push(if (g - 1.0).abs() < WEIGHT_TOL { name } else { format!("{name}_{}", fmt12(g)) });
        }
        let s = parts.join(" + ");
        if self.hyperfinite_possible {
            format!("{s} (or hyperfinite)")
        } else {
            s
        }
    }
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn fmt12(x: f64) -> String {
    let s = format!("{:.*e}", 11, x);
    let v: f64 = s.parse().expect("formatted float");
    let mut out = format!("{v}");
    if out.len() > 16 {
        out = format!("{:.12}", v).trim_end_matches('0').trim_end_matches('.').to_string();
    }
    out
}

/// Σ γ_j²(t_j − 1) + 1 − Σ α_i².
pub fn fdim(a: &AlgDesc) -> f64 {
    a.diffuse.iter().map(|(t, g)| g * g * (t - 1.0)).sum::<f64>() + 1.0 - a.atoms.iter().map(|x| x * x).sum::<f64>()
}

/// A ∗ B: atoms α+β−1 where positive, one diffuse summand fixed by fdim additivity.
pub fn free_product(a: &AlgDesc, b: &AlgDesc) -> Result<AlgDesc> {
    a.validate()?;
    b.validate()?;
    let trivial = |d: &AlgDesc| d.diffuse.is_empty() && d.atoms.len() == 1;
    if trivial(a) && trivial(b) {
        return Err(Error::Invalid("free product of two copies of C".into()));
    }
    if a.diffuse.len() > 1 || b.diffuse.len() > 1 {
        return Err(Error::Unsupported("operands with more than one diffuse summand".into()));
    }
    if trivial(a) {
        return Ok(b.clone());
    }
    if trivial(b) {
        return Ok(a.clone());
    }
    let atoms: Vec<f64> =
        a.atoms.iter().flat_map(|x| b.atoms.iter().map(move |y| x + y - 1.0)).filter(|&z| z > WEIGHT_TOL).collect();
    let target = fdim(a) + fdim(b);
    let gamma = 1.0 - atoms.iter().sum::<f64>();
    let sq: f64 = atoms.iter().map(|x| x * x).sum();
    if gamma <= WEIGHT_TOL {
        return Err(Error::Unsupported("free product without a diffuse part".into()));
    }
    let s = 1.0 + (target - 1.0 + sq) / (gamma * gamma);
    if s < 1.0 - WEIGHT_TOL {
        return Err(Error::Unsupported(format!("free dimension forces parameter {s} < 1")));
    }
    let no_diffuse_operand = a.diffuse.is_empty() || b.diffuse.is_empty();
    Ok(AlgDesc {
        atoms,
        diffuse: vec![(s.max(1.0), gamma)],
        hyperfinite_possible: a.hyperfinite_possible
            || b.hyperfinite_possible
            || (no_diffuse_operand && s <= 1.0 + WEIGHT_TOL),
    })
}

/// Left fold of [`free_product`].
pub fn free_product_all(parts: &[AlgDesc]) -> Result<AlgDesc> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::Invalid("empty free product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, p| free_product(&acc, p))
}

/// Parameter of the corner of LF(r) cut down by a projection of trace t: 1 + (r−1)/t².
pub fn compress(r: f64, t: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 - WEIGHT_TOL || t.is_nan() || t <= 0.0 || t > 1.0 + WEIGHT_TOL {
        return Err(Error::Invalid(format!("compress needs r ≥ 1 and 0 < t ≤ 1, got r={r}, t={t}")));
    }
    Ok(1.0 + (r - 1.0) / (t * t))
}

/// Inverse of [`compress`]: the parameter of the whole factor from that of a corner.
pub fn expand(r_corner: f64, t: f64) -> Result<f64> {
    compress(r_corner, 1.0)?;
    if !(t > 0.0 && t <= 1.0 + WEIGHT_TOL) {
        return Err(Error::Invalid(format!("trace {t} outside (0, 1]")));
    }
    Ok(1.0 + (r_corner - 1.0) * t * t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Corner {
    Even,
    Odd,
}

fn check_pair(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && beta > 0.0) || (alpha + beta - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::Invalid(format!("weights must be positive and add to 1, got {alpha}, {beta}")));
    }
    Ok(())
}

/// Corner of the two-vertex graph with q edges, μ²(even) = α, μ²(odd) = β. With x the
/// ratio of the far vertex's weight to the corner vertex's: LF(q²) if x > q,
/// LF(2qx − x²) if 1/q ≤ x ≤ q, and C_{1−qx} ⊕ LF(2 − 1/q²)_{qx} if x < 1/q.
pub fn two_vertex_corner(q: usize, alpha: f64, beta: f64, side: Corner) -> Result<AlgDesc> {
    check_pair(alpha, beta)?;
    if q == 0 {
        return Err(Error::Invalid("two-vertex graph needs at least one edge".into()));
    }
    let qf = q as f64;
    let x = match side {
        Corner::Odd => alpha / beta,
        Corner::Even => beta / alpha,
    };
    Ok(if x > qf + RATIO_TOL {
        AlgDesc::lf(qf * qf)
    } else if x >= 1.0 / qf - RATIO_TOL {
        AlgDesc::lf(2.0 * qf * x - x * x)
    } else {
        AlgDesc {
            atoms: vec![1.0 - qf * x],
            diffuse: vec![(2.0 - 1.0 / (qf * qf), qf * x)],
            hyperfinite_possible: false,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FactorVerdict {
    Factor(AlgDesc),
    NotFactor(String),
}

/// The whole two-vertex algebra: a factor iff q > 1 and 1/q ≤ α/β ≤ q, then
/// LF(1 + 2qαβ − α² − β²).
pub fn omega_factor(q: usize, alpha: f64, beta: f64) -> Result<FactorVerdict> {
    check_pair(alpha, beta)?;
    let (qf, x) = (q as f64, alpha / beta);
    Ok(if q <= 1 {
        FactorVerdict::NotFactor("a single edge: both corners are LZ".into())
    } else if x < 1.0 / qf - RATIO_TOL || x > qf + RATIO_TOL {
        FactorVerdict::NotFactor(format!("ratio {} outside [1/q, q]", fmt12(x)))
    } else {
        FactorVerdict::Factor(AlgDesc::lf(1.0 + 2.0 * qf * alpha * beta - alpha * alpha - beta * beta))
    })
}

fn check_star(q: &[usize], a: &[f64], b: f64) -> Result<()> {
    if q.is_empty() || q.len() != a.len() || q.contains(&0) {
        return Err(Error::Invalid("need matching nonempty multiplicities ≥ 1 and weights".into()));
    }
    if b <= 0.0 || a.iter().any(|&x| x <= 0.0) || (a.iter().sum::<f64>() + b - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::Invalid("weights must be positive and add to 1".into()));
    }
    Ok(())
}

/// Corner at the centre of a star whose centre (weight b) is joined to leaf i (weight a_i)
/// by q_i edges, closed form.
pub fn star_corner(q: &[usize], a: &[f64], b: f64) -> Result<AlgDesc> {
    check_star(q, a, b)?;
    let total: f64 = q.iter().zip(a).map(|(&qi, ai)| qi as f64 * ai).sum();
    if b <= total {
        let r = q
            .iter()
            .zip(a)
            .map(|(&qi, &ai)| {
                let qi = qi as f64;
                if qi * b < ai {
                    qi * qi
                } else {
                    2.0 * qi * ai / b - (ai / b).powi(2)
                }
            })
            .sum();
        Ok(AlgDesc::lf(r))
    } else {
        let sq: f64 = a.iter().map(|x| x * x).sum();
        Ok(AlgDesc {
            atoms: vec![1.0 - total / b],
            diffuse: vec![(2.0 - sq / (total * total), total / b)],
            hyperfinite_possible: false,
        })
    }
}

/// The same corner as the free product of the two-vertex corners of each leaf.
pub fn star_corner_pipeline(q: &[usize], a: &[f64], b: f64) -> Result<AlgDesc> {
    check_star(q, a, b)?;
    let parts = q
        .iter()
        .zip(a)
        .map(|(&qi, &ai)| two_vertex_corner(qi, ai / (ai + b), b / (ai + b), Corner::Odd))
        .collect::<Result<Vec<_>>>()?;
    free_product_all(&parts)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub atoms: Vec<(String, f64)>,
    pub diffuse: Vec<(f64, f64)>,
    pub verdict: String,
    pub notes: Vec<String>,
}

fn is_pf(g: &Graph) -> bool {
    let d0 = g.delta_v(0);
    (0..g.vertex_count()).all(|v| (g.delta_v(v) - d0).abs() < 1e-9)
}

/// Structure of the whole algebra: atoms (1 − δ(v))μ²(v) at vertices with δ(v) < 1 and a
/// factor summand whose parameter is computed when one parity class is a single vertex.
pub fn structure_report(g: &Graph) -> Result<StructureReport> {
    let comps = g.components();
    if comps.len() > 1 {
        let mut rep = StructureReport { atoms: vec![], diffuse: vec![], verdict: String::new(), notes: vec![] };
        let mut pieces = Vec::new();
        for c in comps {
            let keep: Vec<bool> = (0..g.vertex_count()).map(|v| c.contains(&v)).collect();
            let (h, m) = g.induced(&keep);
            let sub = structure_report(&h)?;
            rep.atoms.extend(sub.atoms.into_iter().map(|(v, t)| (v, t * m)));
            rep.diffuse.extend(sub.diffuse.into_iter().map(|(t, w)| (t, w * m)));
            rep.notes.extend(sub.notes.into_iter().map(|n| format!("[{}] {n}", h.name(0))));
            pieces.push(format!("({})_{}", sub.verdict, fmt12(m)));
        }
        rep.notes.push("disjoint union: weighted direct sum over components".into());
        rep.verdict = pieces.join(" + ");
        return Ok(rep);
    }
    let n_edges = g.undirected_edge_count();
    if n_edges == 0 {
        return Ok(StructureReport {
            atoms: vec![(g.name(0).to_string(), 1.0)],
            diffuse: vec![],
            verdict: "C".into(),
            notes: vec!["isolated vertex".into()],
        });
    }
    let atoms: Vec<(VertexId, f64)> =
        (0..g.vertex_count()).filter(|&v| g.delta_v(v) < 1.0).map(|v| (v, (1.0 - g.delta_v(v)) * g.mu2(v))).collect();
    let mass = 1.0 - atoms.iter().map(|a| a.1).sum::<f64>();
    let named = atoms.iter().map(|&(v, t)| (g.name(v).to_string(), t)).collect();
    let mut notes = vec!["atoms: (1 − δ(v)) μ²(v) at each vertex with δ(v) < 1".to_string()];
    if n_edges == 1 {
        notes.push("single edge: both corners of the non-atomic part are LZ".into());
        let tail = if atoms.is_empty() { String::new() } else { " + atoms".into() };
        return Ok(StructureReport {
            atoms: named,
            diffuse: vec![(1.0, mass)],
            verdict: format!("M2(LZ){tail}"),
            notes,
        });
    }
    let centre = [Parity::Even, Parity::Odd].into_iter().find_map(|p| match g.vertices_of(p).as_slice() {
        [c] => Some(*c),
        _ => None,
    });
    let pf = is_pf(g);
    let Some(c) = centre else {
        notes.push("parameter exists but is not computed: both parity classes have several vertices".into());
        let verdict = if pf { "LF(s), 1 < s < inf" } else { "II_1 factor + atoms" };
        return Ok(StructureReport { atoms: named, diffuse: vec![], verdict: verdict.into(), notes });
    };
    // Leaves in vertex order with their edge multiplicities.
    let mut q = vec![0usize; g.vertex_count()];
    for &e in g.out_edges(c) {
        q[g.edge(e).finish] += 1;
    }
    let leaves: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| q[v] > 0).collect();
    let qs: Vec<usize> = leaves.iter().map(|&v| q[v]).collect();
    let a: Vec<f64> = leaves.iter().map(|&v| g.mu2(v)).collect();
    let b = g.mu2(c);
    let corner = star_corner(&qs, &a, b)?;
    let pipeline = star_corner_pipeline(&qs, &a, b)?;
    notes.push(format!(
        "corner at {}: {} (closed form), {} (free product)",
        g.name(c),
        corner.display(),
        pipeline.display()
    ));
    let &(r, w) = corner.diffuse.last().expect("the centre corner has a diffuse part");
    // The factor summand meets the centre corner in a projection of trace w·b.
    let s = expand(r, w * b / mass)?;
    notes.push(format!("whole parameter from the corner formula with trace {}", fmt12(w * b / mass)));
    if g.vertex_count() == 2 {
        let (ev, od) = (g.vertices_of(Parity::Even)[0], g.vertices_of(Parity::Odd)[0]);
        if let FactorVerdict::Factor(d) = omega_factor(qs[0], g.mu2(ev), g.mu2(od))? {
            let t = d.as_factor().expect("single factor");
            notes.push(format!("two-vertex formula gives LF({})", fmt12(t)));
        }
    }
    let verdict = if atoms.is_empty() {
        format!("LF({})", fmt12(s))
    } else {
        format!("LF({})_{} + atoms", fmt12(s), fmt12(mass))
    };
    Ok(StructureReport { atoms: named, diffuse: vec![(s, mass)], verdict, notes })
}

/// The free Poisson value Σ_{π∈NC(k)} r^{|π|}.
pub fn free_poisson_moment(k: usize, r: f64) -> f64 {
    enumerate_nc(k).iter().map(|p| r.powi(p.block_count() as i32)).sum()
}

/// Normalized moments m_1..m_kmax of the q×q matrix Y_ij = √(α/β)/q [w →i v →j w] on the
/// two-vertex graph: m_k = (1/q) Σ_i τ((Y^k)_ii) / μ²(w).
pub fn two_vertex_matrix_moments(q: usize, alpha: f64, beta: f64, kmax: usize) -> Result<Vec<f64>> {
    check_pair(alpha, beta)?;
    let g = families::omega(q, alpha, beta);
    let (v, w) = (0, 1);
    let into: Vec<_> = g.out_edges(w).to_vec();
    let scale = (alpha / beta).sqrt() / q as f64;
    let y: Vec<Vec<Elem>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    let back = g.edge(into[j]).reversal;
                    debug_assert_eq!(g.edge(into[i]).finish, v);
                    Elem::term(Path { start: w, edges: vec![into[i], back] }, scale)
                })
                .collect()
        })
        .collect();
    let mut pow = y.clone();
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        if k > 1 {
            pow = (0..q)
                .map(|i| {
                    (0..q)
                        .map(|j| (0..q).fold(Elem::zero(), |acc, l| acc.add(&bullet_mul(&g, &pow[i][l], &y[l][j]))))
                        .collect()
                })
                .collect();
        }
        let mut sum = 0.0;
        for (i, row) in pow.iter().enumerate() {
            sum += tau(&g, &row[i])?;
        }
        out.push(sum / q as f64 / g.mu2(w));
    }
    Ok(out)
}
