//! The graded picture: concatenation product, reversal involution, the Temperley-Lieb
//! trace τ and corner compressions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::graph::{Graph, Parity, Path, VertexId};
use crate::noncross::{enumerate_tl, kreweras, Partition, TlPairing};

/// Largest path length τ will expand; TL(16) has 1430 pairings.
pub const DEGREE_CAP: usize = 16;

/// [ξ]•[η] = [ξ∘η] when f(ξ) = s(η), else 0.
pub fn bullet_mul(g: &Graph, x: &Elem, y: &Elem) -> Elem {
    x.map_bilinear(y, |p, q| p.concat(g, q).map_or_else(Elem::zero, Elem::basis))
}

/// [ξ]* = [ξ̃]; coefficients are real.
pub fn star(g: &Graph, x: &Elem) -> Elem {
    x.map_linear(|p| Elem::basis(p.reverse(g)))
}

type TlTable = Arc<Vec<(TlPairing, Partition)>>;

/// TL(2n) paired with the Kreweras complements, shared across calls.
pub fn tl_with_kreweras(two_n: usize) -> TlTable {
    static CACHE: OnceLock<Mutex<HashMap<usize, TlTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("TL cache poisoned");
    guard
        .entry(two_n)
        .or_insert_with(|| {
            Arc::new(
                enumerate_tl(two_n)
                    .into_iter()
                    .map(|t| {
                        let k = kreweras(&t);
                        (t, k)
                    })
                    .collect(),
            )
        })
        .clone()
}

/// τ on one basis path: Σ_T Π_{{i,j}∈T} δ_{ξ_i, ξ̃_j} Π_{C∈K(T)} μ(v_C)^{2−|C|}.
pub fn tau_path(g: &Graph, xi: &Path) -> Result<f64> {
    let m = xi.len();
    if m > DEGREE_CAP {
        return Err(Error::DegreeCap { got: m, cap: DEGREE_CAP });
    }
    if m == 0 {
        return Ok(g.mu2(xi.start));
    }
    if m % 2 == 1 || !xi.is_loop(g) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (t, k) in tl_with_kreweras(m).iter() {
        let paired = t.blocks().iter().all(|b| xi.edge(b[0]) == g.edge(xi.edge(b[1])).reversal);
        if !paired {
            continue;
        }
        let mut term = 1.0;
        for c in k.blocks() {
            // Index 2n names v_0; for a consistent path every c ∈ C gives the same vertex.
            let v = xi.vertex(g, c[0] % m);
            term *= g.mu(v).powi(2 - c.len() as i32);
        }
        total += term;
    }
    Ok(total)
}

/// Linear extension of [`tau_path`].
pub fn tau(g: &Graph, x: &Elem) -> Result<f64> {
    let mut total = 0.0;
    for (p, c) in x.iter() {
        total += c * tau_path(g, p)?;
    }
    Ok(total)
}

/// The projection a corner compresses by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Vertex(VertexId),
    Even,
    Odd,
}

impl Side {
    fn contains(self, g: &Graph, v: VertexId) -> bool {
        match self {
            Side::Vertex(w) => v == w,
            Side::Even => g.parity(v) == Parity::Even,
            Side::Odd => g.parity(v) == Parity::Odd,
        }
    }

    /// e_v, e_0 = Σ_{even} e_v or e_1 = Σ_{odd} e_v.
    pub fn projection(self, g: &Graph) -> Result<Elem> {
        if let Side::Vertex(v) = self {
            if v >= g.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        Ok((0..g.vertex_count())
            .filter(|&v| self.contains(g, v))
            .map(Elem::vertex)
            .fold(Elem::zero(), |a, b| a.add(&b)))
    }
}

/// e x e for the projection e of `side`.
pub fn corner(g: &Graph, x: &Elem, side: Side) -> Result<Elem> {
    side.projection(g)?;
    Ok(x.filter(|p| side.contains(g, p.start) && side.contains(g, p.finish(g))))
}

/// Trace of the corner algebra, normalized to 1 on its unit: τ(exe)/τ(e).
pub fn corner_trace(g: &Graph, x: &Elem, side: Side) -> Result<f64> {
    let e = side.projection(g)?;
    Ok(tau(g, &corner(g, x, side)?)? / tau(g, &e)?)
}

/// The (v,w) matrix entry e_v x e_w.
pub fn matrix_entry(g: &Graph, x: &Elem, v: VertexId, w: VertexId) -> Elem {
    x.filter(|p| p.start == v && p.finish(g) == w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn bullet_examples() {
        let g = families::a2();
        let vw = Elem::basis(g.parse_path("v,w").unwrap());
        let wv = Elem::basis(g.parse_path("w,v").unwrap());
        let vwv = Elem::basis(g.parse_path("v,w,v").unwrap());
        assert_eq!(bullet_mul(&g, &vw, &wv), vwv);
        assert!(bullet_mul(&g, &vw, &vw).is_zero());
        assert_eq!(bullet_mul(&g, &Elem::vertex(0), &vwv), vwv);
        assert_eq!(star(&g, &vw), wv);
    }

    #[test]
    fn tau_examples() {
        let g = families::a2();
        let t2 = tau(&g, &Elem::basis(g.parse_path("v,w,v").unwrap())).unwrap();
        assert!((t2 - g.mu(0) * g.mu(1)).abs() < 1e-12);
        assert!((t2 - 0.5).abs() < 1e-12);
        let t4 = tau(&g, &Elem::basis(g.parse_path("v,w,v,w,v").unwrap())).unwrap();
        assert!((t4 - 1.0).abs() < 1e-12);
        assert!((tau(&g, &Elem::vertex(1)).unwrap() - g.mu2(1)).abs() < 1e-15);
        assert!((tau(&g, &Elem::one(&g)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(tau(&g, &Elem::basis(g.parse_path("v,w").unwrap())).unwrap(), 0.0);
    }

    #[test]
    fn degree_cap_enforced() {
        let g = families::a2();
        let long = g.paths(Some(0), DEGREE_CAP + 2, Some(0)).remove(0);
        assert!(matches!(tau(&g, &Elem::basis(long)), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn corner_examples() {
        let g = families::a2();
        let x = Elem::basis(g.parse_path("v,w").unwrap()).add(&Elem::basis(g.parse_path("v,w,v").unwrap()));
        assert_eq!(corner(&g, &x, Side::Vertex(0)).unwrap(), Elem::basis(g.parse_path("v,w,v").unwrap()));
        assert!((corner_trace(&g, &Elem::vertex(0), Side::Vertex(0)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(corner(&g, &Elem::one(&g), Side::Even).unwrap(), Elem::vertex(0));
        assert!(corner(&g, &x, Side::Vertex(7)).is_err());
    }
}
