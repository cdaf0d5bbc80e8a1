//! Finite real linear combinations of paths.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::graph::{Graph, Path};

/// Sparse combination `Σ c_ξ [ξ]`; exact zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Elem {
    terms: BTreeMap<Path, f64>,
}

impl Elem {
    pub fn zero() -> Elem {
        Elem::default()
    }

    pub fn basis(p: Path) -> Elem {
        Elem::term(p, 1.0)
    }

    pub fn term(p: Path, c: f64) -> Elem {
        let mut e = Elem::zero();
        e.add_term(p, c);
        e
    }

    /// e_v = [(v)].
    pub fn vertex(v: usize) -> Elem {
        Elem::basis(Path::trivial(v))
    }

    /// 1 = Σ_v e_v.
    pub fn one(g: &Graph) -> Elem {
        (0..g.vertex_count()).map(Elem::vertex).fold(Elem::zero(), |a, b| a.add(&b))
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, f64)>>(it: I) -> Elem {
        let mut e = Elem::zero();
        for (p, c) in it {
            e.add_term(p, c);
        }
        e
    }

    pub fn add_term(&mut self, p: Path, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0.0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Elem) {
        for (p, &c) in &other.terms {
            self.add_term(p.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &Elem, s: f64) {
        for (p, &c) in &other.terms {
            self.add_term(p.clone(), s * c);
        }
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub fn scale(&self, s: f64) -> Elem {
        Elem::from_terms(self.terms.iter().map(|(p, &c)| (p.clone(), s * c)))
    }

    pub fn coeff(&self, p: &Path) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest path length present, `None` for the zero element.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).max()
    }

    /// The homogeneous component of degree `n`.
    pub fn degree(&self, n: usize) -> Elem {
        Elem::from_terms(self.terms.iter().filter(|(p, _)| p.len() == n).map(|(p, &c)| (p.clone(), c)))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Path) -> bool) -> Elem {
        Elem::from_terms(self.terms.iter().filter(|(p, _)| keep(p)).map(|(p, &c)| (p.clone(), c)))
    }

    /// max |c| over the difference, 0 for equal elements.
    pub fn max_abs_diff(&self, other: &Elem) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Drops coefficients with |c| ≤ tol.
    pub fn cleaned(&self, tol: f64) -> Elem {
        Elem::from_terms(self.terms.iter().filter(|(_, c)| c.abs() > tol).map(|(p, &c)| (p.clone(), c)))
    }

    /// Linear extension of a map defined on basis paths.
    pub fn map_linear(&self, mut f: impl FnMut(&Path) -> Elem) -> Elem {
        let mut out = Elem::zero();
        for (p, &c) in &self.terms {
            out.add_scaled(&f(p), c);
        }
        out
    }

    /// Bilinear extension of a map defined on pairs of basis paths.
    pub fn map_bilinear(&self, other: &Elem, mut f: impl FnMut(&Path, &Path) -> Elem) -> Elem {
        let mut out = Elem::zero();
        for (p, &c) in &self.terms {
            for (q, &d) in &other.terms {
                out.add_scaled(&f(p, q), c * d);
            }
        }
        out
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms.iter().map(|(p, c)| format!("{c:+.6}[{}]", p.display(g))).collect::<Vec<_>>().join(" ")
    }
}
