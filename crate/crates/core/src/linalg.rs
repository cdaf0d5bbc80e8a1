//! Dense matrices of linear maps on path bases, for norm and adjoint checks.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::elem::Elem;
use crate::graph::Path;

/// Matrix of a linear map in the given bases: column j is the image of `domain[j]`.
/// Components of the image outside `codomain` are ignored.
pub fn matrix_of(domain: &[Path], codomain: &[Path], mut f: impl FnMut(&Path) -> Elem) -> DMatrix<f64> {
    let index: HashMap<&Path, usize> = codomain.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut m = DMatrix::zeros(codomain.len(), domain.len());
    for (j, p) in domain.iter().enumerate() {
        for (q, c) in f(p).iter() {
            if let Some(&i) = index.get(q) {
                m[(i, j)] += c;
            }
        }
    }
    m
}

/// Largest singular value; 0 for an empty matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a, &b| a.max(b))
}

/// max |a_ij − b_ij|.
pub fn max_entry_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, x| m.max(x.abs()))
}
