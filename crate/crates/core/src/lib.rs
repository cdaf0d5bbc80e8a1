//! Path algebras of weighted bipartite graphs: graded and filtered pictures, the
//! Temperley-Lieb categories acting on them, operator-valued cumulants, factor
//! parameters and the planar-algebra path model.

pub mod cdelta;
pub mod cumulants;
pub mod elem;
pub mod epitl;
pub mod error;
pub mod factor;
pub mod falg;
pub mod gr;
pub mod graph;
pub mod linalg;
pub mod noncross;
pub mod planar;
pub mod verify;

pub use elem::Elem;
pub use error::{Error, Result};
pub use graph::{families, Graph, GraphSpec, Parity, Path, DEFAULT_TOL};
