//! Exact hypermatrix algebra.
//!
//! - [`scalar`]: exact rationals and prime-field residues
//! - [`hypermatrix`]: dense containers, the Kronecker delta, HMX text format
//! - [`product`]: Bhattacharya-Mesner products, plain and with a background
//! - [`power`]: hypermatrix powers, span dimensions, Cayley-Hamilton coefficients
//! - [`koenig`]: tripartite hypergraph view, composition, tetrahedral counts
//! - [`graph`]: graph loading, cospectrality, inflation, invariants
//! - [`fixtures`]: embedded witness hypermatrices and the cospectral pair
//! - [`random`]: seeded generators

pub mod fixtures;
pub mod graph;
pub mod hypermatrix;
pub mod koenig;
pub mod linalg;
pub mod power;
pub mod product;
pub mod random;
pub mod scalar;
