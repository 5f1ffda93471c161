//! Hyperbolic 3-manifolds with geodesic boundary: tetrahedron volumes,
//! ideal triangulations, hyperbolicity equations, canonical decompositions
//! and a small-complexity census.

pub mod census;
pub mod geosolve;
pub mod kojima;
pub mod specfun;
pub mod tetshape;
pub mod tricomb;
