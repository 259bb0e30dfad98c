//! Thurston norm balls, fibered faces and Teichmüller polynomials for the
//! chained links C(n,p), computed in exact arithmetic.

pub mod algebra;
pub mod polytope;
pub mod chainlink;
pub mod thurston;
pub mod teichmuller;
pub mod fixtures;
