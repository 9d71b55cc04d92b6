//! Heegaard diagrams, their intersection graphs and the combinatorics of
//! generator counts.

pub mod analysis;
pub mod bigraph;
pub mod classify;
pub mod diagram;
pub mod intmat;
pub mod simpleknot;
pub mod template;
