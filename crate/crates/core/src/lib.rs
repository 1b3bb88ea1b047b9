//! Elliptic fibrations mirror to del Pezzo surfaces of degree 1, 2 and 3:
//! Weierstrass data and Kodaira fibers, quantum and classical periods,
//! vanishing cycles, pseudolattice mutations and E_ℓ root lattices.

pub mod cli;
pub mod exactpoly;
pub mod interfam;
pub mod intmat;
pub mod pathnum;
pub mod periods;
pub mod pseudolattice;
pub mod rootlattice;
pub mod vancycles;
pub mod weierstrass;
