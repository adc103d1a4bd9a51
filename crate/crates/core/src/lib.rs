//! Integral closures of powers of edge ideals and the stability of their
//! associated primes and depth.
//!
//! The pipeline runs graph → edge ideal → closure of its powers (exact
//! Newton polyhedron membership) → associated primes (irreducible
//! decomposition) and depth (multigraded Betti numbers), and finally the
//! stability indices bounded by the graph invariants `phi0` and `phi1`.

pub mod cli;
pub mod closure;
pub mod decomp;
pub mod error;
pub mod graph;
mod grid;
pub mod harness;
pub mod homology;
pub mod io;
pub mod lp;
pub mod monomial;
pub mod stability;

pub use closure::{closure_power, np_member, power_certificate};
pub use decomp::{associated_primes, ass_via_localization, irreducible_decomposition, maximal_in_ass, AssSet};
pub use error::{Error, Result};
pub use graph::Graph;
pub use homology::{betti_numbers, depth_quotient, lcm_lattice, upper_koszul, BettiTable};
pub use monomial::{Monomial, MonomialIdeal, PrimeSupport};
pub use stability::{report, Invariants, StabilityReport};
