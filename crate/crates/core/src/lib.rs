//! Permutation pattern statistics and the machinery around exact and
//! asymptotic k-symmetry.
//!
//! The crate is organised around a handful of small, mostly pure modules:
//!
//! - [`perm`]: one-line-notation permutations, the symmetry group generated
//!   by inverse/reverse/complement, tensor (Kronecker) products, interval
//!   partitions and contraction.
//! - [`pattern`]: counting all k-patterns of a permutation (reference,
//!   specialised, and incremental counters) and deciding exact k-symmetry.
//! - [`numtheory`]: p-adic valuations, factorial and binomial valuations,
//!   the exponents `a_p(k)`, the minimal modulus `T(k)`, admissible residues
//!   and the least admissible size `f(k)`.
//! - [`poly`]: exact rational polynomials (the carrier for target counts).
//! - [`inflate`]: target polynomials `Y_tau(m)` for k-inflatable
//!   permutations, in two computation modes, plus integrality analysis.
//! - [`verify`]: exact and Monte-Carlo oracles for the expected pattern
//!   counts of `sigma (x) rho` over random `rho`, with discrepancy reports
//!   that adjudicate between the two target modes.
//! - [`search`]: exhaustive and pruned backtracking searches for
//!   permutations with prescribed pattern counts, including the restricted
//!   self-dual class.

pub mod error;
pub mod inflate;
pub mod numtheory;
pub mod pattern;
pub mod perm;
pub mod poly;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{IntervalPartition, Permutation, SymmetryOp};
