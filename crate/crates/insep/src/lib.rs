//! Exact-arithmetic invariants of totally ramified local-field extensions.
//!
//! The crate computes, over Laurent-series fields `F_q((t))` and the
//! `p`-adic rationals:
//!
//! * transition coefficients `d_λμ` between monomial and elementary
//!   symmetric polynomials, counted by admissible tilings of cycle
//!   digraphs ([`tilings`]), with a brute-force linear-algebra oracle
//!   ([`sympoly`]);
//! * indices of inseparability of an Eisenstein extension, the valuation
//!   function `g_h(r) = min v_K(E_h(α))` over `α ∈ M_L^r` with its lower
//!   bound and certified exact values, trace ideals and higher-order
//!   differents ([`indices`]);
//! * the supporting exact field arithmetic with honest precision tracking
//!   ([`field`]).
//!
//! Every runnable capability has a program under `examples/`; the `insep`
//! binary exposes the same operations as subcommands.

pub mod field;
pub mod indices;
pub mod partition;
pub mod sympoly;
pub mod tilings;

pub use partition::{Constraints, Partition};
