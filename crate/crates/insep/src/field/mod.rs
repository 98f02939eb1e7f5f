//! Exact arithmetic in complete discretely valued fields.
//!
//! Two base fields are supported: Laurent series `F_q((t))` (equal
//! characteristic) and the `p`-adic rationals restricted to their ring of
//! integers (mixed characteristic, `e_K = 1`).  Elements are exact unless
//! something was explicitly truncated; an inexact element remembers its
//! absolute precision and reports an indeterminate valuation rather than a
//! wrong one.  Totally ramified extensions are generated by Eisenstein
//! polynomials and live in [`extension`].

pub mod extension;
pub mod laurent;
pub mod padic;
pub mod residue;

pub use extension::{EisensteinExtension, ExtElem, ExtensionError};
pub use laurent::{LaurentField, LaurentSeries};
pub use padic::{PadicElem, PadicField};
pub use residue::{FqElem, ResidueField, ResidueFieldError};

/// Default absolute precision: 64 Laurent terms, or modulus `p^64`.
pub const DEFAULT_PRECISION: i64 = 64;

/// A valuation answer that never lies: `Finite(v)` is exact, `AtLeast(b)`
/// means every known coefficient vanishes but the element is only known to
/// precision `b`, `Infinite` is an exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    /// Provably `>= bound`?  (`false` means "not provable", not "no".)
    pub fn is_at_least(&self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => *v >= bound,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Valuation::AtLeast(_))
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(b) => write!(f, "indeterminate(>={b})"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Context-style interface of a complete discretely valued base field.
/// Extensions and the index computations are generic over this.
pub trait ValuedField: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `v_K`; exact zeros give `Infinite`, truncated zeros `AtLeast`.
    fn valuation(&self, a: &Self::Elem) -> Valuation;

    /// An exact zero (as opposed to zero-to-known-precision).
    fn is_exact_zero(&self, a: &Self::Elem) -> bool {
        matches!(self.valuation(a), Valuation::Infinite)
    }

    fn uniformizer(&self) -> Self::Elem;

    /// Residue characteristic p.
    fn residue_char(&self) -> u32;

    /// |residue field| = q.
    fn residue_order(&self) -> u64;

    /// Exact lifts of all q residue classes, deterministic order, zero
    /// first.
    fn residue_lifts(&self) -> Vec<Self::Elem>;

    /// A lift of a power-basis generator of the residue field, when it is
    /// a proper extension of its prime field.
    fn residue_generator(&self) -> Option<Self::Elem> {
        None
    }

    /// `e_K = v_K(p)`: `None` in equal characteristic (there `v_K(p) = ∞`).
    fn e_k(&self) -> Option<i64>;

    /// Working absolute precision for explicitly truncated computations.
    fn default_precision(&self) -> i64;

    /// Forgets everything at valuation `>= prec`.
    fn truncate(&self, a: &Self::Elem, prec: i64) -> Self::Elem;

    fn describe(&self) -> String;
    fn format(&self, a: &Self::Elem) -> String;
}
