//! Bounded-precision p-adic integers (the ring of integers of `Q_p`).
//!
//! An element is an ordinary integer, either exact or known modulo `p^N`.
//! Everything the index computations need lives inside `Z_p`, so negative
//! valuations are not represented; `e_K = v_K(p) = 1`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Valuation, ValuedField, DEFAULT_PRECISION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prec {
    Exact,
    /// Known modulo `p^N`.
    Finite(i64),
}

impl Prec {
    fn min(self, other: Prec) -> Prec {
        match (self, other) {
            (Prec::Exact, p) | (p, Prec::Exact) => p,
            (Prec::Finite(a), Prec::Finite(b)) => Prec::Finite(a.min(b)),
        }
    }

    fn bound(self) -> Option<i64> {
        match self {
            Prec::Exact => None,
            Prec::Finite(n) => Some(n),
        }
    }
}

/// A p-adic integer: `value + O(p^N)`, or exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicElem {
    value: BigInt,
    prec: Prec,
}

impl PadicElem {
    pub fn is_exact(&self) -> bool {
        self.prec == Prec::Exact
    }

    /// The absolute precision exponent, when truncated.
    pub fn precision_bound(&self) -> Option<i64> {
        self.prec.bound()
    }
}

/// The field context `Q_p` (integral elements only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicField {
    p: u32,
    precision: i64,
}

impl PadicField {
    pub fn new(p: u32) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        PadicField { p, precision: DEFAULT_PRECISION }
    }

    pub fn with_precision(p: u32, precision: i64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        assert!(precision > 0);
        PadicField { p, precision }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn reduce(&self, value: BigInt, prec: Prec) -> PadicElem {
        match prec {
            Prec::Exact => PadicElem { value, prec },
            Prec::Finite(n) => {
                let modulus = BigInt::from(self.p).pow(n as u32);
                let mut v = value % &modulus;
                if v.is_negative() {
                    v += &modulus;
                }
                PadicElem { value: v, prec }
            }
        }
    }

    /// v_p of a nonzero integer.
    fn int_valuation(&self, v: &BigInt) -> i64 {
        debug_assert!(!v.is_zero());
        let p = BigInt::from(self.p);
        let mut v = v.clone();
        let mut count = 0i64;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&v, &p);
            if r.is_zero() {
                count += 1;
                v = q;
            } else {
                return count;
            }
        }
    }

    pub fn from_bigint(&self, v: BigInt) -> PadicElem {
        PadicElem { value: v, prec: Prec::Exact }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ValuedField for PadicField {
    type Elem = PadicElem;

    fn zero(&self) -> PadicElem {
        PadicElem { value: BigInt::zero(), prec: Prec::Exact }
    }

    fn one(&self) -> PadicElem {
        self.from_int(1)
    }

    fn from_int(&self, k: i64) -> PadicElem {
        PadicElem { value: BigInt::from(k), prec: Prec::Exact }
    }

    fn add(&self, a: &PadicElem, b: &PadicElem) -> PadicElem {
        self.reduce(&a.value + &b.value, a.prec.min(b.prec))
    }

    fn sub(&self, a: &PadicElem, b: &PadicElem) -> PadicElem {
        self.reduce(&a.value - &b.value, a.prec.min(b.prec))
    }

    fn neg(&self, a: &PadicElem) -> PadicElem {
        self.reduce(-&a.value, a.prec)
    }

    fn mul(&self, a: &PadicElem, b: &PadicElem) -> PadicElem {
        let va = if a.value.is_zero() { None } else { Some(self.int_valuation(&a.value)) };
        let vb = if b.value.is_zero() { None } else { Some(self.int_valuation(&b.value)) };
        let mut bound: Option<i64> = None;
        let mut cut = |x: Option<i64>| {
            if let Some(x) = x {
                bound = Some(bound.map_or(x, |b: i64| b.min(x)));
            }
        };
        let (na, nb) = (a.prec.bound(), b.prec.bound());
        if let (Some(na), Some(nb)) = (na, nb) {
            cut(Some(na + nb));
        }
        if let Some(nb) = nb {
            if va.is_none() && na.is_none() {
                return self.zero();
            }
            cut(va.map(|v| v + nb));
        }
        if let Some(na) = na {
            if vb.is_none() && nb.is_none() {
                return self.zero();
            }
            cut(vb.map(|v| v + na));
        }
        let prec = match bound {
            None => Prec::Exact,
            Some(n) => Prec::Finite(n),
        };
        self.reduce(&a.value * &b.value, prec)
    }

    fn valuation(&self, a: &PadicElem) -> Valuation {
        if a.value.is_zero() {
            match a.prec {
                Prec::Exact => Valuation::Infinite,
                Prec::Finite(n) => Valuation::AtLeast(n),
            }
        } else {
            let v = self.int_valuation(&a.value);
            match a.prec {
                // reduced representative mod p^N is nonzero, so v < N
                Prec::Finite(n) => {
                    debug_assert!(v < n);
                    Valuation::Finite(v)
                }
                Prec::Exact => Valuation::Finite(v),
            }
        }
    }

    fn uniformizer(&self) -> PadicElem {
        self.from_int(self.p as i64)
    }

    fn residue_char(&self) -> u32 {
        self.p
    }

    fn residue_order(&self) -> u64 {
        self.p as u64
    }

    fn residue_lifts(&self) -> Vec<PadicElem> {
        (0..self.p as i64).map(|k| self.from_int(k)).collect()
    }

    fn e_k(&self) -> Option<i64> {
        Some(1)
    }

    fn default_precision(&self) -> i64 {
        self.precision
    }

    fn truncate(&self, a: &PadicElem, prec: i64) -> PadicElem {
        self.reduce(a.value.clone(), a.prec.min(Prec::Finite(prec)))
    }

    fn describe(&self) -> String {
        format!("Q_{}", self.p)
    }

    fn format(&self, a: &PadicElem) -> String {
        match a.prec {
            Prec::Exact => format!("{}", a.value),
            Prec::Finite(n) => format!("{} + O({}^{})", a.value, self.p, n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let q2 = PadicField::new(2);
        assert_eq!(q2.valuation(&q2.from_int(12)), Valuation::Finite(2));
        assert_eq!(q2.valuation(&q2.from_int(-8)), Valuation::Finite(3));
        assert_eq!(q2.valuation(&q2.from_int(0)), Valuation::Infinite);
        assert_eq!(q2.valuation(&q2.from_int(5)), Valuation::Finite(0));
    }

    #[test]
    fn arithmetic_and_reduction() {
        let q3 = PadicField::new(3);
        let a = q3.truncate(&q3.from_int(10), 2); // 10 ≡ 1 mod 9
        assert_eq!(q3.valuation(&a), Valuation::Finite(0));
        let b = q3.sub(&q3.from_int(1), &a); // 0 mod 9, known to precision 2
        assert_eq!(q3.valuation(&b), Valuation::AtLeast(2));
        // exact arithmetic stays exact
        let c = q3.mul(&q3.from_int(6), &q3.from_int(9));
        assert_eq!(q3.valuation(&c), Valuation::Finite(3));
        assert!(c.is_exact());
    }

    #[test]
    fn precision_propagates_through_multiplication() {
        let q2 = PadicField::new(2);
        let a = q2.truncate(&q2.from_int(4), 6); // v=2, prec 6
        let b = q2.from_int(2); // exact, v=1
        let ab = q2.mul(&a, &b);
        assert_eq!(ab.precision_bound(), Some(7)); // 6 + v(b)
        assert_eq!(q2.valuation(&ab), Valuation::Finite(3));
        assert!(q2.is_exact_zero(&q2.mul(&q2.zero(), &a)));
    }

    #[test]
    fn field_descriptors() {
        let q5 = PadicField::new(5);
        assert_eq!(q5.e_k(), Some(1));
        assert_eq!(q5.residue_lifts().len(), 5);
        assert_eq!(q5.describe(), "Q_5");
    }
}
