//! Formal Laurent series over a finite residue field, with precision
//! tracking.
//!
//! A series stores its known coefficients on a window `[start, start+len)`
//! and either is exact (finite support, nothing hidden) or carries an
//! absolute precision `N`: coefficients are known for all exponents `< N`
//! and unknown from `N` on.  Arithmetic on exact inputs stays exact;
//! precision only ever decreases.

use std::fmt::Write as _;

use super::residue::{FqElem, ResidueField};
use super::{Valuation, ValuedField, DEFAULT_PRECISION};

/// Absolute precision marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prec {
    Exact,
    /// Coefficients known exactly for exponents `< N`.
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

/// A Laurent series `Σ a_e t^e` in canonical trimmed form: the first and
/// last stored coefficients are nonzero; everything stored lies below the
/// precision bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    start: i64,
    coeffs: Vec<FqElem>,
    prec: Prec,
}

impl LaurentSeries {
    pub fn precision(&self) -> Prec {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Prec::Exact
    }

    /// Known coefficient at exponent `e`; `None` when `e` is beyond the
    /// precision bound.
    pub fn coeff(&self, e: i64) -> Option<FqElem> {
        if let Some(n) = self.prec.bound() {
            if e >= n {
                return None;
            }
        }
        if e < self.start || e >= self.start + self.coeffs.len() as i64 {
            return Some(FqElem::ZERO);
        }
        Some(self.coeffs[(e - self.start) as usize])
    }
}

/// The field `F_q((t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentField {
    fq: ResidueField,
    precision: i64,
}

impl LaurentField {
    pub fn new(fq: ResidueField) -> Self {
        LaurentField { fq, precision: DEFAULT_PRECISION }
    }

    pub fn with_precision(fq: ResidueField, precision: i64) -> Self {
        assert!(precision > 0);
        LaurentField { fq, precision }
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.fq
    }

    fn normalize(&self, start: i64, mut coeffs: Vec<FqElem>, prec: Prec) -> LaurentSeries {
        let mut start = start;
        if let Some(n) = prec.bound() {
            let keep = (n - start).max(0) as usize;
            coeffs.truncate(keep.min(coeffs.len()));
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentSeries { start: 0, coeffs: Vec::new(), prec },
            Some(k) => {
                coeffs.drain(..k);
                start += k as i64;
                while matches!(coeffs.last(), Some(c) if c.is_zero()) {
                    coeffs.pop();
                }
                LaurentSeries { start, coeffs, prec }
            }
        }
    }

    /// The exact series with a single term `c · t^e`.
    pub fn monomial(&self, c: FqElem, e: i64) -> LaurentSeries {
        self.normalize(e, vec![c], Prec::Exact)
    }

    /// Exact series from `(exponent, coefficient)` terms.
    pub fn from_terms(&self, terms: &[(i64, FqElem)]) -> LaurentSeries {
        let mut acc = self.zero();
        for &(e, c) in terms {
            acc = self.add(&acc, &self.monomial(c, e));
        }
        acc
    }

    /// An unknown-zero: no known coefficients, precision `n`.
    pub fn big_o(&self, n: i64) -> LaurentSeries {
        LaurentSeries { start: 0, coeffs: Vec::new(), prec: Prec::Finite(n) }
    }
}

impl ValuedField for LaurentField {
    type Elem = LaurentSeries;

    fn zero(&self) -> LaurentSeries {
        LaurentSeries { start: 0, coeffs: Vec::new(), prec: Prec::Exact }
    }

    fn one(&self) -> LaurentSeries {
        self.monomial(self.fq.one(), 0)
    }

    fn from_int(&self, k: i64) -> LaurentSeries {
        self.monomial(self.fq.from_int(k), 0)
    }

    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        let prec = a.prec.min(b.prec);
        if a.coeffs.is_empty() && b.coeffs.is_empty() {
            return LaurentSeries { start: 0, coeffs: Vec::new(), prec };
        }
        let start = if a.coeffs.is_empty() {
            b.start
        } else if b.coeffs.is_empty() {
            a.start
        } else {
            a.start.min(b.start)
        };
        let end = (a.start + a.coeffs.len() as i64).max(b.start + b.coeffs.len() as i64);
        let mut coeffs = Vec::with_capacity((end - start) as usize);
        for e in start..end {
            let x = a.coeff(e).unwrap_or(FqElem::ZERO);
            let y = b.coeff(e).unwrap_or(FqElem::ZERO);
            coeffs.push(self.fq.add(&x, &y));
        }
        self.normalize(start, coeffs, prec)
    }

    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        LaurentSeries {
            start: a.start,
            coeffs: a.coeffs.iter().map(|c| self.fq.neg(c)).collect(),
            prec: a.prec,
        }
    }

    fn sub(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        // precision of x_known·y_known + x_known·O + y_known·O + O·O
        let va = if a.coeffs.is_empty() { None } else { Some(a.start) };
        let vb = if b.coeffs.is_empty() { None } else { Some(b.start) };
        let mut bound: Option<i64> = None;
        let mut cut = |x: Option<i64>| {
            if let Some(x) = x {
                bound = Some(bound.map_or(x, |b: i64| b.min(x)));
            }
        };
        match (a.prec.bound(), b.prec.bound()) {
            (None, None) => {}
            (na, nb) => {
                if let (Some(na), Some(nb)) = (na, nb) {
                    cut(Some(na + nb));
                }
                if let Some(nb) = nb {
                    cut(va.map(|v| v + nb));
                    if va.is_none() && na.is_none() {
                        // exact zero times imprecise: exact zero
                        return self.zero();
                    }
                }
                if let Some(na) = na {
                    cut(vb.map(|v| v + na));
                    if vb.is_none() && b.prec.bound().is_none() {
                        return self.zero();
                    }
                }
            }
        }
        let prec = match bound {
            None => Prec::Exact,
            Some(n) => Prec::Finite(n),
        };
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return LaurentSeries { start: 0, coeffs: Vec::new(), prec };
        }
        let start = a.start + b.start;
        let mut coeffs = vec![FqElem::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    coeffs[i + j] = self.fq.add(&coeffs[i + j], &self.fq.mul(x, y));
                }
            }
        }
        self.normalize(start, coeffs, prec)
    }

    fn valuation(&self, a: &LaurentSeries) -> Valuation {
        if let Some(&first) = a.coeffs.first() {
            debug_assert!(!first.is_zero());
            Valuation::Finite(a.start)
        } else {
            match a.prec {
                Prec::Exact => Valuation::Infinite,
                Prec::Finite(n) => Valuation::AtLeast(n),
            }
        }
    }

    fn uniformizer(&self) -> LaurentSeries {
        self.monomial(self.fq.one(), 1)
    }

    fn residue_char(&self) -> u32 {
        self.fq.p()
    }

    fn residue_order(&self) -> u64 {
        self.fq.order()
    }

    fn residue_lifts(&self) -> Vec<LaurentSeries> {
        self.fq
            .elements()
            .into_iter()
            .map(|c| self.monomial(c, 0))
            .collect()
    }

    fn residue_generator(&self) -> Option<LaurentSeries> {
        (self.fq.degree() > 1).then(|| self.monomial(self.fq.generator(), 0))
    }

    fn e_k(&self) -> Option<i64> {
        None
    }

    fn default_precision(&self) -> i64 {
        self.precision
    }

    fn truncate(&self, a: &LaurentSeries, prec: i64) -> LaurentSeries {
        let new_prec = a.prec.min(Prec::Finite(prec));
        self.normalize(a.start, a.coeffs.clone(), new_prec)
    }

    fn describe(&self) -> String {
        format!("{}((t))", self.fq)
    }

    fn format(&self, a: &LaurentSeries) -> String {
        let mut out = String::new();
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let e = a.start + i as i64;
            let cs = self.fq.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match e {
                0 => out.push_str(&cs),
                1 if cs == "1" => out.push('t'),
                1 => {
                    let _ = write!(out, "{cs}*t");
                }
                e if cs == "1" => {
                    let _ = write!(out, "t^{e}");
                }
                e => {
                    let _ = write!(out, "{cs}*t^{e}");
                }
            }
        }
        match (out.is_empty(), a.prec) {
            (true, Prec::Exact) => "0".to_string(),
            (true, Prec::Finite(n)) => format!("O(t^{n})"),
            (false, Prec::Exact) => out,
            (false, Prec::Finite(n)) => format!("{out} + O(t^{n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2t() -> LaurentField {
        LaurentField::new(ResidueField::prime(2).unwrap())
    }

    #[test]
    fn valuation_basics() {
        let k = f2t();
        let one = k.residue_field().one();
        let x = k.from_terms(&[(3, one), (5, one)]);
        assert_eq!(k.valuation(&x), Valuation::Finite(3));
        assert_eq!(k.valuation(&k.zero()), Valuation::Infinite);
        assert_eq!(k.valuation(&k.big_o(10)), Valuation::AtLeast(10));
        assert_eq!(k.format(&x), "t^3 + t^5");
    }

    #[test]
    fn char_two_addition_cancels() {
        let k = f2t();
        let t = k.uniformizer();
        assert_eq!(k.add(&t, &t), k.zero());
        assert!(k.is_exact_zero(&k.add(&t, &t)));
    }

    #[test]
    fn multiplication_tracks_value_and_precision() {
        let k = f2t();
        let one = k.residue_field().one();
        let x = k.from_terms(&[(1, one), (2, one)]);
        let y = k.from_terms(&[(-1, one), (0, one)]);
        let xy = k.mul(&x, &y);
        // (t + t^2)(t^-1 + 1) = 1 + t^2 over F_2: the two t terms cancel
        assert_eq!(xy, k.from_terms(&[(0, one), (2, one)]));

        // truncated operand: precision bounds propagate honestly
        let x8 = k.truncate(&x, 8);
        let prod = k.mul(&x8, &y);
        assert_eq!(prod.precision(), Prec::Finite(7)); // 8 + val(y) = 8 - 1
        assert_eq!(k.valuation(&prod), Valuation::Finite(0));

        // unknown-zero times a unit keeps only the bound
        let o = k.big_o(5);
        let prod = k.mul(&o, &y);
        assert_eq!(k.valuation(&prod), Valuation::AtLeast(4));

        // exact zero annihilates even imprecise elements
        assert!(k.is_exact_zero(&k.mul(&k.zero(), &o)));
    }

    #[test]
    fn precision_never_increases() {
        let k = f2t();
        let one = k.residue_field().one();
        let x = k.truncate(&k.from_terms(&[(2, one)]), 6);
        let y = k.from_terms(&[(0, one), (1, one)]);
        let z = k.add(&x, &y);
        assert_eq!(z.precision(), Prec::Finite(6));
        // error term O(t^6)·y starts at 6 + v(y) = 6
        let z = k.mul(&x, &y);
        assert_eq!(z.precision(), Prec::Finite(6));
        assert_eq!(k.valuation(&z), Valuation::Finite(2));
    }

    #[test]
    fn formatting_of_extension_coefficients() {
        let f4 = ResidueField::extension(2, 2).unwrap();
        let k = LaurentField::new(f4.clone());
        let g = f4.generator();
        let gp1 = f4.add(&g, &f4.one());
        let x = k.from_terms(&[(2, gp1)]);
        assert_eq!(k.format(&x), "(g+1)*t^2");
        assert_eq!(k.format(&k.big_o(64)), "O(t^64)");
    }

    #[test]
    fn lifts_enumerate_residue_field() {
        let k = f2t();
        assert_eq!(k.residue_lifts().len(), 2);
        let f9 = LaurentField::new(ResidueField::extension(3, 2).unwrap());
        assert_eq!(k.e_k(), None);
        assert_eq!(f9.residue_lifts().len(), 9);
    }
}
