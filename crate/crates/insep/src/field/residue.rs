//! Finite residue fields `F_q`, `q = p^d`, as quotients `F_p[g]/(modulus)`.
//!
//! A built-in table supplies a monic irreducible modulus for every prime
//! power `q <= 64`; larger fields take a user-provided modulus, which is
//! verified irreducible by exhaustive trial division (fine at this scale).

use std::fmt;

use thiserror::Error;

/// Coefficient degree cap; enough for every `q <= 64` plus headroom for
/// user-supplied moduli.
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueFieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree {0} out of range 1..={MAX_DEGREE}")]
    BadDegree(u32),
    #[error("no built-in modulus for q = {0}^{1}; supply one")]
    NoTableEntry(u32, u32),
    #[error("modulus coefficient {0} is not reduced mod {1}")]
    BadModulusCoefficient(u8, u32),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("prime {0} too large (limit 251)")]
    PrimeTooLarge(u32),
}

/// An element of `F_q`, reduced coordinates in the power basis
/// `1, g, …, g^{d-1}` (zero-padded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    c: [u8; MAX_DEGREE],
}

impl FqElem {
    pub const ZERO: FqElem = FqElem { c: [0; MAX_DEGREE] };

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn from_slice(s: &[u8]) -> FqElem {
        let mut c = [0u8; MAX_DEGREE];
        c[..s.len()].copy_from_slice(s);
        FqElem { c }
    }
}

/// Monic irreducible moduli `X^d + c_{d-1}X^{d-1} + … + c_0` for prime
/// powers up to 64; entries are `(p, d, [c_0, …, c_{d-1}])`.
const MODULUS_TABLE: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (3, 2, &[1, 0]),
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 0]),
    (7, 2, &[1, 0]),
];

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

/// The field `F_q` with `q = p^degree`. All element operations go through
/// the field context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u32,
    degree: u32,
    modulus: Vec<u8>, // c_0..c_{d-1} of the monic modulus
}

impl ResidueField {
    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, ResidueFieldError> {
        Self::extension(p, 1)
    }

    /// `F_{p^d}` using the built-in modulus table.
    pub fn extension(p: u32, degree: u32) -> Result<Self, ResidueFieldError> {
        if !is_prime(p) {
            return Err(ResidueFieldError::NotPrime(p));
        }
        if p > 251 {
            return Err(ResidueFieldError::PrimeTooLarge(p));
        }
        if degree == 0 || degree as usize > MAX_DEGREE {
            return Err(ResidueFieldError::BadDegree(degree));
        }
        if degree == 1 {
            return Ok(ResidueField { p, degree, modulus: vec![0] });
        }
        let entry = MODULUS_TABLE
            .iter()
            .find(|&&(tp, td, _)| tp == p && td == degree)
            .ok_or(ResidueFieldError::NoTableEntry(p, degree))?;
        Self::with_modulus(p, entry.2.to_vec())
    }

    /// `F_{p^d}` from an explicit monic modulus given by its low
    /// coefficients `c_0..c_{d-1}`; checked irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u8>) -> Result<Self, ResidueFieldError> {
        if !is_prime(p) {
            return Err(ResidueFieldError::NotPrime(p));
        }
        if p > 251 {
            return Err(ResidueFieldError::PrimeTooLarge(p));
        }
        let degree = modulus.len() as u32;
        if degree == 0 || degree as usize > MAX_DEGREE {
            return Err(ResidueFieldError::BadDegree(degree));
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c as u32 >= p) {
            return Err(ResidueFieldError::BadModulusCoefficient(bad, p));
        }
        let field = ResidueField { p, degree, modulus };
        if degree > 1 && !field.modulus_is_irreducible() {
            return Err(ResidueFieldError::Reducible(p));
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// q = p^d
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.degree)
    }

    fn d(&self) -> usize {
        self.degree as usize
    }

    /// Trial division of the monic modulus by every monic polynomial of
    /// degree `1..=d/2` over `F_p`.
    fn modulus_is_irreducible(&self) -> bool {
        let d = self.d();
        // full coefficient vector of the modulus, degree d
        let mut f: Vec<u32> = self.modulus.iter().map(|&c| c as u32).collect();
        f.push(1);
        for deg in 1..=d / 2 {
            // iterate monic divisors g = X^deg + Σ a_i X^i over all a
            let count = (self.p as u64).pow(deg as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(deg + 1);
                let mut k = idx;
                for _ in 0..deg {
                    g.push((k % self.p as u64) as u32);
                    k /= self.p as u64;
                }
                g.push(1);
                if poly_divides(&g, &f, self.p) {
                    return false;
                }
            }
        }
        true
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The image of an integer (in the prime subfield).
    pub fn from_int(&self, k: i64) -> FqElem {
        let r = k.rem_euclid(self.p as i64) as u8;
        let mut c = [0u8; MAX_DEGREE];
        c[0] = r;
        FqElem { c }
    }

    /// The power-basis generator `g` (for d = 1 this is just 1).
    pub fn generator(&self) -> FqElem {
        if self.degree == 1 {
            return self.one();
        }
        let mut c = [0u8; MAX_DEGREE];
        c[1] = 1;
        FqElem { c }
    }

    /// Element with the given power-basis coordinates (length <= d).
    pub fn from_coords(&self, coords: &[u8]) -> FqElem {
        assert!(coords.len() <= self.d());
        assert!(coords.iter().all(|&x| (x as u32) < self.p));
        FqElem::from_slice(coords)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.d() {
            c[i] = ((a.c[i] as u32 + b.c[i] as u32) % self.p) as u8;
        }
        FqElem { c }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.d() {
            c[i] = ((self.p - a.c[i] as u32) % self.p) as u8;
        }
        FqElem { c }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let d = self.d();
        let mut wide = [0u32; 2 * MAX_DEGREE];
        for i in 0..d {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..d {
                wide[i + j] = (wide[i + j] + a.c[i] as u32 * b.c[j] as u32) % self.p;
            }
        }
        // reduce X^k for k >= d via X^d = -(c_{d-1}X^{d-1} + … + c_0)
        for k in (d..2 * d).rev() {
            let coeff = wide[k];
            if coeff == 0 {
                continue;
            }
            wide[k] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let sub = (coeff * m as u32) % self.p;
                wide[k - d + i] = (wide[k - d + i] + self.p - sub) % self.p;
            }
        }
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..d {
            c[i] = wide[i] as u8;
        }
        FqElem { c }
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    /// All q elements in deterministic counting order (0, 1, 2, …, then
    /// the higher basis digits).
    pub fn elements(&self) -> Vec<FqElem> {
        let q = self.order();
        (0..q)
            .map(|mut idx| {
                let mut c = [0u8; MAX_DEGREE];
                for entry in c.iter_mut().take(self.d()) {
                    *entry = (idx % self.p as u64) as u8;
                    idx /= self.p as u64;
                }
                FqElem { c }
            })
            .collect()
    }

    /// Plain-text form in the generator `g`, e.g. `g^2+2*g+1`.
    pub fn format(&self, a: &FqElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for i in (0..self.d()).rev() {
            let coeff = a.c[i];
            if coeff == 0 {
                continue;
            }
            let s = match (i, coeff) {
                (0, c) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            };
            parts.push(s);
        }
        parts.join("+")
    }
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}", self.order())
        }
    }
}

/// Does monic `g` divide monic `f` over `F_p`? Both as low-to-high
/// coefficient vectors with leading 1.
fn poly_divides(g: &[u32], f: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let pos = top - dg + i;
                rem[pos] = (rem[pos] + p - (lead * gc) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f3 = ResidueField::prime(3).unwrap();
        let two = f3.from_int(2);
        assert_eq!(f3.mul(&two, &two), f3.one());
        assert_eq!(f3.add(&two, &f3.one()), f3.zero());
        assert_eq!(f3.from_int(-1), two);
        assert_eq!(f3.order(), 3);
    }

    #[test]
    fn f4_has_a_cube_root_of_unity() {
        let f4 = ResidueField::extension(2, 2).unwrap();
        let g = f4.generator();
        // g^2 = g + 1 under X^2 + X + 1
        assert_eq!(f4.mul(&g, &g), f4.add(&g, &f4.one()));
        assert_eq!(f4.pow(&g, 3), f4.one());
        assert_eq!(f4.elements().len(), 4);
    }

    #[test]
    fn every_table_entry_constructs() {
        for &(p, d, _) in MODULUS_TABLE {
            let f = ResidueField::extension(p, d).unwrap();
            assert_eq!(f.order(), (p as u64).pow(d));
            // nonzero elements invert
            for e in f.elements().into_iter().skip(1) {
                assert_eq!(f.mul(&e, &f.inv(&e)), f.one());
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // X^2 + 1 = (X+1)^2 over F_2
        assert_eq!(
            ResidueField::with_modulus(2, vec![1, 0]),
            Err(ResidueFieldError::Reducible(2))
        );
        // X^2 + X + 1 over F_3 has no root but X^2 + 2X + 1 = (X+1)^2 does
        assert!(ResidueField::with_modulus(3, vec![1, 2]).is_err());
        assert!(ResidueField::with_modulus(3, vec![1, 0]).is_ok());
    }

    #[test]
    fn rejects_non_prime() {
        assert_eq!(ResidueField::prime(6), Err(ResidueFieldError::NotPrime(6)));
    }

    #[test]
    fn formats_elements() {
        let f8 = ResidueField::extension(2, 3).unwrap();
        let g = f8.generator();
        let e = f8.add(&f8.mul(&g, &g), &f8.one());
        assert_eq!(f8.format(&e), "g^2+1");
        assert_eq!(f8.format(&f8.zero()), "0");
    }
}
