//! Totally ramified Eisenstein extensions `L = K(π)`, `f(π) = 0`.
//!
//! The defining polynomial is stored through its signed coefficients:
//! `f(X) = X^n - c_1 X^{n-1} + c_2 X^{n-2} - … + (-1)^n c_n`, which makes
//! `E_h(π) = c_h` on the nose.  Elements of `L` are coordinate vectors in
//! the basis `1, π, …, π^{n-1}`; `E_h(α)` is read off the characteristic
//! polynomial of the multiplication-by-α matrix, computed by the Berkowitz
//! algorithm (division-free, so it runs over any of our base rings and
//! keeps precision tracking exact).

use thiserror::Error;

use super::{Valuation, ValuedField};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("insufficient precision: E_{h} is zero to precision {bound} only")]
    InsufficientPrecision { h: u32, bound: i64 },
    #[error("not a uniformizer: v_L = {0}")]
    NotUniformizer(String),
    #[error("element exponent list has a duplicate exponent {0}")]
    DuplicateExponent(u32),
}

/// An element of `L` as coordinates `(α_0, …, α_{n-1})` with
/// `α = Σ α_i π^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElem<E> {
    coords: Vec<E>,
}

impl<E> ExtElem<E> {
    pub fn coords(&self) -> &[E] {
        &self.coords
    }
}

/// A totally ramified extension of the base field, `n = u·p^ν`.
#[derive(Debug, Clone)]
pub struct EisensteinExtension<F: ValuedField> {
    base: F,
    c: Vec<F::Elem>,
    n: u32,
    u: u32,
    nu: u32,
}

impl<F: ValuedField> EisensteinExtension<F> {
    /// Builds the extension from the signed coefficients `c_1..c_n`.
    /// Eisenstein means `v_K(c_h) >= 1` for all `h` and `v_K(c_n) = 1`.
    pub fn new(base: F, c: Vec<F::Elem>) -> Result<Self, ExtensionError> {
        let n = c.len() as u32;
        if n == 0 {
            return Err(ExtensionError::NotEisenstein("degree zero".into()));
        }
        for (i, ch) in c.iter().enumerate() {
            let v = base.valuation(ch);
            if !v.is_at_least(1) {
                return Err(ExtensionError::NotEisenstein(format!(
                    "v_K(c_{}) = {v}, needs >= 1",
                    i + 1
                )));
            }
        }
        if base.valuation(&c[n as usize - 1]) != Valuation::Finite(1) {
            return Err(ExtensionError::NotEisenstein(format!(
                "v_K(c_n) = {}, needs exactly 1",
                base.valuation(&c[n as usize - 1])
            )));
        }
        let p = base.residue_char();
        let mut nu = 0;
        let mut u = n;
        while u % p == 0 {
            u /= p;
            nu += 1;
        }
        Ok(EisensteinExtension { base, c, n, u, nu })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// The prime-to-p part of n.
    pub fn tame_degree(&self) -> u32 {
        self.u
    }

    /// ν with `n = u·p^ν`.
    pub fn wild_exponent(&self) -> u32 {
        self.nu
    }

    /// `c_h = E_h(π)`, 1-indexed.
    pub fn coefficient(&self, h: u32) -> &F::Elem {
        assert!(h >= 1 && h <= self.n);
        &self.c[h as usize - 1]
    }

    pub fn coefficients(&self) -> &[F::Elem] {
        &self.c
    }

    /// `e_L = v_L(p) = n·e_K`, `None` in equal characteristic.
    pub fn e_l(&self) -> Option<i64> {
        self.base.e_k().map(|e| e * self.n as i64)
    }

    pub fn zero_elem(&self) -> ExtElem<F::Elem> {
        ExtElem { coords: vec![self.base.zero(); self.n as usize] }
    }

    pub fn one_elem(&self) -> ExtElem<F::Elem> {
        self.scalar(self.base.one())
    }

    pub fn scalar(&self, a: F::Elem) -> ExtElem<F::Elem> {
        let mut coords = vec![self.base.zero(); self.n as usize];
        coords[0] = a;
        ExtElem { coords }
    }

    /// π itself (or the scalar `c_1` when n = 1, where π generates K).
    pub fn pi(&self) -> ExtElem<F::Elem> {
        if self.n == 1 {
            // X - c_1: π = c_1 in the base
            return self.scalar(self.c[0].clone());
        }
        let mut coords = vec![self.base.zero(); self.n as usize];
        coords[1] = self.base.one();
        ExtElem { coords }
    }

    pub fn from_coords(&self, coords: Vec<F::Elem>) -> ExtElem<F::Elem> {
        assert_eq!(coords.len(), self.n as usize);
        ExtElem { coords }
    }

    pub fn add_elem(&self, a: &ExtElem<F::Elem>, b: &ExtElem<F::Elem>) -> ExtElem<F::Elem> {
        ExtElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn scale_elem(&self, s: &F::Elem, a: &ExtElem<F::Elem>) -> ExtElem<F::Elem> {
        ExtElem { coords: a.coords.iter().map(|x| self.base.mul(s, x)).collect() }
    }

    /// Multiplication by π: shift coordinates, reducing the overflow with
    /// `π^n = c_1 π^{n-1} - c_2 π^{n-2} + … + (-1)^{n-1} c_n`.
    pub fn mul_pi(&self, a: &ExtElem<F::Elem>) -> ExtElem<F::Elem> {
        let n = self.n as usize;
        let top = a.coords[n - 1].clone();
        let mut coords = Vec::with_capacity(n);
        coords.push(self.base.zero());
        for i in 0..n - 1 {
            coords.push(a.coords[i].clone());
        }
        if !self.base.is_exact_zero(&top) {
            for h in 1..=n {
                let term = self.base.mul(&top, &self.c[h - 1]);
                let idx = n - h;
                coords[idx] = if h % 2 == 1 {
                    self.base.add(&coords[idx], &term)
                } else {
                    self.base.sub(&coords[idx], &term)
                };
            }
        }
        ExtElem { coords }
    }

    /// Full product in `L`, reducing degrees `>= n` against `f`.
    pub fn mul_elem(&self, a: &ExtElem<F::Elem>, b: &ExtElem<F::Elem>) -> ExtElem<F::Elem> {
        let n = self.n as usize;
        let mut wide = vec![self.base.zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if self.base.is_exact_zero(x) {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                wide[i + j] = self.base.add(&wide[i + j], &self.base.mul(x, y));
            }
        }
        for m in (n..2 * n - 1).rev() {
            let top = wide[m].clone();
            if self.base.is_exact_zero(&top) {
                continue;
            }
            wide[m] = self.base.zero();
            for h in 1..=n {
                let term = self.base.mul(&top, &self.c[h - 1]);
                let idx = m - h;
                wide[idx] = if h % 2 == 1 {
                    self.base.add(&wide[idx], &term)
                } else {
                    self.base.sub(&wide[idx], &term)
                };
            }
        }
        wide.truncate(n);
        ExtElem { coords: wide }
    }

    /// `Σ a_i π^i` from a term list with distinct exponents `i >= 0`.
    pub fn from_series(
        &self,
        terms: &[(u32, F::Elem)],
    ) -> Result<ExtElem<F::Elem>, ExtensionError> {
        let mut seen: Vec<u32> = Vec::new();
        for &(e, _) in terms {
            if seen.contains(&e) {
                return Err(ExtensionError::DuplicateExponent(e));
            }
            seen.push(e);
        }
        let max = terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
        let mut acc = self.zero_elem();
        let mut power = self.one_elem();
        for e in 0..=max {
            if let Some((_, a)) = terms.iter().find(|&&(te, _)| te == e) {
                acc = self.add_elem(&acc, &self.scale_elem(a, &power));
            }
            if e < max {
                power = self.mul_pi(&power);
            }
        }
        Ok(acc)
    }

    /// `π^e` in coordinates.
    pub fn pi_power(&self, e: u32) -> ExtElem<F::Elem> {
        let mut acc = self.one_elem();
        for _ in 0..e {
            acc = self.mul_pi(&acc);
        }
        acc
    }

    /// Matrix of multiplication by α in the basis `1, π, …, π^{n-1}`;
    /// `m[i][j]` is the coefficient of `π^i` in `α·π^j`.
    pub fn mult_matrix(&self, alpha: &ExtElem<F::Elem>) -> Vec<Vec<F::Elem>> {
        let n = self.n as usize;
        let mut matrix = vec![vec![self.base.zero(); n]; n];
        let mut col = alpha.clone();
        for j in 0..n {
            for i in 0..n {
                matrix[i][j] = col.coords[i].clone();
            }
            if j + 1 < n {
                col = self.mul_pi(&col);
            }
        }
        matrix
    }

    /// The signed characteristic-polynomial coefficients of
    /// multiplication by α: `det(X·id - T_α) = X^n - E_1 X^{n-1} + …
    /// + (-1)^n E_n`, returned as `(E_1, …, E_n)`.
    pub fn char_poly(&self, alpha: &ExtElem<F::Elem>) -> Vec<F::Elem> {
        let matrix = self.mult_matrix(alpha);
        let raw = berkowitz(&self.base, &matrix);
        // det(XI - M) = Σ raw[h] X^{n-h}; paper sign: c_h = (-1)^h raw[h]
        (1..=self.n as usize)
            .map(|h| {
                if h % 2 == 0 {
                    raw[h].clone()
                } else {
                    self.base.neg(&raw[h])
                }
            })
            .collect()
    }

    /// `(E_1(α), …, E_n(α))`. Fails loudly when a coefficient is zero only
    /// to working precision, so a wrong valuation is never reported.
    pub fn elementary_symmetric_values(
        &self,
        alpha: &ExtElem<F::Elem>,
    ) -> Result<Vec<F::Elem>, ExtensionError> {
        let values = self.char_poly(alpha);
        for (idx, value) in values.iter().enumerate() {
            if let Valuation::AtLeast(bound) = self.base.valuation(value) {
                return Err(ExtensionError::InsufficientPrecision {
                    h: idx as u32 + 1,
                    bound,
                });
            }
        }
        Ok(values)
    }

    /// `v_L(α) = min_i (n·v_K(α_i) + i)`; the candidates are distinct
    /// mod n, so the minimum is exact whenever the contributing
    /// coordinates are.
    pub fn valuation_l(&self, alpha: &ExtElem<F::Elem>) -> Valuation {
        let n = self.n as i64;
        let mut best_finite: Option<i64> = None;
        let mut best_bound: Option<i64> = None;
        for (i, x) in alpha.coords.iter().enumerate() {
            match self.base.valuation(x) {
                Valuation::Finite(v) => {
                    let cand = n * v + i as i64;
                    best_finite = Some(best_finite.map_or(cand, |b| b.min(cand)));
                }
                Valuation::AtLeast(b) => {
                    let cand = n * b + i as i64;
                    best_bound = Some(best_bound.map_or(cand, |x| x.min(cand)));
                }
                Valuation::Infinite => {}
            }
        }
        match (best_finite, best_bound) {
            (Some(v), None) => Valuation::Finite(v),
            (Some(v), Some(b)) if v < b => Valuation::Finite(v),
            (Some(v), Some(b)) => Valuation::AtLeast(b.min(v)),
            (None, Some(b)) => Valuation::AtLeast(b),
            (None, None) => Valuation::Infinite,
        }
    }

    /// The minimum polynomial of a uniformizer α of `L`, as a new
    /// extension descriptor over the same base.
    pub fn min_poly_of(
        &self,
        alpha: &ExtElem<F::Elem>,
    ) -> Result<EisensteinExtension<F>, ExtensionError> {
        let v = self.valuation_l(alpha);
        if v != Valuation::Finite(1) {
            return Err(ExtensionError::NotUniformizer(v.to_string()));
        }
        let c = self.char_poly(alpha);
        EisensteinExtension::new(self.base.clone(), c)
    }

    /// Defining polynomial in display form.
    pub fn poly_string(&self) -> String {
        let n = self.n;
        let mut out = format!("X^{n}");
        for h in 1..=n {
            let signed = if h % 2 == 1 {
                self.base.neg(self.coefficient(h))
            } else {
                self.coefficient(h).clone()
            };
            if self.base.is_exact_zero(&signed) {
                continue;
            }
            let cs = self.base.format(&signed);
            let cs = if cs.contains('+') && !cs.starts_with('(') {
                format!("({cs})")
            } else {
                cs
            };
            let power = n - h;
            let term = match power {
                0 => cs,
                1 if cs == "1" => "X".to_string(),
                1 => format!("{cs}*X"),
                _ if cs == "1" => format!("X^{power}"),
                _ => format!("{cs}*X^{power}"),
            };
            out.push_str(" + ");
            out.push_str(&term);
        }
        out
    }

    /// Element in display form `a_i @ i` (term list).
    pub fn elem_string(&self, alpha: &ExtElem<F::Elem>) -> String {
        let mut parts = Vec::new();
        for (i, x) in alpha.coords.iter().enumerate() {
            if !self.base.is_exact_zero(x) {
                parts.push(format!("{} @ {i}", self.base.format(x)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// Berkowitz's division-free characteristic polynomial.
/// Returns `raw[0..=n]` with `det(X·id - M) = Σ raw[i] X^{n-i}`,
/// `raw[0] = 1`.
pub fn berkowitz<F: ValuedField>(base: &F, m: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let n = m.len();
    let mut coeffs = vec![base.one()];
    for k in 1..=n {
        // principal k×k block; corner entry a, border row R and column S
        let a = &m[k - 1][k - 1];
        let mut col = vec![base.one(), base.neg(a)];
        if k >= 2 {
            let mut v: Vec<F::Elem> = (0..k - 1).map(|i| m[i][k - 1].clone()).collect();
            for j in 2..=k {
                let mut dot = base.zero();
                for i in 0..k - 1 {
                    dot = base.add(&dot, &base.mul(&m[k - 1][i], &v[i]));
                }
                col.push(base.neg(&dot));
                if j < k {
                    let mut next = vec![base.zero(); k - 1];
                    for (r, slot) in next.iter_mut().enumerate() {
                        for c in 0..k - 1 {
                            *slot = base.add(slot, &base.mul(&m[r][c], &v[c]));
                        }
                    }
                    v = next;
                }
            }
        }
        let mut next = vec![base.zero(); k + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, prev) in coeffs.iter().enumerate() {
                if i >= j && i - j <= k {
                    *slot = base.add(slot, &base.mul(&col[i - j], prev));
                }
            }
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::laurent::LaurentField;
    use crate::field::padic::PadicField;
    use crate::field::residue::ResidueField;

    /// F_2((t)), f = X^8 + t X^3 + t X^2 + t: in characteristic 2 the
    /// signed coefficients are c_5 = c_6 = c_8 = t, the rest zero.
    fn char2_example() -> (LaurentField, EisensteinExtension<LaurentField>) {
        let k = LaurentField::new(ResidueField::prime(2).unwrap());
        let t = k.uniformizer();
        let z = k.zero();
        let c = vec![
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            t.clone(),
            t.clone(),
            z,
            t,
        ];
        let ext = EisensteinExtension::new(k.clone(), c).unwrap();
        (k, ext)
    }

    #[test]
    fn degree_split() {
        let (_, ext) = char2_example();
        assert_eq!(ext.degree(), 8);
        assert_eq!(ext.tame_degree(), 1);
        assert_eq!(ext.wild_exponent(), 3);
        assert_eq!(ext.e_l(), None);
    }

    #[test]
    fn eisenstein_validation() {
        let k = LaurentField::new(ResidueField::prime(2).unwrap());
        let t = k.uniformizer();
        let one = k.one();
        // constant term a unit: not Eisenstein
        assert!(EisensteinExtension::new(k.clone(), vec![t.clone(), one]).is_err());
        // middle coefficient a unit: not Eisenstein
        assert!(EisensteinExtension::new(k.clone(), vec![k.one(), t.clone()]).is_err());
        // X^2 - tX + t is fine
        assert!(EisensteinExtension::new(k.clone(), vec![t.clone(), t]).is_ok());
    }

    #[test]
    fn pi_eighth_reduces_by_f() {
        let (k, ext) = char2_example();
        let t = k.uniformizer();
        // π^8 = t·π^3 + t·π^2 + t in characteristic 2
        let p8 = ext.from_series(&[(8, k.one())]).unwrap();
        let mut want = ext.zero_elem();
        want.coords[0] = t.clone();
        want.coords[2] = t.clone();
        want.coords[3] = t;
        assert_eq!(p8, want);
        // and π lands on the second basis vector
        let p1 = ext.from_series(&[(1, k.one())]).unwrap();
        assert_eq!(p1, ext.pi());
        let both = ext.from_series(&[(0, k.one()), (1, k.one())]).unwrap();
        assert_eq!(both.coords()[0], k.one());
        assert_eq!(both.coords()[1], k.one());
        assert!(ext.from_series(&[(1, k.one()), (1, k.one())]).is_err());
    }

    #[test]
    fn char_poly_of_pi_recovers_f() {
        let (k, ext) = char2_example();
        let values = ext.elementary_symmetric_values(&ext.pi()).unwrap();
        for h in 1..=8u32 {
            assert_eq!(
                &values[h as usize - 1],
                ext.coefficient(h),
                "E_{h}(π) should be c_{h}"
            );
        }
        let t = k.uniformizer();
        assert_eq!(values[4], t);
        assert_eq!(values[5], t);
        assert_eq!(values[7], t);
        assert!(k.is_exact_zero(&values[0]));
        assert!(k.is_exact_zero(&values[3]));
        assert!(k.is_exact_zero(&values[6]));
    }

    #[test]
    fn identity_multiplication_matrix() {
        let (k, ext) = char2_example();
        let m = ext.mult_matrix(&ext.one_elem());
        for i in 0..8 {
            for j in 0..8 {
                if i == j {
                    assert_eq!(m[i][j], k.one());
                } else {
                    assert!(k.is_exact_zero(&m[i][j]));
                }
            }
        }
    }

    #[test]
    fn companion_matrix_shape_for_degree_two() {
        // n = 2, f = X^2 - c_1 X + c_2: π·π = c_1 π - c_2
        let q2 = PadicField::new(2);
        let ext =
            EisensteinExtension::new(q2.clone(), vec![q2.from_int(2), q2.from_int(2)]).unwrap();
        let m = ext.mult_matrix(&ext.pi());
        assert_eq!(m[0][0], q2.zero());
        assert_eq!(m[1][0], q2.one());
        assert_eq!(m[0][1], q2.from_int(-2));
        assert_eq!(m[1][1], q2.from_int(2));
        // E_h(π) = c_h
        let vals = ext.elementary_symmetric_values(&ext.pi()).unwrap();
        assert_eq!(vals[0], q2.from_int(2));
        assert_eq!(vals[1], q2.from_int(2));
    }

    #[test]
    fn scalars_give_binomial_coefficients() {
        // E_h(c) = C(n, h)·c^h
        let q3 = PadicField::new(3);
        let ext = EisensteinExtension::new(
            q3.clone(),
            vec![q3.from_int(3), q3.from_int(3), q3.from_int(0), q3.from_int(3)],
        )
        .unwrap();
        let c = q3.from_int(2);
        let vals = ext.elementary_symmetric_values(&ext.scalar(c)).unwrap();
        let binom = [4i64, 6, 4, 1];
        for h in 1..=4usize {
            let want = q3.from_int(binom[h - 1] * 2i64.pow(h as u32));
            assert_eq!(vals[h - 1], want, "E_{h}(2)");
        }
    }

    #[test]
    fn norm_valuation_is_v_l() {
        let (k, ext) = char2_example();
        let one = k.one();
        // α = π^3 + π^5: v_L = 3
        let alpha = ext.from_series(&[(3, one.clone()), (5, one.clone())]).unwrap();
        assert_eq!(ext.valuation_l(&alpha), Valuation::Finite(3));
        let vals = ext.elementary_symmetric_values(&alpha).unwrap();
        assert_eq!(k.valuation(&vals[7]), Valuation::Finite(3));
        // multiplicativity of the norm
        let beta = ext.from_series(&[(1, one.clone()), (2, one)]).unwrap();
        let prod = ext.mul_elem(&alpha, &beta);
        let na = ext.elementary_symmetric_values(&alpha).unwrap()[7].clone();
        let nb = ext.elementary_symmetric_values(&beta).unwrap()[7].clone();
        let nprod = ext.elementary_symmetric_values(&prod).unwrap()[7].clone();
        assert_eq!(nprod, k.mul(&na, &nb));
    }

    #[test]
    fn min_poly_of_pi_is_f() {
        let (_, ext) = char2_example();
        let again = ext.min_poly_of(&ext.pi()).unwrap();
        assert_eq!(again.coefficients(), ext.coefficients());
        // π^2 is not a uniformizer
        let err = ext.min_poly_of(&ext.pi_power(2));
        assert!(matches!(err, Err(ExtensionError::NotUniformizer(_))));
    }

    #[test]
    fn min_poly_of_shifted_uniformizer_is_eisenstein() {
        let (k, ext) = char2_example();
        let one = k.one();
        let alpha = ext.from_series(&[(1, one.clone()), (2, one)]).unwrap();
        let other = ext.min_poly_of(&alpha).unwrap();
        assert_eq!(other.degree(), 8);
        // its own π must again have E_h(π) = coefficients
        let vals = other.elementary_symmetric_values(&other.pi()).unwrap();
        assert_eq!(vals.as_slice(), other.coefficients());
    }

    #[test]
    fn poly_string_round_trips_visually() {
        let (_, ext) = char2_example();
        assert_eq!(ext.poly_string(), "X^8 + t*X^3 + t*X^2 + t");
        let q2 = PadicField::new(2);
        let ext =
            EisensteinExtension::new(q2.clone(), vec![q2.from_int(-2), q2.from_int(2)]).unwrap();
        assert_eq!(ext.poly_string(), "X^2 + 2*X + 2");
        assert_eq!(ext.elem_string(&ext.pi()), "1 @ 1");
    }
}
