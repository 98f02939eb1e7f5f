//! Symmetric polynomials in the monomial basis, the brute-force `m → e`
//! basis change, and the subrings `R_k` of `Z[X_1,…,X_n]`.
//!
//! Arithmetic stays in the monomial basis, keyed by orbit representatives
//! (partitions with at most `n` parts), never by raw exponent tuples, so
//! the cost of an expansion is governed by partition counts rather than
//! `n^w`.  `brute_force_psi` solves the integer linear system expressing
//! `m_μ` through products `e_{λ_1}···e_{λ_k}` exactly over rationals and
//! asserts that the solution is integral and reconstructs `m_μ`; its
//! coefficients are the independent oracle for the tiling-counted `d_λμ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::partition::{self, Partition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymPolyError {
    #[error("partition {0} has more than {1} parts")]
    TooManyParts(Partition, u32),
    #[error("elementary index {0} out of range 1..={1}")]
    IndexOutOfRange(u32, u32),
    #[error("weight {0} exceeds the configured bound {1}")]
    BoundExceeded(u32, u32),
    #[error("coefficient overflow in monomial-basis arithmetic")]
    Overflow,
}

/// Default weight bound for [`brute_force_psi`]; callers with bigger sweeps
/// pass their own bound explicitly.
pub const DEFAULT_PSI_WEIGHT_BOUND: u32 = 12;

/// A symmetric polynomial in `n` variables, written in the monomial basis:
/// a finite map from exponent partitions (at most `n` parts) to integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSymPoly {
    n: u32,
    terms: BTreeMap<Partition, i128>,
}

impl MultiSymPoly {
    pub fn zero(n: u32) -> Self {
        MultiSymPoly { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, key: &Partition) -> i128 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i128)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: Partition, value: i128) {
        debug_assert!(key.len() <= self.n as usize);
        if value != 0 {
            self.terms.insert(key, value);
        }
    }

    pub fn add(&self, other: &MultiSymPoly) -> MultiSymPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let entry = out.terms.entry(k.clone()).or_insert(0);
            *entry = entry.checked_add(*v).expect("coefficient overflow");
            if *entry == 0 {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: i128) -> MultiSymPoly {
        let mut out = MultiSymPoly::zero(self.n);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.checked_mul(c).expect("coefficient overflow"));
        }
        out
    }

    /// Multiplies by the elementary symmetric polynomial `e_h`.
    ///
    /// For each orbit key ν and each 0/1 vector ε with `h` ones, the target
    /// orbit is `sort(ν_pad + ε)`; the exact coefficient comes out of the
    /// orbit-size bookkeeping `c_ρ = Σ_ν c_ν · P_ν · #ε / P_ρ` where `P` is
    /// the number of distinct rearrangements of the padded vector.
    pub fn mul_elementary(&self, h: u32) -> Result<MultiSymPoly, SymPolyError> {
        if h < 1 || h > self.n {
            return Err(SymPolyError::IndexOutOfRange(h, self.n));
        }
        let n = self.n as usize;
        let mut raw: BTreeMap<Partition, i128> = BTreeMap::new();
        for (key, &c) in &self.terms {
            let mut padded = vec![0u32; n];
            padded[..key.len()].copy_from_slice(key.parts());
            let p_source = perm_count(&padded);
            let weight = c.checked_mul(p_source).ok_or(SymPolyError::Overflow)?;
            let mut positions = first_combination(h as usize);
            loop {
                let mut bumped = padded.clone();
                for &i in &positions {
                    bumped[i] += 1;
                }
                bumped.sort_unstable_by(|a, b| b.cmp(a));
                let rho = Partition::of(bumped.into_iter().filter(|&x| x > 0));
                let entry = raw.entry(rho).or_insert(0);
                *entry = entry.checked_add(weight).ok_or(SymPolyError::Overflow)?;
                if !next_combination(&mut positions, n) {
                    break;
                }
            }
        }
        let mut out = MultiSymPoly::zero(self.n);
        for (rho, total) in raw {
            if total == 0 {
                continue;
            }
            let mut padded = vec![0u32; n];
            padded[..rho.len()].copy_from_slice(rho.parts());
            let p_target = perm_count(&padded);
            debug_assert_eq!(total % p_target, 0, "orbit bookkeeping must divide exactly");
            out.insert(rho, total / p_target);
        }
        Ok(out)
    }
}

fn first_combination(h: usize) -> Vec<usize> {
    (0..h).collect()
}

/// Advances `positions` to the next `h`-combination of `0..n`; false when
/// exhausted.
fn next_combination(positions: &mut [usize], n: usize) -> bool {
    let h = positions.len();
    if h == 0 {
        return false;
    }
    let mut i = h;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if positions[i] < n - (h - i) {
            positions[i] += 1;
            for j in i + 1..h {
                positions[j] = positions[j - 1] + 1;
            }
            return true;
        }
    }
}

/// Number of distinct rearrangements of a padded exponent vector.
fn perm_count(padded: &[u32]) -> i128 {
    let n = padded.len();
    assert!(n <= 27, "variable count too large for exact orbit sizes");
    let mut fact = vec![1i128; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as i128;
    }
    let mut sorted = padded.to_vec();
    sorted.sort_unstable();
    let mut denom: i128 = 1;
    let mut run = 1usize;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            denom *= fact[run];
            run = 1;
        }
    }
    fact[n] / denom
}

/// The monomial symmetric polynomial `m_μ` in `n` variables.
pub fn monomial_sym(mu: &Partition, n: u32) -> Result<MultiSymPoly, SymPolyError> {
    if mu.len() > n as usize {
        return Err(SymPolyError::TooManyParts(mu.clone(), n));
    }
    let mut out = MultiSymPoly::zero(n);
    out.insert(mu.clone(), 1);
    Ok(out)
}

/// The elementary symmetric polynomial `e_h = m_{1^h}` in `n` variables.
pub fn elementary_sym(h: u32, n: u32) -> Result<MultiSymPoly, SymPolyError> {
    if h < 1 || h > n {
        return Err(SymPolyError::IndexOutOfRange(h, n));
    }
    let mut out = MultiSymPoly::zero(n);
    out.insert(Partition::of(vec![1; h as usize]), 1);
    Ok(out)
}

/// Expands the product `e_{λ_1}···e_{λ_k}` in the monomial basis.
pub fn elementary_product(lambda: &Partition, n: u32) -> Result<MultiSymPoly, SymPolyError> {
    let mut acc = {
        let mut one = MultiSymPoly::zero(n);
        one.insert(Partition::empty(), 1);
        one
    };
    for &part in lambda.parts() {
        acc = acc.mul_elementary(part)?;
    }
    Ok(acc)
}

/// `ψ_μ`, the polynomial with `m_μ = ψ_μ(e_1,…,e_n)`, as a map from
/// partitions λ (the monomial `X_{λ_1}···X_{λ_k}`) to its coefficient
/// `d_λμ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiPolynomial {
    mu: Partition,
    n: u32,
    terms: BTreeMap<Partition, i64>,
}

impl PsiPolynomial {
    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `d_λμ` (zero when λ is absent).
    pub fn coefficient(&self, lambda: &Partition) -> i64 {
        self.terms.get(lambda).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    /// Evaluates `Σ_λ d_λμ e_λ` in the monomial basis; must equal `m_μ`.
    pub fn reconstruct(&self) -> Result<MultiSymPoly, SymPolyError> {
        let mut acc = MultiSymPoly::zero(self.n);
        for (lambda, &c) in &self.terms {
            acc = acc.add(&elementary_product(lambda, self.n)?.scalar_mul(c as i128));
        }
        Ok(acc)
    }

    /// The exponent-vector form: `X_i` exponent = multiplicity of `i` in λ.
    pub fn to_int_poly(&self) -> IntPoly {
        let mut terms = BTreeMap::new();
        for (lambda, &c) in &self.terms {
            let mut exp = vec![0u32; self.n as usize];
            for &part in lambda.parts() {
                exp[part as usize - 1] += 1;
            }
            terms.insert(exp, c);
        }
        IntPoly { n: self.n, terms }
    }
}

impl fmt::Display for PsiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (lambda, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let monomial: Vec<String> =
                lambda.parts().iter().map(|p| format!("X_{p}")).collect();
            write!(f, "{c} * {}", monomial.join("·"))?;
        }
        Ok(())
    }
}

/// Computes `ψ_μ` by exact linear algebra over the rationals.
///
/// The unknowns are indexed by partitions of `Σ(μ)` with parts `≤ n`, the
/// equations by their conjugates.  Equations are processed in
/// lexicographically decreasing order, which linearizes the dominance
/// triangularity of the `e → m` transition; the solution is then verified
/// by exact reconstruction of `m_μ`, with a fully pivoted elimination as
/// fallback should the ordering assumption ever fail.
pub fn brute_force_psi(
    mu: &Partition,
    n: u32,
    weight_bound: u32,
) -> Result<PsiPolynomial, SymPolyError> {
    let w = mu.sum();
    if mu.len() > n as usize {
        return Err(SymPolyError::TooManyParts(mu.clone(), n));
    }
    if w > weight_bound {
        return Err(SymPolyError::BoundExceeded(w, weight_bound));
    }
    assert!(w >= 1, "psi of the empty partition");

    let e_index: Vec<Partition> = partition::parts_at_most(w, n).collect();
    let mut m_index: Vec<Partition> = e_index.iter().map(Partition::conjugate).collect();
    m_index.sort_unstable_by(|a, b| b.cmp(a));
    let expansions: BTreeMap<Partition, MultiSymPoly> = e_index
        .iter()
        .map(|l| Ok((l.clone(), elementary_product(l, n)?)))
        .collect::<Result<_, SymPolyError>>()?;

    let mut solved: BTreeMap<Partition, BigRational> = BTreeMap::new();
    for m_key in &m_index {
        let diag = m_key.conjugate();
        let mut acc = if m_key == mu {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        for (lambda, x) in &solved {
            let c = expansions[lambda].coeff(m_key);
            if c != 0 {
                acc -= BigRational::from_integer(BigInt::from(c)) * x;
            }
        }
        let diag_coeff = expansions[&diag].coeff(m_key);
        debug_assert_ne!(diag_coeff, 0, "missing diagonal at {m_key}");
        solved.insert(diag, acc / BigRational::from_integer(BigInt::from(diag_coeff)));
    }

    match finish_solution(mu, n, &solved, &expansions) {
        Some(psi) => Ok(psi),
        None => {
            // ordering assumption failed; solve the full system with pivoting
            let solved = pivoted_solve(mu, &m_index, &e_index, &expansions);
            Ok(finish_solution(mu, n, &solved, &expansions)
                .expect("pivoted m->e solve must reconstruct m_mu"))
        }
    }
}

/// Integrality check + reconstruction check; `None` when either fails.
fn finish_solution(
    mu: &Partition,
    n: u32,
    solved: &BTreeMap<Partition, BigRational>,
    expansions: &BTreeMap<Partition, MultiSymPoly>,
) -> Option<PsiPolynomial> {
    let mut terms = BTreeMap::new();
    for (lambda, x) in solved {
        if !x.is_integer() {
            return None;
        }
        let int = x.to_integer();
        if int.is_zero() {
            continue;
        }
        let as64 = i64::try_from(&int).ok()?;
        terms.insert(lambda.clone(), as64);
    }
    let mut acc = MultiSymPoly::zero(n);
    for (lambda, &c) in &terms {
        acc = acc.add(&expansions[lambda].scalar_mul(c as i128));
    }
    let target = monomial_sym(mu, n).ok()?;
    if acc == target {
        Some(PsiPolynomial { mu: mu.clone(), n, terms })
    } else {
        None
    }
}

fn pivoted_solve(
    mu: &Partition,
    m_index: &[Partition],
    e_index: &[Partition],
    expansions: &BTreeMap<Partition, MultiSymPoly>,
) -> BTreeMap<Partition, BigRational> {
    let k = e_index.len();
    let mut a: Vec<Vec<BigRational>> = m_index
        .iter()
        .map(|m_key| {
            e_index
                .iter()
                .map(|l| BigRational::from_integer(BigInt::from(expansions[l].coeff(m_key))))
                .collect()
        })
        .collect();
    let mut b: Vec<BigRational> = m_index
        .iter()
        .map(|m_key| {
            if m_key == mu {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let mut row_of_col = vec![usize::MAX; k];
    let mut used = vec![false; m_index.len()];
    for col in 0..k {
        let pivot = (0..m_index.len())
            .find(|&r| !used[r] && !a[r][col].is_zero())
            .expect("transition matrix is invertible");
        used[pivot] = true;
        row_of_col[col] = pivot;
        let inv = a[pivot][col].clone();
        for r in 0..m_index.len() {
            if r != pivot && !a[r][col].is_zero() {
                let factor = &a[r][col] / &inv;
                for c in col..k {
                    let delta = &factor * &a[pivot][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[pivot];
                b[r] -= delta;
            }
        }
    }
    let mut solved = BTreeMap::new();
    for col in 0..k {
        let r = row_of_col[col];
        solved.insert(e_index[col].clone(), &b[r] / &a[r][col]);
    }
    solved
}

/// The partitions indexing the truncated right-hand side of the expansion
/// of `e_h(φ(X_1),…,φ(X_n))` for a series `φ` supported in degrees `≥ r`:
/// all μ with exactly `h` parts, every part `≥ r`, and `Σ(μ) ≤ degree_cap`,
/// grouped by weight and lexicographically decreasing within a weight. The
/// generic coefficient attached to μ is `a_μ = a_{μ_1}···a_{μ_h}`.
pub fn eh_of_series(h: u32, n: u32, r: u32, degree_cap: u32) -> Vec<Partition> {
    assert!(h >= 1 && h <= n, "h out of range");
    assert!(r >= 1, "series must vanish at the origin");
    let mut out = Vec::new();
    let lo = h * r;
    let mut w = lo;
    while w <= degree_cap {
        out.extend(partition::with_parts_at_least(w, h as usize, r));
        w += 1;
    }
    out
}

/// Pretty form of the generic coefficient monomial `a_μ`.
pub fn a_monomial(mu: &Partition) -> String {
    mu.multiplicities()
        .iter()
        .map(|(v, m)| {
            if *m == 1 {
                format!("a_{v}")
            } else {
                format!("a_{v}^{m}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// An integer polynomial in `n` variables, keyed by exponent vectors.
/// Just enough structure to express the subring membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub n: u32,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    pub fn new(n: u32) -> Self {
        IntPoly { n, terms: BTreeMap::new() }
    }

    pub fn set(&mut self, exponents: Vec<u32>, coeff: i64) {
        assert_eq!(exponents.len(), self.n as usize);
        if coeff != 0 {
            self.terms.insert(exponents, coeff);
        } else {
            self.terms.remove(&exponents);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled_substituted(&mut self, other: &IntPoly, scale: i64, exp_scale: u32) {
        for (exp, c) in &other.terms {
            let new_exp: Vec<u32> = exp.iter().map(|&e| e * exp_scale).collect();
            let entry = self.terms.entry(new_exp.clone()).or_insert(0);
            *entry = entry.checked_add(c.checked_mul(scale).expect("overflow")).expect("overflow");
            if *entry == 0 {
                self.terms.remove(&new_exp);
            }
        }
    }
}

/// A failed monomial in an `R_k` membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkFailure {
    pub exponents: Vec<u32>,
    pub coefficient: i64,
    /// Largest `i ≤ k` with `p^i` dividing the whole exponent vector.
    pub level: u32,
    /// The coefficient had to be divisible by `p^{k-level}` and is not.
    pub required_power: u32,
}

/// Outcome of [`rk_membership`]: either the witness decomposition
/// `F = Σ_i p^{k-i} φ_i(X^{p^i})` or the offending monomials.
#[derive(Debug, Clone)]
pub struct RkMembership {
    pub member: bool,
    pub k: u32,
    pub p: u32,
    /// `φ_0,…,φ_k` when `member`.
    pub witness: Option<Vec<IntPoly>>,
    pub failures: Vec<RkFailure>,
}

impl RkMembership {
    /// Recombines the witness and checks it reproduces `f` exactly.
    pub fn witness_checks(&self, f: &IntPoly) -> bool {
        let Some(levels) = &self.witness else {
            return false;
        };
        let mut acc = IntPoly::new(f.n);
        for (i, phi) in levels.iter().enumerate() {
            let p_pow = (self.p as i64).pow(self.k - i as u32);
            acc.add_scaled_substituted(phi, p_pow, (self.p as u32).pow(i as u32));
        }
        acc == *f
    }
}

/// Membership of `F` in `R_k = Z[X^{p^k}] + pZ[X^{p^{k-1}}] + … + p^k Z[X]`.
///
/// Monomial-wise: a monomial whose exponent vector is divisible by `p^s`
/// but not `p^{s+1}` (with `s` capped at `k`) belongs to the sum exactly
/// when its coefficient is divisible by `p^{k-s}`.
pub fn rk_membership(f: &IntPoly, k: u32, p: u32) -> RkMembership {
    let mut witness: Vec<IntPoly> = (0..=k).map(|_| IntPoly::new(f.n)).collect();
    let mut failures = Vec::new();
    for (exp, c) in &f.terms {
        let mut level = 0u32;
        'level: while level < k {
            let q = p.pow(level + 1);
            for &e in exp {
                if e % q != 0 {
                    break 'level;
                }
            }
            level += 1;
        }
        let required = (p as i64).pow(k - level);
        if c % required != 0 {
            failures.push(RkFailure {
                exponents: exp.clone(),
                coefficient: *c,
                level,
                required_power: k - level,
            });
        } else {
            let reduced: Vec<u32> = exp.iter().map(|&e| e / p.pow(level)).collect();
            witness[level as usize].set(reduced, c / required);
        }
    }
    let member = failures.is_empty();
    RkMembership {
        member,
        k,
        p,
        witness: member.then_some(witness),
        failures,
    }
}
