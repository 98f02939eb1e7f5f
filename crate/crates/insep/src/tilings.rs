//! Cycle digraphs, path tilings, and the transition coefficients `d_λμ`.
//!
//! A cycle digraph is a disjoint union of directed cycles; its isomorphism
//! class is exactly the multiset of cycle lengths.  A λ-tiling covers the
//! vertices by directed paths whose sizes realize λ; concretely a tiling of
//! one cycle is a nonempty set of "cut" vertices (path starts), stored here
//! as a bitmask on `Z/len`.  A (λ,μ)-tiling is an ordered pair of tilings,
//! admissible when the decorated digraph has no nontrivial automorphism.
//!
//! `d_λμ = (-1)^{|λ|+|μ|} Σ_Γ sgn(Γ) η_λμ(Γ)`, the sum over isomorphism
//! classes of cycle digraphs on `Σ(λ)` vertices, where `η` counts
//! isomorphism classes of admissible tilings.  Closed forms exist when λ
//! has a single part and μ is `{b^m, c}` with `b ≠ c` (then
//! `d = (-1)^{w+m+1} w`), and when both are uniform `{a^ℓ}`, `{b^m}` (then
//! `d = (-1)^{w-v+ℓ+m} C(u,v)` with `u = gcd(a,b)`, `v = gcd(ℓ,m)`).

use std::collections::BTreeSet;

use num_integer::Integer;
use thiserror::Error;

use crate::partition::{self, Partition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("dimension mismatch: Σ(λ)={0} but Σ(μ)={1} (and |V(Γ)|={2})")]
    DimensionMismatch(u32, u32, u32),
    #[error("cycle length {0} exceeds the supported maximum 63")]
    CycleTooLong(u32),
    #[error("coefficient overflow at w={0}")]
    Overflow(u32),
}

/// Isomorphism class of a disjoint union of directed cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleDigraph {
    lengths: Partition,
}

impl CycleDigraph {
    pub fn new(lengths: Partition) -> Self {
        CycleDigraph { lengths }
    }

    pub fn cycle_lengths(&self) -> &Partition {
        &self.lengths
    }

    /// |V(Γ)|
    pub fn vertex_count(&self) -> u32 {
        self.lengths.sum()
    }

    pub fn cycle_count(&self) -> usize {
        self.lengths.len()
    }

    /// `sgn(Γ) = (-1)^{w-c}` for `w` vertices in `c` cycles.
    pub fn sign(&self) -> i64 {
        if (self.vertex_count() as i64 - self.cycle_count() as i64) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `(len, multiplicity)` groups, longest first.
    fn classes(&self) -> Vec<(u32, usize)> {
        self.lengths.multiplicities()
    }
}

fn rotate_mask(mask: u64, len: u32, r: u32) -> u64 {
    let r = r % len;
    if r == 0 {
        return mask;
    }
    let all = (1u64 << len) - 1;
    ((mask << r) | (mask >> (len - r))) & all
}

/// Distinct permutations of a multiset of parts.
fn multiset_permutations(parts: &[u32]) -> Vec<Vec<u32>> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    for p in sorted {
        match groups.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => groups.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts.len());
    fn rec(
        groups: &mut Vec<(u32, usize)>,
        current: &mut Vec<u32>,
        total: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        for i in 0..groups.len() {
            if groups[i].1 == 0 {
                continue;
            }
            groups[i].1 -= 1;
            current.push(groups[i].0);
            rec(groups, current, total, out);
            current.pop();
            groups[i].1 += 1;
        }
    }
    rec(&mut groups, &mut current, parts.len(), &mut out);
    out
}

/// All cut sets on `Z/len` whose cyclic gap multiset equals `kappa`,
/// as bitmasks. Empty unless `Σ(kappa) == len`.
fn local_tilings(len: u32, kappa: &Partition) -> Vec<u64> {
    if kappa.sum() != len || kappa.is_empty() {
        return Vec::new();
    }
    let mut masks = BTreeSet::new();
    for perm in multiset_permutations(kappa.parts()) {
        for offset in 0..len {
            let mut mask = 0u64;
            let mut pos = offset;
            for &g in &perm {
                mask |= 1 << pos;
                pos = (pos + g) % len;
            }
            masks.insert(mask);
        }
    }
    masks.into_iter().collect()
}

/// Canonical representative of the simultaneous-rotation orbit of a tiling
/// pair on one cycle, together with the order of its rotational stabilizer.
fn canonical_pair(s: u64, t: u64, len: u32) -> ((u64, u64), u32) {
    let mut best = (s, t);
    let mut stab = 0;
    for r in 0..len {
        let c = (rotate_mask(s, len, r), rotate_mask(t, len, r));
        if c < best {
            best = c;
        }
        if c == (s, t) {
            stab += 1;
        }
    }
    (best, stab)
}

/// A per-cycle orbit candidate for assembling tilings of one length class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct OrbitCand {
    key: (u64, u64),
    s_sub: Partition,
    t_sub: Partition,
    rigid: bool,
}

/// Candidate pair-orbits on a single `len`-cycle drawing path sizes from
/// the given pools.
fn class_candidates(len: u32, s_pool: &Partition, t_pool: &Partition) -> Vec<OrbitCand> {
    let mut cands: BTreeSet<OrbitCand> = BTreeSet::new();
    for kappa in partition::submultisets_with_sum(s_pool, len) {
        let s_masks = local_tilings(len, &kappa);
        if s_masks.is_empty() {
            continue;
        }
        for kappa_t in partition::submultisets_with_sum(t_pool, len) {
            let t_masks = local_tilings(len, &kappa_t);
            for &s in &s_masks {
                for &t in &t_masks {
                    let (key, stab) = canonical_pair(s, t, len);
                    cands.insert(OrbitCand {
                        key,
                        s_sub: kappa.clone(),
                        t_sub: kappa_t.clone(),
                        rigid: stab == 1,
                    });
                }
            }
        }
    }
    cands.into_iter().collect()
}

/// Counts assemblies of `m` per-cycle orbits realizing exactly the pools.
/// With `admissible_only` the orbits must be rigid and pairwise distinct
/// (that is precisely triviality of the stabilizer in the wreath product);
/// otherwise repeats and non-rigid orbits are allowed, counting all
/// isomorphism classes of tilings.
fn class_count(
    len: u32,
    m: usize,
    s_pool: &Partition,
    t_pool: &Partition,
    admissible_only: bool,
) -> u64 {
    let cands = class_candidates(len, s_pool, t_pool);
    fn dfs(
        cands: &[OrbitCand],
        from: usize,
        left: usize,
        s_rem: &Partition,
        t_rem: &Partition,
        admissible_only: bool,
    ) -> u64 {
        if left == 0 {
            // pool sums force emptiness here
            debug_assert!(s_rem.is_empty() && t_rem.is_empty());
            return 1;
        }
        let mut total = 0;
        for i in from..cands.len() {
            let c = &cands[i];
            if admissible_only && !c.rigid {
                continue;
            }
            let Some(s_next) = s_rem.multiset_sub(&c.s_sub) else {
                continue;
            };
            let Some(t_next) = t_rem.multiset_sub(&c.t_sub) else {
                continue;
            };
            let next_from = if admissible_only { i + 1 } else { i };
            total += dfs(cands, next_from, left - 1, &s_next, &t_next, admissible_only);
        }
        total
    }
    dfs(&cands, 0, m, s_pool, t_pool, admissible_only)
}

fn tiling_count(
    gamma: &CycleDigraph,
    lambda: &Partition,
    mu: &Partition,
    admissible_only: bool,
) -> Result<u64, TilingError> {
    let w = gamma.vertex_count();
    if lambda.sum() != w || mu.sum() != w {
        return Err(TilingError::DimensionMismatch(lambda.sum(), mu.sum(), w));
    }
    if gamma.lengths.max_part() > 63 {
        return Err(TilingError::CycleTooLong(gamma.lengths.max_part()));
    }
    let classes = gamma.classes();
    fn rec(
        classes: &[(u32, usize)],
        idx: usize,
        s_rem: &Partition,
        t_rem: &Partition,
        admissible_only: bool,
    ) -> u64 {
        if idx == classes.len() {
            debug_assert!(s_rem.is_empty() && t_rem.is_empty());
            return 1;
        }
        let (len, m) = classes[idx];
        let weight = len * m as u32;
        let mut total = 0;
        for s_cl in partition::submultisets_with_sum(s_rem, weight) {
            let s_next = s_rem.multiset_sub(&s_cl).expect("sub-multiset by construction");
            for t_cl in partition::submultisets_with_sum(t_rem, weight) {
                let here = class_count(len, m, &s_cl, &t_cl, admissible_only);
                if here == 0 {
                    continue;
                }
                let t_next = t_rem.multiset_sub(&t_cl).expect("sub-multiset by construction");
                total += here * rec(classes, idx + 1, &s_next, &t_next, admissible_only);
            }
        }
        total
    }
    Ok(rec(&classes, 0, lambda, mu, admissible_only))
}

/// `η_λμ(Γ)`: the number of isomorphism classes of admissible
/// (λ,μ)-tilings of Γ, by exhaustive orbit enumeration with exact
/// stabilizer computation.
pub fn eta(gamma: &CycleDigraph, lambda: &Partition, mu: &Partition) -> Result<u64, TilingError> {
    tiling_count(gamma, lambda, mu, true)
}

/// The number of isomorphism classes of all (λ,μ)-tilings, admissible or
/// not. For a single `w`-cycle with uniform λ = {a^ℓ}, μ = {b^m} this is
/// `gcd(a,b)`.
pub fn tiling_classes(
    gamma: &CycleDigraph,
    lambda: &Partition,
    mu: &Partition,
) -> Result<u64, TilingError> {
    tiling_count(gamma, lambda, mu, false)
}

/// One row of the expansion of `d_λμ`: a digraph with its sign and count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub digraph: Partition,
    pub sign: i64,
    pub eta: u64,
}

/// Per-digraph contributions to `d_λμ`, listing only digraphs admitting at
/// least one admissible tiling pair.
pub fn d_trace(lambda: &Partition, mu: &Partition) -> Result<Vec<TraceRow>, TilingError> {
    let w = lambda.sum();
    if mu.sum() != w || w == 0 {
        return Err(TilingError::DimensionMismatch(lambda.sum(), mu.sum(), w));
    }
    let mut rows = Vec::new();
    for lengths in partition::enumerate(w, Default::default()) {
        let gamma = CycleDigraph::new(lengths);
        let count = eta(&gamma, lambda, mu)?;
        if count > 0 {
            rows.push(TraceRow {
                sign: gamma.sign(),
                digraph: gamma.lengths,
                eta: count,
            });
        }
    }
    Ok(rows)
}

/// `d_λμ` by full enumeration of cycle digraphs on `Σ(λ)` vertices.
pub fn d_coefficient(lambda: &Partition, mu: &Partition) -> Result<i64, TilingError> {
    let w = lambda.sum();
    let rows = d_trace(lambda, mu)?;
    let mut acc: i64 = 0;
    for row in rows {
        let eta = i64::try_from(row.eta).map_err(|_| TilingError::Overflow(w))?;
        acc = acc
            .checked_add(row.sign * eta)
            .ok_or(TilingError::Overflow(w))?;
    }
    let outer = if (lambda.len() + mu.len()) % 2 == 0 { 1 } else { -1 };
    Ok(outer * acc)
}

fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// Uniform shape `{a^ℓ}` → `(a, ℓ)`.
fn uniform(p: &Partition) -> Option<(u32, u32)> {
    match p.multiplicities().as_slice() {
        [(a, l)] => Some((*a, *l as u32)),
        _ => None,
    }
}

/// Shape `{b^m, c}` with one part value occurring once and another `m >= 1`
/// times, `b != c` → `(b, m, c)`.
fn near_uniform(p: &Partition) -> Option<(u32, u32, u32)> {
    match p.multiplicities().as_slice() {
        [(x, 1), (y, m)] if *x != *y => Some((*y, *m as u32, *x)),
        [(y, m), (x, 1)] if *x != *y => Some((*y, *m as u32, *x)),
        _ => None,
    }
}

/// Closed-form value of `d_λμ` when the pair matches one of the two proved
/// shapes (in either order, since `d` is symmetric); `None` otherwise.
pub fn d_closed_form(lambda: &Partition, mu: &Partition) -> Option<i64> {
    let w = lambda.sum();
    if w == 0 || mu.sum() != w {
        return None;
    }
    let pow_sign = |e: u32| if e % 2 == 0 { 1i64 } else { -1 };
    // single part against {b^m, c}
    for (one, other) in [(lambda, mu), (mu, lambda)] {
        if one.parts() == [w] {
            if let Some((_, m, _)) = near_uniform(other) {
                return Some(pow_sign(w + m + 1) * w as i64);
            }
        }
    }
    // uniform against uniform
    if let (Some((a, l)), Some((b, m))) = (uniform(lambda), uniform(mu)) {
        let u = a.gcd(&b);
        let v = l.gcd(&m);
        return Some(pow_sign(w + v + l + m) * binomial(u, v));
    }
    None
}

/// A concrete tiling of one cycle: path sizes read cyclically starting at
/// vertex `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTiling {
    pub offset: u32,
    pub path_sizes: Vec<u32>,
}

impl CycleTiling {
    fn mask(&self, len: u32) -> u64 {
        let mut mask = 0u64;
        let mut pos = self.offset % len;
        for &g in &self.path_sizes {
            mask |= 1 << pos;
            pos = (pos + g) % len;
        }
        mask
    }
}

/// A concrete (λ,μ)-tiling pair of a cycle digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingPair {
    digraph: CycleDigraph,
    s: Vec<CycleTiling>,
    t: Vec<CycleTiling>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilingPairError {
    #[error("tiling covers {got} cycles, digraph has {want}")]
    CycleCount { got: usize, want: usize },
    #[error("paths on cycle {index} sum to {got}, cycle length is {len}")]
    BadCycleSum { index: usize, got: u32, len: u32 },
    #[error("empty path list on cycle {0}")]
    EmptyCycle(usize),
}

impl TilingPair {
    /// `s[i]`/`t[i]` tile the `i`-th cycle of the digraph (cycles ordered
    /// by decreasing length, as in [`CycleDigraph::cycle_lengths`]).
    pub fn new(
        digraph: CycleDigraph,
        s: Vec<CycleTiling>,
        t: Vec<CycleTiling>,
    ) -> Result<Self, TilingPairError> {
        let lens = digraph.lengths.parts();
        for tiling in [&s, &t] {
            if tiling.len() != lens.len() {
                return Err(TilingPairError::CycleCount {
                    got: tiling.len(),
                    want: lens.len(),
                });
            }
            for (i, (ct, &len)) in tiling.iter().zip(lens).enumerate() {
                if ct.path_sizes.is_empty() {
                    return Err(TilingPairError::EmptyCycle(i));
                }
                let got: u32 = ct.path_sizes.iter().sum();
                if got != len {
                    return Err(TilingPairError::BadCycleSum { index: i, got, len });
                }
            }
        }
        Ok(TilingPair { digraph, s, t })
    }

    pub fn digraph(&self) -> &CycleDigraph {
        &self.digraph
    }

    /// Multiset of all S path sizes.
    pub fn lambda(&self) -> Partition {
        Partition::of(self.s.iter().flat_map(|c| c.path_sizes.iter().copied()))
    }

    /// Multiset of all T path sizes.
    pub fn mu(&self) -> Partition {
        Partition::of(self.t.iter().flat_map(|c| c.path_sizes.iter().copied()))
    }

    /// |Aut(Γ,S,T)| by direct stabilizer computation: per-cycle rotation
    /// stabilizers composed with permutations of identically decorated
    /// cycles of equal length.
    pub fn aut_order(&self) -> u64 {
        let lens = self.digraph.lengths.parts();
        // (len, canonical pair key) and stabilizer order per cycle
        let mut keyed: Vec<(u32, (u64, u64))> = Vec::new();
        let mut order: u64 = 1;
        for (i, &len) in lens.iter().enumerate() {
            let s_mask = self.s[i].mask(len);
            let t_mask = self.t[i].mask(len);
            let (key, stab) = canonical_pair(s_mask, t_mask, len);
            order *= stab as u64;
            keyed.push((len, key));
        }
        keyed.sort_unstable();
        let mut run = 1u64;
        for i in 1..=keyed.len() {
            if i < keyed.len() && keyed[i] == keyed[i - 1] {
                run += 1;
            } else {
                for f in 2..=run {
                    order *= f;
                }
                run = 1;
            }
        }
        order
    }

    /// Admissible iff `Aut(Γ,S,T)` is trivial.
    pub fn is_admissible(&self) -> bool {
        self.aut_order() == 1
    }
}
