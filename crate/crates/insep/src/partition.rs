//! Integer partitions as multisets of positive parts.
//!
//! A partition is stored in canonical form as a weakly decreasing sequence,
//! so multiset equality, hashing and enumeration order are all plain
//! sequence operations.  Besides the usual sum `Σ(λ)` and length `|λ|` the
//! type carries the two scaling operations used throughout the crate:
//! `k·λ` multiplies every part by `k`, `k*λ` is the multiset sum of `k`
//! copies of `λ`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("malformed partition text: {0}")]
    Parse(String),
}

/// A partition of a nonnegative integer, kept weakly decreasing.
///
/// The empty partition is allowed internally (it shows up as the neutral
/// element of multiset splits); all enumeration entry points produce
/// partitions of `w >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalizes an arbitrary multiset of parts. Rejects zero parts.
    pub fn new(parts: impl IntoIterator<Item = u32>) -> Result<Self, PartitionError> {
        let mut parts: Vec<u32> = parts.into_iter().collect();
        if parts.iter().any(|&p| p == 0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Like [`Partition::new`] but panics on a zero part. Convenient for
    /// literals in tests and tables.
    pub fn of(parts: impl IntoIterator<Item = u32>) -> Self {
        Self::new(parts).expect("partition literal with zero part")
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Σ(λ), the number being partitioned.
    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// |λ|, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn min_part(&self) -> u32 {
        self.parts.last().copied().unwrap_or(0)
    }

    /// `k·λ`: multiplies every part by `k`, so `Σ(k·λ) = kΣ(λ)` and
    /// `|k·λ| = |λ|`.
    pub fn scale(&self, k: u32) -> Partition {
        assert!(k >= 1, "scale factor must be positive");
        Partition {
            parts: self.parts.iter().map(|&p| p * k).collect(),
        }
    }

    /// `k*λ`: multiset sum of `k` copies, so `Σ(k*λ) = kΣ(λ)` and
    /// `|k*λ| = k|λ|`.
    pub fn repeat(&self, k: u32) -> Partition {
        assert!(k >= 1, "repeat factor must be positive");
        let mut parts = Vec::with_capacity(self.parts.len() * k as usize);
        for &p in &self.parts {
            for _ in 0..k {
                parts.push(p);
            }
        }
        Partition { parts }
    }

    /// Inverse of `scale`: `Some(λ')` with `λ = k·λ'` when every part is
    /// divisible by `k`.
    pub fn unscale(&self, k: u32) -> Option<Partition> {
        assert!(k >= 1);
        if self.parts.iter().all(|&p| p % k == 0) {
            Some(Partition {
                parts: self.parts.iter().map(|&p| p / k).collect(),
            })
        } else {
            None
        }
    }

    /// Inverse of `repeat`: `Some(λ')` with `λ = k*λ'` when every
    /// multiplicity is divisible by `k`.
    pub fn unrepeat(&self, k: u32) -> Option<Partition> {
        assert!(k >= 1);
        let mut parts = Vec::new();
        for (value, mult) in self.multiplicities() {
            if mult % k as usize != 0 {
                return None;
            }
            for _ in 0..mult / k as usize {
                parts.push(value);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition { parts })
    }

    /// Distinct part values with multiplicities, largest value first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let rows = self.parts[0] as usize;
        let mut parts = vec![0u32; rows];
        for &p in &self.parts {
            for entry in parts.iter_mut().take(p as usize) {
                *entry += 1;
            }
        }
        Partition { parts }
    }

    /// Multiset difference `self \ other`, or `None` when `other` is not a
    /// sub-multiset.
    pub fn multiset_sub(&self, other: &Partition) -> Option<Partition> {
        let mut rest = self.parts.clone();
        for &p in &other.parts {
            match rest.iter().position(|&q| q == p) {
                Some(idx) => {
                    rest.remove(idx);
                }
                None => return None,
            }
        }
        Some(Partition { parts: rest })
    }

    /// Multiset union of two partitions.
    pub fn multiset_add(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    /// Text form `{6,2,1}` used by the CLI and JSON output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| PartitionError::Parse(format!("expected braces around `{t}`")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            let v: u32 = tok
                .parse()
                .map_err(|_| PartitionError::Parse(format!("bad part `{tok}`")))?;
            if v == 0 {
                return Err(PartitionError::ZeroPart);
            }
            parts.push(v);
        }
        Partition::new(parts)
    }
}

/// Constraints for [`enumerate`]. Unset fields are unconstrained.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Constraints {
    pub min_part: Option<u32>,
    pub max_part: Option<u32>,
    pub num_parts: Option<usize>,
}

impl Constraints {
    pub fn min_part(mut self, v: u32) -> Self {
        self.min_part = Some(v);
        self
    }
    pub fn max_part(mut self, v: u32) -> Self {
        self.max_part = Some(v);
        self
    }
    pub fn num_parts(mut self, v: usize) -> Self {
        self.num_parts = Some(v);
        self
    }
}

/// Streams every partition of `w` meeting the constraints, each exactly
/// once, in lexicographically decreasing order of the part sequences.
///
/// The iterator is lazy; callers that sum over unbounded partition families
/// truncate it themselves.
pub fn enumerate(w: u32, constraints: Constraints) -> PartitionIter {
    PartitionIter::new(w, constraints)
}

/// Partitions of `w` whose parts are all `<= max_part`. The index set of
/// the transition-coefficient sums.
pub fn parts_at_most(w: u32, max_part: u32) -> PartitionIter {
    enumerate(w, Constraints::default().max_part(max_part))
}

/// Partitions of `w` with exactly `num_parts` parts, all `>= min_part`.
pub fn with_parts_at_least(w: u32, num_parts: usize, min_part: u32) -> PartitionIter {
    enumerate(
        w,
        Constraints::default().num_parts(num_parts).min_part(min_part),
    )
}

pub struct PartitionIter {
    w: u32,
    min: u32,
    max: u32,
    num_parts: Option<usize>,
    prefix: Vec<u32>,
    rem: u32,
    state: IterState,
}

enum IterState {
    Fresh,
    Yielded,
    Done,
}

impl PartitionIter {
    fn new(w: u32, c: Constraints) -> Self {
        let min = c.min_part.unwrap_or(1).max(1);
        let max = c.max_part.unwrap_or(w).min(w);
        PartitionIter {
            w,
            min,
            max,
            num_parts: c.num_parts,
            prefix: Vec::new(),
            rem: w,
            state: IterState::Fresh,
        }
    }

    /// Assuming one more part is about to be placed, can the remainder
    /// `rem` be finished with parts drawn from `[self.min, cap]` (exactly
    /// `num_parts` total, when constrained)?  Exact test, so the descent
    /// never dead-ends.
    fn completable(&self, rem: u32, cap: u32) -> bool {
        let left = match self.num_parts {
            Some(n) if self.prefix.len() >= n => return false,
            Some(n) => Some(n - self.prefix.len() - 1),
            None => None,
        };
        match left {
            Some(0) => rem == 0,
            Some(k) => {
                let k = k as u32;
                cap >= self.min && (self.min * k) <= rem && rem <= cap * k
            }
            None => {
                if rem == 0 {
                    return true;
                }
                if cap < self.min {
                    return false;
                }
                // some k >= 1 with k*min <= rem <= k*cap
                let k_lo = rem.div_ceil(cap);
                let k_hi = rem / self.min;
                k_lo <= k_hi
            }
        }
    }

    /// Extends the prefix greedily with the largest completable parts until
    /// the partition is finished. Returns false when no extension exists.
    fn descend(&mut self, first_cap: u32) -> bool {
        let mut cap = first_cap;
        loop {
            if self.rem == 0 {
                return match self.num_parts {
                    Some(n) => self.prefix.len() == n,
                    None => true,
                };
            }
            let hi = cap.min(self.rem).min(self.max);
            let mut chosen = None;
            let mut v = hi;
            while v >= self.min {
                if self.completable(self.rem - v, v) {
                    chosen = Some(v);
                    break;
                }
                v -= 1;
            }
            match chosen {
                Some(v) => {
                    self.prefix.push(v);
                    self.rem -= v;
                    cap = v;
                }
                None => return false,
            }
        }
    }

    /// Pops parts and retries smaller candidates; returns false when the
    /// whole tree is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some(v) = self.prefix.pop() {
            self.rem += v;
            if v > self.min && self.descend(v - 1) {
                return true;
            }
        }
        false
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let found = match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Yielded;
                self.w >= 1 && self.descend(self.max)
            }
            IterState::Yielded => self.backtrack(),
        };
        if found {
            Some(Partition {
                parts: self.prefix.clone(),
            })
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

/// Every sub-multiset of `pool` with element sum `target`, including the
/// empty one when `target == 0`. Used by multi-cycle tiling assembly.
pub fn submultisets_with_sum(pool: &Partition, target: u32) -> Vec<Partition> {
    let groups = pool.multiplicities();
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    fn rec(
        groups: &[(u32, usize)],
        idx: usize,
        rem: u32,
        chosen: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if rem == 0 {
            out.push(Partition::of(chosen.iter().copied()));
            // taking more of later (smaller) groups only raises the sum
        }
        if idx == groups.len() || rem == 0 {
            return;
        }
        let (value, mult) = groups[idx];
        let take_max = (mult as u32).min(rem / value);
        for take in (0..=take_max).rev() {
            for _ in 0..take {
                chosen.push(value);
            }
            rec(groups, idx + 1, rem - take * value, chosen, out);
            for _ in 0..take {
                chosen.pop();
            }
        }
    }
    if target == 0 {
        return vec![Partition::empty()];
    }
    rec(&groups, 0, target, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// p(n) by the pentagonal-number recurrence; independent of the
    /// enumeration code.
    fn euler_partition_count(n: u32) -> u64 {
        let n = n as usize;
        let mut table = vec![0u64; n + 1];
        table[0] = 1;
        for i in 1..=n {
            let mut acc: i64 = 0;
            let mut k: i64 = 1;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > i {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += sign * table[i - g1] as i64;
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= i {
                    acc += sign * table[i - g2] as i64;
                }
                k += 1;
            }
            table[i] = acc as u64;
        }
        table[n]
    }

    #[test]
    fn sums() {
        assert_eq!(Partition::of([6]).sum(), 6);
        assert_eq!(Partition::of([1, 1, 1, 3]).sum(), 6);
        assert_eq!(Partition::of([2, 2, 2]).sum(), 6);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(Partition::of([3, 1]).scale(2), Partition::of([6, 2]));
        assert_eq!(Partition::of([5, 2]).scale(1), Partition::of([5, 2]));
        assert_eq!(Partition::of([2]).scale(4), Partition::of([8]));
    }

    #[test]
    fn repeat_examples() {
        assert_eq!(Partition::of([3, 1]).repeat(2), Partition::of([3, 3, 1, 1]));
        assert_eq!(Partition::of([5, 2]).repeat(1), Partition::of([5, 2]));
        assert_eq!(Partition::of([2]).repeat(3), Partition::of([2, 2, 2]));
    }

    #[test]
    fn canonical_form_is_order_free() {
        assert_eq!(Partition::of([1, 3, 1, 1]), Partition::of([3, 1, 1, 1]));
        assert_eq!(Partition::of([2, 6, 1]).to_string(), "{6,2,1}");
    }

    #[test]
    fn parse_round_trip() {
        let p: Partition = "{6,2,1}".parse().unwrap();
        assert_eq!(p, Partition::of([6, 2, 1]));
        assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        assert!("{6,0}".parse::<Partition>().is_err());
        assert!("6,2".parse::<Partition>().is_err());
    }

    #[test]
    fn enumerate_two_parts_of_four() {
        let got: Vec<Partition> =
            enumerate(4, Constraints::default().num_parts(2)).collect();
        assert_eq!(got, vec![Partition::of([3, 1]), Partition::of([2, 2])]);
    }

    #[test]
    fn enumerate_counts_match_euler_recurrence() {
        for w in 1..=30 {
            let count = enumerate(w, Constraints::default()).count() as u64;
            assert_eq!(count, euler_partition_count(w), "p({w})");
        }
    }

    #[test]
    fn enumerate_with_max_part_cap() {
        // p(6) = 11 and a cap of 8 does not bite
        assert_eq!(enumerate(6, Constraints::default().max_part(8)).count(), 11);
    }

    #[test]
    fn enumerate_unsatisfiable_is_empty() {
        assert_eq!(enumerate(3, Constraints::default().min_part(4)).count(), 0);
        assert_eq!(
            enumerate(5, Constraints::default().num_parts(2).max_part(2)).count(),
            0
        );
    }

    #[test]
    fn enumeration_is_lex_decreasing_and_constrained() {
        for w in 1..=12u32 {
            let all: Vec<Partition> = enumerate(w, Constraints::default()).collect();
            for pair in all.windows(2) {
                assert!(pair[0] > pair[1], "order violated at w={w}");
            }
            for p in &all {
                assert_eq!(p.sum(), w);
            }
        }
        let constrained: Vec<Partition> = enumerate(
            10,
            Constraints {
                min_part: Some(2),
                max_part: Some(4),
                num_parts: Some(3),
            },
        )
        .collect();
        for p in &constrained {
            assert_eq!(p.len(), 3);
            assert!(p.min_part() >= 2 && p.max_part() <= 4);
            assert_eq!(p.sum(), 10);
        }
        assert_eq!(
            constrained,
            vec![Partition::of([4, 4, 2]), Partition::of([4, 3, 3])]
        );
    }

    #[test]
    fn conjugate_involution() {
        for w in 1..=10u32 {
            for p in enumerate(w, Constraints::default()) {
                assert_eq!(p.conjugate().conjugate(), p);
                assert_eq!(p.conjugate().sum(), w);
            }
        }
        assert_eq!(Partition::of([3, 1]).conjugate(), Partition::of([2, 1, 1]));
    }

    #[test]
    fn multiset_operations() {
        let a = Partition::of([3, 2, 2, 1]);
        let b = Partition::of([2, 1]);
        assert_eq!(a.multiset_sub(&b), Some(Partition::of([3, 2])));
        assert_eq!(a.multiset_sub(&Partition::of([4])), None);
        assert_eq!(b.multiset_add(&Partition::of([2])), Partition::of([2, 2, 1]));
        assert_eq!(
            Partition::of([4, 2, 2]).unscale(2),
            Some(Partition::of([2, 1, 1]))
        );
        assert_eq!(Partition::of([4, 3]).unscale(2), None);
        assert_eq!(
            Partition::of([3, 3, 1, 1]).unrepeat(2),
            Some(Partition::of([3, 1]))
        );
        assert_eq!(Partition::of([3, 1, 1]).unrepeat(2), None);
    }

    #[test]
    fn submultisets_cover_sums() {
        let pool = Partition::of([3, 2, 2, 1]);
        let subs = submultisets_with_sum(&pool, 4);
        // {3,1}, {2,2} are the only sub-multisets summing to 4
        assert_eq!(subs.len(), 2);
        assert!(subs.contains(&Partition::of([3, 1])));
        assert!(subs.contains(&Partition::of([2, 2])));
        assert_eq!(submultisets_with_sum(&pool, 0), vec![Partition::empty()]);
    }

    #[test]
    fn scale_repeat_identities_random() {
        // Σ and |·| identities for k <= 8, Σ(λ) <= 20
        let mut seed = 0x9e3779b9u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as u32
        };
        for _ in 0..200 {
            let w = next() % 20 + 1;
            let skip = next() % 5;
            let Some(p) = enumerate(w, Constraints::default()).nth(skip as usize) else {
                continue;
            };
            let k = next() % 8 + 1;
            assert_eq!(p.scale(k).sum(), k * p.sum());
            assert_eq!(p.scale(k).len(), p.len());
            assert_eq!(p.repeat(k).sum(), k * p.sum());
            assert_eq!(p.repeat(k).len(), k as usize * p.len());
        }
    }
}
