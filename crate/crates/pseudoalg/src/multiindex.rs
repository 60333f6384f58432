//! Multi-indices I = (i_1, ..., i_n) labelling divided-power monomials and
//! their dual monomials.
//!
//! Ordering is graded lexicographic (total degree first) so that every map
//! keyed by multi-indices iterates in a canonical, degree-compatible order.

use crate::scalar::{self, Scalar};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector e_i (0-based coordinate).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree |I|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` unless other <= self componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// I! = i_1! ... i_n!
    pub fn factorial(&self) -> Scalar {
        let mut acc = scalar::one();
        for &c in &self.0 {
            acc *= scalar::factorial(c);
        }
        acc
    }

    /// Product of componentwise binomials C(self, other).
    pub fn binomial(&self, other: &Self) -> Scalar {
        let mut acc = scalar::one();
        for (&a, &b) in self.0.iter().zip(&other.0) {
            acc *= scalar::binomial(a, b);
            if acc == scalar::zero() {
                break;
            }
        }
        acc
    }

    /// Expand into the word of 0-based generator letters, smallest first:
    /// (2,1) -> [0,0,1].
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &c) in self.0.iter().enumerate() {
            for _ in 0..c {
                w.push(i);
            }
        }
        w
    }

    /// All J with J <= I componentwise (including 0 and I), canonical order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::new())];
        for &c in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
            for prefix in &out {
                for k in 0..=c {
                    let mut v = prefix.0.clone();
                    v.push(k);
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Embed into a larger coordinate space: coordinate k goes to `map[k]`.
    pub fn embed(&self, outer_len: usize, map: &[usize]) -> Self {
        let mut v = vec![0; outer_len];
        for (k, &c) in self.0.iter().enumerate() {
            v[map[k]] += c;
        }
        MultiIndex(v)
    }

    /// Restrict to the coordinates in `map` if supported there, else None.
    pub fn restrict(&self, map: &[usize]) -> Option<Self> {
        let mut v = vec![0; map.len()];
        for (k, &i) in map.iter().enumerate() {
            v[k] = self.0[i];
        }
        let claimed: u32 = v.iter().sum();
        if claimed == self.degree() {
            Some(MultiIndex(v))
        } else {
            None
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length n with total degree exactly d, canonical order.
pub fn indices_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(cur: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for k in (0..=rem).rev() {
            cur[pos] = k;
            rec(cur, pos + 1, rem - k, out);
        }
        cur[pos] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(&mut cur, 0, d, &mut out);
    out.sort();
    out
}

/// All multi-indices of length n with total degree <= d, canonical order.
pub fn indices_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(indices_of_degree(n, k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn degree_and_ops() {
        let a = MultiIndex(vec![2, 1]);
        let b = MultiIndex(vec![0, 3]);
        assert_eq!(a.degree(), 3);
        assert_eq!(a.add(&b), MultiIndex(vec![2, 4]));
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!(
            MultiIndex(vec![2, 4]).checked_sub(&a),
            Some(MultiIndex(vec![0, 3]))
        );
    }

    #[test]
    fn factorial_binomial() {
        assert_eq!(MultiIndex(vec![3, 2]).factorial(), int(12));
        assert_eq!(
            MultiIndex(vec![3, 2]).binomial(&MultiIndex(vec![1, 1])),
            int(6)
        );
    }

    #[test]
    fn enumeration_counts() {
        // Number of monomials of degree d in n vars: C(n + d - 1, d).
        assert_eq!(indices_of_degree(3, 4).len(), 15);
        assert_eq!(indices_up_to(2, 3).len(), 10);
        assert_eq!(indices_of_degree(1, 0).len(), 1);
    }

    #[test]
    fn graded_order() {
        let mut v = vec![
            MultiIndex(vec![0, 2]),
            MultiIndex(vec![1, 0]),
            MultiIndex(vec![0, 0]),
            MultiIndex(vec![2, 0]),
        ];
        v.sort();
        assert_eq!(v[0], MultiIndex(vec![0, 0]));
        assert_eq!(v[1], MultiIndex(vec![1, 0]));
        // within degree 2, lexicographic on the raw vector
        assert_eq!(v[2], MultiIndex(vec![0, 2]));
    }

    #[test]
    fn sub_indices_of() {
        let subs = MultiIndex(vec![1, 2]).sub_indices();
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&MultiIndex(vec![0, 0])));
        assert!(subs.contains(&MultiIndex(vec![1, 2])));
    }
}
