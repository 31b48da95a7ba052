//! Partitions: weakly decreasing sequences of positive integers, with the
//! dominance order, the combinatorial factor z_λ, and weighted variants.

use std::fmt;

use crate::error::Result;
use crate::scalars::Scalar;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<i64>);

impl Partition {
    pub fn new(mut parts: Vec<i64>) -> Self {
        parts.retain(|p| *p != 0);
        assert!(parts.iter().all(|p| *p > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Multiplicity of the part a.
    pub fn mult(&self, a: i64) -> usize {
        self.0.iter().filter(|p| **p == a).count()
    }

    /// Part λ_i padded with zeros (1-indexed).
    pub fn part(&self, i: usize) -> i64 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Add one part (creation); keeps the decreasing order.
    pub fn with_part(&self, a: i64) -> Self {
        let mut v = self.0.clone();
        v.push(a);
        Partition::new(v)
    }

    /// Remove one instance of the part a, if present.
    pub fn without_part(&self, a: i64) -> Option<Self> {
        let pos = self.0.iter().position(|p| *p == a)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Partition(v))
    }

    /// Dominance order: same size and all partial sums compare.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut acc_a = 0;
        let mut acc_b = 0;
        for i in 1..=self.len().max(other.len()) {
            acc_a += self.part(i);
            acc_b += other.part(i);
            if acc_a < acc_b {
                return false;
            }
        }
        true
    }

    /// z_λ = prod_a a^(m_a) m_a!, as a scalar.
    pub fn z_comb<S: Scalar>(&self) -> S {
        let mut acc = S::one();
        let mut seen: Vec<i64> = Vec::new();
        for &a in &self.0 {
            if seen.contains(&a) {
                continue;
            }
            seen.push(a);
            let m = self.mult(a) as i64;
            for k in 1..=m {
                acc = acc * S::from_int(k);
            }
            acc = acc * S::from_int(a).powi(m).expect("positive part");
        }
        acc
    }

    /// z_λ times a per-part weight: z_λ(q,t) uses w(m) = (1-q^m)/(1-t^m).
    pub fn z_weighted<S: Scalar>(&self, weight: impl Fn(i64) -> Result<S>) -> Result<S> {
        let mut acc = self.z_comb::<S>();
        for &a in &self.0 {
            acc = acc * weight(a)?;
        }
        Ok(acc)
    }

    /// All partitions of n.
    pub fn all_of(n: i64) -> Vec<Partition> {
        fn rec(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            let top = n.min(max);
            for k in (1..=top).rev() {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of size <= n (including the empty one).
    pub fn all_up_to(n: i64) -> Vec<Partition> {
        let mut out = Vec::new();
        for d in 0..=n {
            out.extend(Partition::all_of(d));
        }
        out
    }
}

/// Macdonald eigenvalue ε_N(λ) = Σ_{i=1..N} q^(λ_i) t^(N-i), with λ padded
/// by zeros to length N.
pub fn epsilon_n<S: Scalar>(lambda: &Partition, n: usize, q: &S, t: &S) -> Result<S> {
    let mut acc = S::zero();
    for i in 1..=n {
        acc = acc + q.powi(lambda.part(i))? * t.powi((n - i) as i64)?;
    }
    Ok(acc)
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;

    #[test]
    fn enumeration_counts() {
        assert_eq!(Partition::all_of(4).len(), 5);
        assert_eq!(Partition::all_of(6).len(), 11);
        assert_eq!(Partition::all_up_to(4).len(), 1 + 1 + 2 + 3 + 5);
    }

    #[test]
    fn dominance_examples() {
        let p22 = Partition::new(vec![2, 2]);
        let p31 = Partition::new(vec![3, 1]);
        let p211 = Partition::new(vec![2, 1, 1]);
        assert!(p31.dominates(&p22));
        assert!(p22.dominates(&p211));
        assert!(!p211.dominates(&p22));
        // incomparable pair at size 6
        let a = Partition::new(vec![3, 1, 1, 1]);
        let b = Partition::new(vec![2, 2, 2]);
        assert!(!a.dominates(&b) || !b.dominates(&a));
    }

    #[test]
    fn z_factor() {
        // z_(1,1) = 1^2 * 2! = 2, z_(2,1) = 2*1 = 2, z_(2,2,1) = 2^2*2!*1 = 8
        assert_eq!(Partition::new(vec![1, 1]).z_comb::<Rat>(), Rat::from_int(2));
        assert_eq!(Partition::new(vec![2, 1]).z_comb::<Rat>(), Rat::from_int(2));
        assert_eq!(
            Partition::new(vec![2, 2, 1]).z_comb::<Rat>(),
            Rat::from_int(8)
        );
    }

    #[test]
    fn eigenvalue_pads_with_zeros() {
        // ε_2(∅) = t + 1, ε_2((1)) = q t + 1
        let q = Rat::from_ratio(1, 4);
        let t = Rat::from_ratio(9, 16);
        let e0 = epsilon_n(&Partition::empty(), 2, &q, &t).unwrap();
        assert_eq!(e0, t.clone() + Rat::from_int(1));
        let e1 = epsilon_n(&Partition::new(vec![1]), 2, &q, &t).unwrap();
        assert_eq!(e1, q * t + Rat::from_int(1));
    }
}
