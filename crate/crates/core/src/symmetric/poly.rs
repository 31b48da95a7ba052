//! Multivariate Laurent polynomials with scalar coefficients, their
//! p-layered extension, and symmetric-polynomial bases (monomial and
//! power-sum) with exact change-of-basis data.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::symmetric::partition::Partition;

/// A Laurent polynomial in `nvars` variables.
#[derive(Clone, PartialEq)]
pub struct MPoly<S> {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, S>,
}

impl<S: Scalar> MPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// c * prod_i x_i^(e_i)
    pub fn monomial(nvars: usize, exps: Vec<i64>, c: S) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(exps, c);
        out
    }

    /// x_i^k (0-indexed variable).
    pub fn var_pow(nvars: usize, i: usize, k: i64) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        Self::monomial(nvars, e, S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: S) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&exps).unwrap_or_else(S::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), s.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Drop every term whose signed total degree over the variable block
    /// exceeds `cutoff`. The Macdonald operators preserve this grading
    /// (their prefactors are homogeneous of degree zero), so truncating by
    /// it commutes with applying them.
    pub fn truncate_degree(&self, vars: std::ops::Range<usize>, cutoff: i64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let d: i64 = e[vars.clone()].iter().sum();
            if d <= cutoff {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Substitute x_i -> c * x_i.
    pub fn scale_var(&self, i: usize, c: &S) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, coeff) in &self.terms {
            out.add_term(e.clone(), coeff.clone() * c.powi(e[i])?);
        }
        Ok(out)
    }

    /// Evaluate at a point.
    pub fn eval(&self, xs: &[S]) -> Result<S> {
        assert_eq!(xs.len(), self.nvars);
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, k) in e.iter().enumerate() {
                term = term * xs[i].powi(*k)?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Exact division; errors if the divisor does not divide exactly.
    /// Uses lex-leading-term reduction after clearing Laurent offsets.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        assert_eq!(self.nvars, divisor.nvars);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        // shift both to nonnegative exponents
        let min_of = |p: &Self| -> Vec<i64> {
            let mut m = vec![i64::MAX; p.nvars];
            for e in p.terms.keys() {
                for (i, k) in e.iter().enumerate() {
                    m[i] = m[i].min(*k);
                }
            }
            m.iter().map(|k| k.min(&0).to_owned()).collect()
        };
        let sa = min_of(self);
        let sb = min_of(divisor);
        let shift = |p: &Self, s: &[i64]| -> Self {
            let mut out = Self::zero(p.nvars);
            for (e, c) in &p.terms {
                out.add_term(
                    e.iter().zip(s).map(|(k, m)| k - m).collect(),
                    c.clone(),
                );
            }
            out
        };
        let mut rem = shift(self, &sa);
        let div = shift(divisor, &sb);
        let lead = div.terms.keys().next_back().unwrap().clone();
        let lead_c = div.terms.get(&lead).unwrap().clone();
        let lead_inv = lead_c.inv()?;
        let mut quot = Self::zero(self.nvars);
        let max_steps = 4 * (rem.terms.len() + 8) * (div.terms.len() + 8) * 64;
        for _ in 0..max_steps {
            if rem.is_zero() {
                // quotient exponents: shifted by sb - sa
                let mut out = Self::zero(self.nvars);
                for (e, c) in &quot.terms {
                    out.add_term(
                        e.iter()
                            .zip(sa.iter().zip(&sb))
                            .map(|(k, (a, b))| k + a - b)
                            .collect(),
                        c.clone(),
                    );
                }
                return Ok(out);
            }
            let re = rem.terms.keys().next_back().unwrap().clone();
            let rc = rem.terms.get(&re).unwrap().clone();
            let qe: Vec<i64> = re.iter().zip(&lead).map(|(a, b)| a - b).collect();
            if qe.iter().any(|k| *k < 0) {
                return Err(Error::InexactDivision);
            }
            let qc = rc * lead_inv.clone();
            quot.add_term(qe.clone(), qc.clone());
            let sub = div.mul(&Self::monomial(self.nvars, qe, qc));
            rem = rem.sub(&sub);
        }
        Err(Error::InexactDivision)
    }

    /// Spot-check symmetry by swapping adjacent variable pairs.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.nvars.saturating_sub(1) {
            let mut swapped = Self::zero(self.nvars);
            for (e, c) in &self.terms {
                let mut e2 = e.clone();
                e2.swap(i, i + 1);
                swapped.add_term(e2, c.clone());
            }
            if swapped != *self {
                return false;
            }
        }
        true
    }
}

impl<S: Scalar> fmt::Debug for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})x^{e:?}")?;
        }
        Ok(())
    }
}

/// A polynomial-valued nome expansion: p-order -> coefficient polynomial,
/// known exactly modulo p^(trunc+1).
#[derive(Clone, PartialEq)]
pub struct PPoly<S> {
    pub nvars: usize,
    pub layers: BTreeMap<i64, MPoly<S>>,
    pub trunc: i64,
}

impl<S: Scalar> PPoly<S> {
    pub fn zero(nvars: usize, trunc: i64) -> Self {
        PPoly {
            nvars,
            layers: BTreeMap::new(),
            trunc,
        }
    }

    pub fn from_layer(order: i64, poly: MPoly<S>, trunc: i64) -> Self {
        let mut out = Self::zero(poly.nvars, trunc);
        out.add_layer(order, poly);
        out
    }

    pub fn one(nvars: usize, trunc: i64) -> Self {
        Self::from_layer(0, MPoly::one(nvars), trunc)
    }

    pub fn add_layer(&mut self, order: i64, poly: MPoly<S>) {
        if poly.is_zero() || order > self.trunc {
            return;
        }
        let cur = self.layers.remove(&order);
        let sum = match cur {
            Some(c) => c.add(&poly),
            None => poly,
        };
        if !sum.is_zero() {
            self.layers.insert(order, sum);
        }
    }

    pub fn layer(&self, order: i64) -> MPoly<S> {
        self.layers
            .get(&order)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.layers.retain(|k, _| *k <= out.trunc);
        for (o, l) in &other.layers {
            out.add_layer(*o, l.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut neg = other.clone();
        neg.layers = other
            .layers
            .iter()
            .map(|(o, l)| (*o, l.neg()))
            .collect();
        self.add(&neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ma = self.layers.keys().next().copied().unwrap_or(0).min(0);
        let mb = other.layers.keys().next().copied().unwrap_or(0).min(0);
        let trunc = (self.trunc + mb).min(other.trunc + ma);
        let mut out = Self::zero(self.nvars, trunc);
        for (oa, la) in &self.layers {
            for (ob, lb) in &other.layers {
                if oa + ob <= trunc {
                    out.add_layer(oa + ob, la.mul(lb));
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.nvars, self.trunc);
        for (o, l) in &self.layers {
            out.add_layer(*o, l.scale(s));
        }
        out
    }

    pub fn map_layers(&self, f: impl Fn(&MPoly<S>) -> MPoly<S>) -> Self {
        let mut out = Self::zero(self.nvars, self.trunc);
        for (o, l) in &self.layers {
            out.add_layer(*o, f(l));
        }
        out
    }

    /// Layerwise exact division by a PPoly whose base layer divides
    /// exactly; solves W * G = self for G.
    pub fn div_exact(&self, w: &Self) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let j0 = *w.layers.keys().next().unwrap();
        let w0 = w.layer(j0);
        let trunc = self.trunc.min(w.trunc) - j0.max(0);
        let mut out = Self::zero(self.nvars, trunc);
        let lo = self.layers.keys().next().copied().unwrap_or(0);
        for r in (lo - j0)..=trunc {
            let mut rhs = self.layer(r + j0);
            for (o, g) in &out.layers {
                let need = r + j0 - o;
                if need != j0 && !w.layer(need).is_zero() {
                    rhs = rhs.sub(&w.layer(need).mul(g));
                }
            }
            if rhs.is_zero() {
                continue;
            }
            out.add_layer(r, rhs.div_exact(&w0)?);
        }
        // verify. division is used in identity checks, so be strict
        let check = w.mul(&out);
        let diff = check.sub(&self.clone().at_trunc(check.trunc));
        if !diff.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(out)
    }

    pub fn at_trunc(mut self, t: i64) -> Self {
        self.trunc = self.trunc.min(t);
        let keep = self.trunc;
        self.layers.retain(|k, _| *k <= keep);
        self
    }
}

impl<S: Scalar> fmt::Debug for PPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.layers.is_empty() {
            write!(f, "0")?;
        }
        for (i, (o, l)) in self.layers.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "p^{o}*[{l:?}]")?;
        }
        write!(f, " + O(p^{})", self.trunc + 1)
    }
}

// ---------------------------------------------------------------------
// symmetric bases
// ---------------------------------------------------------------------

/// Distinct permutations of λ padded to n entries.
fn distinct_permutations(lambda: &Partition, n: usize) -> Vec<Vec<i64>> {
    let mut padded: Vec<i64> = lambda.parts().to_vec();
    padded.resize(n, 0);
    padded.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(padded.iter().rev().copied().collect::<Vec<i64>>());
        // next_permutation on the ascending vector
        let mut i = padded.len().wrapping_sub(1);
        while i > 0 && padded[i - 1] >= padded[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = padded.len() - 1;
        while padded[j] <= padded[i - 1] {
            j -= 1;
        }
        padded.swap(i - 1, j);
        padded[i..].reverse();
    }
    // each generated vector was reversed; re-normalize to plain orbit list
    out.iter_mut().for_each(|v| v.reverse());
    out.sort();
    out.dedup();
    out
}

/// The monomial symmetric polynomial m_λ(x_1..x_n).
pub fn monomial_expand<S: Scalar>(lambda: &Partition, n: usize) -> Result<MPoly<S>> {
    if lambda.len() > n {
        return Err(Error::TooManyParts(lambda.len(), n));
    }
    let mut out = MPoly::zero(n);
    for perm in distinct_permutations(lambda, n) {
        out.add_term(perm, S::one());
    }
    Ok(out)
}

/// The power sum p_k(x_1..x_n) (k may be negative).
pub fn power_sum<S: Scalar>(k: i64, n: usize) -> MPoly<S> {
    let mut out = MPoly::zero(n);
    for i in 0..n {
        out = out.add(&MPoly::var_pow(n, i, k));
    }
    out
}

/// p_λ = p_(λ1) p_(λ2) ...
pub fn power_sum_product<S: Scalar>(lambda: &Partition, n: usize) -> MPoly<S> {
    let mut out = MPoly::one(n);
    for &part in lambda.parts() {
        out = out.mul(&power_sum(part, n));
    }
    out
}

/// Collect the m-basis coefficients of a symmetric polynomial of pure
/// degree d in n >= d variables: the coefficient of m_λ is the coefficient
/// of the sorted-descending monomial x^λ.
pub fn to_monomial_basis<S: Scalar>(poly: &MPoly<S>) -> BTreeMap<Partition, S> {
    let mut out = BTreeMap::new();
    for (e, c) in &poly.terms {
        let mut sorted = e.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted == *e {
            assert!(e.iter().all(|k| *k >= 0), "m-basis needs a polynomial");
            out.insert(Partition::new(e.clone()), c.clone());
        }
    }
    out
}

/// Change-of-basis data at fixed degree d: the expansions of p_λ over m_μ
/// and its inverse, as dense matrices over the listed partitions.
pub struct DegreeBasis<S> {
    pub partitions: Vec<Partition>,
    /// row λ: p_λ = Σ_μ p_to_m[λ][μ] m_μ
    pub p_to_m: Vec<Vec<S>>,
    /// row λ: m_λ = Σ_μ m_to_p[λ][μ] p_μ
    pub m_to_p: Vec<Vec<S>>,
}

pub fn degree_basis<S: Scalar>(d: i64) -> Result<DegreeBasis<S>> {
    let partitions = Partition::all_of(d);
    let n = d.max(1) as usize;
    let k = partitions.len();
    let mut p_to_m = vec![vec![S::zero(); k]; k];
    for (i, lam) in partitions.iter().enumerate() {
        let poly = power_sum_product::<S>(lam, n);
        let coeffs = to_monomial_basis(&poly);
        for (j, mu) in partitions.iter().enumerate() {
            if let Some(c) = coeffs.get(mu) {
                p_to_m[i][j] = c.clone();
            }
        }
    }
    let m_to_p = invert_matrix(&p_to_m)?;
    Ok(DegreeBasis {
        partitions,
        p_to_m,
        m_to_p,
    })
}

/// Exact Gaussian elimination over the scalar field.
pub fn invert_matrix<S: Scalar>(a: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|r| !m[*r][col].is_zero())
            .ok_or(Error::DivisionByZero)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let d = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = m[col][j].clone() * d.clone();
            inv[col][j] = inv[col][j].clone() * d.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    m[r][j] = m[r][j].clone() - f.clone() * m[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
                }
            }
        }
    }
    Ok(inv)
}

/// Solve a linear system A x = b by elimination (A square, invertible).
pub fn solve_linear<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Vec<S>> {
    let inv = invert_matrix(a)?;
    Ok((0..b.len())
        .map(|i| {
            let mut acc = S::zero();
            for (j, bv) in b.iter().enumerate() {
                acc = acc + inv[i][j].clone() * bv.clone();
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;

    fn part(v: &[i64]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn monomial_basics() {
        // m_(1) in 2 vars = x1 + x2
        let m1 = monomial_expand::<Rat>(&part(&[1]), 2).unwrap();
        assert_eq!(m1.terms.len(), 2);
        // m_(1,1) in 2 vars = x1 x2
        let m11 = monomial_expand::<Rat>(&part(&[1, 1]), 2).unwrap();
        assert_eq!(m11.terms.len(), 1);
        // m_(2,1) in 3 vars has the full 6-term orbit
        let m21 = monomial_expand::<Rat>(&part(&[2, 1]), 3).unwrap();
        assert_eq!(m21.terms.len(), 6);
        assert!(m21.is_symmetric());
        // too many parts
        assert!(monomial_expand::<Rat>(&part(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn power_sum_transitions() {
        // p_1 = m_(1); p_2 = m_(2); p_1^2 = m_(2) + 2 m_(1,1)
        let b1 = degree_basis::<Rat>(1).unwrap();
        assert_eq!(b1.p_to_m[0][0], Rat::from_int(1));
        let b2 = degree_basis::<Rat>(2).unwrap();
        let i2 = b2.partitions.iter().position(|l| *l == part(&[2])).unwrap();
        let i11 = b2
            .partitions
            .iter()
            .position(|l| *l == part(&[1, 1]))
            .unwrap();
        // p_(2) row: p_2 = m_2
        assert_eq!(b2.p_to_m[i2][i2], Rat::from_int(1));
        assert!(b2.p_to_m[i2][i11].is_zero());
        // p_(1,1) row: p_1^2 = m_2 + 2 m_11
        assert_eq!(b2.p_to_m[i11][i2], Rat::from_int(1));
        assert_eq!(b2.p_to_m[i11][i11], Rat::from_int(2));
        // inverse really inverts
        let prod = {
            let mut acc = Rat::zero();
            for k in 0..2 {
                acc = acc + b2.p_to_m[i2][k].clone() * b2.m_to_p[k][i2].clone();
            }
            acc
        };
        assert_eq!(prod, Rat::from_int(1));
    }

    #[test]
    fn division_exact_and_inexact() {
        // (x1^2 - x2^2)/(x1 - x2) = x1 + x2
        let x1 = MPoly::<Rat>::var_pow(2, 0, 1);
        let x2 = MPoly::<Rat>::var_pow(2, 1, 1);
        let num = x1.mul(&x1).sub(&x2.mul(&x2));
        let den = x1.sub(&x2);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, x1.add(&x2));
        // inexact case errors
        let bad = x1.mul(&x1).add(&MPoly::one(2));
        assert!(bad.div_exact(&den).is_err());
    }

    #[test]
    fn laurent_division() {
        // (1 - x1/x2) divides (1 - (x1/x2)^2)
        let r = MPoly::<Rat>::monomial(2, vec![1, -1], Rat::from_int(1));
        let num = MPoly::one(2).sub(&r.mul(&r));
        let den = MPoly::one(2).sub(&r);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, MPoly::one(2).add(&r));
    }

    #[test]
    fn ppoly_division_roundtrip() {
        let x1 = MPoly::<Rat>::var_pow(2, 0, 1);
        let w = PPoly::from_layer(0, MPoly::one(2).sub(&x1.clone()), 4)
            .add(&PPoly::from_layer(1, x1.mul(&x1), 4));
        let g = PPoly::from_layer(0, x1.clone(), 4).add(&PPoly::from_layer(2, MPoly::one(2), 4));
        let prod = w.mul(&g);
        let back = prod.div_exact(&w).unwrap();
        assert_eq!(back.sub(&g.at_trunc(back.trunc)).is_zero(), true);
    }
}
