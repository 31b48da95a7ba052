//! Truncated Laurent series in the nome p.
//!
//! A [`NomeSeries`] stores finitely many coefficients c_k of p^k together
//! with a truncation order: the series is known exactly modulo
//! p^(trunc+1). Negative orders are allowed (raw b-boson commutators carry
//! inverse powers of p); suites assert that final physical quantities have
//! min order >= 0.
//!
//! Truncation bookkeeping follows the product rule
//! trunc(a*b) = min(trunc(a) + min(ord(b),0), trunc(b) + min(ord(a),0)),
//! which reduces to min(trunc(a), trunc(b)) when both series start at
//! nonnegative order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::scalar::{scalar_close, Scalar, C64};

/// Truncation marker for series that are exact (finite support, no error
/// term), e.g. commutator weights or theta prefactors of a scalar argument.
pub const EXACT_ORDER: i64 = i64::MAX / 4;

#[derive(Clone, PartialEq)]
pub struct NomeSeries<S> {
    coeffs: BTreeMap<i64, S>,
    trunc: i64,
}

impl<S: Scalar> NomeSeries<S> {
    pub fn zero(trunc: i64) -> Self {
        NomeSeries {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(value: S, trunc: i64) -> Self {
        Self::monomial(value, 0, trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::constant(S::one(), trunc)
    }

    /// value * p^order
    pub fn monomial(value: S, order: i64, trunc: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !value.is_zero() && order <= trunc {
            coeffs.insert(order, value);
        }
        NomeSeries { coeffs, trunc }
    }

    /// An exact scalar (known to all orders).
    pub fn exact(value: S) -> Self {
        Self::constant(value, EXACT_ORDER)
    }

    pub fn exact_monomial(value: S, order: i64) -> Self {
        Self::monomial(value, order, EXACT_ORDER)
    }

    pub fn from_coeffs(pairs: Vec<(i64, S)>, trunc: i64) -> Self {
        let mut out = Self::zero(trunc);
        for (k, v) in pairs {
            out.add_term(k, v);
        }
        out
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT_ORDER
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest stored order; `None` for the zero series.
    pub fn min_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i64) -> S {
        self.coeffs.get(&k).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &S)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, k: i64, v: S) {
        if v.is_zero() || k > self.trunc {
            return;
        }
        let cur = self.coeffs.remove(&k).unwrap_or_else(S::zero);
        let sum = cur + v;
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    /// Re-truncate downward, or upward only from an exact series.
    pub fn at_trunc(&self, t: i64) -> Self {
        let new_t = if self.is_exact() { t } else { self.trunc.min(t) };
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|k, _| *k <= new_t);
        NomeSeries {
            coeffs,
            trunc: new_t,
        }
    }

    pub fn neg(&self) -> Self {
        NomeSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, -v.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.at_trunc(trunc);
        for (k, v) in &other.coeffs {
            if *k <= trunc {
                out.add_term(*k, v.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.trunc);
        }
        NomeSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, s.clone() * v.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by p^k (shifts both support and truncation).
    pub fn shift(&self, k: i64) -> Self {
        NomeSeries {
            coeffs: self.coeffs.iter().map(|(o, v)| (o + k, v.clone())).collect(),
            trunc: self.trunc.saturating_add(k).min(EXACT_ORDER),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ma = self.min_order().unwrap_or(0).min(0);
        let mb = other.min_order().unwrap_or(0).min(0);
        let trunc = (self.trunc.saturating_add(mb))
            .min(other.trunc.saturating_add(ma))
            .min(EXACT_ORDER);
        let mut out = Self::zero(trunc);
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let k = ka + kb;
                if k <= trunc {
                    out.add_term(k, va.clone() * vb.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::exact(S::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse, solved order by order around the lowest
    /// term. Exact inputs must be re-truncated first so the target order
    /// is finite.
    pub fn invert(&self) -> Result<Self> {
        if self.is_exact() {
            return Err(Error::NonInvertibleLead);
        }
        let m = self.min_order().ok_or(Error::NonInvertibleLead)?;
        let lead = self.coeff(m);
        let lead_inv = lead.inv().map_err(|_| Error::NonInvertibleLead)?;
        // a = lead*p^m*(1+u); 1/a known to trunc - 2m.
        let trunc_out = self.trunc - 2 * m;
        let mut out = Self::monomial(lead_inv.clone(), -m, trunc_out);
        // Solve (self * out = 1): the p^(k+m) coefficient of the product
        // fixes the output order k in terms of lower ones.
        for k in (-m + 1)..=trunc_out {
            let mut acc = S::zero();
            for (ka, va) in &self.coeffs {
                let need = k + m - ka;
                if need >= -m && need < k {
                    let c = out.coeff(need);
                    if !c.is_zero() {
                        acc = acc + va.clone() * c;
                    }
                }
            }
            if !acc.is_zero() {
                out.add_term(k, -(lead_inv.clone() * acc));
            }
        }
        Ok(out)
    }

    /// Evaluate at a numeric nome. Coefficients map through `to_c64`.
    pub fn eval_c64(&self, p: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in &self.coeffs {
            acc += v.to_c64() * p.powi(*k as i32);
        }
        acc
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        let trunc = self.trunc.min(other.trunc);
        let mut keys: Vec<i64> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter(|k| *k <= trunc)
            .all(|k| scalar_close(&self.coeff(k), &other.coeff(k), tol))
    }

    /// Largest |coefficient| after subtracting, for residual reports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.coeffs.values().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Debug for NomeSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})p^{k}")?;
        }
        if !self.is_exact() {
            write!(f, " + O(p^{})", self.trunc + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::scalar::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    #[test]
    fn mul_truncates_to_common_order() {
        let a = NomeSeries::from_coeffs(vec![(0, r(1, 1)), (1, r(1, 1))], 3);
        let b = NomeSeries::from_coeffs(vec![(0, r(1, 1)), (1, r(-1, 1))], 5);
        let prod = a.mul(&b);
        assert_eq!(prod.trunc(), 3);
        assert_eq!(prod.coeff(0), r(1, 1));
        assert_eq!(prod.coeff(1), r(0, 1));
        assert_eq!(prod.coeff(2), r(-1, 1));
    }

    #[test]
    fn negative_orders_shrink_truncation() {
        // (p^-2) * (known mod p^5) is only known mod p^3.
        let a = NomeSeries::exact_monomial(r(1, 1), -2);
        let b = NomeSeries::from_coeffs(vec![(0, r(1, 1))], 4);
        let prod = a.mul(&b);
        assert_eq!(prod.trunc(), 2);
        assert_eq!(prod.min_order(), Some(-2));
    }

    #[test]
    fn invert_geometric() {
        // 1/(1-p) = sum p^k
        let a = NomeSeries::from_coeffs(vec![(0, r(1, 1)), (1, r(-1, 1))], 5);
        let inv = a.invert().unwrap();
        for k in 0..=5 {
            assert_eq!(inv.coeff(k), r(1, 1), "coeff p^{k}");
        }
        assert!(a.mul(&inv).sub(&NomeSeries::one(5)).is_zero());
    }

    #[test]
    fn invert_with_shifted_lead() {
        // a = p^2(1 - p): inverse = p^-2 (1 + p + ...), known to trunc-4
        let a = NomeSeries::from_coeffs(vec![(2, r(1, 1)), (3, r(-1, 1))], 8);
        let inv = a.invert().unwrap();
        assert_eq!(inv.trunc(), 4);
        assert_eq!(inv.coeff(-2), r(1, 1));
        assert_eq!(inv.coeff(-1), r(1, 1));
        let prod = a.mul(&inv);
        assert!(prod.sub(&NomeSeries::one(prod.trunc())).is_zero());
    }

    #[test]
    fn eval_matches_horner() {
        let a = NomeSeries::from_coeffs(vec![(-1, r(1, 2)), (0, r(1, 1)), (3, r(2, 1))], 5);
        let p = C64::new(0.1, 0.0);
        let v = a.eval_c64(p);
        let expect = 0.5 / 0.1 + 1.0 + 2.0 * 0.1f64.powi(3);
        assert!((v.re - expect).abs() < 1e-12);
    }
}
