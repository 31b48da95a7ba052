//! Windowed Laurent series in one formal variable, with [`NomeSeries`]
//! coefficients and an annulus tag.
//!
//! The tag records in which region a geometric expansion was taken:
//! `Inner` series are exactly supported on the low-exponent side and
//! truncated above, `Outer` series the mirror, `Formal` covers polynomials
//! and other two-sided objects. Multiplying an Inner expansion by an Outer
//! one is an error: that is the illegal mixing of the two geometric
//! branches of 1/(1-x).
//!
//! Each side of the window carries an exactness flag. A side that is not
//! exact means coefficients beyond the bound were dropped; products
//! propagate the guaranteed range, so a dropped coefficient never silently
//! contaminates a reported one.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::pseries::{NomeSeries, EXACT_ORDER};
use crate::scalars::scalar::{Scalar, C64};

pub const KNOWN_ALL_LO: i64 = i64::MIN / 4;
pub const KNOWN_ALL_HI: i64 = i64::MAX / 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Annulus {
    Inner,
    Outer,
    Formal,
}

impl Annulus {
    fn combine(self, other: Annulus) -> Result<Annulus> {
        use Annulus::*;
        match (self, other) {
            (Formal, x) | (x, Formal) => Ok(x),
            (Inner, Inner) => Ok(Inner),
            (Outer, Outer) => Ok(Outer),
            _ => Err(Error::AnnulusMismatch),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Laurent<S> {
    var: String,
    coeffs: BTreeMap<i64, NomeSeries<S>>,
    lo_known: i64,
    hi_known: i64,
    lo_exact: bool,
    hi_exact: bool,
    annulus: Annulus,
    truncated: bool,
}

impl<S: Scalar> Laurent<S> {
    /// Empty series with a window and the exactness pattern implied by the
    /// tag: Inner is exact below, Outer exact above, Formal exact on both
    /// sides (a polynomial window).
    pub fn new_window(var: &str, annulus: Annulus, lo: i64, hi: i64) -> Self {
        let (lo_exact, hi_exact) = match annulus {
            Annulus::Inner => (true, false),
            Annulus::Outer => (false, true),
            Annulus::Formal => (true, true),
        };
        Laurent {
            var: var.to_string(),
            coeffs: BTreeMap::new(),
            lo_known: lo,
            hi_known: hi,
            lo_exact,
            hi_exact,
            annulus,
            truncated: false,
        }
    }

    /// Exact finite Laurent polynomial.
    pub fn poly(var: &str, terms: Vec<(i64, NomeSeries<S>)>) -> Self {
        let mut out = Self::new_window(var, Annulus::Formal, KNOWN_ALL_LO, KNOWN_ALL_HI);
        for (k, v) in terms {
            out.add_term(k, v);
        }
        out
    }

    pub fn one(var: &str) -> Self {
        Self::poly(var, vec![(0, NomeSeries::exact(S::one()))])
    }

    pub fn zero(var: &str, annulus: Annulus) -> Self {
        Self::new_window(var, annulus, KNOWN_ALL_LO, KNOWN_ALL_HI)
    }

    pub fn var(&self) -> &str {
        &self.var
    }
    pub fn annulus(&self) -> Annulus {
        self.annulus
    }
    pub fn was_truncated(&self) -> bool {
        self.truncated
    }
    pub fn lo_known(&self) -> i64 {
        self.lo_known
    }
    pub fn hi_known(&self) -> i64 {
        self.hi_known
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.keys().next()?;
        let hi = self.coeffs.keys().next_back()?;
        Some((*lo, *hi))
    }

    pub fn coeff(&self, k: i64) -> NomeSeries<S> {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| NomeSeries::zero(self.min_trunc()))
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, NomeSeries<S>> {
        &self.coeffs
    }

    /// Smallest truncation order among stored coefficients.
    pub fn min_trunc(&self) -> i64 {
        self.coeffs
            .values()
            .map(|c| c.trunc())
            .min()
            .unwrap_or(EXACT_ORDER)
    }

    pub fn add_term(&mut self, k: i64, v: NomeSeries<S>) {
        if v.is_zero() {
            return;
        }
        if k < self.lo_known || k > self.hi_known {
            self.truncated = true;
            return;
        }
        let cur = self.coeffs.remove(&k);
        let sum = match cur {
            Some(c) => c.add(&v),
            None => v,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    /// Tighten the window; dropping a known nonzero coefficient marks the
    /// corresponding side inexact and sets the truncation flag.
    pub fn clip(&mut self, lo: i64, hi: i64) {
        if self.coeffs.keys().any(|k| *k < lo) {
            self.truncated = true;
            self.lo_exact = false;
        }
        if self.coeffs.keys().any(|k| *k > hi) {
            self.truncated = true;
            self.hi_exact = false;
        }
        self.coeffs.retain(|k, _| *k >= lo && *k <= hi);
        self.lo_known = self.lo_known.max(lo);
        self.hi_known = self.hi_known.min(hi);
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VarMismatch(self.var.clone(), other.var.clone()));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let annulus = self.annulus.combine(other.annulus)?;
        Ok(self.sum_with(other, annulus))
    }

    /// Sum of series with incompatible tags, e.g. the inner and outer
    /// branches in a delta-function residual; the result is only ever
    /// compared coefficient-wise, so it is tagged Formal.
    pub fn formal_sum(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        Ok(self.sum_with(other, Annulus::Formal))
    }

    fn sum_with(&self, other: &Self, annulus: Annulus) -> Self {
        let mut out = Laurent {
            var: self.var.clone(),
            coeffs: BTreeMap::new(),
            lo_known: self.lo_known.max(other.lo_known),
            hi_known: self.hi_known.min(other.hi_known),
            lo_exact: self.lo_exact && other.lo_exact,
            hi_exact: self.hi_exact && other.hi_exact,
            annulus,
            truncated: self.truncated || other.truncated,
        };
        for (k, v) in &self.coeffs {
            out.add_term(*k, v.clone());
        }
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone());
        }
        // drops at the window intersection are bookkeeping, not new loss
        out.truncated = self.truncated || other.truncated;
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Lowest exponent at which the true series could be nonzero.
    fn min_possible(&self) -> i64 {
        if self.lo_exact {
            self.support().map(|(lo, _)| lo).unwrap_or(KNOWN_ALL_HI)
        } else {
            KNOWN_ALL_LO
        }
    }

    fn max_possible(&self) -> i64 {
        if self.hi_exact {
            self.support().map(|(_, hi)| hi).unwrap_or(KNOWN_ALL_LO)
        } else {
            KNOWN_ALL_HI
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let annulus = self.annulus.combine(other.annulus)?;
        // Coefficients beyond an inexact bound are unknown; they
        // contaminate the product from (bound+1) + (lowest possible
        // exponent of the other factor) upward, and mirrored below.
        let mut hi = KNOWN_ALL_HI;
        let mut hi_exact = true;
        if !self.hi_exact {
            hi_exact = false;
            hi = hi.min(self.hi_known.saturating_add(other.min_possible()));
        }
        if !other.hi_exact {
            hi_exact = false;
            hi = hi.min(other.hi_known.saturating_add(self.min_possible()));
        }
        let mut lo = KNOWN_ALL_LO;
        let mut lo_exact = true;
        if !self.lo_exact {
            lo_exact = false;
            lo = lo.max(self.lo_known.saturating_add(other.max_possible()));
        }
        if !other.lo_exact {
            lo_exact = false;
            lo = lo.max(other.lo_known.saturating_add(self.max_possible()));
        }
        let mut out = Laurent {
            var: self.var.clone(),
            coeffs: BTreeMap::new(),
            lo_known: lo.clamp(KNOWN_ALL_LO, KNOWN_ALL_HI),
            hi_known: hi.clamp(KNOWN_ALL_LO, KNOWN_ALL_HI),
            lo_exact,
            hi_exact,
            annulus,
            truncated: self.truncated || other.truncated,
        };
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let k = ka + kb;
                if k >= out.lo_known && k <= out.hi_known {
                    out.add_term(k, va.mul(vb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &NomeSeries<S>) -> Self {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.add_term(*k, v.mul(s));
        }
        out
    }

    /// Substitute var -> c * var: the coefficient of x^k picks up c^k.
    pub fn scale_arg(&self, c: &S) -> Result<Self> {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.add_term(*k, v.scale(&c.powi(*k)?));
        }
        Ok(out)
    }

    /// Substitute var -> p^j * var.
    pub fn shift_arg_nome(&self, j: i64) -> Self {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.add_term(*k, v.shift(j * k));
        }
        out
    }

    /// Substitute var -> 1/var; inner and outer tags swap.
    pub fn flip_arg(&self) -> Self {
        let annulus = match self.annulus {
            Annulus::Inner => Annulus::Outer,
            Annulus::Outer => Annulus::Inner,
            Annulus::Formal => Annulus::Formal,
        };
        Laurent {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.clone())).collect(),
            lo_known: -self.hi_known.min(KNOWN_ALL_HI),
            hi_known: -self.lo_known.max(KNOWN_ALL_LO),
            lo_exact: self.hi_exact,
            hi_exact: self.lo_exact,
            annulus,
            truncated: self.truncated,
        }
    }

    /// Multiply by var^k.
    pub fn shift_exp(&self, k: i64) -> Self {
        Laurent {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|(e, v)| (e + k, v.clone())).collect(),
            lo_known: self
                .lo_known
                .saturating_add(k)
                .clamp(KNOWN_ALL_LO, KNOWN_ALL_HI),
            hi_known: self
                .hi_known
                .saturating_add(k)
                .clamp(KNOWN_ALL_LO, KNOWN_ALL_HI),
            lo_exact: self.lo_exact,
            hi_exact: self.hi_exact,
            annulus: self.annulus,
            truncated: self.truncated,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&NomeSeries<S>) -> NomeSeries<S>) -> Self {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.add_term(*k, f(v));
        }
        out
    }

    /// Multiplicative inverse in the declared annulus, solved p-order by
    /// p-order around the pivot term. The result is self-checked by
    /// multiplying back, so an over-claimed window surfaces as an error
    /// rather than a wrong coefficient.
    pub fn invert(&self) -> Result<Self> {
        if let Annulus::Outer = self.annulus {
            let flipped = self.flip_arg();
            return Ok(flipped.invert()?.flip_arg());
        }
        if self.is_zero() || !self.lo_exact {
            return Err(Error::NonInvertibleLead);
        }
        // p-order layers of self, as scalar x-polynomials
        let mut layers: BTreeMap<i64, BTreeMap<i64, S>> = BTreeMap::new();
        for (k, c) in &self.coeffs {
            for (j, s) in c.iter() {
                layers.entry(*j).or_default().insert(*k, s.clone());
            }
        }
        let trunc_in = self.min_trunc();
        if trunc_in >= EXACT_ORDER && layers.len() > 1 {
            // a multi-layer exact series inverts to infinitely many
            // p-orders; the caller must pick a truncation first
            return Err(Error::NonInvertibleLead);
        }
        let j0 = *layers.keys().next().unwrap();
        let base = layers.get(&j0).unwrap().clone();
        let pivot = *base.keys().next().unwrap();
        let lead = base.get(&pivot).unwrap().clone();
        let lead_inv = lead.inv().map_err(|_| Error::NonInvertibleLead)?;

        let out_hi = if self.hi_exact {
            // exact polynomial: pick a window generous enough for callers
            self.support().map(|(_, hi)| hi - 2 * pivot).unwrap_or(0) + 16
        } else {
            self.hi_known - 2 * pivot
        };
        // Higher p-layers with terms below the pivot push the inverse's
        // support downward; each such step costs at least one p-order, so
        // the drift is bounded by (number of computed layers) * spread.
        let trunc_in_layers = if trunc_in >= EXACT_ORDER {
            0
        } else {
            (trunc_in - j0).max(0).min(64)
        };
        let neg_spread = self
            .support()
            .map(|(lo, _)| (pivot - lo).max(0))
            .unwrap_or(0);
        let pos_spread = self
            .support()
            .map(|(_, hi)| (hi - pivot).max(0))
            .unwrap_or(0);
        let out_lo = -pivot - trunc_in_layers * neg_spread;
        let work_hi = out_hi + trunc_in_layers * (neg_spread + pos_spread);

        // Invert the base layer: base = lead*x^pivot*(1+u).
        let mut u: BTreeMap<i64, S> = BTreeMap::new();
        for (k, v) in &base {
            if *k != pivot {
                u.insert(k - pivot, lead_inv.clone() * v.clone());
            }
        }
        let mut base_inv: BTreeMap<i64, S> = BTreeMap::new();
        base_inv.insert(0, S::one());
        let mut upow: BTreeMap<i64, S> = base_inv.clone();
        let umin = u.keys().next().copied().unwrap_or(1).max(1);
        let mut m = 0i64;
        while !upow.is_empty() && m * umin <= work_hi + pivot.abs() {
            m += 1;
            upow = conv_window(&upow, &u, 0, work_hi + pivot.abs());
            let sign = if m % 2 == 0 { S::one() } else { -S::one() };
            for (k, v) in &upow {
                acc_term(&mut base_inv, *k, sign.clone() * v.clone());
            }
        }
        let base_inv: BTreeMap<i64, S> = base_inv
            .into_iter()
            .map(|(k, v)| (k - pivot, lead_inv.clone() * v))
            .collect();

        // Higher layers of the inverse: B_r = -base_inv * sum_s A_s B_{r-s}.
        let trunc_out = if trunc_in >= EXACT_ORDER {
            trunc_in
        } else {
            trunc_in - 2 * j0
        };
        let mut out_layers: BTreeMap<i64, BTreeMap<i64, S>> = BTreeMap::new();
        out_layers.insert(-j0, base_inv.clone());
        let top_r = if layers.len() == 1 { 0 } else { trunc_out + j0 };
        for r in 1..=top_r {
            let mut rhs: BTreeMap<i64, S> = BTreeMap::new();
            for (ja, layer_a) in &layers {
                let s = ja - j0;
                if s < 1 || s > r {
                    continue;
                }
                if let Some(layer_b) = out_layers.get(&(-j0 + r - s)) {
                    let prod = conv_window(layer_a, layer_b, out_lo - pivot.abs(), work_hi);
                    for (k, v) in prod {
                        acc_term(&mut rhs, k, v);
                    }
                }
            }
            if rhs.is_empty() {
                continue;
            }
            let mut br = conv_window(&base_inv, &rhs, out_lo, work_hi);
            for v in br.values_mut() {
                *v = -v.clone();
            }
            out_layers.insert(-j0 + r, br);
        }

        let mut out = Laurent {
            var: self.var.clone(),
            coeffs: BTreeMap::new(),
            lo_known: out_lo,
            hi_known: out_hi,
            lo_exact: true,
            hi_exact: false,
            annulus: self.annulus,
            truncated: self.truncated,
        };
        for (j, layer) in &out_layers {
            for (k, v) in layer {
                if *k >= out_lo && *k <= out_hi {
                    let c = out
                        .coeff(*k)
                        .at_trunc(trunc_out)
                        .add(&NomeSeries::monomial(v.clone(), *j, trunc_out));
                    if c.is_zero() {
                        out.coeffs.remove(k);
                    } else {
                        out.coeffs.insert(*k, c);
                    }
                }
            }
        }
        // Self-check: multiply back and demand 1 on the guaranteed window.
        let prod = self.mul(&out)?;
        if !prod.eq_on_known(&Self::one(&self.var), 0.0) {
            return Err(Error::NonInvertibleLead);
        }
        Ok(out)
    }

    /// exp of a series with no constant term in which every negative
    /// exponent -n carries at least p^n (the grading all contraction
    /// exponents in this crate obey). That grading makes the sum finite
    /// and bounds how far the unknown high-side coefficients can
    /// contaminate downward: by the p-truncation, not per power.
    pub fn exp(&self) -> Result<Self> {
        let trunc = self.min_trunc().min(EXACT_ORDER);
        let trunc = if trunc >= EXACT_ORDER / 2 { EXACT_ORDER } else { trunc };
        let has_negative = self.coeffs.keys().any(|k| *k <= 0);
        if has_negative && trunc >= EXACT_ORDER {
            return Err(Error::Divergent(
                "exp with negative exponents needs a finite p-truncation".into(),
            ));
        }
        if !self.lo_exact {
            return Err(Error::Divergent("exp of an outer-type series".into()));
        }
        for (k, c) in &self.coeffs {
            let o = c.min_order().unwrap_or(0);
            if *k <= 0 && o < 1.max(-k) {
                return Err(Error::Divergent(format!(
                    "exp of term x^{k} p^{o} does not terminate"
                )));
            }
        }
        if self.hi_known >= KNOWN_ALL_HI && !self.hi_exact {
            return Err(Error::Divergent("exp needs a finite window".into()));
        }
        let t_eff = if trunc >= EXACT_ORDER { 0 } else { trunc.max(0) };
        let work_hi = if self.hi_exact {
            self.support().map(|(_, hi)| hi).unwrap_or(0) * (t_eff + 2).max(2)
        } else {
            self.hi_known
        };
        let work_lo = -t_eff;
        let mut out = Laurent {
            var: self.var.clone(),
            coeffs: BTreeMap::new(),
            lo_known: work_lo,
            hi_known: work_hi,
            lo_exact: true,
            hi_exact: self.hi_exact,
            annulus: self.annulus,
            truncated: self.truncated,
        };
        out.add_term(0, NomeSeries::exact(S::one()).at_trunc(trunc));
        let mut term = out.clone();
        let mut k = 0i64;
        let cap = 2 * (work_hi - work_lo).max(4) + 6 * t_eff + 16;
        loop {
            k += 1;
            if k > cap {
                return Err(Error::Divergent("exp did not terminate".into()));
            }
            // raw convolution on the fixed work window: the p-grading of
            // the exponent justifies ignoring the per-product interval rule
            let mut next = Laurent {
                var: self.var.clone(),
                coeffs: BTreeMap::new(),
                lo_known: work_lo,
                hi_known: work_hi,
                lo_exact: true,
                hi_exact: self.hi_exact,
                annulus: self.annulus,
                truncated: false,
            };
            for (ka, va) in &term.coeffs {
                for (kb, vb) in &self.coeffs {
                    let e = ka + kb;
                    if e >= work_lo && e <= work_hi {
                        next.add_term(e, va.mul(vb));
                    }
                }
            }
            next.truncated = false;
            term = next;
            let kinv = S::from_int(k).inv()?;
            term = term.scale(&NomeSeries::exact(kinv));
            if term.is_zero() {
                break;
            }
            out = out.sum_with(&term, out.annulus);
            out.lo_known = work_lo;
            out.hi_known = work_hi;
        }
        out.truncated = self.truncated;
        // unknown inputs above hi_known reach down to hi_known - trunc
        if !self.hi_exact {
            out.hi_known = work_hi - t_eff;
            out.coeffs.retain(|k, _| *k <= work_hi - t_eff);
        }
        Ok(out)
    }

    /// Equality of coefficients on the intersection of guaranteed windows.
    pub fn eq_on_known(&self, other: &Self, tol: f64) -> bool {
        let lo = self.lo_known.max(other.lo_known);
        let hi = self.hi_known.min(other.hi_known);
        self.keys_with(other, lo, hi)
            .into_iter()
            .all(|k| self.coeff(k).close_to(&other.coeff(k), tol))
    }

    /// Max |difference| over the overlap window.
    pub fn residual_on_known(&self, other: &Self) -> f64 {
        let lo = self.lo_known.max(other.lo_known);
        let hi = self.hi_known.min(other.hi_known);
        let mut res: f64 = 0.0;
        for k in self.keys_with(other, lo, hi) {
            res = res.max(self.coeff(k).max_abs_diff(&other.coeff(k)));
        }
        res
    }

    fn keys_with(&self, other: &Self, lo: i64, hi: i64) -> Vec<i64> {
        let mut keys: Vec<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|k| *k >= lo && *k <= hi)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    pub fn eval_c64(&self, x: C64, p: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            acc += c.eval_c64(p) * x.powi(*k as i32);
        }
        acc
    }
}

fn acc_term<S: Scalar>(map: &mut BTreeMap<i64, S>, k: i64, v: S) {
    if v.is_zero() {
        return;
    }
    let cur = map.remove(&k).unwrap_or_else(S::zero);
    let sum = cur + v;
    if !sum.is_zero() {
        map.insert(k, sum);
    }
}

fn conv_window<S: Scalar>(
    a: &BTreeMap<i64, S>,
    b: &BTreeMap<i64, S>,
    lo: i64,
    hi: i64,
) -> BTreeMap<i64, S> {
    let mut out = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k = ka + kb;
            if k >= lo && k <= hi {
                acc_term(&mut out, k, va.clone() * vb.clone());
            }
        }
    }
    out
}

impl<S: Scalar> fmt::Debug for Laurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}: ", self.var)?;
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?}){}^{}", v, self.var, k)?;
        }
        write!(
            f,
            " | known {}..{}{}]",
            self.lo_known,
            self.hi_known,
            if self.truncated { " truncated" } else { "" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::scalar::Rat;

    fn geometric(m: i64) -> Laurent<Rat> {
        // inner expansion of 1/(1-x) to x^m
        let mut s = Laurent::new_window("x", Annulus::Inner, 0, m);
        for k in 0..=m {
            s.add_term(k, NomeSeries::exact(Rat::from_int(1)));
        }
        s
    }

    fn one_minus_x() -> Laurent<Rat> {
        Laurent::poly(
            "x",
            vec![
                (0, NomeSeries::exact(Rat::from_int(1))),
                (1, NomeSeries::exact(Rat::from_int(-1))),
            ],
        )
    }

    #[test]
    fn poly_product() {
        let a = one_minus_x();
        let b = Laurent::poly(
            "x",
            vec![
                (0, NomeSeries::exact(Rat::from_int(1))),
                (1, NomeSeries::exact(Rat::from_int(1))),
            ],
        );
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeff(0), NomeSeries::exact(Rat::from_int(1)));
        assert!(prod.coeff(1).is_zero());
        assert_eq!(prod.coeff(2), NomeSeries::exact(Rat::from_int(-1)));
    }

    #[test]
    fn identity_multiplication() {
        let a = geometric(4);
        let prod = a.mul(&Laurent::one("x")).unwrap();
        assert!(prod.eq_on_known(&a, 0.0));
        assert_eq!(prod.hi_known(), 4);
    }

    #[test]
    fn geometric_times_complement_is_one_within_window() {
        let prod = geometric(4).mul(&one_minus_x()).unwrap();
        assert_eq!(prod.hi_known(), 4);
        assert!(prod.eq_on_known(&Laurent::one("x"), 0.0));
    }

    #[test]
    fn inner_times_outer_errors() {
        let inner = geometric(4);
        let outer = geometric(4).flip_arg();
        assert_eq!(inner.mul(&outer), Err(Error::AnnulusMismatch));
    }

    #[test]
    fn var_mismatch_errors() {
        let a = geometric(3);
        let mut b = geometric(3);
        b.var = "y".into();
        assert!(matches!(a.mul(&b), Err(Error::VarMismatch(_, _))));
    }

    #[test]
    fn invert_inner_is_geometric() {
        let mut a = one_minus_x();
        a.annulus = Annulus::Inner;
        a.hi_exact = false;
        a.hi_known = 6;
        let inv = a.invert().unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(k).coeff(0), Rat::from_int(1), "x^{k}");
        }
    }

    #[test]
    fn invert_outer_is_negative_branch() {
        let mut a = one_minus_x();
        a.annulus = Annulus::Outer;
        a.lo_exact = false;
        a.lo_known = -6;
        let inv = a.invert().unwrap();
        // -(x^-1 + x^-2 + ...)
        assert!(inv.coeff(0).is_zero());
        for k in 1..=5 {
            assert_eq!(inv.coeff(-k).coeff(0), Rat::from_int(-1), "x^-{k}");
        }
    }

    #[test]
    fn exp_log_one_minus_x() {
        // exp(-sum x^n/n) = 1-x
        let mut log = Laurent::new_window("x", Annulus::Inner, 0, 8);
        for n in 1..=8i64 {
            log.add_term(n, NomeSeries::exact(-Rat::from_ratio(1, n)).at_trunc(4));
        }
        let e = log.exp().unwrap();
        assert_eq!(e.coeff(0).coeff(0), Rat::from_int(1));
        assert_eq!(e.coeff(1).coeff(0), Rat::from_int(-1));
        for k in 2..=8 {
            assert!(e.coeff(k).is_zero(), "x^{k} should vanish: {:?}", e.coeff(k));
        }
    }

    #[test]
    fn mul_window_shrinks_against_polynomial() {
        // multiplying a truncated inner series by a polynomial of spread 1
        // keeps the guaranteed window tight by that spread
        let prod = one_minus_x().mul(&geometric(4)).unwrap();
        assert_eq!(prod.hi_known(), 4);
        assert!(prod.lo_known() <= 0);
    }
}
