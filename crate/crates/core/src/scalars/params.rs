//! Parameter points (q, t, p, gamma) with the constraint
//! gamma^2 * q / t = 1 enforced at construction, so gamma never requires a
//! square root during exact runs. Exact runs additionally want gamma itself
//! to be a perfect square (gamma^(1/2) appears in current arguments);
//! `gamma_half` carries that value when it exists in the backend.

use crate::error::{Error, Result};
use crate::scalars::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ParamPoint<S> {
    pub q: S,
    pub t: S,
    pub p: S,
    pub gamma: S,
    gamma_half: Option<S>,
}

impl<S: Scalar> ParamPoint<S> {
    pub fn new(q: S, t: S, p: S) -> Result<Self> {
        if q.is_zero() || t.is_zero() {
            return Err(Error::Degenerate("q and t must be nonzero".into()));
        }
        if !S::EXACT && (q.abs() >= 1.0 || p.abs() >= 1.0) {
            return Err(Error::Degenerate("numeric backend needs |q|<1, |p|<1".into()));
        }
        let gamma = t.div(&q)?.sqrt().map_err(|_| {
            Error::Degenerate(format!(
                "t/q = ({t})/({q}) is not a perfect square; gamma = (q/t)^(-1/2) \
                 would leave the coefficient field"
            ))
        })?;
        // gamma^2 * q * t^{-1} = 1, exactly
        let check = gamma.clone() * gamma.clone() * q.clone() * t.inv()?;
        debug_assert!(check == S::one() || !S::EXACT);
        let gamma_half = gamma.sqrt().ok();
        Ok(ParamPoint {
            q,
            t,
            p,
            gamma,
            gamma_half,
        })
    }

    /// gamma^(1/2), exact when t/q is a perfect fourth power.
    pub fn gamma_half(&self) -> Result<S> {
        self.gamma_half.clone().ok_or_else(|| {
            Error::Degenerate(
                "gamma is not a perfect square; choose (q,t) with t/q a fourth power \
                 (e.g. q=8/81, t=1/2)"
                    .into(),
            )
        })
    }

    /// gamma^(k/2) for integer k, resolving half powers through gamma_half.
    pub fn gamma_half_pow(&self, k: i64) -> Result<S> {
        if k % 2 == 0 {
            self.gamma.powi(k / 2)
        } else {
            self.gamma_half()?.powi(k)
        }
    }

    pub fn qt_inv(&self) -> Result<S> {
        // q/t = gamma^{-2}
        self.gamma.powi(-2)
    }
}

/// The standard exact sample point: q = 8/81, t = 1/2, so t/q = 81/16,
/// gamma = 9/4 and gamma^(1/2) = 3/2 are rational.
pub fn exact_point<S: Scalar>(p_num: i64, p_den: i64) -> ParamPoint<S> {
    ParamPoint::new(
        S::from_ratio(8, 81),
        S::from_ratio(1, 2),
        S::from_ratio(p_num, p_den),
    )
    .expect("standard point is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::scalar::{Rat, C64};

    #[test]
    fn standard_point_has_rational_half_gamma() {
        let pt: ParamPoint<Rat> = exact_point(1, 10);
        assert_eq!(pt.gamma, Rat::from_ratio(9, 4));
        assert_eq!(pt.gamma_half().unwrap(), Rat::from_ratio(3, 2));
        assert_eq!(pt.gamma_half_pow(-3).unwrap(), Rat::from_ratio(8, 27));
    }

    #[test]
    fn non_square_ratio_rejected_exactly() {
        let r = ParamPoint::new(Rat::from_ratio(1, 3), Rat::from_ratio(1, 2), Rat::from_ratio(1, 10));
        assert!(r.is_err());
    }

    #[test]
    fn numeric_point_always_has_gamma() {
        let pt = ParamPoint::new(
            C64::new(0.3, 0.1),
            C64::new(0.5, -0.2),
            C64::new(0.1, 0.0),
        )
        .unwrap();
        let g2 = pt.gamma * pt.gamma * pt.q / pt.t;
        assert!((g2 - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(pt.gamma_half().is_ok());
    }
}
