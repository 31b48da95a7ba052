//! Kernel functions pairing two variable sets, in several independent
//! expansions, the kernel/operator exchange identity, and the weight
//! functions.
//!
//! Variables 0..nx are the x block, nx..nx+ny the y block. Truncation is
//! by total x-degree (= total y-degree: every generating term pairs the
//! two blocks degree for degree).

use crate::error::{Error, Result};
use crate::qspecial::{elliptic_gamma_num, qpoch_inf, qpoch_n};
use crate::scalars::{NomeSeries, Scalar, C64};
use crate::symmetric::macdonald::{apply_macdonald_elliptic, apply_macdonald_trig, z_qt};
use crate::symmetric::partition::Partition;
use crate::symmetric::poly::{power_sum_product, MPoly, PPoly};

fn block_power_sum<S: Scalar>(nvars: usize, vars: std::ops::Range<usize>, k: i64) -> MPoly<S> {
    let mut out = MPoly::zero(nvars);
    for i in vars {
        out = out.add(&MPoly::var_pow(nvars, i, k));
    }
    out
}

/// exp of a p-layered polynomial with a positive-degree/nome grading,
/// truncated by x-block degree.
fn ppoly_exp<S: Scalar>(
    arg: &PPoly<S>,
    x_vars: std::ops::Range<usize>,
    cutoff: i64,
) -> Result<PPoly<S>> {
    // every term must raise (signed x-degree + 2 * nome order)
    for (o, layer) in &arg.layers {
        for e in layer.terms.keys() {
            let d: i64 = e[x_vars.clone()].iter().sum();
            if d + 2 * o < 1 {
                return Err(Error::Divergent("kernel exp does not terminate".into()));
            }
        }
    }
    let mut out = PPoly::one(arg.nvars, arg.trunc);
    let mut term = out.clone();
    for k in 1..=(2 * cutoff + 3 * arg.trunc.max(0) + 8) {
        term = term.mul(arg).map_layers(|l| l.truncate_degree(x_vars.clone(), cutoff));
        term = term.scale(&S::from_int(k).inv()?);
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out.map_layers(|l| l.truncate_degree(x_vars.clone(), cutoff)))
}

/// Π(q,t)(x,y) from its power-sum exponential
/// exp(Σ_n (1-t^n)/((1-q^n) n) p_n(x) p_n(y)), truncated by x-degree.
pub fn kernel_trig_exp<S: Scalar>(
    nx: usize,
    ny: usize,
    cutoff: i64,
    q: &S,
    t: &S,
) -> Result<MPoly<S>> {
    let nvars = nx + ny;
    let mut arg = PPoly::zero(nvars, 0);
    for n in 1..=cutoff {
        let c = (S::one() - t.powi(n)?)
            .div(&(S::one() - q.powi(n)?))?
            * S::from_int(n).inv()?;
        let pn = block_power_sum::<S>(nvars, 0..nx, n).mul(&block_power_sum(nvars, nx..nvars, n));
        arg.add_layer(0, pn.scale(&c));
    }
    Ok(ppoly_exp(&arg, 0..nx, cutoff)?.layer(0))
}

/// Π(q,t)(x,y) from the product form prod_{i,j} (t x_i y_j;q)_∞/(x_i y_j;q)_∞,
/// each factor expanded by the q-binomial theorem. Independent of the
/// exponential route.
pub fn kernel_trig_product<S: Scalar>(
    nx: usize,
    ny: usize,
    cutoff: i64,
    q: &S,
    t: &S,
) -> Result<MPoly<S>> {
    let nvars = nx + ny;
    let mut out = MPoly::one(nvars);
    for i in 0..nx {
        for j in nx..nvars {
            let mut factor = MPoly::zero(nvars);
            for n in 0..=cutoff {
                // (t;q)_n/(q;q)_n u^n
                let c = qpoch_n(t, q, n)?.div(&qpoch_n(q, q, n)?)?;
                let mut e = vec![0; nvars];
                e[i] = n;
                e[j] = n;
                factor.add_term(e, c);
            }
            out = out.mul(&factor).truncate_degree(0..nx, cutoff);
        }
    }
    Ok(out)
}

/// Π(q,t)(x,y) from Σ_λ z_λ(q,t)^{-1} p_λ(x) p_λ(y).
pub fn kernel_trig_zsum<S: Scalar>(
    nx: usize,
    ny: usize,
    cutoff: i64,
    q: &S,
    t: &S,
) -> Result<MPoly<S>> {
    let nvars = nx + ny;
    let mut out = MPoly::zero(nvars);
    for lam in Partition::all_up_to(cutoff) {
        let weight = z_qt(&lam, q, t)?.inv()?;
        let px = embed(&power_sum_product::<S>(&lam, nx), nvars, 0);
        let py = embed(&power_sum_product::<S>(&lam, ny), nvars, nx);
        out = out.add(&px.mul(&py).scale(&weight));
    }
    Ok(out)
}

fn embed<S: Scalar>(poly: &MPoly<S>, nvars: usize, offset: usize) -> MPoly<S> {
    let mut out = MPoly::zero(nvars);
    for (e, c) in &poly.terms {
        let mut e2 = vec![0; nvars];
        e2[offset..offset + e.len()].copy_from_slice(e);
        out.add_term(e2, c.clone());
    }
    out
}

/// Π(q,t,p)(x,y) from its power-sum exponential with both positive and
/// negative power sums:
/// exp(Σ_n c_n^- p_n(1/x) p_n(1/y)/n) exp(Σ_n c_n^+ p_n(x) p_n(y)/n),
/// c_n^+ = (1-t^n)/((1-q^n)(1-p^n)), c_n^- = c_n^+ (q p / t)^n.
pub fn kernel_elliptic_exp<S: Scalar>(
    nx: usize,
    ny: usize,
    cutoff: i64,
    trunc: i64,
    q: &S,
    t: &S,
) -> Result<PPoly<S>> {
    let nvars = nx + ny;
    let mut arg = PPoly::zero(nvars, trunc);
    for n in 1..=(cutoff + trunc) {
        let geom = NomeSeries::from_coeffs(vec![(0, S::one()), (n, -S::one())], trunc).invert()?;
        let base = (S::one() - t.powi(n)?).div(&(S::one() - q.powi(n)?))? * S::from_int(n).inv()?;
        let plus = geom.scale(&base);
        let qt_n = q.powi(n)? * t.powi(-n)?;
        let minus = geom.shift(n).scale(&(base.clone() * qt_n));
        let pn_pos =
            block_power_sum::<S>(nvars, 0..nx, n).mul(&block_power_sum(nvars, nx..nvars, n));
        let pn_neg =
            block_power_sum::<S>(nvars, 0..nx, -n).mul(&block_power_sum(nvars, nx..nvars, -n));
        for (o, c) in plus.iter() {
            arg.add_layer(*o, pn_pos.scale(c));
        }
        for (o, c) in minus.iter() {
            arg.add_layer(*o, pn_neg.scale(c));
        }
    }
    // negative power sums (nome-graded) can pull a degree back under the
    // cutoff, so expand with headroom and truncate at the end
    let out = ppoly_exp(&arg, 0..nx, cutoff + trunc.max(0))?;
    Ok(out.map_layers(|l| l.truncate_degree(0..nx, cutoff)))
}

/// Π(q,t,p)(x,y) from the double z-weighted sum over partition pairs,
/// with z_λ(q,t,p) on the positive block and z̄_λ(q,t,p) on the negative.
pub fn kernel_elliptic_zsum<S: Scalar>(
    nx: usize,
    ny: usize,
    cutoff: i64,
    trunc: i64,
    q: &S,
    t: &S,
) -> Result<PPoly<S>> {
    let nvars = nx + ny;
    let mut pos = PPoly::zero(nvars, trunc);
    let mut neg = PPoly::zero(nvars, trunc);
    for lam in Partition::all_up_to(cutoff + trunc) {
        // 1/z_λ(q,t,p) and 1/z̄_λ(q,t,p) as nome series
        let mut z_inv = NomeSeries::exact(lam.z_comb::<S>().inv()?);
        let mut zbar_inv = z_inv.clone();
        for &m in lam.parts() {
            let tq = (S::one() - t.powi(m)?).div(&(S::one() - q.powi(m)?))?;
            let geom =
                NomeSeries::from_coeffs(vec![(0, S::one()), (m, -S::one())], trunc).invert()?;
            // 1/[(1-p^m)(1-q^m)/(1-t^m)]
            z_inv = z_inv.mul(&geom.scale(&tq));
            // 1/[(1-p^m)(q p /t)^{-m} ... ] = (q p / t)^m/(1-p^m) (1-t^m)/(1-q^m)
            let qt_m = q.powi(m)? * t.powi(-m)?;
            zbar_inv = zbar_inv.mul(&geom.shift(m).scale(&(tq.clone() * qt_m)));
        }
        let px = embed(&power_sum_product::<S>(&lam, nx), nvars, 0);
        let py = embed(&power_sum_product::<S>(&lam, ny), nvars, nx);
        for (o, c) in z_inv.iter() {
            pos.add_layer(*o, px.mul(&py).scale(c));
        }
        let pxm = embed(&power_sum_neg::<S>(&lam, nx), nvars, 0);
        let pym = embed(&power_sum_neg::<S>(&lam, ny), nvars, nx);
        for (o, c) in zbar_inv.iter() {
            neg.add_layer(*o, pxm.mul(&pym).scale(c));
        }
    }
    let prod = neg.mul(&pos);
    Ok(prod.map_layers(|l| l.truncate_degree(0..nx, cutoff)))
}

fn power_sum_neg<S: Scalar>(lambda: &Partition, n: usize) -> MPoly<S> {
    let mut out = MPoly::one(n);
    for &part in lambda.parts() {
        let mut ps = MPoly::zero(n);
        for i in 0..n {
            ps = ps.add(&MPoly::var_pow(n, i, -part));
        }
        out = out.mul(&ps);
    }
    out
}

/// Residual of H_x Π - H_y Π for the trigonometric kernel (should vanish
/// identically on the guaranteed degree window).
pub fn kernel_identity_residual_trig<S: Scalar>(
    n: usize,
    cutoff: i64,
    q: &S,
    t: &S,
) -> Result<MPoly<S>> {
    let kernel = kernel_trig_exp(n, n, cutoff, q, t)?;
    let x_vars: Vec<usize> = (0..n).collect();
    let y_vars: Vec<usize> = (n..2 * n).collect();
    let hx = apply_macdonald_trig(&kernel, &x_vars, q, t)?;
    let hy = apply_macdonald_trig(&kernel, &y_vars, q, t)?;
    // T_q raises no degree, so both sides are exact on degrees <= cutoff-1
    // (the kernel itself is exact to cutoff; the last degree is kept)
    Ok(hx.sub(&hy).truncate_degree(0..n, cutoff))
}

/// Residual of H_x Π - H_y Π for the elliptic kernel, per nome order.
pub fn kernel_identity_residual_elliptic<S: Scalar>(
    n: usize,
    cutoff: i64,
    trunc: i64,
    q: &S,
    t: &S,
) -> Result<PPoly<S>> {
    let kernel = kernel_elliptic_exp(n, n, cutoff, trunc, q, t)?;
    let x_vars: Vec<usize> = (0..n).collect();
    let y_vars: Vec<usize> = (n..2 * n).collect();
    let hx = apply_macdonald_elliptic(&kernel, &x_vars, q, t)?;
    let hy = apply_macdonald_elliptic(&kernel, &y_vars, q, t)?;
    let diff = hx.sub(&hy);
    // negative exponents reach -(trunc); the safe shared degree window is
    // everything the kernel carried
    Ok(diff.map_layers(|l| l.truncate_degree(0..n, cutoff)))
}

/// Numeric weight function Δ(q,t)(x) = prod_{i≠j} (x_i/x_j;q)_∞/(t x_i/x_j;q)_∞.
pub fn weight_delta_trig(xs: &[C64], q: C64, t: C64) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if i != j {
                if (xs[i] - xs[j]).norm() < 1e-12 {
                    return Err(Error::Pole("coincident variables".into()));
                }
                let r = xs[i] / xs[j];
                acc *= qpoch_inf(r, q)? / qpoch_inf(t * r, q)?;
            }
        }
    }
    Ok(acc)
}

/// Numeric weight function Δ(q,t,p)(x) = prod_{i≠j} Γ(t x_i/x_j)/Γ(x_i/x_j).
pub fn weight_delta_elliptic(xs: &[C64], q: C64, t: C64, p: C64) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if i != j {
                if (xs[i] - xs[j]).norm() < 1e-12 {
                    return Err(Error::Pole("coincident variables".into()));
                }
                let r = xs[i] / xs[j];
                acc *= elliptic_gamma_num(t * r, q, p)? / elliptic_gamma_num(r, q, p)?;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;

    fn qt() -> (Rat, Rat) {
        (Rat::from_ratio(1, 4), Rat::from_ratio(9, 16))
    }

    #[test]
    fn kernel_trig_three_routes_agree() {
        let (q, t) = qt();
        let a = kernel_trig_exp(2, 2, 4, &q, &t).unwrap();
        let b = kernel_trig_product(2, 2, 4, &q, &t).unwrap();
        let c = kernel_trig_zsum(2, 2, 4, &q, &t).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn kernel_trig_low_degrees() {
        let (q, t) = qt();
        let k = kernel_trig_exp(1, 1, 2, &q, &t).unwrap();
        // degree-0 term 1; degree-1 term (1-t)/(1-q) x y
        assert_eq!(k.terms[&vec![0, 0]], Rat::from_int(1));
        let c1 = (Rat::from_int(1) - t.clone())
            .div(&(Rat::from_int(1) - q.clone()))
            .unwrap();
        assert_eq!(k.terms[&vec![1, 1]], c1);
    }

    #[test]
    fn kernel_elliptic_reduces_to_trig_at_p0() {
        let (q, t) = qt();
        let ek = kernel_elliptic_exp(2, 2, 3, 2, &q, &t).unwrap();
        let tk = kernel_trig_exp(2, 2, 3, &q, &t).unwrap();
        assert_eq!(ek.layer(0), tk);
    }

    #[test]
    fn kernel_elliptic_exp_vs_zsum() {
        let (q, t) = qt();
        let a = kernel_elliptic_exp(1, 1, 2, 2, &q, &t).unwrap();
        let b = kernel_elliptic_zsum(1, 1, 2, 2, &q, &t).unwrap();
        let diff = a.sub(&b);
        assert!(diff.is_zero(), "{diff:?}");
    }

    #[test]
    fn kernel_identity_trig() {
        let (q, t) = qt();
        // N=1: both sides depend on x y only
        let r1 = kernel_identity_residual_trig(1, 4, &q, &t).unwrap();
        assert!(r1.is_zero(), "{r1:?}");
        let r2 = kernel_identity_residual_trig(2, 4, &q, &t).unwrap();
        assert!(r2.is_zero(), "{r2:?}");
    }

    #[test]
    fn kernel_identity_elliptic() {
        let (q, t) = qt();
        let r = kernel_identity_residual_elliptic(2, 3, 2, &q, &t).unwrap();
        assert!(r.is_zero(), "{r:?}");
    }

    #[test]
    fn weight_functions_numeric() {
        let q = C64::new(0.2, 0.0);
        let t = C64::new(0.3, 0.0);
        let xs = [C64::new(1.0, 0.0), C64::new(1.7, 0.3)];
        // N=1: empty product
        let w1 = weight_delta_trig(&xs[..1], q, t).unwrap();
        assert!((w1 - C64::new(1.0, 0.0)).norm() < 1e-14);
        // direct q-product oracle at N=2
        let w2 = weight_delta_trig(&xs, q, t).unwrap();
        let r = xs[0] / xs[1];
        let byhand = qpoch_inf(r, q).unwrap() / qpoch_inf(t * r, q).unwrap()
            * (qpoch_inf(r.inv(), q).unwrap() / qpoch_inf(t * r.inv(), q).unwrap());
        assert!((w2 - byhand).norm() < 1e-12);
        // elliptic p -> 0 equals trig
        let we = weight_delta_elliptic(&xs, q, t, C64::new(0.0, 0.0)).unwrap();
        assert!((we - w2).norm() < 1e-10);
    }
}
