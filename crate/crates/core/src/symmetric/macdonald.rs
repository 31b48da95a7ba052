//! The (q,t) inner product, Macdonald polynomials by dominance-filtered
//! orthogonalization, and the trigonometric and elliptic Macdonald
//! q-difference operators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::symmetric::partition::Partition;
use crate::symmetric::poly::{degree_basis, monomial_expand, MPoly, PPoly};

/// z_λ(q,t) = z_λ prod_i (1-q^(λ_i))/(1-t^(λ_i)).
pub fn z_qt<S: Scalar>(lambda: &Partition, q: &S, t: &S) -> Result<S> {
    lambda.z_weighted(|m| (S::one() - q.powi(m)?).div(&(S::one() - t.powi(m)?)))
}

/// ⟨f, g⟩_{q,t} for f, g given in the power-sum basis of one degree block
/// (mixed degrees extend bilinearly with zero cross terms).
pub fn inner_product_qt<S: Scalar>(
    f: &BTreeMap<Partition, S>,
    g: &BTreeMap<Partition, S>,
    q: &S,
    t: &S,
) -> Result<S> {
    let mut acc = S::zero();
    for (lam, cf) in f {
        if let Some(cg) = g.get(lam) {
            acc = acc + cf.clone() * cg.clone() * z_qt(lam, q, t)?;
        }
    }
    Ok(acc)
}

/// Linear extensions of dominance used by the orthogonalizer. Both place
/// dominance-smaller partitions first; they differ on incomparable pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DominanceExtension {
    /// ascending lexicographic order of partial-sum vectors
    PartialSumLex,
    /// descending length, then ascending lexicographic parts
    LengthThenLex,
}

fn order_partitions(d: i64, ext: DominanceExtension) -> Vec<Partition> {
    let mut parts = Partition::all_of(d);
    match ext {
        DominanceExtension::PartialSumLex => {
            parts.sort_by_key(|l| {
                (1..=(l.size().max(1)) as usize)
                    .map(|i| l.part(i))
                    .scan(0, |acc, p| {
                        *acc += p;
                        Some(*acc)
                    })
                    .collect::<Vec<i64>>()
            });
        }
        DominanceExtension::LengthThenLex => {
            parts.sort_by(|a, b| {
                b.len()
                    .cmp(&a.len())
                    .then_with(|| a.parts().cmp(b.parts()))
            });
        }
    }
    parts
}

/// One degree block of Macdonald symmetric functions: monomial-basis
/// coefficients and squared norms.
pub struct MacdonaldBlock<S> {
    pub degree: i64,
    pub polys: BTreeMap<Partition, BTreeMap<Partition, S>>,
    pub norms: BTreeMap<Partition, S>,
}

/// Orthogonalize the monomial basis of degree d against ⟨,⟩_{q,t} along a
/// linear extension of dominance. Errors on degenerate (q,t) with the
/// offending partition in the message.
pub fn macdonald_block<S: Scalar>(
    d: i64,
    q: &S,
    t: &S,
    ext: DominanceExtension,
) -> Result<MacdonaldBlock<S>> {
    if d == 0 {
        let mut polys = BTreeMap::new();
        let mut norms = BTreeMap::new();
        polys.insert(Partition::empty(), {
            let mut c = BTreeMap::new();
            c.insert(Partition::empty(), S::one());
            c
        });
        norms.insert(Partition::empty(), S::one());
        return Ok(MacdonaldBlock {
            degree: 0,
            polys,
            norms,
        });
    }
    let basis = degree_basis::<S>(d)?;
    let k = basis.partitions.len();
    let index: BTreeMap<&Partition, usize> = basis
        .partitions
        .iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    // Gram matrix of the monomial basis via m -> p
    let mut zs = Vec::with_capacity(k);
    for lam in &basis.partitions {
        zs.push(z_qt(lam, q, t)?);
    }
    let gram = |a: &[S], b: &[S]| -> S {
        let mut acc = S::zero();
        for i in 0..k {
            acc = acc + a[i].clone() * b[i].clone() * zs[i].clone();
        }
        acc
    };
    // m_λ in the p-basis
    let m_in_p: Vec<Vec<S>> = (0..k).map(|i| basis.m_to_p[i].clone()).collect();

    let order = order_partitions(d, ext);
    let mut block = MacdonaldBlock {
        degree: d,
        polys: BTreeMap::new(),
        norms: BTreeMap::new(),
    };
    let mut done: Vec<(Partition, Vec<S>, BTreeMap<Partition, S>, S)> = Vec::new();
    for lam in order {
        let li = index[&lam];
        // start from m_λ
        let mut vec_p = m_in_p[li].clone();
        let mut coeffs: BTreeMap<Partition, S> = BTreeMap::new();
        coeffs.insert(lam.clone(), S::one());
        for (mu, mu_vec, mu_coeffs, mu_norm) in &done {
            let overlap = gram(&m_in_p[li], mu_vec);
            if overlap.is_zero() {
                continue;
            }
            let c = overlap.div(mu_norm).map_err(|_| {
                Error::Degenerate(format!("vanishing norm at {mu:?} of degree {d}"))
            })?;
            for i in 0..k {
                vec_p[i] = vec_p[i].clone() - c.clone() * mu_vec[i].clone();
            }
            for (nu, v) in mu_coeffs {
                let cur = coeffs.remove(nu).unwrap_or_else(S::zero);
                let s = cur - c.clone() * v.clone();
                if !s.is_zero() {
                    coeffs.insert(nu.clone(), s);
                }
            }
        }
        let norm = gram(&vec_p, &vec_p);
        if norm.is_zero() {
            return Err(Error::Degenerate(format!(
                "vanishing norm at {lam:?} of degree {d}"
            )));
        }
        done.push((lam.clone(), vec_p, coeffs.clone(), norm.clone()));
        block.polys.insert(lam.clone(), coeffs);
        block.norms.insert(lam, norm);
    }
    Ok(block)
}

impl<S: Scalar> MacdonaldBlock<S> {
    /// P_λ as an n-variable polynomial (parts longer than n drop out).
    pub fn in_vars(&self, lambda: &Partition, n: usize) -> Result<MPoly<S>> {
        let coeffs = self
            .polys
            .get(lambda)
            .ok_or_else(|| Error::Degenerate(format!("{lambda:?} not in block")))?;
        let mut out = MPoly::zero(n);
        for (mu, c) in coeffs {
            if mu.len() <= n {
                out = out.add(&monomial_expand::<S>(mu, n)?.scale(c));
            }
        }
        Ok(out)
    }

    /// P_λ in the power-sum basis.
    pub fn in_power_sums(&self, lambda: &Partition) -> Result<BTreeMap<Partition, S>> {
        let coeffs = self
            .polys
            .get(lambda)
            .ok_or_else(|| Error::Degenerate(format!("{lambda:?} not in block")))?;
        if self.degree == 0 {
            let mut out = BTreeMap::new();
            out.insert(Partition::empty(), S::one());
            return Ok(out);
        }
        let basis = degree_basis::<S>(self.degree)?;
        let index: BTreeMap<&Partition, usize> = basis
            .partitions
            .iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let k = basis.partitions.len();
        let mut vec_p = vec![S::zero(); k];
        for (mu, c) in coeffs {
            let mi = index[mu];
            for i in 0..k {
                vec_p[i] = vec_p[i].clone() + c.clone() * basis.m_to_p[mi][i].clone();
            }
        }
        Ok(basis
            .partitions
            .iter()
            .cloned()
            .zip(vec_p)
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// Dominance triangularity: unit leading coefficient, and every
    /// appearing m_μ satisfies μ <= λ.
    pub fn check_triangular(&self) -> bool {
        for (lam, coeffs) in &self.polys {
            match coeffs.get(lam) {
                Some(c) if *c == S::one() => {}
                _ => return false,
            }
            for mu in coeffs.keys() {
                if !lam.dominates(mu) {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------
// Macdonald operators
// ---------------------------------------------------------------------

/// Vandermonde prod_{a<b, a,b in vars} (x_a - x_b).
fn vandermonde<S: Scalar>(nvars: usize, vars: &[usize]) -> MPoly<S> {
    let mut v = MPoly::one(nvars);
    for (ia, &a) in vars.iter().enumerate() {
        for &b in &vars[ia + 1..] {
            v = v.mul(&MPoly::var_pow(nvars, a, 1).sub(&MPoly::var_pow(nvars, b, 1)));
        }
    }
    v
}

/// H_N(q,t) acting on the variable block `vars` of f:
/// Σ_i prod_{j≠i} (t x_i - x_j)/(x_i - x_j) T_{q,x_i}. The rational
/// prefactors assemble over the Vandermonde and the division is exact.
pub fn apply_macdonald_trig<S: Scalar>(
    f: &MPoly<S>,
    vars: &[usize],
    q: &S,
    t: &S,
) -> Result<MPoly<S>> {
    let nvars = f.nvars;
    let mut num = MPoly::zero(nvars);
    for (ia, &a) in vars.iter().enumerate() {
        let shifted = f.scale_var(a, q)?;
        let mut pref = MPoly::one(nvars);
        for &b in vars {
            if b != a {
                pref = pref.mul(
                    &MPoly::var_pow(nvars, a, 1)
                        .scale(t)
                        .sub(&MPoly::var_pow(nvars, b, 1)),
                );
            }
        }
        let others: Vec<usize> = vars.iter().copied().filter(|v| *v != a).collect();
        let vand_rest = vandermonde::<S>(nvars, &others);
        let sign = if ia % 2 == 0 { S::one() } else { -S::one() };
        num = num.add(&pref.mul(&vand_rest).mul(&shifted).scale(&sign));
    }
    num.div_exact(&vandermonde::<S>(nvars, vars))
}

/// Θ_p(c x_a/x_b) as a p-layered Laurent polynomial.
pub fn theta_ratio_poly<S: Scalar>(
    nvars: usize,
    a: usize,
    b: usize,
    c: &S,
    trunc: i64,
) -> Result<PPoly<S>> {
    let mut out = PPoly::zero(nvars, trunc);
    let bound = 2 * trunc.max(0) + 4;
    for n in -bound..=bound {
        let e = n * (n - 1) / 2;
        if e > trunc {
            continue;
        }
        let sign = if n % 2 == 0 { S::one() } else { -S::one() };
        let mut exps = vec![0; nvars];
        exps[a] = n;
        exps[b] = -n;
        out.add_layer(e, MPoly::monomial(nvars, exps, sign * c.powi(n)?));
    }
    Ok(out)
}

/// H_N(q,t,p) acting on the variable block: theta-ratio prefactors are
/// cleared against W = prod_{a≠b} Θ_p(x_a/x_b) and the layerwise division
/// is exact for symmetric inputs.
pub fn apply_macdonald_elliptic<S: Scalar>(
    f: &PPoly<S>,
    vars: &[usize],
    q: &S,
    t: &S,
) -> Result<PPoly<S>> {
    let nvars = f.nvars;
    let trunc = f.trunc;
    let mut w = PPoly::one(nvars, trunc);
    for &a in vars {
        for &b in vars {
            if a != b {
                w = w.mul(&theta_ratio_poly(nvars, a, b, &S::one(), trunc)?);
            }
        }
    }
    let mut num = PPoly::zero(nvars, trunc);
    for &a in vars {
        let shifted = f.map_layers(|l| l.scale_var(a, q).expect("q power"));
        let mut term = shifted;
        for &b in vars {
            if b != a {
                term = term.mul(&theta_ratio_poly(nvars, a, b, t, trunc)?);
            }
        }
        // complement of this row's denominators inside W
        for &c in vars {
            if c == a {
                continue;
            }
            for &b in vars {
                if b != c {
                    term = term.mul(&theta_ratio_poly(nvars, c, b, &S::one(), trunc)?);
                }
            }
        }
        num = num.add(&term);
    }
    num.div_exact(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;
    use crate::symmetric::partition::epsilon_n;

    fn part(v: &[i64]) -> Partition {
        Partition::new(v.to_vec())
    }
    fn qt() -> (Rat, Rat) {
        (Rat::from_ratio(1, 4), Rat::from_ratio(9, 16))
    }

    #[test]
    fn inner_product_examples() {
        let (q, t) = qt();
        // <p_1, p_1> = (1-q)/(1-t)
        let mut f = BTreeMap::new();
        f.insert(part(&[1]), Rat::from_int(1));
        let v = inner_product_qt(&f, &f, &q, &t).unwrap();
        let expect = (Rat::from_int(1) - q.clone())
            .div(&(Rat::from_int(1) - t.clone()))
            .unwrap();
        assert_eq!(v, expect);
        // <p_2, p_11> = 0
        let mut g = BTreeMap::new();
        g.insert(part(&[2]), Rat::from_int(1));
        let mut h = BTreeMap::new();
        h.insert(part(&[1, 1]), Rat::from_int(1));
        assert!(inner_product_qt(&g, &h, &q, &t).unwrap().is_zero());
        // <p_11, p_11> = 2 ((1-q)/(1-t))^2
        let v2 = inner_product_qt(&h, &h, &q, &t).unwrap();
        assert_eq!(v2, Rat::from_int(2) * expect.clone() * expect);
    }

    #[test]
    fn macdonald_small_cases() {
        let (q, t) = qt();
        // P_(1) = m_(1): unique partition of 1
        let b1 = macdonald_block(1, &q, &t, DominanceExtension::PartialSumLex).unwrap();
        let p1 = &b1.polys[&part(&[1])];
        assert_eq!(p1.len(), 1);
        // P_(1,1) = m_(1,1): dominance-minimal
        let b2 = macdonald_block(2, &q, &t, DominanceExtension::PartialSumLex).unwrap();
        let p11 = &b2.polys[&part(&[1, 1])];
        assert_eq!(p11.len(), 1);
        // P_(2) = m_(2) + c m_(1,1) with the Gram-Schmidt coefficient
        let p2 = &b2.polys[&part(&[2])];
        assert_eq!(p2[&part(&[2])], Rat::from_int(1));
        let c = p2[&part(&[1, 1])].clone();
        // oracle: c = (1+q)(1-t)/(1-q t) from orthogonality against m_(1,1)
        let expect = (Rat::from_int(1) + q.clone()) * (Rat::from_int(1) - t.clone());
        let expect = expect
            .div(&(Rat::from_int(1) - q.clone() * t.clone()))
            .unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn orthogonality_and_triangularity_to_degree_4() {
        let (q, t) = qt();
        for d in 1..=4 {
            let b = macdonald_block(d, &q, &t, DominanceExtension::PartialSumLex).unwrap();
            assert!(b.check_triangular(), "triangularity at degree {d}");
            let parts: Vec<_> = b.polys.keys().cloned().collect();
            for i in 0..parts.len() {
                for j in 0..i {
                    let pi = b.in_power_sums(&parts[i]).unwrap();
                    let pj = b.in_power_sums(&parts[j]).unwrap();
                    let ip = inner_product_qt(&pi, &pj, &q, &t).unwrap();
                    assert!(
                        ip.is_zero(),
                        "<P_{:?}, P_{:?}> = {ip} should vanish",
                        parts[i],
                        parts[j]
                    );
                }
            }
        }
    }

    #[test]
    fn extension_independence() {
        let (q, t) = qt();
        for d in 1..=4 {
            let a = macdonald_block(d, &q, &t, DominanceExtension::PartialSumLex).unwrap();
            let b = macdonald_block(d, &q, &t, DominanceExtension::LengthThenLex).unwrap();
            assert_eq!(a.polys, b.polys, "degree {d}");
        }
    }

    #[test]
    fn trig_operator_constant_and_m1() {
        let (q, t) = qt();
        // H_2 1 = (t+1) 1
        let one = MPoly::<Rat>::one(2);
        let h = apply_macdonald_trig(&one, &[0, 1], &q, &t).unwrap();
        assert_eq!(h, one.scale(&(t.clone() + Rat::from_int(1))));
        // H_2 m_(1) = (qt+1) m_(1)
        let m1 = monomial_expand::<Rat>(&part(&[1]), 2).unwrap();
        let h1 = apply_macdonald_trig(&m1, &[0, 1], &q, &t).unwrap();
        assert_eq!(h1, m1.scale(&(q.clone() * t.clone() + Rat::from_int(1))));
        // H_3 m_(1) = (q t^2 + t + 1) m_(1)
        let m1_3 = monomial_expand::<Rat>(&part(&[1]), 3).unwrap();
        let h13 = apply_macdonald_trig(&m1_3, &[0, 1, 2], &q, &t).unwrap();
        let ev = q.clone() * t.clone() * t.clone() + t.clone() + Rat::from_int(1);
        assert_eq!(h13, m1_3.scale(&ev));
    }

    #[test]
    fn eigenvalue_property_degree_le_4() {
        let (q, t) = qt();
        for n in 1..=3usize {
            for d in 0..=4i64 {
                let block = macdonald_block(d, &q, &t, DominanceExtension::PartialSumLex).unwrap();
                for lam in Partition::all_of(d) {
                    if lam.len() > n {
                        continue;
                    }
                    let poly = block.in_vars(&lam, n).unwrap();
                    if poly.is_zero() {
                        continue;
                    }
                    let vars: Vec<usize> = (0..n).collect();
                    let h = apply_macdonald_trig(&poly, &vars, &q, &t).unwrap();
                    let ev = epsilon_n(&lam, n, &q, &t).unwrap();
                    assert_eq!(h, poly.scale(&ev), "H_{n} P_{lam:?}");
                }
            }
        }
    }

    #[test]
    fn elliptic_operator_basics() {
        let (q, t) = qt();
        // H_1(q,t,p) f = f(qx), exactly (empty theta product)
        let f = PPoly::from_layer(0, MPoly::<Rat>::var_pow(1, 0, 2), 3);
        let h = apply_macdonald_elliptic(&f, &[0], &q, &t).unwrap();
        let expect = PPoly::from_layer(
            0,
            MPoly::<Rat>::var_pow(1, 0, 2).scale(&q.powi(2).unwrap()),
            3,
        );
        assert!(h.sub(&expect).is_zero());
        // p^0 slice on m_(1), N=2 agrees with the trig operator
        let m1 = monomial_expand::<Rat>(&part(&[1]), 2).unwrap();
        let h_ell =
            apply_macdonald_elliptic(&PPoly::from_layer(0, m1.clone(), 2), &[0, 1], &q, &t)
                .unwrap();
        let h_trig = apply_macdonald_trig(&m1, &[0, 1], &q, &t).unwrap();
        assert_eq!(h_ell.layer(0), h_trig);
    }
}
