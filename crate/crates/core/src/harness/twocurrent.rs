//! Matrix-element machinery for relations between two currents X(z), Y(w).
//!
//! A product X(z)Y(w) factors through Wick's theorem into
//! (contraction exponential) * :XY:, so its matrix elements are an exact
//! finite table convolved with a windowed Laurent series along the z/w
//! line. Exchange relations are verified in denominator-cleared form:
//! both sides are multiplied by the entire theta (or polynomial) factors
//! of the structure function, making each side a finite convolution whose
//! coefficients are exact within a guaranteed window. Delta-supported
//! commutators subtract the two orders, each expanded in its own annulus,
//! and compare against the delta pattern times a Cartan-current table.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{
    apply_normal, contraction_exp, wick_contract, BosonAlgebra, Expo, FockVector, NormalExp,
    Table,
};
use crate::scalars::{Laurent, NomeSeries, Scalar};
use crate::symmetric::Partition;
use crate::vertex::{DressedOp, OpPiece};

/// One Wick-factored term of a product of (possibly dressed) currents.
pub struct ProductPiece<S> {
    pub coeff: S,
    pub t_pow: i64,
    /// None: the contraction vanishes and the product is exactly normal
    /// ordered.
    pub factor: Option<crate::fock::Contraction<S>>,
    pub normal: NormalExp<S>,
}

/// Matrix-element table of a product applied to one ket, with the window
/// of line coordinates (z-exponent along the z/w direction) on which the
/// entries are guaranteed exact.
pub struct MeTable<S> {
    pub entries: Table<S>,
    pub dlo: i64,
    pub dhi: i64,
}

/// Line coordinate of a (z,w) exponent pair along the z/w direction.
fn line_coord(e: &Expo) -> i64 {
    e.0[0]
}

/// Build the Wick pieces of X(z) Y(w) for dressed operators (slot 0 = z,
/// slot 1 = w).
pub fn product_pieces<S: Scalar>(
    x: &DressedOp<S>,
    y: &DressedOp<S>,
    algebra: &BosonAlgebra<S>,
    a_window: i64,
    f_window: i64,
) -> Result<Vec<ProductPiece<S>>> {
    let mut out = Vec::new();
    for tx in &x.terms {
        for ty in &y.terms {
            let nx = tx.piece.lower(2, 0, a_window)?;
            let ny = ty.piece.lower(2, 1, a_window)?;
            let raw = wick_contract(&nx, &ny, algebra, f_window)?;
            let factor = if raw.series.is_zero() {
                None
            } else {
                Some(contraction_exp(&raw)?)
            };
            out.push(ProductPiece {
                coeff: tx.coeff.clone() * ty.coeff.clone(),
                t_pow: tx.t_pow + ty.t_pow,
                factor,
                normal: nx.join(&ny),
            });
        }
    }
    Ok(out)
}

/// Matrix-element table of the summed pieces on one ket. Zero-mode powers
/// act as charge-sector scalars (the boson pieces never change charge).
pub fn me_table<S: Scalar>(
    pieces: &[ProductPiece<S>],
    ket: &FockVector<S>,
    algebra: &BosonAlgebra<S>,
    t: &S,
) -> Result<MeTable<S>> {
    let mut entries: Table<S> = BTreeMap::new();
    let mut dlo = i64::MIN / 4;
    let mut dhi = i64::MAX / 4;
    for piece in pieces {
        let v = ket
            .zero_mode_t_pow(t, piece.t_pow)?
            .scale_s(&piece.coeff);
        let base = apply_normal(&piece.normal, &v, algebra)?;
        match &piece.factor {
            None => {
                for (e, vec) in base {
                    merge(&mut entries, e, vec);
                }
            }
            Some(f) => {
                // the factor direction is ±(1,-1); express its window in
                // the z-line coordinate
                let i0 = f
                    .dir
                    .0
                    .iter()
                    .position(|k| *k != 0)
                    .expect("nonzero direction");
                assert!(f.dir.0[i0].abs() == 1, "primitive direction");
                let sign_z = f.dir.0[0];
                let (flo, fhi) = f.window();
                let (wlo, whi) = if sign_z >= 0 {
                    (flo, fhi)
                } else {
                    (-fhi, -flo)
                };
                // guaranteed line window shrinks by the base support
                let mut smin = i64::MAX;
                let mut smax = i64::MIN;
                for e in base.keys() {
                    smin = smin.min(line_coord(e));
                    smax = smax.max(line_coord(e));
                }
                if smin > smax {
                    continue;
                }
                dlo = dlo.max(wlo + smax);
                dhi = dhi.min(whi + smin);
                for (k, c) in f.series.coeffs() {
                    let shift = f.dir.scaled(*k);
                    for (e, vec) in &base {
                        merge(&mut entries, e.add(&shift), vec.scale(c));
                    }
                }
            }
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(MeTable { entries, dlo, dhi })
}

fn merge<S: Scalar>(table: &mut Table<S>, e: Expo, v: FockVector<S>) {
    match table.remove(&e) {
        Some(cur) => {
            let sum = cur.add(&v);
            if !sum.is_zero() {
                table.insert(e, sum);
            }
        }
        None => {
            if !v.is_zero() {
                table.insert(e, v);
            }
        }
    }
}

impl<S: Scalar> MeTable<S> {
    /// Multiply by an exact Laurent polynomial in y = z/w.
    pub fn mul_line_poly(&self, poly: &Laurent<S>) -> MeTable<S> {
        let mut entries: Table<S> = BTreeMap::new();
        let (slo, shi) = poly.support().unwrap_or((0, 0));
        for (k, c) in poly.coeffs() {
            let shift = Expo(vec![*k, -*k]);
            for (e, v) in &self.entries {
                merge(&mut entries, e.add(&shift), v.scale(c));
            }
        }
        entries.retain(|_, v| !v.is_zero());
        MeTable {
            entries,
            dlo: self.dlo.saturating_add(shi),
            dhi: self.dhi.saturating_add(slo),
        }
    }

    /// Max |coefficient| of (self - other) over the shared guaranteed
    /// window intersected with the comparison box |zexp|,|wexp| <= m_box,
    /// after truncating at the target nome order.
    pub fn residual(&self, other: &MeTable<S>, m_box: i64, p_target: i64) -> f64 {
        let lo = self.dlo.max(other.dlo);
        let hi = self.dhi.min(other.dhi);
        let mut keys: Vec<&Expo> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut res: f64 = 0.0;
        for e in keys {
            let k = line_coord(e);
            if k < lo || k > hi || e.0[0].abs() > m_box || e.0[1].abs() > m_box {
                continue;
            }
            let a = self.entries.get(e);
            let b = other.entries.get(e);
            let diff = match (a, b) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.scale_s(&-S::one()),
                (None, None) => continue,
            }
            .at_trunc(p_target);
            for c in diff.terms.values() {
                res = res.max(c.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max));
            }
        }
        res
    }

    /// The window is wide enough to cover the comparison box.
    pub fn covers_box(&self, m_box: i64) -> bool {
        self.dlo <= -m_box && self.dhi >= m_box
    }
}

/// The delta-supported table c_pow-scaled: delta(c w/z) * (operator table
/// in w), materialized for line coordinates |k| <= kmax (exact there).
pub fn delta_table<S: Scalar>(
    c: &S,
    op_table_w: &Table<S>,
    pref: &NomeSeries<S>,
    kmax: i64,
) -> Result<MeTable<S>> {
    let mut entries: Table<S> = BTreeMap::new();
    for k in -kmax..=kmax {
        let ck = c.powi(k)?;
        for (e, v) in op_table_w {
            // e is a 1-var exponent in w; delta contributes z^{-k} w^{k}
            let key = Expo(vec![-k, k + e.0[0]]);
            merge(&mut entries, key, v.scale(&pref.scale(&ck)));
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(MeTable {
        entries,
        dlo: -kmax,
        dhi: kmax,
    })
}

/// Apply a dressed operator's w-slot table to a ket (single variable).
pub fn single_table<S: Scalar>(
    op: &DressedOp<S>,
    ket: &FockVector<S>,
    algebra: &BosonAlgebra<S>,
    t: &S,
    a_window: i64,
) -> Result<Table<S>> {
    let mut out: Table<S> = BTreeMap::new();
    for term in &op.terms {
        let v = ket.zero_mode_t_pow(t, term.t_pow)?.scale_s(&term.coeff);
        let nexp = match &term.piece {
            OpPiece::Full(spec) => spec.lower(1, 0, a_window)?,
            OpPiece::Split(minus, plus) => minus
                .lower_minus(1, 0, a_window)?
                .join(&plus.lower_plus(1, 0, a_window)?),
        };
        for (e, vec) in apply_normal(&nexp, &v, algebra)? {
            merge(&mut out, e, vec);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// All Fock basis kets with |lambda| + |mu| <= grade (b side only when the
/// algebra is elliptic), in one charge sector.
pub fn basis_kets<S: Scalar>(
    algebra: &BosonAlgebra<S>,
    grade: i64,
    charge: i64,
    trunc: i64,
) -> Vec<FockVector<S>> {
    let mut out = Vec::new();
    for lam in Partition::all_up_to(grade) {
        let rest = grade - lam.size();
        let mus = if algebra.is_elliptic() {
            Partition::all_up_to(rest)
        } else {
            vec![Partition::empty()]
        };
        for mu in mus {
            let mut v = FockVector::zero(charge, grade);
            v.add_term(lam.clone(), mu.clone(), NomeSeries::one(trunc));
            out.push(v);
        }
    }
    out
}

/// Denominator-cleared exchange check over all basis kets:
/// lhs_mult * X(z)Y(w) == rhs_mult * Y(w)X(z). Returns the max residual.
#[allow(clippy::too_many_arguments)]
pub fn check_exchange<S: Scalar>(
    x: &DressedOp<S>,
    y: &DressedOp<S>,
    lhs_mult: &Laurent<S>,
    rhs_mult: &Laurent<S>,
    algebra: &BosonAlgebra<S>,
    t: &S,
    cfg: &ExchangeConfig,
) -> Result<f64> {
    let xy = product_pieces(x, y, algebra, cfg.a_window, cfg.f_window)?;
    // the reversed product swaps the variable slots
    let yx = product_pieces_rev(y, x, algebra, cfg.a_window, cfg.f_window)?;
    let mut res: f64 = 0.0;
    for ket in basis_kets(algebra, cfg.grade, cfg.charge, cfg.trunc) {
        let lhs = me_table(&xy, &ket, algebra, t)?.mul_line_poly(lhs_mult);
        let rhs = me_table(&yx, &ket, algebra, t)?.mul_line_poly(rhs_mult);
        if !lhs.covers_box(cfg.m_box) || !rhs.covers_box(cfg.m_box) {
            return Err(Error::Divergent(format!(
                "windows [{},{}] and [{},{}] do not cover the comparison box {}",
                lhs.dlo, lhs.dhi, rhs.dlo, rhs.dhi, cfg.m_box
            )));
        }
        res = res.max(lhs.residual(&rhs, cfg.m_box, cfg.p_target));
    }
    Ok(res)
}

/// Y(w) X(z): same slot convention (z stays slot 0), operators reversed.
pub fn product_pieces_rev<S: Scalar>(
    y: &DressedOp<S>,
    x: &DressedOp<S>,
    algebra: &BosonAlgebra<S>,
    a_window: i64,
    f_window: i64,
) -> Result<Vec<ProductPiece<S>>> {
    let mut out = Vec::new();
    for ty in &y.terms {
        for tx in &x.terms {
            let ny = ty.piece.lower(2, 1, a_window)?;
            let nx = tx.piece.lower(2, 0, a_window)?;
            let raw = wick_contract(&ny, &nx, algebra, f_window)?;
            let factor = if raw.series.is_zero() {
                None
            } else {
                Some(contraction_exp(&raw)?)
            };
            out.push(ProductPiece {
                coeff: ty.coeff.clone() * tx.coeff.clone(),
                t_pow: ty.t_pow + tx.t_pow,
                factor,
                normal: ny.join(&nx),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct ExchangeConfig {
    pub grade: i64,
    pub charge: i64,
    pub trunc: i64,
    pub p_target: i64,
    pub m_box: i64,
    pub a_window: i64,
    pub f_window: i64,
}
