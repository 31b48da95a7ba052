//! The vertex-operator catalog: the currents eta, xi, their intertwiners
//! phi, phi*, the Cartan currents phi+/phi-, the zero-mode-dressed E and F,
//! and the elliptic deformation transformer.
//!
//! Every operator is a normal-ordered exponential of boson modes; a spec
//! stores which current it is, the parameter point, and an argument
//! transform z -> scale * p^shift * z^(inv), and lowers to a concrete
//! [`NormalExp`] for a chosen formal-variable slot and mode window.

use crate::error::{Error, Result};
use crate::fock::{
    apply_normal, contraction_exp, wick_contract, BosonAlgebra, Contraction, Expo, Family,
    FockVector, NormalExp, Table,
};
use crate::scalars::{NomeSeries, ParamPoint, Scalar, EXACT_ORDER};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurrentKind {
    Eta,
    Xi,
    Phi,
    PhiStar,
    PhiPlus,
    PhiMinus,
}

/// How the current's coefficients are produced: the trigonometric catalog,
/// the elliptic catalog, or the elliptic-deformation procedure applied
/// mechanically to the trigonometric coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoeffRoute {
    Trig,
    Elliptic,
    Ellipticized,
}

#[derive(Clone)]
pub struct VertexOpSpec<S> {
    pub kind: CurrentKind,
    pub route: CoeffRoute,
    pub params: ParamPoint<S>,
    pub trunc: i64,
    /// argument transform z -> scale * p^pshift * z^(±1)
    pub scale: S,
    pub pshift: i64,
    pub inverted: bool,
    pub prefactor: NomeSeries<S>,
}

impl<S: Scalar> VertexOpSpec<S> {
    pub fn new(kind: CurrentKind, route: CoeffRoute, params: ParamPoint<S>, trunc: i64) -> Self {
        VertexOpSpec {
            kind,
            route,
            params,
            trunc,
            scale: S::one(),
            pshift: 0,
            inverted: false,
            prefactor: NomeSeries::exact(S::one()),
        }
    }

    /// z -> c z.
    pub fn scaled(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.scale = out.scale * c.clone();
        out
    }

    /// z -> p^j z.
    pub fn pshifted(&self, j: i64) -> Self {
        let mut out = self.clone();
        out.pshift += j;
        out
    }

    /// z -> 1/z (argument inversion for dual-side checks).
    pub fn arg_inverted(&self) -> Self {
        let mut out = self.clone();
        out.inverted = !out.inverted;
        out
    }

    fn geom(&self, n: i64) -> Result<NomeSeries<S>> {
        // 1/(1-p^n), truncated
        NomeSeries::from_coeffs(vec![(0, S::one()), (n, -S::one())], self.trunc).invert()
    }

    /// The trigonometric coefficient of mode m: (value, z-power), or None
    /// when the mode is absent.
    fn trig_coeff(&self, family: Family, m: i64) -> Result<Option<(S, i64)>> {
        if family == Family::B {
            return Ok(None);
        }
        let p = &self.params;
        let n = m.abs();
        let inv_m = S::from_int(m).inv()?;
        let val = match self.kind {
            CurrentKind::Eta => Some(-(S::one() - p.t.powi(m)?) * inv_m),
            CurrentKind::Xi => Some((S::one() - p.t.powi(m)?) * p.gamma.powi(n)? * inv_m),
            CurrentKind::Phi => (m < 0).then(|| {
                Ok::<S, Error>(
                    (S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * S::from_int(n).inv()?,
                )
            })
            .transpose()?,
            CurrentKind::PhiStar => (m > 0).then(|| {
                Ok::<S, Error>(
                    (S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * S::from_int(n).inv()?,
                )
            })
            .transpose()?,
            CurrentKind::PhiPlus => (m > 0).then(|| {
                Ok::<S, Error>(
                    -(S::one() - p.t.powi(m)?)
                        * (S::one() - p.gamma.powi(2 * m)?)
                        * p.gamma_half_pow(-m)?
                        * inv_m.clone(),
                )
            })
            .transpose()?,
            CurrentKind::PhiMinus => (m < 0).then(|| {
                Ok::<S, Error>(
                    -(S::one() - p.t.powi(m)?)
                        * (S::one() - p.gamma.powi(-2 * m)?)
                        * p.gamma_half_pow(m)?
                        * inv_m.clone(),
                )
            })
            .transpose()?,
        };
        // A-family modes always pair with z^{-m} except for phi*, whose
        // annihilators pair with z^{+m}
        let zpow = match self.kind {
            CurrentKind::PhiStar => m,
            _ => -m,
        };
        Ok(val.map(|v| (v, zpow)))
    }

    /// The elliptic coefficient of mode m: (nome series, z-power).
    fn elliptic_coeff(&self, family: Family, m: i64) -> Result<Option<(NomeSeries<S>, i64)>> {
        let p = &self.params;
        let n = m.abs();
        let geom = self.geom(n)?;
        let inv_m = S::from_int(m).inv()?;
        let out = match (self.kind, family) {
            (CurrentKind::Eta, Family::A) => Some((
                geom.scale(&(-(S::one() - p.t.powi(m)?) * inv_m)),
                -m,
            )),
            (CurrentKind::Eta, Family::B) => Some((
                geom.shift(n)
                    .scale(&(-(S::one() - p.t.powi(-m)?) * inv_m)),
                m,
            )),
            (CurrentKind::Xi, Family::A) => Some((
                geom.scale(&((S::one() - p.t.powi(m)?) * p.gamma.powi(n)? * inv_m)),
                -m,
            )),
            (CurrentKind::Xi, Family::B) => Some((
                geom.shift(n)
                    .scale(&((S::one() - p.t.powi(-m)?) * p.gamma.powi(-n)? * inv_m)),
                m,
            )),
            (CurrentKind::Phi, Family::A) if m < 0 => Some((
                geom.scale(
                    &((S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * S::from_int(n).inv()?),
                ),
                -m,
            )),
            (CurrentKind::Phi, Family::B) if m < 0 => Some((
                geom.shift(n).scale(
                    &((S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * p.q.powi(n)?
                        * p.t.powi(-n)?
                        * S::from_int(n).inv()?),
                ),
                m,
            )),
            (CurrentKind::PhiStar, Family::A) if m > 0 => Some((
                geom.scale(
                    &((S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * S::from_int(n).inv()?),
                ),
                m,
            )),
            (CurrentKind::PhiStar, Family::B) if m > 0 => Some((
                geom.shift(n).scale(
                    &((S::one() - p.t.powi(n)?)
                        .div(&(S::one() - p.q.powi(n)?))?
                        * p.q.powi(n)?
                        * p.t.powi(-n)?
                        * S::from_int(n).inv()?),
                ),
                -m,
            )),
            (CurrentKind::PhiPlus, Family::A) if m > 0 => Some((
                geom.scale(
                    &(-(S::one() - p.t.powi(m)?)
                        * (S::one() - p.gamma.powi(2 * m)?)
                        * p.gamma_half_pow(-m)?
                        * inv_m),
                ),
                -m,
            )),
            (CurrentKind::PhiPlus, Family::B) if m > 0 => Some((
                geom.shift(n).scale(
                    &(-(S::one() - p.t.powi(-m)?)
                        * (S::one() - p.gamma.powi(-2 * m)?)
                        * p.gamma_half_pow(m)?
                        * inv_m),
                ),
                m,
            )),
            (CurrentKind::PhiMinus, Family::A) if m < 0 => Some((
                geom.scale(
                    &(-(S::one() - p.t.powi(m)?)
                        * (S::one() - p.gamma.powi(-2 * m)?)
                        * p.gamma_half_pow(m)?
                        * inv_m),
                ),
                -m,
            )),
            (CurrentKind::PhiMinus, Family::B) if m < 0 => Some((
                geom.shift(n).scale(
                    &(-(S::one() - p.t.powi(-m)?)
                        * (S::one() - p.gamma.powi(2 * m)?)
                        * p.gamma_half_pow(-m)?
                        * inv_m),
                ),
                m,
            )),
            _ => None,
        };
        Ok(out)
    }

    /// Def-style elliptic deformation of the trigonometric coefficients:
    /// a side divided by (1-p^|n|), b side -p^|n|/(1-p^|n|) times the
    /// coefficient at the negated index.
    fn ellipticized_coeff(&self, family: Family, m: i64) -> Result<Option<(NomeSeries<S>, i64)>> {
        let n = m.abs();
        let geom = self.geom(n)?;
        match family {
            Family::A => Ok(self
                .trig_coeff(Family::A, m)?
                .map(|(v, zpow)| (geom.scale(&v), zpow))),
            Family::B => {
                // b_m pairs with z^{+m}; the coefficient function is the
                // a-side one evaluated at the negated index
                match self.trig_coeff(Family::A, -m)? {
                    Some((v, _)) => Ok(Some((geom.shift(n).scale(&(-v)), m))),
                    None => Ok(None),
                }
            }
        }
    }

    /// The (coefficient, z-power) of mode m after the argument transform.
    pub fn mode_coeff(&self, family: Family, m: i64) -> Result<Option<(NomeSeries<S>, i64)>> {
        if m == 0 {
            return Err(Error::ZeroMode);
        }
        let base = match self.route {
            CoeffRoute::Trig => self
                .trig_coeff(family, m)?
                .map(|(v, zpow)| (NomeSeries::exact(v).at_trunc(self.trunc), zpow)),
            CoeffRoute::Elliptic => self.elliptic_coeff(family, m)?,
            CoeffRoute::Ellipticized => self.ellipticized_coeff(family, m)?,
        };
        let Some((coeff, zpow)) = base else {
            return Ok(None);
        };
        // z -> scale * p^shift * z^(±1): the z^k monomial picks up
        // scale^k p^(shift k) and flips its exponent if inverted
        let coeff = coeff
            .scale(&self.scale.powi(zpow)?)
            .shift(self.pshift * zpow);
        let zpow = if self.inverted { -zpow } else { zpow };
        Ok(Some((coeff, zpow)))
    }

    /// Lower to a normal-ordered exponential on variable slot `var` of
    /// `nvars`, activating a-modes |m| <= a_window (b-modes are graded by
    /// the nome and stop at the truncation order by themselves).
    pub fn lower(&self, nvars: usize, var: usize, a_window: i64) -> Result<NormalExp<S>> {
        let mut out = NormalExp::identity(nvars);
        out.prefactor = self.prefactor.clone();
        for m in (-a_window..=a_window).filter(|m| *m != 0) {
            if let Some((c, zpow)) = self.mode_coeff(Family::A, m)? {
                out.set_mode(Family::A, m, c, Expo::unit(nvars, var, zpow));
            }
        }
        let b_window = if self.route == CoeffRoute::Trig {
            0
        } else {
            // p^|m| grading: modes beyond trunc + |pshift|*slack vanish
            self.trunc + self.pshift.abs() * self.trunc.max(1) + 1
        };
        for m in (-b_window..=b_window).filter(|m| *m != 0) {
            if let Some((c, zpow)) = self.mode_coeff(Family::B, m)? {
                out.set_mode(Family::B, m, c, Expo::unit(nvars, var, zpow));
            }
        }
        Ok(out)
    }

    /// Only the creation (minus) part.
    pub fn lower_minus(&self, nvars: usize, var: usize, a_window: i64) -> Result<NormalExp<S>> {
        let mut full = self.lower(nvars, var, a_window)?;
        full.ann.clear();
        Ok(full)
    }

    /// Only the annihilation (plus) part.
    pub fn lower_plus(&self, nvars: usize, var: usize, a_window: i64) -> Result<NormalExp<S>> {
        let mut full = self.lower(nvars, var, a_window)?;
        full.cre.clear();
        full.prefactor = NomeSeries::exact(S::one()).at_trunc(self.trunc);
        Ok(full)
    }

    pub fn algebra(&self) -> BosonAlgebra<S> {
        match self.route {
            CoeffRoute::Trig => {
                BosonAlgebra::trig(self.params.q.clone(), self.params.t.clone(), self.trunc)
            }
            _ => BosonAlgebra::elliptic(self.params.q.clone(), self.params.t.clone(), self.trunc),
        }
    }
}

/// A linear combination of normal-ordered pieces with zero-mode factors:
/// Σ coeff * (operator piece) * t^(k a_0).
#[derive(Clone)]
pub struct DressedOp<S> {
    pub terms: Vec<DressedTerm<S>>,
}

#[derive(Clone)]
pub struct DressedTerm<S> {
    pub coeff: S,
    /// power k in t^(k a_0)
    pub t_pow: i64,
    pub piece: OpPiece<S>,
}

#[derive(Clone)]
pub enum OpPiece<S> {
    Full(VertexOpSpec<S>),
    /// (X)_- (Y)_+ with X, Y given as full specs
    Split(VertexOpSpec<S>, VertexOpSpec<S>),
}

impl<S: Scalar> OpPiece<S> {
    pub fn lower(&self, nvars: usize, var: usize, a_window: i64) -> Result<NormalExp<S>> {
        match self {
            OpPiece::Full(spec) => spec.lower(nvars, var, a_window),
            OpPiece::Split(minus, plus) => Ok(minus
                .lower_minus(nvars, var, a_window)?
                .join(&plus.lower_plus(nvars, var, a_window)?)),
        }
    }
}

/// eta-tilde(p;z) = (eta(p;z))_- (eta(p;p^{-1}z))_+, and the xi analog.
pub fn tilde_piece<S: Scalar>(spec: &VertexOpSpec<S>) -> OpPiece<S> {
    OpPiece::Split(spec.clone(), spec.pshifted(-1))
}

/// The named catalog. Dressed names: "eta_tilde", "xi_tilde", "E", "F".
pub fn catalog<S: Scalar>(
    name: &str,
    elliptic: bool,
    params: &ParamPoint<S>,
    trunc: i64,
) -> Result<DressedOp<S>> {
    let route = if elliptic {
        CoeffRoute::Elliptic
    } else {
        CoeffRoute::Trig
    };
    let spec = |kind| VertexOpSpec::new(kind, route, params.clone(), trunc);
    let full = |kind| {
        Ok::<DressedOp<S>, Error>(DressedOp {
            terms: vec![DressedTerm {
                coeff: S::one(),
                t_pow: 0,
                piece: OpPiece::Full(spec(kind)),
            }],
        })
    };
    match name {
        "eta" => full(CurrentKind::Eta),
        "xi" => full(CurrentKind::Xi),
        "phi" => full(CurrentKind::Phi),
        "phi_star" => full(CurrentKind::PhiStar),
        "phi_plus" => full(CurrentKind::PhiPlus),
        "phi_minus" => full(CurrentKind::PhiMinus),
        "eta_tilde" => Ok(DressedOp {
            terms: vec![DressedTerm {
                coeff: S::one(),
                t_pow: 0,
                piece: tilde_piece(&spec(CurrentKind::Eta)),
            }],
        }),
        "xi_tilde" => Ok(DressedOp {
            terms: vec![DressedTerm {
                coeff: S::one(),
                t_pow: 0,
                piece: tilde_piece(&spec(CurrentKind::Xi)),
            }],
        }),
        "E" => Ok(DressedOp {
            terms: vec![
                DressedTerm {
                    coeff: S::one(),
                    t_pow: 0,
                    piece: OpPiece::Full(spec(CurrentKind::Eta)),
                },
                DressedTerm {
                    coeff: -S::one(),
                    t_pow: -1,
                    piece: tilde_piece(&spec(CurrentKind::Eta)),
                },
            ],
        }),
        "F" => Ok(DressedOp {
            terms: vec![
                DressedTerm {
                    coeff: S::one(),
                    t_pow: 0,
                    piece: OpPiece::Full(spec(CurrentKind::Xi)),
                },
                DressedTerm {
                    coeff: -S::one(),
                    t_pow: 1,
                    piece: tilde_piece(&spec(CurrentKind::Xi)),
                },
            ],
        }),
        other => Err(Error::UnknownOperator(other.to_string())),
    }
}

/// The elliptic deformation procedure applied to a trigonometric spec.
pub fn ellipticize<S: Scalar>(spec: &VertexOpSpec<S>, trunc: i64) -> Result<VertexOpSpec<S>> {
    if spec.route != CoeffRoute::Trig {
        return Err(Error::Degenerate(
            "elliptic deformation applies to a trigonometric spec".into(),
        ));
    }
    let mut out = spec.clone();
    out.route = CoeffRoute::Ellipticized;
    out.trunc = trunc;
    Ok(out)
}

/// The OPE scalar factor of X(z) Y(w): exp of the Wick contraction, as a
/// Laurent series in the contraction direction.
pub fn ope_scalar<S: Scalar>(
    x: &VertexOpSpec<S>,
    y: &VertexOpSpec<S>,
    window: i64,
    a_window: i64,
) -> Result<Contraction<S>> {
    let algebra = x.algebra();
    let nx = x.lower(2, 0, a_window)?;
    let ny = y.lower(2, 1, a_window)?;
    let c = wick_contract(&nx, &ny, &algebra, window)?;
    contraction_exp(&c)
}

/// The coefficient of z^{-k}: apply the spec to a vector and slice.
pub fn apply_at<S: Scalar>(
    spec: &VertexOpSpec<S>,
    k: i64,
    v: &FockVector<S>,
    a_window: i64,
) -> Result<FockVector<S>> {
    let nexp = spec.lower(1, 0, a_window)?;
    let table = apply_normal(&nexp, v, &spec.algebra())?;
    Ok(table
        .get(&Expo(vec![-k]))
        .cloned()
        .unwrap_or_else(|| FockVector::zero(v.charge, v.grade_cap)))
}

/// Apply a dressed combination at mode k: zero-mode powers act first as
/// charge-sector scalars.
pub fn dressed_apply_at<S: Scalar>(
    op: &DressedOp<S>,
    k: i64,
    v: &FockVector<S>,
    algebra: &BosonAlgebra<S>,
    a_window: i64,
) -> Result<FockVector<S>> {
    let mut out = FockVector::zero(v.charge, v.grade_cap);
    for term in &op.terms {
        let t = match &term.piece {
            OpPiece::Full(spec) => spec.params.t.clone(),
            OpPiece::Split(m, _) => m.params.t.clone(),
        };
        let w = v.zero_mode_t_pow(&t, term.t_pow)?.scale_s(&term.coeff);
        let nexp = term.piece.lower(1, 0, a_window)?;
        let table = apply_normal(&nexp, &w, algebra)?;
        if let Some(res) = table.get(&Expo(vec![-k])) {
            out = out.add(res);
        }
    }
    Ok(out)
}

/// Full table of a dressed operator applied to a vector.
pub fn dressed_table<S: Scalar>(
    op: &DressedOp<S>,
    nvars: usize,
    var: usize,
    v: &FockVector<S>,
    algebra: &BosonAlgebra<S>,
    a_window: i64,
) -> Result<Table<S>> {
    let mut out: Table<S> = Table::new();
    for term in &op.terms {
        let t = match &term.piece {
            OpPiece::Full(spec) => spec.params.t.clone(),
            OpPiece::Split(m, _) => m.params.t.clone(),
        };
        let w = v.zero_mode_t_pow(&t, term.t_pow)?.scale_s(&term.coeff);
        let nexp = term.piece.lower(nvars, var, a_window)?;
        for (e, vec) in apply_normal(&nexp, &w, algebra)? {
            let merged = match out.get(&e) {
                Some(cur) => cur.add(&vec),
                None => vec,
            };
            out.insert(e, merged);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
