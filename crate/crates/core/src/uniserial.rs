//! Uniseriality of the length category of a family: the three
//! counterexample constructions when (*) fails, the modules `M(α, n)` when
//! it holds, the rescaling isomorphisms between chains and the
//! decomposability dichotomy.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{build_chain_extension_corrected, CofilteredModule, FamilyRef};
use crate::fdmod::{end_is_local, ext1, hom_space, iso_test, Cocycle, FdModule, IsoResult, LocalReport};
use crate::field::Field;
use crate::linalg::{span, Matrix};
use crate::quiver::GabrielQuiver;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub dim: usize,
    pub socle_dim: usize,
    pub socle_simple: bool,
    pub uniserial: bool,
    pub local: LocalReport,
}

pub fn certify<F: Field>(m: &FdModule<F>) -> Result<Certificate> {
    let soc = m.socle()?;
    let (s, _) = m.submodule(&soc.columns());
    Ok(Certificate {
        dim: m.dim(),
        socle_dim: soc.cols(),
        socle_simple: s.is_simple()?,
        uniserial: m.is_uniserial()?,
        local: end_is_local(m)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indecomposable<F> {
    pub alpha: usize,
    pub n: usize,
    pub module: CofilteredModule<F>,
    pub certificate: Certificate,
    /// every restriction `Ext¹(C_{i-1}, K_i) → Ext¹(M_{α(i-1)}, K_i)` is
    /// an isomorphism
    pub restrictions_invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CeKind {
    Ce1,
    Ce2,
    Ce3,
}

impl CeKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ce1" => Some(CeKind::Ce1),
            "ce2" => Some(CeKind::Ce2),
            "ce3" => Some(CeKind::Ce3),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<F> {
    pub kind: CeKind,
    /// family indices `(S, T)` for ce1, `(U, S, T)` for ce2 and ce3
    pub members: Vec<usize>,
    pub module: CofilteredModule<F>,
    pub certificate: Certificate,
    /// submodules of length two exhibited by the construction (columns)
    pub length_two: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult<F> {
    pub quiver: GabrielQuiver,
    pub star_holds: bool,
    pub violations: Vec<usize>,
    pub indecomposables: Vec<Indecomposable<F>>,
    /// admissible couples whose chain has no realisation over the algebra
    pub obstructed: Vec<(usize, usize)>,
    pub counterexamples: Vec<Counterexample<F>>,
}

fn first_class<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<Cocycle<F>> {
    ext1(m, n)?.basis.into_iter().next().ok_or_else(|| Error::Hypotheses("no nonzero Ext¹ class between consecutive factors".into()))
}

/// `M(α, n)` on the chain `α, σ(α), …` with every `τ_i` the first basis
/// class.
pub fn chain_module<F: Field>(family: &FamilyRef<F>, order: &[usize]) -> Result<CofilteredModule<F>> {
    let psis = order.windows(2).map(|w| first_class(&family[w[0]], &family[w[1]])).collect::<Result<Vec<_>>>()?;
    build_chain_extension_corrected(family, order, &psis)
}

fn restrictions_invertible<F: Field>(x: &CofilteredModule<F>) -> Result<bool> {
    for i in 2..=x.len() {
        let m = x.pushforward_ext(i, x.factor(i))?;
        if !m.is_square() || !m.is_invertible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indecomposables up to length `max_length` when (*) holds; violations and
/// the matching counterexamples otherwise.
pub fn classify<F: Field>(family: &FamilyRef<F>, names: &[String], max_length: usize) -> Result<ClassificationResult<F>> {
    let quiver = crate::fdmod::gabriel_quiver(family, names)?;
    let star = quiver.check_star_condition();
    let mut result = ClassificationResult {
        quiver: quiver.clone(),
        star_holds: star.holds,
        violations: star.violations.clone(),
        indecomposables: Vec::new(),
        obstructed: Vec::new(),
        counterexamples: Vec::new(),
    };
    if !star.holds {
        result.counterexamples = counterexamples_for(family, &quiver)?;
        return Ok(result);
    }
    let mut couples = Vec::new();
    for n in 1..=max_length {
        for a in 0..family.len() {
            if let Some(order) = quiver.admissible_couple(a, n)? {
                couples.push((a, n, order));
            }
        }
    }
    couples.sort_by_key(|(a, n, _)| (*a, *n));
    let built: Vec<Result<Option<Indecomposable<F>>>> = couples
        .par_iter()
        .map(|(a, n, order)| match chain_module(family, order) {
            Ok(x) => {
                let certificate = certify(x.module())?;
                let restrictions_invertible = restrictions_invertible(&x)?;
                Ok(Some(Indecomposable { alpha: *a, n: *n, module: x, certificate, restrictions_invertible }))
            }
            Err(Error::Obstructed(_)) | Err(Error::RelationViolated(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    for ((a, n, _), b) in couples.iter().zip(built) {
        match b? {
            Some(ind) => result.indecomposables.push(ind),
            None => result.obstructed.push((*a, *n)),
        }
    }
    Ok(result)
}

/// One counterexample per violated pattern of the multiplicity matrix.
pub fn counterexamples_for<F: Field>(family: &FamilyRef<F>, q: &GabrielQuiver) -> Result<Vec<Counterexample<F>>> {
    let p = q.len();
    let mut out = Vec::new();
    for s in 0..p {
        for t in 0..p {
            if q.mult[s][t] >= 2 {
                out.push(counterexample(family, CeKind::Ce1, &[s, t])?);
            }
        }
    }
    for u in 0..p {
        let outs: Vec<usize> = (0..p).filter(|&v| q.mult[u][v] >= 1).collect();
        if outs.len() >= 2 {
            out.push(counterexample(family, CeKind::Ce2, &[u, outs[0], outs[1]])?);
        }
        let ins: Vec<usize> = (0..p).filter(|&v| q.mult[v][u] >= 1).collect();
        if ins.len() >= 2 {
            out.push(counterexample(family, CeKind::Ce3, &[u, ins[0], ins[1]])?);
        }
    }
    Ok(out)
}

/// The constructions behind the three failure patterns of (*).
///
/// * ce1, members `(S, T)`: `dim Ext¹(S, T) ≥ 2`; the cokernel of the
///   diagonal `T → U ⊕ V` for extensions `U`, `V` with independent classes.
/// * ce2, members `(U, S, T)`: `Ext¹(U, S) ≠ 0 ≠ Ext¹(U, T)`; the extension
///   of `U` by `S ⊕ T` with class `(ξ_1, ξ_2)`.
/// * ce3, members `(U, S, T)`: `Ext¹(S, U) ≠ 0 ≠ Ext¹(T, U)`; the extension
///   of `S ⊕ T` by `U` with class `(ξ_1, ξ_2)`.
pub fn counterexample<F: Field>(family: &FamilyRef<F>, kind: CeKind, members: &[usize]) -> Result<Counterexample<F>> {
    let want = if kind == CeKind::Ce1 { 2 } else { 3 };
    if members.len() != want || members.iter().any(|&a| a >= family.len()) {
        return Err(Error::Hypotheses(format!("{want} family members expected")));
    }
    let get = |k: usize| &family[members[k]];
    let (module, length_two) = match kind {
        CeKind::Ce1 => {
            let (s, t) = (get(0), get(1));
            let e = ext1(s, t)?;
            if e.dim < 2 {
                return Err(Error::Hypotheses(format!("dim Ext¹(S, T) = {} < 2", e.dim)));
            }
            let u = FdModule::extension(t, s, &e.basis[0])?;
            let v = FdModule::extension(t, s, &e.basis[1])?;
            let uv = u.direct_sum(&v)?;
            // T sits in the first dim T coordinates of U and of V
            let (dt, du) = (t.dim(), u.dim());
            let diag: Vec<Vec<F>> = (0..dt)
                .map(|k| {
                    let mut w = vec![F::zero(); uv.dim()];
                    w[k] = F::one();
                    w[du + k] = -F::one();
                    w
                })
                .collect();
            let (m, _) = uv.quotient(&span(&diag, uv.dim()))?;
            (m, Vec::new())
        }
        CeKind::Ce2 => {
            let (u, s, t) = (get(0), get(1), get(2));
            distinct(s, t)?;
            let x1 = nonzero_class(u, s, "Ext¹(U, S)")?;
            let x2 = nonzero_class(u, t, "Ext¹(U, T)")?;
            let st = s.direct_sum(t)?;
            let values = x1
                .values
                .iter()
                .zip(&x2.values)
                .map(|(a, b)| Matrix::vstack(&[a, b]))
                .collect();
            (FdModule::extension(&st, u, &Cocycle { values })?, Vec::new())
        }
        CeKind::Ce3 => {
            let (u, s, t) = (get(0), get(1), get(2));
            distinct(s, t)?;
            let x1 = nonzero_class(s, u, "Ext¹(S, U)")?;
            let x2 = nonzero_class(t, u, "Ext¹(T, U)")?;
            let st = s.direct_sum(t)?;
            let values: Vec<Matrix<F>> =
                x1.values.iter().zip(&x2.values).map(|(a, b)| Matrix::hstack(&[a, b])).collect();
            let m = FdModule::extension(u, &st, &Cocycle { values })?;
            // U ⊕ S and U ⊕ T coordinates
            let (du, ds, dt) = (u.dim(), s.dim(), t.dim());
            let coords = |r: std::ops::Range<usize>| -> Matrix<F> {
                let cols: Vec<usize> = (0..du).chain(r).collect();
                Matrix::identity(du + ds + dt).select_cols(&cols)
            };
            let subs = vec![coords(du..du + ds), coords(du + ds..du + ds + dt)];
            for b in &subs {
                m.restrict(b)?;
            }
            (m, subs)
        }
    };
    let certificate = certify(&module)?;
    let module = CofilteredModule::from_composition_series(family.clone(), &module)?;
    Ok(Counterexample { kind, members: members.to_vec(), module, certificate, length_two })
}

fn distinct<F: Field>(s: &FdModule<F>, t: &FdModule<F>) -> Result<()> {
    if iso_test(s, t)?.is_iso() {
        return Err(Error::Hypotheses("S and T are isomorphic".into()));
    }
    Ok(())
}

fn nonzero_class<F: Field>(m: &FdModule<F>, n: &FdModule<F>, what: &str) -> Result<Cocycle<F>> {
    let e = ext1(m, n)?;
    e.basis.into_iter().next().ok_or_else(|| Error::Hypotheses(format!("dim {what} = 0")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingIso<F> {
    /// `Y`-coordinates of the image of `X`: `φ A_X = A_Y φ`
    pub matrix: Matrix<F>,
    /// the scalars `C(i) = c_2 ⋯ c_i` with `τ'_i = c_i τ_i`, `C(1) = 1`
    pub scalars: Vec<F>,
    /// false when the diagonal candidate failed and a general isomorphism
    /// was found instead
    pub diagonal: bool,
}

/// Rescaling isomorphism between two chains on the same order vector with
/// all `τ_i` nonzero and one-dimensional `Ext¹` between consecutive factors.
pub fn scaling_iso<F: Field>(x: &CofilteredModule<F>, y: &CofilteredModule<F>) -> Result<ScalingIso<F>> {
    if x.order() != y.order() {
        return Err(Error::Invalid("different order vectors".into()));
    }
    let n = x.len();
    let mut scalars = vec![F::one()];
    for i in 2..=n {
        let (cx, cy) = (x.extract_classes(i)?, y.extract_classes(i)?);
        if cx.tau_is_zero() || cy.tau_is_zero() {
            return Err(Error::ZeroTau(i));
        }
        if cx.tau_coords.len() != 1 {
            return Err(Error::Hypotheses(format!("dim Ext¹(K_{}, K_{i}) = {} ≠ 1", i - 1, cx.tau_coords.len())));
        }
        let c = cy.tau_coords[0].clone() / cx.tau_coords[0].clone();
        let prev = scalars.last().unwrap().clone();
        scalars.push(prev * c);
    }
    let (px, py) = (adapted_basis(x)?, adapted_basis(y)?);
    let blocks: Vec<Matrix<F>> =
        (1..=n).map(|i| Matrix::scalar(x.factor(i).dim(), scalars[i - 1].clone())).collect();
    let refs: Vec<&Matrix<F>> = blocks.iter().collect();
    let d = Matrix::block_diag(&refs);
    let phi = py.mul(&d).mul(&px.inverse().expect("adapted basis"));
    if crate::fdmod::is_hom(x.module(), y.module(), &phi) {
        return Ok(ScalingIso { matrix: phi, scalars, diagonal: true });
    }
    match iso_test(x.module(), y.module())? {
        IsoResult::Isomorphic(m) => Ok(ScalingIso { matrix: m, scalars, diagonal: false }),
        IsoResult::Distinct(d) => Err(Error::Hypotheses(format!("chains are not isomorphic: {d:?}"))),
    }
}

/// Columns `ι^F_1, …, ι^F_n`: a basis of `M` in which the action is block
/// lower triangular with the family on the diagonal.
pub fn adapted_basis<F: Field>(x: &CofilteredModule<F>) -> Result<Matrix<F>> {
    let f = x.to_filtered()?;
    let cols: Vec<&Matrix<F>> = (1..=x.len()).map(|i| f.ident(i)).collect();
    if cols.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Ok(Matrix::hstack(&cols))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy<F> {
    Indecomposable { local: LocalReport },
    /// `M = A ⊕ B` with both bases given as columns
    Decomposable { vanishing: Vec<usize>, summand: Matrix<F>, complement: Matrix<F> },
}

impl<F> Dichotomy<F> {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self, Dichotomy::Indecomposable { .. })
    }
}

/// If every `ξ_i` is nonzero, certify a local endomorphism ring; otherwise
/// split `M` by Fitting's lemma applied to an endomorphism that is neither
/// nilpotent nor invertible. A disagreement between the two sides means the
/// family does not satisfy (*) and is reported as `Hypotheses`.
pub fn decomposability_dichotomy<F: Field>(x: &CofilteredModule<F>) -> Result<Dichotomy<F>> {
    let mut vanishing = Vec::new();
    for i in 2..=x.len() {
        if x.extract_classes(i)?.xi_is_zero() {
            vanishing.push(i);
        }
    }
    let m = x.module();
    let split = fitting_split(m)?;
    match (vanishing.is_empty(), split) {
        (true, None) => Ok(Dichotomy::Indecomposable { local: end_is_local(m)? }),
        (false, Some((summand, complement))) => Ok(Dichotomy::Decomposable { vanishing, summand, complement }),
        (true, Some(_)) => Err(Error::Hypotheses("all ξ_i nonzero but the module splits".into())),
        (false, None) => Err(Error::Hypotheses(format!("ξ_{} = 0 but the module is indecomposable", vanishing[0]))),
    }
}

/// `M = ker φ^d ⊕ im φ^d` for some endomorphism `φ` that is neither
/// nilpotent nor invertible, if one exists among `b − λ` with `b` an
/// endomorphism basis element and `λ` an eigenvalue of `b` in the field.
pub fn fitting_split<F: Field>(m: &FdModule<F>) -> Result<Option<(Matrix<F>, Matrix<F>)>> {
    let d = m.dim();
    if d == 0 {
        return Ok(None);
    }
    for b in hom_space(m, m)? {
        for lambda in F::roots(&minimal_polynomial(&b)) {
            let phi = b.sub(&Matrix::scalar(d, lambda));
            if phi.is_nilpotent() || phi.is_invertible() {
                continue;
            }
            let pd = phi.pow(d);
            let image = pd.column_basis();
            let kernel = pd.kernel();
            m.restrict(&image)?;
            m.restrict(&kernel)?;
            return Ok(Some((image, kernel)));
        }
    }
    Ok(None)
}

/// Ascending coefficients of the monic minimal polynomial.
pub fn minimal_polynomial<F: Field>(a: &Matrix<F>) -> Vec<F> {
    let n = a.rows();
    let mut powers: Vec<Vec<F>> = vec![Matrix::identity(n).vec()];
    let mut cur = Matrix::identity(n);
    loop {
        cur = cur.mul(a);
        let v = cur.vec();
        let basis = Matrix::from_columns(&powers, n * n);
        if let Some(c) = basis.solve(&v) {
            let mut out: Vec<F> = c.into_iter().map(|x| -x).collect();
            out.push(F::one());
            return out;
        }
        powers.push(v);
    }
}

/// Family of a single module type, shared.
pub fn family_ref<F: Field>(members: &[FdModule<F>]) -> FamilyRef<F> {
    Arc::from(members.to_vec())
}
