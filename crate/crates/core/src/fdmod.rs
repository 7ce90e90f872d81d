//! Finite dimensional modules over finitely presented algebras.
//!
//! A module stores one action matrix per generator. A word `[g1, …, gk]`
//! acts as `A_{g1} ⋯ A_{gk}`, so the rightmost letter acts first.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{coords, in_span, intersect, quotient_space, span, Matrix, Quotient};
use crate::poly::{eval_word, CommPoly, NcPoly};
use crate::presentation::Presentation;
use crate::quiver::GabrielQuiver;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdModule<F> {
    pres: Arc<Presentation<F>>,
    dim: usize,
    action: Vec<Matrix<F>>,
}

/// A 1-cochain `ψ`: one matrix `ψ(g) ∈ Hom_k(M, N)` per generator, extended
/// to words by `ψ(ab) = a_N ψ(b) + ψ(a) b_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle<F> {
    pub values: Vec<Matrix<F>>,
}

pub fn same_presentation<F: Field>(a: &FdModule<F>, b: &FdModule<F>) -> bool {
    Arc::ptr_eq(&a.pres, &b.pres) || a.pres == b.pres
}

fn check_same<F: Field>(a: &FdModule<F>, b: &FdModule<F>) -> Result<()> {
    if same_presentation(a, b) { Ok(()) } else { Err(Error::PresentationMismatch) }
}

impl<F: Field> FdModule<F> {
    /// Checks shapes and that every relation acts as zero.
    pub fn new(pres: Arc<Presentation<F>>, action: Vec<Matrix<F>>) -> Result<Self> {
        let m = Self::new_unchecked(pres, action)?;
        if let Some(i) = m.violated_relation() {
            return Err(Error::RelationViolated(m.pres.relations[i].render(&m.pres.generators)));
        }
        Ok(m)
    }

    /// Checks shapes only.
    pub fn new_unchecked(pres: Arc<Presentation<F>>, action: Vec<Matrix<F>>) -> Result<Self> {
        if action.len() != pres.num_generators() {
            return Err(Error::Shape(format!("{} matrices for {} generators", action.len(), pres.num_generators())));
        }
        let dim = action.first().map_or(0, |a| a.rows());
        if action.iter().any(|a| a.shape() != (dim, dim)) {
            return Err(Error::Shape("action matrices must be square of one size".into()));
        }
        Ok(FdModule { pres, dim, action })
    }

    pub fn zero(pres: Arc<Presentation<F>>) -> Self {
        let action = vec![Matrix::zeros(0, 0); pres.num_generators()];
        FdModule { pres, dim: 0, action }
    }

    pub fn violated_relation(&self) -> Option<usize> {
        self.pres.relations.iter().position(|r| !r.eval(&self.action, self.dim).is_zero())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn presentation(&self) -> &Arc<Presentation<F>> {
        &self.pres
    }

    pub fn action(&self) -> &[Matrix<F>] {
        &self.action
    }

    pub fn act(&self, p: &NcPoly<F>) -> Matrix<F> {
        p.eval(&self.action, self.dim)
    }

    /// `P^{-1} A P` for every generator.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self> {
        let inv = p.inverse().ok_or_else(|| Error::Invalid("change of basis is singular".into()))?;
        let action = self.action.iter().map(|a| inv.mul(a).mul(p)).collect();
        Ok(FdModule { pres: self.pres.clone(), dim: self.dim, action })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let action = self.action.iter().zip(&other.action).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        Ok(FdModule { pres: self.pres.clone(), dim: self.dim + other.dim, action })
    }

    pub fn direct_sum_all(parts: &[Self]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    /// Smallest submodule containing the vectors; returns it together with
    /// its basis (columns, in the coordinates of `self`).
    pub fn submodule(&self, vectors: &[Vec<F>]) -> (Self, Matrix<F>) {
        let mut basis = span(vectors, self.dim);
        loop {
            let mut vs = basis.columns();
            for a in &self.action {
                vs.extend(a.mul(&basis).columns());
            }
            let next = span(&vs, self.dim);
            if next.cols() == basis.cols() {
                break;
            }
            basis = next;
        }
        let m = self.restrict(&basis).expect("closure is stable");
        (m, basis)
    }

    /// Submodule with the given basis; fails if the span is not stable.
    pub fn restrict(&self, basis: &Matrix<F>) -> Result<Self> {
        let mut action = Vec::with_capacity(self.action.len());
        for (g, a) in self.action.iter().enumerate() {
            let img = a.mul(basis);
            let x = if basis.cols() == 0 {
                if img.is_zero() { Some(Matrix::zeros(0, 0)) } else { None }
            } else {
                basis.solve_matrix(&img)
            };
            match x {
                Some(x) => action.push(x),
                None => return Err(Error::NotStable(format!("generator {}", self.pres.generators[g]))),
            }
        }
        Ok(FdModule { pres: self.pres.clone(), dim: basis.cols(), action })
    }

    /// `M / W` for a stable subspace `W` (columns of `sub`).
    pub fn quotient(&self, sub: &Matrix<F>) -> Result<(Self, Quotient<F>)> {
        for (g, a) in self.action.iter().enumerate() {
            for c in a.mul(sub).columns() {
                if !in_span(sub, &c) {
                    return Err(Error::NotStable(format!("generator {}", self.pres.generators[g])));
                }
            }
        }
        let q = quotient_space(sub);
        let action = self.action.iter().map(|a| q.projection.mul(a).mul(&q.section)).collect();
        Ok((FdModule { pres: self.pres.clone(), dim: q.section.cols(), action }, q))
    }

    /// `E = N ⊕ M` with action `[[a_N, ψ(a)], [0, a_M]]`: `N` is the
    /// submodule, `M` the quotient.
    pub fn extension(n: &Self, m: &Self, psi: &Cocycle<F>) -> Result<Self> {
        check_same(n, m)?;
        let d = n.dim + m.dim;
        let action = (0..n.action.len())
            .map(|g| {
                let mut a = Matrix::zeros(d, d);
                a.set_block(0, 0, &n.action[g]);
                a.set_block(0, n.dim, &psi.values[g]);
                a.set_block(n.dim, n.dim, &m.action[g]);
                a
            })
            .collect();
        Self::new(n.pres.clone(), action)
    }

    fn radical_matrices(&self) -> Result<Vec<Matrix<F>>> {
        let rad = self.pres.radical.as_ref().ok_or_else(|| Error::NoRadical(self.pres.name.clone()))?;
        Ok(rad.iter().map(|r| self.act(r)).collect())
    }

    /// Basis of `{m : r m = 0 for all radical generators r}`.
    pub fn socle(&self) -> Result<Matrix<F>> {
        let mats = self.radical_matrices()?;
        if mats.is_empty() || self.dim == 0 {
            return Ok(Matrix::identity(self.dim));
        }
        let refs: Vec<&Matrix<F>> = mats.iter().collect();
        Ok(Matrix::vstack(&refs).kernel())
    }

    /// `rad M = Σ r M`, as a column basis.
    pub fn radical_submodule(&self) -> Result<Matrix<F>> {
        let mats = self.radical_matrices()?;
        let mut vs = Vec::new();
        for r in &mats {
            vs.extend(r.columns());
        }
        let (_, b) = self.submodule(&vs);
        Ok(b)
    }

    pub fn is_semisimple(&self) -> Result<bool> {
        Ok(self.socle()?.cols() == self.dim)
    }

    /// Semisimple with `End = k`. Over a split field this is simplicity.
    pub fn is_simple(&self) -> Result<bool> {
        Ok(self.dim > 0 && self.is_semisimple()? && hom_space(self, self)?.len() == 1)
    }

    /// `M = 0`, or `soc M` simple and `M / soc M` uniserial.
    pub fn is_uniserial(&self) -> Result<bool> {
        if self.dim == 0 {
            return Ok(true);
        }
        let soc = self.socle()?;
        let s = self.restrict(&soc)?;
        if !s.is_simple()? {
            return Ok(false);
        }
        let (q, _) = self.quotient(&soc)?;
        q.is_uniserial()
    }

    /// Dimensions of the socle series layers, bottom first.
    pub fn socle_layers(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while cur.dim > 0 {
            let soc = cur.socle()?;
            out.push(soc.cols());
            cur = cur.quotient(&soc)?.0;
        }
        Ok(out)
    }
}

impl<F: Field> Cocycle<F> {
    pub fn zero(m: &FdModule<F>, n: &FdModule<F>) -> Self {
        Cocycle { values: vec![Matrix::zeros(n.dim, m.dim); m.action.len()] }
    }

    /// The coboundary `g ↦ a_N φ − φ a_M`.
    pub fn inner(m: &FdModule<F>, n: &FdModule<F>, phi: &Matrix<F>) -> Self {
        Cocycle { values: (0..m.action.len()).map(|g| n.action[g].mul(phi).sub(&phi.mul(&m.action[g]))).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Cocycle { values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Cocycle { values: self.values.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// `φ ∘ ψ` for a module map `φ: N → N'`.
    pub fn compose_left(&self, phi: &Matrix<F>) -> Self {
        Cocycle { values: self.values.iter().map(|v| phi.mul(v)).collect() }
    }

    /// `ψ ∘ φ` for a module map `φ: M' → M`.
    pub fn compose_right(&self, phi: &Matrix<F>) -> Self {
        Cocycle { values: self.values.iter().map(|v| v.mul(phi)).collect() }
    }

    /// Leibniz extension to a word.
    pub fn on_word(&self, word: &[usize], m: &FdModule<F>, n: &FdModule<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(n.dim, m.dim);
        for h in 0..word.len() {
            let l = eval_word(&word[..h], &n.action, n.dim);
            let r = eval_word(&word[h + 1..], &m.action, m.dim);
            out = out.add(&l.mul(&self.values[word[h]]).mul(&r));
        }
        out
    }

    pub fn on_poly(&self, p: &NcPoly<F>, m: &FdModule<F>, n: &FdModule<F>) -> Matrix<F> {
        let mut out = Matrix::zeros(n.dim, m.dim);
        for (w, c) in p.terms() {
            out.add_scaled(c, &self.on_word(w, m, n));
        }
        out
    }

    pub fn is_cocycle(&self, m: &FdModule<F>, n: &FdModule<F>) -> bool {
        m.pres.relations.iter().all(|r| self.on_poly(r, m, n).is_zero())
    }

    pub(crate) fn to_vec(&self) -> Vec<F> {
        self.values.iter().flat_map(|v| v.vec()).collect()
    }

    pub(crate) fn from_vec(v: &[F], m: &FdModule<F>, n: &FdModule<F>) -> Self {
        let sz = n.dim * m.dim;
        Cocycle { values: (0..m.action.len()).map(|g| Matrix::from_vec(n.dim, m.dim, v[g * sz..(g + 1) * sz].to_vec())).collect() }
    }
}

/// `δ: Hom_k(M, N) → ⊕_g Hom_k(M, N)`, `φ ↦ (a_N φ − φ a_M)_g`, on
/// row-major vectorisations.
fn coboundary_matrix<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Matrix<F> {
    let (dm, dn) = (m.dim, n.dim);
    let blocks: Vec<Matrix<F>> = (0..m.action.len())
        .map(|g| {
            n.action[g].kron(&Matrix::identity(dm)).sub(&Matrix::identity(dn).kron(&m.action[g].transpose()))
        })
        .collect();
    let refs: Vec<&Matrix<F>> = blocks.iter().collect();
    if refs.is_empty() {
        return Matrix::zeros(0, dn * dm);
    }
    Matrix::vstack(&refs)
}

/// Linear map sending a cochain to the values of its Leibniz extension on
/// every relation.
pub(crate) fn cocycle_matrix<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Matrix<F> {
    let (dm, dn) = (m.dim, n.dim);
    let sz = dm * dn;
    let ng = m.action.len();
    let rels = &m.pres.relations;
    let mut z: Matrix<F> = Matrix::zeros(rels.len() * sz, ng * sz);
    for (ri, r) in rels.iter().enumerate() {
        for (w, c) in r.terms() {
            for h in 0..w.len() {
                let l = eval_word(&w[..h], &n.action, dn);
                let rt = eval_word(&w[h + 1..], &m.action, dm);
                let block = l.kron(&rt.transpose()).scale(c);
                for i in 0..sz {
                    for j in 0..sz {
                        let b = &block[(i, j)];
                        if !b.is_zero() {
                            let cur = z[(ri * sz + i, w[h] * sz + j)].clone();
                            z[(ri * sz + i, w[h] * sz + j)] = cur + b.clone();
                        }
                    }
                }
            }
        }
    }
    z
}

/// Basis of `Hom_R(M, N)` as `dim N × dim M` matrices.
pub fn hom_space<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<Vec<Matrix<F>>> {
    check_same(m, n)?;
    if m.dim == 0 || n.dim == 0 {
        return Ok(Vec::new());
    }
    let d = coboundary_matrix(m, n);
    Ok(d.nullspace().into_iter().map(|v| Matrix::from_vec(n.dim, m.dim, v)).collect())
}

pub fn is_hom<F: Field>(m: &FdModule<F>, n: &FdModule<F>, phi: &Matrix<F>) -> bool {
    phi.shape() == (n.dim, m.dim) && (0..m.action.len()).all(|g| n.action[g].mul(phi) == phi.mul(&m.action[g]))
}

/// `Ext¹_R(M, N)`: classes of extensions `0 → N → E → M → 0`.
#[derive(Clone, Debug)]
pub struct Ext1<F> {
    pub dim: usize,
    pub basis: Vec<Cocycle<F>>,
    /// columns: coboundaries, then the basis representatives
    frame: Matrix<F>,
    boundary_rank: usize,
    m: FdModule<F>,
    n: FdModule<F>,
}

impl<F: Field> Ext1<F> {
    /// Coordinates of the class of `psi` in the basis; errors if `psi` is
    /// not a cocycle.
    pub fn class_of(&self, psi: &Cocycle<F>) -> Result<Vec<F>> {
        if !psi.is_cocycle(&self.m, &self.n) {
            return Err(Error::Invalid("not a cocycle".into()));
        }
        let v = psi.to_vec();
        let x = coords(&self.frame, &v).ok_or_else(|| Error::Invalid("cocycle outside the computed space".into()))?;
        Ok(x[self.boundary_rank..].to_vec())
    }

    pub fn is_trivial(&self, psi: &Cocycle<F>) -> Result<bool> {
        Ok(self.class_of(psi)?.iter().all(|x| x.is_zero()))
    }

    /// Cocycle with the given coordinates.
    pub fn cocycle(&self, coords: &[F]) -> Cocycle<F> {
        let mut out = Cocycle::zero(&self.m, &self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            out = out.add(&b.scale(c));
        }
        out
    }
}

pub fn ext1<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<Ext1<F>> {
    check_same(m, n)?;
    let sz = m.dim * n.dim;
    let ng = m.action.len();
    let total = sz * ng;
    let boundary = if sz == 0 { Matrix::zeros(total, 0) } else { coboundary_matrix(m, n).column_basis() };
    let cocycles = if total == 0 { Vec::new() } else { cocycle_matrix(m, n).nullspace() };
    let r = boundary.cols();
    let mut frame = boundary;
    let mut basis = Vec::new();
    for v in cocycles {
        if !in_span(&frame, &v) {
            frame = Matrix::hstack(&[&frame, &Matrix::from_columns(&[v.clone()], total)]);
            basis.push(Cocycle::from_vec(&v, m, n));
        }
    }
    Ok(Ext1 { dim: basis.len(), basis, frame, boundary_rank: r, m: m.clone(), n: n.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    pub local: bool,
    pub end_dim: usize,
    pub top_dim: usize,
}

/// Locality of `End(M)` via the radical of the trace form.
///
/// The radical of `(x, y) ↦ tr(xy)` is an ideal whose elements have
/// `tr(x^k) = 0` for all `k ≥ 1`; that forces nilpotency when the
/// characteristic is 0 or exceeds `dim M`, so it is the Jacobson radical.
/// `local` is `dim End / rad = 1`, which is locality over a split field.
pub fn end_is_local<F: Field>(m: &FdModule<F>) -> Result<LocalReport> {
    let ch = F::characteristic();
    if ch != 0 && ch as usize <= m.dim {
        return Err(Error::Characteristic { char: ch, dim: m.dim });
    }
    let e = hom_space(m, m)?;
    let d = e.len();
    let gram = Matrix::from_fn(d, d, |i, j| e[i].mul(&e[j]).trace());
    let top = gram.rank();
    Ok(LocalReport { local: top == 1, end_dim: d, top_dim: top })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinct {
    Dimension { left: usize, right: usize },
    /// `dim Hom(M, N)`, `dim End(M)`, `dim End(N)` not all equal
    HomDimension { hom: usize, end_left: usize, end_right: usize },
    /// every element of `Hom(M, N)` is singular
    Singular { method: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoResult<F> {
    Isomorphic(Matrix<F>),
    Distinct(Distinct),
}

impl<F> IsoResult<F> {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

fn combination<F: Field>(basis: &[Matrix<F>], c: &[F]) -> Matrix<F> {
    let mut out = Matrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, x) in basis.iter().zip(c) {
        if !x.is_zero() {
            out.add_scaled(x, b);
        }
    }
    out
}

/// All `a ∈ N^d` with `|a| ≤ bound`, by increasing `|a|`.
fn simplex_points(d: usize, bound: usize) -> impl Iterator<Item = Vec<usize>> {
    fn rec(d: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d - 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=total).rev() {
            cur.push(k);
            rec(d, total - k, cur, out);
            cur.pop();
        }
    }
    (0..=bound).flat_map(move |t| {
        let mut out = Vec::new();
        rec(d, t, &mut Vec::new(), &mut out);
        out
    })
}

/// `det(Σ_k c_k B_k)` as a polynomial in the `c_k`.
pub fn symbolic_det<F: Field>(basis: &[Matrix<F>]) -> CommPoly<F> {
    let d = basis.len();
    let n = basis[0].rows();
    let entry = |i: usize, j: usize| {
        let mut p = CommPoly::zero(d);
        for (k, b) in basis.iter().enumerate() {
            let mut e = vec![0; d];
            e[k] = 1;
            p.add_term(e, b[(i, j)].clone());
        }
        p
    };
    // expansion over column subsets, rows taken in order
    let mut memo: HashMap<u64, CommPoly<F>> = HashMap::new();
    memo.insert(0, CommPoly::constant(d, F::one()));
    for mask in 0u64..(1u64 << n) {
        let Some(val) = memo.get(&mask).cloned() else { continue };
        if val.is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let e = entry(row, j);
            if e.is_zero() {
                continue;
            }
            let inversions = (mask >> (j + 1)).count_ones();
            let mut term = val.mul(&e);
            if inversions % 2 == 1 {
                term = term.scale(&-F::one());
            }
            let next = mask | (1 << j);
            let acc = memo.remove(&next).unwrap_or_else(|| CommPoly::zero(d));
            memo.insert(next, acc.add(&term));
        }
    }
    memo.remove(&((1u64 << n) - 1)).unwrap_or_else(|| CommPoly::zero(d))
}

/// Largest `p^d` enumerated exhaustively over a small prime field.
const EXHAUSTIVE_LIMIT: u64 = 1 << 18;

/// Search `Hom(M, N)` for an isomorphism.
///
/// In characteristic 0 or above `dim M`, `det(Σ c_k h_k)` has degree at
/// most `dim M`, and the points `{a ∈ N^d : |a| ≤ dim M}` are unisolvent
/// for that degree, so vanishing on all of them proves the determinant is
/// identically zero. Over `F_p` with `p ≤ dim M` the field elements are
/// enumerated when feasible, otherwise a symbolic determinant decides.
pub fn iso_test<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<IsoResult<F>> {
    check_same(m, n)?;
    if m.dim != n.dim {
        return Ok(IsoResult::Distinct(Distinct::Dimension { left: m.dim, right: n.dim }));
    }
    if m.dim == 0 {
        return Ok(IsoResult::Isomorphic(Matrix::zeros(0, 0)));
    }
    let h = hom_space(m, n)?;
    let (em, en) = (hom_space(m, m)?.len(), hom_space(n, n)?.len());
    if h.len() != em || h.len() != en {
        return Ok(IsoResult::Distinct(Distinct::HomDimension { hom: h.len(), end_left: em, end_right: en }));
    }
    let d = h.len();
    let dim = m.dim;
    let ch = F::characteristic();
    if ch == 0 || ch as usize > dim {
        for a in simplex_points(d, dim) {
            let c: Vec<F> = a.iter().map(|&x| F::from_i64(x as i64)).collect();
            let phi = combination(&h, &c);
            if !phi.det().is_zero() {
                return Ok(IsoResult::Isomorphic(phi));
            }
        }
        return Ok(IsoResult::Distinct(Distinct::Singular { method: "simplex sweep" }));
    }
    let elems = F::elements().expect("positive characteristic fields are finite here");
    let q = elems.len() as u64;
    let exhaustive = |h: &[Matrix<F>]| -> Option<Matrix<F>> {
        let mut idx = vec![0usize; d];
        loop {
            let c: Vec<F> = idx.iter().map(|&i| elems[i].clone()).collect();
            let phi = combination(h, &c);
            if !phi.det().is_zero() {
                return Some(phi);
            }
            let mut k = 0;
            loop {
                if k == d {
                    return None;
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    };
    if q.checked_pow(d as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
        return Ok(match exhaustive(&h) {
            Some(phi) => IsoResult::Isomorphic(phi),
            None => IsoResult::Distinct(Distinct::Singular { method: "exhaustive" }),
        });
    }
    // deterministic pseudo-random probes before the symbolic determinant
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..4096 {
        let c: Vec<F> = (0..d)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                elems[((state >> 33) % q) as usize].clone()
            })
            .collect();
        let phi = combination(&h, &c);
        if !phi.det().is_zero() {
            return Ok(IsoResult::Isomorphic(phi));
        }
    }
    if symbolic_det(&h).is_zero() {
        return Ok(IsoResult::Distinct(Distinct::Singular { method: "symbolic determinant" }));
    }
    Ok(match exhaustive(&h) {
        Some(phi) => IsoResult::Isomorphic(phi),
        None => IsoResult::Distinct(Distinct::Singular { method: "exhaustive" }),
    })
}

/// Orthogonality of a family: `End = k` for each member and `Hom = 0`
/// between distinct members. Returns the first failing pair.
pub fn orthogonality_witness<F: Field>(family: &[FdModule<F>]) -> Result<Option<(usize, usize)>> {
    for (a, ma) in family.iter().enumerate() {
        for (b, mb) in family.iter().enumerate() {
            let h = hom_space(ma, mb)?.len();
            let want = usize::from(a == b);
            if h != want {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// `mult(α, β) = dim Ext¹(M_α, M_β)` after checking orthogonality.
pub fn gabriel_quiver<F: Field>(family: &[FdModule<F>], names: &[String]) -> Result<GabrielQuiver> {
    if names.len() != family.len() {
        return Err(Error::Invalid("one name per family member expected".into()));
    }
    if let Some((a, b)) = orthogonality_witness(family)? {
        return Err(Error::NotOrthogonal(format!("{} and {}", names[a], names[b])));
    }
    let p = family.len();
    let mut mult = vec![vec![0; p]; p];
    for a in 0..p {
        for b in 0..p {
            mult[a][b] = ext1(&family[a], &family[b])?.dim;
        }
    }
    GabrielQuiver::new(names.to_vec(), mult)
}

/// Intersection of kernels, used for common annihilators.
pub fn common_kernel<F: Field>(mats: &[Matrix<F>], dim: usize) -> Matrix<F> {
    let mut cur = Matrix::identity(dim);
    for a in mats {
        cur = intersect(&cur, &a.kernel());
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use num_rational::BigRational as Q;

    fn jordan(n: usize) -> Matrix<Q> {
        Matrix::from_fn(n, n, |i, j| if j == i + 1 { Q::from_i64(1) } else { Q::from_i64(0) })
    }

    fn kx(n: u32) -> Arc<Presentation<Q>> {
        Arc::new(Presentation::truncated_polynomial(n))
    }

    fn jmod(p: &Arc<Presentation<Q>>, n: usize) -> FdModule<Q> {
        FdModule::new(p.clone(), vec![jordan(n)]).unwrap()
    }

    fn a2() -> (Arc<Presentation<Q>>, FdModule<Q>, FdModule<Q>) {
        let q = Quiver::from_labels(&["1", "2"], &[("1", "2")]).unwrap();
        let p = Arc::new(Presentation::path_algebra(&q, None, None).unwrap());
        let one = Matrix::<Q>::identity(1);
        let z = Matrix::<Q>::zeros(1, 1);
        let s1 = FdModule::new(p.clone(), vec![one.clone(), z.clone(), z.clone()]).unwrap();
        let s2 = FdModule::new(p.clone(), vec![z.clone(), one, z]).unwrap();
        (p, s1, s2)
    }

    #[test]
    fn relations_are_enforced() {
        let p = kx(2);
        assert!(FdModule::new(p, vec![jordan(3)]).is_err());
    }

    #[test]
    fn hom_dimensions() {
        let p = kx(4);
        assert_eq!(hom_space(&jmod(&p, 3), &jmod(&p, 3)).unwrap().len(), 3);
        assert_eq!(hom_space(&jmod(&p, 2), &jmod(&p, 3)).unwrap().len(), 2);
        let (_, s1, s2) = a2();
        assert_eq!(hom_space(&s1, &s1).unwrap().len(), 1);
        assert_eq!(hom_space(&s1, &s2).unwrap().len(), 0);
    }

    #[test]
    fn ext_dimensions() {
        let p = kx(2);
        let k = jmod(&p, 1);
        assert_eq!(ext1(&k, &k).unwrap().dim, 1);
        let (_, s1, s2) = a2();
        assert_eq!(ext1(&s1, &s2).unwrap().dim, 1);
        assert_eq!(ext1(&s2, &s1).unwrap().dim, 0);
        let free = Arc::new(Presentation::<Q>::truncated_free(&["x", "y"], 2));
        let k2 = FdModule::new(free, vec![Matrix::zeros(1, 1), Matrix::zeros(1, 1)]).unwrap();
        assert_eq!(ext1(&k2, &k2).unwrap().dim, 2);
    }

    #[test]
    fn ext_classes_ignore_coboundaries() {
        let p = kx(3);
        let (j1, j2) = (jmod(&p, 1), jmod(&p, 2));
        let e = ext1(&j1, &j2).unwrap();
        let phi = Matrix::from_i64(&[&[3], &[5]]);
        let inner = Cocycle::inner(&j1, &j2, &phi);
        assert!(e.is_trivial(&inner).unwrap());
        let b = e.basis[0].add(&inner);
        assert_eq!(e.class_of(&b).unwrap(), vec![Q::from_i64(1)]);
    }

    #[test]
    fn extension_of_simples_is_jordan() {
        let p = kx(3);
        let k = jmod(&p, 1);
        let e = ext1(&k, &k).unwrap();
        let m = FdModule::extension(&k, &k, &e.basis[0]).unwrap();
        assert!(iso_test(&m, &jmod(&p, 2)).unwrap().is_iso());
    }

    #[test]
    fn locality() {
        let p = kx(3);
        assert!(end_is_local(&jmod(&p, 3)).unwrap().local);
        let k = jmod(&p, 1);
        let r = end_is_local(&k.direct_sum(&k).unwrap()).unwrap();
        assert_eq!((r.local, r.top_dim), (false, 4));
    }

    #[test]
    fn socles_and_uniseriality() {
        let p = kx(4);
        let j3 = jmod(&p, 3);
        assert_eq!(j3.socle().unwrap().cols(), 1);
        assert!(j3.is_uniserial().unwrap());
        let s = jmod(&p, 1).direct_sum(&jmod(&p, 2)).unwrap();
        assert!(!s.is_uniserial().unwrap());
        let (q, _) = j3.quotient(&j3.socle().unwrap()).unwrap();
        assert!(iso_test(&q, &jmod(&p, 2)).unwrap().is_iso());
        let e3 = vec![Q::from_i64(0), Q::from_i64(0), Q::from_i64(1)];
        assert_eq!(j3.submodule(&[e3]).0.dim(), 3);
        assert_eq!(j3.socle_layers().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn iso_and_distinct() {
        let p = kx(3);
        let j3 = jmod(&p, 3);
        let split = jmod(&p, 2).direct_sum(&jmod(&p, 1)).unwrap();
        assert!(!iso_test(&j3, &split).unwrap().is_iso());
        let basis = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let conj = j3.change_basis(&basis).unwrap();
        match iso_test(&j3, &conj).unwrap() {
            IsoResult::Isomorphic(phi) => assert!(is_hom(&j3, &conj, &phi)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symbolic_det_of_diagonal_family() {
        let b1 = Matrix::<Q>::from_i64(&[&[1, 0], &[0, 0]]);
        let b2 = Matrix::<Q>::from_i64(&[&[0, 0], &[0, 1]]);
        let d = symbolic_det(&[b1.clone(), b2]);
        assert_eq!(d.render(&["a".into(), "b".into()]), "a*b");
        assert!(symbolic_det(&[b1]).is_zero());
    }

    #[test]
    fn gabriel_quiver_of_a2() {
        let (_, s1, s2) = a2();
        let g = gabriel_quiver(&[s1.clone(), s2], &["1".into(), "2".into()]).unwrap();
        assert_eq!(g.mult, vec![vec![0, 1], vec![0, 0]]);
        assert!(gabriel_quiver(&[s1.clone(), s1], &["a".into(), "b".into()]).is_err());
    }
}
