//! Liftings of a family to pointed algebras, the correspondence with
//! iterated extensions, pushforwards and the equations of `Mor(H, k[Γ])`.
//!
//! A lifting to `S` is stored in coefficient form: for every generator `g`
//! and basis element `c ∈ S_ij` a map `A_g^c: M_j → M_i`, so that
//! `g (m ⊗ e_j) = Σ_c A_g^c m ⊗ c`. Coefficient tuples multiply in the ring
//! `Λ = ⊕ Hom(M_j, M_i) ⊗ S_ij` by `(A ⊗ d)(A' ⊗ c) = AA' ⊗ dc`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{CofilteredModule, FamilyRef};
use crate::fdmod::{cocycle_matrix, ext1, iso_test, Cocycle, FdModule};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::pointed::{build_k_gamma, BasisElem, PointedAlgebra, PointedMorphism};
use crate::poly::{CommPoly, NcPoly};
use crate::quiver::OrderedQuiver;

/// Coefficient tuples indexed by the basis of the base algebra.
type Coeffs<F> = Vec<Matrix<F>>;

/// The ring `Λ` attached to a base algebra and the dimensions of the family
/// members sitting at its points.
struct Lambda<'a, F> {
    base: &'a PointedAlgebra<F>,
    dims: Vec<usize>,
}

impl<F: Field> Lambda<'_, F> {
    fn shape(&self, c: usize) -> (usize, usize) {
        let (i, j) = self.base.basis()[c].slot;
        (self.dims[i], self.dims[j])
    }

    fn zero(&self) -> Coeffs<F> {
        (0..self.base.dim()).map(|c| Matrix::zeros(self.shape(c).0, self.shape(c).1)).collect()
    }

    fn scalar(&self, x: F) -> Coeffs<F> {
        let mut out = self.zero();
        for i in 0..self.base.num_points() {
            out[self.base.idempotent(i)] = Matrix::scalar(self.dims[i], x.clone());
        }
        out
    }

    fn add_scaled(&self, acc: &mut Coeffs<F>, c: &F, x: &Coeffs<F>) {
        for (a, b) in acc.iter_mut().zip(x) {
            a.add_scaled(c, b);
        }
    }

    fn mul(&self, x: &Coeffs<F>, y: &Coeffs<F>) -> Coeffs<F> {
        let mut out = self.zero();
        for (&(d, c), prod) in self.base.structure_constants() {
            if x[d].is_zero() || y[c].is_zero() {
                continue;
            }
            let m = x[d].mul(&y[c]);
            for (e, k) in prod {
                out[*e].add_scaled(k, &m);
            }
        }
        out
    }

    fn eval(&self, p: &NcPoly<F>, gens: &[Coeffs<F>]) -> Coeffs<F> {
        let mut out = self.zero();
        for (w, c) in p.terms() {
            let mut acc = self.scalar(F::one());
            for &g in w {
                acc = self.mul(&acc, &gens[g]);
            }
            self.add_scaled(&mut out, c, &acc);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting<F> {
    family: FamilyRef<F>,
    /// family index of each point of the base
    points: Vec<usize>,
    base: Arc<PointedAlgebra<F>>,
    /// `coeffs[g][c] = A_g^c`
    coeffs: Vec<Coeffs<F>>,
}

impl<F: Field> Lifting<F> {
    /// Checks shapes, that the degree 0 part is the family action, and that
    /// every relation vanishes in `Λ`.
    pub fn new(family: FamilyRef<F>, points: Vec<usize>, base: Arc<PointedAlgebra<F>>, coeffs: Vec<Coeffs<F>>) -> Result<Self> {
        let l = Lifting { family, points, base, coeffs };
        l.validate()?;
        Ok(l)
    }

    /// Block diagonal action: every radical coefficient zero.
    pub fn trivial(family: FamilyRef<F>, points: Vec<usize>, base: Arc<PointedAlgebra<F>>) -> Result<Self> {
        let ng = family.first().ok_or_else(|| Error::Invalid("empty family".into()))?.presentation().num_generators();
        let mut l = Lifting { family, points, base, coeffs: Vec::new() };
        let lam = l.lambda();
        l.coeffs = (0..ng)
            .map(|g| {
                let mut c = lam.zero();
                for i in 0..l.base.num_points() {
                    c[l.base.idempotent(i)] = l.member(i).action()[g].clone();
                }
                c
            })
            .collect();
        l.validate()?;
        Ok(l)
    }

    fn lambda(&self) -> Lambda<'_, F> {
        Lambda { base: &self.base, dims: self.points.iter().map(|&a| self.family[a].dim()).collect() }
    }

    fn member(&self, point: usize) -> &FdModule<F> {
        &self.family[self.points[point]]
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.base.num_points();
        if self.points.len() != p || self.points.iter().any(|&a| a >= self.family.len()) {
            return Err(Error::InvalidLifting("one family member per point expected".into()));
        }
        let pres = self.family[0].presentation().clone();
        if self.coeffs.len() != pres.num_generators() {
            return Err(Error::InvalidLifting("one coefficient tuple per generator expected".into()));
        }
        let lam = self.lambda();
        for (g, cs) in self.coeffs.iter().enumerate() {
            if cs.len() != self.base.dim() {
                return Err(Error::InvalidLifting("one coefficient per basis element expected".into()));
            }
            for (c, a) in cs.iter().enumerate() {
                if a.shape() != lam.shape(c) {
                    return Err(Error::Shape(format!("coefficient {} of generator {g}", self.base.basis()[c].label)));
                }
            }
            for i in 0..p {
                if cs[self.base.idempotent(i)] != self.member(i).action()[g] {
                    return Err(Error::NotTriangular(format!("generator {g} does not reduce to the family at point {i}")));
                }
            }
        }
        for r in &pres.relations {
            if lam.eval(r, &self.coeffs).iter().any(|m| !m.is_zero()) {
                return Err(Error::InvalidLifting(format!("relation {} fails", r.render(&pres.generators))));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<PointedAlgebra<F>> {
        &self.base
    }

    pub fn family(&self) -> &FamilyRef<F> {
        &self.family
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn coefficient(&self, g: usize, c: usize) -> &Matrix<F> {
        &self.coeffs[g][c]
    }

    pub fn coefficients(&self) -> &[Coeffs<F>] {
        &self.coeffs
    }

    /// Basis of `⊕ M_i ⊗ S_ij` as pairs `(basis element c, vector index)`
    /// with `c` in slot `(i, j)` and the vector in `M_i`.
    pub fn total_basis(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (c, b) in self.base.basis().iter().enumerate() {
            for v in 0..self.member(b.slot.0).dim() {
                out.push((c, v));
            }
        }
        out
    }

    fn total_index(&self) -> BTreeMap<(usize, usize), usize> {
        self.total_basis().into_iter().enumerate().map(|(k, cv)| (cv, k)).collect()
    }

    /// Left action of every generator on the total space.
    pub fn full_action(&self) -> Vec<Matrix<F>> {
        let idx = self.total_index();
        let n = idx.len();
        self.coeffs
            .iter()
            .map(|cs| {
                let mut a: Matrix<F> = Matrix::zeros(n, n);
                // g (m ⊗ c) = Σ_d A^d m ⊗ dc for c in slot (i, j), d in slot (k, i)
                for (&(c, v), &col) in &idx {
                    let i = self.base.basis()[c].slot.0;
                    for (d, ad) in cs.iter().enumerate() {
                        if self.base.basis()[d].slot.1 != i || ad.is_zero() {
                            continue;
                        }
                        for (e, k) in self.base.mul_basis(d, c) {
                            for r in 0..ad.rows() {
                                let x = &ad[(r, v)];
                                if !x.is_zero() {
                                    let row = idx[&(*e, r)];
                                    a[(row, col)] = a[(row, col)].clone() + x.clone() * k.clone();
                                }
                            }
                        }
                    }
                }
                a
            })
            .collect()
    }

    /// Right action of a basis element of the base on the total space.
    pub fn right_action(&self, b: usize) -> Matrix<F> {
        let idx = self.total_index();
        let n = idx.len();
        let mut a: Matrix<F> = Matrix::zeros(n, n);
        for (&(c, v), &col) in &idx {
            for (e, k) in self.base.mul_basis(c, b) {
                let row = idx[&(*e, v)];
                a[(row, col)] = a[(row, col)].clone() + k.clone();
            }
        }
        a
    }
}

/// An equivalence `T = 1 + N` of liftings, in coefficient form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<F> {
    Equivalent(Vec<Matrix<F>>),
    Distinct,
}

impl<F> Equivalence<F> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

/// Search for `T = 1 + N` with `N` radical and `G'_g T = T G_g` for all
/// generators. The equation is linear in `N`, so this is decided exactly.
pub fn lifting_equivalent<F: Field>(a: &Lifting<F>, b: &Lifting<F>) -> Result<Equivalence<F>> {
    if a.base != b.base || a.points != b.points || a.family != b.family {
        return Err(Error::Invalid("liftings over different bases or families".into()));
    }
    let lam = a.lambda();
    let basis = a.base.basis();
    let rad = a.base.radical_basis();
    let mut col_off = BTreeMap::new();
    let mut ncols = 0;
    for &c in &rad {
        col_off.insert(c, ncols);
        let (r, s) = lam.shape(c);
        ncols += r * s;
    }
    let mut row_off = Vec::new();
    let mut per_gen = 0;
    for e in 0..basis.len() {
        row_off.push(per_gen);
        let (r, s) = lam.shape(e);
        per_gen += r * s;
    }
    let ng = a.coeffs.len();
    let mut sys: Matrix<F> = Matrix::zeros(ng * per_gen, ncols);
    let mut rhs = vec![F::zero(); ng * per_gen];
    let add_block = |sys: &mut Matrix<F>, r0: usize, c0: usize, blk: &Matrix<F>, k: &F| {
        for i in 0..blk.rows() {
            for j in 0..blk.cols() {
                let x = &blk[(i, j)];
                if !x.is_zero() {
                    let cur = sys[(r0 + i, c0 + j)].clone();
                    sys[(r0 + i, c0 + j)] = cur + x.clone() * k.clone();
                }
            }
        }
    };
    for g in 0..ng {
        let (ga, gb) = (&a.coeffs[g], &b.coeffs[g]);
        for e in 0..basis.len() {
            let v = ga[e].sub(&gb[e]).vec();
            for (k, x) in v.into_iter().enumerate() {
                rhs[g * per_gen + row_off[e] + k] = x;
            }
        }
        for (&(d, c), prod) in a.base.structure_constants() {
            // G'_d N_c contributes to (G' N)_e; N_d G_c to (N G)_e
            if let Some(&co) = col_off.get(&c) {
                let (_, cs) = lam.shape(c);
                let blk = gb[d].kron(&Matrix::identity(cs));
                for (e, k) in prod {
                    add_block(&mut sys, g * per_gen + row_off[*e], co, &blk, k);
                }
            }
            if let Some(&co) = col_off.get(&d) {
                let (dr, _) = lam.shape(d);
                let blk = Matrix::identity(dr).kron(&ga[c].transpose()).neg();
                for (e, k) in prod {
                    add_block(&mut sys, g * per_gen + row_off[*e], co, &blk, k);
                }
            }
        }
    }
    let sol = if ncols == 0 {
        if rhs.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None }
    } else {
        sys.solve(&rhs)
    };
    Ok(match sol {
        None => Equivalence::Distinct,
        Some(x) => {
            let mut t = lam.scalar(F::one());
            for &c in &rad {
                let (r, s) = lam.shape(c);
                let o = col_off[&c];
                t[c] = Matrix::from_vec(r, s, x[o..o + r * s].to_vec());
            }
            Equivalence::Equivalent(t)
        }
    })
}

/// `T L T⁻¹` for `T = 1 + N`, `N` a tuple of radical coefficients.
pub fn conjugate_lifting<F: Field>(l: &Lifting<F>, n: &[Matrix<F>]) -> Result<Lifting<F>> {
    let lam = l.lambda();
    if n.len() != l.base.dim() || (0..n.len()).any(|c| n[c].shape() != lam.shape(c)) {
        return Err(Error::Shape("one coefficient per basis element expected".into()));
    }
    if (0..l.base.num_points()).any(|i| !n[l.base.idempotent(i)].is_zero()) {
        return Err(Error::InvalidLifting("N must be radical".into()));
    }
    let one = lam.scalar(F::one());
    let mut t = one.clone();
    lam.add_scaled(&mut t, &F::one(), &n.to_vec());
    // (1 + N)⁻¹ = Σ (−N)^k, finite since N is nilpotent
    let mut inv = one.clone();
    let mut pow = one;
    let minus_n: Coeffs<F> = n.iter().map(|m| m.neg()).collect();
    loop {
        pow = lam.mul(&pow, &minus_n);
        if pow.iter().all(|m| m.is_zero()) {
            break;
        }
        lam.add_scaled(&mut inv, &F::one(), &pow);
    }
    let coeffs = l.coeffs.iter().map(|g| lam.mul(&lam.mul(&t, g), &inv)).collect();
    Lifting::new(l.family.clone(), l.points.clone(), l.base.clone(), coeffs)
}

/// Transport along a morphism of pointed algebras `φ: S → S'` with the
/// same points: `A'^d = Σ_c φ_dc A^c`.
pub fn pushforward_lifting<F: Field>(
    l: &Lifting<F>,
    target: &Arc<PointedAlgebra<F>>,
    phi: &PointedMorphism<F>,
) -> Result<Lifting<F>> {
    phi.check(&l.base, target)?;
    let lam = Lambda { base: target.as_ref(), dims: l.points.iter().map(|&a| l.family[a].dim()).collect() };
    let coeffs = l
        .coeffs
        .iter()
        .map(|cs| {
            let mut out = lam.zero();
            for (c, ac) in cs.iter().enumerate() {
                if ac.is_zero() {
                    continue;
                }
                for (d, o) in out.iter_mut().enumerate() {
                    let k = &phi.matrix[(d, c)];
                    if !k.is_zero() {
                        o.add_scaled(k, ac);
                    }
                }
            }
            out
        })
        .collect();
    Lifting::new(l.family.clone(), l.points.clone(), target.clone(), coeffs)
}

/// Points of `k[Γ]` are labelled `family index + 1`.
fn gamma_points(g: &OrderedQuiver) -> Vec<usize> {
    g.vertices().into_iter().map(|v| v - 1).collect()
}

/// `k[Γ]` for the extension type of a cofiltration, with its points.
pub fn k_gamma_for<F: Field>(x: &CofilteredModule<F>) -> Result<(Arc<PointedAlgebra<F>>, Vec<usize>)> {
    let g = x.extension_type();
    Ok((Arc::new(build_k_gamma(&g)?), gamma_points(&g)))
}

fn point_of(points: &[usize], family_index: usize) -> usize {
    points.iter().position(|&a| a == family_index).expect("family member is a point")
}

/// The prefix run `(1, …, r)` as a basis index, `r ≥ 1`; `r = 0` gives the
/// idempotent at `α(1)`.
fn run_index<F: Field>(base: &PointedAlgebra<F>, from: usize, to: usize) -> Option<usize> {
    let seq: Vec<usize> = (from..=to).collect();
    base.index_of_sequence(&seq)
}

/// `M = M' / M'(B)` for `M' = L e_{α(1)}`: the components along the prefix
/// runs `u_r = x_{r,r+1} ⋯ x_{12}` survive and `g` acts on block `s` into
/// block `t ≥ s` by the coefficient of the run `(s+1, …, t)`.
pub fn lifting_to_iterated_extension<F: Field>(l: &Lifting<F>) -> Result<CofilteredModule<F>> {
    let g = l.base.gamma().ok_or_else(|| Error::InvalidLifting("base is not a k[Γ]".into()))?.clone();
    let n = g.len();
    let order: Vec<usize> = (1..=n).map(|i| l.points[point_of(&gamma_points(&g), g.alpha(i) - 1)]).collect();
    let dims: Vec<usize> = order.iter().map(|&a| l.family[a].dim()).collect();
    let mut off = vec![0];
    for d in &dims {
        off.push(off.last().unwrap() + d);
    }
    let total = off[n];
    let pts = gamma_points(&g);
    let action = l
        .coeffs
        .iter()
        .map(|cs| {
            let mut a = Matrix::zeros(total, total);
            for t in 0..n {
                for s in 0..=t {
                    let c = if s == t {
                        l.base.idempotent(point_of(&pts, g.alpha(t + 1) - 1))
                    } else {
                        run_index(&l.base, s + 1, t).expect("runs are monomials")
                    };
                    a.set_block(off[t], off[s], &cs[c]);
                }
            }
            a
        })
        .collect();
    let m = FdModule::new(l.family[0].presentation().clone(), action)?;
    CofilteredModule::from_triangular(l.family.clone(), order, m)
}

/// Solve for the coefficients of the listed basis elements, lowest degree
/// first, so that every relation vanishes. Each coefficient solves a linear
/// cocycle equation whose right hand side involves lower degrees only.
fn solve_coefficients<F: Field>(l: &mut Lifting<F>, unknown: &[usize]) -> Result<()> {
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in unknown {
        by_degree.entry(l.base.basis()[c].degree).or_default().push(c);
    }
    let pres = l.family[0].presentation().clone();
    for cs in by_degree.values() {
        for &c in cs {
            for g in 0..l.coeffs.len() {
                let (r, s) = l.lambda().shape(c);
                l.coeffs[g][c] = Matrix::zeros(r, s);
            }
        }
        let lam = l.lambda();
        let vals: Vec<Coeffs<F>> = pres.relations.iter().map(|r| lam.eval(r, &l.coeffs)).collect();
        let mut updates = Vec::new();
        for &c in cs {
            let (ti, si) = l.base.basis()[c].slot;
            let (mt, ms) = (l.member(ti), l.member(si));
            if mt.dim() * ms.dim() == 0 {
                continue;
            }
            let rhs: Vec<F> = vals.iter().flat_map(|v| v[c].vec().into_iter().map(|x| -x)).collect();
            if rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let x = cocycle_matrix(ms, mt)
                .solve(&rhs)
                .ok_or_else(|| Error::Obstructed(format!("coefficient of {}", l.base.basis()[c].label)))?;
            updates.push((c, Cocycle::from_vec(&x, ms, mt)));
        }
        for (c, psi) in updates {
            for (g, v) in psi.values.into_iter().enumerate() {
                l.coeffs[g][c] = v;
            }
        }
    }
    l.validate().map_err(|e| Error::Obstructed(e.to_string()))
}

/// Lifting over `k[Γ]` whose run coefficients are the blocks of the
/// cofiltration in an adapted basis. Coefficients of gapped monomials
/// (sequences with a jump, from length four on) are solved degree by
/// degree; `Obstructed` if that fails.
pub fn iterated_extension_to_lifting<F: Field>(x: &CofilteredModule<F>) -> Result<Lifting<F>> {
    let (base, points) = k_gamma_for(x)?;
    let n = x.len();
    let filt = x.to_filtered()?;
    let cols: Vec<&Matrix<F>> = (1..=n).map(|i| filt.ident(i)).collect();
    let p = Matrix::hstack(&cols);
    let m = x.module().change_basis(&p)?;
    let mut off = vec![0];
    for i in 1..=n {
        off.push(off.last().unwrap() + x.factor(i).dim());
    }
    let g = x.extension_type();
    let lam = Lambda { base: base.as_ref(), dims: points.iter().map(|&a| x.family()[a].dim()).collect() };
    let mut coeffs = Vec::new();
    for a in m.action() {
        let mut cs = lam.zero();
        for t in 0..n {
            for s in 0..=t {
                let blk = a.submatrix(off[t], off[t + 1], off[s], off[s + 1]);
                let c = if s == t {
                    base.idempotent(point_of(&points, g.alpha(t + 1) - 1))
                } else {
                    run_index(&base, s + 1, t).expect("runs are monomials")
                };
                cs[c] = blk;
            }
        }
        coeffs.push(cs);
    }
    let gapped: Vec<usize> = base.radical_basis().into_iter().filter(|&c| !crate::pointed::is_run(base.sequence(c).unwrap())).collect();
    let mut l = Lifting { family: x.family().clone(), points, base, coeffs };
    solve_coefficients(&mut l, &gapped)?;
    Ok(l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullGenerator {
    pub name: String,
    /// `(i, j)` as point indices: the generator lies in `e_i H e_j`
    pub slot: (usize, usize),
}

/// A presentation of the hull `H = T¹ / (f)`: slot generators and slot
/// homogeneous relations. Relations must be truncated below the cutoff
/// by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPresentation<F> {
    /// point labels, matched against the vertex labels of `Γ`
    pub points: Vec<usize>,
    pub generators: Vec<HullGenerator>,
    /// `(slot, relation)` with the relation a polynomial in the generators
    pub relations: Vec<((usize, usize), NcPoly<F>)>,
    pub cutoff: Option<usize>,
}

impl<F: Field> HullPresentation<F> {
    /// No relations; `d_ij = dim Ext¹(M_j, M_i)` generators in slot `(i, j)`,
    /// with points labelled `1, …, p` in family order.
    pub fn hereditary(family: &[FdModule<F>]) -> Result<Self> {
        let p = family.len();
        let mut generators = Vec::new();
        for i in 0..p {
            for j in 0..p {
                let d = ext1(&family[j], &family[i])?.dim;
                for k in 0..d {
                    let mut name = format!("s_{}_{}", i + 1, j + 1);
                    if d > 1 {
                        name.push_str(&format!("_{}", k + 1));
                    }
                    generators.push(HullGenerator { name, slot: (i, j) });
                }
            }
        }
        Ok(HullPresentation { points: (1..=p).collect(), generators, relations: Vec::new(), cutoff: None })
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Every monomial of every relation composes and lands in the declared
    /// slot; relations have no terms of degree below two.
    pub fn check(&self) -> Result<()> {
        let p = self.points.len();
        if self.generators.iter().any(|g| g.slot.0 >= p || g.slot.1 >= p) {
            return Err(Error::SlotMismatch("generator slot outside the points".into()));
        }
        for (slot, r) in &self.relations {
            if slot.0 >= p || slot.1 >= p {
                return Err(Error::SlotMismatch("relation slot outside the points".into()));
            }
            for (w, _) in r.terms() {
                if w.len() < 2 {
                    return Err(Error::SlotMismatch("relation term of degree below two".into()));
                }
                if let Some(&g) = w.iter().find(|&&g| g >= self.generators.len()) {
                    return Err(Error::SlotMismatch(format!("unknown generator {g}")));
                }
                if word_slot(&self.generators, w) != Some(*slot) {
                    return Err(Error::SlotMismatch(format!(
                        "term {} does not land in slot ({}, {})",
                        NcPoly::<F>::monomial(w.clone(), F::one()).render(&self.generator_names()),
                        self.points[slot.0],
                        self.points[slot.1]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Slot of a word `s_1 ⋯ s_k` of generators if it composes.
fn word_slot(gens: &[HullGenerator], w: &[usize]) -> Option<(usize, usize)> {
    let first = gens[*w.first()?].slot;
    let mut cur = first;
    for &g in &w[1..] {
        let s = gens[g].slot;
        if cur.1 != s.0 {
            return None;
        }
        cur = (first.0, s.1);
    }
    Some(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeEquations<F> {
    /// `z_<generator>_<monomial>`
    pub variables: Vec<String>,
    /// `(generator, basis element of k[Γ])` for each variable
    pub var_targets: Vec<(usize, usize)>,
    /// nonzero coefficient polynomials with the relation index and the
    /// basis label they come from
    pub equations: Vec<(usize, String, CommPoly<F>)>,
}

/// Generic image of a generator: `Σ_c z_{s,c} c` over the radical basis
/// elements of `k[Γ]` in the generator's slot.
fn generic_images<F: Field>(
    hull: &HullPresentation<F>,
    base: &PointedAlgebra<F>,
    gpoints: &[usize],
) -> (Vec<String>, Vec<(usize, usize)>, Vec<Vec<CommPoly<F>>>) {
    let mut names = Vec::new();
    let mut targets = Vec::new();
    for (gi, gen) in hull.generators.iter().enumerate() {
        let (Some(i), Some(j)) = (
            gpoints.iter().position(|&v| v == hull.points[gen.slot.0]),
            gpoints.iter().position(|&v| v == hull.points[gen.slot.1]),
        ) else {
            continue;
        };
        for c in base.basis_in_slot((i, j)) {
            if base.basis()[c].degree >= 1 {
                names.push(format!("z_{}_{}", gen.name, base.basis()[c].label));
                targets.push((gi, c));
            }
        }
    }
    let nv = names.len();
    let mut images = vec![vec![CommPoly::zero(nv); base.dim()]; hull.generators.len()];
    for (v, &(gi, c)) in targets.iter().enumerate() {
        images[gi][c] = CommPoly::var(nv, v);
    }
    (names, targets, images)
}

fn poly_mul_elems<F: Field>(base: &PointedAlgebra<F>, x: &[CommPoly<F>], y: &[CommPoly<F>], nv: usize) -> Vec<CommPoly<F>> {
    let mut out = vec![CommPoly::zero(nv); base.dim()];
    for (&(d, c), prod) in base.structure_constants() {
        if x[d].is_zero() || y[c].is_zero() {
            continue;
        }
        let m = x[d].mul(&y[c]);
        for (e, k) in prod {
            out[*e] = out[*e].add(&m.scale(k));
        }
    }
    out
}

/// Equations of `Mor(H, k[Γ])`: substitute the generic image of every
/// generator into every relation and collect the coefficients.
pub fn scheme_equations<F: Field>(hull: &HullPresentation<F>, g: &OrderedQuiver) -> Result<SchemeEquations<F>> {
    hull.check()?;
    let base = build_k_gamma::<F>(g)?;
    let gpoints = g.vertices();
    let (variables, var_targets, images) = generic_images(hull, &base, &gpoints);
    let nv = variables.len();
    let mut equations = Vec::new();
    for (ri, (_, r)) in hull.relations.iter().enumerate() {
        let mut total = vec![CommPoly::zero(nv); base.dim()];
        for (w, coef) in r.terms() {
            let mut acc = images[w[0]].clone();
            for &gi in &w[1..] {
                acc = poly_mul_elems(&base, &acc, &images[gi], nv);
            }
            for (t, a) in total.iter_mut().zip(acc) {
                *t = t.add(&a.scale(coef));
            }
        }
        for (c, p) in total.into_iter().enumerate() {
            if !p.is_zero() {
                equations.push((ri, base.basis()[c].label.clone(), p));
            }
        }
    }
    Ok(SchemeEquations { variables, var_targets, equations })
}

/// `T¹` on the generators touching only the given points, modulo monomial
/// relations and words of length `cutoff`.
pub fn truncated_hull_algebra<F: Field>(
    hull: &HullPresentation<F>,
    points: &[usize],
    cutoff: usize,
) -> Result<(PointedAlgebra<F>, Vec<usize>, Vec<Vec<usize>>)> {
    let mut forbidden = Vec::new();
    for (_, r) in &hull.relations {
        let terms: Vec<_> = r.terms().collect();
        if terms.len() != 1 {
            return Err(Error::Invalid("non-monomial hull relations need a supplied versal family".into()));
        }
        forbidden.push(terms[0].0.clone());
    }
    let pidx = |label: usize| points.iter().position(|&v| v == label);
    let gens: Vec<(usize, (usize, usize))> = hull
        .generators
        .iter()
        .enumerate()
        .filter_map(|(k, g)| Some((k, (pidx(hull.points[g.slot.0])?, pidx(hull.points[g.slot.1])?))))
        .collect();
    let contains = |w: &[usize]| forbidden.iter().any(|f| w.windows(f.len()).any(|x| x == f.as_slice()));
    let p = points.len();
    let mut basis: Vec<BasisElem> =
        points.iter().enumerate().map(|(i, v)| BasisElem { label: format!("e{v}"), slot: (i, i), degree: 0 }).collect();
    let mut words: Vec<Vec<usize>> = vec![Vec::new(); p];
    let mut layer: Vec<(Vec<usize>, (usize, usize))> = vec![(Vec::new(), (0, 0))];
    for len in 1..cutoff {
        let mut next = Vec::new();
        for (w, slot) in &layer {
            for &(k, s) in &gens {
                if len > 1 && slot.1 != s.0 {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(k);
                if contains(&w2) {
                    continue;
                }
                let slot2 = if len == 1 { s } else { (slot.0, s.1) };
                next.push((w2, slot2));
            }
        }
        next.sort();
        for (w, slot) in &next {
            let label = w.iter().map(|&k| hull.generators[k].name.clone()).collect::<Vec<_>>().join("*");
            basis.push(BasisElem { label, slot: *slot, degree: w.len() });
            words.push(w.clone());
        }
        layer = next;
    }
    let index: BTreeMap<Vec<usize>, usize> = words.iter().enumerate().skip(p).map(|(i, w)| (w.clone(), i)).collect();
    let mut table = BTreeMap::new();
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            if basis[a].slot.1 != basis[b].slot.0 {
                continue;
            }
            let prod = if a < p {
                Some(b)
            } else if b < p {
                Some(a)
            } else {
                let mut w = words[a].clone();
                w.extend_from_slice(&words[b]);
                index.get(&w).copied()
            };
            if let Some(c) = prod {
                table.insert((a, b), vec![(c, F::one())]);
            }
        }
    }
    let gen_map: Vec<usize> = gens.iter().map(|&(k, _)| k).collect();
    Ok((PointedAlgebra::from_parts(p, basis, table, Some(cutoff)), gen_map, words))
}

/// Versal lifting over the truncated hull algebra: the generators act by
/// the chosen `ext1` basis cocycles and longer words are solved degree by
/// degree. Generators are matched to cocycles in the order produced by
/// [`HullPresentation::hereditary`].
pub fn versal_lifting<F: Field>(
    hull: &HullPresentation<F>,
    family: &FamilyRef<F>,
    points: &[usize],
    cutoff: usize,
) -> Result<Lifting<F>> {
    let (alg, gen_map, words) = truncated_hull_algebra(hull, points, cutoff)?;
    let fam_pts: Vec<usize> = points.iter().map(|v| v - 1).collect();
    let base = Arc::new(alg);
    let mut l = Lifting::trivial(family.clone(), fam_pts.clone(), base.clone())?;
    // cocycle basis per slot, consumed in generator order
    let mut next_in_slot: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &k in &gen_map {
        let (i, j) = hull.generators[k].slot;
        let (fi, fj) = (hull.points[i] - 1, hull.points[j] - 1);
        let e = ext1(&family[fj], &family[fi])?;
        let used = next_in_slot.entry((fi, fj)).or_insert(0);
        let psi = e
            .basis
            .get(*used)
            .ok_or_else(|| Error::Invalid(format!("generator {} has no matching Ext class", hull.generators[k].name)))?
            .clone();
        *used += 1;
        let c = words.iter().position(|w| w.as_slice() == [k]).expect("generators are basis words");
        for (g, v) in psi.values.into_iter().enumerate() {
            l.coeffs[g][c] = v;
        }
    }
    let longer: Vec<usize> = (0..base.dim()).filter(|&c| base.basis()[c].degree >= 2).collect();
    solve_coefficients(&mut l, &longer)?;
    Ok(l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub point: Vec<String>,
    pub lifting_class: usize,
    pub module_class: usize,
    pub module_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectionReport {
    pub variables: Vec<String>,
    pub equations: usize,
    pub sampled: usize,
    pub samples: Vec<SamplePoint>,
    pub lifting_classes: usize,
    pub module_classes: usize,
}

/// Grid `{-1, 0, 1, 2}^N`: all of it when small, otherwise the coordinate
/// axes plus a fixed pseudo-random subset.
fn sample_grid(nv: usize) -> Vec<Vec<i64>> {
    const VALUES: [i64; 4] = [-1, 0, 1, 2];
    if nv == 0 {
        return vec![Vec::new()];
    }
    if nv <= 4 {
        let mut out = vec![Vec::new()];
        for _ in 0..nv {
            out = out.into_iter().flat_map(|p| VALUES.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
        }
        return out;
    }
    let mut out = vec![vec![0; nv]];
    for i in 0..nv {
        for v in [-1, 1, 2] {
            let mut p = vec![0; nv];
            p[i] = v;
            out.push(p);
        }
    }
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    while out.len() < 256 {
        let p = (0..nv)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                VALUES[(state % 4) as usize]
            })
            .collect::<Vec<_>>();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Sample `Mor(H, k[Γ])`, push the versal lifting forward along each
/// sampled morphism, and bucket the results by equivalence of liftings and
/// by isomorphism of the resulting modules.
pub fn surjection_report<F: Field>(
    hull: &HullPresentation<F>,
    g: &OrderedQuiver,
    family: &FamilyRef<F>,
    versal: Option<&Lifting<F>>,
) -> Result<SurjectionReport> {
    let eqs = scheme_equations(hull, g)?;
    let target = Arc::new(build_k_gamma::<F>(g)?);
    let gpoints = g.vertices();
    let owned;
    let versal = match versal {
        Some(v) => v,
        None => {
            owned = versal_lifting(hull, family, &gpoints, g.len().max(1))?;
            &owned
        }
    };
    let src = versal.base.clone();
    let (_, gen_map, words) = truncated_hull_algebra(hull, &gpoints, src.nilpotency().unwrap_or(g.len().max(1)))
        .ok()
        .filter(|(a, _, _)| a.dim() == src.dim())
        .ok_or_else(|| Error::Invalid("supplied versal family is not over the truncated hull".into()))?;
    let nv = eqs.variables.len();
    let points: Vec<Vec<F>> = sample_grid(nv)
        .into_iter()
        .map(|p| p.into_iter().map(F::from_i64).collect::<Vec<F>>())
        .filter(|z| eqs.equations.iter().all(|(_, _, e)| e.eval(z).is_zero()))
        .collect();
    let results: Vec<Result<(Lifting<F>, FdModule<F>)>> = points
        .par_iter()
        .map(|z| {
            // images of the generators, then of every word
            let mut gen_img: BTreeMap<usize, Vec<F>> = BTreeMap::new();
            for &k in &gen_map {
                gen_img.insert(k, vec![F::zero(); target.dim()]);
            }
            for (v, &(k, c)) in eqs.var_targets.iter().enumerate() {
                if let Some(img) = gen_img.get_mut(&k) {
                    img[c] = z[v].clone();
                }
            }
            let cols: Vec<Vec<F>> = words
                .iter()
                .enumerate()
                .map(|(b, w)| {
                    if w.is_empty() {
                        return target.basis_vector(target.idempotent(b));
                    }
                    let mut acc = gen_img[&w[0]].clone();
                    for k in &w[1..] {
                        acc = target.multiply(&acc, &gen_img[k]);
                    }
                    acc
                })
                .collect();
            let phi = PointedMorphism { matrix: Matrix::from_columns(&cols, target.dim()) };
            let l = pushforward_lifting(versal, &target, &phi)?;
            let m = lifting_to_iterated_extension(&l)?.module().clone();
            Ok((l, m))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut lreps: Vec<usize> = Vec::new();
    let mut mreps: Vec<usize> = Vec::new();
    let mut samples = Vec::new();
    for (k, (l, m)) in results.iter().enumerate() {
        let mut lc = None;
        for (ci, &r) in lreps.iter().enumerate() {
            if lifting_equivalent(&results[r].0, l)?.is_equivalent() {
                lc = Some(ci);
                break;
            }
        }
        let lc = lc.unwrap_or_else(|| {
            lreps.push(k);
            lreps.len() - 1
        });
        let mut mc = None;
        for (ci, &r) in mreps.iter().enumerate() {
            if iso_test(&results[r].1, m)?.is_iso() {
                mc = Some(ci);
                break;
            }
        }
        let mc = mc.unwrap_or_else(|| {
            mreps.push(k);
            mreps.len() - 1
        });
        samples.push(SamplePoint {
            point: points[k].iter().map(|x| x.to_string()).collect(),
            lifting_class: lc,
            module_class: mc,
            module_dim: m.dim(),
        });
    }
    Ok(SurjectionReport {
        variables: eqs.variables,
        equations: eqs.equations.len(),
        sampled: samples.len(),
        samples,
        lifting_classes: lreps.len(),
        module_classes: mreps.len(),
    })
}
