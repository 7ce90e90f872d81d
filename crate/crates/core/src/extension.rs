//! Iterated extensions: cofiltrations, filtrations, splicing and the
//! classes `ξ_i`, `τ_i`.
//!
//! A cofiltration of `M` is a chain of surjections
//! `M = C_n → C_{n-1} → … → C_1 → C_0 = 0` with `K_i = ker(C_i → C_{i-1})`
//! identified with the family member `M_{α(i)}`. So `K_1 = C_1` is the top
//! factor and `K_n` is a submodule of `M`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fdmod::{cocycle_matrix, ext1, is_hom, same_presentation, Cocycle, FdModule};
use crate::field::Field;
use crate::linalg::{in_span, Matrix};
use crate::quiver::OrderedQuiver;

pub type FamilyRef<F> = Arc<[FdModule<F>]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofilteredModule<F> {
    family: FamilyRef<F>,
    /// `α(1), …, α(n)` as indices into the family
    order: Vec<usize>,
    /// `C_0, …, C_n`
    levels: Vec<FdModule<F>>,
    /// `f_i: C_i → C_{i-1}` at index `i - 1`
    surjections: Vec<Matrix<F>>,
    /// `ι_i: M_{α(i)} → C_i` with image `K_i`, at index `i - 1`
    idents: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredModule<F> {
    family: FamilyRef<F>,
    order: Vec<usize>,
    module: FdModule<F>,
    /// `F_0 = M ⊇ F_1 ⊇ … ⊇ F_n = 0` as column bases
    flag: Vec<Matrix<F>>,
    /// `M_{α(i)} → F_{i-1}`, an isomorphism onto `F_{i-1}/F_i` after
    /// projection, at index `i - 1`
    idents: Vec<Matrix<F>>,
}

/// `ξ_i` and its restriction `τ_i`, as cocycles and as coordinates in the
/// `ext1` bases of `Ext¹(C_{i-1}, M_{α(i)})` and
/// `Ext¹(M_{α(i-1)}, M_{α(i)})`.
#[derive(Clone, Debug)]
pub struct Classes<F> {
    pub xi: Cocycle<F>,
    pub xi_coords: Vec<F>,
    pub tau: Cocycle<F>,
    pub tau_coords: Vec<F>,
}

impl<F: Field> Classes<F> {
    pub fn xi_is_zero(&self) -> bool {
        self.xi_coords.iter().all(|x| x.is_zero())
    }

    pub fn tau_is_zero(&self) -> bool {
        self.tau_coords.iter().all(|x| x.is_zero())
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCofiltration(msg.into())
}

fn check_order<F: Field>(family: &FamilyRef<F>, order: &[usize]) -> Result<()> {
    if let Some(&a) = order.iter().find(|&&a| a >= family.len()) {
        return Err(invalid(format!("order vector entry {a} outside a family of {}", family.len())));
    }
    Ok(())
}

fn offsets<F: Field>(family: &FamilyRef<F>, order: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for &a in order {
        out.push(out.last().unwrap() + family[a].dim());
    }
    out
}

/// Action on `K_1 ⊕ … ⊕ K_n` with the family action on the diagonal and
/// `ψ^i(g)` in block `(i, i-1)`. `psis[k]` is `ψ^{k+2}`, a cochain from
/// `M_{α(k+1)}` to `M_{α(k+2)}`.
pub fn assemble_chain<F: Field>(family: &FamilyRef<F>, order: &[usize], psis: &[Cocycle<F>]) -> Result<Vec<Matrix<F>>> {
    check_order(family, order)?;
    if order.is_empty() {
        return Err(invalid("empty order vector"));
    }
    if psis.len() + 1 != order.len() {
        return Err(invalid(format!("{} cocycles for a chain of length {}", psis.len(), order.len())));
    }
    let off = offsets(family, order);
    let d = *off.last().unwrap();
    let ng = family[0].presentation().num_generators();
    let mut action = vec![Matrix::zeros(d, d); ng];
    for (g, a) in action.iter_mut().enumerate() {
        for (i, &al) in order.iter().enumerate() {
            a.set_block(off[i], off[i], &family[al].action()[g]);
        }
        for (k, psi) in psis.iter().enumerate() {
            let v = &psi.values[g];
            if v.shape() != (family[order[k + 1]].dim(), family[order[k]].dim()) {
                return Err(Error::Shape(format!("cocycle for level {} has the wrong shape", k + 2)));
            }
            a.set_block(off[k + 1], off[k], v);
        }
    }
    Ok(action)
}

/// Fill the blocks `(t, s)` with `t - s ≥ start` of a block lower
/// triangular action so that every relation holds, one off-diagonal at a
/// time. Each block solves a linear cocycle equation whose right hand side
/// depends only on blocks closer to the diagonal. Fails with `Obstructed`
/// when some equation has no solution.
pub fn complete_block_action<F: Field>(diag: &[FdModule<F>], action: &mut [Matrix<F>], start: usize) -> Result<()> {
    let n = diag.len();
    let Some(first) = diag.first() else { return Ok(()) };
    let pres = first.presentation().clone();
    let mut off = vec![0];
    for m in diag {
        off.push(off.last().unwrap() + m.dim());
    }
    let d = *off.last().unwrap();
    for gap in start..n {
        let rel_vals: Vec<Matrix<F>> = pres.relations.iter().map(|r| r.eval(action, d)).collect();
        for t in gap..n {
            let s = t - gap;
            let (ms, mt) = (&diag[s], &diag[t]);
            let sz = ms.dim() * mt.dim();
            if sz == 0 {
                continue;
            }
            let mut rhs = Vec::with_capacity(rel_vals.len() * sz);
            for rv in &rel_vals {
                let block = rv.submatrix(off[t], off[t + 1], off[s], off[s + 1]);
                rhs.extend(block.vec().into_iter().map(|x| -x));
            }
            if rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let z = cocycle_matrix(ms, mt);
            let x = z
                .solve(&rhs)
                .ok_or_else(|| Error::Obstructed(format!("no correction for block ({}, {})", t + 1, s + 1)))?;
            let corr = Cocycle::from_vec(&x, ms, mt);
            for (g, a) in action.iter_mut().enumerate() {
                let cur = a.submatrix(off[t], off[t + 1], off[s], off[s + 1]);
                a.set_block(off[t], off[s], &cur.add(&corr.values[g]));
            }
        }
    }
    if let Some(r) = pres.relations.iter().find(|r| !r.eval(action, d).is_zero()) {
        return Err(Error::Obstructed(format!("relation {} survives", r.render(&pres.generators))));
    }
    Ok(())
}

/// Order vector and adapted basis (columns) of a composition series.
fn composition_basis<F: Field>(family: &FamilyRef<F>, m: &FdModule<F>) -> Result<(Vec<usize>, Matrix<F>)> {
    if m.dim() == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }
    for (a, s) in family.iter().enumerate() {
        let Some(phi) = crate::fdmod::hom_space(s, m)?.into_iter().next() else {
            continue;
        };
        let sub = phi.column_basis();
        if sub.cols() != s.dim() {
            continue;
        }
        let (q, quo) = m.quotient(&sub)?;
        let (mut order, pq) = composition_basis(family, &q)?;
        order.push(a);
        let top = quo.section.mul(&pq);
        return Ok((order, Matrix::hstack(&[&top, &phi])));
    }
    Err(Error::InvalidCofiltration("module is not an iterated extension of the family".into()))
}

/// Iterated extension with the given cocycles on the subdiagonal and zero
/// elsewhere. Fails with `RelationViolated` when the chain needs higher
/// corrections; see [`build_chain_extension_corrected`].
pub fn build_chain_extension<F: Field>(
    family: &FamilyRef<F>,
    order: &[usize],
    psis: &[Cocycle<F>],
) -> Result<CofilteredModule<F>> {
    let action = assemble_chain(family, order, psis)?;
    let m = FdModule::new(family[0].presentation().clone(), action)?;
    CofilteredModule::from_triangular(family.clone(), order.to_vec(), m)
}

/// As [`build_chain_extension`], solving for blocks two or more steps
/// below the diagonal when the plain assembly violates a relation.
pub fn build_chain_extension_corrected<F: Field>(
    family: &FamilyRef<F>,
    order: &[usize],
    psis: &[Cocycle<F>],
) -> Result<CofilteredModule<F>> {
    let mut action = assemble_chain(family, order, psis)?;
    let diag: Vec<FdModule<F>> = order.iter().map(|&a| family[a].clone()).collect();
    complete_block_action(&diag, &mut action, 2)?;
    let m = FdModule::new(family[0].presentation().clone(), action)?;
    CofilteredModule::from_triangular(family.clone(), order.to_vec(), m)
}

impl<F: Field> CofilteredModule<F> {
    pub fn new(
        family: FamilyRef<F>,
        order: Vec<usize>,
        levels: Vec<FdModule<F>>,
        surjections: Vec<Matrix<F>>,
        idents: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let x = CofilteredModule { family, order, levels, surjections, idents };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        check_order(&self.family, &self.order)?;
        let n = self.order.len();
        if self.levels.len() != n + 1 || self.surjections.len() != n || self.idents.len() != n {
            return Err(invalid("level, surjection and identification counts must match the length"));
        }
        if self.levels[0].dim() != 0 {
            return Err(invalid("C_0 must be zero"));
        }
        for i in 1..=n {
            let (c, cprev) = (&self.levels[i], &self.levels[i - 1]);
            let k = &self.family[self.order[i - 1]];
            if !same_presentation(c, k) {
                return Err(Error::PresentationMismatch);
            }
            let f = &self.surjections[i - 1];
            if !is_hom(c, cprev, f) {
                return Err(invalid(format!("f_{i} is not a module map")));
            }
            if f.rank() != cprev.dim() {
                return Err(invalid(format!("f_{i} is not surjective")));
            }
            let iota = &self.idents[i - 1];
            if !is_hom(k, c, iota) || iota.rank() != k.dim() {
                return Err(invalid(format!("identification {i} is not an injective module map")));
            }
            if c.dim() != cprev.dim() + k.dim() || !f.mul(iota).is_zero() {
                return Err(invalid(format!("identification {i} does not hit ker f_{i}")));
            }
        }
        Ok(())
    }

    /// Reads the cofiltration off a block lower triangular action on
    /// `K_1 ⊕ … ⊕ K_n`.
    pub fn from_triangular(family: FamilyRef<F>, order: Vec<usize>, module: FdModule<F>) -> Result<Self> {
        check_order(&family, &order)?;
        let off = offsets(&family, &order);
        let n = order.len();
        if module.dim() != off[n] {
            return Err(Error::NotTriangular(format!("dimension {} but factors sum to {}", module.dim(), off[n])));
        }
        for (g, a) in module.action().iter().enumerate() {
            for r in 0..n {
                for c in r + 1..n {
                    if !a.submatrix(off[r], off[r + 1], off[c], off[c + 1]).is_zero() {
                        return Err(Error::NotTriangular(format!("block ({}, {}) of generator {g}", r + 1, c + 1)));
                    }
                }
                if a.submatrix(off[r], off[r + 1], off[r], off[r + 1]) != family[order[r]].action()[g] {
                    return Err(Error::NotTriangular(format!("diagonal block {} of generator {g}", r + 1)));
                }
            }
        }
        let pres = module.presentation().clone();
        let mut levels = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let d = off[i];
            let action = module.action().iter().map(|a| a.submatrix(0, d, 0, d)).collect();
            levels.push(FdModule::new_unchecked(pres.clone(), action)?);
        }
        let mut surjections = Vec::new();
        let mut idents = Vec::new();
        for i in 1..=n {
            surjections.push(Matrix::from_fn(off[i - 1], off[i], |r, c| if r == c { F::one() } else { F::zero() }));
            idents.push(Matrix::from_fn(off[i], off[i] - off[i - 1], |r, c| {
                if r == off[i - 1] + c { F::one() } else { F::zero() }
            }));
        }
        Self::new(family, order, levels, surjections, idents)
    }

    /// All cocycles zero: `M = ⊕ M_{α(i)}`.
    pub fn split(family: FamilyRef<F>, order: Vec<usize>) -> Result<Self> {
        let psis: Vec<Cocycle<F>> = order.windows(2).map(|w| Cocycle::zero(&family[w[0]], &family[w[1]])).collect();
        if order.is_empty() {
            let pres = family.first().ok_or_else(|| invalid("empty family"))?.presentation().clone();
            return Self::new(family, order, vec![FdModule::zero(pres)], Vec::new(), Vec::new());
        }
        build_chain_extension(&family, &order, &psis)
    }

    /// Some cofiltration of `m` by family members: peel off a simple
    /// submodule isomorphic to a member, recurse on the quotient. The basis
    /// of the result lifts the quotient's adapted basis and appends the
    /// submodule last.
    pub fn from_composition_series(family: FamilyRef<F>, m: &FdModule<F>) -> Result<Self> {
        let (order, p) = composition_basis(&family, m)?;
        let t = m.change_basis(&p)?;
        Self::from_triangular(family, order, t)?.transport(&p.inverse().expect("adapted basis"))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn family(&self) -> &FamilyRef<F> {
        &self.family
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Extension type with vertices labelled `1, 2, …` by family index.
    pub fn extension_type(&self) -> OrderedQuiver {
        OrderedQuiver::from_order_vector(self.order.iter().map(|a| a + 1).collect())
    }

    pub fn module(&self) -> &FdModule<F> {
        &self.levels[self.order.len()]
    }

    pub fn level(&self, i: usize) -> &FdModule<F> {
        &self.levels[i]
    }

    pub fn surjection(&self, i: usize) -> &Matrix<F> {
        &self.surjections[i - 1]
    }

    pub fn ident(&self, i: usize) -> &Matrix<F> {
        &self.idents[i - 1]
    }

    pub fn factor(&self, i: usize) -> &FdModule<F> {
        &self.family[self.order[i - 1]]
    }

    /// Composite `M → C_i`.
    pub fn projection_to(&self, i: usize) -> Matrix<F> {
        let n = self.len();
        let mut p = Matrix::identity(self.module().dim());
        for j in (i + 1..=n).rev() {
            p = self.surjections[j - 1].mul(&p);
        }
        p
    }

    /// Same cofiltration after the change of basis `x = P x'` on `M`.
    pub fn transport(&self, p: &Matrix<F>) -> Result<Self> {
        let n = self.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let inv = p.inverse().ok_or_else(|| Error::Invalid("singular change of basis".into()))?;
        let mut x = self.clone();
        x.levels[n] = self.levels[n].change_basis(p)?;
        x.surjections[n - 1] = self.surjections[n - 1].mul(p);
        x.idents[n - 1] = inv.mul(&self.idents[n - 1]);
        x.validate()?;
        Ok(x)
    }

    /// A linear section of `f_i`: free variables set to zero.
    fn section(&self, i: usize) -> Matrix<F> {
        let f = &self.surjections[i - 1];
        f.solve_matrix(&Matrix::identity(f.rows())).expect("f_i is surjective")
    }

    /// `ξ_i` for `2 ≤ i ≤ n`, via the section of [`Self::section`], and its
    /// restriction `τ_i` along `ι_{i-1}`.
    pub fn extract_classes(&self, i: usize) -> Result<Classes<F>> {
        if i < 2 || i > self.len() {
            return Err(Error::Invalid(format!("class index {i} outside 2..={}", self.len())));
        }
        let (c, cprev) = (&self.levels[i], &self.levels[i - 1]);
        let s = self.section(i);
        let iota = &self.idents[i - 1];
        let k = self.factor(i);
        let values = c
            .action()
            .iter()
            .zip(cprev.action())
            .map(|(a, b)| {
                let v = a.mul(&s).sub(&s.mul(b));
                iota.solve_matrix(&v).expect("image lies in K_i")
            })
            .collect();
        let xi = Cocycle { values };
        let xi_coords = ext1(cprev, k)?.class_of(&xi)?;
        let tau = xi.compose_right(&self.idents[i - 2]);
        let tau_coords = ext1(self.factor(i - 1), k)?.class_of(&tau)?;
        Ok(Classes { xi, xi_coords, tau, tau_coords })
    }

    /// Matrix of `Ext¹(C_{i-1}, K) → Ext¹(M_{α(i-1)}, K)`, restriction along
    /// `ι_{i-1}`, in the `ext1` bases.
    pub fn pushforward_ext(&self, i: usize, k: &FdModule<F>) -> Result<Matrix<F>> {
        if i < 2 || i > self.len() {
            return Err(Error::Invalid(format!("index {i} outside 2..={}", self.len())));
        }
        let big = ext1(&self.levels[i - 1], k)?;
        let small = ext1(self.factor(i - 1), k)?;
        let cols = big
            .basis
            .iter()
            .map(|b| small.class_of(&b.compose_right(&self.idents[i - 2])))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols, small.dim))
    }

    /// `F_i = ker(M → C_i)`.
    pub fn to_filtered(&self) -> Result<FilteredModule<F>> {
        let n = self.len();
        let mut flag = Vec::with_capacity(n + 1);
        let mut idents = Vec::with_capacity(n);
        for i in 0..=n {
            let p = self.projection_to(i);
            flag.push(if i == n { Matrix::zeros(self.module().dim(), 0) } else { p.kernel() });
            if i >= 1 {
                idents.push(p.solve_matrix(&self.idents[i - 1]).expect("projections are surjective"));
            }
        }
        FilteredModule::new(self.family.clone(), self.order.clone(), self.module().clone(), flag, idents)
    }
}

impl<F: Field> FilteredModule<F> {
    pub fn new(
        family: FamilyRef<F>,
        order: Vec<usize>,
        module: FdModule<F>,
        flag: Vec<Matrix<F>>,
        idents: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let x = FilteredModule { family, order, module, flag, idents };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        check_order(&self.family, &self.order)?;
        let n = self.order.len();
        let d = self.module.dim();
        if self.flag.len() != n + 1 || self.idents.len() != n {
            return Err(invalid("flag and identification counts must match the length"));
        }
        if self.flag[0].rank() != d || self.flag[n].rank() != 0 {
            return Err(invalid("flag must run from M down to 0"));
        }
        for (i, fi) in self.flag.iter().enumerate() {
            self.module.restrict(fi).map_err(|_| invalid(format!("F_{i} is not a submodule")))?;
        }
        for i in 1..=n {
            let (upper, lower) = (&self.flag[i - 1], &self.flag[i]);
            let k = &self.family[self.order[i - 1]];
            let iota = &self.idents[i - 1];
            if iota.shape() != (d, k.dim()) || lower.rank() + k.dim() != upper.rank() {
                return Err(invalid(format!("factor {i} has the wrong size")));
            }
            if iota.columns().iter().any(|c| !in_span(upper, c)) {
                return Err(invalid(format!("identification {i} leaves F_{}", i - 1)));
            }
            if Matrix::hstack(&[lower, iota]).rank() != upper.rank() {
                return Err(invalid(format!("identification {i} is not onto F_{}/F_{i}", i - 1)));
            }
            for (a, b) in self.module.action().iter().zip(k.action()) {
                let defect = a.mul(iota).sub(&iota.mul(b));
                if defect.columns().iter().any(|c| !in_span(lower, c)) {
                    return Err(invalid(format!("identification {i} is not a module map modulo F_{i}")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn module(&self) -> &FdModule<F> {
        &self.module
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn family(&self) -> &FamilyRef<F> {
        &self.family
    }

    pub fn flag(&self, i: usize) -> &Matrix<F> {
        &self.flag[i]
    }

    pub fn ident(&self, i: usize) -> &Matrix<F> {
        &self.idents[i - 1]
    }

    /// `C_i = M / F_i`.
    pub fn to_cofiltered(&self) -> Result<CofilteredModule<F>> {
        let n = self.len();
        let mut levels = Vec::with_capacity(n + 1);
        let mut quots = Vec::with_capacity(n + 1);
        for fi in &self.flag {
            let (c, q) = self.module.quotient(fi)?;
            levels.push(c);
            quots.push(q);
        }
        let mut surjections = Vec::with_capacity(n);
        let mut idents = Vec::with_capacity(n);
        for i in 1..=n {
            surjections.push(quots[i - 1].projection.mul(&quots[i].section));
            idents.push(quots[i].projection.mul(&self.idents[i - 1]));
        }
        CofilteredModule::new(self.family.clone(), self.order.clone(), levels, surjections, idents)
    }
}

/// Cofiltration of `M` from `0 → M' → M → M'' → 0`: the factors of `M''`
/// come first, then those of `M'`. `f: M' → M`, `g: M → M''`.
pub fn splice<F: Field>(
    inner: &CofilteredModule<F>,
    outer: &CofilteredModule<F>,
    module: &FdModule<F>,
    f: &Matrix<F>,
    g: &Matrix<F>,
) -> Result<CofilteredModule<F>> {
    let (mi, mo) = (inner.module(), outer.module());
    if !(Arc::ptr_eq(inner.family(), outer.family()) || inner.family() == outer.family()) {
        return Err(Error::Invalid("inner and outer use different families".into()));
    }
    if !is_hom(mi, module, f) || f.rank() != mi.dim() {
        return Err(Error::NotExact("f is not an injective module map".into()));
    }
    if !is_hom(module, mo, g) || g.rank() != mo.dim() {
        return Err(Error::NotExact("g is not a surjective module map".into()));
    }
    if !g.mul(f).is_zero() || mi.dim() + mo.dim() != module.dim() {
        return Err(Error::NotExact("im f differs from ker g".into()));
    }
    let (fi, fo) = (inner.to_filtered()?, outer.to_filtered()?);
    let (ni, no) = (fi.len(), fo.len());
    let kerg = g.kernel();
    let mut flag = Vec::with_capacity(ni + no + 1);
    let mut idents = Vec::with_capacity(ni + no);
    for i in 0..=no {
        // g^{-1}(F''_i) = ker g + lifts of F''_i
        let fo_i = fo.flag(i);
        let lifts = if fo_i.cols() == 0 {
            Matrix::zeros(module.dim(), 0)
        } else {
            g.solve_matrix(fo_i).expect("g is surjective")
        };
        flag.push(Matrix::hstack(&[&kerg, &lifts]).column_basis());
        if i >= 1 {
            idents.push(g.solve_matrix(fo.ident(i)).expect("g is surjective"));
        }
    }
    for i in 1..=ni {
        flag.push(f.mul(fi.flag(i)));
        idents.push(f.mul(fi.ident(i)));
    }
    let mut order = outer.order().to_vec();
    order.extend_from_slice(inner.order());
    FilteredModule::new(outer.family().clone(), order, module.clone(), flag, idents)?.to_cofiltered()
}
