//! Finite dimensional p-pointed algebras and the algebras `k[Γ]`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{span, Matrix};
use crate::quiver::OrderedQuiver;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElem {
    pub label: String,
    /// `(i, j)`: the element lies in `e_i S e_j`
    pub slot: (usize, usize),
    pub degree: usize,
}

/// A finite dimensional p-pointed algebra given by a basis adapted to the
/// decomposition `S = ⊕ S_ij` and sparse structure constants.
///
/// Basis elements of degree 0 are the idempotents `e_1, …, e_p`; the
/// radical is spanned by the elements of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedAlgebra<F> {
    p: usize,
    basis: Vec<BasisElem>,
    table: BTreeMap<(usize, usize), Vec<(usize, F)>>,
    /// `I^n = 0` is claimed for this `n`
    nilpotency: Option<usize>,
    /// for `k[Γ]`: the ordered quiver and the index sequence of each basis
    /// element (empty for idempotents)
    gamma: Option<(OrderedQuiver, Vec<Vec<usize>>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

impl<F: Field> PointedAlgebra<F> {
    /// Raw constructor; run [`PointedAlgebra::check_axioms`] before trusting
    /// the result.
    pub fn from_parts(
        p: usize,
        basis: Vec<BasisElem>,
        table: BTreeMap<(usize, usize), Vec<(usize, F)>>,
        nilpotency: Option<usize>,
    ) -> Self {
        let table = table
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        PointedAlgebra { p, basis, table, nilpotency, gamma: None }
    }

    /// The split algebra `k^p`.
    pub fn trivial(p: usize) -> Self {
        let basis = (0..p).map(|i| BasisElem { label: format!("e{}", i + 1), slot: (i, i), degree: 0 }).collect();
        let table = (0..p).map(|i| ((i, i), vec![(i, F::one())])).collect();
        Self::from_parts(p, basis, table, Some(1))
    }

    pub fn num_points(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn nilpotency(&self) -> Option<usize> {
        self.nilpotency
    }

    pub fn gamma(&self) -> Option<&OrderedQuiver> {
        self.gamma.as_ref().map(|(g, _)| g)
    }

    /// Index sequence of a `k[Γ]` basis element.
    pub fn sequence(&self, b: usize) -> Option<&[usize]> {
        self.gamma.as_ref().map(|(_, s)| s[b].as_slice())
    }

    pub fn index_of_sequence(&self, seq: &[usize]) -> Option<usize> {
        let (_, seqs) = self.gamma.as_ref()?;
        if seq.is_empty() {
            return None;
        }
        seqs.iter().position(|s| s == seq)
    }

    /// Basis index of the idempotent `e_i`.
    pub fn idempotent(&self, i: usize) -> usize {
        self.basis
            .iter()
            .position(|b| b.degree == 0 && b.slot == (i, i))
            .unwrap_or_else(|| panic!("no idempotent for point {i}"))
    }

    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.basis[b].degree >= 1).collect()
    }

    pub fn basis_in_slot(&self, slot: (usize, usize)) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.basis[b].slot == slot).collect()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Product of two basis elements as a sparse combination.
    pub fn mul_basis(&self, a: usize, b: usize) -> &[(usize, F)] {
        self.table.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, F)>)> {
        self.table.iter()
    }

    pub fn basis_vector(&self, b: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[b] = F::one();
        v
    }

    pub fn one(&self) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for i in 0..self.p {
            v[self.idempotent(i)] = F::one();
        }
        v
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, a: &[F], b: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (k, c) in self.mul_basis(i, j) {
                    out[*k] = out[*k].clone() + x.clone() * y.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Span of `I^m` as a column basis, for `m ≥ 1`.
    fn radical_power(&self, m: usize) -> Matrix<F> {
        let n = self.dim();
        let rad: Vec<Vec<F>> = self.radical_basis().into_iter().map(|b| self.basis_vector(b)).collect();
        let mut cur = span(&rad, n);
        for _ in 1..m {
            if cur.cols() == 0 {
                break;
            }
            let mut prods = Vec::new();
            for c in cur.columns() {
                for r in &rad {
                    prods.push(self.multiply(&c, r));
                }
            }
            cur = span(&prods, n);
        }
        cur
    }

    /// `dim I^m` for `m = 0, 1, …` down to the first zero.
    pub fn radical_filtration(&self) -> Vec<usize> {
        let mut out = vec![self.dim()];
        let mut m = 1;
        loop {
            let d = self.radical_power(m).cols();
            out.push(d);
            if d == 0 || m > self.dim() {
                break;
            }
            m += 1;
        }
        out
    }

    /// All violated axioms; empty when the algebra is a valid object.
    pub fn check_axioms(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let n = self.dim();
        let viol = |axiom: &str, witness: Vec<usize>| AxiomViolation { axiom: axiom.to_string(), witness };

        let idems: Vec<usize> = (0..n).filter(|&b| self.basis[b].degree == 0).collect();
        let mut seen = vec![false; self.p];
        for &e in &idems {
            let (i, j) = self.basis[e].slot;
            if i != j || i >= self.p || seen[i] {
                out.push(viol("idempotent slots", vec![e]));
            } else {
                seen[i] = true;
            }
        }
        if idems.len() != self.p || seen.iter().any(|s| !s) {
            out.push(viol("idempotent count", idems.clone()));
            return out;
        }
        for b in 0..n {
            let (i, j) = self.basis[b].slot;
            if i >= self.p || j >= self.p {
                out.push(viol("slot range", vec![b]));
                return out;
            }
        }
        for i in 0..self.p {
            for j in 0..self.p {
                let (ei, ej) = (self.idempotent(i), self.idempotent(j));
                let prod = self.multiply(&self.basis_vector(ei), &self.basis_vector(ej));
                let want = if i == j { self.basis_vector(ei) } else { vec![F::zero(); n] };
                if prod != want {
                    out.push(viol("idempotent orthogonality", vec![ei, ej]));
                }
            }
        }
        let one = self.one();
        for b in 0..n {
            let v = self.basis_vector(b);
            if self.multiply(&one, &v) != v || self.multiply(&v, &one) != v {
                out.push(viol("unit", vec![b]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (i, j) = self.basis[a].slot;
                let (k, l) = self.basis[b].slot;
                for (c, _) in self.mul_basis(a, b) {
                    if j != k || self.basis[*c].slot != (i, l) {
                        out.push(viol("slot rule", vec![a, b]));
                        break;
                    }
                }
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                let ab = self.multiply(&self.basis_vector(a), &self.basis_vector(b));
                for c in 0..n {
                    let vc = self.basis_vector(c);
                    let lhs = self.multiply(&ab, &vc);
                    let bc = self.multiply(&self.basis_vector(b), &vc);
                    let rhs = self.multiply(&self.basis_vector(a), &bc);
                    if lhs != rhs {
                        out.push(viol("associativity", vec![a, b, c]));
                        break 'assoc;
                    }
                }
            }
        }
        let rad = self.radical_basis();
        let is_rad = |v: &[F]| v.iter().enumerate().all(|(k, x)| x.is_zero() || self.basis[k].degree >= 1);
        for &r in &rad {
            for b in 0..n {
                let l = self.multiply(&self.basis_vector(b), &self.basis_vector(r));
                let rr = self.multiply(&self.basis_vector(r), &self.basis_vector(b));
                if !is_rad(&l) || !is_rad(&rr) {
                    out.push(viol("radical ideal", vec![b, r]));
                }
            }
        }
        let bound = self.nilpotency.unwrap_or(n + 1).max(1);
        if self.radical_power(bound).cols() != 0 {
            out.push(viol("radical nilpotency", vec![bound]));
        }
        out
    }
}

/// Strictly increasing, slot-composable arrow index sequences of `Γ`.
pub fn monomial_sequences(g: &OrderedQuiver) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut out = Vec::new();
    fn rec(g: &OrderedQuiver, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        for next in last + 1..n {
            if g.alpha(last + 1) == g.alpha(next) {
                cur.push(next);
                rec(g, n, cur, out);
                cur.pop();
            }
        }
    }
    for start in 1..n {
        let mut cur = vec![start];
        rec(g, n, &mut cur, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// True when the sequence is a run of consecutive indices.
pub fn is_run(seq: &[usize]) -> bool {
    seq.windows(2).all(|w| w[1] == w[0] + 1)
}

fn monomial_label(seq: &[usize], n: usize) -> String {
    let parts: Vec<String> = seq
        .iter()
        .rev()
        .map(|&j| if n <= 9 { format!("x{}{}", j, j + 1) } else { format!("x{}_{}", j, j + 1) })
        .collect();
    if n <= 9 { parts.concat() } else { parts.join("*") }
}

/// `k[Γ]`: generators `x_{i-1,i}` in slot `(α(i), α(i-1))` subject to
/// `x_{j-1,j} x_{i-1,i} = 0` unless `i < j`.
///
/// Points are the distinct labels of `Γ` in increasing order. The basis is
/// the idempotents followed by the nonzero monomials ordered by length and
/// then lexicographically by index sequence.
pub fn build_k_gamma<F: Field>(g: &OrderedQuiver) -> Result<PointedAlgebra<F>> {
    let n = g.len();
    if n == 0 {
        return Err(Error::Invalid("k[Γ] needs a nonempty ordered quiver".into()));
    }
    let verts = g.vertices();
    let pt = |label: usize| verts.iter().position(|&v| v == label).unwrap();
    let p = verts.len();
    let mut basis: Vec<BasisElem> =
        verts.iter().enumerate().map(|(i, v)| BasisElem { label: format!("e{v}"), slot: (i, i), degree: 0 }).collect();
    let mut seqs: Vec<Vec<usize>> = vec![Vec::new(); p];
    for s in monomial_sequences(g) {
        let slot = (pt(g.alpha(*s.last().unwrap() + 1)), pt(g.alpha(s[0])));
        basis.push(BasisElem { label: monomial_label(&s, n), slot, degree: s.len() });
        seqs.push(s);
    }
    let index: BTreeMap<Vec<usize>, usize> =
        seqs.iter().enumerate().skip(p).map(|(i, s)| (s.clone(), i)).collect();
    let mut table = BTreeMap::new();
    let dim = basis.len();
    for a in 0..dim {
        for b in 0..dim {
            let (sa, sb) = (&basis[a].slot, &basis[b].slot);
            if sa.1 != sb.0 {
                continue;
            }
            let prod = if a < p {
                Some(b)
            } else if b < p {
                Some(a)
            } else {
                // x_A x_B: B acts first, so the result sequence is B then A
                let (qa, qb) = (&seqs[a], &seqs[b]);
                if qb.last().unwrap() < &qa[0] {
                    let mut s = qb.clone();
                    s.extend_from_slice(qa);
                    index.get(&s).copied()
                } else {
                    None
                }
            };
            if let Some(c) = prod {
                table.insert((a, b), vec![(c, F::one())]);
            }
        }
    }
    let mut alg = PointedAlgebra::from_parts(p, basis, table, Some(n));
    alg.gamma = Some((g.clone(), seqs));
    Ok(alg)
}

/// A morphism of pointed algebras given by its matrix in the two bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedMorphism<F> {
    /// `dim target × dim source`
    pub matrix: Matrix<F>,
}

impl<F: Field> PointedMorphism<F> {
    pub fn identity(s: &PointedAlgebra<F>) -> Self {
        PointedMorphism { matrix: Matrix::identity(s.dim()) }
    }

    /// Kill the radical: `S → k^p`.
    pub fn reduction(s: &PointedAlgebra<F>) -> (PointedAlgebra<F>, Self) {
        let t = PointedAlgebra::trivial(s.num_points());
        let mut m = Matrix::zeros(s.num_points(), s.dim());
        for i in 0..s.num_points() {
            m[(i, s.idempotent(i))] = F::one();
        }
        (t, PointedMorphism { matrix: m })
    }

    /// Inclusion `k^p → S`.
    pub fn inclusion(s: &PointedAlgebra<F>) -> Self {
        let mut m = Matrix::zeros(s.dim(), s.num_points());
        for i in 0..s.num_points() {
            m[(s.idempotent(i), i)] = F::one();
        }
        PointedMorphism { matrix: m }
    }

    /// Build a morphism out of `k[Γ]` from the images of the arrow
    /// generators `x_{i,i+1}` (`images[i-1]`), extended multiplicatively.
    pub fn from_generator_images(
        src: &PointedAlgebra<F>,
        dst: &PointedAlgebra<F>,
        images: &[Vec<F>],
    ) -> Result<Self> {
        let (_, seqs) = src.gamma.as_ref().ok_or_else(|| Error::Invalid("source is not a k[Γ]".into()))?;
        let mut cols = Vec::with_capacity(src.dim());
        for b in 0..src.dim() {
            if b < src.num_points() {
                cols.push(dst.basis_vector(dst.idempotent(b)));
                continue;
            }
            let mut acc: Option<Vec<F>> = None;
            for &j in &seqs[b] {
                let img = images.get(j - 1).ok_or_else(|| Error::Invalid(format!("missing image for arrow {j}")))?;
                acc = Some(match acc {
                    None => img.clone(),
                    Some(prev) => dst.multiply(img, &prev),
                });
            }
            cols.push(acc.unwrap());
        }
        let phi = PointedMorphism { matrix: Matrix::from_columns(&cols, dst.dim()) };
        phi.check(src, dst)?;
        Ok(phi)
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, first: &Self) -> Self {
        PointedMorphism { matrix: self.matrix.mul(&first.matrix) }
    }

    /// Points, multiplicativity and radicals.
    pub fn check(&self, src: &PointedAlgebra<F>, dst: &PointedAlgebra<F>) -> Result<()> {
        if self.matrix.shape() != (dst.dim(), src.dim()) {
            return Err(Error::NotPointed("matrix shape".into()));
        }
        if src.num_points() != dst.num_points() {
            return Err(Error::NotPointed("point counts differ".into()));
        }
        for i in 0..src.num_points() {
            if self.apply(&src.basis_vector(src.idempotent(i))) != dst.basis_vector(dst.idempotent(i)) {
                return Err(Error::NotPointed(format!("e{} is not preserved", i + 1)));
            }
        }
        for r in src.radical_basis() {
            let img = self.apply(&src.basis_vector(r));
            if img.iter().enumerate().any(|(k, x)| !x.is_zero() && dst.basis()[k].degree == 0) {
                return Err(Error::NotPointed(format!("radical element {} leaves the radical", src.basis()[r].label)));
            }
        }
        for a in 0..src.dim() {
            for b in 0..src.dim() {
                let lhs = self.apply(&src.multiply(&src.basis_vector(a), &src.basis_vector(b)));
                let rhs = dst.multiply(&self.apply(&src.basis_vector(a)), &self.apply(&src.basis_vector(b)));
                if lhs != rhs {
                    return Err(Error::NotPointed(format!(
                        "not multiplicative on ({}, {})",
                        src.basis()[a].label,
                        src.basis()[b].label
                    )));
                }
            }
        }
        Ok(())
    }
}
