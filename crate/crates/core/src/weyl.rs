//! The first Weyl algebra `D = k⟨t, ∂⟩/(∂t − t∂ − 1)` with its weight
//! grading (`t` has weight 1, `∂` weight −1), the words `w(α, n)`, and
//! finite weight windows of graded cyclic modules `D/DP`.
//!
//! A window of `D/DP` at Bernstein bound `B` is, in each weight `w`, the
//! span of the monomials `t^i ∂^j` with `i − j = w`, `i + j ≤ B`, modulo the
//! multiples `t^a ∂^b P` of total degree at most `B`. Since the associated
//! graded of `D` is a domain this is exactly the `B`-th filtration piece of
//! `(D/DP)_w`, so its dimension increases to the true one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Interp};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::split_sign;
use crate::quiver::GabrielQuiver;

/// Normal form `Σ c_ij t^i ∂^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement<F> {
    terms: BTreeMap<(u32, u32), F>,
}

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn from_u128<F: Field>(x: u128) -> F {
    let base = F::from_i64(1 << 31);
    let mut out = F::zero();
    let mut scale = F::one();
    let mut x = x;
    while x > 0 {
        out = out + scale.clone() * F::from_i64((x % (1 << 31)) as i64);
        scale = scale * base.clone();
        x >>= 31;
    }
    out
}

impl<F: Field> WeylElement<F> {
    pub fn zero() -> Self {
        WeylElement { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c t^i ∂^j`.
    pub fn monomial(i: u32, j: u32, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        WeylElement { terms }
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, F::one())
    }

    pub fn d() -> Self {
        Self::monomial(0, 1, F::one())
    }

    /// `E = t∂`.
    pub fn euler() -> Self {
        Self::monomial(1, 1, F::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (u32, u32), c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (&k, x) in &self.terms {
            out.add_term(k, x.clone() * c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Uses `∂^b t^c = Σ_k C(b,k) C(c,k) k! t^{c−k} ∂^{b−k}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                let xy = x.clone() * y.clone();
                let mut fact = 1u128;
                for k in 0..=b.min(c) {
                    if k > 0 {
                        fact *= u128::from(k);
                    }
                    let coef: F = from_u128(binomial(b, k) * binomial(c, k) * fact);
                    out.add_term((a + c - k, b - k + d), xy.clone() * coef);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// Bernstein degree `max (i + j)`.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// The common weight `i − j` of all terms, if homogeneous and nonzero.
    pub fn weight(&self) -> Option<i64> {
        let mut ws = self.terms.keys().map(|&(i, j)| i64::from(i) - i64::from(j));
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    /// Terms by descending degree, then descending power of `t`; `∂` is
    /// written `D`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|x, y| (y.0 + y.1).cmp(&(x.0 + x.1)).then(y.0.cmp(&x.0)));
        let mut out = String::new();
        for (n, &&(i, j)) in keys.iter().enumerate() {
            let mut parts = Vec::new();
            for (sym, e) in [("t", i), ("D", j)] {
                match e {
                    0 => {}
                    1 => parts.push(sym.to_string()),
                    _ => parts.push(format!("{sym}^{e}")),
                }
            }
            let word = parts.join("*");
            let (neg, abs) = split_sign(&self.terms[&(i, j)]);
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (word.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&word),
                (false, false) => out.push_str(&format!("{abs}*{word}")),
            }
        }
        out
    }

    /// Rational combinations of `t`, `D` (or `∂`) and `E = t∂` with `^`
    /// powers; juxtaposed letters such as `tDt` multiply.
    pub fn parse(src: &str) -> Result<Self> {
        let src = src.replace('∂', "D");
        expr::parse(&src)?.eval(&WeylInterp::<F>(std::marker::PhantomData))
    }
}

struct WeylInterp<F>(std::marker::PhantomData<F>);

impl<F: Field> Interp for WeylInterp<F> {
    type V = WeylElement<F>;
    fn number(&self, lit: &str) -> Result<Self::V> {
        F::parse_exact(lit).map(WeylElement::constant).ok_or_else(|| Error::Parse(format!("bad scalar {lit}")))
    }
    fn ident(&self, name: &str) -> Result<Self::V> {
        let mut acc = WeylElement::constant(F::one());
        for c in name.chars() {
            let x = match c {
                't' => WeylElement::t(),
                'D' => WeylElement::d(),
                'E' => WeylElement::euler(),
                _ => return Err(Error::Parse(format!("unknown letter '{c}' in {name}: use t, D, E"))),
            };
            acc = acc.mul(&x);
        }
        Ok(acc)
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a.add(b)
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a.mul(b)
    }
    fn neg(&self, a: &Self::V) -> Self::V {
        a.scale(&-F::one())
    }
}

pub fn weyl_multiply<F: Field>(p: &WeylElement<F>, q: &WeylElement<F>) -> WeylElement<F> {
    p.mul(q)
}

/// Alternating word of length `n` in `t`, `∂` whose rightmost letter is `∂`
/// for `α = 0` and `t` for `α = 1`.
pub fn word_w<F: Field>(alpha: u8, n: usize) -> Result<WeylElement<F>> {
    if alpha > 1 || n == 0 {
        return Err(Error::Invalid("word_w needs α ∈ {0, 1} and n ≥ 1".into()));
    }
    let mut letters = Vec::with_capacity(n);
    let mut d = alpha == 0;
    for _ in 0..n {
        letters.push(if d { WeylElement::d() } else { WeylElement::t() });
        d = !d;
    }
    letters.reverse();
    Ok(letters.iter().fold(WeylElement::constant(F::one()), |acc, x| acc.mul(x)))
}

/// Generator of `M(α, n)`: `w(α, n)` for `α ∈ {0, 1}`, else `(E − α)^n`.
pub fn m_alpha_n<F: Field>(alpha: &F, n: usize) -> Result<WeylElement<F>> {
    if alpha.is_zero() {
        word_w(0, n)
    } else if alpha.is_one() {
        word_w(1, n)
    } else {
        Ok(WeylElement::euler().sub(&WeylElement::constant(alpha.clone())).pow(n as u32))
    }
}

/// Weight space data at a fixed bound.
struct WeightSpace<F> {
    monomials: Vec<(u32, u32)>,
    index: BTreeMap<(u32, u32), usize>,
    /// reduced multiples of `P`, one row per pivot
    rows: Matrix<F>,
    pivots: Vec<usize>,
    /// non-pivot monomials: the basis of the quotient
    standard: Vec<usize>,
}

impl<F: Field> WeightSpace<F> {
    fn new(p: &WeylElement<F>, pw: i64, pd: u32, w: i64, bound: u32) -> Self {
        // monomials by descending degree so that pivots sit on high degrees
        let mut monomials = Vec::new();
        let mut j: i64 = (-w).max(0);
        while w + 2 * j <= i64::from(bound) {
            monomials.push(((w + j) as u32, j as u32));
            j += 1;
        }
        monomials.reverse();
        let index: BTreeMap<(u32, u32), usize> = monomials.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut gens = Vec::new();
        if bound >= pd {
            // t^a ∂^b P has weight a − b + pw and degree a + b + pd
            let target = w - pw;
            let mut b: i64 = (-target).max(0);
            while target + 2 * b + i64::from(pd) <= i64::from(bound) {
                let a = target + b;
                let m = WeylElement::monomial(a as u32, b as u32, F::one()).mul(p);
                let mut row = vec![F::zero(); monomials.len()];
                for (k, c) in m.terms() {
                    row[index[k]] = c.clone();
                }
                gens.push(row);
                b += 1;
            }
        }
        let (rows, pivots) = if gens.is_empty() {
            (Matrix::zeros(0, monomials.len()), Vec::new())
        } else {
            let (r, piv) = Matrix::from_rows_with_cols(gens, monomials.len()).rref();
            (r.select_rows(&(0..piv.len()).collect::<Vec<_>>()), piv)
        };
        let standard = (0..monomials.len()).filter(|k| !pivots.contains(k)).collect();
        WeightSpace { monomials, index, rows, pivots, standard }
    }

    fn dim(&self) -> usize {
        self.standard.len()
    }

    fn max_standard_degree(&self) -> Option<u32> {
        self.standard.iter().map(|&k| self.monomials[k].0 + self.monomials[k].1).max()
    }

    /// Coordinates of an element of this weight on the standard monomials.
    fn reduce(&self, x: &WeylElement<F>) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); self.monomials.len()];
        for (k, c) in x.terms() {
            v[*self.index.get(k)?] = c.clone();
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = v[p].clone();
            if !c.is_zero() {
                for (k, x) in self.rows.row(r).iter().enumerate() {
                    v[k] = v[k].clone() - c.clone() * x.clone();
                }
            }
        }
        Some(self.standard.iter().map(|&k| v[k].clone()).collect())
    }
}

/// Weights `lo..=hi` of a graded module with the maps `t: w → w+1` and
/// `∂: w → w−1` between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedWindowModule<F> {
    pub lo: i64,
    pub hi: i64,
    pub bound: u32,
    pub dims: Vec<usize>,
    /// `t[k]: lo + k → lo + k + 1`
    #[serde(skip)]
    pub t: Vec<Matrix<F>>,
    /// `d[k]: lo + k + 1 → lo + k`
    #[serde(skip)]
    pub d: Vec<Matrix<F>>,
}

impl<F: Field> GradedWindowModule<F> {
    pub fn dim_at(&self, w: i64) -> usize {
        if w < self.lo || w > self.hi { 0 } else { self.dims[(w - self.lo) as usize] }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `∂t − t∂ = 1` on every weight where both composites stay inside.
    pub fn commutation_holds(&self) -> bool {
        (1..self.len().saturating_sub(1)).all(|k| {
            let dt = self.d[k].mul(&self.t[k]);
            let td = self.t[k - 1].mul(&self.d[k - 1]);
            dt.sub(&td).is_identity()
        })
    }

    /// Same data with the weights relabelled to start at `lo`.
    pub fn relabel(&self, lo: i64) -> Self {
        GradedWindowModule { lo, hi: lo + self.hi - self.lo, ..self.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if (self.lo, self.hi) != (other.lo, other.hi) {
            return Err(Error::Shape("windows over different weight ranges".into()));
        }
        let diag = |a: &[Matrix<F>], b: &[Matrix<F>]| a.iter().zip(b).map(|(x, y)| Matrix::block_diag(&[x, y])).collect();
        Ok(GradedWindowModule {
            lo: self.lo,
            hi: self.hi,
            bound: self.bound.min(other.bound),
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            t: diag(&self.t, &other.t),
            d: diag(&self.d, &other.d),
        })
    }

    /// `E = t∂` on weight `w`, defined for `lo < w ≤ hi`.
    pub fn euler_at(&self, w: i64) -> Option<Matrix<F>> {
        let k = (w - self.lo) as usize;
        (w > self.lo && w <= self.hi).then(|| self.t[k - 1].mul(&self.d[k - 1]))
    }
}

fn window_at<F: Field>(p: &WeylElement<F>, lo: i64, hi: i64, bound: u32) -> Result<Option<GradedWindowModule<F>>> {
    let pw = p.weight().ok_or_else(|| Error::NotHomogeneous(p.render()))?;
    let pd = p.degree().unwrap_or(0);
    let spaces: Vec<WeightSpace<F>> = (lo..=hi).map(|w| WeightSpace::new(p, pw, pd, w, bound)).collect();
    if spaces.iter().any(|s| s.max_standard_degree().is_some_and(|d| d + 1 > bound)) {
        return Ok(None);
    }
    let induced = |x: &WeylElement<F>, from: &WeightSpace<F>, to: &WeightSpace<F>| -> Matrix<F> {
        let cols: Vec<Vec<F>> = from
            .standard
            .iter()
            .map(|&k| {
                let (i, j) = from.monomials[k];
                to.reduce(&x.mul(&WeylElement::monomial(i, j, F::one()))).expect("degree stays within the bound")
            })
            .collect();
        Matrix::from_columns(&cols, to.dim())
    };
    let (t, d) = (WeylElement::t(), WeylElement::d());
    let n = spaces.len();
    Ok(Some(GradedWindowModule {
        lo,
        hi,
        bound,
        dims: spaces.iter().map(|s| s.dim()).collect(),
        t: (0..n - 1).map(|k| induced(&t, &spaces[k], &spaces[k + 1])).collect(),
        d: (0..n - 1).map(|k| induced(&d, &spaces[k + 1], &spaces[k])).collect(),
    }))
}

/// Hard cap on the Bernstein bound during escalation.
pub const MAX_BOUND: u32 = 160;

/// Window of `D/DP` on weights `lo..=hi`. The bound is raised in steps of
/// two from `bound` until the dimensions agree at `B`, `B + 2`, `B + 4`;
/// the window at `B + 4` is returned.
pub fn window_module<F: Field>(p: &WeylElement<F>, lo: i64, hi: i64, bound: u32) -> Result<GradedWindowModule<F>> {
    if p.weight().is_none() {
        return Err(Error::NotHomogeneous(p.render()));
    }
    if lo > hi {
        return Err(Error::Invalid("empty weight range".into()));
    }
    let mut b = bound.max(p.degree().unwrap_or(0));
    let mut history: Vec<Vec<usize>> = Vec::new();
    while b <= MAX_BOUND {
        match window_at(p, lo, hi, b)? {
            Some(win) => {
                history.push(win.dims.clone());
                let k = history.len();
                if k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3] {
                    debug_assert!(win.commutation_holds());
                    return Ok(win);
                }
            }
            None => history.clear(),
        }
        b += 2;
    }
    Err(Error::WindowTooSmall(format!("dimensions of D/D({}) did not stabilise below bound {MAX_BOUND}", p.render())))
}

/// Default starting bound for a window: enough to see every weight once.
pub fn default_bound(lo: i64, hi: i64) -> u32 {
    (lo.unsigned_abs().max(hi.unsigned_abs()) as u32) + 2
}

/// Solve the linear system `f(x) = 0` for `x` in `F^n`, `f` linear.
fn kernel_of<F: Field>(n: usize, f: impl Fn(&[F]) -> Vec<F>) -> Vec<Vec<F>> {
    let cols: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let mut e = vec![F::zero(); n];
            e[k] = F::one();
            f(&e)
        })
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    if rows == 0 {
        return (0..n)
            .map(|k| {
                let mut e = vec![F::zero(); n];
                e[k] = F::one();
                e
            })
            .collect();
    }
    Matrix::from_columns(&cols, rows).nullspace()
}

fn rank_of<F: Field>(n: usize, f: impl Fn(&[F]) -> Vec<F>) -> usize {
    let cols: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let mut e = vec![F::zero(); n];
            e[k] = F::one();
            f(&e)
        })
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    if rows == 0 || n == 0 {
        return 0;
    }
    Matrix::from_columns(&cols, rows).rank()
}

/// Split a flat vector into matrices of the given shapes.
fn unflatten<F: Field>(x: &[F], shapes: &[(usize, usize)]) -> Vec<Matrix<F>> {
    let mut off = 0;
    shapes
        .iter()
        .map(|&(r, c)| {
            let m = Matrix::from_vec(r, c, x[off..off + r * c].to_vec());
            off += r * c;
            m
        })
        .collect()
}

fn flatten<F: Field>(ms: &[Matrix<F>]) -> Vec<F> {
    ms.iter().flat_map(|m| m.vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub dim: usize,
    pub radical_dim: usize,
    /// smallest `k` with `rad^k = 0`
    pub nilpotency: usize,
    pub local: bool,
}

/// Degree 0 endomorphisms of a window: families `φ_w` commuting with `t`
/// and `∂` wherever both sides are defined.
pub fn window_endomorphisms<F: Field>(m: &GradedWindowModule<F>) -> Vec<Vec<Matrix<F>>> {
    let shapes: Vec<(usize, usize)> = m.dims.iter().map(|&d| (d, d)).collect();
    let n: usize = m.dims.iter().map(|d| d * d).sum();
    kernel_of(n, |x: &[F]| {
        let phi = unflatten(x, &shapes);
        let mut out = Vec::new();
        for k in 0..m.len() - 1 {
            out.extend(m.t[k].mul(&phi[k]).sub(&phi[k + 1].mul(&m.t[k])).vec());
            out.extend(m.d[k].mul(&phi[k + 1]).sub(&phi[k].mul(&m.d[k])).vec());
        }
        out
    })
    .into_iter()
    .map(|v| unflatten(&v, &shapes))
    .collect()
}

/// Dimension of the degree 0 endomorphism algebra of a window and its
/// radical, computed as the kernel of the trace form. Needs characteristic
/// zero or larger than the total window dimension.
pub fn window_end_degree0<F: Field>(m: &GradedWindowModule<F>) -> Result<EndReport> {
    let total: usize = m.dims.iter().sum();
    let ch = F::characteristic();
    if ch != 0 && ch <= total as u64 {
        return Err(Error::Characteristic { char: ch, dim: total });
    }
    let basis = window_endomorphisms(m);
    let dim = basis.len();
    let prod = |a: &[Matrix<F>], b: &[Matrix<F>]| -> Vec<Matrix<F>> { a.iter().zip(b).map(|(x, y)| x.mul(y)).collect() };
    let gram = Matrix::from_fn(dim, dim, |i, j| {
        prod(&basis[i], &basis[j]).iter().fold(F::zero(), |acc, x| acc + x.trace())
    });
    let rad: Vec<Vec<Matrix<F>>> = gram
        .nullspace()
        .into_iter()
        .map(|c| {
            let mut acc: Vec<Matrix<F>> = basis[0].iter().map(|x| Matrix::zeros(x.rows(), x.cols())).collect();
            for (k, ck) in c.iter().enumerate() {
                for (a, b) in acc.iter_mut().zip(&basis[k]) {
                    a.add_scaled(ck, b);
                }
            }
            acc
        })
        .collect();
    let radical_dim = rad.len();
    // rad^k spanned by products of k radical elements
    let mut nilpotency = 1;
    let mut power = rad.clone();
    while !power.is_empty() {
        let mut next = Vec::new();
        for a in &power {
            for r in &rad {
                next.push(flatten(&prod(a, r)));
            }
        }
        let len = next.first().map_or(0, |v| v.len());
        let span = crate::linalg::span(&next, len);
        let shapes: Vec<(usize, usize)> = m.dims.iter().map(|&d| (d, d)).collect();
        power = span.columns().iter().map(|v| unflatten(v, &shapes)).collect();
        nilpotency += 1;
        if nilpotency > total + 1 {
            break;
        }
    }
    if radical_dim == 0 {
        nilpotency = 1;
    }
    Ok(EndReport { dim, radical_dim, nilpotency, local: dim >= 1 && radical_dim + 1 == dim })
}

/// At every weight where `E` is defined and the space is nonzero, `E`
/// has a single eigenvalue in the field and a one-dimensional eigenspace:
/// the kernels of the powers of `E − λ` form the only chain of
/// `E`-stable subspaces.
pub fn weight_spaces_uniserial<F: Field>(m: &GradedWindowModule<F>) -> bool {
    (m.lo + 1..=m.hi).all(|w| {
        let Some(e) = m.euler_at(w) else { return true };
        let d = e.rows();
        if d == 0 {
            return true;
        }
        let roots = F::roots(&crate::uniserial::minimal_polynomial(&e));
        roots.len() == 1 && e.sub(&Matrix::scalar(d, roots[0].clone())).rank() + 1 == d
    })
}

/// Degree 0 extensions of the window `m` by the window `n` (so `n` is the
/// submodule): perturbations of the `t`, `∂` blocks satisfying the
/// commutation relation on interior weights, modulo those coming from a
/// change of splitting.
pub fn graded_ext_dim<F: Field>(m: &GradedWindowModule<F>, n: &GradedWindowModule<F>) -> Result<usize> {
    if (m.lo, m.hi) != (n.lo, n.hi) {
        return Err(Error::Shape("windows over different weight ranges".into()));
    }
    let len = m.len();
    if len < 3 {
        return Err(Error::WindowTooSmall("need at least three weights".into()));
    }
    // T_k: M_k → N_{k+1}, D_k: M_{k+1} → N_k, for k in 0..len−1
    let mut shapes = Vec::new();
    for k in 0..len - 1 {
        shapes.push((n.dims[k + 1], m.dims[k]));
    }
    for k in 0..len - 1 {
        shapes.push((n.dims[k], m.dims[k + 1]));
    }
    let nv: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let split = |x: &[F]| {
        let all = unflatten(x, &shapes);
        let (tt, dd) = all.split_at(len - 1);
        (tt.to_vec(), dd.to_vec())
    };
    let relation = |x: &[F]| -> Vec<F> {
        let (tt, dd) = split(x);
        let mut out = Vec::new();
        // interior weight k: ∂t − t∂ off-diagonal block vanishes
        for k in 1..len - 1 {
            let dt = n.d[k].mul(&tt[k]).add(&dd[k].mul(&m.t[k]));
            let td = n.t[k - 1].mul(&dd[k - 1]).add(&tt[k - 1].mul(&m.d[k - 1]));
            out.extend(dt.sub(&td).vec());
        }
        out
    };
    let cocycles = kernel_of(nv, relation).len();
    let phi_shapes: Vec<(usize, usize)> = (0..len).map(|k| (n.dims[k], m.dims[k])).collect();
    let np: usize = phi_shapes.iter().map(|(r, c)| r * c).sum();
    let boundary = rank_of(np, |x: &[F]| {
        let phi = unflatten(x, &phi_shapes);
        let mut parts = Vec::new();
        for k in 0..len - 1 {
            parts.push(n.t[k].mul(&phi[k]).sub(&phi[k + 1].mul(&m.t[k])));
        }
        for k in 0..len - 1 {
            parts.push(n.d[k].mul(&phi[k + 1]).sub(&phi[k].mul(&m.d[k])));
        }
        flatten(&parts)
    });
    Ok(cocycles - boundary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedQuiverReport {
    pub quiver: GabrielQuiver,
    /// `(from, to, shift, dim)` for every nonzero contribution
    pub contributions: Vec<(usize, usize, i64, usize)>,
}

/// Window-level graded Gabriel quiver on `M_0 = D/D∂`, `M_1 = D/Dt` and
/// `M_α = D/D(E − α)` for the sampled `α`: the number of arrows `a → b` is
/// the sum over shifts `|s| ≤ max_shift` of the window `Ext¹(M_a, M_b(s))`.
pub fn graded_gabriel_quiver<F: Field>(alphas: &[F], lo: i64, hi: i64, max_shift: i64) -> Result<GradedQuiverReport> {
    let mut names = vec!["0".to_string(), "1".to_string()];
    let mut gens = vec![WeylElement::d(), WeylElement::t()];
    for a in alphas {
        names.push(a.to_string());
        gens.push(WeylElement::euler().sub(&WeylElement::constant(a.clone())));
    }
    let bound = default_bound(lo - max_shift, hi + max_shift);
    let base: Vec<GradedWindowModule<F>> = gens.iter().map(|p| window_module(p, lo, hi, bound)).collect::<Result<_>>()?;
    let p = gens.len();
    let mut mult = vec![vec![0; p]; p];
    let mut contributions = Vec::new();
    for b in 0..p {
        for s in -max_shift..=max_shift {
            let nb = window_module(&gens[b], lo + s, hi + s, bound)?.relabel(lo);
            for a in 0..p {
                let e = graded_ext_dim(&base[a], &nb)?;
                if e > 0 {
                    mult[a][b] += e;
                    contributions.push((a, b, s, e));
                }
            }
        }
    }
    contributions.sort();
    Ok(GradedQuiverReport { quiver: GabrielQuiver::new(names, mult)?, contributions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_rational::BigRational as Q;

    fn w(s: &str) -> WeylElement<Q> {
        WeylElement::parse(s).unwrap()
    }

    #[test]
    fn commutation_and_parse() {
        assert_eq!(w("D").mul(&w("t")).render(), "t*D + 1");
        assert_eq!(w("t*D").render(), "t*D");
        assert_eq!(w("∂t"), w("D*t"));
        let a = rat(1, 3);
        let e = w("E").sub(&WeylElement::constant(a.clone()));
        let want = w("t^2*D^2").add(&w("t*D").scale(&(Q::from_i64(1) - a.clone() * Q::from_i64(2)))).add(&WeylElement::constant(a.clone() * a));
        assert_eq!(e.mul(&e), want);
        assert!(WeylElement::<Q>::parse("x").is_err());
    }

    #[test]
    fn words() {
        assert_eq!(word_w::<Q>(0, 1).unwrap(), w("D"));
        assert_eq!(word_w::<Q>(1, 1).unwrap(), w("t"));
        assert_eq!(word_w::<Q>(0, 2).unwrap(), w("t*D"));
        assert_eq!(word_w::<Q>(1, 3).unwrap().render(), "t^2*D + t");
    }

    #[test]
    fn polynomial_window() {
        let m = window_module(&w("D"), -3, 3, 4).unwrap();
        assert_eq!(m.dims, vec![0, 0, 0, 1, 1, 1, 1]);
        assert!(m.commutation_holds());
        let r = window_end_degree0(&m).unwrap();
        assert_eq!((r.dim, r.local), (1, true));
    }

    #[test]
    fn self_extension_window() {
        let m = window_module(&w("(E-1/2)^2"), -4, 4, 4).unwrap();
        assert!(m.dims.iter().all(|&d| d == 2));
        assert!(m.commutation_holds());
        let r = window_end_degree0(&m).unwrap();
        assert_eq!((r.dim, r.radical_dim, r.nilpotency, r.local), (2, 1, 2, true));
        assert!(weight_spaces_uniserial(&m));
        let a = window_module(&w("E-1/2"), -4, 4, 4).unwrap();
        let b = window_module(&w("E-1/3"), -4, 4, 4).unwrap();
        let s = a.direct_sum(&b).unwrap();
        let r = window_end_degree0(&s).unwrap();
        assert_eq!((r.dim, r.local), (2, false));
        assert!(!weight_spaces_uniserial(&s));
    }

    #[test]
    fn inhomogeneous_rejected() {
        assert!(matches!(window_module(&w("t + D"), -2, 2, 4), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn ext_between_simple_windows() {
        let a = window_module(&w("E-1/2"), -4, 4, 8).unwrap();
        let b = window_module(&w("E-1/3"), -4, 4, 8).unwrap();
        assert_eq!(graded_ext_dim(&a, &a).unwrap(), 1);
        assert_eq!(graded_ext_dim(&a, &b).unwrap(), 0);
    }

    #[test]
    fn graded_quiver_on_samples() {
        let r = graded_gabriel_quiver(&[rat(1, 2), rat(1, 3)], -5, 5, 3).unwrap();
        assert_eq!(r.quiver.mult, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert!(r.quiver.check_star_condition().holds);
    }

    #[test]
    fn chain_windows_have_constant_dimension() {
        for a in [rat(1, 2), rat(1, 3)] {
            for n in 1..=3 {
                let m = window_module(&m_alpha_n(&a, n).unwrap(), -5, 5, 4).unwrap();
                assert!(m.dims.iter().all(|&d| d == n), "{a} {n}: {:?}", m.dims);
                assert!(window_end_degree0(&m).unwrap().local);
                assert!(weight_spaces_uniserial(&m));
            }
        }
    }

    #[test]
    fn convention_lock() {
        // D/D(t∂) → D/D∂ with kernel D∂/D(t∂) ≅ D/Dt shifted by one
        let (lo, hi) = (-5, 5);
        let e = window_module(&word_w::<Q>(0, 2).unwrap(), lo, hi, 4).unwrap();
        let top = window_module(&word_w::<Q>(0, 1).unwrap(), lo, hi, 4).unwrap();
        let sub = window_module(&word_w::<Q>(1, 1).unwrap(), lo + 1, hi + 1, 4).unwrap().relabel(lo);
        for w in lo..=hi {
            assert_eq!(e.dim_at(w), top.dim_at(w) + sub.dim_at(w));
        }
        assert_eq!(graded_ext_dim(&top, &sub).unwrap(), 1);
    }
}
