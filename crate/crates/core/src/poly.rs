//! Noncommutative polynomials over generator indices, and commutative
//! multivariate polynomials for scheme equations.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::linalg::Matrix;

/// A word in the generators. `[g1, g2, g3]` is the product `g1 g2 g3`,
/// which acts on a module as `A_{g1} A_{g2} A_{g3}` (the rightmost letter
/// acts first).
pub type Word = Vec<usize>;

/// Noncommutative polynomial: a finite sum of scalar multiples of words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly<F> {
    terms: BTreeMap<Word, F>,
}

impl<F: fmt::Debug> fmt::Debug for NcPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly(")?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{w:?}")?;
        }
        write!(f, ")")
    }
}

impl<F: Field> Default for NcPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> NcPoly<F> {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn generator(g: usize) -> Self {
        Self::monomial(vec![g], F::one())
    }

    pub fn monomial(word: Word, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, word: Word, c: F) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&word).cloned().unwrap_or_else(F::zero) + c;
        if v.is_zero() {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate on square matrices of size `dim`, one per generator.
    pub fn eval(&self, mats: &[Matrix<F>], dim: usize) -> Matrix<F> {
        let mut out = Matrix::zeros(dim, dim);
        for (w, c) in &self.terms {
            out.add_scaled(c, &eval_word(w, mats, dim));
        }
        out
    }

    /// Human readable form using generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = if w.is_empty() {
                String::new()
            } else {
                w.iter().map(|&g| names.get(g).cloned().unwrap_or_else(|| format!("g{g}"))).collect::<Vec<_>>().join("*")
            };
            let (neg, abs) = split_sign(c);
            if i == 0 {
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
}

/// Product of generator matrices along a word.
pub fn eval_word<F: Field>(w: &[usize], mats: &[Matrix<F>], dim: usize) -> Matrix<F> {
    match w.split_first() {
        None => Matrix::identity(dim),
        Some((&first, rest)) => {
            let mut acc = mats[first].clone();
            for &g in rest {
                acc = acc.mul(&mats[g]);
            }
            acc
        }
    }
}

/// Sign split for display. Finite fields never print a minus sign.
pub(crate) fn split_sign<F: Field>(c: &F) -> (bool, F) {
    let s = c.to_string();
    if s.starts_with('-') { (true, -c.clone()) } else { (false, c.clone()) }
}

/// Commutative polynomial in `nvars` variables, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CommPoly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> CommPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        CommPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, F::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: F) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&exps).cloned().unwrap_or_else(F::zero) + c;
        if v.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest total degree first, then by exponent vector descending
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { names[v].clone() } else { format!("{}^{}", names[v], k) })
                .collect();
            let mono = mono.join("*");
            let (neg, abs) = split_sign(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_rational::BigRational as Q;

    #[test]
    fn words_act_right_to_left() {
        // x = e12 (maps e2 to e1), y = e21
        let x: Matrix<Q> = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let y: Matrix<Q> = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let p = NcPoly::<Q>::monomial(vec![0, 1], rat(1, 1));
        assert_eq!(p.eval(&[x.clone(), y.clone()], 2), x.mul(&y));
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = NcPoly::<Q>::generator(0);
        let z = a.sub(&a);
        assert!(z.is_zero());
        let sq = a.add(&NcPoly::generator(1)).pow(2);
        assert_eq!(sq.terms().count(), 4);
        assert_eq!(sq.render(&["x".into(), "y".into()]), "x*x + x*y + y*x + y*y");
    }

    #[test]
    fn commutative_products() {
        let a = CommPoly::<Q>::var(2, 0);
        let b = CommPoly::<Q>::var(2, 1);
        let p = a.add(&b).mul(&a.add(&b.scale(&rat(-1, 1))));
        // a^2 - b^2
        assert_eq!(p.render(&["a".into(), "b".into()]), "a^2 - b^2");
        assert_eq!(p.eval(&[rat(3, 1), rat(2, 1)]), rat(5, 1));
    }
}
