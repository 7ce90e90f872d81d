//! Finitely presented algebras `k⟨g_1, …, g_m⟩ / (relations)`.

use crate::error::{Error, Result};
use crate::expr::{self, Interp};
use crate::field::Field;
use crate::poly::NcPoly;
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<F> {
    pub name: String,
    pub generators: Vec<String>,
    pub relations: Vec<NcPoly<F>>,
    /// Elements generating the Jacobson radical as a two-sided ideal, when
    /// known. Socles are computed as their common kernel.
    pub radical: Option<Vec<NcPoly<F>>>,
    /// Slot `(target, source)` of each generator for pointed presentations.
    pub slots: Option<Vec<(usize, usize)>>,
}

struct PolyInterp<'a, F> {
    names: &'a [String],
    _f: std::marker::PhantomData<F>,
}

impl<F: Field> Interp for PolyInterp<'_, F> {
    type V = NcPoly<F>;
    fn number(&self, lit: &str) -> Result<NcPoly<F>> {
        F::parse_exact(lit).map(NcPoly::constant).ok_or_else(|| Error::Parse(format!("bad scalar {lit}")))
    }
    fn ident(&self, name: &str) -> Result<NcPoly<F>> {
        self.names
            .iter()
            .position(|g| g == name)
            .map(NcPoly::generator)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))
    }
    fn add(&self, a: &NcPoly<F>, b: &NcPoly<F>) -> NcPoly<F> {
        a.add(b)
    }
    fn mul(&self, a: &NcPoly<F>, b: &NcPoly<F>) -> NcPoly<F> {
        a.mul(b)
    }
    fn neg(&self, a: &NcPoly<F>) -> NcPoly<F> {
        a.scale(&-F::one())
    }
}

/// Parse a polynomial in the named generators, e.g. `"x*y - 2*y*x"`.
pub fn parse_poly<F: Field>(src: &str, names: &[String]) -> Result<NcPoly<F>> {
    expr::parse(src)?.eval(&PolyInterp { names, _f: std::marker::PhantomData })
}

impl<F: Field> Presentation<F> {
    pub fn new(name: &str, generators: Vec<String>, relations: Vec<NcPoly<F>>) -> Result<Self> {
        for r in &relations {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(Error::Invalid(format!("relation uses generator {g} of {}", generators.len())));
                }
            }
        }
        Ok(Presentation { name: name.to_string(), generators, relations, radical: None, slots: None })
    }

    pub fn parse(name: &str, generators: &[&str], relations: &[&str]) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relations.iter().map(|r| parse_poly(r, &gens)).collect::<Result<Vec<_>>>()?;
        Self::new(name, gens, rels)
    }

    pub fn with_radical(mut self, radical: Vec<NcPoly<F>>) -> Self {
        self.radical = Some(radical);
        self
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn parse_element(&self, src: &str) -> Result<NcPoly<F>> {
        parse_poly(src, &self.generators)
    }

    /// `k[x]/(x^n)`.
    pub fn truncated_polynomial(n: u32) -> Self {
        let x = NcPoly::generator(0);
        Presentation {
            name: format!("k[x]/(x^{n})"),
            generators: vec!["x".into()],
            relations: vec![x.pow(n)],
            radical: Some(vec![x]),
            slots: None,
        }
    }

    /// `k⟨x_1, …, x_m⟩` modulo all words of length `n`.
    pub fn truncated_free(names: &[&str], n: usize) -> Self {
        let m = names.len();
        let mut rels = Vec::new();
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..m).map(move |g| {
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    })
                })
                .collect();
        }
        for w in words {
            rels.push(NcPoly::monomial(w, F::one()));
        }
        Presentation {
            name: format!("k<{}>/(rad^{n})", names.join(",")),
            generators: names.iter().map(|s| s.to_string()).collect(),
            relations: rels,
            radical: Some((0..m).map(NcPoly::generator).collect()),
            slots: None,
        }
    }

    /// Path algebra of `q` presented by vertex idempotents and arrows,
    /// optionally modulo all paths of length `bound`.
    ///
    /// Generators are `e<label>` for every vertex followed by one generator
    /// per arrow, named `a<k>` unless names are given.
    pub fn path_algebra(q: &Quiver, arrow_names: Option<&[&str]>, bound: Option<usize>) -> Result<Self> {
        let p = q.vertices.len();
        let na = q.arrows.len();
        let mut gens: Vec<String> = q.vertices.iter().map(|v| format!("e{v}")).collect();
        match arrow_names {
            Some(names) if names.len() == na => gens.extend(names.iter().map(|s| s.to_string())),
            Some(_) => return Err(Error::Invalid("one name per arrow expected".into())),
            None => gens.extend((1..=na).map(|k| format!("a{k}"))),
        }
        let e = |v: usize| NcPoly::<F>::generator(v);
        let arrow = |k: usize| NcPoly::<F>::generator(p + k);
        let mut rels = Vec::new();
        let mut sum = NcPoly::constant(-F::one());
        for v in 0..p {
            sum = sum.add(&e(v));
        }
        rels.push(sum);
        for v in 0..p {
            for w in 0..p {
                let prod = e(v).mul(&e(w));
                rels.push(if v == w { prod.sub(&e(v)) } else { prod });
            }
        }
        for (k, &(s, t)) in q.arrows.iter().enumerate() {
            rels.push(arrow(k).sub(&e(t).mul(&arrow(k)).mul(&e(s))));
        }
        if let Some(b) = bound {
            // composable paths of length b, written target-first as words
            let mut paths: Vec<Vec<usize>> = (0..na).map(|k| vec![k]).collect();
            for _ in 1..b {
                let mut next = Vec::new();
                for path in &paths {
                    let last_target = q.arrows[*path.last().unwrap()].1;
                    for (k, &(s, _)) in q.arrows.iter().enumerate() {
                        if s == last_target {
                            let mut pth = path.clone();
                            pth.push(k);
                            next.push(pth);
                        }
                    }
                }
                paths = next;
            }
            for path in paths {
                let word: Vec<usize> = path.iter().rev().map(|&k| p + k).collect();
                rels.push(NcPoly::monomial(word, F::one()));
            }
        }
        let mut slots: Vec<(usize, usize)> = (0..p).map(|v| (v, v)).collect();
        slots.extend(q.arrows.iter().map(|&(s, t)| (t, s)));
        Ok(Presentation {
            name: format!("path algebra of {} vertices, {} arrows", p, na),
            generators: gens,
            relations: rels,
            radical: Some((0..na).map(arrow).collect()),
            slots: Some(slots),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    #[test]
    fn parse_relations() {
        let p = Presentation::<Q>::parse("weyl-ish", &["t", "D"], &["D*t - t*D - 1"]).unwrap();
        assert_eq!(p.relations[0].terms().count(), 3);
        assert!(Presentation::<Q>::parse("bad", &["x"], &["y"]).is_err());
    }

    #[test]
    fn path_algebra_relations() {
        let q = Quiver::from_labels(&["1", "2"], &[("1", "2")]).unwrap();
        let p = Presentation::<Q>::path_algebra(&q, None, None).unwrap();
        assert_eq!(p.generators, vec!["e1", "e2", "a1"]);
        // unit, four idempotent products, one arrow relation
        assert_eq!(p.relations.len(), 6);
        let loop_q = Quiver::from_labels(&["u"], &[("u", "u")]).unwrap();
        let p2 = Presentation::<Q>::path_algebra(&loop_q, None, Some(3)).unwrap();
        assert_eq!(p2.relations.last().unwrap().degree(), Some(3));
    }

    #[test]
    fn truncated_free_counts_words() {
        let p = Presentation::<Q>::truncated_free(&["x", "y"], 2);
        assert_eq!(p.relations.len(), 4);
    }
}
