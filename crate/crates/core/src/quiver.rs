//! Quivers, ordered quivers (extension types) and Gabriel quivers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{span, Matrix};

/// A finite quiver with labelled vertices. Parallel arrows and loops are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    /// `(source, target)` as vertex indices
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        let distinct: BTreeSet<&String> = vertices.iter().collect();
        if distinct.len() != n {
            return Err(Error::Invalid("duplicate vertex label".into()));
        }
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::Invalid(format!("arrow ({s},{t}) has an undeclared endpoint")));
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Build from labelled arrows.
    pub fn from_labels(vertices: &[&str], arrows: &[(&str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |l: &str| {
            vs.iter().position(|v| v == l).ok_or_else(|| Error::Invalid(format!("unknown vertex '{l}'")))
        };
        let arrows = arrows.iter().map(|(s, t)| Ok((idx(s)?, idx(t)?))).collect::<Result<Vec<_>>>()?;
        Quiver::new(vs, arrows)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Weakly connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(s, t) in &self.arrows {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<serde_json::Value>,
    arrows: Vec<(serde_json::Value, serde_json::Value)>,
}

fn label_of(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("vertex label must be a string or number, got {other}"))),
    }
}

impl Quiver {
    pub fn to_json(&self) -> serde_json::Value {
        let arrows: Vec<serde_json::Value> = self
            .arrows
            .iter()
            .map(|&(s, t)| serde_json::json!([self.vertices[s], self.vertices[t]]))
            .collect();
        serde_json::json!({ "vertices": self.vertices, "arrows": arrows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let vertices = raw.vertices.iter().map(label_of).collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        for (s, t) in &raw.arrows {
            let (s, t) = (label_of(s)?, label_of(t)?);
            let si = vertices.iter().position(|v| *v == s).ok_or_else(|| Error::Invalid(format!("unknown vertex '{s}'")))?;
            let ti = vertices.iter().position(|v| *v == t).ok_or_else(|| Error::Invalid(format!("unknown vertex '{t}'")))?;
            arrows.push((si, ti));
        }
        Quiver::new(vertices, arrows)
    }
}

/// An ordered quiver, stored as its order vector `(α(1), …, α(n))`.
///
/// Arrow `i` (1-based, `1 ≤ i < n`) is `a_{i,i+1}: α(i) → α(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderedQuiver {
    pub order_vector: Vec<usize>,
}

impl OrderedQuiver {
    pub fn from_order_vector(v: Vec<usize>) -> Self {
        OrderedQuiver { order_vector: v }
    }

    /// Length `n` of the extension type.
    pub fn len(&self) -> usize {
        self.order_vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order_vector.is_empty()
    }

    /// Label of the 1-based position `i`.
    pub fn alpha(&self, i: usize) -> usize {
        self.order_vector[i - 1]
    }

    /// Distinct labels in increasing order; these are the points.
    pub fn vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.order_vector.iter().copied().collect();
        s.into_iter().collect()
    }

    pub fn num_points(&self) -> usize {
        self.vertices().len()
    }

    /// Arrows in their total order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.order_vector.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Rebuild the order vector from the arrow view; `None` if consecutive
    /// arrows do not compose. `first` is needed when there are no arrows.
    pub fn from_arrows(first: usize, arrows: &[(usize, usize)]) -> Option<Self> {
        let mut v = vec![first];
        for &(s, t) in arrows {
            if *v.last().unwrap() != s {
                return None;
            }
            v.push(t);
        }
        Some(OrderedQuiver { order_vector: v })
    }

    /// First-occurrence relabelling onto `1, 2, …`.
    pub fn canonical(&self) -> Self {
        let mut map = BTreeMap::new();
        let v = self
            .order_vector
            .iter()
            .map(|x| {
                let next = map.len() + 1;
                *map.entry(*x).or_insert(next)
            })
            .collect();
        OrderedQuiver { order_vector: v }
    }

    pub fn as_quiver(&self) -> Quiver {
        let verts = self.vertices();
        let pos = |x: usize| verts.iter().position(|&v| v == x).unwrap();
        Quiver {
            vertices: verts.iter().map(|v| v.to_string()).collect(),
            arrows: self.arrows().into_iter().map(|(s, t)| (pos(s), pos(t))).collect(),
        }
    }
}

/// All extension types of length `n` up to relabelling, in canonical form.
///
/// Canonical order vectors are exactly the restricted growth strings, so
/// the count is the Bell number `B_n`.
pub fn enumerate_extension_types(n: usize) -> Vec<OrderedQuiver> {
    let mut out = Vec::new();
    if n == 0 {
        return vec![OrderedQuiver::from_order_vector(Vec::new())];
    }
    let mut cur = vec![1usize];
    fn rec(cur: &mut Vec<usize>, n: usize, out: &mut Vec<OrderedQuiver>) {
        if cur.len() == n {
            out.push(OrderedQuiver::from_order_vector(cur.clone()));
            return;
        }
        let max = *cur.iter().max().unwrap();
        for x in 1..=max + 1 {
            cur.push(x);
            rec(cur, n, out);
            cur.pop();
        }
    }
    rec(&mut cur, n, &mut out);
    // p descending, then lexicographic
    out.sort_by(|a, b| b.num_points().cmp(&a.num_points()).then_with(|| a.cmp(b)));
    out
}

/// Quiver with arrow multiplicities, typically `dim Ext¹(M_α, M_β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabrielQuiver {
    pub vertices: Vec<String>,
    /// `mult[a][b]` arrows from `a` to `b`
    pub mult: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub holds: bool,
    /// vertices with row or column sum above one
    pub violations: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Linear,
    Cycle,
    Neither,
}

impl GabrielQuiver {
    pub fn new(vertices: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("multiplicity matrix must be square over the vertices".into()));
        }
        Ok(GabrielQuiver { vertices, mult })
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        let n = q.vertices.len();
        let mut mult = vec![vec![0; n]; n];
        for &(s, t) in &q.arrows {
            mult[s][t] += 1;
        }
        GabrielQuiver { vertices: q.vertices.clone(), mult }
    }

    pub fn to_quiver(&self) -> Quiver {
        let mut arrows = Vec::new();
        for (a, row) in self.mult.iter().enumerate() {
            for (b, &m) in row.iter().enumerate() {
                arrows.extend(std::iter::repeat_n((a, b), m));
            }
        }
        Quiver { vertices: self.vertices.clone(), arrows }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn row_sum(&self, a: usize) -> usize {
        self.mult[a].iter().sum()
    }

    fn col_sum(&self, b: usize) -> usize {
        self.mult.iter().map(|r| r[b]).sum()
    }

    pub fn check_star_condition(&self) -> StarReport {
        let violations: Vec<usize> =
            (0..self.len()).filter(|&v| self.row_sum(v) > 1 || self.col_sum(v) > 1).collect();
        StarReport { holds: violations.is_empty(), violations }
    }

    /// Tag each weakly connected component.
    pub fn classify_components(&self) -> Vec<(Vec<usize>, ComponentKind)> {
        let violations: BTreeSet<usize> = self.check_star_condition().violations.into_iter().collect();
        self.to_quiver()
            .components()
            .into_iter()
            .map(|comp| {
                let kind = if comp.iter().any(|v| violations.contains(v)) {
                    ComponentKind::Neither
                } else {
                    let arrows: usize = comp.iter().map(|&v| self.row_sum(v)).sum();
                    if arrows == comp.len() {
                        ComponentKind::Cycle
                    } else if arrows + 1 == comp.len() {
                        ComponentKind::Linear
                    } else {
                        ComponentKind::Neither
                    }
                };
                (comp, kind)
            })
            .collect()
    }

    /// The successor σ(α) under (*), if any.
    pub fn successor(&self, a: usize) -> Option<usize> {
        self.mult[a].iter().position(|&m| m >= 1)
    }

    /// The order vector `(α, σ(α), σ²(α), …)` of length `n`, or `None` if
    /// the path runs out.
    pub fn admissible_couple(&self, alpha: usize, n: usize) -> Result<Option<Vec<usize>>> {
        let star = self.check_star_condition();
        if !star.holds {
            return Err(Error::StarFails(star.violations));
        }
        if alpha >= self.len() {
            return Err(Error::Invalid(format!("vertex {alpha} out of range")));
        }
        if n == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut v = vec![alpha];
        while v.len() < n {
            match self.successor(*v.last().unwrap()) {
                Some(b) => v.push(b),
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    /// Five pairwise distinct vertices each with an arrow into a common
    /// vertex. The common vertex may be one of the five.
    pub fn contains_q5(&self) -> bool {
        (0..self.len()).any(|w| (0..self.len()).filter(|&v| self.mult[v][w] >= 1).count() >= 5)
    }

    /// The Q₅ quiver: five sources into one sink labelled `0`.
    pub fn q5() -> Self {
        let mut vertices = vec!["0".to_string()];
        vertices.extend((1..=5).map(|i| i.to_string()));
        let mut mult = vec![vec![0; 6]; 6];
        for row in mult.iter_mut().skip(1) {
            row[0] = 1;
        }
        GabrielQuiver { vertices, mult }
    }
}

/// A finite dimensional representation of a quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep<F> {
    pub spaces: Vec<usize>,
    /// one `dim target × dim source` matrix per arrow
    pub maps: Vec<Matrix<F>>,
}

impl<F: Field> QuiverRep<F> {
    pub fn new(q: &Quiver, spaces: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if spaces.len() != q.vertices.len() || maps.len() != q.arrows.len() {
            return Err(Error::Shape("representation does not match the quiver".into()));
        }
        for (k, (&(s, t), m)) in q.arrows.iter().zip(&maps).enumerate() {
            if m.shape() != (spaces[t], spaces[s]) {
                return Err(Error::Shape(format!("arrow {k} has shape {:?}, expected {:?}", m.shape(), (spaces[t], spaces[s]))));
            }
        }
        Ok(QuiverRep { spaces, maps })
    }

    /// Block matrix of arrow `k` on the direct sum of the vertex spaces.
    fn arrow_block(&self, q: &Quiver, k: usize) -> Matrix<F> {
        let offs: Vec<usize> = self
            .spaces
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total = self.spaces.iter().sum();
        let (s, t) = q.arrows[k];
        let mut m = Matrix::zeros(total, total);
        m.set_block(offs[t], offs[s], &self.maps[k]);
        m
    }

    /// Smallest `N` with `V_p = 0` for every path `p` of length `N`, if the
    /// representation is small.
    ///
    /// Paths of length `N` span the `N`-th power of the algebra generated by
    /// the arrow blocks, so this tracks the spans of those powers instead of
    /// the single sum of arrows (which can cancel).
    pub fn small_index(&self, q: &Quiver) -> Option<usize> {
        let total: usize = self.spaces.iter().sum();
        let gens: Vec<Matrix<F>> = (0..q.arrows.len()).map(|k| self.arrow_block(q, k)).collect();
        let flat = |ms: &[Matrix<F>]| -> Vec<Matrix<F>> {
            let vecs: Vec<Vec<F>> = ms.iter().map(|m| m.vec()).collect();
            let b = span(&vecs, total * total);
            b.columns().into_iter().map(|c| Matrix::from_vec(total, total, c)).collect()
        };
        let mut cur = flat(&gens);
        let mut len = 1;
        if cur.is_empty() {
            return Some(if total == 0 { 0 } else { 1 });
        }
        // a nilpotent algebra of matrices of size d has index at most d
        while len <= total {
            let next: Vec<Matrix<F>> = gens.iter().flat_map(|g| cur.iter().map(move |c| g.mul(c))).collect();
            cur = flat(&next);
            len += 1;
            if cur.is_empty() {
                return Some(len);
            }
        }
        None
    }

    pub fn is_small(&self, q: &Quiver) -> bool {
        self.small_index(q).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    #[test]
    fn order_vector_views() {
        let g = OrderedQuiver::from_order_vector(vec![1, 1, 2]);
        assert_eq!(g.arrows(), vec![(1, 1), (1, 2)]);
        assert_eq!(g.num_points(), 2);
        assert_eq!(OrderedQuiver::from_arrows(1, &g.arrows()).unwrap(), g);
        assert!(OrderedQuiver::from_arrows(1, &[(1, 2), (1, 2)]).is_none());
        let e = OrderedQuiver::from_order_vector(vec![]);
        assert!(e.is_empty() && e.arrows().is_empty());
    }

    #[test]
    fn five_types_of_length_three() {
        let t = enumerate_extension_types(3);
        let vs: Vec<Vec<usize>> = t.into_iter().map(|g| g.order_vector).collect();
        assert_eq!(vs, vec![vec![1, 2, 3], vec![1, 1, 2], vec![1, 2, 1], vec![1, 2, 2], vec![1, 1, 1]]);
        assert_eq!(enumerate_extension_types(1).len(), 1);
    }

    #[test]
    fn star_and_components() {
        let loop_q = GabrielQuiver::new(vec!["a".into()], vec![vec![1]]).unwrap();
        assert!(loop_q.check_star_condition().holds);
        assert_eq!(loop_q.classify_components()[0].1, ComponentKind::Cycle);
        assert_eq!(loop_q.admissible_couple(0, 3).unwrap(), Some(vec![0, 0, 0]));

        let double = GabrielQuiver::new(vec!["0".into(), "1".into()], vec![vec![0, 2], vec![0, 0]]).unwrap();
        assert_eq!(double.check_star_condition().violations, vec![0, 1]);
        assert!(double.admissible_couple(0, 2).is_err());

        let a2 = GabrielQuiver::new(vec!["1".into(), "2".into()], vec![vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(a2.classify_components()[0].1, ComponentKind::Linear);
        assert_eq!(a2.admissible_couple(0, 3).unwrap(), None);
        assert_eq!(a2.admissible_couple(0, 2).unwrap(), Some(vec![0, 1]));

        let cyc = GabrielQuiver::new(vec!["0".into(), "1".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(cyc.admissible_couple(0, 4).unwrap(), Some(vec![0, 1, 0, 1]));
    }

    #[test]
    fn q5_detection() {
        let q = GabrielQuiver::q5();
        assert!(q.contains_q5());
        assert_eq!(q.classify_components()[0].1, ComponentKind::Neither);
        let mut four = q.clone();
        four.mult[5][0] = 0;
        assert!(!four.contains_q5());
        // parallel arrows do not add sources
        four.mult[4][0] = 3;
        assert!(!four.contains_q5());
    }

    #[test]
    fn small_representations() {
        let q = Quiver::from_labels(&["a"], &[("a", "a")]).unwrap();
        let j3: Matrix<Q> = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let rep = QuiverRep::new(&q, vec![3], vec![j3]).unwrap();
        assert_eq!(rep.small_index(&q), Some(3));
        let id = QuiverRep::new(&q, vec![2], vec![Matrix::<Q>::identity(2)]).unwrap();
        assert!(!id.is_small(&q));
        // two loops whose sum vanishes but whose powers do not
        let q2 = Quiver::from_labels(&["a"], &[("a", "a"), ("a", "a")]).unwrap();
        let x: Matrix<Q> = Matrix::identity(1);
        let cancel = QuiverRep::new(&q2, vec![1], vec![x.clone(), x.neg()]).unwrap();
        assert!(!cancel.is_small(&q2));
    }

    #[test]
    fn json_roundtrip() {
        let q = Quiver::from_labels(&["a", "b"], &[("a", "b"), ("b", "b")]).unwrap();
        let back = Quiver::from_json(&q.to_json()).unwrap();
        assert_eq!(q, back);
        let g = OrderedQuiver::from_order_vector(vec![1, 2, 1]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"order_vector":[1,2,1]}"#);
    }
}
