//! Small algebras and module families used throughout the tests, the
//! acceptance suite and the command line.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fdmod::FdModule;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::presentation::Presentation;
use crate::quiver::Quiver;

/// A presentation together with a family of orthogonal points.
#[derive(Clone, Debug)]
pub struct Family<F> {
    pub pres: Arc<Presentation<F>>,
    pub names: Vec<String>,
    pub members: Vec<FdModule<F>>,
}

impl<F: Field> Family<F> {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn member(&self, name: &str) -> &FdModule<F> {
        &self.members[self.index(name).unwrap_or_else(|| panic!("no member {name}"))]
    }
}

pub fn nilpotent_jordan<F: Field>(n: usize) -> Matrix<F> {
    Matrix::from_fn(n, n, |i, j| if j == i + 1 { F::one() } else { F::zero() })
}

/// `k[x]/(x^n)`.
pub fn truncated<F: Field>(n: u32) -> Arc<Presentation<F>> {
    Arc::new(Presentation::truncated_polynomial(n))
}

/// The Jordan block `J_n` as a `k[x]/(x^N)`-module (`n ≤ N`).
pub fn jordan<F: Field>(pres: &Arc<Presentation<F>>, n: usize) -> FdModule<F> {
    FdModule::new(pres.clone(), vec![nilpotent_jordan(n)]).expect("n is at most the nilpotency bound")
}

/// `k[x]/(x^n)` with its single point `k`.
pub fn truncated_family<F: Field>(n: u32) -> Family<F> {
    let pres = truncated(n);
    let k = jordan(&pres, 1);
    Family { pres, names: vec!["pt".into()], members: vec![k] }
}

/// Simple module at a vertex of a path algebra presentation.
pub fn vertex_simple<F: Field>(pres: &Arc<Presentation<F>>, q: &Quiver, v: usize) -> FdModule<F> {
    let p = q.vertices.len();
    let action = (0..pres.num_generators())
        .map(|g| if g < p && g == v { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
        .collect();
    FdModule::new(pres.clone(), action).expect("vertex simples satisfy the path relations")
}

/// Path algebra of `q` (modulo paths of length `bound`) with its vertex
/// simples.
pub fn path_family<F: Field>(q: &Quiver, bound: Option<usize>) -> Family<F> {
    let pres = Arc::new(Presentation::path_algebra(q, None, bound).expect("valid quiver"));
    let members = (0..q.vertices.len()).map(|v| vertex_simple(&pres, q, v)).collect();
    Family { pres, names: q.vertices.clone(), members }
}

/// `1 → 2`.
pub fn a2<F: Field>() -> Family<F> {
    path_family(&Quiver::from_labels(&["1", "2"], &[("1", "2")]).unwrap(), None)
}

/// `k⟨x, y⟩ / (x, y)²` with its point: two loops.
pub fn two_loops<F: Field>() -> Family<F> {
    let pres = Arc::new(Presentation::truncated_free(&["x", "y"], 2));
    let k = FdModule::new(pres.clone(), vec![Matrix::zeros(1, 1), Matrix::zeros(1, 1)]).unwrap();
    Family { pres, names: vec!["pt".into()], members: vec![k] }
}

/// `u → s`, `u → t`: one point with arrows to two others.
pub fn star_out<F: Field>() -> Family<F> {
    path_family(&Quiver::from_labels(&["u", "s", "t"], &[("u", "s"), ("u", "t")]).unwrap(), None)
}

/// `s → u`, `t → u`: two points with arrows into a third.
pub fn star_in<F: Field>() -> Family<F> {
    path_family(&Quiver::from_labels(&["u", "s", "t"], &[("s", "u"), ("t", "u")]).unwrap(), None)
}

/// A loop at `u` and an arrow `u → t`, radical square zero.
pub fn loop_and_arrow<F: Field>() -> Family<F> {
    path_family(&Quiver::from_labels(&["u", "t"], &[("u", "u"), ("u", "t")]).unwrap(), Some(2))
}

/// A single loop with `rad^n = 0`, presented as a path algebra.
pub fn loop_quiver<F: Field>(n: usize) -> Family<F> {
    path_family(&Quiver::from_labels(&["1"], &[("1", "1")]).unwrap(), Some(n))
}

/// Oriented cycle `1 → 2 → 1` with `rad^n = 0`.
pub fn two_cycle<F: Field>(n: usize) -> Family<F> {
    path_family(&Quiver::from_labels(&["1", "2"], &[("1", "2"), ("2", "1")]).unwrap(), Some(n))
}

/// Named fixture families: `truncated:N`, `a2`, `two_loops`, `star_out`,
/// `star_in`, `loop_and_arrow`, `loop:N`, `two_cycle:N`.
pub fn by_name<F: Field>(name: &str) -> Result<Family<F>> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a.parse::<usize>().map_err(|_| Error::Parse(format!("bad fixture parameter in {name}")))?)),
        None => (name, None),
    };
    let need = |a: Option<usize>| a.filter(|&n| n >= 1).ok_or_else(|| Error::Parse(format!("fixture {head} needs a parameter, e.g. {head}:3")));
    Ok(match head {
        "truncated" => truncated_family(need(arg)? as u32),
        "a2" => a2(),
        "two_loops" => two_loops(),
        "star_out" => star_out(),
        "star_in" => star_in(),
        "loop_and_arrow" => loop_and_arrow(),
        "loop" => loop_quiver(need(arg)?),
        "two_cycle" => two_cycle(need(arg)?),
        _ => return Err(Error::Parse(format!("unknown fixture {name}"))),
    })
}

pub const FIXTURE_NAMES: [&str; 8] =
    ["truncated:N", "a2", "two_loops", "star_out", "star_in", "loop_and_arrow", "loop:N", "two_cycle:N"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdmod::{ext1, gabriel_quiver};
    use num_rational::BigRational as Q;

    #[test]
    fn fixture_quivers() {
        let f = star_out::<Q>();
        let g = gabriel_quiver(&f.members, &f.names).unwrap();
        assert_eq!(g.mult, vec![vec![0, 1, 1], vec![0, 0, 0], vec![0, 0, 0]]);
        let f = loop_and_arrow::<Q>();
        let g = gabriel_quiver(&f.members, &f.names).unwrap();
        assert_eq!(g.mult, vec![vec![1, 1], vec![0, 0]]);
        let f = two_cycle::<Q>(3);
        let g = gabriel_quiver(&f.members, &f.names).unwrap();
        assert_eq!(g.mult, vec![vec![0, 1], vec![1, 0]]);
        let f = two_loops::<Q>();
        assert_eq!(ext1(&f.members[0], &f.members[0]).unwrap().dim, 2);
    }
}
