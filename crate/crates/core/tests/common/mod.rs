//! Oracles shared by the integration tests. Nothing here calls into the
//! library's algorithms beyond matrix products and the data types.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lencat::linalg::Matrix;
use lencat::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar<F: Field>(r: &mut ChaCha8Rng) -> F {
    F::from_i64(r.gen_range(-2..=2))
}

/// Unit lower triangular times unit upper triangular times a random
/// permutation: always invertible.
pub fn random_invertible<F: Field>(n: usize, r: &mut ChaCha8Rng) -> Matrix<F> {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => F::one(),
        std::cmp::Ordering::Greater => small_scalar(r),
        std::cmp::Ordering::Less => F::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => loop {
            let d = F::from_i64(r.gen_range(1..=3));
            if !d.is_zero() {
                break d;
            }
        },
        std::cmp::Ordering::Less => small_scalar(r),
        std::cmp::Ordering::Greater => F::zero(),
    });
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    let p = Matrix::from_fn(n, n, |i, j| if perm[i] == j { F::one() } else { F::zero() });
    l.mul(&u).mul(&p)
}

/// Rank over `F_p` by textbook elimination on integer rows.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|&x| x * a[rank][c] % p == 1).unwrap();
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn mat_mul_mod_p(a: &[Vec<i64>], b: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p)).collect()).collect()
}

/// `(rank N, rank N², …)` up to `N^n`: determines the Jordan type of a
/// nilpotent matrix.
pub fn rank_profile(n: &[Vec<i64>], p: i64) -> Option<Vec<usize>> {
    let d = n.len();
    let mut pw = n.to_vec();
    let mut out = Vec::new();
    for _ in 0..d {
        out.push(rank_mod_p(&pw, p));
        pw = mat_mul_mod_p(&pw, n, p);
    }
    (rank_mod_p(&pw, p) == 0).then_some(out)
}

/// All `d × d` matrices over `F_p` with entries in `0..p`.
pub fn all_matrices(d: usize, p: i64) -> impl Iterator<Item = Vec<Vec<i64>>> {
    let total = (p as u64).pow((d * d) as u32);
    (0..total).map(move |mut code| {
        let mut m = vec![vec![0; d]; d];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = (code % p as u64) as i64;
                code /= p as u64;
            }
        }
        m
    })
}

/// Number of nonzero monomials of `k[Γ]` in each slot `(target, source)`
/// of point labels: increasing arrow index sequences `a_1 < … < a_k` with
/// `x_{a_{m+1}} x_{a_m}` composable.
pub fn monomial_slot_counts(order: &[usize]) -> BTreeMap<(usize, usize), usize> {
    let arrows = order.len().saturating_sub(1);
    let src = |a: usize| order[a];
    let tgt = |a: usize| order[a + 1];
    let mut counts = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = (0..arrows).map(|a| vec![a]).collect();
    while let Some(seq) = stack.pop() {
        let (first, last) = (seq[0], *seq.last().unwrap());
        *counts.entry((tgt(last), src(first))).or_insert(0) += 1;
        for b in last + 1..arrows {
            if src(b) == tgt(last) {
                let mut s = seq.clone();
                s.push(b);
                stack.push(s);
            }
        }
    }
    counts
}

/// Every order vector of length `n` over labels `1..=p`.
pub fn all_order_vectors(p: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (1..=p).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

/// `φ A = B φ` for every generator.
pub fn intertwines<F: Field>(a: &[Matrix<F>], b: &[Matrix<F>], phi: &Matrix<F>) -> bool {
    a.iter().zip(b).all(|(x, y)| phi.mul(x) == y.mul(phi))
}

/// Columns span an action-stable subspace.
pub fn is_stable<F: Field>(action: &[Matrix<F>], cols: &Matrix<F>) -> bool {
    let r = cols.rank();
    action.iter().all(|a| Matrix::hstack(&[cols, &a.mul(cols)]).rank() == r)
}
