//! Cross-module invariants on the shipped fixture families.

mod common;

use std::sync::Arc;

use lencat::defm::{
    iterated_extension_to_lifting, lifting_equivalent, lifting_to_iterated_extension, pushforward_lifting,
    surjection_report, HullGenerator, HullPresentation,
};
use lencat::extension::{build_chain_extension_corrected, splice, CofilteredModule, FamilyRef};
use lencat::fdmod::{end_is_local, ext1, iso_test, Cocycle, FdModule};
use lencat::fixtures::{self, Family};
use lencat::linalg::Matrix;
use lencat::pointed::{build_k_gamma, PointedMorphism};
use lencat::poly::NcPoly;
use lencat::quiver::OrderedQuiver;
use lencat::uniserial::{classify, counterexample, CeKind};
use lencat::{Error, Field, Q};
use num_traits::Zero;

use common::*;

fn family_ref<F: Field>(f: &Family<F>) -> FamilyRef<F> {
    Arc::from(f.members.clone())
}

fn families() -> Vec<Family<Q>> {
    vec![
        fixtures::truncated_family(3),
        fixtures::a2(),
        fixtures::two_loops(),
        fixtures::star_out(),
        fixtures::star_in(),
        fixtures::loop_and_arrow(),
        fixtures::two_cycle(3),
        fixtures::loop_quiver(3),
    ]
}

/// Members, indecomposables found by `classify` (where (*) holds) and the
/// counterexample modules of the families that violate it.
fn sample_modules(f: &Family<Q>) -> Vec<FdModule<Q>> {
    let fam = family_ref(f);
    let mut out = f.members.clone();
    if let Ok(res) = classify(&fam, &f.names, 4) {
        out.extend(res.indecomposables.iter().map(|i| i.module.module().clone()));
        out.extend(res.counterexamples.iter().map(|c| c.module.module().clone()));
    }
    out.retain(|m| m.dim() <= 8);
    out
}

#[test]
fn direct_sums_are_never_local() {
    for f in families() {
        let mods = sample_modules(&f);
        for a in &mods {
            for b in &mods {
                let s = a.direct_sum(b).unwrap();
                assert!(!end_is_local(&s).unwrap().local, "{}: M ⊕ N local", f.pres.name);
            }
        }
    }
}

#[test]
fn uniserial_modules_have_local_endomorphisms() {
    let mut uniserial = 0;
    for f in families() {
        for m in sample_modules(&f) {
            if m.is_uniserial().unwrap() {
                uniserial += 1;
                assert!(end_is_local(&m).unwrap().local, "{}: uniserial but End not local", f.pres.name);
            }
        }
    }
    assert!(uniserial > 10);
}

#[test]
fn ext_dimension_is_invariant_under_base_change() {
    let mut r = rng(11);
    for f in families() {
        let mods = sample_modules(&f);
        for a in &mods {
            for b in &mods {
                let d = ext1(a, b).unwrap().dim;
                let pa = a.change_basis(&random_invertible(a.dim(), &mut r)).unwrap();
                let pb = b.change_basis(&random_invertible(b.dim(), &mut r)).unwrap();
                assert_eq!(ext1(&pa, b).unwrap().dim, d);
                assert_eq!(ext1(a, &pb).unwrap().dim, d);
            }
        }
    }
}

#[test]
fn chain_builds_return_their_classes() {
    let mut r = rng(12);
    let mut checked = 0;
    for f in families() {
        let fam = family_ref(&f);
        for n in 2..=4 {
            for order in all_order_vectors(fam.len(), n) {
                let order: Vec<usize> = order.into_iter().map(|a| a - 1).collect();
                let exts: Vec<_> = order.windows(2).map(|w| ext1(&fam[w[0]], &fam[w[1]]).unwrap()).collect();
                let coords: Vec<Vec<Q>> = exts.iter().map(|e| (0..e.dim).map(|_| small_scalar(&mut r)).collect()).collect();
                let psis: Vec<Cocycle<Q>> = exts.iter().zip(&coords).map(|(e, c)| e.cocycle(c)).collect();
                let x = match build_chain_extension_corrected(&fam, &order, &psis) {
                    Ok(x) => x,
                    Err(Error::Obstructed(_)) | Err(Error::RelationViolated(_)) => continue,
                    Err(e) => panic!("{e}"),
                };
                for i in 2..=n {
                    assert_eq!(x.extract_classes(i).unwrap().tau_coords, coords[i - 2], "{} {order:?}", f.pres.name);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn isomorphic_cofiltrations_share_length_and_order() {
    let mut r = rng(13);
    for f in families() {
        let fam = family_ref(&f);
        let mods = sample_modules(&f);
        for m in &mods {
            let Ok(x) = CofilteredModule::from_composition_series(fam.clone(), m) else { continue };
            let moved = m.change_basis(&random_invertible(m.dim(), &mut r)).unwrap();
            let y = CofilteredModule::from_composition_series(fam.clone(), &moved).unwrap();
            assert_eq!(x.len(), y.len());
            let mut a = x.order().to_vec();
            let mut b = y.order().to_vec();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "{}: composition factors differ", f.pres.name);
        }
    }
}

fn jordan_chain(n: usize) -> CofilteredModule<Q> {
    let fam = family_ref(&fixtures::truncated_family::<Q>(3));
    let psi = ext1(&fam[0], &fam[0]).unwrap().basis[0].clone();
    build_chain_extension_corrected(&fam, &vec![0; n], &vec![psi; n - 1]).unwrap()
}

#[test]
fn splice_lengths_add() {
    let j3 = jordan_chain(3);
    for k in 1..3 {
        // J_k sits in J_3 as the bottom k basis vectors; the quotient is J_{3-k}
        let inner = jordan_chain(k);
        let outer = jordan_chain(3 - k);
        let f = Matrix::from_fn(3, k, |r, c| Q::from_i64((r == 3 - k + c) as i64));
        let g = Matrix::from_fn(3 - k, 3, |r, c| Q::from_i64((r == c) as i64));
        let x = splice(&inner, &outer, j3.module(), &f, &g).unwrap();
        assert_eq!(x.len(), inner.len() + outer.len());
        let mut want = [outer.order(), inner.order()].concat();
        let mut got = x.order().to_vec();
        want.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, want);
        assert!(iso_test(x.module(), j3.module()).unwrap().is_iso());
    }
}

#[test]
fn splice_rejects_non_exact_data() {
    let j3 = jordan_chain(3);
    let (inner, outer) = (jordan_chain(1), jordan_chain(2));
    // the top vector is not killed by x, so this is not a module map
    let f = Matrix::from_fn(3, 1, |r, _| Q::from_i64((r == 0) as i64));
    let g = Matrix::from_fn(2, 3, |r, c| Q::from_i64((r == c) as i64));
    assert!(matches!(splice(&inner, &outer, j3.module(), &f, &g), Err(Error::NotExact(_))));
}

/// `k[Γ_n] → k[Γ_{n-1}]` for constant order vectors: keep the first
/// `n - 2` arrows, kill the last.
fn truncation(n: usize) -> (Arc<lencat::pointed::PointedAlgebra<Q>>, PointedMorphism<Q>) {
    let src = Arc::new(build_k_gamma::<Q>(&OrderedQuiver::from_order_vector(vec![1; n])).unwrap());
    let dst = Arc::new(build_k_gamma::<Q>(&OrderedQuiver::from_order_vector(vec![1; n - 1])).unwrap());
    let images: Vec<Vec<Q>> = (1..n)
        .map(|a| {
            let label = format!("x{}{}", a, a + 1);
            match dst.label_index(&label) {
                Some(b) if a < n - 1 => dst.basis_vector(b),
                _ => vec![Q::from_i64(0); dst.dim()],
            }
        })
        .collect();
    let phi = PointedMorphism::from_generator_images(&src, &dst, &images).unwrap();
    (dst, phi)
}

#[test]
fn truncation_pushforward_gives_shorter_jordan_block() {
    let l = iterated_extension_to_lifting(&jordan_chain(3)).unwrap();
    let (dst, phi) = truncation(3);
    let pushed = pushforward_lifting(&l, &dst, &phi).unwrap();
    let y = lifting_to_iterated_extension(&pushed).unwrap();
    assert_eq!(y.len(), 2);
    assert!(iso_test(y.module(), jordan_chain(2).module()).unwrap().is_iso());
}

#[test]
fn pushforward_is_functorial() {
    let fam = family_ref(&fixtures::truncated_family::<Q>(4));
    let psi = ext1(&fam[0], &fam[0]).unwrap().basis[0].clone();
    let x = build_chain_extension_corrected(&fam, &[0, 0, 0, 0], &vec![psi; 3]).unwrap();
    let l = iterated_extension_to_lifting(&x).unwrap();
    let id = PointedMorphism::identity(l.base());
    assert_eq!(pushforward_lifting(&l, l.base(), &id).unwrap(), l);
    let (mid, first) = truncation(4);
    let (last, second) = truncation(3);
    let stepwise = pushforward_lifting(&pushforward_lifting(&l, &mid, &first).unwrap(), &last, &second).unwrap();
    let direct = pushforward_lifting(&l, &last, &second.compose(&first)).unwrap();
    assert_eq!(stepwise, direct);
    let y = lifting_to_iterated_extension(&direct).unwrap();
    let x = &y.module().action()[0];
    assert_eq!((y.len(), x.rank(), x.mul(x).rank()), (2, 1, 0));
}

#[test]
fn unlifted_extension_type_is_the_base_quiver() {
    for f in families() {
        let fam = family_ref(&f);
        for order in all_order_vectors(fam.len(), 3) {
            let order: Vec<usize> = order.into_iter().map(|a| a - 1).collect();
            let psis: Vec<Cocycle<Q>> = order
                .windows(2)
                .map(|w| {
                    let e = ext1(&fam[w[0]], &fam[w[1]]).unwrap();
                    e.cocycle(&vec![Q::from_i64(1); e.dim])
                })
                .collect();
            let Ok(x) = build_chain_extension_corrected(&fam, &order, &psis) else { continue };
            let l = iterated_extension_to_lifting(&x).unwrap();
            let y = lifting_to_iterated_extension(&l).unwrap();
            assert_eq!(y.extension_type(), l.base().gamma().unwrap().clone());
        }
    }
}

#[test]
fn conjugated_liftings_give_isomorphic_modules() {
    let mut r = rng(14);
    for f in [fixtures::truncated_family::<Q>(3), fixtures::a2(), fixtures::two_cycle(3)] {
        let fam = family_ref(&f);
        for order in all_order_vectors(fam.len(), 3) {
            let order: Vec<usize> = order.into_iter().map(|a| a - 1).collect();
            let psis: Vec<Cocycle<Q>> =
                order.windows(2).map(|w| ext1(&fam[w[0]], &fam[w[1]]).unwrap().cocycle(&[Q::from_i64(1)])).collect();
            let Ok(x) = build_chain_extension_corrected(&fam, &order, &psis) else { continue };
            let l = iterated_extension_to_lifting(&x).unwrap();
            let base = l.base();
            let dims: Vec<usize> = l.points().iter().map(|&a| fam[a].dim()).collect();
            let n: Vec<Matrix<Q>> = base
                .basis()
                .iter()
                .map(|b| {
                    let (i, j) = b.slot;
                    if b.degree == 0 {
                        Matrix::zeros(dims[i], dims[j])
                    } else {
                        Matrix::from_fn(dims[i], dims[j], |_, _| small_scalar(&mut r))
                    }
                })
                .collect();
            let c = lencat::defm::conjugate_lifting(&l, &n).unwrap();
            assert!(lifting_equivalent(&l, &c).unwrap().is_equivalent());
            let (y, z) = (lifting_to_iterated_extension(&l).unwrap(), lifting_to_iterated_extension(&c).unwrap());
            assert!(iso_test(y.module(), z.module()).unwrap().is_iso());
        }
    }
}

#[test]
fn j3_report_collapses_to_jordan_types() {
    let f = fixtures::truncated_family::<Q>(3);
    let fam = family_ref(&f);
    let hull = HullPresentation {
        points: vec![1],
        generators: vec![HullGenerator { name: "s".into(), slot: (0, 0) }],
        relations: vec![((0, 0), NcPoly::monomial(vec![0, 0, 0], Q::from_i64(1)))],
        cutoff: Some(3),
    };
    let g = OrderedQuiver::from_order_vector(vec![1, 1, 1]);
    let rep = surjection_report(&hull, &g, &fam, None).unwrap();
    assert_eq!(rep.equations, 0);
    assert_eq!(rep.variables, vec!["z_s_x12", "z_s_x23", "z_s_x23x12"]);
    assert_eq!(rep.module_classes, 3);
    assert!(rep.lifting_classes > rep.module_classes);
    // at (a, b, c) the chain module has x = a·E21 + b·E32 + c·E31
    let mut class_of_type = std::collections::BTreeMap::new();
    for s in &rep.samples {
        let z: Vec<Q> = s.point.iter().map(|p| Q::parse_exact(p).unwrap()).collect();
        assert_eq!(s.module_dim, 3);
        let x = Matrix::from_fn(3, 3, |r, c| match (r, c) {
            (1, 0) => z[0].clone(),
            (2, 1) => z[1].clone(),
            (2, 0) => z[2].clone(),
            _ => Q::zero(),
        });
        let ty = (x.rank(), x.mul(&x).rank());
        let want = if !z[0].is_zero() && !z[1].is_zero() {
            (2, 1)
        } else if z.iter().all(|c| c.is_zero()) {
            (0, 0)
        } else {
            (1, 0)
        };
        assert_eq!(ty, want, "point {:?}", s.point);
        assert_eq!(*class_of_type.entry(ty).or_insert(s.module_class), s.module_class);
    }
    assert_eq!(class_of_type.len(), 3);
}

#[test]
fn counterexamples_are_not_uniserial() {
    let cases: [(Family<Q>, CeKind, Vec<usize>); 3] = [
        (fixtures::two_loops(), CeKind::Ce1, vec![0, 0]),
        (fixtures::star_out(), CeKind::Ce2, vec![0, 1, 2]),
        (fixtures::star_in(), CeKind::Ce3, vec![0, 1, 2]),
    ];
    let mut r = rng(15);
    for (f, kind, members) in cases {
        let c = counterexample(&family_ref(&f), kind, &members).unwrap();
        let m = c.module.module();
        assert!(!m.is_uniserial().unwrap());
        let moved = m.change_basis(&random_invertible(m.dim(), &mut r)).unwrap();
        assert!(iso_test(m, &moved).unwrap().is_iso());
    }
}
