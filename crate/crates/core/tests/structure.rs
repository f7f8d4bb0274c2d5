use std::collections::BTreeSet;

use fullwit_core::matrix_group::{
    commutator_closure, complete_row_to_sl, embed_block, enumerate_derived_unipotent, enumerate_group,
    enumerate_translation, enumerate_unitriangular, group_order, label_orbits, GroupKey,
};
use fullwit_core::{FieldSpec, FqMatrix, GroupKind, MatrixSpace, DEFAULT_CAP};

fn space(n: usize, p: u32, k: u32) -> MatrixSpace {
    MatrixSpace::new(n, FieldSpec::find(p, k).unwrap()).unwrap()
}

fn keys(s: &MatrixSpace, ms: &[FqMatrix]) -> BTreeSet<GroupKey> {
    ms.iter().map(|m| s.key(m)).collect()
}

/// Every matrix of size n over F_q, by decoding all keys.
fn all_matrices(s: &MatrixSpace) -> impl Iterator<Item = FqMatrix> + '_ {
    let total = (s.q() as u64).pow((s.n() * s.n()) as u32);
    (0..total).map(move |k| s.decode(GroupKey(k)))
}

#[test]
fn sl_order_matches_determinant_filter() {
    for (n, p, k) in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1), (3, 3, 1), (4, 2, 1)] {
        let s = space(n, p, k);
        let g = enumerate_group(GroupKind::Special, &s, DEFAULT_CAP).unwrap();
        let brute: BTreeSet<GroupKey> = all_matrices(&s).filter(|m| s.det(m) == 1).map(|m| s.key(&m)).collect();
        assert_eq!(keys(&s, g.elements()), brute, "SL_{n}(F_{})", s.q());
        assert_eq!(g.order() as u128, group_order(GroupKind::Special, n, s.q()));
    }
}

#[test]
fn gl_order_matches_determinant_filter() {
    for (n, p) in [(2, 3), (2, 5), (3, 2)] {
        let s = space(n, p, 1);
        let g = enumerate_group(GroupKind::General, &s, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), all_matrices(&s).filter(|m| s.det(m) != 0).count());
    }
}

#[test]
fn unipotent_orders() {
    for (n, p, k) in [(2, 2, 1), (3, 2, 1), (3, 3, 1), (4, 2, 1), (4, 3, 1), (3, 2, 2), (5, 2, 1)] {
        let s = space(n, p, k);
        let q = s.q() as usize;
        assert_eq!(enumerate_unitriangular(&s, DEFAULT_CAP).unwrap().len(), q.pow((n * (n - 1) / 2) as u32));
        assert_eq!(enumerate_derived_unipotent(&s, DEFAULT_CAP).unwrap().len(), q.pow(((n - 1) * (n - 2) / 2) as u32));
        assert_eq!(enumerate_translation(&s, false).unwrap().len(), q.pow(n as u32 - 1));
        assert_eq!(enumerate_translation(&s, true).unwrap().len(), q.pow(n as u32 - 2));
    }
}

#[test]
fn derived_subgroup_is_the_commutator_closure() {
    for (n, p) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let s = space(n, p, 1);
        let u = enumerate_unitriangular(&s, DEFAULT_CAP).unwrap();
        let d = enumerate_derived_unipotent(&s, DEFAULT_CAP).unwrap();
        assert_eq!(keys(&s, &commutator_closure(&s, &u).unwrap()), keys(&s, &d), "n={n} q={p}");
    }
}

#[test]
fn derived_subgroup_is_a_semidirect_product() {
    for (n, p) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let s = space(n, p, 1);
        let small = space(n - 1, p, 1);
        let d = enumerate_derived_unipotent(&s, DEFAULT_CAP).unwrap();
        let d_small = enumerate_derived_unipotent(&small, DEFAULT_CAP).unwrap();
        let vp = enumerate_translation(&s, true).unwrap();
        let vp_keys = keys(&s, &vp);
        let mut products = Vec::new();
        for a in &d_small {
            let a = embed_block(a, n).unwrap();
            for v in &vp {
                products.push(s.key(&s.mul(&a, v)));
            }
        }
        let distinct: BTreeSet<GroupKey> = products.iter().copied().collect();
        assert_eq!(distinct.len(), products.len(), "factorization is unique");
        assert_eq!(distinct, keys(&s, &d));
        for g in &d {
            let gi = s.inv(g).unwrap();
            for v in &vp {
                assert!(vp_keys.contains(&s.key(&s.mul(&s.mul(g, v), &gi))));
            }
        }
    }
}

#[test]
fn p_n_normalizes_v_n_prime() {
    for (n, p) in [(3, 2), (3, 3), (4, 2)] {
        let s = space(n, p, 1);
        let vp = enumerate_translation(&s, true).unwrap();
        let vp_keys = keys(&s, &vp);
        for g in enumerate_group(GroupKind::Affine, &space(n - 1, p, 1), DEFAULT_CAP).unwrap().elements() {
            let g = embed_block(g, n).unwrap();
            let gi = s.inv(&g).unwrap();
            for v in &vp {
                assert!(vp_keys.contains(&s.key(&s.mul(&s.mul(&g, v), &gi))));
            }
        }
    }
}

#[test]
fn enumerated_groups_are_closed() {
    for (kind, n, p) in [(GroupKind::Special, 2, 3), (GroupKind::Affine, 3, 2), (GroupKind::Affine, 3, 3)] {
        let s = space(n, p, 1);
        let g = enumerate_group(kind, &s, DEFAULT_CAP).unwrap();
        let ks = keys(&s, g.elements());
        assert_eq!(g.order() as u128, group_order(kind, n, s.q()));
        for a in g.elements() {
            assert!(ks.contains(&s.key(&s.inv(a).unwrap())));
            for b in g.elements() {
                assert!(ks.contains(&s.key(&s.mul(a, b))));
            }
        }
    }
}

#[test]
fn row_completion_is_exhaustive() {
    for (m, p) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let s = space(m, p, 1);
        for a in s.vectors(m).into_iter().filter(|a| a.iter().any(|&x| x != 0)) {
            let mat = complete_row_to_sl(&s, &a).unwrap();
            assert_eq!(mat.row(m - 1), a.as_slice());
            assert_eq!(s.det(&mat), 1);
        }
    }
    let s = space(2, 2, 2);
    for a in s.vectors(2).into_iter().skip(1) {
        assert_eq!(s.det(&complete_row_to_sl(&s, &a).unwrap()), 1);
    }
}

#[test]
fn two_orbits_on_labels() {
    for (n, p, k) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2), (4, 3, 1)] {
        let s = space(n - 1, p, k);
        let orbits = label_orbits(&s, DEFAULT_CAP).unwrap();
        assert_eq!(orbits.len(), 2, "n={n} q={}", s.q());
        assert_eq!(orbits[0].len(), 1);
        assert!(orbits[0][0].is_trivial());
        assert_eq!(orbits[1].len(), (s.q() as usize).pow(n as u32 - 1) - 1);
    }
}
