use std::sync::Arc;

use fullwit_core::group_algebra::{character_idempotent, subgroup_average};
use fullwit_core::matrix_group::{
    embed_block, enumerate_derived_unipotent, enumerate_group, enumerate_translation, transport_label, CharacterLabel,
};
use fullwit_core::{AlgebraContext, AlgebraElement, FieldSpec, GroupKind, MatrixSpace, RingDescriptor, DEFAULT_CAP};

const DESK: &[(u32, u32)] = &[(2, 1), (3, 1)];

fn ctx(n: usize, p: u32, k: u32, ring: RingDescriptor) -> Arc<AlgebraContext> {
    AlgebraContext::new(MatrixSpace::new(n, FieldSpec::find(p, k).unwrap()).unwrap(), ring)
}

fn e(c: &Arc<AlgebraContext>) -> AlgebraElement {
    subgroup_average(c, &enumerate_derived_unipotent(c.space(), DEFAULT_CAP).unwrap()).unwrap()
}

fn f(c: &Arc<AlgebraContext>) -> AlgebraElement {
    subgroup_average(c, &enumerate_translation(c.space(), true).unwrap()).unwrap()
}

fn sum(items: impl IntoIterator<Item = AlgebraElement>, c: &Arc<AlgebraContext>) -> AlgebraElement {
    items.into_iter().fold(AlgebraElement::zero(c), |acc, x| acc.add(&x).unwrap())
}

#[test]
fn e_n_factors_through_e_n_minus_1() {
    for &(p, k) in DESK {
        let n_max = if p == 2 { 5 } else { 4 };
        for n in 2..=n_max {
            let ring = RingDescriptor::rational(p).unwrap();
            let big = ctx(n, p, k, ring.clone());
            let small = ctx(n - 1, p, k, ring);
            let en = e(&big);
            assert!(en.is_idempotent().unwrap(), "e_{n} q={p}");
            let fnn = f(&big);
            assert!(fnn.is_idempotent().unwrap(), "f_{n} q={p}");
            let lhs = e(&small).embed_into(&big).unwrap().convolve(&fnn).unwrap();
            assert_eq!(lhs, en, "e_n = e_(n-1) f_n for n={n} q={p}");
        }
    }
}

#[test]
fn e1_and_e2_are_one() {
    for n in 1..=2 {
        let c = ctx(n, 3, 1, RingDescriptor::rational(3).unwrap());
        assert_eq!(e(&c), AlgebraElement::one(&c));
    }
}

#[test]
fn f_n_is_the_sum_of_characters_trivial_on_v_prime() {
    for &(p, k) in DESK {
        for n in 3..=4 {
            let c = ctx(n, p, k, RingDescriptor::cyclotomic(p).unwrap());
            let field = c.space().field().clone();
            let trivial_on_prime: Vec<AlgebraElement> = CharacterLabel::all(&field, n - 1)
                .into_iter()
                .filter(|a| a.0[..n - 2].iter().all(|&x| x == 0))
                .map(|a| character_idempotent(&c, &a).unwrap())
                .collect();
            assert_eq!(trivial_on_prime.len(), field.q() as usize);
            assert_eq!(sum(trivial_on_prime, &c), f(&c), "n={n} q={p}");
        }
    }
}

#[test]
fn b_family_on_v3() {
    for &(p, k) in DESK {
        let c = ctx(3, p, k, RingDescriptor::cyclotomic(p).unwrap());
        let field = c.space().field().clone();
        let labels = CharacterLabel::all(&field, 2);
        let bs: Vec<AlgebraElement> = labels.iter().map(|a| character_idempotent(&c, a).unwrap()).collect();
        let fnn = f(&c);
        let b1 = &bs[0];
        let b0 = character_idempotent(&c, &CharacterLabel::chi0(2, 1)).unwrap();
        assert_eq!(b1.convolve(&fnn).unwrap(), *b1);
        assert_eq!(b0.convolve(&fnn).unwrap(), b0);
        assert_eq!(sum(bs.clone(), &c), AlgebraElement::one(&c));
        for (i, x) in bs.iter().enumerate() {
            for (j, y) in bs.iter().enumerate() {
                let expected = if i == j { x.clone() } else { AlgebraElement::zero(&c) };
                assert_eq!(x.convolve(y).unwrap(), expected, "labels {:?} {:?}", labels[i], labels[j]);
            }
        }
    }
}

#[test]
fn conjugating_b_chi0_transports_the_label() {
    for &(p, k) in DESK {
        let c = ctx(3, p, k, RingDescriptor::cyclotomic(p).unwrap());
        let block = MatrixSpace::new(2, c.space().field().clone()).unwrap();
        let chi0 = CharacterLabel::chi0(2, 1);
        let b0 = character_idempotent(&c, &chi0).unwrap();
        for m in enumerate_group(GroupKind::Special, &block, DEFAULT_CAP).unwrap().elements() {
            let moved = b0.conjugate(&embed_block(m, 3).unwrap()).unwrap();
            let label = transport_label(&block, &chi0, m).unwrap();
            assert_eq!(moved, character_idempotent(&c, &label).unwrap(), "m = {m:?}");
        }
    }
}

#[test]
fn f_n_is_centralized_by_p_n_minus_1() {
    for &(p, k) in DESK {
        for n in 3..=4 {
            let c = ctx(n, p, k, RingDescriptor::rational(p).unwrap());
            let fnn = f(&c);
            let small = MatrixSpace::new(n - 1, c.space().field().clone()).unwrap();
            for g in enumerate_group(GroupKind::Affine, &small, DEFAULT_CAP).unwrap().elements() {
                assert_eq!(fnn.conjugate(&embed_block(g, n).unwrap()).unwrap(), fnn);
            }
        }
    }
}

#[test]
fn character_idempotents_over_a_field_with_roots_of_unity() {
    // F_7 contains the cube roots of unity 2 and 4
    let c = ctx(3, 3, 1, RingDescriptor::prime_field(3, FieldSpec::prime(7).unwrap()).unwrap());
    let bs: Vec<AlgebraElement> =
        CharacterLabel::all(c.space().field(), 2).iter().map(|a| character_idempotent(&c, a).unwrap()).collect();
    for b in &bs {
        assert!(b.is_idempotent().unwrap());
    }
    assert_eq!(sum(bs, &c), AlgebraElement::one(&c));
}
