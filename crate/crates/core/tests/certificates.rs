use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fullwit_core::coeff_ring::{CyclotomicValue, RationalZpValue};
use fullwit_core::matrix_group::enumerate_group;
use fullwit_core::oracle::{is_full, IdempotentTag};
use fullwit_core::witness::{self, build, from_bytes, rationalize, to_bytes, verify, BuildOptions};
use fullwit_core::{Error, Exec, FieldSpec, GroupKind, MatrixSpace, RingDescriptor, RingValue, DEFAULT_CAP};
use fullwit_core::{WitnessCertificate, WitnessTerm};

fn cert(n: usize, p: u32, k: u32, compress: bool) -> WitnessCertificate {
    build(n, &FieldSpec::find(p, k).unwrap(), BuildOptions { compress, ..BuildOptions::default() }).unwrap()
}

fn ok(c: &WitnessCertificate, ring: &RingDescriptor) -> bool {
    verify(c, ring, GroupKind::Special, Exec::default()).unwrap().ok
}

#[test]
fn compressed_and_uncompressed_verify() {
    for (n, p, k) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2), (3, 5, 1)] {
        let ring = RingDescriptor::cyclotomic(p).unwrap();
        let full = cert(n, p, k, false);
        let small = cert(n, p, k, true);
        assert!(small.terms.len() <= full.terms.len());
        assert_eq!(full.terms.len() as u64, full.uncompressed_terms());
        assert!(ok(&full, &ring), "uncompressed n={n} q={}", full.q());
        assert!(ok(&small, &ring), "compressed n={n} q={}", small.q());
        assert!(verify(&small, &ring, GroupKind::General, Exec::Sequential).unwrap().ok);
    }
}

#[test]
fn level_counts_follow_the_recurrence() {
    for (n, p, k) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (4, 3, 1), (3, 2, 2), (5, 2, 1)] {
        let c = cert(n, p, k, true);
        let q = c.q() as u64;
        let mut expected = 1u64;
        for l in &c.meta.levels {
            if l.level > 2 {
                expected *= q.pow(2 * (l.level as u32 - 1));
            }
            assert_eq!(l.terms, expected, "level {} q={q}", l.level);
        }
    }
}

#[test]
fn codec_round_trips_every_variant() {
    for (n, p, k) in [(1, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 1), (3, 2, 2), (4, 2, 1)] {
        for compress in [false, true] {
            let c = cert(n, p, k, compress);
            let bytes = to_bytes(&c);
            assert_eq!(from_bytes(&bytes).unwrap(), c);
            let r = rationalize(&c).unwrap();
            assert_eq!(from_bytes(&to_bytes(&r)).unwrap(), r);
        }
    }
}

#[test]
fn every_single_byte_flip_is_rejected_or_fails() {
    let c = cert(3, 2, 1, true);
    let ring = RingDescriptor::cyclotomic(2).unwrap();
    let bytes = to_bytes(&c);
    for i in 0..bytes.len() {
        for delta in [1u8, 2, 32] {
            let mut b = bytes.clone();
            b[i] ^= delta;
            if let Ok(t) = from_bytes(&b) {
                panic!("byte {i} ^ {delta} accepted: ok = {}", ok(&t, &ring));
            }
        }
    }
}

fn corrupt(c: &WitnessCertificate, rng: &mut ChaCha8Rng) -> (String, WitnessCertificate) {
    let mut t = c.clone();
    let i = rng.gen_range(0..t.terms.len());
    let p = t.p();
    let ring = t.ring().unwrap();
    let kind = rng.gen_range(0..4);
    let what = match kind {
        0 => {
            t.terms[i].coeff = ring.neg(&t.terms[i].coeff).unwrap();
            "negate"
        }
        1 => {
            t.terms[i].coeff = ring.add(&t.terms[i].coeff, &t.terms[i].coeff).unwrap();
            "double"
        }
        2 => {
            let one = match &t.terms[i].coeff {
                RingValue::Cyclotomic(_) => RingValue::Cyclotomic(CyclotomicValue::one(p)),
                _ => RingValue::Rational(RationalZpValue::one(p)),
            };
            t.terms[i].coeff = ring.add(&t.terms[i].coeff, &one).unwrap();
            "add one"
        }
        _ => {
            t.terms.remove(i);
            "drop"
        }
    };
    (format!("{what} term {i}"), t)
}

#[test]
fn seeded_corruptions_never_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (n, p) in [(3, 2), (3, 3), (4, 2)] {
        let c = cert(n, p, 1, true);
        let ring = RingDescriptor::cyclotomic(p).unwrap();
        for _ in 0..10 {
            let (what, t) = corrupt(&c, &mut rng);
            let accepted = match verify(&t, &ring, GroupKind::Special, Exec::default()) {
                Ok(r) => r.ok,
                Err(_) => false,
            };
            assert!(!accepted, "n={n} q={p}: {what} verified");
            // the file path must not accept it either
            if let Ok(parsed) = from_bytes(&to_bytes(&t)) {
                assert!(!ok(&parsed, &ring), "{what}");
            }
        }
    }
}

#[test]
fn non_normalized_and_foreign_terms_are_invalid() {
    let c = cert(3, 3, 1, true);
    let mut t = c.clone();
    t.terms[0].coeff = RingValue::Rational(RationalZpValue::one(3));
    assert!(matches!(t.validate(), Err(Error::RingMismatch(_)) | Err(Error::Invariant(_))));

    let mut t = c.clone();
    t.terms.push(t.terms[0].clone());
    assert!(matches!(t.validate(), Err(Error::Invariant(_))));

    let mut t = c.clone();
    let space = t.space().unwrap();
    let diag = space.matrix(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]).unwrap();
    t.terms[0] = WitnessTerm { coeff: t.terms[0].coeff.clone(), g: diag, h: space.identity() };
    assert!(t.validate().is_err());

    let zero = RingValue::Cyclotomic(CyclotomicValue::new(3, vec![BigInt::from(0), BigInt::from(0)], 0));
    let mut t = c;
    t.terms[0].coeff = zero;
    assert!(t.validate().is_err());
}

#[test]
fn certificates_agree_with_the_oracle() {
    for (n, p, k, ls) in [(3, 2, 1, vec![3u32, 5, 7]), (2, 3, 1, vec![2, 5]), (3, 3, 1, vec![2])] {
        let field = FieldSpec::find(p, k).unwrap();
        let c = rationalize(&build(n, &field, BuildOptions::default()).unwrap()).unwrap();
        let g = enumerate_group(GroupKind::Special, &MatrixSpace::new(n, field).unwrap(), DEFAULT_CAP).unwrap();
        for l in ls {
            let ring = RingDescriptor::prime_field(p, FieldSpec::prime(l).unwrap()).unwrap();
            let e = IdempotentTag::DerivedUnipotent.element(&g, &ring, DEFAULT_CAP).unwrap();
            assert_eq!(ok(&c, &ring), is_full(&g, &e, Exec::default()).unwrap(), "n={n} q={p} l={l}");
            assert!(ok(&c, &ring));
        }
    }
}

#[test]
fn evaluation_matches_between_policies() {
    let c = cert(4, 2, 1, true);
    let ring = RingDescriptor::cyclotomic(2).unwrap();
    let a = witness::evaluate(&c, &ring, Exec::Sequential).unwrap();
    let b = witness::evaluate(&c, &ring, Exec::default()).unwrap();
    assert_eq!(a, b);
}
