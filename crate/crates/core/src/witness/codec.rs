//! Canonical JSON encoding of certificates.
//!
//! The encoding is compact JSON with a fixed field order and one trailing
//! newline. Big integers are decimal strings. The `digest` field is the
//! SHA-256 of the encoding with the digest field omitted. Parsing accepts
//! only the exact canonical bytes of a valid certificate.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CertMeta, CoeffKind, LevelCount, WitnessCertificate, WitnessTerm};
use crate::coeff_ring::{CyclotomicValue, RationalZpValue, RingValue};
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::matrix_group::FqMatrix;

pub const FORMAT: &str = "fullwit-cert/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertRepr {
    format: String,
    n: usize,
    field: FieldRepr,
    coeff_kind: String,
    compressed: bool,
    terms: Vec<TermRepr>,
    meta: MetaRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    digest: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRepr {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    r: CoeffRepr,
    g: Vec<Vec<u32>>,
    h: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Cyclotomic(CyclotomicRepr),
    Rational(RationalRepr),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclotomicRepr {
    num: Vec<String>,
    den_exp: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalRepr {
    num: String,
    den_exp: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaRepr {
    chi0: u32,
    levels: Vec<LevelRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelRepr {
    level: usize,
    terms: u64,
}

fn coeff_repr(v: &RingValue) -> CoeffRepr {
    match v {
        RingValue::Cyclotomic(c) => CoeffRepr::Cyclotomic(CyclotomicRepr {
            num: c.num().iter().map(BigInt::to_string).collect(),
            den_exp: c.den_exp(),
        }),
        RingValue::Rational(r) => CoeffRepr::Rational(RationalRepr { num: r.num().to_string(), den_exp: r.den_exp() }),
        RingValue::Field(_) => unreachable!("certificates never carry field coefficients"),
    }
}

fn repr(cert: &WitnessCertificate) -> CertRepr {
    CertRepr {
        format: FORMAT.to_string(),
        n: cert.n,
        field: FieldRepr { p: cert.field.p(), k: cert.field.k(), modulus: cert.field.modulus().to_vec() },
        coeff_kind: cert.coeff_kind.as_str().to_string(),
        compressed: cert.compressed,
        terms: cert.terms.iter().map(|t| TermRepr { r: coeff_repr(&t.coeff), g: t.g.rows(), h: t.h.rows() }).collect(),
        meta: MetaRepr {
            chi0: cert.meta.chi0,
            levels: cert.meta.levels.iter().map(|l| LevelRepr { level: l.level, terms: l.terms }).collect(),
        },
        digest: None,
    }
}

fn digest_of(body: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(body)))
}

/// Canonical byte encoding.
pub fn to_bytes(cert: &WitnessCertificate) -> Vec<u8> {
    let mut r = repr(cert);
    let body = serde_json::to_vec(&r).expect("certificate serializes");
    r.digest = Some(digest_of(&body));
    let mut out = serde_json::to_vec(&r).expect("certificate serializes");
    out.push(b'\n');
    out
}

/// Strict decimal integer: optional '-', no leading zeros, no "-0".
fn parse_decimal(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && !(s.starts_with('-') && digits == "0");
    if !canonical {
        return Err(Error::Invariant(format!("{s:?} is not a canonical decimal integer")));
    }
    s.parse::<BigInt>().map_err(|e| Error::Invariant(e.to_string()))
}

fn coeff_from_repr(r: &CoeffRepr, kind: CoeffKind, p: u32, i: usize) -> Result<RingValue> {
    let invariant = |msg: &str| Error::Invariant(format!("term {i}: {msg}"));
    match (r, kind) {
        (CoeffRepr::Cyclotomic(c), CoeffKind::Cyclotomic) => {
            if c.num.len() != p as usize - 1 {
                return Err(invariant("cyclotomic numerator must have p - 1 entries"));
            }
            let num: Vec<BigInt> = c.num.iter().map(|s| parse_decimal(s)).collect::<Result<_>>()?;
            let v = CyclotomicValue::new(p, num.clone(), c.den_exp);
            if v.num() != num.as_slice() || v.den_exp() != c.den_exp {
                return Err(invariant("coefficient is not in normal form"));
            }
            Ok(RingValue::Cyclotomic(v))
        }
        (CoeffRepr::Rational(c), CoeffKind::Rational) => {
            let num = parse_decimal(&c.num)?;
            let v = RationalZpValue::new(p, num.clone(), c.den_exp);
            if *v.num() != num || v.den_exp() != c.den_exp {
                return Err(invariant("coefficient is not in normal form"));
            }
            Ok(RingValue::Rational(v))
        }
        _ => Err(invariant("coefficient shape does not match coeff_kind")),
    }
}

fn matrix_from_rows(rows: &[Vec<u32>], n: usize, i: usize) -> Result<FqMatrix> {
    if rows.len() != n {
        return Err(Error::Invariant(format!("term {i}: matrix must have {n} rows")));
    }
    FqMatrix::from_rows(rows).map_err(|e| Error::Invariant(format!("term {i}: {e}")))
}

/// Parses and fully validates a certificate.
pub fn from_bytes(bytes: &[u8]) -> Result<WitnessCertificate> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("not JSON: {e}")))?;
    let format =
        value.get("format").and_then(|f| f.as_str()).ok_or_else(|| Error::Schema("missing \"format\" field".into()))?;
    if format != FORMAT {
        return Err(Error::Version { found: format.to_string(), expected: FORMAT.to_string() });
    }
    let r: CertRepr = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let digest = r.digest.clone().ok_or_else(|| Error::Schema("missing \"digest\" field".into()))?;

    let field =
        FieldSpec::new(r.field.p, r.field.k, r.field.modulus.clone()).map_err(|e| Error::Invariant(e.to_string()))?;
    let coeff_kind = match r.coeff_kind.as_str() {
        "cyclotomic" => CoeffKind::Cyclotomic,
        "rational" => CoeffKind::Rational,
        other => return Err(Error::Schema(format!("unknown coeff_kind {other:?}"))),
    };
    let p = field.p();
    let terms = r
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok(WitnessTerm {
                coeff: coeff_from_repr(&t.r, coeff_kind, p, i)?,
                g: matrix_from_rows(&t.g, r.n, i)?,
                h: matrix_from_rows(&t.h, r.n, i)?,
            })
        })
        .collect::<Result<_>>()?;
    let cert = WitnessCertificate {
        n: r.n,
        field,
        coeff_kind,
        compressed: r.compressed,
        terms,
        meta: CertMeta {
            chi0: r.meta.chi0,
            levels: r.meta.levels.iter().map(|l| LevelCount { level: l.level, terms: l.terms }).collect(),
        },
    };
    cert.validate()?;

    let canonical = to_bytes(&cert);
    let mut body = repr(&cert);
    body.digest = None;
    let expected = digest_of(&serde_json::to_vec(&body).expect("certificate serializes"));
    if digest != expected {
        return Err(Error::Invariant(format!("digest mismatch: recorded {digest}, computed {expected}")));
    }
    if canonical != bytes {
        return Err(Error::Schema("non-canonical encoding".into()));
    }
    Ok(cert)
}
