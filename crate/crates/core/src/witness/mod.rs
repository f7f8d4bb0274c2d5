//! Fullness certificates for the averaging idempotent e_n of D(U_n).
//!
//! A certificate is a list of terms `(r, g, h)` with `g, h` in the affine
//! group P_n, claiming `sum r g e_n h = 1` in the group algebra. Certificates
//! are built level by level: the base levels n = 1, 2 are trivial because
//! D(U_n) is trivial there, and each lift turns a level n-1 certificate into a
//! level n one by summing the character idempotents b_chi of V_n.
//!
//! A lift multiplies the term count by `q^(2(n-1))`: one copy of the previous
//! certificate per translation `v` in V_n and per character of V_n. The
//! characters trivial on V_n' absorb f_n, and every nontrivial character is
//! reached from chi_0 by conjugating with an SL_{n-1} block element.

mod codec;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

pub use codec::{from_bytes, to_bytes, FORMAT};

use crate::coeff_ring::{CyclotomicValue, RingDescriptor, RingValue};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::finite_field::FieldSpec;
use crate::group_algebra::{sandwich_sum, subgroup_average, AlgebraContext, AlgebraElement};
use crate::matrix_group::{
    complete_row_to_sl, embed_block, enumerate_derived_unipotent, enumerate_translation, transport_label,
    CharacterLabel, FqMatrix, GroupKey, GroupKind, MatrixSpace, DEFAULT_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    Cyclotomic,
    Rational,
}

impl CoeffKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoeffKind::Cyclotomic => "cyclotomic",
            CoeffKind::Rational => "rational",
        }
    }

    fn ring(self, p: u32) -> Result<RingDescriptor> {
        match self {
            CoeffKind::Cyclotomic => RingDescriptor::cyclotomic(p),
            CoeffKind::Rational => RingDescriptor::rational(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    pub coeff: RingValue,
    pub g: FqMatrix,
    pub h: FqMatrix,
}

/// Pre-compression term count of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub level: usize,
    pub terms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertMeta {
    /// chi_0 is the label (0, ..., 0, chi0).
    pub chi0: u32,
    pub levels: Vec<LevelCount>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub n: usize,
    pub field: FieldSpec,
    pub coeff_kind: CoeffKind,
    pub compressed: bool,
    pub terms: Vec<WitnessTerm>,
    pub meta: CertMeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub compress: bool,
    pub chi0: u32,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { compress: true, chi0: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    /// Support size of `sum r g e_n h - 1`.
    pub residual_support: usize,
    pub terms: usize,
    pub elapsed: Duration,
}

impl WitnessCertificate {
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn space(&self) -> Result<MatrixSpace> {
        MatrixSpace::new(self.n, self.field.clone())
    }

    pub fn ring(&self) -> Result<RingDescriptor> {
        self.coeff_kind.ring(self.p())
    }

    /// Pre-compression term count of the top level.
    pub fn uncompressed_terms(&self) -> u64 {
        self.meta.levels.last().map_or(0, |l| l.terms)
    }

    /// Checks every structural invariant: coefficient ring and normal form,
    /// P_n membership of all g and h, canonical ordering and metadata.
    pub fn validate(&self) -> Result<()> {
        let invariant = |msg: String| Err(Error::Invariant(msg));
        if self.n == 0 {
            return invariant("n must be at least 1".into());
        }
        let space = self.space().map_err(|e| Error::Invariant(e.to_string()))?;
        let ring = self.ring()?;
        let mut prev: Option<(GroupKey, GroupKey)> = None;
        for (i, t) in self.terms.iter().enumerate() {
            if !ring.contains(&t.coeff) {
                return invariant(format!("term {i}: coefficient is not in {ring}"));
            }
            if ring.is_zero(&t.coeff) {
                return invariant(format!("term {i}: zero coefficient"));
            }
            let normalized = match &t.coeff {
                RingValue::Cyclotomic(c) => c.is_normalized(),
                RingValue::Rational(r) => r.is_normalized(),
                RingValue::Field(_) => false,
            };
            if !normalized {
                return invariant(format!("term {i}: coefficient is not in normal form"));
            }
            for (name, m) in [("g", &t.g), ("h", &t.h)] {
                space.validate(m).map_err(|e| Error::Invariant(format!("term {i}: {name}: {e}")))?;
                if !m.has_affine_last_row() || space.det(m) != 1 {
                    return invariant(format!("term {i}: {name} is not in P_{}", self.n));
                }
            }
            let key = (space.key(&t.g), space.key(&t.h));
            if let Some(pk) = prev {
                if key < pk || (self.compressed && key == pk) {
                    return invariant(format!("term {i}: terms are not in canonical order"));
                }
            }
            prev = Some(key);
        }
        if self.meta.chi0 == 0 || self.meta.chi0 >= self.q() {
            return invariant(format!("chi0 = {} is not a nonzero element of F_{}", self.meta.chi0, self.q()));
        }
        let levels = &self.meta.levels;
        if levels.is_empty() || levels.last().unwrap().level != self.n {
            return invariant("level counts must end at level n".into());
        }
        if levels.windows(2).any(|w| w[1].level != w[0].level + 1) || levels.iter().any(|l| l.terms == 0) {
            return invariant("level counts must be consecutive and positive".into());
        }
        if levels[0].level > 2 {
            return invariant("level counts must start at a base level".into());
        }
        if !self.compressed
            && self.coeff_kind == CoeffKind::Cyclotomic
            && self.terms.len() as u64 != self.uncompressed_terms()
        {
            return invariant("uncompressed term count disagrees with metadata".into());
        }
        Ok(())
    }
}

/// The certificate `1 = 1 * I * e_n * I` for n <= 2, where e_n = 1.
pub fn build_base(n: usize, field: &FieldSpec) -> Result<WitnessCertificate> {
    if n == 0 || n > 2 {
        return Err(Error::Level(format!("base certificates exist for n = 1, 2 only, got {n}; use lift_level")));
    }
    MatrixSpace::new(n, field.clone())?;
    let p = field.p();
    Ok(WitnessCertificate {
        n,
        field: field.clone(),
        coeff_kind: CoeffKind::Cyclotomic,
        compressed: false,
        terms: vec![WitnessTerm {
            coeff: RingValue::Cyclotomic(CyclotomicValue::one(p)),
            g: FqMatrix::identity(n),
            h: FqMatrix::identity(n),
        }],
        meta: CertMeta { chi0: 1, levels: vec![LevelCount { level: n, terms: 1 }] },
    })
}

/// Lifts a level n-1 certificate to level n with chi_0 = (0, ..., 0, 1).
pub fn lift_level(cert: &WitnessCertificate) -> Result<WitnessCertificate> {
    lift_level_with(cert, 1)
}

/// Lifts a level n-1 certificate to level n, using the label (0, ..., 0, chi0)
/// as the distinguished nontrivial character trivial on V_n'.
pub fn lift_level_with(cert: &WitnessCertificate, chi0: u32) -> Result<WitnessCertificate> {
    let n = cert.n + 1;
    if cert.n < 2 {
        return Err(Error::Level(format!("lifting needs a certificate of level >= 2, got {}", cert.n)));
    }
    let field = &cert.field;
    if chi0 == 0 || chi0 >= field.q() {
        return Err(Error::Level(format!("chi0 = {chi0} must be a nonzero element of F_{}", field.q())));
    }
    let p = field.p();
    let ring = RingDescriptor::cyclotomic(p)?;
    let space = MatrixSpace::new(n, field.clone())?;
    let block = MatrixSpace::new(n - 1, field.clone())?;
    let translations = enumerate_translation(&space, false)?;
    let scale = ring.inv_p_pow(field.k() * (n as u32 - 1));

    let prev: Vec<(RingValue, FqMatrix, FqMatrix)> = cert
        .terms
        .iter()
        .map(|t| Ok((ring.coerce(&t.coeff)?, embed_block(&t.g, n)?, embed_block(&t.h, n)?)))
        .collect::<Result<_>>()?;

    let chi0_label = CharacterLabel::chi0(n - 1, chi0);
    let chi0_inv = field.inv(chi0)?;
    let labels = CharacterLabel::all(field, n - 1);
    let count = (translations.len() * labels.len() * prev.len()) as u64;
    let mut terms = Vec::with_capacity(count as usize);

    for label in &labels {
        // b_label = m b_source m^-1 with source the trivial character or chi_0.
        let (source, m, m_inv) = if label.is_trivial() {
            (label.clone(), space.identity(), space.identity())
        } else {
            let row: Vec<u32> = label.0.iter().map(|&x| field.mul(x, chi0_inv)).collect();
            let m_inv = complete_row_to_sl(&block, &row)?;
            let m = block.inv(&m_inv)?;
            if transport_label(&block, &chi0_label, &m)? != *label {
                return Err(Error::Invariant(format!("transport of chi_0 missed label {:?}", label.0)));
            }
            (chi0_label.clone(), embed_block(&m, n)?, embed_block(&m_inv, n)?)
        };
        for v in &translations {
            let e = source.exponent(field, &v.translation_part());
            let c = ring.mul_unchecked(&ring.zeta_power(-(e as i64))?, &scale);
            let mv = space.mul(&m, v);
            for (r, g, h) in &prev {
                terms.push(WitnessTerm {
                    coeff: ring.mul_unchecked(r, &c),
                    g: space.mul(&mv, g),
                    h: space.mul(h, &m_inv),
                });
            }
        }
    }
    debug_assert_eq!(terms.len() as u64, count);
    sort_terms(&space, &mut terms);

    let mut levels = cert.meta.levels.clone();
    levels.push(LevelCount { level: n, terms: count });
    Ok(WitnessCertificate {
        n,
        field: field.clone(),
        coeff_kind: CoeffKind::Cyclotomic,
        compressed: false,
        terms,
        meta: CertMeta { chi0, levels },
    })
}

fn sort_terms(space: &MatrixSpace, terms: &mut [WitnessTerm]) {
    terms.sort_by_cached_key(|t| (space.key(&t.g), space.key(&t.h)));
}

/// Builds the level-n certificate from the base, lifting one level at a time.
/// Intermediate levels stay uncompressed.
pub fn build(n: usize, field: &FieldSpec, options: BuildOptions) -> Result<WitnessCertificate> {
    if n == 0 {
        return Err(Error::Level("n must be at least 1".into()));
    }
    let mut cert = build_base(n.min(2), field)?;
    cert.meta.chi0 = options.chi0;
    for _ in 3..=n {
        cert = lift_level_with(&cert, options.chi0)?;
    }
    if options.compress {
        cert = compress(&cert)?;
    }
    Ok(cert)
}

/// Merges terms with equal (g, h), drops zero coefficients and re-sorts.
pub fn compress(cert: &WitnessCertificate) -> Result<WitnessCertificate> {
    let space = cert.space()?;
    let ring = cert.ring()?;
    let mut merged: BTreeMap<(GroupKey, GroupKey), WitnessTerm> = BTreeMap::new();
    for t in &cert.terms {
        let key = (space.key(&t.g), space.key(&t.h));
        match merged.get_mut(&key) {
            Some(slot) => slot.coeff = ring.add(&slot.coeff, &t.coeff)?,
            None => {
                merged.insert(key, t.clone());
            }
        }
    }
    let terms = merged.into_values().filter(|t| !ring.is_zero(&t.coeff)).collect();
    Ok(WitnessCertificate { terms, compressed: true, ..cert.clone() })
}

/// Keeps the coefficient of `zeta^j` of every term, as a Z[1/p]-certificate.
/// For j = 0 this is [`rationalize`]; for j >= 1 the represented sum is 0.
pub fn component(cert: &WitnessCertificate, j: usize) -> Result<WitnessCertificate> {
    let p = cert.p();
    if cert.coeff_kind == CoeffKind::Rational {
        return if j == 0 {
            Ok(cert.clone())
        } else {
            Err(Error::RingIncompatible("rational certificates have a single component".into()))
        };
    }
    if j + 1 >= p as usize {
        return Err(Error::RingIncompatible(format!("zeta^{j} is not a basis vector for p = {p}")));
    }
    let terms = cert
        .terms
        .iter()
        .filter_map(|t| match &t.coeff {
            RingValue::Cyclotomic(c) => {
                let r = c.component(j);
                (!r.is_zero()).then(|| WitnessTerm { coeff: RingValue::Rational(r), ..t.clone() })
            }
            _ => None,
        })
        .collect();
    Ok(WitnessCertificate { terms, coeff_kind: CoeffKind::Rational, ..cert.clone() })
}

/// Projects every coefficient onto the basis vector 1 of Z[1/p, zeta] over
/// Z[1/p]. The result is a certificate over Z[1/p], and hence over any ring
/// in which p is invertible.
pub fn rationalize(cert: &WitnessCertificate) -> Result<WitnessCertificate> {
    component(cert, 0)
}

fn check_target(cert: &WitnessCertificate, target: &RingDescriptor) -> Result<()> {
    if target.p() != cert.p() {
        return Err(Error::RingIncompatible(format!(
            "certificate is over p = {}, target ring {target} inverts {}",
            cert.p(),
            target.p()
        )));
    }
    if cert.coeff_kind == CoeffKind::Cyclotomic && !target.has_zeta() {
        return Err(Error::RingIncompatible(format!(
            "cyclotomic certificate needs a primitive {}-th root of unity in {target}",
            cert.p()
        )));
    }
    Ok(())
}

fn in_ambient(space: &MatrixSpace, m: &FqMatrix, ambient: GroupKind) -> bool {
    match ambient {
        GroupKind::Affine => m.has_affine_last_row() && space.det(m) == 1,
        GroupKind::Special => space.det(m) == 1,
        GroupKind::General => space.det(m) != 0,
    }
}

/// `sum r g e_n h` over `target`, with e_n recomputed from D(U_n).
pub fn evaluate(cert: &WitnessCertificate, target: &RingDescriptor, exec: Exec) -> Result<AlgebraElement> {
    cert.validate()?;
    check_target(cert, target)?;
    let space = cert.space()?;
    let ctx = AlgebraContext::new(space.clone(), target.clone());
    let derived = enumerate_derived_unipotent(&space, DEFAULT_CAP)?;
    let e = subgroup_average(&ctx, &derived)?;
    let terms: Vec<(RingValue, FqMatrix, FqMatrix)> =
        cert.terms.iter().map(|t| Ok((target.coerce(&t.coeff)?, t.g.clone(), t.h.clone()))).collect::<Result<_>>()?;
    sandwich_sum(&e, &terms, exec)
}

/// Checks `sum r g e_n h = 1` exactly over `target`, with every g and h
/// required to lie in the ambient group.
pub fn verify(
    cert: &WitnessCertificate,
    target: &RingDescriptor,
    ambient: GroupKind,
    exec: Exec,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let space = cert.space()?;
    for (i, t) in cert.terms.iter().enumerate() {
        if !in_ambient(&space, &t.g, ambient) || !in_ambient(&space, &t.h, ambient) {
            return Err(Error::Invariant(format!("term {i} lies outside {ambient}_{}", cert.n)));
        }
    }
    let sum = evaluate(cert, target, exec)?;
    let residual = sum.sub(&AlgebraElement::one(sum.context()))?;
    Ok(VerifyReport {
        ok: residual.is_zero(),
        residual_support: residual.support_len(),
        terms: cert.terms.len(),
        elapsed: start.elapsed(),
    })
}
