//! Sparse exact arithmetic in the group algebra RG of a matrix group over F_q.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::coeff_ring::{RingDescriptor, RingValue};
use crate::error::{Error, Result};
use crate::exec::{fold_chunks, Exec};
use crate::matrix_group::{embed_block, enumerate_translation, CharacterLabel, FqMatrix, GroupKey, MatrixSpace};

/// Outer-loop items per parallel work unit in convolutions.
const CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    space: MatrixSpace,
    ring: RingDescriptor,
}

impl AlgebraContext {
    pub fn new(space: MatrixSpace, ring: RingDescriptor) -> Arc<Self> {
        Arc::new(AlgebraContext { space, ring })
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }
}

/// A finitely supported function from invertible matrices to the ring, with
/// no explicit zero coefficients.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<GroupKey, RingValue>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

fn same_context(a: &Arc<AlgebraContext>, b: &Arc<AlgebraContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

type Accumulator = HashMap<GroupKey, RingValue>;

fn accumulate(ring: &RingDescriptor, acc: &mut Accumulator, key: GroupKey, v: RingValue) {
    match acc.get_mut(&key) {
        Some(slot) => *slot = ring.add_unchecked(slot, &v),
        None => {
            acc.insert(key, v);
        }
    }
}

fn merge(ring: &RingDescriptor, mut a: Accumulator, b: Accumulator) -> Accumulator {
    let (mut big, small) = if a.len() >= b.len() { (std::mem::take(&mut a), b) } else { (b, a) };
    for (k, v) in small {
        accumulate(ring, &mut big, k, v);
    }
    big
}

impl AlgebraElement {
    fn from_accumulator(ctx: Arc<AlgebraContext>, acc: Accumulator) -> Self {
        let ring = ctx.ring.clone();
        let terms = acc.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect();
        AlgebraElement { ctx, terms }
    }

    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        AlgebraElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        let id = ctx.space.identity();
        AlgebraElement { ctx: ctx.clone(), terms: BTreeMap::from([(ctx.space.key(&id), ctx.ring.one())]) }
    }

    /// `c * g` for an invertible `g`.
    pub fn monomial(ctx: &Arc<AlgebraContext>, g: &FqMatrix, c: RingValue) -> Result<Self> {
        Self::from_terms(ctx, [(g.clone(), c)])
    }

    pub fn delta(ctx: &Arc<AlgebraContext>, g: &FqMatrix) -> Result<Self> {
        Self::monomial(ctx, g, ctx.ring.one())
    }

    /// Sums the given (element, coefficient) pairs, merging repeats.
    pub fn from_terms<I>(ctx: &Arc<AlgebraContext>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FqMatrix, RingValue)>,
    {
        let mut acc = Accumulator::new();
        for (g, c) in terms {
            ctx.space.validate(&g)?;
            if !ctx.space.is_invertible(&g) {
                return Err(Error::SingularMatrix);
            }
            if !ctx.ring.contains(&c) {
                return Err(Error::RingMismatch(format!("{c} is not an element of {}", ctx.ring)));
            }
            accumulate(&ctx.ring, &mut acc, ctx.space.key(&g), c);
        }
        Ok(Self::from_accumulator(ctx.clone(), acc))
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ctx.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (GroupKey, &RingValue)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Support as decoded matrices, in key order.
    pub fn support(&self) -> Vec<(FqMatrix, RingValue)> {
        self.terms.iter().map(|(k, v)| (self.ctx.space.decode(*k), v.clone())).collect()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &FqMatrix) -> RingValue {
        self.terms.get(&self.ctx.space.key(g)).cloned().unwrap_or_else(|| self.ctx.ring.zero())
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut acc: Accumulator = self.terms.clone().into_iter().collect();
        for (k, v) in &other.terms {
            accumulate(&self.ctx.ring, &mut acc, *k, v.clone());
        }
        Ok(Self::from_accumulator(self.ctx.clone(), acc))
    }

    pub fn neg(&self) -> Self {
        let ring = &self.ctx.ring;
        AlgebraElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, ring.neg_unchecked(v))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingValue) -> Result<Self> {
        let ring = &self.ctx.ring;
        if !ring.contains(c) {
            return Err(Error::RingMismatch(format!("{c} is not an element of {ring}")));
        }
        let acc = self.terms.iter().map(|(k, v)| (*k, ring.mul_unchecked(c, v))).collect();
        Ok(Self::from_accumulator(self.ctx.clone(), acc))
    }

    /// Group algebra product.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.convolve_with(other, Exec::default())
    }

    /// `(x y)(g) = sum_h x(h) y(h^-1 g)`, as a double loop over both supports.
    pub fn convolve_with(&self, other: &Self, exec: Exec) -> Result<Self> {
        self.check_context(other)?;
        let space = &self.ctx.space;
        let ring = &self.ctx.ring;
        let xs = self.support();
        let ys = other.support();
        let acc = fold_chunks(
            exec,
            &xs,
            CHUNK,
            Accumulator::new,
            |mut acc, (h, a)| {
                for (k, b) in &ys {
                    accumulate(ring, &mut acc, space.key(&space.mul(h, k)), ring.mul_unchecked(a, b));
                }
                acc
            },
            |a, b| merge(ring, a, b),
        );
        Ok(Self::from_accumulator(self.ctx.clone(), acc))
    }

    /// `g x g^-1`: the coefficient at `k` is `x(g^-1 k g)`.
    pub fn conjugate(&self, g: &FqMatrix) -> Result<Self> {
        let space = &self.ctx.space;
        let gi = space.inv(g)?;
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                let h = space.decode(*k);
                (space.key(&space.mul(&space.mul(g, &h), &gi)), v.clone())
            })
            .collect();
        Ok(AlgebraElement { ctx: self.ctx.clone(), terms })
    }

    /// Pushes the element forward along the block embedding into a larger
    /// matrix size over the same field and ring.
    pub fn embed_into(&self, target: &Arc<AlgebraContext>) -> Result<Self> {
        if target.ring != self.ctx.ring || target.space.field() != self.ctx.space.field() {
            return Err(Error::ContextMismatch);
        }
        let n = target.space.n();
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let big = embed_block(&self.ctx.space.decode(*k), n)?;
            terms.insert(target.space.key(&big), v.clone());
        }
        Ok(AlgebraElement { ctx: target.clone(), terms })
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        Ok(self.convolve(self)? == *self)
    }
}

/// `(1/|S|) sum_{s in S} s`, after checking that `S` is a subgroup and that
/// `|S|` is a unit of the ring.
pub fn subgroup_average(ctx: &Arc<AlgebraContext>, elements: &[FqMatrix]) -> Result<AlgebraElement> {
    let space = &ctx.space;
    if elements.is_empty() {
        return Err(Error::NotASubgroup("empty set".into()));
    }
    let keys: HashSet<GroupKey> = elements.iter().map(|g| space.key(g)).collect();
    if keys.len() != elements.len() {
        return Err(Error::NotASubgroup("repeated elements".into()));
    }
    for a in elements {
        if !keys.contains(&space.key(&space.inv(a)?)) {
            return Err(Error::NotASubgroup("not closed under inverses".into()));
        }
        for b in elements {
            if !keys.contains(&space.key(&space.mul(a, b))) {
                return Err(Error::NotASubgroup("not closed under products".into()));
            }
        }
    }
    let c = ctx.ring.inverse_of_count(elements.len() as u64)?;
    AlgebraElement::from_terms(ctx, elements.iter().map(|g| (g.clone(), c.clone())))
}

/// `b_chi = (1/|V_n|) sum_{v in V_n} chi(v)^-1 v` for `chi = chi_a`.
pub fn character_idempotent(ctx: &Arc<AlgebraContext>, label: &CharacterLabel) -> Result<AlgebraElement> {
    let space = &ctx.space;
    let n = space.n();
    if n < 2 || label.0.len() != n - 1 {
        return Err(Error::DimensionMismatch(format!("label of length {} for n = {n}", label.0.len())));
    }
    let translations = enumerate_translation(space, false)?;
    let scale = ctx.ring.inverse_of_count(translations.len() as u64)?;
    let mut terms = Vec::with_capacity(translations.len());
    for v in translations {
        let e = label.exponent(space.field(), &v.translation_part());
        let chi_inv = if e == 0 { ctx.ring.one() } else { ctx.ring.zeta_power(-(e as i64))? };
        terms.push((v, ctx.ring.mul_unchecked(&chi_inv, &scale)));
    }
    AlgebraElement::from_terms(ctx, terms)
}

/// `sum_i c_i g_i e h_i` for terms `(c_i, g_i, h_i)`.
pub fn sandwich_sum(
    e: &AlgebraElement,
    terms: &[(RingValue, FqMatrix, FqMatrix)],
    exec: Exec,
) -> Result<AlgebraElement> {
    let ctx = e.context();
    let space = &ctx.space;
    let ring = &ctx.ring;
    for (c, g, h) in terms {
        if !ring.contains(c) {
            return Err(Error::RingMismatch(format!("{c} is not an element of {ring}")));
        }
        space.validate(g)?;
        space.validate(h)?;
    }
    let support = e.support();
    let acc = fold_chunks(
        exec,
        terms,
        CHUNK,
        Accumulator::new,
        |mut acc, (c, g, h)| {
            for (u, eu) in &support {
                let k = space.key(&space.mul(&space.mul(g, u), h));
                accumulate(ring, &mut acc, k, ring.mul_unchecked(c, eu));
            }
            acc
        },
        |a, b| merge(ring, a, b),
    );
    Ok(AlgebraElement::from_accumulator(ctx.clone(), acc))
}
