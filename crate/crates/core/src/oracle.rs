//! Brute-force fullness checks over a finite field.
//!
//! Elements of F G are dense vectors indexed by position in the enumerated
//! group. The two-sided ideal generated by x is grown from x by closing its
//! span under left and right multiplication by the group generators.

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::coeff_ring::{RingDescriptor, RingValue};
use crate::error::{Error, Result};
use crate::exec::{for_each_mut, Exec};
use crate::finite_field::FieldSpec;
use crate::group_algebra::{subgroup_average, AlgebraContext, AlgebraElement};
use crate::matrix_group::{enumerate_derived_unipotent, enumerate_unitriangular, EnumeratedGroup, FqMatrix};

fn field_of(ring: &RingDescriptor) -> Result<&FieldSpec> {
    match ring {
        RingDescriptor::PrimeField(f) => Ok(f.field()),
        other => Err(Error::RingIncompatible(format!("the oracle needs a finite field, got {other}"))),
    }
}

/// Reduced row-echelon basis of a subspace of F^len.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    len: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        Echelon { field, len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        let f = &self.field;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    if *r != 0 {
                        *x = f.sub(*x, f.mul(c, *r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns the new basis row if `v` was independent.
    pub fn insert(&mut self, v: Vec<u32>, exec: Exec) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.len);
        let f = self.field.clone();
        let mut v = self.reduce(v);
        let pivot = v.iter().position(|&x| x != 0)?;
        let s = f.inv(v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(*x, s);
        }
        for_each_mut(exec, &mut self.rows, |(_, row)| {
            let c = row[pivot];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    if *r != 0 {
                        *x = f.sub(*x, f.mul(c, *r));
                    }
                }
            }
        });
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v.clone()));
        Some(v)
    }
}

/// Left and right regular permutations of an enumerated group.
struct Actions {
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

fn position_of(group: &EnumeratedGroup, g: &FqMatrix) -> Result<usize> {
    group.position(group.space().key(g)).ok_or_else(|| Error::OutsideGroup(format!("{g:?} is not in {}", group.name())))
}

fn permutation(group: &EnumeratedGroup, f: impl Fn(&FqMatrix) -> FqMatrix) -> Result<Vec<usize>> {
    group.elements().iter().map(|g| position_of(group, &f(g))).collect()
}

fn actions(group: &EnumeratedGroup, by: &[FqMatrix]) -> Result<Actions> {
    let space = group.space();
    let left = by.iter().map(|s| permutation(group, |g| space.mul(s, g))).collect::<Result<_>>()?;
    let right = by.iter().map(|s| permutation(group, |g| space.mul(g, s))).collect::<Result<_>>()?;
    Ok(Actions { left, right })
}

fn permute(v: &[u32], perm: &[usize]) -> Vec<u32> {
    let mut out = vec![0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        out[perm[i]] = x;
    }
    out
}

fn check_context(group: &EnumeratedGroup, x: &AlgebraElement) -> Result<FieldSpec> {
    if x.context().space() != group.space() {
        return Err(Error::ContextMismatch);
    }
    Ok(field_of(x.ring())?.clone())
}

/// Dense coordinates of `x` in the basis of group elements.
pub fn to_dense(group: &EnumeratedGroup, x: &AlgebraElement) -> Result<Vec<u32>> {
    check_context(group, x)?;
    let mut v = vec![0; group.order()];
    for (key, c) in x.terms() {
        let i =
            group.position(key).ok_or_else(|| Error::OutsideGroup(format!("support of x leaves {}", group.name())))?;
        v[i] = match c {
            RingValue::Field(a) => *a,
            other => return Err(Error::RingMismatch(format!("{other} is not a field element"))),
        };
    }
    Ok(v)
}

/// The two-sided ideal of F G generated by `x`, as a row-reduced basis.
#[derive(Clone, Debug)]
pub struct IdealSpan {
    pub group: String,
    pub order: usize,
    pub basis: Echelon,
}

impl IdealSpan {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Closes span{x} under left and right multiplication by the generators of
/// `group` until it stops growing.
pub fn two_sided_ideal(group: &EnumeratedGroup, x: &AlgebraElement, exec: Exec) -> Result<IdealSpan> {
    let field = check_context(group, x)?;
    let acts = actions(group, group.generators())?;
    let mut basis = Echelon::new(field, group.order());
    let mut queue = VecDeque::new();
    if let Some(row) = basis.insert(to_dense(group, x)?, exec) {
        queue.push_back(row);
    }
    while let Some(v) = queue.pop_front() {
        for perm in acts.left.iter().chain(&acts.right) {
            if let Some(row) = basis.insert(permute(&v, perm), exec) {
                queue.push_back(row);
            }
        }
    }
    Ok(IdealSpan { group: group.name(), order: group.order(), basis })
}

/// span{g x h : g, h in G} by the full double loop. Quadratic in |G|.
pub fn double_loop_span(group: &EnumeratedGroup, x: &AlgebraElement, exec: Exec) -> Result<IdealSpan> {
    let field = check_context(group, x)?;
    let acts = actions(group, group.elements())?;
    let v = to_dense(group, x)?;
    let mut right_span = Echelon::new(field.clone(), group.order());
    for perm in &acts.right {
        right_span.insert(permute(&v, perm), exec);
    }
    let right_rows: Vec<Vec<u32>> = right_span.rows().map(<[u32]>::to_vec).collect();
    let mut basis = Echelon::new(field, group.order());
    for perm in &acts.left {
        for row in &right_rows {
            basis.insert(permute(row, perm), exec);
        }
    }
    Ok(IdealSpan { group: group.name(), order: group.order(), basis })
}

fn identity_vector(group: &EnumeratedGroup) -> Result<Vec<u32>> {
    let mut v = vec![0; group.order()];
    v[position_of(group, &group.space().identity())?] = 1;
    Ok(v)
}

/// Whether the ideal generated by `x` contains the identity.
pub fn is_full(group: &EnumeratedGroup, x: &AlgebraElement, exec: Exec) -> Result<bool> {
    let span = two_sided_ideal(group, x, exec)?;
    Ok(span.basis.contains(&identity_vector(group)?))
}

/// Rank of the family {e g e : g in G}, the dimension of the corner eFGe.
pub fn corner_dimension(group: &EnumeratedGroup, e: &AlgebraElement, exec: Exec) -> Result<usize> {
    let field = check_context(group, e)?;
    if !e.is_idempotent()? {
        return Err(Error::NotIdempotent);
    }
    let space = group.space();
    let support: Vec<(usize, u32)> = to_dense(group, e)?.into_iter().enumerate().filter(|&(_, c)| c != 0).collect();
    let elements = group.elements();
    let mut basis = Echelon::new(field.clone(), group.order());
    for g in elements {
        let mut v = vec![0; group.order()];
        for &(a, ca) in &support {
            let ag = space.mul(&elements[a], g);
            for &(b, cb) in &support {
                let i = position_of(group, &space.mul(&ag, &elements[b]))?;
                v[i] = field.add(v[i], field.mul(ca, cb));
            }
        }
        basis.insert(v, exec);
    }
    Ok(basis.dim())
}

/// Which idempotent of the group algebra to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdempotentTag {
    /// Average over D(U_n).
    DerivedUnipotent,
    /// Average over U_n.
    Unipotent,
}

impl IdempotentTag {
    pub fn as_str(self) -> &'static str {
        match self {
            IdempotentTag::DerivedUnipotent => "e",
            IdempotentTag::Unipotent => "u-avg",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(IdempotentTag::DerivedUnipotent),
            "u-avg" => Ok(IdempotentTag::Unipotent),
            other => Err(Error::Schema(format!("unknown idempotent {other:?}, expected e or u-avg"))),
        }
    }

    /// The averaging idempotent in the algebra of `group` over `ring`.
    pub fn element(self, group: &EnumeratedGroup, ring: &RingDescriptor, cap: usize) -> Result<AlgebraElement> {
        let space = group.space();
        let ctx = AlgebraContext::new(space.clone(), ring.clone());
        let elements = match self {
            IdempotentTag::DerivedUnipotent => enumerate_derived_unipotent(space, cap)?,
            IdempotentTag::Unipotent => enumerate_unitriangular(space, cap)?,
        };
        subgroup_average(&ctx, &elements)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub group: String,
    pub order: usize,
    pub field: String,
    pub idempotent: String,
    pub full: bool,
    pub ideal_dim: usize,
    pub corner_dim: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Runs the fullness test and the corner rank for one idempotent.
pub fn run(
    group: &EnumeratedGroup,
    tag: IdempotentTag,
    ring: &RingDescriptor,
    cap: usize,
    exec: Exec,
) -> Result<OracleReport> {
    let start = Instant::now();
    let field = field_of(ring)?.clone();
    let e = tag.element(group, ring, cap)?;
    let span = two_sided_ideal(group, &e, exec)?;
    let full = span.basis.contains(&identity_vector(group)?);
    let corner_dim = corner_dimension(group, &e, exec)?;
    Ok(OracleReport {
        group: group.name(),
        order: group.order(),
        field: field.to_string(),
        idempotent: tag.as_str().to_string(),
        full,
        ideal_dim: span.dim(),
        corner_dim,
        elapsed: start.elapsed(),
    })
}

/// The algebra context of `group` over `ring`.
pub fn context(group: &EnumeratedGroup, ring: &RingDescriptor) -> Arc<AlgebraContext> {
    AlgebraContext::new(group.space().clone(), ring.clone())
}
