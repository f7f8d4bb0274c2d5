//! Matrices over F_q and the concrete subgroups of SL_n(F_q) the construction
//! works with: U_n, its derived subgroup D(U_n), the translation groups V_n
//! and V_n', the affine group P_n, SL_n and GL_n.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;

/// Default bound on the number of elements any enumeration may produce.
pub const DEFAULT_CAP: usize = 25_000;

/// Canonical integer encoding of a matrix: the row-major entry codes read as
/// base-q digits, first entry most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupKey(pub u64);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl FqMatrix {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(FqMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must have length n".into()));
        }
        Ok(FqMatrix { n, entries: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FqMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Whether the last row is (0, ..., 0, 1), i.e. the matrix lies in the
    /// affine group (given it is in SL_n).
    pub fn has_affine_last_row(&self) -> bool {
        let n = self.n;
        n == 0 || (self.row(n - 1)[..n - 1].iter().all(|&x| x == 0) && self.get(n - 1, n - 1) == 1)
    }

    /// The first n-1 entries of the last column.
    pub fn translation_part(&self) -> Vec<u32> {
        (0..self.n.saturating_sub(1)).map(|i| self.get(i, self.n - 1)).collect()
    }
}

/// Block embedding `M -> diag(M, I_{n-m})`.
pub fn embed_block(m: &FqMatrix, n: usize) -> Result<FqMatrix> {
    if m.n > n {
        return Err(Error::DimensionMismatch(format!("cannot embed {}x{} into {n}x{n}", m.n, m.n)));
    }
    let mut out = FqMatrix::identity(n);
    for i in 0..m.n {
        for j in 0..m.n {
            out.set(i, j, m.get(i, j));
        }
    }
    Ok(out)
}

/// n x n matrices over a fixed F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    n: usize,
    field: FieldSpec,
}

impl MatrixSpace {
    pub fn new(n: usize, field: FieldSpec) -> Result<Self> {
        let fits = (field.q() as u64).checked_pow((n * n) as u32).is_some_and(|c| c > 0);
        if !fits && n > 0 {
            return Err(Error::DimensionMismatch(format!("{n}x{n} matrices over {field} do not fit a 64-bit key")));
        }
        Ok(MatrixSpace { n, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn identity(&self) -> FqMatrix {
        FqMatrix::identity(self.n)
    }

    /// Checks shape and that every entry is a field element.
    pub fn validate(&self, a: &FqMatrix) -> Result<()> {
        if a.n != self.n {
            return Err(Error::DimensionMismatch(format!("expected {0}x{0}, got {1}x{1}", self.n, a.n)));
        }
        if a.entries.iter().any(|&x| !self.field.contains(x)) {
            return Err(Error::InvalidField(format!("matrix entry outside {}", self.field)));
        }
        Ok(())
    }

    /// Validates shape and entries.
    pub fn matrix(&self, rows: &[Vec<u32>]) -> Result<FqMatrix> {
        let m = FqMatrix::from_rows(rows)?;
        self.validate(&m)?;
        Ok(m)
    }

    pub fn key(&self, a: &FqMatrix) -> GroupKey {
        let q = self.q() as u64;
        GroupKey(a.entries.iter().fold(0u64, |acc, &x| acc * q + x as u64))
    }

    pub fn decode(&self, key: GroupKey) -> FqMatrix {
        let q = self.q() as u64;
        let mut entries = vec![0u32; self.n * self.n];
        let mut rest = key.0;
        for slot in entries.iter_mut().rev() {
            *slot = (rest % q) as u32;
            rest /= q;
        }
        FqMatrix { n: self.n, entries }
    }

    pub fn mul(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        let n = self.n;
        let f = &self.field;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a.entries[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let bkj = b.entries[k * n + j];
                    if bkj != 0 {
                        let idx = i * n + j;
                        out[idx] = f.add(out[idx], f.mul(aik, bkj));
                    }
                }
            }
        }
        FqMatrix { n, entries: out }
    }

    pub fn checked_mul(&self, a: &FqMatrix, b: &FqMatrix) -> Result<FqMatrix> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul(a, b))
    }

    pub fn det(&self, a: &FqMatrix) -> u32 {
        let n = self.n;
        let f = &self.field;
        let mut m = a.entries.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], pinv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let v = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inv(&self, a: &FqMatrix) -> Result<FqMatrix> {
        let n = self.n;
        let f = &self.field;
        let mut m = a.entries.clone();
        let mut out = FqMatrix::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r * n + col] != 0).ok_or(Error::SingularMatrix)?;
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                    out.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = f.inv(m[col * n + col])?;
            for j in 0..n {
                m[col * n + j] = f.mul(m[col * n + j], pinv);
                out[col * n + j] = f.mul(out[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m[r * n + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], v);
                    let w = f.mul(factor, out[col * n + j]);
                    out[r * n + j] = f.sub(out[r * n + j], w);
                }
            }
        }
        Ok(FqMatrix { n, entries: out })
    }

    pub fn is_invertible(&self, a: &FqMatrix) -> bool {
        self.det(a) != 0
    }

    /// `I + c E_{ij}`.
    pub fn transvection(&self, i: usize, j: usize, c: u32) -> FqMatrix {
        let mut m = self.identity();
        m.set(i, j, c);
        m
    }

    /// The element of V_n with last column `(a_1, ..., a_{n-1}, 1)`.
    pub fn translation(&self, a: &[u32]) -> FqMatrix {
        assert_eq!(a.len() + 1, self.n);
        let mut m = self.identity();
        for (i, &x) in a.iter().enumerate() {
            m.set(i, self.n - 1, x);
        }
        m
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(&self, u: &FqMatrix, v: &FqMatrix) -> Result<FqMatrix> {
        let ui = self.inv(u)?;
        let vi = self.inv(v)?;
        Ok(self.mul(&self.mul(u, v), &self.mul(&ui, &vi)))
    }

    pub fn apply_row(&self, a: &[u32], m: &FqMatrix) -> Vec<u32> {
        let f = &self.field;
        (0..self.n).map(|j| (0..self.n).fold(0, |acc, i| f.add(acc, f.mul(a[i], m.get(i, j))))).collect()
    }

    pub fn apply_column(&self, m: &FqMatrix, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        (0..self.n).map(|i| (0..self.n).fold(0, |acc, j| f.add(acc, f.mul(m.get(i, j), v[j])))).collect()
    }

    /// All vectors of F_q^len in code order (first coordinate most significant).
    pub fn vectors(&self, len: usize) -> Vec<Vec<u32>> {
        all_vectors(self.q(), len)
    }
}

fn all_vectors(q: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn guard(what: &str, size: u128, cap: usize) -> Result<()> {
    if size > cap as u128 {
        Err(Error::SizeGuard { what: what.to_string(), size, cap })
    } else {
        Ok(())
    }
}

fn q_pow(q: u32, e: usize) -> u128 {
    (q as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

/// Matrices with unit diagonal whose free entries range over `positions`.
fn enumerate_pattern(space: &MatrixSpace, positions: &[(usize, usize)]) -> Vec<FqMatrix> {
    let mut out: Vec<FqMatrix> = all_vectors(space.q(), positions.len())
        .into_iter()
        .map(|vals| {
            let mut m = space.identity();
            for (&(i, j), &x) in positions.iter().zip(&vals) {
                m.set(i, j, x);
            }
            m
        })
        .collect();
    out.sort_by_key(|m| space.key(m));
    out
}

/// U_n: upper unitriangular matrices, sorted by key.
pub fn enumerate_unitriangular(space: &MatrixSpace, cap: usize) -> Result<Vec<FqMatrix>> {
    let n = space.n;
    guard("U_n", q_pow(space.q(), n * n.saturating_sub(1) / 2), cap)?;
    let positions: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Ok(enumerate_pattern(space, &positions))
}

/// D(U_n): unitriangular matrices with zero first superdiagonal.
pub fn enumerate_derived_unipotent(space: &MatrixSpace, cap: usize) -> Result<Vec<FqMatrix>> {
    let n = space.n;
    let free = if n >= 2 { (n - 1) * (n - 2) / 2 } else { 0 };
    guard("D(U_n)", q_pow(space.q(), free), cap)?;
    let positions: Vec<_> = (0..n).flat_map(|i| (i + 2..n).map(move |j| (i, j))).collect();
    Ok(enumerate_pattern(space, &positions))
}

/// V_n (or V_n' when `primed`): identity plus a last column, with the entry
/// in row n-1 forced to zero for V_n'.
pub fn enumerate_translation(space: &MatrixSpace, primed: bool) -> Result<Vec<FqMatrix>> {
    let n = space.n;
    if n < 2 {
        return Err(Error::DimensionMismatch("translation groups need n >= 2".into()));
    }
    let rows = if primed { n - 2 } else { n - 1 };
    let positions: Vec<_> = (0..rows).map(|i| (i, n - 1)).collect();
    Ok(enumerate_pattern(space, &positions))
}

/// Closure of the set of commutators `[u, v]`, `u, v` in `group`, under
/// multiplication. Brute force; sorted by key.
pub fn commutator_closure(space: &MatrixSpace, group: &[FqMatrix]) -> Result<Vec<FqMatrix>> {
    let inverses: Vec<FqMatrix> = group.iter().map(|g| space.inv(g)).collect::<Result<_>>()?;
    let mut gens: HashMap<GroupKey, FqMatrix> = HashMap::new();
    for (u, ui) in group.iter().zip(&inverses) {
        for (v, vi) in group.iter().zip(&inverses) {
            let c = space.mul(&space.mul(u, v), &space.mul(ui, vi));
            gens.entry(space.key(&c)).or_insert(c);
        }
    }
    let gens: Vec<FqMatrix> = gens.into_values().collect();
    Ok(closure(space, &gens, usize::MAX)?.0)
}

/// Breadth-first closure of `gens` under right multiplication, starting from
/// the identity. Returns (sorted elements, index by key).
fn closure(space: &MatrixSpace, gens: &[FqMatrix], cap: usize) -> Result<(Vec<FqMatrix>, HashMap<GroupKey, usize>)> {
    let id = space.identity();
    let mut seen: HashSet<GroupKey> = HashSet::from([space.key(&id)]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = space.mul(&g, s);
            if seen.insert(space.key(&h)) {
                elements.push(h.clone());
                queue.push_back(h);
                guard("closure", elements.len() as u128, cap)?;
            }
        }
    }
    elements.sort_by_key(|m| space.key(m));
    let index = elements.iter().enumerate().map(|(i, m)| (space.key(m), i)).collect();
    Ok((elements, index))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// SL_n(F_q)
    Special,
    /// GL_n(F_q)
    General,
    /// P_n = SL_{n-1}(F_q) acting on V_n
    Affine,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Special => "SL",
            GroupKind::General => "GL",
            GroupKind::Affine => "P",
        })
    }
}

/// Classical order formulas.
pub fn group_order(kind: GroupKind, n: usize, q: u32) -> u128 {
    let q = q as u128;
    let unip = q.saturating_pow((n * n.saturating_sub(1) / 2) as u32);
    let prod = |lo: usize| (lo..=n).fold(1u128, |acc, i| acc.saturating_mul(q.saturating_pow(i as u32) - 1));
    match kind {
        GroupKind::Special => unip.saturating_mul(prod(2)),
        GroupKind::General => unip.saturating_mul(prod(1)),
        GroupKind::Affine if n == 0 => 1,
        GroupKind::Affine => {
            group_order(GroupKind::Special, n - 1, q as u32).saturating_mul(q.saturating_pow(n as u32 - 1))
        }
    }
}

/// An enumerated finite matrix group with the generating set used to build it.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    kind: GroupKind,
    space: MatrixSpace,
    elements: Vec<FqMatrix>,
    index: HashMap<GroupKey, usize>,
    generators: Vec<FqMatrix>,
}

impl EnumeratedGroup {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn elements(&self) -> &[FqMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[FqMatrix] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, key: GroupKey) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn name(&self) -> String {
        format!("{}_{}({})", self.kind, self.space.n, self.space.field)
    }
}

fn transvections(space: &MatrixSpace, dim: usize) -> Vec<FqMatrix> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                for c in 1..space.q() {
                    out.push(space.transvection(i, j, c));
                }
            }
        }
    }
    out
}

/// Enumerates SL_n, GL_n or P_n. SL_n is the closure of the elementary
/// transvections, GL_n adds the scalings diag(c, 1, ..., 1), and P_n is
/// built as the product of the embedded SL_{n-1} with V_n.
pub fn enumerate_group(kind: GroupKind, space: &MatrixSpace, cap: usize) -> Result<EnumeratedGroup> {
    let n = space.n;
    let expected = group_order(kind, n, space.q());
    guard(&format!("{kind}_{n}"), expected, cap)?;
    let (elements, index, generators) = match kind {
        GroupKind::Special | GroupKind::General => {
            let mut gens = transvections(space, n);
            if kind == GroupKind::General && n >= 1 {
                for c in 2..space.q() {
                    let mut d = space.identity();
                    d.set(0, 0, c);
                    gens.push(d);
                }
            }
            let (elements, index) = closure(space, &gens, cap)?;
            (elements, index, gens)
        }
        GroupKind::Affine => {
            if n == 0 {
                return Err(Error::DimensionMismatch("P_n needs n >= 1".into()));
            }
            let sub = MatrixSpace::new(n - 1, space.field.clone())?;
            let block = enumerate_group(GroupKind::Special, &sub, cap)?;
            let translations = if n >= 2 { enumerate_translation(space, false)? } else { vec![space.identity()] };
            let mut elements = Vec::with_capacity(block.order() * translations.len());
            for m in block.elements() {
                let big = embed_block(m, n)?;
                for v in &translations {
                    elements.push(space.mul(&big, v));
                }
            }
            elements.sort_by_key(|m| space.key(m));
            elements.dedup();
            let index = elements.iter().enumerate().map(|(i, m)| (space.key(m), i)).collect();
            let mut gens: Vec<FqMatrix> = block.generators.iter().map(|g| embed_block(g, n)).collect::<Result<_>>()?;
            for i in 0..n.saturating_sub(1) {
                for c in 1..space.q() {
                    gens.push(space.transvection(i, n - 1, c));
                }
            }
            (elements, index, gens)
        }
    };
    debug_assert_eq!(elements.len() as u128, expected);
    Ok(EnumeratedGroup { kind, space: space.clone(), elements, index, generators })
}

/// A label `a` in F_q^{n-1} for the character `v -> zeta^{Tr(a . v)}` of V_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterLabel(pub Vec<u32>);

impl CharacterLabel {
    pub fn trivial(dim: usize) -> Self {
        CharacterLabel(vec![0; dim])
    }

    /// The label (0, ..., 0, c); `c = 1` is the default chi_0.
    pub fn chi0(dim: usize, c: u32) -> Self {
        let mut a = vec![0; dim];
        if let Some(last) = a.last_mut() {
            *last = c;
        }
        CharacterLabel(a)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `Tr(a . v)` in `[0, p)`: the exponent of zeta in `chi_a(v)`.
    pub fn exponent(&self, field: &FieldSpec, v: &[u32]) -> u32 {
        let dot = self.0.iter().zip(v).fold(0, |acc, (&a, &x)| field.add(acc, field.mul(a, x)));
        field.trace(dot)
    }

    /// All labels of dimension `dim`, in code order.
    pub fn all(field: &FieldSpec, dim: usize) -> Vec<CharacterLabel> {
        all_vectors(field.q(), dim).into_iter().map(CharacterLabel).collect()
    }
}

/// Some `M` in SL_m(F_q) whose last row is `a`: standard basis rows (skipping
/// the pivot column of `a`) fill the first m-1 rows, then the first row is
/// rescaled to make the determinant 1.
pub fn complete_row_to_sl(space: &MatrixSpace, a: &[u32]) -> Result<FqMatrix> {
    let m = space.n;
    if a.len() != m {
        return Err(Error::DimensionMismatch(format!("row of length {} for size {m}", a.len())));
    }
    let pivot = a.iter().position(|&x| x != 0).ok_or(Error::ZeroVector)?;
    let f = &space.field;
    let mut out = FqMatrix::new(m, vec![0; m * m])?;
    for (row, col) in (0..m).filter(|&c| c != pivot).enumerate() {
        out.set(row, col, 1);
    }
    for (j, &x) in a.iter().enumerate() {
        out.set(m - 1, j, x);
    }
    let d = space.det(&out);
    if d != 1 {
        let scale = f.inv(d).map_err(|_| Error::SingularMatrix)?;
        if m == 1 {
            return Err(Error::SingularMatrix);
        }
        for j in 0..m {
            let v = f.mul(out.get(0, j), scale);
            out.set(0, j, v);
        }
    }
    if space.det(&out) != 1 {
        return Err(Error::SingularMatrix);
    }
    Ok(out)
}

/// The action of `M` in SL_{n-1} on labels induced by conjugation on V_n:
/// `a -> a M^{-1}`.
pub fn transport_label(space: &MatrixSpace, a: &CharacterLabel, m: &FqMatrix) -> Result<CharacterLabel> {
    if a.0.len() != space.n || m.n != space.n {
        return Err(Error::DimensionMismatch("label and matrix sizes differ".into()));
    }
    let minv = space.inv(m)?;
    Ok(CharacterLabel(space.apply_row(&a.0, &minv)))
}

/// Orbits of SL_{dim}(F_q) on labels of dimension `dim` under
/// [`transport_label`], each orbit sorted, orbits ordered by first element.
pub fn label_orbits(space: &MatrixSpace, cap: usize) -> Result<Vec<Vec<CharacterLabel>>> {
    let group = enumerate_group(GroupKind::Special, space, cap)?;
    let inverses: Vec<FqMatrix> = group.elements().iter().map(|g| space.inv(g)).collect::<Result<_>>()?;
    let mut assigned: HashSet<CharacterLabel> = HashSet::new();
    let mut orbits = Vec::new();
    for label in CharacterLabel::all(&space.field, space.n) {
        if assigned.contains(&label) {
            continue;
        }
        let mut orbit: Vec<CharacterLabel> = inverses
            .iter()
            .map(|mi| CharacterLabel(space.apply_row(&label.0, mi)))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        orbit.sort();
        assigned.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    Ok(orbits)
}
