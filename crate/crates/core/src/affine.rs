//! Affine subspaces ("linear spaces", offsets allowed) of `A^n(F_q)` and
//! explicit point sets.
//!
//! A subspace is stored in canonical form: its direction basis is in reduced
//! row-echelon form with unit pivots, and its offset is zero in every pivot
//! coordinate. Two descriptions of the same point set therefore compare equal,
//! and two subspaces are parallel exactly when their bases are equal.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::rng::SplitMix64;

pub type Point = Vec<FieldElement>;

/// Reduced row-echelon form with unit pivots. Zero rows are dropped; the
/// returned pivots are the pivot columns of the surviving rows.
pub fn rref(field: &FieldSpec, mut rows: Vec<Point>) -> (Vec<Point>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

pub fn rank(field: &FieldSpec, rows: Vec<Point>) -> usize {
    rref(field, rows).1.len()
}

/// `q^e` as a wide integer.
pub fn qpow(q: u32, e: usize) -> u128 {
    (q as u128).pow(e as u32)
}

/// Number of `k`-dimensional vector subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u32, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

#[derive(Clone)]
pub struct AffineSubspace {
    field: Arc<FieldSpec>,
    offset: Point,
    basis: Vec<Point>,
    pivots: Vec<usize>,
}

impl PartialEq for AffineSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.offset == other.offset && self.basis == other.basis
    }
}

impl Eq for AffineSubspace {}

impl PartialOrd for AffineSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by dimension, then direction basis, then offset.
impl Ord for AffineSubspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim(), &self.basis, &self.offset).cmp(&(other.dim(), &other.basis, &other.offset))
    }
}

impl fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Validates raw subspace data and returns its canonical form.
pub fn canonicalize(field: &Arc<FieldSpec>, offset: Point, basis: Vec<Point>) -> Result<AffineSubspace> {
    let n = offset.len();
    for v in std::iter::once(&offset).chain(&basis) {
        if v.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: v.len() });
        }
        for &x in v {
            field.check(x)?;
        }
    }
    let k = basis.len();
    let (rows, pivots) = rref(field, basis);
    if rows.len() < k {
        return Err(Error::DependentBasis);
    }
    let mut sub = AffineSubspace {
        field: field.clone(),
        offset: Vec::new(),
        basis: rows,
        pivots,
    };
    sub.offset = sub.reduce(&offset);
    Ok(sub)
}

impl AffineSubspace {
    pub fn new(field: &Arc<FieldSpec>, offset: Point, basis: Vec<Point>) -> Result<Self> {
        canonicalize(field, offset, basis)
    }

    /// The whole space `A^n`.
    pub fn full(field: &Arc<FieldSpec>, n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        AffineSubspace {
            field: field.clone(),
            offset: vec![field.zero(); n],
            basis,
            pivots: (0..n).collect(),
        }
    }

    pub fn point(field: &Arc<FieldSpec>, p: Point) -> Result<Self> {
        canonicalize(field, p, Vec::new())
    }

    /// Already-canonical re-canonicalization; the identity on valid values.
    pub fn canonicalize(&self) -> Self {
        canonicalize(&self.field, self.offset.clone(), self.basis.clone()).expect("subspace is valid")
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.offset.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn offset(&self) -> &Point {
        &self.offset
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; a translate is determined by the offset
    /// values there.
    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..self.ambient()).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn size(&self) -> u128 {
        qpow(self.field.q(), self.dim())
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    pub fn contains_origin(&self) -> bool {
        self.offset.iter().all(|x| x.is_zero())
    }

    /// Canonical representative of the translate of this direction space that
    /// contains `point`.
    pub fn reduce(&self, point: &[FieldElement]) -> Point {
        let f = &self.field;
        let mut r = point.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = r[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        r
    }

    pub fn contains(&self, point: &[FieldElement]) -> bool {
        point.len() == self.ambient() && self.reduce(point) == self.offset
    }

    pub fn is_parallel(&self, other: &Self) -> bool {
        self.ambient() == other.ambient() && self.basis == other.basis
    }

    /// `offset + Σ t_j basis_j`.
    pub fn point_at(&self, coeffs: &[FieldElement]) -> Point {
        let f = &self.field;
        let mut p = self.offset.clone();
        for (&t, row) in coeffs.iter().zip(&self.basis) {
            if t.is_zero() {
                continue;
            }
            for (x, &y) in p.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(t, y));
            }
        }
        p
    }

    /// Streams the `q^k` points, coefficient vectors in canonical order.
    pub fn points(&self) -> Points<'_> {
        Points {
            sub: self,
            coeffs: vec![self.field.zero(); self.dim()],
            done: false,
        }
    }

    pub fn enumerate_points(&self, budget: u128) -> Result<Points<'_>> {
        Error::budget(self.size(), budget)?;
        Ok(self.points())
    }

    /// The translate of this direction space through `point`.
    pub fn translate_through(&self, point: &[FieldElement]) -> Self {
        AffineSubspace {
            field: self.field.clone(),
            offset: self.reduce(point),
            basis: self.basis.clone(),
            pivots: self.pivots.clone(),
        }
    }

    /// The direction space itself (the translate through the origin).
    pub fn direction(&self) -> Self {
        self.translate_through(&vec![self.field.zero(); self.ambient()])
    }

    /// All `q^(n-k)` translates of the direction space, in canonical order.
    pub fn parallel_class(&self) -> Vec<Self> {
        let free = self.free_coordinates();
        let q = self.field.q();
        let mut out = Vec::new();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut offset = vec![self.field.zero(); self.ambient()];
            for (&c, &v) in free.iter().zip(&vals) {
                offset[c] = FieldElement::from_index(v);
            }
            out.push(AffineSubspace {
                field: self.field.clone(),
                offset,
                basis: self.basis.clone(),
                pivots: self.pivots.clone(),
            });
            if !odometer_step(&mut vals, q) {
                break;
            }
        }
        out
    }

    /// Every `(k+1)`-dimensional subspace containing this one, in canonical order.
    pub fn superspaces(&self) -> Result<Vec<Self>> {
        if self.is_full() {
            return Err(Error::FullSpace);
        }
        let free = self.free_coordinates();
        let q = self.field.q();
        let mut out = Vec::new();
        for lead in 0..free.len() {
            let rest = &free[lead + 1..];
            let mut vals = vec![0u32; rest.len()];
            loop {
                let mut v = vec![self.field.zero(); self.ambient()];
                v[free[lead]] = self.field.one();
                for (&c, &x) in rest.iter().zip(&vals) {
                    v[c] = FieldElement::from_index(x);
                }
                let mut basis = self.basis.clone();
                basis.push(v);
                out.push(canonicalize(&self.field, self.offset.clone(), basis)?);
                if !odometer_step(&mut vals, q) {
                    break;
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Smallest subspace containing this one and `point`.
    pub fn join_point(&self, point: &[FieldElement]) -> Result<Self> {
        if self.contains(point) {
            return Ok(self.clone());
        }
        let f = &self.field;
        let dir: Point = point.iter().zip(&self.offset).map(|(&a, &b)| f.sub(a, b)).collect();
        let mut basis = self.basis.clone();
        basis.push(dir);
        canonicalize(f, self.offset.clone(), basis)
    }

    pub fn describe(&self) -> String {
        let f = &self.field;
        let fmt_pt = |p: &Point| p.iter().map(|&x| f.format_element(x)).join(" ");
        let basis = self.basis.iter().map(fmt_pt).join("; ");
        format!("dim={} offset=({}) basis=[{}]", self.dim(), fmt_pt(&self.offset), basis)
    }
}

/// Advances a little-endian-last odometer over `[0, q)^len`; false on wrap.
fn odometer_step(vals: &mut [u32], q: u32) -> bool {
    for v in vals.iter_mut().rev() {
        *v += 1;
        if *v < q {
            return true;
        }
        *v = 0;
    }
    false
}

pub struct Points<'a> {
    sub: &'a AffineSubspace,
    coeffs: Vec<FieldElement>,
    done: bool,
}

impl Iterator for Points<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        let p = self.sub.point_at(&self.coeffs);
        let q = self.sub.field.q();
        let mut raw: Vec<u32> = self.coeffs.iter().map(|c| c.index()).collect();
        self.done = !odometer_step(&mut raw, q);
        self.coeffs = raw.into_iter().map(FieldElement::from_index).collect();
        Some(p)
    }
}

/// All `k`-dimensional vector subspaces of `F_q^n` (as subspaces through the
/// origin), by enumerating reduced echelon matrices.
pub fn direction_spaces(field: &Arc<FieldSpec>, n: usize, k: usize) -> impl Iterator<Item = AffineSubspace> + '_ {
    let q = field.q();
    (0..n).combinations(k).flat_map(move |pivots| {
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut vals = vec![0u32; slots.len()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut basis: Vec<Point> = pivots
                .iter()
                .map(|&pc| {
                    let mut row = vec![field.zero(); n];
                    row[pc] = field.one();
                    row
                })
                .collect();
            for (&(r, c), &v) in slots.iter().zip(&vals) {
                basis[r][c] = FieldElement::from_index(v);
            }
            done = !odometer_step(&mut vals, q);
            Some(AffineSubspace {
                field: field.clone(),
                offset: vec![field.zero(); n],
                basis,
                pivots: pivots.clone(),
            })
        })
    })
}

/// A uniformly random `k`-dimensional vector subspace.
pub fn random_direction_space(field: &Arc<FieldSpec>, n: usize, k: usize, rng: &mut SplitMix64) -> AffineSubspace {
    loop {
        let rows: Vec<Point> = (0..k).map(|_| (0..n).map(|_| rng.element(field)).collect()).collect();
        if let Ok(sub) = canonicalize(field, vec![field.zero(); n], rows) {
            return sub;
        }
    }
}

/// Every `k`-dimensional affine subspace of `A^n`.
pub fn all_flats(field: &Arc<FieldSpec>, n: usize, k: usize) -> Vec<AffineSubspace> {
    direction_spaces(field, n, k).flat_map(|d| d.parallel_class()).collect()
}

/// Outcome of the linear-subspace test on a point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearVerdict {
    Yes(usize),
    No,
}

/// An explicit finite subset of `A^t(F_q)`.
#[derive(Clone)]
pub struct PointSet {
    field: Arc<FieldSpec>,
    ambient: usize,
    points: BTreeSet<Point>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points.iter().map(|p| p.iter().map(|x| x.index()).collect::<Vec<_>>())).finish()
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.ambient == other.ambient && self.points == other.points
    }
}

impl PointSet {
    pub fn new(field: &Arc<FieldSpec>, ambient: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != ambient {
                return Err(Error::ArityMismatch { expected: ambient, got: p.len() });
            }
            for &x in &p {
                field.check(x)?;
            }
            set.insert(p);
        }
        Ok(PointSet {
            field: field.clone(),
            ambient,
            points: set,
        })
    }

    pub fn from_subspace(sub: &AffineSubspace) -> Self {
        PointSet {
            field: sub.field.clone(),
            ambient: sub.ambient(),
            points: sub.points().collect(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[FieldElement]) -> bool {
        self.points.contains(p)
    }

    /// Points in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    /// `#(self ∩ sub)`.
    pub fn count_in(&self, sub: &AffineSubspace) -> usize {
        if sub.size() < self.points.len() as u128 {
            sub.points().filter(|p| self.points.contains(p)).count()
        } else {
            self.points.iter().filter(|p| sub.contains(p)).count()
        }
    }

    pub fn affine_span(&self) -> Result<AffineSubspace> {
        let mut it = self.points.iter();
        let first = it.next().ok_or(Error::EmptySet)?;
        let f = &self.field;
        let diffs: Vec<Point> = it.map(|p| p.iter().zip(first).map(|(&a, &b)| f.sub(a, b)).collect()).collect();
        let (rows, _) = rref(f, diffs);
        canonicalize(f, first.clone(), rows)
    }

    /// Greedy maximal subset in general position, scanning points in canonical
    /// order and keeping each point outside the span of those kept so far.
    pub fn max_general_position(&self) -> Result<Vec<Point>> {
        let mut it = self.points.iter();
        let first = it.next().ok_or(Error::EmptySet)?;
        let mut span = AffineSubspace::point(&self.field, first.clone())?;
        let mut chosen = vec![first.clone()];
        for p in it {
            if span.dim() == self.ambient {
                break;
            }
            if !span.contains(p) {
                span = span.join_point(p)?;
                chosen.push(p.clone());
            }
        }
        Ok(chosen)
    }

    pub fn is_linear_subspace(&self) -> LinearVerdict {
        match self.affine_span() {
            Ok(span) if span.size() == self.points.len() as u128 => LinearVerdict::Yes(span.dim()),
            _ => LinearVerdict::No,
        }
    }
}
