//! Sparse multivariate polynomials over a [`FieldSpec`], polynomial systems,
//! the two ways of attaching a form to a polynomial (leading form and
//! homogenization), and restriction to affine subspaces.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use parse::parse_poly;

use crate::affine::AffineSubspace;
use crate::error::{Error, Result};
use crate::ff::{Embedding, FieldElement, FieldSpec};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Arc<FieldSpec>,
    nvars: usize,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

/// Default variable names `x1, ..., xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

impl MultiPoly {
    pub fn zero(field: &Arc<FieldSpec>, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<FieldSpec>, nvars: usize, c: FieldElement) -> Self {
        Self::monomial(field, nvars, vec![0; nvars], c)
    }

    pub fn monomial(field: &Arc<FieldSpec>, nvars: usize, exps: Exponents, c: FieldElement) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `x_i` (0-based index).
    pub fn var(field: &Arc<FieldSpec>, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, nvars, e, field.one())
    }

    /// Builds a polynomial from terms, merging repeated monomials.
    pub fn from_terms(
        field: &Arc<FieldSpec>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, got: e.len() });
            }
            field.check(c)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, FieldElement)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        for &x in point {
            self.field.check(x)?;
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        self.terms.iter().fold(f.zero(), |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(point)
                .filter(|(&k, _)| k > 0)
                .fold(c, |m, (&k, &x)| f.mul(m, f.pow(x, k as u64)));
            f.add(acc, m)
        })
    }

    /// Homogeneous part of top degree.
    pub fn leading_form(&self) -> Result<Self> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    /// Sum of the terms of total degree exactly `deg` (possibly zero).
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == deg)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// `x0^e f(x1/x0, ..., xn/x0)` with `e` the total degree; the new variable
    /// `x0` takes position 0.
    pub fn homogenize(&self) -> Result<Self> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut ne = Vec::with_capacity(self.nvars + 1);
                ne.push(d - e.iter().sum::<u32>());
                ne.extend_from_slice(e);
                (ne, c)
            })
            .collect();
        Ok(MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars + 1,
            terms,
        })
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        if c.is_zero() {
            return Self::zero(f, self.nvars);
        }
        MultiPoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `subs[i]` for `x_i`; all substitutes share one variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let m = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != m || s.field != self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let top = self.degree_in(i);
            let mut row = vec![Self::constant(&self.field, m, self.field.one())];
            for j in 1..=top as usize {
                let next = &row[j - 1] * s;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(&self.field, m);
        for (e, &c) in &self.terms {
            let mut term = Self::constant(&self.field, m, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Places variable `i` at position `positions[i]` of an `nvars`-variable ring.
    pub fn with_vars(&self, nvars: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut ne = vec![0; nvars];
                for (&k, &pos) in e.iter().zip(positions) {
                    ne[pos] += k;
                }
                (ne, c)
            })
            .collect();
        MultiPoly {
            field: self.field.clone(),
            nvars,
            terms,
        }
    }

    /// Maps every coefficient into `target`.
    pub fn map_coefficients(&self, target: &Arc<FieldSpec>, map: impl Fn(FieldElement) -> FieldElement) -> Self {
        let mut p = Self::zero(target, self.nvars);
        for (e, &c) in &self.terms {
            p.add_term(e.clone(), map(c));
        }
        p
    }

    /// The same polynomial with coefficients pushed into a larger field.
    pub fn lift(&self, emb: &Embedding) -> Result<Self> {
        if **emb.small() != *self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.map_coefficients(emb.big(), |c| emb.apply(c)))
    }

    /// Inverse of [`lift`](Self::lift); fails if some coefficient lies outside
    /// the subfield.
    pub fn pull_back(&self, emb: &Embedding) -> Result<Self> {
        if **emb.big() != *self.field {
            return Err(Error::FieldMismatch);
        }
        let mut p = Self::zero(emb.small(), self.nvars);
        for (e, &c) in &self.terms {
            let s = emb
                .pull_back(c)
                .ok_or_else(|| Error::NotASubfield(format!("coefficient {} not in {}", self.field.format_element(c), emb.small())))?;
            p.add_term(e.clone(), s);
        }
        Ok(p)
    }

    /// Canonical text with the given variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let f = &self.field;
        self.terms
            .iter()
            .map(|(e, &c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(&k, _)| k > 0)
                    .map(|(&k, name)| if k == 1 { name.clone() } else { format!("{name}^{k}") })
                    .collect();
                if mono.is_empty() {
                    f.format_element(c)
                } else if c == f.one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", f.format_element(c), mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.nvars == other.nvars && self.field == other.field,
            "polynomials over different rings"
        );
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(self.field.neg(self.field.one()))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }
}

/// An `r`-tuple of polynomials over a common field and variable count.
///
/// A polynomial that vanishes identically is allowed (restrictions produce
/// them) and contributes 0 to the degree total `d`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolySystem {
    polys: Vec<MultiPoly>,
    degrees: Vec<u32>,
    total: u32,
}

impl fmt::Debug for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.polys.iter().map(|p| p.to_string())).finish()
    }
}

impl PolySystem {
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self> {
        let first = polys.first().ok_or(Error::EmptySystem)?;
        if polys.iter().any(|p| p.nvars != first.nvars || p.field != first.field) {
            return Err(Error::FieldMismatch);
        }
        let degrees: Vec<u32> = polys.iter().map(|p| p.total_degree().unwrap_or(0)).collect();
        let total = degrees.iter().sum();
        Ok(PolySystem { polys, degrees, total })
    }

    pub fn single(f: MultiPoly) -> Self {
        Self::new(vec![f]).expect("one polynomial")
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `d = d_1 + ... + d_r`.
    pub fn total_degree(&self) -> u32 {
        self.total
    }

    pub fn r(&self) -> usize {
        self.polys.len()
    }

    pub fn nvars(&self) -> usize {
        self.polys[0].nvars
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.polys[0].field
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.polys.iter().all(MultiPoly::is_homogeneous)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.polys.iter().map(|p| p.evaluate(point)).collect()
    }

    /// Common-zero test; stops at the first polynomial that does not vanish.
    pub fn is_zero_at(&self, point: &[FieldElement]) -> Result<bool> {
        for p in &self.polys {
            if !p.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f_-`: leading forms, same variables.
    pub fn leading_forms(&self) -> Result<Self> {
        Self::new(self.polys.iter().map(MultiPoly::leading_form).collect::<Result<_>>()?)
    }

    /// `f_+`: homogenizations, one extra variable `x0` in position 0.
    pub fn homogenized(&self) -> Result<Self> {
        Self::new(self.polys.iter().map(MultiPoly::homogenize).collect::<Result<_>>()?)
    }

    pub fn lift(&self, emb: &Embedding) -> Result<Self> {
        Self::new(self.polys.iter().map(|p| p.lift(emb)).collect::<Result<_>>()?)
    }

    /// Restriction to `sub`: substitutes `x = offset + Σ t_j basis_j` and
    /// expands, giving a system in `dim(sub)` variables `t_1..t_m`.
    pub fn restrict_to_subspace(&self, sub: &AffineSubspace) -> Result<Self> {
        restrict_to_subspace(self, sub)
    }

    pub fn format_with(&self, names: &[String]) -> Vec<String> {
        self.polys.iter().map(|p| p.format_with(names)).collect()
    }
}

/// See [`PolySystem::restrict_to_subspace`].
pub fn restrict_to_subspace(sys: &PolySystem, sub: &AffineSubspace) -> Result<PolySystem> {
    if sub.ambient() != sys.nvars() {
        return Err(Error::AmbientMismatch {
            expected: sys.nvars(),
            subspace: sub.ambient(),
        });
    }
    if **sub.field() != **sys.field() {
        return Err(Error::FieldMismatch);
    }
    let f = sys.field();
    let m = sub.dim();
    let coords: Vec<MultiPoly> = (0..sys.nvars())
        .map(|i| {
            let mut terms = vec![(vec![0; m], sub.offset()[i])];
            for (j, row) in sub.basis().iter().enumerate() {
                let mut e = vec![0; m];
                e[j] = 1;
                terms.push((e, row[i]));
            }
            MultiPoly::from_terms(f, m, terms).expect("well-formed terms")
        })
        .collect();
    PolySystem::new(sys.polys().iter().map(|p| p.compose(&coords)).collect::<Result<_>>()?)
}
