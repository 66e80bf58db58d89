//! Finite fields `F_{p^k}` realized as `F_p[x]/(m(x))` in the power basis
//! `1, g, ..., g^{k-1}`, where `g` is the class of `x`.
//!
//! Elements are packed into a single `u32` so that the natural integer order
//! coincides with the lexicographic order on coordinate sequences
//! `(c_0, c_1, ..., c_{k-1})`. That order is the canonical element order used
//! for every "least such element" choice elsewhere in the crate.

mod embed;

use std::fmt;
use std::sync::Arc;

pub use embed::{embed_subfield, Embedding};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const FIELD_CAP: u64 = 1 << 20;
/// Fields up to this order carry log/antilog tables.
const LOG_TABLE_CAP: u32 = 1 << 16;
/// Fields up to this order carry a full addition table.
const ADD_TABLE_CAP: u32 = 1 << 10;

/// An element of some [`FieldSpec`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Position of the element in canonical order.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    /// `exp[i] = w^i` for a primitive element `w`, doubled in length.
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `place[i] = p^(k-1-i)`: weight of coordinate `i` in the packed index.
    place: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus={:?})", self.p, self.k, self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u64, k: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > FIELD_CAP {
            return Err(Error::DegreeTooLarge { p, k });
        }
    }
    Ok(q as u32)
}

/// Remainder of `f` modulo the monic polynomial `g` over `F_p` (ascending coefficients).
fn poly_rem(p: u64, f: &[u32], g: &[u32]) -> Vec<u64> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let top = r.len();
            for j in 0..dg {
                let idx = top - dg + j;
                r[idx] = (r[idx] + (p - lead) * g[j] as u64) % p;
            }
        }
    }
    r
}

/// Irreducibility of a monic polynomial over `F_p` by trial division with every
/// monic polynomial of degree at most half its degree.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let p64 = p as u64;
    for d in 1..=k / 2 {
        let count = p64.pow(d as u32);
        let mut g = vec![0u32; d + 1];
        g[d] = 1;
        for idx in 0..count {
            let mut v = idx;
            for c in g.iter_mut().take(d) {
                *c = (v % p64) as u32;
                v /= p64;
            }
            if poly_rem(p64, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^k}` with the lexicographically least monic irreducible
    /// modulus of degree `k`, coefficients compared low degree first.
    pub fn new(p: u64, k: u32) -> Result<Arc<FieldSpec>> {
        if p > (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let q = checked_order(p, k)?;
        let p32 = p as u32;
        let mut modulus = vec![0u32; k as usize + 1];
        modulus[k as usize] = 1;
        for idx in 0..q {
            // c_0 is the most significant digit of idx.
            let mut v = idx;
            for i in (0..k as usize).rev() {
                modulus[i] = v % p32;
                v /= p32;
            }
            if is_irreducible(p32, &modulus) {
                return Ok(Arc::new(Self::assemble(p32, modulus)));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Builds a field from an explicit monic irreducible modulus (ascending coefficients).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Arc<FieldSpec>> {
        if p > (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        checked_order(p, k)?;
        if modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidModulus("coefficients must lie in [0, p)".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(p as u32, modulus) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over F_{p}")));
        }
        Ok(Arc::new(Self::assemble(p as u32, modulus.to_vec())))
    }

    /// Field of order `q`, which must be a prime power within the cap.
    pub fn from_order(q: u64) -> Result<Arc<FieldSpec>> {
        if q < 2 {
            return Err(Error::WrongFieldSize(format!("{q} is not a prime power")));
        }
        let p = prime_factors(q)[0];
        let mut k = 0u32;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::WrongFieldSize(format!("{q} is not a prime power")));
        }
        FieldSpec::new(p, k)
    }

    fn assemble(p: u32, modulus: Vec<u32>) -> FieldSpec {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let place = (0..k).map(|i| p.pow(k - 1 - i)).collect();
        let mut field = FieldSpec {
            p,
            k,
            q,
            modulus,
            place,
            tables: None,
        };
        if q <= LOG_TABLE_CAP {
            field.tables = Some(field.build_tables());
        }
        field
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let one = self.one();
        let primitive = (1..q)
            .map(FieldElement)
            .find(|&a| factors.iter().all(|&l| self.pow_poly(a, order / l) != one))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * (q as usize - 1).max(1));
        let mut log = vec![0u32; q as usize];
        let mut cur = one;
        for i in 0..(q - 1) {
            exp.push(cur.0);
            log[cur.0 as usize] = i;
            cur = self.mul_poly(cur, primitive);
        }
        let doubled = exp.clone();
        exp.extend(doubled);
        let add = (q <= ADD_TABLE_CAP).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_digits(FieldElement(a), FieldElement(b)).0;
                }
            }
            t
        });
        Tables { exp, log, add }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.place[0])
    }

    /// The class of the indeterminate. In a prime field this is the root of the
    /// linear modulus.
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            FieldElement(self.place[1])
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 < self.q {
            Ok(a)
        } else {
            Err(Error::InvalidElement(format!("index {} out of range for {}", a.0, self)))
        }
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        self.place.iter().map(|&pl| (a.0 / pl) % self.p).collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.k as usize {
            return Err(Error::ArityMismatch {
                expected: self.k as usize,
                got: coords.len(),
            });
        }
        if coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement(format!("coordinates {coords:?} not reduced mod {}", self.p)));
        }
        Ok(self.pack(coords.iter().map(|&c| c as u64)))
    }

    fn pack(&self, coords: impl Iterator<Item = u64>) -> FieldElement {
        let p = self.p as u64;
        FieldElement(
            coords
                .zip(&self.place)
                .map(|(c, &pl)| ((c % p) as u32) * pl)
                .sum(),
        )
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u32;
        FieldElement(r * self.place[0])
    }

    pub fn is_in_prime_field(&self, a: FieldElement) -> bool {
        a.0 % self.place[0] == 0
    }

    fn add_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let mut r = 0;
        for &pl in &self.place {
            let s = ((a.0 / pl) % self.p + (b.0 / pl) % self.p) % self.p;
            r += s * pl;
        }
        FieldElement(r)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(Tables { add: Some(t), .. }) = &self.tables {
            return FieldElement(t[(a.0 * self.q + b.0) as usize]);
        }
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        self.add_digits(a, b)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut r = 0;
        for &pl in &self.place {
            let d = (a.0 / pl) % self.p;
            r += ((self.p - d) % self.p) * pl;
        }
        FieldElement(r)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_poly(a, b),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Ok(FieldElement(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
            }
            None => self.inv_poly(a),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if e == 0 {
                    self.one()
                } else if a.is_zero() {
                    FieldElement::ZERO
                } else {
                    let order = (self.q - 1) as u64;
                    let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
                    FieldElement(t.exp[l as usize])
                }
            }
            None => self.pow_poly(a, e),
        }
    }

    /// Multiplication by polynomial arithmetic modulo the field modulus. This is
    /// the reference path the tables are checked against.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u64;
        let k = self.k as usize;
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c != 0 {
                for j in 0..k {
                    prod[deg - k + j] = (prod[deg - k + j] + (p - c) * self.modulus[j] as u64) % p;
                }
                prod[deg] = 0;
            }
        }
        self.pack(prod.into_iter().take(k))
    }

    pub fn pow_poly(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv_poly(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_poly(a, self.q as u64 - 2))
    }

    /// `a^(p^i)` for `0 <= i < k`.
    pub fn frobenius(&self, a: FieldElement, i: u32) -> Result<FieldElement> {
        if i >= self.k {
            return Err(Error::IterateOutOfRange { i, k: self.k });
        }
        Ok(self.pow(a, (self.p as u64).pow(i)))
    }

    /// Norm from this field down to its subfield of degree `base_degree` over
    /// `F_p`: the product of the conjugates `a^(Q^j)` with `Q = p^base_degree`.
    /// The result is an element of this field fixed by the subfield Frobenius.
    pub fn relative_norm(&self, a: FieldElement, base_degree: u32) -> Result<FieldElement> {
        if base_degree == 0 || self.k % base_degree != 0 {
            return Err(Error::NotADivisor {
                base: base_degree,
                degree: self.k,
            });
        }
        let qb = (self.p as u64).pow(base_degree);
        let m = self.k / base_degree;
        let mut acc = self.one();
        let mut e = 1u64;
        for _ in 0..m {
            acc = self.mul(acc, self.pow(a, e));
            e *= qb;
        }
        debug_assert_eq!(self.pow(acc, qb), acc);
        Ok(acc)
    }

    /// Element literal: a plain integer, or `c0:c1:...:c(k-1)`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        let bad = || Error::InvalidElement(format!("`{text}` is not an element literal for {self}"));
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != self.k as usize {
                return Err(bad());
            }
            let coords = parts
                .iter()
                .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            Ok(self.pack(coords.into_iter().map(|c| c.rem_euclid(self.p as i64) as u64)))
        } else {
            text.parse::<i64>().map(|n| self.from_int(n)).map_err(|_| bad())
        }
    }

    pub fn format_element(&self, a: FieldElement) -> String {
        let c = self.coords(a);
        if c[1..].iter().all(|&x| x == 0) {
            c[0].to_string()
        } else {
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldSpec, coords: &[u32]) -> FieldElement {
        f.from_coords(coords).unwrap()
    }

    /// Brute-force factor search: a monic polynomial of degree 2 or 3 is
    /// reducible iff it has a root.
    fn has_root(p: u32, f: &[u32]) -> bool {
        (0..p).any(|x| {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * x as u64 + c as u64) % p as u64;
            }
            acc == 0
        })
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(FieldSpec::new(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FieldSpec::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn canonical_modulus_is_least_rootless_quadratic() {
        for p in [2u32, 3, 5, 7] {
            let expected = (0..p * p)
                .map(|idx| vec![idx / p, idx % p, 1])
                .find(|f| !has_root(p, f))
                .unwrap();
            assert_eq!(FieldSpec::new(p as u64, 2).unwrap().modulus(), expected.as_slice());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldSpec::new(2, 21), Err(Error::DegreeTooLarge { .. })));
        assert!(FieldSpec::with_modulus(2, &[1, 0, 1]).is_err());
        assert!(FieldSpec::with_modulus(2, &[1, 1, 0]).is_err());
        assert!(FieldSpec::with_modulus(3, &[1, 0, 1]).is_ok());
    }

    #[test]
    fn small_arithmetic() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.add(f2.one(), f2.one()), f2.zero());

        let f9 = FieldSpec::new(3, 2).unwrap();
        let g = f9.generator();
        assert_eq!(f9.mul(g, g), f9.from_int(2));
        assert_eq!(f9.frobenius(g, 1).unwrap(), el(&f9, &[0, 2]));

        let f4 = FieldSpec::new(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(f4.pow(g, 3), f4.one());
        assert_eq!(f4.frobenius(g, 1).unwrap(), el(&f4, &[1, 1]));
        assert_eq!(f4.inv(f4.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn norms() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.relative_norm(f4.generator(), 1).unwrap(), f4.one());
        assert_eq!(f4.relative_norm(f4.zero(), 1).unwrap(), f4.zero());
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.relative_norm(f9.generator(), 1).unwrap(), f9.one());
        assert!(matches!(f9.relative_norm(f9.one(), 3), Err(Error::NotADivisor { .. })));
    }

    #[test]
    fn canonical_order_is_lexicographic_on_coordinates() {
        let f = FieldSpec::new(3, 3).unwrap();
        let coords: Vec<Vec<u32>> = f.elements().map(|a| f.coords(a)).collect();
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
        assert_eq!(f.coords(f.one()), vec![1, 0, 0]);
        assert_eq!(f.coords(f.generator()), vec![0, 1, 0]);
    }

    #[test]
    fn literals_round_trip() {
        let f = FieldSpec::new(5, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_element(&f.format_element(a)).unwrap(), a);
        }
        assert_eq!(f.parse_element("7").unwrap(), f.from_int(2));
        assert!(f.parse_element("1:2:3").is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3), (7, 1), (2, 4), (5, 2), (2, 6)] {
            let f = FieldSpec::new(p, k).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            // associativity and distributivity on all triples for q <= 64 is q^3 <= 262144 checks
            for &a in &els {
                for &b in &els {
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything_at_q() {
        for (p, k) in [(2, 12), (3, 7), (5, 5), (7, 4), (2, 5)] {
            let f = FieldSpec::new(p, k).unwrap();
            let q = f.q() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
            }
        }
    }

    #[test]
    fn tables_agree_with_polynomial_path() {
        for (p, k) in [(2, 10), (3, 6), (31, 2), (2, 4), (5, 4)] {
            let f = FieldSpec::new(p, k).unwrap();
            assert!(f.has_tables());
            let els: Vec<_> = f.elements().collect();
            let step = if f.q() > 256 { 7 } else { 1 };
            for &a in &els {
                if !a.is_zero() {
                    assert_eq!(f.inv(a).unwrap(), f.inv_poly(a).unwrap());
                }
                for &b in els.iter().step_by(step) {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b));
                }
            }
        }
    }

    #[test]
    fn untabled_field_matches_tabled_semantics() {
        let f = FieldSpec::new(2, 17).unwrap();
        assert!(!f.has_tables());
        let a = f.generator();
        assert_eq!(f.pow(a, f.q() as u64), a);
        let b = f.add(a, f.one());
        assert_eq!(f.mul(b, f.inv(b).unwrap()), f.one());
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism() {
        for (p, k) in [(2, 8), (3, 4), (5, 3), (2, 3)] {
            let f = FieldSpec::new(p, k).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                let fa = f.frobenius(a, 1).unwrap();
                for &b in &els {
                    let fb = f.frobenius(b, 1).unwrap();
                    assert_eq!(f.frobenius(f.add(a, b), 1).unwrap(), f.add(fa, fb));
                    assert_eq!(f.frobenius(f.mul(a, b), 1).unwrap(), f.mul(fa, fb));
                }
            }
            let fixed = els.iter().filter(|&&a| f.frobenius(a, 1).unwrap() == a).count();
            assert_eq!(fixed, p as usize);
        }
    }

    #[test]
    fn norm_matches_power_formula() {
        for (p, k, e) in [(2, 4, 1), (2, 4, 2), (3, 2, 1), (3, 4, 2), (5, 2, 1), (2, 6, 3), (2, 6, 2)] {
            let f = FieldSpec::new(p, k).unwrap();
            let q = f.q() as u64;
            let qb = p.pow(e);
            let exponent = (q - 1) / (qb - 1);
            for a in f.elements().skip(1) {
                let n = f.relative_norm(a, e).unwrap();
                assert_eq!(n, f.pow(a, exponent));
                assert_eq!(f.pow(n, qb), n);
                for b in f.elements().step_by(5) {
                    assert_eq!(
                        f.relative_norm(f.mul(a, b), e).unwrap(),
                        f.mul(n, f.relative_norm(b, e).unwrap())
                    );
                }
            }
        }
    }
}
