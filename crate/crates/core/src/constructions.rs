//! Named systems: norm forms, the quadric-times-norm-form example, the
//! non-splitting quartic with a single zero, and seeded random corpora.
//! Every construction returns a [`ConstructionRecipe`] that replays to the
//! identical system.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::ff::{embed_subfield, Embedding, FieldElement, FieldSpec};
use crate::poly::{default_names, MultiPoly, PolySystem};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    NormForm,
    Example1,
    Example2,
    Random,
    RandomHomogeneous,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        match s.replace('-', "_").as_str() {
            "norm_form" | "norm" => Some(Kind::NormForm),
            "example1" | "example_one" => Some(Kind::Example1),
            "example2" | "example_two" => Some(Kind::Example2),
            "random" => Some(Kind::Random),
            "random_homogeneous" => Some(Kind::RandomHomogeneous),
            _ => None,
        }
    }
}

/// Everything needed to rebuild a system, plus notes on the choices made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub kind: Kind,
    pub p: u32,
    pub k: u32,
    /// Number of variables (norm forms: the degree).
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<u32>,
    #[serde(default)]
    pub seed: u64,
    /// Field modulus, ascending coefficients.
    pub modulus: Vec<u32>,
    /// Named choices such as `c` or `beta`, as field literals.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub choices: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConstructionRecipe {
    fn new(kind: Kind, field: &FieldSpec, n: usize) -> Self {
        ConstructionRecipe {
            kind,
            p: field.p(),
            k: field.k(),
            n,
            degrees: Vec::new(),
            seed: 0,
            modulus: field.modulus().to_vec(),
            choices: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Rebuilds the system this recipe describes.
    pub fn replay(&self) -> Result<PolySystem> {
        let field = FieldSpec::with_modulus(self.p as u64, &self.modulus)?;
        if field.k() != self.k {
            return Err(Error::InvalidModulus("modulus degree does not match k".into()));
        }
        let c = match self.kind {
            Kind::NormForm => norm_form(&field, self.n as u32)?,
            Kind::Example1 => example_one(&field, self.n)?,
            Kind::Example2 => example_two(&field)?,
            Kind::Random => random_system(&field, self.n, &self.degrees, self.seed)?,
            Kind::RandomHomogeneous => random_homogeneous_system(&field, self.n, &self.degrees, self.seed)?,
        };
        Ok(c.system)
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub system: PolySystem,
    pub recipe: ConstructionRecipe,
}

fn element_text(f: &FieldSpec, a: FieldElement) -> String {
    f.format_element(a)
}

/// `Σ x_i g^(i-1)` over `big`, in `nvars` variables, the first `len` used.
fn generic_element(big: &Arc<FieldSpec>, nvars: usize, len: usize) -> MultiPoly {
    let g = big.generator();
    let mut acc = MultiPoly::zero(big, nvars);
    let mut w = big.one();
    for i in 0..len {
        acc = &acc + &MultiPoly::var(big, nvars, i).scale(w);
        w = big.mul(w, g);
    }
    acc
}

fn frobenius_coeffs(p: &MultiPoly, power: u64) -> MultiPoly {
    let f = p.field().clone();
    p.map_coefficients(&f, |c| f.pow(c, power))
}

/// The norm form `N_k(x_1..x_k) = N_{K/F}(Σ x_i g^(i-1))` for `K = F_{q^k}`.
pub fn norm_form(field: &Arc<FieldSpec>, k: u32) -> Result<Construction> {
    if k == 0 {
        return Err(Error::NotADivisor { base: 0, degree: 0 });
    }
    let big = FieldSpec::new(field.p() as u64, field.k() * k)?;
    let emb = embed_subfield(field, &big)?;
    let n = k as usize;
    let lin = generic_element(&big, n, n);
    let q = field.q() as u64;
    let mut prod = lin.clone();
    let mut qj = q;
    for _ in 1..k {
        prod = &prod * &frobenius_coeffs(&lin, qj);
        qj *= q;
    }
    let form = prod.pull_back(&emb)?;
    debug_assert!(form.is_homogeneous() && form.total_degree() == Some(k));
    if (q as u128).pow(k) <= 1 << 12 {
        let zeros = Counter::single().count_full(&PolySystem::single(form.clone()))?;
        assert_eq!(zeros, 1, "norm form must vanish only at the origin");
    }
    let mut recipe = ConstructionRecipe::new(Kind::NormForm, field, n);
    recipe.notes.push(format!("basis 1, g, .., g^{} of {big} over {field}", k - 1));
    Ok(Construction {
        system: PolySystem::single(form),
        recipe,
    })
}

/// Result of [`example_one`] with the counts that go with it.
#[derive(Clone, Debug)]
pub struct ExampleOne {
    pub construction: Construction,
    pub c: FieldElement,
    /// Zeros of the quadric in `A^4`: `q^3 - q^2 + q`.
    pub quadric_count: u64,
    /// Zeros of the full product in `A^n`, by inclusion-exclusion.
    pub derived_total: u64,
    /// The closed form `q^(n+1-d)(1 - 1/q + 1/q^2)` with `d = n - 2`, which
    /// equals `q^3 - q^2 + q` for every `n`.
    pub displayed_total: u64,
}

impl ExampleOne {
    pub fn discrepancy(&self) -> bool {
        self.derived_total != self.displayed_total
    }
}

fn has_root(f: &FieldSpec, b: FieldElement, c: FieldElement) -> bool {
    f.elements().any(|x| f.add(f.add(f.mul(x, x), f.mul(b, x)), c).is_zero())
}

/// `Q = x1 x2 + x3^2 + x3 x4 + c x4^2`, times a norm form of degree `n - 4`
/// in `x5..xn` when `n > 4`.
pub fn example_one_detailed(field: &Arc<FieldSpec>, n: usize) -> Result<ExampleOne> {
    if n < 4 {
        return Err(Error::ArityMismatch { expected: 4, got: n });
    }
    let mut recipe = ConstructionRecipe::new(Kind::Example1, field, n);
    recipe.notes.push("Q = x1*x2 + x3^2 + x3*x4 + c*x4^2, degree 2 throughout so Q is a quadratic form".into());
    let one = field.one();
    let normalized = field.elements().find(|&c| !has_root(field, one, c)).map(|c| (one, c));
    let (b, c) = match normalized {
        Some(bc) => bc,
        None => {
            let bc = field
                .elements()
                .flat_map(|b| field.elements().map(move |c| (b, c)))
                .find(|&(b, c)| !has_root(field, b, c))
                .ok_or_else(|| Error::FieldTooSmall("no irreducible monic quadratic".into()))?;
            recipe.notes.push("fell back to a general binary form x3^2 + b*x3*x4 + c*x4^2".into());
            bc
        }
    };
    recipe.choices.insert("b".into(), element_text(field, b));
    recipe.choices.insert("c".into(), element_text(field, c));
    recipe.notes.push("c is the least element with x^2 + x + c rootless in F_q".into());
    let v = |i| MultiPoly::var(field, n, i);
    let q_form = &(&(&v(0) * &v(1)) + &(&v(2) * &v(2))) + &(&(&v(2) * &v(3)).scale(b) + &(&v(3) * &v(3)).scale(c));
    let poly = if n > 4 {
        let nf = norm_form(field, (n - 4) as u32)?;
        let positions: Vec<usize> = (4..n).collect();
        let nf = nf.system.polys()[0].with_vars(n, &positions);
        &q_form * &nf
    } else {
        q_form
    };
    let q = field.q() as u64;
    let a = q * q * q - q * q + q;
    let derived_total = if n > 4 { a * q.pow(n as u32 - 4) + q.pow(4) - a } else { a };
    Ok(ExampleOne {
        construction: Construction {
            system: PolySystem::single(poly),
            recipe,
        },
        c,
        quadric_count: a,
        derived_total,
        displayed_total: a,
    })
}

pub fn example_one(field: &Arc<FieldSpec>, n: usize) -> Result<Construction> {
    Ok(example_one_detailed(field, n)?.construction)
}

/// The tower and choices behind [`example_two`].
#[derive(Clone)]
pub struct ExampleTwo {
    pub construction: Construction,
    /// `F_{q^2}`, with `alpha = g` and the chosen `beta` living there.
    pub quadratic: Arc<FieldSpec>,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    /// `F_q -> F_{q^2}` and `F_{q^2} -> F_{q^4}`.
    pub embeddings: (Embedding, Embedding),
}

/// `f = (Q1 + β Q2)(Q1 + β^σ Q2)`, where `Q1 + α Q2` is the norm form of
/// `F_{q^4}` over `F_{q^2}` written in four variables over `F_q`.
pub fn example_two_detailed(field: &Arc<FieldSpec>) -> Result<ExampleTwo> {
    let q = field.q() as u64;
    if q == 2 {
        return Err(Error::FieldTooSmall(
            "q = 2: every element of F_4 outside F_2 is alpha or its conjugate, so no beta exists".into(),
        ));
    }
    let (p, e) = (field.p() as u64, field.k());
    let k2 = FieldSpec::new(p, 2 * e)?;
    let k4 = FieldSpec::new(p, 4 * e)?;
    let e12 = embed_subfield(field, &k2)?;
    let e24 = embed_subfield(&k2, &k4)?;
    // N = L * L^(q^2), coefficients in F_{q^2}
    let lin = generic_element(&k4, 4, 4);
    let norm = (&lin * &frobenius_coeffs(&lin, q * q)).pull_back(&e24)?;
    let alpha = k2.generator();
    let sigma = |a: FieldElement| k2.pow(a, q);
    // split each coefficient as a + b*alpha with a, b in F_q
    let split = |c: FieldElement| -> Result<(FieldElement, FieldElement)> {
        for b in field.elements() {
            let rest = k2.sub(c, k2.mul(e12.apply(b), alpha));
            if let Some(a) = e12.pull_back(rest) {
                return Ok((a, b));
            }
        }
        Err(Error::NotASubfield("coefficient outside F_q + alpha F_q".into()))
    };
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for (exps, c) in norm.terms() {
        let (a, b) = split(c)?;
        t1.push((exps.clone(), a));
        t2.push((exps.clone(), b));
    }
    let q1 = MultiPoly::from_terms(field, 4, t1)?;
    let q2 = MultiPoly::from_terms(field, 4, t2)?;
    let beta = k2
        .elements()
        .find(|&b| e12.pull_back(b).is_none() && b != alpha && b != sigma(alpha))
        .ok_or_else(|| Error::FieldTooSmall(format!("no admissible beta in {k2}")))?;
    let l1 = q1.lift(&e12)?;
    let l2 = q2.lift(&e12)?;
    let a = &l1 + &l2.scale(beta);
    let b = &l1 + &l2.scale(sigma(beta));
    let f = (&a * &b).pull_back(&e12)?;
    if !f.is_homogeneous() || f.total_degree() != Some(4) {
        return Err(Error::NotHomogeneous);
    }
    let mut recipe = ConstructionRecipe::new(Kind::Example2, field, 4);
    recipe.notes.push(format!("tower {field} < {k2} < {k4} by composed canonical embeddings"));
    recipe.notes.push(format!("basis 1, g, g^2, g^3 of {k4} over {field}; alpha = g of {k2}"));
    recipe.notes.push(format!("beta is the least element of {k2} outside F_q, alpha and alpha^q"));
    recipe.choices.insert("alpha".into(), element_text(&k2, alpha));
    recipe.choices.insert("beta".into(), element_text(&k2, beta));
    Ok(ExampleTwo {
        construction: Construction {
            system: PolySystem::single(f),
            recipe,
        },
        quadratic: k2,
        alpha,
        beta,
        embeddings: (e12, e24),
    })
}

pub fn example_two(field: &Arc<FieldSpec>) -> Result<Construction> {
    Ok(example_two_detailed(field)?.construction)
}

/// All exponent vectors in `n` variables with total degree in `lo..=hi`, in
/// lexicographic order.
pub fn monomials(n: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, hi, &mut Vec::new(), &mut out);
    out.retain(|e| e.iter().sum::<u32>() >= lo);
    out
}

fn draw(field: &Arc<FieldSpec>, n: usize, mons: &[Vec<u32>], want: u32, rng: &mut SplitMix64) -> MultiPoly {
    loop {
        let terms = mons.iter().map(|e| (e.clone(), rng.element(field)));
        let p = MultiPoly::from_terms(field, n, terms).expect("valid monomials");
        if p.total_degree() == Some(want) {
            return p;
        }
    }
}

fn random_impl(field: &Arc<FieldSpec>, n: usize, degrees: &[u32], seed: u64, homogeneous: bool) -> Result<Construction> {
    if degrees.is_empty() {
        return Err(Error::EmptySystem);
    }
    if let Some(&d) = degrees.iter().find(|&&d| d == 0) {
        return Err(Error::ArityMismatch { expected: 1, got: d as usize });
    }
    if n == 0 {
        return Err(Error::ArityMismatch { expected: 1, got: 0 });
    }
    let mut rng = SplitMix64::new(seed);
    let polys = degrees
        .iter()
        .map(|&d| {
            let mons = monomials(n, if homogeneous { d } else { 0 }, d);
            draw(field, n, &mons, d, &mut rng)
        })
        .collect();
    let kind = if homogeneous { Kind::RandomHomogeneous } else { Kind::Random };
    let mut recipe = ConstructionRecipe::new(kind, field, n);
    recipe.degrees = degrees.to_vec();
    recipe.seed = seed;
    Ok(Construction {
        system: PolySystem::new(polys)?,
        recipe,
    })
}

/// Dense random system: every monomial of degree `<= d_i` gets a uniform
/// coefficient, redrawn until the degree is exactly `d_i`.
pub fn random_system(field: &Arc<FieldSpec>, n: usize, degrees: &[u32], seed: u64) -> Result<Construction> {
    random_impl(field, n, degrees, seed, false)
}

/// Like [`random_system`] but only monomials of degree exactly `d_i`.
pub fn random_homogeneous_system(field: &Arc<FieldSpec>, n: usize, degrees: &[u32], seed: u64) -> Result<Construction> {
    random_impl(field, n, degrees, seed, true)
}

/// Canonical names for printing constructed systems.
pub fn names_for(sys: &PolySystem) -> Vec<String> {
    default_names(sys.nvars())
}
