use std::sync::Arc;

use super::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// An injective ring homomorphism `small -> big`, stored as a lookup table
/// together with its partial inverse.
#[derive(Clone)]
pub struct Embedding {
    small: Arc<FieldSpec>,
    big: Arc<FieldSpec>,
    image: Vec<FieldElement>,
    preimage: Vec<u32>,
}

const NO_PREIMAGE: u32 = u32::MAX;

/// Embeds `small` into `big` by sending the generator of `small` to the
/// canonically least root of its modulus inside `big`.
pub fn embed_subfield(small: &Arc<FieldSpec>, big: &Arc<FieldSpec>) -> Result<Embedding> {
    if small.p() != big.p() {
        return Err(Error::NotASubfield(format!("{small} and {big} differ in characteristic")));
    }
    if big.k() % small.k() != 0 {
        return Err(Error::NotASubfield(format!("{small} is not contained in {big}")));
    }
    let root = if small.k() == 1 {
        big.from_int(-(small.modulus()[0] as i64))
    } else {
        let coeffs: Vec<FieldElement> = small.modulus().iter().map(|&c| big.from_int(c as i64)).collect();
        big.elements()
            .find(|&r| coeffs.iter().rev().fold(big.zero(), |acc, &c| big.add(big.mul(acc, r), c)).is_zero())
            .ok_or_else(|| Error::NotASubfield("modulus has no root".into()))?
    };
    let powers: Vec<FieldElement> = std::iter::successors(Some(big.one()), |&x| Some(big.mul(x, root)))
        .take(small.k() as usize)
        .collect();
    let image: Vec<FieldElement> = small
        .elements()
        .map(|a| {
            small
                .coords(a)
                .iter()
                .zip(&powers)
                .fold(big.zero(), |acc, (&c, &w)| big.add(acc, big.mul(big.from_int(c as i64), w)))
        })
        .collect();
    Ok(Embedding::from_table(small.clone(), big.clone(), image))
}

impl Embedding {
    fn from_table(small: Arc<FieldSpec>, big: Arc<FieldSpec>, image: Vec<FieldElement>) -> Embedding {
        let mut preimage = vec![NO_PREIMAGE; big.q() as usize];
        for (i, b) in image.iter().enumerate() {
            preimage[b.index() as usize] = i as u32;
        }
        Embedding {
            small,
            big,
            image,
            preimage,
        }
    }

    pub fn small(&self) -> &Arc<FieldSpec> {
        &self.small
    }

    pub fn big(&self) -> &Arc<FieldSpec> {
        &self.big
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.image[a.index() as usize]
    }

    /// The element of `small` mapping to `b`, if `b` lies in the image.
    pub fn pull_back(&self, b: FieldElement) -> Option<FieldElement> {
        match self.preimage[b.index() as usize] {
            NO_PREIMAGE => None,
            i => Some(FieldElement::from_index(i)),
        }
    }

    pub fn image_of_generator(&self) -> FieldElement {
        self.apply(self.small.generator())
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &Embedding) -> Result<Embedding> {
        if *self.big != *outer.small {
            return Err(Error::NotASubfield("embeddings do not chain".into()));
        }
        let image = self.image.iter().map(|&b| outer.apply(b)).collect();
        Ok(Embedding::from_table(self.small.clone(), outer.big.clone(), image))
    }
}
