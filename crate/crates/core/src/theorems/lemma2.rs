//! Lemma 2 on sets `S ⊆ A^t(F_q)` spanning the whole space, checked over
//! bitmasks: points of `A^t` are numbered in canonical order and lines,
//! 2-planes and hyperplanes become `u128` masks.

use std::sync::Arc;

use serde_json::json;

use super::LawReport;
use crate::affine::{all_flats, qpow, AffineSubspace, Point, PointSet};
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma2Part {
    /// `q = 2`: no 2-plane meets `S` in exactly 3 points ⇒ `S = A^t`.
    I,
    /// `q >= 3`: every line meeting `S` twice lies in `S` ⇒ `S = A^t`.
    II,
    /// `q >= 4`: every line meeting `S` twice meets it `q-1` times ⇒ the
    /// complement lies in a hyperplane.
    III,
    /// Every line meeting `S` twice meets it `m+1` times ⇒
    /// `#S >= (m^(t+1)-1)/(m-1)`.
    IV(u32),
}

impl Lemma2Part {
    pub fn name(self) -> String {
        match self {
            Lemma2Part::I => "lemma2_i".into(),
            Lemma2Part::II => "lemma2_ii".into(),
            Lemma2Part::III => "lemma2_iii".into(),
            Lemma2Part::IV(m) => format!("lemma2_iv_m{m}"),
        }
    }

    pub fn parse(s: &str, m: Option<u32>) -> Option<Self> {
        match s {
            "i" | "1" => Some(Lemma2Part::I),
            "ii" | "2" => Some(Lemma2Part::II),
            "iii" | "3" => Some(Lemma2Part::III),
            "iv" | "4" => Some(Lemma2Part::IV(m?)),
            _ => None,
        }
    }
}

pub type Mask = u128;

/// Lines, 2-planes and hyperplanes of `A^t(F_q)` as masks.
pub struct Lemma2Context {
    field: Arc<FieldSpec>,
    t: usize,
    size: usize,
    full: Mask,
    lines: Vec<Mask>,
    planes: Vec<Mask>,
    hyperplanes: Vec<Mask>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Hypotheses fail; the reason names the first failing one.
    Vacuous(&'static str),
    Holds,
    Counterexample,
}

impl Lemma2Context {
    pub fn new(field: &Arc<FieldSpec>, t: usize) -> Result<Self> {
        let size = qpow(field.q(), t);
        if size > 128 {
            return Err(Error::BudgetExceeded { needed: size, budget: 128 });
        }
        let size = size as usize;
        let full = if size == 128 { Mask::MAX } else { (1 << size) - 1 };
        let mut ctx = Lemma2Context {
            field: field.clone(),
            t,
            size,
            full,
            lines: Vec::new(),
            planes: Vec::new(),
            hyperplanes: Vec::new(),
        };
        let mask_of = |ctx: &Lemma2Context, l: &AffineSubspace| l.points().fold(0, |m, p| m | 1 << ctx.index(&p));
        ctx.lines = if t >= 1 { all_flats(field, t, 1).iter().map(|l| mask_of(&ctx, l)).collect() } else { vec![] };
        ctx.planes = if t >= 2 { all_flats(field, t, 2).iter().map(|l| mask_of(&ctx, l)).collect() } else { vec![] };
        ctx.hyperplanes = if t >= 1 { all_flats(field, t, t - 1).iter().map(|l| mask_of(&ctx, l)).collect() } else { vec![] };
        Ok(ctx)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, p: &[crate::ff::FieldElement]) -> usize {
        let q = self.field.q() as usize;
        p.iter().fold(0, |acc, x| acc * q + x.index() as usize)
    }

    pub fn point(&self, mut i: usize) -> Point {
        let q = self.field.q() as usize;
        let mut p = vec![self.field.zero(); self.t];
        for c in p.iter_mut().rev() {
            *c = crate::ff::FieldElement::from_index((i % q) as u32);
            i /= q;
        }
        p
    }

    pub fn mask(&self, s: &PointSet) -> Mask {
        s.iter().fold(0, |m, p| m | 1 << self.index(p))
    }

    fn points_of(&self, mask: Mask) -> Vec<String> {
        (0..self.size)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.point(i).iter().map(|&x| self.field.format_element(x)).collect::<Vec<_>>().join(" "))
            .collect()
    }

    /// `S` spans `A^t`, i.e. contains `t+1` points in general position.
    pub fn spans(&self, s: Mask) -> bool {
        s != 0 && self.hyperplanes.iter().all(|&h| s & !h != 0)
    }

    fn check_part(&self, s: Mask, part: Lemma2Part) -> Result<Outcome> {
        let q = self.field.q();
        match part {
            Lemma2Part::I if q != 2 => return Err(Error::WrongFieldSize(format!("part (i) needs q = 2, got {q}"))),
            Lemma2Part::II if q < 3 => return Err(Error::WrongFieldSize(format!("part (ii) needs q >= 3, got {q}"))),
            Lemma2Part::III if q < 4 => return Err(Error::WrongFieldSize(format!("part (iii) needs q >= 4, got {q}"))),
            Lemma2Part::IV(m) if m < 2 => return Err(Error::WrongFieldSize(format!("part (iv) needs m >= 2, got {m}"))),
            _ => {}
        }
        if !self.spans(s) {
            return Ok(Outcome::Vacuous("no t+1 points in general position"));
        }
        let meets = |l: Mask| (s & l).count_ones();
        let hypothesis = match part {
            Lemma2Part::I => self.planes.iter().all(|&pl| meets(pl) != 3),
            Lemma2Part::II => self.lines.iter().all(|&l| meets(l) < 2 || s & l == l),
            Lemma2Part::III => self.lines.iter().all(|&l| meets(l) < 2 || meets(l) >= q - 1),
            Lemma2Part::IV(m) => self.lines.iter().all(|&l| meets(l) < 2 || meets(l) > m),
        };
        if !hypothesis {
            return Ok(Outcome::Vacuous("line/plane condition fails"));
        }
        let conclusion = match part {
            Lemma2Part::I | Lemma2Part::II => s == self.full,
            Lemma2Part::III => {
                let rest = self.full & !s;
                rest == 0 || self.hyperplanes.iter().any(|&h| rest & !h == 0)
            }
            Lemma2Part::IV(m) => {
                let m = m as u128;
                (s.count_ones() as u128) * (m - 1) >= m.pow(self.t as u32 + 1) - 1
            }
        };
        Ok(if conclusion { Outcome::Holds } else { Outcome::Counterexample })
    }

    /// First line or 2-plane violating the hypothesis, for diagnostics.
    fn failing_flat(&self, s: Mask, part: Lemma2Part) -> Option<Vec<String>> {
        let q = self.field.q();
        let meets = |l: Mask| (s & l).count_ones();
        let found = match part {
            Lemma2Part::I => self.planes.iter().find(|&&pl| meets(pl) == 3),
            Lemma2Part::II => self.lines.iter().find(|&&l| meets(l) >= 2 && s & l != l),
            Lemma2Part::III => self.lines.iter().find(|&&l| meets(l) >= 2 && meets(l) < q - 1),
            Lemma2Part::IV(m) => self.lines.iter().find(|&&l| meets(l) >= 2 && meets(l) <= m),
        };
        found.map(|&l| self.points_of(l))
    }
}

/// Checks one part of the lemma on a single set.
pub fn lemma2_check(s: &PointSet, part: Lemma2Part) -> Result<LawReport> {
    let ctx = Lemma2Context::new(s.field(), s.ambient())?;
    let mask = ctx.mask(s);
    let name = part.name();
    let mut ev = json!({"q": s.field().q(), "t": s.ambient(), "size": s.len()});
    if !s.is_empty() {
        ev["general_position"] = json!(s.max_general_position()?.len());
    }
    match ctx.check_part(mask, part)? {
        Outcome::Vacuous(reason) => {
            if let Some(flat) = ctx.failing_flat(mask, part) {
                ev["witness_flat"] = json!(flat);
            }
            Ok(LawReport::vacuous(&name, reason, ev))
        }
        Outcome::Holds => Ok(LawReport::verdict(&name, true, ev, None)),
        Outcome::Counterexample => {
            let w = json!(ctx.points_of(mask));
            Ok(LawReport::verdict(&name, false, ev, Some(w)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetMode {
    /// All `2^(q^t)` subsets; needs `q^t <= 16`.
    Exhaustive,
    /// `count` seeded subsets. Each draw first picks how many points to
    /// delete, uniformly in `0..=q^t`, then deletes that many random points,
    /// so near-full sets, where the hypotheses bite, are well represented.
    Sampled { count: u64, seed: u64 },
}

pub fn lemma2_exhaustive(field: &Arc<FieldSpec>, t: usize, part: Lemma2Part, mode: SubsetMode) -> Result<LawReport> {
    let ctx = Lemma2Context::new(field, t)?;
    let size = ctx.size;
    let mut tally = [0u64; 3];
    let mut first_bad = None;
    let mut judge = |s: Mask| -> Result<()> {
        match ctx.check_part(s, part)? {
            Outcome::Vacuous(_) => tally[0] += 1,
            Outcome::Holds => tally[1] += 1,
            Outcome::Counterexample => {
                tally[2] += 1;
                first_bad.get_or_insert(s);
            }
        }
        Ok(())
    };
    let (mode_name, seed) = match mode {
        SubsetMode::Exhaustive => {
            if size > 16 {
                return Err(Error::BudgetExceeded {
                    needed: 1 << size.min(127),
                    budget: 1 << 16,
                });
            }
            for s in 0..(1 as Mask) << size {
                judge(s)?;
            }
            ("exhaustive", None)
        }
        SubsetMode::Sampled { count, seed } => {
            let mut rng = SplitMix64::new(seed);
            for _ in 0..count {
                let mut s = ctx.full;
                let remove = rng.below(size as u64 + 1);
                for _ in 0..remove {
                    s &= !(1 << rng.below(size as u64));
                }
                judge(s)?;
            }
            ("sampled", Some(seed))
        }
    };
    let ev = json!({
        "q": field.q(),
        "t": t,
        "mode": mode_name,
        "seed": seed,
        "subsets": tally.iter().sum::<u64>(),
        "vacuous": tally[0],
        "hypothesis_held": tally[1] + tally[2],
        "counterexamples": tally[2],
    });
    let witness = first_bad.map(|s| json!(ctx.points_of(s)));
    Ok(LawReport::verdict(&part.name(), tally[2] == 0, ev, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::Status;

    fn f(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn single_instances() {
        let f3 = f(3);
        let all = PointSet::from_subspace(&AffineSubspace::full(&f3, 2));
        assert_eq!(lemma2_check(&all, Lemma2Part::II).unwrap().status(), Status::Pass);

        let line = PointSet::from_subspace(&AffineSubspace::full(&f3, 1));
        assert_eq!(lemma2_check(&line, Lemma2Part::IV(2)).unwrap().status(), Status::Pass);

        let (o, i) = (f3.zero(), f3.one());
        let l = AffineSubspace::new(&f3, vec![o, o], vec![vec![i, o]]).unwrap();
        let mut pts: Vec<Point> = l.points().collect();
        pts.push(vec![o, i]);
        let s = PointSet::new(&f3, 2, pts).unwrap();
        let r = lemma2_check(&s, Lemma2Part::II).unwrap();
        assert_eq!(r.status(), Status::Vacuous);
        assert_eq!(r.evidence["witness_flat"].as_array().unwrap().len(), 3);

        assert!(matches!(lemma2_check(&all, Lemma2Part::I), Err(Error::WrongFieldSize(_))));
        assert!(matches!(lemma2_check(&all, Lemma2Part::III), Err(Error::WrongFieldSize(_))));
    }

    #[test]
    fn small_sweeps() {
        for (q, t, part) in [(2, 2, Lemma2Part::I), (2, 3, Lemma2Part::I), (3, 2, Lemma2Part::II), (3, 1, Lemma2Part::IV(2))] {
            let r = lemma2_exhaustive(&f(q), t, part, SubsetMode::Exhaustive).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.evidence["subsets"], 1u64 << q.pow(t as u32));
            assert!(r.evidence["hypothesis_held"].as_u64().unwrap() >= 1);
        }
    }

    #[test]
    fn sampled_sweep() {
        let r = lemma2_exhaustive(&f(5), 2, Lemma2Part::IV(2), SubsetMode::Sampled { count: 2000, seed: 1 }).unwrap();
        assert!(r.pass);
        assert!(r.evidence["hypothesis_held"].as_u64().unwrap() > 0);
    }

    #[test]
    fn masks_match_point_sets() {
        let f4 = f(4);
        let ctx = Lemma2Context::new(&f4, 2).unwrap();
        assert_eq!(ctx.lines.len(), 20);
        assert_eq!(ctx.hyperplanes.len(), 20);
        for i in 0..ctx.size() {
            assert_eq!(ctx.index(&ctx.point(i)), i);
        }
        assert!(ctx.lines.iter().all(|l| l.count_ones() == 4));
        assert!(!ctx.spans(ctx.lines[0]));
        assert!(ctx.spans(ctx.full));
    }
}
