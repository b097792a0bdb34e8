//! Bounded enumeration of one-variable pp formulas, evaluated on several
//! modules at once.
//!
//! A formula `∃ȳ : vA + ȳB = 0` with `k` constraints defines
//! `{x : (x·A_1, …, x·A_k) ∈ T}` where `T = {ȳB}` is the image of `M^m` in
//! `M^k`. The scan enumerates the distinct images `T` by adding one row of
//! `B` at a time, so formulas whose `B` matrices give the same image are
//! evaluated once.

use std::collections::HashMap;

use super::formula::PPFormula;
use crate::algebra::{FiniteModule, FiniteRing, Side};
use crate::elemset::ElementSet;
use crate::error::{guard, Error, Result};

/// Largest `|M|^k` a scan will index.
pub const MAX_SCAN_TUPLES: usize = 1 << 24;
/// Largest number of distinct `B`-images kept per constraint count.
pub const MAX_SCAN_IMAGES: usize = 1 << 16;

/// Default matrix-size bound for formula scans.
pub const DEFAULT_BOUND: usize = 2;
/// Hard cap for escalation.
pub const MAX_BOUND: usize = 3;

/// A formula together with its solution set in every scanned module.
#[derive(Clone, Debug)]
pub struct Definable {
    pub formula: PPFormula,
    pub solutions: Vec<ElementSet>,
}

struct Coder<'a> {
    m: &'a FiniteModule,
    k: usize,
}

impl Coder<'_> {
    fn digits(&self, mut code: usize) -> Vec<usize> {
        let s = self.m.size();
        (0..self.k)
            .map(|_| {
                let d = code % s;
                code /= s;
                d
            })
            .collect()
    }

    fn encode(&self, digits: impl Iterator<Item = usize>) -> usize {
        let s = self.m.size();
        let mut code = 0;
        let mut place = 1;
        for d in digits {
            code += d * place;
            place *= s;
        }
        code
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        self.encode(da.iter().zip(&db).map(|(&x, &y)| self.m.add(x, y)))
    }

    fn universe(&self) -> usize {
        self.m.size().pow(self.k as u32)
    }

    /// `{(y·r_1, …, y·r_k) : y ∈ M}`.
    fn row_image(&self, r: &[usize]) -> ElementSet {
        ElementSet::from_iter_in(
            self.universe(),
            (0..self.m.size()).map(|y| self.encode(r.iter().map(|&c| self.m.act(c, y)))),
        )
    }

    /// `t + s` for subgroups `t` and `s` of `M^k`.
    fn sum(&self, t: &ElementSet, s: &ElementSet) -> ElementSet {
        let mut out = t.clone();
        for b in s.iter() {
            if t.contains(b) {
                continue;
            }
            for a in t.iter() {
                out.insert(self.add(a, b));
            }
        }
        out
    }
}

fn vectors(ring: &FiniteRing, len: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total = ring.size().pow(len as u32);
    (0..total).map(move |mut c| {
        // first entry varies slowest, giving lexicographic order
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = c % ring.size();
            c /= ring.size();
        }
        v
    })
}

/// Every distinct solution-set signature of formulas with at most `bound`
/// bound variables and `bound` constraints, in discovery order.
///
/// Discovery order is by constraint count, then by number of rows of `B`,
/// then lexicographic in the rows, then lexicographic in `A`; the stored
/// formula is the first one found with its signature.
pub fn scan_definable(
    ring: &FiniteRing,
    side: Side,
    modules: &[FiniteModule],
    bound: usize,
) -> Result<Vec<Definable>> {
    for m in modules {
        if !m.ring().same_as(ring) || m.side() != side {
            return Err(Error::mismatch(format!(
                "module {} is not a {side} module over {}",
                m.name(),
                ring.name()
            )));
        }
    }
    let mut found: Vec<Definable> = Vec::new();
    let mut index: HashMap<Vec<ElementSet>, usize> = HashMap::new();
    for k in 0..=bound {
        for m in modules {
            guard(
                "formula scan tuples",
                (m.size() as u128).pow(k as u32),
                MAX_SCAN_TUPLES as u128,
            )?;
        }
        let coders: Vec<Coder> = modules.iter().map(|m| Coder { m, k }).collect();
        // distinct nonzero row images with their first row
        let mut rows: Vec<(Vec<usize>, Vec<ElementSet>)> = Vec::new();
        let mut row_seen: HashMap<Vec<ElementSet>, ()> = HashMap::new();
        for r in vectors(ring, k) {
            if r.iter().all(|&c| c == ring.zero()) {
                continue;
            }
            let key: Vec<ElementSet> = coders.iter().map(|c| c.row_image(&r)).collect();
            if row_seen.insert(key.clone(), ()).is_none() {
                rows.push((r, key));
            }
        }
        let zero_key: Vec<ElementSet> = coders
            .iter()
            .map(|c| ElementSet::from_iter_in(c.universe(), [0]))
            .collect();
        let mut images: Vec<(Vec<Vec<usize>>, Vec<ElementSet>)> = vec![(vec![], zero_key.clone())];
        let mut image_seen: HashMap<Vec<ElementSet>, ()> = HashMap::from([(zero_key, ())]);
        let mut frontier = vec![0usize];
        for _ in 0..bound {
            let mut next = Vec::new();
            for &i in &frontier {
                for (r, rkey) in &rows {
                    let (brows, tkey) = &images[i];
                    let key: Vec<ElementSet> = coders
                        .iter()
                        .zip(tkey.iter().zip(rkey))
                        .map(|(c, (t, s))| c.sum(t, s))
                        .collect();
                    if image_seen.insert(key.clone(), ()).is_none() {
                        let mut b = brows.clone();
                        b.push(r.clone());
                        images.push((b, key));
                        next.push(images.len() - 1);
                        guard(
                            "formula scan images",
                            images.len() as u128,
                            MAX_SCAN_IMAGES as u128,
                        )?;
                    }
                }
            }
            frontier = next;
        }
        for (brows, tkey) in &images {
            for a in vectors(ring, k) {
                let sig: Vec<ElementSet> = coders
                    .iter()
                    .zip(tkey)
                    .map(|(c, t)| {
                        ElementSet::from_iter_in(
                            c.m.size(),
                            (0..c.m.size()).filter(|&x| {
                                t.contains(c.encode(a.iter().map(|&coef| c.m.act(coef, x))))
                            }),
                        )
                    })
                    .collect();
                if index.contains_key(&sig) {
                    continue;
                }
                let b: Vec<usize> = brows.iter().flatten().copied().collect();
                let formula = PPFormula::new(ring, side, 1, brows.len(), k, a, b)?;
                index.insert(sig.clone(), found.len());
                found.push(Definable {
                    formula,
                    solutions: sig,
                });
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring_zmod;
    use crate::pp::solve::pp_solve;

    #[test]
    fn witnesses_reproduce_their_signatures() {
        let r = ring_zmod(4).unwrap();
        let ms = vec![
            FiniteModule::regular(&r, Side::Left),
            FiniteModule::cyclic_quotient(&r, Side::Left, &[2]).unwrap(),
        ];
        let found = scan_definable(&r, Side::Left, &ms, 2).unwrap();
        assert!(found.len() >= 3);
        for d in &found {
            for (m, s) in ms.iter().zip(&d.solutions) {
                assert_eq!(&pp_solve(&d.formula, m).unwrap().to_set(), s, "{}", d.formula);
            }
        }
        assert_eq!(found[0].formula.constraints(), 0);
    }

    #[test]
    fn z4_has_three_definable_subgroups() {
        let r = ring_zmod(4).unwrap();
        let m = FiniteModule::regular(&r, Side::Right);
        let found = scan_definable(&r, Side::Right, &[m], 2).unwrap();
        let mut sizes: Vec<usize> = found.iter().map(|d| d.solutions[0].len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 4]);
    }

    #[test]
    fn side_is_checked() {
        let r = ring_zmod(2).unwrap();
        let m = FiniteModule::regular(&r, Side::Left);
        assert!(scan_definable(&r, Side::Right, &[m], 1).is_err());
    }
}
