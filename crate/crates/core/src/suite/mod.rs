//! The fixed test suite: eight small rings and, over each, the cyclic left
//! modules, their pairwise sums and the quotients of those sums by cyclic
//! submodules, all up to 64 elements and up to isomorphism.

pub mod battery;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    direct_sum, dual_numbers_f2, find_isomorphism, ring_zmod, upper_triangular_f2, FiniteModule,
    FiniteRing, Side,
};
use crate::elemset::ElementSet;
use crate::error::Result;
use crate::pp::PPFormula;

pub const SUITE_MAX_CARRIER: usize = 64;

/// Z/2, Z/3, Z/4, Z/6, Z/8, Z/9, F2[t]/(t^2), UT2(F2).
pub fn suite_rings() -> Vec<FiniteRing> {
    let mut rings: Vec<FiniteRing> = [2, 3, 4, 6, 8, 9]
        .into_iter()
        .map(|n| ring_zmod(n).expect("n > 0"))
        .collect();
    rings.push(dual_numbers_f2());
    rings.push(upper_triangular_f2());
    rings
}

/// Left ideals of `ring`, smallest first.
pub fn left_ideals(ring: &FiniteRing) -> Vec<ElementSet> {
    let r = FiniteModule::regular(ring, Side::Left);
    let bottom = ElementSet::from_iter_in(r.size(), [r.zero()]);
    let mut seen: BTreeSet<ElementSet> = BTreeSet::from([bottom.clone()]);
    let mut frontier = vec![bottom];
    while let Some(s) = frontier.pop() {
        for x in 0..r.size() {
            if !s.contains(x) {
                let t = r.subgroup_sum(&s, &r.cyclic(x));
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct SuiteRing {
    pub ring: FiniteRing,
    /// Nonzero cyclic modules `R/I`, one per isomorphism class.
    pub cyclics: Vec<FiniteModule>,
    /// Every suite module over the ring, the zero module first.
    pub modules: Vec<FiniteModule>,
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub rings: Vec<SuiteRing>,
}

fn push_new(list: &mut Vec<FiniteModule>, m: FiniteModule) -> Result<bool> {
    for x in list.iter() {
        if x.size() == m.size() && find_isomorphism(x, &m)?.is_some() {
            return Ok(false);
        }
    }
    list.push(m);
    Ok(true)
}

pub fn suite_ring(ring: &FiniteRing, max_carrier: usize) -> Result<SuiteRing> {
    let regular = FiniteModule::regular(ring, Side::Left);
    let mut cyclics = Vec::new();
    let mut ideals = left_ideals(ring);
    ideals.reverse();
    for (i, ideal) in ideals.iter().enumerate() {
        if ideal.len() == ring.size() {
            continue;
        }
        let name = if ideal.len() == 1 {
            ring.name().to_string()
        } else {
            format!("{}/I{i}", ring.name())
        };
        let (q, _) = regular.quotient(ideal, name)?;
        push_new(&mut cyclics, q)?;
    }
    cyclics.sort_by_key(|m| m.size());
    let mut modules = vec![FiniteModule::zero_module(ring, Side::Left)];
    for c in &cyclics {
        modules.push(c.clone());
    }
    let mut sums = Vec::new();
    for i in 0..cyclics.len() {
        for j in i..cyclics.len() {
            if cyclics[i].size() * cyclics[j].size() > max_carrier {
                continue;
            }
            let s = direct_sum(ring, Side::Left, &[cyclics[i].clone(), cyclics[j].clone()])?.module;
            if push_new(&mut modules, s.clone())? {
                sums.push(s);
            }
        }
    }
    for s in &sums {
        let mut seen = BTreeSet::new();
        for x in 0..s.size() {
            let c = s.cyclic(x);
            if c.len() == 1 || c.len() == s.size() || !seen.insert(c.clone()) {
                continue;
            }
            let (q, _) = s.quotient(&c, format!("({})/<{x}>", s.name()))?;
            push_new(&mut modules, q)?;
        }
    }
    Ok(SuiteRing {
        ring: ring.clone(),
        cyclics,
        modules,
    })
}

impl Suite {
    pub fn standard() -> Result<Suite> {
        Self::with_max_carrier(SUITE_MAX_CARRIER)
    }

    pub fn with_max_carrier(max_carrier: usize) -> Result<Suite> {
        Self::from_rings(&suite_rings(), max_carrier)
    }

    pub fn from_rings(rings: &[FiniteRing], max_carrier: usize) -> Result<Suite> {
        Ok(Suite {
            rings: rings
                .iter()
                .map(|r| suite_ring(r, max_carrier))
                .collect::<Result<_>>()?,
        })
    }

    pub fn ring(&self, name: &str) -> Option<&SuiteRing> {
        self.rings.iter().find(|r| r.ring.name() == name)
    }

    pub fn module_count(&self) -> usize {
        self.rings.iter().map(|r| r.modules.len()).sum()
    }
}

/// One-variable formulas with at most one bound variable and one constraint, exhaustively.
pub fn small_formulas(ring: &FiniteRing, side: Side) -> Vec<PPFormula> {
    let mut out = vec![PPFormula::tautology(ring, side, 1)];
    for a in 0..ring.size() {
        out.push(PPFormula::new(ring, side, 1, 0, 1, vec![a], vec![]).expect("well-formed"));
    }
    for a in 0..ring.size() {
        for b in 0..ring.size() {
            out.push(PPFormula::new(ring, side, 1, 1, 1, vec![a], vec![b]).expect("well-formed"));
        }
    }
    out
}

/// Seeded random one-variable formulas with at most `bound` bound variables and constraints.
pub fn random_formulas(ring: &FiniteRing, side: Side, count: usize, bound: usize, seed: u64) -> Vec<PPFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(0..=bound);
            let k = rng.random_range(0..=bound);
            let a = (0..k).map(|_| rng.random_range(0..ring.size())).collect();
            let b = (0..m * k).map(|_| rng.random_range(0..ring.size())).collect();
            PPFormula::new(ring, side, 1, m, k, a, b).expect("well-formed")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclics_of_small_rings() {
        let s = suite_ring(&ring_zmod(4).unwrap(), 64).unwrap();
        let sizes: Vec<usize> = s.cyclics.iter().map(|m| m.size()).collect();
        assert_eq!(sizes, vec![2, 4]);
        // 0, Z/2, Z/4, Z/2+Z/2, Z/2+Z/4, Z/4+Z/4
        assert_eq!(s.modules.len(), 6);
        let ut = suite_ring(&upper_triangular_f2(), 64).unwrap();
        assert!(ut.modules.iter().all(|m| m.validate().is_pass()));
        assert!(ut.modules.iter().all(|m| m.size() <= 64));
    }

    #[test]
    fn left_ideal_counts() {
        assert_eq!(left_ideals(&ring_zmod(6).unwrap()).len(), 4);
        assert_eq!(left_ideals(&ring_zmod(8).unwrap()).len(), 4);
    }

    #[test]
    fn random_formulas_are_reproducible() {
        let r = ring_zmod(4).unwrap();
        let a = random_formulas(&r, Side::Right, 5, 2, 7);
        let b = random_formulas(&r, Side::Right, 5, 2, 7);
        assert_eq!(a, b);
    }
}
