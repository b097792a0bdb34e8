//! Hom-set enumeration, endomorphism rings, direct sums and summand tests.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::map::ModuleMap;
use super::module::FiniteModule;
use super::ring::{FiniteRing, Side};
use crate::error::{Error, Result, MAX_END, MAX_TABLE_CARRIER};

const UNDEF: usize = usize::MAX;

/// Visits every homomorphism `m -> n` as a value table, extending generator
/// images one generator at a time and pruning inconsistent partial maps.
///
/// Images are tried in ascending index order, so the visiting order is the
/// lexicographic order of the generator-image tuples.
pub fn for_each_hom<F>(
    m: &FiniteModule,
    n: &FiniteModule,
    gens: &[usize],
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    m.ensure_compatible(n)?;
    if m.span(gens).len() != m.size() {
        return Err(Error::invalid_argument(format!(
            "{:?} does not generate {}",
            gens,
            m.name()
        )));
    }
    let mut values = vec![UNDEF; m.size()];
    values[m.zero()] = n.zero();
    let mut defined = vec![m.zero()];
    let cyclics: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..m.ring().size()).map(|r| m.act(r, g)).collect())
        .collect();
    let mut search = Search {
        m,
        n,
        gens,
        cyclics: &cyclics,
        values: &mut values,
        defined: &mut defined,
    };
    let _ = search.descend(0, &mut visit);
    Ok(())
}

struct Search<'a> {
    m: &'a FiniteModule,
    n: &'a FiniteModule,
    gens: &'a [usize],
    cyclics: &'a [Vec<usize>],
    values: &'a mut Vec<usize>,
    defined: &'a mut Vec<usize>,
}

impl Search<'_> {
    fn descend<F>(&mut self, level: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if level == self.gens.len() {
            debug_assert!(self.values.iter().all(|&v| v != UNDEF));
            return visit(self.values);
        }
        let g = self.gens[level];
        let candidates: Vec<usize> = if self.values[g] != UNDEF {
            vec![self.values[g]]
        } else {
            (0..self.n.size()).collect()
        };
        let base = self.defined.len();
        for y in candidates {
            if self.extend(level, y, base) {
                self.descend(level + 1, visit)?;
            }
            for &e in &self.defined[base..] {
                self.values[e] = UNDEF;
            }
            self.defined.truncate(base);
        }
        ControlFlow::Continue(())
    }

    /// Defines the map on `S + R g` from `g -> y`; false on any conflict.
    fn extend(&mut self, level: usize, y: usize, base: usize) -> bool {
        let (m, n) = (self.m, self.n);
        for (r, &c) in self.cyclics[level].iter().enumerate() {
            let img_c = n.act(r, y);
            for i in 0..base {
                let s = self.defined[i];
                let e = m.add(s, c);
                let v = n.add(self.values[s], img_c);
                match self.values[e] {
                    UNDEF => {
                        self.values[e] = v;
                        self.defined.push(e);
                    }
                    w if w != v => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// All of `Hom_R(m, n)`, enumerated from the generators of `m`.
pub fn hom_set(m: &FiniteModule, n: &FiniteModule) -> Result<Vec<ModuleMap>> {
    hom_set_with_generators(m, n, &m.generators()?)
}

pub fn hom_set_with_generators(
    m: &FiniteModule,
    n: &FiniteModule,
    gens: &[usize],
) -> Result<Vec<ModuleMap>> {
    let mut out = Vec::new();
    for_each_hom(m, n, gens, |v| {
        out.push(ModuleMap::from_parts(m, n, v.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Some isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &FiniteModule, b: &FiniteModule) -> Result<Option<ModuleMap>> {
    a.ensure_compatible(b)?;
    if a.size() != b.size() || a.fingerprint() != b.fingerprint() {
        return Ok(None);
    }
    let mut found = None;
    for_each_hom(a, b, &a.generators()?, |v| {
        let mut hit = vec![false; b.size()];
        if v.iter().all(|&y| !std::mem::replace(&mut hit[y], true)) {
            found = Some(ModuleMap::from_parts(a, b, v.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

pub fn is_isomorphic(a: &FiniteModule, b: &FiniteModule) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FiniteModule,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// Direct sum on the product carrier, first summand varying fastest.
pub fn direct_sum(ring: &FiniteRing, side: Side, summands: &[FiniteModule]) -> Result<DirectSum> {
    for s in summands {
        if !s.ring().same_as(ring) || s.side() != side {
            return Err(Error::mismatch(format!(
                "summand {} is not a {side} module over {}",
                s.name(),
                ring.name()
            )));
        }
    }
    let sizes: Vec<usize> = summands.iter().map(|s| s.size()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= MAX_TABLE_CARRIER)
        .ok_or(Error::SizeGuard {
            what: "direct sum carrier",
            needed: sizes.iter().map(|&s| s as u128).product(),
            limit: MAX_TABLE_CARRIER as u128,
        })?;
    let decode = |mut x: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&s| {
                let c = x % s;
                x /= s;
                c
            })
            .collect()
    };
    let encode = |coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(&sizes)
            .rev()
            .fold(0, |acc, (&c, &s)| acc * s + c)
    };
    let coords: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let mut add = Vec::with_capacity(total * total);
    for x in &coords {
        for y in &coords {
            let z: Vec<usize> = summands
                .iter()
                .enumerate()
                .map(|(i, s)| s.add(x[i], y[i]))
                .collect();
            add.push(encode(&z));
        }
    }
    let mut action = Vec::with_capacity(ring.size() * total);
    for r in 0..ring.size() {
        for x in &coords {
            let z: Vec<usize> = summands
                .iter()
                .enumerate()
                .map(|(i, s)| s.act(r, x[i]))
                .collect();
            action.push(encode(&z));
        }
    }
    let zeros: Vec<usize> = summands.iter().map(|s| s.zero()).collect();
    let mut gens = Vec::new();
    for (i, s) in summands.iter().enumerate() {
        for g in s.generators()? {
            let mut c = zeros.clone();
            c[i] = g;
            gens.push(encode(&c));
        }
    }
    let name = if summands.is_empty() {
        "0".to_string()
    } else {
        summands
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let module =
        FiniteModule::from_tables_unchecked(name, ring, side, total, add, action, Some(gens))?;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (i, s) in summands.iter().enumerate() {
        let inj = (0..s.size())
            .map(|x| {
                let mut c = zeros.clone();
                c[i] = x;
                encode(&c)
            })
            .collect();
        injections.push(ModuleMap::from_parts(s, &module, inj));
        let proj = coords.iter().map(|c| c[i]).collect();
        projections.push(ModuleMap::from_parts(&module, s, proj));
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// `module^k`.
pub fn power(module: &FiniteModule, k: usize) -> Result<DirectSum> {
    direct_sum(module.ring(), module.side(), &vec![module.clone(); k])
}

/// A section/retraction pair exhibiting a direct summand: `retraction ∘ section = id`.
#[derive(Clone, Debug)]
pub struct SummandWitness {
    pub section: ModuleMap,
    pub retraction: ModuleMap,
}

/// Searches hom-set pairs for `r ∘ s = id_X`.
pub fn is_summand(x: &FiniteModule, y: &FiniteModule) -> Result<Option<SummandWitness>> {
    x.ensure_compatible(y)?;
    if x.is_zero() {
        return Ok(Some(SummandWitness {
            section: ModuleMap::zero(x, y),
            retraction: ModuleMap::zero(y, x),
        }));
    }
    if x.size() > y.size() || !y.size().is_multiple_of(x.size()) {
        return Ok(None);
    }
    let gens = x.generators()?;
    let retractions: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        for_each_hom(y, x, &y.generators()?, |v| {
            let mut hit = vec![false; x.size()];
            v.iter().for_each(|&t| hit[t] = true);
            if hit.iter().all(|&h| h) {
                out.push(v.to_vec());
            }
            ControlFlow::Continue(())
        })?;
        out
    };
    if retractions.is_empty() {
        return Ok(None);
    }
    let mut found = None;
    for_each_hom(x, y, &gens, |s| {
        if let Some(r) = retractions
            .iter()
            .find(|r| gens.iter().all(|&g| r[s[g]] == g))
        {
            found = Some(SummandWitness {
                section: ModuleMap::from_parts(x, y, s.to_vec()),
                retraction: ModuleMap::from_parts(y, x, r.clone()),
            });
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// `End_R(M)` as a set of value tables with composition as multiplication.
#[derive(Clone, Debug)]
pub struct EndomorphismRing {
    module: FiniteModule,
    maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    zero: usize,
    one: usize,
}

/// Enumerates `End_R(M)`; fails with `EndTooLarge` beyond 2^16 elements.
pub fn end_ring(m: &FiniteModule) -> Result<EndomorphismRing> {
    let mut maps = Vec::new();
    let mut overflow = false;
    for_each_hom(m, m, &m.generators()?, |v| {
        if maps.len() == MAX_END {
            overflow = true;
            return ControlFlow::Break(());
        }
        maps.push(v.to_vec());
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::EndTooLarge {
            size: MAX_END + 1,
            limit: MAX_END,
        });
    }
    let index: HashMap<Vec<usize>, usize> =
        maps.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let zero = index[&vec![m.zero(); m.size()]];
    let one = index[&(0..m.size()).collect::<Vec<_>>()];
    Ok(EndomorphismRing {
        module: m.clone(),
        maps,
        index,
        zero,
        one,
    })
}

impl EndomorphismRing {
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn values(&self, i: usize) -> &[usize] {
        &self.maps[i]
    }

    pub fn map(&self, i: usize) -> ModuleMap {
        ModuleMap::from_parts(&self.module, &self.module, self.maps[i].clone())
    }

    pub fn index_of(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }

    /// Action of the `i`-th endomorphism on `x`.
    #[inline]
    pub fn act(&self, i: usize, x: usize) -> usize {
        self.maps[i][x]
    }

    /// Index of `maps[i] ∘ maps[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let v: Vec<usize> = self.maps[j].iter().map(|&x| self.maps[i][x]).collect();
        self.index[&v]
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let v: Vec<usize> = self.maps[i]
            .iter()
            .zip(&self.maps[j])
            .map(|(&a, &b)| self.module.add(a, b))
            .collect();
        self.index[&v]
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        let v = &self.maps[i];
        v.iter().all(|&y| v[y] == y)
    }

    /// `End(M)·x`, the cyclic End-submodule generated by `x`.
    pub fn orbit(&self, x: usize) -> crate::elemset::ElementSet {
        crate::elemset::ElementSet::from_iter_in(
            self.module.size(),
            self.maps.iter().map(|v| v[x]),
        )
    }

    /// The ring structure as explicit tables (bounded to 4096 elements).
    pub fn to_ring(&self) -> Result<FiniteRing> {
        let n = self.len();
        crate::error::guard("End ring tables", n as u128, 4096)?;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                add.push(self.add(i, j));
                mul.push(self.compose(i, j));
            }
        }
        FiniteRing::from_tables_unchecked(format!("End({})", self.module.name()), n, add, mul, None)
    }

    /// `M` as a left module over [`EndomorphismRing::to_ring`].
    pub fn as_end_module(&self) -> Result<FiniteModule> {
        let ring = self.to_ring()?;
        let n = self.module.size();
        let action = (0..self.len() * n)
            .map(|i| self.maps[i / n][i % n])
            .collect();
        FiniteModule::from_tables_unchecked(
            format!("{} over End", self.module.name()),
            &ring,
            Side::Left,
            n,
            self.module.add_table().to_vec(),
            action,
            None,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::ring_zmod;

    fn zmod_mod(n: usize, ideal: &[usize]) -> FiniteModule {
        let r = ring_zmod(n).unwrap();
        FiniteModule::cyclic_quotient(&r, Side::Left, ideal).unwrap()
    }

    #[test]
    fn hom_counts() {
        let z4 = zmod_mod(4, &[]);
        let z2 = zmod_mod(4, &[2]);
        assert_eq!(hom_set(&z4, &z2).unwrap().len(), 2);
        let maps = hom_set(&z2, &z4).unwrap();
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[1].values(), &[0, 2]);
        let zero = FiniteModule::zero_module(z4.ring(), Side::Left);
        assert_eq!(hom_set(&z4, &zero).unwrap().len(), 1);
        assert_eq!(hom_set(&zero, &z4).unwrap().len(), 1);
    }

    #[test]
    fn hom_set_independent_of_generators() {
        let r = ring_zmod(4).unwrap();
        let z2 = zmod_mod(4, &[2]);
        let ds = direct_sum(&r, Side::Left, &[z2.clone(), zmod_mod(4, &[])]).unwrap();
        let a = hom_set(&ds.module, &ds.module).unwrap();
        let all: Vec<usize> = (0..ds.module.size()).rev().collect();
        let b = hom_set_with_generators(&ds.module, &ds.module, &all).unwrap();
        let mut av: Vec<_> = a.iter().map(|m| m.values().to_vec()).collect();
        let mut bv: Vec<_> = b.iter().map(|m| m.values().to_vec()).collect();
        av.sort();
        bv.sort();
        assert_eq!(av, bv);
    }

    #[test]
    fn end_ring_sizes() {
        let z4 = zmod_mod(4, &[]);
        let e = end_ring(&z4).unwrap();
        assert_eq!(e.len(), 4);
        let ring = e.to_ring().unwrap();
        assert!(ring.validate().is_pass());
        assert!(ring.is_commutative());

        let f2 = ring_zmod(2).unwrap();
        let k = FiniteModule::regular(&f2, Side::Left);
        let v = direct_sum(&f2, Side::Left, &[k.clone(), k]).unwrap().module;
        let e = end_ring(&v).unwrap();
        assert_eq!(e.len(), 16);
        let ring = e.to_ring().unwrap();
        assert!(ring.validate().is_pass());
        assert!(!ring.is_commutative());

        let zero = FiniteModule::zero_module(&f2, Side::Left);
        assert_eq!(end_ring(&zero).unwrap().len(), 1);
    }

    #[test]
    fn biproduct_identities() {
        let r = ring_zmod(6).unwrap();
        let ms = [zmod_mod(6, &[2]), zmod_mod(6, &[3]), zmod_mod(6, &[])];
        let ds = direct_sum(&r, Side::Left, &ms).unwrap();
        assert!(ds.module.validate().is_pass());
        let id = ModuleMap::identity(&ds.module);
        let mut total = ModuleMap::zero(&ds.module, &ds.module);
        for i in 0..3 {
            for j in 0..3 {
                let c = ds.projections[i].compose(&ds.injections[j]).unwrap();
                assert_eq!(c.is_identity(), i == j);
                assert_eq!(c.is_zero(), i != j);
            }
            total = total
                .sum(&ds.injections[i].compose(&ds.projections[i]).unwrap())
                .unwrap();
        }
        assert_eq!(total, id);
    }

    #[test]
    fn empty_sum_is_zero() {
        let r = ring_zmod(3).unwrap();
        let ds = direct_sum(&r, Side::Left, &[]).unwrap();
        assert_eq!(ds.module.size(), 1);
        assert!(ds.module.validate().is_pass());
    }

    #[test]
    fn z2_plus_z3_is_z6() {
        let r = ring_zmod(6).unwrap();
        let ds = direct_sum(&r, Side::Left, &[zmod_mod(6, &[3]), zmod_mod(6, &[2])]).unwrap();
        assert_eq!(ds.module.size(), 6);
        assert!(is_isomorphic(&ds.module, &zmod_mod(6, &[])).unwrap());
    }

    #[test]
    fn summands() {
        let r = ring_zmod(4).unwrap();
        let z2 = zmod_mod(4, &[2]);
        let z4 = zmod_mod(4, &[]);
        let ds = direct_sum(&r, Side::Left, &[z2.clone(), z4.clone()]).unwrap();
        let w = is_summand(&z2, &ds.module).unwrap().unwrap();
        assert!(w.retraction.compose(&w.section).unwrap().is_identity());
        assert!(is_summand(&z2, &z4).unwrap().is_none());
        let zero = FiniteModule::zero_module(&r, Side::Left);
        assert!(is_summand(&zero, &z4).unwrap().is_some());
    }

    #[test]
    fn map_validation() {
        let z4 = zmod_mod(4, &[]);
        let z2 = zmod_mod(4, &[2]);
        let f = ModuleMap::new(&z4, &z2, vec![0, 1, 0, 1]).unwrap();
        assert!(f.validate().is_pass());
        let g = ModuleMap::new(&z4, &z2, vec![0, 1, 1, 1]).unwrap();
        assert!(!g.validate().is_pass());
    }
}
