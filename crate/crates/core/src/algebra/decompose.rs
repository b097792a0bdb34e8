//! Indecomposable decomposition through idempotents of the endomorphism ring,
//! Krull–Schmidt factor profiles, and the lattice of End-submodules.

use std::collections::{BTreeMap, BTreeSet};

use super::hom::{end_ring, find_isomorphism, EndomorphismRing};
use super::map::ModuleMap;
use super::module::FiniteModule;
use crate::elemset::ElementSet;
use crate::error::Result;

/// One summand of a decomposition with its structure maps into and out of the whole.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: FiniteModule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub module: FiniteModule,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// `Σ ι_i π_i = id` and `π_i ι_j = δ_ij`, by table evaluation.
    pub fn verify(&self) -> bool {
        let m = &self.module;
        let mut total = vec![m.zero(); m.size()];
        for s in &self.summands {
            for (x, t) in total.iter_mut().enumerate() {
                *t = m.add(*t, s.inclusion.apply(s.projection.apply(x)));
            }
        }
        if total.iter().enumerate().any(|(i, &v)| i != v) {
            return false;
        }
        self.summands.iter().enumerate().all(|(i, a)| {
            self.summands.iter().enumerate().all(|(j, b)| {
                (0..b.module.size()).all(|x| {
                    let y = a.projection.apply(b.inclusion.apply(x));
                    if i == j {
                        y == x
                    } else {
                        y == a.module.zero()
                    }
                })
            })
        })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.module.size()).collect()
    }
}

/// First idempotent other than 0 and 1 in enumeration order.
fn nontrivial_idempotent(end: &EndomorphismRing) -> Option<usize> {
    (0..end.len()).find(|&i| i != end.zero() && i != end.one() && end.is_idempotent(i))
}

/// Summand `e M` of `m` for an idempotent given by its value table.
fn image_summand(m: &FiniteModule, e: &[usize], tag: &str) -> Result<Summand> {
    let image = ElementSet::from_iter_in(m.size(), e.iter().copied());
    let (sub, elems) = m.submodule(&image, format!("{}{}", m.name(), tag))?;
    let mut pos = vec![usize::MAX; m.size()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let inclusion = ModuleMap::from_parts(&sub, m, elems);
    let projection = ModuleMap::from_parts(m, &sub, e.iter().map(|&x| pos[x]).collect());
    Ok(Summand {
        module: sub,
        inclusion,
        projection,
    })
}

/// Splits `m` along the first nontrivial idempotent of `End(m)`; `None` when indecomposable.
pub fn split_once(m: &FiniteModule) -> Result<Option<(Summand, Summand)>> {
    if m.is_zero() {
        return Ok(None);
    }
    let end = end_ring(m)?;
    let Some(e) = nontrivial_idempotent(&end) else {
        return Ok(None);
    };
    let ev = end.values(e).to_vec();
    let complement: Vec<usize> = (0..m.size()).map(|x| m.sub(x, ev[x])).collect();
    Ok(Some((
        image_summand(m, &ev, ".e")?,
        image_summand(m, &complement, ".f")?,
    )))
}

pub fn is_indecomposable(m: &FiniteModule) -> Result<bool> {
    Ok(!m.is_zero() && split_once(m)?.is_none())
}

/// Complete decomposition of `m` into indecomposables, by recursive idempotent splitting.
pub fn decompose_indecomposable(m: &FiniteModule) -> Result<Decomposition> {
    let mut summands = Vec::new();
    let id = ModuleMap::identity(m);
    collect(m, &id, &id, &mut summands)?;
    for (i, s) in summands.iter_mut().enumerate() {
        s.module = s.module.with_name(format!("{}[{i}]", m.name()));
        s.inclusion = ModuleMap::from_parts(&s.module, m, s.inclusion.values().to_vec());
        s.projection = ModuleMap::from_parts(m, &s.module, s.projection.values().to_vec());
    }
    Ok(Decomposition {
        module: m.clone(),
        summands,
    })
}

fn collect(
    part: &FiniteModule,
    incl: &ModuleMap,
    proj: &ModuleMap,
    out: &mut Vec<Summand>,
) -> Result<()> {
    if part.is_zero() {
        return Ok(());
    }
    match split_once(part)? {
        None => out.push(Summand {
            module: part.clone(),
            inclusion: incl.clone(),
            projection: proj.clone(),
        }),
        Some((a, b)) => {
            for s in [a, b] {
                let i = incl.compose(&s.inclusion)?;
                let p = s.projection.compose(proj)?;
                collect(&s.module, &i, &p, out)?;
            }
        }
    }
    Ok(())
}

/// Length of `m` as a module over `End(m)`, via a greedy chain of covers.
pub fn endolength(m: &FiniteModule) -> Result<usize> {
    let end = end_ring(m)?;
    let orbits: Vec<ElementSet> = (0..m.size()).map(|x| end.orbit(x)).collect();
    let mut current = ElementSet::from_iter_in(m.size(), [m.zero()]);
    let mut length = 0;
    while current.len() < m.size() {
        // the smallest one-element extension is a cover
        current = (0..m.size())
            .filter(|&x| !current.contains(x))
            .map(|x| m.subgroup_sum(&current, &orbits[x]))
            .min_by_key(|s| s.len())
            .expect("a proper submodule has an outside element");
        length += 1;
    }
    Ok(length)
}

/// Every `End(m)`-submodule of `m`, in [`ElementSet`] order.
pub fn end_submodules(m: &FiniteModule) -> Result<Vec<ElementSet>> {
    let end = end_ring(m)?;
    end_submodules_with(m, &end)
}

pub fn end_submodules_with(m: &FiniteModule, end: &EndomorphismRing) -> Result<Vec<ElementSet>> {
    let orbits: Vec<ElementSet> = (0..m.size()).map(|x| end.orbit(x)).collect();
    let bottom = ElementSet::from_iter_in(m.size(), [m.zero()]);
    let mut seen: BTreeSet<ElementSet> = BTreeSet::from([bottom.clone()]);
    let mut frontier = vec![bottom];
    while let Some(s) = frontier.pop() {
        for x in 0..m.size() {
            if s.contains(x) {
                continue;
            }
            let t = m.subgroup_sum(&s, &orbits[x]);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Multiplicity of each isomorphism class (indexed into a [`FactorCatalog`]).
pub type Profile = BTreeMap<usize, usize>;

/// Isomorphism classes of indecomposables met so far, for Krull–Schmidt comparisons.
#[derive(Clone, Debug, Default)]
pub struct FactorCatalog {
    classes: Vec<FiniteModule>,
}

impl FactorCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn classes(&self) -> &[FiniteModule] {
        &self.classes
    }

    /// Class index of an indecomposable, adding a new class when needed.
    pub fn classify(&mut self, ind: &FiniteModule) -> Result<usize> {
        for (i, c) in self.classes.iter().enumerate() {
            if c.ring().same_as(ind.ring())
                && c.side() == ind.side()
                && find_isomorphism(c, ind)?.is_some()
            {
                return Ok(i);
            }
        }
        self.classes.push(ind.clone());
        Ok(self.classes.len() - 1)
    }

    pub fn profile(&mut self, m: &FiniteModule) -> Result<Profile> {
        let d = decompose_indecomposable(m)?;
        let mut p = Profile::new();
        for s in &d.summands {
            *p.entry(self.classify(&s.module)?).or_default() += 1;
        }
        Ok(p)
    }
}

/// Smallest `k` with `x` a summand of `y^k`, from factor profiles; `None` if no `k` works.
pub fn summand_power(x: &Profile, y: &Profile) -> Option<usize> {
    let mut k = 0;
    for (c, &mx) in x {
        let my = *y.get(c).unwrap_or(&0);
        if my == 0 {
            return None;
        }
        k = k.max(mx.div_ceil(my));
    }
    Some(k)
}

/// Krull–Schmidt summand test: every factor of `x` occurs in `y` at least as often.
pub fn is_summand_by_factors(x: &FiniteModule, y: &FiniteModule) -> Result<bool> {
    let mut cat = FactorCatalog::new();
    let px = cat.profile(x)?;
    let py = cat.profile(y)?;
    Ok(px
        .iter()
        .all(|(c, &mx)| py.get(c).is_some_and(|&my| my >= mx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hom::{direct_sum, is_isomorphic};
    use crate::algebra::ring::{ring_zmod, Side};

    fn zmod_mod(n: usize, ideal: &[usize]) -> FiniteModule {
        let r = ring_zmod(n).unwrap();
        FiniteModule::cyclic_quotient(&r, Side::Left, ideal).unwrap()
    }

    #[test]
    fn z6_splits_into_z2_and_z3() {
        let d = decompose_indecomposable(&zmod_mod(6, &[])).unwrap();
        assert!(d.verify());
        let mut sizes = d.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);
        let z2 = zmod_mod(6, &[2]);
        assert!(d
            .summands
            .iter()
            .any(|s| is_isomorphic(&s.module, &z2).unwrap()));
    }

    #[test]
    fn z4_is_indecomposable() {
        let d = decompose_indecomposable(&zmod_mod(4, &[])).unwrap();
        assert_eq!(d.sizes(), vec![4]);
        assert!(d.verify());
        let zero = FiniteModule::zero_module(&ring_zmod(4).unwrap(), Side::Left);
        assert!(decompose_indecomposable(&zero).unwrap().summands.is_empty());
    }

    #[test]
    fn endolengths() {
        assert_eq!(endolength(&zmod_mod(4, &[])).unwrap(), 2);
        let f2 = ring_zmod(2).unwrap();
        let k = FiniteModule::regular(&f2, Side::Left);
        let v = direct_sum(&f2, Side::Left, &[k.clone(), k]).unwrap().module;
        assert_eq!(endolength(&v).unwrap(), 1);
        let zero = FiniteModule::zero_module(&f2, Side::Left);
        assert_eq!(endolength(&zero).unwrap(), 0);
    }

    #[test]
    fn end_submodule_chain_of_z8() {
        let subs = end_submodules(&zmod_mod(8, &[])).unwrap();
        let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
    }

    #[test]
    fn factor_profiles() {
        let r = ring_zmod(4).unwrap();
        let z2 = zmod_mod(4, &[2]);
        let z4 = zmod_mod(4, &[]);
        let s = direct_sum(&r, Side::Left, &[z2.clone(), z4.clone(), z2.clone()])
            .unwrap()
            .module;
        let mut cat = FactorCatalog::new();
        let p = cat.profile(&s).unwrap();
        let p2 = cat.profile(&z2).unwrap();
        assert_eq!(p.values().sum::<usize>(), 3);
        assert_eq!(summand_power(&p2, &p), Some(1));
        assert_eq!(summand_power(&p, &p2), None);
        assert!(is_summand_by_factors(&z2, &s).unwrap());
        assert!(!is_summand_by_factors(&z2, &z4).unwrap());
    }
}
