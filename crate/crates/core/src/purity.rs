//! Short exact sequences, purity, and their duals.
//!
//! Finite modules are pure-injective, so a pure embedding between finite
//! modules splits. Purity is decided both ways: by comparing pp solution sets
//! and by searching for a retraction.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::algebra::hom::for_each_hom;
use crate::algebra::{direct_sum, FiniteModule, ModuleMap};
use crate::duality::{dual_in, dual_map, DualityKind};
use crate::elemset::ElementSet;
use crate::error::{Error, Result};
use crate::pp::{scan_definable, PPFormula, MAX_BOUND};

/// `0 → L → M → N → 0`, exactness checked on construction.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub l: FiniteModule,
    pub m: FiniteModule,
    pub n: FiniteModule,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

impl ShortExactSequence {
    pub fn new(incl: ModuleMap, proj: ModuleMap) -> Result<Self> {
        if !incl.target().same_as(proj.source()) {
            return Err(Error::mismatch("maps do not compose"));
        }
        if !incl.validate().is_pass() || !proj.validate().is_pass() {
            return Err(Error::Invalid("sequence maps are not module maps".into()));
        }
        if !incl.is_injective() {
            return Err(Error::Invalid("first map is not injective".into()));
        }
        if !proj.is_surjective() {
            return Err(Error::Invalid("second map is not surjective".into()));
        }
        if incl.image() != proj.kernel() {
            return Err(Error::Invalid("image of the first map is not the kernel of the second".into()));
        }
        Ok(ShortExactSequence {
            l: incl.source().clone(),
            m: incl.target().clone(),
            n: proj.target().clone(),
            incl,
            proj,
        })
    }

    /// `0 → S → M → M/S → 0` for a submodule `S`.
    pub fn from_submodule(m: &FiniteModule, sub: &ElementSet) -> Result<Self> {
        let (l, elems) = m.submodule(sub, format!("{}<{}>", m.name(), sub.len()))?;
        let (n, classes) = m.quotient(sub, format!("{}/{}", m.name(), sub.len()))?;
        Self::new(ModuleMap::new(&l, m, elems)?, ModuleMap::new(m, &n, classes)?)
    }

    /// `0 → A → A ⊕ B → B → 0`.
    pub fn split(a: &FiniteModule, b: &FiniteModule) -> Result<Self> {
        let s = direct_sum(a.ring(), a.side(), &[a.clone(), b.clone()])?;
        Self::new(s.injections[0].clone(), s.projections[1].clone())
    }

    pub fn describe(&self) -> String {
        format!("0 -> {} -> {} -> {} -> 0", self.l.name(), self.m.name(), self.n.name())
    }

    /// A retraction `r : M → L` with `r ∘ incl = id`, if the sequence splits.
    pub fn retraction(&self) -> Result<Option<ModuleMap>> {
        let gens = self.l.generators()?;
        let mut found = None;
        for_each_hom(&self.m, &self.l, &self.m.generators()?, |r| {
            if gens.iter().all(|&g| r[self.incl.apply(g)] == g) {
                found = Some(ModuleMap::from_parts(&self.m, &self.l, r.to_vec()));
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub pure: bool,
    /// `φ(L) = L ∩ φ(M)` for every scanned formula.
    pub pp_preserving: bool,
    pub split: bool,
    pub methods_agree: bool,
    /// A formula whose solution set is not preserved.
    #[serde(serialize_with = "crate::report::display_opt")]
    pub separating_formula: Option<PPFormula>,
    pub bound: usize,
}

fn pp_separator(seq: &ShortExactSequence, bound: usize) -> Result<Option<PPFormula>> {
    let found = scan_definable(
        seq.m.ring(),
        seq.m.side(),
        &[seq.l.clone(), seq.m.clone()],
        bound,
    )?;
    for d in found {
        let image = ElementSet::from_iter_in(seq.m.size(), d.solutions[0].iter().map(|x| seq.incl.apply(x)));
        if image != seq.incl.image().intersection(&d.solutions[1]) {
            return Ok(Some(d.formula));
        }
    }
    Ok(None)
}

/// Purity by pp preservation (up to `bound`, escalated to the cap before
/// giving up on a disagreement) and by splitting. The two must agree.
pub fn is_pure(seq: &ShortExactSequence, bound: usize) -> Result<PurityReport> {
    let split = seq.retraction()?.is_some();
    let mut b = bound;
    loop {
        let sep = pp_separator(seq, b)?;
        let pp_preserving = sep.is_none();
        if pp_preserving == split || b >= MAX_BOUND.max(bound) {
            if pp_preserving != split {
                return Err(Error::Disagreement(format!(
                    "{}: split = {split} but pp-preserving = {pp_preserving} at bound {b}",
                    seq.describe()
                )));
            }
            return Ok(PurityReport {
                pure: split,
                pp_preserving,
                split,
                methods_agree: true,
                separating_formula: sep,
                bound: b,
            });
        }
        b += 1;
    }
}

/// The dualized sequence `0 → N* → M* → L* → 0` and whether it splits.
#[derive(Clone, Debug)]
pub struct DualSequence {
    pub sequence: ShortExactSequence,
    pub split: bool,
}

/// Applies the duality to every term and arrow; exactness is checked by construction.
pub fn dualize_sequence(seq: &ShortExactSequence, kind: DualityKind) -> Result<DualSequence> {
    let (dl, dm, dn) = (dual_in(&seq.l, kind)?, dual_in(&seq.m, kind)?, dual_in(&seq.n, kind)?);
    let incl = dual_map(&seq.proj, &dm, &dn)?;
    let proj = dual_map(&seq.incl, &dl, &dm)?;
    let sequence = ShortExactSequence::new(incl, proj)?;
    let split = sequence.retraction()?.is_some();
    Ok(DualSequence { sequence, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ring_zmod, Side};

    fn cyc(n: usize, ideal: &[usize]) -> FiniteModule {
        FiniteModule::cyclic_quotient(&ring_zmod(n).unwrap(), Side::Left, ideal).unwrap()
    }

    #[test]
    fn two_z4_in_z4_is_not_pure() {
        let z4 = cyc(4, &[]);
        let seq = ShortExactSequence::from_submodule(&z4, &z4.span(&[2])).unwrap();
        let r = is_pure(&seq, 2).unwrap();
        assert!(!r.pure && !r.split && !r.pp_preserving);
        assert!(r.separating_formula.is_some());
        let d = dualize_sequence(&seq, DualityKind::Character).unwrap();
        assert!(!d.split);
    }

    #[test]
    fn split_and_trivial_sequences_are_pure() {
        let (z2, z4) = (cyc(4, &[2]), cyc(4, &[]));
        let seq = ShortExactSequence::split(&z2, &z4).unwrap();
        assert!(is_pure(&seq, 2).unwrap().pure);
        assert!(dualize_sequence(&seq, DualityKind::Character).unwrap().split);
        let zero = ElementSet::from_iter_in(4, [0]);
        let triv = ShortExactSequence::from_submodule(&z4, &zero).unwrap();
        assert!(is_pure(&triv, 2).unwrap().pure);
        let d = dualize_sequence(&triv, DualityKind::Character).unwrap();
        assert!(d.split);
        assert_eq!(d.sequence.n.size(), 1);
    }

    #[test]
    fn exactness_is_enforced() {
        let z4 = cyc(4, &[]);
        let id = ModuleMap::identity(&z4);
        assert!(ShortExactSequence::new(id.clone(), id).is_err());
    }
}
